"""Command-line front end: `darkstate <command> [flags]`."""
