import argparse
import json
import sys
import uuid
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from darkstate.cli.commands import COMMANDS
from darkstate.cli.output import plain
from darkstate.errors import ConfigError, DomainError, NumericalFailure, ResourceLimitError
from darkstate.logging.events import (
    configure_level,
    log_command,
    log_config_error,
    log_numerical_failure,
    log_result,
)
from darkstate.models.config import load_config

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so bad flags map to exit code 1."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


# ------------------------------------------------------------------
# Flags -> config overrides
# ------------------------------------------------------------------

# flag dest -> (section or None, key)
_FLAG_KEYS = {
    "output_dir": (None, "output_dir"),
    "format": (None, "format"),
    "tolerance": (None, "tolerance"),
    "seed": (None, "seed"),
    "omega1": ("lambda", "omega1"),
    "omega2": ("lambda", "omega2"),
    "theta": ("lambda", "theta"),
    "compensate": ("lambda", "compensate"),
    "t_max": ("lambda", "t_max"),
    "n_t": ("lambda", "n_t"),
    "initial": ("lambda", "initial"),
    "t": ("ladder", "t"),
    "gamma": ("ladder", "gamma"),
    "omega_x": ("ladder", "omega_x"),
    "omega_y": ("ladder", "omega_y"),
    "L": ("ladder", "L"),
    "boundary": ("ladder", "boundary"),
    "nk": ("bands", "n_k"),
    "e_window": ("edges", "e_window"),
    "gamma_min": ("scan", "gamma_min"),
    "gamma_max": ("scan", "gamma_max"),
    "gamma_step": ("scan", "gamma_step"),
    "omega_y_min": ("scan", "omega_y_min"),
    "omega_y_max": ("scan", "omega_y_max"),
    "omega_y_step": ("scan", "omega_y_step"),
    "tol_edge": ("scan", "tol_edge"),
    "n_jobs": ("scan", "n_jobs"),
    "u": ("manybody", "u"),
    "n_particles": ("manybody", "n_particles"),
    "cap": ("manybody", "cap"),
    "basis_limit": ("manybody", "basis_limit"),
    "k": ("manybody", "k"),
}

_FIELD_FLAGS = {
    "b_real": ("bx", "by", "bz"),
    "b_imag": ("bix", "biy", "biz"),
}


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    values = vars(args)
    out: Dict[str, Any] = {}

    for dest, (section, key) in _FLAG_KEYS.items():
        value = values.get(dest)
        if value is None:
            continue
        target = out if section is None else out.setdefault(section, {})
        target[key] = value

    for key, dests in _FIELD_FLAGS.items():
        given = [values.get(d) for d in dests]
        if any(v is not None for v in given):
            out.setdefault("lambda", {})[key] = tuple(0.0 if v is None else v for v in given)

    return out


# ------------------------------------------------------------------
# Parser
# ------------------------------------------------------------------

def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--output-dir", dest="output_dir")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--tolerance", type=float)
    parser.add_argument("--seed", type=int)


def _lambda_flags(parser: argparse.ArgumentParser, evolve: bool):
    parser.add_argument("--omega1", type=float)
    parser.add_argument("--omega2", type=float)
    parser.add_argument("--theta", type=float)
    for name in ("bx", "by", "bz"):
        parser.add_argument(f"--{name}", type=float)
    if not evolve:
        return
    for name in ("bix", "biy", "biz"):
        parser.add_argument(f"--{name}", type=float)
    parser.add_argument("--compensate", action=argparse.BooleanOptionalAction, default=None)
    parser.add_argument("--t-max", dest="t_max", type=float)
    parser.add_argument("--n-t", dest="n_t", type=int)
    parser.add_argument("--initial", choices=("dark", "bright", "up", "down", "excited"))


def _ladder_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--t", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--omega-x", dest="omega_x", type=float)
    parser.add_argument("--omega-y", dest="omega_y", type=float)
    parser.add_argument("--L", dest="L", type=int)
    parser.add_argument("--boundary", choices=("open", "periodic"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="darkstate", description="Dark-state restoration by non-Hermiticity")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compensate", help="imaginary field that restores the dark state")
    _common(p)
    _lambda_flags(p, evolve=False)

    p = sub.add_parser("lambda-evolve", help="Bloch trajectory of the Lambda system")
    _common(p)
    _lambda_flags(p, evolve=True)

    p = sub.add_parser("spectrum", help="full ladder spectrum")
    _common(p)
    _ladder_flags(p)

    p = sub.add_parser("bands", help="Bloch bands of the periodic ladder")
    _common(p)
    _ladder_flags(p)
    p.add_argument("--nk", type=int)

    p = sub.add_parser("edges", help="edge states of the open ladder")
    _common(p)
    _ladder_flags(p)
    p.add_argument("--e-window", dest="e_window", type=float)

    p = sub.add_parser("scan", help="zero modes over a (gamma, omega_y) grid")
    _common(p)
    _ladder_flags(p)
    for name in ("gamma-min", "gamma-max", "gamma-step", "omega-y-min", "omega-y-max", "omega-y-step", "tol-edge"):
        p.add_argument(f"--{name}", dest=name.replace("-", "_"), type=float)
    p.add_argument("--n-jobs", dest="n_jobs", type=int)

    p = sub.add_parser("manybody", help="interacting bosons and the flat-band CDW")
    _common(p)
    _ladder_flags(p)
    p.add_argument("--u", type=float)
    p.add_argument("--n-particles", dest="n_particles", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--basis-limit", dest="basis_limit", type=int)
    p.add_argument("--k", type=int)

    return parser


# ------------------------------------------------------------------
# Entry point
# ------------------------------------------------------------------

def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    configure_level()

    run_id = uuid.uuid4().hex[:12]

    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config, overrides_from_args(args))
        log_command(run_id, args.command, cfg.record())

        result = COMMANDS[args.command](cfg)
    except (ConfigError, ValidationError, DomainError, ResourceLimitError) as e:
        log_config_error(run_id, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as e:
        log_numerical_failure(run_id, e)
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL

    if result.stdout is not None:
        print(json.dumps(plain(result.stdout), sort_keys=True))
    log_result(run_id, args.command, result.files, result.summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
