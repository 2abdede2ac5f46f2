"""
Dark-state restoration by non-Hermiticity.

Modules:
- numkit        : dense non-Hermitian linear algebra
- lambda_system : the three-level Lambda system and its compensation field
- ladder        : the non-Hermitian two-leg ladder (flat bands, edge states, scans)
- manybody      : bosonic exact diagonalization and the flat-band CDW
- cli           : command-line front end
"""

__version__ = "0.1.0"
