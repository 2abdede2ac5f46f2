import os
import tomllib
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from darkstate.errors import ConfigError
from darkstate.models.params import LadderParams, Vector3

SEED_ENV = "DARKSTATE_SEED"


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class LambdaSection(_Section):
    """
    Lambda-system run: either theta directly or a Rabi pair (omega1, omega2).
    """

    omega1: Optional[float] = Field(default=None, ge=0.0)
    omega2: Optional[float] = Field(default=None, ge=0.0)
    theta: Optional[float] = None
    b_real: Vector3 = (0.0, 1.0, 0.0)
    b_imag: Vector3 = (0.0, 0.0, 0.0)
    compensate: bool = True
    t_max: float = Field(default=20.0, ge=0.0)
    n_t: int = Field(default=201, ge=2)
    initial: Literal["dark", "bright", "up", "down", "excited"] = "dark"

    @model_validator(mode="after")
    def _one_angle_source(self):
        pair = self.omega1 is not None or self.omega2 is not None
        if pair and self.theta is not None:
            raise ValueError("give either theta or omega1/omega2, not both")
        if pair and (self.omega1 is None or self.omega2 is None):
            raise ValueError("omega1 and omega2 must be given together")
        return self


class BandsSection(_Section):
    n_k: int = Field(default=201, ge=2)


class EdgesSection(_Section):
    e_window: Optional[float] = Field(default=None, gt=0.0)


class ScanSection(_Section):
    gamma_min: float = 0.0
    gamma_max: float = 1.0
    gamma_step: float = Field(default=0.01, gt=0.0)
    omega_y_min: float = 1.2
    omega_y_max: float = 1.2
    omega_y_step: float = Field(default=0.1, gt=0.0)
    tol_edge: float = Field(default=1e-4, gt=0.0)
    n_jobs: int = 1

    @model_validator(mode="after")
    def _ordered(self):
        if self.gamma_max < self.gamma_min or self.omega_y_max < self.omega_y_min:
            raise ValueError("scan ranges need min <= max")
        return self


class ManyBodySection(_Section):
    n_particles: Optional[int] = Field(default=None, ge=0)
    u: float = Field(default=0.05, ge=0.0)
    cap: Optional[int] = Field(default=None, ge=0)
    basis_limit: int = Field(default=200_000, ge=1)
    k: int = Field(default=4, ge=1)


def _default_ladder() -> LadderParams:
    return LadderParams(t=1.0, gamma=-0.3, omega_x=0.0, omega_y=0.3, L=40)


class RunConfig(_Section):
    """
    Fully resolved configuration of one CLI run.

    Precedence: defaults < TOML file < command-line flags < DARKSTATE_SEED.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    lambda_: LambdaSection = Field(default_factory=LambdaSection, alias="lambda")
    ladder: LadderParams = Field(default_factory=_default_ladder)
    bands: BandsSection = Field(default_factory=BandsSection)
    edges: EdgesSection = Field(default_factory=EdgesSection)
    scan: ScanSection = Field(default_factory=ScanSection)
    manybody: ManyBodySection = Field(default_factory=ManyBodySection)

    output_dir: Path = Path("darkstate_out")
    format: Literal["csv", "json"] = "csv"
    tolerance: float = Field(default=1e-10, gt=0.0)
    seed: int = 0

    def record(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


# ------------------------------------------------------------------
# Loading
# ------------------------------------------------------------------

def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    out = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def read_config_file(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML in {path}: {e}")


def load_config(
    path: Optional[Path] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """
    Resolve a RunConfig from an optional TOML file and flag overrides.

    The ladder section is merged over the defaults key by key, so a file
    may set only the fields it changes.
    """
    data: Dict[str, Any] = {"ladder": _default_ladder().model_dump()}
    if path is not None:
        data = _merge(data, read_config_file(Path(path)))
    data = _merge(data, overrides or {})

    seed = os.getenv(SEED_ENV)
    if seed is not None:
        try:
            data["seed"] = int(seed)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {seed!r}")

    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(str(e))


def grid(start: float, stop: float, step: float) -> Tuple[float, ...]:
    """Inclusive grid start, start + step, ..., rounded to kill step accumulation."""
    n = int(round((stop - start) / step))
    digits = max(0, -int(f"{step:e}".split("e")[1])) + 6
    return tuple(round(start + i * step, digits) for i in range(n + 1))
