import math
from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Vector3 = Tuple[float, float, float]


class RabiPair(BaseModel):
    """
    Real, non-negative couplings of |up> and |down> to the excited level |3>.

    Derived quantities:
    - omega = sqrt(omega1^2 + omega2^2)
    - theta in [0, pi] with cos(theta/2) = omega2/omega, sin(theta/2) = omega1/omega
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega1: float = Field(ge=0.0, allow_inf_nan=False)
    omega2: float = Field(ge=0.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _nonzero(self):
        if self.omega1 == 0.0 and self.omega2 == 0.0:
            raise ValueError("omega1 and omega2 cannot both vanish (no dark state)")
        return self

    # ------------------------------------------------------------------
    # Derived quantities
    # ------------------------------------------------------------------

    @property
    def omega(self) -> float:
        return math.hypot(self.omega1, self.omega2)

    @property
    def theta(self) -> float:
        return 2.0 * math.atan2(self.omega1, self.omega2)

    @classmethod
    def from_theta(cls, theta: float, omega: float = 1.0) -> "RabiPair":
        """
        Couplings realising a given mixing angle theta in [0, pi].
        """
        if not 0.0 <= theta <= math.pi:
            raise ValueError(f"theta={theta} outside [0, pi]")
        return cls(
            omega1=omega * math.sin(theta / 2.0),
            omega2=omega * math.cos(theta / 2.0),
        )


class ComplexField(BaseModel):
    """
    Complex magnetic field B = B_R + i B_I acting on the (up, down) spin.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    b_real: Vector3 = (0.0, 0.0, 0.0)
    b_imag: Vector3 = (0.0, 0.0, 0.0)

    @field_validator("b_real", "b_imag")
    @classmethod
    def _finite(cls, value: Vector3) -> Vector3:
        if not all(math.isfinite(c) for c in value):
            raise ValueError("field components must be finite")
        return value

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.b_real, dtype=float) + 1j * np.asarray(self.b_imag, dtype=float)

    @classmethod
    def from_vector(cls, b: np.ndarray) -> "ComplexField":
        b = np.asarray(b, dtype=complex)
        return cls(
            b_real=tuple(float(x) for x in b.real),
            b_imag=tuple(float(x) for x in b.imag),
        )


class LadderParams(BaseModel):
    """
    Parameters of the non-Hermitian two-leg ladder.

    Rungs are 0-based, n = 0..L-1. The b-basis legs carry the asymmetric
    on-rung hoppings
        t_up   = -i*gamma - i*omega_y   (down -> up)
        t_down = -i*gamma + i*omega_y   (up -> down)
    so t_up * t_down = omega_y^2 - gamma^2.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    t: float = Field(gt=0.0, allow_inf_nan=False)
    gamma: float = Field(default=0.0, allow_inf_nan=False)
    omega_x: float = Field(default=0.0, allow_inf_nan=False)
    omega_y: float = Field(default=0.0, allow_inf_nan=False)
    L: int = Field(ge=4)
    boundary: Literal["open", "periodic"] = "open"

    @model_validator(mode="after")
    def _periodic_parity(self):
        if self.boundary == "periodic" and self.L % 2:
            raise ValueError("periodic ladders need an even number of rungs")
        return self

    # ------------------------------------------------------------------
    # Derived couplings
    # ------------------------------------------------------------------

    @property
    def t_up(self) -> complex:
        # snapped to an exact zero at the flat-band point
        if self.is_flat_band:
            return 0j
        return complex(0.0, -(self.gamma + self.omega_y))

    @property
    def t_down(self) -> complex:
        return complex(0.0, self.omega_y - self.gamma)

    @property
    def rung_product(self) -> float:
        """t_up * t_down, always real."""
        return self.omega_y**2 - self.gamma**2

    @property
    def is_flat_band(self) -> bool:
        """
        True only at gamma = -omega_y, where t_up = 0.

        The mirrored point gamma = +omega_y (t_down = 0) also has flat bands,
        with the upper dimers fed by the lower ones, but the orbital builders
        are written for t_up = 0 and reject it.
        """
        scale = max(1.0, abs(self.gamma), abs(self.omega_y))
        return abs(self.gamma + self.omega_y) <= 1e-14 * scale

    @property
    def dim(self) -> int:
        return 2 * self.L

    def with_updates(self, **changes) -> "LadderParams":
        """Validated copy with some fields replaced."""
        return LadderParams.model_validate({**self.model_dump(), **changes})
