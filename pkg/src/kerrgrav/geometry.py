"""Schwarzschild geometry of a vertically separated two-arm interferometer.

All quantities are SI. The lower arm sits at radius ``r_A`` and the upper
arm at ``r_B = r_A + h``. Proper times are referenced to the lower-arm
clock, for which a horizontal arm of length ``L`` is crossed in ``L/c``.
"""

from dataclasses import dataclass
import math

from scipy.constants import c as C_LIGHT

from .errors import HorizonError

__all__ = [
    "C_LIGHT",
    "EARTH_RADIUS",
    "EARTH_SCHWARZSCHILD_RADIUS",
    "Geometry",
    "ArmTimes",
    "earth_geometry",
    "dilation_parameter",
    "proper_time_ratio",
    "arm_proper_times",
    "linear_phase_phi24",
    "dtau2_drs",
    "coupling_constant",
]

EARTH_RADIUS = 6.37e6
EARTH_SCHWARZSCHILD_RADIUS = 8.87e-3


@dataclass(frozen=True)
class Geometry:
    """Interferometer placement in the Schwarzschild field.

    Parameters
    ----------
    r_s : float
        Schwarzschild radius of the central mass, m.
    r_A : float
        Radius of the lower horizontal arm, m.
    h : float
        Vertical separation of the arms, m.
    L : float
        Horizontal arm length, m.
    n_prime : float
        Linear refractive index of the arm media.
    """

    r_s: float
    r_A: float
    h: float
    L: float
    n_prime: float = 1.0

    def __post_init__(self):
        if self.r_s < 0:
            raise ValueError(f"r_s must be non-negative, got {self.r_s}")
        if self.r_A <= self.r_s:
            raise HorizonError(f"r_A={self.r_A} must lie outside r_s={self.r_s}")
        if self.h < 0:
            raise ValueError(f"h must be non-negative, got {self.h}")
        if self.L <= 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if self.n_prime < 1:
            raise ValueError(f"n_prime must be >= 1, got {self.n_prime}")

    @property
    def r_B(self):
        return self.r_A + self.h

    @property
    def coupling(self):
        """h / (2 r_A r_B), the r_s-independent dilation per unit r_s."""
        return coupling_constant(self)

    def with_(self, **changes):
        fields = dict(r_s=self.r_s, r_A=self.r_A, h=self.h, L=self.L, n_prime=self.n_prime)
        fields.update(changes)
        return Geometry(**fields)

    def as_dict(self):
        return {
            "r_s": self.r_s,
            "r_A": self.r_A,
            "r_B": self.r_B,
            "h": self.h,
            "L": self.L,
            "n_prime": self.n_prime,
        }


@dataclass(frozen=True)
class ArmTimes:
    """Proper interaction times in both arms.

    ``deficit`` is ``1 - tau2/tau1`` evaluated without cancellation, which
    matters at Earth scale where it is ~1e-15.
    """

    tau1: float
    tau2: float
    delta: float
    deficit: float

    @property
    def ratio(self):
        return 1.0 - self.deficit


def earth_geometry(h=10.0, L=0.01, n_prime=1.0, r_s=EARTH_SCHWARZSCHILD_RADIUS):
    """Desk-scale interferometer at the Earth's surface."""
    return Geometry(r_s=r_s, r_A=EARTH_RADIUS, h=h, L=L, n_prime=n_prime)


def coupling_constant(geometry):
    # K / (2 r0) in the single-mass picture; identified with h / (2 r_A r_B)
    return geometry.h / (2.0 * geometry.r_A * geometry.r_B)


def dilation_parameter(geometry):
    """delta = r_s h / (2 r_A r_B)."""
    return geometry.r_s * coupling_constant(geometry)


def _exact_deficit(geometry):
    # tau2/tau1 = sqrt(1 - u), u = r_s h / (r_A (r_B - r_s)); 1 - sqrt(1-u) without cancellation
    r_s, r_A, r_B = geometry.r_s, geometry.r_A, geometry.r_B
    if r_A <= r_s:
        raise HorizonError(f"r_A={r_A} must lie outside r_s={r_s}")
    u = r_s * geometry.h / (r_A * (r_B - r_s))
    return u / (1.0 + math.sqrt(1.0 - u))


def proper_time_ratio(geometry, mode="exact"):
    """Ratio tau2/tau1 of upper- to lower-arm interaction time.

    ``mode="exact"`` evaluates sqrt((1 - r_s/r_A) / (1 - r_s/r_B)); the
    ``"first_order"`` value is ``1 - delta``.
    """
    if mode == "exact":
        return 1.0 - _exact_deficit(geometry)
    if mode == "first_order":
        return 1.0 - dilation_parameter(geometry)
    raise ValueError(f"unknown mode {mode!r}")


def arm_proper_times(geometry, mode="exact"):
    tau1 = geometry.L / C_LIGHT
    if mode == "exact":
        deficit = _exact_deficit(geometry)
    elif mode == "first_order":
        deficit = dilation_parameter(geometry)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return ArmTimes(
        tau1=tau1,
        tau2=(1.0 - deficit) * tau1,
        delta=dilation_parameter(geometry),
        deficit=deficit,
    )


def linear_phase_phi24(geometry):
    """Optical path phase of the upper arm (in metres; multiply by k).

    Returns ``(exact, first_order)``.
    """
    L, n = geometry.L, geometry.n_prime
    # 1 - ratio/n written through the deficit so n' = 1 keeps full precision
    exact = (1.0 - 1.0 / n + _exact_deficit(geometry) / n) * L
    first_order = (1.0 - 1.0 / n + dilation_parameter(geometry) / n) * L
    return exact, first_order


def dtau2_drs(geometry):
    """d tau2 / d r_s in s/m; tau1 does not depend on r_s."""
    return -coupling_constant(geometry) * geometry.L / C_LIGHT
