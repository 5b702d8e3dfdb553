"""Truncated Fock-space probes under Kerr evolution.

This layer is the brute-force reference for the closed-form results in
:mod:`kerrgrav.bounds`: states are explicit amplitude vectors and the
quantum Fisher information is read off the fidelity between neighbouring
evolution times.
"""

from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError, TruncationError

__all__ = [
    "KerrVariant",
    "Probe",
    "FockState",
    "StepPolicy",
    "coherent_state",
    "default_cutoff",
    "kerr_phases",
    "kerr_evolve",
    "overlap",
    "fidelity",
    "numeric_qfi",
]

DEFAULT_TOL_TRUNC = 1e-12
MAX_ORACLE_PHOTONS = 1e5


class KerrVariant(str, Enum):
    SHIFTED_QUADRATIC = "shifted_quadratic"  # chi * n (n + 1)
    MONOMIAL = "monomial"  # chi * n**q


@dataclass(frozen=True)
class Probe:
    """Single-mode coherent probe and the medium it traverses.

    ``omega`` and ``chi`` are angular rates in rad/s; the photon number is
    always ``|alpha|**2``.
    """

    alpha: complex
    omega: float = 0.0
    chi: float = 0.0
    q: int = 2
    variant: KerrVariant = KerrVariant.SHIFTED_QUADRATIC

    def __post_init__(self):
        object.__setattr__(self, "variant", KerrVariant(self.variant))
        if self.omega < 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")
        if self.chi < 0:
            raise ValueError(f"chi must be non-negative, got {self.chi}")
        if int(self.q) != self.q or self.q < 2:
            raise ValueError(f"q must be an integer >= 2, got {self.q}")

    @classmethod
    def from_photon_number(cls, N, omega=0.0, chi=0.0, q=2, variant=KerrVariant.SHIFTED_QUADRATIC):
        if N < 0:
            raise ValueError(f"photon number must be non-negative, got {N}")
        return cls(alpha=math.sqrt(N), omega=omega, chi=chi, q=q, variant=variant)

    @property
    def N_a(self):
        return abs(self.alpha) ** 2

    def with_(self, **changes):
        fields = dict(alpha=self.alpha, omega=self.omega, chi=self.chi, q=self.q, variant=self.variant)
        if "N" in changes:
            changes["alpha"] = math.sqrt(changes.pop("N"))
        fields.update(changes)
        return Probe(**fields)

    def as_dict(self):
        return {
            "N": self.N_a,
            "omega": self.omega,
            "chi": self.chi,
            "q": self.q,
            "variant": self.variant.value,
        }


@dataclass(frozen=True)
class FockState:
    """Pure state on photon numbers ``0..cutoff``."""

    amplitudes: np.ndarray
    tol_trunc: float = DEFAULT_TOL_TRUNC
    truncation_loss: float = field(default=0.0, compare=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a non-empty 1-D vector")
        object.__setattr__(self, "amplitudes", amps)
        norm = self.norm
        if not (1.0 - self.tol_trunc <= norm <= 1.0 + 1e-12):
            raise TruncationError(
                f"squared norm {norm!r} outside [1 - {self.tol_trunc}, 1 + 1e-12]", norm
            )

    @property
    def cutoff(self):
        return self.amplitudes.size - 1

    @property
    def norm(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def photon_distribution(self):
        return np.abs(self.amplitudes) ** 2

    def mean_photon_number(self):
        p = self.photon_distribution()
        return float(np.dot(np.arange(p.size), p))


def _coherent_amplitudes(alpha, cutoff):
    n = np.arange(cutoff + 1)
    r = abs(alpha)
    if r == 0.0:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[0] = 1.0
        return amps
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def coherent_state(alpha, cutoff, tol_trunc=DEFAULT_TOL_TRUNC):
    """Coherent state |alpha> truncated at ``cutoff`` photons.

    Raises :class:`TruncationError` when the retained norm falls below
    ``1 - tol_trunc``.
    """
    if cutoff < 0 or int(cutoff) != cutoff:
        raise ValueError(f"cutoff must be a non-negative integer, got {cutoff}")
    amps = _coherent_amplitudes(complex(alpha), int(cutoff))
    norm = float(np.sum(np.abs(amps) ** 2))
    if norm < 1.0 - tol_trunc:
        raise TruncationError(
            f"cutoff {cutoff} keeps norm {norm!r} < 1 - {tol_trunc} for |alpha|^2={abs(alpha) ** 2}",
            norm,
        )
    return FockState(amps, tol_trunc=tol_trunc, truncation_loss=max(0.0, 1.0 - norm))


def default_cutoff(N_a, tol_trunc=DEFAULT_TOL_TRUNC):
    """Smallest ``ceil(N_a + c*sqrt(N_a + 1))``, c = 10, 11, ..., meeting ``tol_trunc``."""
    if N_a < 0:
        raise ValueError(f"N_a must be non-negative, got {N_a}")
    if not 0.0 < tol_trunc < 1.0:
        raise ValueError(f"tol_trunc must lie in (0, 1), got {tol_trunc}")
    alpha = math.sqrt(N_a)
    spread = math.sqrt(N_a + 1.0)
    c = 10
    while True:
        cutoff = math.ceil(N_a + c * spread)
        norm = float(np.sum(np.abs(_coherent_amplitudes(alpha, cutoff)) ** 2))
        if norm >= 1.0 - tol_trunc:
            return cutoff
        c += 1


def kerr_phases(probe, n):
    """Phase rate chi*f(n) + n*omega (rad/s) for photon numbers ``n``."""
    n = np.asarray(n, dtype=float)
    if probe.variant is KerrVariant.SHIFTED_QUADRATIC:
        f = n * (n + 1.0)
    else:
        f = n ** probe.q
    return probe.chi * f + probe.omega * n


def kerr_evolve(state, probe, tau):
    """Apply exp(i tau (chi f(n) + omega n)) to a Fock state."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    rates = kerr_phases(probe, np.arange(state.cutoff + 1))
    amps = state.amplitudes * np.exp(1j * tau * rates)
    return FockState(amps, tol_trunc=state.tol_trunc, truncation_loss=state.truncation_loss)


def overlap(a, b):
    """<a|b>, zero-padding the shorter vector."""
    x, y = a.amplitudes, b.amplitudes
    size = max(x.size, y.size)
    if x.size < size:
        x = np.pad(x, (0, size - x.size))
    if y.size < size:
        y = np.pad(y, (0, size - y.size))
    return complex(np.vdot(x, y))


def fidelity(a, b):
    return abs(overlap(a, b)) ** 2


@dataclass(frozen=True)
class StepPolicy:
    """Finite-step schedule for the fidelity-limit QFI.

    The first step is chosen so that the predicted ``H * dtau**2`` equals
    ``target``; estimates at dtau, dtau/2 and dtau/4 give two Richardson
    values whose relative spread must stay under ``rtol``.
    """

    target: float = 1e-4
    floor: float = 1e-8
    rtol: float = 1e-6
    tol_trunc: float = DEFAULT_TOL_TRUNC

    def __post_init__(self):
        if not self.floor <= self.target / 16 < self.target <= 1e-4:
            raise ValueError("need floor <= target/16 and target <= 1e-4")


def _fidelity_qfi(psi, probe, tau, dtau):
    a = kerr_evolve(psi, probe, tau)
    b = kerr_evolve(psi, probe, tau + dtau)
    root_f = abs(overlap(a, b)) / psi.norm
    return 8.0 * (1.0 - root_f) / dtau**2


def numeric_qfi(probe, tau=0.0, step_policy=None):
    """QFI with respect to interaction time from the fidelity limit.

    Evaluates ``8 (1 - sqrt(F(tau, tau + dtau))) / dtau**2`` on an explicit
    truncated Fock state at three step sizes and Richardson-extrapolates
    out the O(dtau**2) error.
    """
    policy = step_policy or StepPolicy()
    N = probe.N_a
    if N > MAX_ORACLE_PHOTONS:
        raise ValueError(f"Fock oracle limited to N <= {MAX_ORACLE_PHOTONS:g}, got {N:g}")
    psi = coherent_state(probe.alpha, default_cutoff(N, policy.tol_trunc), policy.tol_trunc)
    # step size from the spread of the phase rates over the photon distribution
    p = psi.photon_distribution()
    rates = kerr_phases(probe, np.arange(p.size))
    mean_rate = np.dot(p, rates) / p.sum()
    predicted = 4.0 * np.dot(p, (rates - mean_rate) ** 2) / p.sum()
    if predicted == 0.0:
        return 0.0
    dtau = math.sqrt(policy.target / predicted)
    h1, h2, h4 = (_fidelity_qfi(psi, probe, tau, dtau / k) for k in (1.0, 2.0, 4.0))
    coarse = (4.0 * h2 - h1) / 3.0
    fine = (4.0 * h4 - h2) / 3.0
    scale = max(abs(fine), abs(coarse))
    if scale > 0 and abs(fine - coarse) > policy.rtol * scale:
        raise ConvergenceError(
            f"QFI estimates {coarse!r} and {fine!r} disagree beyond rtol={policy.rtol}",
            (coarse, fine),
        )
    return max(fine, 0.0)
