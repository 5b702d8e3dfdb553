"""Closed-form fidelity expansions, QFI and Cramér–Rao bounds on r_s."""

from dataclasses import dataclass, field
from enum import Enum
import cmath
import math
import warnings

from .errors import EstimationError
from .fock import KerrVariant
from .geometry import coupling_constant, dtau2_drs

__all__ = [
    "QfiSource",
    "BoundMethod",
    "QfiResult",
    "BoundResult",
    "fidelity_second_order",
    "overlap_second_order",
    "qfi_kerr",
    "qfi_general_q",
    "cr_bound_tau",
    "cr_bound_rs",
    "cr_bound_rs_general_q",
]


class QfiSource(str, Enum):
    ANALYTIC_KERR = "analytic_kerr"
    ANALYTIC_Q = "analytic_q"
    NUMERIC = "numeric"


class BoundMethod(str, Enum):
    FISHER = "fisher"
    FISHER_Q = "fisher_q"
    QUADRATURE = "quadrature"
    SQL = "sql"
    SQUEEZED_LOSSY = "squeezed_lossy"


@dataclass(frozen=True)
class QfiResult:
    """QFI with respect to interaction time, in 1/s^2."""

    value: float
    source: QfiSource
    asymptotic: bool = False

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"QFI must be non-negative, got {self.value}")


@dataclass(frozen=True)
class BoundResult:
    """Relative error Delta r_s / r_s together with everything it was computed from."""

    relative_error: float
    method: BoundMethod
    inputs: dict = field(default_factory=dict, compare=False)

    def as_dict(self):
        return {"relative_error": self.relative_error, "method": self.method.value, **self.inputs}


def _require_variant(probe, variant):
    if probe.variant is not variant:
        raise ValueError(f"expected a {variant.value} probe, got {probe.variant.value}")


def fidelity_second_order(probe, dtau):
    """Fidelity between Kerr-evolved coherent states a time ``dtau`` apart, to O(dtau^2)."""
    _require_variant(probe, KerrVariant.SHIFTED_QUADRATIC)
    N, chi, w = probe.N_a, probe.chi, probe.omega
    coeff = N * (2.0 * (2.0 + 5.0 * N + 2.0 * N * N) * chi**2 + 4.0 * (1.0 + N) * chi * w + w**2)
    if coeff * dtau**2 > 0.01:
        warnings.warn(
            f"dtau={dtau} is outside the small-step regime (H dtau^2 = {4 * coeff * dtau**2:.3g})",
            RuntimeWarning,
            stacklevel=2,
        )
    return 1.0 - dtau**2 * coeff


def overlap_second_order(probe, dtau):
    """<psi(tau + dtau)|psi(tau)> expanded to second order in the Kerr term.

    The linear phase is kept exactly through the Poisson generating
    function with complex mean ``lam = N exp(-i omega dtau)``.
    """
    _require_variant(probe, KerrVariant.SHIFTED_QUADRATIC)
    N, chi, w = probe.N_a, probe.chi, probe.omega
    lam = N * complex(math.cos(w * dtau), -math.sin(w * dtau))
    first = lam * (2.0 + lam)
    second = lam * (4.0 + 14.0 * lam + 8.0 * lam**2 + lam**3)
    return cmath.exp(lam - N) * (1.0 - 1j * chi * dtau * first - 0.5 * (chi * dtau) ** 2 * second)


def qfi_kerr(probe):
    """4 N ((omega + 2 (N + 1) chi)^2 + 2 N chi^2)."""
    _require_variant(probe, KerrVariant.SHIFTED_QUADRATIC)
    N, chi, w = probe.N_a, probe.chi, probe.omega
    return QfiResult(4.0 * N * ((w + 2.0 * (N + 1.0) * chi) ** 2 + 2.0 * N * chi**2), QfiSource.ANALYTIC_KERR)


def qfi_general_q(probe):
    """Large-amplitude QFI 4 N (q chi N^(q-1) + omega)^2 for an n^q medium."""
    _require_variant(probe, KerrVariant.MONOMIAL)
    N, chi, w, q = probe.N_a, probe.chi, probe.omega, probe.q
    return QfiResult(4.0 * N * (q * chi * N ** (q - 1) + w) ** 2, QfiSource.ANALYTIC_Q, asymptotic=True)


def cr_bound_tau(qfi, M):
    """Standard deviation bound 1/sqrt(M H) on the interaction time."""
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if qfi.value == 0:
        raise EstimationError("zero Fisher information: variance is unbounded")
    return 1.0 / math.sqrt(M * qfi.value)


def _rs_bound(qfi, probe, geometry, M, method):
    if geometry.r_s == 0:
        raise EstimationError("relative error undefined for r_s = 0")
    slope = abs(dtau2_drs(geometry))
    if slope == 0:
        raise EstimationError("arm times do not depend on r_s (h = 0)")
    rel = cr_bound_tau(qfi, M) / (slope * geometry.r_s)
    inputs = {
        **probe.as_dict(),
        **geometry.as_dict(),
        "M": M,
        "qfi_tau": qfi.value,
        "asymptotic": qfi.asymptotic,
        "K_over_2r0": coupling_constant(geometry),
    }
    return BoundResult(rel, method, inputs)


def cr_bound_rs(probe, geometry, M):
    """Quantum Cramér–Rao bound on Delta r_s / r_s for the n(n+1) Kerr probe."""
    return _rs_bound(qfi_kerr(probe), probe, geometry, M, BoundMethod.FISHER)


def cr_bound_rs_general_q(probe, geometry, M):
    """Large-N Cramér–Rao bound on Delta r_s / r_s for an order-q medium."""
    return _rs_bound(qfi_general_q(probe), probe, geometry, M, BoundMethod.FISHER_Q)
