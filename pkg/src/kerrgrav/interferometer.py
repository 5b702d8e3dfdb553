"""Linearised homodyne model of the Kerr Mach–Zehnder interferometer.

The probe is treated as a classical amplitude plus first-order vacuum
fluctuations. Quadratures are normalised so the vacuum variance is 1: the
output mode carries a 1/2 prefactor on both the signal and vacuum inputs,
which at chi = 0 gives (1 - cos)/2 + (1 + cos)/2 = 1 exactly.

Loss is a beamsplitter of transmission ``eps_b`` before the media, which
only rescales the photon number, and ``eps_a`` after them, which scales the
signal and the Kerr-induced excess noise.
"""

from dataclasses import dataclass
import math

import numpy as np

from .bounds import BoundMethod, BoundResult
from .errors import EstimationError, ValidityError
from .geometry import C_LIGHT, arm_proper_times, coupling_constant, dilation_parameter, linear_phase_phi24

__all__ = [
    "MeasurementPlan",
    "DerivedPhases",
    "OptimalSettings",
    "SqueezedProbe",
    "MonteCarloResult",
    "DEFAULT_VALIDITY_THRESHOLD",
    "validity_metric",
    "derived_phases",
    "mean_quadrature",
    "quadrature_variance",
    "optimal_settings",
    "optimal_plan",
    "noise_penalty_db",
    "mean_derivative_rs",
    "quadrature_bound_rs",
    "sql_bound_rs",
    "squeezed_lossy_bound",
    "monte_carlo_estimate",
]

DEFAULT_VALIDITY_THRESHOLD = 0.01


@dataclass(frozen=True)
class MeasurementPlan:
    theta: float = 0.0
    beta: float = 0.0
    M: int = 1
    eps_a: float = 1.0
    eps_b: float = 1.0

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        for name in ("eps_a", "eps_b"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def with_(self, **changes):
        fields = dict(theta=self.theta, beta=self.beta, M=self.M, eps_a=self.eps_a, eps_b=self.eps_b)
        fields.update(changes)
        return MeasurementPlan(**fields)


@dataclass(frozen=True)
class DerivedPhases:
    """Total mean phases of the two arms (rad) and the linear path phases (m)."""

    zeta1: float
    zeta2: float
    phi1: float
    phi2: float

    @property
    def beta_dark(self):
        return self.zeta2 - self.zeta1


@dataclass(frozen=True)
class OptimalSettings:
    theta: float
    beta: float
    residual: float


@dataclass(frozen=True)
class SqueezedProbe:
    """Coherent plus squeezed-vacuum probe sent through a lossy channel."""

    N_c: float
    N_s: float
    r: float
    eps: float = 1.0

    def __post_init__(self):
        if self.N_c < 0 or self.N_s < 0:
            raise ValueError("photon numbers must be non-negative")
        if self.r < 0:
            raise ValueError(f"squeeze parameter must be non-negative, got {self.r}")
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must lie in [0, 1], got {self.eps}")

    @classmethod
    def split(cls, N, eps=1.0):
        """Half the photons coherent, half squeezed, with sinh(r)^2 = N_s."""
        N_s = 0.5 * N
        return cls(N_c=0.5 * N, N_s=N_s, r=math.asinh(math.sqrt(N_s)), eps=eps)


def validity_metric(probe, geometry):
    """chi * tau * sqrt(N) with tau = L/c; the linearisation needs this << 1."""
    return probe.chi * (geometry.L / C_LIGHT) * math.sqrt(probe.N_a)


def derived_phases(probe, geometry, eps_b=1.0, threshold=DEFAULT_VALIDITY_THRESHOLD):
    """Mean phases zeta_i = k phi_i - tau_i chi N of the two arms.

    The lower-arm path phase is zero by choice of the timing reference.
    Raises :class:`ValidityError` when ``chi tau sqrt(N)`` exceeds
    ``threshold``; pass ``threshold=None`` to skip the check.
    """
    metric = validity_metric(probe, geometry)
    if threshold is not None and metric > threshold:
        raise ValidityError(f"chi*tau*sqrt(N) = {metric:.3g} exceeds {threshold}", metric)
    times = arm_proper_times(geometry)
    k = probe.omega / C_LIGHT
    n_eff = eps_b * probe.N_a
    phi1 = 0.0
    phi2, _ = linear_phase_phi24(geometry)
    return DerivedPhases(
        zeta1=k * phi1 - times.tau1 * probe.chi * n_eff,
        zeta2=k * phi2 - times.tau2 * probe.chi * n_eff,
        phi1=phi1,
        phi2=phi2,
    )


def _angles(plan, phases):
    return plan.theta + phases.zeta2, plan.theta + phases.zeta1 + plan.beta


def mean_quadrature(plan, probe, phases):
    a2, a1 = _angles(plan, phases)
    amplitude = math.sqrt(plan.eps_a * plan.eps_b * probe.N_a)
    return amplitude * (math.cos(a2) - math.cos(a1))


def quadrature_variance(plan, probe, phases, times):
    """Output quadrature variance in shot-noise units."""
    a2, a1 = _angles(plan, phases)
    kerr = probe.chi * plan.eps_b * probe.N_a
    lever = times.tau2 * math.sin(a2) - times.tau1 * math.sin(a1)
    excess = kerr**2 * lever**2 - kerr * lever * (math.cos(a2) - math.cos(a1))
    return plan.eps_a * excess + 1.0


def _arccos_near_one(deficit):
    # arccos(1 - d) without the cancellation of evaluating 1 - d first
    return 2.0 * math.asin(math.sqrt(0.5 * deficit))


def optimal_settings(probe, phases, times):
    """Angle and auxiliary phase that return the variance to shot noise.

    theta* = pi/2 - zeta2 and beta* = zeta2 - zeta1 - pi/2 + arcsin(tau2/tau1).
    ``residual`` is sin(theta + zeta2)/sin(theta + zeta1 + beta) - tau1/tau2.
    """
    ratio = times.tau2 / times.tau1
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"tau2/tau1 = {ratio} outside (0, 1]")
    theta = 0.5 * math.pi - phases.zeta2
    # pi/2 - arcsin(x) = arccos(x)
    beta = phases.zeta2 - phases.zeta1 - _arccos_near_one(times.deficit)
    a2, a1 = theta + phases.zeta2, theta + phases.zeta1 + beta
    residual = math.sin(a2) / math.sin(a1) - times.tau1 / times.tau2
    return OptimalSettings(theta=theta, beta=beta, residual=residual)


def optimal_plan(probe, geometry, M=1, eps_a=1.0, eps_b=1.0, threshold=DEFAULT_VALIDITY_THRESHOLD):
    """MeasurementPlan at the shot-noise-restoring operating point."""
    phases = derived_phases(probe, geometry, eps_b=eps_b, threshold=threshold)
    best = optimal_settings(probe, phases, arm_proper_times(geometry))
    return MeasurementPlan(theta=best.theta, beta=best.beta, M=M, eps_a=eps_a, eps_b=eps_b)


def noise_penalty_db(probe, geometry, beta_offset, eps_a=1.0, eps_b=1.0, threshold=DEFAULT_VALIDITY_THRESHOLD):
    """Excess quadrature noise in dB when beta sits ``beta_offset`` from its optimum."""
    phases = derived_phases(probe, geometry, eps_b=eps_b, threshold=threshold)
    times = arm_proper_times(geometry)
    best = optimal_settings(probe, phases, times)
    plan = MeasurementPlan(theta=best.theta, beta=best.beta + beta_offset, eps_a=eps_a, eps_b=eps_b)
    return 10.0 * math.log10(quadrature_variance(plan, probe, phases, times))


def mean_derivative_rs(probe, geometry, plan):
    """Magnitude of d<X>/dr_s at the optimal operating point.

    Evaluates sqrt(eps_a eps_b N) (omega/n' + eps_b N chi) (delta L/(r_s c))
    (1 + tau2/tau1). The last factor credits both arm terms of the mean
    with the full slope; a finite difference of :func:`mean_quadrature`
    at fixed settings recovers only the upper-arm term, i.e. this value
    divided by (1 + tau2/tau1).
    """
    n_eff = plan.eps_b * probe.N_a
    times = arm_proper_times(geometry)
    per_rs = coupling_constant(geometry) * geometry.L / C_LIGHT  # delta L / (r_s c)
    return (
        math.sqrt(plan.eps_a * n_eff)
        * (probe.omega / geometry.n_prime + n_eff * probe.chi)
        * per_rs
        * (1.0 + times.ratio)
    )


# 1/2 on signal and vacuum inputs of the output port: vacuum variance is exactly 1
QUADRATURE_NORMALIZATION = "half_prefactor_unit_vacuum"


def _bound_inputs(probe, geometry, M, **extra):
    return {**probe.as_dict(), **geometry.as_dict(), "M": M, "K_over_2r0": coupling_constant(geometry), **extra}


def quadrature_bound_rs(probe, geometry, plan):
    """Relative error on r_s from homodyne detection at the optimal point."""
    if geometry.r_s == 0:
        raise EstimationError("relative error undefined for r_s = 0")
    n_eff = plan.eps_b * probe.N_a
    info = plan.eps_a * plan.M * n_eff * (probe.omega / geometry.n_prime + n_eff * probe.chi) ** 2
    shape = geometry.L * geometry.h * geometry.r_s * (1.0 - dilation_parameter(geometry))
    if info == 0 or shape == 0:
        raise EstimationError("quadrature signal carries no information on r_s")
    rel = geometry.r_A * geometry.r_B * C_LIGHT / (shape * math.sqrt(info))
    inputs = _bound_inputs(
        probe, geometry, plan.M, eps_a=plan.eps_a, eps_b=plan.eps_b, normalization=QUADRATURE_NORMALIZATION
    )
    return BoundResult(rel, BoundMethod.QUADRATURE, inputs)


def sql_bound_rs(probe, geometry, M):
    """Linear-interferometer (chi = 0) homodyne bound: the SQL line."""
    linear = probe.with_(chi=0.0)
    result = quadrature_bound_rs(linear, geometry, MeasurementPlan(M=M))
    return BoundResult(result.relative_error, BoundMethod.SQL, result.inputs)


def squeezed_lossy_bound(sq, geometry, probe_omega, M):
    """Best linear-interferometer bound with a squeezed coherent probe and loss eps."""
    if geometry.r_s == 0:
        raise EstimationError("relative error undefined for r_s = 0")
    eps = sq.eps
    # exp(-2r) underflows to 0 for huge r, which is the intended limit
    coherent = eps * sq.N_c / (1.0 - eps + eps * math.exp(-2.0 * sq.r)) if sq.N_c else 0.0
    info = M * (coherent + eps * sq.N_s)
    if info == 0 or probe_omega == 0:
        raise EstimationError("squeezed probe carries no information on r_s")
    rel = (geometry.r_A * geometry.r_B * C_LIGHT * geometry.n_prime) / (
        2.0 * geometry.L * geometry.h * geometry.r_s * probe_omega * math.sqrt(info)
    )
    inputs = {
        **geometry.as_dict(),
        "omega": probe_omega,
        "M": M,
        "N_c": sq.N_c,
        "N_s": sq.N_s,
        "r": sq.r,
        "eps": eps,
    }
    return BoundResult(rel, BoundMethod.SQUEEZED_LOSSY, inputs)


@dataclass(frozen=True)
class MonteCarloResult:
    """Spread of simulated r_s estimates, all relative to the true r_s."""

    std: float
    bias: float
    bias_stderr: float
    predicted: float
    trials: int
    seed: int

    @property
    def std_ratio(self):
        return self.std / self.predicted


_MC_BLOCK = 4096


def monte_carlo_estimate(probe, geometry, plan, trials, seed, threshold=DEFAULT_VALIDITY_THRESHOLD):
    """Simulate homodyne runs and invert the linearised mean map for r_s.

    Each trial draws the mean of ``plan.M`` quadrature samples, Gaussian
    with mean :func:`mean_quadrature` at the true r_s and variance
    :func:`quadrature_variance` / M, and maps the offset from the
    operating-point mean back to r_s through the slope
    :func:`mean_derivative_rs`. Trials are generated in fixed blocks from
    ``SeedSequence(seed).spawn``, so results do not depend on how the
    blocks are scheduled.
    """
    if trials < 100:
        raise ValueError(f"need at least 100 trials, got {trials}")
    phases = derived_phases(probe, geometry, eps_b=plan.eps_b, threshold=threshold)
    times = arm_proper_times(geometry)
    mean = mean_quadrature(plan, probe, phases)
    sigma = math.sqrt(quadrature_variance(plan, probe, phases, times) / plan.M)
    slope = mean_derivative_rs(probe, geometry, plan)
    if slope == 0:
        raise EstimationError("mean quadrature does not depend on r_s")

    n_blocks = -(-trials // _MC_BLOCK)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    blocks = []
    for i, child in enumerate(children):
        size = min(_MC_BLOCK, trials - i * _MC_BLOCK)
        rng = np.random.Generator(np.random.Philox(child))
        xbar = mean + sigma * rng.standard_normal(size)
        # the mean decreases with r_s at theta*: d<X>/dr_s = -slope
        blocks.append(-(xbar - mean) / slope)
    offsets = np.concatenate(blocks) / geometry.r_s
    std = float(np.std(offsets, ddof=1))
    return MonteCarloResult(
        std=std,
        bias=float(np.mean(offsets)),
        bias_stderr=std / math.sqrt(trials),
        predicted=quadrature_bound_rs(probe, geometry, plan).relative_error,
        trials=trials,
        seed=seed,
    )
