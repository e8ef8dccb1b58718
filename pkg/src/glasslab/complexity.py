"""Critical-point complexity of the spherical multi-spin landscape.

Closed-form growth rates for the expected number of critical points of the
random landscape, the energy thresholds they define (energy barrier, ground
state, per-index layer levels), and the subexponential prefactors of the
mean-count asymptotics.  Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidOrderError, NumericalError

__all__ = [
    "energy_barrier",
    "rate_function",
    "complexity",
    "complexity_fixed_index",
    "ground_state",
    "layer_threshold",
    "thresholds",
    "semicircle_edge_integral",
    "airy_ai_zero",
    "CountEstimate",
    "mean_critical_count",
    "mean_minima_count",
    "ComplexityCurve",
    "complexity_curve",
    "Thresholds",
]

# Linear count values are only reported when exp() cannot overflow.
_LOG_LINEAR_CAP = 700.0

_BOUNDARY_TOL = 1e-12


def _check_order(h: int, minimum: int = 2) -> None:
    if int(h) != h or h < minimum:
        raise InvalidOrderError(
            f"interaction order must be an integer >= {minimum}, got {h!r}"
        )


def energy_barrier(h: int) -> float:
    """Scaled energy level separating low-index from high-index critical points.

    Equals 2*sqrt((h-1)/h).  Above (minus) this level essentially all critical
    points are saddles whose index grows with dimension; the interesting
    low-index structure lives below it.
    """
    _check_order(h)
    return 2.0 * math.sqrt((h - 1.0) / h)


def rate_function(u: float, h: int) -> float:
    """Exponential penalty I(u) for pushing critical values below the barrier.

    Defined for u <= -energy_barrier(h); zero at the barrier and strictly
    increasing as u decreases.  Closed form:

        I(u) = -u/E^2 * sqrt(u^2 - E^2) - log(-u + sqrt(u^2 - E^2)) + log E

    with E the energy barrier.  Differentiating gives
    I'(u) = -(2/E^2) sqrt(u^2 - E^2), so I also equals
    (2/E^2) * integral_u^{-E} sqrt(t^2 - E^2) dt, which is what the tests
    check by quadrature.
    """
    _check_order(h)
    e_inf = energy_barrier(h)
    if u > -e_inf + _BOUNDARY_TOL:
        raise DomainError(
            f"rate function needs u <= -{e_inf:.6f} (barrier for h={h}), got u={u}"
        )
    # Radicand can go epsilon-negative right at the barrier.
    s = math.sqrt(max(u * u - e_inf * e_inf, 0.0))
    return -u / (e_inf * e_inf) * s - math.log(-u + s) + math.log(e_inf)


def complexity(u: float, h: int) -> float:
    """Exponential growth rate of the mean number of critical values below u.

    Continuous, non-decreasing, constant for u >= 0.  Three regimes:
    below the (negated) barrier the rate function is subtracted, between the
    barrier and zero only the quadratic term acts, above zero the function
    is flat at log(h-1)/2.
    """
    _check_order(h)
    e_inf = energy_barrier(h)
    base = 0.5 * math.log(h - 1.0)
    if u >= 0.0:
        return base
    quad = (h - 2.0) * u * u / (4.0 * (h - 1.0))
    if u <= -e_inf:
        return base - quad - rate_function(u, h)
    return base - quad


def complexity_fixed_index(u: float, k: int, h: int) -> float:
    """Growth rate of the mean number of critical values of index <= k below u.

    For u below the negated barrier the rate-function penalty is paid (k+1)
    times; past the barrier the function is flat at its barrier value
    log(h-1)/2 - (h-2)/h, which keeps it continuous.
    """
    _check_order(h)
    if int(k) != k or k < 0:
        raise InvalidOrderError(f"index bound k must be a non-negative integer, got {k!r}")
    e_inf = energy_barrier(h)
    base = 0.5 * math.log(h - 1.0)
    if u <= -e_inf:
        quad = (h - 2.0) * u * u / (4.0 * (h - 1.0))
        return base - quad - (k + 1.0) * rate_function(u, h)
    return base - (h - 2.0) / h


def _bisect(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NumericalError(f"root not bracketed on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def layer_threshold(h: int, k: int) -> float:
    """Level e_k below which critical values of index >= k become improbable.

    Root of the index-k complexity along the negative axis: the unique
    x > energy_barrier(h) with complexity_fixed_index(-x, k, h) = 0, found by
    bisection to 1e-10.  The sequence is strictly decreasing in k and
    converges to the barrier.  Needs h >= 3: at h = 2 the quadratic term
    vanishes and the root degenerates onto the barrier itself.
    """
    _check_order(h, minimum=3)
    if int(k) != k or k < 0:
        raise InvalidOrderError(f"index bound k must be a non-negative integer, got {k!r}")
    e_inf = energy_barrier(h)

    def f(x: float) -> float:
        return complexity_fixed_index(-x, k, h)

    hi = e_inf + 0.05
    while f(hi) > 0.0:
        hi += 0.05
        if hi > 10.0:
            raise NumericalError(
                f"complexity zero not bracketed in ({e_inf}, 10] for h={h}, k={k}"
            )
    return _bisect(f, e_inf, hi)


def ground_state(h: int) -> float:
    """Scaled ground-state level e_0: where the minima complexity vanishes.

    Below -e_0 * dimension, even local minima become exponentially rare, so
    this is the scale of the global minimum.
    """
    return layer_threshold(h, 0)


@dataclass(frozen=True)
class Thresholds:
    """Energy thresholds for one interaction order.

    ``e_k[i]`` is the layer level for index i+1; ``e_0 > e_k[0] > ... >
    e_infinity`` strictly.
    """

    h: int
    e_infinity: float
    e_0: float
    e_k: tuple[float, ...]


def thresholds(h: int, k_max: int = 5) -> Thresholds:
    """Compute the barrier, ground state, and layer levels 1..k_max."""
    return Thresholds(
        h=h,
        e_infinity=energy_barrier(h),
        e_0=ground_state(h),
        e_k=tuple(layer_threshold(h, k) for k in range(1, k_max + 1)),
    )


def semicircle_edge_integral(v: float) -> float:
    """Integral of sqrt(x^2 - 2) from sqrt(2) up to v, for v >= sqrt(2).

    Evaluated through the antiderivative x*sqrt(x^2-2)/2 - log(x + sqrt(x^2-2));
    the quadrature cross-check lives in the tests.
    """
    r2 = math.sqrt(2.0)
    if v < r2 - _BOUNDARY_TOL:
        raise DomainError(f"integral lower limit is sqrt(2); got v={v}")
    s = math.sqrt(max(v * v - 2.0, 0.0))
    return v * s / 2.0 - math.log(v + s) + math.log(r2)


def airy_ai_zero() -> float:
    """Value of the Airy function Ai at the origin, 3**(-2/3)/Gamma(2/3)."""
    return 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)


@dataclass(frozen=True)
class CountEstimate:
    """Leading-order mean count on a log scale; linear value when it fits."""

    log_value: float
    value: float | None

    @staticmethod
    def from_log(log_value: float) -> "CountEstimate":
        linear = math.exp(log_value) if abs(log_value) < _LOG_LINEAR_CAP else None
        return CountEstimate(log_value=log_value, value=linear)


def _edge_scaled_speed(u: float, h: int) -> float:
    """Map a scaled energy u to the spectral-edge variable v."""
    return -u * math.sqrt(h / (2.0 * (h - 1.0)))


def _below_barrier_log_prefactor(v: float, h: int) -> float:
    """Log of the subexponential prefactor shared by the count formulas."""
    s = math.sqrt(max(v * v - 2.0, 0.0))  # d/dv of the edge integral
    r2 = math.sqrt(2.0)
    hv = abs((v - r2) / (v + r2)) ** 0.25 + abs((v + r2) / (v - r2)) ** 0.25
    phi_prime = -((h - 2.0) / h) * v
    return (
        math.log(hv)
        - 0.5 * math.log(2.0 * h * math.pi)
        + semicircle_edge_integral(v)
        - 0.5 * v * s
        - math.log(-phi_prime + s)
    )


def mean_critical_count(u: float, lam: int, h: int) -> CountEstimate:
    """Leading-order mean number of critical values below level lam*u.

    Four regimes: strictly below the negated barrier, exactly at it (Airy
    prefactor), between the barrier and zero, and above zero.  u = 0 itself is
    outside the stated asymptotics and is rejected.  Only the log of the count
    is always representable; the linear value is attached when |log| < 700.
    """
    _check_order(h, minimum=3)
    if lam < 1:
        raise ValueError(f"dimension must be >= 1, got {lam}")
    e_inf = energy_barrier(h)
    if abs(u + e_inf) <= _BOUNDARY_TOL:
        log_pref = (
            math.log(2.0 * airy_ai_zero() * math.sqrt(2.0 * h) / (3.0 * (h - 2.0)))
        )
        log_val = log_pref - math.log(lam) / 3.0 + lam * complexity(u, h)
        return CountEstimate.from_log(log_val)
    if u < -e_inf:
        v = _edge_scaled_speed(u, h)
        log_val = (
            _below_barrier_log_prefactor(v, h)
            - 0.5 * math.log(lam)
            + lam * complexity(u, h)
        )
        return CountEstimate.from_log(log_val)
    if u < 0.0:
        pref = 2.0 * math.sqrt(2.0 * h * (e_inf * e_inf - u * u)) / ((2.0 - h) * math.pi * u)
        log_val = math.log(pref) + lam * complexity(u, h)
        return CountEstimate.from_log(log_val)
    if u == 0.0:
        raise DomainError("mean count asymptotics are stated for u < 0 or u > 0, not u = 0")
    pref = 4.0 * math.sqrt(2.0) / math.sqrt(math.pi * (h - 2.0))
    log_val = math.log(pref) + 0.5 * math.log(lam) + lam * complexity(0.0, h)
    return CountEstimate.from_log(log_val)


def mean_minima_count(u: float, lam: int, h: int) -> CountEstimate:
    """Leading-order mean number of local minima below level lam*u.

    Only defined strictly below the negated barrier, where minima dominate:
    at leading order the formula coincides with the all-critical-points count.
    """
    _check_order(h, minimum=3)
    if lam < 1:
        raise ValueError(f"dimension must be >= 1, got {lam}")
    e_inf = energy_barrier(h)
    if u >= -e_inf:
        raise DomainError(
            f"minima count needs u < -{e_inf:.6f} (barrier for h={h}), got u={u}"
        )
    v = _edge_scaled_speed(u, h)
    log_val = (
        _below_barrier_log_prefactor(v, h)
        - 0.5 * math.log(lam)
        + lam * complexity(u, h)
    )
    return CountEstimate.from_log(log_val)


@dataclass(frozen=True)
class ComplexityCurve:
    """Tabulated complexity functions on a strictly increasing energy grid."""

    h: int
    u: np.ndarray
    theta: np.ndarray
    theta_k: np.ndarray  # shape (k_max + 1, len(u)), row k is index-k curve

    def __post_init__(self):
        if not np.all(np.diff(self.u) > 0):
            raise ValueError("energy grid must be strictly increasing")
        if np.any(np.diff(self.theta) < -1e-12):
            raise ValueError("total complexity must be non-decreasing on the grid")


def complexity_curve(
    h: int, k_max: int, u_min: float, u_max: float, points: int
) -> ComplexityCurve:
    """Evaluate the complexity functions on a uniform grid."""
    if points < 2:
        raise ValueError("need at least two grid points")
    if not u_min < u_max:
        raise ValueError("u_min must be less than u_max")
    u = np.linspace(u_min, u_max, points)
    theta = np.array([complexity(x, h) for x in u])
    theta_k = np.array(
        [[complexity_fixed_index(x, k, h) for x in u] for k in range(k_max + 1)]
    )
    return ComplexityCurve(h=h, u=u, theta=theta, theta_k=theta_k)
