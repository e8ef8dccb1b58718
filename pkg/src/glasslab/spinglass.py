"""Random multi-spin landscape on the sphere of radius sqrt(dimension).

The landscape is a degree-`order` polynomial with one independent standard
normal coupling per ordered index tuple,

    L(w) = lam**(-(order-1)/2) * sum_tuples X[t] * w[t_1] * ... * w[t_order],

restricted to (1/lam) * sum w_i^2 = 1.  Couplings are generated chunk-wise
from a counter-based generator keyed by (seed, chunk), so a value is a pure
function of (seed, flat index): dense storage and on-demand (virtual)
regeneration are bit-identical, and contractions dispatch on whether the
full tensor fits the memory budget, not on the storage mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import CapacityError, ShapeError

__all__ = [
    "CHUNK",
    "DENSE_BUDGET_ENTRIES",
    "CouplingTensor",
    "sample_couplings",
    "hamiltonian",
    "euclidean_gradient",
    "riemannian_gradient",
    "euclidean_hessian",
    "riemannian_hessian",
    "tangent_hessian",
    "lagrange_multiplier",
    "LandscapePoint",
    "landscape_point",
    "sample_uniform_sphere",
    "retract_to_sphere",
    "on_sphere",
    "CirclePoint",
    "enumerate_critical_points_circle",
]

# Coupling values are generated in fixed blocks of this size; the block grid
# is part of the value definition and must never change.
CHUNK = 1 << 16

# Default dense budget: 2**26 float64 entries = 512 MiB.
DENSE_BUDGET_ENTRIES = 1 << 26

_LETTERS = "abcdefghij"


def _chunk_normals(seed: int, chunk_id: int, count: int) -> np.ndarray:
    key = np.array([seed % (1 << 64), chunk_id], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.standard_normal(count)


@dataclass
class CouplingTensor:
    """Seeded disorder for one landscape instance.

    Immutable after creation; safe to share across workers.  ``mode`` only
    controls whether the flat value array is cached (`dense`) or regenerated
    per access (`virtual`).
    """

    lam: int
    order: int
    seed: int
    mode: str
    budget: int = DENSE_BUDGET_ENTRIES

    def __post_init__(self):
        if self.lam < 2 or self.order < 2:
            raise ValueError(
                f"need lam >= 2 and order >= 2, got lam={self.lam}, order={self.order}"
            )
        if self.mode not in ("dense", "virtual"):
            raise ValueError(f"mode must be 'dense' or 'virtual', got {self.mode!r}")
        self._cache = None
        if self.mode == "dense":
            if self.n_entries > self.budget:
                raise CapacityError(
                    f"dense storage needs lam**order = {self.lam}**{self.order} = "
                    f"{self.n_entries} entries, over the budget of {self.budget}; "
                    f"use virtual mode or raise the budget"
                )
            self._cache = self._generate(0, self.n_entries)

    @property
    def n_entries(self) -> int:
        return self.lam**self.order

    def _generate(self, start: int, stop: int) -> np.ndarray:
        parts = []
        for cid in range(start // CHUNK, (stop - 1) // CHUNK + 1):
            lo = cid * CHUNK
            hi = min(lo + CHUNK, self.n_entries)
            block = _chunk_normals(self.seed, cid, hi - lo)
            parts.append(block[max(start - lo, 0) : hi - lo - max(hi - stop, 0)])
        return parts[0] if len(parts) == 1 else np.concatenate(parts)

    def values(self, start: int, stop: int) -> np.ndarray:
        """Coupling values for flat indices [start, stop), row-major tuple order."""
        if not 0 <= start <= stop <= self.n_entries:
            raise IndexError(f"range [{start}, {stop}) out of bounds")
        if self._cache is not None:
            return self._cache[start:stop]
        return self._generate(start, stop)

    def dense_values(self) -> np.ndarray:
        """The full flat value array; materialized on the fly in virtual mode."""
        if self._cache is not None:
            return self._cache
        if self.n_entries > self.budget:
            raise CapacityError(
                f"materializing {self.n_entries} entries exceeds the budget of {self.budget}"
            )
        return self._generate(0, self.n_entries)

    @property
    def fits_budget(self) -> bool:
        return self.n_entries <= self.budget


def sample_couplings(
    lam: int,
    order: int,
    seed: int,
    mode: str = "dense",
    budget: int = DENSE_BUDGET_ENTRIES,
) -> CouplingTensor:
    """Draw the i.i.d. standard-normal coupling tensor for (lam, order, seed)."""
    return CouplingTensor(lam=lam, order=order, seed=seed, mode=mode, budget=budget)


def _check_config(tensor: CouplingTensor, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (tensor.lam,):
        raise ShapeError(f"expected configuration of shape ({tensor.lam},), got {w.shape}")
    return w


def _prefactor(tensor: CouplingTensor) -> float:
    return float(tensor.lam) ** (-(tensor.order - 1) / 2.0)


def _tuple_digits(idx: np.ndarray, lam: int, order: int) -> list[np.ndarray]:
    return [(idx // lam ** (order - 1 - k)) % lam for k in range(order)]


def _iter_chunks(tensor: CouplingTensor):
    for start in range(0, tensor.n_entries, CHUNK):
        stop = min(start + CHUNK, tensor.n_entries)
        yield start, stop, tensor.values(start, stop)


def hamiltonian(tensor: CouplingTensor, w) -> float:
    """Landscape value at w (w need not lie on the sphere)."""
    w = _check_config(tensor, w)
    if tensor.fits_budget:
        t = tensor.dense_values().reshape((tensor.lam,) * tensor.order)
        for _ in range(tensor.order):
            t = t @ w
        return _prefactor(tensor) * float(t)
    parts = []
    for start, stop, vals in _iter_chunks(tensor):
        digits = _tuple_digits(np.arange(start, stop), tensor.lam, tensor.order)
        prod = w[digits[0]].copy()
        for d in digits[1:]:
            prod *= w[d]
        parts.append(float(vals @ prod))
    return _prefactor(tensor) * math.fsum(parts)


def _contract_all_but_one(t: np.ndarray, w: np.ndarray, keep: int) -> np.ndarray:
    order = t.ndim
    sub = _LETTERS[:order]
    rhs = ",".join(sub[i] for i in range(order) if i != keep)
    return np.einsum(f"{sub},{rhs}->{sub[keep]}", t, *([w] * (order - 1)), optimize=True)


def euclidean_gradient(tensor: CouplingTensor, w) -> np.ndarray:
    """Gradient of the landscape polynomial in the ambient space."""
    w = _check_config(tensor, w)
    lam, order = tensor.lam, tensor.order
    if tensor.fits_budget:
        t = tensor.dense_values().reshape((lam,) * order)
        g = np.zeros(lam)
        for p in range(order):
            g += _contract_all_but_one(t, w, p)
        return _prefactor(tensor) * g
    g = np.zeros(lam)
    for start, stop, vals in _iter_chunks(tensor):
        digits = _tuple_digits(np.arange(start, stop), lam, order)
        factors = [w[d] for d in digits]
        pre = [np.ones(stop - start)]
        for f in factors[:-1]:
            pre.append(pre[-1] * f)
        suf = [np.ones(stop - start)]
        for f in reversed(factors[1:]):
            suf.append(suf[-1] * f)
        suf.reverse()
        for p in range(order):
            g += np.bincount(digits[p], weights=vals * pre[p] * suf[p], minlength=lam)
    return _prefactor(tensor) * g


def lagrange_multiplier(w: np.ndarray, grad: np.ndarray) -> float:
    """Multiplier of the sphere constraint at a (near-)critical point."""
    return float(w @ grad) / w.size


def riemannian_gradient(tensor: CouplingTensor, w) -> np.ndarray:
    """Gradient projected onto the tangent space of the sphere at w."""
    w = _check_config(tensor, w)
    g = euclidean_gradient(tensor, w)
    return g - (float(g @ w) / tensor.lam) * w


def euclidean_hessian(tensor: CouplingTensor, w) -> np.ndarray:
    """Dense ambient Hessian of the landscape polynomial."""
    w = _check_config(tensor, w)
    lam, order = tensor.lam, tensor.order
    if not tensor.fits_budget:
        raise CapacityError(
            f"dense Hessian needs the full tensor of {tensor.n_entries} entries "
            f"(budget {tensor.budget})"
        )
    t = tensor.dense_values().reshape((lam,) * order)
    sub = _LETTERS[:order]
    hess = np.zeros((lam, lam))
    for p in range(order):
        for r in range(order):
            if r == p:
                continue
            keep = [i for i in range(order) if i not in (p, r)]
            lhs = ",".join([sub] + [sub[i] for i in keep])
            m = np.einsum(f"{lhs}->{sub[p]}{sub[r]}", t, *([w] * len(keep)), optimize=True)
            hess += m
    return _prefactor(tensor) * hess


def riemannian_hessian(tensor: CouplingTensor, w) -> np.ndarray:
    """Constrained Hessian P (H - mult*I) P at w; w spans its null direction.

    The radial zero eigenvalue is a constraint artifact; use
    :func:`tangent_hessian` when counting negative directions.
    """
    w = _check_config(tensor, w)
    lam = tensor.lam
    g = euclidean_gradient(tensor, w)
    mult = lagrange_multiplier(w, g)
    he = euclidean_hessian(tensor, w) - mult * np.eye(lam)
    proj = np.eye(lam) - np.outer(w, w) / lam
    hr = proj @ he @ proj
    return 0.5 * (hr + hr.T)


def tangent_hessian(tensor: CouplingTensor, w) -> np.ndarray:
    """Constrained Hessian expressed in an orthonormal tangent basis.

    Shape (lam-1, lam-1); the radial direction is excluded by construction,
    so every eigenvalue is a genuine landscape curvature.
    """
    w = _check_config(tensor, w)
    lam = tensor.lam
    g = euclidean_gradient(tensor, w)
    mult = lagrange_multiplier(w, g)
    he = euclidean_hessian(tensor, w) - mult * np.eye(lam)
    q, _ = np.linalg.qr(w.reshape(-1, 1), mode="complete")
    basis = q[:, 1:]
    ht = basis.T @ he @ basis
    return 0.5 * (ht + ht.T)


@dataclass(frozen=True)
class LandscapePoint:
    """Value and first-order data of the landscape at one configuration."""

    config: np.ndarray
    value: float
    euclidean_gradient: np.ndarray
    lagrange_multiplier: float


def landscape_point(tensor: CouplingTensor, w) -> LandscapePoint:
    w = _check_config(tensor, w)
    g = euclidean_gradient(tensor, w)
    return LandscapePoint(
        config=w,
        value=hamiltonian(tensor, w),
        euclidean_gradient=g,
        lagrange_multiplier=lagrange_multiplier(w, g),
    )


def retract_to_sphere(w: np.ndarray) -> np.ndarray:
    """Metric projection onto the sphere of squared radius len(w)."""
    w = np.asarray(w, dtype=float)
    return math.sqrt(w.size) * w / np.linalg.norm(w)


def on_sphere(w: np.ndarray, tol: float = 1e-8) -> bool:
    w = np.asarray(w, dtype=float)
    return abs(float(w @ w) / w.size - 1.0) <= tol


def sample_uniform_sphere(lam: int, seed: int) -> np.ndarray:
    """Uniform direction scaled to the sphere of squared radius lam."""
    if lam < 2:
        raise ValueError(f"need lam >= 2, got {lam}")
    gen = np.random.default_rng(seed)
    return retract_to_sphere(gen.standard_normal(lam))


@dataclass(frozen=True)
class CirclePoint:
    """One critical point of the landscape restricted to the lam=2 circle."""

    angle: float
    value: float
    index: int  # 0 for a minimum, 1 for a maximum along the circle
    degenerate: bool


def _circle_tables(tensor: CouplingTensor):
    coeffs = tensor.dense_values()
    digits = np.array(list(product((0, 1), repeat=tensor.order)))
    return coeffs, digits


def _circle_eval(thetas: np.ndarray, coeffs, digits, order: int, pref: float):
    """Value and first two angle derivatives of the restricted landscape."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    r = math.sqrt(2.0)
    w = np.stack([r * np.cos(thetas), r * np.sin(thetas)])
    wd = np.stack([-r * np.sin(thetas), r * np.cos(thetas)])
    wdd = -w
    val = np.zeros_like(thetas)
    d1 = np.zeros_like(thetas)
    d2 = np.zeros_like(thetas)
    for c, dig in zip(coeffs, digits):
        factors = [w[d] for d in dig]
        pre = [np.ones_like(thetas)]
        for f in factors[:-1]:
            pre.append(pre[-1] * f)
        suf = [np.ones_like(thetas)]
        for f in reversed(factors[1:]):
            suf.append(suf[-1] * f)
        suf.reverse()
        prod = pre[-1] * factors[-1]
        val += c * prod
        first = np.zeros_like(thetas)
        second = np.zeros_like(thetas)
        for k in range(order):
            first += wd[dig[k]] * pre[k] * suf[k]
            second += wdd[dig[k]] * pre[k] * suf[k]
            for l in range(k + 1, order):
                rest = np.ones_like(thetas)
                for j in range(order):
                    if j != k and j != l:
                        rest = rest * factors[j]
                second += 2.0 * wd[dig[k]] * wd[dig[l]] * rest
        d1 += c * first
        d2 += c * second
    return pref * val, pref * d1, pref * d2


def enumerate_critical_points_circle(
    tensor: CouplingTensor, samples: int = 4096, degeneracy_tol: float = 1e-8
) -> list[CirclePoint]:
    """All critical points of the landscape on the lam=2 sphere (a circle).

    Scans the angle derivative on a dense grid, refines each sign change by
    bisection, and classifies by the second derivative.  Near-degenerate
    roots (|second derivative| below degeneracy_tol times the value scale)
    are flagged, never merged or dropped.
    """
    if tensor.lam != 2:
        raise ShapeError(f"circle enumeration needs lam=2, got lam={tensor.lam}")
    coeffs, digits = _circle_tables(tensor)
    pref = _prefactor(tensor)

    def evaluate(t):
        return _circle_eval(t, coeffs, digits, tensor.order, pref)

    grid = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    _, d1, _ = evaluate(grid)
    scale = max(float(np.max(np.abs(d1))), 1e-30)

    roots = []
    for i in range(samples):
        a = grid[i]
        b = grid[(i + 1) % samples] + (2.0 * math.pi if i + 1 == samples else 0.0)
        fa = d1[i]
        fb = d1[(i + 1) % samples]
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb >= 0.0:
            continue
        lo, hi, flo = a, b, fa
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            fm = float(evaluate(mid)[1])
            if fm == 0.0:
                lo = hi = mid
                break
            if flo * fm < 0.0:
                hi = mid
            else:
                lo, flo = mid, fm
        roots.append(0.5 * (lo + hi) % (2.0 * math.pi))

    points = []
    for theta in sorted(roots):
        v, _, s = evaluate(theta)
        points.append(
            CirclePoint(
                angle=float(theta),
                value=float(v),
                index=0 if float(s) > 0.0 else 1,
                degenerate=abs(float(s)) <= degeneracy_tol * scale,
            )
        )
    return points
