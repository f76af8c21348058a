"""Distances between a weighted empirical measure and the standard Gaussian.

Kolmogorov and 1-Wasserstein distances are computed exactly (closed-form
Gaussian CDF integrals between support points); the Fortet-Mourier distance
(test class ||phi||_inf + Lip(phi) <= 1) is computed as a linear program over
piecewise-linear test functions on a fixed grid, which is a certified lower
bound of the true supremum and converges as the grid refines.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix
from scipy.special import ndtr, ndtri

from .errors import DomainError

_WEIGHT_TOL = 1e-12


def _gauss_pdf(x):
    return np.exp(-0.5 * np.asarray(x, dtype=float) ** 2) / sqrt(2.0 * np.pi)


def _int_cdf(x):
    """Antiderivative of the Gaussian CDF: int_{-inf}^x Phi = x Phi(x) + pdf(x)."""
    x = np.asarray(x, dtype=float)
    return x * ndtr(x) + _gauss_pdf(x)


@dataclass(frozen=True, eq=False)
class WeightedEmpiricalMeasure:
    """Probability measure with finite support; points sorted strictly increasing."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if p.ndim != 1 or p.shape != w.shape or p.size == 0:
            raise DomainError("points and weights must be equal-length nonempty 1-d arrays")
        if not np.all(np.isfinite(p)):
            raise DomainError("support points must be finite")
        if np.any(np.diff(p) <= 0):
            raise DomainError("support points must be strictly increasing (merge duplicates)")
        if np.any(w < 0):
            raise DomainError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > _WEIGHT_TOL:
            raise DomainError(f"weights must sum to 1 within {_WEIGHT_TOL}, got {w.sum()!r}")
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_samples(cls, values, weights=None) -> "WeightedEmpiricalMeasure":
        """Build from raw samples; duplicates merged, weights default to uniform."""
        values = np.asarray(values, dtype=float)
        if weights is None:
            weights = np.full(values.shape, 1.0 / values.size)
        else:
            weights = np.asarray(weights, dtype=float)
            tot = weights.sum()
            if tot <= 0:
                raise DomainError("total weight must be positive")
            weights = weights / tot
        order = np.argsort(values, kind="stable")
        v, w = values[order], weights[order]
        uniq, inverse = np.unique(v, return_inverse=True)
        merged = np.zeros(uniq.size)
        np.add.at(merged, inverse, w)
        return cls(points=uniq, weights=merged)

    def cdf_steps(self) -> np.ndarray:
        """CDF values just after each support point."""
        return np.cumsum(self.weights)


def kolmogorov(mu: WeightedEmpiricalMeasure) -> float:
    """sup_x |F_mu(x) - Phi(x)|, exact (checked at both one-sided limits)."""
    target = ndtr(mu.points)
    after = mu.cdf_steps()
    before = np.concatenate([[0.0], after[:-1]])
    return float(np.max(np.maximum(np.abs(after - target), np.abs(before - target))))


def wasserstein1(mu: WeightedEmpiricalMeasure) -> float:
    """int |F_mu - Phi|, exact via piecewise Gaussian antiderivatives."""
    x = mu.points
    c = mu.cdf_steps()
    total = _int_cdf(x[0])  # int_{-inf}^{x_1} |0 - Phi|
    # right tail: int_{x_m}^{inf} (1 - Phi) = pdf(x_m) - x_m (1 - Phi(x_m))
    total += _gauss_pdf(x[-1]) - x[-1] * (1.0 - ndtr(x[-1]))
    for k in range(x.size - 1):
        total += _abs_cdf_gap(float(c[k]), float(x[k]), float(x[k + 1]))
    return float(total)


def _abs_cdf_gap(level: float, a: float, b: float) -> float:
    """int_a^b |level - Phi(t)| dt for a constant level in [0, 1]."""
    def signed(lo, hi):  # int (Phi - level)
        return _int_cdf(hi) - _int_cdf(lo) - level * (hi - lo)

    if level <= 0.0:
        return signed(a, b)
    if level >= 1.0:
        return -signed(a, b)
    q = float(ndtri(level))
    if q <= a:
        return signed(a, b)
    if q >= b:
        return -signed(a, b)
    return -signed(a, q) + signed(q, b)


def fortet_mourier(
    mu: WeightedEmpiricalMeasure,
    grid_step: float = 0.005,
    half_width: float = 6.0,
) -> float:
    """sup |int phi d(mu - gamma)| over piecewise-linear phi with ||phi||_inf + Lip <= 1.

    Solved as an LP (HiGHS) in the node values of phi plus its sup/Lip budgets.
    The grid covers [-half_width, half_width] and the support of mu; support
    points that fall between nodes enter the objective by exact interpolation.
    """
    if grid_step <= 0 or half_width <= 0:
        raise DomainError("grid_step and half_width must be positive")
    lo = min(-half_width, float(mu.points.min()) - grid_step)
    hi = max(half_width, float(mu.points.max()) + grid_step)
    m = int(np.ceil((hi - lo) / grid_step))
    nodes = np.linspace(lo, hi, m + 1)
    nn = nodes.size

    # objective: mu mass spread onto adjacent nodes (exact for pw-linear phi)
    cmu = np.zeros(nn)
    seg = np.clip(np.searchsorted(nodes, mu.points, side="right") - 1, 0, nn - 2)
    lam = (mu.points - nodes[seg]) / (nodes[seg + 1] - nodes[seg])
    np.add.at(cmu, seg, mu.weights * (1.0 - lam))
    np.add.at(cmu, seg + 1, mu.weights * lam)

    # gamma integrated exactly against each pw-linear hat, constant tails
    cdf = ndtr(nodes)
    pdf = _gauss_pdf(nodes)
    A = np.diff(cdf)
    B = pdf[:-1] - pdf[1:]  # int t dgamma over each segment
    d = np.diff(nodes)
    g = np.zeros(nn)
    g[:-1] += (nodes[1:] * A - B) / d
    g[1:] += (B - nodes[:-1] * A) / d
    g[0] += cdf[0]
    g[-1] += 1.0 - cdf[-1]

    obj = np.zeros(nn + 2)
    obj[:nn] = -(cmu - g)  # linprog minimizes

    rows, cols, vals = [], [], []
    r = 0
    for sgn in (1.0, -1.0):  # +/- phi_i - s <= 0
        for i in range(nn):
            rows += [r, r]
            cols += [i, nn]
            vals += [sgn, -1.0]
            r += 1
    for sgn in (1.0, -1.0):  # +/- (phi_{i+1} - phi_i) - d_i l <= 0
        for i in range(nn - 1):
            rows += [r, r, r]
            cols += [i + 1, i, nn + 1]
            vals += [sgn, -sgn, -d[i]]
            r += 1
    rows.append(r), cols.append(nn), vals.append(1.0)  # s + l <= 1
    rows.append(r), cols.append(nn + 1), vals.append(1.0)
    r += 1
    a_ub = coo_matrix((vals, (rows, cols)), shape=(r, nn + 2)).tocsr()
    b_ub = np.zeros(r)
    b_ub[-1] = 1.0
    bounds = [(-1.0, 1.0)] * nn + [(0.0, 1.0), (0.0, 1.0)]
    res = linprog(obj, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"Fortet-Mourier LP failed: {res.message}")
    return float(max(0.0, -res.fun))
