"""Exact event-driven solvers for the mild wave equation with jump noise.

With finitely many atoms the mild equation closes over the atom values
``u_i = u(s_i, y_i)`` (strict backward light cone, so the recursion is
well-founded even with coincident times), and the field at the horizon is the
piecewise-constant function u(t0, x) = 1 + 1/2 sum_i z_i u_i 1{|x - y_i| < t0 - s_i}.

``solve_naive`` is the quadratic reference; ``solve_fast`` is an
O(n log^2 n) divide-and-conquer over time with a Fenwick tree over the rotated
coordinate, exact up to floating-point summation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import insert_delta_kernel, solve_fast_kernel, solve_naive_kernel
from .errors import CoverageError, DomainError
from .noise import PointConfiguration


@dataclass(frozen=True, eq=False)
class Solution:
    """Solution values at the atoms of one configuration."""

    config: PointConfiguration
    u: np.ndarray

    @property
    def weights(self) -> np.ndarray:
        """Per-atom field weights w_i = z_i u_i / 2."""
        return 0.5 * self.config.z * self.u


def solve_naive(config: PointConfiguration) -> Solution:
    """O(n^2) reference solver; ground truth for the fast path."""
    return Solution(config=config, u=solve_naive_kernel(config.s, config.y, config.z))


def solve_fast(config: PointConfiguration) -> Solution:
    """O(n log^2 n) solver; agrees with solve_naive to summation-order rounding."""
    return Solution(config=config, u=solve_fast_kernel(config.s, config.y, config.z))


def solve(config: PointConfiguration, method: str = "fast") -> Solution:
    if method == "fast":
        return solve_fast(config)
    if method == "naive":
        return solve_naive(config)
    raise DomainError(f"unknown solver method {method!r}")


# ---------------------------------------------------------------------- field


@dataclass(frozen=True, eq=False)
class PiecewiseField:
    """u(t0, .) as an exact piecewise-constant function on its valid interval.

    Valid interval is where the simulation window covers the backward cone;
    queries outside raise CoverageError.
    """

    t0: float
    x_lo: float
    x_hi: float
    _starts: np.ndarray  # sorted cone-left edges
    _cum_start: np.ndarray  # prefix sums of weights in start order (leading 0)
    _ends: np.ndarray  # sorted cone-right edges
    _cum_end: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.size and (x.min() < self.x_lo or x.max() > self.x_hi):
            raise CoverageError(
                f"field only valid on [{self.x_lo}, {self.x_hi}], queried outside"
            )
        s1 = self._cum_start[np.searchsorted(self._starts, x, side="left")]
        s2 = self._cum_end[np.searchsorted(self._ends, x, side="right")]
        out = 1.0 + s1 - s2
        return out if out.ndim else float(out)

    def breakpoints(self) -> np.ndarray:
        """Sorted unique jump locations inside the valid interval."""
        edges = np.unique(np.concatenate([self._starts, self._ends]))
        return edges[(edges > self.x_lo) & (edges < self.x_hi)]

    def pieces(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(x_left, x_right, value) arrays describing the field on its valid interval."""
        bp = self.breakpoints()
        left = np.concatenate([[self.x_lo], bp])
        right = np.concatenate([bp, [self.x_hi]])
        mid = 0.5 * (left + right)
        return left, right, self(mid)


def evaluate_field(solution: Solution) -> PiecewiseField:
    """Build the exact horizon field from a solved configuration."""
    config = solution.config
    t0 = config.window.t0
    x_lo = config.window.x_min + t0
    x_hi = config.window.x_max - t0
    if x_lo > x_hi:
        raise CoverageError("window thinner than 2 t0: the field is exact nowhere")
    r = t0 - config.s
    w = solution.weights
    starts = config.y - r
    ends = config.y + r
    o1 = np.argsort(starts, kind="stable")
    o2 = np.argsort(ends, kind="stable")
    cum1 = np.concatenate([[0.0], np.cumsum(w[o1])])
    cum2 = np.concatenate([[0.0], np.cumsum(w[o2])])
    return PiecewiseField(
        t0=t0, x_lo=float(x_lo), x_hi=float(x_hi),
        _starts=starts[o1], _cum_start=cum1, _ends=ends[o2], _cum_end=cum2,
    )


# ----------------------------------------------------------- add-one cost


@dataclass(frozen=True)
class PointValue:
    """Functional F = u(t0, x)."""

    x: float

    def atom_weights(self, s, y, t0):
        return np.where(np.abs(self.x - y) < t0 - s, 1.0, 0.0)


@dataclass(frozen=True)
class WindowIntegral:
    """Functional F = int_{-theta}^{theta} (u(t0, x) - 1) dx."""

    theta: float

    def atom_weights(self, s, y, t0):
        r = t0 - s
        return np.clip(np.minimum(y + r, self.theta) - np.maximum(y - r, -self.theta), 0.0, None)


def _check_xi(config: PointConfiguration, xi) -> tuple[float, float, float]:
    r, ys, zs = (float(v) for v in xi)
    if r < 0:
        raise DomainError(f"extra atom time {r} is negative")
    if zs == 0.0:
        raise DomainError("extra atom must have nonzero size")
    return r, ys, zs


def add_one_cost(config: PointConfiguration, xi, functional, solution: Solution | None = None) -> float:
    """D_xi F = F(configuration + xi) - F(configuration), exactly.

    Computed in delta form: the perturbation is propagated only through atoms
    in the forward cone of xi, so the result is bitwise 0.0 whenever xi cannot
    influence the functional's evaluation region.  An atom at or after the
    horizon (r >= t0) influences nothing and yields 0.0, not an error.
    """
    r, ys, zs = _check_xi(config, xi)
    if solution is None:
        solution = solve_fast(config)
    s, y, z = config.s, config.y, config.z
    t0 = config.window.t0
    u_xi, delta, k = insert_delta_kernel(s, y, z, solution.u, r, ys, zs)
    w_xi = float(functional.atom_weights(np.asarray([r]), np.asarray([ys]), t0)[0])
    w_suffix = functional.atom_weights(s[k:], y[k:], t0)
    return 0.5 * (zs * u_xi * w_xi + float(np.dot(z[k:] * delta, w_suffix)))


def second_add_one_cost(
    config: PointConfiguration, xi1, xi2, functional, solution: Solution | None = None
) -> float:
    """D^2_{xi1, xi2} F = D_{xi2} F(configuration + xi1) - D_{xi2} F(configuration).

    Requires r1 < r2.  Bitwise 0.0 when xi1 lies outside the backward light
    cone of xi2 (the two insertions then commute term by term).
    """
    r1, y1, z1 = _check_xi(config, xi1)
    r2, y2, z2 = _check_xi(config, xi2)
    if not r1 < r2:
        raise DomainError(f"need r1 < r2, got {r1} >= {r2}")
    if r2 >= config.window.t0:
        return 0.0  # xi2 never enters any cone, so both first differences agree
    if solution is None:
        solution = solve_fast(config)
    base = add_one_cost(config, xi2, functional, solution=solution)

    s, y, z = config.s, config.y, config.z
    u_xi1, delta1, k1 = insert_delta_kernel(s, y, z, solution.u, r1, y1, z1)
    s_aug = np.insert(s, k1, r1)
    y_aug = np.insert(y, k1, y1)
    z_aug = np.insert(z, k1, z1)
    u_aug = np.concatenate([solution.u[:k1], [u_xi1], solution.u[k1:] + delta1])
    win = config.window
    if not win.x_min <= y1 <= win.x_max:  # widen so the augmented configuration validates
        from .noise import SpaceTimeWindow

        win = SpaceTimeWindow(win.t0, min(win.x_min, y1), max(win.x_max, y1))
    cfg_aug = PointConfiguration(
        s=s_aug, y=y_aug, z=z_aug, window=win, stream_key=config.stream_key
    )
    aug = add_one_cost(cfg_aug, xi2, functional, solution=Solution(config=cfg_aug, u=u_aug))
    return aug - base
