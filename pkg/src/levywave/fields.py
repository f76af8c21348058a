"""Window integrals of the horizon field and their theta-sweep.

F_theta = int_{-theta}^{theta} (u(t0, x) - 1) dx is piecewise linear in theta
(kinks where a window edge crosses a cone edge), so one event sweep over the
2n cone edges yields the exact polyline and with it F on any theta grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import CoverageError, DomainError
from .oracle import MomentOracle
from .solver import PiecewiseField


def theta_grid(theta_max: float, points_per_decade: int = 64, theta_min: float = 1.0) -> np.ndarray:
    """Geometric grid from theta_min with the exact endpoint theta_max appended."""
    if not 0 < theta_min <= theta_max:
        raise DomainError(f"need 0 < theta_min <= theta_max, got {theta_min}, {theta_max}")
    if points_per_decade < 1:
        raise DomainError("points_per_decade must be >= 1")
    n = int(np.floor(points_per_decade * np.log10(theta_max / theta_min) * (1 + 1e-12))) + 1
    grid = theta_min * 10.0 ** (np.arange(n) / points_per_decade)
    grid = grid[grid <= theta_max * (1 + 1e-12)]
    if grid[-1] < theta_max * (1 - 1e-12):
        grid = np.append(grid, theta_max)
    else:
        grid[-1] = theta_max
    return grid


def _coverage(field: PiecewiseField, theta: float) -> None:
    if -theta < field.x_lo or theta > field.x_hi:
        raise CoverageError(
            f"window integral needs [-{theta}, {theta}] inside the valid interval "
            f"[{field.x_lo}, {field.x_hi}]"
        )


def spatial_integral(field: PiecewiseField, theta: float) -> float:
    """F_theta, exactly (prefix sums over cone edges; no quadrature)."""
    if theta < 0:
        raise DomainError("theta must be >= 0")
    _coverage(field, theta)
    a, b = -theta, theta

    def one_sided(edges, cum, cum_we):
        # sum_i w_i * (b - max(edge_i, a))^+ for edges sorted ascending
        ia = np.searchsorted(edges, a, side="left")
        ib = np.searchsorted(edges, b, side="left")
        inner_w = cum[ib] - cum[ia]
        inner_we = cum_we[ib] - cum_we[ia]
        return (b - a) * cum[ia] + b * inner_w - inner_we

    w1 = np.diff(field._cum_start)
    w2 = np.diff(field._cum_end)
    cum_ws = np.concatenate([[0.0], np.cumsum(w1 * field._starts)])
    cum_we = np.concatenate([[0.0], np.cumsum(w2 * field._ends)])
    s1 = one_sided(field._starts, field._cum_start, cum_ws)
    s2 = one_sided(field._ends, field._cum_end, cum_we)
    return float(s1 - s2)


@dataclass(frozen=True, eq=False)
class SpatialIntegralSeries:
    """F_theta on a grid, with the standardized version filled by standardize()."""

    theta: np.ndarray
    f: np.ndarray
    t0: float
    fstd: np.ndarray | None = None


def integral_series(field: PiecewiseField, grid: np.ndarray) -> SpatialIntegralSeries:
    """Exact F_theta for every theta in grid via one event sweep over cone edges.

    Each cone edge v contributes +/- w sign(v) min(|v|, theta); the slope in
    theta changes only at |v|, so the polyline through those knots is exact.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0) or grid[0] < 0:
        raise DomainError("theta grid must be increasing and nonnegative")
    _coverage(field, float(grid[-1]))
    w1 = np.diff(field._cum_start)
    w2 = np.diff(field._cum_end)
    v = np.concatenate([field._starts, field._ends])
    d = np.concatenate([-w1 * np.sign(field._starts), w2 * np.sign(field._ends)])
    c = np.abs(v)
    order = np.argsort(c, kind="stable")
    c = c[order]
    d = d[order]
    # F(0) = 0; slope on (c_k, c_{k+1}) is sum of d over knots beyond c_k
    total = d.sum()
    slope_after = total - np.cumsum(d)
    slope_before = np.concatenate([[total], slope_after[:-1]])
    gaps = np.diff(np.concatenate([[0.0], c]))
    fknots = np.cumsum(slope_before * gaps)
    knots = np.concatenate([[0.0], c])
    fvals = np.concatenate([[0.0], fknots])
    f = np.interp(grid, knots, fvals)
    return SpatialIntegralSeries(theta=grid, f=f, t0=field.t0)


def standardize(series: SpatialIntegralSeries, oracle: MomentOracle) -> SpatialIntegralSeries:
    """Divide by the exact sigma(theta); fails loudly on a horizon mismatch."""
    if abs(oracle.t0 - series.t0) > 1e-12 * max(series.t0, 1.0):
        raise DomainError(f"oracle horizon {oracle.t0} != series horizon {series.t0}")
    sig = oracle.sigma_F(series.theta)
    return replace(series, fstd=series.f / sig)


def ergodic_mean(field: PiecewiseField, theta: float) -> float:
    """(1 / 2 theta) int_{-theta}^{theta} u(t0, x) dx = 1 + F_theta / (2 theta)."""
    if theta <= 0:
        raise DomainError("theta must be > 0")
    return 1.0 + spatial_integral(field, theta) / (2.0 * theta)
