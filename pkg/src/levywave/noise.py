"""Finite-activity Levy jump models and Poisson point configurations.

The driving noise is a compensated Poisson random measure on (time, space)
with intensity ``dt dx nu(dz)`` where ``nu`` is a finite measure on R \\ {0}.
Because all models here are centered (``int z nu(dz) = 0``), the compensator
drops out of every mild-solution formula and a noise realisation is just the
finite list of atoms ``(s_i, y_i, z_i)`` inside a space-time window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CoverageError, DomainError, ModelRejectedError
from .streams import P_CONFIG, stream

_CENTER_RTOL = 1e-12


@dataclass(frozen=True)
class LevyModel:
    """A finite-activity jump-size measure nu.

    kind:
      * ``two_point``  -- nu = mass/2 * (delta_{+jump} + delta_{-jump})
      * ``uniform``    -- nu uniform on [-jump, jump] with total mass ``mass``
      * ``atoms``      -- explicit atom list [(z_k, mass_k)]
    alpha is the small-jump regularity index used by the bound quadratures;
    for these compound-Poisson models any alpha in (0, 1] is admissible.
    """

    kind: str
    mass: float
    jump: float = 1.0
    atoms: tuple[tuple[float, float], ...] = ()
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in ("two_point", "uniform", "atoms"):
            raise ModelRejectedError(f"unknown model kind {self.kind!r}")
        if not (np.isfinite(self.mass) and self.mass > 0):
            raise ModelRejectedError(f"total mass must be finite and positive, got {self.mass}")
        if not (0 < self.alpha <= 1):
            raise ModelRejectedError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.kind == "atoms":
            if not self.atoms:
                raise ModelRejectedError("atoms model needs at least one atom")
            tot = 0.0
            for z, lam in self.atoms:
                if z == 0:
                    raise ModelRejectedError("atom at z = 0 is not a jump")
                if not (np.isfinite(z) and np.isfinite(lam) and lam > 0):
                    raise ModelRejectedError(f"bad atom ({z}, {lam})")
                tot += lam
            if not np.isclose(tot, self.mass, rtol=1e-9):
                raise ModelRejectedError(f"atom masses sum to {tot}, declared mass {self.mass}")
        else:
            if not (np.isfinite(self.jump) and self.jump > 0):
                raise ModelRejectedError(f"jump scale must be positive, got {self.jump}")

    @classmethod
    def two_point(cls, mass: float = 5.0, jump: float = 1.0, alpha: float = 1.0) -> "LevyModel":
        return cls(kind="two_point", mass=mass, jump=jump, alpha=alpha)

    @classmethod
    def uniform(cls, mass: float = 5.0, jump: float = 1.0, alpha: float = 1.0) -> "LevyModel":
        return cls(kind="uniform", mass=mass, jump=jump, alpha=alpha)

    @classmethod
    def from_atoms(cls, atoms, alpha: float = 1.0) -> "LevyModel":
        atoms = tuple((float(z), float(lam)) for z, lam in atoms)
        mass = float(sum(lam for _, lam in atoms))
        return cls(kind="atoms", mass=mass, atoms=atoms, alpha=alpha)

    def moment(self, p: float) -> float:
        """m_p = int |z|^p nu(dz), closed form per kind."""
        if p < 0:
            raise DomainError(f"moment order must be >= 0, got {p}")
        if self.kind == "two_point":
            return self.mass * self.jump**p
        if self.kind == "uniform":
            return self.mass * self.jump**p / (p + 1.0)
        return float(sum(lam * abs(z) ** p for z, lam in self.atoms))

    def drift(self) -> float:
        """int z nu(dz); exactly zero for the symmetric parametric kinds."""
        if self.kind in ("two_point", "uniform"):
            return 0.0
        return float(sum(lam * z for z, lam in self.atoms))

    def require_centered(self) -> None:
        d = self.drift()
        if abs(d) > _CENTER_RTOL * max(self.moment(1.0), 1.0):
            raise ModelRejectedError(
                f"model has drift {d}; only centered noise is supported and the "
                "compensator is not modelled"
            )

    def sample_sizes(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw n jump sizes z ~ nu / mass."""
        if self.kind == "two_point":
            return self.jump * np.where(rng.random(n) < 0.5, 1.0, -1.0)
        if self.kind == "uniform":
            z = rng.uniform(-self.jump, self.jump, n)
            while np.any(z == 0.0):  # probability ~2^-53 per draw, but keep the invariant exact
                bad = z == 0.0
                z[bad] = rng.uniform(-self.jump, self.jump, int(bad.sum()))
            return z
        zs = np.array([z for z, _ in self.atoms])
        ps = np.array([lam for _, lam in self.atoms]) / self.mass
        return rng.choice(zs, size=n, p=ps)


@dataclass(frozen=True)
class SpaceTimeWindow:
    """Rectangle [0, t0] x [x_min, x_max] on which atoms are simulated."""

    t0: float
    x_min: float
    x_max: float

    def __post_init__(self):
        if not (np.isfinite(self.t0) and self.t0 > 0):
            raise DomainError(f"t0 must be positive, got {self.t0}")
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max) and self.x_min < self.x_max):
            raise DomainError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")

    @property
    def area(self) -> float:
        return self.t0 * (self.x_max - self.x_min)

    def covers(self, a: float, b: float) -> bool:
        """True if the window contains the full backward light cone of {t0} x [a, b]."""
        return self.x_min <= a - self.t0 and self.x_max >= b + self.t0

    def require_covers(self, a: float, b: float) -> None:
        if not self.covers(a, b):
            raise CoverageError(
                f"window [{self.x_min}, {self.x_max}] does not cover the light cone of "
                f"[{a}, {b}] at t0={self.t0}; need [{a - self.t0}, {b + self.t0}]"
            )

    @classmethod
    def for_interval(cls, t0: float, a: float, b: float, pad: float = 0.0) -> "SpaceTimeWindow":
        """Smallest window whose field is exact on [a, b], plus optional padding."""
        return cls(t0=t0, x_min=a - t0 - pad, x_max=b + t0 + pad)


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    """Atoms of one noise realisation, sorted by time (ties keep draw order)."""

    s: np.ndarray
    y: np.ndarray
    z: np.ndarray
    window: SpaceTimeWindow
    stream_key: tuple[int, int] | None = None

    def __post_init__(self):
        s, y, z = (np.asarray(a, dtype=float) for a in (self.s, self.y, self.z))
        if not (s.shape == y.shape == z.shape and s.ndim == 1):
            raise DomainError("s, y, z must be 1-d arrays of equal length")
        if s.size:
            if np.any(np.diff(s) < 0):
                raise DomainError("atoms must be sorted by time")
            if s[0] < 0 or s[-1] > self.window.t0:
                raise DomainError("atom times outside [0, t0]")
            if y.min() < self.window.x_min or y.max() > self.window.x_max:
                raise DomainError("atom positions outside the window")
            if np.any(z == 0.0):
                raise DomainError("zero-size jumps are not atoms")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return int(self.s.size)


def sample_prm(
    model: LevyModel, window: SpaceTimeWindow, stream_key: tuple[int, int]
) -> PointConfiguration:
    """Sample one Poisson configuration; identical keys give identical atoms.

    stream_key is (seed, rep).  Count ~ Poisson(mass * area), positions uniform
    on the window, sizes ~ nu / mass, then a stable sort by time.
    """
    model.require_centered()
    seed, rep = stream_key
    rng = stream(seed, P_CONFIG, rep)
    n = int(rng.poisson(model.mass * window.area))
    s = rng.uniform(0.0, window.t0, n)
    y = rng.uniform(window.x_min, window.x_max, n)
    z = model.sample_sizes(rng, n)
    order = np.argsort(s, kind="stable")
    return PointConfiguration(
        s=s[order], y=y[order], z=z[order], window=window, stream_key=(int(seed), int(rep))
    )
