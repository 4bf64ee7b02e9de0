"""Brute-force ground truth for quadric systems on the unit sphere.

Seeds Newton's method from a dense hyperspherical grid and keeps every
converged point.  Shares no machinery with the elimination pipeline, so
agreement between the two is meaningful evidence of correctness.  The
oracle is probabilistic (a fine enough grid finds every basin in practice)
while the elimination side carries the completeness argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dixon import QuadricSystem
from .polyring import MultiPoly, as_quadratic_form, _rank
from .spm import Quaternion


@dataclass(frozen=True)
class OracleConfig:
    grid_resolution: int = 24
    newton_iters: int = 50
    residual_tol: float = 1e-12
    dedup_tol: float = 1e-8

    def __post_init__(self):
        if self.grid_resolution < 8:
            raise ValueError("grid resolution below 8 misses basins")
        if min(self.residual_tol, self.dedup_tol) <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class ResidualReport:
    """Residuals of the four quadrics at a point."""

    residuals: tuple
    exact: bool

    @property
    def max_residual(self) -> float:
        return max(abs(float(r)) for r in self.residuals)

    def is_solution(self, tol: float = 1e-9) -> bool:
        return self.max_residual <= tol


def _system_vars(sys: QuadricSystem) -> list[str]:
    names = set(sys.eliminated)
    if sys.retained is not None:
        names.add(sys.retained)
    return sorted(names, key=_rank)


def _forms(sys: QuadricSystem, names):
    Ms, bs, cs = [], [], []
    for f in sys.bound_polys():
        M, b, c = as_quadratic_form(f, list(names))
        Ms.append(M)
        bs.append(b)
        cs.append(c)
    return (np.array(Ms, dtype=float), np.array(bs, dtype=float),
            np.array(cs, dtype=float))


def _sphere_grid(n: int) -> np.ndarray:
    """Hyperspherical-angle grid over the unit 3-sphere, n points per angle."""
    chi1 = (np.arange(n) + 0.5) * math.pi / n
    chi2 = (np.arange(n) + 0.5) * math.pi / n
    chi3 = np.arange(n) * 2.0 * math.pi / n
    c1, c2, c3 = np.meshgrid(chi1, chi2, chi3, indexing="ij")
    c1, c2, c3 = c1.ravel(), c2.ravel(), c3.ravel()
    s1, s2 = np.sin(c1), np.sin(c2)
    return np.column_stack([
        np.cos(c1),
        s1 * np.cos(c2),
        s1 * s2 * np.cos(c3),
        s1 * s2 * np.sin(c3),
    ])


def _batch_newton(Ms, bs, cs, X, iters: int) -> np.ndarray:
    """Damped Newton on all seeds at once; halves steps that increase the
    residual norm.  Seeds whose step has stalled drop out of the batch."""
    rng = np.random.default_rng(0)
    X = X.copy()
    active = np.arange(len(X))
    for _ in range(iters):
        if len(active) == 0:
            break
        Xa = X[active]
        F = np.einsum("na,iab,nb->ni", Xa, Ms, Xa) + Xa @ bs.T + cs
        norm0 = np.abs(F).max(axis=1)
        J = 2.0 * np.einsum("iab,nb->nia", Ms, Xa) + bs[None, :, :]
        bad = np.abs(np.linalg.det(J)) < 1e-14
        if bad.any():
            # nudge seeds sitting on singular Jacobians off the bad locus
            Xa[bad] += 1e-6 * rng.standard_normal((bad.sum(), 4))
            J[bad] = 2.0 * np.einsum("iab,nb->nia", Ms, Xa[bad]) + bs[None, :, :]
            F[bad] = (np.einsum("na,iab,nb->ni", Xa[bad], Ms, Xa[bad])
                      + Xa[bad] @ bs.T + cs)
        dX = np.linalg.solve(J, -F[..., None])[..., 0]
        Xn = Xa + dX
        Fn = np.einsum("na,iab,nb->ni", Xn, Ms, Xn) + Xn @ bs.T + cs
        for _ in range(5):
            worse = np.abs(Fn).max(axis=1) > norm0
            if not worse.any():
                break
            dX[worse] *= 0.5
            Xn[worse] = Xa[worse] + dX[worse]
            Fn[worse] = (np.einsum("na,iab,nb->ni", Xn[worse], Ms, Xn[worse])
                         + Xn[worse] @ bs.T + cs)
        X[active] = Xn
        steps = np.abs(dX).max(axis=1)
        moving = (steps > 1e-15) & (np.abs(Xn).max(axis=1) < 1e8)
        active = active[moving]
    return X


def oracle_solve(sys: QuadricSystem,
                 cfg: OracleConfig | None = None) -> list[Quaternion]:
    """All real solutions found by grid-seeded Newton, extraneous included."""
    cfg = cfg or OracleConfig()
    names = _system_vars(sys)
    if len(names) != 4:
        raise ValueError("oracle needs a system in four unknowns")
    Ms, bs, cs = _forms(sys, names)
    X = _sphere_grid(cfg.grid_resolution)
    X = _batch_newton(Ms, bs, cs, X, cfg.newton_iters)
    F = np.einsum("na,iab,nb->ni", X, Ms, X) + X @ bs.T + cs
    ok = np.abs(F).max(axis=1) <= cfg.residual_tol
    points = X[ok]
    residual = np.abs(F[ok]).max(axis=1)
    # coarse bucketing, then exact pairwise merge inside the survivors
    order = np.argsort(residual)
    kept: list[np.ndarray] = []
    for idx in order:
        p = points[idx]
        if not any(np.max(np.abs(p - kq)) < cfg.dedup_tol for kq in kept):
            kept.append(p)
    kept.sort(key=lambda p: tuple(p))
    return [Quaternion(*(float(v) for v in p)) for p in kept]


def verify_point(sys: QuadricSystem, q: Quaternion) -> ResidualReport:
    """Residuals of the four quadrics at q; exact when coordinates are exact."""
    names = _system_vars(sys)
    coords = q.as_tuple()
    exact = all(isinstance(v, (int, Fraction)) for v in coords)
    if exact:
        assignment = {n: Fraction(v) for n, v in zip(names, coords)}
        residuals = tuple(f.evaluate(assignment) for f in sys.bound_polys())
    else:
        assignment = {n: float(v) for n, v in zip(names, coords)}
        residuals = tuple(float(f.evaluate(assignment))
                          for f in sys.bound_polys())
    return ResidualReport(residuals=residuals, exact=exact)
