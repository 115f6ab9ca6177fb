"""
Hyperbolic structure on the layered triangulation by volume maximization.

The volume of an ideal tetrahedron with dihedral angles a, b, c is
Lob(a) + Lob(b) + Lob(c), where Lob(x) = -int_0^x log|2 sin t| dt.  Over
the polytope of angle structures this is strictly concave, and its
maximizer is the complete hyperbolic structure.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import NoInteriorPoint, NonConvergence
from .triangulation import LayeredTriangulation, gluing_equations

TWO_PI = 2 * np.pi


def _clausen_coefficients(terms=40):
    # Cl2(x) = x - x log|x| + sum_k |B_2k| x^(2k+1) / (2k (2k+1) (2k)!),  |x| < 2 pi
    B = [Fraction(1)]
    for m in range(1, 2 * terms + 1):
        B.append(-sum(comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return np.array([float(abs(B[2 * k]) / (2 * k * (2 * k + 1) * factorial(2 * k)))
                     for k in range(1, terms + 1)])


_CL2 = _clausen_coefficients()


def clausen2(x):
    x = np.asarray(x, dtype=float)
    x = x - TWO_PI * np.round(x / TWO_PI)
    ax = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        lead = np.where(ax > 0, x - x * np.log(np.where(ax > 0, ax, 1.0)), 0.0)
    x2 = x * x
    # Horner in x^2
    acc = np.zeros_like(x)
    for c in _CL2[::-1]:
        acc = acc * x2 + c
    return lead + acc * x2 * x


def lobachevsky(theta):
    """Lob(theta) = Cl2(2 theta) / 2; odd and pi-periodic."""
    out = 0.5 * clausen2(2 * np.asarray(theta, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def regular_ideal_volume() -> float:
    return 3 * lobachevsky(np.pi / 3)


def objective(x):
    return float(np.sum(lobachevsky(x)))


def gradient(x):
    return -np.log(2 * np.sin(x))


def hessian_diag(x):
    return -1 / np.tan(x)


@dataclass(frozen=True)
class AngleStructure:
    angles: np.ndarray          # shape (n, 3)

    @property
    def flat(self):
        return self.angles.reshape(-1)


@dataclass(frozen=True)
class ShapeSolution:
    shapes: np.ndarray          # complex, shape (n,)
    residual: float
    iterations: int
    gradient_norm: float


@dataclass(frozen=True)
class VolumeResult:
    volume: float
    n: int
    bound: float
    bound_satisfied: bool
    equality_gap: float


def shapes_from_angles(angles):
    a, b, c = angles[:, 0], angles[:, 1], angles[:, 2]
    return np.sin(b) / np.sin(c) * np.exp(1j * a)


def shape_triples(z):
    return np.stack([z, 1 / (1 - z), (z - 1) / z], axis=1)


def gluing_residual(t: LayeredTriangulation, z) -> float:
    """max over edge classes of |sum log(shape) - 2 pi i|."""
    logs = np.log(shape_triples(z))
    worst = 0.0
    for i in range(len(t.edge_classes)):
        s = sum(logs[tet, var] for tet, var in t.incidences(i))
        worst = max(worst, abs(s - 2j * np.pi))
    return worst


def _interior_point(C, rhs):
    from scipy.optimize import linprog

    m, N = C.shape
    # maximize s subject to C x = rhs, x_i >= s
    c = np.zeros(N + 1)
    c[-1] = -1
    A_ub = np.hstack([-np.eye(N), np.ones((N, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(N),
                  A_eq=np.hstack([C, np.zeros((m, 1))]), b_eq=rhs,
                  bounds=[(0, np.pi)] * N + [(None, None)], method="highs")
    if res.status != 0 or res.x[-1] <= 1e-9:
        raise NoInteriorPoint("the angle polytope has empty interior")
    return res.x[:N]


def solve_geometric(t: LayeredTriangulation, tol: float = 1e-12, max_iter: int = 200):
    """Maximize total volume over positive angle structures by damped Newton ascent.

    Steps stay in the affine constraint set by working in an orthonormal
    basis of the null space of the gluing matrix, and stay positive by
    capping the step at a fixed fraction of the distance to the boundary.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    C, rhs = gluing_equations(t)
    Cf = C.astype(float)
    U, sv, Vt = np.linalg.svd(Cf)
    rank = int(np.sum(sv > 1e-10 * sv[0]))
    Nb = Vt[rank:].T
    xp = np.linalg.lstsq(Cf, rhs, rcond=None)[0]

    x = xp + Nb @ (Nb.T @ (np.full(C.shape[1], np.pi / 3) - xp))
    if x.min() <= 1e-6:
        x = _interior_point(Cf, rhs)

    f = objective(x)
    for it in range(max_iter):
        g = Nb.T @ gradient(x)
        gnorm = float(np.linalg.norm(g))
        if gnorm < tol:
            break
        H = Nb.T @ (hessian_diag(x)[:, None] * Nb)
        try:
            np.linalg.cholesky(-H)
            d = Nb @ np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            d = Nb @ g
        slope = float(gradient(x) @ d)
        step = 1.0
        neg = d < 0
        if neg.any():
            step = min(1.0, 0.95 * float(np.min(-x[neg] / d[neg])))
        while True:
            xn = x + step * d
            fn = objective(xn)
            # near the optimum the change in f is below rounding, so accept full Newton steps
            if fn >= f + 1e-4 * step * slope or step * np.abs(d).max() < 1e-8:
                break
            step *= 0.5
            if step < 1e-16:
                raise NonConvergence("line search failed")
        x, f = xn, fn
    else:
        raise NonConvergence(f"no convergence after {max_iter} Newton steps (|g| = {gnorm:.3e})")

    # the complex residual is a few times |g|; a couple of full Newton steps
    # take it down to rounding level
    for _ in range(3):
        H = Nb.T @ (hessian_diag(x)[:, None] * Nb)
        xn = x + Nb @ np.linalg.solve(H, -g)
        gn = Nb.T @ gradient(xn)
        if xn.min() <= 0 or np.linalg.norm(gn) >= gnorm:
            break
        x, g, gnorm = xn, gn, float(np.linalg.norm(gn))

    angles = x.reshape(-1, 3)
    z = shapes_from_angles(angles)
    sol = ShapeSolution(z, gluing_residual(t, z), it, gnorm)
    return AngleStructure(angles), sol


def volume(a: AngleStructure, tol: float = 1e-9) -> VolumeResult:
    v = objective(a.flat)
    n = a.angles.shape[0]
    bound = n * regular_ideal_volume()
    return VolumeResult(v, n, bound, v <= bound + tol, bound - v)
