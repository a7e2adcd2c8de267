"""
Moments, shear forces and extreme-fiber stresses derived from a deflection
polynomial, plus extremum search over a rectangle.

Sign convention: deflection and load are positive downward; sagging moments
are positive, so ``Mx = -(Dx w_xx + D1 w_yy)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import minimize

from .model import RigiditySet
from .poly2d import Poly2D, RectDomain, restrict

GRID = 101
NEWTON_ITERS = 50
STEP_TOL = 1e-12


@dataclass(frozen=True)
class ExtremeValue:
    value: float
    location: tuple[float, float]


@dataclass(frozen=True)
class FieldSet:
    Mx: Poly2D
    My: Poly2D
    Mxy: Poly2D
    Qx: Poly2D
    Qy: Poly2D
    sigma_x: Poly2D
    sigma_y: Poly2D
    tau_xy: Poly2D
    rigidities: RigiditySet
    thickness: float
    domain: RectDomain

    def get(self, name: str) -> Poly2D:
        return getattr(self, name)


def derive_fields(solution, rig: RigiditySet, t: float) -> FieldSet:
    """Moment, shear and stress polynomials in plate coordinates."""
    w = solution.omega
    wxx, wyy, wxy = w.diff(2, 0), w.diff(0, 2), w.diff(1, 1)
    Mx = -(wxx * rig.Dx + wyy * rig.D1)
    My = -(wyy * rig.Dy + wxx * rig.D1)
    Mxy = wxy * (-2.0 * rig.Dk)
    Qx = Mx.diff(1, 0) + Mxy.diff(0, 1)
    Qy = My.diff(0, 1) + Mxy.diff(1, 0)
    s = 6.0 / t**2
    return FieldSet(Mx, My, Mxy, Qx, Qy, Mx * s, My * s, Mxy * s, rig, t, solution.domain)


def effective_shear(fs: FieldSet, edge: str) -> Poly2D:
    """Kirchhoff effective shear ``Q_n + dM_nt/ds`` as a polynomial on the plate."""
    if edge in ("left", "right"):
        return fs.Qx + fs.Mxy.diff(0, 1)
    if edge in ("bottom", "top"):
        return fs.Qy + fs.Mxy.diff(1, 0)
    raise ValueError(f"unknown edge {edge!r}")


def effective_shear_Vn(fs: FieldSet, edge: str) -> Poly2D:
    """Effective shear restricted to ``edge`` (a polynomial in the tangential coordinate)."""
    d = fs.domain
    V = effective_shear(fs, edge)
    return {
        "left": lambda: restrict(V, x=d.x0),
        "right": lambda: restrict(V, x=d.x1),
        "bottom": lambda: restrict(V, y=d.y0),
        "top": lambda: restrict(V, y=d.y1),
    }[edge]()


def _grid(domain: RectDomain, n: int = GRID):
    x = np.linspace(domain.x0, domain.x1, n)
    y = np.linspace(domain.y0, domain.y1, n)
    return np.meshgrid(x, y, indexing="ij")


def _grid_best(vals: np.ndarray, X, Y):
    """Largest grid value; ties go to the smallest x, then the smallest y."""
    best = vals.max()
    i, j = np.argwhere(vals == best)[0]  # argwhere is row-major: smallest x index first
    return float(best), float(X[i, j]), float(Y[i, j])


def _newton_refine(f: Poly2D, domain: RectDomain, x: float, y: float, val: float):
    """Projected Newton ascent on the polynomial ``f`` starting from ``(x, y)``."""
    gx, gy = f.diff(1, 0), f.diff(0, 1)
    hxx, hxy, hyy = f.diff(2, 0), f.diff(1, 1), f.diff(0, 2)
    for _ in range(NEWTON_ITERS):
        g = np.array([gx(x, y), gy(x, y)])
        H = np.array([[hxx(x, y), hxy(x, y)], [hxy(x, y), hyy(x, y)]])
        # coordinates pinned at an active bound with the gradient pushing outward stay put
        free = np.ones(2, bool)
        for ax, (lo, hi, c) in enumerate(((domain.x0, domain.x1, x), (domain.y0, domain.y1, y))):
            if (c <= lo and g[ax] < 0) or (c >= hi and g[ax] > 0):
                free[ax] = False
        step = np.zeros(2)
        if free.any():
            Hf = H[np.ix_(free, free)]
            try:
                sf = -np.linalg.solve(Hf, g[free])
            except np.linalg.LinAlgError:
                break
            if g[free] @ sf <= 0:  # not an ascent direction
                break
            step[free] = sf
        accepted = False
        for _ in range(30):
            nx = min(max(x + step[0], domain.x0), domain.x1)
            ny = min(max(y + step[1], domain.y0), domain.y1)
            nv = float(f(nx, ny))
            if nv >= val:
                accepted = True
                break
            step = step / 2
        if not accepted:
            break
        moved = np.hypot(nx - x, ny - y)
        x, y, val = nx, ny, nv
        if moved < STEP_TOL:
            break
    return val, x, y


def extremum(poly: Poly2D, domain: RectDomain,
             mode: Literal["max_abs", "max", "min"] = "max_abs") -> ExtremeValue:
    """Largest (or smallest, or largest magnitude) value of ``poly`` on ``domain``.

    A 101 x 101 grid scan is refined by projected Newton steps on the
    polynomial.  For ``max_abs`` the returned value keeps its sign.
    """
    X, Y = _grid(domain)
    vals = np.asarray(poly(X, Y), dtype=float) * np.ones_like(X)
    if mode == "max":
        sign = 1.0
    elif mode == "min":
        sign = -1.0
    elif mode == "max_abs":
        sign = 1.0 if vals.max() >= -vals.min() else -1.0
    else:
        raise ValueError(f"unknown mode {mode!r}")
    best, x, y = _grid_best(sign * vals, X, Y)
    if poly.max_total_degree > 0:
        best, x, y = _newton_refine(poly * sign, domain, x, y, best)
    return ExtremeValue(sign * best, (x, y))


def principal_stress_max(fs: FieldSet, x, y):
    """Largest principal extreme-fiber stress over both plate faces."""
    sx, sy, txy = fs.sigma_x(x, y), fs.sigma_y(x, y), fs.tau_xy(x, y)
    mean = 0.5 * (sx + sy)
    rad = np.sqrt((0.5 * (sx - sy)) ** 2 + txy**2)
    # the opposite face carries -sigma, whose largest principal value is rad - mean
    return rad + np.abs(mean)


def max_principal_stress(fs: FieldSet, domain: RectDomain | None = None) -> ExtremeValue:
    """Maximum of the largest principal stress, grid scan plus bounded refinement."""
    domain = fs.domain if domain is None else domain
    X, Y = _grid(domain)
    vals = principal_stress_max(fs, X, Y) * np.ones_like(X)
    best, x, y = _grid_best(vals, X, Y)
    if best == 0.0:
        return ExtremeValue(0.0, (x, y))
    sx = domain.x1 - domain.x0
    sy = domain.y1 - domain.y0
    obj = lambda z: -float(principal_stress_max(fs, domain.x0 + z[0] * sx, domain.y0 + z[1] * sy))
    z0 = [(x - domain.x0) / sx, (y - domain.y0) / sy]
    res = minimize(obj, z0, method="L-BFGS-B", bounds=[(0, 1), (0, 1)],
                   options={"maxiter": NEWTON_ITERS, "ftol": 1e-15, "gtol": 1e-12})
    if -res.fun > best:
        best = -float(res.fun)
        x, y = domain.x0 + res.x[0] * sx, domain.y0 + res.x[1] * sy
    return ExtremeValue(best, (float(x), float(y)))
