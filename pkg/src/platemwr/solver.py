"""
Galerkin weighted-residual solve of the orthotropic plate equation.

The deflection is sought as ``w = sum c_i phi_i`` over the admissible trial
functions of :mod:`platemwr.basis`.  The strong-form residual
``Dx w_xxxx + 2 H w_xxyy + Dy w_yyyy - P`` is made orthogonal to every
``phi_i``; all inner products are exact polynomial integrals on the
normalized square.

On free edge segments the natural conditions ``M_n = 0`` and ``V_n = 0`` are
also weighted: their boundary residuals enter with weights ``dphi_i/dn`` and
``phi_i``.  Via integration by parts this is the same as dropping the free
part of the boundary integral

    int D(w) phi dA = a(w, phi) + oint [-(Q.n) phi + (M.n).grad(phi)] ds

so problems without free edges see the plain strong form.  By default free
segments get no collocation rows, so this weighting is where their
conditions enter; ``free_edges="collocated"`` pins them pointwise as well.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .basis import OrderTooLow, ShapeBasis, admissible_basis, monomial_derivatives
from .fields import extremum
from .model import LoadPolynomial, PlateProblem, RigiditySet, fit_load, validate_problem
from .poly2d import Poly2D, RectDomain, from_unit, integrate_rect, multiply, to_unit

COND_WARN = 1e12
K_RANK_RTOL = 1e-10


class InvalidProblem(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class IllConditioned(UserWarning):
    pass


@dataclass
class GalerkinSystem:
    """``K c = f`` plus the dense boundary rows used to settle null directions.

    ``boundary`` (``B_check @ A``) maps coefficients to support-condition
    residuals on the check grid.  Directions the Galerkin equations leave
    undetermined (trial functions annihilated by the plate operator that
    still pass every collocated condition) are fixed by least squares on
    those rows rather than by a minimum-norm choice.
    """

    K: np.ndarray
    f: np.ndarray
    boundary: np.ndarray | None = None
    c: np.ndarray | None = None
    condition_estimate: float = float("nan")
    rank: int = 0

    @property
    def nullity(self) -> int:
        return self.K.shape[1] - self.rank

    def solve(self) -> np.ndarray:
        k = self.K.shape[1]
        if not np.any(self.f):
            self.c = np.zeros(k)
            s = np.linalg.svd(self.K, compute_uv=False)
            self.rank = int(np.sum(s > K_RANK_RTOL * s[0])) if s[0] > 0 else 0
            self.condition_estimate = float(s[0] / s[self.rank - 1]) if self.rank else 1.0
            return self.c
        U, s, Vt = np.linalg.svd(self.K)
        rank = int(np.sum(s > K_RANK_RTOL * s[0]))
        c = Vt[:rank].T @ ((U[:, :rank].T @ self.f) / s[:rank])
        null = Vt[rank:].T
        if null.shape[1] and self.boundary is not None and self.boundary.size:
            G = self.boundary
            y, *_ = scipy.linalg.lstsq(G @ null, -(G @ c))
            c = c + null @ y
        self.c = c
        self.rank = rank
        self.condition_estimate = float(s[0] / s[rank - 1])
        return c


@dataclass
class Solution:
    """Deflection polynomial and diagnostics for one polynomial order.

    ``omega`` is in plate coordinates (m); ``omega_unit`` is the same field
    on the normalized square, which is better conditioned for evaluation.
    """

    omega: Poly2D
    omega_unit: Poly2D
    domain: RectDomain
    n_used: int
    r: int
    k: int
    residual_rel: float
    bc_residual_max: float
    condition_estimate: float
    nullity: int = 0
    timings: dict = field(default_factory=dict)
    coefficients: np.ndarray | None = None
    warnings: list = field(default_factory=list)
    converged: bool = True
    trace: list = field(default_factory=list)
    termination: str = ""

    def __call__(self, x, y):
        """Deflection at plate coordinates, evaluated through the normalized form."""
        u, v = to_unit_coords(self.domain, x, y)
        return self.omega_unit(u, v)

    def max_abs(self):
        """``(|w|_max, (x, y))`` over the plate."""
        ev = extremum(self.omega_unit, RectDomain.unit(), "max_abs")
        return abs(ev.value), from_unit_coords(self.domain, *ev.location)


def to_unit_coords(d: RectDomain, x, y):
    (cx, cy), (hx, hy) = d.center, d.half_lengths
    return (np.asarray(x) - cx) / hx, (np.asarray(y) - cy) / hy


def from_unit_coords(d: RectDomain, u, v):
    (cx, cy), (hx, hy) = d.center, d.half_lengths
    return float(cx + hx * u), float(cy + hy * v)


def apply_plate_operator(omega: Poly2D, rig: RigiditySet, half: tuple[float, float] = (1.0, 1.0)) -> Poly2D:
    """``Dx w_xxxx + 2 H w_xxyy + Dy w_yyyy``.

    ``half`` gives the half side lengths when ``omega`` lives on the
    normalized square, so that derivatives are taken in plate coordinates.
    """
    hx, hy = half
    return (omega.diff(4, 0) * (rig.Dx / hx**4)
            + omega.diff(2, 2) * (2.0 * rig.H / (hx**2 * hy**2))
            + omega.diff(0, 4) * (rig.Dy / hy**4))


def _unit_moments(n: int) -> np.ndarray:
    i = np.arange(n + 1)
    return np.where(i % 2 == 0, 2.0 / (i + 1), 0.0)


def operator_gram(basis: ShapeBasis, rig: RigiditySet, half) -> np.ndarray:
    """``G[a, b] = integral of m_a * D(m_b)`` over the normalized square."""
    hx, hy = half
    px, py = basis.monomials.px, basis.monomials.py
    mom = _unit_moments(2 * basis.n + 1)

    def term(coef, dx, dy):
        cb = coef * np.prod([px - j for j in range(dx)], axis=0) * np.prod([py - j for j in range(dy)], axis=0)
        ex = px[:, None] + (px - dx)[None, :]
        ey = py[:, None] + (py - dy)[None, :]
        ok = (ex >= 0) & (ey >= 0)
        g = np.where(ok, mom[np.clip(ex, 0, None)] * mom[np.clip(ey, 0, None)], 0.0)
        return g * cb[None, :]

    return (term(rig.Dx / hx**4, 4, 0)
            + term(2.0 * rig.H / (hx**2 * hy**2), 2, 2)
            + term(rig.Dy / hy**4, 0, 4))


def free_edge_gram(basis: ShapeBasis, rig: RigiditySet, domain: RectDomain, segments) -> np.ndarray:
    """Boundary term ``oint [-(Q.n) m_a + (M.n).grad(m_a)] ds`` of ``m_b`` over ``segments``.

    Gauss-Legendre with ``n + 3`` nodes per segment integrates the
    polynomial integrand exactly.
    """
    mb = basis.monomials
    hx, hy = domain.half_lengths
    T = np.zeros((mb.r, mb.r))
    nodes, weights = np.polynomial.legendre.leggauss(mb.n + 3)
    for seg in segments:
        a, b = 2.0 * seg.s0 - 1.0, 2.0 * seg.s1 - 1.0
        for s, wq in zip(a + 0.5 * (nodes + 1.0) * (b - a), 0.5 * weights * (b - a)):
            u, v = {"left": (-1.0, s), "right": (1.0, s), "bottom": (s, -1.0), "top": (s, 1.0)}[seg.edge]
            d = lambda i, j: monomial_derivatives(mb, u, v, i, j) / (hx**i * hy**j)
            wxx, wyy = d(2, 0), d(0, 2)
            Mx = -(rig.Dx * wxx + rig.D1 * wyy)
            My = -(rig.Dy * wyy + rig.D1 * wxx)
            Mxy = -2.0 * rig.Dk * d(1, 1)
            phi, phx, phy = d(0, 0), d(1, 0), d(0, 1)
            if seg.edge in ("left", "right"):
                sign = 1.0 if seg.edge == "right" else -1.0
                Qx = -(rig.Dx * d(3, 0) + rig.H * d(1, 2))
                T += sign * hy * wq * (-np.outer(phi, Qx) + np.outer(phx, Mx) + np.outer(phy, Mxy))
            else:
                sign = 1.0 if seg.edge == "top" else -1.0
                Qy = -(rig.Dy * d(0, 3) + rig.H * d(2, 1))
                T += sign * hx * wq * (-np.outer(phi, Qy) + np.outer(phx, Mxy) + np.outer(phy, My))
    return T


def load_moments(basis: ShapeBasis, p_unit: Poly2D) -> np.ndarray:
    """``F[a] = integral of m_a * P`` over the normalized square."""
    deg = p_unit.max_total_degree
    mom = _unit_moments(basis.n + deg + 1)
    px, py = basis.monomials.px, basis.monomials.py
    s = np.arange(deg + 1)
    Mx = mom[px[:, None] + s[None, :]]
    My = mom[py[:, None] + s[None, :]]
    return np.einsum("as,st,at->a", Mx, p_unit.array, My)


def patch_moments(basis: ShapeBasis, region: RectDomain) -> np.ndarray:
    """``integral of m_a`` over a sub-rectangle given in normalized coordinates."""
    px, py = basis.monomials.px, basis.monomials.py
    ix = (region.x1 ** (px + 1) - region.x0 ** (px + 1)) / (px + 1)
    iy = (region.y1 ** (py + 1) - region.y0 ** (py + 1)) / (py + 1)
    return ix * iy


def assemble(basis: ShapeBasis, load: LoadPolynomial | Poly2D, rig: RigiditySet,
             domain: RectDomain, patches=(), free_segments=()) -> GalerkinSystem:
    """Galerkin matrix and load vector.

    ``load`` is given in plate coordinates.  ``patches`` is an optional
    sequence of ``(pressure, region)`` pairs integrated exactly instead of
    through the regression polynomial.  ``free_segments`` lists the
    free-edge :class:`~platemwr.model.EdgeSegmentBC` entries whose natural
    conditions are weighted weakly.
    """
    half = domain.half_lengths
    jac = half[0] * half[1]
    p = load.p if isinstance(load, LoadPolynomial) else load
    A = basis.A
    G = jac * operator_gram(basis, rig, half)
    free_segments = [seg for seg in free_segments if seg.kind == "free"]
    if free_segments:
        G = G - free_edge_gram(basis, rig, domain, free_segments)
    K = A.T @ G @ A
    F = load_moments(basis, to_unit(p, domain))
    for pressure, region in patches:
        (cx, cy), (hx, hy) = domain.center, domain.half_lengths
        ureg = RectDomain((region.x0 - cx) / hx, (region.x1 - cx) / hx,
                          (region.y0 - cy) / hy, (region.y1 - cy) / hy)
        F = F + pressure * patch_moments(basis, ureg)
    return GalerkinSystem(K, jac * (A.T @ F), basis.B_check @ A)


def residual_norm(solution: Solution, load: LoadPolynomial | Poly2D, rig: RigiditySet) -> float:
    """Relative L2 norm of ``D(w) - P`` over the plate (exact integration)."""
    p = load.p if isinstance(load, LoadPolynomial) else load
    half = solution.domain.half_lengths
    unit = RectDomain.unit()
    p_u = to_unit(p, solution.domain)
    R = apply_plate_operator(solution.omega_unit, rig, half) - p_u
    num = integrate_rect(multiply(R, R), unit)
    den = integrate_rect(multiply(p_u, p_u), unit)
    if den <= 0:
        return float(np.sqrt(max(num, 0.0)))
    return float(np.sqrt(max(num, 0.0) / den))


def _load_parts(problem: PlateProblem):
    """Regression polynomial plus exactly integrated patches (exact-patch mode)."""
    if not problem.settings.exact_patch:
        return fit_load(problem.loads, problem.geometry), []
    smooth = [ld for ld in problem.loads if ld.kind in ("uniform", "polynomial")]
    patches = [(ld.pressure(problem.geometry), ld.region_on(problem.geometry))
               for ld in problem.loads if ld.kind in ("patch", "mass_patch")]
    fitted = fit_load(smooth, problem.geometry) if smooth else None
    return fitted, patches


def _check(problem: PlateProblem):
    bad = validate_problem(problem)
    if bad:
        raise InvalidProblem(bad)


def solve_fixed_order(problem: PlateProblem, n: int, *, validate: bool = True) -> Solution:
    """Solve at total degree ``n``.

    Raises
    ------
    InvalidProblem
        If ``problem`` fails validation.
    OrderTooLow
        If no admissible function exists at this order.
    """
    if validate:
        _check(problem)
    t0 = time.perf_counter()
    rig = problem.rigidities
    dom = problem.domain
    sb = admissible_basis(problem, n)
    t1 = time.perf_counter()
    fitted, patches = _load_parts(problem)
    load_poly = fitted.p if fitted is not None else Poly2D.zero()
    system = assemble(sb, load_poly, rig, dom, patches, problem.bcs)
    t2 = time.perf_counter()
    c = system.solve()
    omega_unit = Poly2D.from_vector(sb.A @ c, sb.monomials.members)
    omega_unit = Poly2D(omega_unit.array, n)
    t3 = time.perf_counter()

    sol = Solution(
        omega=from_unit(omega_unit, dom),
        omega_unit=omega_unit,
        domain=dom,
        n_used=n,
        r=sb.r,
        k=sb.k,
        residual_rel=float("nan"),
        bc_residual_max=sb.bc_residual_max,
        condition_estimate=system.condition_estimate,
        nullity=system.nullity,
        coefficients=c,
    )
    # the residual is always measured against the full fitted load
    full = fit_load(problem.loads, problem.geometry) if patches else fitted
    sol.residual_rel = residual_norm(sol, full, rig)
    sol.timings = {"basis": t1 - t0, "assembly": t2 - t1, "solve": t3 - t2,
                   "total": time.perf_counter() - t0}
    if system.condition_estimate > COND_WARN:
        msg = f"Galerkin matrix condition estimate {system.condition_estimate:.2e} at n={n}"
        sol.warnings.append(msg)
        warnings.warn(msg, IllConditioned, stacklevel=2)
    return sol


def solve_adaptive(problem: PlateProblem) -> Solution:
    """Raise the order in steps of two until the peak deflection settles.

    Stops when ``|dw_max| / |w_max| < tol_conv`` between consecutive orders.
    The returned solution carries the per-order ``trace``; when ``n_max`` is
    reached first it is flagged ``converged = False``.
    """
    _check(problem)
    s = problem.settings
    trace = []
    prev = None
    best = None
    n = s.n_min
    while n <= s.n_max:
        try:
            sol = solve_fixed_order(problem, n, validate=False)
        except OrderTooLow:
            trace.append({"n": n, "status": "order too low"})
            n += 2
            continue
        wmax, loc = sol.max_abs()
        row = {"n": n, "r": sol.r, "k": sol.k, "omega_max": wmax, "location": loc,
               "residual_rel": sol.residual_rel, "time_s": sol.timings["total"]}
        best = sol
        if prev is None and wmax == 0.0:
            row["delta_rel"] = 0.0
            trace.append(row)
            best.termination = "zero deflection"
            break
        if prev is not None:
            delta = abs(wmax - prev) / wmax if wmax > 0 else 0.0
            row["delta_rel"] = delta
            trace.append(row)
            if delta < s.tol_conv:
                best.termination = f"converged: relative change {delta:.2e} < {s.tol_conv:g}"
                break
        else:
            trace.append(row)
        prev = wmax
        n += 2
    if best is None:
        raise OrderTooLow(f"no admissible functions up to n_max={s.n_max}")
    if not best.termination:
        best.converged = False
        best.termination = f"unconverged at n_max={s.n_max}"
    best.trace = trace
    return best


def solve(problem: PlateProblem) -> Solution:
    """Dispatch on the problem's order setting."""
    if problem.settings.order == "auto":
        return solve_adaptive(problem)
    return solve_fixed_order(problem, int(problem.settings.order))
