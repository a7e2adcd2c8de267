"""
Plate problem definition: material, geometry, edge supports, loads, settings.

All quantities are SI (m, Pa, N, kg).  Positive load and positive deflection
both point downward, following the classical plate-theory convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from .poly2d import Poly2D, RectDomain, from_unit, integrate_rect, to_unit

G_ACCEL = 9.81
LOAD_DEGREE = 5
FIT_GRID = 21

EDGES = ("left", "right", "bottom", "top")
BC_KINDS = ("clamped", "simply_supported", "free")


class InvalidMaterial(ValueError):
    pass


@dataclass(frozen=True)
class MaterialSpec:
    """Linear elastic plate material.

    For ``kind == "isotropic"`` only ``E`` and ``nu`` are used; orthotropic
    materials use ``E`` as E_x together with ``Ey``, ``nu`` as nu_xy and
    ``G`` as G_xy.
    """

    kind: Literal["isotropic", "orthotropic"]
    E: float
    nu: float
    t: float
    Ey: float | None = None
    G: float | None = None

    @classmethod
    def isotropic(cls, E: float, nu: float, t: float) -> "MaterialSpec":
        return cls("isotropic", E, nu, t)

    @classmethod
    def orthotropic(cls, Ex: float, Ey: float, nu_xy: float, Gxy: float, t: float) -> "MaterialSpec":
        return cls("orthotropic", Ex, nu_xy, t, Ey=Ey, G=Gxy)

    @property
    def Ex(self) -> float:
        return self.E

    @property
    def nu_yx(self) -> float:
        if self.kind == "isotropic":
            return self.nu
        return self.nu * self.Ey / self.E

    def with_thickness(self, t: float) -> "MaterialSpec":
        return replace(self, t=t)

    def violations(self) -> list[str]:
        out = []
        if self.kind not in ("isotropic", "orthotropic"):
            return [f"material: unknown kind {self.kind!r}"]
        if not self.E > 0:
            out.append("material: modulus must be > 0")
        if not 0 <= self.nu < 0.5:
            out.append("material: Poisson's ratio must satisfy 0 <= nu < 0.5")
        if not self.t > 0:
            out.append("material: thickness must be > 0")
        if self.kind == "orthotropic":
            if self.Ey is None or not self.Ey > 0:
                out.append("material: Ey must be > 0")
            if self.G is None or not self.G > 0:
                out.append("material: Gxy must be > 0")
            if not out and not 1 - self.nu * self.nu_yx > 0:
                out.append("material: reciprocity requires 1 - nu_xy*nu_yx > 0")
        return out


@dataclass(frozen=True)
class RigiditySet:
    """Bending rigidities in N*m.  ``H = D1 + 2*Dk`` multiplies the mixed term."""

    Dx: float
    Dy: float
    D1: float
    Dk: float

    @property
    def H(self) -> float:
        return self.D1 + 2.0 * self.Dk

    def scaled(self, factor: float) -> "RigiditySet":
        return RigiditySet(self.Dx * factor, self.Dy * factor, self.D1 * factor, self.Dk * factor)


def rigidities(m: MaterialSpec) -> RigiditySet:
    """Flexural rigidities of a plate of material ``m``.

    Raises
    ------
    InvalidMaterial
        If the material constants are inconsistent.
    """
    bad = m.violations()
    if bad:
        raise InvalidMaterial("; ".join(bad))
    t3 = m.t**3
    if m.kind == "isotropic":
        D = m.E * t3 / (12.0 * (1.0 - m.nu**2))
        return RigiditySet(D, D, m.nu * D, 0.5 * (1.0 - m.nu) * D)
    denom = 12.0 * (1.0 - m.nu * m.nu_yx)
    Dx = m.E * t3 / denom
    Dy = m.Ey * t3 / denom
    return RigiditySet(Dx, Dy, m.nu_yx * Dx, m.G * t3 / 12.0)


@dataclass(frozen=True)
class PlateRect:
    Lx: float
    Ly: float

    @property
    def domain(self) -> RectDomain:
        return RectDomain(0.0, self.Lx, 0.0, self.Ly)


@dataclass(frozen=True)
class EdgeSegmentBC:
    """Support condition on the fraction ``[s0, s1]`` of one edge.

    Fractions run along +x for the bottom/top edges and along +y for the
    left/right edges.
    """

    edge: Literal["left", "right", "bottom", "top"]
    kind: Literal["clamped", "simply_supported", "free"]
    s0: float = 0.0
    s1: float = 1.0


def full_edges(left="clamped", right="clamped", bottom="clamped", top="clamped") -> list[EdgeSegmentBC]:
    """Whole-edge supports, one segment per edge."""
    return [EdgeSegmentBC("left", left), EdgeSegmentBC("right", right),
            EdgeSegmentBC("bottom", bottom), EdgeSegmentBC("top", top)]


@dataclass(frozen=True)
class LoadSpec:
    """Transverse load.

    kind
        ``uniform`` (``P`` in Pa over the whole plate), ``patch`` (``P`` over
        ``region``), ``mass_patch`` (``mass`` kg spread over ``region``, or over
        the whole plate when ``region`` is None) or ``polynomial``
        (``coeffs`` maps (r, s) to b_rs in Pa/m**(r+s)).
    """

    kind: Literal["uniform", "patch", "mass_patch", "polynomial"]
    P: float = 0.0
    mass: float = 0.0
    region: RectDomain | None = None
    coeffs: dict | None = None

    @classmethod
    def uniform(cls, P: float) -> "LoadSpec":
        return cls("uniform", P=P)

    @classmethod
    def patch(cls, P: float, region: RectDomain) -> "LoadSpec":
        return cls("patch", P=P, region=region)

    @classmethod
    def mass_patch(cls, mass: float, region: RectDomain | None = None) -> "LoadSpec":
        return cls("mass_patch", mass=mass, region=region)

    @classmethod
    def polynomial(cls, coeffs: dict) -> "LoadSpec":
        return cls("polynomial", coeffs=dict(coeffs))

    def region_on(self, geometry: PlateRect) -> RectDomain:
        return self.region if self.region is not None else geometry.domain

    def pressure(self, geometry: PlateRect) -> float:
        """Pressure (Pa) of a piecewise-constant load."""
        if self.kind == "mass_patch":
            return self.mass * G_ACCEL / self.region_on(geometry).area
        return self.P

    def total_force(self, geometry: PlateRect) -> float:
        if self.kind == "mass_patch":
            return self.mass * G_ACCEL
        if self.kind == "polynomial":
            return integrate_rect(Poly2D(self.coeffs), geometry.domain)
        return self.P * self.region_on(geometry).area

    def scaled(self, factor: float) -> "LoadSpec":
        if self.kind == "polynomial":
            return replace(self, coeffs={k: v * factor for k, v in self.coeffs.items()})
        return replace(self, P=self.P * factor, mass=self.mass * factor)

    def sample(self, geometry: PlateRect, x, y):
        """Pointwise load intensity (Pa); patch edges count as inside."""
        if self.kind == "polynomial":
            return Poly2D(self.coeffs)(x, y)
        inside = self.region_on(geometry).contains(np.asarray(x), np.asarray(y))
        return np.where(inside, self.pressure(geometry), 0.0)


@dataclass(frozen=True)
class LoadPolynomial:
    """Degree-5 regression of the summed load field, in plate coordinates (Pa)."""

    p: Poly2D
    fit_rel_l2: float
    total_load_error: float
    total_force: float


@dataclass(frozen=True)
class SolverSettings:
    """Solver controls.

    ``order`` is ``"auto"`` or a fixed total degree.  ``free_edges`` selects
    how free-edge conditions enter: ``"natural"`` leaves them to the boundary
    integral of the weak free-edge terms, ``"collocated"`` additionally pins
    M_n = V_n = 0 at collocation points.
    """

    order: int | Literal["auto"] = "auto"
    tol_conv: float = 1e-3
    n_min: int = 6
    n_max: int = 14
    exact_patch: bool = False
    free_edges: Literal["natural", "collocated"] = "natural"


@dataclass(frozen=True)
class PlateProblem:
    material: MaterialSpec
    geometry: PlateRect
    bcs: tuple[EdgeSegmentBC, ...]
    loads: tuple[LoadSpec, ...]
    criteria: tuple = ()
    settings: SolverSettings = field(default_factory=SolverSettings)

    def __post_init__(self):
        object.__setattr__(self, "bcs", tuple(self.bcs))
        object.__setattr__(self, "loads", tuple(self.loads))
        object.__setattr__(self, "criteria", tuple(self.criteria))

    @property
    def rigidities(self) -> RigiditySet:
        return rigidities(self.material)

    @property
    def domain(self) -> RectDomain:
        return self.geometry.domain


def fit_load(loads, geometry: PlateRect) -> LoadPolynomial:
    """Least-squares degree-5 polynomial of the summed load.

    Polynomial loads of degree <= 5 are added exactly; the other loads are
    sampled on a uniform 21 x 21 grid covering the plate (edges included)
    and fitted on the normalized square.
    """
    loads = list(loads)
    if not loads:
        raise ValueError("at least one load is required")
    dom = geometry.domain
    exact = Poly2D.zero()
    sampled = []
    for ld in loads:
        if ld.kind == "polynomial" and Poly2D(ld.coeffs).max_total_degree <= LOAD_DEGREE:
            exact = exact + Poly2D(ld.coeffs)
        elif ld.kind == "uniform":
            exact = exact + Poly2D.constant(ld.P)
        else:
            sampled.append(ld)

    x = np.linspace(0.0, geometry.Lx, FIT_GRID)
    y = np.linspace(0.0, geometry.Ly, FIT_GRID)
    X, Y = np.meshgrid(x, y, indexing="ij")
    target = sum((ld.sample(geometry, X, Y) for ld in loads), np.zeros_like(X))

    fitted = exact
    if sampled:
        resid = sum((ld.sample(geometry, X, Y) for ld in sampled), np.zeros_like(X))
        U = 2.0 * X / geometry.Lx - 1.0
        V = 2.0 * Y / geometry.Ly - 1.0
        members = [(p, d - p) for d in range(LOAD_DEGREE + 1) for p in range(d, -1, -1)]
        A = np.stack([U.ravel() ** p * V.ravel() ** q for p, q in members], axis=1)
        coef, *_ = np.linalg.lstsq(A, resid.ravel(), rcond=None)
        fitted = fitted + from_unit(Poly2D.from_vector(coef, members), dom)

    fitted = Poly2D(fitted.array, LOAD_DEGREE) if fitted.max_total_degree <= LOAD_DEGREE else fitted
    norm = np.linalg.norm(target)
    err = np.linalg.norm(fitted(X, Y) - target)
    fit_rel = float(err / norm) if norm > 0 else float(err)
    total = sum(ld.total_force(geometry) for ld in loads)
    got = integrate_rect(fitted, dom)
    tl_err = abs(got - total) / abs(total) if total != 0 else abs(got)
    return LoadPolynomial(fitted, fit_rel, float(tl_err), float(total))


def _edge_violations(bcs) -> list[str]:
    out = []
    for b in bcs:
        if b.edge not in EDGES:
            out.append(f"bcs: unknown edge {b.edge!r}")
        if b.kind not in BC_KINDS:
            out.append(f"bcs: unknown support kind {b.kind!r}")
        if not 0.0 <= b.s0 < b.s1 <= 1.0:
            out.append(f"bcs: bad span [{b.s0}, {b.s1}] on {b.edge}")
    if out:
        return out
    for edge in EDGES:
        segs = sorted((b.s0, b.s1) for b in bcs if b.edge == edge)
        if not segs:
            out.append(f"bcs: edge {edge} has no support segment (edge coverage)")
            continue
        for (a0, a1), (b0, _) in zip(segs, segs[1:]):
            if b0 < a1 - 1e-12:
                out.append(f"bcs: segment overlap on {edge} edge")
            elif b0 > a1 + 1e-12:
                out.append(f"bcs: gap in edge coverage on {edge} edge")
        if segs[0][0] > 1e-12 or segs[-1][1] < 1 - 1e-12:
            out.append(f"bcs: gap in edge coverage on {edge} edge")
    return out


def validate_problem(p: PlateProblem) -> list[str]:
    """List every invariant violation of ``p``; an empty list means valid."""
    out = list(p.material.violations())
    if not (p.geometry.Lx > 0 and p.geometry.Ly > 0):
        out.append("geometry: side lengths must be > 0")
        return out
    out.extend(_edge_violations(p.bcs))
    if p.bcs and all(b.kind == "free" for b in p.bcs):
        out.append("unconstrained plate: at least one clamped or simply supported segment is required")
    if not p.loads:
        out.append("loads: at least one load is required")
    dom = p.geometry.domain
    for i, ld in enumerate(p.loads):
        if ld.kind not in ("uniform", "patch", "mass_patch", "polynomial"):
            out.append(f"loads[{i}]: unknown kind {ld.kind!r}")
            continue
        if ld.kind == "mass_patch" and ld.mass < 0:
            out.append(f"loads[{i}]: mass must be >= 0")
        if ld.kind == "polynomial" and not ld.coeffs:
            out.append(f"loads[{i}]: polynomial load needs coefficients")
        if ld.kind == "patch" and ld.region is None:
            out.append(f"loads[{i}]: patch needs a region")
        r = ld.region
        if r is not None and not (dom.x0 <= r.x0 and r.x1 <= dom.x1 and dom.y0 <= r.y0 and r.y1 <= dom.y1):
            out.append(f"loads[{i}]: patch lies outside the plate")
    for i, c in enumerate(p.criteria):
        out.extend(f"criteria[{i}]: {v}" for v in c.violations(p.geometry))
    s = p.settings
    if s.order != "auto" and not (isinstance(s.order, int) and s.order >= 0):
        out.append("solver: order must be 'auto' or a non-negative integer")
    if not s.tol_conv > 0:
        out.append("solver: tol_conv must be > 0")
    if s.n_max < s.n_min:
        out.append("solver: n_max must be >= n_min")
    if s.free_edges not in ("natural", "collocated"):
        out.append("solver: free_edges must be 'natural' or 'collocated'")
    return out


def normalized_load(load: LoadPolynomial, geometry: PlateRect) -> Poly2D:
    return to_unit(load.p, geometry.domain)
