"""
Admissible polynomial trial functions.

Each trial function is a combination of the monomials ``u**p v**q`` with
``p + q <= n`` on the normalized square.  Support conditions are imposed by
collocation: every edge segment contributes two linear conditions per
collocation point, and the trial functions span the nullspace of the stacked
condition matrix.

Points sit at the midpoints of equal sub-intervals, and a segment gets a share
of ``ceil(n/2)`` points proportional to its length (never fewer than two).
Scaling by length matters for partial supports: giving every short segment
the full ``ceil(n/2)`` points would pin the whole edge trace of a degree-n
polynomial and turn a partial clamp into a full one.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .model import EdgeSegmentBC, PlateProblem, RigiditySet
from .poly2d import Poly2D

RANK_RTOL = 1e-10
INSET = 1e-3
CHECK_FACTOR = 10


class OrderTooLow(ValueError):
    """Raised when the constraints leave no admissible function at order ``n``."""


@dataclass(frozen=True)
class MonomialBasis:
    n: int
    members: tuple[tuple[int, int], ...]

    @property
    def r(self) -> int:
        return len(self.members)

    @property
    def px(self) -> np.ndarray:
        return np.array([p for p, _ in self.members])

    @property
    def py(self) -> np.ndarray:
        return np.array([q for _, q in self.members])


def monomials(n: int) -> MonomialBasis:
    """All ``(p, q)`` with ``p + q <= n`` in graded-lexicographic order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    members = tuple((p, d - p) for d in range(n + 1) for p in range(d, -1, -1))
    return MonomialBasis(n, members)


@dataclass(frozen=True)
class CollocationPoint:
    u: float
    v: float
    edge: str
    kind: str


def _falling(p: np.ndarray, k: int) -> np.ndarray:
    out = np.ones_like(p, dtype=float)
    for i in range(k):
        out = out * (p - i)
    return out


def monomial_derivatives(basis: MonomialBasis, u: float, v: float, a: int, b: int) -> np.ndarray:
    """Values of ``d^(a+b)/du^a dv^b`` of every monomial at ``(u, v)``."""
    px, py = basis.px, basis.py
    cx = _falling(px, a)
    cy = _falling(py, b)
    ex = np.maximum(px - a, 0)
    ey = np.maximum(py - b, 0)
    return cx * cy * float(u) ** ex * float(v) ** ey


def segment_params(seg: EdgeSegmentBC, m: int, rule: str = "midpoint") -> np.ndarray:
    """Collocation fractions strictly inside ``[s0, s1]``, ascending.

    ``midpoint`` places one point at the centre of each of ``m`` equal
    sub-intervals (the nodes of the composite midpoint rule, so the boundary
    terms of integration by parts vanish in the quadrature sense);
    ``chebyshev`` uses Chebyshev-Gauss nodes with the ends inset by 1e-3 of
    the segment length.
    """
    width = seg.s1 - seg.s0
    if rule == "midpoint":
        return seg.s0 + width * (np.arange(m) + 0.5) / m
    if rule == "chebyshev":
        k = np.arange(1, m + 1)
        nodes = np.sort(np.cos((2 * k - 1) * np.pi / (2 * m)))
        lo = seg.s0 + INSET * width
        hi = seg.s1 - INSET * width
        return lo + 0.5 * (nodes + 1.0) * (hi - lo)
    raise ValueError(f"unknown node rule {rule!r}")


def _edge_point(edge: str, s: float) -> tuple[float, float]:
    w = 2.0 * s - 1.0
    return {
        "left": (-1.0, w),
        "right": (1.0, w),
        "bottom": (w, -1.0),
        "top": (w, 1.0),
    }[edge]


def points_per_segment(n: int, length: float = 1.0) -> int:
    """``max(2, ceil(n/2 * length))`` for a segment covering ``length`` of its edge."""
    return _scaled(ceil(n / 2), length)


def _scaled(m: int, length: float) -> int:
    # round first so that e.g. 3 * (1/3) does not become 1.0000000000000002
    return max(2, ceil(round(m * length, 9)))


def collocation_points(bcs, n: int, m: int | None = None, rule: str = "midpoint",
                       include_free: bool = True) -> list[CollocationPoint]:
    """Collocation points on the normalized square, segment by segment.

    ``m`` is the count for a full-length segment (default ``ceil(n/2)``);
    shorter segments get a proportional share, at least two.
    """
    m = ceil(n / 2) if m is None else m
    out = []
    for seg in bcs:
        if seg.kind == "free" and not include_free:
            continue
        for s in segment_params(seg, _scaled(m, seg.s1 - seg.s0), rule):
            u, v = _edge_point(seg.edge, s)
            out.append(CollocationPoint(u, v, seg.edge, seg.kind))
    return out


def _operator_rows(pt: CollocationPoint, rig: RigiditySet, basis: MonomialBasis,
                   half: tuple[float, float]) -> list[np.ndarray]:
    hx, hy = half
    d = lambda a, b: monomial_derivatives(basis, pt.u, pt.v, a, b) / (hx**a * hy**b)
    normal_x = pt.edge in ("left", "right")

    def moment():
        if normal_x:
            return -(rig.Dx * d(2, 0) + rig.D1 * d(0, 2))
        return -(rig.Dy * d(0, 2) + rig.D1 * d(2, 0))

    def shear():
        if normal_x:
            return -(rig.Dx * d(3, 0) + (rig.D1 + 4 * rig.Dk) * d(1, 2))
        return -(rig.Dy * d(0, 3) + (rig.D1 + 4 * rig.Dk) * d(2, 1))

    if pt.kind == "clamped":
        return [d(0, 0), d(1, 0) if normal_x else d(0, 1)]
    if pt.kind == "simply_supported":
        return [d(0, 0), moment()]
    if pt.kind == "free":
        return [moment(), shear()]
    raise ValueError(f"unknown support kind {pt.kind!r}")


def bc_rows(pt: CollocationPoint, rig: RigiditySet, basis: MonomialBasis,
            half: tuple[float, float] = (1.0, 1.0)) -> np.ndarray:
    """The two support conditions at ``pt`` applied to every monomial.

    Derivatives are taken in plate coordinates (``half`` holds the half side
    lengths mapping the normalized square onto the plate) and every row is
    scaled to unit max-entry.
    """
    rows = np.array(_operator_rows(pt, rig, basis, half))
    scale = np.abs(rows).max(axis=1, keepdims=True)
    scale[scale == 0] = 1.0
    return rows / scale


def constraint_matrix(problem: PlateProblem, n: int, m: int | None = None, rule: str = "midpoint"):
    """``(monomials, points, B)`` with two normalized rows per collocation point.

    Free segments are skipped unless ``problem.settings.free_edges`` is
    ``"collocated"``.
    """
    basis = monomials(n)
    rig = problem.rigidities
    half = problem.domain.half_lengths
    pts = collocation_points(problem.bcs, n, m, rule,
                             include_free=problem.settings.free_edges == "collocated")
    if not pts:
        return basis, pts, np.zeros((0, basis.r))
    B = np.vstack([bc_rows(pt, rig, basis, half) for pt in pts])
    return basis, pts, B


@dataclass(frozen=True)
class ShapeBasis:
    """Orthonormal (in coefficient space) admissible functions at order ``n``.

    ``A`` is the ``r x k`` coefficient matrix: column ``i`` holds the a_j of
    function ``i`` over ``monomials.members``.  ``B_check`` holds the same
    support conditions sampled ten times more densely than ``B``.
    """

    monomials: MonomialBasis
    A: np.ndarray
    rank: int
    points: tuple[CollocationPoint, ...]
    B: np.ndarray
    B_check: np.ndarray
    bc_residual_max: float

    @property
    def n(self) -> int:
        return self.monomials.n

    @property
    def r(self) -> int:
        return self.monomials.r

    @property
    def k(self) -> int:
        return self.A.shape[1]

    @property
    def functions(self) -> list[Poly2D]:
        return [Poly2D.from_vector(col, self.monomials.members) for col in self.A.T]


def admissible_basis(problem: PlateProblem, n: int, rule: str = "midpoint") -> ShapeBasis:
    """Nullspace of the collocated support conditions at total degree ``n``.

    Raises
    ------
    OrderTooLow
        If the conditions have full column rank (no admissible function).
    """
    basis, pts, B = constraint_matrix(problem, n, rule=rule)
    if B.shape[0]:
        _, s, vt = np.linalg.svd(B, full_matrices=True)
        rank = int(np.sum(s > RANK_RTOL * s[0])) if s.size and s[0] > 0 else 0
        A = vt[rank:].T.copy()
    else:
        rank = 0
        A = np.eye(basis.r)
    if A.shape[1] == 0:
        raise OrderTooLow(f"no admissible functions at order {n} (r={basis.r}, rank={rank})")
    # fix the sign of each column so the output does not depend on LAPACK's choice
    lead = np.argmax(np.abs(A) > 1e-8 * np.abs(A).max(axis=0), axis=0)
    A *= np.sign(A[lead, np.arange(A.shape[1])])
    _, _, Bc = constraint_matrix(problem, n, CHECK_FACTOR * ceil(n / 2), rule)
    resid = float(np.abs(Bc @ A).max()) if Bc.size else 0.0
    return ShapeBasis(basis, A, rank, tuple(pts), B, Bc, resid)
