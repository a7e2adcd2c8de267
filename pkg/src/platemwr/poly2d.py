"""
Dense bivariate polynomials over rectangles.

A :class:`Poly2D` stores the coefficients of ``sum c[p, q] x**p y**q`` in a
square array ``c`` with ``c[p, q] == 0`` whenever ``p + q`` exceeds the total
degree bound.  Everything here is exact up to floating point round-off: no
quadrature is involved anywhere, integration over a rectangle uses the
antiderivative of every monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve2d

PRUNE_RTOL = 1e-14


@dataclass(frozen=True)
class RectDomain:
    """Axis aligned rectangle ``[x0, x1] x [y0, y1]``."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError(f"degenerate rectangle {self}")

    @classmethod
    def unit(cls) -> "RectDomain":
        """The normalized square ``[-1, 1]**2`` used by all internal solves."""
        return cls(-1.0, 1.0, -1.0, 1.0)

    @property
    def center(self) -> tuple[float, float]:
        return 0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)

    @property
    def half_lengths(self) -> tuple[float, float]:
        return 0.5 * (self.x1 - self.x0), 0.5 * (self.y1 - self.y0)

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, x, y, tol=0.0):
        return (
            (self.x0 - tol <= x) & (x <= self.x1 + tol)
            & (self.y0 - tol <= y) & (y <= self.y1 + tol)
        )


class Poly2D:
    """Bivariate polynomial with dense total-degree coefficient storage.

    Parameters
    ----------
    coeffs : array_like or dict
        Either a 2-D array with ``coeffs[p, q]`` the coefficient of
        ``x**p y**q`` or a mapping ``{(p, q): value}``.
    degree : int, optional
        Total degree bound.  Inferred from the nonzero coefficients when
        omitted.

    Instances are treated as immutable values.
    """

    __slots__ = ("_c", "_deg")

    def __init__(self, coeffs=None, degree: int | None = None):
        if coeffs is None:
            coeffs = {}
        if isinstance(coeffs, dict):
            top = max((p + q for p, q in coeffs), default=0)
            deg = top if degree is None else degree
            c = np.zeros((deg + 1, deg + 1))
            for (p, q), v in coeffs.items():
                if p < 0 or q < 0:
                    raise ValueError(f"negative exponent {(p, q)}")
                if p + q > deg:
                    raise ValueError(f"monomial {(p, q)} exceeds degree {deg}")
                c[p, q] += v
        else:
            c = np.array(coeffs, dtype=float, ndmin=2)
            if degree is None:
                nz = np.argwhere(c != 0)
                degree = int(nz.sum(axis=1).max()) if len(nz) else 0
            c = _fit_shape(c, degree)
            deg = degree
        if deg < 0:
            raise ValueError("degree must be >= 0")
        c.setflags(write=False)
        self._c = c
        self._deg = int(deg)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly2D":
        return cls({(0, 0): 0.0}, 0)

    @classmethod
    def constant(cls, value: float) -> "Poly2D":
        return cls({(0, 0): float(value)}, 0)

    @classmethod
    def monomial(cls, p: int, q: int, coeff: float = 1.0) -> "Poly2D":
        return cls({(p, q): coeff}, p + q)

    @classmethod
    def from_vector(cls, vec, members) -> "Poly2D":
        """Build from coefficients ``vec`` ordered like ``members`` ((p, q) pairs)."""
        members = list(members)
        deg = max((p + q for p, q in members), default=0)
        c = np.zeros((deg + 1, deg + 1))
        for v, (p, q) in zip(vec, members):
            c[p, q] = v
        return cls(c, deg)

    # -- accessors -----------------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        """Read-only ``(d+1, d+1)`` coefficient array."""
        return self._c

    @property
    def max_total_degree(self) -> int:
        return self._deg

    degree = max_total_degree

    @property
    def coeffs(self) -> dict[tuple[int, int], float]:
        return {(int(p), int(q)): float(self._c[p, q]) for p, q in np.argwhere(self._c != 0)}

    def to_vector(self, members) -> np.ndarray:
        out = np.zeros(len(members))
        for i, (p, q) in enumerate(members):
            if p <= self._deg and q <= self._deg:
                out[i] = self._c[p, q]
        return out

    def is_zero(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self._c) <= atol))

    def __repr__(self):
        terms = [f"{v:+.6g}*x^{p}*y^{q}" for (p, q), v in sorted(self.coeffs.items())]
        return f"Poly2D(deg={self._deg}: {' '.join(terms) or '0'})"

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x, y):
        return eval_poly(self, x, y)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Poly2D.constant(other)
        if not isinstance(other, Poly2D):
            return NotImplemented
        deg = max(self._deg, other._deg)
        return Poly2D(_fit_shape(self._c, deg) + _fit_shape(other._c, deg), deg)

    __radd__ = __add__

    def __neg__(self):
        return Poly2D(-self._c, self._deg)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating)):
            return Poly2D(float(other) * self._c, self._deg)
        if not isinstance(other, Poly2D):
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __eq__(self, other):
        if not isinstance(other, Poly2D):
            return NotImplemented
        deg = max(self._deg, other._deg)
        return bool(np.array_equal(_fit_shape(self._c, deg), _fit_shape(other._c, deg)))

    __hash__ = None

    def allclose(self, other: "Poly2D", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        """Coefficient-wise comparison relative to the largest coefficient."""
        deg = max(self._deg, other._deg)
        a, b = _fit_shape(self._c, deg), _fit_shape(other._c, deg)
        scale = max(np.abs(a).max(), np.abs(b).max())
        return bool(np.all(np.abs(a - b) <= atol + rtol * scale))

    def diff(self, ix: int = 0, iy: int = 0) -> "Poly2D":
        return differentiate(self, ix, iy)


def _fit_shape(c: np.ndarray, deg: int) -> np.ndarray:
    """Copy ``c`` into a ``(deg+1, deg+1)`` array, dropping the upper triangle."""
    out = np.zeros((deg + 1, deg + 1))
    m = min(deg + 1, c.shape[0])
    n = min(deg + 1, c.shape[1])
    out[:m, :n] = c[:m, :n]
    p, q = np.indices(out.shape)
    out[p + q > deg] = 0.0
    return out


def eval_poly(p: Poly2D, x, y):
    """Evaluate ``p`` at scalars or broadcastable arrays ``x, y``."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    val = npoly.polyval2d(x, y, p.array)
    return float(val) if np.ndim(val) == 0 else val


def differentiate(p: Poly2D, ix: int, iy: int) -> Poly2D:
    """Exact partial derivative ``d^(ix+iy) p / dx^ix dy^iy``."""
    if ix < 0 or iy < 0:
        raise ValueError("derivative orders must be non-negative")
    deg = p.max_total_degree - ix - iy
    if deg < 0:
        return Poly2D.zero()
    c = p.array
    if ix:
        c = npoly.polyder(c, ix, axis=0)
    if iy:
        c = npoly.polyder(c, iy, axis=1)
    return Poly2D(c, deg)


def multiply(a: Poly2D, b: Poly2D) -> Poly2D:
    """Exact product; degrees add.  Coefficients below 1e-14 of the largest are dropped."""
    c = convolve2d(a.array, b.array)
    big = np.abs(c).max(initial=0.0)
    if big > 0:
        c[np.abs(c) < PRUNE_RTOL * big] = 0.0
    return Poly2D(c, a.max_total_degree + b.max_total_degree)


def combine(terms) -> Poly2D:
    """Linear combination ``sum w_i p_i`` from an iterable of ``(w_i, p_i)``."""
    out = Poly2D.zero()
    for w, p in terms:
        out = out + p * w
    return out


def monomial_integrals(d: RectDomain, max_px: int, max_py: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-axis integrals of ``x**p`` over ``[x0, x1]`` (and likewise for y)."""
    px = np.arange(max_px + 1)
    py = np.arange(max_py + 1)
    ix = (d.x1 ** (px + 1) - d.x0 ** (px + 1)) / (px + 1)
    iy = (d.y1 ** (py + 1) - d.y0 ** (py + 1)) / (py + 1)
    return ix, iy


def integrate_rect(p: Poly2D, d: RectDomain) -> float:
    """Exact integral of ``p`` over the rectangle ``d``."""
    n = p.max_total_degree
    ix, iy = monomial_integrals(d, n, n)
    return float(ix @ p.array @ iy)


def _axis_map(deg: int, a: float, b: float) -> np.ndarray:
    """``T[p, i]``: coefficient of ``u**i`` in ``(a + b u)**p``."""
    t = np.zeros((deg + 1, deg + 1))
    for p in range(deg + 1):
        for i in range(p + 1):
            t[p, i] = comb(p, i) * a ** (p - i) * b**i
    return t


def affine_map(p: Poly2D, src: RectDomain, dst: RectDomain) -> Poly2D:
    """Re-express ``p`` (a function on ``src``) in the coordinates of ``dst``.

    The map sends ``dst`` onto ``src`` affinely, corner to corner, so that
    ``affine_map(p, src, dst)(u, v) == p(T(u, v))``.
    """
    deg = p.max_total_degree
    sx = (src.x1 - src.x0) / (dst.x1 - dst.x0)
    sy = (src.y1 - src.y0) / (dst.y1 - dst.y0)
    tx = _axis_map(deg, src.x0 - sx * dst.x0, sx)
    ty = _axis_map(deg, src.y0 - sy * dst.y0, sy)
    return Poly2D(tx.T @ p.array @ ty, deg)


def to_unit(p: Poly2D, d: RectDomain) -> Poly2D:
    """Express a physical-coordinate polynomial on the normalized square."""
    return affine_map(p, d, RectDomain.unit())


def from_unit(p: Poly2D, d: RectDomain) -> Poly2D:
    """Express a normalized-square polynomial in the physical coordinates of ``d``."""
    return affine_map(p, RectDomain.unit(), d)


def restrict(p: Poly2D, x: float | None = None, y: float | None = None) -> Poly2D:
    """Fix one coordinate; the result depends on the other variable only."""
    c = p.array
    deg = p.max_total_degree
    if (x is None) == (y is None):
        raise ValueError("give exactly one of x or y")
    if x is not None:
        row = (x ** np.arange(deg + 1)) @ c
        out = np.zeros_like(c)
        out[0, :] = row
    else:
        col = c @ (y ** np.arange(deg + 1))
        out = np.zeros_like(c)
        out[:, 0] = col
    return Poly2D(out, deg)
