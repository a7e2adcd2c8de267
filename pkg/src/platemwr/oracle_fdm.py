"""
Finite-difference reference solutions for rectangular plates.

The orthotropic operator ``Dx w_xxxx + 2H w_xxyy + Dy w_yyyy`` is discretized
with the 13-point central stencil on a uniform grid of interior nodes.  Only
whole-edge clamped or simply supported edges are handled: ``w = 0`` on the
boundary line plus a ghost row ``w_ghost = w_mirror`` (clamped, zero slope) or
``w_ghost = -w_mirror`` (simply supported, zero curvature).  Also provides the
double sine series for the simply supported rectangle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .model import PlateProblem, RigiditySet

MIN_NODES = 16


class OracleCapabilityError(ValueError):
    """The problem uses supports the finite-difference oracle cannot model."""


@dataclass(frozen=True)
class FdmGrid:
    """Interior-node deflections; node ``(i, j)`` sits at ``((i+1) hx, (j+1) hy)``."""

    nx: int
    ny: int
    hx: float
    hy: float
    w: np.ndarray

    @property
    def x(self) -> np.ndarray:
        return self.hx * np.arange(1, self.nx + 1)

    @property
    def y(self) -> np.ndarray:
        return self.hy * np.arange(1, self.ny + 1)

    def max_abs(self):
        """``(|w|max, (x, y))`` over the interior nodes."""
        i, j = np.unravel_index(np.argmax(np.abs(self.w)), self.w.shape)
        return float(abs(self.w[i, j])), (float(self.x[i]), float(self.y[j]))


def _edge_signs(problem: PlateProblem) -> dict:
    signs = {}
    for seg in problem.bcs:
        if seg.kind == "free":
            raise OracleCapabilityError("free edges are not supported by the finite-difference oracle")
        if seg.s0 != 0.0 or seg.s1 != 1.0:
            raise OracleCapabilityError("partial edge segments are not supported by the finite-difference oracle")
        signs[seg.edge] = 1.0 if seg.kind == "clamped" else -1.0
    if set(signs) != {"left", "right", "bottom", "top"}:
        raise OracleCapabilityError("every edge needs exactly one whole-edge support")
    return signs


def _stencil(rig: RigiditySet, hx: float, hy: float):
    """``(di, dj, weight)`` of the 13-point orthotropic biharmonic stencil."""
    ax = rig.Dx / hx**4
    ay = rig.Dy / hy**4
    axy = 2.0 * rig.H / (hx**2 * hy**2)
    out = [(0, 0, 6 * ax + 6 * ay + 4 * axy)]
    for d in (-1, 1):
        out += [(d, 0, -4 * ax - 2 * axy), (0, d, -4 * ay - 2 * axy)]
        out += [(2 * d, 0, ax), (0, 2 * d, ay)]
        out += [(d, 1, axy), (d, -1, axy)]
    return out


def _fold(k: np.ndarray, n: int, lo_sign: float, hi_sign: float):
    """Map node indices (0-based interior) to ``(index, factor)`` arrays.

    Boundary nodes (-1 and n) carry w = 0 and get factor 0; ghost nodes one
    step further out reflect onto the first interior node with the edge's sign.
    """
    idx = k.copy()
    fac = np.ones(k.shape)
    fac[(k == -1) | (k == n)] = 0.0
    lo, hi = k == -2, k == n + 1
    idx[lo], fac[lo] = 0, lo_sign
    idx[hi], fac[hi] = n - 1, hi_sign
    idx[fac == 0.0] = 0
    return idx, fac


def assemble_fdm(problem: PlateProblem, nx: int, ny: int):
    """Sparse operator ``A`` and load vector ``b`` (Pa) for the interior nodes."""
    if nx < MIN_NODES or ny < MIN_NODES:
        raise ValueError(f"need at least {MIN_NODES} interior nodes per direction")
    signs = _edge_signs(problem)
    Lx, Ly = problem.geometry.Lx, problem.geometry.Ly
    hx, hy = Lx / (nx + 1), Ly / (ny + 1)
    rows, cols, vals = [], [], []
    I, J = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    I, J = I.ravel(), J.ravel()
    node = I * ny + J
    for di, dj, wgt in _stencil(problem.rigidities, hx, hy):
        fi, si = _fold(I + di, nx, signs["left"], signs["right"])
        fj, sj = _fold(J + dj, ny, signs["bottom"], signs["top"])
        fac = si * sj
        keep = fac != 0.0
        rows.append(node[keep])
        cols.append((fi * ny + fj)[keep])
        vals.append(wgt * fac[keep])
    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(nx * ny, nx * ny))
    X, Y = np.meshgrid(hx * np.arange(1, nx + 1), hy * np.arange(1, ny + 1), indexing="ij")
    b = np.zeros_like(X)
    for ld in problem.loads:
        b = b + ld.sample(problem.geometry, X, Y)
    return A, b.ravel(), hx, hy


def solve_fdm(problem: PlateProblem, nx: int, ny: int) -> FdmGrid:
    """Finite-difference deflection on ``nx x ny`` interior nodes.

    Raises
    ------
    OracleCapabilityError
        For free edges or partial edge segments.
    """
    A, b, hx, hy = assemble_fdm(problem, nx, ny)
    w = spsolve(A.tocsc(), b) if np.any(b) else np.zeros_like(b)
    return FdmGrid(nx, ny, hx, hy, np.asarray(w).reshape(nx, ny))


@dataclass(frozen=True)
class Comparison:
    omega_max: float
    omega_max_ref: float
    rel_diff: float
    rms_rel: float


def compare(solution, grid: FdmGrid, baseline: float | None = None) -> Comparison:
    """Peak-deflection disagreement and nodewise RMS difference.

    ``rel_diff = |w_max - ref| / ref`` with ``ref`` the grid peak unless a
    ``baseline`` (e.g. an analytical value) is given.  ``rms_rel`` is the RMS
    of the nodal differences divided by the grid peak.  ``solution`` may be
    anything callable as ``solution(x, y)`` with a ``max_abs()`` method.
    """
    w_max, _ = solution.max_abs()
    g_max, _ = grid.max_abs()
    ref = g_max if baseline is None else baseline
    X, Y = np.meshgrid(grid.x, grid.y, indexing="ij")
    diff = np.asarray(solution(X, Y)) - grid.w
    rms = float(np.sqrt(np.mean(diff**2)))
    rel = abs(w_max - ref) / ref if ref else abs(w_max - ref)
    return Comparison(float(w_max), float(ref), float(rel), rms / g_max if g_max else rms)


def navier_series(Lx: float, Ly: float, rig: RigiditySet, q: float, terms: int = 50,
                  x: float | None = None, y: float | None = None) -> float:
    """Deflection of a simply supported rectangle under uniform ``q`` (double sine series).

    Sums m, n = 1..terms (only odd terms are nonzero); evaluates at the plate
    centre unless ``x, y`` are given.
    """
    x = 0.5 * Lx if x is None else x
    y = 0.5 * Ly if y is None else y
    m = np.arange(1, terms + 1, 2)[:, None]
    n = np.arange(1, terms + 1, 2)[None, :]
    a, b = m / Lx, n / Ly
    den = m * n * (rig.Dx * a**4 + 2 * rig.H * a**2 * b**2 + rig.Dy * b**4)
    shape = np.sin(m * np.pi * x / Lx) * np.sin(n * np.pi * y / Ly)
    return float(16 * q / np.pi**6 * np.sum(shape / den))
