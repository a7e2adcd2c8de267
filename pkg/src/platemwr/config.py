"""
JSON problem documents.

Surface units are fixed: lengths in mm, masses in kg, moduli in GPa, stress
limits in MPa, pressures in Pa, forces in N.  Key suffixes carry the unit
(``t_mm``, ``E_GPa``, ``P_Pa``, ...) so a document is readable without a
schema at hand.  Everything is converted to SI on the way in.

Example::

    {
      "schema_version": 1,
      "material": {"kind": "isotropic", "E_GPa": 210, "nu": 0.3},
      "plate": {"Lx_mm": 250, "Ly_mm": 500, "t_mm": 0.1},
      "edges": [{"edge": "left", "from": 0, "to": 1, "bc": "clamped"}, ...],
      "loads": [{"kind": "uniform", "P_Pa": 0.8}],
      "criteria": [{"kind": "max_deflection", "limit_mm": 1.0}],
      "solver": {"order": "auto", "tol_conv": 0.001, "n_max": 14}
    }
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .criteria import DesignCriterion
from .model import (
    BC_KINDS,
    EDGES,
    EdgeSegmentBC,
    LoadSpec,
    MaterialSpec,
    PlateProblem,
    PlateRect,
    SolverSettings,
)
from .poly2d import RectDomain

SCHEMA_VERSION = 1
UNITS = {"length": "mm", "mass": "kg", "modulus": "GPa", "stress": "MPa"}
MM = 1e-3
GPA = 1e9
MPA = 1e6


class ConfigError(ValueError):
    """Schema violations; ``errors`` holds ``"path: message"`` strings."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class _Reader:
    """Collects errors with their document paths instead of stopping at the first."""

    def __init__(self):
        self.errors: list[str] = []

    def fail(self, path, msg):
        self.errors.append(f"{path}: {msg}")

    def obj(self, doc, key, path, required=True):
        v = doc.get(key) if isinstance(doc, dict) else None
        if v is None:
            if required:
                self.fail(f"{path}.{key}" if path else key, "missing")
            return None
        if not isinstance(v, dict):
            self.fail(f"{path}.{key}" if path else key, "expected an object")
            return None
        return v

    def num(self, doc, key, path, required=True, positive=False, default=None):
        p = f"{path}.{key}"
        if key not in doc:
            if required:
                self.fail(p, "missing")
            return default
        v = doc[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(p, f"expected a number, got {v!r}")
            return default
        if positive and not v > 0:
            self.fail(p, "must be > 0")
            return default
        return float(v)

    def choice(self, doc, key, path, options, default=None):
        p = f"{path}.{key}"
        v = doc.get(key, default)
        if v is None:
            self.fail(p, "missing")
        elif v not in options:
            self.fail(p, f"expected one of {', '.join(options)}, got {v!r}")
            return None
        return v

    def region(self, doc, path):
        if "region_mm" not in doc:
            return None
        v = doc["region_mm"]
        if not (isinstance(v, list) and len(v) == 4 and all(isinstance(c, (int, float)) for c in v)):
            self.fail(f"{path}.region_mm", "expected [x0, x1, y0, y1]")
            return None
        try:
            return RectDomain(*(c * MM for c in v))
        except ValueError:
            self.fail(f"{path}.region_mm", "degenerate rectangle")
            return None


def _material(r: _Reader, doc) -> MaterialSpec | None:
    m = r.obj(doc, "material", "")
    plate = r.obj(doc, "plate", "")
    if m is None or plate is None:
        return None
    t = r.num(plate, "t_mm", "plate", positive=True)
    kind = r.choice(m, "kind", "material", ("isotropic", "orthotropic"), default="isotropic")
    if kind == "orthotropic":
        Ex = r.num(m, "Ex_GPa", "material", positive=True)
        Ey = r.num(m, "Ey_GPa", "material", positive=True)
        nu = r.num(m, "nu_xy", "material")
        G = r.num(m, "Gxy_GPa", "material", positive=True)
        if None in (t, Ex, Ey, nu, G):
            return None
        mat = MaterialSpec.orthotropic(Ex * GPA, Ey * GPA, nu, G * GPA, t * MM)
    elif kind == "isotropic":
        E = r.num(m, "E_GPa", "material", positive=True)
        nu = r.num(m, "nu", "material")
        if None in (t, E, nu):
            return None
        mat = MaterialSpec.isotropic(E * GPA, nu, t * MM)
    else:
        return None
    for v in mat.violations():
        r.fail("material", v)
    return mat


def _edges(r: _Reader, doc):
    edges = doc.get("edges")
    if not isinstance(edges, list) or not edges:
        r.fail("edges", "expected a non-empty list")
        return ()
    out = []
    for i, e in enumerate(edges):
        p = f"edges[{i}]"
        if not isinstance(e, dict):
            r.fail(p, "expected an object")
            continue
        edge = r.choice(e, "edge", p, EDGES)
        bc = r.choice(e, "bc", p, BC_KINDS)
        s0 = r.num(e, "from", p, required=False, default=0.0)
        s1 = r.num(e, "to", p, required=False, default=1.0)
        if edge and bc and s0 is not None and s1 is not None:
            out.append(EdgeSegmentBC(edge, bc, s0, s1))
    return tuple(out)


def _loads(r: _Reader, doc):
    loads = doc.get("loads")
    if not isinstance(loads, list) or not loads:
        r.fail("loads", "expected a non-empty list")
        return ()
    out = []
    for i, ld in enumerate(loads):
        p = f"loads[{i}]"
        if not isinstance(ld, dict):
            r.fail(p, "expected an object")
            continue
        kind = r.choice(ld, "kind", p, ("uniform", "patch", "mass", "polynomial"))
        region = r.region(ld, p)
        if kind == "uniform":
            P = r.num(ld, "P_Pa", p)
            if P is not None:
                out.append(LoadSpec.uniform(P))
        elif kind == "patch":
            if region is None:
                r.fail(f"{p}.region_mm", "missing")
                continue
            if "force_N" in ld:
                F = r.num(ld, "force_N", p)
                if F is not None:
                    out.append(LoadSpec.patch(F / region.area, region))
            else:
                P = r.num(ld, "P_Pa", p)
                if P is not None:
                    out.append(LoadSpec.patch(P, region))
        elif kind == "mass":
            m = r.num(ld, "mass_kg", p)
            if m is not None:
                out.append(LoadSpec.mass_patch(m, region))
        elif kind == "polynomial":
            terms = ld.get("coeffs_Pa")
            if not isinstance(terms, list) or not all(
                isinstance(t, list) and len(t) == 3 and all(isinstance(c, (int, float)) for c in t) for t in terms
            ):
                r.fail(f"{p}.coeffs_Pa", "expected a list of [r, s, b] triples")
                continue
            # b multiplies x_mm**r * y_mm**s; in metres that is b * 1000**(r+s)
            coeffs = {}
            for a, b, c in terms:
                key = (int(a), int(b))
                coeffs[key] = coeffs.get(key, 0.0) + float(c) * 1000.0 ** (key[0] + key[1])
            out.append(LoadSpec.polynomial(coeffs))
    return tuple(out)


def _criteria(r: _Reader, doc):
    out = []
    crit = doc.get("criteria", [])
    if not isinstance(crit, list):
        r.fail("criteria", "expected a list")
        return ()
    for i, c in enumerate(crit):
        p = f"criteria[{i}]"
        if not isinstance(c, dict):
            r.fail(p, "expected an object")
            continue
        kind = r.choice(c, "kind", p, ("max_deflection", "deflection_ratio", "max_stress", "point_deflection"))
        if kind == "max_deflection":
            lim = r.num(c, "limit_mm", p, positive=True)
            if lim is not None:
                out.append(DesignCriterion.max_deflection(lim * MM))
        elif kind == "deflection_ratio":
            den = r.num(c, "denominator", p, positive=True, required=False, default=144.0)
            span = r.num(c, "span_mm", p, positive=True, required=False)
            if den is not None:
                out.append(DesignCriterion.deflection_ratio(den, None if span is None else span * MM))
        elif kind == "max_stress":
            lim = r.num(c, "limit_MPa", p, positive=True)
            if lim is not None:
                out.append(DesignCriterion.max_stress(lim * MPA))
        elif kind == "point_deflection":
            lim = r.num(c, "limit_mm", p, positive=True)
            at = c.get("at_mm")
            if not (isinstance(at, list) and len(at) == 2):
                r.fail(f"{p}.at_mm", "expected [x, y]")
            elif lim is not None:
                out.append(DesignCriterion.point_deflection((at[0] * MM, at[1] * MM), lim * MM))
    return tuple(out)


def _settings(r: _Reader, doc) -> SolverSettings:
    s = doc.get("solver", {})
    if not isinstance(s, dict):
        r.fail("solver", "expected an object")
        return SolverSettings()
    base = SolverSettings()
    order = s.get("order", "auto")
    if not (order == "auto" or (isinstance(order, int) and not isinstance(order, bool) and order >= 0)):
        r.fail("solver.order", f"expected \"auto\" or a non-negative integer, got {order!r}")
        order = "auto"
    exact = s.get("exact_patch", False)
    if not isinstance(exact, bool):
        r.fail("solver.exact_patch", "expected true or false")
        exact = False
    n_min = s.get("n_min", base.n_min)
    n_max = s.get("n_max", base.n_max)
    for key, v in (("n_min", n_min), ("n_max", n_max)):
        if not (isinstance(v, int) and not isinstance(v, bool) and v >= 0):
            r.fail(f"solver.{key}", "expected a non-negative integer")
    free = r.choice(s, "free_edges", "solver", ("natural", "collocated"), default="natural")
    return SolverSettings(
        order=order,
        tol_conv=r.num(s, "tol_conv", "solver", required=False, positive=True, default=base.tol_conv),
        n_min=n_min if isinstance(n_min, int) else base.n_min,
        n_max=n_max if isinstance(n_max, int) else base.n_max,
        exact_patch=exact,
        free_edges=free or "natural",
    )


def problem_from_config(doc: dict) -> PlateProblem:
    """Build a :class:`PlateProblem` (SI units) from a parsed document.

    Raises
    ------
    ConfigError
        Listing every schema violation found, each prefixed by its path.
    """
    r = _Reader()
    if not isinstance(doc, dict):
        raise ConfigError(["<root>: expected an object"])
    if doc.get("schema_version") != SCHEMA_VERSION:
        r.fail("schema_version", f"expected {SCHEMA_VERSION}, got {doc.get('schema_version')!r}")
    units = doc.get("units", UNITS)
    if units != UNITS:
        r.fail("units", f"units are fixed to {UNITS}")
    mat = _material(r, doc)
    plate = doc.get("plate") if isinstance(doc.get("plate"), dict) else {}
    Lx = r.num(plate, "Lx_mm", "plate", positive=True)
    Ly = r.num(plate, "Ly_mm", "plate", positive=True)
    bcs = _edges(r, doc)
    loads = _loads(r, doc)
    crit = _criteria(r, doc)
    settings = _settings(r, doc)
    if r.errors:
        raise ConfigError(r.errors)
    return PlateProblem(mat, PlateRect(Lx * MM, Ly * MM), bcs, loads, crit, settings)


def _mm(v: float) -> float:
    return v / MM


def _region(d: RectDomain | None):
    return None if d is None else [_mm(d.x0), _mm(d.x1), _mm(d.y0), _mm(d.y1)]


def problem_to_config(p: PlateProblem) -> dict:
    """Inverse of :func:`problem_from_config` (patch forces come back as pressures)."""
    m = p.material
    if m.kind == "isotropic":
        mat = {"kind": "isotropic", "E_GPa": m.E / GPA, "nu": m.nu}
    else:
        mat = {"kind": "orthotropic", "Ex_GPa": m.E / GPA, "Ey_GPa": m.Ey / GPA,
               "nu_xy": m.nu, "Gxy_GPa": m.G / GPA}
    loads = []
    for ld in p.loads:
        if ld.kind == "uniform":
            loads.append({"kind": "uniform", "P_Pa": ld.P})
        elif ld.kind == "patch":
            loads.append({"kind": "patch", "P_Pa": ld.P, "region_mm": _region(ld.region)})
        elif ld.kind == "mass_patch":
            entry = {"kind": "mass", "mass_kg": ld.mass}
            if ld.region is not None:
                entry["region_mm"] = _region(ld.region)
            loads.append(entry)
        else:
            loads.append({"kind": "polynomial",
                          "coeffs_Pa": [[a, b, c / 1000.0 ** (a + b)] for (a, b), c in sorted(ld.coeffs.items())]})
    crit = []
    for c in p.criteria:
        if c.kind == "max_deflection":
            crit.append({"kind": c.kind, "limit_mm": _mm(c.limit)})
        elif c.kind == "deflection_ratio":
            entry = {"kind": c.kind, "denominator": c.denominator}
            if c.span is not None:
                entry["span_mm"] = _mm(c.span)
            crit.append(entry)
        elif c.kind == "max_stress":
            crit.append({"kind": c.kind, "limit_MPa": c.limit / MPA})
        else:
            crit.append({"kind": c.kind, "at_mm": [_mm(c.at[0]), _mm(c.at[1])], "limit_mm": _mm(c.limit)})
    s = p.settings
    return {
        "schema_version": SCHEMA_VERSION,
        "units": dict(UNITS),
        "material": mat,
        "plate": {"Lx_mm": _mm(p.geometry.Lx), "Ly_mm": _mm(p.geometry.Ly), "t_mm": _mm(m.t)},
        "edges": [{"edge": b.edge, "from": b.s0, "to": b.s1, "bc": b.kind} for b in p.bcs],
        "loads": loads,
        "criteria": crit,
        "solver": {"order": s.order, "tol_conv": s.tol_conv, "n_min": s.n_min, "n_max": s.n_max,
                   "exact_patch": s.exact_patch, "free_edges": s.free_edges},
    }


def shipped_configs() -> list[str]:
    """Names of the bundled example documents (without ``.json``)."""
    root = resources.files("platemwr") / "configs"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".json"))


def load_config(path_or_name: str | Path) -> dict:
    """Read a document from disk, falling back to a bundled example by name."""
    path = Path(path_or_name)
    if path.exists():
        return json.loads(path.read_text())
    name = path.name[:-5] if path.name.endswith(".json") else path.name
    if name in shipped_configs():
        return json.loads((resources.files("platemwr") / "configs" / f"{name}.json").read_text())
    raise FileNotFoundError(f"no such config: {path_or_name}")


def load_problem(path_or_name: str | Path) -> PlateProblem:
    return problem_from_config(load_config(path_or_name))
