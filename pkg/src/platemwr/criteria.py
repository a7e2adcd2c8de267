"""
Design rules and parameter sweeps.

A :class:`DesignCriterion` names one measurable limit (peak deflection, a
span/deflection ratio, peak principal stress, or deflection at a point).
:func:`evaluate` measures every criterion on a solved plate and returns a
:class:`DesignReport`; :func:`sweep` repeats solve-and-evaluate over a list
of values of one design parameter.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

from .fields import FieldSet, derive_fields, extremum, max_principal_stress
from .model import BC_KINDS, PlateProblem, PlateRect
from .solver import solve

CRITERION_KINDS = ("max_deflection", "deflection_ratio", "max_stress", "point_deflection")
SWEEP_AXES = ("thickness", "load", "load_scale", "Lx", "Ly")


class ConfigurationError(ValueError):
    """A criterion or sweep request that cannot be interpreted."""


@dataclass(frozen=True)
class DesignCriterion:
    """One pass/fail rule.

    kind
        ``max_deflection`` (``limit`` in m), ``deflection_ratio`` (limit is
        ``span / denominator``; ``span`` defaults to the longer plate side),
        ``max_stress`` (``limit`` in Pa, compared with the peak principal
        extreme-fiber stress) or ``point_deflection`` (``limit`` in m at
        ``at = (x, y)``).
    """

    kind: Literal["max_deflection", "deflection_ratio", "max_stress", "point_deflection"]
    limit: float | None = None
    denominator: float | None = None
    span: float | None = None
    at: tuple[float, float] | None = None

    @classmethod
    def max_deflection(cls, limit: float) -> "DesignCriterion":
        return cls("max_deflection", limit=limit)

    @classmethod
    def deflection_ratio(cls, denominator: float = 144.0, span: float | None = None) -> "DesignCriterion":
        return cls("deflection_ratio", denominator=denominator, span=span)

    @classmethod
    def max_stress(cls, limit: float) -> "DesignCriterion":
        return cls("max_stress", limit=limit)

    @classmethod
    def point_deflection(cls, at: tuple[float, float], limit: float) -> "DesignCriterion":
        return cls("point_deflection", limit=limit, at=(float(at[0]), float(at[1])))

    def limit_for(self, geometry: PlateRect) -> float:
        """The limit in SI units, resolving the ratio rule against ``geometry``."""
        if self.kind == "deflection_ratio":
            span = self.span if self.span is not None else max(geometry.Lx, geometry.Ly)
            return span / self.denominator
        return self.limit

    def violations(self, geometry: PlateRect) -> list[str]:
        if self.kind not in CRITERION_KINDS:
            return [f"unknown criterion kind {self.kind!r}"]
        out = []
        if self.kind == "deflection_ratio":
            if not (self.denominator and self.denominator > 0):
                out.append("denominator must be > 0")
            if self.span is not None and not self.span > 0:
                out.append("span must be > 0")
        elif not (self.limit is not None and self.limit > 0):
            out.append("limit must be > 0")
        if self.kind == "point_deflection":
            if self.at is None:
                out.append("point_deflection needs a point")
            elif not bool(geometry.domain.contains(*self.at)):
                out.append(f"point {self.at} lies outside the plate")
        return out


@dataclass(frozen=True)
class CriterionResult:
    criterion: DesignCriterion
    measured: float
    limit: float
    location: tuple[float, float]

    @property
    def margin(self) -> float:
        """``(limit - measured) / limit``; negative when the rule is violated."""
        return (self.limit - self.measured) / self.limit

    @property
    def passed(self) -> bool:
        return self.measured <= self.limit

    @property
    def kind(self) -> str:
        return self.criterion.kind


@dataclass
class DesignReport:
    """Outcome of one evaluated design.

    ``results`` holds one entry per criterion; ``diagnostics`` echoes the
    solver's order, sizes, timings and peak values.  Sweep entries set
    ``value`` to the swept parameter and, when the solve failed, ``error``.
    """

    results: list[CriterionResult] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    value: object = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(r.passed for r in self.results)

    @property
    def verdict(self) -> str:
        if self.error is not None:
            return "ERROR"
        return "PASS" if self.passed else "FAIL"


def _measure(c: DesignCriterion, solution, fields: FieldSet, cache: dict):
    if c.kind in ("max_deflection", "deflection_ratio"):
        if "w" not in cache:
            cache["w"] = extremum(solution.omega, fields.domain, "max_abs")
        ev = cache["w"]
        return abs(ev.value), ev.location
    if c.kind == "max_stress":
        if "s" not in cache:
            cache["s"] = max_principal_stress(fields)
        ev = cache["s"]
        return ev.value, ev.location
    if c.kind == "point_deflection":
        return abs(float(solution.omega(*c.at))), c.at
    raise ConfigurationError(f"unknown criterion kind {c.kind!r}")


def evaluate(solution, fields: FieldSet, criteria: Sequence[DesignCriterion],
             geometry: PlateRect | None = None) -> DesignReport:
    """Measure every criterion on a solved plate.

    ``geometry`` resolves ratio limits; it defaults to the rectangle of
    ``fields.domain``.
    """
    if geometry is None:
        d = fields.domain
        geometry = PlateRect(d.x1 - d.x0, d.y1 - d.y0)
    cache: dict = {}
    results = []
    for c in criteria:
        measured, loc = _measure(c, solution, fields, cache)
        results.append(CriterionResult(c, float(measured), float(c.limit_for(geometry)),
                                       (float(loc[0]), float(loc[1]))))
    # peak deflection and stress are always reported, criteria or not
    w = cache.get("w") or extremum(solution.omega, fields.domain, "max_abs")
    s = cache.get("s") or max_principal_stress(fields)
    diag = {
        "omega_max": abs(w.value),
        "omega_location": w.location,
        "sigma1_max": s.value,
        "sigma1_location": s.location,
        "n_used": solution.n_used,
        "r": solution.r,
        "k": solution.k,
        "timings": dict(solution.timings),
        "converged": solution.converged,
        "termination": solution.termination,
        "residual_rel": solution.residual_rel,
        "bc_residual_max": solution.bc_residual_max,
        "condition_estimate": solution.condition_estimate,
    }
    return DesignReport(results, diag)


def evaluate_problem(problem: PlateProblem, solution=None) -> DesignReport:
    """Solve ``problem`` (unless ``solution`` is given) and check its own criteria."""
    sol = solve(problem) if solution is None else solution
    fs = derive_fields(sol, problem.rigidities, problem.material.t)
    return evaluate(sol, fs, problem.criteria, problem.geometry)


def _single_load(problem: PlateProblem, value: float):
    if len(problem.loads) != 1:
        raise ConfigurationError("the 'load' axis needs exactly one load; use 'load_scale'")
    ld = problem.loads[0]
    if ld.kind == "mass_patch":
        return (replace(ld, mass=float(value)),)
    if ld.kind in ("uniform", "patch"):
        return (replace(ld, P=float(value)),)
    raise ConfigurationError("polynomial loads have no single magnitude; use 'load_scale'")


def apply_parameter(template: PlateProblem, axis: str, value) -> PlateProblem:
    """Copy of ``template`` with one design parameter replaced.

    Axes: ``thickness`` (m), ``load`` (Pa, or kg for a mass load), ``load_scale``
    (factor on every load), ``Lx``/``Ly`` (m) and ``bc:<i>`` (support kind of
    segment ``i``).
    """
    if axis == "thickness":
        return replace(template, material=template.material.with_thickness(float(value)))
    if axis == "load":
        return replace(template, loads=_single_load(template, value))
    if axis == "load_scale":
        return replace(template, loads=tuple(ld.scaled(float(value)) for ld in template.loads))
    if axis in ("Lx", "Ly"):
        return replace(template, geometry=replace(template.geometry, **{axis: float(value)}))
    if axis.startswith("bc:"):
        try:
            i = int(axis[3:])
            seg = template.bcs[i]
        except (ValueError, IndexError):
            raise ConfigurationError(f"no boundary segment {axis[3:]!r}") from None
        if value not in BC_KINDS:
            raise ConfigurationError(f"unknown support kind {value!r}")
        bcs = list(template.bcs)
        bcs[i] = replace(seg, kind=value)
        return replace(template, bcs=tuple(bcs))
    raise ConfigurationError(f"unknown sweep parameter {axis!r}")


def _run(template: PlateProblem, axis: str, value) -> DesignReport:
    try:
        problem = apply_parameter(template, axis, value)
        rep = evaluate_problem(problem)
    except Exception as exc:  # recorded, the sweep goes on
        return DesignReport(value=value, error=f"{type(exc).__name__}: {exc}")
    rep.value = value
    return rep


def sweep(template: PlateProblem, axis: str, values, workers: int | None = None) -> list[DesignReport]:
    """Solve and evaluate ``template`` once per value of ``axis``.

    Reports come back ordered by value (support kinds keep their input
    order).  A value whose solve fails yields a report with ``error`` set;
    the remaining values still run.  ``workers > 1`` runs the solves in a
    thread pool.

    Raises
    ------
    ConfigurationError
        For an unknown axis, before anything is solved.
    """
    values = list(values)
    if not (axis in SWEEP_AXES or axis.startswith("bc:")):
        raise ConfigurationError(f"unknown sweep parameter {axis!r}")
    if not axis.startswith("bc:"):
        values = sorted(float(v) for v in values)
    if workers and workers > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda v: _run(template, axis, v), values))
    return [_run(template, axis, v) for v in values]
