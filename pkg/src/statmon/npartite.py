"""Pair-constraint scenario graphs for four (and more) boxes.

A scenario fixes some pair expectations at +-1 and lets the remaining
"free" edges share one symbolic value -x with 0 < x < 1.  Two bounds on x
are computed: the tightest three-box membership relation over all box
triangles, and a spectral bound from the largest eigenvalue of the signed
objective whose expectation is affine in x.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import extremal, group_core, monogamy, states
from .errors import CapacityError, InfeasibleError, ValidationError

PATTERN_TOL = 1e-9
BOUND_PREDICATE_TOL = 1e-12
SPECTRAL_MAX_BOXES = extremal.DENSE_EIG_MAX_BOXES
BISECTION_STEPS = 80


@dataclass(frozen=True)
class ScenarioGraph:
    """Boxes 0..n-1 with fixed edges (pair -> +-1) and free edges (-x)."""

    n: int
    fixed: tuple[tuple[group_core.Pair, int], ...]
    free: tuple[group_core.Pair, ...]

    def __post_init__(self):
        n = group_core.validate_box_count(self.n)
        if n < 3:
            raise ValidationError("scenario graphs need at least 3 boxes")
        fixed = tuple((p, int(v)) for p, v in self.fixed)
        free = tuple(self.free)
        for pair, value in fixed:
            if pair.y >= n:
                raise ValidationError(f"fixed pair {pair} invalid for n = {n}")
            if value not in (+1, -1):
                raise ValidationError(f"fixed edge {pair} must be +1 or -1, got {value}")
        for pair in free:
            if pair.y >= n:
                raise ValidationError(f"free pair {pair} invalid for n = {n}")
        fixed_pairs = [p for p, _ in fixed]
        everything = fixed_pairs + list(free)
        if len(set(everything)) != len(everything):
            raise ValidationError("fixed and free edge sets must be disjoint and unique")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "fixed", fixed)
        object.__setattr__(self, "free", free)

    @property
    def fixed_map(self) -> dict[group_core.Pair, int]:
        return dict(self.fixed)

    @classmethod
    def from_jsonable(cls, obj) -> "ScenarioGraph":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            n = int(obj["n"])
            fixed_raw = obj.get("fixed", {})
            free_raw = obj.get("free", [])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed scenario JSON: {exc}") from None
        fixed = tuple(
            sorted((group_core.Pair.parse(k), int(v)) for k, v in fixed_raw.items())
        )
        free = tuple(sorted(group_core.Pair.parse(k) for k in free_raw))
        return cls(n=n, fixed=fixed, free=free)

    def to_jsonable(self) -> dict:
        return {
            "n": self.n,
            "fixed": {p.label(): v for p, v in self.fixed},
            "free": [p.label() for p in self.free],
        }


@dataclass(frozen=True)
class ScenarioBound:
    """Bounds on the free-edge value x (v_free = -x), plus attainment data.

    `triangle_bound` / `spectral_bound` are upper bounds on x (None when the
    scenario has no free edges); `feasible` is set only in the no-free-edge
    case; `attaining_state` is present when the top eigenstate reproduces
    the scenario pattern exactly.
    """

    n: int
    triangle_bound: float | None
    spectral_bound: float | None
    lambda_max: float
    improvement: bool | None
    feasible: bool | None
    pattern_attained: bool
    attaining_state: states.PureState | None
    attaining_v: np.ndarray | None

    def to_jsonable(self) -> dict:
        return {
            "n": self.n,
            "triangle_bound": None if self.triangle_bound is None else float(self.triangle_bound),
            "spectral_bound": None if self.spectral_bound is None else float(self.spectral_bound),
            "lambda_max": float(self.lambda_max),
            "improvement": self.improvement,
            "feasible": self.feasible,
            "pattern_attained": bool(self.pattern_attained),
            "attaining_state": (
                None if self.attaining_state is None else states.state_to_jsonable(self.attaining_state)
            ),
            "attaining_v": (
                None if self.attaining_v is None else [float(x) for x in self.attaining_v]
            ),
            "pairs": [p.label() for p in group_core.canonical_pairs(self.n)],
        }


def _triangle_pattern(graph: ScenarioGraph, boxes) -> list | None:
    """Slot values for one triangle in tri-canonical order (pq, qr, pr);
    None when an edge is neither fixed nor free (no clean bound)."""
    p, q, r = sorted(boxes)
    fixed = graph.fixed_map
    free = set(graph.free)
    slots = []
    for a, b in ((p, q), (q, r), (p, r)):
        pair = group_core.Pair(a, b)
        if pair in fixed:
            slots.append(float(fixed[pair]))
        elif pair in free:
            slots.append(None)
        else:
            return None
    return slots


def _triangle_x_bound(slots) -> float:
    """Largest x in [0, 1] keeping the slot pattern inside the region.

    The membership lhs is convex in x, so the feasible set is an interval
    anchored at the fixed-only pattern; bisection on the boundary predicate
    resolves the endpoint far below any reported tolerance.
    """

    def margin(x: float) -> float:
        v = [(-x if s is None else s) for s in slots]
        return monogamy.check_sqrt(v)

    if margin(0.0) < -BOUND_PREDICATE_TOL:
        raise InfeasibleError(f"fixed edges alone violate the region: pattern {slots}")
    if margin(1.0) >= -BOUND_PREDICATE_TOL:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2.0
        if margin(mid) >= -BOUND_PREDICATE_TOL:
            lo = mid
        else:
            hi = mid
    return lo


def triangle_bounds(graph: ScenarioGraph) -> float:
    """Tightest upper bound on x implied by three-box relations alone.

    Every box triangle whose edges are all fixed-or-free contributes; fixed-
    only triangles are checked for consistency, triangles touching an
    unconstrained edge are skipped.
    """
    if not graph.free:
        raise ValidationError("scenario has no free edges; nothing to bound")
    best = 1.0
    found = False
    for boxes in itertools.combinations(range(graph.n), 3):
        slots = _triangle_pattern(graph, boxes)
        if slots is None:
            continue
        if all(s is not None for s in slots):
            if monogamy.check_sqrt(slots) < -BOUND_PREDICATE_TOL:
                raise InfeasibleError(f"fixed triangle {boxes} violates the region")
            continue
        found = True
        best = min(best, _triangle_x_bound(slots))
    if not found:
        raise ValidationError("no triangle covers a free edge with fixed/free edges only")
    return best


def _scenario_objective(graph: ScenarioGraph) -> extremal.Objective:
    """Signed objective with coefficient s_e on fixed edges and -1 on free
    edges, so <M> = (#fixed) + (#free) x under the scenario pattern."""
    coeffs = {p: float(v) for p, v in graph.fixed}
    coeffs.update({p: -1.0 for p in graph.free})
    return extremal.Objective.from_pairs(graph.n, coeffs)


def spectral_bound(graph: ScenarioGraph) -> ScenarioBound:
    """Bound on x from the largest eigenvalue of the scenario objective.

    lambda >= <M> = F + k x gives x <= (lambda - F)/k; with no free edges
    the scenario is feasible iff lambda reaches F.  The top eigenstate's
    v-vector is checked against the scenario pattern.
    """
    if graph.n > SPECTRAL_MAX_BOXES:
        raise CapacityError(
            f"spectral bound supports n <= {SPECTRAL_MAX_BOXES}, got {graph.n}"
        )
    objective = _scenario_objective(graph)
    top = extremal.max_expectation(objective)
    lam = top.value
    n_fixed, n_free = len(graph.fixed), len(graph.free)
    pairs = group_core.canonical_pairs(graph.n)
    v = top.v

    x_bound = None if n_free == 0 else (lam - n_fixed) / n_free
    feasible = None
    if n_free == 0:
        feasible = bool(lam >= n_fixed - PATTERN_TOL)

    fixed = graph.fixed_map
    free = set(graph.free)
    def matches(pair, value) -> bool:
        idx = pairs.index(pair)
        return abs(v[idx] - value) <= PATTERN_TOL

    attained = all(matches(p, val) for p, val in fixed.items())
    if n_free:
        attained = attained and all(matches(p, -x_bound) for p in free)
    else:
        attained = attained and feasible

    return ScenarioBound(
        n=graph.n,
        triangle_bound=None,
        spectral_bound=x_bound,
        lambda_max=lam,
        improvement=None,
        feasible=feasible,
        pattern_attained=bool(attained),
        attaining_state=top.state if attained else None,
        attaining_v=v if attained else None,
    )


def scenario_report(graph: ScenarioGraph) -> ScenarioBound:
    """Both bounds plus a flag for whether the spectral bound strictly
    improves on the triangle-only analysis."""
    tri = triangle_bounds(graph) if graph.free else None
    spectral = spectral_bound(graph)
    improvement = None
    if tri is not None and spectral.spectral_bound is not None:
        improvement = bool(spectral.spectral_bound < tri - PATTERN_TOL)
    return ScenarioBound(
        n=graph.n,
        triangle_bound=tri,
        spectral_bound=spectral.spectral_bound,
        lambda_max=spectral.lambda_max,
        improvement=improvement,
        feasible=spectral.feasible,
        pattern_attained=spectral.pattern_attained,
        attaining_state=spectral.attaining_state,
        attaining_v=spectral.attaining_v,
    )
