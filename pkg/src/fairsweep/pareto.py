"""Pareto dominance and frontier extraction over evaluation records.

Both objectives are maximized. Weak dominance needs >= in both
coordinates and > in at least one, so exact duplicates never dominate
each other and all copies of a frontier point survive. Strict dominance
needs > in both, which keeps a superset of the weak frontier.

The extractor sorts candidates by descending accuracy and sweeps once
with a running best fairness, handling equal-accuracy tie groups in one
step; it is O(n log n) against the O(n^2) pairwise definition.
"""
from __future__ import annotations

from dataclasses import dataclass

from .grid import EvaluationRecord
from .metrics import METRIC_IDS
from .models import FAMILIES

MODES = ("weak", "strict")
GROUPINGS = ("per_family", "all_families")
ACCURACY_OBJECTIVES = ("accuracy", "balanced_accuracy")


class ParetoError(ValueError):
    """Invalid objective, mode, or grouping."""


@dataclass(frozen=True)
class ObjectivePair:
    """(x, y) objectives: an accuracy axis and a fairness score axis."""

    x: str = "accuracy"
    y: str = "statistical_parity"

    def __post_init__(self):
        if self.x not in ACCURACY_OBJECTIVES:
            raise ParetoError(f"unknown accuracy objective: {self.x!r}")
        if self.y not in METRIC_IDS:
            raise ParetoError(f"unknown fairness metric: {self.y!r}")


def objective_values(r: EvaluationRecord, pair: ObjectivePair) -> tuple[float, float]:
    """The (x, y) coordinates of a record; raises if either is undefined."""
    x = r.objective_value(pair.x)
    y = r.objective_value(pair.y)
    if x is None or y is None:
        which = pair.x if x is None else pair.y
        raise ParetoError(
            f"objective {which!r} is undefined for assignment {r.assignment!r}"
        )
    return x, y


def dominates(a: EvaluationRecord, b: EvaluationRecord, pair: ObjectivePair, mode: str = "weak") -> bool:
    """Whether a dominates b under the given mode."""
    if mode not in MODES:
        raise ParetoError(f"unknown dominance mode: {mode!r}")
    ax, ay = objective_values(a, pair)
    bx, by = objective_values(b, pair)
    if mode == "strict":
        return ax > bx and ay > by
    return ax >= bx and ay >= by and (ax > bx or ay > by)


@dataclass(frozen=True)
class ParetoSet:
    """Frontier for one family (or the pooled record set)."""

    pair: ObjectivePair
    mode: str
    grouping: str
    family: str | None
    members: tuple[EvaluationRecord, ...]
    excluded_undefined: int

    def coordinates(self) -> list[tuple[float, float]]:
        return [objective_values(r, self.pair) for r in self.members]

    def to_json_dict(self) -> dict:
        members = []
        for r in self.members:
            x, y = objective_values(r, self.pair)
            doc = r.to_json_dict()
            doc["x"] = x
            doc["y"] = y
            members.append(doc)
        return {
            "pair": {"x": self.pair.x, "y": self.pair.y},
            "mode": self.mode,
            "grouping": self.grouping,
            "family": self.family,
            "excluded_undefined": self.excluded_undefined,
            "members": members,
        }


def _sweep(indexed: list[tuple[float, float, int]], mode: str) -> list[int]:
    """Indices of frontier points among (x, y, index) triples.

    Walks tie groups of equal x in descending x order, keeping a running
    best y over the groups already passed.
    """
    ordered = sorted(indexed, key=lambda t: -t[0])
    keep: list[int] = []
    best_y = float("-inf")
    i = 0
    n = len(ordered)
    while i < n:
        j = i
        while j < n and ordered[j][0] == ordered[i][0]:
            j += 1
        group = ordered[i:j]
        group_best = max(t[1] for t in group)
        if mode == "weak":
            # only the top-y points of an x tie group can survive, and
            # only if they beat every higher-x point's y
            if group_best > best_y:
                keep.extend(t[2] for t in group if t[1] == group_best)
        else:
            # strict mode: a point falls only to strictly higher x AND y
            keep.extend(t[2] for t in group if t[1] >= best_y)
        best_y = max(best_y, group_best)
        i = j
    return keep


def _extract_one(
    records: list[EvaluationRecord],
    pair: ObjectivePair,
    mode: str,
    grouping: str,
    family: str | None,
) -> ParetoSet:
    indexed = []
    excluded = 0
    for i, r in enumerate(records):
        x = r.objective_value(pair.x)
        y = r.objective_value(pair.y)
        if x is None or y is None:
            excluded += 1
            continue
        indexed.append((x, y, i))
    keep = _sweep(indexed, mode)
    coords = {i: (x, y) for x, y, i in indexed}
    keep.sort(key=lambda i: (coords[i][0], -coords[i][1], i))
    return ParetoSet(
        pair=pair,
        mode=mode,
        grouping=grouping,
        family=family,
        members=tuple(records[i] for i in keep),
        excluded_undefined=excluded,
    )


def extract_frontier(
    records,
    pair: ObjectivePair,
    mode: str = "weak",
    grouping: str = "per_family",
) -> list[ParetoSet]:
    """Frontier sets over the records: one per family present, or one
    pooled set when grouping is "all_families". Records with an
    undefined objective are counted in excluded_undefined and take no
    part."""
    if mode not in MODES:
        raise ParetoError(f"unknown dominance mode: {mode!r}")
    if grouping not in GROUPINGS:
        raise ParetoError(f"unknown grouping: {grouping!r}")
    records = list(records)
    if grouping == "all_families":
        return [_extract_one(records, pair, mode, grouping, None)]
    out = []
    for family in FAMILIES:
        subset = [r for r in records if r.family == family]
        if subset:
            out.append(_extract_one(subset, pair, mode, grouping, family))
    return out
