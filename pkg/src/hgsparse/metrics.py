"""Structural checks and summary statistics for sparsifier outputs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraphError
from .graph import IN, OUT, HeteroGraph
from .sparsify import METHODS, PER_TYPE


@dataclass(frozen=True)
class CoverageViolation:
    node: int
    direction: str
    etype: int
    required: int
    actual: int

    def to_dict(self) -> dict:
        return {"node": self.node, "direction": self.direction,
                "etype": self.etype, "required": self.required,
                "actual": self.actual}


def sparsification_ratio(g: HeteroGraph, selected) -> float:
    """|H| / m."""
    if g.m == 0:
        raise EmptyGraphError("ratio undefined on an empty graph")
    return float(g.edge_mask(selected).sum()) / g.m


def coverage_report(g: HeteroGraph, selected, k: int,
                    method: str = PER_TYPE) -> list[CoverageViolation]:
    """Every nonempty bucket whose kept-edge count is under the method's floor.

    The floor is min(k, |bucket|) for per-type and 1 for all-types.
    Violations are listed exhaustively (out-direction buckets first,
    then in-direction, each in (node, etype) order) so reports diff
    cleanly.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    mask = g.edge_mask(selected)
    violations: list[CoverageViolation] = []
    if g.m == 0:
        return violations
    for direction in (OUT, IN):
        idx = g._dir_index(direction)
        sizes = np.diff(idx.bkt_ptr)
        kept = np.add.reduceat(mask[idx.order].astype(np.int64), idx.bkt_ptr[:-1])
        if method == PER_TYPE:
            required = np.minimum(k, sizes)
        else:
            required = np.ones_like(sizes)
        key = g.src if direction == OUT else g.dst
        for b in np.flatnonzero(kept < required):
            first_edge = idx.order[idx.bkt_ptr[b]]
            violations.append(CoverageViolation(
                node=int(g.node_ids[key[first_edge]]),
                direction=direction,
                etype=int(idx.bkt_etype[b]),
                required=int(required[b]),
                actual=int(kept[b]),
            ))
    return violations


def isolated_nodes(g: HeteroGraph, selected) -> set[int]:
    """Original ids of nodes with edges in g but none in the selection."""
    mask = g.edge_mask(selected)
    kept_deg = (np.bincount(g.src[mask], minlength=g.n)
                + np.bincount(g.dst[mask], minlength=g.n))
    lost = (g.degrees() > 0) & (kept_deg == 0)
    return {int(u) for u in g.node_ids[lost]}


def per_type_kept(g: HeteroGraph, selected) -> dict[int, int]:
    """Kept-edge count for every edge type present in g."""
    mask = g.edge_mask(selected)
    if g.t == 0:
        return {}
    counts = np.bincount(g.etype[mask], minlength=int(g.etype_ids[-1]) + 1)
    return {int(t): int(counts[t]) for t in g.etype_ids}
