"""Per-bucket graph sparsifiers.

Two methods over the same sweep skeleton: vertices in ascending total
degree (ties by ascending node id), out-direction before in-direction
per vertex, edges only ever added to the kept set H.

* ``per-type``: within each (node, direction, edge-type) bucket B, keep
  all of B when |B| < k; otherwise top B's intersection with H up to k
  by sampling uniformly without replacement from B - H.  Every bucket
  ends with >= min(k, |B|) kept edges and |H| <= 2ktn.
* ``all-types``: per node-direction, first guarantee one kept edge in
  every nonempty bucket, then top up to k kept edges across all of the
  node-direction's edges regardless of type.  Every bucket stays
  covered and |H| <= 2*max(k, t)*n.

Sampling pools are always in ascending edge-identity order before the
partial shuffle, so a (graph, k, method, seed) tuple fully determines H.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import _sweep
from ._rng import RandomStream, state_buffer
from .errors import EmptyGraphError
from .graph import HeteroGraph

PER_TYPE = "per-type"
ALL_TYPES = "all-types"
METHODS = (PER_TYPE, ALL_TYPES)


@dataclass(frozen=True)
class SparsifyParams:
    k: int
    method: str = PER_TYPE
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be in [0, 2**64), got {self.seed!r}")


@dataclass
class SparsifierResult:
    graph: HeteroGraph
    params: SparsifyParams
    mask: np.ndarray = field(repr=False)  # bool over edge ids
    kept: int
    ratio: float

    @property
    def edge_ids(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def selected_triples(self) -> list[tuple[int, int, int]]:
        """Kept edges as identity triples with original node ids."""
        return self.graph.edge_keys(self.edge_ids)


def vertex_order(g: HeteroGraph) -> np.ndarray:
    """Dense node ids in ascending (total degree, node id) order."""
    return np.lexsort((np.arange(g.n), g.degrees())).astype(np.int64)


def _run_sweep(g: HeteroGraph, params: SparsifyParams) -> SparsifierResult:
    if g.m == 0:
        raise EmptyGraphError("cannot sparsify a graph with no edges")
    out_idx = g._dir_index("out")
    in_idx = g._dir_index("in")
    scratch_len = max(
        int(np.diff(out_idx.node_ptr).max()),
        int(np.diff(in_idx.node_ptr).max()),
        1,
    )
    selected = np.zeros(g.m, dtype=np.bool_)
    scratch = np.empty(scratch_len, dtype=np.int64)
    _sweep(
        params.method == PER_TYPE,
        vertex_order(g),
        out_idx.order, out_idx.bkt_ptr, out_idx.node_bkt_ptr,
        in_idx.order, in_idx.bkt_ptr, in_idx.node_bkt_ptr,
        params.k, selected, scratch, state_buffer(params.seed),
    )
    kept = int(selected.sum())
    return SparsifierResult(graph=g, params=params, mask=selected,
                            kept=kept, ratio=kept / g.m)


def sparsify(g: HeteroGraph, params: SparsifyParams) -> SparsifierResult:
    """Run whichever method ``params`` names."""
    return _run_sweep(g, params)


def sparsify_graph(g: HeteroGraph, params: SparsifyParams) -> SparsifierResult:
    """The per-type method; ``params.method`` must agree."""
    if params.method != PER_TYPE:
        raise ValueError(f"sparsify_graph requires method={PER_TYPE!r}")
    return _run_sweep(g, params)


def sparsify_alt(g: HeteroGraph, params: SparsifyParams) -> SparsifierResult:
    """The all-types method; ``params.method`` must agree."""
    if params.method != ALL_TYPES:
        raise ValueError(f"sparsify_alt requires method={ALL_TYPES!r}")
    return _run_sweep(g, params)


def sample_without_replacement(pool, count: int, rng: RandomStream) -> list:
    """Uniform ``count``-subset of ``pool`` via a partial Fisher-Yates.

    ``pool`` must already be in canonical (ascending identity) order for
    reproducible results.  Selecting the whole pool consumes no stream
    state.
    """
    items = list(pool)
    if not 0 <= count <= len(items):
        raise ValueError(f"count must be in [0, {len(items)}], got {count}")
    if count == len(items):
        return items
    rng.shuffle_prefix(items, count)
    return items[:count]


def sparsify_node_direction(g: HeteroGraph, u: int, direction: str,
                            H: set, k: int, rng: RandomStream) -> set:
    """One vertex-direction step of the per-type method, on identity triples.

    Pure-Python reference for the compiled sweep: updates H in place,
    consuming the stream exactly as the kernel does, and returns H.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    for _etype, ids in g.node_buckets(u, direction):
        keys = g.edge_keys(ids)
        if len(keys) < k:
            H.update(keys)
            continue
        pool = [key for key in keys if key not in H]
        need = k - (len(keys) - len(pool))
        if need <= 0:
            continue
        if need >= len(pool):
            H.update(pool)
            continue
        H.update(sample_without_replacement(pool, need, rng))
    return H
