"""Link-prediction proxy: holdout split, typed negatives, heuristic scoring.

Pipeline: hold out a fraction of edges as test positives, corrupt each
positive's destination within its node type to get negatives, score all
candidates with a neighborhood heuristic over the undirected
type-agnostic view of the train edges, then report AUC and MRR over the
same candidate sets.  Sparsification, when requested, is applied to the
train portion only, so full-graph and sparsified runs share identical
test sets and negatives and their metrics are directly comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import (_adamic_adar_scores, _common_neighbor_scores,
                       _sample_negatives, _shuffle_prefix)
from ._rng import state_buffer, substream_seed
from .errors import DegenerateSplitError, NegativeSamplingError
from .graph import HeteroGraph
from .sparsify import SparsifyParams, sparsify

COMMON_NEIGHBORS = "common-neighbors"
ADAMIC_ADAR = "adamic-adar"
SCORERS = (COMMON_NEIGHBORS, ADAMIC_ADAR)

_SCORE_KERNELS = {
    COMMON_NEIGHBORS: _common_neighbor_scores,
    ADAMIC_ADAR: _adamic_adar_scores,
}


@dataclass(frozen=True)
class EdgeSplit:
    train_ids: np.ndarray
    test_pos_ids: np.ndarray
    holdout_fraction: float
    seed: int


@dataclass(frozen=True)
class EvalReport:
    auc: float
    mrr: float
    negatives_per_positive: int
    scorer: str
    positives: int

    def to_dict(self) -> dict:
        return {"auc": self.auc, "mrr": self.mrr,
                "negatives_per_positive": self.negatives_per_positive,
                "scorer": self.scorer, "positives": self.positives}


def split_edges(g: HeteroGraph, holdout_fraction: float, seed: int = 0) -> EdgeSplit:
    """Uniform edge holdout; test size is round-half-up(fraction * m)."""
    if not 0.0 < holdout_fraction < 1.0:
        raise ValueError(f"holdout_fraction must be in (0, 1), got {holdout_fraction}")
    if g.m < 2:
        raise DegenerateSplitError(f"need at least 2 edges to split, have {g.m}")
    test_count = int(math.floor(holdout_fraction * g.m + 0.5))
    if test_count == 0 or test_count == g.m:
        raise DegenerateSplitError(
            f"holdout {holdout_fraction} of m={g.m} edges leaves an empty side")
    pool = np.arange(g.m, dtype=np.int64)
    _shuffle_prefix(pool, g.m, test_count, state_buffer(seed))
    return EdgeSplit(
        train_ids=np.sort(pool[test_count:]),
        test_pos_ids=np.sort(pool[:test_count]),
        holdout_fraction=holdout_fraction,
        seed=seed,
    )


def _negative_matrix(g: HeteroGraph, pos_ids: np.ndarray, per_pos: int,
                     seed: int) -> np.ndarray:
    """Dense dst ids, shape (len(pos_ids), per_pos).

    Destination corruption: for positive (u, v, t), candidates are drawn
    uniformly from v's node-type population, rejecting w with (u, w, t)
    already an edge of g; duplicates across the per_pos draws are fine.
    """
    if per_pos < 1:
        raise ValueError(f"per_pos must be >= 1, got {per_pos}")
    pos_ids = np.ascontiguousarray(pos_ids, dtype=np.int64)
    pos_src = np.ascontiguousarray(g.src[pos_ids])
    pos_dst_type = np.ascontiguousarray(g.node_types[g.dst[pos_ids]])
    pos_etype = np.ascontiguousarray(g.etype[pos_ids])
    type_span = int(g.node_types.max()) + 1 if g.n else 1
    pop_nodes = np.argsort(g.node_types, kind="stable").astype(np.int64)
    pop_ptr = np.concatenate(
        ([0], np.cumsum(np.bincount(g.node_types, minlength=type_span)))
    ).astype(np.int64)
    out = np.empty((pos_ids.shape[0], per_pos), dtype=np.int64)
    scratch = np.empty(max(int(np.diff(pop_ptr).max()), 1), dtype=np.int64)
    fail = _sample_negatives(
        g.src, g.dst, g.etype, pos_src, pos_dst_type, pos_etype,
        pop_ptr, pop_nodes, per_pos, out, scratch, state_buffer(seed))
    if fail >= 0:
        raise NegativeSamplingError(
            f"positive {g.edge_key(int(pos_ids[fail]))} has no "
            f"type-compatible non-edge destination")
    return out


def sample_negatives(g: HeteroGraph, test_pos, per_pos: int,
                     seed: int = 0) -> dict[tuple[int, int, int], list[tuple[int, int, int]]]:
    """Map each positive identity to its per_pos corrupted identities."""
    pos_ids = np.flatnonzero(g.edge_mask(test_pos))
    matrix = _negative_matrix(g, pos_ids, per_pos, seed)
    result: dict[tuple[int, int, int], list[tuple[int, int, int]]] = {}
    for row, edge_id in enumerate(pos_ids):
        s, _, t = g.edge_key(int(edge_id))
        result[g.edge_key(int(edge_id))] = [
            (s, int(g.node_ids[w]), t) for w in matrix[row]]
    return result


class TrainView:
    """Undirected, type-agnostic, deduplicated CSR over a train edge set."""

    __slots__ = ("graph", "ptr", "nbrs")

    def __init__(self, graph: HeteroGraph, ptr: np.ndarray, nbrs: np.ndarray):
        self.graph = graph
        self.ptr = ptr
        self.nbrs = nbrs

    @classmethod
    def from_graph(cls, g: HeteroGraph, selected=None) -> "TrainView":
        mask = g.edge_mask(selected)
        a = np.concatenate((g.src[mask], g.dst[mask]))
        b = np.concatenate((g.dst[mask], g.src[mask]))
        order = np.lexsort((b, a))
        a = a[order]
        b = b[order]
        if a.size:
            keep = np.concatenate(([True], (a[1:] != a[:-1]) | (b[1:] != b[:-1])))
            a = a[keep]
            b = b[keep]
        ptr = np.concatenate(
            ([0], np.cumsum(np.bincount(a, minlength=g.n)))).astype(np.int64)
        return cls(g, ptr, np.ascontiguousarray(b, dtype=np.int64))

    def neighbors(self, u: int) -> np.ndarray:
        """Dense neighbor ids of original node u, ascending."""
        ud = self.graph.dense_id(u)
        return self.nbrs[self.ptr[ud]:self.ptr[ud + 1]].copy()


def score_pairs(view: TrainView, us_dense, vs_dense, scorer: str) -> np.ndarray:
    """Heuristic scores for parallel dense-id pair arrays."""
    if scorer not in _SCORE_KERNELS:
        raise ValueError(f"scorer must be one of {SCORERS}, got {scorer!r}")
    us = np.ascontiguousarray(us_dense, dtype=np.int64)
    vs = np.ascontiguousarray(vs_dense, dtype=np.int64)
    out = np.empty(us.shape[0], dtype=np.float64)
    _SCORE_KERNELS[scorer](view.ptr, view.nbrs, us, vs, out)
    return out


def score_pair(view: TrainView, u: int, v: int, scorer: str = COMMON_NEIGHBORS) -> float:
    """Score one (u, v) pair given with original node ids."""
    ud = view.graph.dense_id(u)
    vd = view.graph.dense_id(v)
    return float(score_pairs(view, [ud], [vd], scorer)[0])


def auc(pos_scores, neg_scores) -> float:
    """P(pos > neg) + 0.5 * P(pos = neg) over all pairs, via tied rank sums."""
    pos = np.asarray(pos_scores, dtype=np.float64)
    neg = np.asarray(neg_scores, dtype=np.float64)
    if pos.size == 0 or neg.size == 0:
        raise ValueError("auc needs at least one positive and one negative score")
    scores = np.concatenate((pos, neg))
    order = np.argsort(scores, kind="mergesort")
    ordered = scores[order]
    starts = np.concatenate(([0], np.flatnonzero(ordered[1:] != ordered[:-1]) + 1))
    ends = np.concatenate((starts[1:], [ordered.size]))
    # average 1-based rank of each tie group
    group_ranks = (starts + ends + 1) / 2.0
    ranks = np.empty(ordered.size, dtype=np.float64)
    ranks[order] = np.repeat(group_ranks, ends - starts)
    pos_rank_sum = ranks[:pos.size].sum()
    return float((pos_rank_sum - pos.size * (pos.size + 1) / 2.0)
                 / (pos.size * float(neg.size)))


def candidate_ranks(pos_scores, neg_score_matrix) -> np.ndarray:
    """1-based rank of each positive among itself and its own negatives.

    Ties take the average of the best and worst compatible rank.
    """
    pos = np.asarray(pos_scores, dtype=np.float64)
    neg = np.asarray(neg_score_matrix, dtype=np.float64)
    if neg.ndim != 2 or neg.shape[0] != pos.shape[0]:
        raise ValueError("neg_score_matrix must be (len(pos_scores), per_pos)")
    beaten_by = (neg > pos[:, None]).sum(axis=1)
    beaten_or_tied = (neg >= pos[:, None]).sum(axis=1)
    return 0.5 * (beaten_by + beaten_or_tied) + 1.0


def mrr(ranks) -> float:
    """Mean reciprocal rank; ranks are 1-based, possibly fractional (ties)."""
    arr = np.asarray(ranks, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("mrr needs at least one rank")
    if (arr < 1.0).any():
        raise ValueError("ranks must be >= 1")
    return float(np.mean(1.0 / arr))


def evaluate(g: HeteroGraph, holdout: float = 0.2, seed: int = 0,
             scorer: str = COMMON_NEIGHBORS, negatives_per_positive: int = 19,
             sparsify_params: SparsifyParams | None = None) -> EvalReport:
    """Full pipeline on one graph; identical split/negatives per seed.

    With ``sparsify_params`` set, only the train edges are sparsified
    before scoring; the test side is untouched.
    """
    split = split_edges(g, holdout, seed)
    neg = _negative_matrix(g, split.test_pos_ids, negatives_per_positive,
                           substream_seed(seed, 1))
    train_mask = np.zeros(g.m, dtype=bool)
    train_mask[split.train_ids] = True
    train_g = g.subgraph(train_mask)
    if sparsify_params is not None:
        view = TrainView.from_graph(train_g, sparsify(train_g, sparsify_params).mask)
    else:
        view = TrainView.from_graph(train_g)
    pos_u = g.src[split.test_pos_ids]
    pos_v = g.dst[split.test_pos_ids]
    pos_scores = score_pairs(view, pos_u, pos_v, scorer)
    neg_scores = score_pairs(
        view, np.repeat(pos_u, negatives_per_positive), neg.ravel(), scorer
    ).reshape(neg.shape)
    return EvalReport(
        auc=auc(pos_scores, neg_scores.ravel()),
        mrr=mrr(candidate_ranks(pos_scores, neg_scores)),
        negatives_per_positive=negatives_per_positive,
        scorer=scorer,
        positives=int(split.test_pos_ids.shape[0]),
    )
