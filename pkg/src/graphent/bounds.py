"""Integer entanglement bounds for graph states.

Upper bound: ``n - |A|`` with ``A`` a maximum independent set, witnessed by
an explicit product state. Lower bound: the GF(2) rank of the adjacency
block across a bipartition (the number of Bell pairs across that cut).
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph_core import (
    Graph,
    GraphError,
    VertexSet,
    check_vertex_set,
    cross_block,
    gf2_rank,
    labels,
    members,
    popcount,
    rank_of_rows,
)
from .state import ProductState

EXHAUSTIVE_BIPARTITION_MAX_N = 20
SCHMIDT_ORACLE_MAX_N = 12
SINGULAR_VALUE_THRESHOLD = 1e-9


@dataclass(frozen=True)
class MisResult:
    size: int
    witness: VertexSet


@dataclass(frozen=True)
class BipartitionResult:
    side: VertexSet
    ebits: int


# ---------------------------------------------------------------------------
# maximum independent set


def _mis_size(adj: tuple[int, ...], cand: VertexSet, target: int = 0) -> int:
    """Size of a maximum independent set inside ``cand``.

    Branch on the highest-degree vertex of the remaining subgraph (include,
    then exclude); prune when the remaining vertex count cannot beat the
    incumbent. Returns as soon as ``target`` (if positive) is reached.
    """
    best = 0

    def search(cand: int, size: int) -> bool:
        nonlocal best
        if size + popcount(cand) <= best:
            return False
        pick, pick_deg = -1, -1
        for v in members(cand):
            d = popcount(adj[v] & cand)
            if d > pick_deg:
                pick, pick_deg = v, d
        if pick_deg <= 0:
            # remaining vertices are mutually non-adjacent
            best = size + popcount(cand)
            return bool(target) and best >= target
        bit = 1 << pick
        if search(cand & ~bit & ~adj[pick], size + 1):
            return True
        return search(cand & ~bit, size)

    search(cand, 0)
    return best


def max_independent_set(g: Graph) -> MisResult:
    """Exact maximum independent set; the witness is lexicographically smallest."""
    size = _mis_size(g.adj, g.full)
    chosen = 0
    # vertices below v that were skipped are excluded for good
    allowed = g.full
    for v in range(g.n):
        bit = 1 << v
        if not (allowed & bit):
            continue
        need = size - popcount(chosen) - 1
        rest = allowed & ~bit & ~g.adj[v] & ~((bit << 1) - 1)
        if need <= 0 or _mis_size(g.adj, rest, need) >= need:
            chosen |= bit
            allowed &= ~g.adj[v]
            if popcount(chosen) == size:
                break
        allowed &= ~bit
    assert popcount(chosen) == size and g.is_independent(chosen)
    return MisResult(size, chosen)


def independent_set_upper_bound(g: Graph) -> int:
    return g.n - max_independent_set(g).size


def witness_product_state(g: Graph, a_set: VertexSet) -> ProductState:
    """``|+>`` on every vertex of the independent set, ``|0>`` elsewhere.

    Its fidelity with the graph state is ``2^{-(n - |a_set|)}``.
    """
    check_vertex_set(g, a_set)
    if not g.is_independent(a_set):
        raise GraphError(f"vertex set {labels(a_set)} is not independent")
    p = tuple(0.5 if (a_set >> a) & 1 else 1.0 for a in range(g.n))
    return ProductState(p, (0.0,) * g.n)


# ---------------------------------------------------------------------------
# bipartite lower bounds


def _check_side(g: Graph, side: VertexSet) -> None:
    check_vertex_set(g, side)
    if side == 0 or side == g.full:
        raise GraphError("bipartition needs both sides non-empty")


def bipartite_entanglement(g: Graph, side: VertexSet) -> BipartitionResult:
    """Ebits across ``(side, complement)`` as the GF(2) rank of the cross block."""
    _check_side(g, side)
    return BipartitionResult(side, gf2_rank(cross_block(g, side)))


def _cut_rank(g: Graph, side: VertexSet) -> int:
    other = g.full & ~side
    return rank_of_rows(g.adj[a] & other for a in members(side))


def best_bipartite_lower_bound(g: Graph, candidates: Iterable[VertexSet] | None = None) -> BipartitionResult:
    """Largest cut rank over bipartitions.

    Without ``candidates`` every bipartition with vertex 1 on ``side`` is tried
    (requires ``n <= 20``). Ties go to the lexicographically smallest side.
    """
    if g.n == 1:
        raise GraphError("a single vertex has no bipartition")
    if candidates is None:
        if g.n > EXHAUSTIVE_BIPARTITION_MAX_N:
            raise GraphError(
                f"exhaustive bipartition search needs n <= {EXHAUSTIVE_BIPARTITION_MAX_N}; pass candidate sides"
            )
        candidates = ((m << 1) | 1 for m in range((1 << (g.n - 1)) - 1))
    best_rank, best_key, best_side = -1, None, 0
    for side in candidates:
        _check_side(g, side)
        k = popcount(side)
        if min(k, g.n - k) < best_rank:
            continue
        r = _cut_rank(g, side)
        if r < best_rank:
            continue
        key = labels(side)
        if r > best_rank or key < best_key:
            best_rank, best_key, best_side = r, key, side
    if best_rank < 0:
        raise GraphError("no candidate bipartitions supplied")
    return BipartitionResult(best_side, best_rank)


@lru_cache(maxsize=32)
def _oracle_amplitudes(g: Graph) -> np.ndarray:
    # deliberately naive: count induced edges from the explicit edge list
    edges = g.edges()
    vec = np.empty(1 << g.n)
    for mu in range(1 << g.n):
        inside = sum(1 for a, b in edges if (mu >> a) & 1 and (mu >> b) & 1)
        vec[mu] = -1.0 if inside % 2 else 1.0
    return vec * 2.0 ** (-g.n / 2)


def schmidt_rank_oracle(g: Graph, side: VertexSet) -> int:
    """``log2`` of the Schmidt rank across the cut, from an SVD of the full state."""
    if g.n > SCHMIDT_ORACLE_MAX_N:
        raise GraphError(f"Schmidt oracle limited to n <= {SCHMIDT_ORACLE_MAX_N}")
    _check_side(g, side)
    # reshape puts qubit a on axis n-1-a
    psi = _oracle_amplitudes(g).reshape((2,) * g.n)
    rows = [g.n - 1 - a for a in members(side)]
    cols = [g.n - 1 - a for a in members(g.full & ~side)]
    mat = psi.transpose(rows + cols).reshape(1 << len(rows), 1 << len(cols))
    sv = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.sum(sv > SINGULAR_VALUE_THRESHOLD))
    ebits = int(round(math.log2(rank)))
    if 1 << ebits != rank:
        raise ArithmeticError(f"Schmidt rank {rank} is not a power of two")
    return ebits
