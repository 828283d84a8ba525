"""Graph-state amplitudes, stabilizer checks and overlaps with product states.

The graph state is ``2^{-n/2} sum_mu (-1)^{e(mu)} |mu>`` where ``e(mu)`` is
the number of edges inside the support of ``mu``. Public operations stream
over ``mu`` in index order in chunks of ``2^CHUNK_BITS`` amplitudes, so
memory stays bounded for ``n`` up to ``MAX_VERTICES``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graph_core import Graph, GraphError, VertexSet, check_vertex_set, induced_edge_parity, members, popcount

CHUNK_BITS = 16
TWO_PI = 2.0 * math.pi

CoeffVector = tuple[int, ...]


@dataclass(frozen=True)
class ProductState:
    """Product of ``sqrt(p_a)|0> + sqrt(1-p_a) e^{i phi_a}|1>`` over qubits."""

    p: tuple[float, ...]
    phi: tuple[float, ...]

    def __post_init__(self) -> None:
        p = tuple(float(v) for v in self.p)
        phi = tuple(float(v) % TWO_PI for v in self.phi)
        if len(p) != len(phi):
            raise ValueError(f"{len(p)} probabilities but {len(phi)} phases")
        for a, v in enumerate(p):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"p[{a}] = {v} outside [0, 1]")
        for a, v in enumerate(phi):
            if not math.isfinite(v):
                raise ValueError(f"phi[{a}] is not finite")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def uniform(cls, n: int, p: float, phi: float) -> ProductState:
        return cls((p,) * n, (phi,) * n)

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def x(self) -> np.ndarray:
        return np.sqrt(np.asarray(self.p))

    @property
    def y(self) -> np.ndarray:
        return np.sqrt(1.0 - np.asarray(self.p)) * np.exp(1j * np.asarray(self.phi))


# ---------------------------------------------------------------------------
# sign enumeration


def parity_of_indices(g: Graph, idx: np.ndarray) -> np.ndarray:
    """Induced-edge parity of every basis index in ``idx``, computed per vertex."""
    idx = np.asarray(idx, dtype=np.int64)
    out = np.zeros(idx.shape, dtype=np.int64)
    for a in range(g.n):
        lower = g.adj[a] & ((1 << a) - 1)
        if lower:
            out ^= ((idx >> a) & 1) & np.bitwise_count(idx & lower).astype(np.int64)
    return (out & 1).astype(np.int8)


def _low_parity_table(g: Graph, bits: int) -> np.ndarray:
    # doubling: parity(i + 2^a) = parity(i) ^ |N_a & i| mod 2 for i < 2^a
    table = np.zeros(1, dtype=np.int8)
    for a in range(bits):
        idx = np.arange(1 << a, dtype=np.int64)
        extra = (np.bitwise_count(idx & g.adj[a]) & 1).astype(np.int8)
        table = np.concatenate([table, table ^ extra])
    return table


def iter_sign_chunks(g: Graph, chunk_bits: int | None = None) -> Iterator[tuple[int, int, np.ndarray]]:
    """Yield ``(high, low_bits, signs)`` covering all ``mu`` in index order.

    ``signs[l]`` is ``(-1)^{e(mu)}`` for ``mu = (high << low_bits) | l``.
    """
    low_bits = min(g.n, CHUNK_BITS if chunk_bits is None else chunk_bits)
    low_mask = (1 << low_bits) - 1
    low_parity = _low_parity_table(g, low_bits)
    idx = np.arange(1 << low_bits, dtype=np.int64)
    for high in range(1 << (g.n - low_bits)):
        hmask = high << low_bits
        cross = 0
        for a in members(hmask):
            cross ^= g.adj[a] & low_mask
        par = low_parity ^ induced_edge_parity(g, hmask)
        if cross:
            par = par ^ (np.bitwise_count(idx & cross) & 1).astype(np.int8)
        yield high, low_bits, (1 - 2 * par.astype(np.int64)).astype(np.int8)


def sign_vector(g: Graph) -> np.ndarray:
    """All ``2^n`` signs at once; only for internal use at modest ``n``."""
    return np.concatenate([s for _, _, s in iter_sign_chunks(g)])


# ---------------------------------------------------------------------------
# amplitudes and stabilizers


def amplitude(g: Graph, mu: VertexSet) -> float:
    return (-1.0) ** induced_edge_parity(g, mu) * 2.0 ** (-g.n / 2)


def basis_amplitude(g: Graph, k: VertexSet, mu: VertexSet) -> float:
    """Amplitude of ``mu`` in ``prod_a Z_a^{k_a} |G>``."""
    check_vertex_set(g, k)
    return (-1.0) ** popcount(k & mu) * amplitude(g, mu)


def verify_stabilizer(g: Graph, a: int) -> bool:
    """Check ``X_a Z_{N_a} |G> = |G>`` amplitude by amplitude."""
    if not 0 <= a < g.n:
        raise GraphError(f"vertex {a} out of range for n={g.n}")
    nbrs = g.adj[a]
    size = 1 << g.n
    step = 1 << min(g.n, CHUNK_BITS)
    for start in range(0, size, step):
        mu = np.arange(start, start + step, dtype=np.int64)
        lhs_sign = (np.bitwise_count(mu & nbrs) & 1) ^ parity_of_indices(g, mu ^ (1 << a))
        if np.any(lhs_sign != parity_of_indices(g, mu)):
            return False
    return True


# ---------------------------------------------------------------------------
# overlaps


def _weight_table(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Weights ``prod_a (x_a or y_a)`` for every index; bit ``a`` picks qubit ``a``."""
    w = np.ones(1, dtype=complex)
    for xa, ya in zip(x, y):
        w = np.concatenate([w * xa, w * ya])
    return w


def product_overlap(g: Graph, s: ProductState) -> complex:
    """``<G|phi>`` by an exact sum over all ``2^n`` basis states."""
    if s.n != g.n:
        raise ValueError(f"product state has {s.n} qubits, graph has {g.n} vertices")
    x, y = s.x, s.y
    low_bits = min(g.n, CHUNK_BITS)
    w_low = _weight_table(x[:low_bits], y[:low_bits])
    total = 0j
    for high, lb, signs in iter_sign_chunks(g, low_bits):
        w_high = 1 + 0j
        for j in range(g.n - lb):
            w_high *= y[lb + j] if (high >> j) & 1 else x[lb + j]
        if w_high != 0:
            total += w_high * complex(np.dot(signs, w_low))
    return complex(total * 2.0 ** (-g.n / 2))


def fidelity(g: Graph, s: ProductState) -> float:
    return min(abs(product_overlap(g, s)) ** 2, 1.0)


def symmetric_coefficients(g: Graph) -> CoeffVector:
    """Signed count of basis states per Hamming weight: ``c_j = sum_{|mu|=j} (-1)^{e(mu)}``."""
    c = np.zeros(g.n + 1, dtype=np.int64)
    low_bits = min(g.n, CHUNK_BITS)
    low_pop = np.bitwise_count(np.arange(1 << low_bits, dtype=np.int64)).astype(np.int64)
    for high, _, signs in iter_sign_chunks(g, low_bits):
        pop = low_pop + popcount(high)
        c += np.bincount(pop[signs > 0], minlength=g.n + 1)[: g.n + 1]
        c -= np.bincount(pop[signs < 0], minlength=g.n + 1)[: g.n + 1]
    return tuple(int(v) for v in c)


def symmetric_overlap(c: Sequence[int], p: float, phi: float) -> complex:
    """``<G|phi^{(x)n}>`` for the uniform product state from the coefficient vector."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p} outside [0, 1]")
    n = len(c) - 1
    x = math.sqrt(p)
    y = math.sqrt(1.0 - p) * complex(math.cos(phi), math.sin(phi))
    total = 0j
    xp = [1.0] * (n + 1)
    for k in range(1, n + 1):
        xp[k] = xp[k - 1] * x
    yj = 1 + 0j
    for j, cj in enumerate(c):
        if cj:
            total += cj * xp[n - j] * yj
        yj *= y
    return total * 2.0 ** (-n / 2)


def symmetric_fidelity(c: Sequence[int], p: float, phi: float) -> float:
    return abs(symmetric_overlap(c, p, phi)) ** 2
