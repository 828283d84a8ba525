"""Graphs as row bitmasks, the edge-list text format, and GF(2) helpers.

Vertices are 0-based internally and 1-based in every text format. A vertex
set is a plain ``int`` bitmask (bit ``a`` set iff vertex ``a`` is a member).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_VERTICES = 26

VertexSet = int


class GraphError(ValueError):
    """Invalid graph, vertex set, or graph name."""


class GraphSizeError(GraphError):
    """Vertex count outside ``[1, MAX_VERTICES]``."""


class GraphParseError(GraphError):
    def __init__(self, message: str, line: int | None = None, token: str | None = None):
        self.line = line
        self.token = token
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


def popcount(x: int) -> int:
    return bin(x).count("1")


def check_size(n: int) -> None:
    if not 1 <= n <= MAX_VERTICES:
        raise GraphSizeError(f"vertex count {n} outside [1, {MAX_VERTICES}]")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``n`` vertices.

    ``adj[a]`` is the neighbourhood of ``a`` as a bitmask.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        check_size(self.n)
        object.__setattr__(self, "adj", tuple(int(r) for r in self.adj))
        if len(self.adj) != self.n:
            raise GraphError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        full = (1 << self.n) - 1
        for a, row in enumerate(self.adj):
            if row & ~full:
                raise GraphError(f"row {a} has bits beyond vertex {self.n - 1}")
            if (row >> a) & 1:
                raise GraphError(f"self-loop at vertex {a}")
            for b in range(self.n):
                if ((row >> b) & 1) != ((self.adj[b] >> a) & 1):
                    raise GraphError(f"adjacency not symmetric at ({a}, {b})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build from 0-based edge pairs."""
        check_size(n)
        adj = [0] * n
        for a, b in edges:
            if a == b:
                raise GraphError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) out of range for n={n}")
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return cls(n, tuple(adj))

    @property
    def full(self) -> VertexSet:
        return (1 << self.n) - 1

    def edges(self) -> list[tuple[int, int]]:
        """0-based edges ``(a, b)`` with ``a < b``, sorted."""
        return [(a, b) for a in range(self.n) for b in range(a + 1, self.n) if (self.adj[a] >> b) & 1]

    @property
    def num_edges(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def degree(self, a: int) -> int:
        return popcount(self.adj[a])

    def degrees(self) -> tuple[int, ...]:
        return tuple(popcount(r) for r in self.adj)

    def has_edge(self, a: int, b: int) -> bool:
        return bool((self.adj[a] >> b) & 1)

    def is_independent(self, s: VertexSet) -> bool:
        return all(not (self.adj[a] & s) for a in members(s))

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Vertex ``a`` becomes ``perm[a]``."""
        return Graph.from_edges(self.n, [(perm[a], perm[b]) for a, b in self.edges()])


def members(s: VertexSet) -> list[int]:
    out = []
    a = 0
    while s:
        if s & 1:
            out.append(a)
        s >>= 1
        a += 1
    return out


def check_vertex_set(g: Graph, s: VertexSet) -> None:
    if s < 0 or s >> g.n:
        raise GraphError(f"vertex set {s:#x} has members outside the {g.n} vertices")


def vertex_set(labels: Iterable[int]) -> VertexSet:
    """Bitmask from 1-based vertex labels."""
    s = 0
    for v in labels:
        if v < 1:
            raise GraphError(f"vertex label {v} must be >= 1")
        s |= 1 << (v - 1)
    return s


def labels(s: VertexSet) -> list[int]:
    """Sorted 1-based labels of a bitmask."""
    return [a + 1 for a in members(s)]


def parse_vertex_list(text: str, n: int) -> VertexSet:
    """Parse ``"1,4,5"`` into a bitmask, checking each label against ``n``."""
    s = 0
    for tok in text.split(","):
        tok = tok.strip()
        if not tok.isdigit():
            raise GraphParseError(f"bad vertex label {tok!r}", token=tok)
        v = int(tok)
        if not 1 <= v <= n:
            raise GraphParseError(f"vertex index {v} out of range 1..{n}", token=tok)
        if (s >> (v - 1)) & 1:
            raise GraphParseError(f"vertex {v} listed twice", token=tok)
        s |= 1 << (v - 1)
    return s


# ---------------------------------------------------------------------------
# text format

_HEADER = re.compile(r"^n\s+(\S+)$")
_EDGE = re.compile(r"^e\s+(\S+)\s+(\S+)$")


def _int_token(tok: str, lineno: int) -> int:
    if not re.fullmatch(r"[+-]?\d+", tok):
        raise GraphParseError(f"expected an integer, got {tok!r}", lineno, tok)
    return int(tok)


def parse_graph(text: str) -> Graph:
    """Parse the ``n <count>`` / ``e <a> <b>`` edge-list format."""
    n: int | None = None
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if m := _HEADER.match(line):
            if n is not None:
                raise GraphParseError("duplicate header line", lineno, line)
            n = _int_token(m.group(1), lineno)
            if not 1 <= n <= MAX_VERTICES:
                raise GraphSizeError(f"line {lineno}: vertex count {n} outside [1, {MAX_VERTICES}]")
            continue
        if m := _EDGE.match(line):
            if n is None:
                raise GraphParseError("edge before 'n' header", lineno, line)
            a = _int_token(m.group(1), lineno)
            b = _int_token(m.group(2), lineno)
            for v, tok in ((a, m.group(1)), (b, m.group(2))):
                if not 1 <= v <= n:
                    raise GraphParseError(f"vertex index {v} out of range 1..{n}", lineno, tok)
            if a == b:
                raise GraphParseError(f"self-loop at vertex {a}", lineno, line)
            key = (min(a, b), max(a, b))
            if key in seen:
                raise GraphParseError(f"duplicate edge {key[0]} {key[1]}", lineno, line)
            seen.add(key)
            edges.append((a - 1, b - 1))
            continue
        raise GraphParseError(f"malformed line {line!r}", lineno, line.split()[0])
    if n is None:
        raise GraphParseError("missing 'n <count>' header")
    return Graph.from_edges(n, edges)


def serialize_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines += [f"e {a + 1} {b + 1}" for a, b in g.edges()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# named graphs

CODE613_EDGES = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (5, 6)]


def ring(k: int) -> Graph:
    if not 3 <= k <= MAX_VERTICES:
        raise GraphSizeError(f"ring size {k} outside [3, {MAX_VERTICES}]")
    return Graph.from_edges(k, [(a, (a + 1) % k) for a in range(k)])


def star(k: int) -> Graph:
    """Vertex 1 joined to the other ``k - 1`` vertices."""
    if not 2 <= k <= MAX_VERTICES:
        raise GraphSizeError(f"star size {k} outside [2, {MAX_VERTICES}]")
    return Graph.from_edges(k, [(0, b) for b in range(1, k)])


def edgeless(k: int) -> Graph:
    check_size(k)
    return Graph(k, (0,) * k)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Graph.from_edges(10, outer + inner + spokes)


def code613() -> Graph:
    return Graph.from_edges(6, [(a - 1, b - 1) for a, b in CODE613_EDGES])


_FIXED = {"petersen": petersen, "code613": code613}
_SIZED = {"ring": ring, "star": star, "edgeless": edgeless}


def named_graph(name: str) -> Graph:
    """Resolve ``petersen``, ``code613``, ``ring:k``, ``star:k`` or ``edgeless:k``."""
    if name in _FIXED:
        return _FIXED[name]()
    family, sep, arg = name.partition(":")
    if sep and family in _SIZED:
        if not arg.isdigit():
            raise GraphError(f"bad size {arg!r} in graph name {name!r}")
        return _SIZED[family](int(arg))
    raise GraphError(f"unknown graph name {name!r}")


def is_graph_name(name: str) -> bool:
    return name in _FIXED or name.partition(":")[0] in _SIZED and ":" in name


# ---------------------------------------------------------------------------
# edges and parity


def induced_edge_parity(g: Graph, s: VertexSet) -> int:
    """Number of edges with both ends in ``s``, mod 2."""
    check_vertex_set(g, s)
    total = 0
    for a in members(s):
        total += popcount(g.adj[a] & s)
    # each induced edge counted twice
    return (total // 2) & 1


def toggle_edge(g: Graph, a: int, b: int) -> Graph:
    """Flip edge ``(a, b)``, 0-based; this is what a CZ gate does to the graph."""
    if a == b:
        raise GraphError(f"cannot toggle self-loop at vertex {a}")
    if not (0 <= a < g.n and 0 <= b < g.n):
        raise GraphError(f"vertex pair ({a}, {b}) out of range for n={g.n}")
    adj = list(g.adj)
    adj[a] ^= 1 << b
    adj[b] ^= 1 << a
    return Graph(g.n, tuple(adj))


# ---------------------------------------------------------------------------
# GF(2)


@dataclass(frozen=True)
class Gf2Matrix:
    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        for r in self.rows:
            if r < 0 or r >> self.ncols:
                raise ValueError(f"row {r:#x} wider than {self.ncols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> Gf2Matrix:
        ncols = len(data[0]) if data else 0
        rows = [sum((int(v) & 1) << j for j, v in enumerate(row)) for row in data]
        return cls(tuple(rows), ncols)


def rank_of_rows(rows: Iterable[int]) -> int:
    """GF(2) rank of row bitmasks (xor basis keyed by leading bit)."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


def gf2_rank(m: Gf2Matrix) -> int:
    return rank_of_rows(m.rows)


def cross_block(g: Graph, side: VertexSet) -> Gf2Matrix:
    """Adjacency block with rows in ``side`` and columns in its complement."""
    check_vertex_set(g, side)
    other = g.full & ~side
    if not side or not other:
        raise GraphError("bipartition needs both sides non-empty")
    cols = members(other)
    rows = []
    for a in members(side):
        row = 0
        for j, b in enumerate(cols):
            if (g.adj[a] >> b) & 1:
                row |= 1 << j
        rows.append(row)
    return Gf2Matrix(tuple(rows), len(cols))
