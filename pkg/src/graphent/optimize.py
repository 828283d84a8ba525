"""Product-state fidelity maximization and the combined bounds report.

Every fidelity found here belongs to an actual product state, so ``-log2 F``
is always a valid upper bound on the entanglement. It is only declared
exact when it meets the certified bipartite lower bound.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounds import (
    EXHAUSTIVE_BIPARTITION_MAX_N,
    best_bipartite_lower_bound,
    max_independent_set,
)
from .graph_core import Graph, GraphSizeError, VertexSet
from .state import TWO_PI, ProductState, fidelity, sign_vector, symmetric_coefficients, symmetric_fidelity

log = logging.getLogger(__name__)

GENERAL_MAX_N = 20
CEILING_CHECK_MAX_N = 12
CEILING_TOL = 1e-9
EXACT_TOL = 1e-9
INITIAL_STEP = 0.1
REFINE_CANDIDATES = 16

UNCERTIFIED = "uncertified-optimum"


class ConsistencyError(RuntimeError):
    """An optimizer beat a certified fidelity ceiling; indicates a bug."""


@dataclass(frozen=True)
class OptimizerConfig:
    grid_p: int = 201
    grid_phi: int = 201
    starts: int = 64
    max_iters: int = 2000
    step_tol: float = 1e-12
    value_tol: float = 1e-12
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("grid_p", "grid_phi", "starts", "max_iters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.grid_p < 2:
            raise ValueError("grid_p must include both endpoints (>= 2)")
        if not (self.step_tol > 0 and self.value_tol > 0):
            raise ValueError("tolerances must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class OptimumResult:
    fidelity: float
    entanglement_bound: float
    params: ProductState | tuple[float, float]
    iterations: int
    converged: bool
    certified: bool = False
    flags: tuple[str, ...] = ()

    @property
    def conjecture(self) -> bool:
        return UNCERTIFIED in self.flags


def _entropy_bound(f: float) -> float:
    return 0.0 if f >= 1.0 else -math.log2(f)


def check_ceiling(f: float, lower_ebits: int | None) -> bool:
    """Raise if ``f`` exceeds ``2^-lower_ebits``; return whether it attains it."""
    if lower_ebits is None:
        return False
    ceiling = 2.0**-lower_ebits
    if f > ceiling + CEILING_TOL:
        raise ConsistencyError(
            f"fidelity {f!r} exceeds certified ceiling 2^-{lower_ebits} = {ceiling!r}"
        )
    return abs(f - ceiling) <= CEILING_TOL


def _default_lower(g: Graph, lower_ebits: int | None) -> int | None:
    if lower_ebits is not None:
        return lower_ebits
    if g.n == 1:
        return 0
    if g.n <= CEILING_CHECK_MAX_N:
        return best_bipartite_lower_bound(g).ebits
    return None


def _finish(f: float, params, iterations: int, converged: bool, lower: int | None) -> OptimumResult:
    certified = check_ceiling(f, lower)
    return OptimumResult(
        fidelity=f,
        entanglement_bound=_entropy_bound(f),
        params=params,
        iterations=iterations,
        converged=converged,
        certified=certified,
        flags=() if certified else (UNCERTIFIED,),
    )


# ---------------------------------------------------------------------------
# coordinate search


def _move(value: float, delta: float, is_phase: bool) -> float:
    if is_phase:
        return (value + delta) % TWO_PI
    return min(1.0, max(0.0, value + delta))


def coordinate_ascent(
    x: list[float],
    phase_mask: Sequence[bool],
    make_line: Callable[[int, list[float]], Callable[[float], float]],
    f0: float,
    cfg: OptimizerConfig,
) -> tuple[list[float], float, int, bool]:
    """Derivative-free coordinate search with step halving.

    ``make_line(k, x)`` returns the objective as a function of coordinate
    ``k`` alone, the others held at ``x``. A move is taken only on strict
    improvement, so the returned value is never below ``f0``; after a
    successful move the same direction is retried with doubled length while
    it keeps improving. Each sweep over all
    coordinates counts as one iteration.
    """
    x = list(x)
    f = f0
    step = INITIAL_STEP
    sweeps = 0
    while step >= cfg.step_tol:
        if sweeps >= cfg.max_iters:
            return x, f, sweeps, False
        sweeps += 1
        moved = False
        for k in range(len(x)):
            line = make_line(k, x)
            for delta in (step, -step):
                v = _move(x[k], delta, phase_mask[k])
                fv = line(v)
                if fv <= f:
                    continue
                # keep going, doubling, while the same direction still pays
                while fv > f:
                    x[k], f, moved = v, fv, True
                    delta *= 2.0
                    v = _move(v, delta, phase_mask[k])
                    fv = line(v)
                break
        if not moved:
            step *= 0.5
    return x, f, sweeps, True


# ---------------------------------------------------------------------------
# symmetric ansatz


def _grid_fidelity(c: Sequence[int], p: np.ndarray, phi: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    x = np.sqrt(p)[:, None]
    y = (np.sqrt(1.0 - p)[:, None]) * np.exp(1j * phi)[None, :]
    total = np.zeros((len(p), len(phi)), dtype=complex)
    for j, cj in enumerate(c):
        if cj:
            total += cj * x ** (n - j) * y**j
    return np.abs(total) ** 2 * 2.0**-n


def _grid_local_maxima(vals: np.ndarray) -> list[tuple[int, int]]:
    """Cells no smaller than any of their 8 neighbours; the phase axis wraps."""
    padded = np.pad(vals, ((1, 1), (0, 0)), constant_values=-np.inf)
    is_max = np.ones(vals.shape, dtype=bool)
    for dp in (-1, 0, 1):
        for dq in (-1, 0, 1):
            if dp == dq == 0:
                continue
            shifted = np.roll(padded, dq, axis=1)[1 + dp : 1 + dp + vals.shape[0]]
            is_max &= vals >= shifted
    cells = list(zip(*np.nonzero(is_max)))
    cells.sort(key=lambda ij: (-vals[ij], ij))
    return [(int(i), int(j)) for i, j in cells]


def _canonical_key(p: float, phi: float) -> tuple[float, float]:
    return (round(p, 6), round(phi % TWO_PI, 6))


def optimize_symmetric(
    g: Graph, cfg: OptimizerConfig | None = None, lower_ebits: int | None = None
) -> OptimumResult:
    """Best uniform product state ``(sqrt(p)|0> + sqrt(1-p) e^{i phi}|1>)^{(x)n}``.

    Scans a ``grid_p x grid_phi`` grid, refines the strongest grid local
    maxima by coordinate search, and among optima tied within ``value_tol``
    reports the one with smallest ``p`` and then smallest ``phi``.
    """
    cfg = cfg or OptimizerConfig()
    lower = _default_lower(g, lower_ebits)
    c = symmetric_coefficients(g)

    ps = np.linspace(0.0, 1.0, cfg.grid_p)
    phis = np.arange(cfg.grid_phi) * (TWO_PI / cfg.grid_phi)
    vals = _grid_fidelity(c, ps, phis)

    def make_line(k: int, x: list[float]) -> Callable[[float], float]:
        if k == 0:
            return lambda v: symmetric_fidelity(c, v, x[1])
        return lambda v: symmetric_fidelity(c, x[0], v)

    found = []
    for i, j in _grid_local_maxima(vals)[:REFINE_CANDIDATES]:
        x0 = [float(ps[i]), float(phis[j])]
        f0 = symmetric_fidelity(c, *x0)
        x, f, its, ok = coordinate_ascent(x0, (False, True), make_line, f0, cfg)
        found.append((f, x, its, ok))
    best_f = max(r[0] for r in found)
    ties = [r for r in found if r[0] >= best_f - cfg.value_tol]
    f, x, its, ok = min(ties, key=lambda r: (_canonical_key(*r[1]), -r[0]))
    return _finish(f, (x[0], x[1]), its, ok, lower)


# ---------------------------------------------------------------------------
# general product states


class _Environment:
    """Overlap of the graph state with a product state, one qubit at a time.

    With every qubit but ``a`` fixed, the unnormalized overlap is
    ``e0 * x_a + e1 * y_a``; ``environment(a)`` returns ``(e0, e1)``.
    """

    def __init__(self, g: Graph):
        self.n = g.n
        self.signs = sign_vector(g).astype(float)
        self.norm = 2.0 ** (-g.n / 2)

    def environment(self, a: int, x: np.ndarray, y: np.ndarray) -> tuple[complex, complex]:
        # index mu = high * 2^(a+1) + mu_a * 2^a + low
        high = _weights(x[a + 1 :], y[a + 1 :])
        low = _weights(x[:a], y[:a])
        t = (high @ self.signs.reshape(high.size, -1)).reshape(2, low.size) @ low
        return complex(t[0]), complex(t[1])


def _weights(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    w = np.ones(1, dtype=complex)
    for xb, yb in zip(x, y):
        w = np.concatenate([w * xb, w * yb])
    return w


def _refine_product(env: _Environment, state: ProductState, cfg: OptimizerConfig):
    n = env.n
    # coordinates interleaved: (p_0, phi_0, p_1, phi_1, ...)
    coords = [v for a in range(n) for v in (state.p[a], state.phi[a])]
    phase_mask = [k % 2 == 1 for k in range(2 * n)]
    # per-qubit environment, keyed by the parameters of all other qubits
    cache: dict[int, tuple[list[float], tuple[complex, complex]]] = {}

    def amps(x: list[float]) -> tuple[np.ndarray, np.ndarray]:
        p = np.clip(np.asarray(x[0::2]), 0.0, 1.0)
        phi = np.asarray(x[1::2])
        return np.sqrt(p), np.sqrt(1.0 - p) * np.exp(1j * phi)

    def make_line(k: int, x: list[float]) -> Callable[[float], float]:
        a = k // 2
        others = x[: 2 * a] + x[2 * a + 2 :]
        hit = cache.get(a)
        if hit is None or hit[0] != others:
            xs, ys = amps(x)
            hit = cache[a] = (others, env.environment(a, xs, ys))
        e0, e1 = hit[1]
        norm2 = env.norm**2
        if k % 2 == 0:
            phase = complex(math.cos(x[k + 1]), math.sin(x[k + 1]))
            return lambda v: abs(e0 * math.sqrt(v) + e1 * math.sqrt(1.0 - v) * phase) ** 2 * norm2
        sp, sq = math.sqrt(x[k - 1]), math.sqrt(1.0 - x[k - 1])
        return lambda v: abs(e0 * sp + e1 * sq * complex(math.cos(v), math.sin(v))) ** 2 * norm2

    xs, ys = amps(coords)
    e0, e1 = env.environment(0, xs, ys)
    f0 = abs(e0 * xs[0] + e1 * ys[0]) ** 2 * env.norm**2
    x, f, its, ok = coordinate_ascent(coords, phase_mask, make_line, f0, cfg)
    return ProductState(tuple(x[0::2]), tuple(x[1::2])), f0, f, its, ok


def _start_states(g: Graph, cfg: OptimizerConfig, symmetric: OptimumResult | None) -> list[ProductState]:
    starts = [ProductState.uniform(g.n, 0.5, 0.0)]
    if symmetric is not None:
        starts.append(ProductState.uniform(g.n, *symmetric.params))
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.starts):
        p = rng.uniform(0.0, 1.0, g.n)
        phi = rng.uniform(0.0, TWO_PI, g.n)
        starts.append(ProductState(tuple(p), tuple(phi)))
    return starts


def optimize_product_fidelity(
    g: Graph,
    cfg: OptimizerConfig | None = None,
    lower_ebits: int | None = None,
    symmetric: OptimumResult | None = None,
) -> OptimumResult:
    """Multi-start coordinate search over all ``2n`` product-state parameters.

    Starts: ``|+>^n``, the symmetric optimum (computed if not given), then
    ``cfg.starts`` random states from a PCG64 stream seeded by ``cfg.seed``.
    """
    cfg = cfg or OptimizerConfig()
    if g.n > GENERAL_MAX_N:
        raise GraphSizeError(f"general optimizer limited to n <= {GENERAL_MAX_N}, got {g.n}")
    lower = _default_lower(g, lower_ebits)
    if symmetric is None:
        symmetric = optimize_symmetric(g, cfg, lower)
    env = _Environment(g)
    best = None
    total_its = 0
    for start in _start_states(g, cfg, symmetric):
        state, f0, f, its, ok = _refine_product(env, start, cfg)
        if f < f0:
            raise ConsistencyError("coordinate search decreased the fidelity")
        check_ceiling(f, lower)
        total_its += its
        key = (tuple(round(v, 6) for v in state.p), tuple(round(v, 6) for v in state.phi))
        if best is None or f > best[0] or (f == best[0] and key < best[1]):
            best = (f, key, state, ok)
    f, _, state, ok = best
    # exact re-evaluation of the winner through the public streaming sum
    f = fidelity(g, state)
    log.debug("general optimizer: F=%r after %d sweeps", f, total_its)
    return _finish(f, state, total_its, ok, lower)


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class BoundsReport:
    lower_ebits: int
    lower_side: VertexSet
    mis_upper: int
    mis_witness: VertexSet
    symmetric: OptimumResult
    general: OptimumResult | None
    entanglement_exact: int | None
    conjecture_flags: tuple[str, ...] = field(default_factory=tuple)

    @property
    def symmetric_upper(self) -> float:
        return self.symmetric.entanglement_bound

    @property
    def general_upper(self) -> float | None:
        return None if self.general is None else self.general.entanglement_bound

    @property
    def best_upper(self) -> float:
        ups = [float(self.mis_upper), self.symmetric_upper]
        if self.general is not None:
            ups.append(self.general.entanglement_bound)
        return min(ups)


def _fallback_sides(g: Graph, witness: VertexSet) -> list[VertexSet]:
    # non-exhaustive candidates for large n; any cut is a valid lower bound
    sides = {1 << a for a in range(g.n)}
    sides.add((1 << (g.n // 2)) - 1)
    sides.add(sum(1 << a for a in range(0, g.n, 2)))
    if 0 < witness < g.full:
        sides.add(witness)
    return sorted(s for s in sides if 0 < s < g.full)


def entanglement_bounds_report(
    g: Graph, cfg: OptimizerConfig | None = None, candidates: Sequence[VertexSet] | None = None
) -> BoundsReport:
    cfg = cfg or OptimizerConfig()
    mis = max_independent_set(g)
    mis_upper = g.n - mis.size
    if g.n == 1:
        lower_ebits, lower_side = 0, 0
    else:
        if candidates is None and g.n > EXHAUSTIVE_BIPARTITION_MAX_N:
            candidates = _fallback_sides(g, mis.witness)
        lb = best_bipartite_lower_bound(g, candidates)
        lower_ebits, lower_side = lb.ebits, lb.side
    if lower_ebits > mis_upper:
        raise ConsistencyError(f"lower bound {lower_ebits} exceeds MIS upper bound {mis_upper}")

    sym = optimize_symmetric(g, cfg, lower_ebits)
    gen = optimize_product_fidelity(g, cfg, lower_ebits, sym) if g.n <= GENERAL_MAX_N else None

    ups = [float(mis_upper), sym.entanglement_bound]
    if gen is not None:
        ups.append(gen.entanglement_bound)
    best_upper = min(ups)
    if lower_ebits > best_upper + EXACT_TOL:
        raise ConsistencyError(f"lower bound {lower_ebits} exceeds upper bound {best_upper!r}")
    exact = lower_ebits if lower_ebits >= best_upper - EXACT_TOL else None

    flags: list[str] = []
    if exact is None:
        if sym.conjecture:
            flags.append("symmetric: " + UNCERTIFIED)
        if gen is not None and gen.conjecture:
            flags.append("general: " + UNCERTIFIED)
        if gen is not None and abs(gen.fidelity - sym.fidelity) <= 1e-6:
            flags.append("general search did not beat the symmetric ansatz")
    return BoundsReport(
        lower_ebits=lower_ebits,
        lower_side=lower_side,
        mis_upper=mis_upper,
        mis_witness=mis.witness,
        symmetric=sym,
        general=gen,
        entanglement_exact=exact,
        conjecture_flags=tuple(flags),
    )
