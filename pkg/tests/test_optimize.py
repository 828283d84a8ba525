import math

import numpy as np
import pytest

from graphent import (
    ConsistencyError,
    GraphSizeError,
    OptimizerConfig,
    ProductState,
    entanglement_bounds_report,
    fidelity,
    named_graph,
    optimize_product_fidelity,
    optimize_symmetric,
    parse_graph,
    product_overlap,
    symmetric_coefficients,
    symmetric_fidelity,
)
from graphent.optimize import (
    UNCERTIFIED,
    _Environment,
    _refine_product,
    check_ceiling,
    coordinate_ascent,
)

RING5_F = (3 + math.sqrt(3)) / 36
RING5_P = (0.5 * (1 - 1 / math.sqrt(3)), 0.5 * (1 + 1 / math.sqrt(3)))
QUICK = OptimizerConfig(starts=6)


def phase_distance(a, b):
    d = (a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


@pytest.fixture(scope="module")
def ring5_general():
    return optimize_product_fidelity(named_graph("ring:5"))


@pytest.fixture(scope="module")
def petersen_report():
    return entanglement_bounds_report(named_graph("petersen"))


class TestConfig:
    def test_defaults(self):
        cfg = OptimizerConfig()
        assert (cfg.grid_p, cfg.grid_phi, cfg.starts, cfg.max_iters) == (201, 201, 64, 2000)
        assert cfg.step_tol == cfg.value_tol == 1e-12 and cfg.seed == 0

    @pytest.mark.parametrize(
        "kwargs", [{"starts": 0}, {"grid_phi": 0}, {"grid_p": 1}, {"max_iters": 0}, {"step_tol": 0.0}, {"seed": -1}]
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            OptimizerConfig(**kwargs)


class TestCoordinateAscent:
    def test_concave_quadratic(self):
        target = [0.3, 2.0]

        def f(x):
            return -((x[0] - target[0]) ** 2) - 0.5 * (x[1] - target[1]) ** 2 - 0.4 * (x[0] - target[0]) * (x[1] - target[1])

        def make_line(k, x):
            def line(v):
                y = list(x)
                y[k] = v
                return f(y)

            return line

        x, val, its, ok = coordinate_ascent([0.9, 0.1], (False, True), make_line, f([0.9, 0.1]), OptimizerConfig())
        assert ok and its > 0
        assert x == pytest.approx(target, abs=1e-6)

    def test_iteration_cap(self):
        def make_line(k, x):
            return lambda v: v if k == 0 else 0.0

        x, val, its, ok = coordinate_ascent([0.0], (False,), make_line, 0.0, OptimizerConfig(max_iters=3))
        assert its == 3 and not ok

    def test_probability_clipped(self):
        def make_line(k, x):
            return lambda v: v

        x, val, _, ok = coordinate_ascent([0.95], (False,), make_line, 0.95, OptimizerConfig())
        assert ok and x[0] == 1.0


class TestSymmetric:
    def test_ring5(self):
        res = optimize_symmetric(named_graph("ring:5"))
        p, phi = res.params
        assert res.fidelity == pytest.approx(RING5_F, abs=1e-9)
        assert min(abs(p - q) for q in RING5_P) < 1e-6
        assert min(phase_distance(phi, t) for t in (math.pi / 4, 3 * math.pi / 4, -math.pi / 4, -3 * math.pi / 4)) < 1e-6
        assert res.entanglement_bound == pytest.approx(-math.log2(RING5_F), abs=1e-9)
        assert res.converged
        assert res.conjecture and not res.certified

    def test_ring5_canonical_representative(self):
        p, phi = optimize_symmetric(named_graph("ring:5")).params
        assert p == pytest.approx(RING5_P[0], abs=1e-6)
        assert phi == pytest.approx(math.pi / 4, abs=1e-6)

    def test_petersen(self):
        res = optimize_symmetric(named_graph("petersen"))
        assert res.fidelity == pytest.approx(1 / 32, abs=1e-9)
        assert res.certified and not res.conjecture

    def test_single_qubit(self):
        res = optimize_symmetric(named_graph("edgeless:1"))
        assert res.fidelity == pytest.approx(1.0, abs=1e-12)
        assert res.params[0] == pytest.approx(0.5, abs=1e-9)
        assert phase_distance(res.params[1], 0.0) < 1e-9
        assert res.entanglement_bound == 0.0

    def test_deterministic(self):
        g = named_graph("code613")
        assert optimize_symmetric(g) == optimize_symmetric(g)

    def test_consistency_error(self):
        # a claimed lower bound of 6 ebits is violated by F = 1/32
        with pytest.raises(ConsistencyError):
            optimize_symmetric(named_graph("petersen"), lower_ebits=6)

    def test_stationary_at_paper_optimum(self):
        c = symmetric_coefficients(named_graph("ring:5"))
        p0, f0, h = RING5_P[0], math.pi / 4, 1e-5

        def F(p, f):
            return symmetric_fidelity(c, p, f)

        dp = (F(p0 + h, f0) - F(p0 - h, f0)) / (2 * h)
        df = (F(p0, f0 + h) - F(p0, f0 - h)) / (2 * h)
        assert abs(dp) < 1e-4 and abs(df) < 1e-4
        assert F(p0 + h, f0) - 2 * F(p0, f0) + F(p0 - h, f0) < 0
        assert F(p0, f0 + h) - 2 * F(p0, f0) + F(p0, f0 - h) < 0


class TestEnvironment:
    def test_matches_product_overlap(self):
        rng = np.random.default_rng(3)
        for name in ("petersen", "code613", "ring:5", "edgeless:1", "star:4"):
            g = named_graph(name)
            env = _Environment(g)
            s = ProductState(tuple(rng.uniform(0, 1, g.n)), tuple(rng.uniform(0, 6, g.n)))
            want = product_overlap(g, s)
            for a in range(g.n):
                e0, e1 = env.environment(a, s.x, s.y)
                assert (e0 * s.x[a] + e1 * s.y[a]) * env.norm == pytest.approx(want, abs=1e-12)

    def test_monotone_refinement(self):
        rng = np.random.default_rng(4)
        g = named_graph("ring:6")
        env = _Environment(g)
        for _ in range(10):
            s = ProductState(tuple(rng.uniform(0, 1, g.n)), tuple(rng.uniform(0, 6, g.n)))
            state, f0, f, _, _ = _refine_product(env, s, QUICK)
            assert f0 == pytest.approx(fidelity(g, s), abs=1e-12)
            assert f >= f0
            assert fidelity(g, state) == pytest.approx(f, abs=1e-12)


class TestGeneral:
    def test_ring5_conjecture(self, ring5_general):
        assert ring5_general.fidelity == pytest.approx(RING5_F, abs=1e-6)
        assert ring5_general.fidelity <= 0.25 + 1e-9
        assert UNCERTIFIED in ring5_general.flags

    def test_petersen(self):
        res = optimize_product_fidelity(named_graph("petersen"), QUICK)
        assert 1 / 32 - 1e-9 <= res.fidelity <= 1 / 32 + 1e-9
        assert res.certified

    def test_star3_ghz(self):
        res = optimize_product_fidelity(named_graph("star:3"))
        assert res.fidelity == pytest.approx(0.5, abs=1e-9)
        assert res.entanglement_bound == pytest.approx(1.0, abs=1e-9)
        assert res.certified

    def test_dominates_symmetric(self):
        for name in ("code613", "ring:5", "star:4", "ring:7"):
            g = named_graph(name)
            sym = optimize_symmetric(g)
            gen = optimize_product_fidelity(g, QUICK, symmetric=sym)
            assert gen.fidelity >= sym.fidelity - 1e-12

    def test_deterministic(self):
        g = named_graph("ring:5")
        cfg = OptimizerConfig(starts=5, seed=7)
        assert optimize_product_fidelity(g, cfg) == optimize_product_fidelity(g, cfg)

    def test_seed_changes_starts(self):
        g = named_graph("ring:6")
        a = optimize_product_fidelity(g, OptimizerConfig(starts=3, seed=1))
        b = optimize_product_fidelity(g, OptimizerConfig(starts=3, seed=2))
        assert a.fidelity == pytest.approx(b.fidelity, abs=1e-9) and a.fidelity == pytest.approx(1 / 8, abs=1e-9)

    def test_size_cap(self):
        with pytest.raises(GraphSizeError):
            optimize_product_fidelity(named_graph("ring:21"))

    def test_ceiling(self):
        assert check_ceiling(0.25, 2)
        assert not check_ceiling(0.2, 2)
        assert not check_ceiling(0.9, None)
        with pytest.raises(ConsistencyError):
            check_ceiling(0.25 + 1e-6, 2)


class TestHessian:
    def test_second_derivatives(self):
        c = symmetric_coefficients(named_graph("ring:5"))
        p0, f0, h = RING5_P[0], math.pi / 4, 1e-4

        def F(p, f):
            return symmetric_fidelity(c, p, f)

        fpp = (F(p0 + h, f0) - 2 * F(p0, f0) + F(p0 - h, f0)) / h**2
        fff = (F(p0, f0 + h) - 2 * F(p0, f0) + F(p0, f0 - h)) / h**2
        fpf = (F(p0 + h, f0 + h) - F(p0 + h, f0 - h) - F(p0 - h, f0 + h) + F(p0 - h, f0 - h)) / (4 * h * h)
        assert fpp == pytest.approx(-1.25, abs=1e-2)
        assert fff == pytest.approx(-5 / 108 * (3 + 2 * math.sqrt(3)), abs=1e-2)
        assert abs(fpf) == pytest.approx(5 / 12, abs=1e-2)
        assert fpp * fff - fpf**2 == pytest.approx(25 * math.sqrt(3) / 216, abs=1e-2)


class TestReport:
    def test_code613(self):
        rep = entanglement_bounds_report(named_graph("code613"), QUICK)
        assert (rep.lower_ebits, rep.mis_upper, rep.entanglement_exact) == (3, 3, 3)
        assert rep.conjecture_flags == ()

    def test_petersen(self, petersen_report):
        rep = petersen_report
        assert (rep.lower_ebits, rep.mis_upper) == (5, 6)
        assert f"{rep.symmetric_upper:.6f}" == "5.000000"
        assert rep.entanglement_exact == 5
        assert rep.best_upper == pytest.approx(5.0, abs=1e-9)

    def test_ring5(self):
        rep = entanglement_bounds_report(named_graph("ring:5"), QUICK)
        assert rep.lower_ebits == 2 and rep.mis_upper == 3
        assert rep.best_upper == pytest.approx(-math.log2(RING5_F), abs=1e-6)
        assert rep.entanglement_exact is None
        assert any(UNCERTIFIED in f for f in rep.conjecture_flags)

    def test_single_vertex(self):
        rep = entanglement_bounds_report(named_graph("edgeless:1"), QUICK)
        assert rep.lower_ebits == 0 and rep.entanglement_exact == 0

    def test_star_exact(self):
        rep = entanglement_bounds_report(named_graph("star:5"), QUICK)
        assert rep.entanglement_exact == 1

    def test_bowtie(self):
        g = parse_graph("n 5\ne 1 2\ne 1 3\ne 2 3\ne 3 4\ne 3 5\ne 4 5")
        rep = entanglement_bounds_report(g, QUICK)
        assert rep.lower_ebits <= rep.best_upper + 1e-9 <= rep.mis_upper + 1e-9
