import math

import numpy as np
import pytest

from gauss_extremal.errors import DomainError
from gauss_extremal.extremal import (
    alpha_family_channel,
    dual_functional,
    exponent_tradeoff_min,
    minimizer_equation_residual,
    minkowski_gap,
    nondegenerate_minimizers,
    oohama_gap,
    scalar_dual_closed,
    scalar_dual_oracle,
    scalar_dual_oracle_argmin,
    scalar_extremal_gap,
    vector_dual_lower,
    vector_extremal_forms,
    vector_extremal_gap,
)
from gauss_extremal.gauss_model import (
    GaussianAuxChannel,
    GaussianPairModel,
    log_det,
    mutual_information,
)
from gauss_extremal.rng import random_pd

from conftest import make_scalar_triple, make_vector_triple


def scalar_channels(cu, cv):
    return (
        GaussianAuxChannel.scalar_corr(cu, "x"),
        GaussianAuxChannel.scalar_corr(cv, "y"),
    )


def tradeoff_oracle(a1, a2, lam, points=20001, zooms=2):
    """Grid-plus-zoom minimization of max(f(t), 0) - lam*t where f is the
    implicit exponent curve 2^(-2t) = a1 2^(-2 f) + a2. Independent of the
    closed form under test."""
    t_sup = -0.5 * math.log2(a2)

    def objective(t):
        arg = (np.exp2(-2.0 * t) - a2) / a1
        f = np.where(arg > 0.0, -0.5 * np.log2(np.maximum(arg, 1e-300)), np.inf)
        return np.maximum(f, 0.0) - lam * t

    lo, hi = 0.0, min(20.0, t_sup * (1.0 - 1e-12))
    best_t = 0.0
    for _ in range(zooms + 1):
        ts = np.linspace(lo, hi, points)
        vals = objective(ts)
        j = int(np.argmin(vals))
        best_t = ts[j]
        span = (hi - lo) / points
        lo, hi = max(0.0, best_t - 2 * span), min(t_sup * (1.0 - 1e-12), best_t + 2 * span)
    return float(objective(np.array([best_t]))[0])


class TestScalarDualClosed:
    def test_zero_branch_values(self):
        assert scalar_dual_closed(1.0, 0.7).value_bits == 0.0
        assert scalar_dual_closed(5.0, 0.0).value_bits == 0.0
        assert scalar_dual_closed(0.0, 0.9).value_bits == 0.0

    def test_branch_boundary_is_continuous(self):
        # Which side of the threshold the boundary float lands on is
        # rounding luck; both branch values must agree there.
        for rho in (0.3, math.sqrt(0.5), 0.9):
            lam = 1.0 / (rho * rho)
            above = scalar_dual_closed(lam * (1 + 1e-9), rho)
            below = scalar_dual_closed(lam * (1 - 1e-9), rho)
            assert above.branch == "active"
            assert below.branch == "zero" and below.value_bits == 0.0
            assert abs(above.value_bits - below.value_bits) <= 1e-12

    def test_known_value(self):
        expected = 0.5 * (1.0 - 3.0 * math.log2(4.0 / 3.0))
        got = scalar_dual_closed(3.0, math.sqrt(0.5))
        assert abs(got.value_bits - expected) < 1e-14
        assert got.branch == "active" and got.exactness == "exact"

    def test_rejects_negative_lambda(self):
        with pytest.raises(DomainError):
            scalar_dual_closed(-0.1, 0.5)

    @pytest.mark.parametrize("r2", [0.2, 0.5, 0.8])
    def test_concave_and_nonincreasing(self, r2):
        rho = math.sqrt(r2)
        lams = np.sort(np.concatenate([
            np.linspace(0.0, 1.0 / r2, 10),
            np.geomspace(1.01 / r2, 50.0 / r2, 40),
        ]))
        vals = np.array([scalar_dual_closed(l, rho).value_bits for l in lams])
        assert np.all(np.diff(vals) <= 1e-9)
        slopes = np.diff(vals) / np.diff(lams)
        assert np.all(np.diff(slopes) <= 1e-9)
        assert np.all(vals <= 0.0)


class TestVectorDualLower:
    def test_proportional_identity_zero_branch(self):
        for lam in (0.0, 1.0, 2.0):
            out = vector_dual_lower(lam, np.eye(3), np.eye(3))
            assert out.value_bits == 0.0
            assert out.exactness == "exact"

    def test_dimension_one_reduces_to_scalar(self):
        rho = 0.6
        r2 = rho * rho
        for lam in (0.0, 0.5 / r2, 1.0 / r2, 2.0 / r2, 7.0 / r2):
            vec = vector_dual_lower(lam, [[r2]], [[1.0 - r2]])
            sca = scalar_dual_closed(lam, rho)
            assert abs(vec.value_bits - sca.value_bits) < 1e-12
            if abs(lam * r2 - 1.0) > 1e-9:  # away from the branch point
                assert vec.branch == sca.branch

    def test_threshold_continuity(self):
        gen = np.random.default_rng(13)
        sx, sz = random_pd(gen, 4), random_pd(gen, 4)
        n = 4
        root = lambda m: math.exp(log_det(m) / n)
        lam_star = 1.0 + root(sz) / root(sx)
        active = vector_dual_lower(lam_star, sx, sz).value_bits
        zero_form = -(lam_star * n / 2.0) * math.log2(root(sx + sz) / (root(sx) + root(sz)))
        assert abs(active - zero_form) < 1e-9

    def test_exactness_flags(self):
        gen = np.random.default_rng(14)
        sz = random_pd(gen, 3)
        assert vector_dual_lower(3.0, 2.0 * sz, sz).exactness == "exact"
        assert vector_dual_lower(3.0, random_pd(gen, 3), sz).exactness == "lower_bound"

    def test_alpha_family_attains_active_bound(self):
        gen = np.random.default_rng(15)
        sz = random_pd(gen, 4)
        model = GaussianPairModel.vector(2.0 * sz, sz)
        lam = 3.0
        channel, alpha = alpha_family_channel(model, lam)
        assert abs(alpha - 0.5) < 1e-15
        info = mutual_information(model, channel, GaussianAuxChannel.degenerate_on("y"))
        bound = vector_dual_lower(lam, model.sigma_x, model.sigma_z).value_bits
        assert abs(dual_functional(info, lam) - bound) < 1e-9

    def test_value_nonpositive_and_nonincreasing(self):
        gen = np.random.default_rng(26)
        for _ in range(10):
            sx, sz = random_pd(gen, 3), random_pd(gen, 3)
            lams = np.linspace(0.0, 20.0, 30)
            vals = [vector_dual_lower(l, sx, sz).value_bits for l in lams]
            assert all(v <= 1e-12 for v in vals)
            assert all(v2 <= v1 + 1e-9 for v1, v2 in zip(vals, vals[1:]))

    def test_alpha_family_attains_bound_nonproportional(self):
        gen = np.random.default_rng(16)
        sx, sz = random_pd(gen, 3), random_pd(gen, 3)
        model = GaussianPairModel.vector(sx, sz)
        white = np.linalg.inv(np.linalg.cholesky(sx))
        lam = 1.0 + 1.5 * float(np.linalg.eigvalsh(white @ sz @ white.T).max())
        channel, _ = alpha_family_channel(model, lam)
        info = mutual_information(model, channel, GaussianAuxChannel.degenerate_on("y"))
        bound = vector_dual_lower(lam, sx, sz)
        assert bound.branch == "active"
        assert abs(dual_functional(info, lam) - bound.value_bits) < 1e-9


class TestScalarDualOracle:
    def test_zero_branch_minimum_at_origin(self):
        val, su, sv = scalar_dual_oracle_argmin(1.0, 0.5, 200)
        assert val == 0.0 and su == 0.0 and sv == 0.0

    def test_active_branch_matches_closed_form(self):
        rho = math.sqrt(0.5)
        closed = scalar_dual_closed(3.0, rho).value_bits
        val, su, sv = scalar_dual_oracle_argmin(3.0, rho, 500)
        assert abs(val - closed) < 1e-4
        assert val >= closed - 1e-9
        # (rho_u^2, rho_v^2) = (0.5, 0) is among the grid minima.
        u, v = GaussianAuxChannel.scalar_corr(math.sqrt(0.5), "x"), GaussianAuxChannel.degenerate_on("y")
        model = GaussianPairModel.scalar(rho)
        f = dual_functional(mutual_information(model, u, v), 3.0)
        assert abs(f - val) < 1e-9

    def test_oracle_never_beats_closed_form(self):
        gen = np.random.default_rng(17)
        for _ in range(15):
            rho = gen.uniform(-0.95, 0.95)
            lam = gen.uniform(0.0, 30.0)
            closed = scalar_dual_closed(lam, rho).value_bits
            assert scalar_dual_oracle(lam, rho, 150) >= closed - 1e-9

    def test_error_halves_as_resolution_doubles(self):
        # The minimum sits on a curve, so grid minima are noisy but the
        # error envelope contracts at least geometrically.
        for r2, mult in ((0.6, 2.5), (0.35, 4.0)):
            rho = math.sqrt(r2)
            lam = mult / r2
            closed = scalar_dual_closed(lam, rho).value_bits
            errs = [scalar_dual_oracle(lam, rho, res) - closed for res in (200, 400, 800)]
            assert all(e >= -1e-9 for e in errs)
            for coarse, fine in zip(errs, errs[1:]):
                assert fine <= max(coarse / 2.0, 5e-10)

    def test_rejects_small_grid(self):
        with pytest.raises(DomainError):
            scalar_dual_oracle(1.0, 0.5, 99)


class TestNondegenerateMinimizers:
    def test_hand_solved_endpoint(self):
        pairs = nondegenerate_minimizers(3.0, math.sqrt(0.5), 10)
        assert pairs, "expected solutions on the active branch"
        assert abs(pairs[0].rho_u - math.sqrt(0.5)) < 1e-12
        assert pairs[0].rho_v == 0.0

    def test_pairs_satisfy_equation_and_attain_dual_value(self):
        rho = math.sqrt(0.5)
        lam = 3.0
        model = GaussianPairModel.scalar(rho)
        closed = scalar_dual_closed(lam, rho).value_bits
        pairs = nondegenerate_minimizers(lam, rho, 15)
        assert len(pairs) >= 10
        for p in pairs:
            assert abs(minimizer_equation_residual(rho, lam, p.rho_u, p.rho_v)) < 1e-10
            info = mutual_information(model, *scalar_channels(p.rho_u, p.rho_v))
            assert abs(dual_functional(info, lam) - closed) < 1e-9

    def test_equation_is_symmetric(self):
        for p in nondegenerate_minimizers(4.0, 0.8, 8):
            assert abs(minimizer_equation_residual(0.8, 4.0, p.rho_v, p.rho_u)) < 1e-10

    def test_empty_below_threshold(self):
        assert nondegenerate_minimizers(1.5, 0.5, 10) == []

    def test_rejects_zero_rho(self):
        with pytest.raises(DomainError):
            nondegenerate_minimizers(3.0, 0.0, 10)


class TestExponentTradeoffMin:
    def test_branch_boundary_is_zero(self):
        a1, a2 = 0.4, 0.6
        lam = (a1 + a2) / a1
        assert abs(exponent_tradeoff_min(a1, a2, lam)) < 1e-12

    def test_zero_lambda(self):
        assert exponent_tradeoff_min(0.3, 0.5, 0.0) == 0.0

    def test_matches_implicit_oracle(self):
        val = exponent_tradeoff_min(0.3, 0.5, 4.0)
        assert abs(val - tradeoff_oracle(0.3, 0.5, 4.0)) < 1e-6

    def test_rejects_invalid_weights(self):
        with pytest.raises(DomainError):
            exponent_tradeoff_min(0.7, 0.5, 2.0)
        with pytest.raises(DomainError):
            exponent_tradeoff_min(0.0, 0.5, 2.0)


class TestMinkowskiGap:
    def test_proportional_equality(self):
        assert abs(minkowski_gap(np.eye(2), np.eye(2))) < 1e-14

    def test_hand_arithmetic(self):
        gap = minkowski_gap(np.diag([1.0, 4.0]), np.diag([4.0, 1.0]))
        assert abs(gap - 1.0) < 1e-12

    def test_randomized_nonnegative(self):
        gen = np.random.default_rng(18)
        for _ in range(200):
            n = int(gen.integers(1, 7))
            assert minkowski_gap(random_pd(gen, n), random_pd(gen, n)) >= -1e-10

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(DomainError):
            minkowski_gap(np.eye(2), np.eye(3))


class TestGapFunctionals:
    def test_scalar_gap_degenerate_is_zero(self):
        u = GaussianAuxChannel.degenerate_on("x")
        v = GaussianAuxChannel.degenerate_on("y")
        assert abs(scalar_extremal_gap(0.5, u, v)) < 1e-15

    def test_scalar_gap_independent_sources(self):
        u, v = scalar_channels(0.7, 0.4)
        assert abs(scalar_extremal_gap(0.0, u, v)) < 1e-12

    def test_scalar_gap_direct_evaluation(self):
        rho, cu, cv = 0.7, 0.6, 0.3
        u, v = scalar_channels(cu, cv)
        gap = scalar_extremal_gap(rho, u, v)
        r2 = rho * rho
        i_yu = -0.5 * math.log2(1.0 - r2 * cu * cu)
        i_xu = -0.5 * math.log2(1.0 - cu * cu)
        i_uv = -0.5 * math.log2(1.0 - r2 * cu * cu * cv * cv)
        i_xv = -0.5 * math.log2(1.0 - r2 * cv * cv)
        i_yv = -0.5 * math.log2(1.0 - cv * cv)
        direct = (
            2.0 ** (-2.0 * (i_yu + i_xv - i_uv))
            - (1.0 - r2)
            - r2 * 2.0 ** (-2.0 * (i_xu + i_yv - i_uv))
        )
        assert abs(gap - direct) < 1e-12
        assert gap >= -1e-12

    def test_vector_gap_equality_family(self):
        gen = np.random.default_rng(19)
        sz = random_pd(gen, 4)
        model = GaussianPairModel.vector(2.0 * sz, sz)
        channel, _ = alpha_family_channel(model, 3.0)
        gap = vector_extremal_gap(model, channel, GaussianAuxChannel.degenerate_on("y"))
        assert abs(gap) < 1e-9

    def test_vector_gap_randomized_falsification(self):
        gen = np.random.default_rng(20)
        for _ in range(300):
            model, u, v = make_vector_triple(gen, n=int(gen.integers(2, 6)))
            assert vector_extremal_gap(model, u, v) >= -1e-9

    def test_both_exponent_forms_are_consistent(self):
        gen = np.random.default_rng(21)
        for _ in range(100):
            model, u, v = make_vector_triple(gen, n=3)
            gap_cond, gap_uncond, info = vector_extremal_forms(model, u, v)
            scale = 2.0 ** (-2.0 * info.i_uv / model.n)
            assert abs(gap_uncond - gap_cond * scale) <= 1e-10

    def test_scalar_and_vector_paths_agree(self):
        gen = np.random.default_rng(22)
        for _ in range(50):
            rho = gen.uniform(0.05, 0.95)
            u, v = scalar_channels(gen.uniform(0, 0.99), gen.uniform(0, 0.99))
            model = GaussianPairModel.scalar(rho)
            assert abs(scalar_extremal_gap(rho, u, v) - vector_extremal_gap(model, u, v)) < 1e-12

    def test_oohama_gap_scalar_cases(self):
        model = GaussianPairModel.scalar(0.6)
        assert abs(oohama_gap(model, GaussianAuxChannel.degenerate_on("x"))) < 1e-15
        u = GaussianAuxChannel.scalar_corr(0.7, "x")
        sg = scalar_extremal_gap(0.6, u, GaussianAuxChannel.degenerate_on("y"))
        assert abs(oohama_gap(model, u) - sg) < 1e-12

    def test_oohama_gap_vector_equality_family(self):
        gen = np.random.default_rng(23)
        sz = random_pd(gen, 4)
        model = GaussianPairModel.vector(3.0 * sz, sz)
        for alpha in (0.25, 1.0, 2.0):
            u = GaussianAuxChannel.for_conditional_cov(model, alpha * sz, "x")
            assert abs(oohama_gap(model, u)) < 1e-9

    def test_oohama_gap_strictly_positive_off_family(self):
        gen = np.random.default_rng(42)
        sx, sz = random_pd(gen, 3), random_pd(gen, 3)
        model = GaussianPairModel.vector(sx, sz)
        u = GaussianAuxChannel.for_conditional_cov(model, 0.5 * sx, "x")
        assert oohama_gap(model, u) > 1e-6


class TestDualityConsistency:
    def test_functional_dominates_closed_form(self):
        gen = np.random.default_rng(24)
        for _ in range(300):
            model, u, v = make_scalar_triple(gen)
            lam = gen.uniform(0.0, 25.0)
            info = mutual_information(model, u, v)
            closed = scalar_dual_closed(lam, model.rho).value_bits
            assert dual_functional(info, lam) >= closed - 1e-9

    def test_vector_functional_dominates_lower_bound(self):
        gen = np.random.default_rng(25)
        for _ in range(150):
            model, u, v = make_vector_triple(gen, n=int(gen.integers(2, 5)))
            lam = gen.uniform(0.0, 15.0)
            info = mutual_information(model, u, v)
            bound = vector_dual_lower(lam, model.sigma_x, model.sigma_z).value_bits
            assert dual_functional(info, lam) >= bound - 1e-9
