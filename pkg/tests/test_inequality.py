import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mixed_scales, window_points
from tsineq.calculus import DEFAULT_CONFIG
from tsineq.errors import NotContinuousScale, NotIntegerScale, ShiftNotInScale
from tsineq.funcdsl import DifferentiableFn, ParamFunction
from tsineq.inequality import (
    TRAPEZOID_REDUCTION_FACTOR,
    InequalityReport,
    classic_weight_polynomial,
    composition_breaks,
    default_slack,
    gruss_corollary_classic,
    gruss_corollary_R,
    gruss_corollary_Z,
    gruss_reduction_factor,
    gruss_verify,
    pachpatte_gruss,
    pachpatte_trapezoid,
    pachpatte_weight,
    sup_norms,
    trapezoid_corollary_linear,
    trapezoid_corollary_R,
    trapezoid_corollary_wt,
    trapezoid_corollary_Z,
    trapezoid_verify,
)
from tsineq.kernel import build_kernel
from tsineq.timescale import TimeScale

TOL = DEFAULT_CONFIG.abs_tol
R01 = TimeScale.interval(0, 1)


def fn(text):
    return DifferentiableFn.from_text(text)


class TestReport:
    def test_margin_and_slack(self):
        r = InequalityReport("thm3.2", 1.0, 1.0 - 5e-9, 1e-8, {}, ())
        assert r.margin == pytest.approx(-5e-9) and r.passed
        assert default_slack(2.0) == 10 * TOL + 3e-12

    def test_to_dict_is_plain(self):
        r = trapezoid_verify(fn("t^2"), build_kernel(R01, 0, 1, 0))
        d = r.to_dict()
        assert d["theorem_id"] == "thm3.2" and d["pass"] is True
        assert all(type(v) in (int, float, bool) for v in d["components"].values())


class TestSupNorms:
    def test_line(self):
        n = sup_norms(R01, 0, 1, f=fn("t^2"))
        assert (n.M, n.N, n.exact) == (2, 2, True)

    def test_integers(self):
        # forward differences of t^2 at 0, 1, 2
        n = sup_norms(TimeScale.points([0, 1, 2, 3]), 0, 3, f=fn("t^2"))
        assert n.M == 5

    def test_identity_function(self):
        n = sup_norms(TimeScale.from_pairs([[0, 1], [2, 2], [2.5, 2.5]]), 0, 2.5, f=fn("t"))
        assert n.M == pytest.approx(1) and n.N == pytest.approx(1)

    def test_shifted_derivative_differs_from_composed(self):
        # sigma(0) = 1, sigma(1) = 3: (f∘sigma)^Δ(0) = (9 - 1) / 1 while f^Δ(sigma(0)) = (9 - 1) / 2
        n = sup_norms(TimeScale.points([0, 1, 3, 4]), 0, 3, f=fn("t^2"))
        assert n.N == 8
        assert n.N_composed == 7

    def test_transcendental_grid(self):
        n = sup_norms(TimeScale.interval(0, 3), 0, 3, p=fn("sin(t)"))
        assert n.P == pytest.approx(1, abs=1e-12)
        assert not n.exact


class TestTrapezoid:
    def test_square_on_unit_interval(self):
        r = trapezoid_verify(fn("t^2"), build_kernel(R01, 0, 1, 0))
        assert r.lhs == pytest.approx(1 / 3, abs=TOL)
        assert r.rhs == pytest.approx(8 / 3, abs=TOL)
        assert r.passed

    def test_constant_has_zero_lhs(self):
        T = TimeScale.from_pairs([[0, 1], [1.5, 1.5], [2, 2]])
        r = trapezoid_verify(fn("4"), build_kernel(T, 0, 2, 0.3))
        assert r.lhs == 0 and r.rhs == 0 and r.passed

    def test_discrete_brute_force(self):
        T = TimeScale.points([0, 1, 2, 3])
        f = fn("t^2")
        r = trapezoid_verify(f, build_kernel(T, 0, 2, 0))
        # nu = 1, W = 2; sigma sum = (1 + 4) + (4 + 9); both boundary weights vanish at lambda = 0
        signed = 1 * (16 - 0) - 4 / 2 * 18
        assert r.components["signed_lhs"] == pytest.approx(signed, abs=1e-12)
        assert r.passed

    def test_kernel_form_matches_display_without_breaks(self):
        T = TimeScale.from_pairs([[0, 0], [0.5, 1.5], [2, 2], [3, 3]])
        r = trapezoid_verify(fn("sin(t) + t^2/3"), build_kernel(T, 0, 3, 0.4, w="t + t^3/10"))
        assert r.components["composition_breaks"] == 1
        # ending at a dense point keeps f∘sigma continuous on the window
        T = TimeScale.from_pairs([[0, 0], [0.5, 1.5], [3, 3]])
        assert trapezoid_verify(fn("t"), build_kernel(T, 0, 1.5, 0.4)).components["composition_breaks"] == 1
        r = trapezoid_verify(fn("sin(t) + t^2/3"), build_kernel(T, 0, 1.2, 0.4, w="t + t^3/10"))
        assert r.components["composition_breaks"] == 0
        assert abs(r.components["identity_gap"]) <= 10 * TOL

    @pytest.mark.parametrize("pairs, b, lhs, rhs", [
        ([[0, 1], [3, 3]], 1, 1.0, 0.5),
        ([[0, 1], [3, 3], [4, 4]], 3, 4.5, 4.0),
    ])
    def test_printed_bound_fails_across_a_composition_break(self, pairs, b, lhs, rhs):
        r = trapezoid_verify(fn("t"), build_kernel(TimeScale.from_pairs(pairs), 0, b, 1))
        assert r.lhs == pytest.approx(lhs, abs=1e-9)
        assert r.rhs == pytest.approx(rhs, abs=1e-9)
        assert not r.passed
        assert r.components["composition_breaks"] == 1
        assert any("jumps" in n for n in r.notes)

    def test_composition_breaks(self):
        T = TimeScale.from_pairs([[0, 1], [2, 2], [3, 4], [6, 6]])
        np.testing.assert_array_equal(composition_breaks(T, 0, 6), [1.0, 4.0])
        np.testing.assert_array_equal(composition_breaks(T, 0, 1), [1.0])
        assert composition_breaks(T, 2, 3.5).size == 0
        assert composition_breaks(TimeScale.points([0, 1, 2]), 0, 2).size == 0

    @given(st.floats(-4, 4).filter(lambda c: abs(c) > 1e-3), st.floats(0, 1))
    def test_scales_quadratically(self, c, lam):
        T = TimeScale.from_pairs([[0, 1], [1.3, 1.3], [1.8, 2.6]])
        kp = build_kernel(T, 0, 1.3, lam, w="exp(t/4)")
        base = trapezoid_verify(fn("sin(2*t) + t"), kp)
        scaled = trapezoid_verify(fn(f"({c}) * (sin(2*t) + t)"), kp)
        assert scaled.lhs == pytest.approx(c**2 * base.lhs, rel=1e-9, abs=1e-12)
        assert scaled.rhs == pytest.approx(c**2 * base.rhs, rel=1e-9)
        assert scaled.components["M"] == pytest.approx(abs(c) * base.components["M"], rel=1e-9)


class TestTrapezoidCorollaries:
    @pytest.mark.parametrize("lam", [0, 0.3, 1])
    @pytest.mark.parametrize("w", ["t", "t + t^3/10"])
    def test_real_line_is_half_of_general(self, lam, w):
        kp = build_kernel(TimeScale.interval(0, 1.5), 0, 1.5, lam, ParamFunction("power", exponent=2), w)
        f = fn("exp(t/2) - t^2")
        gen, cor = trapezoid_verify(f, kp), trapezoid_corollary_R(f, kp)
        assert abs(gen.lhs - 2 * cor.lhs) <= 4 * TOL
        assert abs(gen.rhs - 2 * cor.rhs) <= 4 * TOL

    def test_real_line_requires_interval(self):
        with pytest.raises(NotContinuousScale):
            trapezoid_corollary_R(fn("t"), build_kernel(TimeScale.points([0, 1, 2]), 0, 2, 0))

    def test_real_line_examples(self):
        r = trapezoid_corollary_R(fn("t^2"), build_kernel(R01, 0, 1, 0))
        assert (r.lhs, r.rhs) == (pytest.approx(1 / 6), pytest.approx(4 / 3))
        assert trapezoid_corollary_R(fn("2.5"), build_kernel(R01, 0, 1, 0.4)).lhs == 0

    def test_h2_form_examples(self):
        f = fn("t^2")
        r = trapezoid_corollary_wt(f, build_kernel(TimeScale.interval(0, 2), 0, 2, 1))
        assert r.components["h2_factor"] == pytest.approx(8 / 3, abs=1e-12)
        assert r.components["double_abs_kernel"] == pytest.approx(2, abs=1e-12)
        assert r.components["h2_equals_kernel"] is False
        r = trapezoid_corollary_wt(f, build_kernel(TimeScale.interval(0, 2), 0, 2, 0))
        assert r.components["h2_equals_kernel"] is True
        assert r.components["h2_factor"] == pytest.approx(r.components["double_abs_kernel"], abs=1e-12)
        r = trapezoid_corollary_wt(f, build_kernel(TimeScale.points([0, 1, 2]), 0, 2, 1))
        assert r.passed

    def test_h2_form_needs_shifts_in_scale(self):
        kp = build_kernel(TimeScale.points([0, 1, 2]), 0, 2, 0.5, ParamFunction("constant", value=0.5))
        with pytest.raises(ShiftNotInScale):
            trapezoid_corollary_wt(fn("t"), kp)

    @given(mixed_scales(), st.floats(0, 1), st.data())
    def test_h2_form_agrees_with_general_when_precondition_holds(self, T, lam, data):
        ends = window_points(T).tolist()
        a, b = sorted(data.draw(st.lists(st.sampled_from(ends), min_size=2, max_size=2, unique=True)))
        if not T.continuous_pieces(a, b):
            lam = 0.0
        try:
            kp = build_kernel(T, a, b, lam)
            cor = trapezoid_corollary_wt(fn("t^2 - t"), kp)
        except ShiftNotInScale:
            return
        gen = trapezoid_verify(fn("t^2 - t"), kp)
        assert abs(gen.lhs - cor.lhs) <= 4 * TOL
        if cor.components["h2_equals_kernel"]:
            assert abs(gen.rhs - cor.rhs) <= 4 * TOL
        else:
            assert cor.rhs >= gen.rhs - 4 * TOL

    @pytest.mark.parametrize("lam", [0, 0.5, 1])
    def test_linear_psi_agrees_with_h2_form(self, lam):
        T = TimeScale.points([0, 1, 2, 3, 4])
        f = fn("t^3/4 - t")
        lin = trapezoid_corollary_linear(f, T, 0, 4, lam)
        wt = trapezoid_corollary_wt(f, build_kernel(T, 0, 4, lam))
        assert abs(lin.lhs - wt.lhs) <= 4 * TOL and abs(lin.rhs - wt.rhs) <= 4 * TOL

    def test_linear_examples(self):
        assert trapezoid_corollary_linear(fn("t"), R01, 0, 1, 0.5).lhs == pytest.approx(0, abs=1e-14)
        r = trapezoid_corollary_linear(fn("t^2"), R01, 0, 1, 0)
        assert r.lhs == pytest.approx(TRAPEZOID_REDUCTION_FACTOR * pachpatte_trapezoid(fn("t^2"), 0, 1).lhs)

    @given(st.integers(-5, 5), st.integers(3, 9), st.floats(0, 1))
    def test_integer_form_agrees_with_general(self, lo, n, lam):
        T = TimeScale.integers(lo, lo + n)
        a, b = lo, lo + n - 1
        kp = build_kernel(T, a, b, lam, ParamFunction("power", exponent=0.5), "2*t + t^2/10 + 30")
        f = fn("t^2/3 - 2*t")
        gen, cor = trapezoid_verify(f, kp), trapezoid_corollary_Z(f, kp)
        assert abs(gen.lhs - cor.lhs) <= 4 * TOL and abs(gen.rhs - cor.rhs) <= 4 * TOL

    def test_integer_form_brute_force(self):
        T = TimeScale.integers(0, 4)
        r = trapezoid_corollary_Z(fn("t"), build_kernel(T, 0, 3, 0))
        # f = t, w = t, lambda = 0: 1*9 - 3/3*(3 + 5 + 7), both boundary weights zero
        assert r.components["signed_lhs"] == 9 - 15
        assert r.passed
        assert trapezoid_corollary_Z(fn("3"), build_kernel(T, 0, 3, 0.2)).lhs == 0

    def test_integer_form_needs_next_point(self):
        with pytest.raises(NotIntegerScale):
            trapezoid_corollary_Z(fn("t"), build_kernel(TimeScale.integers(0, 3), 0, 3, 0))
        with pytest.raises(NotIntegerScale):
            trapezoid_corollary_Z(fn("t"), build_kernel(TimeScale.points([0, 1, 3, 4]), 0, 3, 0))


class TestGruss:
    def test_unit_interval(self):
        r = gruss_verify(fn("t"), fn("t"), build_kernel(R01, 0, 1, 0))
        assert r.lhs == pytest.approx(1 / 6, abs=TOL)
        assert r.rhs == pytest.approx(1 / 3, abs=TOL)

    def test_constant_factor(self):
        r = gruss_verify(fn("2"), fn("sin(3*t)"), build_kernel(TimeScale.interval(0, 2), 0, 2, 0))
        assert r.lhs == pytest.approx(0, abs=TOL)

    def test_discrete_brute_force(self):
        T = TimeScale.points([0, 1, 2])
        r = gruss_verify(fn("t"), fn("t"), build_kernel(T, 0, 2, 0))
        # W = 2, ∫pq = 1, ∫p = ∫q = 1, ∫ p∘sigma = 3, both boundary weights zero
        assert r.components["signed_lhs"] == 2 * 1 * 2 * 1 - 2 * (1 * 3)
        assert r.passed

    @given(mixed_scales(), st.floats(0, 1), st.data())
    def test_symmetric_and_kernel_form(self, T, lam, data):
        ends = window_points(T).tolist()
        a, b = sorted(data.draw(st.lists(st.sampled_from(ends), min_size=2, max_size=2, unique=True)))
        kp = build_kernel(T, a, b, lam, ParamFunction("power", exponent=1.5), "t + t^3/10")
        p, q = fn("sin(2*t) + t"), fn("exp(t/3) - t^2")
        pq, qp = gruss_verify(p, q, kp), gruss_verify(q, p, kp)
        assert pq.lhs == qp.lhs and pq.rhs == qp.rhs
        assert abs(pq.components["identity_gap"]) <= 10 * TOL
        assert pq.margin >= -pq.slack

    @pytest.mark.parametrize("lam", [0, 0.4, 1])
    def test_real_line_agrees(self, lam):
        kp = build_kernel(TimeScale.interval(-1, 1), -1, 1, lam, ParamFunction("power", exponent=2), "exp(t/4)")
        p, q = fn("cos(t)"), fn("t^3 - t/2")
        gen, cor = gruss_verify(p, q, kp), gruss_corollary_R(p, q, kp)
        assert abs(gen.lhs - cor.lhs) <= 4 * TOL and abs(gen.rhs - cor.rhs) <= 4 * TOL

    @given(st.integers(-5, 5), st.integers(2, 9), st.floats(0, 1))
    def test_integer_form_agrees(self, lo, n, lam):
        T = TimeScale.integers(lo, lo + n)
        kp = build_kernel(T, lo, lo + n, lam, ParamFunction("identity"), "t^2/20 + t + 10")
        p, q = fn("t^2"), fn("3 - t")
        gen, cor = gruss_verify(p, q, kp), gruss_corollary_Z(p, q, kp)
        assert abs(gen.lhs - cor.lhs) <= 4 * TOL and abs(gen.rhs - cor.rhs) <= 4 * TOL

    def test_integer_form_rejects_gaps(self):
        with pytest.raises(NotIntegerScale):
            gruss_corollary_Z(fn("t"), fn("t"), build_kernel(TimeScale.points([0, 1, 3]), 0, 3, 0))


class TestClassicForms:
    def test_pachpatte_examples(self):
        r = pachpatte_trapezoid(fn("t^2"), 0, 1)
        assert (r.lhs, r.rhs) == (pytest.approx(1 / 6, abs=1e-12), pytest.approx(4 / 3, abs=1e-12))
        r = pachpatte_trapezoid(fn("t"), 0, 1)
        assert (r.lhs, r.rhs) == (pytest.approx(0, abs=1e-14), pytest.approx(1 / 3))
        r = pachpatte_gruss(fn("t"), fn("t"), 0, 1)
        assert (r.lhs, r.rhs) == (pytest.approx(1 / 12, abs=1e-12), pytest.approx(1 / 6, abs=1e-12))

    @given(st.floats(-3, 3), st.floats(0.1, 4))
    def test_weight_polynomials_coincide(self, a, length):
        b = a + length
        t = np.linspace(a, b, 33)
        gap = np.abs(classic_weight_polynomial(t, a, b) - pachpatte_weight(t, a, b))
        assert np.all(gap <= 1e-12 * (1 + (abs(a) + abs(b)) ** 2))

    def test_classic_gruss(self):
        r = gruss_corollary_classic(fn("t"), fn("t"), 0, 0, 1)
        assert r.components["weight_polynomial_gap"] <= 1e-15
        assert r.lhs == pytest.approx(gruss_reduction_factor(0, 1) / 12, abs=1e-12)
        assert gruss_corollary_classic(fn("2"), fn("t^2"), 0, 0, 1).lhs == pytest.approx(0, abs=1e-14)
        # lambda = 1: lam*L*(p(a)+p(b))/2*∫q twice minus 2∫p∫q
        assert gruss_corollary_classic(fn("t"), fn("t"), 1, 0, 1).components["signed_lhs"] == pytest.approx(0.5 - 0.5)

    @pytest.mark.parametrize("lam", [0, 0.25, 1])
    def test_classic_matches_general(self, lam):
        kp = build_kernel(TimeScale.interval(0, 2), 0, 2, lam)
        p, q = fn("t^2"), fn("sin(t)")
        gen, cor = gruss_verify(p, q, kp), gruss_corollary_classic(p, q, lam, 0, 2)
        assert abs(gen.lhs - cor.lhs) <= 4 * TOL
        # the printed weight polynomial is the lambda = 0 line integral, the largest over lambda
        if lam == 0:
            assert abs(gen.rhs - cor.rhs) <= 4 * TOL
        else:
            assert cor.rhs > gen.rhs

    @pytest.mark.parametrize("a, b", [(0, 1), (-1, 2), (0.5, 0.75)])
    @pytest.mark.parametrize("f, g", [("t^2", "t"), ("exp(t)", "cos(t)")])
    def test_reduction_factors(self, a, b, f, g):
        kp = build_kernel(TimeScale.interval(a, b), a, b, 0)
        tr, pt = trapezoid_verify(fn(f), kp), pachpatte_trapezoid(fn(f), a, b)
        assert tr.lhs == pytest.approx(TRAPEZOID_REDUCTION_FACTOR * pt.lhs, abs=1e-8)
        assert tr.rhs == pytest.approx(TRAPEZOID_REDUCTION_FACTOR * pt.rhs, abs=1e-8)
        gr, pg = gruss_verify(fn(f), fn(g), kp), pachpatte_gruss(fn(f), fn(g), a, b)
        assert gr.lhs == pytest.approx(gruss_reduction_factor(a, b) * pg.lhs, abs=1e-8)
        assert gr.rhs == pytest.approx(gruss_reduction_factor(a, b) * pg.rhs, abs=1e-8)
