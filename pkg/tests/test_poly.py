import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcurv.poly import GRID_CELLS, Polynomial, real_roots

F_VDP = Polynomial([0, -1, 0, 1 / 3])
F_LM = Polynomial([0, -1, 0, 1 / 3, 0, 1 / 5])


coeff_lists = st.lists(
    st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=0, max_size=9
)
xs_small = st.floats(min_value=-10, max_value=10, allow_nan=False)


def naive_eval(p: Polynomial, x: float) -> float:
    return sum(c * x**k for k, c in enumerate(p.coeffs))


class TestEval:
    def test_cubic_over_three(self):
        assert F_VDP(2.0) == pytest.approx(2 / 3, rel=1e-12)

    def test_zero_polynomial(self):
        assert Polynomial()(17.3) == 0.0

    def test_quintic_at_one(self):
        assert F_LM(1.0) == pytest.approx(-7 / 15, rel=1e-12)

    @given(coeff_lists, xs_small)
    @settings(max_examples=200)
    def test_matches_naive_power_sum(self, coeffs, x):
        p = Polynomial(coeffs)
        expected = naive_eval(p, x)
        assert p(x) == pytest.approx(expected, rel=1e-13, abs=1e-13)


class TestCalculus:
    def test_derivative_of_cubic(self):
        assert F_VDP.derivative().coeffs == pytest.approx((-1.0, 0.0, 1.0))

    def test_derivative_of_constant(self):
        assert Polynomial([4.2]).derivative().is_zero

    def test_derivative_of_quartic_potential(self):
        G = Polynomial([0, 0, 1 / 2, 0, 1 / 12])
        assert G.derivative().coeffs == pytest.approx((0.0, 1.0, 0.0, 1 / 3))

    def test_antiderivative_of_linear(self):
        assert Polynomial([0, 1]).antiderivative(0.0).coeffs == pytest.approx((0.0, 0.0, 0.5))

    def test_antiderivative_of_zero_keeps_constant(self):
        assert Polynomial().antiderivative(5.0).coeffs == (5.0,)

    def test_antiderivative_of_cubic(self):
        g = Polynomial([0, 1, 0, 1 / 3])
        assert g.antiderivative(0.0).coeffs == pytest.approx((0.0, 0.0, 0.5, 0.0, 1 / 12))

    # coefficients inside ~10x of the zero-snap threshold are deliberately
    # excluded: the canonicalization snap absorbs them after division
    snap_safe_coeffs = st.lists(
        st.floats(min_value=-10, max_value=10, allow_nan=False).filter(
            lambda v: v == 0.0 or abs(v) > 1e-6
        ),
        min_size=0,
        max_size=9,
    )

    @given(snap_safe_coeffs, st.floats(min_value=-5, max_value=5, allow_nan=False))
    @settings(max_examples=200)
    def test_derivative_of_antiderivative_roundtrip(self, coeffs, c0):
        p = Polynomial(coeffs)
        back = p.antiderivative(c0).derivative()
        assert len(back.coeffs) == len(p.coeffs)
        for a, b in zip(back.coeffs, p.coeffs):
            assert a == pytest.approx(b, rel=1e-15, abs=1e-15)


class TestArithmetic:
    def test_mul(self):
        x = Polynomial([0, 1])
        assert (x * x).coeffs == (0.0, 0.0, 1.0)

    def test_add(self):
        assert (Polynomial([-1, 0, 1]) + 1).coeffs == (0.0, 0.0, 1.0)

    def test_quadratic_potential_case_function_vanishes(self):
        G = Polynomial([0, 0, 0.5])
        Gp = G.derivative()
        Gpp = Gp.derivative()
        H = Gp * Gp - 2.0 * (G * Gpp)
        assert H.is_zero

    @given(coeff_lists, coeff_lists, xs_small)
    @settings(max_examples=200)
    def test_eval_is_ring_homomorphism(self, ca, cb, x):
        p, q = Polynomial(ca), Polynomial(cb)
        scale = max(1.0, abs(p(x)) + abs(q(x)))
        assert (p + q)(x) == pytest.approx(p(x) + q(x), abs=1e-12 * scale)
        scale_m = max(1.0, abs(p(x)) * abs(q(x)))
        assert (p * q)(x) == pytest.approx(p(x) * q(x), abs=1e-12 * scale_m * (len(p.coeffs) + 1))

    def test_scale(self):
        assert (Polynomial([1, 2]) * 3.0).coeffs == (3.0, 6.0)
        assert (3.0 * Polynomial([1, 2])).coeffs == (3.0, 6.0)


class TestCanonicalForm:
    def test_trailing_zeros_stripped(self):
        assert Polynomial([1, 2, 0, 0]).coeffs == (1.0, 2.0)

    def test_snap_threshold(self):
        assert Polynomial([1, 1e-15]).coeffs == (1.0,)
        assert Polynomial([1, 1e-13]).coeffs == (1.0, 1e-13)

    def test_zero_degree_is_sentinel(self):
        assert Polynomial().degree is None
        assert Polynomial([0.0, 1e-15]).degree is None

    def test_configurable_snap(self):
        assert Polynomial([1, 1e-13], zero_snap=1e-12).coeffs == (1.0,)


class TestRealRoots:
    def test_f_roots(self):
        assert real_roots(Polynomial([-1, 0, 1]), 0.0, 3.0) == pytest.approx([1.0], abs=1e-11)

    def test_quartic_root(self):
        alpha = math.sqrt((math.sqrt(5) - 1) / 2)
        got = real_roots(Polynomial([-1, 0, 1, 0, 1]), 0.0, 3.0)
        assert got == pytest.approx([alpha], abs=1e-11)

    def test_cubic_positive_zero(self):
        got = real_roots(F_VDP, 0.1, 3.0)
        assert got == pytest.approx([math.sqrt(3)], abs=1e-11)

    def test_zero_polynomial_raises(self):
        with pytest.raises(ValueError, match="zero polynomial"):
            real_roots(Polynomial(), 0.0, 1.0)

    def test_bad_interval_raises(self):
        with pytest.raises(ValueError):
            real_roots(F_VDP, 2.0, 1.0)

    def test_even_multiplicity_root_found(self):
        got = real_roots(Polynomial([1, -2, 1]), 0.0, 3.0)  # (x-1)^2
        assert got == pytest.approx([1.0], abs=1e-7)

    def test_no_roots(self):
        assert real_roots(Polynomial([1, 0, 1]), -5.0, 5.0) == []

    def test_endpoint_root(self):
        assert real_roots(Polynomial([-1, 1]), 0.0, 1.0) == pytest.approx([1.0], abs=1e-11)

    @given(
        st.lists(
            st.floats(min_value=-3, max_value=3, allow_nan=False).filter(
                lambda v: abs(v) > 0.05
            ),
            min_size=1,
            max_size=5,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_roots_have_small_residual_and_are_separated(self, root_locs):
        p = Polynomial([1.0])
        for r in root_locs:
            p = p * Polynomial([-r, 1])
        tol = 1e-12
        got = real_roots(p, -4.0, 4.0, tol)
        for r in got:
            scale = sum(abs(c) * max(1.0, abs(r)) ** k for k, c in enumerate(p.coeffs))
            assert abs(p(r)) <= tol * max(1.0, scale)
        for a, b in zip(got[:-1], got[1:]):
            assert b - a >= tol
        # every simple true root is recovered
        for r in sorted(set(round(v, 9) for v in root_locs)):
            if sum(1 for v in root_locs if abs(v - r) < 1e-9) == 1:
                assert any(abs(v - r) < 1e-6 for v in got)

    def test_grid_default_resolves_close_roots(self):
        p = Polynomial([1.0])
        for r in (0.5, 0.52, 0.54):
            p = p * Polynomial([-r, 1])
        got = real_roots(p, 0.0, 1.0, 1e-12, cells=GRID_CELLS)
        assert got == pytest.approx([0.5, 0.52, 0.54], abs=1e-10)


class TestSerialization:
    def test_json_form(self):
        assert F_VDP.to_list() == [0.0, -1.0, 0.0, 1 / 3]
        assert Polynomial(F_VDP.to_list()) == F_VDP
