import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcurv import (
    State,
    curvature_sample,
    flow_derivatives,
    jacobian,
    jacobian_rate,
    lie_identity_residual,
    make_system,
    phi,
    phi_dot,
    slow_branches,
    slow_manifold_table,
    vector_field,
)
from flowcurv.curvature import MANIFOLD_CSV_HEADER, format_manifold_csv
from flowcurv.dynamics import _make_rhs, _propagate

from conftest import sweep_states

S_REF = State(0.0, 2.0, 0.65)


def det2(a, b):
    return a[0] * b[1] - a[1] * b[0]


class TestFlowDerivatives:
    def test_reference_point(self, vdp):
        xd, yd, xdd, ydd, xddd, yddd = flow_derivatives(vdp, S_REF)
        assert xd == pytest.approx(-1 / 3, rel=1e-9)
        assert yd == -2.0
        assert xdd == pytest.approx(-20.0, rel=1e-9)
        assert ydd == pytest.approx(1 / 3, rel=1e-9)
        assert xddd == pytest.approx(1197.7777777, rel=1e-6)
        assert yddd == pytest.approx(20.0, rel=1e-9)

    def test_on_critical_manifold(self, vdp):
        s = State(0.0, 1.4, vdp.F(1.4))
        xd, _, _, ydd, _, _ = flow_derivatives(vdp, s)
        assert xd == pytest.approx(0.0, abs=1e-14)
        assert ydd == pytest.approx(0.0, abs=1e-13)

    def test_quintic_point(self):
        sys_ = make_system([0, -1, 0, 1 / 3, 0, 1 / 5], [0, 1, 0, 1 / 3], 0.1)
        xd, yd, _, ydd, _, _ = flow_derivatives(sys_, State(0.0, 1.0, -0.4))
        assert xd == pytest.approx(2 / 3, rel=1e-9)
        assert yd == pytest.approx(-4 / 3, rel=1e-12)
        assert ydd == pytest.approx(-4 / 3, rel=1e-9)

    def test_sample_velocity_matches_vector_field(self, vdp):
        cs = curvature_sample(vdp, S_REF)
        assert (cs.xdot, cs.ydot) == vector_field(vdp, S_REF)

    def test_third_derivative_matches_matrix_form(self, both_systems):
        for sys_ in both_systems:
            for s in sweep_states(200):
                xd, yd, xdd, ydd, xddd, yddd = flow_derivatives(sys_, s)
                vec = jacobian(sys_, s.x) @ np.array([xdd, ydd]) + jacobian_rate(sys_, s) @ np.array([xd, yd])
                scale = max(1.0, abs(sys_.gpp(s.x) * xd * xd) + abs(sys_.gp(s.x) * xdd))
                assert yddd == pytest.approx(vec[1], abs=1e-11 * scale)
                scale_x = max(1.0, abs(vec[0]))
                assert xddd == pytest.approx(vec[0], abs=1e-11 * scale_x)


class TestPhi:
    def test_reference_point(self, vdp):
        assert phi(vdp, S_REF) == pytest.approx(40.111111111, rel=1e-9)

    def test_equilibrium_gives_zero(self, vdp):
        assert phi(vdp, State(0.0, 0.0, 0.0)) == 0.0

    def test_below_manifold_negative(self, vdp):
        assert phi(vdp, State(0.0, 2.0, 0.6)) == pytest.approx(-78.22222222, rel=1e-9)

    def test_determinant_and_expanded_forms_agree(self, both_systems):
        for sys_ in both_systems:
            for s in sweep_states(1000):
                cs = curvature_sample(sys_, s)  # determinant form
                expanded = phi(sys_, s)
                assert expanded == pytest.approx(cs.phi, abs=1e-12 * max(1.0, abs(cs.phi)))


class TestPhiDot:
    def test_zero_velocity_state(self, vdp):
        assert phi_dot(vdp, State(0.0, 0.0, 0.0)) == 0.0

    @pytest.mark.parametrize(
        "config, state",
        [
            ("vdp", S_REF),
            ("quintic", State(0.0, 1.5, None)),  # y filled below
        ],
    )
    def test_finite_difference_oracle(self, config, state, vdp):
        if config == "vdp":
            sys_ = vdp
            s0 = state
        else:
            sys_ = make_system([0, -1, 0, 1 / 3, 0, 1 / 5], [0, 1, 0, 1 / 3], 0.1)
            s0 = State(0.0, 1.5, sys_.F(1.5) - 0.05)
        h = 1e-6
        rhs = _make_rhs(sys_)
        x1, y1 = _propagate(rhs, s0.x, s0.y, h, n_sub=10)
        x2, y2 = _propagate(rhs, x1, y1, h, n_sub=10)
        fd = (phi(sys_, State(0.0, x2, y2)) - phi(sys_, s0)) / (2 * h)
        mid = phi_dot(sys_, State(0.0, x1, y1))
        assert fd == pytest.approx(mid, rel=1e-4)

    def test_matches_expanded_form(self, both_systems):
        for sys_ in both_systems:
            for s in sweep_states(300):
                xd, yd, xdd, ydd, xddd, yddd = flow_derivatives(sys_, s)
                expanded = xddd * yd + xd * (sys_.gpp(s.x) * xd * xd + sys_.gp(s.x) * xdd)
                got = phi_dot(sys_, s)
                scale = max(1.0, abs(xddd * yd) + abs(yddd * xd))
                assert got == pytest.approx(expanded, abs=1e-10 * scale)


class TestLieIdentity:
    def test_reference_point(self, vdp):
        r = lie_identity_residual(vdp, S_REF)
        assert abs(r) <= 1e-9 * max(1.0, abs(phi_dot(vdp, S_REF)))

    def test_equilibrium_exact_zero(self, vdp):
        assert lie_identity_residual(vdp, State(0.0, 0.0, 0.0)) == 0.0

    def test_sweep_both_systems(self, both_systems):
        for sys_ in both_systems:
            worst = 0.0
            for s in sweep_states(100):
                rel = abs(lie_identity_residual(sys_, s)) / max(1.0, abs(phi_dot(sys_, s)))
                worst = max(worst, rel)
            assert worst <= 1e-9

    @given(
        vecs=st.tuples(*[st.floats(min_value=-5, max_value=5, allow_nan=False)] * 4),
        x=st.floats(min_value=-3, max_value=3, allow_nan=False),
    )
    @settings(max_examples=150)
    def test_wedge_identity(self, vecs, x, vdp):
        a = np.array(vecs[:2])
        b = np.array(vecs[2:])
        J = jacobian(vdp, x)
        lhs = det2(J @ a, b) + det2(a, J @ b)
        rhs = np.trace(J) * det2(a, b)
        scale = max(1.0, abs(det2(J @ a, b)) + abs(det2(a, J @ b)))
        assert lhs == pytest.approx(rhs, abs=1e-10 * scale)


class TestSlowBranches:
    def test_vdp_reference(self, vdp):
        br = slow_branches(vdp, 2.0)
        assert br.u_slow == pytest.approx(-0.033521, abs=1e-6)
        assert br.u_fast == pytest.approx(-5.966479, abs=1e-5)
        assert br.y_slow == pytest.approx(0.633146, abs=1e-6)
        assert not br.fold_excluded

    def test_quadratic_formula_oracle(self, vdp):
        fx, gx, gpx = vdp.f(2.0), vdp.g(2.0), vdp.gp(2.0)
        disc = (fx * gx) ** 2 - 4 * gpx * vdp.eps * gx * gx
        u_exact = (-fx * gx + math.sqrt(disc)) / (2 * gpx)
        assert slow_branches(vdp, 2.0).u_slow == pytest.approx(u_exact, rel=1e-12)

    def test_fold_exclusion(self, vdp):
        br = slow_branches(vdp, 1.0)
        assert br.fold_excluded
        assert br.u_slow is None and br.u_fast is None and br.y_slow is None

    def test_negative_discriminant_is_not_fold(self, vdp):
        br = slow_branches(vdp, 1.1)  # f small but above fold_tol; disc < 0
        assert not br.fold_excluded
        assert br.u_slow is None

    def test_eps_to_zero_recovers_critical_manifold(self):
        for eps in (1e-3, 1e-5, 1e-8):
            sys_ = make_system([0, -1, 0, 1 / 3], [0, 1], eps)
            br = slow_branches(sys_, 2.0)
            assert abs(br.y_slow - sys_.F(2.0)) <= eps

    def test_degenerate_linear_branch(self):
        sys_ = make_system([0, -1, 0, 1 / 3], [1.0], 0.05)  # g' = 0
        br = slow_branches(sys_, 2.0)
        assert br.u_fast is None
        assert br.u_slow == pytest.approx(-0.05 * sys_.g(2.0) / sys_.f(2.0), rel=1e-12)

    def test_slow_branch_smaller_than_fast(self, both_systems):
        for sys_ in both_systems:
            for br in slow_manifold_table(sys_, 1.4, 2.4, 60):
                if br.u_slow is not None and br.u_fast is not None:
                    assert abs(br.u_slow) <= abs(br.u_fast)

    def test_branch_zeroes_phi(self, both_systems):
        for sys_ in both_systems:
            for br in slow_manifold_table(sys_, 1.4, 2.4, 60):
                if br.y_slow is None:
                    continue
                val = sys_.eps**2 * phi(sys_, State(0.0, br.x, br.y_slow))
                assert abs(val) <= 1e-9 * max(1.0, sys_.eps * sys_.g(br.x) ** 2)

    def test_first_order_asymptotics_ratio(self, vdp):
        def err(eps):
            sys_ = make_system(vdp.F, vdp.g, eps)
            u = slow_branches(sys_, 2.0).u_slow
            return abs(u + eps * sys_.g(2.0) / sys_.f(2.0))

        ratio = err(0.04) / err(0.02)
        assert 3.5 <= ratio <= 4.5


class TestSlowManifoldTable:
    def test_rows_and_signs(self, vdp):
        rows = slow_manifold_table(vdp, 1.25, 2.0, 5)
        assert len(rows) == 5
        assert all(not r.fold_excluded for r in rows)
        assert all(r.u_slow is not None and r.u_slow < 0 for r in rows)

    def test_discriminant_boundary_at_small_f(self, vdp):
        # At eps = 0.05 real branches need f(x)^2 >= 4*eps*g'; x = 1.2 sits
        # just below that threshold, so no branch is reported there.
        br = slow_branches(vdp, 1.2)
        assert br.u_slow is None and not br.fold_excluded
        assert slow_branches(vdp, 1.21).u_slow is not None

    def test_fold_rows_flagged(self, vdp):
        rows = slow_manifold_table(vdp, 0.5, 1.5, 3)  # hits x = 1.0 exactly
        assert any(r.fold_excluded for r in rows)

    def test_two_points_are_endpoints(self, vdp):
        rows = slow_manifold_table(vdp, 1.2, 2.0, 2)
        assert [r.x for r in rows] == [1.2, 2.0]

    def test_n_below_two_rejected(self, vdp):
        with pytest.raises(ValueError):
            slow_manifold_table(vdp, 1.2, 2.0, 1)

    def test_csv_round_trip(self, vdp):
        rows = slow_manifold_table(vdp, 1.25, 2.0, 4)
        text = format_manifold_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == MANIFOLD_CSV_HEADER
        first = lines[1].split(",")
        assert float(first[0]) == rows[0].x
        assert float(first[1]) == rows[0].y_slow
        assert first[4] in ("true", "false")
