import math

import pytest

import seqtrack as st


def test_reference_boundary():
    vf = st.solve(st.ModelParams())
    assert vf.regime == "switching"
    assert abs(vf.B - 0.639) < 5e-4
    assert abs(vf.K - 0.378) < 5e-4
    assert all(passed for _, _, passed in vf.verify_fit().values())


def test_never_switch_value_is_v_tilde():
    p = st.ModelParams(c1=2.0)
    vf = st.solve(p)
    assert vf.regime == "never_switch"
    assert vf.K is None and vf.B is None
    for x in (-0.5, 0.0, 0.7):
        assert vf.value(x, 1) == st.v_tilde(p, x)


def test_symmetry_of_value():
    vf = st.solve(st.ModelParams())
    assert vf.value(0.3, -1) == pytest.approx(vf.value(-0.3, 1), abs=1e-12)


def test_validation_names_key():
    with pytest.raises(st.ValidationError, match="lambda"):
        st.ModelParams(lambda_=0.0)


def test_phi_table():
    phi = st.solve_phi(st.ModelParams())
    value, slope = phi(1 - 1e-4)
    assert value == pytest.approx(1.0)
    assert slope == pytest.approx(-0.5)
    assert all(a < b for a, b in zip(phi.dphi, phi.dphi[1:]))


def test_simulation_is_deterministic():
    p = st.ModelParams()
    a = st.simulate_path(p, 3, horizon=1.0, seed=7)
    b = st.simulate_path(p, 3, horizon=1.0, seed=7)
    assert a == b
    assert a["x"][0] == 0.0
    assert all(abs(m) < 1 for m in a["m"])


def test_never_switch_cost_near_v_tilde():
    p = st.ModelParams()
    res = st.estimate_cost(p, "never", n_paths=400, dt=2e-3, horizon=50.0)
    est = res["m_form"]
    assert abs(est["mean"] - 2.0) < 4 * est["stderr"] + est["tail_bound"]


def test_hopital_ratio_limit():
    assert st.hopital_ratio(st.ModelParams(), 1 - 1e-5) == pytest.approx(1.0, rel=1e-2)
    rows, converged = st.entrance_boundary_check(st.ModelParams())
    assert converged
    assert math.isnan(rows[0][2])
