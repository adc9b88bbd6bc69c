"""Property-based invariants (hypothesis)."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solsta import adiabatic, analysis, gpe, sta
from solsta.errors import InfeasibleTrajectoryError
from solsta.types import BoundaryConditions, PhysicalConfig, SwitchingParams

finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=30, deadline=None)
@given(g_base=st.floats(0.5, 10.0), a_s=st.floats(0.1, 30.0),
       s=st.floats(0.1, 100.0), t_f=st.floats(0.5, 200.0))
def test_switching_edge_sum_symmetry(g_base, a_s, s, t_f):
    # g(0) + g(t_f) = 2 g_base + A_s for any steepness (odd arctan about t_f/2)
    p = SwitchingParams(g_base=g_base, a_s_amp=a_s, s_rate=s, t_f=t_f)
    g0, gf = adiabatic.g_edges(p)
    assert g0 + gf == pytest.approx(2.0 * g_base + a_s, rel=1e-12)
    assert g0 < gf


@settings(max_examples=30, deadline=None)
@given(g=st.floats(0.5, 50.0), omega=st.floats(1e-3, 0.2), n=st.floats(0.5, 2.0))
def test_exact_width_solves_quartic(g, omega, n):
    config = PhysicalConfig(omega=omega, n_norm=n)
    a = adiabatic.ac_exact(g, config)
    residual = a**4 * omega**2 * np.pi**2 + g * n * a - 1.0
    assert abs(residual) < 1e-10
    assert 0.0 < a <= 1.0 / (g * n) + 1e-15


@settings(max_examples=30, deadline=None)
@given(a0=st.floats(0.1, 2.0), af=st.floats(0.1, 2.0),
       adot0=st.floats(-0.05, 0.05), adotf=st.floats(-0.05, 0.05),
       t_f=st.floats(2.0, 50.0))
def test_quintic_meets_boundary_conditions(a0, af, adot0, adotf, t_f):
    bc = BoundaryConditions(a0, adot0, 0.0, af, adotf, 0.0)
    try:
        traj = sta.design_polynomial(bc, t_f)
    except InfeasibleTrajectoryError:
        return  # positivity can genuinely fail; that rejection is the contract
    scale = max(a0, af)
    assert abs(traj.a[0] - a0) < 1e-9 * scale
    assert abs(traj.a[-1] - af) < 1e-9 * scale
    assert abs(traj.adot[0] - adot0) < 1e-9
    assert abs(traj.adot[-1] - adotf) < 1e-9
    assert abs(traj.addot[0]) < 1e-9
    assert abs(traj.addot[-1]) < 1e-9
    assert np.all(traj.a > 0)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_fidelity_bounded_and_symmetric(seed):
    grid = gpe.build_grid(10.0, 256, 1e-3)
    rng = np.random.default_rng(seed)
    v1 = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    v2 = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    psi1 = gpe.WaveFunction(v1, grid)
    psi2 = gpe.WaveFunction(v2, grid)
    f12 = analysis.fidelity(psi1, psi2)
    f21 = analysis.fidelity(psi2, psi1)
    assert 0.0 <= f12 <= 1.0 + 1e-12
    assert f12 == pytest.approx(f21, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(a=st.floats(0.2, 3.0), adot=st.floats(-1.0, 1.0), n=st.floats(0.5, 2.0))
def test_sech_state_norm_and_width(a, adot, n):
    grid = gpe.build_grid(40.0, 4096, 1e-4)
    psi = gpe.sech_state(a, adot, n, grid)
    assert analysis.norm(psi) == pytest.approx(2.0 * n, rel=1e-5)
    assert analysis.width_second_moment(psi) == pytest.approx(a, rel=1e-2)


@settings(max_examples=20, deadline=None)
@given(t=st.floats(0.0, 10.0))
def test_protocol_curve_interpolation_consistent(t):
    p = SwitchingParams(t_f=10.0, s_rate=10.0)
    curve = adiabatic.protocol_curve(p, 4001)
    # cubic-spline error is largest across the steep switch; 1e-5 on a
    # range-10 curve is ample for every consumer
    assert curve(t) == pytest.approx(adiabatic.switching_g(t, p), abs=1e-5)
