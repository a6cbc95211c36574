import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from evsizing.motor import builtin_referent
from evsizing.perfcheck import (PerformanceSpec, accel_time, max_tractive_force, speed_ceiling,
                                top_speed)
from evsizing.topology import DesignPoint, instantiate
from evsizing.vehicle import VehicleParams

RFM = builtin_referent("RFM")
VP = VehicleParams()
TINY = 1e-300


def synthetic(T0, P0=None, omega_max=1e9, kind="RWD_RFM", gamma=2.0, eta=0.95, **design):
    """Powertrain whose envelope is exactly ``min(T0, P0/omega)`` below ``omega_max``."""
    P0 = T0 * omega_max if P0 is None else P0
    ref = replace(RFM, T_m0=T0, P_m0=P0, omega_base0=None, omega_max0=omega_max)
    return instantiate(kind, DesignPoint(gamma=gamma, **design), {"RFM": ref}, eta_g=eta)


def test_constant_force_accel_matches_kinematics():
    veh = VehicleParams(c_d=TINY, c_r=TINY)
    cfg = synthetic(1000.0)
    F = 1000.0 * 2.0 * 0.95 / veh.r_w
    expected = veh.m_v * (100 / 3.6) / F
    assert accel_time(cfg, veh) == pytest.approx(expected, rel=1e-3)


def test_accel_with_drag_and_rolling_matches_closed_form():
    cfg = synthetic(1000.0)
    A = 1000.0 * 2.0 * 0.95 / VP.r_w - VP.c_r * VP.m_v * VP.g
    k = 0.5 * VP.rho_a * VP.c_d * VP.A_f
    v = 100 / 3.6
    expected = VP.m_v / math.sqrt(A * k) * math.atanh(v * math.sqrt(k / A))
    assert accel_time(cfg, VP) == pytest.approx(expected, rel=1e-3)


def test_accel_unreachable_is_infinite():
    assert accel_time(synthetic(30.0), VP) == math.inf
    slow = synthetic(1000.0, omega_max=50.0)   # ceiling 6.5 m/s
    assert accel_time(slow, VP) == math.inf


def test_top_speed_matches_analytic_crossing():
    cfg = synthetic(150.0)
    F = 150.0 * 2.0 * 0.95 / VP.r_w
    k = 0.5 * VP.rho_a * VP.c_d * VP.A_f
    v = math.sqrt((F - VP.c_r * VP.m_v * VP.g) / k)
    assert top_speed(cfg, VP) == pytest.approx(v * 3.6, abs=0.01)


def test_top_speed_on_constant_power_branch():
    P = 60e3
    cfg = synthetic(1e5, P0=P, gamma=1.0, eta=1.0)
    # P/v balances k v^2 + R; Newton on the cubic
    k = 0.5 * VP.rho_a * VP.c_d * VP.A_f
    R = VP.c_r * VP.m_v * VP.g
    v = 50.0
    for _ in range(50):
        v -= (k * v**3 + R * v - P) / (3 * k * v**2 + R)
    assert top_speed(cfg, VP) == pytest.approx(v * 3.6, abs=0.01)


def test_unlimited_envelope_hits_kinematic_ceiling():
    cfg = synthetic(1e7, omega_max=700.0, gamma=7.0)
    assert speed_ceiling(cfg, VP.r_w) == pytest.approx(700 * VP.r_w / 7)
    assert top_speed(cfg, VP) == pytest.approx(700 * VP.r_w / 7 * 3.6, abs=1e-9)


def test_envelope_below_road_load_gives_zero():
    assert top_speed(synthetic(1.0), VP) == 0.0


def test_baseline_rwd_rfm_top_speed():
    cfg = instantiate("RWD_RFM", DesignPoint(gamma=RFM.baseline_gamma), {"RFM": RFM})
    assert top_speed(cfg, VP) == pytest.approx(160.0, abs=3.0)


def test_awd_sums_axle_forces():
    one = synthetic(200.0, kind="RWD_RFM")
    two = synthetic(200.0, kind="AWD_RFM")
    assert max_tractive_force(two, VP, 5.0) == pytest.approx(2 * max_tractive_force(one, VP, 5.0))


def test_requirements_validated():
    with pytest.raises(Exception):
        PerformanceSpec(t_accel_req=0.0)


@settings(max_examples=150, deadline=None)
@given(K_R=st.floats(0.5, 1.9), K_A=st.floats(0.5, 1.9), dK=st.floats(0.01, 0.1),
       gamma=st.floats(3, 14), which=st.sampled_from(["K_R", "K_A"]))
def test_accel_time_never_worsens_with_bigger_motor(K_R, K_A, dK, gamma, which):
    base = DesignPoint(K_A=K_A, K_R=K_R, gamma=gamma)
    bigger = replace(base, **{which: getattr(base, which) + dK})
    t0 = accel_time(instantiate("RWD_RFM", base, {"RFM": RFM}), VP)
    t1 = accel_time(instantiate("RWD_RFM", bigger, {"RFM": RFM}), VP)
    assert t1 <= t0
