import json
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evsizing import motor
from evsizing.errors import ConfigError, InfeasibleOperatingPoint
from evsizing.motor import (Component, ScaledMotor, ScalingFactors, builtin_referent,
                            phase_resistance_geometric)

RFM = builtin_referent("RFM")
AFM = builtin_referent("AFM")
GRID = (0.7, 0.85, 1.15, 1.3)
RPM = math.pi / 30


def scaled(ref, K_R, K_A):
    return ScaledMotor(ref, ScalingFactors(K_R, K_A))


@pytest.mark.parametrize("ref", [RFM, AFM], ids=["RFM", "AFM"])
def test_identity_scaling(ref):
    m = ScaledMotor(ref)
    p = motor.scaled_parameters(m)
    assert (p["T_m"], p["P_m"], p["R_ph"], p["I_ph"]) == (ref.T_m0, ref.P_m0, ref.R_ph0, ref.I_ph0)
    assert (p["L_dq"], p["psi"]) == (ref.L_dq0, ref.psi_0)
    assert p["V"] == {c.name: c.volume for c in ref.components}


def test_resistance_law_example():
    assert scaled(RFM, 1.3, 1.0).R_ph == pytest.approx(1.3 * RFM.R_ph0, rel=1e-15)


def test_torque_law_at_validation_design():
    m = scaled(RFM, 1.13, 1.13)
    assert m.T_nom / RFM.T_m0 == pytest.approx(1.13**4, rel=1e-14)
    assert m.T_nom / RFM.T_m0 == pytest.approx(1.6305, abs=5e-5)


def test_max_speed_is_invariant():
    assert scaled(AFM, 1.3, 0.7).omega_max == AFM.omega_max0


def test_geometric_resistance_of_referent():
    for ref in (RFM, AFM):
        assert phase_resistance_geometric(ref.winding) == pytest.approx(ref.R_ph0, rel=1e-3)


def test_geometric_resistance_symbolic_cancellation():
    w = RFM.winding
    r1 = phase_resistance_geometric(w)
    assert phase_resistance_geometric(w, ScalingFactors(2.0, 1.0)) / r1 == pytest.approx(2.0, rel=1e-14)


def test_geometric_resistance_from_first_principles():
    # independent evaluation of R = rho * l / A for one phase with the scaled geometry
    w = RFM.winding
    K_R, K_A = 1.15, 0.85
    turns_per_phase = (K_A * w.coils / w.parallel_paths) * w.slots / 3
    length = turns_per_phase * K_R * w.mean_turn_length
    area = 0.5 * (K_R * K_A * w.slot_area) / (K_A * w.coils) * (w.fill_factor / K_R)
    expected = w.resistivity * length / area / w.parallel_paths
    got = phase_resistance_geometric(w, ScalingFactors(K_R, K_A))
    assert got == pytest.approx(expected, rel=1e-12)


def test_copper_losses():
    assert motor.copper_losses(ScaledMotor(RFM), 0.0) == 0.0
    m = scaled(RFM, 1.3, 1.3)
    assert motor.copper_losses(m, m.I_nom) / RFM.P_Cu0 == pytest.approx(2.8561, rel=1e-12)
    m = scaled(RFM, 1.15, 0.85)
    by_hand = 3 * (1.15 * RFM.I_ph0) ** 2 * (1.15 * 0.85 * RFM.R_ph0)
    assert motor.copper_losses(m, 1.15 * RFM.I_ph0) == pytest.approx(by_hand, rel=1e-14)
    assert by_hand == pytest.approx(1.15**3 * 0.85 * RFM.P_Cu0, rel=1e-12)


def test_operating_current():
    m = scaled(AFM, 1.2, 0.9)
    assert motor.operating_current(m, 0.0) == 0.0
    assert motor.operating_current(m, m.T_nom) == pytest.approx(1.2 * AFM.I_ph0, rel=1e-15)
    assert motor.operating_current(m, m.T_nom / 2) == pytest.approx(0.6 * AFM.I_ph0, rel=1e-15)
    assert motor.operating_current(m, -m.T_nom) == pytest.approx(m.I_nom)


def test_operating_current_rejects_points_outside_envelope():
    m = ScaledMotor(RFM)
    with pytest.raises(InfeasibleOperatingPoint):
        motor.operating_current(m, 1.01 * RFM.T_m0, omega=10.0)
    with pytest.raises(InfeasibleOperatingPoint):
        motor.operating_current(m, 1.0, omega=1.01 * RFM.omega_max0)


def test_iron_losses():
    m0 = ScaledMotor(RFM)
    w0 = 300.0
    c = RFM.losses
    assert motor.iron_losses(m0, 0.0) == 0.0
    assert motor.iron_losses(m0, w0) == pytest.approx(c.c_h * w0 + c.c_e * w0**2, rel=1e-15)
    ratio = motor.iron_losses(scaled(RFM, 1.3, 0.7), w0) / motor.iron_losses(m0, w0)
    assert ratio == pytest.approx(1.183, rel=1e-12)


def test_bearing_losses():
    m0 = ScaledMotor(AFM)
    assert motor.bearing_losses(m0, 0.0) == 0.0
    assert motor.bearing_losses(m0, 50.0) == pytest.approx(AFM.losses.c_br * 50.0)
    ratio = motor.bearing_losses(scaled(AFM, 1.15, 1.15), 50.0) / motor.bearing_losses(m0, 50.0)
    assert ratio == pytest.approx(1.15**4, rel=1e-12)


def test_windage_losses():
    m0 = ScaledMotor(RFM)
    c = RFM.losses
    assert motor.windage_losses(m0, 0.0) == 0.0
    assert motor.windage_losses(m0, 800.0) == pytest.approx(c.c_w0 * 800**2 + c.c_w1 * 800**3)
    ratio = motor.windage_losses(scaled(RFM, 0.7, 1.4), 800.0) / motor.windage_losses(m0, 800.0)
    assert ratio == pytest.approx(0.16807, rel=1e-12)


def test_electrical_power_at_validation_point():
    m = ScaledMotor(RFM)
    w = 1000 * RPM
    assert w == pytest.approx(104.72, abs=1e-2)
    c = RFM.losses
    expected = (RFM.T_m0 * w + RFM.P_Cu0 + c.c_h * w + c.c_e * w**2 + c.c_br * w
                + c.c_w0 * w**2 + c.c_w1 * w**3)
    assert motor.electrical_power(m, RFM.T_m0, w) == pytest.approx(expected, rel=1e-14)
    assert motor.electrical_power(m, 0.0, 0.0) == 0.0


def test_integrate_energy():
    assert motor.integrate_energy(np.full(3600, 1000.0), 1.0) == pytest.approx(1.0)
    assert motor.integrate_energy(np.zeros(10), 1.0) == 0.0
    assert motor.integrate_energy([100.0, 200.0], 1.0) == pytest.approx(8.333e-5, rel=1e-4)


def test_torque_limit():
    m = ScaledMotor(RFM)
    wb = RFM.omega_base0
    assert motor.torque_limit(m, wb / 2) == pytest.approx(RFM.T_m0)
    assert motor.torque_limit(m, 2 * wb) == pytest.approx(RFM.T_m0 / 2)
    assert motor.torque_limit(m, RFM.omega_max0 * 1.001) == 0.0
    np.testing.assert_allclose(motor.torque_limit(m, [-wb / 2, 0.0]), [RFM.T_m0] * 2)


def test_mass_and_cost_single_component():
    ref = replace(RFM, components=(Component("core", 1e-3, 7650.0, 2.0),))
    out = motor.mass_and_cost(scaled(ref, 1.15, 1.0))
    assert out["mass"] == pytest.approx(10.117, abs=5e-4)
    assert out["cost"] == pytest.approx(20.23, abs=5e-3)
    base = motor.mass_and_cost(ScaledMotor(ref))
    assert base["mass"] == pytest.approx(7.65)


def test_inconsistent_base_speed_rejected():
    with pytest.raises(ConfigError):
        replace(RFM, omega_base0=RFM.omega_base0 * 1.05)


def test_referent_geometry_mismatch_rejected(tmp_path):
    from importlib import resources
    doc = json.loads((resources.files("evsizing") / "data" / "referent_rfm.json").read_text())
    doc["nominal"]["phase_resistance"] *= 1.01
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    with pytest.raises(ConfigError, match="winding"):
        motor.load_referent(p)


def test_referent_schema_version_checked():
    with pytest.raises(ConfigError):
        motor.referent_from_dict({"schema_version": 99})


factors = st.floats(0.5, 2.0)


@settings(max_examples=150, deadline=None)
@given(K_R=factors, K_A=factors, t=st.floats(-1, 1), s=st.floats(0, 1),
       tech=st.sampled_from(["AFM", "RFM"]))
def test_losses_positive_and_efficiency_in_unit_interval(K_R, K_A, t, s, tech):
    ref = AFM if tech == "AFM" else RFM
    m = scaled(ref, K_R, K_A)
    w = max(s * m.omega_max, 1e-3)
    T = t * float(motor.torque_limit(m, w))
    losses = motor.loss_breakdown(m, T, w)
    assert all(float(v) >= 0 for v in losses.values())
    total = sum(float(v) for v in losses.values())
    assert total > 0
    P = float(motor.electrical_power(m, T, w))
    if T * w > 0:
        assert 0 < T * w / P < 1
    elif T * w < 0 and P < 0:
        assert 0 < P / (T * w) < 1


@settings(max_examples=100, deadline=None)
@given(K_R=factors, K_A=factors)
def test_geometric_resistance_matches_law_everywhere(K_R, K_A):
    k = ScalingFactors(K_R, K_A)
    geo = phase_resistance_geometric(RFM.winding, k) / phase_resistance_geometric(RFM.winding)
    assert geo == pytest.approx(K_R * K_A, rel=1e-12)
