import json
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evsizing import thermal
from evsizing.errors import ConfigError, NumericalDivergence
from evsizing.motor import ScalingFactors
from evsizing.thermal import (ThermalNetwork, ThermalNode, ThermalResistance, builtin_network,
                              scale_network, simulate_cycle, steady_state, step)


def single_node(C=100.0, R=2.0, T_amb=20.0):
    return ThermalNetwork((ThermalNode("winding", C, {"Cu": 1.0}),),
                          (ThermalResistance("winding", "ambient", R, "convection_external",
                                             exponent=0.0),), T_amb=T_amb)


def test_single_node_step_response_after_one_time_constant():
    net = single_node()
    T = np.array([20.0])
    for _ in range(2000):
        T = step(net, T, [10.0], 0.1)
    # 20 + 10*2*(1 - e^-1)
    assert T[0] == pytest.approx(32.64, abs=0.01)


def test_single_node_matches_first_order_solution():
    net = single_node()
    tau, dt = 200.0, 0.1
    n = int(5 * tau / dt)
    trace = simulate_cycle(net, {"Cu": np.full(n, 10.0)}, dt)
    t = dt * np.arange(1, n + 1)
    rise = 20.0 * (1 - np.exp(-t / tau))
    got = trace.node("winding") - 20.0
    assert np.max(np.abs(got - rise) / rise) < 1e-3


def test_equilibrium_is_fixed_point():
    net = builtin_network("RFM")
    T0 = np.full(len(net.nodes), net.T_amb)
    np.testing.assert_array_equal(step(net, T0, np.zeros(len(T0)), 1.0, omega=300.0), T0)


def test_two_node_exchange_conserves_mean():
    nodes = (ThermalNode("a", 50.0, {"Cu": 1.0}), ThermalNode("b", 50.0))
    res = (ThermalResistance("a", "b", 0.5, "contact"),
           # the ambient path is effectively cut
           ThermalResistance("b", "ambient", 1e300, "contact"))
    net = ThermalNetwork(nodes, res)
    T = np.array([80.0, 20.0])
    for _ in range(100):
        T = step(net, T, [0.0, 0.0], 2.0)
    assert T.mean() == pytest.approx(50.0, abs=1e-9)
    assert T[0] == pytest.approx(T[1], abs=1e-4)


def test_zero_losses_keep_initial_state():
    net = replace(builtin_network("AFM"), T_init=tuple(np.linspace(30, 60, 9)))
    tr = simulate_cycle(net, {"Cu": np.zeros(1)}, 1.0)
    assert tr.temperatures.shape == (1, 9)
    net = builtin_network("AFM")
    tr = simulate_cycle(net, {s: np.zeros(50) for s in thermal.LOSS_SOURCES}, 1.0,
                        omega=np.full(50, 100.0))
    assert np.all(tr.temperatures == net.T_amb)


@pytest.mark.parametrize("tech", ["AFM", "RFM"])
def test_long_horizon_reaches_linear_steady_state(tech):
    net = scale_network(builtin_network(tech), ScalingFactors(1.1, 0.8), omega=150.0)
    losses = {"Cu": 400.0, "Fe": 150.0, "br": 10.0, "wind": 5.0}
    Q = net.injection_matrix() @ np.array([losses[s] for s in thermal.LOSS_SOURCES])
    op = thermal._Operator(net)
    L, _ = op.assemble(net.resistance_values())
    slowest = 1 / np.min(np.linalg.eigvals(np.linalg.solve(np.diag(op.C), L)).real)
    n = int(math.ceil(25 * slowest))
    tr = simulate_cycle(net, {s: np.full(n, v) for s, v in losses.items()}, 1.0)
    np.testing.assert_allclose(tr.temperatures[-1], steady_state(net, Q), atol=0.1)
    stored = np.sum(net.capacities * (tr.temperatures[-1] - tr.initial))
    assert tr.heat_in - tr.heat_to_ambient == pytest.approx(stored, rel=5e-3)


def test_energy_balance_with_speed_dependent_convection():
    net = scale_network(builtin_network("RFM"), ScalingFactors(0.9, 1.2))
    rng = np.random.default_rng(3)
    n = 1200
    losses = {s: rng.uniform(0, 300, n) for s in thermal.LOSS_SOURCES}
    tr = simulate_cycle(net, losses, 1.0, omega=rng.uniform(0, 1500, n))
    stored = np.sum(net.capacities * (tr.temperatures[-1] - tr.initial))
    assert tr.heat_in - tr.heat_to_ambient == pytest.approx(stored, rel=5e-3)


def test_identity_scaling_keeps_network():
    net = builtin_network("RFM")
    same = scale_network(net, ScalingFactors(1.0, 1.0))
    assert same == net
    frozen = scale_network(net, ScalingFactors(1.0, 1.0), omega=net.omega_ref)
    np.testing.assert_allclose(frozen.resistance_values(0.0), net.resistance_values(net.omega_ref))


def test_resistance_and_capacity_scaling():
    nodes = (ThermalNode("x", 10.0, {"Cu": 1.0}),)
    res = (ThermalResistance("x", "ambient", 1.0, "axial_conduction"),
           ThermalResistance("x", "ambient", 1.0, "radial_conduction"),
           ThermalResistance("x", "ambient", 1.0, "contact", geometry="cylinder"),
           ThermalResistance("x", "ambient", 1.0, "contact", geometry="face"))
    net = ThermalNetwork(nodes, res)
    s = scale_network(net, ScalingFactors(1.0, 2.0))
    assert [r.R0 for r in s.resistances] == [2.0, 0.5, 0.5, 1.0]
    s = scale_network(net, ScalingFactors(1.3, 1.0))
    assert s.nodes[0].C0 == pytest.approx(16.9)
    assert s.resistances[3].R0 == pytest.approx(1 / 1.69)


def test_convection_follows_tip_speed():
    nodes = (ThermalNode("x", 10.0, {"Cu": 1.0}),)
    res = (ThermalResistance("x", "ambient", 1.0, "convection_internal", exponent=0.8),)
    net = ThermalNetwork(nodes, res, omega_ref=100.0)
    assert net.resistance_values(100.0)[0] == pytest.approx(1.0)
    assert net.resistance_values(400.0)[0] == pytest.approx(4**-0.8)
    # natural-convection floor below 20 % of the reference speed
    assert net.resistance_values(0.0)[0] == net.resistance_values(10.0)[0]
    # a larger rotor reaches the same tip speed at a lower shaft speed
    big = scale_network(net, ScalingFactors(2.0, 1.0))
    assert big.resistance_values(200.0)[0] == pytest.approx(0.25 * 4**-0.8)


@pytest.mark.parametrize("mutate, msg", [
    (lambda d: d["resistances"].pop(), "ambient"),
    (lambda d: d["nodes"][0]["losses"].update(Cu=0.5), "sum"),
    (lambda d: d["nodes"].append(dict(d["nodes"][0])), "duplicate"),
    (lambda d: d.update(schema_version=7), "schema"),
])
def test_bad_networks_rejected(mutate, msg):
    doc = {
        "schema_version": 1,
        "nodes": [{"name": "w", "C0": 5.0, "losses": {"Cu": 1.0}}, {"name": "h", "C0": 9.0}],
        "resistances": [{"from": "w", "to": "h", "R0": 0.2, "class": "contact"},
                        {"from": "h", "to": "ambient", "R0": 0.1, "class": "convection_external"}],
    }
    thermal.network_from_dict(json.loads(json.dumps(doc)))
    mutate(doc)
    with pytest.raises(ConfigError, match=msg):
        thermal.network_from_dict(doc)


def test_divergence_detected():
    net = single_node()
    with pytest.raises(NumericalDivergence):
        step(net, np.array([np.nan]), [0.0], 1.0)


@settings(max_examples=60, deadline=None)
@given(C=st.floats(1, 1e4), R=st.floats(1e-3, 10), Q=st.floats(0, 1e3))
def test_single_node_never_overshoots(C, R, Q):
    net = single_node(C, R, 20.0)
    tr = simulate_cycle(net, {"Cu": np.full(30, Q)}, 1.0)
    T = tr.node("winding")
    assert np.all(np.diff(T) >= -1e-12)
    assert np.all(T <= 20.0 + Q * R + 1e-9)
