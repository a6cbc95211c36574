"""
Energy of the baseline car on WLTC class 3
==========================================

Backward simulation of the unscaled rear-drive radial-flux powertrain: the
speed trace fixes wheel torque, the gear fixes motor speed, and the loss model
turns each operating point into electrical power.
"""

import sys
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from evsizing import DesignPoint, VehicleParams, instantiate, wltc_class3
from evsizing.motor import builtin_referent, integrate_energy
from evsizing.perfcheck import accel_time, top_speed
from evsizing.simulate import simulate_powertrain

out = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out.mkdir(exist_ok=True)

cycle = wltc_class3()
vehicle = VehicleParams()
ref = builtin_referent("RFM")
config = instantiate("RWD_RFM", DesignPoint(gamma=ref.baseline_gamma), {"RFM": ref})

sim = simulate_powertrain(config, cycle, vehicle)
rear = sim.axles[0]
print(f"cycle: {cycle.duration:.0f} s, {np.sum(cycle.v) * cycle.dt / 1000:.2f} km")
print(f"battery-side energy: {sim.E_el_T:.3f} kWh")
print(f"0-100 km/h: {accel_time(config, vehicle):.2f} s, top speed {top_speed(config, vehicle):.1f} km/h")

# where the energy goes
for name, trace in rear.losses.items():
    print(f"  {name:>4} losses  {integrate_energy(trace, cycle.dt):.3f} kWh")
wheel = sim.T_req * cycle.v / vehicle.r_w
print(f"  traction at wheel {integrate_energy(np.maximum(wheel, 0), cycle.dt):.3f} kWh")
print(f"  braking at wheel  {integrate_energy(np.minimum(wheel, 0), cycle.dt):.3f} kWh, "
      f"recovered {integrate_energy(np.minimum(sim.P_el, 0), cycle.dt):.3f} kWh")

fig, (a1, a2) = plt.subplots(2, 1, sharex=True, figsize=(8, 5))
a1.plot(cycle.t, cycle.v * 3.6)
a1.set_ylabel("speed [km/h]")
a2.plot(cycle.t, sim.P_el / 1e3, lw=0.7)
a2.set_ylabel("electrical power [kW]")
a2.set_xlabel("time [s]")
fig.tight_layout()
fig.savefig(out / "cycle_power.png", dpi=120)

# operating points on the torque envelope
fig, ax = plt.subplots(figsize=(6, 4))
w = np.linspace(0, ref.omega_max0, 300)
from evsizing.motor import torque_limit
ax.plot(w, torque_limit(rear.motor, w), "k")
ax.plot(w, -torque_limit(rear.motor, w), "k")
ax.plot(rear.omega, rear.torque, ".", ms=2, alpha=0.4)
ax.set_xlabel("shaft speed [rad/s]")
ax.set_ylabel("torque [N m]")
fig.tight_layout()
fig.savefig(out / "operating_points.png", dpi=120)
