"""
Winding temperature over the cycle
==================================

Loss traces from the drive-cycle simulation heat the lumped thermal network
of the motor. A smaller machine runs harder, loses more in its winding and
has less mass to soak it up.
"""

import sys
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from evsizing import DesignPoint, VehicleParams, instantiate, wltc_class3
from evsizing.motor import builtin_referent
from evsizing.simulate import simulate_powertrain
from evsizing.thermal import builtin_network, scale_network, simulate_cycle, steady_state

out = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out.mkdir(exist_ok=True)

cycle = wltc_class3()
ref = builtin_referent("RFM")
net = builtin_network("RFM")

fig, ax = plt.subplots(figsize=(8, 4))
for K in (0.7, 0.85, 1.0):
    design = DesignPoint(K_A=K, K_R=K, gamma=ref.baseline_gamma)
    sim = simulate_powertrain(instantiate("RWD_RFM", design, {"RFM": ref}), cycle, VehicleParams())
    rear = sim.axles[0]
    scaled = scale_network(net, design.k)
    trace = simulate_cycle(scaled, rear.losses, cycle.dt, omega=rear.omega)
    T = trace.node("winding")
    print(f"K={K}: peak winding {T.max():6.1f} C, heat in {trace.heat_in / 3.6e6:.3f} kWh, "
          f"stored {np.sum(scaled.capacities * (trace.temperatures[-1] - trace.initial)) / 3.6e6:.3f} kWh")
    ax.plot(cycle.t, T, label=f"K_R = K_A = {K}")

ax.axhline(160, color="k", ls=":", label="winding limit")
ax.set_xlabel("time [s]")
ax.set_ylabel("winding temperature [C]")
ax.legend()
fig.tight_layout()
fig.savefig(out / "winding_temperature.png", dpi=120)

# what the network would settle at if the mean losses lasted forever
mean_loss = np.array([np.mean(rear.losses[s]) for s in ("Cu", "Fe", "br", "wind")])
Q = net.injection_matrix() @ mean_loss
T_ss = steady_state(net, Q, omega=np.mean(rear.omega))
print("steady state at mean losses:",
      ", ".join(f"{n} {t:.1f} C" for n, t in zip(net.names, T_ss)))
