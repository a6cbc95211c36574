"""
Scaling a referent motor
========================

Grow the radial and axial dimensions of the shipped radial-flux referent and
watch torque, resistance and copper loss follow their power laws. The winding
resistance is also recomputed from the scaled slot geometry, which lands on
the same line as the closed-form law.
"""

import sys
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from evsizing import motor
from evsizing.motor import ScaledMotor, ScalingFactors, builtin_referent

out = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out.mkdir(exist_ok=True)

ref = builtin_referent("RFM")
K = np.linspace(0.6, 1.6, 41)

# radial growth at fixed stack length
radial = [ScaledMotor(ref, ScalingFactors(k, 1.0)) for k in K]
torque = np.array([m.T_nom for m in radial]) / ref.T_m0
R_law = np.array([m.R_ph for m in radial]) / ref.R_ph0
R_geo = np.array([motor.phase_resistance_geometric(ref.winding, m.k) for m in radial])
R_geo /= motor.phase_resistance_geometric(ref.winding)
P_cu = np.array([float(motor.copper_losses(m, m.I_nom)) for m in radial]) / ref.P_Cu0

print(f"max |R_geometric - R_law| / R_law = {np.max(np.abs(R_geo - R_law) / R_law):.1e}")

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(K, torque, label="torque  (K_R^3)")
ax.plot(K, P_cu, "--", label="copper loss at rated current  (K_R^3)")
ax.plot(K, R_law, label="phase resistance  (K_R)")
ax.plot(K[::4], R_geo[::4], "o", mfc="none", label="resistance from slot geometry")
ax.set_xlabel("K_R  (K_A = 1)")
ax.set_ylabel("ratio to referent")
ax.legend()
fig.tight_layout()
fig.savefig(out / "scaling_laws.png", dpi=120)

# specific loss: rated copper loss per unit rated torque does not change with size
for k_r, k_a in [(0.7, 0.7), (1.0, 1.0), (1.3, 1.3)]:
    m = ScaledMotor(ref, ScalingFactors(k_r, k_a))
    p = float(motor.copper_losses(m, m.I_nom))
    print(f"K=({k_r}, {k_a}): T={m.T_nom:7.1f} N m  P_Cu={p:7.0f} W  P_Cu/T={p / m.T_nom:.2f} W/(N m)")

# the same machine at 1000 rpm, full torque, across the validation grid
w = 1000 * np.pi / 30
for k in (0.7, 0.85, 1.15, 1.3):
    m = ScaledMotor(ref, ScalingFactors(k, k))
    loss = motor.loss_breakdown(m, m.T_nom, w)
    eff = m.T_nom * w / float(motor.electrical_power(m, m.T_nom, w))
    print(f"K={k:4}: efficiency {eff:.3f}, "
          + ", ".join(f"{name} {float(v):6.0f} W" for name, v in loss.items()))
