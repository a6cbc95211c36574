"""
Rear drive, all-wheel drive, or four in-wheel motors?
=====================================================

Size each layout for minimum WLTC energy while it still reaches 100 km/h in
8 s, tops 160 km/h and keeps its winding under 160 C. Pass the number of
Latin-hypercube starts as the first argument (default 5, about a minute each).
"""

import sys

from evsizing import SizingProblem, aggregate_report, wltc_class3
from evsizing.optimizer import OptimizerOptions, optimize_powertrain

starts = int(sys.argv[1]) if len(sys.argv) > 1 else 5
problem = SizingProblem(wltc_class3())
options = OptimizerOptions(starts=starts, seed=0)

rows = {}
for kind in ("RWD_RFM", "AWD_RFM", "AWD_AFM"):
    res = optimize_powertrain(kind, problem, options)
    rows[kind] = res
    print(f"{kind}: {res.evaluations} evaluations, converged={res.converged}")

header = f"{'':<22}" + "".join(f"{k:>12}" for k in rows)
print("\n" + header)
reports = {k: aggregate_report(r.evaluation.config, r.evaluation) for k, r in rows.items()}
for label, key, fmt in [
    ("K_A", None, "{:.3f}"), ("K_R", None, "{:.3f}"), ("gear ratio", None, "{:.2f}"),
    ("energy [kWh]", "E_el_kWh", "{:.3f}"), ("0-100 km/h [s]", "accel_time_s", "{:.2f}"),
    ("top speed [km/h]", "top_speed_kmh", "{:.1f}"), ("peak winding [C]", "peak_winding_C", "{:.1f}"),
    ("motor mass [kg]", "mass_kg", "{:.1f}"), ("material cost [EUR]", "cost_eur", "{:.0f}"),
]:
    if key is None:
        attr = {"K_A": "K_A", "K_R": "K_R", "gear ratio": "gamma"}[label]
        vals = [getattr(r.best, attr) for r in rows.values()]
    else:
        vals = [reports[k][key] for k in rows]
    print(f"{label:<22}" + "".join(f"{fmt.format(v):>12}" for v in vals))

E = {k: r.E_el_T for k, r in rows.items()}
print(f"\nAWD over RWD: {1 - E['AWD_RFM'] / E['RWD_RFM']:.1%} less energy")
print(f"in-wheel AFM over AWD RFM: {1 - E['AWD_AFM'] / E['AWD_RFM']:.1%} less energy, "
      f"{reports['AWD_AFM']['cost_eur'] / reports['AWD_RFM']['cost_eur']:.1f}x the material cost")
