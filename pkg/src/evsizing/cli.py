"""Command-line front end.

    evsizing run CONFIG [--out DIR] [--seed N] [--topologies A,B]
    evsizing sweep CONFIG --quantity NAME [--grid KR_LIST[/KA_LIST]] [--tech AFM|RFM] [--out DIR]

``run`` exits 0 when every layout converged to a feasible design, 2 when any
did not, and 1 on configuration or input-file errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import motor
from .config import load_config
from .errors import ConfigError, MalformedCycle
from .motor import ScaledMotor, ScalingFactors
from .optimizer import evaluate_design, optimize_powertrain
from .report import clean_json, provenance, result_document, write_json, write_sweep, write_traces
from .topology import DesignPoint, PRESETS, aggregate_report

log = logging.getLogger("evsizing")

DEFAULT_GRID = (0.7, 0.85, 1.15, 1.3)
RPM = 3.141592653589793 / 30.0


def _nominal_point_power(m: ScaledMotor) -> float:
    return float(motor.electrical_power(m, m.T_nom, 1000 * RPM, check=False))


SWEEP_QUANTITIES = {
    "R_ph": lambda m: m.R_ph,
    "R_ph_geometric": lambda m: motor.phase_resistance_geometric(m.referent.winding, m.k),
    "I_ph": lambda m: m.I_nom,
    "P_Cu": lambda m: float(motor.copper_losses(m, m.I_nom)),
    "T_m": lambda m: m.T_nom,
    "P_m": lambda m: m.P_nom,
    "L_dq": lambda m: motor.scaled_parameters(m)["L_dq"],
    "psi": lambda m: motor.scaled_parameters(m)["psi"],
    "volume": lambda m: sum(motor.scaled_parameters(m)["V"].values()),
    "mass": lambda m: motor.mass_and_cost(m)["mass"],
    "cost": lambda m: motor.mass_and_cost(m)["cost"],
    "P_el_nominal_1000rpm": _nominal_point_power,
}


def parse_grid(spec: str | None):
    if not spec:
        return DEFAULT_GRID, DEFAULT_GRID
    parts = spec.split("/")
    if len(parts) > 2:
        raise ConfigError(f"bad grid {spec!r}: use KR_LIST or KR_LIST/KA_LIST")
    try:
        axes = [tuple(float(x) for x in p.split(",") if x.strip()) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad grid {spec!r}: {exc}") from exc
    if any(not ax or min(ax) <= 0 for ax in axes):
        raise ConfigError(f"bad grid {spec!r}: factors must be positive")
    return axes[0], axes[-1]


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    layouts = cfg.topologies
    if args.topologies:
        layouts = [t.strip() for t in args.topologies.split(",") if t.strip()]
        unknown = set(layouts) - set(PRESETS)
        if unknown or not layouts:
            raise ConfigError(f"unknown layouts {sorted(unknown)}")
    out = Path(args.out) if args.out else cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)

    problem = cfg.problem()
    options = cfg.optimizer_options(seed)
    summary = {"provenance": provenance(cfg, seed), "layouts": []}
    all_converged = True
    for kind in layouts:
        log.info("optimising %s", kind)
        result = optimize_powertrain(kind, problem, options)
        doc = result_document(result, cfg, seed)
        write_json(doc, out / f"{kind}.json")
        write_traces(result.evaluation, out / f"{kind}_traces.csv")
        summary["layouts"].append(doc["report"] | {"converged": result.converged,
                                                   "design": doc["result"]["design"]})
        all_converged &= result.converged
        log.info("%s: E=%.3f kWh converged=%s", kind, result.E_el_T, result.converged)

    if "RWD_RFM" in layouts:
        gamma = problem.referents["RFM"].baseline_gamma
        base = evaluate_design(DesignPoint(gamma=gamma), "RWD_RFM", problem)
        summary["baseline"] = aggregate_report(base.config, base) | {"design": base.design.as_dict()}
    write_json(clean_json(summary), out / "summary.json")
    return 0 if all_converged else 2


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.quantity not in SWEEP_QUANTITIES:
        raise ConfigError(f"unknown quantity {args.quantity!r}; choose from {sorted(SWEEP_QUANTITIES)}")
    kr, ka = parse_grid(args.grid)
    ref = cfg.problem().referents[args.tech]
    fn = SWEEP_QUANTITIES[args.quantity]
    rows = [(args.tech, K_R, K_A, fn(ScaledMotor(ref, ScalingFactors(K_R, K_A))))
            for K_R in kr for K_A in ka]
    out = Path(args.out) if args.out else cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"sweep_{args.tech}_{args.quantity}.csv"
    write_sweep(rows, args.quantity, path)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evsizing", description=__doc__.split("\n\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="optimise every configured layout and write reports")
    run.add_argument("config")
    run.add_argument("--out")
    run.add_argument("--seed", type=int)
    run.add_argument("--topologies", help="comma-separated layouts, overriding the config")
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="tabulate a scaled quantity over a K_R x K_A grid")
    sweep.add_argument("config")
    sweep.add_argument("--quantity", required=True)
    sweep.add_argument("--grid", help="KR_LIST[/KA_LIST], e.g. 0.7,1.0,1.3/0.5,1.0")
    sweep.add_argument("--tech", default="AFM", choices=["AFM", "RFM"])
    sweep.add_argument("--out")
    sweep.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, MalformedCycle) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
