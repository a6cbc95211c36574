"""JSON reports and CSV traces for optimisation runs and scaling sweeps."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from . import motor, thermal, __version__
from .config import SCHEMA_VERSION as CONFIG_SCHEMA, RunConfig
from .optimizer import Evaluation, OptimizationResult
from .topology import aggregate_report

REPORT_SCHEMA = 1


def clean_json(obj):
    """Make ``obj`` JSON-safe: numpy scalars to floats, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): clean_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean_json(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def provenance(cfg: RunConfig, seed: int) -> dict:
    return {
        "config_sha256": cfg.digest(),
        "seed": seed,
        "package_version": __version__,
        "schema_versions": {"config": CONFIG_SCHEMA, "report": REPORT_SCHEMA,
                            "referent": motor.SCHEMA_VERSION, "thermal_network": thermal.SCHEMA_VERSION},
    }


def result_document(result: OptimizationResult, cfg: RunConfig, seed: int) -> dict:
    ev = result.evaluation
    return clean_json({
        "provenance": provenance(cfg, seed),
        "layout": result.layout,
        "result": {
            "design": result.best.as_dict(),
            "E_el_kWh": result.E_el_T,
            "objective": result.objective,
            "feasible": result.feasible,
            "converged": result.converged,
            "evaluations": result.evaluations,
            "slacks": result.slacks,
            "violations": result.violations,
            "history": result.history,
            "starts": result.starts,
        },
        "report": aggregate_report(ev.config, ev),
    })


def write_json(doc: dict, path) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def write_traces(ev: Evaluation, path) -> None:
    """Per-step operating points, losses and node temperatures of one design."""
    sim = ev.simulation
    cols = {
        "t_s": sim.cycle.t,
        "v_ms": sim.cycle.v,
        "a_ms2": sim.cycle.a,
        "T_req_Nm": sim.T_req,
        "friction_Nm": sim.friction,
    }
    for ax in sim.axles:
        p = ax.axle
        cols[f"{p}_torque_Nm"] = ax.torque
        cols[f"{p}_omega_rads"] = ax.omega
        cols[f"{p}_P_el_W"] = ax.P_el
        for src, trace in ax.losses.items():
            cols[f"{p}_P_{src}_W"] = trace
        trace = ev.thermal.get(p)
        if trace is not None:
            for i, name in enumerate(trace.names):
                cols[f"{p}_T_{name}_C"] = trace.temperatures[:, i]
    names = list(cols)
    rows = np.column_stack([np.asarray(cols[n], dtype=float) for n in names])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in rows:
            w.writerow([repr(float(x)) for x in row])


def write_sweep(rows: list, quantity: str, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["tech", "K_R", "K_A", "quantity", "value"])
        for tech, K_R, K_A, value in rows:
            w.writerow([tech, repr(K_R), repr(K_A), quantity, repr(float(value))])
