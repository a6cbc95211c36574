"""Minimum-energy sizing of scaling factors, gear ratio and axle split.

The cycle energy is minimised with a bound-projected Nelder-Mead search.
Performance, thermal and envelope constraints enter as quadratic penalties on
their relative violations, and several Latin-hypercube starts guard against
poor local minima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import qmc

from .drivecycle import DriveCycle
from .errors import ConfigError, InvalidStart
from .motor import ReferentMotor, builtin_referent
from .perfcheck import PerformanceSpec, accel_time, top_speed
from .simulate import CycleSimulation, simulate_powertrain
from .thermal import ThermalNetwork, ThermalTrace, builtin_network, load_network, scale_network, simulate_cycle
from .topology import DesignPoint, PowertrainConfig, instantiate
from .vehicle import Drive, VehicleParams

# ---------------------------------------------------------------------------
# Nelder-Mead
# ---------------------------------------------------------------------------


@dataclass
class NelderMeadResult:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    history: list = field(default_factory=list)


def nelder_mead(f, x0, initial_step=0.1, xtol: float = 1e-6, ftol: float = 1e-9,
                max_evals: int = 2000, alpha: float = 1.0, gamma: float = 2.0,
                rho: float = 0.5, sigma: float = 0.5, bounds=None,
                max_restarts: int = 5) -> NelderMeadResult:
    """Minimise ``f`` from ``x0`` with the Nelder-Mead simplex method.

    The start simplex offsets ``x0`` by ``initial_step`` along each axis. With
    ``bounds=(lo, hi)`` every trial vertex is clipped into the box. A search
    converges once the simplex diameter (max-norm distance to the best vertex)
    is below ``xtol`` and the spread of vertex values is below ``ftol``. A
    fresh simplex is then built around the best point, up to ``max_restarts``
    times, until a restart no longer improves ``f`` by more than ``ftol``;
    this undoes simplices that collapsed onto a face. The search gives up
    after ``max_evals`` evaluations.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if x0.ndim != 1 or x0.size == 0 or not np.all(np.isfinite(x0)):
        raise InvalidStart("start point must be a finite, non-empty vector")
    n = x0.size
    evals = 0
    if bounds is None:
        def project(x):
            return x
    else:
        lo, hi = (np.broadcast_to(np.asarray(b, dtype=float), (n,)) for b in bounds)
        if np.any(hi <= lo):
            raise ConfigError("bounds must satisfy lo < hi")

        def project(x):
            return np.clip(x, lo, hi)
    x0 = project(x0)

    def call(x):
        nonlocal evals
        evals += 1
        return float(f(x))

    f0 = call(x0)
    if not math.isfinite(f0):
        raise InvalidStart(f"objective is {f0} at the start point")

    steps = np.broadcast_to(np.asarray(initial_step, dtype=float), (n,))
    history = []
    iterations = 0

    def search(x_best, f_best):
        """One simplex run from ``x_best``; returns (x, f, converged)."""
        nonlocal iterations
        # step inwards where the box would cut the first simplex edge off
        s = steps if bounds is None else np.where(x_best + steps > hi, -steps, steps)
        simplex = np.vstack([x_best, project(x_best + np.diag(s))])
        fvals = np.array([f_best] + [call(x) for x in simplex[1:]])
        while True:
            order = np.argsort(fvals, kind="stable")
            simplex, fvals = simplex[order], fvals[order]
            history.append(float(fvals[0]))
            diameter = np.max(np.abs(simplex[1:] - simplex[0]))
            if diameter < xtol and fvals[-1] - fvals[0] < ftol:
                return simplex[0].copy(), float(fvals[0]), True
            if evals >= max_evals:
                return simplex[0].copy(), float(fvals[0]), False
            iterations += 1

            centroid = simplex[:-1].mean(axis=0)
            worst = simplex[-1]
            xr = project(centroid + alpha * (centroid - worst))
            fr = call(xr)
            if fr < fvals[0]:
                xe = project(centroid + gamma * (xr - centroid))
                fe = call(xe)
                simplex[-1], fvals[-1] = (xe, fe) if fe < fr else (xr, fr)
                continue
            if fr < fvals[-2]:
                simplex[-1], fvals[-1] = xr, fr
                continue
            if fr < fvals[-1]:
                xc = centroid + rho * (xr - centroid)
                fc = call(xc)
                if fc <= fr:
                    simplex[-1], fvals[-1] = xc, fc
                    continue
            else:
                xc = centroid + rho * (worst - centroid)
                fc = call(xc)
                if fc < fvals[-1]:
                    simplex[-1], fvals[-1] = xc, fc
                    continue
            simplex[1:] = simplex[0] + sigma * (simplex[1:] - simplex[0])
            fvals[1:] = [call(x) for x in simplex[1:]]

    x, fx, converged = search(x0, f0)
    for _ in range(max_restarts):
        if not converged:
            break
        x_new, f_new, converged = search(x, fx)
        improved = fx - f_new > ftol
        x, fx = x_new, f_new
        if not improved:
            break
    return NelderMeadResult(x, fx, iterations, evals, converged, history)


def minimize_in_box(f, lo, hi, z0, **kwargs) -> NelderMeadResult:
    """Nelder-Mead over the box ``[lo, hi]``, searched in unit coordinates ``z0``."""
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    if lo.shape != hi.shape or np.any(hi <= lo):
        raise ConfigError("box bounds must satisfy lo < hi")
    res = nelder_mead(lambda z: f(lo + z * (hi - lo)), z0, bounds=(0.0, 1.0), **kwargs)
    res.x = lo + res.x * (hi - lo)
    return res


# ---------------------------------------------------------------------------
# Problem definition and design evaluation
# ---------------------------------------------------------------------------


@dataclass
class SizingProblem:
    """Mission, vehicle, requirements and motor data shared by all layouts."""

    cycle: DriveCycle
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    performance: PerformanceSpec = field(default_factory=PerformanceSpec)
    referents: dict = field(default_factory=dict)
    networks: dict = field(default_factory=dict)
    T_winding_max: float = 160.0
    hotspot: str = "winding"
    eta_g: float = 0.95
    r_b: dict = field(default_factory=dict)
    rb_in_traction: bool = False
    thermal: bool = True

    def __post_init__(self):
        for tech in ("AFM", "RFM"):
            if tech not in self.referents:
                self.referents[tech] = builtin_referent(tech)
            if tech not in self.networks:
                ref: ReferentMotor = self.referents[tech]
                self.networks[tech] = (load_network(ref.thermal_network) if ref.thermal_network
                                       else builtin_network(tech))

    def powertrain(self, kind: str, design: DesignPoint) -> PowertrainConfig:
        return instantiate(kind, design, self.referents, r_b=self.r_b.get(kind),
                           eta_g=self.eta_g, rb_in_traction=self.rb_in_traction)


@dataclass
class Evaluation:
    design: DesignPoint
    config: PowertrainConfig
    E_el_T: float               # [kWh]
    accel_time: float           # [s]
    top_speed: float            # [km/h]
    peak_winding: float         # [degC]
    violations: dict            # relative, >= 0
    slacks: dict                # in constraint units, >= 0 when satisfied
    simulation: CycleSimulation
    thermal: dict               # axle -> ThermalTrace

    def is_feasible(self, tol: float = 0.0) -> bool:
        return all(v <= tol for v in self.violations.values())

    @property
    def feasible(self) -> bool:
        return self.is_feasible()


_INF_VIOLATION = 10.0


def _thermal_traces(sim: CycleSimulation, net: ThermalNetwork) -> dict:
    traces: dict = {}
    done = []
    for ax in sim.axles:
        for other, trace in done:
            if (np.array_equal(other.torque, ax.torque) and np.array_equal(other.omega, ax.omega)
                    and other.motor == ax.motor):
                traces[ax.axle] = trace
                break
        else:
            scaled = scale_network(net, ax.motor.k)
            trace = simulate_cycle(scaled, ax.losses, sim.cycle.dt, omega=ax.omega)
            traces[ax.axle] = trace
            done.append((ax, trace))
    return traces


def evaluate_design(design: DesignPoint, kind: str, problem: SizingProblem) -> Evaluation:
    """Simulate one design of layout ``kind`` and score its constraints."""
    config = problem.powertrain(kind, design)
    sim = simulate_powertrain(config, problem.cycle, problem.vehicle)
    spec = problem.performance
    t_acc = accel_time(config, problem.vehicle, spec)
    v_top = top_speed(config, problem.vehicle)

    thermal: dict[str, ThermalTrace] = {}
    peak = math.nan
    if problem.thermal:
        net = problem.networks[config.topology.motor_tech.value]
        thermal = _thermal_traces(sim, net)
        peak = max(tr.peak[problem.hotspot] for tr in thermal.values())

    T_amb = next(iter(problem.networks.values())).T_amb
    violations = {
        "accel": (min((t_acc - spec.t_accel_req) / spec.t_accel_req, _INF_VIOLATION)
                  if math.isfinite(t_acc) else _INF_VIOLATION),
        "top_speed": (spec.v_max_req - v_top) / spec.v_max_req,
        "envelope": sim.envelope_violation,
    }
    slacks = {
        "accel": spec.t_accel_req - t_acc,
        "top_speed": v_top - spec.v_max_req,
        "envelope": -sim.envelope_violation,
    }
    if problem.thermal:
        violations["temperature"] = (peak - problem.T_winding_max) / (problem.T_winding_max - T_amb)
        slacks["temperature"] = problem.T_winding_max - peak
    violations = {k: max(0.0, float(v)) for k, v in violations.items()}
    return Evaluation(config.design, config, sim.E_el_T, t_acc, v_top, peak, violations,
                      {k: float(v) for k, v in slacks.items()}, sim, thermal)


# ---------------------------------------------------------------------------
# Constrained multi-start optimisation
# ---------------------------------------------------------------------------


DEFAULT_BOUNDS = {"K_A": (0.5, 2.0), "K_R": (0.5, 2.0), "gamma": (1.0, 16.0), "u": (0.0, 1.0)}


@dataclass(frozen=True)
class OptimizerOptions:
    bounds: dict = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    starts: int = 5
    seed: int = 0
    max_evals: int = 2000
    xtol: float = 1e-6
    ftol: float = 1e-9
    initial_step: float = 0.1       # in box-normalised coordinates
    penalty_weight: float = 1000.0  # times baseline energy per squared relative violation
    feasibility_tol: float = 1e-3
    optimize_split: bool = False


@dataclass
class OptimizationResult:
    layout: str
    best: DesignPoint
    E_el_T: float
    objective: float
    slacks: dict
    violations: dict
    feasible: bool
    converged: bool
    evaluations: int
    history: list
    starts: list
    evaluation: Evaluation = field(repr=False, default=None)


def decision_variables(kind: str, problem: SizingProblem, options: OptimizerOptions) -> list:
    config = problem.powertrain(kind, DesignPoint())
    names = ["K_A", "K_R"]
    if not config.topology.direct_drive:
        names.append("gamma")
    if options.optimize_split and config.topology.kind is Drive.AWD:
        names.append("u")
    return names


class PenalizedObjective:
    """Box-normalised penalised energy of one layout, with an evaluation cache."""

    def __init__(self, kind: str, problem: SizingProblem, options: OptimizerOptions,
                 names: list, weight: float):
        self.kind, self.problem, self.options = kind, problem, options
        self.names = names
        self.lo = np.array([options.bounds[n][0] for n in names], dtype=float)
        self.hi = np.array([options.bounds[n][1] for n in names], dtype=float)
        if np.any(self.hi <= self.lo):
            raise ConfigError(f"empty bounds for {names}")
        self.weight = weight
        self.evaluations = 0
        self._cache: dict = {}

    def design(self, x) -> DesignPoint:
        z = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        values = dict(zip(self.names, (self.lo + z * (self.hi - self.lo)).tolist()))
        base = DesignPoint()
        return replace(base, **values)

    def penalty(self, ev: Evaluation) -> float:
        return self.weight * sum(v * v for v in ev.violations.values())

    def evaluate(self, x) -> Evaluation:
        """Scored design at ``x``. Cached copies drop their traces to save memory."""
        key = tuple(np.clip(np.asarray(x, dtype=float), 0.0, 1.0).tolist())
        ev = self._cache.get(key)
        if ev is None:
            self.evaluations += 1
            ev = evaluate_design(self.design(key), self.kind, self.problem)
            self._cache[key] = replace(ev, simulation=None, thermal={})
        return ev

    def __call__(self, x) -> float:
        ev = self.evaluate(x)
        return ev.E_el_T + self.penalty(ev)


def baseline_energy(kind: str, problem: SizingProblem) -> float:
    """Cycle energy of the unscaled referent at its baseline gear ratio."""
    tech = problem.powertrain(kind, DesignPoint()).topology.motor_tech.value
    gamma = problem.referents[tech].baseline_gamma
    sim = simulate_powertrain(problem.powertrain(kind, DesignPoint(gamma=gamma)),
                              problem.cycle, problem.vehicle)
    return abs(sim.E_el_T)


def start_points(dim: int, options: OptimizerOptions) -> np.ndarray:
    """Latin-hypercube start points in the unit box."""
    sampler = qmc.LatinHypercube(d=dim, rng=np.random.default_rng(options.seed))
    return sampler.random(options.starts)


def optimize_powertrain(kind: str, problem: SizingProblem,
                        options: OptimizerOptions = OptimizerOptions()) -> OptimizationResult:
    """Minimum-energy design of layout ``kind`` subject to all constraints."""
    names = decision_variables(kind, problem, options)
    weight = options.penalty_weight * max(baseline_energy(kind, problem), 1e-6)
    objective = PenalizedObjective(kind, problem, options, names, weight)

    runs = []
    for x0 in start_points(len(names), options):
        res = nelder_mead(objective, x0, initial_step=options.initial_step, xtol=options.xtol,
                          ftol=options.ftol, max_evals=options.max_evals, bounds=(0.0, 1.0))
        ev = objective.evaluate(res.x)
        runs.append((res, ev))

    def rank(run):
        res, ev = run
        feasible = ev.is_feasible(options.feasibility_tol)
        return (not feasible, res.fun if feasible else sum(ev.violations.values()))

    best_res, best_ev = min(runs, key=rank)
    if best_ev.simulation is None:
        best_ev = evaluate_design(best_ev.design, kind, problem)
    feasible = best_ev.is_feasible(options.feasibility_tol)
    starts = [{"design": ev.design.as_dict(), "objective": res.fun, "E_el_kWh": ev.E_el_T,
               "evaluations": res.evaluations, "converged": res.converged,
               "feasible": ev.is_feasible(options.feasibility_tol)} for res, ev in runs]
    return OptimizationResult(
        layout=kind,
        best=best_ev.design,
        E_el_T=best_ev.E_el_T,
        objective=best_res.fun,
        slacks=best_ev.slacks,
        violations=best_ev.violations,
        feasible=feasible,
        converged=best_res.converged and feasible,
        evaluations=objective.evaluations,
        history=best_res.history,
        starts=starts,
        evaluation=best_ev,
    )
