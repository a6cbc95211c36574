"""Lumped-parameter thermal network (LPTN) of a scalable machine.

Nodes carry heat capacities, edges carry thermal resistances, and ``ambient``
is a fixed-temperature boundary. Scaling follows the geometry: capacities go
with component volume, conduction resistances with path length over area,
contact resistances with interface area, and convection resistances with
surface area and rotor tip speed.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, NumericalDivergence
from .motor import ScalingFactors

AMBIENT = "ambient"
LOSS_SOURCES = ("Cu", "Fe", "br", "wind")
RESISTANCE_CLASSES = ("axial_conduction", "radial_conduction", "contact",
                      "convection_internal", "convection_external")
CONVECTION = ("convection_internal", "convection_external")
GEOMETRIES = ("face", "cylinder")
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ThermalNode:
    name: str
    C0: float                                # heat capacity [J/K]
    loss_sources: dict = field(default_factory=dict)   # source -> share injected here

    def __post_init__(self):
        if self.name == AMBIENT:
            raise ConfigError("'ambient' is the boundary and cannot be a state node")
        if not self.C0 > 0:
            raise ConfigError(f"node {self.name}: heat capacity must be > 0")
        for src, w in self.loss_sources.items():
            if src not in LOSS_SOURCES or not 0 <= w <= 1:
                raise ConfigError(f"node {self.name}: bad loss share {src}={w}")


@dataclass(frozen=True)
class ThermalResistance:
    a: str
    b: str
    R0: float                   # [K/W]
    kind: str
    geometry: str = "face"      # interface shape for contact/convection area scaling
    exponent: float = 0.8       # tip-speed exponent, convection only

    def __post_init__(self):
        if not self.R0 > 0:
            raise ConfigError(f"resistance {self.a}-{self.b}: R0 must be > 0")
        if self.kind not in RESISTANCE_CLASSES:
            raise ConfigError(f"resistance {self.a}-{self.b}: unknown class {self.kind!r}")
        if self.geometry not in GEOMETRIES:
            raise ConfigError(f"resistance {self.a}-{self.b}: unknown geometry {self.geometry!r}")


@dataclass(frozen=True)
class ThermalNetwork:
    nodes: tuple
    resistances: tuple
    T_amb: float = 25.0
    T_init: tuple | None = None     # per node [degC]; defaults to ambient
    omega_ref: float = 100.0        # speed at which convection R0 values hold [rad/s]
    min_speed_ratio: float = 0.2    # natural-convection floor on the tip-speed ratio
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "resistances", tuple(self.resistances))
        if self.T_init is None:
            object.__setattr__(self, "T_init", (float(self.T_amb),) * len(self.nodes))
        object.__setattr__(self, "T_init", tuple(float(x) for x in self.T_init))
        self._validate()

    def _validate(self):
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate node names")
        if len(self.T_init) != len(names):
            raise ConfigError("initial temperature vector has the wrong length")
        known = set(names) | {AMBIENT}
        adj = defaultdict(set)
        for r in self.resistances:
            if r.a not in known or r.b not in known or r.a == r.b:
                raise ConfigError(f"resistance {r.a}-{r.b} references unknown nodes")
            adj[r.a].add(r.b)
            adj[r.b].add(r.a)
        seen, todo = {AMBIENT}, deque([AMBIENT])
        while todo:
            for nb in adj[todo.popleft()] - seen:
                seen.add(nb)
                todo.append(nb)
        isolated = set(names) - seen
        if isolated:
            raise ConfigError(f"nodes without a heat path to ambient: {sorted(isolated)}")
        totals = defaultdict(float)
        for n in self.nodes:
            for src, w in n.loss_sources.items():
                totals[src] += w
        for src, total in totals.items():
            if abs(total - 1.0) > 1e-9:
                raise ConfigError(f"loss source {src} shares sum to {total}, not 1")

    @property
    def names(self) -> list[str]:
        return [n.name for n in self.nodes]

    @property
    def capacities(self) -> np.ndarray:
        return np.array([n.C0 for n in self.nodes])

    def index(self, name: str) -> int:
        return self.names.index(name)

    def injection_matrix(self) -> np.ndarray:
        """(n_nodes, 4) map from loss sources ``LOSS_SOURCES`` to node heat input."""
        W = np.zeros((len(self.nodes), len(LOSS_SOURCES)))
        for i, n in enumerate(self.nodes):
            for src, w in n.loss_sources.items():
                W[i, LOSS_SOURCES.index(src)] = w
        return W

    def resistance_values(self, omega=0.0) -> np.ndarray:
        """Resistances [K/W]; shape ``(n_res,)`` or ``(len(omega), n_res)`` for a trace."""
        omega = np.asarray(omega, dtype=float)
        ratio = np.maximum(np.abs(omega) / self.omega_ref, self.min_speed_ratio)
        cols = []
        for r in self.resistances:
            if r.kind in CONVECTION:
                cols.append(r.R0 / ratio**r.exponent)
            else:
                cols.append(np.full(ratio.shape, r.R0))
        return np.stack(cols, axis=-1)


def scale_network(net: ThermalNetwork, k: ScalingFactors, omega=None) -> ThermalNetwork:
    """Scale capacities and resistances of a referent network to ``k``.

    The tip-speed dependence of convection is kept by rescaling the reference
    speed, so the result still responds to shaft speed. Passing ``omega``
    freezes convection at that speed instead.
    """
    K_R, K_A = k.K_R, k.K_A
    area = {"face": K_R**2, "cylinder": K_R * K_A}
    nodes = tuple(replace(n, C0=K_R**2 * K_A * n.C0) for n in net.nodes)
    res = []
    for r in net.resistances:
        if r.kind == "axial_conduction":
            R = r.R0 * K_A / K_R**2
        elif r.kind == "radial_conduction":
            R = r.R0 / K_A
        else:
            R = r.R0 / area[r.geometry]
        res.append(replace(r, R0=R))
    scaled = replace(net, nodes=nodes, resistances=tuple(res), omega_ref=net.omega_ref / K_R)
    if omega is None:
        return scaled
    values = scaled.resistance_values(omega)
    frozen = tuple(replace(r, R0=float(R), exponent=0.0) for r, R in zip(scaled.resistances, values))
    return replace(scaled, resistances=frozen)


class _Operator:
    """Conductance matrix ``L`` and ambient source ``b`` with ``C dT/dt = Q - L T + b``."""

    def __init__(self, net: ThermalNetwork):
        n = len(net.nodes)
        self.n = n
        self.C = net.capacities
        self.T_amb = net.T_amb
        idx = {name: i for i, name in enumerate(net.names)}
        # per resistance: incidence pattern for L and ambient-coupling vector
        self.E = np.zeros((len(net.resistances), n, n))
        self.amb = np.zeros((len(net.resistances), n))
        for k, r in enumerate(net.resistances):
            ends = [idx[x] for x in (r.a, r.b) if x != AMBIENT]
            if len(ends) == 2:
                i, j = ends
                self.E[k, i, i] = self.E[k, j, j] = 1.0
                self.E[k, i, j] = self.E[k, j, i] = -1.0
            else:
                (i,) = ends
                self.E[k, i, i] = 1.0
                self.amb[k, i] = 1.0

    def assemble(self, R: np.ndarray):
        g = 1.0 / R
        L = np.tensordot(g, self.E, axes=(-1, 0))
        g_amb = np.tensordot(g, self.amb, axes=(-1, 0))
        return L, g_amb


def _substeps(C: np.ndarray, L: np.ndarray, dt: float, courant: float) -> int:
    tau = np.min(C / np.diagonal(L))
    return max(1, math.ceil(dt / (courant * tau) - 1e-12))


def _advance(T, C, L, g_amb, T_amb, Q, dt, n_sub):
    """``n_sub`` explicit Euler sub-steps. Returns new state and heat lost to ambient [J]."""
    h = dt / n_sub
    lost = 0.0
    for _ in range(n_sub):
        to_amb = g_amb * (T - T_amb)
        lost += h * to_amb.sum()
        T = T + h * (Q - L @ T + g_amb * T_amb) / C
    return T, lost


def step(net: ThermalNetwork, T, Q, dt: float, omega=0.0, courant: float = 0.5) -> np.ndarray:
    """Advance node temperatures ``T`` [degC] by ``dt`` under node heat input ``Q`` [W].

    Sub-steps keep each explicit Euler step below ``courant`` times the
    smallest nodal time constant ``C_i / sum_j G_ij``.
    """
    op = _Operator(net)
    L, g_amb = op.assemble(net.resistance_values(omega))
    T = np.asarray(T, dtype=float)
    T_new, _ = _advance(T, op.C, L, g_amb, net.T_amb, np.asarray(Q, dtype=float), dt,
                        _substeps(op.C, L, dt, courant))
    if not np.all(np.isfinite(T_new)):
        raise NumericalDivergence("non-finite node temperature")
    return T_new


def steady_state(net: ThermalNetwork, Q, omega=0.0) -> np.ndarray:
    """Equilibrium temperatures for constant node heat input ``Q``."""
    L, g_amb = _Operator(net).assemble(net.resistance_values(omega))
    return np.linalg.solve(L, np.asarray(Q, dtype=float) + g_amb * net.T_amb)


@dataclass
class ThermalTrace:
    names: list
    initial: np.ndarray
    temperatures: np.ndarray    # (n_steps, n_nodes), state at the end of each step
    heat_in: float              # [J]
    heat_to_ambient: float      # [J]

    @property
    def peak(self) -> dict:
        hi = np.maximum(self.initial, self.temperatures.max(axis=0, initial=-np.inf))
        return dict(zip(self.names, hi.tolist()))

    def node(self, name: str) -> np.ndarray:
        return self.temperatures[:, self.names.index(name)]


def simulate_cycle(net: ThermalNetwork, losses: dict, dt: float, omega=None,
                   courant: float = 0.5) -> ThermalTrace:
    """Integrate the network over loss traces ``losses[source]`` [W].

    With an ``omega`` trace [rad/s] the convection resistances follow the shaft
    speed step by step; otherwise they are held at standstill values.
    """
    n_steps = len(next(iter(losses.values())))
    P = np.zeros((n_steps, len(LOSS_SOURCES)))
    for src, trace in losses.items():
        P[:, LOSS_SOURCES.index(src)] = trace
    Q = P @ net.injection_matrix().T

    op = _Operator(net)
    speeds = np.zeros(n_steps) if omega is None else np.asarray(omega, dtype=float)
    L_all, g_amb_all = op.assemble(net.resistance_values(speeds))
    tau = np.min(op.C / np.diagonal(L_all, axis1=1, axis2=2), axis=1)
    n_sub = np.maximum(1, np.ceil(dt / (courant * tau) - 1e-12).astype(int))

    T = np.array(net.T_init)
    out = np.empty((n_steps, op.n))
    lost = 0.0
    for i in range(n_steps):
        T, q_out = _advance(T, op.C, L_all[i], g_amb_all[i], net.T_amb, Q[i], dt, n_sub[i])
        lost += q_out
        out[i] = T
    if not np.all(np.isfinite(out)):
        raise NumericalDivergence("non-finite node temperature")
    return ThermalTrace(net.names, np.array(net.T_init), out, float(Q.sum() * dt), lost)


def network_from_dict(doc: dict) -> ThermalNetwork:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported thermal network schema {doc.get('schema_version')!r}")
    try:
        nodes = [ThermalNode(n["name"], n["C0"], dict(n.get("losses", {}))) for n in doc["nodes"]]
        res = [ThermalResistance(r["from"], r["to"], r["R0"], r["class"],
                                 r.get("geometry", "face"), r.get("exponent", 0.8))
               for r in doc["resistances"]]
        T_amb = float(doc.get("T_amb", 25.0))
        init = doc.get("T_init", T_amb)
        if isinstance(init, dict):
            init = [init.get(n.name, T_amb) for n in nodes]
        elif np.isscalar(init):
            init = [init] * len(nodes)
        return ThermalNetwork(tuple(nodes), tuple(res), T_amb, tuple(init),
                              doc.get("omega_ref", 100.0), doc.get("min_speed_ratio", 0.2),
                              doc.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"thermal network: {exc}") from exc


def load_network(path) -> ThermalNetwork:
    with open(path, encoding="utf-8") as fh:
        return network_from_dict(json.load(fh))


def builtin_network(tech: str) -> ThermalNetwork:
    ref = resources.files("evsizing") / "data" / f"lptn_{tech.lower()}.json"
    with resources.as_file(ref) as p:
        return load_network(p)
