"""Geometrically scalable PMSM model.

A referent machine is stretched by ``K_A`` along the shaft and by ``K_R`` in
every radial dimension. Nominal torque and power scale with ``K_R**3 * K_A``,
phase resistance with ``K_R * K_A`` and phase current with ``K_R``, so copper
losses at nominal current scale like torque. Iron, bearing and windage losses
use the volume-, load- and disc-friction scalings documented on each function;
their coefficients live in the referent data file.

All loss and power functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, InfeasibleOperatingPoint

SCHEMA_VERSION = 1
_ENVELOPE_RTOL = 1e-9


@dataclass(frozen=True)
class ScalingFactors:
    K_R: float = 1.0
    K_A: float = 1.0

    def __post_init__(self):
        if not (self.K_R > 0 and self.K_A > 0):
            raise ValueError(f"scaling factors must be > 0, got {self}")

    @property
    def torque(self) -> float:
        """Common factor of torque, power and nominal copper loss."""
        return self.K_R**3 * self.K_A

    @property
    def volume(self) -> float:
        return self.K_R**2 * self.K_A


@dataclass(frozen=True)
class Winding:
    """Stator winding geometry of the referent machine."""

    parallel_paths: float
    resistivity: float        # [Ohm m]
    mean_turn_length: float   # [m]
    coils: float
    slots: float
    slot_area: float          # [m^2]
    fill_factor: float

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ConfigError(f"winding parameter {name} must be > 0")
        if not self.fill_factor < 1:
            raise ConfigError("slot fill factor must be < 1")


@dataclass(frozen=True)
class LossCoefficients:
    c_h: float    # hysteresis [W s/rad]
    c_e: float    # eddy current [W s^2/rad^2]
    c_br: float   # bearing friction [W s/rad]
    c_w0: float   # windage, quadratic [W s^2/rad^2]
    c_w1: float   # windage, cubic [W s^3/rad^3]

    def __post_init__(self):
        if any(v < 0 for v in vars(self).values()):
            raise ConfigError("loss coefficients must be non-negative")


@dataclass(frozen=True)
class Component:
    name: str
    volume: float          # [m^3]
    density: float         # [kg/m^3]
    specific_cost: float   # [EUR/kg]


@dataclass(frozen=True)
class ReferentMotor:
    """Unscaled machine data. Subscript-0 quantities in the scaling laws."""

    tech: str
    T_m0: float
    P_m0: float
    omega_max0: float
    L_dq0: float
    psi_0: float
    R_ph0: float
    I_ph0: float
    winding: Winding
    losses: LossCoefficients
    components: tuple[Component, ...]
    omega_base0: float | None = None
    name: str = ""
    thermal_network: str | None = None
    baseline_gamma: float = 1.0   # gear ratio of the unscaled reference powertrain

    def __post_init__(self):
        base = self.P_m0 / self.T_m0
        if self.omega_base0 is None:
            object.__setattr__(self, "omega_base0", base)
        elif abs(self.omega_base0 - base) > 0.01 * base:
            raise ConfigError("nominal power, torque and base speed are inconsistent")
        for name in ("T_m0", "P_m0", "omega_max0", "L_dq0", "psi_0", "R_ph0", "I_ph0"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"referent parameter {name} must be > 0")
        if self.omega_max0 < self.omega_base0:
            raise ConfigError("maximum speed is below base speed")
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def P_Cu0(self) -> float:
        """Copper loss at nominal current."""
        return 3.0 * self.I_ph0**2 * self.R_ph0


@dataclass(frozen=True)
class ScaledMotor:
    referent: ReferentMotor
    k: ScalingFactors = field(default_factory=ScalingFactors)

    @cached_property
    def T_nom(self) -> float:
        return self.k.torque * self.referent.T_m0

    @cached_property
    def P_nom(self) -> float:
        return self.k.torque * self.referent.P_m0

    @cached_property
    def R_ph(self) -> float:
        return self.k.K_R * self.k.K_A * self.referent.R_ph0

    @cached_property
    def I_nom(self) -> float:
        return self.k.K_R * self.referent.I_ph0

    @property
    def omega_max(self) -> float:
        return self.referent.omega_max0

    @property
    def omega_base(self) -> float:
        return self.referent.omega_base0


def scaled_parameters(m: ScaledMotor) -> dict:
    """Nominal parameters of the scaled machine, including per-component volumes."""
    ref, k = m.referent, m.k
    return {
        "T_m": m.T_nom,
        "P_m": m.P_nom,
        "L_dq": k.volume * ref.L_dq0,
        "psi": k.volume * ref.psi_0,
        "R_ph": m.R_ph,
        "I_ph": m.I_nom,
        "V": {c.name: k.volume * c.volume for c in ref.components},
    }


def phase_resistance_geometric(w: Winding, k: ScalingFactors | None = None) -> float:
    """Phase resistance from winding geometry, after scaling that geometry.

    Slot area grows with ``K_R*K_A``, mean turn length with ``K_R``, coil count
    with ``K_A``, and the fill factor shrinks as ``1/K_R``.
    """
    k = k or ScalingFactors()
    a_p = w.parallel_paths
    l_t = k.K_R * w.mean_turn_length
    n_c = k.K_A * w.coils
    a_slot = k.K_R * k.K_A * w.slot_area
    k_cu = w.fill_factor / k.K_R
    conductor_length = l_t * (n_c / a_p) * (w.slots / 3.0)
    conductor_area = 0.5 * (a_slot / n_c) * k_cu
    return (1.0 / a_p) * w.resistivity * conductor_length / conductor_area


def torque_limit(m: ScaledMotor, omega):
    """Constant-torque / constant-power envelope [N m]; zero above max speed."""
    omega = np.abs(np.asarray(omega, dtype=float))
    with np.errstate(divide="ignore", over="ignore"):
        lim = np.minimum(m.T_nom, np.where(omega > 0, m.P_nom / omega, np.inf))
    return np.where(omega <= m.omega_max, lim, 0.0)


def operating_current(m: ScaledMotor, T_m, omega=None):
    """Phase current [A] for torque ``T_m``, linear in torque.

    When ``omega`` is given the operating point is checked against the envelope.
    """
    T_m = np.asarray(T_m, dtype=float)
    if omega is not None:
        lim = torque_limit(m, omega)
        if np.any(np.abs(T_m) > lim * (1 + _ENVELOPE_RTOL) + 1e-12):
            raise InfeasibleOperatingPoint("torque exceeds the motor envelope")
    return m.I_nom * np.abs(T_m) / m.T_nom


def copper_losses(m: ScaledMotor, I_ph):
    """Three-phase winding loss [W] at phase current ``I_ph``."""
    return 3.0 * np.asarray(I_ph, dtype=float) ** 2 * m.R_ph


def iron_losses(m: ScaledMotor, omega):
    """Hysteresis + eddy loss, proportional to core volume (``K_R**2 * K_A``)."""
    w = np.abs(np.asarray(omega, dtype=float))
    c = m.referent.losses
    return m.k.volume * (c.c_h * w + c.c_e * w**2)


def bearing_losses(m: ScaledMotor, omega):
    """Bearing friction: rotor weight (``K_R**2 K_A``) times bearing radius (``K_R``)."""
    w = np.abs(np.asarray(omega, dtype=float))
    return m.k.torque * m.referent.losses.c_br * w


def windage_losses(m: ScaledMotor, omega):
    """Rotor disc friction, growing with the fifth power of the radius."""
    w = np.abs(np.asarray(omega, dtype=float))
    c = m.referent.losses
    return m.k.K_R**5 * (c.c_w0 * w**2 + c.c_w1 * w**3)


def loss_breakdown(m: ScaledMotor, T_m, omega, check: bool = True) -> dict:
    """Individual loss components [W] at the operating point(s)."""
    current = operating_current(m, T_m, omega if check else None)
    return {
        "Cu": copper_losses(m, current),
        "Fe": iron_losses(m, omega),
        "br": bearing_losses(m, omega),
        "wind": windage_losses(m, omega),
    }


def electrical_power(m: ScaledMotor, T_m, omega, check: bool = True):
    """Electrical input power [W]: shaft power plus all losses."""
    losses = loss_breakdown(m, T_m, omega, check)
    shaft = np.asarray(T_m, dtype=float) * np.asarray(omega, dtype=float)
    return shaft + losses["Cu"] + losses["Fe"] + losses["br"] + losses["wind"]


def integrate_energy(P_el, dt: float) -> float:
    """Rectangle-rule energy [kWh] of a power trace [W] sampled every ``dt`` seconds."""
    return float(np.sum(np.asarray(P_el, dtype=float)) * dt / 3.6e6)


def mass_and_cost(m: ScaledMotor) -> dict:
    """Active-material mass [kg] and material cost [EUR] of one machine."""
    vol = m.k.volume
    masses = {c.name: c.density * vol * c.volume for c in m.referent.components}
    cost = sum(masses[c.name] * c.specific_cost for c in m.referent.components)
    return {"mass": sum(masses.values()), "cost": cost, "components": masses}


def referent_from_dict(doc: dict, name: str = "") -> ReferentMotor:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported referent schema version {doc.get('schema_version')!r}")
    try:
        nominal = doc["nominal"]
        return ReferentMotor(
            tech=doc["tech"],
            T_m0=nominal["torque"],
            P_m0=nominal["power"],
            omega_base0=nominal.get("omega_base"),
            omega_max0=nominal["omega_max"],
            L_dq0=nominal["inductance_dq"],
            psi_0=nominal["flux_linkage"],
            R_ph0=nominal["phase_resistance"],
            I_ph0=nominal["phase_current"],
            winding=Winding(**doc["winding"]),
            losses=LossCoefficients(**doc["losses"]),
            components=tuple(Component(**c) for c in doc["components"]),
            name=doc.get("name", name),
            thermal_network=doc.get("thermal_network"),
            baseline_gamma=doc.get("baseline_gamma", 1.0),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"referent motor {name!r}: {exc}") from exc


def load_referent(path) -> ReferentMotor:
    """Read a referent machine from JSON and check it against its winding geometry."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        ref = referent_from_dict(json.load(fh), path.stem)
    geometric = phase_resistance_geometric(ref.winding)
    if abs(geometric - ref.R_ph0) > 1e-3 * ref.R_ph0:
        raise ConfigError(f"{path}: phase resistance {ref.R_ph0} disagrees with winding "
                          f"geometry ({geometric:.6g} Ohm)")
    if ref.thermal_network is not None:
        object.__setattr__(ref, "thermal_network", str(path.parent / ref.thermal_network))
    return ref


def builtin_referent(tech: str) -> ReferentMotor:
    """Synthetic referent shipped with the package, ``"AFM"`` or ``"RFM"``."""
    ref = resources.files("evsizing") / "data" / f"referent_{tech.lower()}.json"
    with resources.as_file(ref) as p:
        return load_referent(p)
