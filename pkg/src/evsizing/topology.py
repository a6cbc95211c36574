"""Powertrain layouts: which axles are driven, by how many scaled motors, through what gear."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .motor import ReferentMotor, ScaledMotor, ScalingFactors, mass_and_cost
from .vehicle import Drive, MotorTech, Topology, Transmission

# Layout presets. Regen shares are engineering defaults, not measured values.
PRESETS = {
    "RWD_RFM": dict(kind="RWD", motors_per_axle=1, motor_tech="RFM", direct_drive=False),
    "FWD_RFM": dict(kind="FWD", motors_per_axle=1, motor_tech="RFM", direct_drive=False),
    "AWD_RFM": dict(kind="AWD", motors_per_axle=1, motor_tech="RFM", direct_drive=False),
    "AWD_AFM": dict(kind="AWD", motors_per_axle=2, motor_tech="AFM", direct_drive=True),
}
DEFAULT_RB = {Drive.RWD: 0.6, Drive.FWD: 0.7, Drive.AWD: 1.0}
DEFAULT_ETA_G = 0.95


@dataclass(frozen=True)
class DesignPoint:
    """Decision variables: scaling factors, gear ratio and front-axle torque share."""

    K_A: float = 1.0
    K_R: float = 1.0
    gamma: float = 1.0
    u: float = 0.5

    @property
    def k(self) -> ScalingFactors:
        return ScalingFactors(self.K_R, self.K_A)

    def as_dict(self) -> dict:
        return {"K_A": self.K_A, "K_R": self.K_R, "gamma": self.gamma, "u": self.u}


@dataclass(frozen=True)
class MotorSlot:
    axle: str
    motor: ScaledMotor
    transmission: Transmission


@dataclass(frozen=True)
class PowertrainConfig:
    topology: Topology
    motors: tuple
    split: float = 0.5
    label: str = ""
    rb_in_traction: bool = False
    design: DesignPoint = field(default_factory=DesignPoint)

    def axle_motors(self, axle: str) -> list:
        return [s for s in self.motors if s.axle == axle]

    @property
    def traction_factor(self) -> float:
        return self.topology.r_b if self.rb_in_traction else 1.0


def make_topology(kind: str, r_b: float | None = None) -> Topology:
    try:
        preset = PRESETS[kind]
    except KeyError:
        raise ConfigError(f"unknown powertrain layout {kind!r}; choose from {sorted(PRESETS)}") from None
    drive = Drive(preset["kind"])
    return Topology(r_b=DEFAULT_RB[drive] if r_b is None else r_b, **preset)


def instantiate(kind: str, design: DesignPoint, referents: dict, *, r_b: float | None = None,
                eta_g: float = DEFAULT_ETA_G, rb_in_traction: bool = False) -> PowertrainConfig:
    """Build the powertrain for layout ``kind`` at ``design``.

    ``referents`` maps motor technology (``"AFM"``/``"RFM"``) to its referent.
    All motors of a powertrain share the design; in-wheel machines have no gear.
    """
    topo = make_topology(kind, r_b)
    try:
        ref: ReferentMotor = referents[topo.motor_tech.value]
    except KeyError:
        raise ConfigError(f"no referent motor for technology {topo.motor_tech.value}") from None
    motor = ScaledMotor(ref, design.k)
    trans = Transmission(1.0, 1.0) if topo.direct_drive else Transmission(design.gamma, eta_g)
    slots = tuple(MotorSlot(axle, motor, trans)
                  for axle in topo.driven_axles for _ in range(topo.motors_per_axle))
    u = design.u if topo.kind is Drive.AWD else 0.5
    if topo.direct_drive:
        design = DesignPoint(design.K_A, design.K_R, 1.0, u)
    return PowertrainConfig(topo, slots, u, kind, rb_in_traction, design)


def aggregate_report(config: PowertrainConfig, evaluation=None) -> dict:
    """Vehicle-level totals for Table-style reporting.

    ``evaluation`` is an :class:`~evsizing.optimizer.Evaluation`; without it
    only mass and cost are reported.
    """
    per_motor = [mass_and_cost(s.motor) for s in config.motors]
    report = {
        "layout": config.label,
        "n_motors": len(config.motors),
        "mass_kg": sum(p["mass"] for p in per_motor),
        "cost_eur": sum(p["cost"] for p in per_motor),
        "nominal_torque_Nm": sum(s.motor.T_nom for s in config.motors),
    }
    if evaluation is not None:
        report.update({
            "E_el_kWh": evaluation.E_el_T,
            "accel_time_s": evaluation.accel_time,
            "top_speed_kmh": evaluation.top_speed,
            "peak_winding_C": evaluation.peak_winding,
        })
    return report


__all__ = ["DesignPoint", "MotorSlot", "PowertrainConfig", "PRESETS", "DEFAULT_RB",
           "instantiate", "aggregate_report", "make_topology", "MotorTech"]
