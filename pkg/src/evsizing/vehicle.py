"""Quasi-static longitudinal dynamics, one-speed transmission and axle torque split."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, InvalidControl


@dataclass(frozen=True)
class VehicleParams:
    """Road-load parameters. Defaults describe a compact electric hatchback."""

    r_w: float = 0.26       # wheel radius [m]
    m_v: float = 1700.0     # vehicle mass [kg]
    rho_a: float = 1.2041   # air density [kg/m^3]
    c_d: float = 0.263      # drag coefficient [-]
    A_f: float = 2.36       # frontal area [m^2]
    c_r: float = 0.012      # rolling resistance coefficient [-]
    g: float = 9.81         # [m/s^2]

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ConfigError(f"vehicle parameter {name} must be > 0, got {value}")

    def resistance_force(self, v):
        """Aerodynamic drag plus rolling resistance [N] at speed ``v`` [m/s]."""
        v = np.asarray(v, dtype=float)
        return 0.5 * self.rho_a * self.c_d * self.A_f * v**2 + self.c_r * self.m_v * self.g


@dataclass(frozen=True)
class Transmission:
    gamma: float = 1.0
    eta_g: float = 1.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ConfigError(f"gear ratio must be > 0, got {self.gamma}")
        if not 0 < self.eta_g <= 1:
            raise ConfigError(f"gear efficiency must be in (0, 1], got {self.eta_g}")


class Drive(str, Enum):
    RWD = "RWD"
    FWD = "FWD"
    AWD = "AWD"


class MotorTech(str, Enum):
    AFM = "AFM"
    RFM = "RFM"


@dataclass(frozen=True)
class Topology:
    """Driven axles, motor technology and regenerative braking share."""

    kind: Drive
    motors_per_axle: int
    r_b: float
    motor_tech: MotorTech
    direct_drive: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", Drive(self.kind))
        object.__setattr__(self, "motor_tech", MotorTech(self.motor_tech))
        if self.motors_per_axle < 1:
            raise ConfigError("at least one motor per driven axle is required")
        if not 0 <= self.r_b <= 1:
            raise ConfigError(f"regenerative braking fraction must be in [0, 1], got {self.r_b}")
        if self.motor_tech is MotorTech.AFM and not self.direct_drive:
            raise ConfigError("AFM topologies are in-wheel direct drive only")

    @property
    def driven_axles(self) -> tuple[str, ...]:
        return {Drive.RWD: ("rear",), Drive.FWD: ("front",), Drive.AWD: ("front", "rear")}[self.kind]

    @property
    def n_motors(self) -> int:
        return self.motors_per_axle * len(self.driven_axles)


def wheel_torque(params: VehicleParams, v, a):
    """Total wheel torque [N m] required to follow speed ``v`` with acceleration ``a``."""
    a = np.asarray(a, dtype=float)
    return params.r_w * (params.m_v * a + params.resistance_force(v))


def split_axle_torque(topology: Topology, T_req, u: float = 0.5):
    """Distribute wheel torque over the axles.

    Returns ``(front, rear, friction)``. ``u`` is the front-axle share and only
    matters for AWD. In braking only ``r_b * T_req`` passes through the
    powertrain; the remainder goes to the friction brakes.
    """
    if not 0 <= u <= 1:
        raise InvalidControl(f"front split must be in [0, 1], got {u}")
    T_req = np.asarray(T_req, dtype=float)
    braking = T_req < 0
    powertrain = np.where(braking, topology.r_b * T_req, T_req)
    friction = T_req - powertrain
    if topology.kind is Drive.AWD:
        front, rear = u * powertrain, (1.0 - u) * powertrain
    elif topology.kind is Drive.RWD:
        front, rear = np.zeros_like(powertrain), powertrain
    else:
        front, rear = powertrain, np.zeros_like(powertrain)
    return front, rear, friction


def motor_torque(trans: Transmission, T_axle, n_motors: int = 1, traction_factor: float = 1.0):
    """Per-motor torque [N m] for an axle torque through a one-speed gear.

    Gear losses are drawn from the motor in traction and from the recovered
    torque in braking. ``traction_factor`` multiplies the traction branch only;
    it is 1 unless the regen fraction is deliberately applied there too.
    """
    T_axle = np.asarray(T_axle, dtype=float)
    scale = n_motors * trans.gamma
    return np.where(T_axle >= 0,
                    traction_factor * T_axle / (scale * trans.eta_g),
                    T_axle * trans.eta_g / scale)


def motor_speed(trans: Transmission, v, r_w: float):
    """Motor shaft speed [rad/s] at vehicle speed ``v`` [m/s]."""
    return trans.gamma * np.asarray(v, dtype=float) / r_w
