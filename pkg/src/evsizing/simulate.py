"""Backward-facing drive-cycle simulation of a powertrain."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .drivecycle import DriveCycle
from .motor import ScaledMotor, integrate_energy, loss_breakdown, torque_limit
from .topology import PowertrainConfig
from .vehicle import VehicleParams, motor_speed, motor_torque, split_axle_torque, wheel_torque


@dataclass
class AxleTrace:
    """Operating points of one motor on an axle; all motors on an axle share them."""

    axle: str
    n_motors: int
    motor: ScaledMotor
    torque: np.ndarray      # [N m] per motor
    omega: np.ndarray       # [rad/s]
    limit: np.ndarray       # envelope torque [N m]
    losses: dict            # source -> [W] per motor
    P_el: np.ndarray        # [W] per motor

    @property
    def envelope_violation(self) -> float:
        """Worst excess over the envelope, relative to nominal torque or max speed."""
        excess = np.max(self.torque - self.limit, initial=0.0) / self.motor.T_nom
        overspeed = np.max(self.omega, initial=0.0) / self.motor.omega_max - 1.0
        return float(max(excess, overspeed, 0.0))


@dataclass
class CycleSimulation:
    cycle: DriveCycle
    T_req: np.ndarray
    friction: np.ndarray    # wheel torque absorbed by friction brakes [N m]
    axles: list

    @property
    def P_el(self) -> np.ndarray:
        """Total electrical power of all motors [W]."""
        return sum(ax.n_motors * ax.P_el for ax in self.axles)

    @property
    def E_el_T(self) -> float:
        return integrate_energy(self.P_el, self.cycle.dt)

    @property
    def envelope_violation(self) -> float:
        return max(ax.envelope_violation for ax in self.axles)


def required_wheel_torque(vehicle: VehicleParams, cycle: DriveCycle) -> np.ndarray:
    """Wheel torque along the cycle; zero while the vehicle stands still."""
    T = wheel_torque(vehicle, cycle.v, cycle.a)
    parked = (cycle.v == 0) & (cycle.a == 0)
    return np.where(parked, 0.0, T)


def simulate_powertrain(config: PowertrainConfig, cycle: DriveCycle,
                        vehicle: VehicleParams) -> CycleSimulation:
    """Per-step motor operating points, losses and electrical power.

    Braking torque beyond a motor's envelope is handed to the friction brakes;
    traction torque beyond it is kept and reported as an envelope violation.
    """
    T_req = required_wheel_torque(vehicle, cycle)
    front, rear, friction = split_axle_torque(config.topology, T_req, config.split)
    per_axle = {"front": front, "rear": rear}
    axles = []
    for axle in config.topology.driven_axles:
        slots = config.axle_motors(axle)
        n = len(slots)
        motor, trans = slots[0].motor, slots[0].transmission
        omega = motor_speed(trans, cycle.v, vehicle.r_w)
        T_m = motor_torque(trans, per_axle[axle], n, config.traction_factor)
        limit = torque_limit(motor, omega)
        regen = np.maximum(T_m, -limit)
        # unrecoverable braking torque goes back to the wheel as friction
        friction = friction + np.where(T_m < 0, (T_m - regen) * n * trans.gamma / trans.eta_g, 0.0)
        T_m = np.where(T_m < 0, regen, T_m)
        losses = loss_breakdown(motor, T_m, omega, check=False)
        P_el = T_m * omega + sum(losses.values())
        axles.append(AxleTrace(axle, n, motor, T_m, omega, limit, losses, P_el))
    return CycleSimulation(cycle, T_req, friction, axles)
