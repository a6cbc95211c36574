"""Top speed and 0-100 km/h acceleration of a powertrain at full envelope torque."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .drivecycle import KMH
from .errors import ConfigError
from .topology import PowertrainConfig
from .vehicle import VehicleParams


@dataclass(frozen=True)
class PerformanceSpec:
    v_max_req: float = 160.0       # [km/h]
    t_accel_req: float = 8.0       # [s]
    v_accel_target: float = 100.0  # [km/h]

    def __post_init__(self):
        if min(self.v_max_req, self.t_accel_req, self.v_accel_target) <= 0:
            raise ConfigError("performance requirements must be > 0")


def _envelopes(config: PowertrainConfig, r_w: float):
    """Per-motor ``(T_nom, P_nom, omega_max, speed_gain, torque_gain)`` tuples.

    ``speed_gain`` maps vehicle speed to shaft speed and ``torque_gain`` maps
    motor torque to wheel force.
    """
    out = []
    for s in config.motors:
        tr = s.transmission
        out.append((s.motor.T_nom, s.motor.P_nom, s.motor.omega_max, tr.gamma / r_w,
                    tr.gamma * tr.eta_g / (r_w * config.traction_factor)))
    return out


def _max_force(envelopes, v: float) -> float:
    force = 0.0
    for T_nom, P_nom, w_max, speed_gain, torque_gain in envelopes:
        w = speed_gain * v
        if w > w_max:
            continue
        T = T_nom if w * T_nom <= P_nom else P_nom / w
        force += torque_gain * T
    return force


def max_tractive_force(config: PowertrainConfig, vehicle: VehicleParams, v: float) -> float:
    """Wheel force [N] with every driven motor on its torque envelope."""
    return _max_force(_envelopes(config, vehicle.r_w), v)


def speed_ceiling(config: PowertrainConfig, r_w: float) -> float:
    """Highest vehicle speed [m/s] before a motor passes its maximum shaft speed."""
    return min(s.motor.omega_max * r_w / s.transmission.gamma for s in config.motors)


def _bisect_crossing(excess, v_hi: float, tol: float) -> float:
    """Largest speed in [0, v_hi] with ``excess(v) >= 0``, assuming one sign change."""
    if excess(v_hi) >= 0:
        return v_hi
    if excess(0.0) < 0:
        return 0.0
    lo, hi = 0.0, v_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return lo


def top_speed(config: PowertrainConfig, vehicle: VehicleParams, tol_kmh: float = 0.01) -> float:
    """Top speed [km/h] where full-envelope force meets steady road load."""
    env = _envelopes(config, vehicle.r_w)
    v_hi = speed_ceiling(config, vehicle.r_w)
    v = _bisect_crossing(lambda v: _max_force(env, v) - vehicle.resistance_force(v),
                         v_hi, tol_kmh * KMH)
    return v / KMH


def accel_time(config: PowertrainConfig, vehicle: VehicleParams,
               spec: PerformanceSpec = PerformanceSpec(), dt: float = 0.01,
               t_max: float = 120.0) -> float:
    """Time [s] from standstill to the target speed at full envelope force.

    Explicit Euler on vehicle speed; the crossing inside the last step is
    interpolated linearly. Returns ``inf`` if the target is out of reach.
    """
    env = _envelopes(config, vehicle.r_w)
    target = spec.v_accel_target * KMH
    drag = 0.5 * vehicle.rho_a * vehicle.c_d * vehicle.A_f
    rolling = vehicle.c_r * vehicle.m_v * vehicle.g
    m = vehicle.m_v
    v, t = 0.0, 0.0
    while t < t_max:
        f_net = _max_force(env, v) - drag * v * v - rolling
        if f_net <= 0:
            return math.inf
        v_next = v + dt * f_net / m
        if v_next >= target:
            return t + dt * (target - v) / (v_next - v)
        v, t = v_next, t + dt
    return math.inf
