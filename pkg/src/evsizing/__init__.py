"""Drive-cycle sizing of EV powertrains built from geometrically scaled motors."""

__version__ = "0.1.0"

from .drivecycle import DriveCycle, derive_acceleration, load_cycle, save_cycle, wltc_class3
from .errors import (ConfigError, InfeasibleOperatingPoint, InvalidControl, InvalidStart,
                     MalformedCycle, NumericalDivergence, SizingError)
from .motor import (ReferentMotor, ScaledMotor, ScalingFactors, bearing_losses, builtin_referent,
                    copper_losses, electrical_power, integrate_energy, iron_losses, load_referent,
                    mass_and_cost, operating_current, phase_resistance_geometric, scaled_parameters,
                    torque_limit, windage_losses)
from .optimizer import (OptimizationResult, OptimizerOptions, SizingProblem, evaluate_design,
                        minimize_in_box, nelder_mead, optimize_powertrain)
from .perfcheck import PerformanceSpec, accel_time, top_speed
from .thermal import ThermalNetwork, builtin_network, load_network, scale_network, simulate_cycle, step
from .topology import DesignPoint, PowertrainConfig, aggregate_report, instantiate
from .vehicle import (Topology, Transmission, VehicleParams, motor_speed, motor_torque,
                      split_axle_torque, wheel_torque)
