"""Velocity drive cycles: loading, validation and differentiation."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import MalformedCycle

KMH = 1.0 / 3.6

_STEP_RTOL = 1e-9


@dataclass(frozen=True)
class DriveCycle:
    """Uniformly sampled speed trace.

    ``a`` is the forward difference of ``v`` with the last sample set to zero,
    so that ``sum(a) * dt == v[-1] - v[0]``.
    """

    t: np.ndarray
    v: np.ndarray
    a: np.ndarray = field(default=None)  # type: ignore[assignment]
    name: str = ""

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.v, dtype=float)
        _validate(t, v)
        a = _forward_difference(v, t[1] - t[0]) if self.a is None else np.asarray(self.a, dtype=float)
        if a.shape != v.shape:
            raise MalformedCycle("acceleration trace length does not match speed trace")
        for arr in (t, v, a):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "a", a)

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0])

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    def __len__(self) -> int:
        return len(self.t)


def _validate(t: np.ndarray, v: np.ndarray) -> None:
    if t.ndim != 1 or v.ndim != 1 or len(t) != len(v):
        raise MalformedCycle("time and speed must be 1-D traces of equal length")
    if len(t) < 2:
        raise MalformedCycle(f"need at least 2 samples, got {len(t)}")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
        raise MalformedCycle("non-finite sample in cycle")
    steps = np.diff(t)
    if np.any(steps <= 0):
        raise MalformedCycle("time must be strictly increasing")
    if np.any(np.abs(steps - steps[0]) > _STEP_RTOL * abs(steps[0])):
        raise MalformedCycle("time step must be uniform")
    if np.any(v < 0):
        raise MalformedCycle("speed must be non-negative")


def _forward_difference(v: np.ndarray, dt: float) -> np.ndarray:
    a = np.zeros_like(v)
    a[:-1] = np.diff(v) / dt
    return a


def derive_acceleration(cycle: DriveCycle) -> DriveCycle:
    """Return a copy of ``cycle`` with ``a`` recomputed from ``v``."""
    return DriveCycle(cycle.t, cycle.v, None, cycle.name)


def load_cycle(path, time_column: str = "t_s", speed_column: str = "v_kmh",
               name: str | None = None) -> DriveCycle:
    """Load a drive cycle from a CSV file with a header row.

    The speed column is read as km/h if its name ends in ``kmh`` and as m/s if
    it ends in ``ms``.
    """
    path = Path(path)
    if speed_column.endswith("kmh"):
        scale = KMH
    elif speed_column.endswith("ms"):
        scale = 1.0
    else:
        raise MalformedCycle(f"cannot infer unit of speed column {speed_column!r}")

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {time_column, speed_column} - set(reader.fieldnames or ())
        if missing:
            raise MalformedCycle(f"{path}: missing columns {sorted(missing)}")
        try:
            rows = [(float(r[time_column]), float(r[speed_column])) for r in reader]
        except (TypeError, ValueError) as exc:
            raise MalformedCycle(f"{path}: line {reader.line_num}: {exc}") from exc
    if len(rows) < 2:
        raise MalformedCycle(f"{path}: need at least 2 samples, got {len(rows)}")
    t, v = (np.array(col) for col in zip(*rows))
    return DriveCycle(t, v * scale, None, name or path.stem)


def save_cycle(cycle: DriveCycle, path, speed_column: str = "v_ms") -> None:
    """Write ``cycle`` as CSV. ``repr`` formatting keeps floats round-trippable."""
    scale = 1.0 / KMH if speed_column.endswith("kmh") else 1.0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t_s", speed_column])
        for ti, vi in zip(cycle.t, cycle.v * scale):
            w.writerow([repr(float(ti)), repr(float(vi))])


def wltc_class3() -> DriveCycle:
    """The WLTC Class 3b cycle shipped with the package (1801 samples at 1 Hz)."""
    ref = resources.files("evsizing") / "data" / "wltc_class3b.csv"
    with resources.as_file(ref) as p:
        return load_cycle(p, name="WLTC Class 3b")
