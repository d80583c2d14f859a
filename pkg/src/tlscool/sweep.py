"""Parameter sweeps, optimal-detuning search and cross-variant comparison."""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .model import ModelVariant, SystemParams, validate_params
from .rates import bare_steady_occupation, bose_occupation
from .steady import SteadyState, steady_state

BARE = "bare"
AXES = ("omega_z", "gamma_tau", "delta_b")
VARIANTS = (ModelVariant.FULL.value, ModelVariant.ELIMINATED.value, ModelVariant.SIMPLE.value, BARE)
CSV_COLUMNS = (
    "axis_name",
    "axis_value",
    "variant",
    "n_ss",
    "sigma_z_ss",
    "trace_err",
    "min_eig",
    "residual",
    "status",
)
FLOAT_FMT = "{:.12e}"
DETUNING_STEP = 0.005
DETUNING_WINDOW = (-1.5, -0.5)


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams
    axis: str
    start: float
    stop: float
    points: int
    scale: str = "linear"
    variants: tuple[str, ...] = (ModelVariant.ELIMINATED.value,)

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.points < 2:
            raise ValueError("a sweep needs at least 2 points")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and not (self.start > 0 and self.stop > 0):
            raise ValueError("log grids need positive endpoints")
        unknown = set(self.variants) - set(VARIANTS)
        if unknown:
            raise ValueError(f"unknown variant(s) {sorted(unknown)}; choose from {VARIANTS}")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "start": self.start,
            "stop": self.stop,
            "points": self.points,
            "scale": self.scale,
            "variants": list(self.variants),
        }


PRESETS = {
    "omega_z": dict(axis="omega_z", start=0.5, stop=1.5, points=101, scale="linear"),
    "gamma_tau": dict(axis="gamma_tau", start=5e-8, stop=5e-4, points=25, scale="log"),
    "gamma_tau_decades": dict(axis="gamma_tau", start=2.5e-6, stop=2.5e-4, points=3, scale="log"),
    "delta_b": dict(axis="delta_b", start=-1.5, stop=-0.5, points=201, scale="linear"),
}


@dataclass
class SweepResult:
    rows: list[dict]
    metadata: dict = field(default_factory=dict)

    def column(self, variant: str, key: str = "n_ss") -> np.ndarray:
        return np.array([r[key] for r in self.rows if r["variant"] == variant], dtype=float)

    def axis_values(self, variant: str) -> np.ndarray:
        return self.column(variant, "axis_value")


def bare_point(p: SystemParams) -> dict:
    """Uncoupled reference: resonator from the analytic formula, TLS thermal."""
    n_z = bose_occupation(p.omega_z, p.kT)
    return {
        "n_ss": bare_steady_occupation(p),
        "sigma_z_ss": -1.0 / (2 * n_z + 1),
        "trace_err": 0.0,
        "min_eig": 0.0,
        "residual": 0.0,
        "status": "ok",
    }


def _solve_point(p: SystemParams, variant: str) -> dict:
    try:
        if variant == BARE:
            return bare_point(p)
        ss = steady_state(p, ModelVariant(variant), check_degeneracy=False)
        return _row_from_state(ss)
    except Exception as exc:  # a failed point is recorded in its row, never dropped
        nan = float("nan")
        return {
            "n_ss": nan,
            "sigma_z_ss": nan,
            "trace_err": nan,
            "min_eig": nan,
            "residual": nan,
            "status": f"error: {type(exc).__name__}: {exc}",
        }


def _row_from_state(ss: SteadyState) -> dict:
    d = ss.diagnostics
    return {
        "n_ss": ss.n_ss,
        "sigma_z_ss": ss.sigma_z_ss,
        "trace_err": d["trace_err"],
        "min_eig": d["min_eig"],
        "residual": d["residual"],
        "status": "ok",
    }


def _task(args):
    return _solve_point(*args)


def _map(tasks: list, workers: int | None) -> list:
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(tasks) < 2:
        return [_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves submission order, so output ordering is deterministic
        return list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    base = validate_params(spec.base)
    grid = spec.grid()
    tasks = []
    keys = []
    for value in grid:
        p = base.replace(**{spec.axis: float(value)})
        for variant in spec.variants:
            tasks.append((p, variant))
            keys.append((float(value), variant))
    results = _map(tasks, workers)
    rows = [
        {"axis_name": spec.axis, "axis_value": value, "variant": variant, **res}
        for (value, variant), res in zip(keys, results)
    ]
    metadata = {
        "code_version": __version__,
        "params": base.to_dict(),
        "sweep": spec.to_dict(),
        "modified_polariton_frequencies": "unshifted",
        "cavity_bath": "zero temperature",
    }
    return SweepResult(rows=rows, metadata=metadata)


def _fmt(value) -> str:
    if isinstance(value, float):
        return FLOAT_FMT.format(value)
    return str(value)


def write_csv(result: SweepResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in result.rows:
            writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


def write_json(result: SweepResult, path) -> None:
    payload = {"metadata": result.metadata, "rows": result.rows}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True, default=float)
        fh.write("\n")


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# --- optimal detuning ---------------------------------------------------------


@dataclass
class OptimalDetuning:
    delta_b: float
    n_ss: float
    on_boundary: bool
    grid: np.ndarray
    n_grid: np.ndarray

    @property
    def shift(self) -> float:
        """``delta_b + omega_m`` for omega_m = 1: drift away from the red sideband."""
        return self.delta_b + 1.0


def _parabola_vertex(x: np.ndarray, y: np.ndarray) -> float:
    """Vertex of the parabola through three equally spaced points."""
    h = x[1] - x[0]
    denom = y[0] - 2 * y[1] + y[2]
    if denom <= 0:
        return float(x[1])
    return float(x[1] + 0.5 * h * (y[0] - y[2]) / denom)


def optimal_detuning(
    p: SystemParams,
    variant: str = ModelVariant.ELIMINATED.value,
    window: tuple[float, float] = DETUNING_WINDOW,
    step: float = DETUNING_STEP,
) -> OptimalDetuning:
    """Detuning minimizing n_ss: grid scan, then a three-point parabolic refinement."""
    lo, hi = window
    if not (DETUNING_WINDOW[0] <= lo < hi <= DETUNING_WINDOW[1]):
        raise ValueError(f"window {window} must lie within {DETUNING_WINDOW}")
    p = validate_params(p)
    points = int(round((hi - lo) / step)) + 1
    grid = np.linspace(lo, hi, points)
    values = np.array([_n_at(p, variant, d) for d in grid])
    k = int(np.nanargmin(values))
    on_boundary = k in (0, len(grid) - 1)
    if on_boundary:
        return OptimalDetuning(float(grid[k]), float(values[k]), True, grid, values)
    best = _parabola_vertex(grid[k - 1 : k + 2], values[k - 1 : k + 2])
    n_best = _n_at(p, variant, best)
    if not n_best <= values[k]:
        best, n_best = float(grid[k]), float(values[k])
    return OptimalDetuning(best, n_best, False, grid, values)


def _n_at(p: SystemParams, variant: str, delta_b: float) -> float:
    res = _solve_point(p.replace(delta_b=float(delta_b)), variant)
    return res["n_ss"]


def detuning_drift(
    base: SystemParams,
    omega_z_grid,
    variant: str = ModelVariant.ELIMINATED.value,
    step: float = DETUNING_STEP,
) -> list[OptimalDetuning]:
    return [optimal_detuning(base.replace(omega_z=float(w)), variant, step=step) for w in omega_z_grid]


# --- variant comparison -----------------------------------------------------------


def compare_variants(p: SystemParams) -> dict:
    """Solve one point with every model and report deviations relative to FULL."""
    p = validate_params(p)
    out: dict = {"params": p.to_dict(), "variants": {}}
    for variant in VARIANTS:
        out["variants"][variant] = _solve_point(p, variant)
    full = out["variants"][ModelVariant.FULL.value]["n_ss"]
    elim = out["variants"][ModelVariant.ELIMINATED.value]["n_ss"]
    out["relative_to_full"] = {
        v: abs(r["n_ss"] - full) / full for v, r in out["variants"].items() if v != ModelVariant.FULL.value
    }
    out["relative_to_eliminated"] = {
        v: abs(r["n_ss"] - elim) / elim for v, r in out["variants"].items() if v != ModelVariant.ELIMINATED.value
    }
    return out
