"""Declarative 1D/2D parameter sweeps over steady-state and driven evaluations."""

from __future__ import annotations

import datetime
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import lindblad, model, observables
from .errors import ConfigError, QrsimError
from .observables import ObservableKind

log = logging.getLogger(__name__)

SWEEPABLE = {
    "probe_freq": "GHz",
    "epsilon0": "GHz",
    "flux_ratio": "Phi/Phi0",
    "probe_amp": "GHz",
    "drive_amp": "GHz",
    "drive_freq": "GHz",
    "coupling_g": "GHz",
}

STATUS_OK = "ok"
STATUS_NON_CONVERGED = "non_converged"
STATUS_TRUNCATION = "truncation_warning"
STATUS_FAILED = "failed"

# Coupling-to-resonator ratio beyond which the RWA treatment is suspect.
RWA_CAVEAT_RATIO = 0.1


@dataclass(frozen=True)
class AxisSpec:
    parameter: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ConfigError(
                f"unknown sweep parameter {self.parameter!r}; "
                f"expected one of {sorted(SWEEPABLE)}"
            )
        if self.count < 2:
            raise ConfigError(f"axis {self.parameter!r} needs count >= 2")
        if self.start == self.stop:
            raise ConfigError(f"axis {self.parameter!r} has start == stop")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"axis scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ConfigError("log-scaled axis needs positive endpoints")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    @property
    def unit(self) -> str:
        return SWEEPABLE[self.parameter]


@dataclass(frozen=True)
class SweepSpec:
    base: model.SystemParams
    axis1: AxisSpec
    axis2: AxisSpec | None = None
    observables: tuple[ObservableKind, ...] = (ObservableKind.TRANSMISSION,)
    mode: str = "static_steady_state"
    calibration: model.FluxCalibration = field(default_factory=model.FluxCalibration)
    n_transient_periods: int | None = None
    n_average_periods: int = 10
    dt_max: float = 1.0
    transmission_scale: float = 1.0

    def __post_init__(self):
        if self.mode not in ("static_steady_state", "driven_periodic_average"):
            raise ConfigError(f"unknown sweep mode {self.mode!r}")
        if not self.observables:
            raise ConfigError("at least one observable must be requested")
        axes = [self.axis1] + ([self.axis2] if self.axis2 else [])
        if self.mode == "static_steady_state":
            if self.base.drive_amp != 0 or any(a.parameter == "drive_amp" for a in axes):
                raise ConfigError("static_steady_state mode requires drive_amp = 0")
        if self.axis2 is not None and self.axis2.parameter == self.axis1.parameter:
            raise ConfigError("axis1 and axis2 sweep the same parameter")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.axis1.count, self.axis2.count if self.axis2 else 1)

    def params_at(self, v1: float, v2: float | None = None) -> model.SystemParams:
        p = self.base
        for axis, value in ((self.axis1, v1), (self.axis2, v2)):
            if axis is None or value is None:
                continue
            if axis.parameter == "flux_ratio":
                p = p.with_(epsilon0=model.epsilon_from_flux(value, self.calibration))
            else:
                p = p.with_(**{axis.parameter: value})
        return p

    def transient_periods(self) -> int:
        if self.n_transient_periods is not None:
            return self.n_transient_periods
        return lindblad.default_transient_periods(self.base)


@dataclass
class GridResult:
    axis1_name: str
    axis1_unit: str
    axis1_values: np.ndarray
    axis2_name: str | None
    axis2_unit: str | None
    axis2_values: np.ndarray | None
    values: dict[str, np.ndarray]        # observable name -> (count1, count2)
    status: np.ndarray                   # (count1, count2) of status strings
    provenance: dict

    @property
    def shape(self) -> tuple[int, int]:
        return self.status.shape


def evaluate_static_point(p: model.SystemParams, transmission_scale: float = 1.0):
    """Steady-state observables at a single parameter point."""
    h = model.build_dressed_rwa_hamiltonian(p, 0.0)
    rho = lindblad.steady_state(h, lindblad.build_dissipators(p))
    nbar = observables.photon_number(rho)
    values = {
        ObservableKind.TRANSMISSION: observables.transmission(rho, transmission_scale),
        ObservableKind.QUBIT_POPULATION: observables.qubit_population(rho),
        ObservableKind.PHOTON_NUMBER: nbar,
    }
    status = STATUS_TRUNCATION if observables.truncation_suspect(nbar, p.fock_levels) else STATUS_OK
    return values, status


def evaluate_driven_point(p: model.SystemParams, n_transient: int, n_average: int,
                          dt_max: float, transmission_scale: float = 1.0):
    """Drive-period-averaged observables at a single parameter point."""
    ops = [
        observables.annihilation_full(p.fock_levels),
        observables.excited_projector_full(p.fock_levels),
        observables.number_full(p.fock_levels),
    ]
    samples = lindblad.periodic_samples(p, n_transient, n_average, ops, dt_max)
    trans_series = np.abs(samples[:, 0].imag) * transmission_scale
    pop_series = samples[:, 1].real
    nbar_series = samples[:, 2].real
    values = {
        ObservableKind.TRANSMISSION: float(trans_series.mean()),
        ObservableKind.QUBIT_POPULATION: float(pop_series.mean()),
        ObservableKind.PHOTON_NUMBER: float(nbar_series.mean()),
    }
    converged = all(
        lindblad.period_mean_converged(series, n_average)
        for series in (trans_series, pop_series, nbar_series)
    )
    if not converged:
        status = STATUS_NON_CONVERGED
    elif observables.truncation_suspect(float(nbar_series.mean()), p.fock_levels):
        status = STATUS_TRUNCATION
    else:
        status = STATUS_OK
    return values, status


def _evaluate_index(args):
    spec, i, j = args
    v1 = spec.axis1.values()[i]
    v2 = spec.axis2.values()[j] if spec.axis2 else None
    p = spec.params_at(v1, v2)
    try:
        if spec.mode == "static_steady_state":
            values, status = evaluate_static_point(p, spec.transmission_scale)
        else:
            values, status = evaluate_driven_point(
                p, spec.transient_periods(), spec.n_average_periods,
                spec.dt_max, spec.transmission_scale,
            )
    except QrsimError as exc:
        log.warning("point (%d, %d) failed: %s", i, j, exc)
        values = {k: float("nan") for k in ObservableKind}
        status = STATUS_FAILED
    return i, j, values, status


def run_sweep(spec: SweepSpec, workers: int | None = None,
              provenance_notes: list[str] | None = None) -> GridResult:
    """Evaluate every grid point of ``spec``; output ordering is deterministic.

    Per-point solver failures are recorded in the status grid and never abort
    the sweep.
    """
    n1, n2 = spec.shape
    tasks = [(spec, i, j) for i in range(n1) for j in range(n2)]
    if workers is None:
        workers = os.cpu_count() or 1

    grids = {kind: np.full((n1, n2), np.nan) for kind in ObservableKind}
    status = np.full((n1, n2), STATUS_OK, dtype=object)

    def store(result, done):
        i, j, values, st = result
        for kind in ObservableKind:
            grids[kind][i, j] = values[kind]
        status[i, j] = st
        if done % max(1, len(tasks) // 20) == 0 or done == len(tasks):
            log.info("sweep progress: %d/%d points", done, len(tasks))

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for done, result in enumerate(pool.map(_evaluate_index, tasks), start=1):
                store(result, done)
    else:
        for done, task in enumerate(tasks, start=1):
            store(_evaluate_index(task), done)

    requested = {kind.value: grids[kind] for kind in spec.observables}
    provenance = {
        "spec": _spec_to_dict(spec),
        "code_version": _code_version(),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "notes": list(provenance_notes or []),
        "failed_points": [
            [int(i), int(j)]
            for i in range(n1) for j in range(n2)
            if status[i, j] == STATUS_FAILED
        ],
    }
    return GridResult(
        axis1_name=spec.axis1.parameter,
        axis1_unit=spec.axis1.unit,
        axis1_values=spec.axis1.values(),
        axis2_name=spec.axis2.parameter if spec.axis2 else None,
        axis2_unit=spec.axis2.unit if spec.axis2 else None,
        axis2_values=spec.axis2.values() if spec.axis2 else None,
        values=requested,
        status=status,
        provenance=provenance,
    )


def coupling_sweep(spec: SweepSpec, g_multipliers: list[float],
                   workers: int | None = None) -> list[GridResult]:
    """Repeat the sweep once per coupling strength multiplier, in input order."""
    if any(m <= 0 for m in g_multipliers):
        raise ConfigError("coupling multipliers must be positive")
    g0 = spec.base.coupling_g
    results = []
    for mult in g_multipliers:
        g = mult * g0
        notes = [f"coupling_g = {g:.6g} GHz ({mult} x g0)"]
        if g / spec.base.resonator_freq > RWA_CAVEAT_RATIO:
            notes.append(
                "RWA caveat: coupling approaches the ultrastrong regime; "
                "neglected counter-rotating terms may matter"
            )
        scaled = replace(spec, base=spec.base.with_(coupling_g=g))
        results.append(run_sweep(scaled, workers=workers, provenance_notes=notes))
    return results


def _spec_to_dict(spec: SweepSpec) -> dict:
    d = asdict(spec)
    d["observables"] = [k.value for k in spec.observables]
    return d


def _code_version() -> str:
    from . import __version__

    return __version__
