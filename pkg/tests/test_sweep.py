"""Unit tests for the sweep engine: axes, parameter mapping, grids, statuses."""

import numpy as np
import pytest

from qrsim import model, sweep
from qrsim.errors import ConfigError
from qrsim.observables import ObservableKind


def static_spec(**kwargs):
    defaults = dict(
        base=model.SystemParams(drive_amp=0.0),
        axis1=sweep.AxisSpec("probe_freq", 7.67, 7.69, 5),
        observables=(ObservableKind.TRANSMISSION,),
        mode="static_steady_state",
    )
    defaults.update(kwargs)
    return sweep.SweepSpec(**defaults)


def test_axis_values_linear_and_log():
    lin = sweep.AxisSpec("probe_freq", 7.0, 8.0, 5)
    assert np.allclose(lin.values(), np.linspace(7.0, 8.0, 5))
    logax = sweep.AxisSpec("probe_amp", 0.001, 0.1, 3, scale="log")
    assert np.allclose(logax.values(), [0.001, 0.01, 0.1])
    assert lin.unit == "GHz"


def test_axis_validation():
    with pytest.raises(ConfigError):
        sweep.AxisSpec("temperature", 0.0, 1.0, 5)
    with pytest.raises(ConfigError):
        sweep.AxisSpec("probe_freq", 7.0, 8.0, 1)
    with pytest.raises(ConfigError):
        sweep.AxisSpec("probe_freq", 7.0, 7.0, 5)
    with pytest.raises(ConfigError):
        sweep.AxisSpec("probe_amp", -0.1, 1.0, 5, scale="log")
    with pytest.raises(ConfigError):
        sweep.AxisSpec("probe_freq", 7.0, 8.0, 5, scale="cubic")


def test_spec_validation():
    with pytest.raises(ConfigError):
        static_spec(mode="quench")
    with pytest.raises(ConfigError):
        static_spec(observables=())
    # static mode cannot sweep or set a drive
    with pytest.raises(ConfigError):
        static_spec(base=model.SystemParams(drive_amp=1.0))
    with pytest.raises(ConfigError):
        static_spec(axis2=sweep.AxisSpec("drive_amp", 0.0, 4.0, 3))
    with pytest.raises(ConfigError):
        static_spec(axis2=sweep.AxisSpec("probe_freq", 7.1, 7.2, 3))


def test_params_at_maps_flux_to_bias():
    spec = static_spec(
        axis1=sweep.AxisSpec("flux_ratio", 0.49, 0.51, 3),
        axis2=sweep.AxisSpec("probe_freq", 7.67, 7.69, 3),
        calibration=model.FluxCalibration(lever_ghz_per_flux=400.0),
    )
    p = spec.params_at(0.51, 7.68)
    assert np.isclose(p.epsilon0, 4.0)
    assert np.isclose(p.probe_freq, 7.68)


def test_run_sweep_static_grid():
    spec = static_spec(
        axis2=sweep.AxisSpec("epsilon0", 0.0, 10.0, 3),
        observables=(ObservableKind.TRANSMISSION, ObservableKind.PHOTON_NUMBER),
    )
    result = sweep.run_sweep(spec, workers=1)
    assert result.shape == (5, 3)
    assert set(result.values) == {"transmission", "photon_number"}
    assert np.all(np.isfinite(result.values["transmission"]))
    assert np.all(result.status == sweep.STATUS_OK)
    assert result.axis1_name == "probe_freq"
    assert result.axis2_unit == "GHz"
    assert result.provenance["failed_points"] == []
    assert result.provenance["spec"]["mode"] == "static_steady_state"


def test_run_sweep_1d_grid_has_single_column():
    result = sweep.run_sweep(static_spec(), workers=1)
    assert result.shape == (5, 1)
    assert result.axis2_values is None


def test_failed_points_are_nan_not_fatal():
    # no dissipation at all makes the steady-state system singular
    base = model.SystemParams(drive_amp=0.0, gamma1=0.0, gamma2=0.0, kappa=0.0, probe_amp=0.0)
    result = sweep.run_sweep(static_spec(base=base), workers=1)
    assert np.all(result.status == sweep.STATUS_FAILED)
    assert np.all(np.isnan(result.values["transmission"]))
    assert len(result.provenance["failed_points"]) == 5


def test_truncation_warning_status():
    # hard probe overfills the three-level photon ladder
    base = model.SystemParams(drive_amp=0.0, probe_amp=0.7, epsilon0=0.0)
    spec = static_spec(base=base, axis1=sweep.AxisSpec("probe_freq", 7.676, 7.678, 2))
    result = sweep.run_sweep(spec, workers=1)
    assert np.all(result.status == sweep.STATUS_TRUNCATION)


def test_coupling_sweep_scales_g_and_notes_rwa():
    spec = static_spec(axis1=sweep.AxisSpec("probe_freq", 7.67, 7.69, 2))
    results = sweep.coupling_sweep(spec, [0.5, 8.0], workers=1)
    assert len(results) == 2
    note0 = " ".join(results[0].provenance["notes"])
    note1 = " ".join(results[1].provenance["notes"])
    assert "0.5 x g0" in note0
    assert "RWA caveat" not in note0
    assert "RWA caveat" in note1
    with pytest.raises(ConfigError):
        sweep.coupling_sweep(spec, [0.0, 1.0])


def test_driven_sweep_smoke():
    spec = sweep.SweepSpec(
        base=model.SystemParams(probe_freq=7.6767, drive_freq=0.5),
        axis1=sweep.AxisSpec("epsilon0", 3.8, 4.0, 2),
        axis2=sweep.AxisSpec("drive_amp", 0.0, 1.0, 2),
        observables=(ObservableKind.TRANSMISSION, ObservableKind.QUBIT_POPULATION),
        mode="driven_periodic_average",
        n_transient_periods=50,
        n_average_periods=4,
    )
    result = sweep.run_sweep(spec, workers=1)
    assert result.shape == (2, 2)
    assert np.all(np.isfinite(result.values["transmission"]))
    assert set(result.status.ravel()) <= {
        sweep.STATUS_OK, sweep.STATUS_NON_CONVERGED, sweep.STATUS_TRUNCATION
    }
