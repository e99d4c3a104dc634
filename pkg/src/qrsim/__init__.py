"""Simulator for a strongly driven flux qubit strongly coupled to a truncated resonator."""

__version__ = "0.1.0"

from .model import FluxCalibration, SystemParams  # noqa: F401
from .lindblad import DensityMatrix  # noqa: F401
from .observables import ObservableKind  # noqa: F401
from .sweep import AxisSpec, GridResult, SweepSpec, coupling_sweep, run_sweep  # noqa: F401
