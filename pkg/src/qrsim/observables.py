"""Measured quantities extracted from density matrices.

Transmission follows the |Im<a>| convention: |S21| is proportional to the
absolute imaginary part of the resonator field expectation in the probe
rotating frame, times a single global calibration constant.
"""

from __future__ import annotations

import enum

import numpy as np

from . import linalg
from .lindblad import DensityMatrix


class ObservableKind(enum.Enum):
    TRANSMISSION = "transmission"
    QUBIT_POPULATION = "qubit_population"
    PHOTON_NUMBER = "photon_number"


def annihilation_full(fock_levels: int) -> np.ndarray:
    return linalg.kron(linalg.identity(2), linalg.fock_annihilation(fock_levels))


def number_full(fock_levels: int) -> np.ndarray:
    a = annihilation_full(fock_levels)
    return a.conj().T @ a


def excited_projector_full(fock_levels: int) -> np.ndarray:
    """Projector onto the upper instantaneous qubit eigenstate (fixed diagonal)."""
    up = np.diag([1.0, 0.0]).astype(complex)
    return linalg.kron(up, linalg.identity(fock_levels))


def observable_matrix(kind: ObservableKind, fock_levels: int) -> np.ndarray:
    """Matrix whose expectation drives the extraction rule for ``kind``.

    For transmission the expectation of ``a`` is complex; the scalar
    observable is |Im| of it (see :func:`transmission_from_field`).
    """
    if kind is ObservableKind.TRANSMISSION:
        return annihilation_full(fock_levels)
    if kind is ObservableKind.QUBIT_POPULATION:
        return excited_projector_full(fock_levels)
    return number_full(fock_levels)


def transmission_from_field(a_expect: complex, scale: float = 1.0) -> float:
    """|S21| model value from the field expectation <a>."""
    return scale * abs(a_expect.imag)


def transmission(rho: DensityMatrix, scale: float = 1.0) -> float:
    """scale * |Im tr(a rho)| on the composite space."""
    a = annihilation_full(rho.dim // 2)
    return transmission_from_field(complex(np.trace(a @ rho.matrix)), scale)


def qubit_population(rho: DensityMatrix) -> float:
    """Occupation of the upper instantaneous qubit eigenstate."""
    proj = excited_projector_full(rho.dim // 2)
    return float(np.trace(proj @ rho.matrix).real)


def photon_number(rho: DensityMatrix) -> float:
    """Mean photon number; diagnostic for the Fock truncation."""
    n = number_full(rho.dim // 2)
    return float(np.trace(n @ rho.matrix).real)


def truncation_suspect(mean_photons: float, fock_levels: int) -> bool:
    """Heuristic: occupation crowding the highest kept Fock level."""
    return mean_photons >= 0.5 * (fock_levels - 1)
