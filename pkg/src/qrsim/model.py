"""Physical parameterization and Hamiltonian construction.

Unit convention: every user-facing frequency, amplitude, and rate is a
*linear* frequency in GHz (the "X/2pi" convention of the device parameter
table); time is in ns.  Hamiltonian matrix elements are angular frequencies in
rad/ns with hbar = 1, and the 2*pi conversion happens only inside the builders
in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg
from .errors import ContractViolationError, DispersiveRegimeError

TWO_PI = 2.0 * math.pi

# Device parameters used for all simulations unless overridden.
TABLE1 = dict(
    delta=5.41,            # minimum qubit frequency, GHz
    epsilon0=0.0,          # static bias, GHz
    resonator_freq=7.6767, # third-mode resonance probed through the feedline, GHz
    coupling_g=0.177,      # qubit-resonator coupling, GHz
    probe_amp=0.001,       # probe amplitude (P_in = -40 dBm), GHz
    probe_freq=7.6767,     # probe tone, GHz
    drive_amp=0.0,         # flux-drive amplitude, GHz
    drive_freq=0.5,        # flux-drive tone, GHz
    gamma1=0.003,          # qubit relaxation, GHz
    gamma2=0.0015,         # qubit dephasing, GHz
    kappa=0.00471,         # resonator photon loss, GHz
    fock_levels=3,         # photon numbers 0..N with N = 2
)

# Probe-power anchor: -40 dBm corresponds to A_P = 1 MHz.
_POWER_ANCHOR_DBM = -40.0
_POWER_ANCHOR_AMP = 0.001


@dataclass(frozen=True)
class SystemParams:
    """All physical constants plus drive/probe settings for one simulation point."""

    delta: float = TABLE1["delta"]
    epsilon0: float = TABLE1["epsilon0"]
    resonator_freq: float = TABLE1["resonator_freq"]
    coupling_g: float = TABLE1["coupling_g"]
    probe_amp: float = TABLE1["probe_amp"]
    probe_freq: float = TABLE1["probe_freq"]
    drive_amp: float = TABLE1["drive_amp"]
    drive_freq: float = TABLE1["drive_freq"]
    gamma1: float = TABLE1["gamma1"]
    gamma2: float = TABLE1["gamma2"]
    kappa: float = TABLE1["kappa"]
    fock_levels: int = TABLE1["fock_levels"]

    def __post_init__(self):
        if self.delta <= 0:
            raise ContractViolationError("delta must be positive")
        if self.resonator_freq <= 0:
            raise ContractViolationError("resonator_freq must be positive")
        if min(self.gamma1, self.gamma2, self.kappa) < 0:
            raise ContractViolationError("decay rates must be non-negative")
        if self.probe_amp < 0 or self.drive_amp < 0:
            raise ContractViolationError("amplitudes must be non-negative")
        if self.fock_levels < 2:
            raise ContractViolationError("fock_levels must be >= 2")

    @property
    def dim(self) -> int:
        """Composite qubit x resonator Hilbert-space dimension."""
        return 2 * self.fock_levels

    def with_(self, **kwargs) -> "SystemParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class FluxCalibration:
    """Linear mappings from applied flux / drive voltage to bias and drive amplitude.

    The persistent current is not known independently, so the flux lever arm is
    a free calibration constant.  The shipped configs use 400 GHz per unit
    flux ratio, which puts the qubit-resonator crossing inside a +-0.03 window
    around the symmetry point.
    """

    lever_ghz_per_flux: float = 400.0
    drive_ghz_per_vrms: float = 1.0

    def __post_init__(self):
        if self.lever_ghz_per_flux <= 0 or self.drive_ghz_per_vrms <= 0:
            raise ContractViolationError("calibration constants must be positive")


def epsilon_from_flux(flux_ratio: float, cal: FluxCalibration) -> float:
    """Static bias (GHz) from the DC flux ratio Phi_DC/Phi_0; zero at 0.5."""
    return cal.lever_ghz_per_flux * (flux_ratio - 0.5)


def qubit_frequency(delta: float, epsilon: float) -> float:
    """Instantaneous qubit frequency sqrt(delta^2 + epsilon^2), GHz."""
    if delta <= 0:
        raise ContractViolationError("delta must be positive")
    return math.hypot(delta, epsilon)


def epsilon_of_time(epsilon0: float, drive_amp: float, drive_freq: float, t: float) -> float:
    """Time-dependent bias under the sinusoidal flux drive, GHz."""
    return epsilon0 + drive_amp * math.sin(TWO_PI * drive_freq * t)


def effective_coupling(g: float, delta: float, epsilon: float) -> float:
    """Eigenbasis qubit-resonator coupling g * delta / omega_Q, GHz."""
    return g * delta / qubit_frequency(delta, epsilon)


def transfer_matrix(delta: float, epsilon: float) -> np.ndarray:
    """Static diabatic -> eigenbasis transfer matrix; real, symmetric, involutive."""
    wq = qubit_frequency(delta, epsilon)
    gp = math.sqrt(0.5 * (1.0 + epsilon / wq))
    gm = math.sqrt(0.5 * (1.0 - epsilon / wq))
    return np.array([[gp, gm], [gm, -gp]], dtype=complex)


def probe_amp_from_dbm(power_dbm: float) -> float:
    """Probe amplitude (GHz) from input power, linear in sqrt(power)."""
    return _POWER_ANCHOR_AMP * 10.0 ** ((power_dbm - _POWER_ANCHOR_DBM) / 20.0)


def _composite_ops(fock_levels: int):
    sz = linalg.kron(linalg.pauli("z"), linalg.identity(fock_levels))
    a_full = linalg.kron(linalg.identity(2), linalg.fock_annihilation(fock_levels))
    return sz, a_full


def build_lab_hamiltonian(p: SystemParams, t: float) -> np.ndarray:
    """Diabatic-basis Hamiltonian H_Q + H_R + H_C + H_P(t) + H_D(t), rad/ns."""
    n = p.fock_levels
    iq = linalg.identity(2)
    ir = linalg.identity(n)
    sx = linalg.kron(linalg.pauli("x"), ir)
    sz, a_full = _composite_ops(n)
    ad_full = linalg.dagger(a_full)
    number = ad_full @ a_full

    h = -(TWO_PI * p.delta / 2.0) * sx
    h += -(TWO_PI * p.epsilon0 / 2.0) * sz
    h += TWO_PI * p.resonator_freq * (number + 0.5 * linalg.kron(iq, ir))
    h += -TWO_PI * p.coupling_g * (a_full + ad_full) @ sz
    wp = TWO_PI * p.probe_freq
    h += TWO_PI * p.probe_amp * (
        a_full * np.exp(1j * wp * t) + ad_full * np.exp(-1j * wp * t)
    )
    h += -(TWO_PI * p.drive_amp / 2.0) * math.sin(TWO_PI * p.drive_freq * t) * sz
    return h


def dressed_rwa_pieces(p: SystemParams):
    """Constant part and time-dependent generators of the dressed RWA Hamiltonian.

    H(t) = H0 + dwq(t) * Hz + geff(t) * Hg, where dwq and geff (rad/ns) follow
    the instantaneous bias epsilon(t).  Splitting the Hamiltonian this way lets
    the propagator precompute the three superoperator blocks once per run.
    """
    n = p.fock_levels
    sz, a_full = _composite_ops(n)
    ad_full = linalg.dagger(a_full)
    sp = linalg.kron(linalg.pauli("plus"), linalg.identity(n))
    sm = linalg.kron(linalg.pauli("minus"), linalg.identity(n))

    h0 = TWO_PI * (p.resonator_freq - p.probe_freq) * (ad_full @ a_full)
    h0 += TWO_PI * p.probe_amp * (a_full + ad_full)
    hz = 0.5 * sz
    hg = sp @ a_full + sm @ ad_full
    return h0, hz, hg


def dressed_coefficients(p: SystemParams, t: float) -> tuple[float, float]:
    """(dwq, geff) in rad/ns at time t for the dressed RWA Hamiltonian."""
    eps = epsilon_of_time(p.epsilon0, p.drive_amp, p.drive_freq, t)
    fq = qubit_frequency(p.delta, eps)
    dwq = TWO_PI * (fq - p.probe_freq)
    geff = TWO_PI * p.coupling_g * p.delta / fq
    return dwq, geff


def build_dressed_rwa_hamiltonian(p: SystemParams, t: float) -> np.ndarray:
    """Dressed RWA Hamiltonian in the probe rotating frame, rad/ns."""
    h0, hz, hg = dressed_rwa_pieces(p)
    dwq, geff = dressed_coefficients(p, t)
    return h0 + dwq * hz + geff * hg


def dispersive_shift_estimate(p: SystemParams) -> float:
    """Analytic resonator pull g_eff^2 / (f_Q - f_0) in GHz; validation only."""
    fq = qubit_frequency(p.delta, p.epsilon0)
    geff = effective_coupling(p.coupling_g, p.delta, p.epsilon0)
    detuning = fq - p.resonator_freq
    if abs(detuning) <= geff:
        raise DispersiveRegimeError(
            f"|f_Q - f_0| = {abs(detuning):.4g} GHz is not larger than g_eff = {geff:.4g} GHz"
        )
    return geff**2 / detuning
