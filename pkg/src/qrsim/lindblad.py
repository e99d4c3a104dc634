"""Liouvillian construction, time propagation, steady states, and drive-period averages.

The density matrix lives in the instantaneous-eigenbasis/dressed frame, the
same frame in which the relaxation, dephasing, and photon-loss Lindblad
operators are defined.  Vectorization is column-major throughout:
vec(A X B) = kron(B.T, A) vec(X).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import linalg, model, _stepper
from .errors import ContractViolationError, InvariantDriftError, StiffnessError

log = logging.getLogger(__name__)

ATOL = 1e-9
RTOL = 1e-9
SAMPLES_PER_PERIOD = 64
CONVERGENCE_REL = 1e-4


@dataclass
class DensityMatrix:
    """Composite qubit x resonator state in the dressed instantaneous eigenbasis."""

    matrix: np.ndarray
    basis: str = "instant-eigenbasis-dressed"

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, herm_tol: float = 1e-9, trace_tol: float = 1e-9,
                 eig_tol: float = -1e-7) -> "DensityMatrix":
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > herm_tol:
            raise ContractViolationError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > trace_tol:
            raise ContractViolationError("density matrix trace differs from 1")
        if np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))) < eig_tol:
            raise ContractViolationError("density matrix has a negative eigenvalue")
        return self


def ground_state(fock_levels: int) -> DensityMatrix:
    """Qubit ground state (lower sigma_z eigenstate) with resonator vacuum."""
    d = 2 * fock_levels
    rho = np.zeros((d, d), dtype=complex)
    rho[fock_levels, fock_levels] = 1.0  # qubit index 1, photon number 0
    return DensityMatrix(rho)


def vec(rho: np.ndarray) -> np.ndarray:
    return rho.flatten(order="F")


def unvec(y: np.ndarray, d: int) -> np.ndarray:
    return y.reshape(d, d, order="F")


def build_dissipators(p: model.SystemParams) -> list[np.ndarray]:
    """Lindblad operators on the composite space, pre-scaled by sqrt(angular rate)."""
    iq = linalg.identity(2)
    ir = linalg.identity(p.fock_levels)
    return [
        math.sqrt(model.TWO_PI * p.gamma1) * linalg.kron(linalg.pauli("minus"), ir),
        math.sqrt(model.TWO_PI * p.gamma2) * linalg.kron(linalg.pauli("z"), ir),
        math.sqrt(model.TWO_PI * p.kappa) * linalg.kron(iq, linalg.fock_annihilation(p.fock_levels)),
    ]


def dissipator_superop(dissipators: list[np.ndarray], dim: int) -> np.ndarray:
    """Sum of vectorized dissipators: L_bar x L - (1/2){I x L^dag L + (L^dag L)^T x I}."""
    ident = np.eye(dim, dtype=complex)
    out = np.zeros((dim * dim, dim * dim), dtype=complex)
    for op in dissipators:
        ldl = op.conj().T @ op
        out += np.kron(op.conj(), op)
        out -= 0.5 * np.kron(ident, ldl)
        out -= 0.5 * np.kron(ldl.T, ident)
    return out


def hamiltonian_superop(h: np.ndarray) -> np.ndarray:
    """Coherent part -i (I x H - H^T x I) under column-major vectorization."""
    ident = np.eye(h.shape[0], dtype=complex)
    return -1j * (np.kron(ident, h) - np.kron(h.T, ident))


def build_liouvillian(h: np.ndarray, dissipators: list[np.ndarray]) -> np.ndarray:
    """Full d^2 x d^2 Liouvillian acting on the column-vectorized density matrix."""
    if not linalg.is_hermitian(h, 1e-10):
        raise ContractViolationError("Hamiltonian passed to the Liouvillian is not Hermitian")
    return hamiltonian_superop(h) + dissipator_superop(dissipators, h.shape[0])


def steady_state(h: np.ndarray, dissipators: list[np.ndarray]) -> DensityMatrix:
    """Null vector of the Liouvillian under the trace constraint tr(rho) = 1."""
    d = h.shape[0]
    superop = build_liouvillian(h, dissipators)
    # Replace the first row with the trace functional; rhs selects trace = 1.
    a = superop.copy()
    a[0, :] = 0.0
    a[0, ::d + 1] = 1.0
    b = np.zeros(d * d, dtype=complex)
    b[0] = 1.0
    rho = unvec(linalg.solve_linear(a, b), d)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return DensityMatrix(rho).validate()


def observable_functionals(ops: list[np.ndarray]) -> np.ndarray:
    """Row functionals w such that tr(O rho) = w . vec(rho).

    With column-major vec, entry i*d + j of vec(rho) is rho[j, i], so the
    functional for O is simply O flattened row-major.
    """
    return np.array([np.asarray(op, dtype=complex).reshape(-1) for op in ops])


@dataclass
class PropagationResult:
    times: np.ndarray
    states: list[DensityMatrix]
    max_trace_drift: float


def _dressed_superop_pieces(p: model.SystemParams):
    h0, hz, hg = model.dressed_rwa_pieces(p)
    diss = dissipator_superop(build_dissipators(p), p.dim)
    lc = hamiltonian_superop(h0) + diss
    lz = hamiltonian_superop(hz)
    lg = hamiltonian_superop(hg)
    return lc, lz, lg


def _run_dressed(p: model.SystemParams, y0: np.ndarray, t0: float, t_end: float,
                 max_step: float, sample_times: np.ndarray, w_obs: np.ndarray):
    lc, lz, lg = _dressed_superop_pieces(p)
    y, samples, status, drift = _stepper.rk45_dressed(
        lc, lz, lg,
        p.delta, p.epsilon0, p.drive_amp, p.drive_freq, p.probe_freq, p.coupling_g,
        np.ascontiguousarray(y0, dtype=complex), t0, t_end, max_step, ATOL, RTOL,
        np.ascontiguousarray(sample_times, dtype=float),
        np.ascontiguousarray(w_obs, dtype=complex),
    )
    if status == _stepper.STATUS_STIFF:
        raise StiffnessError(f"step size underflowed below {_stepper.MIN_STEP} ns")
    if status == _stepper.STATUS_DRIFT:
        raise InvariantDriftError(f"trace drifted by {drift:.3e} before renormalization")
    if drift > 1e-7:
        log.warning("trace correction reached %.3e during propagation", drift)
    return y, samples, drift


def _max_step(p: model.SystemParams, dt_max: float) -> float:
    if p.drive_amp > 0 and p.drive_freq > 0:
        return min(dt_max, 1.0 / (50.0 * p.drive_freq))
    return dt_max


def propagate(rho0: DensityMatrix, p: model.SystemParams, t_final: float,
              dt_max: float, sample_times=None) -> PropagationResult:
    """Integrate the dressed-model Lindblad equation from rho0 to t_final.

    Samples the full density matrix at the requested times (default: t_final
    only).  Adaptive RK45 with local tolerance 1e-9; the state is
    re-Hermitized and trace-renormalized after every accepted step.
    """
    if t_final <= 0:
        raise ContractViolationError("t_final must be positive")
    rho0.validate()
    d = rho0.dim
    if sample_times is None:
        sample_times = np.array([t_final])
    sample_times = np.asarray(sample_times, dtype=float)
    w_obs = np.eye(d * d, dtype=complex)  # identity functionals: sample full states
    _, samples, drift = _run_dressed(
        p, vec(rho0.matrix), 0.0, t_final, _max_step(p, dt_max), sample_times, w_obs
    )
    states = [DensityMatrix(unvec(s, d)) for s in samples]
    return PropagationResult(sample_times, states, drift)


def propagate_generic(h, dissipators: list[np.ndarray], rho0: DensityMatrix,
                      t_final: float, dt_max: float, sample_times=None,
                      correct: bool = True) -> PropagationResult:
    """Reference-path propagation with an arbitrary Hamiltonian.

    ``h`` is a constant matrix or a callable t -> matrix.  Used by the oracle
    suite and tests; the production dressed-model path is ``propagate``.
    """
    d = rho0.dim
    diss_s = dissipator_superop(dissipators, d)
    if callable(h):
        def rhs(t, y):
            return (hamiltonian_superop(h(t)) + diss_s) @ y
    else:
        lconst = hamiltonian_superop(h) + diss_s

        def rhs(t, y):
            return lconst @ y

    if sample_times is None:
        sample_times = np.array([t_final])
    sample_times = np.asarray(sample_times, dtype=float)
    corrector = (lambda y: _stepper.hermitize_vec(y, d)) if correct else None
    y, samples, status, drift = _stepper.rk45_generic(
        rhs, vec(rho0.matrix), 0.0, t_final, dt_max, ATOL, RTOL,
        sample_times, corrector,
    )
    if status == _stepper.STATUS_STIFF:
        raise StiffnessError(f"step size underflowed below {_stepper.MIN_STEP} ns")
    if status == _stepper.STATUS_DRIFT:
        raise InvariantDriftError(f"trace drifted by {drift:.3e} before renormalization")
    states = [DensityMatrix(unvec(s, d)) for s in samples]
    return PropagationResult(sample_times, states, drift)


def periodic_samples(p: model.SystemParams, n_transient_periods: int,
                     n_average_periods: int, observables: list[np.ndarray],
                     dt_max: float = 1.0) -> np.ndarray:
    """Expectation samples over whole drive periods in the periodic regime.

    Starts from the undriven steady state, discards n_transient_periods drive
    periods, then samples tr(O rho) at SAMPLES_PER_PERIOD uniform points per
    period for n_average_periods periods.  Returns a complex array of shape
    (n_average_periods * SAMPLES_PER_PERIOD, len(observables)).
    """
    if p.drive_freq <= 0:
        raise ContractViolationError("periodic averaging needs drive_freq > 0")
    if n_transient_periods < 1 or n_average_periods < 1:
        raise ContractViolationError("period counts must be >= 1")

    rho_ss = steady_state(
        model.build_dressed_rwa_hamiltonian(p.with_(drive_amp=0.0), 0.0),
        build_dissipators(p),
    )
    period = 1.0 / p.drive_freq
    t_start = n_transient_periods * period
    n_samp = SAMPLES_PER_PERIOD * n_average_periods
    sample_times = t_start + period / SAMPLES_PER_PERIOD * np.arange(n_samp)
    t_end = t_start + n_average_periods * period
    w_obs = observable_functionals(observables)
    _, samples, _ = _run_dressed(
        p, vec(rho_ss.matrix), 0.0, t_end, _max_step(p, dt_max), sample_times, w_obs
    )
    return samples


def period_mean_converged(scalars: np.ndarray, n_average_periods: int) -> bool:
    """True when the last two per-period means agree to CONVERGENCE_REL relative."""
    if n_average_periods < 2:
        return True
    per_period = scalars.reshape(n_average_periods, SAMPLES_PER_PERIOD).mean(axis=1)
    last, prev = per_period[-1], per_period[-2]
    return abs(last - prev) <= CONVERGENCE_REL * max(abs(last), 1e-12)


def periodic_averages(p: model.SystemParams, n_transient_periods: int,
                      n_average_periods: int, observables: list[np.ndarray],
                      dt_max: float = 1.0) -> tuple[np.ndarray, bool]:
    """Drive-period averages of (Hermitian) observable expectations.

    Returns (averages, converged); converged is False when any observable's
    last two per-period means differ by more than 1e-4 relative.
    """
    samples = periodic_samples(p, n_transient_periods, n_average_periods,
                               observables, dt_max)
    values = samples.real
    averages = values.mean(axis=0)
    converged = all(
        period_mean_converged(values[:, k], n_average_periods)
        for k in range(values.shape[1])
    )
    return averages, converged


def periodic_average(p: model.SystemParams, n_transient_periods: int,
                     n_average_periods: int, observable: np.ndarray,
                     dt_max: float = 1.0) -> float:
    """Single-observable wrapper around :func:`periodic_averages`."""
    averages, converged = periodic_averages(
        p, n_transient_periods, n_average_periods, [observable], dt_max
    )
    if not converged:
        log.warning("period averages not converged to %.0e relative", CONVERGENCE_REL)
    return float(averages[0])


def default_transient_periods(p: model.SystemParams) -> int:
    """ceil(5 / (2 pi Gamma_1 T_D)): five qubit-relaxation times in drive periods."""
    t1 = 1.0 / (model.TWO_PI * p.gamma1)
    return max(1, math.ceil(5.0 * t1 * p.drive_freq))
