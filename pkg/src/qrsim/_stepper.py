"""Adaptive Dormand-Prince RK45 steppers for vectorized Lindblad dynamics.

Two implementations share the same tableau: a generic Python one that accepts
an arbitrary right-hand side (used for oracle checks and constant-Hamiltonian
propagation) and a numba kernel specialized to the dressed-model Liouvillian
L(t) = Lc + dwq(t) * Lz + geff(t) * Lg, which is the hot path for driven
interferogram sweeps.

Both re-Hermitize the density matrix and renormalize its trace after every
accepted step.  Status codes: 0 ok, 1 step-size underflow, 2 trace drift
beyond 1e-5 before renormalization.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.zeros((7, 7))
_A[1, 0] = 1 / 5
_A[2, :2] = (3 / 40, 9 / 40)
_A[3, :3] = (44 / 45, -56 / 15, 32 / 9)
_A[4, :4] = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_A[5, :5] = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_A[6, :6] = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_B5 = _A[6, :7].copy()  # FSAL: 5th-order weights equal the last stage row
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)

MIN_STEP = 1e-9  # ns; below this the problem is declared stiff

STATUS_OK = 0
STATUS_STIFF = 1
STATUS_DRIFT = 2

TRACE_DRIFT_LIMIT = 1e-5


def hermitize_vec(y: np.ndarray, d: int) -> float:
    """In-place (rho + rho^dag)/2 and trace renormalization on column-major vec.

    Returns the trace drift |tr(rho) - 1| before renormalization.
    """
    for i in range(d):
        for j in range(i + 1, d):
            p = j * d + i
            q = i * d + j
            v = 0.5 * (y[p] + np.conj(y[q]))
            y[p] = v
            y[q] = np.conj(v)
    tr = 0.0
    for i in range(d):
        k = i * (d + 1)
        y[k] = y[k].real
        tr += y[k].real
    drift = abs(tr - 1.0)
    if tr != 0.0:
        y /= tr
    return drift


def rk45_generic(
    rhs,
    y0: np.ndarray,
    t0: float,
    t_end: float,
    max_step: float,
    atol: float = 1e-9,
    rtol: float = 1e-9,
    sample_times: np.ndarray | None = None,
    correct=None,
):
    """Integrate y' = rhs(t, y) adaptively, landing exactly on sample times.

    ``correct``, when given, is applied in place to y after every accepted
    step and returns a drift measure.  Returns (y_end, samples, status,
    max_drift), where samples is the list of state copies at sample_times.
    """
    y = np.array(y0, dtype=complex)
    t = t0
    if sample_times is None:
        sample_times = np.empty(0)
    samples = []
    i_sample = 0
    while i_sample < len(sample_times) and sample_times[i_sample] <= t0 + 1e-14:
        samples.append(y.copy())
        i_sample += 1

    h = min(max_step, (t_end - t0) / 10.0)
    k1 = rhs(t, y)
    max_drift = 0.0
    status = STATUS_OK
    k = [k1] + [None] * 6

    while t < t_end - 1e-13:
        target = t_end if i_sample >= len(sample_times) else sample_times[i_sample]
        if target - t < MIN_STEP:
            # Within roundoff of the target; record without stepping.
            t = target
            if i_sample < len(sample_times):
                samples.append(y.copy())
                i_sample += 1
            continue
        h = min(h, max_step, target - t)
        if h < MIN_STEP:
            return y, samples, STATUS_STIFF, max_drift
        for s in range(1, 7):
            ys = y.copy()
            for j in range(s):
                ys += h * _A[s, j] * k[j]
            k[s] = rhs(t + _C[s] * h, ys)
        y_new = y.copy()
        for j in range(7):
            if _B5[j] != 0.0:
                y_new += h * _B5[j] * k[j]
        err = np.zeros_like(y)
        for j in range(7):
            if _E[j] != 0.0:
                err += h * _E[j] * k[j]
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = math.sqrt(float(np.mean(np.abs(err / scale) ** 2)))
        if err_norm <= 1.0:
            t = t + h
            y = y_new
            if correct is not None:
                drift = correct(y)
                max_drift = max(max_drift, drift)
                if drift > TRACE_DRIFT_LIMIT:
                    return y, samples, STATUS_DRIFT, max_drift
                k[0] = rhs(t, y)
            else:
                k[0] = k[6]
            if i_sample < len(sample_times) and t >= sample_times[i_sample] - 1e-12:
                samples.append(y.copy())
                i_sample += 1
        factor = 0.9 * (err_norm ** -0.2 if err_norm > 0 else 5.0)
        h = h * min(5.0, max(0.2, factor))
    return y, samples, status, max_drift


@njit(cache=True)
def _dressed_rhs(t, y, lc, lz, lg, delta, eps0, a_d, f_d, f_p, g):
    eps = eps0 + a_d * math.sin(2.0 * math.pi * f_d * t)
    fq = math.sqrt(delta * delta + eps * eps)
    dwq = 2.0 * math.pi * (fq - f_p)
    geff = 2.0 * math.pi * g * delta / fq
    return lc @ y + dwq * (lz @ y) + geff * (lg @ y)


@njit(cache=True)
def _hermitize_nb(y, d):
    for i in range(d):
        for j in range(i + 1, d):
            p = j * d + i
            q = i * d + j
            v = 0.5 * (y[p] + np.conj(y[q]))
            y[p] = v
            y[q] = np.conj(v)
    tr = 0.0
    for i in range(d):
        k = i * (d + 1)
        y[k] = complex(y[k].real, 0.0)
        tr += y[k].real
    drift = abs(tr - 1.0)
    if tr != 0.0:
        for i in range(y.shape[0]):
            y[i] = y[i] / tr
    return drift


@njit(cache=True)
def rk45_dressed(
    lc,
    lz,
    lg,
    delta,
    eps0,
    a_d,
    f_d,
    f_p,
    g,
    y0,
    t0,
    t_end,
    max_step,
    atol,
    rtol,
    sample_times,
    w_obs,
):
    """Numba RK45 for the dressed-model Liouvillian with per-step Hermitization.

    w_obs is an (n_obs, d^2) matrix of observable functionals, tr(O rho) =
    w_obs @ vec(rho); returns (y_end, samples[n_samples, n_obs], status,
    max_drift).
    """
    n = y0.shape[0]
    d = int(math.sqrt(n))
    y = y0.copy()
    t = t0
    n_samp = sample_times.shape[0]
    samples = np.zeros((n_samp, w_obs.shape[0]), dtype=np.complex128)
    i_sample = 0
    while i_sample < n_samp and sample_times[i_sample] <= t0 + 1e-14:
        samples[i_sample] = w_obs @ y
        i_sample += 1

    a = np.zeros((7, 7))
    a[1, 0] = 1 / 5
    a[2, 0] = 3 / 40
    a[2, 1] = 9 / 40
    a[3, 0] = 44 / 45
    a[3, 1] = -56 / 15
    a[3, 2] = 32 / 9
    a[4, 0] = 19372 / 6561
    a[4, 1] = -25360 / 2187
    a[4, 2] = 64448 / 6561
    a[4, 3] = -212 / 729
    a[5, 0] = 9017 / 3168
    a[5, 1] = -355 / 33
    a[5, 2] = 46732 / 5247
    a[5, 3] = 49 / 176
    a[5, 4] = -5103 / 18656
    a[6, 0] = 35 / 384
    a[6, 1] = 0.0
    a[6, 2] = 500 / 1113
    a[6, 3] = 125 / 192
    a[6, 4] = -2187 / 6784
    a[6, 5] = 11 / 84
    c = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
    e = np.array(
        [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
    )

    ks = np.zeros((7, n), dtype=np.complex128)
    ks[0] = _dressed_rhs(t, y, lc, lz, lg, delta, eps0, a_d, f_d, f_p, g)
    h = min(max_step, (t_end - t0) / 10.0)
    max_drift = 0.0

    while t < t_end - 1e-13:
        if i_sample < n_samp:
            target = sample_times[i_sample]
        else:
            target = t_end
        if target - t < MIN_STEP:
            # Within roundoff of the target; record without stepping.
            t = target
            if i_sample < n_samp:
                samples[i_sample] = w_obs @ y
                i_sample += 1
            continue
        if h > max_step:
            h = max_step
        if h > target - t:
            h = target - t
        if h < MIN_STEP:
            return y, samples, STATUS_STIFF, max_drift
        for s in range(1, 7):
            ys = y.copy()
            for j in range(s):
                if a[s, j] != 0.0:
                    ys += (h * a[s, j]) * ks[j]
            ks[s] = _dressed_rhs(
                t + c[s] * h, ys, lc, lz, lg, delta, eps0, a_d, f_d, f_p, g
            )
        y_new = y.copy()
        for j in range(7):
            if a[6, j] != 0.0:
                y_new += (h * a[6, j]) * ks[j]
        err_norm_sq = 0.0
        for i in range(n):
            errv = 0.0j
            for j in range(7):
                if e[j] != 0.0:
                    errv += (h * e[j]) * ks[j][i]
            mag_y = abs(y[i])
            mag_new = abs(y_new[i])
            scale = atol + rtol * (mag_y if mag_y > mag_new else mag_new)
            r = abs(errv) / scale
            err_norm_sq += r * r
        err_norm = math.sqrt(err_norm_sq / n)
        if err_norm <= 1.0:
            t = t + h
            y = y_new
            drift = _hermitize_nb(y, d)
            if drift > max_drift:
                max_drift = drift
            if drift > TRACE_DRIFT_LIMIT:
                return y, samples, STATUS_DRIFT, max_drift
            ks[0] = _dressed_rhs(t, y, lc, lz, lg, delta, eps0, a_d, f_d, f_p, g)
            if i_sample < n_samp and t >= sample_times[i_sample] - 1e-12:
                samples[i_sample] = w_obs @ y
                i_sample += 1
        if err_norm > 0.0:
            factor = 0.9 * err_norm ** -0.2
        else:
            factor = 5.0
        if factor > 5.0:
            factor = 5.0
        if factor < 0.2:
            factor = 0.2
        h = h * factor
    return y, samples, STATUS_OK, max_drift
