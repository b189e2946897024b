"""Low-level numerical kernels, each with a numba twin and a numpy/python twin.

The module resolves the active implementation once at import time.  Setting
``STREAMUNIQ_DISABLE_NUMBA=1`` in the environment before import forces the
fallback path even when numba is installed; the resolved choice is exposed as
``BACKEND`` ("numba" or "numpy").  The ``*_numpy`` names are always available
so the two paths can be compared directly (see ``benchmarks/bench_kernels.py``).
"""

from __future__ import annotations

import os

import numpy as np

ENV_FLAG = "STREAMUNIQ_DISABLE_NUMBA"

# vorticity kind codes shared with the model layer; custom callables never
# enter the compiled path
KIND_CLASSICAL = 0
KIND_OSCILLATORY = 1


def _numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


HAS_NUMBA = False
if not _numba_disabled():
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# scalar vorticity
# ---------------------------------------------------------------------------
# Uniform signature (c1, c2, psi) so the adaptive integrator can take either
# builtin as a plain function argument; c1/c2 are ignored by the classical law.


def f_classical(c1, c2, psi):
    if psi == 0.0:
        return 0.0
    return psi - psi / np.sqrt(np.abs(psi))


def f_oscillatory(c1, c2, psi):
    if psi == 0.0:
        return 0.0
    t = psi * psi
    bracket = 1.0 + c1 - np.sin(c2 * t / (t + 1.0))
    return psi - (psi / np.sqrt(np.abs(psi))) * bracket


# ---------------------------------------------------------------------------
# vorticity on a whole grid
# ---------------------------------------------------------------------------


def vorticity_grid_numpy(kind, c1, c2, psi):
    psi = np.asarray(psi, dtype=np.float64)
    root = np.sqrt(np.abs(psi))
    core = psi / np.where(root > 0.0, root, 1.0)
    if kind == KIND_OSCILLATORY:
        t = psi * psi
        core = core * (1.0 + c1 - np.sin(c2 * t / (t + 1.0)))
    return psi - core


def _vorticity_grid_loop(kind, c1, c2, psi, out):
    for i in range(psi.shape[0]):
        p = psi[i]
        if p == 0.0:
            out[i] = 0.0
        elif kind == KIND_OSCILLATORY:
            t = p * p
            bracket = 1.0 + c1 - np.sin(c2 * t / (t + 1.0))
            out[i] = p - (p / np.sqrt(np.abs(p))) * bracket
        else:
            out[i] = p - p / np.sqrt(np.abs(p))
    return out


# ---------------------------------------------------------------------------
# product-trapezoid prefix moments for the logarithmic Volterra kernel
# ---------------------------------------------------------------------------
# For nodes r_0 < ... < r_{n-1} and samples v_j, the integral
#     K(r_i) = int_{r_0}^{r_i} tau * ln(r_i / tau) * v(tau) dtau
# of the piecewise-linear interpolant of v decomposes as
#     K_i = L_i * A_i - B_i,          L_i = ln(r_i / r_0),
# with prefix sums A_i = int tau*v and B_i = int tau*ln(tau/r_0)*v.  The
# per-subinterval closed forms below keep every intermediate on the scale of
# the local integral, so no O(1) cancellation pollutes the near-r_0 pieces.


def prefix_moments_numpy(nodes, log_weights, values):
    a = nodes[:-1]
    b = nodes[1:]
    h = b - a
    va = values[:-1]
    s = (values[1:] - va) / h
    lab = np.log1p(h / a)
    t1 = 0.5 * b * b * lab - 0.25 * h * (a + b)
    t2 = (b * b * b) * lab / 3.0 - h * (b * b + a * b + a * a) / 9.0 - a * t1
    p1 = va * h * (a + 0.5 * h) + s * h * h * (0.5 * a + h / 3.0)
    p2 = log_weights[:-1] * p1 + va * t1 + s * t2
    n = nodes.shape[0]
    A = np.empty(n, dtype=np.float64)
    B = np.empty(n, dtype=np.float64)
    A[0] = 0.0
    B[0] = 0.0
    np.cumsum(p1, out=A[1:])
    np.cumsum(p2, out=B[1:])
    return A, B


def _prefix_moments_loop(nodes, log_weights, values, A, B):
    acc_a = 0.0
    acc_b = 0.0
    A[0] = 0.0
    B[0] = 0.0
    for j in range(nodes.shape[0] - 1):
        a = nodes[j]
        b = nodes[j + 1]
        h = b - a
        va = values[j]
        s = (values[j + 1] - va) / h
        lab = np.log1p(h / a)
        t1 = 0.5 * b * b * lab - 0.25 * h * (a + b)
        t2 = (b * b * b) * lab / 3.0 - h * (b * b + a * b + a * a) / 9.0 - a * t1
        p1 = va * h * (a + 0.5 * h) + s * h * h * (0.5 * a + h / 3.0)
        p2 = log_weights[j] * p1 + va * t1 + s * t2
        acc_a += p1
        acc_b += p2
        A[j + 1] = acc_a
        B[j + 1] = acc_b
    return A, B


# ---------------------------------------------------------------------------
# embedded 5(4) pair with FSAL, PI step control and quartic dense output
# ---------------------------------------------------------------------------

_A21 = 1.0 / 5.0
_A31 = 3.0 / 40.0
_A32 = 9.0 / 40.0
_A41 = 44.0 / 45.0
_A42 = -56.0 / 15.0
_A43 = 32.0 / 9.0
_A51 = 19372.0 / 6561.0
_A52 = -25360.0 / 2187.0
_A53 = 64448.0 / 6561.0
_A54 = -212.0 / 729.0
_A61 = 9017.0 / 3168.0
_A62 = -355.0 / 33.0
_A63 = 46732.0 / 5247.0
_A64 = 49.0 / 176.0
_A65 = -5103.0 / 18656.0
_B1 = 35.0 / 384.0
_B3 = 500.0 / 1113.0
_B4 = 125.0 / 192.0
_B5 = -2187.0 / 6784.0
_B6 = 11.0 / 84.0
_C2 = 1.0 / 5.0
_C3 = 3.0 / 10.0
_C4 = 4.0 / 5.0
_C5 = 8.0 / 9.0
# difference between the 5th and embedded 4th order weights
_E1 = 71.0 / 57600.0
_E3 = -71.0 / 16695.0
_E4 = 71.0 / 1920.0
_E5 = -17253.0 / 339200.0
_E6 = 22.0 / 525.0
_E7 = -1.0 / 40.0
# quartic dense-output polynomial, w_i(theta) = theta*(P_i1 + theta*(...))
_P11 = 1.0
_P12 = -8048581381.0 / 2820520608.0
_P13 = 8663915743.0 / 2820520608.0
_P14 = -12715105075.0 / 11282082432.0
_P32 = 131558114200.0 / 32700410799.0
_P33 = -68118460800.0 / 10900136933.0
_P34 = 87487479700.0 / 32700410799.0
_P42 = -1754552775.0 / 470086768.0
_P43 = 14199869525.0 / 1410260304.0
_P44 = -10690763975.0 / 1880347072.0
_P52 = 127303824393.0 / 49829197408.0
_P53 = -318862633887.0 / 49829197408.0
_P54 = 701980252875.0 / 199316789632.0
_P62 = -282668133.0 / 205662961.0
_P63 = 2019193451.0 / 616988883.0
_P64 = -1453857185.0 / 822651844.0
_P72 = 40617522.0 / 29380423.0
_P73 = -110615467.0 / 29380423.0
_P74 = 69997945.0 / 29380423.0

_SAFETY = 0.9
_BETA = 0.04
_EXPO1 = 0.2 - 0.75 * _BETA
_FACC1 = 5.0  # hnew >= h/5 on any single adjustment
_FACC2 = 0.1  # hnew <= 10*h
_MAX_STEPS = 10_000_000

RK_OK = 0
RK_UNDERFLOW = 1
RK_BUDGET = 2
RK_NONFINITE = 3


def rk_core(f, c1, c2, u0, r_max, rtol, atol, h_init, h_min, h_max, nodes_out, psi_out, u_out):
    """Integrate psi' = u/r, u' = -r*f(psi) from (nodes_out[0], 0, u0).

    Fills psi_out/u_out at every node of nodes_out (strictly increasing,
    nodes_out[-1] <= r_max) via the dense interpolant of each accepted step.
    Returns (n_accepted, n_rejected, h_last, status, r_at).
    """
    t = nodes_out[0]
    p = 0.0
    u = u0
    psi_out[0] = 0.0
    u_out[0] = u0
    kp1 = u / t
    ku1 = -t * f(c1, c2, p)
    h = h_init
    facold = 1.0e-4
    idx = 1
    n_out = nodes_out.shape[0]
    n_acc = 0
    n_rej = 0
    rejected = False
    status = RK_OK
    r_at = t
    while idx < n_out:
        if h > h_max:
            h = h_max
        last = False
        if t + h >= r_max:
            h = r_max - t
            last = True
        elif h < h_min:
            status = RK_UNDERFLOW
            r_at = t
            break
        if t + h <= t:
            status = RK_UNDERFLOW
            r_at = t
            break
        if n_acc + n_rej >= _MAX_STEPS:
            status = RK_BUDGET
            r_at = t
            break

        s2 = t + _C2 * h
        p2 = p + h * (_A21 * kp1)
        u2 = u + h * (_A21 * ku1)
        kp2 = u2 / s2
        ku2 = -s2 * f(c1, c2, p2)

        s3 = t + _C3 * h
        p3 = p + h * (_A31 * kp1 + _A32 * kp2)
        u3 = u + h * (_A31 * ku1 + _A32 * ku2)
        kp3 = u3 / s3
        ku3 = -s3 * f(c1, c2, p3)

        s4 = t + _C4 * h
        p4 = p + h * (_A41 * kp1 + _A42 * kp2 + _A43 * kp3)
        u4 = u + h * (_A41 * ku1 + _A42 * ku2 + _A43 * ku3)
        kp4 = u4 / s4
        ku4 = -s4 * f(c1, c2, p4)

        s5 = t + _C5 * h
        p5 = p + h * (_A51 * kp1 + _A52 * kp2 + _A53 * kp3 + _A54 * kp4)
        u5 = u + h * (_A51 * ku1 + _A52 * ku2 + _A53 * ku3 + _A54 * ku4)
        kp5 = u5 / s5
        ku5 = -s5 * f(c1, c2, p5)

        s6 = t + h
        p6 = p + h * (_A61 * kp1 + _A62 * kp2 + _A63 * kp3 + _A64 * kp4 + _A65 * kp5)
        u6 = u + h * (_A61 * ku1 + _A62 * ku2 + _A63 * ku3 + _A64 * ku4 + _A65 * ku5)
        kp6 = u6 / s6
        ku6 = -s6 * f(c1, c2, p6)

        pn = p + h * (_B1 * kp1 + _B3 * kp3 + _B4 * kp4 + _B5 * kp5 + _B6 * kp6)
        un = u + h * (_B1 * ku1 + _B3 * ku3 + _B4 * ku4 + _B5 * ku5 + _B6 * ku6)
        s7 = t + h
        kp7 = un / s7
        ku7 = -s7 * f(c1, c2, pn)

        ep = h * (_E1 * kp1 + _E3 * kp3 + _E4 * kp4 + _E5 * kp5 + _E6 * kp6 + _E7 * kp7)
        eu = h * (_E1 * ku1 + _E3 * ku3 + _E4 * ku4 + _E5 * ku5 + _E6 * ku6 + _E7 * ku7)

        if not (np.isfinite(pn) and np.isfinite(un) and np.isfinite(ep) and np.isfinite(eu)):
            status = RK_NONFINITE
            r_at = t
            break

        scp = atol + rtol * max(abs(p), abs(pn))
        scu = atol + rtol * max(abs(u), abs(un))
        ep_r = ep / scp
        eu_r = eu / scu
        err = np.sqrt(0.5 * (ep_r * ep_r + eu_r * eu_r))
        fac11 = err ** _EXPO1

        if err <= 1.0:
            t_new = r_max if last else t + h
            while idx < n_out and (nodes_out[idx] <= t_new or last):
                theta = (nodes_out[idx] - t) / h
                w1 = theta * (_P11 + theta * (_P12 + theta * (_P13 + theta * _P14)))
                w3 = theta * theta * (_P32 + theta * (_P33 + theta * _P34))
                w4 = theta * theta * (_P42 + theta * (_P43 + theta * _P44))
                w5 = theta * theta * (_P52 + theta * (_P53 + theta * _P54))
                w6 = theta * theta * (_P62 + theta * (_P63 + theta * _P64))
                w7 = theta * theta * (_P72 + theta * (_P73 + theta * _P74))
                psi_out[idx] = p + h * (w1 * kp1 + w3 * kp3 + w4 * kp4 + w5 * kp5 + w6 * kp6 + w7 * kp7)
                u_out[idx] = u + h * (w1 * ku1 + w3 * ku3 + w4 * ku4 + w5 * ku5 + w6 * ku6 + w7 * ku7)
                idx += 1
            fac = fac11 / facold ** _BETA
            fac = max(_FACC2, min(_FACC1, fac / _SAFETY))
            hnew = h / fac
            if rejected:
                hnew = min(hnew, h)
            facold = max(err, 1.0e-4)
            rejected = False
            kp1 = kp7
            ku1 = ku7
            p = pn
            u = un
            t = t_new
            n_acc += 1
            h = hnew
        else:
            n_rej += 1
            rejected = True
            h = h / min(_FACC1, fac11 / _SAFETY)
    return n_acc, n_rej, h, status, r_at


# ---------------------------------------------------------------------------
# path resolution
# ---------------------------------------------------------------------------

rk_core_python = rk_core

if HAS_NUMBA:
    f_classical_numba = njit(cache=True)(f_classical)
    f_oscillatory_numba = njit(cache=True)(f_oscillatory)
    _vorticity_grid_loop_numba = njit(cache=True)(_vorticity_grid_loop)
    _prefix_moments_loop_numba = njit(cache=True)(_prefix_moments_loop)
    # the function-typed first argument defeats the on-disk cache
    rk_core_numba = njit(cache=False)(rk_core)

    def vorticity_grid_numba(kind, c1, c2, psi):
        psi = np.asarray(psi, dtype=np.float64)
        out = np.empty_like(psi)
        return _vorticity_grid_loop_numba(kind, c1, c2, psi, out)

    def prefix_moments_numba(nodes, log_weights, values):
        n = nodes.shape[0]
        A = np.empty(n, dtype=np.float64)
        B = np.empty(n, dtype=np.float64)
        return _prefix_moments_loop_numba(nodes, log_weights, values, A, B)

    vorticity_grid = vorticity_grid_numba
    prefix_moments = prefix_moments_numba
else:
    f_classical_numba = None
    f_oscillatory_numba = None
    rk_core_numba = None
    vorticity_grid_numba = None
    prefix_moments_numba = None

    vorticity_grid = vorticity_grid_numpy
    prefix_moments = prefix_moments_numpy


def scalar_vorticity(kind):
    """Return the active-path scalar callable for a builtin vorticity kind."""
    if HAS_NUMBA:
        return f_classical_numba if kind == KIND_CLASSICAL else f_oscillatory_numba
    return f_classical if kind == KIND_CLASSICAL else f_oscillatory


def active_rk_core():
    return rk_core_numba if HAS_NUMBA else rk_core_python
