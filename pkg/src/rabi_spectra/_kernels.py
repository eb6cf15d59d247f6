"""Hot recurrence-rollout kernel, JIT-compiled with numba when available.

Set RABI_SPECTRA_PURE_PYTHON=1 to force the plain-Python path (same code,
no compilation); benchmarks/bench_series.py compares the two.

The kernel rolls b_n = a_n * x^n directly, so no explicit powers of x are
formed; a shared scale factor (log) is renormalized periodically to keep all
mantissas inside double range even for strongly growing coefficient windows.
"""

from __future__ import annotations

import math
import os

import numpy as np

FLAG_NONCONVERGED = 1
FLAG_RESONANT_COMPATIBLE = 2
FLAG_RESONANT_INCOMPATIBLE = 4

_RENORM_EVERY = 50
_RES_GUARD = 1e-12
_COMPAT_TOL = 1e-12


def _pure_python_requested() -> bool:
    return os.environ.get("RABI_SPECTRA_PURE_PYTHON", "").strip() not in ("", "0")


def _roll_impl(L, j_lead, order, seeds, x, max_n, tail_tol):
    """Roll the recurrence sum L_j(m) a_{m+order-j} = 0 and accumulate
    derivative sums at x.

    Returns (deriv_mantissas[order+1], scale_log, n_used, flags,
             coeff_mantissas[max_n+1], coeff_logs[max_n+1], tail_rel).

    deriv[k] * exp(scale_log) = sum_n n(n-1)..(n-k+1) a_n x^n  (divide by x^k
    outside to get the k-th derivative).  coeff arrays reconstruct a_n.
    """
    n_lags = L.shape[0]
    n_deg = L.shape[1]
    q = order - j_lead  # equation-index offset: eq m determines a_{m+q}
    n_seed = seeds.shape[0]  # >= q; longer seeds select a higher exponent
    span = n_lags - 1 - j_lead  # how many back terms the newest one needs

    window = np.zeros(span + 1)  # window[d] = b_{n-d}
    ds = np.zeros(order + 1)
    coeff_m = np.zeros(max_n + 1)
    coeff_log = np.zeros(max_n + 1)
    scale_log = 0.0
    flags = 0
    n_used = n_seed - 1
    tail_rel = 0.0

    ax = abs(x)
    lx = math.log(ax) if ax > 0.0 else 0.0
    sx = 1.0 if x >= 0.0 else -1.0

    # seed terms
    xp = 1.0
    sgn = 1.0
    for j in range(n_seed):
        b = seeds[j] * xp
        for d in range(span, 0, -1):
            window[d] = window[d - 1]
        window[0] = b
        ffv = 1.0
        for k in range(order + 1):
            ds[k] += ffv * b
            ffv *= (j - k)
        if j <= max_n:
            coeff_m[j] = b * sgn
            coeff_log[j] = scale_log - j * lx
        xp *= x
        sgn *= sx

    quiet = 0
    for n in range(n_seed, max_n + 1):
        m = float(n - q)
        # leading weight L_{j_lead}(m) and its magnitude reference
        lead = 0.0
        lead_ref = 0.0
        mp = 1.0
        mref = 1.0
        mabs = abs(m) if abs(m) > 1.0 else 1.0
        for d in range(n_deg):
            lead += L[j_lead, d] * mp
            lead_ref += abs(L[j_lead, d]) * mref
            mp *= m
            mref *= mabs
        rhs = 0.0
        rhs_ref = 0.0
        xd = x
        for dlag in range(1, span + 1):
            w = 0.0
            mp = 1.0
            for d in range(n_deg):
                w += L[j_lead + dlag, d] * mp
                mp *= m
            t = w * xd * window[dlag - 1]
            rhs -= t
            rhs_ref += abs(t)
            xd *= x
        if abs(lead) <= _RES_GUARD * lead_ref:
            if abs(rhs) <= _COMPAT_TOL * (rhs_ref + 1e-300):
                b_n = 0.0
                flags |= FLAG_RESONANT_COMPATIBLE
            else:
                flags |= FLAG_RESONANT_INCOMPATIBLE
                n_used = n - 1
                break
        else:
            b_n = rhs / lead

        for d in range(span, 0, -1):
            window[d] = window[d - 1]
        window[0] = b_n
        ffv = 1.0
        for k in range(order + 1):
            ds[k] += ffv * b_n
            ffv *= (n - k)
        coeff_m[n] = b_n * sgn
        coeff_log[n] = scale_log - n * lx
        sgn *= sx
        n_used = n

        # convergence: a full span of consecutive negligible terms, with the
        # n^order amplification of the highest derivative accounted for
        ref = abs(ds[0])
        if ref < 1.0:
            ref = 1.0
        amp = 1.0
        for _ in range(order):
            amp *= (n + 1.0)
        tail_rel = abs(b_n) * amp / ref
        if tail_tol > 0.0 and tail_rel <= tail_tol:
            quiet += 1
            if quiet > span + 2 and n > n_seed + 8:
                break
        else:
            quiet = 0

        if n % _RENORM_EVERY == 0:
            big = 0.0
            for d in range(span + 1):
                if abs(window[d]) > big:
                    big = abs(window[d])
            for k in range(order + 1):
                if abs(ds[k]) > big:
                    big = abs(ds[k])
            if big > 1e100 or (0.0 < big < 1e-100):
                f = big
                lf = math.log(f)
                for d in range(span + 1):
                    window[d] /= f
                for k in range(order + 1):
                    ds[k] /= f
                scale_log += lf

    if tail_tol > 0.0 and n_used >= max_n and tail_rel > tail_tol:
        flags |= FLAG_NONCONVERGED
    return ds, scale_log, n_used, flags, coeff_m, coeff_log, tail_rel


NUMBA_ENABLED = False
if not _pure_python_requested():
    try:
        from numba import njit

        roll = njit(cache=True, nogil=True)(_roll_impl)
        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - exercised via env flag instead
        roll = _roll_impl
else:
    roll = _roll_impl

roll_python = _roll_impl
