"""Kummer confluent hypergeometric series and the biconfluent-Heun series."""

from __future__ import annotations

import math

import numpy as np

from .errors import GammaResonanceError, NonConvergedError, PoleInBError

KUMMER_TOL = 1e-14


def _is_nonpositive_int(b: float, tol: float = 1e-12) -> bool:
    return b <= tol and abs(b - round(b)) <= tol


def kummer_1f1(a: float, b: float, x: float, max_terms: int = 500) -> float:
    """1F1(a; b; x) = sum (a)^(n)/(b)^(n) x^n/n! to relative tail 1e-14."""
    if _is_nonpositive_int(b):
        raise PoleInBError(f"1F1 pole: b = {b} is a nonpositive integer")
    total = 1.0
    term = 1.0
    for n in range(max_terms):
        term *= (a + n) / (b + n) * x / (n + 1)
        total += term
        if abs(term) <= KUMMER_TOL * max(1.0, abs(total)) and n > 3:
            return total
    raise NonConvergedError(f"1F1({a},{b},{x}) did not converge in {max_terms} terms")


def kummer_1f1_d012(a: float, b: float, x: float):
    """(M, M', M'') of M = 1F1(a; b; x), using the contiguous-parameter
    derivative identities; exact up to series truncation."""
    m0 = kummer_1f1(a, b, x)
    m1 = a / b * kummer_1f1(a + 1, b + 1, x)
    m2 = a * (a + 1) / (b * (b + 1)) * kummer_1f1(a + 2, b + 2, x)
    return m0, m1, m2


def bch_a_coefficients(alpha: float, beta: float, gamma: float, delta: float,
                       n_terms: int) -> np.ndarray:
    """Raw A_n: A_0 = 1, A_1 = beta,
    A_{n+2} = (delta (n+1) + beta) A_{n+1} - (n+1)(n - gamma)(alpha - n) A_n.

    Grows super-factorially; use only for small n (tests, audits).
    """
    a = np.zeros(n_terms)
    a[0] = 1.0
    if n_terms > 1:
        a[1] = beta
    for n in range(n_terms - 2):
        a[n + 2] = (delta * (n + 1) + beta) * a[n + 1] \
            - (n + 1) * (n - gamma) * (alpha - n) * a[n]
    return a


def bch_coefficients(alpha: float, beta: float, gamma: float, delta: float,
                     n_terms: int) -> np.ndarray:
    """Series coefficients v_n with BCH(zeta) = sum v_n zeta^n.

    v_n = A_n / ((-gamma)^(n) n!); rolled in the rescaled form
    (n+1)(n-gamma) v_{n+1} = (delta n + beta) v_n + (n-1-alpha) v_{n-1}
    to keep intermediates inside double range (A_n alone grows
    super-factorially).
    """
    if gamma >= -1e-12 and abs(gamma - round(gamma)) <= 1e-12:
        raise GammaResonanceError(
            f"rising factorial (-gamma)^(n) vanishes: gamma = {gamma}")
    v = np.zeros(n_terms)
    v[0] = 1.0
    v_prev = 0.0
    v_cur = 1.0
    for n in range(0, n_terms - 1):
        v_next = ((delta * n + beta) * v_cur + (n - 1 - alpha) * v_prev) \
            / ((n + 1) * (n - gamma))
        v[n + 1] = v_next
        v_prev, v_cur = v_cur, v_next
    return v


def bch_series(alpha: float, beta: float, gamma: float, delta: float,
               zeta: float, max_n: int = 400) -> float:
    """Biconfluent-Heun function value (entire in zeta)."""
    v = bch_coefficients(alpha, beta, gamma, delta, max_n)
    total = 0.0
    zp = 1.0
    quiet = 0
    for n in range(max_n):
        t = v[n] * zp
        total += t
        zp *= zeta
        if abs(t) <= 1e-15 * max(1.0, abs(total)) and n > 5:
            quiet += 1
            if quiet > 4:
                return total
        else:
            quiet = 0
    return total


def bch_derivatives(alpha: float, beta: float, gamma: float, delta: float,
                    zeta: float, max_n: int = 400):
    """(V, V', V'') of the BCH series at zeta, by termwise differentiation."""
    v = bch_coefficients(alpha, beta, gamma, delta, max_n)
    n = np.arange(max_n, dtype=float)
    zp = np.power(zeta, n)
    v0 = float(np.sum(v * zp))
    v1 = float(np.sum(v[1:] * n[1:] * np.power(zeta, n[1:] - 1)))
    v2 = float(np.sum(v[2:] * n[2:] * (n[2:] - 1) * np.power(zeta, n[2:] - 2)))
    return v0, v1, v2
