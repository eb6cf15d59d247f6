"""Local power-series machinery for polynomial-coefficient ODEs.

Given an ODE  sum_k p_k(z) y^(k)(z) = 0  with polynomial p_k, substituting
y = sum a_n (z - z0)^n and collecting powers yields one finite-span linear
recurrence whose weights are polynomials in the index.  This module derives
that recurrence mechanically, rolls it with overflow-safe scaling, and checks
truncated solutions by direct residual insertion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import IrregularPointError, NonConvergedError, ResonantIndexError
from .polyops import falling_factorial_poly, padd, pmul, poly, pshift, ptrim, pval

DEFAULT_TAIL_TOL = 1e-14
DEFAULT_MAX_N = 2000


@dataclass(frozen=True)
class PolyOde:
    """ODE sum_k p_k(z) y^(k) = 0 with polynomial coefficients.

    ``polys[k]`` is the ascending coefficient array multiplying y^(k);
    ``z0`` is the expansion point for series work.
    """

    polys: tuple
    z0: float = 0.0

    def __post_init__(self):
        ps = tuple(tuple(float(c) for c in poly(p)) for p in self.polys)
        object.__setattr__(self, "polys", ps)
        if not any(abs(c) > 0 for c in ps[-1]):
            raise ValueError("leading-derivative polynomial must not vanish identically")
        for p in ps:
            if not all(math.isfinite(c) for c in p):
                raise ValueError("non-finite ODE coefficient")

    @property
    def order(self) -> int:
        return len(self.polys) - 1

    def recentered(self):
        """Coefficient arrays rewritten in t = z - z0."""
        return [ptrim(pshift(p, self.z0), 1e-300) for p in self.polys]

    def eval_poly(self, k: int, x: float) -> float:
        return pval(self.polys[k], x)


@dataclass(frozen=True)
class RecurrenceSpec:
    """Finite-span recurrence  sum_j W_j(m) a_{m+order-j} = 0.

    ``weights[j, d]`` is the d-th power coefficient of the polynomial weight
    W_j(m) attached to lag j (j = 0 is the formal newest term).  ``j_lead``
    is the first lag with a nonzero weight; equation m then determines
    a_{m + order - j_lead}, and ``order - j_lead`` seed coefficients are free.
    """

    weights: np.ndarray
    order: int
    j_lead: int
    z0: float = 0.0
    provenance: str = ""

    @property
    def span(self) -> int:
        """Number of coefficients coupled by one equation (k-term recurrence)."""
        used = [j for j in range(self.weights.shape[0])
                if np.any(np.abs(self.weights[j]) > 0)]
        return used[-1] - used[0] + 1 if used else 0

    @property
    def n_free(self) -> int:
        return self.order - self.j_lead

    def weight_poly(self, j: int) -> np.ndarray:
        return ptrim(self.weights[j], 1e-300)

    def leading_at(self, n: int) -> float:
        """Weight multiplying the newest coefficient when computing a_n."""
        return float(pval(self.weights[self.j_lead], n - self.n_free))

    def resonant_indices(self, n_max: int) -> list:
        """Indices n where the newest-coefficient weight (nearly) vanishes."""
        lead = self.weights[self.j_lead]
        out = []
        for n in range(self.n_free, n_max + 1):
            m = n - self.n_free
            ref = sum(abs(c) * max(1.0, abs(m)) ** d for d, c in enumerate(lead))
            if abs(pval(lead, m)) <= 1e-9 * ref:
                out.append(n)
        return out


@dataclass(frozen=True)
class ScaledValue:
    """Real number stored as mantissa * exp(log_scale)."""

    mantissa: float
    log_scale: float = 0.0

    @property
    def sign(self) -> float:
        return math.copysign(1.0, self.mantissa) if self.mantissa != 0 else 0.0

    def log_abs(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale

    def to_float(self) -> float:
        if self.mantissa == 0.0:
            return 0.0
        la = self.log_abs()
        if la > 700.0:
            return math.inf * self.sign
        if la < -700.0:
            return 0.0
        return self.mantissa * math.exp(self.log_scale)

    def __mul__(self, other: "ScaledValue") -> "ScaledValue":
        return ScaledValue(self.mantissa * other.mantissa,
                           self.log_scale + other.log_scale)


@dataclass(frozen=True)
class SeriesSolution:
    """Truncated local series with per-coefficient scale bookkeeping."""

    z0: float
    coeff_mantissa: np.ndarray
    coeff_log: np.ndarray
    n_used: int
    tail_rel: float
    flags: int
    provenance: str = ""
    recurrence: RecurrenceSpec | None = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return not (self.flags & _kernels.FLAG_NONCONVERGED)

    @property
    def resonant_compatible(self) -> bool:
        return bool(self.flags & _kernels.FLAG_RESONANT_COMPATIBLE)

    @property
    def resonant_incompatible(self) -> bool:
        return bool(self.flags & _kernels.FLAG_RESONANT_INCOMPATIBLE)

    def coefficient(self, n: int) -> float:
        """a_n as a plain float (may over/underflow for extreme scales)."""
        return ScaledValue(float(self.coeff_mantissa[n]),
                           float(self.coeff_log[n])).to_float()

    def coefficients(self) -> np.ndarray:
        return np.array([self.coefficient(n) for n in range(self.n_used + 1)])


def ode_to_recurrence(ode: PolyOde, provenance: str = "") -> RecurrenceSpec:
    """Derive the exact recurrence at ode.z0 by substitution and collection.

    Raises IrregularPointError unless z0 is an ordinary or regular singular
    point (Frobenius condition: ord(p_k) >= ord(p_s) - (s - k) at z0).
    """
    polys = ode.recentered()
    s = ode.order

    def vanish_order(c):
        nz = np.nonzero(np.abs(c) > 0)[0]
        return int(nz[0]) if nz.size else None

    lead_ord = vanish_order(polys[s])
    for k in range(s):
        ok = vanish_order(polys[k])
        if ok is None:
            continue
        if ok < lead_ord - (s - k):
            raise IrregularPointError(
                f"expansion point {ode.z0} is an irregular singularity "
                f"(p_{k} vanishes to order {ok} < {lead_ord - (s - k)})")

    maxdeg = max(len(c) - 1 for c in polys)
    K = s + maxdeg
    weights = np.zeros((K + 1, s + 1))
    for k, c in enumerate(polys):
        for i, cki in enumerate(c):
            if cki == 0.0:
                continue
            j = s - k + i  # lag: this term couples a_{m+k-i} = a_{m+s-j}
            ff = falling_factorial_poly(float(s - j), k)
            w = poly(cki) if ff.size == 0 else cki * ff
            weights[j, :w.size] += w
    j_lead = 0
    while j_lead <= K and not np.any(np.abs(weights[j_lead]) > 0):
        j_lead += 1
    if j_lead > K:
        raise ValueError("empty recurrence")
    return RecurrenceSpec(weights=weights, order=s, j_lead=j_lead,
                          z0=ode.z0, provenance=provenance)


def default_seeds(rec: RecurrenceSpec) -> np.ndarray:
    seeds = np.zeros(max(rec.n_free, 1))
    seeds[0] = 1.0
    return seeds


def exponent_seeds(rec: RecurrenceSpec, exponent: int) -> np.ndarray:
    """Seed vector selecting the Frobenius branch z^exponent (a_exponent = 1).

    Only meaningful when the skipped equations are auto-satisfied, i.e. at a
    resonant index; callers use this for exceptional-eigenvalue tests.
    """
    seeds = np.zeros(exponent + 1)
    seeds[exponent] = 1.0
    return seeds


def _roll(rec: RecurrenceSpec, x_rel: float, max_n: int, tail_tol: float,
          seeds: np.ndarray):
    return _kernels.roll(np.ascontiguousarray(rec.weights, dtype=np.float64),
                         rec.j_lead, rec.order,
                         np.ascontiguousarray(seeds, dtype=np.float64),
                         float(x_rel), int(max_n), float(tail_tol))


def series_eval(rec: RecurrenceSpec, x: float,
                max_n: int = DEFAULT_MAX_N, tail_tol: float = DEFAULT_TAIL_TOL,
                seeds: np.ndarray | None = None, strict: bool = False):
    """Sum the local series and its first derivative at x.

    Returns (value, derivative, SeriesSolution) with value/derivative as
    :class:`ScaledValue`.  ``strict=True`` raises NonConvergedError instead
    of only flagging.  The caller is responsible for x lying strictly inside
    the convergence disk.
    """
    if seeds is None:
        seeds = default_seeds(rec)
    x_rel = x - rec.z0
    if x_rel == 0.0:
        # expansion point: value a0, derivative a1; generate the coefficients
        # in plain a-form (x=1 rollout, no convergence gate)
        n_min = max(len(seeds) + rec.span + 2, max_n)
        ds, slog, n_used, flags, cm, cl, tail = _roll(rec, 1.0, n_min, 0.0, seeds)
        sol = SeriesSolution(rec.z0, cm, cl, n_used, tail, flags,
                             rec.provenance, rec)
        val = ScaledValue(float(cm[0]), float(cl[0]))
        der = (ScaledValue(float(cm[1]), float(cl[1]))
               if n_used >= 1 else ScaledValue(0.0))
        return val, der, sol
    ds, slog, n_used, flags, cm, cl, tail = _roll(rec, x_rel, max_n, tail_tol, seeds)
    if strict and (flags & _kernels.FLAG_RESONANT_INCOMPATIBLE):
        raise ResonantIndexError(
            f"leading recurrence weight vanished at index {n_used + 1} with "
            "an incompatible right-hand side")
    if strict and (flags & _kernels.FLAG_NONCONVERGED):
        raise NonConvergedError(
            f"series tail {tail:.2e} > {tail_tol:.2e} after {n_used} terms")
    val = ScaledValue(float(ds[0]), slog)
    der = ScaledValue(float(ds[1]) / x_rel, slog)
    sol = SeriesSolution(rec.z0, cm[:n_used + 1], cl[:n_used + 1], n_used,
                         tail, flags, rec.provenance, rec)
    return val, der, sol


def solution_derivatives(sol: SeriesSolution, x: float, order: int):
    """ScaledValue list of s^(k)(x), k = 0..order, from stored coefficients."""
    n = np.arange(sol.n_used + 1, dtype=float)
    cm = sol.coeff_mantissa[:sol.n_used + 1]
    cl = sol.coeff_log[:sol.n_used + 1].copy()
    x_rel = x - sol.z0
    out = []
    if x_rel == 0.0:
        for k in range(order + 1):
            if k <= sol.n_used:
                out.append(ScaledValue(float(cm[k]) * math.factorial(k),
                                       float(cl[k])))
            else:
                out.append(ScaledValue(0.0))
        return out
    lx = math.log(abs(x_rel))
    term_log = cl + n * lx
    base = float(np.max(term_log[np.abs(cm) > 0], initial=-745.0))
    scaled = cm * np.exp(term_log - base) * np.sign(x_rel) ** n
    ff = np.ones_like(n)
    for k in range(order + 1):
        acc = float(np.sum(ff * scaled))
        out.append(ScaledValue(acc / x_rel ** k, base))
        ff = ff * (n - k)
    return out


def ode_residual(ode: PolyOde, sol: SeriesSolution, x: float) -> float:
    """|sum_k p_k(x) s^(k)(x)| / max(1, |s(x)|) from the truncated series."""
    x_rel = x - ode.z0
    derivs = solution_derivatives(sol, x, ode.order)
    polys = ode.recentered()
    base = max(d.log_scale for d in derivs)
    num = 0.0
    for k, d in enumerate(derivs):
        num += pval(polys[k], x_rel) * d.mantissa * math.exp(d.log_scale - base)
    s0 = abs(derivs[0].mantissa) * math.exp(derivs[0].log_scale - base)
    denom = max(math.exp(-base), s0)
    return abs(num) / denom
