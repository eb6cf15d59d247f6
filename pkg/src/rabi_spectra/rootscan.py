"""Root location for spectral determinants: grid scan, bracketing, bisection.

The scanned function returns :class:`GFunctionSample` objects rather than
bare floats so that resonances, non-convergence and breakdown regions can be
excluded and reported instead of polluting the root list.  Sign changes whose
bisection does not actually shrink |G| are classified as poles, not roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .threads import scan_map

REFINE_TOL = 1e-10
MAX_BISECT = 200
#: accept a refined root only if |G| dropped this far below the bracket ends
POLE_RATIO = 1e-3


@dataclass(frozen=True)
class GFunctionSample:
    """One sample of the spectral determinant at trial energy E.

    g_value is the Wronskian normalized by the product of the two local
    solution-vector norms, so it is bounded, has the sign of the raw
    Wronskian, and vanishes exactly at its zeros. scale_log records the raw
    magnitude.  A nonempty flag set marks the sample unusable for bracketing.
    """

    energy: float
    g_value: float
    scale_log: float = 0.0
    flags: frozenset = frozenset()

    @property
    def ok(self) -> bool:
        return not self.flags and math.isfinite(self.g_value)


@dataclass(frozen=True)
class RootScanConfig:
    e_min: float
    e_max: float
    grid_step: float
    refine_tol: float = REFINE_TOL
    max_bisect: int = MAX_BISECT
    #: (center, half_width, reason) zones to pre-exclude, with grid points
    #: injected at both edges (used for analytically known resonances)
    split_zones: tuple = ()
    pole_ratio: float = POLE_RATIO

    def __post_init__(self):
        if not (self.e_min <= self.e_max):
            raise ValueError("e_min must be <= e_max")
        if self.grid_step <= 0:
            raise ValueError("grid_step must be > 0")


@dataclass(frozen=True)
class ExcludedInterval:
    lo: float
    hi: float
    reason: str

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class RootReport:
    """Refined roots plus everything that was deliberately not called a root."""

    roots: np.ndarray
    excluded: tuple = ()
    suspects: tuple = ()
    brackets: tuple = ()
    n_evaluations: int = 0

    def excluded_reasons(self) -> dict:
        out: dict = {}
        for iv in self.excluded:
            out.setdefault(iv.reason, []).append((iv.lo, iv.hi))
        return out


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues from one method, with optional oracle comparison."""

    method: str
    energies: np.ndarray
    labels: tuple = ()
    report: RootReport | None = None
    oracle_errors: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)


def _build_grid(cfg: RootScanConfig):
    n = int(math.floor((cfg.e_max - cfg.e_min) / cfg.grid_step + 1e-9)) + 1
    pts = [cfg.e_min + i * cfg.grid_step for i in range(n)]
    if pts[-1] < cfg.e_max - 1e-15 * max(1.0, abs(cfg.e_max)):
        pts.append(cfg.e_max)
    zones = [(c, hw) for (c, hw, _r) in cfg.split_zones]
    for c, hw, _reason in cfg.split_zones:
        for edge in (c - hw, c + hw):
            if cfg.e_min < edge < cfg.e_max:
                pts.append(edge)
    pts = sorted(set(pts))
    # drop points strictly inside a pre-excluded zone
    out = []
    for x in pts:
        inside = any(c - hw < x < c + hw for c, hw in zones)
        if not inside:
            out.append(x)
    return out


def scan_and_refine(f, cfg: RootScanConfig) -> RootReport:
    """Locate zeros of the sampled determinant on [e_min, e_max].

    f maps energy -> GFunctionSample.  Sign changes between consecutive valid
    samples are bisected to refine_tol; flagged samples open excluded
    intervals and adjacent sign changes become suspects; sign changes whose
    |G| does not collapse under bisection are excluded as poles.
    """
    grid = _build_grid(cfg)
    if len(grid) == 0:
        return RootReport(np.array([]))
    samples = scan_map(f, grid)
    n_evals = len(samples)

    excluded = [ExcludedInterval(c - hw, c + hw, reason)
                for (c, hw, reason) in cfg.split_zones
                if c + hw >= cfg.e_min and c - hw <= cfg.e_max]

    # contiguous runs of flagged samples -> excluded intervals
    flagged_idx = [i for i, s in enumerate(samples) if not s.ok]
    runs = []
    for i in flagged_idx:
        if runs and i == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], i)
        else:
            runs.append((i, i))
    flag_neighbor = set()
    for lo, hi in runs:
        span_lo = grid[lo - 1] if lo > 0 else cfg.e_min
        span_hi = grid[hi + 1] if hi + 1 < len(grid) else cfg.e_max
        reasons = sorted(set().union(*[samples[i].flags for i in range(lo, hi + 1)]))
        excluded.append(ExcludedInterval(span_lo, span_hi, ",".join(reasons) or "flagged"))
        if lo > 0:
            flag_neighbor.add(lo - 1)
        if hi + 1 < len(samples):
            flag_neighbor.add(hi + 1)

    roots = []
    suspects = []
    brackets = []
    zone_edges = {}
    for c, hw, _reason in cfg.split_zones:
        zone_edges[round(c - hw, 15)] = c - hw
        zone_edges[round(c + hw, 15)] = c + hw

    for i in range(len(samples) - 1):
        s0, s1 = samples[i], samples[i + 1]
        if not (s0.ok and s1.ok):
            continue
        # do not bracket across a pre-excluded zone
        between = any(c - hw >= grid[i] - 1e-15 and c + hw <= grid[i + 1] + 1e-15
                      for c, hw, _r in cfg.split_zones)
        if between:
            continue
        if s0.g_value == 0.0:
            roots.append((grid[i], s0))
            continue
        if s0.g_value * s1.g_value >= 0.0:
            continue
        if i in flag_neighbor or (i + 1) in flag_neighbor:
            suspects.append(0.5 * (grid[i] + grid[i + 1]))
            continue
        res = _bisect(f, grid[i], grid[i + 1], s0, s1, cfg)
        n_evals += res[3]
        kind, r, s_r = res[0], res[1], res[2]
        brackets.append((grid[i], grid[i + 1]))
        if kind == "root":
            roots.append((r, s_r))
        elif kind == "pole":
            excluded.append(ExcludedInterval(r - cfg.refine_tol,
                                             r + cfg.refine_tol, "pole"))
        else:
            suspects.append(r)

    # dedup and sort
    roots.sort(key=lambda t: t[0])
    merged = []
    for r, s in roots:
        if merged and abs(r - merged[-1]) <= cfg.refine_tol:
            continue
        merged.append(r)
    return RootReport(np.array(merged), tuple(excluded), tuple(suspects),
                      tuple(brackets), n_evals)


def _bisect(f, a: float, b: float, sa: GFunctionSample, sb: GFunctionSample,
            cfg: RootScanConfig):
    """Returns (kind, x, sample, n_evals) with kind in root|pole|suspect."""
    fa = sa.g_value
    end_mag = max(abs(sa.g_value), abs(sb.g_value))
    n_evals = 0
    for _ in range(cfg.max_bisect):
        mid = 0.5 * (a + b)
        sm = f(mid)
        n_evals += 1
        if not sm.ok:
            return "suspect", mid, sm, n_evals
        if sm.g_value == 0.0:
            return "root", mid, sm, n_evals
        if fa * sm.g_value < 0.0:
            b = mid
        else:
            a, fa = mid, sm.g_value
        if b - a <= cfg.refine_tol:
            break
    r = 0.5 * (a + b)
    sr = f(r)
    n_evals += 1
    if not sr.ok:
        return "suspect", r, sr, n_evals
    if abs(sr.g_value) <= cfg.pole_ratio * end_mag:
        return "root", r, sr, n_evals
    return "pole", r, sr, n_evals
