"""Second-canonical-form pipeline in lam-normalized variables: approximate
second-order reduction, partial fractions, normal-form coefficients and the
g = 0 biconfluent-Heun parameters.  Validation-grade: cross-checks the main
reduction, exposes no root scan.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GNotZeroError, GZeroError, LambdaZeroError
from .heun import split_two_poles
from .params import NormalizedParams
from .polyops import padd, pder, pmul, poly, ptrim, pval
from .series import PolyOde


def q1_q2_polys(nb: NormalizedParams):
    """Canonical-form potentials of the two transformed components."""
    om, ep, g, e = nb.omega_bar, nb.epsilon_bar, nb.g_bar, nb.e_bar
    q1 = poly([ep - e - om / 2 - g * g / 4,
               -0.5 * g * (om - 2.0),
               -0.25 * (om * om - 4.0)])
    q2 = poly([ep + e + om / 2 - g * g / 4,
               0.5 * g * (om + 2.0),
               -0.25 * (om * om - 4.0)])
    return q1, q2


def exact_c_polys(nb: NormalizedParams):
    """Exact fourth-order coefficients c2, c3, c4 of the eliminated system."""
    om, de = nb.omega_bar, nb.delta_bar
    q1, q2 = q1_q2_polys(nb)
    aux = padd(q2, poly([-om, 0.0, om * om]))  # Q2 + om^2 z^2 - om
    c2 = padd(q1, aux)
    c3 = padd(2.0 * pder(q1), pmul(poly([0.0, -2.0 * om]), q1))
    c4 = padd(padd(poly([-de * de]), pder(q1, 2)),
              padd(pmul(poly([0.0, -2.0 * om]), pder(q1)), pmul(aux, q1)))
    return ptrim(c2), ptrim(c3), ptrim(c4)


def approx_c_polys(nb: NormalizedParams):
    """c2, c3, c4 with every term of order lam^{-1} or weaker dropped.

    The retained monomials are selected symbolically (each barred quantity
    counts as one inverse power); tests confirm the discarded remainder
    shrinks quadratically under joint (lam, g) scaling.
    """
    om, de, ep, g, e = (nb.omega_bar, nb.delta_bar, nb.epsilon_bar,
                        nb.g_bar, nb.e_bar)
    s = ep - om / 2 - g * g / 4
    c2 = poly([-g * g / 2, 0.0, om * om / 2])
    c3 = poly([-om * g,
               om * (2 * e - 2 * ep) + om * g * g / 2,
               g * om * (om - 2.0),
               om ** 3 / 2])
    c4 = poly([-om * om / 2 + s * s - e * e - de * de,
               g * (om * om - (3.0 + e) * om + 2 * ep - g * g / 2),
               0.75 * om ** 3 + 0.5 * ep * om * om - 0.375 * g * g * om * om
               - e * om * om + 0.5 * g * g,
               -0.5 * g * om * om * (om - 1.0),
               -(om * om / 16.0) * (3 * om * om - 8.0)])
    return c2, c3, c4


@dataclass(frozen=True)
class CanonicalCoeffs:
    """Approximate reduction data: polynomials and partial-fraction tables."""

    nb: NormalizedParams
    q: float
    c2: np.ndarray
    c3: np.ndarray
    c4: np.ndarray
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    gamma1: float
    gamma2: float
    gamma3: float
    delta1: float
    delta2: float

    def p1_at(self, z: float) -> float:
        q = self.q
        return (self.alpha1 * z + self.alpha2
                + self.beta1 / (z - q) + self.beta2 / (z + q))

    def q1_at(self, z: float) -> float:
        q = self.q
        return (self.gamma1 * z * z + self.gamma2 * z + self.gamma3
                + self.delta1 / (z - q) + self.delta2 / (z + q))

    def reconstruction_error(self, z: float) -> float:
        e1 = abs(self.p1_at(z) - pval(self.c3, z) / pval(self.c2, z))
        e2 = abs(self.q1_at(z) - pval(self.c4, z) / pval(self.c2, z))
        return max(e1, e2)

    def reduced_ode(self) -> PolyOde:
        """c2 u'' + c3 u' + c4 u = 0 as a PolyOde (ordinary point at 0)."""
        return PolyOde((tuple(self.c4), tuple(self.c3), tuple(self.c2)), z0=0.0)


def canonical_coeffs(nb: NormalizedParams) -> CanonicalCoeffs:
    """Approximated c-polynomials and the partial fractions of c3/c2, c4/c2."""
    if nb.g_bar == 0.0:
        raise GZeroError("poles collide at 0; use the g = 0 route")
    c2, c3, c4 = approx_c_polys(nb)
    q = abs(nb.g_bar / nb.omega_bar)
    quot1, b1, b2 = split_two_poles(c3, c2, q)
    quot0, d1, d2 = split_two_poles(c4, c2, q)
    al1 = float(quot1[1]) if quot1.size > 1 else 0.0
    al2 = float(quot1[0]) if quot1.size else 0.0
    ga1 = float(quot0[2]) if quot0.size > 2 else 0.0
    ga2 = float(quot0[1]) if quot0.size > 1 else 0.0
    ga3 = float(quot0[0]) if quot0.size else 0.0
    return CanonicalCoeffs(nb, q, c2, c3, c4, al1, al2, b1, b2,
                           ga1, ga2, ga3, d1, d2)


@dataclass(frozen=True)
class NormalFormCoeffs:
    """Coefficients of U'' = -(l1 z^2 + l2 z + l3 + m1/(z-q) + m2/(z+q)
    + n1/(z-q)^2 + n2/(z+q)^2) U, derived by the Liouville transformation."""

    lambda1: float
    lambda2: float
    lambda3: float
    mu1: float
    mu2: float
    nu1: float
    nu2: float
    q: float
    #: the in-text formulas, kept for the audit (lambda1 and the mu cross
    #: terms differ from the derivation)
    printed: dict = field(default_factory=dict)

    def potential_at(self, z: float) -> float:
        return (self.lambda1 * z * z + self.lambda2 * z + self.lambda3
                + self.mu1 / (z - self.q) + self.mu2 / (z + self.q)
                + self.nu1 / (z - self.q) ** 2 + self.nu2 / (z + self.q) ** 2)


def normal_form_coeffs(cc: CanonicalCoeffs) -> NormalFormCoeffs:
    """Liouville transform u = U exp(-1/2 int p1): Q = q1 - p1'/2 - p1^2/4."""
    a1, a2 = cc.alpha1, cc.alpha2
    b1, b2 = cc.beta1, cc.beta2
    q = cc.q
    l1 = cc.gamma1 - a1 * a1 / 4.0
    l2 = cc.gamma2 - 0.5 * a1 * a2
    l3 = cc.gamma3 - 0.5 * a1 * (1.0 + b1 + b2) - a2 * a2 / 4.0
    m1 = cc.delta1 - 0.5 * (a1 * q + a2 + b2 / (2 * q)) * b1
    m2 = cc.delta2 + 0.5 * (a1 * q - a2 + b1 / (2 * q)) * b2
    n1 = 0.5 * b1 * (1.0 - 0.5 * b1)
    n2 = 0.5 * b2 * (1.0 - 0.5 * b2)
    printed = {
        "lambda1": cc.gamma1 - a1 / 4.0,
        "mu1": cc.delta1 - 0.5 * (q * a1 + a2 + b2 / (4 * q)) * b1,
        "mu2": cc.delta2 + 0.5 * (q * a1 - a2 + b1 / (4 * q)) * b2,
    }
    return NormalFormCoeffs(l1, l2, l3, m1, m2, n1, n2, q, printed)


@dataclass(frozen=True)
class BchParams:
    """Biconfluent-Heun parameters of the g = 0 normal form (printed values;
    the derived counterparts live in the audit tables)."""

    alpha: float
    gamma: float
    lambda1: float
    lambda2: float
    lambda3: float
    mu: float
    nu: float
    xi_scale: complex
    beta: float = 0.0
    delta: float = 0.0


def bch_params_g0(nb: NormalizedParams) -> BchParams:
    """g = 0 case: the in-text BCH parameter set, evaluable via bch_series.

    The xi map zeta = e^{-i pi/4} (4 lambda1)^{1/4} z is kept complex; the
    phase cancels and the scale is real whenever lambda1 < 0.
    """
    if nb.g_bar != 0.0:
        raise GNotZeroError(f"g = 0 route called with g_bar = {nb.g_bar}")
    om, ep, e = nb.omega_bar, nb.epsilon_bar, nb.e_bar
    if om == 0.0:
        raise LambdaZeroError("omega_bar must be nonzero")
    t = (2.0 / om) * (e - ep)
    l1 = (1.0 + om / 2.0) * (1.0 - 3.0 * om / 4.0)
    l3 = 11.0 * om / 8.0 - 4.0 * e + 9.0 * ep / 4.0
    nu = t * (1.0 - t)
    alpha = -2.0 * (1.0 / om + 2.0) * e + (9.0 / 4.0 + 2.0 / om) * ep \
        + 11.0 * om / 8.0 - 0.5
    gamma = -(4.0 / om) * (e - ep)
    xi = cmath.exp(-1j * math.pi / 4.0) * (4.0 * l1 + 0j) ** 0.25
    return BchParams(alpha=alpha, gamma=gamma, lambda1=l1, lambda2=0.0,
                     lambda3=l3, mu=0.0, nu=nu, xi_scale=xi)


def general_normal_form_residual(cc: CanonicalCoeffs, nf: NormalFormCoeffs,
                                 z: float, u_derivs: tuple) -> float:
    """Residual of U = u exp(+1/2 int p1) in U'' + pot U = 0, given
    (u, u', u'') of a solution of the reduced equation.  The gauge factor
    cancels; only the log-derivative L = p1/2 enters."""
    u0, u1, u2 = u_derivs
    q = cc.q
    ell = 0.5 * cc.p1_at(z)
    ell_p = 0.5 * (cc.alpha1 - cc.beta1 / (z - q) ** 2
                   - cc.beta2 / (z + q) ** 2)
    num = u2 + 2 * ell * u1 + (ell_p + ell * ell + nf.potential_at(z)) * u0
    return abs(num) / max(1.0, abs(u0))


def bch_first_normal_ode(alpha: float, beta: float, gamma: float,
                         delta: float) -> PolyOde:
    """zeta V'' - (gamma + delta zeta + zeta^2) V' + (alpha zeta - beta) V = 0."""
    return PolyOde((poly([-beta, alpha]), poly([-gamma, -delta, -1.0]),
                    poly([0.0, 1.0])), z0=0.0)


def second_normal_potential(alpha: float, beta: float, gamma: float,
                            delta: float, zeta: float) -> float:
    """Second normal form: U'' = pot(zeta) U for U = V zeta^{-gamma/2}
    exp(-delta zeta/2 - zeta^2/4).  Matches the in-text display except that
    the single-pole weight is beta + gamma delta/2, not (gamma delta+beta)/2
    (irrelevant here: beta = 0 throughout)."""
    return (zeta * zeta / 4.0 + 0.5 * delta * zeta
            + (delta * delta / 4.0 + 0.5 * gamma - alpha - 0.5)
            + (beta + 0.5 * gamma * delta) / zeta
            + 0.25 * gamma * (gamma + 2.0) / (zeta * zeta))


def second_normal_residual(alpha: float, beta: float, gamma: float,
                           delta: float, zeta: float,
                           v_derivs: tuple) -> float:
    """Residual of U = V * zeta^{-gamma/2} e^{-delta zeta/2 - zeta^2/4} in the
    derived second normal form, given (V, V', V'') of a first-normal-form
    solution.  The common factor cancels, so only V and the log-derivative
    of the gauge enter."""
    v0, v1, v2 = v_derivs
    ell = -(gamma / (2 * zeta) + delta / 2.0 + zeta / 2.0)
    ell_p = gamma / (2 * zeta * zeta) - 0.5
    pot = second_normal_potential(alpha, beta, gamma, delta, zeta)
    num = v2 + 2 * ell * v1 + (ell_p + ell * ell - pot) * v0
    return abs(num) / max(1.0, abs(v0))
