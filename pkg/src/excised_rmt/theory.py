"""Closed-form evaluators: density kernels, lower-order terms, matrix sizes,
small-value asymptotics, and the vanishing-frequency model."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from excised_rmt.groups import GroupKind, GroupSpec
from excised_rmt.special import (
    EULER_GAMMA,
    GLAISHER,
    STIELTJES_GAMMA1,
    adaptive_simpson,
    digamma,
    sin_ratio,
    sinc2pi,
)

_PI = math.pi


class SymmetryCase(enum.Enum):
    PrincipalEven = "principal_even"
    PrincipalOdd = "principal_odd"
    SelfCM = "self_cm"
    Generic = "generic"

    @property
    def group(self) -> GroupKind:
        return {
            SymmetryCase.PrincipalEven: GroupKind.SOEven,
            SymmetryCase.PrincipalOdd: GroupKind.SOOdd,
            SymmetryCase.SelfCM: GroupKind.USp,
            SymmetryCase.Generic: GroupKind.Unitary,
        }[self]


@dataclass(frozen=True)
class CoefficientInputs:
    """Raw L-function constants and the assembled one-level coefficients.

    Raw inputs default to 0 so toy evaluations work out of the box; the
    assembled a1..d1 fields are populated by coefficient_assembly.
    """

    k: int = 2
    A1_00: float = 0.0
    Bp0: float = 0.0
    Bpp0: float = 0.0
    Lp_sym: float = 0.0
    Lpp_sym: float = 0.0
    Lp_chi: float = 0.0
    Lpp_chi: float = 0.0
    xi0: float = 0.0
    xi1: float = 0.0
    L1_chi: float = 0.0
    L1_ad: float = 1.0
    # extra raw inputs used only by the generic-case c2/d1 coefficients
    eta: float = 0.0
    Atilde_00: float = 0.0
    Btilde_p0: float = 0.0
    L1_sym: float = 0.0
    Lp_sym_value: float = 0.0
    euler_gamma: float = EULER_GAMMA
    stieltjes1: float = STIELTJES_GAMMA1
    a1: Optional[float] = None
    a2: Optional[float] = None
    a3: Optional[float] = None
    a4: Optional[float] = None
    b1: Optional[float] = None
    b2: Optional[float] = None
    c1: Optional[float] = None
    c2: Optional[float] = None
    d1: Optional[float] = None

    @property
    def digamma_k2(self) -> float:
        return digamma(self.k / 2.0)


@dataclass(frozen=True)
class PairCorrCoefficients:
    e1: float = 0.0
    e2: float = 0.0
    e3: float = 0.0
    App0: Optional[float] = None
    Appp0: Optional[float] = None
    Lp_ad_prime: Optional[float] = None
    lambda_M_sq: Optional[float] = None
    M: Optional[int] = None


@dataclass(frozen=True)
class VanishingModel:
    k: int
    delta_f: float
    kappa_f: float
    a_f_half: float = 1.0

    def __post_init__(self):
        if self.delta_f < 0 or self.kappa_f < 0:
            raise ValueError("delta_f and kappa_f must be nonnegative")


def finite_n_density(group: GroupKind, n: int, theta) -> np.ndarray:
    """Exact eigenangle density per matrix per radian.

    Supports: [0, pi] for the even orthogonal and symplectic groups,
    [0, 2pi] for the odd orthogonal and unitary groups.  Removable
    singularities of sin(m*theta)/sin(theta) are evaluated by limit.
    """
    theta = np.asarray(theta, dtype=float)
    if group is GroupKind.SOEven:
        out = (2 * n - 1) / (2 * _PI) + sin_ratio(2 * n - 1, theta) / (2 * _PI)
    elif group is GroupKind.SOOdd:
        out = n / _PI - sin_ratio(2 * n, theta) / (2 * _PI)
    elif group is GroupKind.USp:
        out = (2 * n + 1) / (2 * _PI) - sin_ratio(2 * n + 1, theta) / (2 * _PI)
    else:
        out = np.full_like(theta, n / (2 * _PI))
    out = np.asarray(out, dtype=float)
    if out.ndim == 0:
        return float(out)
    return out


def exact_scaled_density(group: GroupKind, n: int, tau) -> np.ndarray:
    """The finite-size kernel rescaled to unit mean eigenangle spacing."""
    spec = GroupSpec(group, n)
    dim = spec.dim
    tau = np.asarray(tau, dtype=float)
    theta = 2.0 * _PI * tau / dim
    out = (2.0 * _PI / dim) * finite_n_density(group, n, theta)
    if np.ndim(tau) == 0:
        return float(out)
    return out


def scaled_density_expansion(group: GroupKind, n, tau, order: int = 2):
    """Partial sums of the large-size expansion of the scaled density.

    order 0 keeps the limiting kernel, order 1 adds the 1/size term,
    order 2 adds the 1/size^2 term.  n may be math.inf for the limit.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1, or 2")
    tau = np.asarray(tau, dtype=float)
    s = sinc2pi(tau)
    two_pi_tau = 2.0 * _PI * tau
    if group is GroupKind.Unitary:
        out = np.ones_like(tau)
    elif group is GroupKind.SOEven:
        out = 1.0 + s
        if order >= 1 and np.isfinite(n):
            out = out - (1.0 + np.cos(two_pi_tau)) / (2.0 * n)
        if order >= 2 and np.isfinite(n):
            out = out - _PI * tau * np.sin(two_pi_tau) / (6.0 * n * n)
    elif group is GroupKind.SOOdd:
        size = 2.0 * n + 1.0 if np.isfinite(n) else math.inf
        out = 1.0 - s
        if order >= 1 and np.isfinite(n):
            out = out - (1.0 - np.cos(two_pi_tau)) / size
        if order >= 2 and np.isfinite(n):
            out = out + 2.0 * _PI * tau * np.sin(two_pi_tau) / (3.0 * size * size)
    else:  # USp
        out = 1.0 - s
        if order >= 1 and np.isfinite(n):
            out = out + (1.0 - np.cos(two_pi_tau)) / (2.0 * n)
        if order >= 2 and np.isfinite(n):
            out = out + _PI * tau * np.sin(two_pi_tau) / (6.0 * n * n)
    if np.ndim(tau) == 0:
        return float(out)
    return out


def coefficient_assembly(case: SymmetryCase, raw: CoefficientInputs) -> CoefficientInputs:
    """Assemble the lower-order-term coefficients for a symmetry case.

    The principal-nebentypus cases produce (a1, a2) or (a3, a4), the
    self-CM case (b1, b2), and the generic case (c1, c2, d1).  Dual-form
    inputs are treated as equal to the given form's inputs (real-valued
    symmetrization), so e.g. c1 collapses to a single set of constants.
    """
    psi = raw.digamma_k2
    g = raw.euler_gamma
    g1 = raw.stieltjes1
    if case is SymmetryCase.PrincipalEven:
        a1 = 1.0 - psi - raw.A1_00 + g - raw.Lp_sym
        a2 = (
            -2.0 * psi
            - 2.0 * psi * g
            + 2.0 * g
            - 2.0 * g1
            + (2.0 * psi - 2.0 - 2.0 * g - raw.Bp0) * raw.Lp_sym
            + (g + 1.0 - psi) * raw.Bp0
            + 0.25 * raw.Bpp0
            + 2.0 * raw.Lpp_sym
        )
        return replace(raw, a1=a1, a2=a2)
    if case is SymmetryCase.PrincipalOdd:
        a3 = 2.0 - 2.0 * psi + 2.0 * g1 - 2.0 * raw.Lp_sym - 2.0 * raw.A1_00
        a4 = (
            4.0 * psi
            + 4.0 * psi * g
            + 4.0 * g1
            + (2.0 * psi - 2.0 - 2.0 * g) * raw.Bp0
            + (4.0 + 4.0 * g + 2.0 * raw.Bp0 - 4.0 * psi) * raw.Lp_sym
            - 0.5 * raw.Bpp0
            - raw.Lpp_sym
        )
        return replace(raw, a3=a3, a4=a4)
    if case is SymmetryCase.SelfCM:
        if raw.L1_ad <= 0:
            raise ValueError("L1_ad must be positive (appears as a denominator)")
        ratio = raw.L1_chi / raw.L1_ad
        b1 = 1.0 - psi - raw.xi0 * ratio - raw.A1_00 + raw.Lp_chi
        b2 = (
            -2.0 * psi
            + raw.Bp0
            - psi * raw.Bp0
            + 0.25 * raw.Bpp0
            + 2.0 * raw.Lpp_chi
            + raw.Lp_chi * (-2.0 * raw.xi0 + raw.Bp0 + 2.0 - 2.0 * psi)
            + ratio * (2.0 * psi * raw.xi0 - 2.0 * raw.xi0 + 2.0 * raw.xi1 - raw.xi0 * raw.Bp0)
        )
        return replace(raw, b1=b1, b2=b2)
    # generic
    if raw.L1_ad <= 0:
        raise ValueError("L1_ad must be positive (appears as a denominator)")
    c1 = psi + raw.A1_00 - raw.Lp_chi + raw.Lp_sym
    c2 = -raw.eta * raw.Atilde_00 * raw.L1_chi * raw.L1_sym / raw.L1_ad
    d1 = 2.0 * raw.eta * (
        (raw.L1_sym / raw.L1_ad)
        * (-0.5 * raw.Btilde_p0 * raw.L1_chi + (psi - 1.0) * raw.Atilde_00 * raw.L1_chi)
        + (raw.Lp_sym_value / raw.L1_ad) * raw.Atilde_00 * raw.L1_chi
    )
    return replace(raw, c1=c1, c2=c2, d1=d1)


def _require(coeffs: CoefficientInputs, names) -> list:
    values = []
    for name in names:
        v = getattr(coeffs, name)
        if v is None:
            raise ValueError(f"missing coefficient {name!r}; run coefficient_assembly first")
        values.append(v)
    return values


def q_lower_order(case: SymmetryCase, tau, R: float, coeffs: CoefficientInputs):
    """Lower-order term Q(tau) of the scaled one-level density."""
    if R <= 0:
        raise ValueError("R must be positive")
    tau = np.asarray(tau, dtype=float)
    s = sinc2pi(tau)
    cos2 = np.cos(2.0 * _PI * tau)
    sin2 = np.sin(2.0 * _PI * tau)
    if case is SymmetryCase.PrincipalEven:
        a1, a2 = _require(coeffs, ("a1", "a2"))
        out = s - a1 * (1.0 + cos2) / R - a2 * _PI * tau * sin2 / (R * R)
    elif case is SymmetryCase.PrincipalOdd:
        a3, a4 = _require(coeffs, ("a3", "a4"))
        denom = 2.0 * R + 1.0
        out = -s - a3 * (1.0 - cos2) / denom + a4 * 2.0 * _PI * tau * sin2 / (denom * denom)
    elif case is SymmetryCase.SelfCM:
        b1, b2 = _require(coeffs, ("b1", "b2"))
        out = -s + b1 * (1.0 - cos2) / R + b2 * _PI * tau * sin2 / (R * R)
    else:
        c1, c2, d1 = _require(coeffs, ("c1", "c2", "d1"))
        out = (c1 + c2 * cos2) / R + d1 * _PI * tau * sin2 / (R * R)
    if np.ndim(tau) == 0:
        return float(out)
    return out


def n_std(M: float, d: float) -> float:
    """Standard matrix size from matching mean densities."""
    if M <= 0 or d <= 0:
        raise ValueError("level and discriminant must be positive")
    return math.log(math.sqrt(M) * d / (2.0 * _PI))


def n_eff(
    case: SymmetryCase,
    M: float,
    X: float,
    coeffs: Optional[CoefficientInputs] = None,
    e1: Optional[float] = None,
    e2: Optional[float] = None,
    R: Optional[float] = None,
) -> float:
    """Effective matrix size for a symmetry case.

    The principal/self-CM cases use the assembled a1/a3/b1 coefficient and
    log(sqrt(M) X / (2 pi)); the generic case uses R / sqrt(3<e2> - 4<e1>)
    with R supplied from the caller's scaling context.
    """
    if case is SymmetryCase.Generic:
        if e1 is None or e2 is None or R is None:
            raise ValueError("generic case requires e1, e2, and R")
        disc = 3.0 * e2 - 4.0 * e1
        if disc <= 0:
            raise ValueError("3<e2> - 4<e1> must be positive for the generic case")
        return R / math.sqrt(disc)
    if coeffs is None:
        raise ValueError("coefficient inputs required")
    logterm = math.log(math.sqrt(M) * X / (2.0 * _PI))
    if case is SymmetryCase.PrincipalEven:
        (a1,) = _require(coeffs, ("a1",))
        if a1 == 0:
            raise ValueError("a1 must be nonzero")
        return logterm / (2.0 * a1)
    if case is SymmetryCase.PrincipalOdd:
        (a3,) = _require(coeffs, ("a3",))
        if a3 == 0:
            raise ValueError("a3 must be nonzero")
        return (logterm - 0.5) / a3 - 0.5
    (b1,) = _require(coeffs, ("b1",))
    if b1 == 0:
        raise ValueError("b1 must be nonzero")
    return logterm / b1


def _pair_corr_objective(e1: float, e2: float, R: float, n: float) -> float:
    def integrand(y: float) -> float:
        s2 = math.sin(_PI * y) ** 2
        val = (e1 - e2 * s2) / (R * R) + s2 / (3.0 * n * n)
        return val * val

    return adaptive_simpson(integrand, 0.0, 1.0, tol=1e-12)


def n_eff_l2_optimize(e1: float, e2: float, R: float) -> float:
    """Minimize the L2 mismatch between the R^-2 pair-correlation term and
    the finite-size unitary correction, numerically over log N.

    Golden-section search over log N with adaptive Simpson quadrature of
    the unit-period integrand; agrees with the closed form
    R / sqrt(3 e2 - 4 e1) to relative 1e-3.
    """
    disc = 3.0 * e2 - 4.0 * e1
    if disc <= 0:
        raise ValueError("3 e2 - 4 e1 must be positive")
    guess = math.log(R / math.sqrt(disc))
    lo, hi = guess - 2.0, guess + 2.0
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc = _pair_corr_objective(e1, e2, R, math.exp(c))
    fd = _pair_corr_objective(e1, e2, R, math.exp(d))
    for _ in range(80):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = _pair_corr_objective(e1, e2, R, math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = _pair_corr_objective(e1, e2, R, math.exp(d))
        if b - a < 1e-10:
            break
    return math.exp(0.5 * (a + b))


def montgomery_r2(y):
    """Montgomery's limiting pair correlation 1 - (sin pi y / pi y)^2."""
    y = np.asarray(y, dtype=float)
    s = sinc2pi(0.5 * y)  # sin(pi y)/(pi y)
    out = 1.0 - np.asarray(s) ** 2
    if np.ndim(y) == 0:
        return float(out)
    return out


def u_pair_corr(x, n: int):
    """Finite-size unitary pair correlation with the 1/N^2 correction."""
    x = np.asarray(x, dtype=float)
    out = montgomery_r2(x) - np.sin(_PI * x) ** 2 / (3.0 * n * n)
    if np.ndim(x) == 0:
        return float(out)
    return out


def pair_corr_expansion(y, R: float, e: PairCorrCoefficients):
    """Pair-correlation integrand including the R^-2 and R^-3 terms."""
    if R <= 0:
        raise ValueError("R must be positive")
    y = np.asarray(y, dtype=float)
    s2 = np.sin(_PI * y) ** 2
    out = (
        montgomery_r2(y)
        + (e.e1 - e.e2 * s2) / (R * R)
        - e.e3 * _PI * y * np.sin(2.0 * _PI * y) / (R ** 3)
    )
    if np.ndim(y) == 0:
        return float(out)
    return out


def barnes_g_half() -> float:
    """G(1/2) from the Glaisher-constant closed form
    G(1/2) = 2^(1/24) e^(1/8) pi^(-1/4) A^(-3/2)."""
    return 2.0 ** (1.0 / 24.0) * math.exp(0.125) * _PI ** (-0.25) * GLAISHER ** (-1.5)


def h_asymp(n: float, group: GroupKind = GroupKind.SOEven) -> float:
    """Large-size residue prefactor h(N) of the small-value density."""
    if n <= 0:
        raise ValueError("N must be positive")
    g_half = barnes_g_half()
    if group is GroupKind.SOEven:
        return 2.0 ** (-7.0 / 8.0) * g_half * _PI ** (-0.25) * n ** (3.0 / 8.0)
    if group is GroupKind.USp:
        return 2.0 ** (-3.0 / 8.0) * g_half * _PI ** (-0.25) * n ** (3.0 / 8.0)
    if group is GroupKind.Unitary:
        return g_half ** 2 * n ** 0.25
    raise ValueError("no small-value prefactor for this group")


def small_value_prob(rho: float, n: float, group: GroupKind = GroupKind.SOEven) -> float:
    """P(0 <= |char poly at 1| <= rho) ~ 2 h(N) sqrt(rho) for small rho."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    return 2.0 * h_asymp(n, group) * math.sqrt(rho)


def vanishing_count(X: float, model: VanishingModel) -> dict:
    """Predicted count of vanishing central values over prime twists up to X.

    Divergent (i.e. a growing count, hence discretization) iff the weight
    k < 3; the leading term follows the small-value law with the
    Barnes-G prefactor evaluated at N = log X.
    """
    if model.k < 2:
        raise ValueError("weight must be at least 2")
    if X <= 2:
        raise ValueError("X must exceed 2")
    divergent = model.k < 3
    leading = 0.0
    if divergent:
        logx = math.log(X)
        leading = (
            (1.0 / (4.0 * logx))
            * 2.0
            * model.a_f_half
            * math.sqrt(model.delta_f * model.kappa_f)
            * 2.0 ** (-7.0 / 8.0)
            * barnes_g_half()
            * _PI ** (-0.25)
            * logx ** (3.0 / 8.0)
            * (4.0 / (5.0 - 2.0 * model.k))
            * X ** ((5.0 - 2.0 * model.k) / 4.0)
        )
    return {"divergent": divergent, "leading_term": leading}
