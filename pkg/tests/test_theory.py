"""Closed-form densities, coefficients, effective sizes, and small-value law."""

import math

import mpmath
import numpy as np
import pytest

from excised_rmt.groups import GroupKind
from excised_rmt.special import EULER_GAMMA, STIELTJES_GAMMA1, adaptive_simpson
from excised_rmt.theory import (
    CoefficientInputs,
    PairCorrCoefficients,
    SymmetryCase,
    VanishingModel,
    barnes_g_half,
    coefficient_assembly,
    exact_scaled_density,
    finite_n_density,
    h_asymp,
    montgomery_r2,
    n_eff,
    n_eff_l2_optimize,
    n_std,
    pair_corr_expansion,
    q_lower_order,
    scaled_density_expansion,
    small_value_prob,
    u_pair_corr,
    vanishing_count,
)


# --- finite-size densities -------------------------------------------------

@pytest.mark.parametrize(
    "group,n,hi,mass",
    [
        (GroupKind.SOEven, 7, math.pi, 7.0),
        (GroupKind.USp, 7, math.pi, 7.0),
        (GroupKind.SOOdd, 7, 2 * math.pi, 14.0),  # forced zero excluded
        (GroupKind.Unitary, 7, 2 * math.pi, 7.0),
    ],
)
def test_density_total_mass(group, n, hi, mass):
    total = adaptive_simpson(lambda t: finite_n_density(group, n, t), 0.0, hi, tol=1e-11)
    assert total == pytest.approx(mass, abs=1e-8)


def test_density_nonnegative():
    grid = np.linspace(0.0, math.pi, 400)
    for group in (GroupKind.SOEven, GroupKind.USp):
        assert np.all(finite_n_density(group, 9, grid) > -1e-12)
    grid2 = np.linspace(0.0, 2 * math.pi, 400)
    for group in (GroupKind.SOOdd, GroupKind.Unitary):
        assert np.all(finite_n_density(group, 9, grid2) > -1e-12)


def test_density_against_eigen_kernel_oracle():
    # independent oracle: the density of a classical compact group is the
    # diagonal of the Christoffel-Darboux-type kernel, computed here by the
    # raw trig sums
    n = 6
    theta = 0.37
    # direct form: (2N-1)/(2pi) + sin((2N-1)t)/(2pi sin t)
    direct = (2 * n - 1) / (2 * math.pi) + math.sin((2 * n - 1) * theta) / (
        2 * math.pi * math.sin(theta)
    )
    assert finite_n_density(GroupKind.SOEven, n, theta) == pytest.approx(direct, rel=1e-12)
    # Dirichlet-kernel identity: sin((2N-1)t)/sin t = 1 + 2 sum_{m<N} cos(2mt)
    dirichlet = 1.0 + 2.0 * sum(math.cos(2 * m * theta) for m in range(1, n))
    assert direct == pytest.approx(((2 * n - 1) + dirichlet) / (2 * math.pi), rel=1e-10)


@pytest.mark.parametrize("group", [GroupKind.SOEven, GroupKind.SOOdd, GroupKind.USp])
def test_scaled_expansion_converges_to_exact(group):
    # the order-2 expansion must approach the exact scaled kernel at rate 1/N^3
    taus = np.linspace(0.07, 2.9, 41)
    errs = []
    for n in (20, 40):
        exact = np.array([exact_scaled_density(group, n, t) for t in taus])
        approx = np.array([scaled_density_expansion(group, n, t, order=2) for t in taus])
        errs.append(np.max(np.abs(exact - approx)))
    assert errs[1] < errs[0] / 6.0  # at least ~1/N^3 decay between N=20 and 40


def test_scaled_expansion_orders_nested():
    # order 1 must beat order 0, order 2 must beat order 1 (in L1 over a grid)
    taus = np.linspace(0.05, 3.0, 200)
    n = 15
    group = GroupKind.USp
    exact = np.array([exact_scaled_density(group, n, t) for t in taus])
    l1 = []
    for order in (0, 1, 2):
        approx = np.array([scaled_density_expansion(group, n, t, order=order) for t in taus])
        l1.append(np.mean(np.abs(exact - approx)))
    assert l1[1] < l1[0] and l1[2] < l1[1]


def test_scaled_expansion_infinite_size_is_limit():
    assert scaled_density_expansion(GroupKind.SOEven, math.inf, 0.4, order=0) == pytest.approx(
        1.0 + math.sin(2 * math.pi * 0.4) / (2 * math.pi * 0.4)
    )
    assert scaled_density_expansion(GroupKind.Unitary, math.inf, 1.3, order=2) == 1.0


# --- coefficient assembly --------------------------------------------------

def test_a1_with_toy_inputs():
    # with all L-function constants zeroed and weight 2,
    # a1 = 1 - psi(1) + gamma = 1 + 2 gamma
    cs = coefficient_assembly(SymmetryCase.PrincipalEven, CoefficientInputs())
    assert cs.a1 == pytest.approx(1.0 + 2.0 * EULER_GAMMA, abs=1e-12)


def test_a3_with_toy_inputs():
    cs = coefficient_assembly(SymmetryCase.PrincipalOdd, CoefficientInputs())
    assert cs.a3 == pytest.approx(2.0 + 2.0 * EULER_GAMMA + 2.0 * STIELTJES_GAMMA1, abs=1e-12)


def test_b1_with_toy_inputs():
    cs = coefficient_assembly(SymmetryCase.SelfCM, CoefficientInputs())
    assert cs.b1 == pytest.approx(1.0 + EULER_GAMMA, abs=1e-12)


def test_c1_with_toy_inputs():
    cs = coefficient_assembly(SymmetryCase.Generic, CoefficientInputs())
    assert cs.c1 == pytest.approx(-EULER_GAMMA, abs=1e-12)
    assert cs.c2 == 0.0 and cs.d1 == 0.0


def test_weight_enters_through_digamma():
    # psi(k/2) changes with k; a1 = 1 - psi(k/2) + gamma for zeroed inputs
    for k in (2, 4, 6):
        cs = coefficient_assembly(SymmetryCase.PrincipalEven, CoefficientInputs(k=k))
        expected = 1.0 - float(mpmath.digamma(k / 2)) + EULER_GAMMA
        assert cs.a1 == pytest.approx(expected, abs=1e-11)


def test_q_lower_order_requires_assembled():
    with pytest.raises(ValueError):
        q_lower_order(SymmetryCase.PrincipalEven, 0.5, 8.0, CoefficientInputs())


def test_q_lower_order_limits():
    # as R -> inf, Q approaches +/- sinc (principal cases) or 0 (generic)
    cs_e = coefficient_assembly(SymmetryCase.PrincipalEven, CoefficientInputs())
    cs_o = coefficient_assembly(SymmetryCase.PrincipalOdd, CoefficientInputs())
    cs_g = coefficient_assembly(SymmetryCase.Generic, CoefficientInputs())
    tau = 0.63
    sinc = math.sin(2 * math.pi * tau) / (2 * math.pi * tau)
    assert q_lower_order(SymmetryCase.PrincipalEven, tau, 1e9, cs_e) == pytest.approx(sinc, abs=1e-7)
    assert q_lower_order(SymmetryCase.PrincipalOdd, tau, 1e9, cs_o) == pytest.approx(-sinc, abs=1e-7)
    assert q_lower_order(SymmetryCase.Generic, tau, 1e9, cs_g) == pytest.approx(0.0, abs=1e-7)


# --- effective sizes -------------------------------------------------------

def test_n_std_reference_value():
    assert n_std(11, 9960) == pytest.approx(math.log(math.sqrt(11) * 9960 / (2 * math.pi)))
    assert n_std(11, 9960) == pytest.approx(8.5674, abs=5e-4)


def test_n_eff_closed_forms():
    cs = coefficient_assembly(SymmetryCase.PrincipalEven, CoefficientInputs())
    logterm = math.log(math.sqrt(11) * 9960 / (2 * math.pi))
    assert n_eff(SymmetryCase.PrincipalEven, 11, 9960, coeffs=cs) == pytest.approx(
        logterm / (2 * cs.a1)
    )
    cs_o = coefficient_assembly(SymmetryCase.PrincipalOdd, CoefficientInputs())
    assert n_eff(SymmetryCase.PrincipalOdd, 11, 9960, coeffs=cs_o) == pytest.approx(
        (logterm - 0.5) / cs_o.a3 - 0.5
    )
    cs_b = coefficient_assembly(SymmetryCase.SelfCM, CoefficientInputs())
    assert n_eff(SymmetryCase.SelfCM, 11, 9960, coeffs=cs_b) == pytest.approx(logterm / cs_b.b1)


def test_n_eff_generic_closed_form_and_errors():
    assert n_eff(SymmetryCase.Generic, 0, 0, e1=0.1, e2=1.0, R=7.0) == pytest.approx(
        7.0 / math.sqrt(3.0 - 0.4)
    )
    with pytest.raises(ValueError):
        n_eff(SymmetryCase.Generic, 0, 0, e1=1.0, e2=1.0, R=7.0)


def test_l2_optimizer_matches_closed_form():
    for e1, e2, R in [(0.024, 2.0, 8.5), (0.0, 1.0, 5.0), (0.3, 3.0, 12.0)]:
        closed = R / math.sqrt(3 * e2 - 4 * e1)
        assert n_eff_l2_optimize(e1, e2, R) == pytest.approx(closed, rel=1e-3)


def test_l2_optimizer_rejects_inadmissible():
    with pytest.raises(ValueError):
        n_eff_l2_optimize(1.0, 0.5, 8.0)


# --- pair correlation ------------------------------------------------------

def test_montgomery_r2_values():
    assert montgomery_r2(0.0) == pytest.approx(0.0)
    assert montgomery_r2(1.0) == pytest.approx(1.0)
    assert montgomery_r2(0.5) == pytest.approx(1.0 - (2.0 / math.pi) ** 2)


def test_u_pair_corr_reduces_at_half_integers():
    # the finite-size correction is -sin^2(pi x)/(3 N^2), largest at x=1/2
    n = 6
    assert u_pair_corr(0.5, n) == pytest.approx(montgomery_r2(0.5) - 1.0 / (3 * n * n))
    assert u_pair_corr(1.0, n) == pytest.approx(montgomery_r2(1.0))


def test_pair_corr_expansion_limits():
    e = PairCorrCoefficients(e1=0.5, e2=1.5, e3=2.0)
    y = 0.77
    assert pair_corr_expansion(y, 1e9, e) == pytest.approx(montgomery_r2(y), abs=1e-9)
    # R^-2 term has the stated sign structure
    R = 10.0
    expected = (
        montgomery_r2(y)
        + (e.e1 - e.e2 * math.sin(math.pi * y) ** 2) / R**2
        - e.e3 * math.pi * y * math.sin(2 * math.pi * y) / R**3
    )
    assert pair_corr_expansion(y, R, e) == pytest.approx(expected, rel=1e-12)


# --- small values and vanishing --------------------------------------------

def test_barnes_g_half_matches_oracle():
    assert barnes_g_half() == pytest.approx(float(mpmath.barnesg(mpmath.mpf(1) / 2)), abs=1e-12)


def test_h_asymp_forms():
    g = barnes_g_half()
    assert h_asymp(12, GroupKind.SOEven) == pytest.approx(
        2 ** (-7 / 8) * g * math.pi ** (-0.25) * 12 ** (3 / 8)
    )
    assert h_asymp(12, GroupKind.USp) == pytest.approx(
        2 ** (-3 / 8) * g * math.pi ** (-0.25) * 12 ** (3 / 8)
    )
    assert h_asymp(12, GroupKind.Unitary) == pytest.approx(g**2 * 12**0.25)
    with pytest.raises(ValueError):
        h_asymp(12, GroupKind.SOOdd)


def test_small_value_prob_scaling():
    # P scales as sqrt(rho)
    p1 = small_value_prob(1e-4, 10)
    p2 = small_value_prob(4e-4, 10)
    assert p2 == pytest.approx(2.0 * p1, rel=1e-12)
    assert small_value_prob(0.0, 10) == 0.0


def test_vanishing_count_weight_threshold():
    m2 = VanishingModel(k=2, delta_f=1.0, kappa_f=1.0)
    assert vanishing_count(1e6, m2)["divergent"]
    assert vanishing_count(1e6, m2)["leading_term"] > 0
    m3 = VanishingModel(k=3, delta_f=1.0, kappa_f=1.0)
    assert not vanishing_count(1e6, m3)["divergent"]
    with pytest.raises(ValueError):
        vanishing_count(1e6, VanishingModel(k=1, delta_f=1.0, kappa_f=1.0))


def test_vanishing_count_growth_rate():
    # for weight 2 the count grows like X^(1/4) / log X up to constants
    m = VanishingModel(k=2, delta_f=1.0, kappa_f=1.0)
    r1 = vanishing_count(1e6, m)["leading_term"]
    r2 = vanishing_count(1e8, m)["leading_term"]
    ratio = r2 / r1
    expected = (1e8 / 1e6) ** 0.25 * (math.log(1e6) / math.log(1e8)) * (
        math.log(1e8) / math.log(1e6)
    ) ** (3 / 8)
    assert ratio == pytest.approx(expected, rel=1e-10)


def test_symmetry_case_group_map():
    assert SymmetryCase.PrincipalEven.group is GroupKind.SOEven
    assert SymmetryCase.PrincipalOdd.group is GroupKind.SOOdd
    assert SymmetryCase.SelfCM.group is GroupKind.USp
    assert SymmetryCase.Generic.group is GroupKind.Unitary
