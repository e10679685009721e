"""Fundamental-discriminant machinery and truncated Euler-product estimators.

Conventions documented once here:

- psi_d denotes the real quadratic character attached to a fundamental
  discriminant d, computed as a Kronecker symbol (d/.).
- psi_d(-M) factors as psi_d(-1) * psi_d(M), and psi_d(-1) = +1 for the
  positive fundamental discriminants this module enumerates, so the
  family conditions reduce to conditions on kronecker(d, M).
- d = 1 is excluded from every family (the untwisted form).
"""

from __future__ import annotations

import cmath
import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from excised_rmt.special import EULER_GAMMA, STIELTJES_GAMMA1
from excised_rmt.theory import SymmetryCase

_PI = math.pi
_SEGMENT = 1 << 20


def primes(limit: int) -> np.ndarray:
    """All primes <= limit via a segmented sieve of Eratosthenes."""
    limit = int(limit)
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    root = int(math.isqrt(limit))
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, int(math.isqrt(root)) + 1):
        if base[p]:
            base[p * p :: p] = False
    small = np.flatnonzero(base)
    if limit <= root:
        return small[small <= limit].astype(np.int64)
    chunks = [small.astype(np.int64)]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + _SEGMENT - 1, limit)
        seg = np.ones(hi - lo + 1, dtype=bool)
        for p in small:
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start > hi:
                continue
            seg[start - lo :: p] = False
        chunks.append((np.flatnonzero(seg) + lo).astype(np.int64))
        lo = hi + 1
    return np.concatenate(chunks)


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % p == 0:
            return n == p
    i = 37
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _squarefree_mask(n: int) -> np.ndarray:
    mask = np.ones(n + 1, dtype=bool)
    if n >= 0:
        mask[0] = False
    for i in range(2, int(math.isqrt(n)) + 1):
        mask[i * i :: i * i] = False
    return mask


def is_fundamental_discriminant(d: int) -> bool:
    """d is squarefree = 1 (mod 4), or 4m with m squarefree = 2, 3 (mod 4)."""
    d = int(d)
    if d == 0:
        raise ValueError("0 is not a discriminant")

    def squarefree(m: int) -> bool:
        m = abs(m)
        if m == 0:
            return False
        for i in range(2, int(math.isqrt(m)) + 1):
            if m % (i * i) == 0:
                return False
        return True

    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return (m % 4 in (2, 3)) and squarefree(m)
    return False


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extending the Jacobi/Legendre symbols."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class FamilySpec:
    """Arithmetic data selecting a family of quadratic twists."""

    M: int
    case: SymmetryCase
    X: int
    k: int = 2
    epsilon_f: int = 1
    Delta: int = 1
    residue_u: int = 1

    def __post_init__(self):
        if self.M % 2 == 0 or not is_prime(self.M):
            raise ValueError("level M must be an odd prime")
        if self.k < 2:
            raise ValueError("weight k must be >= 2")
        if self.epsilon_f not in (1, -1) or self.Delta not in (1, -1):
            raise ValueError("epsilon_f and Delta must be +1 or -1")
        if self.X < 3:
            raise ValueError("X must be >= 3")
        if self.case is SymmetryCase.Generic and not (0 < self.residue_u < self.M):
            raise ValueError("residue class U must satisfy 0 < U < M")


def fundamental_discriminants_up_to(X: int) -> np.ndarray:
    """Sorted positive fundamental discriminants d <= X (d = 1 included)."""
    X = int(X)
    if X < 1:
        return np.empty(0, dtype=np.int64)
    sf = _squarefree_mask(X)
    d = np.arange(X + 1, dtype=np.int64)
    part1 = d[(d % 4 == 1) & sf]
    q = X // 4
    if q >= 2:
        sfq = _squarefree_mask(q)
        m = np.arange(q + 1, dtype=np.int64)
        part2 = 4 * m[((m % 4 == 2) | (m % 4 == 3)) & sfq]
    else:
        part2 = np.empty(0, dtype=np.int64)
    return np.sort(np.concatenate([part1, part2]))


def _legendre_table(M: int) -> np.ndarray:
    table = np.zeros(M, dtype=np.int64)
    for r in range(1, M):
        table[r] = 1 if pow(r, (M - 1) // 2, M) == 1 else -1
    return table


def enumerate_family(spec: FamilySpec) -> np.ndarray:
    """All admissible fundamental discriminants 0 < d <= X, sorted.

    Case conditions on psi_d(-M) (equal to kronecker(d, M) for positive d):
    +epsilon_f for even principal twists, -epsilon_f for odd ones, Delta
    with gcd(d, M) = 1 for the self-CM case.  The generic case keeps one
    residue class d = U (mod M), matching its closed-form cardinality.
    """
    d = fundamental_discriminants_up_to(spec.X)
    d = d[d > 1]
    if spec.case is SymmetryCase.Generic:
        return d[d % spec.M == spec.residue_u]
    table = _legendre_table(spec.M)
    chi = table[d % spec.M]
    if spec.case is SymmetryCase.PrincipalEven:
        return d[chi * spec.epsilon_f == 1]
    if spec.case is SymmetryCase.PrincipalOdd:
        return d[chi * spec.epsilon_f == -1]
    return d[chi == spec.Delta]


def cardinality_estimate(spec: FamilySpec) -> float:
    """Closed-form size of the family up to O(sqrt(X))."""
    M, X = spec.M, spec.X
    if spec.case is SymmetryCase.Generic:
        return 3.0 * M * X / (_PI ** 2 * (M * M - 1.0))
    return 3.0 * M * X / (2.0 * _PI ** 2 * (M + 1.0))


def twisted_root_number(M: int, epsilon_f: complex, d: int, chi_f_of_d: complex) -> complex:
    """Root number of the quadratic twist: chi_f(d) * psi_d(-M) * epsilon_f."""
    d = int(d)
    if d <= 0:
        raise ValueError("d must be positive")
    if math.gcd(d, M) != 1:
        raise ValueError("d must be coprime to the level")
    psi = kronecker(d, M)  # psi_d(-M) for positive d
    return chi_f_of_d * psi * epsilon_f


def _odd_part(n: int) -> int:
    n = abs(n)
    while n % 2 == 0:
        n //= 2
    return n


def self_cm_root_number(D: int, d: int, epsilon_f: complex) -> complex:
    """Twisted root number for a self-CM form of level M = |D|.

    Evaluates chi_f(d) * psi_d(M) * epsilon_f via Kronecker symbols and
    cross-checks the reciprocity factor (-1)^((D'-1)(d'-1)/4) over the odd
    parts; for positive d coprime to the level both give epsilon_f.
    """
    M = abs(D)
    if math.gcd(d, M) != 1 or d <= 0:
        raise ValueError("d must be positive and coprime to the level")
    direct = kronecker(D, d) * kronecker(d, M) * epsilon_f
    dp = _odd_part(D) * (1 if D > 0 else -1)
    ddp = _odd_part(d)
    recip = (-1) ** (((dp - 1) * (ddp - 1)) // 4) * epsilon_f
    if direct != recip:
        raise ArithmeticError("reciprocity cross-check failed")
    return direct


def sum_log_family(spec: FamilySpec) -> dict:
    """Direct and closed-form values of sum over d of log(sqrt(M) d / 2 pi)."""
    d = enumerate_family(spec).astype(float)
    count = d.size
    direct = float(np.sum(np.log(math.sqrt(spec.M) * d / (2.0 * _PI))))
    closed = count * (math.log(math.sqrt(spec.M) * spec.X / (2.0 * _PI)) - 1.0)
    return {"direct": direct, "closed": closed, "gap": direct - closed, "count": count}


def oscillatory_family_sum(spec: FamilySpec, tau: float, R: float) -> dict:
    """Direct and closed-form values of the oscillatory family average
    sum over d of (sqrt(M) d / 2 pi)^(-2 pi i tau / R).

    The closed form is exact to O(sqrt(X)) only when R is tied to the
    family cutoff by R = log(sqrt(M) X / (2 pi)) - 1; for other R the
    residual phase does not cancel and the gap grows with X.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    d = enumerate_family(spec).astype(float)
    count = d.size
    base = np.log(math.sqrt(spec.M) * d / (2.0 * _PI))
    direct = complex(np.sum(np.exp(-2j * _PI * tau / R * base)))
    closed = (
        count
        * cmath.exp(-2j * _PI * tau - 2j * _PI * tau / R)
        / (1.0 - 2j * _PI * tau / R)
    )
    return {"direct": direct, "closed": closed, "gap": direct - closed, "count": count}


def satake(lambda_p: complex, chi_p: complex) -> Tuple[complex, complex]:
    """Roots (alpha, beta) of x^2 - lambda x + chi."""
    disc = cmath.sqrt(lambda_p * lambda_p - 4.0 * chi_p)
    return (lambda_p + disc) / 2.0, (lambda_p - disc) / 2.0


@dataclass
class NewformLocalData:
    """Hecke eigenvalue and nebentypus data at primes up to max_prime."""

    M: int
    k: int
    lam: Dict[int, complex]
    chi: Dict[int, complex]
    principal: bool = True

    def __post_init__(self):
        for p, lp in self.lam.items():
            if p != self.M and abs(lp) > 2.0 + 1e-9:
                raise ValueError(f"|lambda({p})| violates the Hecke eigenvalue bound")
        for p, cp in self.chi.items():
            if p == self.M:
                if cp != 0:
                    raise ValueError("chi must vanish at the level in the ramified convention")
            elif abs(abs(cp) - 1.0) > 1e-9:
                raise ValueError(f"|chi({p})| must be 1 away from the level")

    @property
    def max_prime(self) -> int:
        return max(self.lam) if self.lam else 0

    def chi_prime(self, p: int) -> complex:
        """Value of the primitive character inducing the nebentypus."""
        if self.principal:
            return 1.0
        return self.chi[p]

    @classmethod
    def from_csv(cls, path, M: int, k: int, principal: bool = True) -> "NewformLocalData":
        lam: Dict[int, complex] = {}
        chi: Dict[int, complex] = {}
        last = 0
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            required = {"p", "re_lambda", "im_lambda", "re_chi", "im_chi"}
            if reader.fieldnames is None or not required.issubset(reader.fieldnames):
                raise ValueError("newform data CSV must have header p,re_lambda,im_lambda,re_chi,im_chi")
            for row in reader:
                p = int(row["p"])
                if p <= last:
                    raise ValueError("primes must be ascending")
                last = p
                lam[p] = complex(float(row["re_lambda"]), float(row["im_lambda"]))
                chi[p] = complex(float(row["re_chi"]), float(row["im_chi"]))
        return cls(M=M, k=k, lam=lam, chi=chi, principal=principal)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write("p,re_lambda,im_lambda,re_chi,im_chi\n")
            for p in sorted(self.lam):
                lp, cp = self.lam[p], self.chi[p]
                fh.write(
                    f"{p},{lp.real:.17g},{lp.imag:.17g},{cp.real:.17g},{cp.imag:.17g}\n"
                )


def lambda_power(data: NewformLocalData, p: int, m: int, cross_check: bool = False) -> complex:
    """lambda(p^m) from the Hecke recurrence, optionally cross-checked
    against the Satake power sum."""
    lam, chi = data.lam[p], data.chi[p]
    values = [1.0 + 0j, lam]
    for j in range(1, m):
        values.append(lam * values[j] - chi * values[j - 1])
    out = values[m] if m >= 0 else 0.0
    if cross_check:
        alpha, beta = satake(lam, chi)
        total = sum(alpha ** l * beta ** (m - l) for l in range(m + 1))
        if abs(out - total) > 1e-10 * max(1.0, abs(out)):
            raise ArithmeticError("Hecke recurrence and Satake sum disagree")
    return out


def e_factor(case: SymmetryCase, epsilon_f: int = 1, Delta: int = 1, psi_d_M: int = 1) -> float:
    """The constant value of psi_d(M) over the family, per symmetry case."""
    if case is SymmetryCase.PrincipalEven:
        return -epsilon_f
    if case is SymmetryCase.PrincipalOdd:
        return float(epsilon_f)
    if case is SymmetryCase.SelfCM:
        return -Delta
    return float(psi_d_M)


def _sym_sq_local(data: NewformLocalData, p: int, s: complex) -> complex:
    """Local factor of the symmetric-square L-function at s."""
    if p == data.M:
        lam = data.lam[p]
        return 1.0 / (1.0 - lam * lam * p ** (-s))
    alpha, beta = satake(data.lam[p], data.chi[p])
    x = p ** (-s)
    return 1.0 / ((1.0 - alpha * alpha * x) * (1.0 - alpha * beta * x) * (1.0 - beta * beta * x))


def _chi_local(data: NewformLocalData, p: int, s: complex) -> complex:
    cp = data.chi_prime(p)
    if cp == 0:
        return 1.0
    return 1.0 / (1.0 - cp * p ** (-s))


def _y_local(data: NewformLocalData, p: int, alpha: complex, gamma: complex) -> complex:
    return (
        _chi_local(data, p, 1.0 + 2.0 * gamma)
        * _sym_sq_local(data, p, 1.0 + 2.0 * alpha)
        / (_chi_local(data, p, 1.0 + alpha + gamma) * _sym_sq_local(data, p, 1.0 + alpha + gamma))
    )


def _v_unramified(
    data: NewformLocalData, p: int, alpha: complex, gamma: complex, terms: int
) -> complex:
    lam_pows = [lambda_power(data, p, m) for m in range(2 * terms + 2)]
    x = p ** (-(1.0 + 2.0 * alpha))
    s1 = sum(lam_pows[2 * m] * x ** m for m in range(1, terms + 1))
    s2 = (data.lam[p] * p ** (-(1.0 + alpha + gamma))) * sum(
        lam_pows[2 * m + 1] * x ** m for m in range(0, terms + 1)
    )
    chi_f_p = 1.0 if data.principal else data.chi[p]
    s3 = (chi_f_p * p ** (-(1.0 + 2.0 * gamma))) * sum(
        lam_pows[2 * m] * x ** m for m in range(0, terms + 1)
    )
    return 1.0 + p / (p + 1.0) * (s1 - s2 + s3)


def _v_ramified(
    data: NewformLocalData, e: float, alpha: complex, gamma: complex, terms: int
) -> complex:
    M = data.M
    lam = data.lam[M]
    x = lam * e * M ** (-(0.5 + alpha))
    first = sum(x ** m for m in range(terms + 1))
    second = (lam / M ** (0.5 + gamma)) * e * sum(x ** m for m in range(terms + 1))
    return first - second


def a_f_value(
    data: NewformLocalData,
    e: float,
    alpha: complex,
    gamma: complex,
    P: int,
    terms: int = 40,
) -> Tuple[complex, float]:
    """Truncated arithmetic factor A_f(alpha, gamma) over primes <= P.

    Returns (value, tail_estimate), where the tail estimate is the total
    multiplicative drift contributed by the last decade of primes used —
    a proxy for the truncation error.
    """
    required = [int(p) for p in primes(P)]
    missing = [p for p in required if p not in data.lam]
    if missing:
        raise ValueError(f"newform data missing primes up to {P}: first missing {missing[0]}")
    plist = required
    value = 1.0 + 0.0j
    last_decade = 1.0 + 0.0j
    cutoff = P / 10.0
    for p in plist:
        if p == data.M:
            factor = _v_ramified(data, e, alpha, gamma, terms) / _y_local(data, p, alpha, gamma)
        else:
            factor = _v_unramified(data, p, alpha, gamma, terms) / _y_local(data, p, alpha, gamma)
        value *= factor
        if p > cutoff:
            last_decade *= factor
    return value, abs(last_decade - 1.0)


def truncated_a_f(
    data: NewformLocalData,
    case: SymmetryCase,
    r: complex,
    P: int,
    epsilon_f: int = 1,
    Delta: int = 1,
    terms: int = 40,
    tol: Optional[float] = None,
) -> dict:
    """A_f(r, r) truncated at P, with tail estimate and convergence flag."""
    if abs(r.real if isinstance(r, complex) else r) >= 0.25:
        raise ValueError("need |Re r| < 1/4")
    e = e_factor(case, epsilon_f=epsilon_f, Delta=Delta)
    value, tail = a_f_value(data, e, r, r, P, terms=terms)
    converged = tail <= (tol if tol is not None else 1e-3)
    return {"value": value, "tail_estimate": tail, "converged": converged}


def a1_00(
    data: NewformLocalData,
    case: SymmetryCase,
    P: int,
    epsilon_f: int = 1,
    Delta: int = 1,
    step: float = 1e-3,
    terms: int = 40,
) -> complex:
    """d/d alpha at (0,0) of A_f, via central differences with Richardson
    extrapolation (steps h and 2h)."""
    e = e_factor(case, epsilon_f=epsilon_f, Delta=Delta)

    def deriv(h: float) -> complex:
        plus, _ = a_f_value(data, e, h, 0.0, P, terms=terms)
        minus, _ = a_f_value(data, e, -h, 0.0, P, terms=terms)
        return (plus - minus) / (2.0 * h)

    d1 = deriv(step)
    d2 = deriv(2.0 * step)
    return (4.0 * d1 - d2) / 3.0


def e_coefficients_from_inputs(
    M: int,
    lambda_M_sq: float,
    App0: float = 0.0,
    Appp0: float = 0.0,
    Lp_ad_prime: float = 0.0,
) -> Tuple[float, float, float]:
    """Pair-correlation coefficients (e1, e2, e3) from raw inputs."""
    if lambda_M_sq <= 0:
        raise ValueError("|lambda(M)|^2 must be positive")
    e1 = 0.5 * math.log(M) ** 2 / (M / lambda_M_sq - 1.0)
    e2 = -2.0 + EULER_GAMMA ** 2 + 2.0 * STIELTJES_GAMMA1 - App0 / 2.0 - Lp_ad_prime
    e3 = (16.0 + Appp0) / 12.0
    return e1, e2, e3
