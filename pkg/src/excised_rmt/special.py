"""In-house special functions and quadrature helpers.

Kept dependency-free on purpose: digamma via recurrence plus asymptotic
series, the Glaisher-Kinkelin constant as a stored high-precision literal,
and adaptive Simpson quadrature.
"""

from __future__ import annotations

import math

# Euler-Mascheroni constant gamma.
EULER_GAMMA = 0.57721566490153286060651209008240243104215933593992

# First Stieltjes constant gamma_1.
STIELTJES_GAMMA1 = -0.072815845483676724860586375874901319137736338334338

# Glaisher-Kinkelin constant A, 30 significant digits.
# Defined by log A = 1/12 - zeta'(-1); the literal below is the standard
# decimal expansion truncated to double precision needs.
GLAISHER = 1.28242712910062263687534256886979172776768892732500

_PI = math.pi


def digamma(x: float) -> float:
    """Digamma function psi(x) = Gamma'(x)/Gamma(x) for real x > 0.

    Uses the recurrence psi(x) = psi(x+1) - 1/x to shift the argument
    above 10, then the asymptotic series with Bernoulli-number
    coefficients through B_14.  Accurate to ~1e-15 relative.
    """
    if not math.isfinite(x):
        raise ValueError("digamma: argument must be finite")
    if x <= 0.0 and x == math.floor(x):
        raise ValueError("digamma: nonpositive integer argument")
    result = 0.0
    if x < 0.0:
        # reflection: psi(1-x) - psi(x) = pi/tan(pi x)
        return digamma(1.0 - x) - _PI / math.tan(_PI * x)
    while x < 10.0:
        result -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = inv2 * (
        1.0 / 12.0
        - inv2
        * (
            1.0 / 120.0
            - inv2
            * (
                1.0 / 252.0
                - inv2
                * (
                    1.0 / 240.0
                    - inv2
                    * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 * (1.0 / 12.0)))
                )
            )
        )
    )
    return result + math.log(x) - 0.5 / x - series


def _simpson(f, a, fa, b, fb, m, fm):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(f, a, fa, m, fm, lm, flm)
    right = _simpson(f, m, fm, b, fb, rm, frm)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) + _adaptive(
        f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1
    )


def adaptive_simpson(
    f, a: float, b: float, tol: float = 1e-10, max_depth: int = 48, panels: int = 8
) -> float:
    """Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.

    The interval is pre-split into several panels before adapting: for
    oscillatory integrands a single coarse Simpson estimate can agree with
    its refinement by cancellation, which would stop the recursion early.
    """
    if a == b:
        return 0.0
    edges = [a + (b - a) * i / panels for i in range(panels + 1)]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        flo, fhi = f(lo), f(hi)
        m = 0.5 * (lo + hi)
        fm = f(m)
        whole = _simpson(f, lo, flo, hi, fhi, m, fm)
        total += _adaptive(f, lo, flo, hi, fhi, m, fm, whole, tol / panels, max_depth)
    return total


def sinc2pi(tau):
    """sin(2*pi*tau) / (2*pi*tau) with the removable singularity at 0."""
    import numpy as np

    t = np.asarray(tau, dtype=float)
    x = 2.0 * _PI * t
    small = np.abs(x) < 1e-4
    with_series = 1.0 - x * x / 6.0
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.where(small, 1.0, np.sin(np.where(small, 1.0, x)) / np.where(small, 1.0, x))
    out = np.where(small, with_series, direct)
    if np.isscalar(tau) or getattr(tau, "ndim", 0) == 0:
        return float(out)
    return out


def sin_ratio(m: int, theta):
    """sin(m*theta) / sin(theta) for integer m, stable near multiples of pi.

    Near theta = s*pi the quotient has a removable singularity with limit
    (-1)^(s*(m-1)) * m; we shift to u = theta - s*pi where both sine
    evaluations are well conditioned.
    """
    import numpy as np

    t = np.asarray(theta, dtype=float)
    s = np.rint(t / _PI)
    u = t - s * _PI
    sign = np.where((s.astype(np.int64) * (m - 1)) % 2 == 0, 1.0, -1.0)
    tiny = np.abs(u) < 1e-8
    num = np.sin(m * u)
    den = np.where(tiny, 1.0, np.sin(u))
    direct = num / den
    series = m * (1.0 - (m * m - 1.0) * u * u / 6.0)
    out = sign * np.where(tiny, series, direct)
    if np.isscalar(theta) or getattr(theta, "ndim", 0) == 0:
        return float(out)
    return out
