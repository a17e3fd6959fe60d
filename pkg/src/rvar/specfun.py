"""Special functions used by the closed-form risk measures.

All functions are real-valued and pure. Accuracy targets: 1e-12 relative
for the incomplete gamma, 1e-10 for the exponential integrals and the
logarithmic integral (away from its singularity at 1).
"""

import math

from scipy.special import exp1, expi, gamma as _gamma, gammaincc

from .errors import DomainError

EULER_GAMMA = 0.5772156649015329


def upper_incomplete_gamma(s: float, a: float) -> float:
    """Gamma(s, a) = integral of t^(s-1) e^(-t) over [a, inf).

    Supports every real s for a > 0; a = 0 requires s > 0 (the integral
    diverges otherwise). Negative s is reached by downward recurrence
    Gamma(s, a) = (Gamma(s+1, a) - a^s e^(-a)) / s from a base order in
    (0, 1] where the regularized routine is accurate.
    """
    if a < 0:
        raise DomainError(f"upper_incomplete_gamma requires a >= 0, got a={a}")
    if a == 0:
        if s <= 0:
            raise DomainError(
                f"Gamma(s, 0) diverges for s <= 0, got s={s}"
            )
        return float(_gamma(s))
    if s > 0:
        return float(gammaincc(s, a) * _gamma(s))
    if s == int(s):
        # integer chain bottoms out at Gamma(0, a) = E1(a)
        g = float(exp1(a))
        order = 0.0
    else:
        order = s - math.floor(s)
        g = float(gammaincc(order, a) * _gamma(order))
    while order > s:
        order -= 1.0
        g = (g - a**order * math.exp(-a)) / order
    return g


def log_integral(x: float) -> float:
    """li(x) = integral of dt/ln(t) over [0, x], for 0 <= x < 1.

    Monotone decreasing on (0, 1), li(0) = 0, and li(x) -> -inf as x -> 1.
    Values are refused within 1e-12 of the singularity.
    """
    if x < 0 or x > 1 - 1e-12:
        raise DomainError(f"log_integral defined on [0, 1), got x={x}")
    if x == 0:
        return 0.0
    # substitute t = e^{-w}: li(x) = -E1(-ln x)
    return float(-exp1(-math.log(x)))


def exp_integral_ei(x: float) -> float:
    """Ei(x), the principal-value exponential integral, x != 0."""
    if x == 0:
        raise DomainError("Ei has a singularity at x = 0")
    return float(expi(x))


def exp_integral_e1(x: float) -> float:
    """E1(x) = -Ei(-x) for x > 0."""
    if x <= 0:
        raise DomainError(f"E1 requires x > 0, got x={x}")
    return float(exp1(x))
