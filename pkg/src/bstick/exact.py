"""Closed-form broken-stick probabilities, evaluated in exact rational arithmetic.

Everything in this module returns :class:`fractions.Fraction` values.  The
general k-gon formula is an alternating sum whose terms carry binomial
coefficients, so double precision would lose all accuracy for large n; exact
arithmetic keeps every cross-formula comparison an equality test.  A guarded
double-precision path (:func:`prob_all_kgon_float`) exists for trend
exploration beyond the rational-arithmetic cap.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .kernel import Rational, beta_int, binomial, falling_product, fibonacci, pochhammer

__all__ = [
    "DEFAULT_N_CAP",
    "CapExceededError",
    "CancellationWarning",
    "ProblemSpec",
    "prob_all_kgon",
    "prob_all_kgon_float",
    "prob_all_ngon",
    "prob_all_triangle",
    "prob_all_quadrilateral_beta",
    "prob_all_pentagon_beta",
    "whitworth_survivor",
    "joint_spacing_survivor",
    "prob_exists_triangle",
    "alternating_factorial_identity",
]

# Rational bit-growth stays desk-scale up to here; raise explicitly if needed.
DEFAULT_N_CAP = 200


class CapExceededError(Exception):
    """Piece count exceeds the configured exact-arithmetic cap."""


class CancellationWarning(UserWarning):
    """The floating-point sum lost essentially all significant digits."""


@dataclass(frozen=True)
class ProblemSpec:
    """A polygon probability problem: form a k-gon from n broken-stick pieces."""

    k: int
    n: int

    def __post_init__(self) -> None:
        if not 3 <= self.k <= self.n:
            raise ValueError(f"need 3 <= k <= n, got k={self.k}, n={self.n}")


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceededError(f"n={n} exceeds cap {cap}; pass a larger cap to override")


def prob_all_kgon(k: int, n: int, cap: int = DEFAULT_N_CAP) -> Rational:
    """Probability that every choice of k pieces out of n forms a k-gon.

    Exact evaluation of

        [n(n-1)...(n-k+3) / (n-k+2)] *
            sum_{j=1}^{n-k+2} (-1)^{j+1} j^{-(k-3)} C(n-k+2, j)
                              / ((n-k+2)/j + 1)_{k-2}

    The prefactor has exactly k-2 falling factors, and at k=3 the j^{-(k-3)}
    factor degenerates to 1 for every j.
    """
    spec = ProblemSpec(k, n)
    _check_cap(spec.n, cap)
    m = n - k + 2
    total = Fraction(0)
    for j in range(1, m + 1):
        term = Fraction(binomial(m, j), j ** (k - 3))
        term /= pochhammer(Fraction(m, j) + 1, k - 2)
        total += term if j % 2 == 1 else -term
    return Fraction(falling_product(n, k - 2), m) * total


def prob_all_kgon_float(k: int, n: int) -> float:
    """Double-precision variant of :func:`prob_all_kgon` for large n.

    Uses Kahan-compensated summation and emits :class:`CancellationWarning`
    when max|term| / |result| exceeds 1e12, at which point the returned value
    carries no trustworthy digits.
    """
    ProblemSpec(k, n)
    m = n - k + 2
    total = 0.0
    comp = 0.0
    max_abs = 0.0
    for j in range(1, m + 1):
        poch = 1.0
        base = m / j + 1.0
        for i in range(k - 2):
            poch *= base + i
        term = binomial(m, j) / (j ** (k - 3) * poch)
        if j % 2 == 0:
            term = -term
        max_abs = max(max_abs, abs(term))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    prefactor = falling_product(n, k - 2) / m
    result = prefactor * total
    if max_abs > 1e12 * abs(total):
        warnings.warn(
            f"catastrophic cancellation at k={k}, n={n}: "
            f"max|term|/|sum| = {max_abs / abs(total) if total else math.inf:.3g}",
            CancellationWarning,
            stacklevel=2,
        )
    return result


def prob_all_ngon(n: int, cap: int = DEFAULT_N_CAP) -> Rational:
    """Probability that the n pieces themselves form an n-gon: 1 - n/2^(n-1)."""
    if n < 3:
        raise ValueError("prob_all_ngon requires n >= 3")
    _check_cap(n, cap)
    return 1 - Fraction(n, 2 ** (n - 1))


def prob_all_triangle(n: int, cap: int = DEFAULT_N_CAP) -> Rational:
    """Probability that every triple of the n pieces forms a triangle: 1/C(2n-2, n)."""
    if n < 3:
        raise ValueError("prob_all_triangle requires n >= 3")
    _check_cap(n, cap)
    return Fraction(1, binomial(2 * n - 2, n))


def prob_all_quadrilateral_beta(n: int, cap: int = DEFAULT_N_CAP) -> Rational:
    """Every-4-subset probability via its Beta-function form.

    [n(n-1)/(n-2)] * ( B(n-1, (n-2)/2)/2 - B(n-1, n-2) ), exactly.
    """
    if n < 4:
        raise ValueError("prob_all_quadrilateral_beta requires n >= 4")
    _check_cap(n, cap)
    a = n - 1
    combo = Fraction(1, 2) * beta_int(a, Fraction(n - 2, 2)) - beta_int(a, n - 2)
    return Fraction(n * (n - 1), n - 2) * combo


def prob_all_pentagon_beta(n: int, cap: int = DEFAULT_N_CAP) -> Rational:
    """Every-5-subset probability via its Beta-function form.

    [n(n-1)(n-2)/(n-3)^2] *
        ( B(n-2, (n-3)/3)/2 + B(n-2, n-3)/2 - B(n-2, (n-3)/2) ), exactly.
    """
    if n < 5:
        raise ValueError("prob_all_pentagon_beta requires n >= 5")
    _check_cap(n, cap)
    a = n - 2
    combo = (
        Fraction(1, 2) * beta_int(a, Fraction(n - 3, 3))
        + Fraction(1, 2) * beta_int(a, n - 3)
        - beta_int(a, Fraction(n - 3, 2))
    )
    return Fraction(n * (n - 1) * (n - 2), (n - 3) ** 2) * combo


def whitworth_survivor(n: int, x: Rational, cap: int = DEFAULT_N_CAP) -> Rational:
    """P(largest spacing > x) for n uniform spacings of the unit interval.

    Inclusion-exclusion sum over j with jx < 1:
        sum (-1)^{j+1} (1 - jx)^{n-1} C(n, j)
    """
    if n < 2:
        raise ValueError("whitworth_survivor requires n >= 2")
    _check_cap(n, cap)
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError("whitworth_survivor requires 0 < x < 1")
    total = Fraction(0)
    j = 1
    while j * x < 1 and j <= n:
        term = (1 - j * x) ** (n - 1) * binomial(n, j)
        total += term if j % 2 == 1 else -term
        j += 1
    return total


def joint_spacing_survivor(c: Iterable[Rational]) -> Rational:
    """P(spacing_i > c_i for all i) = (1 - sum c_i)^(n-1), or 0 once sum c_i >= 1."""
    cs = [Fraction(ci) for ci in c]
    if not cs:
        raise ValueError("joint_spacing_survivor requires at least one bound")
    if any(ci < 0 for ci in cs):
        raise ValueError("joint_spacing_survivor requires nonnegative bounds")
    s = sum(cs, Fraction(0))
    if s >= 1:
        return Fraction(0)
    return (1 - s) ** (len(cs) - 1)


def prob_exists_triangle(n: int, cap: int = DEFAULT_N_CAP) -> Rational:
    """Probability that some triple of the n pieces forms a triangle.

    1 - n! * prod_{j=2}^{n} (F_{j+2} - 1)^{-1}, with F_1 = F_2 = 1.
    """
    if n < 3:
        raise ValueError("prob_exists_triangle requires n >= 3")
    _check_cap(n, cap)
    denom = 1
    for j in range(2, n + 1):
        denom *= fibonacci(j + 2) - 1
    return 1 - Fraction(math.factorial(n), denom)


def alternating_factorial_identity(k: int) -> bool:
    """Self-test: sum_{i=2}^{k-1} (-1)^i / ((i-1)!(k-1-i)!) == 1/(k-2)!.

    Both sides are evaluated exactly; returns their equality.
    """
    if k < 4:
        raise ValueError("alternating_factorial_identity requires k >= 4")
    lhs = Fraction(0)
    for i in range(2, k):
        term = Fraction(1, math.factorial(i - 1) * math.factorial(k - 1 - i))
        lhs += term if i % 2 == 0 else -term
    return lhs == Fraction(1, math.factorial(k - 2))
