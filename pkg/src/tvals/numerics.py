"""Certified numeric building blocks: constants, exact sequences, tail sums.

Everything here is either exact integer/rational arithmetic or an
:class:`~tvals.enclosure.Enclosure` produced with explicit remainder bounds:

* ``const_pi`` sums a Machin arctangent combination in fixed point; the
  alternating-series remainder is bounded by the first omitted term.
* ``const_catalan`` combines a central-binomial series with a logarithm
  evaluated by an inverse-hyperbolic-tangent series; both have positive terms
  with certified geometric term ratios (1/4 and 1/3), giving closed-form
  tail bounds.
* ``odd_power_tail`` encloses sums of reciprocal odd powers beyond a cutoff
  using an Euler--Maclaurin expansion in ``w = 1/(2n+1)`` whose remainder is
  bounded by the first omitted term (the summand is completely monotone).

All functions are pure; memoization caches only deterministic values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .enclosure import Enclosure
from .errors import DivergentError

__all__ = [
    "PrecisionBudget",
    "bernoulli_fraction",
    "euler_int",
    "const_pi",
    "const_catalan",
    "base_expansion",
    "evaluate_expansion",
    "expansion_remainder_bound",
    "odd_power_tail",
]

_GUARD_BITS = 32


@dataclass(frozen=True)
class PrecisionBudget:
    """Resource ceiling for adaptive evaluation.

    ``start_bits`` is the first precision rung, ``max_bits`` the ceiling
    (rungs double), and ``max_terms`` caps the number of summation terms any
    single direct evaluation may spend.
    """

    start_bits: int = 64
    max_bits: int = 4096
    max_terms: int = 10_000_000

    def __post_init__(self) -> None:
        if self.start_bits < 8:
            raise ValueError("start_bits must be at least 8")
        if self.max_bits < self.start_bits:
            raise ValueError("max_bits must be at least start_bits")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")

    def rungs(self) -> Iterator[int]:
        """Yield precision rungs ``start, 2*start, ...`` capped at ``max_bits``."""
        bits = self.start_bits
        while True:
            yield bits
            if bits >= self.max_bits:
                return
            bits = min(bits * 2, self.max_bits)


# ----------------------------------------------------------------------
# exact integer sequences
# ----------------------------------------------------------------------
@lru_cache(maxsize=None)
def bernoulli_fraction(n: int) -> Fraction:
    """Exact Bernoulli number ``B_n`` (``B_1 = -1/2`` convention)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2 == 1:
        return Fraction(0)
    acc = Fraction(0)
    for j in range(n):
        acc += math.comb(n + 1, j) * bernoulli_fraction(j)
    return -acc / (n + 1)


@lru_cache(maxsize=None)
def euler_int(n: int) -> int:
    """Exact Euler number ``E_n`` (secant coefficients; odd entries vanish)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    if n % 2 == 1:
        return 0
    half = n // 2
    acc = 0
    for k in range(half):
        acc += math.comb(n, 2 * k) * euler_int(2 * k)
    return -acc


def _rising(a: int, m: int) -> int:
    """Rising factorial ``a (a+1) ... (a+m-1)``."""
    result = 1
    for i in range(m):
        result *= a + i
    return result


# ----------------------------------------------------------------------
# constants
# ----------------------------------------------------------------------
def _atan_inv_fixed(m: int, shift: int) -> tuple[int, int]:
    """Bracket ``arctan(1/m)`` scaled by ``2**shift`` (alternating series)."""
    one = 1 << shift
    m2 = m * m
    lo = 0
    hi = 0
    denom_pow = m  # m**(2j+1)
    j = 0
    while True:
        d = (2 * j + 1) * denom_pow
        if d > one:
            break
        if j % 2 == 0:
            lo += one // d
            hi += -((-one) // d)
        else:
            lo -= -((-one) // d)
            hi -= one // d
        denom_pow *= m2
        j += 1
    # alternating decreasing terms: the partial-sum error is at most the
    # first omitted term, which the loop guard bounded by one unit
    return lo - 1, hi + 1


@lru_cache(maxsize=None)
def const_pi(precision_bits: int) -> Enclosure:
    """Certified enclosure of pi via ``16 arctan(1/5) - 4 arctan(1/239)``."""
    wp = precision_bits + _GUARD_BITS
    a_lo, a_hi = _atan_inv_fixed(5, wp)
    b_lo, b_hi = _atan_inv_fixed(239, wp)
    lo = 16 * a_lo - 4 * b_hi
    hi = 16 * a_hi - 4 * b_lo
    scale = Fraction(1, 1 << wp)
    return Enclosure.from_fraction_pair(lo * scale, hi * scale, precision_bits)


def _sqrt3_fixed(shift: int) -> tuple[int, int]:
    """Bracket ``sqrt(3)`` scaled by ``2**shift``."""
    s = math.isqrt(3 << (2 * shift))
    return s, s + 1


@lru_cache(maxsize=None)
def const_catalan(precision_bits: int) -> Enclosure:
    """Certified enclosure of Catalan's constant.

    Uses the central-binomial acceleration
    ``G = (3/8) * sum 1/((2n+1)^2 C(2n,n)) + (pi/8) * log(2 + sqrt 3)``
    with ``log(2 + sqrt 3) = (2/sqrt 3) * sum 1/(3^j (2j+1))``.  Successive
    term ratios are at most 1/4 and 1/3, so the truncation tails are bounded
    by a fixed multiple of the first omitted term.
    """
    wp = precision_bits + _GUARD_BITS
    one = 1 << wp

    # S1 = sum of 1 / ((2n+1)^2 * C(2n,n)); term ratio <= 1/4
    s1_lo = 0
    s1_hi = 0
    binom = 1  # C(2n, n)
    n = 0
    while True:
        d = (2 * n + 1) ** 2 * binom
        if d > one:
            s1_hi += 2  # tail <= (4/3) * first omitted term < 2 units
            break
        s1_lo += one // d
        s1_hi += -((-one) // d)
        binom = binom * (2 * n + 1) * (2 * n + 2) // ((n + 1) * (n + 1))
        n += 1

    # S2 = sum of 1 / (3^j (2j+1)); term ratio <= 1/3
    s2_lo = 0
    s2_hi = 0
    pow3 = 1
    j = 0
    while True:
        d = pow3 * (2 * j + 1)
        if d > one:
            s2_hi += 2  # tail <= (3/2) * first omitted term < 2 units
            break
        s2_lo += one // d
        s2_hi += -((-one) // d)
        pow3 *= 3
        j += 1

    scale = Fraction(1, one)
    s1 = Enclosure.from_fraction_pair(s1_lo * scale, s1_hi * scale, wp)
    s2 = Enclosure.from_fraction_pair(s2_lo * scale, s2_hi * scale, wp)
    r3_lo, r3_hi = _sqrt3_fixed(wp)
    sqrt3 = Enclosure.from_fraction_pair(r3_lo * scale, r3_hi * scale, wp)
    pi = const_pi(wp)

    two = Enclosure.exact_int(2, wp)
    log_term = two * s2 / sqrt3
    eight = Enclosure.exact_int(8, wp)
    three = Enclosure.exact_int(3, wp)
    catalan = three * s1 / eight + pi * log_term / eight
    return catalan.with_precision(precision_bits)


# ----------------------------------------------------------------------
# odd-power tail sums
# ----------------------------------------------------------------------
@lru_cache(maxsize=None)
def base_expansion(k: int, order: int) -> tuple[tuple[tuple[int, Fraction], ...], Fraction]:
    """Asymptotic expansion of ``sum_{m>n} (2m-1)^(-k)`` in ``w = 1/(2n+1)``.

    Returns ``(coefficients, bound)`` where ``coefficients`` maps powers
    ``p <= order`` of ``w`` to exact rationals and ``bound`` is a constant
    ``A`` such that the truncation error is within ``A * w**(order+1)`` for
    every ``n >= 1``.  The summand is completely monotone, so the
    Euler--Maclaurin remainder is enveloped by the first omitted term; when
    that term has power above ``order + 1`` it is rescaled using ``w <= 1/3``.
    """
    if k < 2:
        raise DivergentError(f"odd-power tail diverges for exponent {k}")
    if order < 1:
        raise ValueError("order must be positive")
    coeffs: dict[int, Fraction] = {}
    if k - 1 <= order:
        coeffs[k - 1] = Fraction(1, 2 * (k - 1))
    if k <= order:
        coeffs[k] = coeffs.get(k, Fraction(0)) + Fraction(1, 2)
    r = 1
    while k + 2 * r - 1 <= order:
        c = (
            Fraction(2 ** (2 * r - 1))
            * bernoulli_fraction(2 * r)
            * _rising(k, 2 * r - 1)
            / Fraction(math.factorial(2 * r))
        )
        coeffs[k + 2 * r - 1] = coeffs.get(k + 2 * r - 1, Fraction(0)) + c
        r += 1
    first_omitted_power = k + 2 * r - 1
    first_omitted = abs(
        Fraction(2 ** (2 * r - 1))
        * bernoulli_fraction(2 * r)
        * _rising(k, 2 * r - 1)
        / Fraction(math.factorial(2 * r))
    )
    bound = first_omitted / Fraction(3 ** (first_omitted_power - (order + 1)))
    # leading terms that themselves fall beyond the order (large k) join the
    # remainder, rescaled by powers of w <= 1/3
    if k - 1 > order:
        bound += Fraction(1, 2 * (k - 1)) / Fraction(3 ** (k - 1 - (order + 1)))
    if k > order:
        bound += Fraction(1, 2) / Fraction(3 ** (k - (order + 1)))
    return tuple(sorted(coeffs.items())), bound


def expansion_remainder_bound(bound: Fraction, order: int, n: int) -> Fraction:
    """Exact value of ``A * (1/(2n+1))**(order+1)``."""
    return bound * Fraction(1, (2 * n + 1) ** (order + 1))


@lru_cache(maxsize=8192)
def evaluate_expansion(
    coefficients: tuple[tuple[int, Fraction], ...],
    bound: Fraction,
    order: int,
    n: int,
    precision_bits: int,
) -> Enclosure:
    """Enclose a ``w``-power expansion at ``w = 1/(2n+1)`` with its remainder."""
    wp = precision_bits + _GUARD_BITS
    w = Enclosure.from_fraction(Fraction(1, 2 * n + 1), wp)
    acc = Enclosure.exact_int(0, wp)
    prev_power = 0
    w_pow = Enclosure.exact_int(1, wp)
    for power, coeff in coefficients:
        w_pow = w_pow * w.pow_int(power - prev_power)
        prev_power = power
        acc = acc + Enclosure.from_fraction(coeff, wp) * w_pow
    return acc.widen(expansion_remainder_bound(bound, order, n))


def _kth_root_ceil(x: int, k: int) -> int:
    """Smallest positive integer ``r`` with ``r**k >= x``."""
    if x <= 1:
        return 1
    r = max(1, int(round(x ** (1.0 / k))))
    while r**k >= x and (r - 1) ** k >= x:
        r -= 1
    while r**k < x:
        r += 1
    return r


def _tail_seed_plan(k: int, cutoff: int, target_width: Fraction) -> tuple[int, int]:
    """Choose ``(order, seed)`` with ``seed >= max(cutoff, 1)`` so the expansion
    error at the seed is below ``target_width / 4``, minimizing work."""
    best: tuple[int, int, int] | None = None  # (cost, order, seed)
    for order in (8, 12, 16, 24, 32, 48, 64, 96, 128):
        _, bound = base_expansion(k, order)
        ratio = bound * 4 / target_width
        ratio_int = max(1, -((-ratio.numerator) // ratio.denominator))
        root = _kth_root_ceil(ratio_int, order + 1)
        seed = max(1, cutoff, root // 2)
        while (2 * seed + 1) ** (order + 1) < ratio_int:
            seed += 1
        steps = seed - cutoff
        if steps > 100_000:
            continue
        cost = steps + 3 * order
        if best is None or cost < best[0]:
            best = (cost, order, seed)
    if best is None:
        raise ValueError(
            f"no expansion schedule reaches width {target_width} for exponent {k}"
        )
    return best[1], best[2]


def odd_power_tail(k: int, cutoff: int, precision_bits: int) -> Enclosure:
    """Certified enclosure of ``sum_{m > cutoff} (2m-1)**(-k)``.

    Raises :class:`DivergentError` for ``k <= 1``.  The result is positive
    and decreases as ``cutoff`` grows.
    """
    if k <= 1:
        raise DivergentError(f"odd-power tail diverges for exponent {k}")
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    # magnitude scale from the leading term, used to set an absolute target
    lead = Fraction(1, (2 * max(cutoff, 1) + 1) ** (k - 1))
    target_width = lead * Fraction(1, 2**precision_bits) + Fraction(
        1, 2 ** (precision_bits + _GUARD_BITS)
    )
    order, seed = _tail_seed_plan(k, cutoff, target_width)
    coeffs, bound = base_expansion(k, order)
    acc = evaluate_expansion(coeffs, bound, order, seed, precision_bits)
    wp = precision_bits + _GUARD_BITS
    for j in range(seed - 1, cutoff - 1, -1):
        term = Enclosure.from_fraction(Fraction(1, (2 * j + 1) ** k), wp)
        acc = acc + term
    return acc
