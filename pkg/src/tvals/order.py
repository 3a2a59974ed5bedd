"""Certified order structure of the nested-sum values and their tails.

The tails ``t(k)_1`` over all admissible ``k`` (including the empty index,
whose tail is exactly 1) form a strictly decreasing sequence once sorted;
its entries cut the full values into bands.  This module provides:

* :func:`compare` — adaptive certified comparison of two named values.
  Equality is never certified: indistinguishable inputs yield
  ``Verdict.UNRESOLVED``.
* :func:`enumerate_tails_above` — complete branch-and-bound enumeration of
  all tails above a threshold.  Depth is cut off by comparing the threshold
  with the certified remaining mass of the per-depth maxima, whose total is
  known in closed form via Catalan's constant; exponent growth is cut off by
  componentwise monotonicity.
* :func:`beta_table` — the first ``count`` tails in decreasing order.
* :func:`rank_of_tail` — position of one tail in that order.
* :func:`band_prefix` — all full values in a band down to a cutoff, in
  decreasing order.
* :func:`phi` — the coordinates (band, position within band) of a full
  value; the order-reversing pairing between values and index pairs.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .enclosure import Enclosure
from .errors import BudgetExceededError, UnresolvedComparisonError
from .evaluator import evaluate_spec
from .indices import MultiIndex, ValueSpec, depth_graded_key, is_admissible
from .numerics import PrecisionBudget, const_catalan

__all__ = [
    "Verdict",
    "ComparisonOutcome",
    "BetaEntry",
    "PhiCoord",
    "compare",
    "enumerate_tails_above",
    "beta_table",
    "rank_of_tail",
    "band_prefix",
    "band_of_value",
    "phi",
]


class Verdict(enum.Enum):
    GREATER = "Greater"
    LESS = "Less"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True)
class ComparisonOutcome:
    """Result of a certified comparison.

    ``separation`` is a certified lower bound on the absolute difference
    (zero when unresolved); ``bits_used`` the highest endpoint precision
    consulted.
    """

    verdict: Verdict
    separation: Fraction
    bits_used: int


@dataclass(frozen=True)
class BetaEntry:
    """One row of the decreasing tail table."""

    rank: int
    index: MultiIndex
    value: Enclosure


@dataclass(frozen=True)
class PhiCoord:
    """Band number and (1-based) position within the band."""

    band: int
    position: int


_DEFAULT_BUDGET = PrecisionBudget()


def _refinement_widths(budget: PrecisionBudget):
    # The first width matches the one used for displayed band members, so a
    # comparison's first attempt and a band enumeration share cache entries.
    yield Fraction(1, 2**48)
    for bits in budget.rungs():
        width = Fraction(1, 2 ** max(bits - 10, 20))
        if width < Fraction(1, 2**64):
            yield width


def _enclose(spec: ValueSpec, width: Fraction, budget: PrecisionBudget) -> Enclosure:
    try:
        return evaluate_spec(spec, width, budget)
    except BudgetExceededError as exc:
        if exc.partial is None:
            raise
        return exc.partial


def compare(
    left: ValueSpec,
    right: ValueSpec,
    budget: Optional[PrecisionBudget] = None,
) -> ComparisonOutcome:
    """Certified three-way comparison of two named values.

    Refines both enclosures until they separate or the budget tops out.
    Identical specs (and genuinely indistinguishable values) come back
    ``UNRESOLVED`` with separation zero; equality is never asserted.
    """
    budget = budget or _DEFAULT_BUDGET
    if left == right:
        return ComparisonOutcome(Verdict.UNRESOLVED, Fraction(0), 0)
    bits_used = 0
    for width in _refinement_widths(budget):
        a = _enclose(left, width, budget)
        b = _enclose(right, width, budget)
        bits_used = max(a.precision_bits, b.precision_bits)
        if a.certified_gt(b):
            return ComparisonOutcome(Verdict.GREATER, a.separation(b), bits_used)
        if a.certified_lt(b):
            return ComparisonOutcome(Verdict.LESS, a.separation(b), bits_used)
    return ComparisonOutcome(Verdict.UNRESOLVED, Fraction(0), bits_used)


def _scalar_verdict(
    spec: ValueSpec, scalar: Fraction, budget: PrecisionBudget
) -> Verdict:
    """Certified position of a named value relative to an exact rational."""
    for width in _refinement_widths(budget):
        enclosure = _enclose(spec, width, budget)
        side = enclosure.cmp_scalar(scalar)
        if side > 0:
            return Verdict.GREATER
        if side < 0:
            return Verdict.LESS
    return Verdict.UNRESOLVED


def _depth_max_index(d: int) -> MultiIndex:
    """The depth-``d`` index of componentwise-minimal exponents."""
    return (2,) + (1,) * (d - 1)


def _quantize_down(value: Fraction) -> Fraction:
    """Largest ``2**(-a) * (1 + b/32)`` (integer ``b < 32``) not above ``value``.

    Collapses nearby ad-hoc thresholds onto a shared grid so enumerations
    can be reused across queries; correctness is unaffected because callers
    only require *some* threshold below their target."""
    if value <= 0:
        raise ValueError("value must be positive")
    a = 0
    while Fraction(1, 2**a) > value:
        a += 1
    while a > 0 and Fraction(1, 2 ** (a - 1)) <= value:
        a -= 1
    scaled = value * 2**a  # in [1, 2)
    b = (scaled.numerator * 32) // scaled.denominator - 32
    b = min(max(b, 0), 31)
    return Fraction(32 + b, 32 * 2**a)


def _mass_total(offset: int, budget: PrecisionBudget) -> Enclosure:
    """Closed-form sum of the per-depth maxima: ``2G`` for full values,
    ``(2G - 1)/2`` for tails at offset 1 (G = Catalan's constant)."""
    g = const_catalan(96)
    two_g = g.scale_pow2(1)
    if offset == 0:
        return two_g
    return (two_g - Enclosure.exact_int(1)).scale_pow2(-1)


@lru_cache(maxsize=4096)
def _depth_cap(threshold: Fraction, offset: int, budget: PrecisionBudget) -> int:
    """Smallest ``D`` such that every index of depth beyond ``D`` has value
    certifiably below ``threshold``, via the remaining per-depth mass."""
    total_hi = _mass_total(offset, budget).hi_fraction
    # fixed evaluation width so the per-depth mass terms are shared across
    # every threshold; the <= 64 * 2**(-80) slack is negligible at any
    # threshold this routine can certify by depth 64
    mass_width = Fraction(1, 2**80)
    acc_lo = Fraction(0)
    for cap in range(1, 65):
        enclosure = _enclose(
            ValueSpec(_depth_max_index(cap), offset), mass_width, budget
        )
        acc_lo += enclosure.lo_fraction
        if total_hi - acc_lo < threshold:
            return cap
    raise BudgetExceededError(
        f"depth cap for threshold {float(threshold):.3e} not reached by depth 64"
    )


@lru_cache(maxsize=None)
def enumerate_tails_above(
    threshold: Fraction, budget: PrecisionBudget = _DEFAULT_BUDGET
) -> tuple[MultiIndex, ...]:
    """All indices (including the empty one) whose tail at offset 1 exceeds
    ``threshold``, deterministically ordered by decreasing value.

    Complete by construction: depths beyond a certified cap are excluded by
    the remaining-mass argument, exponent growth by componentwise
    monotonicity (every increment divides a tail by at least 3 since all
    variables are at least 2).  Raises
    :class:`~tvals.errors.UnresolvedComparisonError` when the threshold
    cannot be separated from some tail value.
    """
    threshold = Fraction(threshold)
    if threshold <= 0:
        raise ValueError("threshold must be positive (the tail set is infinite)")
    if threshold >= 1:
        return ()
    found: list[MultiIndex] = [()]
    cap = _depth_cap(threshold, 1, budget)

    def explore(d: int, partial: MultiIndex) -> None:
        position = len(partial) + 1
        exponent = 2 if position == 1 else 1
        while True:
            candidate = partial + (exponent,)
            padded = candidate + (1,) * (d - position)
            verdict = _scalar_verdict(ValueSpec(padded, 1), threshold, budget)
            if verdict is Verdict.LESS:
                return
            if verdict is Verdict.UNRESOLVED:
                raise UnresolvedComparisonError(
                    f"threshold {threshold} too close to the tail of {padded}",
                    left=ValueSpec(padded, 1),
                    right=threshold,
                )
            if position == d:
                found.append(candidate)
            else:
                explore(d, candidate)
            exponent += 1

    for d in range(1, cap + 1):
        explore(d, ())

    def sort_key(index: MultiIndex):
        if len(index) == 0:
            return (Fraction(-1), depth_graded_key(index))
        mid = _enclose(ValueSpec(index, 1), Fraction(1, 2**48), budget).midpoint()
        return (-mid, depth_graded_key(index))

    return tuple(sorted(found, key=sort_key))


def _certified_insertion_sort(
    specs: list[ValueSpec], budget: PrecisionBudget, context: str
) -> list[ValueSpec]:
    """Sort decreasing with certified pairwise comparisons (values distinct)."""
    ordered: list[ValueSpec] = []
    for spec in specs:
        lo, hi = 0, len(ordered)
        while lo < hi:
            mid = (lo + hi) // 2
            outcome = compare(spec, ordered[mid], budget)
            if outcome.verdict is Verdict.UNRESOLVED:
                raise UnresolvedComparisonError(
                    f"{context}: cannot separate {spec} from {ordered[mid]}",
                    left=spec,
                    right=ordered[mid],
                )
            if outcome.verdict is Verdict.GREATER:
                hi = mid
            else:
                lo = mid + 1
        ordered.insert(lo, spec)
    return ordered


@lru_cache(maxsize=None)
def _sorted_tails_above(
    threshold: Fraction, budget: PrecisionBudget
) -> tuple[ValueSpec, ...]:
    """Tail specs above ``threshold`` in certified decreasing order."""
    tails = enumerate_tails_above(threshold, budget)
    return tuple(
        _certified_insertion_sort(
            [ValueSpec(index, 1) for index in tails], budget, "tail table"
        )
    )


@lru_cache(maxsize=None)
def beta_table(
    count: int, budget: PrecisionBudget = _DEFAULT_BUDGET
) -> tuple[BetaEntry, ...]:
    """The first ``count`` tails in certified decreasing order.

    Lowers an enumeration threshold by factors of two until enough tails
    appear; a threshold that lands unresolvably close to some tail twice in
    a row is nudged by a small seeded dyadic perturbation.
    """
    if count < 1:
        raise ValueError("count must be positive")
    rng = random.Random(0x5EED)
    threshold = Fraction(1, 2)
    strikes = 0
    while True:
        try:
            ordered = _sorted_tails_above(threshold, budget)
        except UnresolvedComparisonError:
            strikes += 1
            if strikes >= 2:
                jitter = Fraction(rng.getrandbits(16) + 1, 2**24)
                threshold = threshold * (1 - jitter)
            else:
                threshold = threshold / 2
            continue
        strikes = 0
        if len(ordered) >= count:
            break
        threshold = threshold / 2
        if threshold < Fraction(1, 2**200):
            raise BudgetExceededError(
                f"could not find {count} tails above 2**-200"
            )
    entries = []
    for position, spec in enumerate(ordered[:count], start=1):
        if len(spec.index) == 0:
            value = Enclosure.exact_int(1)
        else:
            value = _enclose(spec, Fraction(1, 2**48), budget)
        entries.append(BetaEntry(position, spec.index, value))
    return tuple(entries)


def rank_of_tail(
    index: MultiIndex, budget: Optional[PrecisionBudget] = None
) -> int:
    """1-based position of ``t(index)_1`` in the decreasing tail order.

    Counts, by complete enumeration just below the value, the tails
    certifiably above it.  A tail that cannot be separated raises
    :class:`~tvals.errors.UnresolvedComparisonError` (a collision would make
    the rank ill-defined).
    """
    budget = budget or _DEFAULT_BUDGET
    if not is_admissible(index):
        raise ValueError(f"index {index} is not admissible")
    spec = ValueSpec(index, 1)
    if len(index) == 0:
        enclosure = Enclosure.exact_int(1)
    else:
        enclosure = _enclose(spec, Fraction(1, 2**48), budget)
    threshold = _quantize_down(enclosure.lo_fraction * (1 - Fraction(1, 2**10)))
    above = 0
    for candidate in enumerate_tails_above(threshold, budget):
        if candidate == index:
            continue
        outcome = compare(ValueSpec(candidate, 1), spec, budget)
        if outcome.verdict is Verdict.UNRESOLVED:
            raise UnresolvedComparisonError(
                f"tail of {candidate} not separable from tail of {index}",
                left=ValueSpec(candidate, 1),
                right=spec,
            )
        if outcome.verdict is Verdict.GREATER:
            above += 1
    return above + 1


def band_prefix(
    band: int,
    alpha: Union[Fraction, Enclosure],
    budget: Optional[PrecisionBudget] = None,
) -> list[tuple[MultiIndex, Enclosure]]:
    """All full values in band ``band`` down to ``alpha``, decreasing.

    Band ``r`` collects the full values between consecutive tails: at most
    the ``(r-1)``-th tail (no upper cap for band 1) and above the ``r``-th.
    ``alpha`` must be certifiably above the band floor, which keeps the
    answer finite; values are returned with their enclosures, largest first.

    Families sharing all but the final exponent decrease toward the tail of
    their shared prefix, so a family is cut when that limit certifiably
    leaves the band from above; any value that cannot be separated from the
    band boundaries or from a sibling raises
    :class:`~tvals.errors.UnresolvedComparisonError`.
    """
    budget = budget or _DEFAULT_BUDGET
    if band < 1:
        raise ValueError("band must be positive")
    alpha_lo = alpha.lo_fraction if isinstance(alpha, Enclosure) else Fraction(alpha)
    if alpha_lo <= 0:
        raise ValueError("alpha must be positive")
    table = beta_table(band, budget)
    floor_spec = ValueSpec(table[band - 1].index, 1)
    if _scalar_verdict(floor_spec, alpha_lo, budget) is not Verdict.LESS:
        raise ValueError(
            f"alpha={float(alpha_lo):.6e} is not certifiably above the "
            f"band-{band} floor (tail of {floor_spec.index})"
        )
    top_spec = None if band == 1 else ValueSpec(table[band - 2].index, 1)
    collected: list[MultiIndex] = []
    cap = _depth_cap(alpha_lo, 0, budget)

    def leaf_family(partial: MultiIndex, d: int) -> None:
        """Walk the final exponent of one family, collecting band members."""
        if d >= 2:
            limit_spec = ValueSpec(partial, 1)
        else:
            limit_spec = ValueSpec((), 1)  # exact value 1
        if top_spec is not None:
            if limit_spec == top_spec:
                return  # limit equals the band top exactly: family stays above
            outcome = compare(limit_spec, top_spec, budget)
            if outcome.verdict is Verdict.UNRESOLVED:
                raise UnresolvedComparisonError(
                    f"family limit {limit_spec} not separable from band top "
                    f"{top_spec}",
                    left=limit_spec,
                    right=top_spec,
                )
            if outcome.verdict is Verdict.GREATER:
                return  # whole family sits above the band
        exponent = 2 if d == 1 else 1
        below_top = top_spec is None
        while True:
            candidate = partial + (exponent,)
            spec = ValueSpec(candidate, 0)
            verdict = _scalar_verdict(spec, alpha_lo, budget)
            if verdict is Verdict.LESS:
                return
            if verdict is Verdict.UNRESOLVED:
                raise UnresolvedComparisonError(
                    f"value of {candidate} not separable from alpha",
                    left=spec,
                    right=alpha_lo,
                )
            if not below_top:
                # values decrease along the family, so once one drops below
                # the band top the rest need no further comparison
                outcome = compare(spec, top_spec, budget)
                if outcome.verdict is Verdict.UNRESOLVED:
                    raise UnresolvedComparisonError(
                        f"value of {candidate} not separable from band top",
                        left=spec,
                        right=top_spec,
                    )
                below_top = outcome.verdict is Verdict.LESS
            if below_top:
                collected.append(candidate)
            exponent += 1

    def explore(d: int, partial: MultiIndex) -> None:
        position = len(partial) + 1
        if position == d:
            leaf_family(partial, d)
            return
        exponent = 2 if position == 1 else 1
        while True:
            candidate = partial + (exponent,)
            padded = candidate + (1,) * (d - position)
            verdict = _scalar_verdict(ValueSpec(padded, 0), alpha_lo, budget)
            if verdict is Verdict.LESS:
                return
            if verdict is Verdict.UNRESOLVED:
                raise UnresolvedComparisonError(
                    f"subtree bound at {padded} not separable from alpha",
                    left=ValueSpec(padded, 0),
                    right=alpha_lo,
                )
            explore(d, candidate)
            exponent += 1

    for d in range(1, cap + 1):
        if d == 1 and band >= 2:
            continue  # depth-1 values exceed 1 and live in band 1
        explore(d, ())

    ordered = _certified_insertion_sort(
        [ValueSpec(index, 0) for index in collected], budget, f"band {band}"
    )
    return [
        (spec.index, _enclose(spec, Fraction(1, 2**48), budget)) for spec in ordered
    ]


def band_of_value(
    index: MultiIndex, budget: Optional[PrecisionBudget] = None
) -> int:
    """Band number of the full value: one more than the number of tails
    certifiably above it.  Raises
    :class:`~tvals.errors.UnresolvedComparisonError` if the value cannot be
    separated from some tail."""
    budget = budget or _DEFAULT_BUDGET
    if len(index) == 0 or not is_admissible(index):
        raise ValueError(f"index {index} must be nonempty admissible")
    spec = ValueSpec(index, 0)
    enclosure = _enclose(spec, Fraction(1, 2**48), budget)
    threshold = _quantize_down(enclosure.lo_fraction * (1 - Fraction(1, 2**10)))
    tails_above = 0
    for candidate in enumerate_tails_above(threshold, budget):
        outcome = compare(ValueSpec(candidate, 1), spec, budget)
        if outcome.verdict is Verdict.UNRESOLVED:
            raise UnresolvedComparisonError(
                f"value of {index} not separable from the tail of {candidate}",
                left=spec,
                right=ValueSpec(candidate, 1),
            )
        if outcome.verdict is Verdict.GREATER:
            tails_above += 1
    return tails_above + 1


def phi(
    index: MultiIndex, budget: Optional[PrecisionBudget] = None
) -> PhiCoord:
    """Coordinates of a full value: its band and position within the band.

    The band is the least ``r`` whose ``r``-th tail lies certifiably below
    the value; the position counts band members at or above it.  Defined for
    nonempty admissible indices (the empty index is the band-1 accumulation
    point itself).
    """
    budget = budget or _DEFAULT_BUDGET
    if len(index) == 0:
        raise ValueError("phi is defined for nonempty admissible indices")
    if not is_admissible(index):
        raise ValueError(f"index {index} is not admissible")
    spec = ValueSpec(index, 0)
    band = band_of_value(index, budget)
    enclosure = _enclose(spec, Fraction(1, 2**48), budget)
    alpha_threshold = enclosure.lo_fraction - enclosure.width()
    members = band_prefix(band, alpha_threshold, budget)
    above = 0
    present = False
    for member_index, _ in members:
        if member_index == index:
            present = True
            continue
        outcome = compare(ValueSpec(member_index, 0), spec, budget)
        if outcome.verdict is Verdict.UNRESOLVED:
            raise UnresolvedComparisonError(
                f"band member {member_index} not separable from {index}",
                left=ValueSpec(member_index, 0),
                right=spec,
            )
        if outcome.verdict is Verdict.GREATER:
            above += 1
    if not present:
        raise BudgetExceededError(
            f"band prefix for {index} did not recover the index itself"
        )
    return PhiCoord(band, above + 1)
