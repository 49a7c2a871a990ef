"""Rate regions for multilevel diversity coding.

The region of each scheme is handled through its supporting-hyperplane
coefficients f_alpha (a packing LP over the size-alpha subsets) and an
exact primal feasibility system for membership.  Non-members come back
with a separating weight vector extracted from the Farkas certificate;
members come back with an explicit per-level rate allocation.  All
arithmetic is rational, no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactlp import GE, LE, LinearProgram, as_fraction, as_fractions, feasible, solve_max
from .subsets import EncoderSet, subsets_of_size

MAX_MEMBERSHIP_GROUND = 12

_ZERO = Fraction(0)


def _weights(weights) -> tuple[Fraction, ...]:
    w = as_fractions(weights)
    if not w:
        raise ValueError("weight vector must be nonempty")
    if any(x < 0 for x in w):
        raise ValueError("weights must be nonnegative")
    return w


def _entropies(entropies) -> tuple[Fraction, ...]:
    h = as_fractions(entropies)
    if not h:
        raise ValueError("entropy profile must be nonempty")
    if any(x < 0 for x in h):
        raise ValueError("entropies must be nonnegative")
    return h


def _rates(rates) -> tuple[Fraction, ...]:
    r = as_fractions(rates)
    if any(x < 0 for x in r):
        raise ValueError("rates must be nonnegative")
    return r


@dataclass(frozen=True)
class SubsetCoefficients:
    """Optimal weights on the size-`level` subsets for one weight vector."""

    level: int
    assignment: dict[EncoderSet, Fraction]

    @property
    def total(self) -> Fraction:
        return sum(self.assignment.values(), _ZERO)


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    # per level alpha, the rate split across encoders; for the all-access
    # variant index 0 of each tuple is the encoder-0 share
    witness: dict[int, tuple[Fraction, ...]] | None = None
    certificate: tuple[Fraction, ...] | None = None
    certificate_lambda0: Fraction | None = None
    certificate_m: int | None = None


@dataclass(frozen=True)
class GreedyAllocation:
    stored_at_zero: tuple[Fraction, ...]
    residual: tuple[Fraction, ...]
    level: int | None  # None once the all-access budget covers everything


def f_alpha(weights, alpha: int) -> SubsetCoefficients:
    """Optimal subset weights at one level: maximize the total weight put on
    size-alpha subsets subject to per-encoder capacities."""
    lam = _weights(weights)
    L = len(lam)
    if not 1 <= alpha <= L:
        raise ValueError(f"alpha must be in 1..{L}, got {alpha}")
    family = subsets_of_size(L, alpha)
    lp = LinearProgram(len(family), [1] * len(family))
    for l in range(1, L + 1):
        lp.add([1 if l in u else 0 for u in family], LE, lam[l - 1])
    sol = solve_max(lp)
    assert sol.status == "optimal"
    assignment = {u: v for u, v in zip(family, sol.primal)}
    return SubsetCoefficients(level=alpha, assignment=assignment)


def f_profile(weights) -> tuple[Fraction, ...]:
    """(f_1, ..., f_L); nonincreasing, with f_1 equal to the weight sum."""
    lam = _weights(weights)
    return tuple(f_alpha(lam, a).total for a in range(1, len(lam) + 1))


def min_sum_rate(entropies) -> Fraction:
    """Sum over levels of (L/alpha) times the level entropy."""
    h = _entropies(entropies)
    L = len(h)
    return sum((Fraction(L, a) * h[a - 1] for a in range(1, L + 1)), _ZERO)


def smdca_f(lambda0, weights, alpha: int) -> Fraction:
    """Hyperplane coefficient with an all-access encoder of weight lambda0."""
    l0 = as_fraction(lambda0)
    if l0 < 0:
        raise ValueError("lambda0 must be nonnegative")
    return min(f_alpha(weights, alpha).total, l0)


def smdca_hyperplane(m: int, weights, entropies) -> Fraction:
    """Right-hand side of the m-th all-access supporting hyperplane."""
    lam = _weights(weights)
    h = _entropies(entropies)
    L = len(lam)
    if len(h) != L:
        raise ValueError("weights and entropies must have equal length")
    if not 1 <= m <= L:
        raise ValueError(f"m must be in 1..{L}, got {m}")
    prof = f_profile(lam)
    head = sum(h[:m], _ZERO)
    tail = sum((prof[a - 1] * h[a - 1] for a in range(m + 1, L + 1)), _ZERO)
    return prof[m - 1] * head + tail


# membership ------------------------------------------------------------


def _membership_system(rates, entropies, levels, with_r0, r0):
    """Feasibility LP for a per-level rate split.

    Variables are r[level][slot]; slot 0 is the all-access encoder when
    present.  Returns (lp, capacity row indices, slots).
    """
    L = len(rates)
    slots = L + 1 if with_r0 else L
    nlevels = len(levels)
    nvars = nlevels * slots

    def var(ai, slot):
        return ai * slots + slot

    lp = LinearProgram(nvars)
    for ai, alpha in enumerate(levels):
        for u in subsets_of_size(L, alpha):
            coeffs = [0] * nvars
            if with_r0:
                coeffs[var(ai, 0)] = 1
                for l in u:
                    coeffs[var(ai, l)] = 1
            else:
                for l in u:
                    coeffs[var(ai, l - 1)] = 1
            lp.add(coeffs, GE, entropies[ai])
    capacity_rows = []
    caps = ((r0,) + tuple(rates)) if with_r0 else tuple(rates)
    for slot, cap in enumerate(caps):
        coeffs = [0] * nvars
        for ai in range(nlevels):
            coeffs[var(ai, slot)] = 1
        capacity_rows.append(lp.num_rows)
        lp.add(coeffs, LE, cap)
    return lp, capacity_rows, slots


def _witness_from_point(point, levels, slots):
    out: dict[int, tuple[Fraction, ...]] = {}
    for ai, alpha in enumerate(levels):
        out[alpha] = tuple(point[ai * slots + s] for s in range(slots))
    return out


def _normalized(values):
    top = max(values)
    assert top > 0, "separating certificate cannot be identically zero"
    return tuple(v / top for v in values)


def smdc_member(rates, entropies) -> MembershipVerdict:
    """Exact membership in the superposition region, with witness or
    separating weight vector."""
    r = _rates(rates)
    h = _entropies(entropies)
    L = len(r)
    if len(h) != L:
        raise ValueError("rates and entropies must have equal length")
    if L > MAX_MEMBERSHIP_GROUND:
        raise ValueError(f"membership supports at most L={MAX_MEMBERSHIP_GROUND}")
    levels = tuple(range(1, L + 1))
    lp, cap_rows, slots = _membership_system(r, h, levels, False, None)
    res = feasible(lp)
    if res.feasible:
        return MembershipVerdict(
            member=True, witness=_witness_from_point(res.point, levels, slots)
        )
    lam = _normalized([-res.certificate[i] for i in cap_rows])
    lhs = sum((a * b for a, b in zip(lam, r)), _ZERO)
    rhs = sum((f_alpha(lam, a).total * h[a - 1] for a in levels), _ZERO)
    assert lhs < rhs, "Farkas certificate must violate a supporting hyperplane"
    return MembershipVerdict(member=False, certificate=lam)


def smdca_member(r0, rates, entropies) -> MembershipVerdict:
    """Membership with an all-access encoder of rate r0."""
    r0 = as_fraction(r0)
    if r0 < 0:
        raise ValueError("r0 must be nonnegative")
    r = _rates(rates)
    h = _entropies(entropies)
    L = len(r)
    if len(h) != L:
        raise ValueError("rates and entropies must have equal length")
    if L > MAX_MEMBERSHIP_GROUND:
        raise ValueError(f"membership supports at most L={MAX_MEMBERSHIP_GROUND}")
    levels = tuple(range(1, L + 1))
    lp, cap_rows, slots = _membership_system(r, h, levels, True, r0)
    res = feasible(lp)
    if res.feasible:
        return MembershipVerdict(
            member=True, witness=_witness_from_point(res.point, levels, slots)
        )
    mults = _normalized([-res.certificate[i] for i in cap_rows])
    lam0, lam = mults[0], mults[1:]
    prof = f_profile(lam)
    lhs0 = lam0 * r0 + sum((a * b for a, b in zip(lam, r)), _ZERO)
    rhs0 = sum((min(prof[a - 1], lam0) * h[a - 1] for a in levels), _ZERO)
    assert lhs0 < rhs0, "certificate must violate the all-access hyperplane"
    cert_m = None
    for m in levels:
        head = sum(h[:m], _ZERO)
        tail = sum((prof[a - 1] * h[a - 1] for a in range(m + 1, L + 1)), _ZERO)
        if prof[m - 1] * r0 + sum((a * b for a, b in zip(lam, r)), _ZERO) < (
            prof[m - 1] * head + tail
        ):
            cert_m = m
            break
    assert cert_m is not None, "some boundary hyperplane must be violated"
    return MembershipVerdict(
        member=False,
        certificate=lam,
        certificate_lambda0=lam0,
        certificate_m=cert_m,
    )


def ssmdc_member(rates, entropies, n_secure: int) -> MembershipVerdict:
    """Membership for the secure variant: only levels 1..L-N constrain."""
    r = _rates(rates)
    L = len(r)
    if not 0 <= n_secure <= L - 1:
        raise ValueError(f"n_secure must be in 0..{L - 1}, got {n_secure}")
    h = _entropies(entropies)
    if len(h) != L - n_secure:
        raise ValueError("entropy profile must have length L - n_secure")
    if L > MAX_MEMBERSHIP_GROUND:
        raise ValueError(f"membership supports at most L={MAX_MEMBERSHIP_GROUND}")
    levels = tuple(range(1, L - n_secure + 1))
    lp, cap_rows, slots = _membership_system(r, h, levels, False, None)
    res = feasible(lp)
    if res.feasible:
        return MembershipVerdict(
            member=True, witness=_witness_from_point(res.point, levels, slots)
        )
    lam = _normalized([-res.certificate[i] for i in cap_rows])
    lhs = sum((a * b for a, b in zip(lam, r)), _ZERO)
    rhs = sum((f_alpha(lam, a).total * h[a - 1] for a in levels), _ZERO)
    assert lhs < rhs, "Farkas certificate must violate a supporting hyperplane"
    return MembershipVerdict(member=False, certificate=lam)


# all-access greedy allocation -------------------------------------------


def greedy_allocation(r0, entropies) -> GreedyAllocation:
    """Commit the all-access budget to sources in priority order.

    Sources below the split level are stored whole, the split level gets
    the leftover budget, everything above stays with the randomly
    accessible encoders.
    """
    r0 = as_fraction(r0)
    if r0 < 0:
        raise ValueError("r0 must be nonnegative")
    h = _entropies(entropies)
    L = len(h)
    total = sum(h, _ZERO)
    if r0 >= total:
        return GreedyAllocation(stored_at_zero=h, residual=(_ZERO,) * L, level=None)
    cum = _ZERO
    for q in range(1, L + 1):
        if r0 < cum + h[q - 1]:
            stored = list(h[: q - 1]) + [r0 - cum] + [_ZERO] * (L - q)
            residual = (
                [_ZERO] * (q - 1) + [cum + h[q - 1] - r0] + list(h[q:])
            )
            return GreedyAllocation(
                stored_at_zero=tuple(stored), residual=tuple(residual), level=q
            )
        cum += h[q - 1]
    raise AssertionError("unreachable: r0 < total implies a split level exists")


def residual_hyperplane(profile, entropies, m: int, r0) -> Fraction:
    """g_m from a precomputed coefficient profile: the hyperplane of the
    residual region after storing the first m sources (less the budget)."""
    h = entropies
    L = len(profile)
    head = sum(h[:m], _ZERO) - r0
    tail = sum((profile[a - 1] * h[a - 1] for a in range(m + 1, L + 1)), _ZERO)
    return profile[m - 1] * head + tail


def g_m(m: int, weights, entropies, r0) -> Fraction:
    """Residual-region hyperplane value after storing the first m sources
    (less the budget) at the all-access encoder."""
    lam = _weights(weights)
    h = _entropies(entropies)
    L = len(lam)
    if len(h) != L:
        raise ValueError("weights and entropies must have equal length")
    if not 1 <= m <= L:
        raise ValueError(f"m must be in 1..{L}, got {m}")
    return residual_hyperplane(f_profile(lam), h, m, as_fraction(r0))


def greedy_matches_region(weights, entropies, r0) -> bool:
    """The greedy split level attains the max over all residual hyperplanes."""
    lam = _weights(weights)
    h = _entropies(entropies)
    L = len(lam)
    r0 = as_fraction(r0)
    alloc = greedy_allocation(r0, h)
    q = alloc.level if alloc.level is not None else L
    prof = f_profile(lam)
    values = [residual_hyperplane(prof, h, m, r0) for m in range(1, L + 1)]
    return max(values) == values[q - 1]
