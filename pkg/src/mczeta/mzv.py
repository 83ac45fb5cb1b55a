"""Nested Euler sums: convergent evaluation, two-index meromorphic
continuation, and divisor-weighted variants.

The r-fold nested sum runs over increment tuples (m_1, ..., m_r) of
positive integers, the j-th factor being the j-th cumulative sum raised
to the power -s_j. Weighted variants multiply each term by a callback
evaluated on the increment tuple.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .arith import divisor_sigma_gcd, divisors
from .numkernel import (
    DEFAULT_BUDGET,
    CompensatedSum,
    DomainError,
    EvalBudget,
    Evaluation,
    PoleError,
    bernoulli_ratio,
    em_tail,
    gamma,
)

__all__ = [
    "ArgPoint",
    "SigmaGcdWeight",
    "zeta_ez2_continued",
    "zeta_ez_direct",
    "zeta_ez_weighted",
    "zeta_riemann",
]


@dataclass(frozen=True, init=False)
class ArgPoint:
    """Argument tuple with its weight and region flags.

    ``in_convergence`` is True when every trailing partial sum of real
    parts exceeds its depth, the exact condition for absolute convergence
    of the nested sum. ``in_fe_region`` additionally demands real part
    above 1 for each component beyond the second, the strip in which the
    oscillatory-sum expansions downstream are valid.
    """

    s: tuple[complex, ...]
    wt: complex
    in_convergence: bool
    in_fe_region: bool

    def __init__(self, s: Iterable[complex]) -> None:
        values = tuple(complex(v) for v in s)
        if not values:
            raise ValueError("ArgPoint: at least one component required")
        r = len(values)
        conv = all(
            sum(v.real for v in values[r - k:]) > k for k in range(1, r + 1))
        fe = all(v.real > 1.0 for v in values[2:])
        object.__setattr__(self, "s", values)
        object.__setattr__(self, "wt", sum(values))
        object.__setattr__(self, "in_convergence", conv)
        object.__setattr__(self, "in_fe_region", fe)

    @property
    def depth(self) -> int:
        return len(self.s)


def _as_point(p: ArgPoint | Iterable[complex]) -> ArgPoint:
    return p if isinstance(p, ArgPoint) else ArgPoint(p)


def zeta_riemann(s: complex) -> complex:
    """Riemann zeta via the lifted Euler-Maclaurin tail formula.

    Arguments with real part below -1/2 are reflected into the opposite
    half-plane first: the explicit partial sums of n**-s would otherwise
    grow like n**|Re s| and cancel against the tail, losing absolute
    accuracy to roundoff (about 1e-7 by Re s = -6).
    """
    s = complex(s)
    if s.real < -0.5:
        w = 1.0 - s
        return (2.0 ** s * cmath.pi ** (s - 1.0)
                * cmath.sin(cmath.pi * s / 2.0) * gamma(w)
                * em_tail(w, 1, 12))
    return em_tail(s, 1, 12)


# ---------------------------------------------------------------------------
# power-tail machinery
# ---------------------------------------------------------------------------

_SHIFT_ORDER = 12


def _em_coeff_list(s: complex, K: int = 8) -> list[tuple[complex, complex]]:
    """Coefficient/exponent pairs so that em_tail(s, X) = sum c * X**-w,
    accurate once X is comfortably past 24."""
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleError("_em_coeff_list: pole at s = 1")
    pairs = [(1.0 / (s - 1.0), s - 1.0), (0.5 + 0.0j, s)]
    poch = s
    for j in range(1, K + 1):
        pairs.append((bernoulli_ratio(2 * j) * poch, s + 2 * j - 1))
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    return pairs


def _binomial_shift(w: complex, order: int) -> list[complex]:
    """Coefficients of (n+1)**-w = sum_p coeff_p * n**-(w+p)."""
    out = [1.0 + 0.0j]
    cur = 1.0 + 0.0j
    for p in range(1, order + 1):
        cur *= -(w + p - 1) / p
        out.append(cur)
    return out


def _sum_tail_product(s: complex,
                      pairs_in_np1: Sequence[tuple[complex, complex]],
                      m_cut: int) -> complex:
    """sum_{n > m_cut} n**-s * sum_p c_p (n+1)**-w_p, via binomial shift."""
    if m_cut < 100:
        raise DomainError("_sum_tail_product: cut must be at least 100")
    acc = CompensatedSum()
    for coef, w in pairs_in_np1:
        shift = _binomial_shift(w, _SHIFT_ORDER)
        for p, shift_coef in enumerate(shift):
            acc.add(coef * shift_coef * em_tail(s + w + p, m_cut + 1, 8))
    return acc.value


def _sum_tail_product2(s: complex,
                       pairs_in_q: Sequence[tuple[complex, complex]],
                       pairs_in_qp1: Sequence[tuple[complex, complex]],
                       m_cut: int) -> complex:
    """sum_{q > m_cut} q**-s * A(q) * B(q+1) for two power lists."""
    if m_cut < 100:
        raise DomainError("_sum_tail_product2: cut must be at least 100")
    acc = CompensatedSum()
    for c1, w1 in pairs_in_q:
        for c2, w2 in pairs_in_qp1:
            shift = _binomial_shift(w2, _SHIFT_ORDER)
            for p, shift_coef in enumerate(shift):
                acc.add(c1 * c2 * shift_coef
                        * em_tail(s + w1 + w2 + p, m_cut + 1, 8))
    return acc.value


def _real_em(sigma: float, start: int) -> float:
    """Real positive tail sum, used by the majorant bounds."""
    return em_tail(float(sigma), start, 8).real


# ---------------------------------------------------------------------------
# convergent nested sums
# ---------------------------------------------------------------------------


def _explicit_cut(p: ArgPoint) -> int:
    im_scale = max(abs(v.imag) for v in p.s)
    return max(120, int(math.ceil(2.5 * im_scale)))


def zeta_ez_direct(s: Iterable[complex],
                   budget: EvalBudget = DEFAULT_BUDGET) -> Evaluation:
    """Nested sum evaluated inside its convergence region.

    Depths 1 to 3 use closed inner tails (Euler-Maclaurin power lists), so
    the result carries near machine accuracy. Higher depths fall back to
    truncated nested summation with integral-comparison tail estimates.
    """
    p = _as_point(s)
    if not p.in_convergence:
        raise DomainError(
            f"zeta_ez_direct: argument {p.s} violates the convergence "
            "condition (every trailing real-part sum must exceed its depth)")
    r = p.depth
    if r == 1:
        value = em_tail(p.s[0], 1, 12)
        return Evaluation(value, 1e-13 * (1.0 + abs(value)), 1, False)
    if r == 2:
        return _direct_r2(p, budget)
    if r == 3:
        return _direct_r3(p, budget)
    return _direct_generic(p, budget)


def _direct_r2(p: ArgPoint, budget: EvalBudget) -> Evaluation:
    s1, s2 = p.s
    m_cut = _explicit_cut(p)
    acc = CompensatedSum()
    for n1 in range(1, m_cut + 1):
        acc.add(n1 ** (-s1) * em_tail(s2, n1 + 1, 8))
    tail = _sum_tail_product(s1, _em_coeff_list(s2), m_cut)
    value = acc.value + tail
    est = 1e-14 * (1.0 + abs(value)) + 1e-13 * abs(tail)
    return Evaluation(value, est, m_cut, False)


def _direct_r3(p: ArgPoint, budget: EvalBudget) -> Evaluation:
    s1, s2, s3 = p.s
    m_cut = _explicit_cut(p)
    acc = CompensatedSum()
    partial = CompensatedSum()  # sum of n1**-s1 for n1 < q
    for q in range(2, m_cut + 1):
        partial.add((q - 1) ** (-s1))
        acc.add(partial.value * q ** (-s2) * em_tail(s3, q + 1, 8))
    est = 1e-14
    if abs(s1 - 1.0) > 1e-3:
        zeta_s1 = zeta_riemann(s1)
        tail = (zeta_s1 * _sum_tail_product(s2, _em_coeff_list(s3), m_cut)
                - _sum_tail_product2(s2, _em_coeff_list(s1),
                                     _em_coeff_list(s3), m_cut))
        acc.add(tail)
        est += 1e-13 * abs(tail)
    else:
        # First exponent too close to 1 for the closed tail: extend the
        # literal sum and bound the remainder with a logarithmic majorant.
        m_far = 40 * m_cut
        for q in range(m_cut + 1, m_far + 1):
            partial.add((q - 1) ** (-s1))
            acc.add(partial.value * q ** (-s2) * em_tail(s3, q + 1, 8))
        re2, re3 = s2.real, s3.real
        c3 = 1.0 / (re3 - 1.0) + 1.0 / m_far
        log_major = 1.0 + 1.01 * math.log(m_far)
        est += c3 * log_major * _real_em(re2 + re3 - 1.1, m_far + 1)
    value = acc.value
    est += 1e-14 * (1.0 + abs(value))
    return Evaluation(value, est, m_cut, False)


def _direct_generic(p: ArgPoint, budget: EvalBudget) -> Evaluation:
    """Depth four and beyond: truncated nesting with closed inner pairs.

    The two innermost indices are summed exactly: a table of
    G(q) = sum_{n > q} n**-s_{r-1} zeta(s_r, n+1) is built by backward
    recursion from a closed power-law seed, so only the outer r - 2
    indices are truncated, each with an integral-comparison tail.
    """
    r = p.depth
    outer_levels = r - 2
    per_level = max(60, int(budget.max_terms ** (1.0 / outer_levels) / 2.0))
    if outer_levels == 2:
        per_level = min(per_level, 400)
    max_base = outer_levels * per_level
    s_pen, s_last = p.s[-2], p.s[-1]
    pairs = _em_coeff_list(s_last, 8)
    g_table = [0j] * (max_base + 1)
    g_table[max_base] = _sum_tail_product(s_pen, pairs, max_base)
    for q in range(max_base - 1, -1, -1):
        n = q + 1
        g_table[q] = g_table[n] + n ** (-s_pen) * em_tail(s_last, n + 1, 8)
    state = {"terms": len(g_table), "est": 0.0, "truncated": False}

    def level(base: int, idx: int, prefix_mag: float) -> complex:
        sj = p.s[idx]
        acc = CompensatedSum()
        last = 0.0
        for m in range(1, per_level + 1):
            cum = base + m
            if idx == r - 3:
                inner = g_table[cum]
            else:
                inner = level(cum, idx + 1, prefix_mag * cum ** (-sj.real))
            acc.add(cum ** (-sj) * inner)
            state["terms"] += 1
            last = abs(inner) * cum ** (-sj.real)
        # Integral comparison on this index, weighted by the magnitude of
        # the outer prefix factors so inner tails are not over-counted.
        decay = sum(v.real for v in p.s[idx:]) - (r - 1 - idx)
        if decay > 1.0:
            state["est"] += (1.6 * prefix_mag * last * (base + per_level)
                             / (decay - 1.0))
        else:
            state["est"] += 1.6 * prefix_mag * last * (base + per_level)
            state["truncated"] = True
        return acc.value

    value = level(0, 0, 1.0)
    est = state["est"] + 1e-13 * (1.0 + abs(value))
    return Evaluation(value, est, state["terms"], state["truncated"])


# ---------------------------------------------------------------------------
# depth-2 meromorphic continuation
# ---------------------------------------------------------------------------

_POLE_MARGIN = 1e-6


def _ze2_pole_check(s1: complex, s2: complex) -> None:
    if abs(s2 - 1.0) < _POLE_MARGIN:
        raise PoleError("zeta_ez2_continued: singular hyperplane s2 = 1")
    w = s1 + s2
    for pole in (2.0, 1.0):
        if abs(w - pole) < _POLE_MARGIN:
            raise PoleError(
                f"zeta_ez2_continued: singular hyperplane s1 + s2 = "
                f"{int(pole)}")
    if w.real < 0.5:
        nearest = round(w.real / 2.0) * 2
        if nearest <= 0 and abs(w - nearest) < _POLE_MARGIN:
            raise PoleError(
                f"zeta_ez2_continued: singular hyperplane s1 + s2 = "
                f"{nearest}")


def _ze2_fixed(s1: complex, s2: complex, m_cut: int,
               K: int = 8) -> tuple[complex, float]:
    """Fixed-box continuation value plus the magnitude of the largest
    intermediate quantities, which sets the roundoff floor: far left of
    the convergence region the box terms grow like powers of the cut
    before cancelling against the tail pieces."""
    box = CompensatedSum()
    partial = CompensatedSum()
    mag = 0.0
    for n in range(2, m_cut + 1):
        partial.add((n - 1) ** (-s1))
        term = partial.value * n ** (-s2)
        box.add(term)
        mag += abs(term)
    w = s1 + s2
    out = box.value
    pieces = [zeta_riemann(s1) * em_tail(s2, m_cut + 1, 8),
              -em_tail(w - 1.0, m_cut + 1, 8) / (s1 - 1.0),
              -0.5 * em_tail(w, m_cut + 1, 8)]
    poch = s1
    for j in range(1, K + 1):
        pieces.append(-bernoulli_ratio(2 * j) * poch
                      * em_tail(w + 2 * j - 1.0, m_cut + 1, 8))
        poch *= (s1 + 2 * j - 1) * (s1 + 2 * j)
    for piece in pieces:
        out += piece
        mag = max(mag, abs(piece))
    return out, mag


def zeta_ez2_continued(s1: complex, s2: complex,
                       terms: int = 60) -> Evaluation:
    """Depth-2 nested sum continued to generic complex arguments.

    Splits off an explicit double box and replaces both tails by their
    Euler-Maclaurin power laws; the continuation is singular exactly on
    s2 = 1 and on s1 + s2 in {2, 1, 0, -2, -4, ...} (odd negative sums
    are regular points). ``terms`` sets the box size and acts as the
    stability knob: far left of the convergence region smaller boxes
    reduce cancellation between the box and the tail pieces, so callers
    there should pass a small ``terms`` and let the magnitude-aware
    error estimate arbitrate. The estimate compares against a second,
    larger box and adds the roundoff floor of the intermediates.
    """
    s1, s2 = complex(s1), complex(s2)
    _ze2_pole_check(s1, s2)
    m_cut = max(int(terms), 12)
    if abs(s1 - 1.0) <= 1e-4:
        # The representation (not the function) degenerates at s1 = 1;
        # average symmetric perturbations. The step must clear the guard
        # band from anywhere inside it, or the recursion never ends.
        eps = 3e-4
        lo = zeta_ez2_continued(s1 - eps, s2, terms)
        hi = zeta_ez2_continued(s1 + eps, s2, terms)
        value = 0.5 * (lo.value + hi.value)
        est = (0.5 * (lo.abs_err_est + hi.abs_err_est)
               + 1e-7 * (1.0 + abs(value)))
        return Evaluation(value, est, lo.terms_used + hi.terms_used, False)
    main, mag = _ze2_fixed(s1, s2, m_cut)
    check, check_mag = _ze2_fixed(s1, s2, m_cut + max(6, m_cut // 3))
    est = (abs(main - check) + 2e-15 * (mag + check_mag)
           + 1e-14 * (1.0 + abs(main)))
    return Evaluation(main, est, m_cut, False)


# ---------------------------------------------------------------------------
# weighted nested sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaGcdWeight:
    """Weight sending the increment tuple m to the divisor power sum of
    gcd(m_1, ..., m_r) with exponent ``a``."""

    a: complex

    def __call__(self, ms: Sequence[int]) -> complex:
        return divisor_sigma_gcd(self.a, ms)


def zeta_ez_weighted(s: Iterable[complex] | ArgPoint,
                     weight: Callable[[tuple[int, ...]], complex],
                     budget: EvalBudget = DEFAULT_BUDGET,
                     f_degree: float = 0.0) -> Evaluation:
    """Nested sum with a weight evaluated on the increment tuple.

    ``weight`` receives the tuple (m_1, ..., m_r) of increments. For the
    gcd divisor-power weight a dedicated closed-tail path runs at depths
    1 to 3; any other callable goes through truncated nested summation
    whose tail estimates use ``f_degree``, an exponent bounding the
    weight's growth in the largest cumulative index.
    """
    p = _as_point(s)
    if not p.in_convergence:
        raise DomainError(
            f"zeta_ez_weighted: argument {p.s} violates the convergence "
            "condition")
    if isinstance(weight, SigmaGcdWeight):
        if (p.wt - weight.a).real <= 1.0:
            raise DomainError(
                "zeta_ez_weighted: gcd weight too strong, needs "
                "Re(sum s - a) > 1")
        if p.depth == 1:
            return _weighted_gcd_r1(p, weight.a)
        if p.depth == 2:
            return _weighted_gcd_r2(p, weight.a, budget)
        if p.depth == 3:
            return _weighted_gcd_r3(p, weight.a, budget)
        raise DomainError(
            "zeta_ez_weighted: gcd weight supports depth at most 3")
    shifted = list(p.s)
    shifted[-1] = shifted[-1] - f_degree
    if not ArgPoint(shifted).in_convergence:
        raise DomainError(
            "zeta_ez_weighted: weight growth breaks convergence "
            f"(degree {f_degree} against {p.s})")
    return _weighted_generic(p, weight, budget, f_degree)


def _weighted_gcd_r1(p: ArgPoint, a: complex) -> Evaluation:
    """Depth 1: box plus exact divisor-stratified tails.

    sum_{m > M} m**-s sigma_a(m) stratifies exactly over divisors d of m:
    the d <= M strata contribute d**(a-s) times an inner tail, and the
    d > M strata reduce to a full inner sum against an outer tail.
    """
    (s1,) = p.s
    a = complex(a)
    m_cut = 240
    acc = CompensatedSum()
    for m in range(1, m_cut + 1):
        acc.add(m ** (-s1) * divisor_sigma_gcd(a, (m,)))
    for d in range(1, m_cut + 1):
        acc.add(d ** (a - s1) * em_tail(s1, m_cut // d + 1, 8))
    acc.add(zeta_riemann(s1) * em_tail(s1 - a, m_cut + 1, 8))
    value = acc.value
    return Evaluation(value, 1e-12 * (1.0 + abs(value)), m_cut, False)


def _weighted_gcd_r2(p: ArgPoint, a: complex,
                     budget: EvalBudget) -> Evaluation:
    """Depth 2: interchange the divisor sum with the inner index.

    Each m_1 block becomes a sum over d | m_1 of divisor-scaled inner
    tails. Of the outer tail (m_1 past the box) the d = 1 stratum is kept
    in closed form; deeper strata are bounded by a real majorant."""
    s1, s2 = p.s
    a = complex(a)
    re1, re2, rea = s1.real, s2.real, a.real
    inner_const = 1.05 / (re2 - 1.0) + 1.0
    expo = rea - re2 - re1  # real exponent of the d-stratum prefactor

    def rest_bound(cut: int) -> float:
        total = 0.0
        d = 2
        while d <= 400:
            start = max(cut // d, 1)
            term = (d ** expo * inner_const
                    * _real_em(re1 + re2 - 1.0, start + 1))
            total += term
            if term < 1e-18 * (1.0 + total):
                break
            d += 1
        # Completion for d beyond the loop: the inner factor is at most
        # its value at start 1.
        total += (inner_const * _real_em(re1 + re2 - 1.0, 2)
                  * _real_em(-expo, d + 1))
        return total

    m_cut = 400
    bound = rest_bound(m_cut)
    while m_cut < 20000 and bound > budget.tol / 3.0:
        m_cut *= 2
        bound = rest_bound(m_cut)
    truncated = bound > budget.tol / 3.0

    tails: dict[int, complex] = {}

    def inner_tail(c: int) -> complex:
        if c not in tails:
            tails[c] = em_tail(s2, c + 1, 8)
        return tails[c]

    acc = CompensatedSum()
    for m1 in range(1, m_cut + 1):
        block = CompensatedSum()
        for d in divisors(m1):
            block.add(d ** (a - s2) * inner_tail(m1 // d))
        acc.add(m1 ** (-s1) * block.value)
    acc.add(_sum_tail_product(s1, _em_coeff_list(s2), m_cut))
    value = acc.value
    est = bound + 1e-13 * (1.0 + abs(value))
    return Evaluation(value, est, m_cut, truncated)


def _weighted_gcd_r3(p: ArgPoint, a: complex,
                     budget: EvalBudget) -> Evaluation:
    """Depth 3: backward-recursed table of double inner tails, with the
    whole outer tail bounded by a computed real majorant table."""
    s1, s2, s3 = p.s
    a = complex(a)
    re1, re2, re3, rea = s1.real, s2.real, s3.real, a.real
    m_cut = max(200, _explicit_cut(p) // 2)
    q0 = max(m_cut, 300)
    # j_table[c] = sum_{q > c} q**-s2 * em_tail(s3, q+1); j_real majorizes
    # its magnitude termwise.
    j_table = [0.0 + 0.0j] * (q0 + 1)
    j_real = [0.0] * (q0 + 1)
    j_table[q0] = _sum_tail_product(s2, _em_coeff_list(s3), q0)
    j_real[q0] = _sum_tail_product(re2, _em_coeff_list(re3), q0).real
    for c in range(q0, 0, -1):
        j_table[c - 1] = j_table[c] + c ** (-s2) * em_tail(s3, c + 1, 8)
        j_real[c - 1] = j_real[c] + c ** (-re2) * _real_em(re3, c + 1)
    acc = CompensatedSum()
    for m1 in range(1, m_cut + 1):
        block = CompensatedSum()
        for d in divisors(m1):
            block.add(d ** (a - s2 - s3) * j_table[m1 // d])
        acc.add(m1 ** (-s1) * block.value)
    value = acc.value
    # Outer tail (m1 > m_cut), stratified over d with the real majorant:
    # within the table range sum explicitly, beyond it use the settled
    # power law of j_real with a safety factor.
    law = 1.5 * j_real[q0] * q0 ** (re2 + re3 - 2.0)
    est = 0.0
    d = 1
    while d <= 400:
        start = max(m_cut // d, 0)
        explicit = sum(c ** (-re1) * j_real[c]
                       for c in range(start + 1, q0 + 1))
        beyond = law * _real_em(re1 + re2 + re3 - 2.0, q0 + 1)
        term = d ** (rea - re2 - re3 - re1) * (explicit + beyond)
        est += term
        if term < 1e-18 * (1.0 + est):
            break
        d += 1
    est += ((j_real[0] + law) * _real_em(re1, 2)
            * _real_em(re1 + re2 + re3 - rea, d + 1))
    est += 1e-13 * (1.0 + abs(value))
    return Evaluation(value, est, m_cut, False)


def _weighted_generic(p: ArgPoint,
                      weight: Callable[[tuple[int, ...]], complex],
                      budget: EvalBudget, f_degree: float) -> Evaluation:
    """Truncated nested summation for arbitrary weight callbacks."""
    r = p.depth
    if r > 3:
        raise DomainError(
            "zeta_ez_weighted: generic weights support depth at most 3")
    state = {"terms": 0, "est": 0.0, "truncated": False}

    if r == 1:
        (s1,) = p.s
        decay = s1.real - f_degree
        acc = CompensatedSum()
        last = 0.0
        m = 0
        consec = 0
        while m < budget.max_terms:
            m += 1
            term = m ** (-s1) * weight((m,))
            acc.add(term)
            state["terms"] += 1
            last = abs(term)
            tail_now = last * m / max(decay - 1.0, 0.1)
            if tail_now < 0.5 * budget.tol * (1.0 + abs(acc.value)):
                consec += 1
                if consec >= 3:
                    break
            else:
                consec = 0
        else:
            state["truncated"] = True
        state["est"] += 1.5 * last * m / max(decay - 1.0, 0.1)
        if decay <= 1.0:
            state["truncated"] = True
        value = acc.value
    else:
        per_level = max(60, int(budget.max_terms ** (1.0 / r) / 2.0))

        def level(base: int, prefix: tuple[int, ...]) -> complex:
            idx = len(prefix)
            sj = p.s[idx]
            acc = CompensatedSum()
            last = 0.0
            for m in range(1, per_level + 1):
                cum = base + m
                if idx == r - 1:
                    term = cum ** (-sj) * weight(prefix + (m,))
                else:
                    term = cum ** (-sj) * level(cum, prefix + (m,))
                acc.add(term)
                state["terms"] += 1
                last = abs(term)
            decay = (sum(v.real for v in p.s[idx:])
                     - (r - 1 - idx) - f_degree)
            if decay > 1.0:
                state["est"] += 1.5 * last * (base + per_level) / (decay - 1.0)
            else:
                state["est"] += 1.5 * last * (base + per_level)
                state["truncated"] = True
            return acc.value

        value = level(0, ())
    est = state["est"] + 1e-13 * (1.0 + abs(value))
    return Evaluation(value, est, state["terms"], state["truncated"])
