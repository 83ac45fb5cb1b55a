"""Multi-argument irregular confluent functions.

The central object couples ``a`` exponential kernels e^(-x_k t_k) through
one shared algebraic factor (delta + t_1 + ... + t_a)^(h_1 - 1). Three
routes evaluate it: a one-dimensional rotated-ray quadrature (production),
a geometric shell series through the ordinary confluent family along x_1
(cross-check), and a large-argument asymptotic expansion with a certified
remainder bound on oscillatory prefix families. A Lauricella-type series
and its Euler-integral identity round out the module.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _quad
from .numkernel import (
    DEFAULT_BUDGET,
    CompensatedSum,
    DomainError,
    EvalBudget,
    Evaluation,
    PoleError,
    log_gamma,
    pochhammer,
    principal_power,
    psi_u_family,
    rgamma,
)

__all__ = [
    "PsiMultiArgs",
    "asymptotic_tail_bound",
    "lauricella_fd",
    "lauricella_integral_identity",
    "psi_multi_asymptotic",
    "psi_multi_quadrature",
    "psi_multi_reduced",
]


@dataclass(frozen=True, init=False)
class PsiMultiArgs:
    """Argument bundle for the multi confluent function.

    ``h`` has one more entry than ``x``; every exponent after the first
    must have positive real part (the defining integral needs it), and
    ``delta`` is the shift of the shared algebraic factor.
    """

    h: tuple[complex, ...]
    x: tuple[complex, ...]
    delta: float

    def __init__(self, h: Iterable[complex], x: Iterable[complex],
                 delta: float = 1.0) -> None:
        hs = tuple(complex(v) for v in h)
        xs = tuple(complex(v) for v in x)
        delta = float(delta)
        if not xs:
            raise ValueError("PsiMultiArgs: at least one kernel argument")
        if len(hs) != len(xs) + 1:
            raise ValueError(
                "PsiMultiArgs: need exactly one more exponent than kernel "
                f"arguments, got {len(hs)} and {len(xs)}")
        if not 0.0 <= delta <= 1.0:
            raise ValueError("PsiMultiArgs: delta must lie in [0, 1]")
        for k, v in enumerate(hs[1:], start=2):
            if v.real <= 0.0:
                raise ValueError(
                    f"PsiMultiArgs: exponent {k} must have positive real "
                    "part")
        for v in xs:
            if v == 0:
                raise ValueError("PsiMultiArgs: kernel arguments must be "
                                 "nonzero")
        object.__setattr__(self, "h", hs)
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "delta", delta)

    @property
    def order(self) -> int:
        return len(self.x)

    @property
    def h_total(self) -> complex:
        return sum(self.h)


def _near_nonpositive_integer(w: complex, margin: float = 1e-12) -> bool:
    if w.real > 0.5:
        return False
    nearest = round(w.real)
    return nearest <= 0 and abs(w - nearest) < margin


def _shell_coeffs(exponents: Sequence[complex], zs: Sequence[complex],
                  count: int) -> list[complex]:
    """First ``count`` Taylor coefficients of prod_j (1 - z_j t)**(-e_j).

    Newton's identities on the power sums p_m = sum_j e_j z_j**m give
    n C_n = sum_{m<=n} p_m C_{n-m}, symmetric in the (e_j, z_j) pairs.
    """
    es = [complex(e) for e in exponents]
    base = [complex(z) for z in zs]
    coeffs = [1.0 + 0j]
    powers = list(base)
    psums: list[complex] = []
    for _ in range(count - 1):
        psums.append(sum(e * p for e, p in zip(es, powers)))
        powers = [p * z for p, z in zip(powers, base)]
    for n in range(1, count):
        cn = sum(psums[m - 1] * coeffs[n - m] for m in range(1, n + 1)) / n
        coeffs.append(cn)
    return coeffs


# ---------------------------------------------------------------------------
# Lauricella series and the Euler-integral identity
# ---------------------------------------------------------------------------


def lauricella_fd(a_vec: Iterable[complex], b: complex, c: complex,
                  z: Iterable[complex],
                  budget: EvalBudget = DEFAULT_BUDGET) -> Evaluation:
    """Lauricella series summed over total-degree shells.

    The degree-n inner coefficient is the n-th Taylor coefficient of
    prod_j (1 - z_j t)**(-a_j), accumulated through Newton's identities,
    so the cost per shell is linear in n however many arguments there
    are. The empty-argument case is identically 1. Stops once three
    consecutive shells fall below tolerance.
    """
    a_list = [complex(v) for v in a_vec]
    z_list = [complex(v) for v in z]
    if len(a_list) != len(z_list):
        raise DomainError(
            "lauricella_fd: upper parameters and arguments must have equal "
            "length")
    b, c = complex(b), complex(c)
    if _near_nonpositive_integer(c):
        raise PoleError(
            "lauricella_fd: lower parameter at a nonpositive integer")
    zmax = max((abs(v) for v in z_list), default=0.0)
    if zmax > 1.0 - 1e-3:
        raise DomainError(
            "lauricella_fd: every argument must satisfy |z| <= 1 - 1e-3")
    coeffs = [1.0 + 0j]
    powers = list(z_list)
    psums: list[complex] = []
    ratio = 1.0 + 0j
    acc = CompensatedSum()
    acc.add(1.0)
    max_abs = 1.0
    consec = 0
    shells = 0
    cap = min(budget.max_terms, 4000)
    truncated = True
    last_mag = 0.0
    while shells < cap:
        n = shells + 1
        psums.append(sum(e * p for e, p in zip(a_list, powers)))
        powers = [p * z0 for p, z0 in zip(powers, z_list)]
        cn = sum(psums[m - 1] * coeffs[n - m] for m in range(1, n + 1)) / n
        coeffs.append(cn)
        ratio *= (b + n - 1.0) / (c + n - 1.0)
        term = ratio * cn
        acc.add(term)
        last_mag = abs(term)
        max_abs = max(max_abs, abs(acc.value))
        shells = n
        if last_mag <= budget.tol * max(abs(acc.value), 1e-300):
            consec += 1
            if consec >= 3:
                truncated = False
                break
        else:
            consec = 0
    geo = zmax / max(1.0 - zmax, 1e-3)
    est = 2.0 * last_mag * max(geo, 1.0) + 1e-15 * max_abs
    return Evaluation(acc.value, est, shells + 1, truncated)


def lauricella_integral_identity(
        h: Iterable[complex], alpha: Iterable[complex],
        budget: EvalBudget = DEFAULT_BUDGET) -> tuple[Evaluation, Evaluation]:
    """Both sides of the Euler-type integral identity.

    Returns (quadrature, closed): the integral
    int_0^inf u**(h_1-1) (1+u)**(h_2-1) prod_j (1 + alpha_j u)**(h_{j+2}-1) du
    evaluated after the u = t/(1-t) substitution on the unit interval, and
    the Gamma-ratio times Lauricella series it must equal. The two sides
    share no numerical machinery beyond elementary arithmetic.
    """
    h_list = [complex(v) for v in h]
    alpha_list = [complex(v) for v in alpha]
    n = len(alpha_list)
    if len(h_list) != n + 2:
        raise DomainError(
            "lauricella_integral_identity: need two more exponents than "
            "alpha entries")
    h1 = h_list[0]
    h_sum = sum(h_list)
    if h1.real <= 0.0:
        raise DomainError(
            "lauricella_integral_identity: first exponent needs positive "
            "real part")
    if h_sum.real >= n + 1.0:
        raise DomainError(
            "lauricella_integral_identity: requires Re(sum h) < n + 1 for "
            "convergence at infinity")
    for aj in alpha_list:
        if abs(1.0 - aj) > 1.0 - 1e-3:
            raise DomainError(
                "lauricella_integral_identity: |1 - alpha_j| must stay "
                "within 1 - 1e-3")
    alpha0 = h1 - 1.0
    alpha1 = float(n) - h_sum
    rule = _quad.tanh_sinh_01(max(budget.quad_nodes, 200),
                              alpha0.real, alpha1.real)
    regular = np.ones_like(rule.t, dtype=complex)
    for aj, hj in zip(alpha_list, h_list[2:]):
        regular = regular * (1.0 - (1.0 - aj) * rule.t) ** (hj - 1.0)
    fine, err = rule.integrate(regular, alpha0=alpha0, alpha1=alpha1)
    quad_ev = Evaluation(fine, err, len(rule.t), False)

    fd = lauricella_fd([1.0 - v for v in h_list[2:]], h1,
                       1.0 - sum(h_list[1:]) + n,
                       [1.0 - aj for aj in alpha_list], budget)
    front = cmath.exp(log_gamma(h1) + log_gamma(1.0 - h_sum + n)
                      - log_gamma(1.0 - sum(h_list[1:]) + n))
    closed_ev = Evaluation(front * fd.value,
                           abs(front) * fd.abs_err_est
                           + 1e-15 * abs(front * fd.value),
                           fd.terms_used, fd.truncated)
    return quad_ev, closed_ev


# ---------------------------------------------------------------------------
# production quadrature route
# ---------------------------------------------------------------------------


def psi_multi_quadrature(args: PsiMultiArgs,
                         budget: EvalBudget = DEFAULT_BUDGET) -> Evaluation:
    """One-dimensional rotated-ray integral for the multi confluent value.

    The inner coordinates integrate out exactly, leaving

        x_1**(1-h_1-h_2) prod_{j>=2} x_j**(-h_{j+1}) / Gamma(1-h_1)
        * int_0^inf e^(-delta x_1 t) t^(-h_1) (1+t)^(-h_2)
                    prod_{j>=2} (1 + (x_1/x_j) t)^(-h_{j+1}) dt

    along the ray arg t = ray_angle (default: minus half the phase of
    x_1). Every algebraic factor must keep its branch point off the ray.
    """
    h, x, delta = args.h, args.x, args.delta
    h1 = h[0]
    if h1.real >= 1.0:
        raise DomainError("psi_multi_quadrature: requires Re h_1 < 1")
    x1 = x[0]
    h_total = args.h_total
    phi = budget.ray_angle
    if phi is None:
        phi = 0.0 if delta == 0.0 else -cmath.phase(x1) / 2.0
    if delta > 0.0 and abs(phi + cmath.phase(x1)) >= math.pi / 2.0 - 1e-3:
        raise DomainError(
            "psi_multi_quadrature: |ray_angle + arg x_1| must stay below "
            "pi/2")
    ratios = [x1 / xj for xj in x[1:]]
    for rho in ratios:
        if abs(cmath.phase(rho) + phi) >= math.pi - 0.05:
            raise DomainError(
                "psi_multi_quadrature: the ray runs into a kernel-factor "
                "branch point")
    n_nodes = budget.quad_nodes
    if delta == 0.0:
        if h_total.real <= 1.0:
            raise DomainError(
                "psi_multi_quadrature: delta = 0 requires Re(sum h) > 1")
        rate = 0j
        rule = _quad.exp_sinh_0inf(n_nodes, -h1.real, scale=1.0,
                                   log_upper=44.0 / (h_total.real - 1.0))
    else:
        rate = delta * x1 * cmath.exp(1j * phi)
        lam = rate.real
        if lam <= 0.0:
            raise DomainError(
                "psi_multi_quadrature: nonpositive decay rate on the ray")
        if abs(rate.imag) / lam > 1.5:
            n_nodes = int(n_nodes * 1.6)
        grow = max(-h1.real, 0.0)
        u_cap = (44.0 + grow * math.log(1.0 + 48.0 / lam + grow / lam)) / lam
        if h_total.real > 1.0:
            u_cap = min(u_cap, math.exp(44.0 / (h_total.real - 1.0)))
        rule = _quad.exp_sinh_0inf(
            n_nodes, -h1.real, scale=(1.0 + grow) / lam,
            log_upper=math.log(u_cap) + 0.1)
    y = rule.x * cmath.exp(1j * phi)
    log_regular = -rate * rule.x - h[1] * np.log(1.0 + y)
    for rho, hj in zip(ratios, h[2:]):
        log_regular = log_regular - hj * np.log(1.0 + rho * y)
    fine, err = rule.integrate(np.exp(log_regular), alpha=-h1)
    front = (principal_power(x1, 1.0 - h1 - h[1]) * rgamma(1.0 - h1)
             * cmath.exp(1j * phi * (1.0 - h1)))
    for xj, hj in zip(x[1:], h[2:]):
        front *= principal_power(xj, -hj)
    return Evaluation(front * fine, abs(front) * err, len(rule.x), False)


# ---------------------------------------------------------------------------
# shell-series route
# ---------------------------------------------------------------------------


def psi_multi_reduced(args: PsiMultiArgs,
                      budget: EvalBudget = DEFAULT_BUDGET) -> Evaluation:
    """Shell series through the ordinary confluent family along x_1.

    Valid at delta = 1: the value is a power series in the deviations
    w_j = 1 - x_1/x_j, the total-degree-n shell multiplying the n-th
    member of the absorbed confluent family. Family members are computed
    once per degree in vectorized chunks (the degree cache the shells
    share), so the series costs one contour sweep per 40 shells.
    """
    h, x = args.h, args.x
    if args.delta != 1.0:
        raise DomainError("psi_multi_reduced: series form needs delta = 1")
    h1 = h[0]
    if h1.real >= 1.0:
        raise DomainError("psi_multi_reduced: requires Re h_1 < 1")
    x1 = x[0]
    ws = [1.0 - x1 / xj for xj in x[1:]]
    wmax = max((abs(w) for w in ws), default=0.0)
    if wmax > 1.0 - 1e-3:
        raise DomainError(
            "psi_multi_reduced: ratio deviations |1 - x_1/x_j| must stay "
            "within 1 - 1e-3")
    h_total = args.h_total
    exps = list(h[2:])
    cap = min(400, budget.max_terms)
    chunk = 40
    coeffs = [1.0 + 0j]
    powers = list(ws)
    psums: list[complex] = []
    acc = CompensatedSum()
    quad_err = 0.0
    consec = 0
    shells = 0
    truncated = True
    last_mag = 0.0
    values = errors = None
    chunk_lo = 0
    while shells < cap:
        n = shells
        if values is None or n - chunk_lo >= len(values):
            chunk_lo = n
            hi = min(n + chunk, cap) - 1
            values, errors = psi_u_family(h1, h_total, x1, n_hi=hi, n_lo=n,
                                          nodes=budget.quad_nodes)
        if n > 0:
            psums.append(sum(e * p for e, p in zip(exps, powers)))
            powers = [p * w for p, w in zip(powers, ws)]
            cn = sum(psums[m - 1] * coeffs[n - m]
                     for m in range(1, n + 1)) / n
            coeffs.append(cn)
        term = coeffs[n] * values[n - chunk_lo]
        acc.add(term)
        quad_err += abs(coeffs[n]) * errors[n - chunk_lo]
        last_mag = abs(term)
        shells = n + 1
        if wmax == 0.0:
            truncated = False
            break
        if last_mag <= budget.tol * max(abs(acc.value), 1e-300):
            consec += 1
            if consec >= 3:
                truncated = False
                break
        else:
            consec = 0
    front = principal_power(x1, 1.0 - h1 - h[1])
    for xj, hj in zip(x[1:], h[2:]):
        front *= principal_power(xj, -hj)
    geo_tail = 2.0 * last_mag * wmax / max(1.0 - wmax, 1e-3)
    value = front * acc.value
    est = abs(front) * (quad_err + geo_tail) + 1e-15 * abs(value)
    return Evaluation(value, est, shells, truncated)


# ---------------------------------------------------------------------------
# asymptotic route and its certified bound
# ---------------------------------------------------------------------------


def _prefix_integers(x: Sequence[complex]) -> list[int]:
    """Recover K_j from x_j = (+-2 pi i) K_j, or raise."""
    sign = 1.0 if x[0].imag > 0 else -1.0
    ks: list[int] = []
    prev = 0
    for xj in x:
        w = xj / (2j * math.pi * sign)
        k = round(w.real)
        if k < 1 or abs(w - k) > 1e-9 * max(1.0, float(k)):
            raise DomainError(
                "asymptotic_tail_bound: kernel arguments must be 2 pi i "
                "times positive integers of one sign")
        if k <= prev:
            raise DomainError(
                "asymptotic_tail_bound: the integer multipliers must be "
                "strictly increasing prefix sums")
        ks.append(k)
        prev = k
    return ks


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def asymptotic_tail_bound(args: PsiMultiArgs, n_terms: int) -> float:
    """Certified remainder bound after ``n_terms`` asymptotic shells.

    Valid for kernel arguments of the oscillatory prefix form
    x_j = (+-2 pi i) K_j with strictly increasing positive integers K_j;
    the bound majorizes the dropped remainder of the expansion.
    """
    h, x = args.h, args.x
    a = len(x)
    if a > 3:
        raise DomainError(
            "asymptotic_tail_bound: implemented for at most three kernel "
            "arguments")
    if not 1 <= n_terms <= 40:
        raise DomainError(
            "asymptotic_tail_bound: order must lie in 1..40")
    h1 = h[0]
    if h1.real >= n_terms + 1.0:
        raise DomainError("asymptotic_tail_bound: needs Re h_1 < N + 1")
    ks = _prefix_integers(x)
    k1 = ks[0]
    log_front = (-(h[1].real) - n_terms) * math.log(2.0 * math.pi * k1)
    for j in range(1, a):
        log_front += -(h[j + 1].real) * math.log(2.0 * math.pi * ks[j])
    log_front += (math.lgamma(n_terms - h1.real + 1.0)
                  - log_gamma(1.0 - h1).real)
    log_front += math.pi * sum(abs(v.imag) for v in h[1:])
    comp_sum = 0.0
    for m in _compositions(n_terms, a):
        prod = 1.0
        for i in range(a):
            prod *= (abs(pochhammer(h[i + 1], m[i]))
                     * (k1 / ks[i]) ** m[i] / math.factorial(m[i]))
        comp_sum += prod
    return math.exp(log_front) * comp_sum


def psi_multi_asymptotic(args: PsiMultiArgs, n_terms: int) -> Evaluation:
    """Large-argument expansion truncated before shell ``n_terms``.

    The error estimate is the certified remainder bound when the kernel
    arguments form an oscillatory prefix family, otherwise the magnitude
    of the first omitted shell.
    """
    h, x = args.h, args.x
    if n_terms < 1:
        raise DomainError("psi_multi_asymptotic: need at least one shell")
    h1 = h[0]
    if h1.real >= 1.0:
        raise DomainError("psi_multi_asymptotic: requires Re h_1 < 1")
    if abs(x[0]) < 2.0 * math.pi - 1e-9:
        raise DomainError("psi_multi_asymptotic: requires |x_1| >= 2 pi")
    coeffs = _shell_coeffs(list(h[1:]), [1.0 / xk for xk in x], n_terms + 1)
    acc = CompensatedSum()
    poch = 1.0 + 0j
    sign = 1.0
    for n in range(n_terms):
        acc.add(sign * poch * coeffs[n])
        poch *= 1.0 - h1 + n
        sign = -sign
    front = 1.0 + 0j
    for xk, hk in zip(x, h[1:]):
        front *= principal_power(xk, -hk)
    value = front * acc.value
    try:
        est = asymptotic_tail_bound(args, n_terms)
    except DomainError:
        est = abs(front) * abs(poch * coeffs[n_terms])
    return Evaluation(value, est, n_terms, False)


# ---------------------------------------------------------------------------
# literal-definition oracle (testing only)
# ---------------------------------------------------------------------------


def _psi_multi_integral_oracle(args: PsiMultiArgs,
                               nodes: int = 400) -> Evaluation:
    """Tensor-grid evaluation of the defining integral, one rotated ray
    per coordinate. Exponential cost; supports one or two kernel
    arguments and exists to cross-check the production routes."""
    h, x, delta = args.h, args.x, args.delta
    a = len(x)
    if a > 2:
        raise DomainError(
            "integral oracle handles at most two kernel arguments")
    if delta == 0.0:
        if args.h_total.real <= 1.0:
            raise DomainError(
                "integral oracle: delta = 0 requires Re(sum h) > 1")
        if a > 1:
            raise DomainError(
                "integral oracle: delta = 0 needs the corner singularity "
                "folded into the weight, only done for one coordinate")
    rules = []
    phases = []
    rates = []
    norm = 1.0 + 0j
    for k, xk in enumerate(x):
        phi = -cmath.phase(xk) / 2.0
        rate = xk * cmath.exp(1j * phi)
        lam = rate.real
        beta = h[k + 1].real - 1.0
        if a == 1 and delta == 0.0:
            beta += h[0].real - 1.0
        grow = max(beta, 0.0)
        u_cap = (44.0 + grow * math.log(1.0 + 48.0 / lam + grow / lam)) / lam
        rules.append(_quad.exp_sinh_0inf(
            nodes, beta, scale=(1.0 + grow) / lam,
            log_upper=math.log(u_cap) + 0.1))
        phases.append(phi)
        rates.append(rate)
        norm *= rgamma(h[k + 1]) * cmath.exp(1j * phi * h[k + 1])
    if a == 1:
        rule = rules[0]
        decay = np.exp(-rates[0] * rule.x)
        if delta == 0.0:
            fine, err = rule.integrate(decay, alpha=h[0] + h[1] - 2.0)
            fine *= cmath.exp(1j * phases[0] * (h[0] - 1.0))
        else:
            t = rule.x * cmath.exp(1j * phases[0])
            regular = decay * (delta + t) ** (h[0] - 1.0)
            fine, err = rule.integrate(regular, alpha=h[1] - 1.0)
        return Evaluation(norm * fine, abs(norm) * err, len(rule.x), False)
    rule1, rule2 = rules
    t1 = rule1.x * cmath.exp(1j * phases[0])
    t2 = rule2.x * cmath.exp(1j * phases[1])
    inner_regular = np.exp(-rates[1] * rule2.x)
    outer_vals = np.empty(len(rule1.x), dtype=complex)
    inner_errs = 0.0
    outer_weights = rule1.weights_with_power(h[1] - 1.0)
    shared = (delta + t1[:, None] + t2[None, :]) ** (h[0] - 1.0)
    for i in range(len(rule1.x)):
        fine, err = rule2.integrate(inner_regular * shared[i],
                                    alpha=h[2] - 1.0)
        outer_vals[i] = fine
        inner_errs += abs(outer_weights[i]) * err
    decay1 = np.exp(-rates[0] * rule1.x)
    fine, err = _quad.split_sums(outer_weights * decay1 * outer_vals)
    return Evaluation(norm * fine, abs(norm) * (err + inner_errs),
                      len(rule1.x) * len(rule2.x), False)
