"""Scalar numerical kernels: gamma helpers, Bernoulli data, confluent
hypergeometric evaluators, and Euler-Maclaurin tail sums.

Everything downstream builds on this module. Evaluators return an
``Evaluation`` carrying the value, an absolute error estimate, the number
of terms or nodes consumed, and whether a hard cap (rather than the
tolerance test) stopped the computation.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.special as _sps

from . import _quad

__all__ = [
    "ComplexValue",
    "CompensatedSum",
    "DomainError",
    "EvalBudget",
    "Evaluation",
    "PoleError",
    "bernoulli",
    "bernoulli_ratio",
    "em_tail",
    "gamma",
    "kummer_1f1",
    "log_gamma",
    "pochhammer",
    "principal_power",
    "psi_u",
    "psi_u_asymptotic",
    "psi_u_family",
    "rgamma",
]

ComplexValue = complex


class DomainError(ValueError):
    """An argument lies outside the domain an evaluator supports."""


class PoleError(DomainError):
    """An argument sits on (or within 1e-12 of) a pole."""


@dataclass(frozen=True)
class EvalBudget:
    """Caps and targets shared by the iterative evaluators.

    ``ray_angle`` overrides the integration-contour rotation used by the
    quadrature routes; ``None`` selects the angle automatically (half the
    negative argument of the exponential rate).
    """

    max_terms: int = 200_000
    tol: float = 1e-12
    quad_nodes: int = 600
    ray_angle: float | None = None

    def __post_init__(self) -> None:
        if self.max_terms <= 0:
            raise ValueError("max_terms must be positive")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.quad_nodes <= 0:
            raise ValueError("quad_nodes must be positive")


DEFAULT_BUDGET = EvalBudget()


@dataclass(frozen=True)
class Evaluation:
    """Result of a truncated evaluation.

    ``truncated`` is True when a hard cap stopped the computation before
    the internal tolerance test was satisfied.
    """

    value: complex
    abs_err_est: float
    terms_used: int
    truncated: bool


class CompensatedSum:
    """Kahan compensated accumulator, valid for complex terms."""

    __slots__ = ("_sum", "_comp")

    def __init__(self) -> None:
        self._sum = 0.0 + 0.0j
        self._comp = 0.0 + 0.0j

    def add(self, term: complex) -> None:
        y = term - self._comp
        t = self._sum + y
        self._comp = (t - self._sum) - y
        self._sum = t

    @property
    def value(self) -> complex:
        return self._sum


# --------------------------------------------------------------------------
# gamma helpers
# --------------------------------------------------------------------------

_NEAR_POLE = 1e-12


def _nonpositive_integer_distance(z: complex) -> float:
    z = complex(z)
    n0 = round(z.real)
    if n0 > 0:
        return math.inf
    return abs(z - n0)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma; raises PoleError near 0, -1, -2, ..."""
    z = complex(z)
    if _nonpositive_integer_distance(z) < _NEAR_POLE:
        raise PoleError(f"log_gamma: argument {z} is at a pole of gamma")
    return complex(_sps.loggamma(z))


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


def rgamma(z: complex) -> complex:
    """1 / Gamma(z); exactly 0 at (and within 1e-12 of) the poles."""
    if _nonpositive_integer_distance(z) < _NEAR_POLE:
        return 0.0 + 0.0j
    return cmath.exp(-complex(_sps.loggamma(complex(z))))


def principal_power(base: complex, expo: complex) -> complex:
    """base**expo on the principal branch (arg in (-pi, pi])."""
    if base == 0:
        raise DomainError("principal_power: base must be nonzero")
    return cmath.exp(complex(expo) * cmath.log(complex(base)))


def pochhammer(a: complex, n: int) -> complex:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1) as a literal product."""
    if n < 0 or n != int(n):
        raise DomainError("pochhammer: n must be a nonnegative integer")
    out = 1.0 + 0.0j
    a = complex(a)
    for k in range(int(n)):
        out *= a + k
    return out


def poch_over_factorial(a: complex, n_hi: int) -> np.ndarray:
    """Array of (a)_n / n! for n = 0 .. n_hi, built by stable recursion."""
    out = np.empty(n_hi + 1, dtype=complex)
    out[0] = 1.0
    a = complex(a)
    for n in range(n_hi):
        out[n + 1] = out[n] * (a + n) / (n + 1)
    return out


# --------------------------------------------------------------------------
# Bernoulli numbers
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    table: list[Fraction] = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * table[j]
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k (B_1 = -1/2 convention)."""
    if k < 0 or k != int(k):
        raise DomainError("bernoulli: index must be a nonnegative integer")
    return _bernoulli_table(int(k))[int(k)]


@lru_cache(maxsize=None)
def bernoulli_ratio(two_k: int) -> float:
    """B_{2k} / (2k)! as a float, stable for large index."""
    if two_k < 2 or two_k % 2 != 0:
        raise DomainError("bernoulli_ratio: index must be a positive even int")
    if two_k <= 60:
        return float(bernoulli(two_k) / math.factorial(two_k))
    # 2 (-1)^{k+1} zeta(2k) / (2 pi)^{2k}; zeta(2k) is 1 + tiny here.
    zeta_even = sum(i ** (-float(two_k)) for i in range(1, 7))
    sign = 1.0 if (two_k // 2) % 2 == 1 else -1.0
    return sign * 2.0 * zeta_even * (2.0 * math.pi) ** (-float(two_k))


# --------------------------------------------------------------------------
# Kummer confluent series
# --------------------------------------------------------------------------


def kummer_1f1(b: complex, c: complex, x: complex,
               budget: EvalBudget = DEFAULT_BUDGET) -> Evaluation:
    """Regular confluent series sum_m (b)_m x^m / ((c)_m m!).

    Raises PoleError when c is within 1e-12 of a nonpositive integer. The
    error estimate combines the last term with a cancellation term scaled
    by the largest intermediate partial sum.
    """
    b, c, x = complex(b), complex(c), complex(x)
    if _nonpositive_integer_distance(c) < _NEAR_POLE:
        raise PoleError(f"kummer_1f1: c = {c} is a nonpositive integer")
    acc = CompensatedSum()
    acc.add(1.0)
    term = 1.0 + 0.0j
    max_abs = 1.0
    consec = 0
    n = 0
    truncated = True
    while n < budget.max_terms:
        term *= (b + n) * x / ((n + 1) * (c + n))
        acc.add(term)
        n += 1
        cur = abs(acc.value)
        if cur > max_abs:
            max_abs = cur
        if abs(term) < budget.tol * max(cur, 1e-300):
            consec += 1
            if consec >= 3:
                truncated = False
                break
        else:
            consec = 0
    est = abs(term) + 1e-16 * max_abs
    return Evaluation(acc.value, est, n, truncated)


# --------------------------------------------------------------------------
# Euler-Maclaurin tail sums
# --------------------------------------------------------------------------


def em_tail(s: complex, N: int, K: int) -> complex:
    """Analytically continued tail sum_{n >= N} n^{-s}.

    The formula is applied at an internally lifted starting index (at least
    24, larger for big imaginary part), with the gap bridged by exact
    powers, so results are essentially independent of N and K. K acts as a
    lower bound on the number of Bernoulli correction terms.
    """
    s = complex(s)
    if N < 1:
        raise DomainError("em_tail: N must be at least 1")
    if K < 1:
        raise DomainError("em_tail: K must be at least 1")
    if abs(s - 1.0) < _NEAR_POLE:
        raise PoleError("em_tail: pole at s = 1")
    n_star = max(int(N), 24, int(math.ceil(0.6 * abs(s.imag))))
    bridge = 0.0 + 0.0j
    if n_star > N:
        m = np.arange(N, n_star, dtype=float)
        bridge = complex(np.sum(np.exp(-s * np.log(m))))
    k_eff = max(int(K), 8, int(math.ceil((3.0 - s.real) / 2.0)) + 4)
    k_eff = min(k_eff, 30)
    log_n = math.log(n_star)
    tail = cmath.exp((1.0 - s) * log_n) / (s - 1.0)
    tail += cmath.exp(-s * log_n) / 2.0
    poch = s  # (s)_{2j-1} for j = 1
    for j in range(1, k_eff + 1):
        tail += (bernoulli_ratio(2 * j) * poch
                 * cmath.exp((-s - 2 * j + 1) * log_n))
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    return bridge + tail


# --------------------------------------------------------------------------
# Tricomi confluent function (irregular solution)
# --------------------------------------------------------------------------

_SERIES_RADIUS = 30.0


def _validate_x(x: complex) -> complex:
    x = complex(x)
    if x == 0:
        raise DomainError("tricomi evaluators: x = 0 is outside the domain")
    if x.imag == 0.0 and x.real < 0.0:
        raise DomainError(
            "tricomi evaluators: x on the negative real axis (branch cut) "
            "is outside the supported domain")
    return x


def _integer_distance(c: complex) -> float:
    return abs(c - round(complex(c).real))


def _series_pair(b: complex, c: complex, x: complex,
                 budget: EvalBudget) -> Evaluation:
    """Two-series representation; c must be safely away from integers."""
    f1 = kummer_1f1(b, c, x, budget)
    f2 = kummer_1f1(b - c + 1.0, 2.0 - c, x, budget)
    coef1 = cmath.exp(log_gamma(1.0 - c)) * rgamma(b - c + 1.0)
    coef2 = principal_power(x, 1.0 - c) * cmath.exp(log_gamma(c - 1.0)) \
        * rgamma(b)
    t1 = coef1 * f1.value
    t2 = coef2 * f2.value
    value = t1 + t2
    magnitude = abs(t1) + abs(t2)
    if abs(value) > 0 and magnitude / abs(value) > 1e6:
        warnings.warn(
            "tricomi series branch lost more than six digits to "
            "cancellation between its two terms", RuntimeWarning,
            stacklevel=3)
    est = (abs(coef1) * f1.abs_err_est + abs(coef2) * f2.abs_err_est
           + 1e-16 * magnitude)
    return Evaluation(value, est, f1.terms_used + f2.terms_used,
                      f1.truncated or f2.truncated)


def _series_route(b: complex, c: complex, x: complex,
                  budget: EvalBudget) -> Evaluation:
    if _integer_distance(c) >= 1e-8:
        return _series_pair(b, c, x, budget)
    # Near-integer c: average symmetric perturbations of the second index.
    eps = 1e-5
    lo = _series_pair(b, c - eps, x, budget)
    hi = _series_pair(b, c + eps, x, budget)
    value = 0.5 * (lo.value + hi.value)
    est = 0.5 * (lo.abs_err_est + hi.abs_err_est) + 0.5 * abs(hi.value - lo.value)
    return Evaluation(value, est, lo.terms_used + hi.terms_used,
                      lo.truncated or hi.truncated)


def _asymptotic_scan(b: complex, c: complex, x: complex,
                     n_cap: int = 300) -> tuple[int, float]:
    """Locate the optimal truncation order of the large-x expansion.

    Returns (order, magnitude of the smallest term relative to 1).
    """
    term = 1.0 + 0.0j
    best_n = 1
    best = 1.0
    n = 0
    while n < n_cap:
        term *= (b + n) * (b - c + 1.0 + n) / (-(n + 1) * x)
        n += 1
        size = abs(term)
        if size < best:
            best = size
            best_n = n + 1
        if size == 0.0:
            return n, 0.0
        if size > 10.0 * best or size < 1e-18:
            break
    return best_n, best


def psi_u_asymptotic(b: complex, c: complex, x: complex, N: int) -> Evaluation:
    """Large-x expansion x^-b sum_{n<N} (b)_n (b-c+1)_n (-1/x)^n / n!.

    The error estimate is the magnitude of the first omitted term. Emits a
    RuntimeWarning when the terms start growing before the requested order,
    the signature of a divergent tail.
    """
    b, c = complex(b), complex(c)
    x = _validate_x(x)
    if N < 1:
        raise DomainError("psi_u_asymptotic: N must be at least 1")
    term = 1.0 + 0.0j
    acc = CompensatedSum()
    acc.add(term)
    grew = False
    prev = 1.0
    for n in range(int(N) - 1):
        term *= (b + n) * (b - c + 1.0 + n) / (-(n + 1) * x)
        acc.add(term)
        if abs(term) > prev:
            grew = True
        prev = abs(term)
    omitted = term * (b + N - 1) * (b - c + N) / (-N * x)
    if grew or abs(omitted) > prev:
        warnings.warn(
            "psi_u_asymptotic: expansion terms grew before the requested "
            "order; the tail is divergent at this x", RuntimeWarning,
            stacklevel=2)
    prefactor = principal_power(x, -b)
    value = prefactor * acc.value
    return Evaluation(value, abs(prefactor) * abs(omitted), int(N), False)


def _ray_angle_for(x: complex, budget: EvalBudget) -> float:
    phi = budget.ray_angle
    if phi is None:
        phi = -cmath.phase(x) / 2.0
    if abs(phi + cmath.phase(x)) >= math.pi / 2.0 - 1e-3:
        raise DomainError(
            "quadrature contour: |ray_angle + arg x| must stay below pi/2")
    return float(phi)


def _quadrature_route(b: complex, c: complex, x: complex,
                      budget: EvalBudget) -> Evaluation:
    """Rotated-ray integral of the standard kernel; flips the indices via
    the reflection of the second parameter when Re b <= 0."""
    b, c = complex(b), complex(c)
    x = _validate_x(x)
    if b.real > 1e-2:
        return _quadrature_direct(b, c, x, budget)
    if (b - c).real + 1.0 > 1e-2:
        inner = _quadrature_direct(b - c + 1.0, 2.0 - c, x, budget)
        scale = principal_power(x, 1.0 - c)
        return Evaluation(scale * inner.value,
                          abs(scale) * inner.abs_err_est,
                          inner.terms_used, inner.truncated)
    raise DomainError(
        "quadrature route requires Re b > 0 or Re(b - c + 1) > 0")


def _quadrature_direct(b: complex, c: complex, x: complex,
                       budget: EvalBudget) -> Evaluation:
    phi = _ray_angle_for(x, budget)
    rate = x * cmath.exp(1j * phi)
    lam = rate.real
    if lam <= 0.0:
        raise DomainError("quadrature contour: nonpositive decay rate")
    osc_ratio = abs(rate.imag) / lam
    n_nodes = budget.quad_nodes
    if osc_ratio > 1.5:
        n_nodes = int(n_nodes * 1.6)
    beta = b.real - 1.0
    grow = max((c - b - 1.0).real, 0.0)
    u_cap = (44.0 + grow * math.log(1.0 + 48.0 / lam + grow / lam)) / lam
    rule = _quad.exp_sinh_0inf(
        n_nodes, beta,
        scale=(1.0 + max(b.real - 1.0, 0.0)) / lam,
        log_upper=math.log(u_cap) + 0.1)
    y = rule.x * cmath.exp(1j * phi)
    regular = np.exp(-rate * rule.x + (c - b - 1.0) * np.log(1.0 + y))
    fine, err = rule.integrate(regular, alpha=b - 1.0)
    phase = cmath.exp(1j * phi * b - log_gamma(b))
    return Evaluation(phase * fine, abs(phase) * err, len(rule.x), False)


def psi_u(b: complex, c: complex, x: complex,
          budget: EvalBudget = DEFAULT_BUDGET, route: str = "auto") -> Evaluation:
    """Irregular confluent function, automatically routed.

    ``route`` may force "series" (two regular series, with symmetric
    perturbation when the second index is nearly integer), "asymptotic"
    (optimally truncated large-x expansion), or "quadrature" (rotated-ray
    integral, the workhorse for oscillatory arguments). The default "auto"
    tries the cheapest route whose internal error estimate meets the
    budget tolerance.
    """
    b, c = complex(b), complex(c)
    x = _validate_x(x)
    if route == "series":
        return _series_route(b, c, x, budget)
    if route == "asymptotic":
        n_opt, _ = _asymptotic_scan(b, c, x)
        return psi_u_asymptotic(b, c, x, n_opt)
    if route == "quadrature":
        return _quadrature_route(b, c, x, budget)
    if route != "auto":
        raise DomainError(f"psi_u: unknown route {route!r}")

    tol_eff = max(budget.tol, 1e-13)
    if _integer_distance(c) >= 1e-8 and abs(x) <= _SERIES_RADIUS:
        # Digits lost to cancellation, both inside each series (growth of
        # partial sums away from the positive real axis) and between the
        # two terms (their exponential parts against an algebraic result).
        loss_digits = 0.4343 * ((abs(x) - x.real) + max(x.real, 0.0)) + 2.0
        if 10.0 ** (-16.0 + loss_digits) <= tol_eff / 3.0:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", RuntimeWarning)
                ev = _series_pair(b, c, x, budget)
            if ev.abs_err_est <= tol_eff / 2.0 * (1.0 + abs(ev.value)):
                for item in caught:
                    warnings.warn(str(item.message), RuntimeWarning,
                                  stacklevel=2)
                return ev
    if abs(x) >= 10.0:
        n_opt, est_rel = _asymptotic_scan(b, c, x)
        if est_rel <= tol_eff / 3.0:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                return psi_u_asymptotic(b, c, x, n_opt)
    if b.real > 1e-2 or (b - c).real + 1.0 > 1e-2:
        return _quadrature_route(b, c, x, budget)
    return _series_route(b, c, x, budget)


def psi_u_family(h1: complex, big_h: complex, x: complex, n_hi: int,
                 n_lo: int = 0, nodes: int = 700,
                 ray_angle: float | None = None
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized family u_n = (1 - h1)_n * psi_u(1 - h1 + n, 2 - H; x)
    for n = n_lo .. n_hi, all orders sharing one rotated contour.

    The family identity absorbs the rising factorial into the integral, so
    large orders never overflow; successive orders differ by one extra
    power of y / (1 + y) applied to the shared weighted kernel.

    Returns (values, error_estimates) as arrays of length n_hi - n_lo + 1.
    Requires Re h1 < 1.
    """
    h1, big_h = complex(h1), complex(big_h)
    x = _validate_x(x)
    if h1.real >= 1.0:
        raise DomainError("psi_u_family: requires Re h1 < 1")
    if n_hi < n_lo or n_lo < 0:
        raise DomainError("psi_u_family: bad order range")
    phi = ray_angle
    if phi is None:
        phi = -cmath.phase(x) / 2.0
    rate = x * cmath.exp(1j * phi)
    lam = rate.real
    if lam <= 0.0:
        raise DomainError("psi_u_family: nonpositive decay rate on the ray")
    u_cap = (44.0 + 2.0 * math.sqrt(max(n_hi, 1) * lam)) / lam
    beta = -h1.real + n_lo
    rule = _quad.exp_sinh_0inf(max(nodes, 31), beta, scale=1.0 / lam,
                               log_upper=math.log(u_cap) + 0.1)
    y = rule.x * cmath.exp(1j * phi)
    regular = np.exp(-rate * rule.x + (h1 - big_h) * np.log(1.0 + y))
    weights = rule.weights_with_power(-h1)
    kernel = weights * regular * cmath.exp(1j * phi * (1.0 - h1))
    ratio = y / (1.0 + y)
    if n_lo > 0:
        kernel = kernel * ratio ** n_lo
    count = n_hi - n_lo + 1
    values = np.empty(count, dtype=complex)
    errors = np.empty(count, dtype=float)
    norm = rgamma(1.0 - h1)
    for i in range(count):
        fine, err = _quad.split_sums(kernel)
        values[i] = norm * fine
        errors[i] = abs(norm) * err
        if i + 1 < count:
            kernel = kernel * ratio
    return values, errors
