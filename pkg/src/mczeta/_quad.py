"""Double-exponential quadrature rules on (0, 1) and (0, inf).

Both rule builders return frozen node/weight bundles whose weights can be
combined with complex endpoint powers in log space, so integrands with
algebraic endpoint behaviour never see overflow or premature underflow.
Integration returns the weighted sum together with a cheap error proxy:
the difference against the stride-2 subsampled sum plus a rounding floor
scaled by the L1 mass of the weighted terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_HALF_PI = math.pi / 2.0
_LOG_FLOOR = 44.0
_MIN_RANGE = 3.0
_LOG_CLAMP = -690.0
# Correlated node/weight rounding noise, relative to the L1 mass.
_NOISE = 3e-15


def split_sums(terms: np.ndarray) -> tuple[complex, float]:
    """Fine sum plus stride-2 error proxy for one weighted-integrand array."""
    fine = complex(np.sum(terms))
    coarse = 2.0 * complex(np.sum(terms[::2]))
    err = abs(fine - coarse)
    return fine, err + _NOISE * float(np.sum(np.abs(terms))) + 1e-18


@dataclass(frozen=True)
class Rule01:
    """tanh-sinh nodes on (0, 1).

    ``t`` and ``one_minus_t`` are each computed from the side of the
    substitution where they are accurate, so integrands should take powers
    of the matching array rather than recomputing ``1 - t``.
    ``log_base_weights`` already contains one full factor t * (1 - t) of
    the Jacobian, assembled analytically.
    """

    t: np.ndarray
    one_minus_t: np.ndarray
    log_t: np.ndarray
    log_one_minus_t: np.ndarray
    log_base_weights: np.ndarray

    def weights_with_powers(self, alpha0: complex, alpha1: complex) -> np.ndarray:
        """Weights times t**alpha0 * (1-t)**alpha1, assembled in log space."""
        log_w = (
            self.log_base_weights
            + alpha0 * self.log_t
            + alpha1 * self.log_one_minus_t
        )
        return np.exp(log_w)

    def integrate(self, regular_values: np.ndarray, alpha0: complex = 0.0,
                  alpha1: complex = 0.0) -> tuple[complex, float]:
        w = self.weights_with_powers(alpha0, alpha1)
        return split_sums(w * regular_values)


def tanh_sinh_01(n: int, alpha0: float, alpha1: float) -> Rule01:
    """Build a tanh-sinh rule for integrands ~ t**alpha0 near 0 and
    ~ (1-t)**alpha1 near 1 (both exponents above -1)."""
    if alpha0 <= -1.0 or alpha1 <= -1.0:
        raise ValueError("endpoint exponents must exceed -1")
    n = max(int(n), 21)
    g0 = max(_LOG_FLOOR / (1.0 + alpha0), _MIN_RANGE)
    g1 = max(_LOG_FLOOR / (1.0 + alpha1), _MIN_RANGE)
    u_lo = -math.asinh(g0 / _HALF_PI)
    u_hi = math.asinh(g1 / _HALF_PI)
    h = (u_hi - u_lo) / (n - 1)
    u = u_lo + h * np.arange(n)
    g = _HALF_PI * np.sinh(u)
    # t = (1 + tanh g) / 2 and 1 - t = (1 - tanh g) / 2, each taken from
    # the branch that avoids cancellation.
    log_t = -np.log1p(np.exp(-2.0 * g))
    log_omt = -np.log1p(np.exp(2.0 * g))
    t = np.exp(log_t)
    omt = np.exp(log_omt)
    # dt/du = 2 t (1 - t) (pi/2) cosh u
    log_base = (math.log(2.0 * _HALF_PI * h) + np.log(np.cosh(u))
                + log_t + log_omt)
    log_base = np.maximum(log_base, _LOG_CLAMP)
    return Rule01(t=t, one_minus_t=omt, log_t=log_t, log_one_minus_t=log_omt,
                  log_base_weights=log_base)


@dataclass(frozen=True)
class RuleHalfLine:
    """exp-sinh nodes on (0, inf).

    ``log_base_weights`` excludes the Jacobian factor x itself; use
    ``weights_with_power(alpha)`` to obtain weights times x**(alpha+1) via
    log space, or ``.weights`` for regular integrands (alpha = 0).
    """

    x: np.ndarray
    log_x: np.ndarray
    log_base_weights: np.ndarray

    @property
    def weights(self) -> np.ndarray:
        return self.weights_with_power(0.0)

    def weights_with_power(self, alpha: complex) -> np.ndarray:
        """Weights times x**alpha (the full Jacobian included)."""
        log_w = self.log_base_weights + (alpha + 1.0) * self.log_x
        return np.exp(log_w)

    def integrate(self, regular_values: np.ndarray,
                  alpha: complex = 0.0) -> tuple[complex, float]:
        w = self.weights_with_power(alpha)
        return split_sums(w * regular_values)


def exp_sinh_0inf(n: int, beta: float, scale: float,
                  log_upper: float) -> RuleHalfLine:
    """Build an exp-sinh rule on (0, inf).

    Parameters
    ----------
    n : node count (at least 31).
    beta : algebraic endpoint exponent at 0 (integrand ~ x**beta), beta > -1.
    scale : x value mapped to the centre of the grid, > 0.
    log_upper : log of the x value beyond which the integrand is negligible.
    """
    if beta <= -1.0:
        raise ValueError("endpoint exponent must exceed -1")
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    n = max(int(n), 31)
    log_scale = math.log(scale)
    g_minus = max(_LOG_FLOOR / (1.0 + beta) + log_scale, _MIN_RANGE)
    g_plus = max(log_upper - log_scale, _MIN_RANGE)
    u_lo = -math.asinh(g_minus / _HALF_PI)
    u_hi = math.asinh(g_plus / _HALF_PI)
    h = (u_hi - u_lo) / (n - 1)
    u = u_lo + h * np.arange(n)
    g = _HALF_PI * np.sinh(u)
    log_x = log_scale + g
    x = np.exp(log_x)
    # dx/du = x (pi/2) cosh u; the x factor lives in weights_with_power.
    log_base = math.log(_HALF_PI * h) + np.log(np.cosh(u))
    return RuleHalfLine(x=x, log_x=log_x, log_base_weights=log_base)
