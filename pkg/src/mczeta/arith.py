"""Integer and divisor-sum utilities for the nested-sum evaluators."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate
from typing import Iterable, Iterator

__all__ = [
    "IndexTuple",
    "divisor_sigma",
    "divisor_sigma_ez",
    "divisor_sigma_gcd",
    "divisor_sigma_prefix",
    "divisors",
]


@lru_cache(maxsize=65536)
def divisors(n: int) -> tuple[int, ...]:
    """Sorted tuple of the positive divisors of n."""
    if n != int(n) or n <= 0:
        raise ValueError("divisors: n must be a positive integer")
    n = int(n)
    small: list[int] = []
    large: list[int] = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def _as_positive_ints(values: Iterable[int], who: str) -> tuple[int, ...]:
    out = []
    for v in values:
        if v != int(v) or int(v) <= 0:
            raise ValueError(f"{who}: indices must be positive integers")
        out.append(int(v))
    if not out:
        raise ValueError(f"{who}: at least one index required")
    return tuple(out)


@dataclass(frozen=True)
class IndexTuple:
    """Tuple of positive integer indices (k_1, ..., k_r)."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values",
                           _as_positive_ints(self.values, "IndexTuple"))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def gcd(self) -> int:
        return math.gcd(*self.values)

    def prefix_sums(self) -> tuple[int, ...]:
        return tuple(accumulate(self.values))


def divisor_sigma(order: complex, n: int) -> complex:
    """Sum of d**order over the positive divisors d of n."""
    order = complex(order)
    if order == 0:
        return complex(len(divisors(n)))
    return complex(sum(d ** order for d in divisors(n)))


def divisor_sigma_gcd(order: complex, ks: Iterable[int]) -> complex:
    """divisor_sigma(order, gcd(k_1, ..., k_r))."""
    values = _as_positive_ints(ks, "divisor_sigma_gcd")
    return divisor_sigma(order, math.gcd(*values))


def divisor_sigma_ez(orders: Iterable[complex], ks: Iterable[int]) -> complex:
    """Componentwise product of divisor_sigma(orders[j], ks[j])."""
    orders = tuple(complex(a) for a in orders)
    values = _as_positive_ints(ks, "divisor_sigma_ez")
    if len(orders) != len(values):
        raise ValueError("divisor_sigma_ez: orders and indices must have "
                         "the same length")
    out = 1.0 + 0.0j
    for a, k in zip(orders, values):
        out *= divisor_sigma(a, k)
    return out


def divisor_sigma_prefix(orders: Iterable[complex],
                         ells: Iterable[int]) -> complex:
    """Weight sum over common divisors against prefix sums.

    With L_j = ell_1 + ... + ell_j, returns
    sum over d | gcd(ell) of prod_j (L_j / d) ** orders[j].
    """
    orders = tuple(complex(a) for a in orders)
    values = _as_positive_ints(ells, "divisor_sigma_prefix")
    if len(orders) != len(values):
        raise ValueError("divisor_sigma_prefix: orders and indices must "
                         "have the same length")
    prefixes = tuple(accumulate(values))
    out = 0.0 + 0.0j
    for d in divisors(math.gcd(*values)):
        term = 1.0 + 0.0j
        for a, big_l in zip(orders, prefixes):
            term *= (big_l // d) ** a
        out += term
    return out
