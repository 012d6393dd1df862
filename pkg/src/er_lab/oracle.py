"""Exact law of #C_1, the size of the component containing vertex 1, for small n.

Two independent routes:

* :func:`exact_component_distribution` uses the connectivity recursion
  P(#C_1 = r) = binom(n-1, r-1) * Pconn(r) * (1-p)^(r(n-r)).
* :func:`brute_force_distribution` enumerates every labelled graph on n <= 6
  vertices and runs the component code on each.

A rational p (Fraction, int, or a decimal string such as "0.25") runs in
exact rational arithmetic. A float p runs in mpmath at increasing working
precision until two successive precisions agree to FLOAT_RTOL; the
recursion's alternating sum cancels catastrophically in plain doubles for
small p and large k.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath
import numpy as np

from .components import component_size_of
from .sampler import GraphSample

MAX_EXACT_N = 64
MAX_BRUTE_N = 6
FLOAT_RTOL = 1e-15
_START_BITS = 128
_MAX_BITS = 1 << 16


def _as_fraction(p) -> tuple[Fraction, bool]:
    """(exact rational value of p, whether p was given as a rational)."""
    if isinstance(p, str):
        q, rational = Fraction(p), True
    elif isinstance(p, Rational):
        q, rational = Fraction(p), True
    else:
        q, rational = Fraction(float(p)), False
    if not 0 <= q <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return q, rational


def connectivity_table(kmax: int, p, one=Fraction(1)) -> list:
    """[Pconn(1), ..., Pconn(kmax)] for G(k, p).

    Works over any field-like number type; ``one`` fixes which (Fraction or
    mpmath.mpf).
    """
    q = one - p
    conn = [one * 0, one]
    for k in range(2, kmax + 1):
        disconnected = sum(
            math.comb(k - 1, j - 1) * conn[j] * q ** (j * (k - j)) for j in range(1, k)
        )
        conn.append(one - disconnected)
    return conn[1:]


def _scaled_connectivity(kmax: int, a: int, b: int) -> list[int]:
    """Integers c_k = b^(k(k-1)/2) * Pconn(k) for p = a/b, k = 1..kmax.

    Pconn(k) is a polynomial in p and 1-p of total degree k(k-1)/2, so the
    scaled recursion stays in integers and skips Fraction's gcd work.
    """
    pairs = lambda k: k * (k - 1) // 2  # noqa: E731
    c = [0, 1]
    for k in range(2, kmax + 1):
        disconnected = sum(
            math.comb(k - 1, j - 1) * c[j] * b ** pairs(k - j) * (b - a) ** (j * (k - j))
            for j in range(1, k)
        )
        c.append(b ** pairs(k) - disconnected)
    return c[1:]


def _exact_terms(n: int, q: Fraction) -> list[Fraction]:
    a, b = q.numerator, q.denominator
    c = _scaled_connectivity(n, a, b)
    return [
        Fraction(
            math.comb(n - 1, r - 1) * c[r - 1] * (b - a) ** (r * (n - r)),
            b ** (r * (r - 1) // 2 + r * (n - r)),
        )
        for r in range(1, n + 1)
    ]


def _distribution_terms(n: int, p, one) -> list:
    conn = connectivity_table(n, p, one)
    q = one - p
    return [math.comb(n - 1, r - 1) * conn[r - 1] * q ** (r * (n - r)) for r in range(1, n + 1)]


def _stable_floats(compute) -> list[float]:
    """Evaluate ``compute(one)`` in mpmath, doubling precision until stable."""
    bits = _START_BITS
    with mpmath.workprec(bits):
        prev = compute(mpmath.mpf(1))
    while bits < _MAX_BITS:
        bits *= 2
        with mpmath.workprec(bits):
            cur = compute(mpmath.mpf(1))
            stable = all(abs(a - b) <= FLOAT_RTOL * abs(b) for a, b in zip(prev, cur))
        if stable:
            return [float(x) for x in cur]
        prev = cur
    raise ArithmeticError("precision ladder exhausted without convergence")


def connectivity_probability(k: int, p):
    """Probability that G(k, p) is connected; Fraction in, Fraction out."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    q, rational = _as_fraction(p)
    if rational:
        return Fraction(_scaled_connectivity(k, q.numerator, q.denominator)[-1], q.denominator ** (k * (k - 1) // 2))
    return _stable_floats(lambda one: connectivity_table(k, one * float(p), one)[-1:])[0]


@dataclass(frozen=True)
class ExactDistribution:
    """P(#C_1 = r) for r = 1..n. ``probs`` are Fractions when p was rational."""

    n: int
    p: Fraction | float
    probs: tuple

    @property
    def exact(self) -> bool:
        return isinstance(self.probs[0], Fraction)

    def floats(self) -> np.ndarray:
        return np.array([float(x) for x in self.probs])

    def prob(self, r: int):
        return self.probs[r - 1]


def _check_exact_range(n: int) -> None:
    if not 2 <= n <= MAX_EXACT_N:
        raise ValueError(f"exact distribution supports 2 <= n <= {MAX_EXACT_N}, got {n}")


def exact_component_distribution(n: int, p) -> ExactDistribution:
    _check_exact_range(n)
    q, rational = _as_fraction(p)
    if rational:
        return ExactDistribution(n, q, tuple(_exact_terms(n, q)))
    pf = float(p)
    return ExactDistribution(n, pf, tuple(_stable_floats(lambda one: _distribution_terms(n, one * pf, one))))


@lru_cache(maxsize=None)
def _enumeration_histogram(n: int, vertex: int) -> tuple[tuple[tuple[int, int], int], ...]:
    """Counts of (#C_vertex, #open edges) over all 2^(n(n-1)/2) graphs."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    hist: Counter = Counter()
    for mask in range(1 << len(pairs)):
        open_edges = [pairs[t] for t in range(len(pairs)) if mask >> t & 1]
        g = GraphSample(n, np.array(open_edges, dtype=np.int64).reshape(-1, 2))
        hist[component_size_of(g, vertex), len(open_edges)] += 1
    return tuple(sorted(hist.items()))


def brute_force_distribution(n: int, p, vertex: int = 1) -> ExactDistribution:
    """Exhaustive law of the component size of ``vertex``.

    Graphs with the same (component size, open-edge count) carry the same
    weight p^k (1-p)^(E-k), so the enumeration is tallied once per
    (n, vertex) and reweighted per p.
    """
    if not 1 <= n <= MAX_BRUTE_N:
        raise ValueError(f"brute force supports 1 <= n <= {MAX_BRUTE_N}, got {n}")
    if not 1 <= vertex <= n:
        raise ValueError(f"vertex {vertex} outside [1, {n}]")
    q, rational = _as_fraction(p)
    total = n * (n - 1) // 2
    probs = [Fraction(0)] * n
    for (r, k), count in _enumeration_histogram(n, vertex):
        probs[r - 1] += count * q**k * (1 - q) ** (total - k)
    if rational:
        return ExactDistribution(n, q, tuple(probs))
    return ExactDistribution(n, float(p), tuple(float(x) for x in probs))
