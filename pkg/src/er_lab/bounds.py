"""Analytic bounds on the component-size law of G(n, C/n), in log space.

Notation follows the usual presentation of the component-counting argument:

* decay rate      delta  = C(1 - theta) - 1 - ln C
* small-mass      gamma  = 1 / (C (e^delta - 1))
* subcritical     delta1 = ln(1 / (eC)),  defined for eC < 1
* size cutoff     M log n with M = ceil(target / rate)

All probability bounds are returned as natural logs; binomials go through
``math.lgamma`` so nothing underflows at n in the thousands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

THETA = 0.5 + 1e-3
TARGET_EXPONENT = 10.0
NEG_INF = -math.inf


def _xlogy(k: float, x: float) -> float:
    """k*log(x) with 0*log(0) = 0."""
    if k == 0:
        return 0.0
    if x == 0:
        return NEG_INF
    return k * math.log(x)


def _xlog1my(k: float, p: float) -> float:
    """k*log(1-p) with 0*log(0) = 0."""
    if k == 0:
        return 0.0
    if p == 1:
        return NEG_INF
    return k * math.log1p(-p)


def log_binom(n: int, k: int) -> float:
    if not 0 <= k <= n:
        return NEG_INF
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _check_p(p) -> None:
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")


def tree_bound_log(n: int, p: float, r: int) -> float:
    """log of binom(n, r-1) p^(r-1) (1-p)^(r(n-r)) r^(r-2).

    At r = 1 this reduces to (n-1) log(1-p), the isolated-vertex probability.
    p = 0 or 1 are taken as limits; an empty product counts as 1.
    """
    if not 1 <= r <= n:
        raise ValueError(f"r must lie in [1, n={n}], got {r}")
    _check_p(p)
    if r == 1:
        return _xlog1my(n - 1, p)
    return (
        log_binom(n, r - 1)
        + _xlogy(r - 1, p)
        + _xlog1my(r * (n - r), p)
        + (r - 2) * math.log(r)
    )


def tree_bound_exact(n: int, p, r: int) -> Fraction:
    """The same tree-counting bound in exact rational arithmetic."""
    if not 1 <= r <= n:
        raise ValueError(f"r must lie in [1, n={n}], got {r}")
    p = Fraction(p)
    _check_p(p)
    return math.comb(n, r - 1) * p ** (r - 1) * (1 - p) ** (r * (n - r)) * Fraction(r) ** (r - 2)


def simplified_bound_log(n: int, C: float, r: int) -> float:
    """log(1/(C r)) - r (C - 1 - ln C - C r / n), valid for r >= 2."""
    if r < 2:
        raise ValueError(f"simplified bound needs r >= 2, got {r}")
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    return -math.log(C * r) - r * (C - 1.0 - math.log(C) - C * r / n)


def delta(C: float, theta: float = THETA) -> float:
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    return C * (1.0 - theta) - 1.0 - math.log(C)


def gamma(C: float, delta_val: float) -> float:
    if delta_val <= 0:
        raise ValueError(f"gamma needs delta > 0, got {delta_val}")
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    return 1.0 / (C * math.expm1(delta_val))


def delta1(C: float) -> float:
    """Subcritical decay rate -1 - ln C; needs C < 1/e. C = 0 gives +inf."""
    if C < 0:
        raise ValueError(f"C must be non-negative, got {C}")
    if C == 0:
        return math.inf
    if math.e * C >= 1:
        raise ValueError(f"delta1 is only defined for C < 1/e, got C={C}")
    return -1.0 - math.log(C)


def min_M(rate: float, n: int, target_exponent: float = TARGET_EXPONENT) -> int:
    """Smallest positive integer M with exp(-rate M ln n) <= n^-target.

    Equivalent to rate*M >= target, so M = ceil(target / rate); the two loops
    absorb rounding in the division.
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if target_exponent <= 0:
        raise ValueError(f"target exponent must be positive, got {target_exponent}")
    M = max(1, math.ceil(target_exponent / rate))
    while rate * M < target_exponent:
        M += 1
    while M > 1 and rate * (M - 1) >= target_exponent:
        M -= 1
    return M


@dataclass(frozen=True)
class MarkovBound:
    threshold: float
    prob_bound: float


def markov_bound(gamma_val: float, alpha: float, n: int) -> MarkovBound:
    """P(sum X_i > gamma(1+alpha) n) <= 1/(1+alpha), given E X_i <= gamma."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if gamma_val <= 0:
        raise ValueError(f"gamma must be positive, got {gamma_val}")
    if gamma_val * (1.0 + alpha) >= 1.0:
        raise ValueError(f"need gamma(1+alpha) < 1, got {gamma_val * (1.0 + alpha)}")
    return MarkovBound(threshold=gamma_val * (1.0 + alpha) * n, prob_bound=1.0 / (1.0 + alpha))


def theorem2_applies(C: float, theta: float = THETA) -> bool:
    """Probe for the large-C regime: does delta(C) >= C/4 hold?"""
    return C > 0 and delta(C, theta) >= C / 4.0


@dataclass(frozen=True)
class GiantEstimate:
    giant_lower: float
    prob_lower: float
    small_sum_upper: float
    prob_lower_proof: float  # 1 - 2 e^{-C/8}, what the argument actually reaches


def theorem2_constants(C: float, n: int, theta: float = THETA) -> GiantEstimate:
    if not theorem2_applies(C, theta):
        raise ValueError(f"C={C} fails the delta >= C/4 check")
    tail = math.exp(-C / 8.0)
    return GiantEstimate(
        giant_lower=n - n * tail,
        prob_lower=-math.expm1(-C / 100.0),
        small_sum_upper=n * tail,
        prob_lower_proof=1.0 - 2.0 * tail,
    )


def default_alpha(gamma_val: float) -> float:
    """Markov slack halfway to the limit: gamma(1+alpha) = (1+gamma)/2."""
    if not 0 < gamma_val < 1:
        raise ValueError(f"need 0 < gamma < 1, got {gamma_val}")
    return (1.0 / gamma_val - 1.0) / 2.0


@dataclass(frozen=True)
class PhaseParams:
    """Constants of the argument for one C.

    ``delta``/``gamma`` are None where undefined (C = 0, or delta <= 0);
    ``delta1`` is None unless eC < 1. ``M`` may be a float when a caller
    wants a specific cutoff M*ln(n).
    """

    C: float
    theta: float = THETA
    delta: float | None = None
    gamma: float | None = None
    alpha: float | None = None
    delta1: float | None = None
    M: float = 1

    def __post_init__(self):
        if not 0.5 < self.theta < 1.0:
            raise ValueError(f"theta must lie in (1/2, 1), got {self.theta}")
        if self.M <= 0:
            raise ValueError(f"M must be positive, got {self.M}")

    @classmethod
    def build(
        cls,
        C: float,
        theta: float = THETA,
        *,
        alpha: float | None = None,
        M: int | str = "auto",
        n: int = 2,
        target_exponent: float = TARGET_EXPONENT,
    ) -> "PhaseParams":
        """Derive every constant from C.

        With ``M="auto"`` the rate is delta1 when eC < 1, else delta when
        positive; anything in between needs an explicit M.
        """
        d = delta(C, theta) if C > 0 else None
        g = gamma(C, d) if d is not None and d > 0 else None
        d1 = delta1(C) if math.e * C < 1 else None
        if alpha is None and g is not None and g < 1:
            alpha = default_alpha(g)
        if M == "auto":
            if d1 is not None:
                rate = d1
            elif d is not None and d > 0:
                rate = d
            else:
                raise ValueError(f"no positive decay rate at C={C}; pass M explicitly")
            M = min_M(rate, max(n, 2), target_exponent)
        return cls(C=C, theta=theta, delta=d, gamma=g, alpha=alpha, delta1=d1, M=M)

    @property
    def epsilon1(self) -> float | None:
        """alpha / (2(1+alpha)): the positive-probability constant of the supercritical step."""
        if self.alpha is None:
            return None
        return self.alpha / (2.0 * (1.0 + self.alpha))


def quarter_rate_onset(grid: Sequence[float], theta: float = THETA) -> float | None:
    """Smallest grid C from which delta(C) >= C/4 holds at every later grid point."""
    onset = None
    for C in sorted(grid):
        if theorem2_applies(C, theta):
            if onset is None:
                onset = C
        else:
            onset = None
    return onset


def is_increasing(values: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


@dataclass
class BoundRow:
    n: int
    p: float
    r: int
    log_tree_bound: float
    log_simplified_bound: float | None = None
    exact_log_prob: float | None = None
    dominance_ok: bool = True


@dataclass
class BoundReport:
    rows: list[BoundRow] = field(default_factory=list)

    @property
    def violations(self) -> list[BoundRow]:
        return [row for row in self.rows if not row.dominance_ok]

    @property
    def ok(self) -> bool:
        return not self.violations


def log_fraction(q: Fraction) -> float:
    """Natural log of a non-negative rational without going through float."""
    if q < 0:
        raise ValueError("log of a negative number")
    if q == 0:
        return NEG_INF
    return math.log(q.numerator) - math.log(q.denominator)


def bound_table(
    n: int,
    C: float | Fraction,
    r_max: int | None = None,
    exact: Sequence[Fraction] | None = None,
) -> BoundReport:
    """Per-r comparison of the tree bound, its simplified form and (optionally) exact values.

    ``exact[r-1]`` is P(#C_1 = r). With exact values the tree-bound dominance
    is decided in rational arithmetic, so equality cases (r = 1) are exact.
    """
    r_max = n if r_max is None else min(r_max, n)
    p = Fraction(C) / n if isinstance(C, (int, Fraction)) else C / n
    _check_p(p)
    report = BoundReport()
    for r in range(1, r_max + 1):
        lt = tree_bound_log(n, float(p), r)
        ls = simplified_bound_log(n, float(C), r) if r >= 2 and C > 0 else None
        ok = ls is None or ls >= lt
        ex = None
        if exact is not None:
            pr = Fraction(exact[r - 1])
            ex = log_fraction(pr)
            ok = ok and tree_bound_exact(n, Fraction(p), r) >= pr
        report.rows.append(BoundRow(n, float(p), r, lt, ls, ex, ok))
    return report


def chain_violations(
    ns: Sequence[int], Cs: Sequence[float], theta: float = THETA
) -> list[tuple[int, float, int, float, float]]:
    """(n, C, r, simplified, tree) wherever simplified < tree, r in [2, min(n, theta n)]."""
    bad = []
    for n in ns:
        r_hi = min(n, math.floor(Fraction(repr(float(theta))) * n))
        for C in Cs:
            p = C / n
            if p > 1:
                raise ValueError(f"C/n = {p} exceeds 1")
            for r in range(2, r_hi + 1):
                ls = simplified_bound_log(n, C, r)
                lt = tree_bound_log(n, p, r)
                if ls < lt:
                    bad.append((n, C, r, ls, lt))
    return bad
