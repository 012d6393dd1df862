"""Monte Carlo experiments on G(n, C/n) and the bound-dominance sweep.

Regimes and what they compare against:

``supercritical-T1``  giant threshold n/2, M from delta.
    E(M) >= eps1 = alpha/(2(1+alpha)),  A_theta >= alpha/(1+alpha),
    B_theta <= n^-9,  P(small_sum > gamma(1+alpha)n) <= 1/(1+alpha).
``subcritical-T1``    M from delta1.
    F(M) >= 1 - n^-2,  H_theta <= n^-8.
``theorem2``          giant threshold n - n e^{-C/8}, M from delta,
    Markov step with gamma -> e^{-C/4}, alpha = e^{C/8} - 1.
    E(M) >= 1 - e^{-C/100} (stated) and >= 1 - 2e^{-C/8} (reached by the
    argument), A_theta >= 1 - e^{-C/8}, B_theta <= n^-9,
    P(small_sum > n e^{-C/8}) <= e^{-C/8}.

Pass/fail for a bound b over T trials with Wilson interval [lo, hi]:
lower bounds pass when lo >= b, upper bounds when hi <= b. When b is finer
than T trials can resolve (even a perfect record would not reach it), the
comparison instead passes only on a perfect record: all T trials satisfy a
lower-bounded event, or none shows an upper-bounded one.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Sequence

from .bounds import (
    THETA,
    TARGET_EXPONENT,
    BoundReport,
    BoundRow,
    PhaseParams,
    log_fraction,
    markov_bound,
    theorem2_applies,
    theorem2_constants,
    tree_bound_exact,
    tree_bound_log,
)
from .components import EventFlags, component_profile, evaluate_events
from .oracle import exact_component_distribution
from .sampler import SEED_LIMIT, SampleSpec, sample_gnp

REGIMES = ("supercritical-T1", "subcritical-T1", "theorem2")
EVENTS = ("E_M", "F_M", "A_theta", "B_theta", "H_theta", "markov")
WILSON_Z = NormalDist().inv_cdf(0.975)
THREADS_ENV = "ER_LAB_THREADS"


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError(f"bad counts {successes}/{trials}")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo, hi = max(0.0, centre - half), min(1.0, centre + half)
    # exact endpoints at the boundary; avoids 1 - 1e-17 style noise
    if successes == 0:
        lo = 0.0
    if successes == trials:
        hi = 1.0
    return lo, hi


def compare_to_bound(successes: int, trials: int, bound: float, direction: str) -> bool:
    lo, hi = wilson_interval(successes, trials)
    if direction == "lower":
        if wilson_interval(trials, trials)[0] < bound:
            return successes == trials
        return lo >= bound
    if direction == "upper":
        if wilson_interval(0, trials)[1] > bound:
            return successes == 0
        return hi <= bound
    raise ValueError(f"direction must be 'lower' or 'upper', got {direction!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    C: float
    trials: int
    master_seed: int
    regime: str
    theta: float = THETA
    M_policy: int | str = "auto"
    target_exponent: float = TARGET_EXPONENT

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if self.C < 0:
            raise ValueError(f"C must be non-negative, got {self.C}")
        if self.C > self.n:
            raise ValueError(f"C/n = {self.C / self.n} exceeds 1")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials}")
        if not 0 <= self.master_seed < SEED_LIMIT:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}, got {self.regime!r}")
        if not 0.5 < self.theta < 1:
            raise ValueError(f"theta must lie in (1/2, 1), got {self.theta}")
        if self.M_policy != "auto" and (
            isinstance(self.M_policy, bool) or not isinstance(self.M_policy, int) or self.M_policy < 1
        ):
            raise ValueError(f"M_policy must be 'auto' or a positive integer, got {self.M_policy!r}")
        if self.target_exponent <= 0:
            raise ValueError(f"target_exponent must be positive, got {self.target_exponent}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Plan:
    """Everything a trial needs that depends only on the config."""

    params: PhaseParams
    giant_threshold: float
    markov_gamma: float | None
    markov_threshold: float | None
    bounds: dict  # event name -> (bound, direction)


def make_plan(config: ExperimentConfig) -> Plan:
    n, C, regime = config.n, config.C, config.regime
    M = config.M_policy
    bounds: dict[str, tuple[float, str]] = {}
    markov_gamma = markov_threshold = None

    if regime == "subcritical-T1":
        if math.e * C >= 1:
            raise ValueError(f"subcritical regime needs C < 1/e, got {C}")
        params = PhaseParams.build(C, config.theta, M=M, n=n, target_exponent=config.target_exponent)
        giant_threshold = n / 2
        bounds["F_M"] = (1.0 - n**-2.0, "lower")
        bounds["H_theta"] = (n**-8.0, "upper")
    elif regime == "supercritical-T1":
        params = PhaseParams.build(C, config.theta, M=M, n=n, target_exponent=config.target_exponent)
        if params.gamma is None or params.gamma >= 1:
            raise ValueError(f"supercritical regime needs gamma < 1, got C={C}")
        giant_threshold = n / 2
        mb = markov_bound(params.gamma, params.alpha, n)
        markov_gamma, markov_threshold = params.gamma, mb.threshold
        bounds["E_M"] = (params.epsilon1, "lower")
        bounds["A_theta"] = (params.alpha / (1.0 + params.alpha), "lower")
        bounds["B_theta"] = (n**-9.0, "upper")
        bounds["markov"] = (mb.prob_bound, "upper")
    else:
        if not theorem2_applies(C, config.theta):
            raise ValueError(f"theorem2 regime needs delta(C) >= C/4, fails at C={C}")
        alpha = math.expm1(C / 8.0)
        params = PhaseParams.build(
            C, config.theta, alpha=alpha, M=M, n=n, target_exponent=config.target_exponent
        )
        est = theorem2_constants(C, n, config.theta)
        giant_threshold = est.giant_lower
        markov_gamma = math.exp(-C / 4.0)
        mb = markov_bound(markov_gamma, alpha, n)
        markov_threshold = mb.threshold
        tail = math.exp(-C / 8.0)
        bounds["E_M"] = (est.prob_lower, "lower")
        bounds["E_M_proof"] = (est.prob_lower_proof, "lower")
        bounds["A_theta"] = (1.0 - tail, "lower")
        bounds["B_theta"] = (n**-9.0, "upper")
        bounds["markov"] = (mb.prob_bound, "upper")
    return Plan(params, giant_threshold, markov_gamma, markov_threshold, bounds)


@dataclass(frozen=True)
class TrialOutcome:
    trial_index: int
    giant_size: int
    second_size: int
    small_sum: int
    flags: EventFlags
    markov_exceeded: bool | None = None


def _run_trial(config: ExperimentConfig, plan: Plan, trial_index: int) -> TrialOutcome:
    spec = SampleSpec.from_C(config.n, config.C, seed=config.master_seed, stream=trial_index)
    profile = component_profile(sample_gnp(spec))
    flags = evaluate_events(profile, plan.params, plan.giant_threshold)
    exceeded = None if plan.markov_threshold is None else flags.small_sum > plan.markov_threshold
    return TrialOutcome(trial_index, profile.largest, profile.second, flags.small_sum, flags, exceeded)


def run_trial(config: ExperimentConfig, trial_index: int) -> TrialOutcome:
    """One trial on substream ``trial_index`` of the master seed."""
    if trial_index < 0:
        raise ValueError(f"trial_index must be non-negative, got {trial_index}")
    return _run_trial(config, make_plan(config), trial_index)


@dataclass(frozen=True)
class EventRow:
    event: str
    successes: int
    trials: int
    paper_bound: float | None
    bound_direction: str | None
    passed: bool | None

    @property
    def empirical_freq(self) -> float:
        return self.successes / self.trials

    @property
    def wilson(self) -> tuple[float, float]:
        return wilson_interval(self.successes, self.trials)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    plan: Plan
    rows: list[EventRow]
    outcomes: list[TrialOutcome]
    mean_small_fraction: float
    max_small_fraction: float
    runtime_s: float = field(default=0.0, compare=False)

    def row(self, event: str) -> EventRow:
        for row in self.rows:
            if row.event == event:
                return row
        raise KeyError(event)

    @property
    def failed(self) -> bool:
        return any(row.passed is False for row in self.rows)

    def report_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["event", "empirical_freq", "wilson_lo", "wilson_hi", "paper_bound", "bound_direction", "pass"])
        for row in self.rows:
            lo, hi = row.wilson
            w.writerow([
                row.event,
                repr(row.empirical_freq),
                repr(lo),
                repr(hi),
                "" if row.paper_bound is None else repr(row.paper_bound),
                row.bound_direction or "",
                "" if row.passed is None else ("pass" if row.passed else "fail"),
            ])
        return buf.getvalue()

    def trials_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial_index", "giant_size", "second_size", "small_sum"])
        for o in self.outcomes:
            w.writerow([o.trial_index, o.giant_size, o.second_size, o.small_sum])
        return buf.getvalue()


def _event_hit(o: TrialOutcome, event: str) -> bool:
    if event == "markov":
        return bool(o.markov_exceeded)
    if event == "E_M_proof":
        return o.flags.E_M
    return getattr(o.flags, event)


def aggregate(config: ExperimentConfig, plan: Plan, outcomes: Sequence[TrialOutcome], runtime_s: float = 0.0) -> ExperimentReport:
    """Fold trial outcomes into a report. Invariant under reordering of ``outcomes``."""
    outcomes = sorted(outcomes, key=lambda o: o.trial_index)
    if [o.trial_index for o in outcomes] != list(range(config.trials)):
        raise ValueError("outcomes must cover trial indices 0..trials-1 exactly once")
    T = len(outcomes)
    names = [e for e in EVENTS if e != "markov" or plan.markov_threshold is not None]
    if "E_M_proof" in plan.bounds:
        names.insert(names.index("E_M") + 1, "E_M_proof")
    rows = []
    for event in names:
        hits = sum(_event_hit(o, event) for o in outcomes)
        if event in plan.bounds:
            bound, direction = plan.bounds[event]
            rows.append(EventRow(event, hits, T, bound, direction, compare_to_bound(hits, T, bound, direction)))
        else:
            rows.append(EventRow(event, hits, T, None, None, None))
    fractions = [o.small_sum / config.n for o in outcomes]
    return ExperimentReport(
        config, plan, rows, list(outcomes), math.fsum(fractions) / T, max(fractions), runtime_s
    )


def worker_count() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> ExperimentReport:
    """Run every trial and aggregate. Any trial error aborts the whole run."""
    plan = make_plan(config)
    workers = worker_count() if workers is None else workers
    start = time.perf_counter()
    if workers <= 1:
        outcomes = [_run_trial(config, plan, t) for t in range(config.trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda t: _run_trial(config, plan, t), range(config.trials)))
    return aggregate(config, plan, outcomes, time.perf_counter() - start)


def decimal_grid(start: str, stop: str, step: str) -> list[Fraction]:
    """Inclusive grid of exact rationals, e.g. ("0.05", "0.95", "0.05")."""
    a, b, h = Fraction(start), Fraction(stop), Fraction(step)
    if h <= 0:
        raise ValueError("step must be positive")
    out = []
    x = a
    while x <= b:
        out.append(x)
        x += h
    return out


def verify_bound_dominance(n_max: int, p_grid: Sequence) -> BoundReport:
    """Check tree bound >= exact P(#C_1 = r) for 2 <= n <= n_max, every p, every r.

    Dominance is decided in rational arithmetic (p given as a float is taken
    at its exact binary value). Each row also carries the log-space bound and
    the log of the exact probability.
    """
    if not 2 <= n_max <= 12:
        raise ValueError(f"n_max must lie in [2, 12], got {n_max}")
    report = BoundReport()
    for n in range(2, n_max + 1):
        for p in p_grid:
            q = Fraction(p)
            exact = exact_component_distribution(n, q).probs
            for r in range(1, n + 1):
                bound = tree_bound_exact(n, q, r)
                report.rows.append(
                    BoundRow(
                        n=n,
                        p=float(q),
                        r=r,
                        log_tree_bound=tree_bound_log(n, float(q), r),
                        exact_log_prob=log_fraction(exact[r - 1]),
                        dominance_ok=bound >= exact[r - 1],
                    )
                )
    return report
