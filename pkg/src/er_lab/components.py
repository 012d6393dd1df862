"""Connected-component size profiles and the threshold events built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from .sampler import GraphSample


@njit(cache=True, nogil=True)
def _find(parent, x):
    # path halving
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True, nogil=True)
def _union_find_roots(n, edges):
    """Root of every vertex (0-based) after union by rank with path halving."""
    parent = np.arange(n)
    rank = np.zeros(n, dtype=np.int8)
    for e in range(edges.shape[0]):
        a = _find(parent, edges[e, 0] - 1)
        b = _find(parent, edges[e, 1] - 1)
        if a == b:
            continue
        if rank[a] < rank[b]:
            a, b = b, a
        parent[b] = a
        if rank[a] == rank[b]:
            rank[a] += 1
    for x in range(n):
        parent[x] = _find(parent, x)
    return parent


def component_roots(g: GraphSample) -> np.ndarray:
    return _union_find_roots(g.n, g.edges)


def component_size_of(g: GraphSample, vertex: int) -> int:
    """Size of the component containing ``vertex`` (1-based)."""
    if not 1 <= vertex <= g.n:
        raise ValueError(f"vertex {vertex} outside [1, {g.n}]")
    roots = component_roots(g)
    return int(np.count_nonzero(roots == roots[vertex - 1]))


@dataclass(frozen=True)
class ComponentProfile:
    sizes: tuple[int, ...]
    n: int

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if any(s < 1 for s in sizes):
            raise ValueError("component sizes must be >= 1")
        if any(a < b for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sizes must be sorted non-increasing")
        if sum(sizes) != self.n:
            raise ValueError(f"sizes sum to {sum(sizes)}, expected n={self.n}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def largest(self) -> int:
        return self.sizes[0] if self.sizes else 0

    @property
    def second(self) -> int:
        return self.sizes[1] if len(self.sizes) > 1 else 0


def component_profile(g: GraphSample) -> ComponentProfile:
    counts = np.bincount(component_roots(g), minlength=g.n)
    sizes = np.sort(counts[counts > 0])[::-1]
    return ComponentProfile(tuple(sizes.tolist()), g.n)


@dataclass(frozen=True)
class EventFlags:
    A_theta: bool
    B_theta: bool
    H_theta: bool
    E_M: bool
    F_M: bool
    giant_size: int
    small_sum: int


def evaluate_events(profile: ComponentProfile, params, giant_threshold: float) -> EventFlags:
    """Indicators for the threshold events on one profile.

    ``params`` needs ``theta`` and ``M`` (a PhaseParams works). The size
    cutoff is M*ln(n), unrounded, compared strictly for "less than". A
    component counts towards A_theta when its size is at least ceil(theta*n).
    """
    theta, M = params.theta, params.M
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    n = profile.n
    cutoff = M * math.log(n) if n > 1 else 0.0
    # float theta*n can overshoot an integer; read theta as its decimal literal
    theta_n = Fraction(repr(float(theta))) * n
    a_min, small_max = math.ceil(theta_n), math.floor(theta_n)
    largest, second = profile.largest, profile.second
    return EventFlags(
        A_theta=largest >= a_min,
        B_theta=any(cutoff <= s <= small_max for s in profile.sizes),
        H_theta=largest >= cutoff,
        E_M=largest >= giant_threshold and second < cutoff,
        F_M=largest < cutoff,
        giant_size=largest,
        small_sum=sum(s for s in profile.sizes if s <= small_max),
    )
