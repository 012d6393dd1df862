"""G(n, p) sampling.

Vertices are labelled 1..n. Potential edges are enumerated in lexicographic
order of (i, j), i < j, so a linear pair index k in [0, n(n-1)/2) maps to a
unique pair. Two sampling paths walk that index space:

* ``"bernoulli"``: one uniform draw per pair, O(n^2).
* ``"skip"``: geometric gaps between successive open pairs, O(n + m) expected.

``"auto"`` uses the skip path when p < SPARSE_THRESHOLD.

Randomness comes from numpy's Philox (a counter-based bit generator) keyed by
``SeedSequence(seed, spawn_key=(stream,))``. Per-trial substreams are therefore
a pure function of (master seed, trial index). Block sizes below are fixed
constants that depend only on (n, p), which keeps output bit-identical for a
given spec across runs and machines.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from numba import njit

SPARSE_THRESHOLD = 0.01
SEED_LIMIT = 2**64
_BERNOULLI_BLOCK = 1 << 20


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for substream ``stream`` of master ``seed``."""
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if stream < 0:
        raise ValueError(f"stream index must be non-negative, got {stream}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class SampleSpec:
    n: int
    p: float
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= self.seed < SEED_LIMIT:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream < 0:
            raise ValueError(f"stream must be non-negative, got {self.stream}")

    @classmethod
    def from_C(cls, n: int, C: float, seed: int = 0, stream: int = 0) -> "SampleSpec":
        """Spec with p = C/n. Rejects C/n > 1."""
        if n < 1:
            raise ValueError(f"n must be a positive integer, got {n}")
        if C < 0:
            raise ValueError(f"C must be non-negative, got {C}")
        p = C / n
        if p > 1.0:
            raise ValueError(f"C/n = {p} exceeds 1")
        return cls(n=n, p=p, seed=seed, stream=stream)


@dataclass(frozen=True, eq=False)
class GraphSample:
    """Undirected simple graph on vertices 1..n.

    ``edges`` is an (m, 2) int64 array of 1-based pairs (i, j) with i < j,
    sorted lexicographically and free of duplicates. Use :meth:`from_edges`
    to build one from arbitrary input; the plain constructor only accepts the
    canonical form and makes the array read-only.
    """

    n: int
    edges: np.ndarray = field(repr=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        e = np.asarray(self.edges, dtype=np.int64)
        if e.size == 0:
            e = np.empty((0, 2), dtype=np.int64)
        if e.ndim != 2 or e.shape[1] != 2:
            raise ValueError(f"edges must have shape (m, 2), got {e.shape}")
        if len(e):
            i, j = e[:, 0], e[:, 1]
            if i.min() < 1 or j.max() > self.n:
                raise ValueError("edge endpoint outside [1, n]")
            if np.any(i >= j):
                raise ValueError("edges must satisfy i < j")
            keys = (i - 1) * self.n + (j - 1)
            if np.any(np.diff(keys) <= 0):
                raise ValueError("edges must be sorted and unique; use GraphSample.from_edges")
        if e is self.edges:
            e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "GraphSample":
        """Canonicalize an iterable of pairs. Rejects loops and duplicates."""
        e = np.array(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if e.size == 0:
            return cls(n, np.empty((0, 2), dtype=np.int64))
        if e.ndim != 2 or e.shape[1] != 2:
            raise ValueError(f"edges must be pairs, got shape {e.shape}")
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops are not allowed")
        e = np.sort(e, axis=1)
        if e.min() < 1 or e.max() > n:
            raise ValueError("edge endpoint outside [1, n]")
        keys = (e[:, 0] - 1) * n + (e[:, 1] - 1)
        order = np.argsort(keys, kind="stable")
        if np.any(np.diff(keys[order]) == 0):
            raise ValueError("duplicate edge")
        return cls(n, e[order])

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.edges}

    def __eq__(self, other):
        if not isinstance(other, GraphSample):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))


@njit(cache=True, nogil=True)
def _pairs_from_index(k, n):
    """Map linear pair indices to 1-based (i, j); row i starts at i(2n-i-1)/2."""
    m = k.shape[0]
    out = np.empty((m, 2), dtype=np.int64)
    b = 2.0 * n - 1.0
    for t in range(m):
        kt = k[t]
        i = int((b - math.sqrt(b * b - 8.0 * kt)) // 2.0)
        if i < 0:
            i = 0
        # float rounding can put i one row off in either direction
        while i > 0 and i * (2 * n - i - 1) // 2 > kt:
            i -= 1
        while (i + 1) * (2 * n - i - 2) // 2 <= kt:
            i += 1
        out[t, 0] = i + 1
        out[t, 1] = kt - i * (2 * n - i - 1) // 2 + i + 2
    return out


def _skip_indices(total: int, p: float, rng: np.random.Generator) -> np.ndarray:
    if p <= 0.0 or total == 0:
        return np.empty(0, dtype=np.int64)
    mean = total * p
    chunk = int(min(total, mean + 6.0 * math.sqrt(mean) + 1024))
    parts = []
    pos = -1
    while True:
        # tiny p yields gaps near int64 max; clamping keeps cumsum from overflowing
        gaps = np.minimum(rng.geometric(p, size=chunk), total)
        idx = pos + np.cumsum(gaps)
        if idx[-1] >= total:
            parts.append(idx[idx < total])
            break
        parts.append(idx)
        pos = int(idx[-1])
    return np.concatenate(parts)


def _bernoulli_indices(total: int, p: float, rng: np.random.Generator) -> np.ndarray:
    parts = []
    for start in range(0, total, _BERNOULLI_BLOCK):
        size = min(_BERNOULLI_BLOCK, total - start)
        parts.append(start + np.flatnonzero(rng.random(size) < p))
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def sample_gnp(spec: SampleSpec, method: str = "auto") -> GraphSample:
    """Draw one G(n, p) sample.

    ``method`` is ``"auto"``, ``"skip"`` or ``"bernoulli"``; auto switches to
    geometric skipping below SPARSE_THRESHOLD.
    """
    if method not in ("auto", "skip", "bernoulli"):
        raise ValueError(f"unknown sampling method {method!r}")
    n, p = spec.n, spec.p
    total = pair_count(n)
    rng = make_rng(spec.seed, spec.stream)
    if p == 0.0 or total == 0:
        k = np.empty(0, dtype=np.int64)
    elif p == 1.0:
        k = np.arange(total, dtype=np.int64)
    elif method == "skip" or (method == "auto" and p < SPARSE_THRESHOLD):
        k = _skip_indices(total, p, rng)
    else:
        k = _bernoulli_indices(total, p, rng)
    return GraphSample(n, _pairs_from_index(k.astype(np.int64), n))


def write_edge_list(g: GraphSample, dest) -> None:
    """Write ``"n m"`` then one ``"i j"`` line per edge. ``dest`` is a path or text stream."""
    buf = io.StringIO()
    buf.write(f"{g.n} {g.m}\n")
    if g.m:
        np.savetxt(buf, g.edges, fmt="%d", delimiter=" ")
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="ascii", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        dest.write(buf.getvalue())


def read_edge_list(src) -> GraphSample:
    if isinstance(src, (str, os.PathLike)):
        with open(src, encoding="ascii") as fh:
            text = fh.read()
    else:
        text = src.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty edge-list file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"bad header line {lines[0]!r}; expected 'n m'")
    n, m = int(header[0]), int(header[1])
    if len(lines) - 1 != m:
        raise ValueError(f"header declares {m} edges, found {len(lines) - 1}")
    edges = np.empty((m, 2), dtype=np.int64)
    for t, ln in enumerate(lines[1:]):
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        i, j = int(parts[0]), int(parts[1])
        if not 1 <= i < j <= n:
            raise ValueError(f"edge line {ln!r} violates 1 <= i < j <= n")
        edges[t] = (i, j)
    return GraphSample.from_edges(n, edges)
