import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from er_lab.sampler import (
    SPARSE_THRESHOLD,
    GraphSample,
    SampleSpec,
    pair_count,
    read_edge_list,
    sample_gnp,
    write_edge_list,
)


def test_p_zero_gives_empty_graph():
    g = sample_gnp(SampleSpec(5, 0.0, seed=1))
    assert g.m == 0
    assert g.edge_set() == set()


def test_p_one_gives_complete_graph():
    g = sample_gnp(SampleSpec(5, 1.0, seed=1))
    assert g.m == 10
    assert g.edge_set() == {(i, j) for i in range(1, 6) for j in range(i + 1, 6)}


def test_sparse_edge_count_band():
    # binomial(n(n-1)/2, p): mean 9999, sd ~99.985, band = mean +- 6 sd
    n, p = 10_000, 2 / 10_000
    mean = pair_count(n) * p
    sd = math.sqrt(pair_count(n) * p * (1 - p))
    assert mean == pytest.approx(9999.0)
    assert sd == pytest.approx(99.985, abs=1e-3)
    for seed in (0, 1, 2**63 + 5):
        g = sample_gnp(SampleSpec(n, p, seed=seed))
        assert mean - 6 * sd <= g.m <= mean + 6 * sd


@pytest.mark.parametrize("n", [0, -3])
def test_rejects_bad_n(n):
    with pytest.raises(ValueError):
        SampleSpec(n, 0.5)


@pytest.mark.parametrize("p", [-0.01, 1.5, float("nan")])
def test_rejects_bad_p(p):
    with pytest.raises(ValueError):
        SampleSpec(5, p)


def test_from_C_rejects_p_above_one():
    with pytest.raises(ValueError):
        SampleSpec.from_C(10, 11.0)
    assert SampleSpec.from_C(10, 2.5).p == 0.25


def test_rejects_out_of_range_seed():
    with pytest.raises(ValueError):
        SampleSpec(5, 0.5, seed=2**64)
    with pytest.raises(ValueError):
        SampleSpec(5, 0.5, seed=-1)


@pytest.mark.parametrize("method", ["auto", "skip", "bernoulli"])
@pytest.mark.parametrize("n,p", [(1, 0.5), (2, 0.5), (50, 0.002), (300, 0.05)])
def test_determinism(method, n, p):
    spec = SampleSpec(n, p, seed=12345, stream=7)
    a, b = sample_gnp(spec, method), sample_gnp(spec, method)
    assert a == b
    assert a.edges.tobytes() == b.edges.tobytes()


def test_streams_differ():
    a = sample_gnp(SampleSpec(200, 0.05, seed=1, stream=0))
    b = sample_gnp(SampleSpec(200, 0.05, seed=1, stream=1))
    assert a != b


def test_auto_matches_explicit_path():
    lo = SampleSpec(400, SPARSE_THRESHOLD / 2, seed=3)
    hi = SampleSpec(100, SPARSE_THRESHOLD * 3, seed=3)
    assert sample_gnp(lo) == sample_gnp(lo, "skip")
    assert sample_gnp(hi) == sample_gnp(hi, "bernoulli")


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 120),
    p=st.floats(0, 1),
    seed=st.integers(0, 2**64 - 1),
    method=st.sampled_from(["auto", "skip", "bernoulli"]),
)
def test_graph_invariants(n, p, seed, method):
    g = sample_gnp(SampleSpec(n, p, seed=seed), method)
    e = g.edges
    assert g.m <= n * (n - 1) // 2
    if g.m:
        assert e.min() >= 1 and e.max() <= n
        assert np.all(e[:, 0] < e[:, 1])
    assert len(g.edge_set()) == g.m


def test_linear_index_decoding_covers_all_pairs():
    for n in (2, 3, 7, 64, 1001):
        g = sample_gnp(SampleSpec(n, 1.0))
        assert g.m == pair_count(n)
        assert g.edge_set() == {(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)}


def test_per_edge_frequency():
    # each of the 15 pairs should open with frequency p, within 5 sd
    n, p, T = 6, 0.3, 100_000
    counts = np.zeros((n + 1, n + 1), dtype=np.int64)
    for t in range(T):
        e = sample_gnp(SampleSpec(n, p, seed=2024, stream=t)).edges
        counts[e[:, 0], e[:, 1]] += 1
    sd = math.sqrt(p * (1 - p) / T)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            assert abs(counts[i, j] / T - p) <= 5 * sd, (i, j, counts[i, j] / T)


def _edge_count_hist(n, p, method, T, seed):
    return np.array([sample_gnp(SampleSpec(n, p, seed=seed, stream=t), method).m for t in range(T)])


def test_skip_and_bernoulli_paths_agree_in_distribution():
    n, p, T = 50, 0.008, 10_000
    skip = _edge_count_hist(n, p, "skip", T, seed=11)
    bern = _edge_count_hist(n, p, "bernoulli", T, seed=12)
    top = int(max(skip.max(), bern.max()))
    edges = np.arange(top + 2) - 0.5
    table = np.vstack([np.histogram(skip, edges)[0], np.histogram(bern, edges)[0]])
    # merge sparse tail bins so expected counts stay >= 5
    keep = table.sum(axis=0) >= 10
    merged = np.column_stack([table[:, keep], table[:, ~keep].sum(axis=1)])
    merged = merged[:, merged.sum(axis=0) > 0]
    _, pvalue, _, _ = stats.chi2_contingency(merged)
    assert pvalue > 1e-3
    # both paths also match the binomial mean
    N = pair_count(n)
    for sample in (skip, bern):
        assert abs(sample.mean() - N * p) <= 5 * math.sqrt(N * p * (1 - p) / T)


def test_graphsample_rejects_bad_edges():
    with pytest.raises(ValueError):
        GraphSample(3, np.array([[2, 1]]))
    with pytest.raises(ValueError):
        GraphSample(3, np.array([[1, 4]]))
    with pytest.raises(ValueError):
        GraphSample(3, np.array([[0, 1]]))
    with pytest.raises(ValueError):
        GraphSample(3, np.array([[1, 2], [1, 2]]))
    with pytest.raises(ValueError):
        GraphSample.from_edges(3, [(1, 2), (2, 1)])
    with pytest.raises(ValueError):
        GraphSample.from_edges(3, [(2, 2)])


def test_from_edges_canonicalizes():
    g = GraphSample.from_edges(5, [(5, 4), (3, 2), (1, 2)])
    assert g.edges.tolist() == [[1, 2], [2, 3], [4, 5]]


def test_graphsample_is_immutable():
    g = GraphSample.from_edges(3, [(1, 2)])
    with pytest.raises(ValueError):
        g.edges[0, 0] = 3


def test_edge_list_round_trip(tmp_path):
    g = sample_gnp(SampleSpec(40, 0.1, seed=9))
    path = tmp_path / "g.txt"
    write_edge_list(g, path)
    lines = path.read_text().splitlines()
    assert lines[0] == f"40 {g.m}"
    assert all(1 <= int(a) < int(b) <= 40 for a, b in (ln.split() for ln in lines[1:]))
    assert read_edge_list(path) == g


def test_edge_list_empty_graph():
    buf = io.StringIO()
    write_edge_list(GraphSample.from_edges(5, []), buf)
    assert buf.getvalue() == "5 0\n"
    assert read_edge_list(io.StringIO(buf.getvalue())).m == 0


@pytest.mark.parametrize(
    "text",
    ["", "3\n", "3 2\n1 2\n", "3 1\n2 1\n", "3 1\n1 5\n", "3 1\n1 2 3\n"],
)
def test_edge_list_rejects_malformed(text):
    with pytest.raises(ValueError):
        read_edge_list(io.StringIO(text))
