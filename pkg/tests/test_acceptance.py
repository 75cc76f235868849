"""Acceptance suite: one test per shipped criterion, at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.  Everything asserted here is exact except the wall-clock limits
of criteria 1, 5 and 8.
"""

import time
from fractions import Fraction

import pytest

from metricblocks import (
    Classification,
    are_compatible,
    blocks_and_cut_vertices,
    bridge_split_correspondence,
    brute_force_block_splits,
    classify_cutstar,
    compute_cut_points,
    decompose,
    decomposition_path_independent,
    generate_block_instance,
    generate_random_metric,
    is_in_tight_span,
    kuratowski_map,
    permutation_harness,
    reference_cut_points,
    split_map,
)
from metricblocks.cli import run_bench

from conftest import FIG1_INTERIOR, FIG1_SPLITS

INSTANCES_PER_GENERATOR = 100  # 200 total per n, half block-shaped, half random


@pytest.fixture(scope="module")
def corpus():
    out = []
    for n in range(2, 9):
        for seed in range(INSTANCES_PER_GENERATOR):
            out.append(generate_block_instance(n, seed))
            out.append(generate_random_metric(n, seed))
    return out


@pytest.fixture(scope="module")
def corpus_systems(corpus):
    return [(metric, compute_cut_points(metric)) for metric in corpus]


def test_criterion_1_golden_splits(fig1):
    start = time.perf_counter()
    cs = compute_cut_points(fig1)
    elapsed = time.perf_counter() - start
    by_small = {
        min((r.split.side_a, r.split.side_b), key=len): r.alpha
        for r in cs.block_splits
    }
    assert by_small == FIG1_SPLITS
    assert by_small[frozenset({"a", "b"})] == 1
    assert elapsed < 1.0
    print(f"\nACCEPTANCE PASS 1: golden block splits ({elapsed:.3f}s)")


def test_criterion_2_golden_cutpoints(fig1):
    cs = compute_cut_points(fig1)
    expected = {kuratowski_map(fig1, x).values for x in fig1.labels}
    expected |= {tuple(map(Fraction, v)) for v in FIG1_INTERIOR}
    assert cs.cutpoint_vectors == expected
    print("ACCEPTANCE PASS 2: golden cutpoint set")


def test_criterion_3_golden_restriction(fig1_minus_c):
    cs = compute_cut_points(fig1_minus_c)
    smalls = {
        min((s.side_a, s.side_b), key=lambda side: (len(side), sorted(side)))
        for s in cs.splits
    }
    assert smalls == {frozenset("a"), frozenset("b"), frozenset("d"), frozenset("ab")}
    expected = {kuratowski_map(fig1_minus_c, x).values for x in fig1_minus_c.labels}
    expected |= {tuple(map(Fraction, (2, 1, 7, 3)))}
    assert cs.cutpoint_vectors == expected
    print("ACCEPTANCE PASS 3: golden restriction")


def test_criterion_4_golden_decomposition(fig1):
    cs = compute_cut_points(fig1)
    dec = decompose(fig1, cs)
    (clique_index,) = [bi for bi, b in enumerate(dec.blocks) if len(b) == 4]
    i, j = fig1.index("a"), fig1.index("d")
    assert dec.matrices[clique_index][i][j] == 5
    for p in range(fig1.n):
        for q in range(fig1.n):
            assert sum(mat[p][q] for mat in dec.matrices) == fig1.rows[p][q]
    _, cuts = blocks_and_cut_vertices(dec.graph)
    assert len(cuts) == 3
    print("ACCEPTANCE PASS 4: decomposition and cut vertex count")


def test_criterion_5_oracle_equivalence(corpus_systems):
    start = time.perf_counter()
    for metric, cs in corpus_systems:
        ref = reference_cut_points(metric)
        assert cs.cutpoint_vectors == ref.cutpoint_vectors, metric.labels
        assert cs.splits == ref.splits, metric.labels
        brute = {r.split for r in brute_force_block_splits(metric)}
        assert cs.splits == brute, metric.labels
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    print(
        f"ACCEPTANCE PASS 5: engine == reference == brute force on "
        f"{len(corpus_systems)} instances ({elapsed:.1f}s)"
    )


def test_criterion_6_invariant_suite(fig1, corpus_systems):
    instances = list(corpus_systems) + [(fig1, compute_cut_points(fig1))]
    for metric, cs in instances:
        n = metric.n
        vectors = cs.cutpoint_vectors
        for rec in cs.cutpoints:
            assert classify_cutstar(metric, rec.map) is rec.kind
            assert is_in_tight_span(metric, rec.map)
            if rec.kind is Classification.INTERIOR_CUTPOINT:
                assert len(rec.components) >= 2
        for rec in cs.block_splits:
            fa = split_map(metric, rec, rec.alpha, Fraction(0))
            fb = split_map(metric, rec, Fraction(0), rec.alpha)
            assert fa.values in vectors and fb.values in vectors
        assert len(cs.block_splits) <= 2 * n - 3
        assert len(cs.cutpoints) <= 4 * n - 5
        recs = cs.block_splits
        for i, r1 in enumerate(recs):
            for r2 in recs[i + 1 :]:
                assert are_compatible(r1.split, r2.split)
        dec = decompose(metric, cs)  # postconditions checked internally
        assert len(dec.blocks) <= 3 * n - 5
        pi = decomposition_path_independent(metric, dec, cap=8)
        assert pi.passed, pi.witness
        bc = bridge_split_correspondence(metric, cs, dec)
        assert bc.passed, bc.witness
        interior = {r.map.values for r in cs.interior_cutpoints}
        _, cuts = blocks_and_cut_vertices(dec.graph)
        assert {dec.graph.maps[v].values for v in cuts} == interior
    print(f"ACCEPTANCE PASS 6: invariant suite on {len(instances)} instances")


def test_criterion_7_permutation_equivariance(fig1):
    report = permutation_harness(fig1, trials=20, seed=2024)
    assert report.overall, report.failures()
    for i in range(10):
        metric = generate_block_instance(10, 1000 + i)
        report = permutation_harness(metric, trials=20, seed=i)
        assert report.overall, report.failures()
    print("ACCEPTANCE PASS 7: permutation equivariance")


def test_criterion_8_scaling():
    doc = run_bench([50, 100, 200, 400], [20, 40, 80], seed=7)
    largest = next(row for row in doc["fast"] if row["n"] == 400)
    assert largest["seconds"] < 300.0
    assert doc["fast_slope"] <= 3.5
    assert doc["reference_slope"] - doc["fast_slope"] >= 0.5
    table = ", ".join(f"n={row['n']}: {row['seconds']:.2f}s" for row in doc["fast"])
    print(
        f"ACCEPTANCE PASS 8: scaling ({table}; fast slope "
        f"{doc['fast_slope']:.2f}, reference slope {doc['reference_slope']:.2f})"
    )
