from fractions import Fraction
from itertools import combinations

import pytest

from metricblocks import (
    Classification,
    GammaOutOfRange,
    PointMap,
    Split,
    are_compatible,
    block_split_record,
    brute_force_block_splits,
    classify_cutstar,
    endpoint_maps,
    gamma_graph,
    generate_random_metric,
    is_block_split,
    is_in_polytope,
    isolation_index,
    kuratowski_map,
    split_map,
    split_witness_map,
    validate_metric,
    virtual_distance,
)

from conftest import FIG1_SPLITS


def sp(a, b):
    return Split(frozenset(a), frozenset(b))


def all_splits(labels):
    labels = sorted(labels)
    first, rest = labels[0], labels[1:]
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            a = {first, *extra}
            b = set(labels) - a
            if b:
                yield sp(a, b)


class TestSplitType:
    def test_canonical_orientation(self):
        s = sp("cde", "ab")
        assert s.side_a == frozenset("ab")
        assert s == sp("ab", "cde")
        assert hash(s) == hash(sp("ab", "cde"))

    def test_rejects_overlap_and_empty(self):
        with pytest.raises(ValueError):
            sp("ab", "bc")
        with pytest.raises(ValueError):
            sp("ab", "")


class TestIsolationIndex:
    def test_fig1_value(self, fig1):
        assert isolation_index(fig1, sp("ab", "cde")) == 1

    def test_zero_for_inline_point(self, fig1):
        assert isolation_index(fig1, sp("c", "abde")) == 0

    def test_two_point(self, two_point):
        assert isolation_index(two_point, sp("x", "y")) == Fraction(3, 2)

    def test_negative_on_crossing_split(self, four_cycle):
        # the additive cross condition holds here, yet the index is negative;
        # nonnegativity only holds once a side is a single point
        assert isolation_index(four_cycle, sp("ac", "bd")) == -1

    def test_nonnegative_for_singleton_sides(self):
        for seed in range(8):
            m = generate_random_metric(5, seed)
            for x in m.labels:
                rest = set(m.labels) - {x}
                assert isolation_index(m, sp({x}, rest)) >= 0

    def test_matches_virtual_distance_form_when_additive(self):
        for seed in range(6):
            m = generate_random_metric(5, seed)
            for s in all_splits(m.labels):
                a0, b0 = min(s.side_a), min(s.side_b)
                base = m.d(a0, b0)
                additive = all(
                    base + m.d(a, b) == m.d(a0, b) + m.d(a, b0)
                    for a in s.side_a
                    for b in s.side_b
                )
                if additive:
                    va = virtual_distance(m, kuratowski_map(m, a0), s.side_b)
                    vb = virtual_distance(m, kuratowski_map(m, b0), s.side_a)
                    assert isolation_index(m, s) == va + vb - base


class TestBlockSplitRecognition:
    def test_fig1_block_split(self, fig1):
        rec = block_split_record(fig1, sp("ab", "cde"))
        assert rec is not None
        assert rec.alpha == 1
        assert (rec.a_s, rec.b_s) == ("a", "c")
        assert (rec.va, rec.vb) == (3, 4)

    def test_zero_index_rejected(self, fig1):
        assert not is_block_split(fig1, sp("c", "abde"))

    def test_cross_sum_failure_rejected(self, fig1):
        assert not is_block_split(fig1, sp("ad", "bce"))

    def test_agrees_with_witness_map_definition(self):
        # existence of a full-support two-clique witness is the definition
        for seed in range(6):
            m = generate_random_metric(6, seed)
            for s in all_splits(m.labels):
                f = split_witness_map(m, s)
                g = gamma_graph(m, f)
                witnessed = (
                    is_in_polytope(m, f)
                    and g.vertices == frozenset(m.labels)
                    and set(g.components) == {s.side_a, s.side_b}
                    and all(g.clique_flags)
                )
                assert witnessed == is_block_split(m, s)


class TestSplitMaps:
    def test_endpoint_values(self, fig1):
        rec = block_split_record(fig1, sp("ab", "cde"))
        assert split_map(fig1, rec, 1, 0).values == (2, 1, 4, 7, 3)
        assert split_map(fig1, rec, 0, 1).values == (3, 2, 3, 6, 2)

    def test_midpoint_two_cliques(self, fig1):
        rec = block_split_record(fig1, sp("ab", "cde"))
        h = Fraction(1, 2)
        f = split_map(fig1, rec, h, h)
        assert f.values == (2 + h, 1 + h, 3 + h, 6 + h, 2 + h)
        g = gamma_graph(fig1, f)
        assert set(g.components) == {frozenset("ab"), frozenset("cde")}
        assert all(g.clique_flags)

    def test_gamma_out_of_range(self, fig1):
        rec = block_split_record(fig1, sp("ab", "cde"))
        with pytest.raises(GammaOutOfRange):
            split_map(fig1, rec, 2, -1)
        with pytest.raises(GammaOutOfRange):
            split_map(fig1, rec, 1, 1)

    def test_segment_property(self, fig1):
        # every point of the segment stays in the polytope and never joins
        # opposite sides; the within-side edges are complete exactly when
        # both weights are interior
        rec = block_split_record(fig1, sp("ab", "cde"))
        quarter = Fraction(1, 4)
        for ga in (Fraction(0), quarter, Fraction(1, 2), Fraction(1)):
            f = split_map(fig1, rec, ga, rec.alpha - ga)
            assert is_in_polytope(fig1, f)
            g = gamma_graph(fig1, f)
            cross = {
                frozenset((a, b)) for a in rec.split.side_a for b in rec.split.side_b
            }
            assert not (g.edges & cross)
            within = {
                frozenset(p)
                for side in (rec.split.side_a, rec.split.side_b)
                for p in combinations(sorted(side), 2)
            }
            if 0 < ga < rec.alpha:
                assert g.edges == within
            else:
                assert g.edges < within

    def test_endpoint_maps_fig1(self, fig1):
        rec = block_split_record(fig1, sp("ab", "cde"))
        fa, fb = endpoint_maps(fig1, rec)
        assert fa.values == (2, 1, 4, 7, 3)
        assert fb.values == (3, 2, 3, 6, 2)

    def test_endpoint_absorbs_kuratowski(self, fig1):
        # canonical side_a is {a,b,c,e}, so the b-side endpoint is k_d
        rec = block_split_record(fig1, sp("d", "abce"))
        fa, fb = endpoint_maps(fig1, rec)
        assert fb.values == kuratowski_map(fig1, "d").values
        assert fa.values == (8, 7, 2, 1, 3)

    def test_two_point_endpoints(self, two_point):
        rec = block_split_record(two_point, sp("x", "y"))
        fa, fb = endpoint_maps(two_point, rec)
        assert fa.values == kuratowski_map(two_point, "x").values
        assert fb.values == kuratowski_map(two_point, "y").values

    def test_fast_path_matches_definitional_evaluation(self):
        for seed in range(8):
            m = generate_random_metric(6, seed)
            for rec in brute_force_block_splits(m):
                fa, fb = endpoint_maps(m, rec)
                assert fa.values == split_map(m, rec, rec.alpha, 0).values
                assert fb.values == split_map(m, rec, 0, rec.alpha).values
                for f in (fa, fb):
                    assert classify_cutstar(m, f) in (
                        Classification.INTERIOR_CUTPOINT,
                        Classification.KURATOWSKI,
                    )

    def test_alpha_chain_over_all_side_pairs(self):
        for seed in range(8):
            m = generate_random_metric(6, seed)
            for rec in brute_force_block_splits(m):
                for a in rec.split.side_a:
                    for b in rec.split.side_b:
                        da = virtual_distance(m, kuratowski_map(m, a), rec.split.side_b)
                        db = virtual_distance(m, kuratowski_map(m, b), rec.split.side_a)
                        assert da + db - m.d(a, b) == rec.alpha


class TestCompatibility:
    def test_examples(self):
        assert are_compatible(sp("a", "bcde"), sp("ab", "cde"))
        assert not are_compatible(sp("ab", "cde"), sp("ac", "bde"))

    def test_block_splits_pairwise_compatible(self, fig1):
        splits = [rec.split for rec in brute_force_block_splits(fig1)]
        assert {s.side_a if len(s.side_a) <= 2 else s.side_b for s in splits} == set(
            FIG1_SPLITS
        )
        for s1, s2 in combinations(splits, 2):
            assert are_compatible(s1, s2)

    def test_different_ground_sets_rejected(self):
        with pytest.raises(ValueError):
            are_compatible(sp("a", "b"), sp("a", "c"))
