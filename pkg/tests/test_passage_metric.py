import numpy as np
import pytest

from conftest import random_intervals
from vpd.event_log import densify
from vpd.passage_metric import (Interval, classify_component, extract_intervals,
                                match_passages, pass_quality, pointwise_accuracy,
                                pq_from_totals, summarize_components)


def brute_force_components(ref, det):
    """Transitive closure over the overlap relation, found by repeated expansion."""
    nodes = [("r", i) for i in range(len(ref))] + [("d", j) for j in range(len(det))]
    adj = {n: set() for n in nodes}
    for i, r in enumerate(ref):
        for j, d in enumerate(det):
            if r.start <= d.end and d.start <= r.end:
                adj[("r", i)].add(("d", j))
                adj[("d", j)].add(("r", i))
    seen = set()
    comps = []
    for n in nodes:
        if n in seen:
            continue
        stack, comp = [n], set()
        while stack:
            cur = stack.pop()
            if cur in comp:
                continue
            comp.add(cur)
            stack.extend(adj[cur] - comp)
        seen |= comp
        rs = tuple(sorted(i for kind, i in comp if kind == "r"))
        ds = tuple(sorted(j for kind, j in comp if kind == "d"))
        comps.append((rs, ds))
    return sorted(comps)


def as_index_components(ref, det, components):
    out = []
    for c in components:
        rs = tuple(sorted(ref.index(iv) for iv in c.ref))
        ds = tuple(sorted(det.index(iv) for iv in c.det))
        out.append((rs, ds))
    return sorted(out)


class TestExtractIntervals:
    def test_sample_ref(self, sample_log):
        series = densify(sample_log)
        assert extract_intervals(series.channel("ref_pass"),
                                 series.first_frame) == [Interval(208, 265)]

    def test_all_zero(self):
        assert extract_intervals([0, 0, 0]) == []

    def test_singletons(self):
        assert extract_intervals([1, 0, 1]) == [Interval(0, 0), Interval(2, 2)]

    def test_empty_signal(self):
        assert extract_intervals([]) == []


class TestCosts:
    @pytest.mark.parametrize("l,k,kind,cost", [
        (1, 1, "correct", 0),
        (1, 0, "missed", 1),
        (0, 1, "false", 1),
        (3, 1, "merged", 3),
        (1, 4, "split", 4),
        (2, 3, "multiple", 3),
        (5, 2, "multiple", 5),
    ])
    def test_table(self, l, k, kind, cost):
        assert classify_component(l, k) == (kind, cost)

    def test_cost_symmetry(self):
        for l in range(1, 6):
            for k in range(1, 6):
                assert classify_component(l, k)[1] == classify_component(k, l)[1]


class TestMatch:
    def test_single_overlap(self):
        comps = match_passages([Interval(10, 20)], [Interval(15, 25)])
        assert len(comps) == 1
        assert (comps[0].kind, comps[0].cost) == ("correct", 0)

    def test_merged(self):
        comps = match_passages([Interval(0, 5), Interval(10, 15)], [Interval(3, 12)])
        assert len(comps) == 1
        assert (comps[0].kind, comps[0].cost) == ("merged", 2)

    def test_touching_is_not_overlap(self):
        comps = match_passages([Interval(0, 5)], [Interval(6, 9)])
        kinds = sorted(c.kind for c in comps)
        assert kinds == ["false", "missed"]

    def test_rejects_overlapping_input(self):
        with pytest.raises(ValueError):
            match_passages([Interval(0, 5), Interval(4, 8)], [])

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(300):
            ref = random_intervals(rng)
            det = random_intervals(rng)
            assert as_index_components(ref, det, match_passages(ref, det)) == \
                brute_force_components(ref, det)

    def test_counts_partition_inputs(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            ref = random_intervals(rng)
            det = random_intervals(rng)
            comps = match_passages(ref, det)
            assert sum(c.ref_count for c in comps) == len(ref)
            assert sum(c.det_count for c in comps) == len(det)


class TestPassQuality:
    def test_perfect_detection(self):
        ivs = [Interval(0, 5), Interval(10, 12)]
        assert pass_quality(ivs, ivs).pq == 1.0

    def test_single_miss(self):
        rep = pass_quality([Interval(0, 5)], [])
        assert (rep.r, rep.sum_err, rep.pq) == (0, 1, 0.0)

    def test_empty_vs_empty(self):
        rep = pass_quality([], [])
        assert rep.pq == 1.0

    def test_formula_on_fractional_totals(self):
        assert abs(pq_from_totals(1684.3, 158.7) - 0.914) < 5e-4

    def test_shift_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            ref = random_intervals(rng)
            det = random_intervals(rng)
            shift = int(rng.integers(1, 1000))
            shifted = lambda ivs: [Interval(i.start + shift, i.end + shift) for i in ivs]
            assert pass_quality(ref, det).to_dict() == \
                pass_quality(shifted(ref), shifted(det)).to_dict()

    def test_swap_symmetry(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            ref = random_intervals(rng)
            det = random_intervals(rng)
            a = pass_quality(ref, det)
            b = pass_quality(det, ref)
            assert a.r == b.r and a.sum_err == b.sum_err and a.pq == b.pq
            assert a.counts["missed"] == b.counts["false"]
            assert a.counts["merged"] == b.counts["split"]

    def test_spurious_detection_strictly_decreases_pq(self):
        ref = [Interval(0, 5)]
        det = [Interval(2, 7)]
        base = pass_quality(ref, det).pq
        worse = pass_quality(ref, det + [Interval(100, 105)]).pq
        assert worse < base

    def test_offset_does_not_matter_for_single_pair(self):
        for det in ([Interval(0, 3)], [Interval(5, 30)], [Interval(9, 9)]):
            rep = pass_quality([Interval(3, 9)], det)
            assert (rep.r, rep.sum_err) == (1, 0)


class TestPointwiseAccuracy:
    def test_identical(self):
        assert pointwise_accuracy([1, 0, 1], [1, 0, 1]) == 1.0

    def test_complement(self):
        assert pointwise_accuracy([1, 0], [0, 1]) == 0.0

    def test_random_matches_count(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = int(rng.integers(1, 100))
            a = rng.integers(0, 2, n)
            b = rng.integers(0, 2, n)
            assert pointwise_accuracy(a, b) == np.sum(a == b) / n

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            pointwise_accuracy([1], [1, 0])


class TestReportSerialization:
    def test_json_keys(self):
        rep = pass_quality([Interval(0, 2)], [Interval(1, 3)])
        d = rep.to_dict()
        assert set(d) == {"r", "sum_err", "pq", "counts", "accuracy"}
        assert set(d["counts"]) == {"correct", "missed", "false", "merged",
                                    "split", "multiple"}
