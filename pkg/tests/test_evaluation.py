"""Scoring and benchmark protocols: PA alignment, reports, ablation, sweeps."""

import numpy as np
import pytest

from conivat import (
    Partition,
    euclidean_dissimilarity,
    gen_gaussian_mixture,
    hac,
    normalize_minmax,
    partition_accuracy,
    run_ablation,
    run_benchmark,
    run_constraint_sweep,
)
from conivat.data import synth1
from conivat.vat import VARIANTS
from oracles import brute_force_pa


@pytest.fixture(scope="module")
def iris_ablation(iris):
    return run_ablation(iris, 30, 10, 0, name="iris")


@pytest.fixture(scope="module")
def iris_sweep(iris):
    return run_constraint_sweep(iris, (0, 5, 30), 10, 0, name="iris")


class TestPartitionAccuracy:
    def test_identical_is_100(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            labels = rng.integers(0, 4, size=12)
            assert partition_accuracy(labels, labels) == 100.0

    def test_permuted_ids_is_100(self):
        pred = np.array([2, 2, 0, 0, 1, 1])
        truth = np.array([0, 0, 1, 1, 2, 2])
        assert partition_accuracy(pred, truth) == 100.0

    def test_partial_overlap_value(self):
        assert partition_accuracy(np.array([0, 0, 1, 1]), np.array([0, 1, 1, 1])) == 75.0

    def test_accepts_partition_objects(self):
        p = Partition(np.array([0, 1, 0]), 2)
        assert partition_accuracy(p, np.array([5, 9, 5])) == 100.0

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            n = int(rng.integers(4, 12))
            pred = rng.integers(0, 3, size=n)
            truth = rng.integers(0, int(rng.integers(2, 5)), size=n)
            assert partition_accuracy(pred, truth) == pytest.approx(brute_force_pa(pred, truth), abs=1e-12)

    def test_relabeling_invariance_both_sides(self):
        rng = np.random.default_rng(11)
        pred = rng.integers(0, 3, size=20)
        truth = rng.integers(0, 3, size=20)
        base = partition_accuracy(pred, truth)
        for _ in range(10):
            pp = rng.permutation(3)[pred]
            tp = rng.permutation(3)[truth]
            assert partition_accuracy(pp, tp) == base

    def test_mismatched_cluster_counts(self):
        # extra predicted ids contribute zero matches but stay well-defined
        assert partition_accuracy(np.array([0, 1, 2, 3]), np.array([0, 0, 1, 1])) == 50.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            partition_accuracy(np.array([0, 1]), np.array([0, 1, 1]))


class TestRunBenchmark:
    def test_single_run_matches_single_shot(self, iris):
        rep = run_benchmark({"iris": iris}, ("hac-sl",), 30, runs=1, seed=0)
        row = rep.row("iris", "hac-sl")
        norm = normalize_minmax(iris)
        single = partition_accuracy(hac(euclidean_dissimilarity(norm), 3, "single"), iris.labels)
        assert list(row.pa_runs) == [pytest.approx(single)]
        assert row.k == 3 and row.n_constraints == 30

    def test_iris_hac_sl_band_and_constancy(self, iris):
        rep = run_benchmark({"iris": iris}, ("hac-sl",), 30, 10, 0)
        row = rep.row("iris", "hac-sl")
        # constraint-free algorithm: constraint redraws cannot move the score
        assert len(set(row.pa_runs)) == 1
        assert row.mean_pa == pytest.approx(66.0, abs=2.0)

    def test_same_seed_bit_identical(self, iris):
        a = run_benchmark({"iris": iris}, ("hac-sl", "ssl"), 10, 3, 7)
        b = run_benchmark({"iris": iris}, ("hac-sl", "ssl"), 10, 3, 7)
        assert a.to_csv() == b.to_csv()
        assert a.row("iris", "ssl").run_seeds == b.row("iris", "ssl").run_seeds

    def test_unlabeled_dataset_rejected(self, iris):
        from conivat import FeatureMatrix

        with pytest.raises(ValueError):
            run_benchmark({"x": FeatureMatrix(iris.points)}, ("hac-sl",), 5, 2, 0)

    def test_unknown_algorithm_rejected(self, iris):
        with pytest.raises(ValueError):
            run_benchmark({"iris": iris}, ("dbscan",), 5, 2, 0)

    def test_report_lookup_and_formats(self, iris):
        rep = run_benchmark({"iris": iris}, ("hac-sl",), 5, 2, 0)
        with pytest.raises(KeyError):
            rep.row("iris", "ccl")
        csv = rep.to_csv()
        header = csv.splitlines()[0]
        assert header.startswith("dataset,algorithm,")
        assert "seconds" not in header  # timing excluded for byte-stable output
        assert "iris" in rep.to_table() and "hac-sl" in rep.to_table()


class TestRunAblation:
    def test_one_row_per_variant(self, iris_ablation):
        assert sorted(r.algorithm for r in iris_ablation.rows) == sorted(VARIANTS)

    def test_ivat_constant_across_runs(self, iris_ablation):
        assert len(set(iris_ablation.row("iris", "ivat").pa_runs)) == 1

    def test_shared_run_seeds_across_variants(self, iris_ablation):
        seeds = {tuple(r.run_seeds) for r in iris_ablation.rows}
        assert len(seeds) == 1

    def test_synth1_bridge_removal_helps(self):
        rep = run_ablation(synth1(0), 30, 10, 0, name="synth1")
        assert rep.row("synth1", "mtd_vat").mean_pa >= rep.row("synth1", "ivat").mean_pa


class TestRunConstraintSweep:
    def test_one_row_per_count(self, iris_sweep):
        counts = [r.n_constraints for r in iris_sweep.rows]
        assert counts == [0, 5, 30]
        assert all(r.algorithm == "conivat" for r in iris_sweep.rows)

    def test_zero_count_degenerates_to_ivat(self, iris_sweep, iris_ablation):
        assert iris_sweep.row("iris", "conivat", 0).pa_runs == iris_ablation.row("iris", "ivat").pa_runs

    def test_same_run_seeds_every_count(self, iris_sweep):
        seeds = {tuple(r.run_seeds) for r in iris_sweep.rows}
        assert len(seeds) == 1

    def test_count_beyond_available_pairs(self):
        data = gen_gaussian_mixture(0, k=2, sizes=[5, 5], centers=[[0.0, 0.0], [5.0, 0.0]], sigmas=[0.3, 0.3])
        with pytest.raises(ValueError):
            run_constraint_sweep(data, (100,), runs=2, seed=0, name="tiny")

    def test_more_constraints_do_not_hurt_on_iris(self, iris_sweep):
        # The 30- vs 5-constraint comparison sits on a plateau for this
        # dataset: most draws leave the learner at the same local solution,
        # so the run-mean difference is a fraction of a point and its sign
        # flips with the master seed. At the canonical protocol seed the
        # tendency narrowly fails; asserted as stated rather than tuned away.
        pa5 = iris_sweep.row("iris", "conivat", 5).mean_pa
        pa30 = iris_sweep.row("iris", "conivat", 30).mean_pa
        assert pa30 >= pa5, (
            f"mean PA with 30 constraints ({pa30:.2f}) fell below the "
            f"5-constraint mean ({pa5:.2f}); known plateau effect, see notes"
        )
