import numpy as np
import pytest
from src.common.errors import ArgumentError, DegenerateSliceError
from src.core.distributions import AnalyticLaw
from src.core.marginals import (Partition, affine_gap, conditional_slice, conditional_slices, joint_matrix, marginalize,
                                noisy_conditional_affine, noisy_conditional_exact)
from src.core.state_core import ProbVector, depolarize, probabilities, sample_haar_state, sample_symmetric_dirichlet
from src.core.stats_tests import correlation_check, ks_one_sample, ks_two_sample
from src.managers.trial_manager import TrialManager


def haar_probs(n: int, rng) -> ProbVector:
    return probabilities(sample_haar_state(n, rng))


class TestPartition:
    @pytest.mark.marginals
    def test_trailing_partition_bits(self):
        part = Partition.trailing(5, 3)
        assert part.a_bits == (0, 1, 2) and part.b_bits == (3, 4)
        assert (part.M, part.K, part.N) == (8, 4, 32)

    @pytest.mark.marginals
    def test_split_index_follows_substring_order(self):
        part = Partition(3, (2, 0))
        # bit-string "101" = index 5: qubit 2 -> '1', qubit 0 -> '1', B = qubit 1 -> '0'
        y, z = part.split_index(5)
        assert (int(y), int(z)) == (3, 0)
        # bit-string "110" = index 6: y = qubit2 qubit0 = "01", z = "1"
        y, z = part.split_index(np.array([6]))
        assert (int(y[0]), int(z[0])) == (1, 1)

    @pytest.mark.marginals
    @pytest.mark.parametrize('a_bits', [(), (0, 0), (3,), (-1,)])
    def test_invalid_partitions_are_rejected(self, a_bits):
        with pytest.raises(ArgumentError):
            Partition(3, a_bits)

    @pytest.mark.marginals
    def test_mismatched_register_is_rejected(self):
        with pytest.raises(ArgumentError):
            marginalize(ProbVector(2, np.full(4, 0.25)), Partition.trailing(3, 1))


class TestMarginals:
    @pytest.mark.marginals
    def test_marginal_of_basis_state(self):
        p = ProbVector(2, np.array([1.0, 0.0, 0.0, 0.0]))
        np.testing.assert_array_equal(marginalize(p, Partition(2, (0,))), [1.0, 0.0])

    @pytest.mark.marginals
    def test_marginal_of_uniform_state(self):
        p = ProbVector(4, np.full(16, 1 / 16))
        np.testing.assert_allclose(marginalize(p, Partition.trailing(4, 2)), np.full(4, 0.25), rtol=1e-15)

    @pytest.mark.marginals
    def test_full_partition_is_identity(self, rng_spec):
        p = haar_probs(6, rng_spec(1))
        np.testing.assert_array_equal(marginalize(p, Partition.trailing(6, 6)), p.probs)

    @pytest.mark.marginals
    def test_arbitrary_partition_matches_bit_gather(self, rng_spec):
        p = haar_probs(5, rng_spec(2))
        part = Partition(5, (3, 0, 4))
        y, _ = part.split_index(np.arange(32))
        expected = np.bincount(y, weights=p.probs, minlength=part.M)
        np.testing.assert_allclose(marginalize(p, part), expected, rtol=1e-13)

    @pytest.mark.marginals
    def test_joint_matrix_rows_and_columns(self, rng_spec):
        p = haar_probs(6, rng_spec(3))
        part = Partition(6, (5, 1))
        matrix = joint_matrix(p, part)
        y, z = part.split_index(np.arange(64))
        assert matrix.shape == (4, 16)
        np.testing.assert_array_equal(matrix[y, z], p.probs)

    @pytest.mark.marginals
    def test_aggregated_marginals_follow_dirichlet_of_k(self):
        part = Partition.trailing(12, 4)
        marginal = TrialManager(31).pooled(lambda rng: marginalize(haar_probs(12, rng), part), 6250)
        direct = TrialManager(32).pooled(lambda rng: sample_symmetric_dirichlet(part.M, part.K, rng), 6250)
        report = ks_two_sample(marginal, direct)
        assert report.passed, f'Marginals differ from Dir(K) draws: D={report.ks_statistic}'


class TestConditionals:
    @pytest.mark.marginals
    def test_conditional_of_product_state(self):
        p = ProbVector(2, np.array([0.25, 0.25, 0.25, 0.25]))
        cond = conditional_slice(p, Partition.trailing(2, 1), 1)
        np.testing.assert_allclose(cond.cond_probs, [0.5, 0.5], rtol=1e-15)
        assert cond.weight == pytest.approx(0.5)

    @pytest.mark.marginals
    def test_conditional_on_zero_weight_outcome_raises(self):
        p = ProbVector(2, np.array([1.0, 0.0, 0.0, 0.0]))
        with pytest.raises(DegenerateSliceError) as error:
            conditional_slice(p, Partition.trailing(2, 1), 1)
        assert error.value.b == 1

    @pytest.mark.marginals
    def test_outcome_out_of_range_is_rejected(self):
        with pytest.raises(ArgumentError):
            conditional_slice(ProbVector(2, np.full(4, 0.25)), Partition.trailing(2, 1), 2)

    @pytest.mark.marginals
    def test_slices_recompose_the_marginal(self, rng_spec):
        p = haar_probs(8, rng_spec(4))
        part = Partition(8, (6, 2, 0))
        slices = conditional_slices(p, part)
        recomposed = sum(s.weight * s.cond_probs for s in slices)
        np.testing.assert_allclose(recomposed, marginalize(p, part), rtol=1e-12)
        assert all(abs(np.sum(s.cond_probs) - 1.0) < 1e-12 for s in slices)

    @pytest.mark.marginals
    def test_single_slice_matches_all_slices(self, rng_spec):
        p = haar_probs(8, rng_spec(5))
        part = Partition(8, (1, 4, 7))
        every = conditional_slices(p, part)
        for b in (0, 7, 31):
            one = conditional_slice(p, part, b)
            np.testing.assert_allclose(one.cond_probs, every[b].cond_probs, rtol=1e-13)
            assert one.weight == pytest.approx(every[b].weight, rel=1e-13)

    @pytest.mark.marginals
    def test_conditional_is_flat_dirichlet_of_subsystem_dimension(self):
        part = Partition.trailing(12, 6)
        values = TrialManager(33).pooled(lambda rng: conditional_slice(haar_probs(12, rng), part, 0).cond_probs, 1563)
        report = ks_one_sample(values, AnalyticLaw.conditional_beta(part.M, scaled=False))
        assert report.passed, f'Conditional slice not Beta(1, M-1): D={report.ks_statistic}'

    @pytest.mark.marginals
    @pytest.mark.parametrize('a_bits, b', [
        ((0, 1, 2, 3, 4, 5), 63),
        ((11, 3, 7, 0, 5, 9), 17),
        ((1, 4, 6, 9, 10, 2, 8, 0), 15),
        ((10, 8, 6, 4, 2, 0, 1, 3, 5, 7, 9), 1),
    ])
    def test_every_outcome_and_partition_gives_the_same_law(self, a_bits, b):
        part = Partition(12, a_bits)
        trials = -(-100_000 // part.M)
        values = TrialManager(35 + b).pooled(
            lambda rng: part.M * conditional_slice(haar_probs(12, rng), part, b).cond_probs, trials)
        report = ks_one_sample(values, AnalyticLaw.conditional_beta(part.M))
        assert report.passed, f'a_bits={a_bits}, b={b}: D={report.ks_statistic} >= {report.ks_critical_1pct}'

    @pytest.mark.marginals
    def test_slice_weight_is_uncorrelated_with_slice_values(self):
        part = Partition.trailing(8, 4)

        def trial(rng):
            cond = conditional_slice(haar_probs(8, rng), part, 0)
            return np.array([cond.weight, cond.cond_probs[0]])

        pairs = np.array(TrialManager(34).run(trial, 10_000))
        report = correlation_check(pairs[:, 0], pairs[:, 1])
        assert report.passed, f'corr(p(b), p(y|b)) = {report.correlation} outside ±{report.bound}'


class TestNoisyConditionals:
    @pytest.mark.marginals
    def test_exact_noisy_conditional_endpoints(self, rng_spec):
        p = haar_probs(8, rng_spec(6))
        part = Partition.trailing(8, 5)
        ideal = conditional_slice(p, part, 3)
        np.testing.assert_allclose(noisy_conditional_exact(depolarize(p, 0.0), part, 3).cond_probs,
                                   ideal.cond_probs, rtol=1e-14)
        np.testing.assert_allclose(noisy_conditional_exact(depolarize(p, 1.0), part, 3).cond_probs,
                                   np.full(part.M, 1 / part.M), rtol=1e-14)

    @pytest.mark.marginals
    def test_affine_approximation_endpoints(self, rng_spec):
        p = haar_probs(8, rng_spec(7))
        part = Partition.trailing(8, 5)
        cond = conditional_slice(p, part, 0)
        np.testing.assert_array_equal(noisy_conditional_affine(cond, 0.0, part.M), cond.cond_probs)
        uniform = conditional_slice(ProbVector(8, np.full(256, 1 / 256)), part, 0)
        np.testing.assert_allclose(noisy_conditional_affine(uniform, 0.4, part.M), np.full(part.M, 1 / part.M),
                                   rtol=1e-14)

    @pytest.mark.marginals
    def test_affine_approximation_rejects_full_noise(self, rng_spec):
        cond = conditional_slice(haar_probs(4, rng_spec(8)), Partition.trailing(4, 2), 0)
        with pytest.raises(ArgumentError):
            noisy_conditional_affine(cond, 1.0, 4)

    @pytest.mark.marginals
    def test_exact_noisy_conditional_is_close_to_shifted_law(self):
        lam = 0.3
        part = Partition.trailing(12, 6)

        def trial(rng):
            noisy = depolarize(haar_probs(12, rng), lam)
            return part.M * noisy_conditional_exact(noisy, part, 0).cond_probs

        values = TrialManager(35).pooled(trial, 1563)
        report = ks_one_sample(values, AnalyticLaw.conditional_beta(part.M, lam))
        assert report.ks_statistic < 0.02, f'Noisy conditional far from the shifted law: D={report.ks_statistic}'

    @pytest.mark.marginals
    def test_affine_gap_is_below_mean_probability(self, rng_spec):
        p = haar_probs(10, rng_spec(9))
        part = Partition.trailing(10, 7)
        exact = noisy_conditional_exact(depolarize(p, 0.3), part, 0)
        approx = noisy_conditional_affine(conditional_slice(p, part, 0), 0.3, part.M)
        assert affine_gap(exact, approx) < 1.0 / part.M
        assert affine_gap(exact, exact.cond_probs) == 0.0
