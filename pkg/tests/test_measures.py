"""Closed-form entanglement measures against the dense oracle and each other."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dickeent import (
    DickeState,
    GeneralizedDickeState,
    check_sum_inequality,
    crossover_compare,
    crossover_scan,
    entropy_block,
    entropy_one_vs_rest,
    first_crossover,
    is_two_site_entangled,
    oracle,
    reduced_two_site,
    ree_l,
    ree_pure,
    ree_pure_asymptotic,
    ree_pure_generalized,
    ree_two_site,
)
from dickeent.measures import EQUAL, GREATER, LESS


class TestReePure:
    def test_bell_state(self):
        assert ree_pure(2, 1) == 1.0

    def test_polarized_states_carry_nothing(self):
        assert ree_pure(17, 0) == 0.0
        assert ree_pure(17, 17) == 0.0

    def test_half_filled_four_sites(self):
        assert ree_pure(4, 2) == pytest.approx(4 - math.log2(6), abs=1e-14)

    def test_half_filled_four_sites_against_dense_reference(self):
        sigma = oracle.density(oracle.dicke_vector(4, 2))
        rho = oracle.closest_state_dense(4, 2)
        assert oracle.relative_entropy(sigma, rho) == pytest.approx(ree_pure(4, 2), abs=1e-9)

    def test_exchange_symmetry_is_exact(self):
        for n in range(1, 1500):
            values = ree_pure(n, np.arange(n + 1))
            assert np.array_equal(values, values[::-1])
        for n in range(1500, 10001, 379):
            values = ree_pure(n, np.arange(n + 1))
            assert np.array_equal(values, values[::-1])

    def test_maximal_at_half_filling(self):
        for n in (5, 12, 37):
            values = ree_pure(n, np.arange(n + 1))
            assert np.argmax(values) in (n // 2, (n + 1) // 2)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            ree_pure(0, 0)
        with pytest.raises(ValueError):
            ree_pure(4, 5)


class TestReePureAsymptotic:
    def test_matches_exact_value_at_large_n(self):
        n = 10**6
        assert abs(ree_pure_asymptotic(n) - ree_pure(n, n // 2)) < 0.01

    def test_loose_already_at_two_sites(self):
        assert abs(ree_pure_asymptotic(2) - ree_pure(2, 1)) < 0.5

    def test_quadrupling_n_adds_one_bit(self):
        for n in (10**4, 10**5):
            gain = ree_pure(4 * n, 2 * n) - ree_pure(n, n // 2)
            assert gain == pytest.approx(1.0, abs=1e-4)

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError):
            ree_pure_asymptotic(7)


class TestReeTwoSite:
    def test_bell_state(self):
        assert ree_two_site(2, 1) == 1.0

    def test_three_sites_single_excitation(self):
        expected = math.log2(3 / 2) - 1 / 3
        assert ree_two_site(3, 1) == pytest.approx(expected, abs=1e-14)

    def test_three_sites_against_numeric_minimization(self):
        pair = reduced_two_site(DickeState(3, 1))
        numeric = oracle.ree_numeric_two_site(pair, seed=11, restarts=8)
        assert numeric == pytest.approx(ree_two_site(3, 1), abs=1e-4)

    def test_vanishes_at_half_filling_large_n(self):
        assert ree_two_site(10**4, 5 * 10**3) < 2e-4

    def test_polarized_states(self):
        assert ree_two_site(9, 0) == 0.0
        assert ree_two_site(9, 9) == 0.0

    def test_domain_error(self):
        with pytest.raises(ValueError):
            ree_two_site(1, 0)


class TestReeL:
    def test_single_qubit_carries_nothing(self):
        assert ree_l(30, 11, 1) == 0.0

    def test_pair_block_matches_two_site_form(self):
        assert ree_l(6, 3, 2) == pytest.approx(ree_two_site(6, 3), abs=1e-12)

    def test_five_of_eight_against_dense_oracle(self):
        sigma = oracle.partial_trace(oracle.density(oracle.dicke_vector(8, 4)), range(5))
        rho = oracle.partial_trace(oracle.closest_state_dense(8, 4), range(5))
        dense = oracle.relative_entropy(sigma, rho)
        assert ree_l(8, 4, 5) == pytest.approx(dense, abs=1e-9)

    def test_chain_consistency_and_monotonicity(self):
        for n in range(2, 61):
            for k in range(n + 1):
                values = np.array([ree_l(n, k, l) for l in range(1, n + 1)])
                assert abs(values[1] - ree_two_site(n, k)) < 1e-12 if n >= 2 else True
                assert abs(values[-1] - ree_pure(n, k)) < 1e-12
                assert np.all(values >= 0.0)
                assert np.all(np.diff(values) >= -1e-12)
                assert values[-1] <= ree_pure(n, k) + 1e-12

    def test_domain_error(self):
        with pytest.raises(ValueError):
            ree_l(4, 2, 5)


class TestPairEntanglementPredicate:
    def test_interior_fillings_always_entangled(self):
        for n in (2, 3, 17, 50):
            for k in range(1, n):
                assert is_two_site_entangled(n, k)

    def test_polarized_states_are_separable(self):
        assert not is_two_site_entangled(12, 0)
        assert not is_two_site_entangled(12, 12)

    def test_agrees_with_partial_transpose_sign(self):
        for n in range(2, 51):
            ks = np.arange(n + 1)
            predicted = is_two_site_entangled(n, ks)
            for k in ks:
                pair = reduced_two_site(DickeState(n, int(k)))
                eig = oracle.min_eigenvalue(
                    oracle.partial_transpose(oracle.two_site_matrix(pair))
                )
                assert bool(predicted[k]) == (eig < -1e-12)

    def test_half_filled_fifty_site_witness(self):
        assert is_two_site_entangled(50, 25)
        pair = reduced_two_site(DickeState(50, 25))
        eig = oracle.min_eigenvalue(oracle.partial_transpose(oracle.two_site_matrix(pair)))
        assert eig < 0


class TestEntropies:
    def test_one_vs_rest(self):
        assert entropy_one_vs_rest(2, 1) == 1.0
        assert entropy_one_vs_rest(9, 0) == 0.0
        expected = -(0.3 * math.log2(0.3) + 0.7 * math.log2(0.7))
        assert entropy_one_vs_rest(10, 3) == pytest.approx(expected, abs=1e-15)

    def test_one_vs_rest_against_dense_marginal(self):
        reduced = oracle.partial_trace(oracle.density(oracle.dicke_vector(8, 2)), [3])
        eigs = np.linalg.eigvalsh(reduced)
        dense = float(-(eigs * np.log2(eigs)).sum())
        assert entropy_one_vs_rest(8, 2) == pytest.approx(dense, abs=1e-10)

    def test_block_entropy_bell(self):
        assert entropy_block(2, 1, 1) == 1.0

    def test_block_entropy_against_dense_half_split(self):
        reduced = oracle.partial_trace(oracle.density(oracle.dicke_vector(8, 4)), range(4))
        eigs = np.linalg.eigvalsh(reduced)
        eigs = eigs[eigs > 1e-14]
        dense = float(-(eigs * np.log2(eigs)).sum())
        assert entropy_block(8, 4, 4) == pytest.approx(dense, abs=1e-10)

    def test_block_entropy_large_case_against_exact_fractions(self):
        n, k, l = 1000, 500, 100
        total = math.comb(n, k)
        entropy = 0.0
        for j in range(l + 1):
            count = math.comb(l, j) * math.comb(n - l, k - j)
            if count:
                p = count / total
                entropy -= p * (math.log2(count) - math.log2(total))
        assert entropy_block(n, k, l) == pytest.approx(entropy, abs=1e-10)
        # the block weights are sqrt(l)-wide, so the entropy follows half the
        # log law, not the full symmetric-subspace dimension
        assert abs(entropy_block(n, k, l) - 0.5 * math.log2(l) - 0.972) < 0.1

    def test_block_entropy_split_symmetry(self):
        for n in range(2, 61):
            for k in range(n + 1):
                for l in range(1, n):
                    assert entropy_block(n, k, l) == pytest.approx(
                        entropy_block(n, k, n - l), abs=1e-10
                    )

    def test_block_half_log_growth(self):
        gain = entropy_block(4000, 2000, 1000) - entropy_block(400, 200, 100)
        assert gain == pytest.approx(0.5 * math.log2(10), abs=0.05)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            entropy_block(4, 2, 4)


class TestSumInequality:
    def test_bell_extreme_point_is_tight(self):
        report = check_sum_inequality(2, 1)
        assert report.lhs == pytest.approx(1.0, abs=1e-12)
        assert report.rhs == pytest.approx(1.0, abs=1e-12)
        assert report.holds and report.cap_holds

    def test_holds_everywhere_up_to_two_hundred(self):
        for n in range(2, 201):
            ks = np.arange(n + 1)
            lhs = (n - 1) * ree_two_site(n, ks)
            rhs = entropy_one_vs_rest(n, ks)
            assert np.all(lhs <= rhs + 1e-12)

    def test_pair_entanglement_capped_by_inverse_n(self):
        assert ree_two_site(10**4, 5 * 10**3) <= 1.0 / (10**4 - 1)
        report = check_sum_inequality(10**4, 5 * 10**3)
        assert report.cap_holds


class TestCrossover:
    def test_three_sites_sum_stays_below(self):
        # with the single-qubit term equal to zero the accumulated sum at
        # n = 3 is just the pair value, far below the full-state value
        report = crossover_compare(3, 1, 2)
        assert report.ordering == LESS
        assert report.sum_lower == pytest.approx(ree_two_site(3, 1), abs=1e-12)
        assert report.higher == pytest.approx(ree_pure(3, 1), abs=1e-12)

    def test_split_identity_at_three_sites(self):
        # the full-state value exactly splits into one-vs-rest plus pair value
        for k in (1, 2):
            assert ree_pure(3, k) == pytest.approx(
                entropy_one_vs_rest(3, k) + ree_two_site(3, k), abs=1e-12
            )

    def test_both_orderings_occur_at_hundred_sites(self):
        assert crossover_compare(100, 50, 3).ordering == LESS
        assert crossover_compare(100, 50, 29).ordering == GREATER

    def test_scan_locates_flip(self):
        reports = crossover_scan(100, 50, 40)
        assert first_crossover(reports) == 5
        orderings = [r.ordering for r in reports]
        assert orderings[:4] == [LESS] * 4
        assert all(o == GREATER for o in orderings[4:])

    def test_polarized_state_is_degenerate_tie(self):
        assert crossover_compare(5, 0, 2).ordering == EQUAL

    def test_domain_error(self):
        with pytest.raises(ValueError):
            crossover_compare(5, 2, 5)


class TestGeneralized:
    def test_two_level_reduction(self):
        for n, k in ((2, 1), (5, 2), (9, 0), (7, 7)):
            state = GeneralizedDickeState((k, n - k))
            assert ree_pure_generalized(state) == pytest.approx(ree_pure(n, k), abs=1e-12)

    def test_single_level_is_product(self):
        assert ree_pure_generalized(GeneralizedDickeState((4, 0, 0))) == 0.0

    def test_one_site_per_level_against_dense_reference(self):
        counts = (1, 1, 1)
        sigma = oracle.density(oracle.dicke_vector_generalized(counts))
        rho = oracle.dense_generalized(counts)
        dense = oracle.relative_entropy(sigma, rho)
        assert ree_pure_generalized(GeneralizedDickeState(counts)) == pytest.approx(
            dense, abs=1e-6
        )


@settings(max_examples=60)
@given(
    st.integers(min_value=2, max_value=60).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(min_value=0, max_value=n))
    )
)
def test_tracing_never_increases_entanglement(pair):
    n, k = pair
    assert ree_pure(n, k) + 1e-12 >= ree_two_site(n, k) >= 0.0
