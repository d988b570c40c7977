import numpy as np
import pytest

from altproj.angles import friedrichs_number
from altproj.corpus import example3, random_system, tilted_pairs, two_lines
from altproj.dynamics import (
    IndexSchedule,
    SlowSequence,
    cyclic_operator,
    iterate_vector,
    operator_error_norms,
    random_product_norm,
    reduced_min_modulus,
    slow_vector_probe,
)
from altproj.subspace import Subspace, SubspaceSystem, projector
from cases import convergence_corpus, coordinate_axes
from oracles import circle_min_modulus


def line(direction, d=2):
    v = np.asarray(direction, dtype=float)
    return Subspace(d, (v / np.linalg.norm(v))[:, None])


class TestIndexSchedule:
    def test_cyclic_is_exact(self):
        sched = IndexSchedule.cyclic(3)
        np.testing.assert_array_equal(sched.first(8), [1, 2, 3, 1, 2, 3, 1, 2])

    def test_explicit_validation(self):
        with pytest.raises(ValueError):
            IndexSchedule.explicit([], 3)
        with pytest.raises(ValueError):
            IndexSchedule.explicit([0, 1], 3)
        with pytest.raises(ValueError):
            IndexSchedule.explicit([1, 2], 3).first(5)

    def test_random_deterministic_prefix(self):
        a = IndexSchedule.random(4, seed=9)
        np.testing.assert_array_equal(a.first(10), a.first(20)[:10])

    @pytest.mark.parametrize("window", [3, 5])
    def test_coverage_window_property(self, window):
        sched = IndexSchedule.random(3, seed=5, coverage_window=window)
        idx = sched.first(200)
        for start in range(200 - window + 1):
            assert set(idx[start:start + window]) == {1, 2, 3}

    def test_window_shorter_than_alphabet_rejected(self):
        with pytest.raises(ValueError):
            IndexSchedule.random(3, seed=0, coverage_window=2)


class TestCyclicOperator:
    def test_orthogonal_lines_annihilate(self):
        system = two_lines(np.pi / 2)
        np.testing.assert_allclose(cyclic_operator(system), np.zeros((2, 2)), atol=1e-14)

    def test_identical_subspaces_give_projector(self):
        s = line([1.0, 0.0])
        system = SubspaceSystem((s, s))
        np.testing.assert_allclose(cyclic_operator(system), projector(s), atol=1e-14)

    def test_application_order(self):
        # first component applied first: T e2 = P2 P1 e2 = 0 for these lines
        system = two_lines(np.pi / 3)
        t = cyclic_operator(system)
        np.testing.assert_allclose(t @ np.array([0.0, 1.0]), [0.0, 0.0], atol=1e-14)
        reversed_t = system.projectors[0] @ system.projectors[1]
        assert np.linalg.norm(t - reversed_t.T) <= 1e-14

    def test_coordinate_example_contracts(self):
        system = example3(12)
        gap = operator_error_norms(system, 1).errors[0]
        assert gap < 1.0


class TestIterateVector:
    def test_fixed_point_in_intersection(self):
        system = SubspaceSystem((line([1.0, 0.0]), line([1.0, 0.0])))
        trace = iterate_vector(system, [2.0, 0.0], IndexSchedule.cyclic(2), 5)
        np.testing.assert_allclose(trace.errors, np.zeros(5), atol=1e-14)

    def test_two_lines_error_pattern(self):
        theta = np.pi / 3
        system = two_lines(theta)
        c = np.cos(theta)
        # start on the first line: per-pass error is exactly c^(2n-1)
        trace = iterate_vector(system, [1.0, 0.0], IndexSchedule.cyclic(2), 6)
        np.testing.assert_allclose(trace.errors, c ** (2 * np.arange(1, 7) - 1), atol=1e-12)
        # start on the tilted line: per-pass error is exactly c^(2n)
        u = np.array([np.cos(theta), np.sin(theta)])
        trace_u = iterate_vector(system, u, IndexSchedule.cyclic(2), 6)
        np.testing.assert_allclose(trace_u.errors, c ** (2 * np.arange(1, 7)), atol=1e-12)
        # the operator rate is an upper envelope for unit starts
        envelope = operator_error_norms(system, 6).errors
        assert (trace.errors <= envelope + 1e-12).all()
        assert (trace_u.errors <= envelope + 1e-12).all()

    def test_cyclic_error_bounded_by_operator_gap(self):
        system = random_system(9, (3, 3, 3), seed=11)
        rng = np.random.default_rng(0)
        x0 = rng.standard_normal(9)
        n = 7
        trace = iterate_vector(system, x0, IndexSchedule.cyclic(3), n)
        gap = operator_error_norms(system, n).errors[-1]
        assert trace.errors[-1] <= gap * np.linalg.norm(x0) + 1e-8

    def test_random_schedule_converges_on_coordinate_example(self):
        system = example3(12)
        rng = np.random.default_rng(4)
        sched = IndexSchedule.random(3, seed=8, coverage_window=3)
        trace = iterate_vector(system, rng.standard_normal(12), sched, 500)
        assert trace.errors[-1] <= 1e-6

    def test_errors_nonincreasing_for_any_schedule(self):
        system = random_system(6, (2, 3), seed=2)
        rng = np.random.default_rng(1)
        for sched in (IndexSchedule.cyclic(2), IndexSchedule.random(2, seed=3),
                      IndexSchedule.explicit([1, 2, 2, 1, 2, 1, 1, 2], 2)):
            trace = iterate_vector(system, rng.standard_normal(6), sched, 8)
            assert (np.diff(trace.errors) <= 1e-8).all()

    def test_bad_inputs(self):
        system = two_lines(0.5)
        with pytest.raises(ValueError):
            iterate_vector(system, [1.0, 0.0, 0.0], IndexSchedule.cyclic(2), 5)
        with pytest.raises(ValueError):
            iterate_vector(system, [1.0, 0.0], IndexSchedule.cyclic(3), 5)
        with pytest.raises(ValueError):
            iterate_vector(system, [1.0, 0.0], IndexSchedule.cyclic(2), 0)


class TestOperatorErrorNorms:
    @pytest.mark.parametrize("seed", range(8))
    def test_pair_errors_follow_odd_powers(self, seed):
        rng = np.random.default_rng(seed)
        d = int(rng.integers(2, 11))
        system = random_system(d, (int(rng.integers(1, d)), int(rng.integers(1, d))), seed=seed + 50)
        c = friedrichs_number(system)
        errors = operator_error_norms(system, 10).errors
        expected = c ** (2 * np.arange(1, 11) - 1)
        assert np.max(np.abs(errors - expected)) <= 1e-8

    def test_orthogonal_system_converges_in_one_pass(self):
        assert operator_error_norms(coordinate_axes(3), 1).errors[0] == pytest.approx(0.0, abs=1e-12)

    def test_monotone(self):
        for _, system in convergence_corpus()[:6]:
            errors = operator_error_norms(system, 30).errors
            assert (np.diff(errors) <= 1e-10).all()

    @pytest.mark.parametrize("seed", range(5))
    def test_reduced_product_identity(self, seed):
        # T^n - P_M equals the n-th power of the product of reduced projectors
        system = random_system(7, (3, 2, 3), seed=seed)
        t = cyclic_operator(system)
        pm = system.intersection_projector
        q = np.eye(7)
        for r in system.reduced:
            q = projector(r) @ q
        np.testing.assert_allclose(t - pm, q, atol=1e-10)
        np.testing.assert_allclose(t @ t - pm, q @ q, atol=1e-10)


class TestReducedMinModulus:
    def test_orthogonal_axes_unit_modulus(self):
        assert reduced_min_modulus(coordinate_axes(3)) == pytest.approx(1.0, abs=1e-12)

    def test_identical_lines_modulus_one(self):
        system = SubspaceSystem((line([1.0, 0.0]), line([1.0, 0.0])))
        assert reduced_min_modulus(system) == pytest.approx(1.0, abs=1e-12)

    def test_matches_circle_oracle(self):
        for theta in (0.3, np.pi / 3, 1.2):
            system = two_lines(theta)
            assert abs(reduced_min_modulus(system) - circle_min_modulus(system)) <= 1e-6

    def test_whole_space_rejected(self):
        system = SubspaceSystem((Subspace.full(2), Subspace.full(2)))
        with pytest.raises(ValueError):
            reduced_min_modulus(system)


class TestRandomProductNorm:
    def test_full_cycle_equals_operator_gap(self):
        system = example3(12)
        assert random_product_norm(system, [1, 2, 3]) == pytest.approx(
            operator_error_norms(system, 1).errors[0], abs=1e-12)

    def test_single_component_equal_to_intersection(self):
        system = SubspaceSystem((line([1.0, 0.0]), line([1.0, 0.0])))
        assert random_product_norm(system, [1]) == pytest.approx(0.0, abs=1e-12)

    def test_longer_products_contract(self):
        system = random_system(9, (3, 3, 3), seed=3)
        short = random_product_norm(system, [1, 2, 3])
        long = random_product_norm(system, [1, 2, 3, 1, 2, 3])
        assert long <= short + 1e-10

    def test_validation(self):
        system = two_lines(0.5)
        with pytest.raises(ValueError):
            random_product_norm(system, [])
        with pytest.raises(ValueError):
            random_product_norm(system, [3])


class TestSlowSequence:
    def test_power_decay_values(self):
        np.testing.assert_allclose(SlowSequence.power(0.5).values(3),
                                   [(n + 2.0) ** -0.5 for n in (1, 2, 3)])

    def test_log_decay_values(self):
        np.testing.assert_allclose(SlowSequence.log().values(2),
                                   [1.0 / np.log(3.0), 1.0 / np.log(4.0)])

    def test_explicit_validation(self):
        assert SlowSequence.explicit([0.0, 0.0]).values(2).tolist() == [0.0, 0.0]
        with pytest.raises(ValueError):
            SlowSequence.explicit([1.0]).values(2)
        with pytest.raises(ValueError):
            SlowSequence.explicit([1.0, -0.1]).values(2)
        with pytest.raises(ValueError):
            SlowSequence.explicit([0.5, 0.1, 0.2, 0.3]).values(4)
        with pytest.raises(ValueError):
            SlowSequence.power(0.0)


class TestSlowVectorProbe:
    def test_zero_target_trivially_succeeds(self):
        result = slow_vector_probe([0.7], SlowSequence.explicit([0.0] * 5), 5)
        assert result.success and result.achieved_horizon == 5
        assert np.linalg.norm(result.x) == pytest.approx(1.0, abs=1e-12)

    def test_many_blocks_dominate_power_decay(self):
        angles = 1.0 / np.arange(1, 61)
        result = slow_vector_probe(angles, SlowSequence.power(0.5), 100)
        assert result.success
        # verify by an independent direct iteration of the returned vector
        system = tilted_pairs(60)
        trace = iterate_vector(system, result.x, IndexSchedule.cyclic(2), 100)
        target = SlowSequence.power(0.5).values(100)
        assert (trace.errors + 1e-12 >= target).all()

    def test_single_block_cannot_dominate_log_decay(self):
        result = slow_vector_probe([1.0], SlowSequence.log(), 100)
        assert not result.success
        assert 0 <= result.achieved_horizon < 100

    def test_invalid_horizon(self):
        with pytest.raises(ValueError):
            slow_vector_probe([0.5], SlowSequence.log(), 0)


class TestConvergenceSuites:
    @pytest.mark.parametrize("case_index,name,system",
                             [(i, n, s) for i, (n, s) in enumerate(convergence_corpus())])
    def test_cyclic_and_random_convergence(self, case_index, name, system):
        rng = np.random.default_rng(1000 + case_index)
        x0 = rng.standard_normal(system.ambient_dim)
        n = system.n_subspaces
        cyc = iterate_vector(system, x0, IndexSchedule.cyclic(n), 500)
        assert cyc.errors[-1] <= 1e-6, name
        rnd = iterate_vector(system, x0, IndexSchedule.random(n, seed=17, coverage_window=n), 1000)
        assert rnd.errors[-1] <= 1e-6, name

    def test_per_vector_contraction_chain(self):
        # ||u_{j-1} - u_j||^2 <= ||u_{j-1}||^2 - ||Tx - P_M x||^2 per component
        rng = np.random.default_rng(123)
        systems = [s for _, s in convergence_corpus()]
        for draw in range(50):
            system = systems[draw % len(systems)]
            x = rng.standard_normal(system.ambient_dim)
            pmx = system.intersection_projector @ x
            u_prev = x - pmx
            y = x.copy()
            for p in system.projectors:
                y = p @ y
            t_gap_sq = np.linalg.norm(y - pmx) ** 2
            z = x.copy()
            for p in system.projectors:
                z_next = p @ z
                u_next = z_next - pmx
                lhs = np.linalg.norm(u_prev - u_next) ** 2
                rhs = np.linalg.norm(u_prev) ** 2 - t_gap_sq
                assert lhs <= rhs + 1e-8
                u_prev = u_next
                z = z_next
