"""
Unit tests for realizations, diagonals, path objects and nerves of maps.
"""

import numpy as np
import pytest

from src import fincat, realization, sset, sspace
from src.exceptions import BudgetExceeded
from src.sspace import SpaceMap


def identity_space_map(X):
    mapping = {(n, k): {c: c for c in X.levels[n].cells[k]}
               for n in range(X.outer_truncation + 1) for k in range(X.inner_truncation + 1)}
    return SpaceMap(X, X, mapping)


class TestRealization:
    """Realization of simplicial spaces and its comparison with the diagonal."""

    def test_represented_space_realizes_to_simplex(self):
        real = realization.realize(sspace.h_space(1, 2, 2))
        real.validate()
        assert sset.is_isomorphic(real, sset.standard(1, 2)), f"Realization has counts {real.counts()}"

    def test_constant_space_realizes_to_its_level(self):
        K = sset.nerve(fincat.interval(), 2)
        assert sset.is_isomorphic(realization.realize(sspace.constant_levels(K, 2)), K)

    def test_diagonal_of_discrete_levels(self):
        K = sset.nerve(fincat.bar_interval(), 2)
        assert sset.is_isomorphic(realization.diagonal(sspace.discrete_levels(K, 2)), K)

    def test_comparison_on_random_spaces(self, rng):
        for index in range(5):
            X = realization.random_space(rng, 2, 2, 20)
            comparison = realization.comparison_to_diagonal(X)
            assert comparison.is_isomorphism(), \
                f"Space {index} with counts {X.counts()}: realization {comparison.source.counts()}"

    def test_comparison_on_nontrivial_random_spaces(self, rng):
        for index in range(20):
            X = realization.random_space(rng, 2, 2, 20, nontrivial=True)
            assert not realization.is_trivial_space(X), f"Space {index} is trivial: {X.counts()}"
            assert realization.comparison_to_diagonal(X).is_isomorphism(), f"Space {index}: {X.counts()}"

    def test_random_space_respects_cell_bound(self, rng):
        for _ in range(20):
            X = realization.random_space(rng, 2, 2, 6)
            assert max(count for level in X.counts() for count in level) <= 6

    def test_random_space_gives_up(self, rng):
        with pytest.raises(BudgetExceeded):
            realization.random_space(rng, 2, 2, 0)

    def test_trivial_space(self):
        assert realization.is_trivial_space(sspace.h_space(0, 2, 2))
        assert not realization.is_trivial_space(sspace.h_space(1, 2, 2))

    def test_random_space_is_seeded(self):
        first = realization.random_space(np.random.default_rng(7), 2, 2, 20)
        second = realization.random_space(np.random.default_rng(7), 2, 2, 20)
        assert first == second

    def test_level_zero_inclusion(self):
        X = sspace.h_space(1, 2, 2)
        realization.level_zero_inclusion(X).validate()

    def test_realize_identity_map(self):
        X = sspace.classification_diagram(fincat.with_isomorphisms(fincat.bar_interval()), 2, 2)
        F = identity_space_map(X).validate()
        assert realization.realize_map(F).is_isomorphism()


class TestPathObjects:
    """Path objects and the fiber product built from them."""

    def test_path_object_of_point(self):
        path = realization.path_object(sset.point(1))
        assert path.space.counts() == (1, 1)
        path.endpoints.validate()

    def test_path_object_endpoints_of_edge(self):
        path = realization.path_object(sset.standard(1, 1))
        endpoints = {path.endpoints(0, c) for c in path.space.cells[0]}
        assert endpoints == {'(0,0)', '(0,1)', '(1,1)'}

    def test_fiber_product_of_identities(self):
        point = sset.point(1)
        identity = sset.identity_map(point)
        assert realization.c_fiber_product(identity, identity).counts() == (1, 1)


class TestNerveComparison:
    """Nerves of level-0 inclusions and the weak category comparison."""

    def test_nerve_of_identity_on_point(self):
        C = realization.c_nerve(sset.identity_map(sset.point(1)), outer=1).validate()
        assert C.counts() == [[1, 1], [1, 1]]

    @pytest.mark.parametrize('name', ['point', 'interval'])
    def test_weak_category_comparison(self, named_categories, name):
        result = realization.weak_category_comparison(named_categories[name], 2, 2)
        assert result.passed, f"{name}: {result.levels} {result.note}"
        assert len(result.levels) == 3


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
