"""
Unit tests for simplicial spaces: Segal conditions, homotopy categories and completeness.
"""

import pytest

from src import fincat, sset, sspace
from src.exceptions import DomainMismatch, NotSegal, OracleUnavailable


def zigzag():
    """a -> b <- c -> d, a connected category with no initial or terminal object."""
    arrows = [(f"id_{x}", x, x) for x in 'abcd'] + [('p', 'a', 'b'), ('q', 'c', 'b'), ('r', 'c', 'd')]
    composition = {}
    for a, s, t in arrows:
        composition[(f"id_{t}", a)] = a
        composition[(a, f"id_{s}")] = a
    return fincat.make_category('abcd', arrows, {x: f"id_{x}" for x in 'abcd'}, composition, name='zigzag')


def discrete_nerve(category, truncation=2):
    return sspace.discrete_levels(sset.nerve(category, truncation), truncation)


class TestConstructions:
    """Represented, discrete and constant spaces."""

    def test_h_space_validates(self):
        X = sspace.h_space(1, 2, 1).validate()
        assert X.outer_truncation == 2 and X.inner_truncation == 1
        assert X.counts() == [[2, 2], [3, 3], [4, 4]]

    def test_row_of_discrete_levels(self):
        assert sset.is_isomorphic(sspace.row(sspace.h_space(1, 2, 1), 0), sset.standard(1, 2))

    def test_constant_and_opposite_validate(self):
        sspace.constant_levels(sset.standard(1, 1), 2).validate()
        sspace.opposite(sspace.h_space(1, 2, 1)).validate()

    def test_product_with_terminal(self):
        P = sspace.space_product(sspace.h_space(0, 2, 1), sspace.h_space(1, 2, 1)).validate()
        assert P.counts() == sspace.h_space(1, 2, 1).counts()

    def test_coproduct_counts(self):
        X = sspace.space_coproduct(sspace.h_space(0, 2, 1), sspace.h_space(1, 2, 1)).validate()
        assert X.counts()[1] == [4, 4]

    def test_points_of_represented_space(self):
        maps = sspace.space_mapset(sspace.h_space(0, 2, 1), sspace.h_space(1, 2, 1))
        assert len(maps) == 2
        for f in maps:
            f.validate()


class TestSegal:
    """Strict and component-wise Segal conditions."""

    @pytest.mark.parametrize('mode', sspace.MODES)
    def test_represented_space_is_segal(self, mode):
        assert sspace.is_segal(sspace.h_space(1, 2, 1), mode)

    @pytest.mark.parametrize('mode', sspace.MODES)
    def test_horn_space_is_not_segal(self, mode):
        horn = sset.delete_cell(sset.standard(2, 2), 2, '012')
        verdict = sspace.is_segal(sspace.discrete_levels(horn, 1), mode)
        assert not verdict
        assert verdict.degree == 2

    def test_unknown_mode(self):
        with pytest.raises(DomainMismatch):
            sspace.is_segal(sspace.h_space(1, 2, 1), 'weak')

    def test_spine_comparison_is_not_strict(self):
        comparison = sspace.spine_comparison(2, 2)
        assert not comparison.isomorphism
        assert comparison.glued_counts[1] == 5
        assert comparison.simplex_counts[1] == 6

    def test_single_edge_spine(self):
        assert sspace.spine_comparison(1, 2).isomorphism


class TestHomotopyCategory:
    """Homotopy categories, invertible components and completeness."""

    @pytest.mark.parametrize('name', ['point', 'interval', 'bar_interval', 'linear(2)', 'Z/2'])
    def test_homotopy_category_of_discrete_nerve(self, named_categories, name):
        A = named_categories[name]
        H = sspace.homotopy_cat(discrete_nerve(A))
        assert fincat.is_isomorphic(H, A), f"Homotopy category of {name} has {len(H.arrows)} arrows"

    def test_needs_outer_degree_two(self):
        with pytest.raises(NotSegal):
            sspace.homotopy_cat(sspace.h_space(1, 1, 1))

    @pytest.mark.parametrize('name,complete', [
        ('point', True), ('interval', True), ('bar_interval', False), ('Z/2', False), ('discrete(2)', True),
    ])
    def test_discrete_nerve_complete_iff_gaunt(self, named_categories, name, complete):
        verdict = sspace.is_complete(discrete_nerve(named_categories[name]))
        assert bool(verdict) == complete, f"{name}: {verdict.details}"

    def test_nerve_mode_agrees(self, named_categories):
        for name in ['interval', 'bar_interval']:
            X = discrete_nerve(named_categories[name])
            assert bool(sspace.is_complete(X, 'nerve')) == bool(sspace.is_complete(X, 'pi0'))

    @pytest.mark.parametrize('name', ['interval', 'bar_interval', 'Z/2'])
    def test_classification_diagram_of_isomorphisms(self, named_categories, name):
        A = named_categories[name]
        X = sspace.classification_diagram(fincat.with_isomorphisms(A), 2, 2).validate()
        assert sspace.is_segal(X, 'strict')
        assert fincat.is_isomorphic(sspace.homotopy_cat(X), A)
        assert sspace.is_complete(X)
        assert sspace.is_homotopy_discrete(X.levels[0]) == fincat.is_rigid(A)

    def test_hoequiv_of_bar_interval(self):
        X = discrete_nerve(fincat.bar_interval())
        assert len(sspace.hoequiv_components(X)) == 4
        assert sspace.hoequiv(X).counts()[0] == 4


class TestEquivalences:
    """Equivalence modes, homotopy discreteness and zero-locality."""

    def test_nerve_mode_uses_categories(self):
        to_point = fincat.enumerate_functors(fincat.interval(), fincat.point())[0]
        f = sset.nerve_map(to_point, 2)
        assert sspace.is_equivalence(f, 'pi0')
        assert not sspace.is_equivalence(f, 'nerve')

    def test_bar_interval_to_point(self):
        witness = fincat.are_equivalent(fincat.bar_interval(), fincat.point()).witness
        assert sspace.is_equivalence(sset.nerve_map(witness, 2), 'nerve')

    def test_nerve_mode_needs_degree_two(self):
        with pytest.raises(OracleUnavailable):
            sspace.is_equivalence(sset.identity_map(sset.standard(1, 1)), 'nerve')

    def test_homotopy_discrete(self):
        assert sspace.is_homotopy_discrete(sset.discrete(['a', 'b'], 2))
        assert sspace.is_homotopy_discrete(sset.nerve(fincat.interval(), 2))
        assert not sspace.is_homotopy_discrete(sset.nerve(fincat.cyclic_group(2), 2))

    def test_homotopy_discrete_undecided(self):
        with pytest.raises(OracleUnavailable):
            sspace.is_homotopy_discrete(sset.nerve(zigzag(), 2))

    def test_zero_local(self):
        assert sspace.is_zero_local(sspace.constant_levels(sset.standard(1, 2), 2))
        verdict = sspace.is_zero_local(sspace.h_space(1, 2, 1))
        assert not verdict
        assert verdict.details['level'] == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
