"""
Unit tests for truncated simplicial sets: constructions, maps, limits and Segal checks.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src import fincat, sset
from src.exceptions import DomainMismatch, IllFormedQuotient, InvalidStructure, NotSegal
from src.sset import SSetMap


class TestConstructions:
    """Standard simplices, nerves and their structure tables."""

    def test_standard_counts(self, edge):
        assert edge.counts() == (2, 3, 4), f"standard(1, 2) has counts {edge.counts()}"
        edge.validate()

    def test_standard_faces_are_targets_first(self, edge):
        assert edge.faces[1]['01'] == ('1', '0')
        assert edge.nondegenerate(1) == ('01',)

    def test_nerve_counts(self):
        X = sset.nerve(fincat.bar_interval(), 2)
        assert X.counts() == (2, 4, 8)
        X.validate()

    def test_nerve_cell_labels(self):
        X = sset.nerve(fincat.linear(2), 2)
        assert X.cells[0] == ('0', '1', '2')
        assert '0->1|1->2' in X.cells[2]
        assert X.faces[2]['0->1|1->2'] == ('1->2', '0->2', '0->1')

    def test_nerve_rejects_separator_in_ids(self):
        A = fincat.make_category(['x'], [('a|b', 'x', 'x')], {'x': 'a|b'}, {('a|b', 'a|b'): 'a|b'})
        with pytest.raises(DomainMismatch):
            sset.nerve(A, 2)

    def test_broken_identity_located(self, broken_sset):
        with pytest.raises(InvalidStructure) as exc:
            broken_sset.validate()
        assert exc.value.location == {'degree': 0, 'cell': '0', 'identity': 'd0s0'}

    def test_truncate(self):
        assert sset.truncate(sset.standard(2, 3), 2) == sset.standard(2, 2)
        with pytest.raises(DomainMismatch):
            sset.truncate(sset.standard(2, 1), 2)

    def test_opposite_nerve(self):
        A = fincat.linear(2)
        assert sset.is_isomorphic(sset.nerve(fincat.opposite(A), 2), sset.opposite(sset.nerve(A, 2)))

    def test_act_reads_vertices(self):
        X = sset.standard(2, 2)
        assert X.vertices(2, '012') == ('0', '1', '2')
        assert X.vertices(1, '02') == ('0', '2')


class TestSubsets:
    """Restriction, deletion and enumeration of simplicial subsets."""

    def test_subsets_of_edge(self):
        subsets = sset.simplicial_subsets(sset.standard(1, 1))
        assert len(subsets) == 5, f"Expected 5 subsets of the 1-simplex, got {len(subsets)}"

    def test_restrict_requires_closure(self):
        X = sset.standard(1, 1)
        with pytest.raises(InvalidStructure):
            sset.restrict(X, [{'0'}, {'00', '01'}])

    def test_delete_degenerate_rejected(self):
        with pytest.raises(DomainMismatch):
            sset.delete_cell(sset.standard(1, 2), 1, '00')

    def test_delete_top_cell(self):
        X = sset.delete_cell(sset.standard(2, 2), 2, '012')
        assert '012' not in X.cells[2]
        X.validate()


class TestMaps:
    """Map search, isomorphisms and the Yoneda count."""

    @pytest.mark.parametrize('name,expected', [('interval', 3), ('bar_interval', 4), ('linear(2)', 6)])
    def test_maps_from_edge_are_edges(self, named_categories, name, expected):
        X = sset.nerve(named_categories[name], 2)
        maps = sset.mapset(sset.standard(1, 2), X)
        assert len(maps) == expected == len(X.cells[1])
        for m in maps:
            m.validate()

    def test_mapset_is_sorted(self, edge):
        keys = [m.key() for m in sset.mapset(edge, edge)]
        assert keys == sorted(keys)

    def test_nerve_of_linear_is_standard(self):
        witness = sset.find_isomorphism(sset.standard(1, 2), sset.nerve(fincat.linear(1), 2))
        assert witness is not None and witness.is_isomorphism()

    def test_cell_as_map(self):
        X = sset.nerve(fincat.linear(2), 2)
        m = sset.cell_as_map(X, 1, '0->2').validate()
        assert m(0, '0') == '0' and m(0, '1') == '2'

    def test_nerve_map_validates(self):
        functor = fincat.are_equivalent(fincat.bar_interval(), fincat.point()).witness
        sset.nerve_map(functor, 2).validate()

    @pytest.mark.parametrize('source,target', [('Z/2', 'bar_interval'), ('linear(2)', 'interval'),
                                               ('interval', 'discrete(2)')])
    def test_maps_between_nerves_agree_with_search(self, named_categories, source, target):
        X, Y = sset.nerve(named_categories[source], 2), sset.nerve(named_categories[target], 2)
        searched = sset.search_maps(sset.presentation(X), sset.presentation(Y), 10 ** 6)
        expected = sorted(SSetMap(X, Y, tuple(r[k] for k in range(3))).key() for r in searched)
        assert [m.key() for m in sset.mapset(X, Y)] == expected
        for m in sset.mapset(X, Y):
            m.validate()

    def test_isomorphism_between_nerves(self):
        X = sset.nerve(fincat.bar_interval(), 3)
        Y = sset.nerve(fincat.opposite(fincat.bar_interval()), 3)
        witness = sset.find_isomorphism(X, Y)
        assert witness is not None and witness.validate().is_isomorphism()
        assert not sset.is_isomorphic(sset.nerve(fincat.interval(), 2), sset.nerve(fincat.discrete(2), 2))

    def test_mismatched_truncations(self):
        with pytest.raises(DomainMismatch):
            sset.mapset(sset.standard(1, 1), sset.standard(1, 2))


class TestLimitsAndColimits:
    """Products, pullbacks, coproducts, coequalizers and internal homs."""

    def test_product_of_edges(self):
        P, first, second = sset.product_projections(sset.standard(1, 1), sset.standard(1, 1))
        assert P.counts() == (4, 9)
        first.validate()
        second.validate()

    def test_coequalizer_of_endpoints(self):
        X = sset.standard(1, 1)
        f, g = sset.cell_as_map(X, 0, '0'), sset.cell_as_map(X, 0, '1')
        Q, q = sset.coequalizer_with_map(f, g)
        assert Q.counts() == (1, 2), f"Identifying the endpoints gives {Q.counts()}"
        Q.validate()
        q.validate()

    def test_ill_formed_quotient(self):
        with pytest.raises(IllFormedQuotient):
            sset.quotient(sset.standard(1, 1), [[], [('00', '01')]])

    def test_pullback_of_distinct_vertices_is_empty(self):
        X = sset.standard(1, 1)
        P = sset.pullback(sset.cell_as_map(X, 0, '0'), sset.cell_as_map(X, 0, '1'))
        assert P.is_empty

    def test_coproduct_components(self):
        X = sset.coproduct(sset.point(2), sset.standard(1, 2))
        assert X.counts() == (3, 4, 5)
        assert sset.pi0(X) == [['0:0'], ['1:0', '1:1']]

    def test_internal_hom_from_point(self):
        H = sset.internal_hom(sset.point(1), sset.standard(1, 1))
        assert H.counts() == (2, 3)
        H.validate()

    @pytest.mark.parametrize('truncation', [2, -1])
    def test_internal_hom_truncation_out_of_range(self, truncation):
        with pytest.raises(DomainMismatch, match='0..1'):
            sset.internal_hom(sset.point(1), sset.standard(1, 2), truncation)


class TestSegal:
    """Strict Segal condition and the fundamental category."""

    def test_nerves_are_segal(self, named_categories):
        for name, A in named_categories.items():
            assert sset.is_strict_segal(sset.nerve(A, 3)), f"nerve of {name} should be strict Segal"

    def test_horn_is_not_segal(self):
        X = sset.delete_cell(sset.standard(2, 2), 2, '012')
        result = sset.is_strict_segal(X)
        assert not result
        assert result.degree == 2
        assert result.witness['reason'] == 'spine without filler'

    def test_fundamental_category_needs_degree_two(self):
        with pytest.raises(NotSegal):
            sset.fundamental_category(sset.standard(1, 1))

    def test_fundamental_category_of_non_segal(self):
        with pytest.raises(NotSegal):
            sset.fundamental_category(sset.delete_cell(sset.standard(2, 2), 2, '012'))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_nerve_round_trip_on_random_preorders(self, seed):
        A = fincat.random_preorder(np.random.default_rng(seed), 3)
        assert sset.fundamental_category(sset.nerve(A, 2)) == A


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
