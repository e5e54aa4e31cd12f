"""
Unit tests for finite categories, functors, pushouts and the interval search.
"""

import numpy as np
import pytest

from src import fincat
from src.exceptions import BudgetExceeded, InvalidStructure, NonTerminating


class TestBuiltins:
    """Builtin categories and their validation."""

    def test_linear_sizes(self):
        for n in range(5):
            A = fincat.linear(n)
            assert len(A.objects) == n + 1
            assert len(A.arrows) == (n + 1) * (n + 2) // 2, f"linear({n}) has {len(A.arrows)} arrows"

    def test_bar_interval_inverse(self):
        A = fincat.bar_interval()
        assert A.inverse('f') == 'g'
        assert A.compose('g', 'f') == 'id_x'

    def test_missing_composite_rejected(self):
        with pytest.raises(InvalidStructure) as exc:
            fincat.make_category(['x', 'y'], [('id_x', 'x', 'x'), ('id_y', 'y', 'y'), ('f', 'x', 'y')],
                                 {'x': 'id_x', 'y': 'id_y'},
                                 {('id_x', 'id_x'): 'id_x', ('id_y', 'id_y'): 'id_y', ('id_y', 'f'): 'f'})
        assert exc.value.location == {'pair': ['f', 'id_x']}

    def test_identity_must_be_endo(self):
        with pytest.raises(InvalidStructure):
            fincat.make_category(['x', 'y'], [('i', 'x', 'y')], {'x': 'i', 'y': 'i'}, {})

    def test_builtin_lookup(self):
        assert fincat.builtin('linear', 3) == fincat.linear(3)
        assert fincat.builtin('cyclic', 3).name == 'Z/3'


class TestRigidity:
    """Isomorphism classes, rigidity and gauntness."""

    @pytest.mark.parametrize('name,rigid,gaunt', [
        ('point', True, True),
        ('interval', True, True),
        ('bar_interval', True, False),
        ('Z/2', False, False),
        ('discrete(2)', True, True),
    ])
    def test_rigid_and_gaunt(self, named_categories, name, rigid, gaunt):
        A = named_categories[name]
        assert fincat.is_rigid(A) == rigid, f"{name}: rigid should be {rigid}"
        assert fincat.is_gaunt(A) == gaunt, f"{name}: gaunt should be {gaunt}"

    def test_isomorphism_classes(self):
        assert fincat.isomorphism_classes(fincat.bar_interval()) == [['x', 'y']]
        assert fincat.isomorphism_classes(fincat.interval()) == [['x'], ['y']]
        assert not fincat.is_skeletal(fincat.bar_interval())

    def test_core(self):
        assert len(fincat.core(fincat.bar_interval()).arrows) == 4
        assert len(fincat.core(fincat.interval()).arrows) == 2


class TestFunctors:
    """Functor enumeration and equivalences."""

    def test_functors_between_linear_orders(self):
        assert len(fincat.enumerate_functors(fincat.linear(1), fincat.linear(1))) == 3
        assert len(fincat.enumerate_functors(fincat.linear(2), fincat.linear(3))) == 20

    def test_functors_skip_object_maps_without_arrows(self):
        functors = fincat.enumerate_functors(fincat.interval(), fincat.discrete(2))
        assert [F.object_map for F in functors] == [{'x': x, 'y': x} for x in fincat.discrete(2).objects]

    def test_functor_budget(self):
        with pytest.raises(BudgetExceeded):
            fincat.enumerate_functors(fincat.linear(3), fincat.linear(3), budget=10)

    def test_bar_interval_equivalent_to_point(self):
        result = fincat.are_equivalent(fincat.bar_interval(), fincat.point())
        assert result.equivalent
        assert result.witness.is_equivalence()

    def test_interval_not_equivalent_to_two_points(self):
        assert not fincat.are_equivalent(fincat.interval(), fincat.discrete(2))

    def test_functor_validation(self):
        A, B = fincat.interval(), fincat.point()
        bad = fincat.Functor(A, B, {'x': '*', 'y': '*'}, {'id_x': 'id_*', 'id_y': 'id_*'})
        with pytest.raises(InvalidStructure):
            bad.validate()

    def test_opposite_of_linear(self):
        witness = fincat.find_isomorphism(fincat.opposite(fincat.linear(3)), fincat.linear(3))
        assert witness is not None and witness.is_isomorphism()


class TestPushouts:
    """Pushouts of categories along object identifications."""

    @pytest.mark.parametrize('n', range(1, 6))
    def test_spine_pushout_is_linear(self, n):
        glued = fincat.spine_pushout(n)
        assert fincat.is_isomorphic(glued, fincat.linear(n)), \
            f"spine pushout of {n} edges has {len(glued.objects)} objects, {len(glued.arrows)} arrows"

    def test_parallel_arrows(self):
        glued = fincat.pushout_over_objects(fincat.interval(), fincat.interval(), [('x', 'x'), ('y', 'y')])
        assert len(glued.objects) == 2
        assert len(glued.arrows) == 4

    def test_injections_are_functors(self):
        result = fincat.pushout_injections(fincat.interval(), fincat.interval(), [('y', 'x')])
        assert result.left.object_map['y'] == result.right.object_map['x']
        assert fincat.is_isomorphic(result.category, fincat.linear(2))

    def test_loop_does_not_terminate(self):
        with pytest.raises(NonTerminating):
            fincat.pushout_over_objects(fincat.interval(), fincat.interval(), [('x', 'y'), ('y', 'x')],
                                        budget=50)


class TestRelativeCategories:
    """Relative categories and their random generation."""

    def test_weak_equivalences_contain_identities(self):
        with pytest.raises(InvalidStructure):
            fincat.RelCategory(fincat.interval(), {'f'}).validate()

    def test_with_isomorphisms(self):
        assert fincat.with_isomorphisms(fincat.bar_interval()).weq == {'id_x', 'id_y', 'f', 'g'}
        assert fincat.with_isomorphisms(fincat.interval()).weq == {'id_x', 'id_y'}

    def test_random_relcategory_is_seeded(self):
        first = fincat.random_relcategory(np.random.default_rng(5), 3)
        second = fincat.random_relcategory(np.random.default_rng(5), 3)
        assert first == second
        assert len(first.base.objects) <= 3


class TestCorpus:
    """Exhaustive corpus and the interval characterization."""

    def test_monoids_of_order_two(self):
        corpus = fincat.generate_corpus(1, 2)
        assert len(corpus) == 4, f"Expected empty, point and two monoids of order 2, got {corpus}"
        assert [A.name for A in corpus] == ['cat000', 'cat001', 'cat002', 'cat003']

    def test_corpus_is_up_to_isomorphism(self, small_corpus):
        for i, A in enumerate(small_corpus):
            for B in small_corpus[i + 1:]:
                if len(A.arrows) == len(B.arrows) and len(A.objects) == len(B.objects):
                    assert not fincat.is_isomorphic(A, B), f"{A.name} and {B.name} are isomorphic"

    def test_corpus_contains_intervals(self, small_corpus):
        assert any(fincat.is_isomorphic(A, fincat.interval()) for A in small_corpus)
        assert any(fincat.is_isomorphic(A, fincat.bar_interval()) for A in small_corpus)

    def test_interval_properties(self):
        props = fincat.interval_properties(fincat.interval())
        assert props.matches, f"I should match, got subobjects {props.subobject_classes}"
        assert not fincat.interval_properties(fincat.bar_interval()).matches
        assert not fincat.interval_properties(fincat.linear(2)).matches

    def test_segal_subobjects_of_interval(self):
        assert len(fincat.segal_subobjects(fincat.interval())) == 4


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
