"""
Unit tests for the simplex category: enumeration, generators and automorphisms.
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src import simplex
from src.exceptions import BudgetExceeded, DomainMismatch, IndexOutOfRange
from src.simplex import SimplexMap


def brute_force_maps(n, m):
    return [images for images in itertools.product(range(m + 1), repeat=n + 1)
            if all(a <= b for a, b in zip(images, images[1:]))]


@st.composite
def simplex_maps(draw, max_degree=4):
    n = draw(st.integers(0, max_degree))
    m = draw(st.integers(0, max_degree))
    images = sorted(draw(st.lists(st.integers(0, m), min_size=n + 1, max_size=n + 1)))
    return SimplexMap(n, m, tuple(images))


class TestEnumeration:
    """Hom-sets of the simplex category."""

    def test_three_endomorphisms_of_one(self):
        maps = simplex.enumerate_maps(1, 1)
        assert [str(f) for f in maps] == ['1->1:[0,0]', '1->1:[0,1]', '1->1:[1,1]'], \
            f"Unexpected endomorphisms of [1]: {maps}"

    @pytest.mark.parametrize('n,m', [(n, m) for n in range(6) for m in range(6)])
    def test_counts_match_brute_force(self, n, m):
        maps = simplex.enumerate_maps(n, m)
        expected = brute_force_maps(n, m)
        assert [f.images for f in maps] == expected, f"Hom([{n}],[{m}]) differs from brute force"
        assert simplex.count_maps(n, m) == len(expected)

    def test_two_three_count(self):
        assert simplex.count_maps(2, 3) == 20

    def test_budget_exceeded(self):
        with pytest.raises(BudgetExceeded):
            simplex.enumerate_maps(5, 5, budget=10)

    def test_negative_degree_rejected(self):
        with pytest.raises(IndexOutOfRange):
            simplex.enumerate_maps(-1, 2)


class TestSimplexMap:
    """Construction, parsing and composition of monotone maps."""

    def test_parse_text_form(self):
        assert SimplexMap.parse('2->3:[0,2,2]') == SimplexMap(2, 3, (0, 2, 2))
        assert str(SimplexMap.parse(' 1 -> 1 : [0, 1] ')) == '1->1:[0,1]'

    @pytest.mark.parametrize('text', ['bad', '1->1:[1,0]', '1->1:[0]', '0->0:[1]'])
    def test_parse_rejects_malformed(self, text):
        with pytest.raises(DomainMismatch):
            SimplexMap.parse(text)

    def test_generators(self):
        assert simplex.coface(1, 2).images == (0, 2)
        assert simplex.codegeneracy(0, 1).images == (0, 0, 1)
        assert simplex.se(1, 3).images == (1, 2)
        with pytest.raises(IndexOutOfRange):
            simplex.coface(3, 2)
        with pytest.raises(IndexOutOfRange):
            simplex.codegeneracy(2, 1)

    def test_compose_mismatch(self):
        with pytest.raises(DomainMismatch):
            simplex.compose(simplex.identity(1), simplex.identity(2))

    def test_cosimplicial_identities_hold(self):
        violations = simplex.cosimplicial_identity_violations(4)
        assert violations == [], f"Cosimplicial identities violated: {violations}"

    @settings(max_examples=200, deadline=None)
    @given(simplex_maps())
    def test_factorization_recomposes(self, f):
        word = simplex.factorize(f)
        assert simplex.word_to_map(word, f.domain) == f, f"{simplex.format_word(word)} does not give {f}"

    @settings(max_examples=100, deadline=None)
    @given(simplex_maps())
    def test_reversal_is_involution(self, f):
        assert simplex.reverse_map(simplex.reverse_map(f)) == f

    def test_identity_word(self):
        assert simplex.format_word(simplex.factorize(simplex.identity(3))) == 'id'


class TestAutomorphisms:
    """Object-fixing automorphisms of the truncated simplex category."""

    @pytest.fixture(scope='class')
    def autos(self):
        return simplex.automorphisms(4)

    def test_identity_and_reversal(self, autos):
        assert [a.name for a in autos] == ['identity', 'reversal'], f"Found {[a.name for a in autos]}"

    def test_square_to_identity(self, autos):
        for a in autos:
            assert a.compose(a).is_identity, f"{a.name} does not square to the identity"

    def test_reversal_conjugates_maps(self, autos):
        reversal = autos[1]
        for f in simplex.enumerate_maps(2, 3):
            assert reversal.apply(f) == simplex.reverse_map(f)

    def test_degree_cap(self):
        with pytest.raises(BudgetExceeded):
            simplex.automorphisms(5)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
