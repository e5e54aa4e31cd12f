"""Shared fixtures for the SegalKit test suite."""

import numpy as np
import pytest

from src import fincat, sset


@pytest.fixture(scope='session')
def small_corpus():
    """Every category with at most 2 objects and 5 arrows, up to isomorphism."""
    return fincat.generate_corpus(2, 5)


@pytest.fixture
def named_categories():
    return {
        'point': fincat.point(),
        'interval': fincat.interval(),
        'bar_interval': fincat.bar_interval(),
        'linear(2)': fincat.linear(2),
        'discrete(2)': fincat.discrete(2),
        'Z/2': fincat.cyclic_group(2),
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def edge():
    """The standard 1-simplex truncated at degree 2."""
    return sset.standard(1, 2)


@pytest.fixture
def broken_sset():
    """standard(1, 1) with s0 of vertex 0 pointing at the nondegenerate edge."""
    X = sset.standard(1, 1)
    degens = (dict(X.degens[0], **{'0': ('01',)}), X.degens[1])
    return sset.FinSSet(X.truncation, X.cells, X.faces, degens)
