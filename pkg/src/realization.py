"""Realization, diagonal, path objects and nerves for the cosimplicial object n -> Δ^n.

A realization is the coend of n -> Δ^n × X_n. It is computed as a quotient of
the disjoint union of the products, glued along the generating cofaces and
codegeneracies only.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional

from src import fincat, sset, sspace
from src.exceptions import BudgetExceeded, InvalidStructure, OracleUnavailable
from src.simplex import codegeneracy, coface, compose, enumerate_maps, identity, vertex
from src.sset import FinSSet, SSetMap, pair_label, simplex_label
from src.sspace import SpaceMap
from src.utils import get_setting

logger = logging.getLogger(__name__)


def _piece(n, a_label, x):
    return f"{n}:{pair_label(a_label, x)}"


@dataclass(frozen=True)
class Realization:
    space: FinSSet
    source: FinSSet
    quotient: SSetMap
    truncation: int
    pieces: tuple

    def class_of(self, n, k, theta, x):
        """The cell of the realization represented by (θ, x) with θ: [k] -> [n], x in X_{n,k}."""
        return self.quotient.mapping[k][_piece(n, simplex_label(theta.images), x)]


def realization(X):
    """Realize X with the bookkeeping needed by the comparison maps."""
    N, D = X.outer_truncation, X.inner_truncation
    T = min(N, D)
    parts = [sset.product(sset.standard(n, T), sset.truncate(X.levels[n], T)) for n in range(N + 1)]
    glued, _ = sset.coproduct_family(parts)

    pairs = [[] for _ in range(T + 1)]
    for k in range(T + 1):
        for n in range(1, N + 1):
            for i in range(n + 1):
                theta = coface(i, n)
                face = X.faces[n][i].mapping[k]
                for a in enumerate_maps(k, n - 1):
                    pushed = simplex_label(compose(a, theta).images)
                    for x in X.levels[n].cells[k]:
                        pairs[k].append((_piece(n, pushed, x), _piece(n - 1, simplex_label(a.images), face[x])))
        for n in range(N):
            for i in range(n + 1):
                theta = codegeneracy(i, n)
                degen = X.degens[n][i].mapping[k]
                for a in enumerate_maps(k, n + 1):
                    pushed = simplex_label(compose(a, theta).images)
                    for x in X.levels[n].cells[k]:
                        pairs[k].append((_piece(n, pushed, x), _piece(n + 1, simplex_label(a.images), degen[x])))

    quotient, q = sset.quotient(glued, pairs)
    pieces = tuple({_piece(n, simplex_label(a.images), x): (n, a, x)
                    for n in range(N + 1) for a in enumerate_maps(k, n) for x in X.levels[n].cells[k]}
                   for k in range(T + 1))

    # name each class after its representative (id_k, y) with y in X_{k,k}
    names = []
    for k in range(T + 1):
        level = {}
        ident = simplex_label(identity(k).images)
        for y in X.levels[k].cells[k]:
            level.setdefault(q.mapping[k][_piece(k, ident, y)], f"[{y}]")
        names.append(level)
    renamed, r = sset.rename(quotient, names)
    logger.debug(f"Realized {X!r}: {glued.counts()} cells glued into {renamed.counts()}")
    return Realization(renamed, glued, q.then(r), T, pieces)


def realize(X):
    return realization(X).space


def diagonal(X):
    """Degree-n cells are the degree-n cells of level n; structure maps act on both sides."""
    T = min(X.outer_truncation, X.inner_truncation)
    cells = [X.levels[n].cells[n] for n in range(T + 1)]

    def face(n, x, i):
        return X.faces[n][i].mapping[n - 1][X.levels[n].faces[n][x][i]]

    def degen(n, x, i):
        return X.degens[n][i].mapping[n + 1][X.levels[n].degens[n][x][i]]

    return sset.from_functions(T, cells, face, degen)


def _induced_on_classes(real, target, image_of):
    """Map each class of the realization through image_of(n, k, θ, x), checking single-valuedness."""
    mapping = []
    for k in range(real.truncation + 1):
        level = {}
        for cell, (n, theta, x) in real.pieces[k].items():
            image = image_of(n, k, theta, x)
            name = real.quotient.mapping[k][cell]
            if level.setdefault(name, image) != image:
                raise InvalidStructure(f"Induced map is not well defined on class {name}",
                                       {'degree': k, 'cell': name})
        mapping.append(level)
    return SSetMap(real.space, target, tuple(mapping)).validate()


def comparison_to_diagonal(X):
    """The canonical map realize(X) -> diagonal(X), (θ, x) -> θ*x."""
    return _induced_on_classes(realization(X), diagonal(X),
                               lambda n, k, theta, x: X.outer_act(x, n, k, theta))


def level_zero_inclusion(X, real=None):
    """The canonical map from level 0 into the realization."""
    real = real or realization(X)
    level0 = sset.truncate(X.levels[0], real.truncation)
    mapping = tuple({x: real.quotient.mapping[k][_piece(0, '0' * (k + 1), x)] for x in level0.cells[k]}
                    for k in range(real.truncation + 1))
    return SSetMap(level0, real.space, mapping)


def realize_map(F):
    """realize(F) for a map of simplicial spaces."""
    source, target = realization(F.source), realization(F.target)
    return _induced_on_classes(source, target.space,
                               lambda n, k, theta, x: target.class_of(n, k, theta, F.mapping[(n, k)][x]))


# -- path objects and fiber products ----------------------------------------------------------------

@dataclass(frozen=True)
class PathObject:
    space: FinSSet
    endpoints: SSetMap
    maps: tuple


def _endpoint_cell(j, k):
    return pair_label(simplex_label((j,) * (k + 1)), simplex_label(tuple(range(k + 1))))


def path_object(Z, budget=None):
    """internal_hom(Δ^1, Z) with its endpoint map to Z × Z."""
    hom = sset.internal_hom_with_maps(sset.standard(1, Z.truncation), Z, budget=budget)
    target = sset.product(Z, Z)
    mapping = tuple({label: pair_label(phi.mapping[k][_endpoint_cell(0, k)], phi.mapping[k][_endpoint_cell(1, k)])
                     for label, phi in hom.maps[k].items()}
                    for k in range(Z.truncation + 1))
    return PathObject(hom.space, SSetMap(hom.space, target, mapping), hom.maps)


def c_fiber_product(f, g, budget=None):
    """(X × Y) ×_{Z × Z} internal_hom(Δ^1, Z) for f: X -> Z and g: Y -> Z."""
    path = path_object(f.target, budget)
    return sset.pullback(sset.product_map(f, g), path.endpoints)


# -- nerves of maps --------------------------------------------------------------------------------

def _column(phi, i, j):
    return phi.mapping[j][_endpoint_cell(i, j)]


def _nerve_label(xis, phi_label):
    return f"({','.join(xis)};{phi_label})"


@lru_cache(maxsize=None)
def _simplex_product(n, j, truncation):
    return sset.product(sset.standard(n, truncation), sset.standard(j, truncation))


def _precompose_simplex(phi, theta, j, truncation, target):
    """phi ∘ (θ × id): Δ^m × Δ^j -> target for phi: Δ^n × Δ^j -> target and θ: [m] -> [n]."""
    m = theta.domain
    source = _simplex_product(m, j, truncation)
    mapping = []
    for r in range(truncation + 1):
        level = {}
        for a in enumerate_maps(r, m):
            pushed = simplex_label(compose(a, theta).images)
            for b in enumerate_maps(r, j):
                b_label = simplex_label(b.images)
                level[pair_label(simplex_label(a.images), b_label)] = phi.mapping[r][pair_label(pushed, b_label)]
        mapping.append(level)
    return SSetMap(source, target, tuple(mapping))


def c_nerve(p, outer=None, budget=None):
    """Level n: tuples (ξ_0..ξ_n) of cells of X with a map φ: Δ^n × Δ^j -> Y whose vertex columns are p(ξ_i)."""
    outer = get_setting('truncation', 'outer') if outer is None else outer
    X, Y = p.source, p.target
    D = Y.truncation
    fibers = [{} for _ in range(D + 1)]
    for j in range(D + 1):
        for x in X.cells[j]:
            fibers[j].setdefault(p.mapping[j][x], []).append(x)

    homs = [sset.internal_hom_with_maps(sset.standard(n, D), Y, budget=budget) for n in range(outer + 1)]
    levels, parts = [], []
    for n in range(outer + 1):
        cells, decoded = [], []
        for j in range(D + 1):
            level_cells, level_decoded = [], {}
            for phi_label, phi in homs[n].maps[j].items():
                columns = [fibers[j].get(_column(phi, i, j), []) for i in range(n + 1)]
                for xis in itertools.product(*columns):
                    label = _nerve_label(xis, phi_label)
                    level_cells.append(label)
                    level_decoded[label] = (xis, phi_label)
            cells.append(level_cells)
            decoded.append(level_decoded)
        ih = homs[n].space

        def face(j, c, i, decoded=decoded, ih=ih):
            xis, phi = decoded[j][c]
            return _nerve_label([X.faces[j][x][i] for x in xis], ih.faces[j][phi][i])

        def degen(j, c, i, decoded=decoded, ih=ih):
            xis, phi = decoded[j][c]
            return _nerve_label([X.degens[j][x][i] for x in xis], ih.degens[j][phi][i])

        levels.append(sset.from_functions(D, cells, face, degen))
        parts.append(decoded)

    cache = {}

    def outer_map(theta):
        if theta in cache:
            return cache[theta]
        m, n = theta.domain, theta.codomain
        mapping = []
        for j in range(D + 1):
            level = {}
            for c, (xis, phi_label) in parts[n][j].items():
                moved = _precompose_simplex(homs[n].maps[j][phi_label], theta, j, D, Y)
                level[c] = _nerve_label([xis[theta.images[t]] for t in range(m + 1)], moved.label())
            mapping.append(level)
        cache[theta] = mapping
        return mapping

    return sspace.from_level_maps(
        levels,
        lambda n, i, k: outer_map(coface(i, n))[k],
        lambda n, i, k: outer_map(codegeneracy(i, n))[k],
        {'construction': 'c_nerve', 'outer': outer, 'inner': D},
    )


# -- weak category comparison -----------------------------------------------------------------------

@dataclass
class NerveComparison:
    """Outcome of comparing a space with the nerve of its level-0 inclusion."""

    passed: bool
    levels: List[Dict] = field(default_factory=list)
    note: Optional[str] = None


def canonical_nerve_map(X, real=None, nerve_space=None):
    """X -> c_nerve(X_0 -> realize(X)), z -> (vertices of z; (a, b) -> [a, b*z])."""
    real = real or realization(X)
    p = level_zero_inclusion(X, real)
    C = nerve_space or c_nerve(p, X.outer_truncation)
    D = real.truncation
    mapping = {}
    for n in range(X.outer_truncation + 1):
        for j in range(D + 1):
            level = {}
            source = _simplex_product(n, j, D)
            for z in X.levels[n].cells[j]:
                xis = [X.outer_act(z, n, j, vertex(i, n)) for i in range(n + 1)]
                phi = []
                for r in range(D + 1):
                    cells = {}
                    for a in enumerate_maps(r, n):
                        for b in enumerate_maps(r, j):
                            pulled = X.levels[n].act(z, j, b)
                            cells[pair_label(simplex_label(a.images), simplex_label(b.images))] = \
                                real.class_of(n, r, a, pulled)
                    phi.append(cells)
                level[z] = _nerve_label(xis, SSetMap(source, real.space, tuple(phi)).label())
            mapping[(n, j)] = level
    return SpaceMap(X, C, mapping), C


def compare_with_nerve(X, mode='nerve'):
    """Check that the canonical map into the nerve of the level-0 inclusion is a levelwise equivalence."""
    real = realization(X)
    try:
        F, C = canonical_nerve_map(X, real)
        F.validate()
    except (KeyError, InvalidStructure) as exc:
        return NerveComparison(False, note=f"canonical map undefined: {exc}")
    result = NerveComparison(True)
    for n in range(X.outer_truncation + 1):
        level_map = F.level(n)
        entry = {'level': n, 'source': list(level_map.source.counts()), 'target': list(level_map.target.counts())}
        try:
            verdict = sspace.is_equivalence(level_map, mode)
            entry.update({'equivalence': verdict.passed, 'mode': mode})
        except OracleUnavailable:
            verdict = sspace.is_equivalence(level_map, 'pi0')
            entry.update({'equivalence': verdict.passed, 'mode': 'pi0'})
        result.levels.append(entry)
        result.passed = result.passed and verdict.passed
    return result


def weak_category_comparison(category, outer=None, inner=None):
    """The comparison for the discrete space of a category's nerve."""
    outer = get_setting('truncation', 'a5_outer') if outer is None else outer
    inner = get_setting('truncation', 'a5_inner') if inner is None else inner
    X = sspace.discrete_levels(sset.nerve(category, outer), inner)
    return compare_with_nerve(X)


# -- random spaces ---------------------------------------------------------------------------------

MAX_DRAWS = 1000


def _draw_sset(rng, truncation):
    kind = int(rng.integers(0, 5))
    if kind == 0:
        return sset.standard(int(rng.integers(0, 3)), truncation)
    if kind == 1:
        return sset.nerve(fincat.random_preorder(rng, 3), truncation)
    if kind == 2:
        return sset.nerve(fincat.cyclic_group(int(rng.integers(1, 3))), truncation)
    if kind == 3:
        return sset.discrete([f"e{i}" for i in range(int(rng.integers(1, 4)))], truncation)
    return sset.coproduct(sset.standard(1, truncation), sset.standard(0, truncation))


def random_sset(rng, truncation, max_cells):
    """A small random simplicial set built from the stock constructions, redrawn until it fits."""
    for _ in range(MAX_DRAWS):
        X = _draw_sset(rng, truncation)
        if max(X.counts()) <= max_cells:
            return X
    raise BudgetExceeded(f"random simplicial sets with at most {max_cells} cells per degree", MAX_DRAWS)


def _draw_space(rng, outer, inner, max_cells):
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return sspace.discrete_levels(random_sset(rng, outer, max_cells), inner)
    if kind == 1:
        return sspace.constant_levels(random_sset(rng, inner, max_cells), outer)
    if kind == 2:
        return sspace.classification_diagram(fincat.random_relcategory(rng, 2), outer, inner)
    left = sspace.discrete_levels(random_sset(rng, outer, max_cells), inner)
    right = sspace.constant_levels(random_sset(rng, inner, max_cells), outer)
    return sspace.space_product(left, right)


def is_trivial_space(X):
    """At most one cell in every level and inner degree."""
    return all(count <= 1 for level in X.counts() for count in level)


def random_space(rng, outer, inner, max_cells, nontrivial=False):
    """A random simplicial space: discrete, constant, classification diagram or a product of two.

    Draws that exceed max_cells in some level, or are trivial when nontrivial
    is set, are thrown away and drawn again.
    """
    for _ in range(MAX_DRAWS):
        space = _draw_space(rng, outer, inner, max_cells)
        if any(count > max_cells for level in space.counts() for count in level):
            logger.debug(f"Random space too large ({space.counts()}); drawing again")
            continue
        if nontrivial and is_trivial_space(space):
            continue
        return space
    raise BudgetExceeded(f"random spaces with at most {max_cells} cells per level", MAX_DRAWS)
