"""Truncated simplicial spaces: outer degree n holds a FinSSet, the level X_n.

Outer structure maps are SSetMaps between levels. Cells of level n in inner
degree k are addressed as grade (n, k).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from src import fincat, sset
from src.exceptions import (DomainMismatch, IllDefinedComposition, InvalidStructure, NotSegal,
                            OracleUnavailable)
from src.simplex import codegeneracy, coface, constant, se, vertex
from src.sset import FinSSet, SSetMap
from src.utils import get_budget, get_setting

logger = logging.getLogger(__name__)

MODES = ('strict', 'pi0')
EQUIVALENCE_MODES = ('pi0', 'nerve')


@dataclass(frozen=True, eq=False)
class SimplicialSpace:
    levels: Tuple[FinSSet, ...]
    faces: Tuple[Tuple[SSetMap, ...], ...]
    degens: Tuple[Tuple[SSetMap, ...], ...]
    provenance: Dict = field(default_factory=dict, compare=False)
    # fiber tables memoized by is_segal and homotopy_data
    fibers: Dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'levels', tuple(self.levels))
        object.__setattr__(self, 'faces', tuple(tuple(f) for f in self.faces))
        object.__setattr__(self, 'degens', tuple(tuple(s) for s in self.degens))
        inner = {level.truncation for level in self.levels}
        if len(inner) > 1:
            raise InvalidStructure(f"Levels have different inner truncations: {sorted(inner)}")

    def __eq__(self, other):
        if not isinstance(other, SimplicialSpace):
            return NotImplemented
        return self.levels == other.levels and self.faces == other.faces and self.degens == other.degens

    __hash__ = None

    def __repr__(self):
        return f"<SimplicialSpace N={self.outer_truncation} D={self.inner_truncation}>"

    @property
    def outer_truncation(self):
        return len(self.levels) - 1

    @property
    def inner_truncation(self):
        return self.levels[0].truncation

    def counts(self):
        return [list(level.counts()) for level in self.levels]

    def outer_act(self, cell, n, k, theta):
        """The cell θ*(cell) of level theta.domain, for a cell of level n in inner degree k."""
        if theta.codomain != n:
            raise DomainMismatch(f"{theta} does not end at [{n}]")
        current, m = cell, n
        for kind, index, _ in sset.generator_word(theta):
            if kind == 'd':
                current = self.faces[m][index].mapping[k][current]
                m -= 1
            else:
                current = self.degens[m][index].mapping[k][current]
                m += 1
        return current

    def validate(self):
        N = self.outer_truncation
        for n, level in enumerate(self.levels):
            level.validate()
            if n >= 1 and len(self.faces[n]) != n + 1:
                raise InvalidStructure(f"Level {n} needs {n + 1} outer faces", {'level': n})
            if n < N and len(self.degens[n]) != n + 1:
                raise InvalidStructure(f"Level {n} needs {n + 1} outer degeneracies", {'level': n})
        for n in range(1, N + 1):
            for i, f in enumerate(self.faces[n]):
                if f.source != self.levels[n] or f.target != self.levels[n - 1]:
                    raise InvalidStructure(f"Outer face d{i} of level {n} has wrong ends", {'level': n})
                f.validate()
        for n in range(N):
            for i, s in enumerate(self.degens[n]):
                if s.source != self.levels[n] or s.target != self.levels[n + 1]:
                    raise InvalidStructure(f"Outer degeneracy s{i} of level {n} has wrong ends", {'level': n})
                s.validate()

        def same(lhs, rhs, identity, n):
            if lhs.mapping != rhs.mapping:
                raise InvalidStructure(f"Outer identity {identity} fails at level {n}",
                                       {'level': n, 'identity': identity})

        d, s = self.faces, self.degens
        for n in range(2, N + 1):
            for j in range(n + 1):
                for i in range(j):
                    same(d[n][j].then(d[n - 1][i]), d[n][i].then(d[n - 1][j - 1]), f"d{i}d{j}", n)
        for n in range(N):
            for j in range(n + 1):
                for i in range(n + 2):
                    composite = s[n][j].then(d[n + 1][i])
                    if i in (j, j + 1):
                        same(composite, sset.identity_map(self.levels[n]), f"d{i}s{j}", n)
                    elif n >= 1 and i < j:
                        same(composite, d[n][i].then(s[n - 1][j - 1]), f"d{i}s{j}", n)
                    elif n >= 1:
                        same(composite, d[n][i - 1].then(s[n - 1][j]), f"d{i}s{j}", n)
                if n + 1 < N:
                    for i in range(j + 1):
                        same(s[n][j].then(s[n + 1][i]), s[n][i].then(s[n + 1][j + 1]), f"s{i}s{j}", n)
        return self


def from_level_maps(levels, face, degen, provenance=None):
    """Assemble a space from levels and functions face(n, i), degen(n, i) returning mappings."""
    levels = list(levels)
    N = len(levels) - 1
    D = levels[0].truncation
    faces = [()]
    for n in range(1, N + 1):
        faces.append(tuple(SSetMap(levels[n], levels[n - 1], tuple(face(n, i, k) for k in range(D + 1)))
                           for i in range(n + 1)))
    degens = []
    for n in range(N):
        degens.append(tuple(SSetMap(levels[n], levels[n + 1], tuple(degen(n, i, k) for k in range(D + 1)))
                            for i in range(n + 1)))
    degens.append(())
    return SimplicialSpace(tuple(levels), tuple(faces), tuple(degens), provenance or {})


# -- constructions ------------------------------------------------------------------------

def discrete_levels(K, inner=None):
    """Level n is the set of degree-n cells of K, as a discrete simplicial set."""
    inner = K.truncation if inner is None else inner
    levels = [sset.discrete(K.cells[n], inner) for n in range(K.truncation + 1)]
    return from_level_maps(
        levels,
        lambda n, i, k: {c: K.faces[n][c][i] for c in K.cells[n]},
        lambda n, i, k: {c: K.degens[n][c][i] for c in K.cells[n]},
        {'construction': 'discrete_levels'},
    )


def constant_levels(K, outer=None):
    """Every level is K and every outer structure map is the identity."""
    outer = get_setting('truncation', 'outer') if outer is None else outer
    identity = {k: {c: c for c in K.cells[k]} for k in range(K.truncation + 1)}
    return from_level_maps([K] * (outer + 1), lambda n, i, k: identity[k], lambda n, i, k: identity[k],
                           {'construction': 'constant_levels'})


def h_space(n, outer=None, inner=None):
    """The space represented by [n]: outer degree k is the discrete set of maps [k] -> [n]."""
    outer = get_setting('truncation', 'outer') if outer is None else outer
    space = discrete_levels(sset.standard(n, outer), inner)
    space.provenance.update({'construction': 'h_space', 'n': n})
    return space


def opposite(X):
    """Reverse the outer simplicial direction."""
    faces = [()] + [tuple(reversed(X.faces[n])) for n in range(1, X.outer_truncation + 1)]
    degens = [tuple(reversed(X.degens[n])) for n in range(X.outer_truncation)] + [()]
    return SimplicialSpace(X.levels, tuple(faces), tuple(degens), {'construction': 'opposite'})


def row(X, k):
    """The simplicial set n -> X_{n,k} along the outer direction."""
    return sset.from_functions(
        X.outer_truncation,
        [X.levels[n].cells[k] for n in range(X.outer_truncation + 1)],
        lambda n, c, i: X.faces[n][i].mapping[k][c],
        lambda n, c, i: X.degens[n][i].mapping[k][c],
    )


def _levelwise(spaces, combine_levels, combine_maps, construction):
    N = spaces[0].outer_truncation
    if any(S.outer_truncation != N for S in spaces):
        raise DomainMismatch("Spaces have different outer truncations")
    levels = [combine_levels([S.levels[n] for S in spaces]) for n in range(N + 1)]
    faces = [()] + [tuple(combine_maps([S.faces[n][i] for S in spaces], levels[n], levels[n - 1])
                          for i in range(n + 1)) for n in range(1, N + 1)]
    degens = [tuple(combine_maps([S.degens[n][i] for S in spaces], levels[n], levels[n + 1])
                    for i in range(n + 1)) for n in range(N)] + [()]
    return SimplicialSpace(tuple(levels), tuple(faces), tuple(degens), {'construction': construction})


def space_coproduct(X, Y):
    def maps(fs, source, target):
        mapping = tuple({f"{j}:{c}": f"{j}:{image}" for j, f in enumerate(fs) for c, image in f.mapping[k].items()}
                        for k in range(source.truncation + 1))
        return SSetMap(source, target, mapping)

    return _levelwise([X, Y], lambda levels: sset.coproduct_family(levels)[0], maps, 'coproduct')


def space_product(X, Y):
    def maps(fs, source, target):
        return sset.product_map(fs[0], fs[1])

    return _levelwise([X, Y], lambda levels: sset.product(levels[0], levels[1]), maps, 'product')


# -- maps of spaces ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpaceMap:
    source: SimplicialSpace
    target: SimplicialSpace
    mapping: Dict[Tuple[int, int], Dict[str, str]]

    def level(self, n):
        D = self.source.inner_truncation
        return SSetMap(self.source.levels[n], self.target.levels[n],
                       tuple(self.mapping[(n, k)] for k in range(D + 1)))

    def validate(self):
        X, Y = self.source, self.target
        for n in range(X.outer_truncation + 1):
            self.level(n).validate()
        for n in range(1, X.outer_truncation + 1):
            for i in range(n + 1):
                if self.level(n).then(Y.faces[n][i]).mapping != X.faces[n][i].then(self.level(n - 1)).mapping:
                    raise InvalidStructure(f"Map does not commute with outer face d{i} at level {n}")
        for n in range(X.outer_truncation):
            for i in range(n + 1):
                if self.level(n).then(Y.degens[n][i]).mapping != X.degens[n][i].then(self.level(n + 1)).mapping:
                    raise InvalidStructure(f"Map does not commute with outer degeneracy s{i} at level {n}")
        return self


def space_presentation(X):
    N, D = X.outer_truncation, X.inner_truncation
    grades = tuple((n, k) for n in range(N + 1) for k in range(D + 1))
    cells, operators, priority = {}, {}, {}
    outer_degenerate = {(n + 1, k): set() for n in range(N) for k in range(D + 1)}
    for n in range(N):
        for s in X.degens[n]:
            for k in range(D + 1):
                outer_degenerate[(n + 1, k)].update(s.mapping[k].values())
    for n, level in enumerate(X.levels):
        inner = sset.presentation(level)
        inner_degenerate = level.degenerate
        for k in range(D + 1):
            grade = (n, k)
            cells[grade] = level.cells[k]
            ops = [((n, h), table) for h, table in inner.operators[k]]
            if n >= 1:
                ops.extend(((n - 1, k), f.mapping[k]) for f in X.faces[n])
            if n < N:
                ops.extend(((n + 1, k), s.mapping[k]) for s in X.degens[n])
            operators[grade] = ops
            od = outer_degenerate.get(grade, set())
            priority[grade] = {c: (c in inner_degenerate[k] or c in od, -(n + k), n, index)
                               for index, c in enumerate(level.cells[k])}
    return sset.Presentation(grades, cells, operators, priority)


def space_mapset(S, X, budget=None, fixed=None):
    """All maps of simplicial spaces S -> X, in deterministic order."""
    if S.outer_truncation != X.outer_truncation or S.inner_truncation != X.inner_truncation:
        raise DomainMismatch("Spaces have different truncations")
    budget = budget if budget is not None else get_budget('mapset_nodes')
    found = sset.search_maps(space_presentation(S), space_presentation(X), budget, fixed)
    return [SpaceMap(S, X, r) for r in found]


# -- Segal conditions ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SegalVerdict:
    passed: bool
    mode: str
    degree: Optional[int] = None
    inner_degree: Optional[int] = None
    witness: Optional[dict] = None

    def __bool__(self):
        return self.passed


def vertex_cell(X, x, k):
    """The inner-degenerate degree-k cell of level 0 on the vertex x."""
    return X.levels[0].act(x, 0, constant(k, 0, 0))


def _fiber_cells(X, n):
    """Cells of level n grouped by their tuple of outer vertices, computed once per space and level."""
    key = ('cells', n)
    if key not in X.fibers:
        D = X.inner_truncation
        objects = X.levels[0].cells[0]
        inverse = [{vertex_cell(X, x, k): x for x in objects} for k in range(D + 1)]
        groups = {}
        for k in range(D + 1):
            for c in X.levels[n].cells[k]:
                xs = tuple(inverse[k].get(X.outer_act(c, n, k, vertex(i, n))) for i in range(n + 1))
                if None not in xs:
                    groups.setdefault(xs, [set() for _ in range(D + 1)])[k].add(c)
        X.fibers[key] = groups
    return X.fibers[key]


def strict_fiber(X, n, vertices):
    """Cells of level n whose outer vertices are the degenerate cells on the given vertices."""
    keep = _fiber_cells(X, n).get(tuple(vertices))
    return sset.restrict(X.levels[n], keep or [set() for _ in range(X.inner_truncation + 1)])


def _fiber_components(X, n, vertices):
    """Components of the strict fiber as lists of degree-0 cells of level n."""
    key = ('pi0', n, tuple(vertices))
    if key not in X.fibers:
        X.fibers[key] = sset.pi0(strict_fiber(X, n, vertices))
    return X.fibers[key]


def _vertex_tuples(X, n):
    objects = X.levels[0].cells[0]
    tuples = [(x,) for x in objects]
    for _ in range(n):
        tuples = [t + (x,) for t in tuples for x in objects]
    return tuples


def is_segal(X, mode='strict'):
    """Segal condition on X up to its outer truncation.

    strict: in every inner degree k, the row n -> X_{n,k} is a strict Segal
    simplicial set. pi0: over each vertex tuple, components of the level-n
    fiber match tuples of components of the level-1 fibers along the spine.
    """
    if mode not in MODES:
        raise DomainMismatch(f"Unknown Segal mode {mode!r}")
    if mode == 'strict':
        for k in range(X.inner_truncation + 1):
            result = sset.is_strict_segal(row(X, k))
            if not result:
                return SegalVerdict(False, mode, result.degree, k, result.witness)
        return SegalVerdict(True, mode)

    component_of = {}
    for x, y in _vertex_tuples(X, 1):
        for index, comp in enumerate(_fiber_components(X, 1, (x, y))):
            for v in comp:
                component_of[v] = (x, y, index)
    for n in range(2, X.outer_truncation + 1):
        for xs in _vertex_tuples(X, n):
            components = _fiber_components(X, n, xs)
            expected = 1
            for i in range(n):
                expected *= len(_fiber_components(X, 1, (xs[i], xs[i + 1])))
            images = set()
            for comp in components:
                images.add(tuple(component_of[X.outer_act(comp[0], n, 0, se(i, n))] for i in range(n)))
            if len(images) != len(components) or len(images) != expected:
                return SegalVerdict(False, mode, n, 0, {
                    'vertices': list(xs),
                    'fiber_components': len(components),
                    'spine_components': expected,
                    'distinct_images': len(images),
                })
    return SegalVerdict(True, mode)


# -- homotopy category ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomotopyData:
    category: fincat.FinCategory
    arrow_of_vertex: Dict[str, str]
    level0_discrete: bool


def _arrow_label(comp):
    return f"[{comp[0]}]"


def homotopy_data(X):
    """The homotopy category together with the arrow class of every level-1 vertex."""
    if X.outer_truncation < 2:
        raise NotSegal("Outer truncation must be at least 2 to compose")
    verdict = is_segal(X, 'pi0')
    if not verdict:
        raise NotSegal("Not Segal on components", verdict.witness)

    objects = X.levels[0].cells[0]
    level0_discrete = all(not X.levels[0].nondegenerate(k) for k in range(1, X.inner_truncation + 1))
    if not level0_discrete:
        logger.warning("Level 0 is not discrete; homs use vertex-indexed strict fibers")

    arrows, arrow_of_vertex = [], {}
    for x, y in _vertex_tuples(X, 1):
        for comp in _fiber_components(X, 1, (x, y)):
            label = _arrow_label(comp)
            arrows.append((label, x, y))
            for v in comp:
                arrow_of_vertex[v] = label
    identities = {x: arrow_of_vertex[X.degens[0][0].mapping[0][x]] for x in objects}

    composition = {}
    for xs in _vertex_tuples(X, 2):
        for comp in _fiber_components(X, 2, xs):
            for c in comp:
                f = arrow_of_vertex[X.outer_act(c, 2, 0, se(0, 2))]
                g = arrow_of_vertex[X.outer_act(c, 2, 0, se(1, 2))]
                gf = arrow_of_vertex[X.faces[2][1].mapping[0][c]]
                if composition.setdefault((g, f), gf) != gf:
                    raise IllDefinedComposition(
                        f"Composite of {g} after {f} is not single-valued: {composition[(g, f)]} vs {gf}")
    try:
        category = fincat.make_category(objects, arrows, identities, composition, name='homotopy category')
    except InvalidStructure as exc:
        raise IllDefinedComposition(f"Induced composition violates the category laws: {exc}") from exc
    return HomotopyData(category, arrow_of_vertex, level0_discrete)


def homotopy_cat(X):
    return homotopy_data(X).category


def hoequiv_components(X):
    """Indices into pi0(level 1) of the components made of invertible arrows."""
    data = homotopy_data(X)
    level1 = X.levels[1]
    return [index for index, comp in enumerate(sset.pi0(level1))
            if data.category.is_iso(data.arrow_of_vertex[comp[0]])]


def hoequiv(X):
    """The sub simplicial set of level 1 on the invertible components."""
    return sset.component_subset(X.levels[1], set(hoequiv_components(X)))


# -- equivalences and completeness ----------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceVerdict:
    passed: bool
    mode: str
    details: Dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def _pi0_bijective(f):
    source, target = sset.pi0(f.source), sset.pi0(f.target)
    target_index = {v: i for i, comp in enumerate(target) for v in comp}
    images = {target_index[f.mapping[0][comp[0]]] for comp in source}
    return len(images) == len(source) == len(target), len(source), len(target)


def _as_functor(f):
    A = sset.fundamental_category(f.source)
    B = sset.fundamental_category(f.target)
    return fincat.Functor(A, B, dict(f.mapping[0]), dict(f.mapping[1])).validate()


def is_equivalence(f, mode='pi0'):
    """Decide whether a map of finite simplicial sets is an equivalence in the given mode.

    pi0 compares components; nerve requires both ends to be nerves and asks
    for an equivalence of their categories.
    """
    if mode not in EQUIVALENCE_MODES:
        raise DomainMismatch(f"Unknown equivalence mode {mode!r}")
    bijective, source_count, target_count = _pi0_bijective(f)
    details = {'source_components': source_count, 'target_components': target_count}
    if mode == 'pi0' or not bijective:
        return EquivalenceVerdict(bijective, mode, details)
    if f.source.truncation < 2 or not sset.is_strict_segal(f.source) or not sset.is_strict_segal(f.target):
        raise OracleUnavailable("Category equivalence needs both ends to be nerves with truncation >= 2")
    try:
        functor = _as_functor(f)
    except NotSegal as exc:
        raise OracleUnavailable(f"Levels are not nerves: {exc}") from exc
    return EquivalenceVerdict(functor.is_equivalence(), mode, details)


def is_homotopy_discrete(K):
    """Whether every component of K is contractible, decided on nerves.

    Decidable when the fundamental category is a groupoid (contractible iff
    hom sets have at most one arrow) or each component has an initial or
    terminal object.
    """
    if all(not K.nondegenerate(k) for k in range(1, K.truncation + 1)):
        return True
    if K.truncation < 2 or not sset.is_strict_segal(K):
        raise OracleUnavailable("Homotopy discreteness is only decided for nerves")
    A = sset.fundamental_category(K)
    if all(A.is_iso(a) for a in A.arrow_ids):
        return all(len(A.hom(x, y)) <= 1 for x in A.objects for y in A.objects)

    for component in sset.pi0(K):
        initial = any(all(len(A.hom(x, y)) == 1 for y in component) for x in component)
        terminal = any(all(len(A.hom(y, x)) == 1 for y in component) for x in component)
        if not (initial or terminal):
            raise OracleUnavailable("Contractibility undecided for a component without initial or terminal object")
    return True


def is_complete(X, mode='pi0'):
    """Whether the degeneracy X_0 -> hoequiv is an equivalence."""
    level1 = X.levels[1]
    components = set(hoequiv_components(X))
    target = sset.component_subset(level1, components)
    names = set(target.cells[0])
    s0 = X.degens[0][0]
    if any(s0.mapping[0][x] not in names for x in X.levels[0].cells[0]):
        raise InvalidStructure("Degenerate edges must be invertible")
    restricted = SSetMap(X.levels[0], target,
                         tuple(dict(s0.mapping[k]) for k in range(X.inner_truncation + 1)))
    verdict = is_equivalence(restricted, mode)
    verdict.details.update({'hoequiv_components': len(components),
                            'level0_components': len(sset.pi0(X.levels[0]))})
    return verdict


def is_zero_local(X, mode='pi0'):
    """Whether every total degeneracy X_0 -> X_n is an equivalence."""
    for n in range(1, X.outer_truncation + 1):
        theta = constant(n, 0, 0)
        mapping = tuple({c: X.outer_act(c, 0, k, theta) for c in X.levels[0].cells[k]}
                        for k in range(X.inner_truncation + 1))
        verdict = is_equivalence(SSetMap(X.levels[0], X.levels[n], mapping), mode)
        if not verdict:
            verdict.details['level'] = n
            return verdict
    return EquivalenceVerdict(True, mode, {'levels': X.outer_truncation + 1})


# -- classification diagrams ---------------------------------------------------------------------

def _functor_label(F, n):
    if n == 0:
        return F.object_map['0']
    return ';'.join(F.arrow_map[f"{i}->{i + 1}"] for i in range(n))


def _transformation_label(source, components, target):
    return f"{source}>{';'.join(components)}>{target}"


@dataclass(frozen=True)
class FunctorCategory:
    """Functors [n] -> base and the weq-natural transformations between them."""

    n: int
    category: fincat.FinCategory
    functors: Dict[str, fincat.Functor]
    components: Dict[str, Tuple[str, ...]]

    def arrow_with(self, source, components):
        for label, comps in self.components.items():
            if comps == components and self.category.src(label) == source:
                return label
        raise InvalidStructure(f"No transformation out of {source} with components {components}")


def functor_category(relcat, n, budget=None):
    """At n = 0 the object and arrow ids of the base are kept."""
    base, weq = relcat.base, relcat.weq
    functors = {_functor_label(F, n): F for F in fincat.enumerate_functors(fincat.linear(n), base, budget)}
    arrows, components = [], {}
    for a, F in functors.items():
        for b, G in functors.items():
            choices = [[w for w in base.hom(F.object_map[str(i)], G.object_map[str(i)]) if w in weq]
                       for i in range(n + 1)]
            for comps in itertools.product(*choices):
                natural = all(
                    base.compose(G.arrow_map[f"{i}->{i + 1}"], comps[i])
                    == base.compose(comps[i + 1], F.arrow_map[f"{i}->{i + 1}"])
                    for i in range(n))
                if natural:
                    label = comps[0] if n == 0 else _transformation_label(a, comps, b)
                    arrows.append((label, a, b))
                    components[label] = tuple(comps)

    by_components = {(src, components[label]): label for label, src, _ in arrows}
    identities = {a: by_components[(a, tuple(base.identities[F.object_map[str(i)]] for i in range(n + 1)))]
                  for a, F in functors.items()}
    composition = {}
    for f, source, middle in arrows:
        for g, src, _ in arrows:
            if src == middle:
                comps = tuple(base.compose(components[g][i], components[f][i]) for i in range(n + 1))
                composition[(g, f)] = by_components[(source, comps)]
    category = fincat.make_category(list(functors), arrows, identities, composition, name=f"weq functors [{n}]")
    return FunctorCategory(n, category, functors, components)


def _precomposition(relcat, source, target, theta):
    """The functor Fun([n], base) -> Fun([m], base) induced by θ: [m] -> [n]."""
    m = theta.domain
    object_map = {}
    for label, F in source.functors.items():
        G = fincat.Functor(fincat.linear(m), relcat.base,
                           {str(j): F.object_map[str(theta.images[j])] for j in range(m + 1)},
                           {f"{a}->{b}": F.arrow_map[f"{theta.images[a]}->{theta.images[b]}"]
                            for a in range(m + 1) for b in range(a, m + 1)})
        object_map[label] = _functor_label(G, m)
    lookup = {(target.category.src(label), comps): label for label, comps in target.components.items()}
    arrow_map = {}
    for label, comps in source.components.items():
        pulled = tuple(comps[theta.images[j]] for j in range(m + 1))
        arrow_map[label] = lookup[(object_map[source.category.src(label)], pulled)]
    return fincat.Functor(source.category, target.category, object_map, arrow_map)


def classification_diagram(relcat, outer=None, inner=None, budget=None):
    """Level n is the nerve of weq-natural transformations between functors [n] -> base."""
    outer = get_setting('truncation', 'outer') if outer is None else outer
    inner = get_setting('truncation', 'inner') if inner is None else inner
    budget = budget if budget is not None else get_budget('functors')
    relcat.validate()
    categories = [functor_category(relcat, n, budget) for n in range(outer + 1)]
    levels = [sset.nerve(fc.category, inner) for fc in categories]
    logger.info(f"Classification diagram levels: {[level.counts() for level in levels]}")

    def induced(theta):
        functor = _precomposition(relcat, categories[theta.codomain], categories[theta.domain], theta)
        return sset.nerve_map(functor, inner).mapping

    faces = [()] + [tuple(SSetMap(levels[n], levels[n - 1], induced(coface(i, n))) for i in range(n + 1))
                    for n in range(1, outer + 1)]
    degens = [tuple(SSetMap(levels[n], levels[n + 1], induced(codegeneracy(i, n))) for i in range(n + 1))
              for n in range(outer)] + [()]
    return SimplicialSpace(tuple(levels), tuple(faces), tuple(degens),
                           {'construction': 'classification_diagram', 'base': relcat.base.name})


# -- co-Segal comparison -------------------------------------------------------------------------

@dataclass(frozen=True)
class SpineComparison:
    n: int
    isomorphism: bool
    glued_counts: Tuple[int, ...]
    simplex_counts: Tuple[int, ...]


def spine_comparison(n, outer=None):
    """Compare h(1) glued n times along h(0) with h(n), level by level.

    Colimits of simplicial spaces are computed levelwise, and every h space
    here has discrete levels, so the comparison is read off from the
    simplicial sets of outer cells.
    """
    outer = get_setting('truncation', 'outer') if outer is None else outer
    if n < 1:
        raise DomainMismatch("spine_comparison needs n >= 1")
    copies, _ = sset.coproduct_family([sset.standard(1, outer)] * n)
    pairs = [[(f"{i}:{'1' * (k + 1)}", f"{i + 1}:{'0' * (k + 1)}") for i in range(n - 1)]
             for k in range(outer + 1)]
    glued, quotient_map = sset.quotient(copies, pairs)
    target = sset.standard(n, outer)

    mapping = []
    for k in range(outer + 1):
        level = {}
        for cell in copies.cells[k]:
            index, label = cell.split(':', 1)
            shifted = sset.simplex_of(1, outer, label).images
            image = sset.simplex_label(tuple(v + int(index) for v in shifted))
            level[quotient_map.mapping[k][cell]] = image
        mapping.append(level)
    comparison = SSetMap(glued, target, tuple(mapping)).validate()
    return SpineComparison(n, comparison.is_isomorphism(), glued.counts(), target.counts())
