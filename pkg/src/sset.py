"""Truncated finite simplicial sets.

A FinSSet stores every cell up to its truncation D, degenerate cells
included, together with full face and degeneracy tables:

    faces[k][cell][i]  = d_i(cell), a cell of degree k-1   (1 <= k <= D)
    degens[k][cell][i] = s_i(cell), a cell of degree k+1   (0 <= k < D)

Every statement about a FinSSet holds up to its stored degrees.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple

from scipy.cluster.hierarchy import DisjointSet

from src import fincat
from src.exceptions import (BudgetExceeded, DomainMismatch, IllFormedQuotient,
                            IndexOutOfRange, InvalidStructure, NotSegal)
from src.simplex import (codegeneracy, coface, compose, enumerate_maps,
                         factorize, se, vertex)
from src.utils import get_budget, get_setting

logger = logging.getLogger(__name__)


def default_truncation():
    return get_setting('truncation', 'inner')


@dataclass(frozen=True, eq=False)
class FinSSet:
    truncation: int
    cells: Tuple[Tuple[str, ...], ...]
    faces: Tuple[Dict[str, Tuple[str, ...]], ...]
    degens: Tuple[Dict[str, Tuple[str, ...]], ...]

    def __post_init__(self):
        object.__setattr__(self, 'cells', tuple(tuple(c) for c in self.cells))
        object.__setattr__(self, 'faces', tuple(dict(f) for f in self.faces))
        object.__setattr__(self, 'degens', tuple(dict(s) for s in self.degens))
        if len(self.cells) != self.truncation + 1:
            raise InvalidStructure(f"Expected {self.truncation + 1} degrees of cells, got {len(self.cells)}")

    def __eq__(self, other):
        if not isinstance(other, FinSSet):
            return NotImplemented
        return (self.truncation == other.truncation and self.cells == other.cells
                and self.faces == other.faces and self.degens == other.degens)

    __hash__ = None

    def __repr__(self):
        return f"<FinSSet D={self.truncation} counts={self.counts()}>"

    def counts(self):
        return tuple(len(c) for c in self.cells)

    @property
    def is_empty(self):
        return not self.cells[0]

    def face(self, k, cell, i):
        return self.faces[k][cell][i]

    def degen(self, k, cell, i):
        return self.degens[k][cell][i]

    def act(self, cell, degree, theta):
        """The cell θ*(cell) for θ: [j] -> [degree]."""
        if theta.codomain != degree:
            raise DomainMismatch(f"{theta} does not end at [{degree}]")
        current, k = cell, degree
        for kind, index, _ in generator_word(theta):
            if kind == 'd':
                current = self.faces[k][current][index]
                k -= 1
            else:
                current = self.degens[k][current][index]
                k += 1
        return current

    def vertices(self, k, cell):
        return tuple(self.act(cell, k, vertex(i, k)) for i in range(k + 1))

    @property
    def degenerate(self):
        """Per degree, the set of degenerate cells."""
        result = [set() for _ in range(self.truncation + 1)]
        for k in range(self.truncation):
            for images in self.degens[k].values():
                result[k + 1].update(images)
        return result

    def nondegenerate(self, k):
        degenerate = self.degenerate[k]
        return tuple(c for c in self.cells[k] if c not in degenerate)

    def validate(self):
        """Check closure of the tables and the simplicial identities."""
        D = self.truncation
        cell_sets = [set(c) for c in self.cells]
        for k in range(D + 1):
            if len(cell_sets[k]) != len(self.cells[k]):
                raise InvalidStructure(f"Duplicate cells in degree {k}", {'degree': k})
            if k >= 1:
                for cell in self.cells[k]:
                    faces = self.faces[k].get(cell)
                    if faces is None or len(faces) != k + 1 or any(f not in cell_sets[k - 1] for f in faces):
                        raise InvalidStructure(f"Bad faces for cell {cell} in degree {k}",
                                               {'degree': k, 'cell': cell})
            if k < D:
                for cell in self.cells[k]:
                    degens = self.degens[k].get(cell)
                    if degens is None or len(degens) != k + 1 or any(s not in cell_sets[k + 1] for s in degens):
                        raise InvalidStructure(f"Bad degeneracies for cell {cell} in degree {k}",
                                               {'degree': k, 'cell': cell})

        def fail(identity, k, cell):
            raise InvalidStructure(f"Simplicial identity {identity} fails on cell {cell} in degree {k}",
                                   {'degree': k, 'cell': cell, 'identity': identity})

        d, s = self.face, self.degen
        for k in range(2, D + 1):
            for x in self.cells[k]:
                for j in range(k + 1):
                    for i in range(j):
                        if d(k - 1, d(k, x, j), i) != d(k - 1, d(k, x, i), j - 1):
                            fail(f"d{i}d{j} = d{j - 1}d{i}", k, x)
        for k in range(D):
            for x in self.cells[k]:
                for j in range(k + 1):
                    y = s(k, x, j)
                    for i in range(k + 2):
                        if i < j:
                            expected = s(k - 1, d(k, x, i), j - 1) if k >= 1 else None
                        elif i in (j, j + 1):
                            expected = x
                        else:
                            expected = s(k - 1, d(k, x, i - 1), j) if k >= 1 else None
                        if expected is not None and d(k + 1, y, i) != expected:
                            fail(f"d{i}s{j}", k, x)
                    if k + 1 < D:
                        for i in range(j + 1):
                            if s(k + 1, y, i) != s(k + 1, s(k, x, i), j + 1):
                                fail(f"s{i}s{j} = s{j + 1}s{i}", k, x)
        return self


@lru_cache(maxsize=None)
def generator_word(theta):
    return tuple(factorize(theta))


def simplex_label(images):
    if all(i < 10 for i in images):
        return ''.join(map(str, images))
    return ','.join(map(str, images))


def pair_label(a, b):
    return f"({a},{b})"


def from_functions(truncation, cells, face, degen):
    """Build a FinSSet from cell lists and structure functions face(k, c, i), degen(k, c, i)."""
    faces = [{}]
    for k in range(1, truncation + 1):
        faces.append({c: tuple(face(k, c, i) for i in range(k + 1)) for c in cells[k]})
    degens = []
    for k in range(truncation):
        degens.append({c: tuple(degen(k, c, i) for i in range(k + 1)) for c in cells[k]})
    degens.append({})
    return FinSSet(truncation, tuple(tuple(c) for c in cells), tuple(faces), tuple(degens))


# -- constructions ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _standard_cells(n, truncation):
    """Per degree, (labels, label -> SimplexMap) for the standard n-simplex."""
    result = []
    for k in range(truncation + 1):
        maps = enumerate_maps(k, n)
        result.append((tuple(simplex_label(f.images) for f in maps), {simplex_label(f.images): f for f in maps}))
    return tuple(result)


def simplex_of(n, truncation, label):
    """The monotone map behind a cell label of standard(n)."""
    for labels, lookup in _standard_cells(n, truncation):
        if label in lookup:
            return lookup[label]
    raise DomainMismatch(f"{label!r} is not a cell of the standard {n}-simplex")


def standard(n, truncation=None):
    """The standard n-simplex: degree-k cells are the monotone maps [k] -> [n]."""
    truncation = default_truncation() if truncation is None else truncation
    if n < 0 or truncation < 0:
        raise IndexOutOfRange(f"standard({n}, {truncation}) needs non-negative arguments")
    table = _standard_cells(n, truncation)
    cells = [labels for labels, _ in table]

    def face(k, c, i):
        return simplex_label(compose(coface(i, k), table[k][1][c]).images)

    def degen(k, c, i):
        return simplex_label(compose(codegeneracy(i, k), table[k][1][c]).images)

    return from_functions(truncation, cells, face, degen)


def point(truncation=None):
    return standard(0, truncation)


def empty(truncation=None):
    truncation = default_truncation() if truncation is None else truncation
    return from_functions(truncation, [()] * (truncation + 1), None, None)


def discrete(elements, truncation=None):
    """The discrete simplicial set on a finite set: one cell per element in every degree."""
    truncation = default_truncation() if truncation is None else truncation
    elements = tuple(elements)
    return from_functions(truncation, [elements] * (truncation + 1),
                          lambda k, c, i: c, lambda k, c, i: c)


def nerve(category, truncation=None):
    """Degree-n cells are composable strings f1|f2|...|fn (f1 first)."""
    truncation = default_truncation() if truncation is None else truncation
    for a in category.arrow_ids:
        if '|' in a:
            raise DomainMismatch(f"Arrow id {a!r} contains the string separator '|'")

    strings = [[(x,) for x in category.objects]]
    if truncation >= 1:
        strings.append([(a,) for a in category.arrow_ids])
    for n in range(2, truncation + 1):
        strings.append([s + (a,) for s in strings[-1] for a in category.hom_from(category.tgt(s[-1]))])

    def label(n, s):
        return s[0] if n == 0 else '|'.join(s)

    decoded = [{label(n, s): s for s in level} for n, level in enumerate(strings)]
    cells = [[label(n, s) for s in level] for n, level in enumerate(strings)]

    def face(n, c, i):
        s = decoded[n][c]
        if n == 1:
            return category.tgt(s[0]) if i == 0 else category.src(s[0])
        if i == 0:
            return label(n - 1, s[1:])
        if i == n:
            return label(n - 1, s[:-1])
        return label(n - 1, s[:i - 1] + (category.compose(s[i], s[i - 1]),) + s[i + 1:])

    def degen(n, c, i):
        s = decoded[n][c]
        if n == 0:
            return category.identities[s[0]]
        obj = category.src(s[0]) if i == 0 else category.tgt(s[i - 1])
        return label(n + 1, s[:i] + (category.identities[obj],) + s[i:])

    return from_functions(truncation, cells, face, degen)


def opposite(X):
    """Reverse the order of faces and degeneracies."""
    faces = [{}] + [{c: tuple(reversed(fs)) for c, fs in X.faces[k].items()} for k in range(1, X.truncation + 1)]
    degens = [{c: tuple(reversed(ss)) for c, ss in X.degens[k].items()} for k in range(X.truncation)] + [{}]
    return FinSSet(X.truncation, X.cells, tuple(faces), tuple(degens))


def truncate(X, truncation):
    if truncation > X.truncation:
        raise DomainMismatch(f"Cannot raise truncation {X.truncation} to {truncation}")
    faces = list(X.faces[:truncation + 1])
    degens = list(X.degens[:truncation]) + [{}]
    return FinSSet(truncation, X.cells[:truncation + 1], tuple(faces), tuple(degens))


def restrict(X, keep):
    """The simplicial subset on the cells in keep[k]; raises if not closed."""
    cells = [tuple(c for c in X.cells[k] if c in keep[k]) for k in range(X.truncation + 1)]
    for k in range(1, X.truncation + 1):
        for c in cells[k]:
            if any(f not in keep[k - 1] for f in X.faces[k][c]):
                raise InvalidStructure(f"Subset not closed under faces at {c}", {'degree': k, 'cell': c})
    for k in range(X.truncation):
        for c in cells[k]:
            if any(s not in keep[k + 1] for s in X.degens[k][c]):
                raise InvalidStructure(f"Subset not closed under degeneracies at {c}", {'degree': k, 'cell': c})
    return from_functions(X.truncation, cells, X.face, X.degen)


def delete_cell(X, degree, cell):
    """Remove a nondegenerate cell together with every cell having it as an iterated face."""
    if cell in X.degenerate[degree]:
        raise DomainMismatch(f"{cell} is degenerate; deleting it would break degeneracies")
    removed = [set() for _ in range(X.truncation + 1)]
    removed[degree].add(cell)
    for k in range(degree + 1, X.truncation + 1):
        for c in X.cells[k]:
            if any(f in removed[k - 1] for f in X.faces[k][c]):
                removed[k].add(c)
    keep = [set(X.cells[k]) - removed[k] for k in range(X.truncation + 1)]
    return restrict(X, keep)


# -- maps ------------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SSetMap:
    source: FinSSet
    target: FinSSet
    mapping: Tuple[Dict[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, 'mapping', tuple(dict(m) for m in self.mapping))

    def __eq__(self, other):
        if not isinstance(other, SSetMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.mapping == other.mapping

    __hash__ = None

    def __call__(self, k, cell):
        return self.mapping[k][cell]

    def key(self):
        return tuple(tuple(self.mapping[k][c] for c in self.source.cells[k])
                     for k in range(self.source.truncation + 1))

    def label(self):
        """A short deterministic name for this map."""
        text = ';'.join(','.join(level) for level in self.key())
        return 'm' + hashlib.blake2b(text.encode('utf-8'), digest_size=6).hexdigest()

    def validate(self):
        X, Y = self.source, self.target
        if X.truncation != Y.truncation:
            raise DomainMismatch("Map between different truncations")
        targets = [set(level) for level in Y.cells]
        for k in range(X.truncation + 1):
            for c in X.cells[k]:
                image = self.mapping[k].get(c)
                if image is None or image not in targets[k]:
                    raise InvalidStructure(f"Map undefined or invalid on {c}", {'degree': k, 'cell': c})
                if k >= 1 and tuple(self.mapping[k - 1][f] for f in X.faces[k][c]) != Y.faces[k][image]:
                    raise InvalidStructure(f"Map does not commute with faces at {c}", {'degree': k, 'cell': c})
                if k < X.truncation and tuple(self.mapping[k + 1][s] for s in X.degens[k][c]) != Y.degens[k][image]:
                    raise InvalidStructure(f"Map does not commute with degeneracies at {c}",
                                           {'degree': k, 'cell': c})
        return self

    def then(self, other):
        if other.source != self.target:
            raise DomainMismatch("Maps are not composable")
        return SSetMap(self.source, other.target,
                       tuple({c: other.mapping[k][v] for c, v in self.mapping[k].items()}
                             for k in range(self.source.truncation + 1)))

    def is_injective(self):
        return all(len(set(m.values())) == len(m) for m in self.mapping)

    def is_isomorphism(self):
        return self.is_injective() and all(
            len(self.mapping[k]) == len(self.target.cells[k]) for k in range(self.target.truncation + 1))

    def image(self):
        return [set(m.values()) for m in self.mapping]


def identity_map(X):
    return SSetMap(X, X, tuple({c: c for c in X.cells[k]} for k in range(X.truncation + 1)))


def cell_as_map(X, degree, cell):
    """The map standard(degree) -> X classifying a cell."""
    S = standard(degree, X.truncation)
    table = _standard_cells(degree, X.truncation)
    mapping = tuple({c: X.act(cell, degree, table[k][1][c]) for c in S.cells[k]}
                    for k in range(X.truncation + 1))
    return SSetMap(S, X, mapping)


def nerve_map(functor, truncation=None):
    """The map of nerves induced by a functor."""
    truncation = default_truncation() if truncation is None else truncation
    source = nerve(functor.source, truncation)
    target = nerve(functor.target, truncation)
    mapping = [{x: functor.object_map[x] for x in source.cells[0]}]
    for k in range(1, truncation + 1):
        mapping.append({c: '|'.join(functor.arrow_map[a] for a in c.split('|')) for c in source.cells[k]})
    return SSetMap(source, target, tuple(mapping))


# -- the propagation search ----------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """A graded set with operators, the common shape of simplicial sets and spaces.

    ``operators[grade]`` lists ``(target_grade, table)`` pairs; two presentations
    are compatible when their grades and operator lists line up.
    """

    grades: Tuple
    cells: Mapping
    operators: Mapping
    priority: Mapping


def presentation(X):
    operators = {}
    for k in range(X.truncation + 1):
        ops = []
        if k >= 1:
            for i in range(k + 1):
                ops.append((k - 1, {c: fs[i] for c, fs in X.faces[k].items()}))
        if k < X.truncation:
            for i in range(k + 1):
                ops.append((k + 1, {c: ss[i] for c, ss in X.degens[k].items()}))
        operators[k] = ops
    degenerate = X.degenerate
    priority = {k: {c: (c in degenerate[k], -k, index) for index, c in enumerate(X.cells[k])}
                for k in range(X.truncation + 1)}
    return Presentation(tuple(range(X.truncation + 1)), {k: X.cells[k] for k in range(X.truncation + 1)},
                        operators, priority)


def search_maps(source, target, budget, fixed=None, injective=False, limit=None):
    """Enumerate operator-preserving, grade-preserving maps between presentations.

    Assigning a cell immediately assigns every operator image, so a choice on a
    top cell fixes its whole boundary; conflicts cut the branch. Cells are
    chosen nondegenerate first, highest grade first. Results are returned in
    ascending order of their images listed grade by grade.
    """
    if source.grades != target.grades:
        raise DomainMismatch("Presentations have different grades")
    assignment = {g: {} for g in source.grades}
    used = {g: set() for g in source.grades}
    trail = []
    order = sorted(((g, c) for g in source.grades for c in source.cells[g]),
                   key=lambda gc: source.priority[gc[0]][gc[1]])
    nodes = 0
    results = []

    def assign(grade, cell, image):
        work = [(grade, cell, image)]
        while work:
            g, c, t = work.pop()
            current = assignment[g].get(c)
            if current is not None:
                if current != t:
                    return False
                continue
            if injective:
                if t in used[g]:
                    return False
                used[g].add(t)
            assignment[g][c] = t
            trail.append((g, c))
            for (h, src_table), (_, tgt_table) in zip(source.operators[g], target.operators[g]):
                work.append((h, src_table[c], tgt_table[t]))
        return True

    def undo(mark):
        while len(trail) > mark:
            g, c = trail.pop()
            t = assignment[g].pop(c)
            if injective:
                used[g].discard(t)

    def candidates(grade, cell):
        for t in target.cells[grade]:
            ok = True
            for (h, src_table), (_, tgt_table) in zip(source.operators[grade], target.operators[grade]):
                known = assignment[h].get(src_table[cell])
                if known is not None and tgt_table[t] != known:
                    ok = False
                    break
            if ok:
                yield t

    def recurse(position):
        nonlocal nodes
        if limit is not None and len(results) >= limit:
            return
        while position < len(order) and order[position][1] in assignment[order[position][0]]:
            position += 1
        if position == len(order):
            results.append({g: dict(assignment[g]) for g in source.grades})
            return
        grade, cell = order[position]
        for t in candidates(grade, cell):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("simplicial map search", budget)
            mark = len(trail)
            if assign(grade, cell, t):
                recurse(position + 1)
            undo(mark)
            if limit is not None and len(results) >= limit:
                return

    mark = len(trail)
    consistent = True
    for (g, c), t in (fixed or {}).items():
        if not assign(g, c, t):
            consistent = False
            break
    if consistent:
        recurse(0)
    undo(mark)

    results.sort(key=lambda r: tuple(tuple(r[g][c] for c in source.cells[g]) for g in source.grades))
    return results


def _check_compatible(X, Y):
    if X.truncation != Y.truncation:
        raise DomainMismatch(f"Truncations differ: {X.truncation} vs {Y.truncation}")


def _as_nerves(X, Y):
    """Fundamental categories of X and Y when both are nerves (strict Segal, truncation >= 2), else None."""
    if X.truncation < 2 or not is_strict_segal(X) or not is_strict_segal(Y):
        return None
    try:
        return fundamental_category(X), fundamental_category(Y)
    except NotSegal:
        return None


def _functor_maps(X, Y, functors):
    """The maps of nerves X -> Y induced by functors of their fundamental categories."""
    fillers = [None, None] + [{spine(Y, k, c): c for c in Y.cells[k]} for k in range(2, Y.truncation + 1)]
    spines = [None, None] + [{c: spine(X, k, c) for c in X.cells[k]} for k in range(2, X.truncation + 1)]
    for F in functors:
        mapping = [dict(F.object_map), dict(F.arrow_map)]
        for k in range(2, X.truncation + 1):
            mapping.append({c: fillers[k][tuple(F.arrow_map[e] for e in spines[k][c])] for c in X.cells[k]})
        yield SSetMap(X, Y, tuple(mapping))


def _maps_between_nerves(X, Y):
    categories = _as_nerves(X, Y)
    if categories is None:
        return None
    return sorted(_functor_maps(X, Y, fincat.iter_functors(*categories)), key=SSetMap.key)


def mapset(X, Y, budget=None, fixed=None):
    """All simplicial maps X -> Y in deterministic order.

    Between nerves (strict Segal, truncation >= 2) maps are functors of the
    fundamental categories; everything else goes through the propagation search.

    Args:
        fixed: optional ``{(degree, cell): image}`` constraints.
    """
    _check_compatible(X, Y)
    if not fixed:
        found = _maps_between_nerves(X, Y)
        if found is not None:
            return found
    budget = budget if budget is not None else get_budget('mapset_nodes')
    found = search_maps(presentation(X), presentation(Y), budget, fixed)
    return [SSetMap(X, Y, tuple(r[k] for k in range(X.truncation + 1))) for r in found]


def find_isomorphism(X, Y, budget=None):
    if X.truncation != Y.truncation or X.counts() != Y.counts():
        return None
    categories = _as_nerves(X, Y)
    if categories is not None:
        functor = fincat.find_isomorphism(*categories)
        return None if functor is None else next(_functor_maps(X, Y, [functor]))
    budget = budget if budget is not None else get_budget('mapset_nodes')
    found = search_maps(presentation(X), presentation(Y), budget, injective=True, limit=1)
    if not found:
        return None
    return SSetMap(X, Y, tuple(found[0][k] for k in range(X.truncation + 1)))


def is_isomorphic(X, Y, budget=None):
    return find_isomorphism(X, Y, budget) is not None


# -- components ------------------------------------------------------------------------------

def pi0(X):
    """Connected components of the vertices, in vertex order."""
    vertices = X.cells[0]
    if not vertices:
        return []
    classes = DisjointSet(vertices)
    if X.truncation >= 1:
        for e, (target, source) in X.faces[1].items():
            classes.merge(source, target)
    order = {v: i for i, v in enumerate(vertices)}
    subsets = [sorted(s, key=order.get) for s in classes.subsets()]
    return sorted(subsets, key=lambda s: order[s[0]])


def component_index(X):
    """Per degree, cell -> index of its component in pi0(X)."""
    components = pi0(X)
    of_vertex = {v: i for i, comp in enumerate(components) for v in comp}
    result = []
    for k in range(X.truncation + 1):
        result.append({c: of_vertex[X.act(c, k, vertex(0, k))] for c in X.cells[k]})
    return result


def component_subset(X, indices):
    """The simplicial subset made of the given components."""
    index = component_index(X)
    keep = [{c for c in X.cells[k] if index[k][c] in indices} for k in range(X.truncation + 1)]
    return restrict(X, keep)


# -- limits and colimits ------------------------------------------------------------------------

def product(X, Y):
    _check_compatible(X, Y)
    cells = [[pair_label(a, b) for a in X.cells[k] for b in Y.cells[k]] for k in range(X.truncation + 1)]
    parts = [{pair_label(a, b): (a, b) for a in X.cells[k] for b in Y.cells[k]} for k in range(X.truncation + 1)]

    def face(k, c, i):
        a, b = parts[k][c]
        return pair_label(X.faces[k][a][i], Y.faces[k][b][i])

    def degen(k, c, i):
        a, b = parts[k][c]
        return pair_label(X.degens[k][a][i], Y.degens[k][b][i])

    return from_functions(X.truncation, cells, face, degen)


def product_projections(X, Y):
    P = product(X, Y)
    first = tuple({pair_label(a, b): a for a in X.cells[k] for b in Y.cells[k]} for k in range(X.truncation + 1))
    second = tuple({pair_label(a, b): b for a in X.cells[k] for b in Y.cells[k]} for k in range(X.truncation + 1))
    return P, SSetMap(P, X, first), SSetMap(P, Y, second)


def product_map(f, g):
    """f × g between products."""
    source = product(f.source, g.source)
    target = product(f.target, g.target)
    mapping = tuple({pair_label(a, b): pair_label(f.mapping[k][a], g.mapping[k][b])
                     for a in f.source.cells[k] for b in g.source.cells[k]}
                    for k in range(source.truncation + 1))
    return SSetMap(source, target, mapping)


def pairing(f, g):
    """(f, g): W -> X × Y for maps out of a common source."""
    if f.source != g.source:
        raise DomainMismatch("Pairing needs a common source")
    target = product(f.target, g.target)
    mapping = tuple({c: pair_label(f.mapping[k][c], g.mapping[k][c]) for c in f.source.cells[k]}
                    for k in range(f.source.truncation + 1))
    return SSetMap(f.source, target, mapping)


def pullback_projections(f, g):
    """X ×_Z Y for f: X -> Z, g: Y -> Z, with both projections."""
    if f.target != g.target:
        raise DomainMismatch("Pullback legs must share their target")
    X, Y = f.source, g.source
    _check_compatible(X, Y)
    D = X.truncation
    parts = [{pair_label(a, b): (a, b) for a in X.cells[k] for b in Y.cells[k]
              if f.mapping[k][a] == g.mapping[k][b]} for k in range(D + 1)]
    cells = [list(parts[k]) for k in range(D + 1)]

    def face(k, c, i):
        a, b = parts[k][c]
        return pair_label(X.faces[k][a][i], Y.faces[k][b][i])

    def degen(k, c, i):
        a, b = parts[k][c]
        return pair_label(X.degens[k][a][i], Y.degens[k][b][i])

    P = from_functions(D, cells, face, degen)
    first = SSetMap(P, X, tuple({c: parts[k][c][0] for c in cells[k]} for k in range(D + 1)))
    second = SSetMap(P, Y, tuple({c: parts[k][c][1] for c in cells[k]} for k in range(D + 1)))
    return P, first, second


def pullback(f, g):
    return pullback_projections(f, g)[0]


def coproduct_family(parts):
    """Disjoint union with its inclusions; summand i contributes cells 'i:cell'."""
    parts = list(parts)
    if not parts:
        return empty(), []
    D = parts[0].truncation
    for X in parts:
        _check_compatible(parts[0], X)
    cells = [[f"{i}:{c}" for i, X in enumerate(parts) for c in X.cells[k]] for k in range(D + 1)]
    owner = [{f"{i}:{c}": (i, c) for i, X in enumerate(parts) for c in X.cells[k]} for k in range(D + 1)]

    def face(k, c, i):
        j, cell = owner[k][c]
        return f"{j}:{parts[j].faces[k][cell][i]}"

    def degen(k, c, i):
        j, cell = owner[k][c]
        return f"{j}:{parts[j].degens[k][cell][i]}"

    total = from_functions(D, cells, face, degen)
    inclusions = [SSetMap(X, total, tuple({c: f"{i}:{c}" for c in X.cells[k]} for k in range(D + 1)))
                  for i, X in enumerate(parts)]
    return total, inclusions


def coproduct(X, Y):
    return coproduct_family([X, Y])[0]


def quotient(Y, pairs):
    """Quotient of Y by the equivalence generated by pairs[k] (lists of cell pairs in degree k).

    Returns (Q, q) where q: Y -> Q is the quotient map. Each class is named
    after its first member in Y's cell order.
    """
    D = Y.truncation
    classes = [DisjointSet(Y.cells[k]) for k in range(D + 1)]
    for k in range(D + 1):
        for a, b in pairs[k]:
            classes[k].merge(a, b)
    rep = []
    cells = []
    for k in range(D + 1):
        names = {}
        level = []
        for c in Y.cells[k]:
            root = classes[k][c]
            if root not in names:
                names[root] = c
                level.append(c)
        rep.append({c: names[classes[k][c]] for c in Y.cells[k]})
        cells.append(level)

    faces = [{}]
    for k in range(1, D + 1):
        table = {}
        for c in Y.cells[k]:
            image = tuple(rep[k - 1][f] for f in Y.faces[k][c])
            name = rep[k][c]
            if table.setdefault(name, image) != image:
                raise IllFormedQuotient(f"Faces of class {name} in degree {k} conflict")
        faces.append(table)
    degens = []
    for k in range(D):
        table = {}
        for c in Y.cells[k]:
            image = tuple(rep[k + 1][s] for s in Y.degens[k][c])
            name = rep[k][c]
            if table.setdefault(name, image) != image:
                raise IllFormedQuotient(f"Degeneracies of class {name} in degree {k} conflict")
        degens.append(table)
    degens.append({})
    Q = FinSSet(D, tuple(tuple(c) for c in cells), tuple(faces), tuple(degens))
    return Q, SSetMap(Y, Q, tuple(rep))


def rename(X, names):
    """Rename cells through names[k] (cells not listed keep their label)."""
    renaming = [{c: names[k].get(c, c) for c in X.cells[k]} for k in range(X.truncation + 1)]
    for k, level in enumerate(renaming):
        if len(set(level.values())) != len(level):
            raise DomainMismatch(f"Renaming collapses cells in degree {k}")
    faces = [{}] + [{renaming[k][c]: tuple(renaming[k - 1][f] for f in fs) for c, fs in X.faces[k].items()}
                    for k in range(1, X.truncation + 1)]
    degens = [{renaming[k][c]: tuple(renaming[k + 1][s] for s in ss) for c, ss in X.degens[k].items()}
              for k in range(X.truncation)] + [{}]
    cells = [tuple(renaming[k][c] for c in X.cells[k]) for k in range(X.truncation + 1)]
    renamed = FinSSet(X.truncation, tuple(cells), tuple(faces), tuple(degens))
    return renamed, SSetMap(X, renamed, tuple(renaming))


def coequalizer_with_map(f, g):
    if f.source != g.source or f.target != g.target:
        raise DomainMismatch("Coequalizer needs parallel maps")
    X, Y = f.source, f.target
    pairs = [[(f.mapping[k][c], g.mapping[k][c]) for c in X.cells[k]] for k in range(X.truncation + 1)]
    return quotient(Y, pairs)


def coequalizer(f, g):
    return coequalizer_with_map(f, g)[0]


# -- internal hom --------------------------------------------------------------------------------

@dataclass(frozen=True)
class InternalHom:
    """internal_hom(X, Y) together with the map behind every cell."""

    space: FinSSet
    maps: Tuple[Dict[str, SSetMap], ...]


def _cylinder_label(x, theta):
    return pair_label(x, simplex_label(theta.images))


def internal_hom_with_maps(X, Y, truncation=None, budget=None):
    """Degree-k cells are the maps X × Δ^k -> Y, named by SSetMap.label()."""
    T = min(X.truncation, Y.truncation)
    X, Y = truncate(X, T), truncate(Y, T)
    truncation = T if truncation is None else truncation
    if not 0 <= truncation <= T:
        raise DomainMismatch(f"Internal hom truncation {truncation} must lie in 0..{T}")
    budget = budget if budget is not None else get_budget('mapset_nodes')

    sources = [product(X, standard(k, T)) for k in range(truncation + 1)]
    maps = [{m.label(): m for m in mapset(sources[k], Y, budget)} for k in range(truncation + 1)]

    def precompose(phi, operator, target_degree):
        """phi ∘ (id × Δ^operator) as a label in degree target_degree."""
        table = _standard_cells(target_degree, T)
        source = sources[target_degree]
        mapping = []
        for j in range(T + 1):
            level = {}
            for x in X.cells[j]:
                for label, theta in table[j][1].items():
                    level[pair_label(x, label)] = phi.mapping[j][_cylinder_label(x, compose(theta, operator))]
            mapping.append(level)
        return SSetMap(source, Y, tuple(mapping)).label()

    cells = [list(level) for level in maps]

    def face(k, c, i):
        return precompose(maps[k][c], coface(i, k), k - 1)

    def degen(k, c, i):
        return precompose(maps[k][c], codegeneracy(i, k), k + 1)

    return InternalHom(from_functions(truncation, cells, face, degen), tuple(maps))


def internal_hom(X, Y, truncation=None, budget=None):
    return internal_hom_with_maps(X, Y, truncation, budget).space


# -- Segal condition and fundamental category ----------------------------------------------------

@dataclass(frozen=True)
class SegalResult:
    passed: bool
    degree: Optional[int] = None
    witness: Optional[dict] = None

    def __bool__(self):
        return self.passed


def spine(X, degree, cell):
    return tuple(X.act(cell, degree, se(i, degree)) for i in range(degree))


def spine_chains(X, length):
    """All tuples of edges (e_0, ..., e_{length-1}) with target(e_i) = source(e_{i+1})."""
    by_source = {}
    for e in X.cells[1]:
        by_source.setdefault(X.faces[1][e][1], []).append(e)
    chains = [(e,) for e in X.cells[1]]
    for _ in range(length - 1):
        chains = [c + (e,) for c in chains for e in by_source.get(X.faces[1][c[-1]][0], [])]
    return chains


def is_strict_segal(X):
    """Check that every spine map X_n -> X_1 ×_{X_0} ... ×_{X_0} X_1 is bijective."""
    for n in range(2, X.truncation + 1):
        seen = {}
        for cell in X.cells[n]:
            key = spine(X, n, cell)
            if key in seen:
                return SegalResult(False, n, {'reason': 'two cells share a spine',
                                              'cells': [seen[key], cell], 'spine': list(key)})
            seen[key] = cell
        for chain in spine_chains(X, n):
            if chain not in seen:
                return SegalResult(False, n, {'reason': 'spine without filler', 'spine': list(chain)})
    return SegalResult(True)


def fundamental_category(X):
    """The category whose nerve is X, for strict Segal X with D >= 2."""
    if X.truncation < 2:
        raise NotSegal(f"Truncation {X.truncation} is too small to read off composition")
    result = is_strict_segal(X)
    if not result:
        raise NotSegal(f"Not strict Segal in degree {result.degree}", result.witness)

    arrows = [(e, X.faces[1][e][1], X.faces[1][e][0]) for e in X.cells[1]]
    identities = {x: X.degens[0][x][0] for x in X.cells[0]}
    composition = {}
    for c in X.cells[2]:
        f, g = X.faces[2][c][2], X.faces[2][c][0]
        composition[(g, f)] = X.faces[2][c][1]
    try:
        return fincat.make_category(X.cells[0], arrows, identities, composition)
    except InvalidStructure as exc:
        raise NotSegal(f"Spine fillers do not compose into a category: {exc}", exc.location) from exc


# -- subsets -----------------------------------------------------------------------------------------

def closure(X, generators):
    """Smallest simplicial subset containing the given (degree, cell) pairs."""
    keep = [set() for _ in range(X.truncation + 1)]
    work = list(generators)
    while work:
        k, c = work.pop()
        if c in keep[k]:
            continue
        keep[k].add(c)
        if k >= 1:
            work.extend((k - 1, f) for f in X.faces[k][c])
        if k < X.truncation:
            work.extend((k + 1, s) for s in X.degens[k][c])
    return keep


def simplicial_subsets(X, budget=None):
    """Every simplicial subset, by brute force over sets of nondegenerate cells."""
    budget = budget if budget is not None else get_budget('functors')
    generators = [(k, c) for k in range(X.truncation + 1) for c in X.nondegenerate(k)]
    if 2 ** len(generators) > budget:
        raise BudgetExceeded(f"simplicial subsets over {len(generators)} nondegenerate cells", budget)
    seen = []
    keys = set()
    for mask in range(2 ** len(generators)):
        chosen = [g for bit, g in enumerate(generators) if mask >> bit & 1]
        keep = closure(X, chosen)
        key = tuple(frozenset(level) for level in keep)
        if key not in keys:
            keys.add(key)
            seen.append(restrict(X, keep))
    return seen
