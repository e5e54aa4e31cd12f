"""Finite categories, functors and relative categories.

A FinCategory stores its composition as a table keyed by ``(g, f)`` for
``f: a -> b`` and ``g: b -> c``; the value is the arrow ``g∘f``.
"""

from __future__ import annotations

import itertools
import logging
import string
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from scipy.cluster.hierarchy import DisjointSet

from src.exceptions import BudgetExceeded, DomainMismatch, InvalidStructure, NonTerminating
from src.utils import get_budget

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True, eq=False)
class FinCategory:
    """A finite category given by its composition table."""

    objects: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    identities: Mapping[str, str]
    composition: Mapping[Tuple[str, str], str]
    name: str = ''
    _by_id: Dict[str, Arrow] = field(default_factory=dict, repr=False)
    _homs: Dict[Tuple[str, str], Tuple[str, ...]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'objects', tuple(self.objects))
        object.__setattr__(self, 'arrows', tuple(self.arrows))
        object.__setattr__(self, 'identities', dict(self.identities))
        object.__setattr__(self, 'composition', dict(self.composition))
        self._by_id.clear()
        self._homs.clear()
        for arrow in self.arrows:
            self._by_id[arrow.id] = arrow
        for x in self.objects:
            for y in self.objects:
                self._homs[(x, y)] = ()
        for arrow in self.arrows:
            key = (arrow.src, arrow.tgt)
            if key in self._homs:
                self._homs[key] = self._homs[key] + (arrow.id,)

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (self.objects == other.objects and self.arrows == other.arrows
                and self.identities == other.identities and self.composition == other.composition)

    __hash__ = None

    def __repr__(self):
        label = self.name or 'FinCategory'
        return f"<{label}: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    # -- lookups -------------------------------------------------------

    def arrow(self, arrow_id):
        try:
            return self._by_id[arrow_id]
        except KeyError:
            raise DomainMismatch(f"Unknown arrow {arrow_id!r} in {self!r}") from None

    def src(self, arrow_id):
        return self.arrow(arrow_id).src

    def tgt(self, arrow_id):
        return self.arrow(arrow_id).tgt

    def hom(self, x, y):
        return self._homs.get((x, y), ())

    @property
    def arrow_ids(self):
        return tuple(a.id for a in self.arrows)

    def is_identity(self, arrow_id):
        arrow = self.arrow(arrow_id)
        return self.identities.get(arrow.src) == arrow_id

    def non_identity_arrows(self):
        return tuple(a.id for a in self.arrows if not self.is_identity(a.id))

    def compose(self, g, f):
        """g∘f for f: a -> b, g: b -> c."""
        if self.tgt(f) != self.src(g):
            raise DomainMismatch(f"{g} after {f} is not composable")
        return self.composition[(g, f)]

    def inverse(self, arrow_id):
        arrow = self.arrow(arrow_id)
        for candidate in self.hom(arrow.tgt, arrow.src):
            if (self.composition.get((candidate, arrow_id)) == self.identities[arrow.src]
                    and self.composition.get((arrow_id, candidate)) == self.identities[arrow.tgt]):
                return candidate
        return None

    def is_iso(self, arrow_id):
        return self.inverse(arrow_id) is not None

    def composable_pairs(self):
        for f in self.arrows:
            for g in self.arrows:
                if f.tgt == g.src:
                    yield g.id, f.id

    # -- validation ----------------------------------------------------

    def validate(self):
        """Check totality, associativity and unit laws; raise InvalidStructure."""
        if len(self._by_id) != len(self.arrows):
            raise InvalidStructure("Duplicate arrow ids", {'arrows': [a.id for a in self.arrows]})
        if len(set(self.objects)) != len(self.objects):
            raise InvalidStructure("Duplicate object ids", {'objects': list(self.objects)})
        known = set(self.objects)
        for arrow in self.arrows:
            if arrow.src not in known or arrow.tgt not in known:
                raise InvalidStructure(f"Arrow {arrow.id} has unknown endpoints", {'arrow': arrow.id})
        for x in self.objects:
            ident = self.identities.get(x)
            if ident is None or ident not in self._by_id:
                raise InvalidStructure(f"Object {x} has no identity", {'object': x})
            if self.src(ident) != x or self.tgt(ident) != x:
                raise InvalidStructure(f"Identity {ident} of {x} is not an endo-arrow", {'object': x})
        for g, f in self.composable_pairs():
            gf = self.composition.get((g, f))
            if gf is None:
                raise InvalidStructure(f"Composite of {g} after {f} missing", {'pair': [g, f]})
            if gf not in self._by_id or self.src(gf) != self.src(f) or self.tgt(gf) != self.tgt(g):
                raise InvalidStructure(f"Composite {g}∘{f} = {gf} has wrong endpoints", {'pair': [g, f]})
        for key in self.composition:
            g, f = key
            if g not in self._by_id or f not in self._by_id or self.tgt(f) != self.src(g):
                raise InvalidStructure(f"Composite defined on non-composable pair {key}", {'pair': list(key)})
        for f in self.arrows:
            if self.composition[(f.id, self.identities[f.src])] != f.id:
                raise InvalidStructure(f"Right unit law fails for {f.id}", {'arrow': f.id})
            if self.composition[(self.identities[f.tgt], f.id)] != f.id:
                raise InvalidStructure(f"Left unit law fails for {f.id}", {'arrow': f.id})
        for f in self.arrows:
            for g in self.arrows:
                if f.tgt != g.src:
                    continue
                gf = self.composition[(g.id, f.id)]
                for h in self.hom_from(g.tgt):
                    lhs = self.composition[(h, gf)]
                    rhs = self.composition[(self.composition[(h, g.id)], f.id)]
                    if lhs != rhs:
                        raise InvalidStructure(
                            f"Associativity fails for ({h}, {g.id}, {f.id})",
                            {'triple': [h, g.id, f.id]},
                        )
        return self

    def hom_from(self, x):
        return tuple(a.id for a in self.arrows if a.src == x)


def make_category(objects, arrows, identities, composition, name='', validate=True):
    """Build a FinCategory from plain data.

    Args:
        objects: iterable of object ids.
        arrows: iterable of ``(id, src, tgt)`` triples or Arrow instances.
        identities: mapping object -> identity arrow id.
        composition: mapping ``(g, f) -> g∘f`` or iterable of ``(g, f, gf)``.
    """
    arrow_list = [a if isinstance(a, Arrow) else Arrow(*a) for a in arrows]
    if not isinstance(composition, Mapping):
        composition = {(g, f): gf for g, f, gf in composition}
    category = FinCategory(tuple(objects), tuple(arrow_list), dict(identities), dict(composition), name)
    if validate:
        category.validate()
    return category


# -- builtins -------------------------------------------------------------

def linear(n):
    """The poset [n] = {0 < 1 < ... < n} as a category."""
    if n < 0:
        raise DomainMismatch(f"linear(n) needs n >= 0, got {n}")
    objects = [str(i) for i in range(n + 1)]
    arrows = [(f"{i}->{j}", str(i), str(j)) for i in range(n + 1) for j in range(i, n + 1)]
    identities = {str(i): f"{i}->{i}" for i in range(n + 1)}
    composition = {(f"{j}->{k}", f"{i}->{j}"): f"{i}->{k}"
                   for i in range(n + 1) for j in range(i, n + 1) for k in range(j, n + 1)}
    return make_category(objects, arrows, identities, composition, name=f"linear({n})")


def point():
    return make_category(['*'], [('id_*', '*', '*')], {'*': 'id_*'}, {('id_*', 'id_*'): 'id_*'}, name='point')


def empty():
    return make_category([], [], {}, {}, name='empty')


def interval():
    """I: two objects x, y and a single arrow x -> y."""
    return _codiscrete_like(with_inverse=False)


def bar_interval():
    """Ī: two objects and a single isomorphism between them."""
    return _codiscrete_like(with_inverse=True)


def _codiscrete_like(with_inverse):
    objects = ['x', 'y']
    arrows = [('id_x', 'x', 'x'), ('id_y', 'y', 'y'), ('f', 'x', 'y')]
    composition = {
        ('id_x', 'id_x'): 'id_x', ('id_y', 'id_y'): 'id_y',
        ('f', 'id_x'): 'f', ('id_y', 'f'): 'f',
    }
    if with_inverse:
        arrows.append(('g', 'y', 'x'))
        composition.update({
            ('g', 'id_y'): 'g', ('id_x', 'g'): 'g',
            ('g', 'f'): 'id_x', ('f', 'g'): 'id_y',
        })
    name = 'bar_interval' if with_inverse else 'interval'
    return make_category(objects, arrows, {'x': 'id_x', 'y': 'id_y'}, composition, name=name)


def discrete(n):
    """The discrete category on n objects."""
    objects = [str(i) for i in range(n)]
    arrows = [(f"id_{i}", str(i), str(i)) for i in range(n)]
    composition = {(f"id_{i}", f"id_{i}"): f"id_{i}" for i in range(n)}
    return make_category(objects, arrows, {str(i): f"id_{i}" for i in range(n)}, composition,
                         name=f"discrete({n})")


def cyclic_group(k):
    """The group Z/k as a one-object category."""
    arrows = [(f"g{i}", '*', '*') for i in range(k)]
    composition = {(f"g{j}", f"g{i}"): f"g{(i + j) % k}" for i in range(k) for j in range(k)}
    return make_category(['*'], arrows, {'*': 'g0'}, composition, name=f"Z/{k}")


def builtin(name, n=None):
    """Named categories: point, empty, linear (needs n), interval, bar_interval, discrete, cyclic."""
    factories = {
        'point': point,
        'empty': empty,
        'interval': interval,
        'bar_interval': bar_interval,
    }
    if name in factories:
        return factories[name]()
    if name == 'linear':
        return linear(0 if n is None else n)
    if name == 'discrete':
        return discrete(2 if n is None else n)
    if name == 'cyclic':
        return cyclic_group(2 if n is None else n)
    raise DomainMismatch(f"Unknown builtin category {name!r}")


def opposite(category):
    """Reverse every arrow."""
    arrows = [Arrow(a.id, a.tgt, a.src) for a in category.arrows]
    composition = {(f, g): gf for (g, f), gf in category.composition.items()}
    name = f"{category.name}^op" if category.name else ''
    return make_category(category.objects, arrows, category.identities, composition, name=name)


# -- functors ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Functor:
    source: FinCategory
    target: FinCategory
    object_map: Mapping[str, str]
    arrow_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, 'object_map', dict(self.object_map))
        object.__setattr__(self, 'arrow_map', dict(self.arrow_map))

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.object_map == other.object_map and self.arrow_map == other.arrow_map)

    __hash__ = None

    def validate(self):
        A, B = self.source, self.target
        if set(self.object_map) != set(A.objects) or set(self.arrow_map) != set(A.arrow_ids):
            raise InvalidStructure("Functor is not total on its source")
        for a in A.arrows:
            image = B.arrow(self.arrow_map[a.id])
            if image.src != self.object_map[a.src] or image.tgt != self.object_map[a.tgt]:
                raise InvalidStructure(f"Functor breaks endpoints of {a.id}", {'arrow': a.id})
        for x in A.objects:
            if self.arrow_map[A.identities[x]] != B.identities[self.object_map[x]]:
                raise InvalidStructure(f"Functor breaks the identity of {x}", {'object': x})
        for (g, f), gf in A.composition.items():
            if B.compose(self.arrow_map[g], self.arrow_map[f]) != self.arrow_map[gf]:
                raise InvalidStructure(f"Functor breaks composition {g}∘{f}", {'pair': [g, f]})
        return self

    def then(self, other):
        """Composite: first self, then other."""
        if other.source != self.target:
            raise DomainMismatch("Functors are not composable")
        return Functor(self.source, other.target,
                       {x: other.object_map[y] for x, y in self.object_map.items()},
                       {a: other.arrow_map[b] for a, b in self.arrow_map.items()})

    def is_fully_faithful(self):
        A, B = self.source, self.target
        for x in A.objects:
            for y in A.objects:
                images = [self.arrow_map[a] for a in A.hom(x, y)]
                target = B.hom(self.object_map[x], self.object_map[y])
                if len(set(images)) != len(images) or set(images) != set(target):
                    return False
        return True

    def is_essentially_surjective(self):
        classes = isomorphism_classes(self.target)
        hit = {self.object_map[x] for x in self.source.objects}
        return all(any(y in hit for y in cls) for cls in classes)

    def is_equivalence(self):
        return self.is_fully_faithful() and self.is_essentially_surjective()

    def is_isomorphism(self):
        return (len(set(self.object_map.values())) == len(self.target.objects) == len(self.source.objects)
                and len(set(self.arrow_map.values())) == len(self.target.arrows) == len(self.source.arrows))


def identity_functor(category):
    return Functor(category, category, {x: x for x in category.objects}, {a: a for a in category.arrow_ids})


def iter_functors(A, B, budget=None):
    """Yield every functor A -> B in deterministic order."""
    budget = budget if budget is not None else get_budget('functors')
    free_arrows = A.non_identity_arrows()
    # table entries touching each arrow, for incremental composition checks
    touching = {a: [] for a in A.arrow_ids}
    for (g, f), gf in A.composition.items():
        for a in {g, f, gf}:
            touching[a].append((g, f, gf))

    position = {x: i for i, x in enumerate(A.objects)}
    # arrows whose ends are both assigned once object i is placed
    closing = [[] for _ in A.objects]
    for a in free_arrows:
        arrow = A.arrow(a)
        closing[max(position[arrow.src], position[arrow.tgt])].append(arrow)

    steps = 0

    def object_maps(index, images):
        """Object assignments in lexicographic order, pruned when some arrow has no possible image."""
        nonlocal steps
        if index == len(A.objects):
            yield dict(zip(A.objects, images))
            return
        for y in B.objects:
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"functor enumeration {A!r} -> {B!r}", budget)
            chosen = images + (y,)
            if all(B.hom(chosen[position[arrow.src]], chosen[position[arrow.tgt]]) for arrow in closing[index]):
                yield from object_maps(index + 1, chosen)

    for object_map in object_maps(0, ()):
        arrow_map = {A.identities[x]: B.identities[object_map[x]] for x in A.objects}

        def consistent(a):
            for g, f, gf in touching[a]:
                if g in arrow_map and f in arrow_map and gf in arrow_map:
                    if B.composition[(arrow_map[g], arrow_map[f])] != arrow_map[gf]:
                        return False
            return True

        if not all(consistent(A.identities[x]) for x in A.objects):
            continue

        def search(index):
            nonlocal steps
            if index == len(free_arrows):
                yield Functor(A, B, object_map, dict(arrow_map))
                return
            a = free_arrows[index]
            arrow = A.arrow(a)
            for candidate in B.hom(object_map[arrow.src], object_map[arrow.tgt]):
                steps += 1
                if steps > budget:
                    raise BudgetExceeded(f"functor enumeration {A!r} -> {B!r}", budget)
                arrow_map[a] = candidate
                if consistent(a):
                    yield from search(index + 1)
                del arrow_map[a]

        yield from search(0)


def enumerate_functors(A, B, budget=None):
    return list(iter_functors(A, B, budget))


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    witness: Optional[Functor] = None

    def __bool__(self):
        return self.equivalent


def are_equivalent(A, B, budget=None):
    """Decide whether A and B are equivalent; the witness is the first equivalence found."""
    if len(isomorphism_classes(A)) != len(isomorphism_classes(B)):
        return EquivalenceResult(False)
    for functor in iter_functors(A, B, budget):
        if functor.is_equivalence():
            return EquivalenceResult(True, functor)
    return EquivalenceResult(False)


# -- isomorphism classes and rigidity ------------------------------------------

def isomorphism_classes(category):
    """Partition of the objects into isomorphism classes, in object order."""
    if not category.objects:
        return []
    classes = DisjointSet(category.objects)
    for arrow in category.arrows:
        if arrow.src != arrow.tgt and category.is_iso(arrow.id):
            classes.merge(arrow.src, arrow.tgt)
    order = {x: i for i, x in enumerate(category.objects)}
    subsets = [sorted(s, key=order.get) for s in classes.subsets()]
    return sorted(subsets, key=lambda s: order[s[0]])


def is_rigid(category):
    """True iff every automorphism is an identity."""
    for x in category.objects:
        for a in category.hom(x, x):
            if a != category.identities[x] and category.is_iso(a):
                return False
    return True


def is_skeletal(category):
    return all(len(cls) == 1 for cls in isomorphism_classes(category))


def is_gaunt(category):
    """Every isomorphism is an identity."""
    return all(category.is_identity(a.id) or not category.is_iso(a.id) for a in category.arrows)


def core(category):
    """The maximal subgroupoid."""
    keep = [a for a in category.arrows if category.is_iso(a.id)]
    ids = {a.id for a in keep}
    composition = {k: v for k, v in category.composition.items() if k[0] in ids and k[1] in ids}
    return make_category(category.objects, keep, category.identities, composition,
                         name=f"core({category.name})" if category.name else '')


def subcategory(category, objects, arrows):
    """Full data of the subcategory on the given objects and arrow ids (identities added)."""
    objects = [x for x in category.objects if x in set(objects)]
    ids = set(arrows) | {category.identities[x] for x in objects}
    keep = [a for a in category.arrows if a.id in ids]
    composition = {k: v for k, v in category.composition.items() if k[0] in ids and k[1] in ids}
    return make_category(objects, keep, {x: category.identities[x] for x in objects}, composition)


# -- canonical forms ------------------------------------------------------------

def degree_signature(category):
    """Isomorphism invariant per object: (endo count, sorted out-degrees, sorted in-degrees)."""
    local = []
    for x in category.objects:
        out_degrees = tuple(sorted(len(category.hom(x, y)) for y in category.objects if y != x))
        in_degrees = tuple(sorted(len(category.hom(y, x)) for y in category.objects if y != x))
        iso_endos = sum(1 for a in category.hom(x, x) if category.is_iso(a))
        local.append((len(category.hom(x, x)), iso_endos, out_degrees, in_degrees))
    return local


def _relabelings(category, budget):
    """Yield (object order, per-hom arrow orders) compatible with the degree signature."""
    signature = degree_signature(category)
    order = sorted(range(len(category.objects)), key=lambda i: signature[i])
    groups = [list(g) for _, g in itertools.groupby(order, key=lambda i: signature[i])]
    object_orders = [list(itertools.chain.from_iterable(p))
                     for p in itertools.product(*[itertools.permutations(g) for g in groups])]
    count = 0
    for object_order in object_orders:
        objs = [category.objects[i] for i in object_order]
        homs = [[a for a in category.hom(x, y) if not category.is_identity(a)]
                for x in objs for y in objs]
        for arrow_orders in itertools.product(*[itertools.permutations(h) for h in homs]):
            count += 1
            if count > budget:
                raise BudgetExceeded("canonical form relabelings", budget)
            yield objs, arrow_orders


def canonical_form(category, budget=None):
    """Return (key, object_labels, arrow_labels): the minimal encoding over relabelings.

    Two categories are isomorphic iff their keys are equal; the labels give the
    relabeling that attains the minimum.
    """
    budget = budget if budget is not None else get_budget('functors')
    n = len(category.objects)
    best = None
    for objs, arrow_orders in _relabelings(category, budget):
        object_label = {x: i for i, x in enumerate(objs)}
        arrow_label = {category.identities[x]: (i, i, 0) for i, x in enumerate(objs)}
        hom_sizes = []
        position = 0
        for i, x in enumerate(objs):
            for j, y in enumerate(objs):
                hom_sizes.append(len(category.hom(x, y)))
                for r, a in enumerate(arrow_orders[position], start=1):
                    arrow_label[a] = (i, j, r)
                position += 1
        table = tuple(sorted((arrow_label[g], arrow_label[f], arrow_label[gf])
                             for (g, f), gf in category.composition.items()))
        key = (n, tuple(hom_sizes), table)
        if best is None or key < best[0]:
            best = (key, object_label, arrow_label)
    if best is None:
        return (0, (), ()), {}, {}
    return best


def find_isomorphism(A, B, budget=None):
    """Return an isomorphism A -> B or None."""
    if len(A.objects) != len(B.objects) or len(A.arrows) != len(B.arrows):
        return None
    if sorted(degree_signature(A)) != sorted(degree_signature(B)):
        return None
    key_a, objects_a, arrows_a = canonical_form(A, budget)
    key_b, objects_b, arrows_b = canonical_form(B, budget)
    if key_a != key_b:
        return None
    object_back = {v: k for k, v in objects_b.items()}
    arrow_back = {v: k for k, v in arrows_b.items()}
    functor = Functor(A, B,
                      {x: object_back[label] for x, label in objects_a.items()},
                      {a: arrow_back[label] for a, label in arrows_a.items()})
    return functor.validate()


def is_isomorphic(A, B, budget=None):
    return find_isomorphism(A, B, budget) is not None


# -- pushouts along object identifications ----------------------------------------

@dataclass(frozen=True)
class PushoutResult:
    category: FinCategory
    left: Functor
    right: Functor


def _pushout(A, B, glue, budget):
    for a, b in glue:
        if a not in A.objects or b not in B.objects:
            raise DomainMismatch(f"Glue pair ({a}, {b}) references unknown objects")

    tagged = [('A', x) for x in A.objects] + [('B', y) for y in B.objects]
    classes = DisjointSet(tagged)
    for a, b in glue:
        classes.merge(('A', a), ('B', b))

    order = {t: i for i, t in enumerate(tagged)}
    class_name = {}
    names = []
    for member in tagged:
        root = classes[member]
        if root not in class_name:
            members = sorted(classes.subset(member), key=order.get)
            class_name[root] = '+'.join(f"{side}.{x}" for side, x in members)
            names.append(class_name[root])

    def quotient(side, x):
        return class_name[classes[(side, x)]]

    sides = {'A': A, 'B': B}
    letters = [(side, a) for side, C in sides.items() for a in C.non_identity_arrows()]
    letter_src = {l: quotient(l[0], sides[l[0]].src(l[1])) for l in letters}
    letter_tgt = {l: quotient(l[0], sides[l[0]].tgt(l[1])) for l in letters}

    def reducible(first, second):
        return first[0] == second[0] and sides[first[0]].tgt(first[1]) == sides[second[0]].src(second[1])

    def push(stack, letter):
        while stack and reducible(stack[-1], letter):
            side = letter[0]
            C = sides[side]
            combined = C.compose(letter[1], stack.pop()[1])
            if C.is_identity(combined):
                return
            letter = (side, combined)
        stack.append(letter)

    # normal words: no adjacent letters composable inside one side
    words = []
    level = [(l,) for l in letters]
    steps = 0
    while level:
        words.extend(level)
        following = []
        for word in level:
            for letter in letters:
                if letter_src[letter] != letter_tgt[word[-1]] or reducible(word[-1], letter):
                    continue
                steps += 1
                if steps > budget:
                    raise NonTerminating("pushout arrow closure", budget)
                following.append(word + (letter,))
        level = following

    def word_id(word):
        return '∘'.join(f"{side}.{a}" for side, a in reversed(word))

    identities = {name: f"id_{name}" for name in names}
    arrows = [Arrow(identities[name], name, name) for name in names]
    arrows += [Arrow(word_id(w), letter_src[w[0]], letter_tgt[w[-1]]) for w in words]
    word_of = {word_id(w): w for w in words}
    for name in names:
        word_of[identities[name]] = ()

    composition = {}
    for f in arrows:
        for g in arrows:
            if f.tgt != g.src:
                continue
            stack = []
            for letter in word_of[f.id] + word_of[g.id]:
                push(stack, letter)
            composition[(g.id, f.id)] = word_id(tuple(stack)) if stack else identities[f.src]

    category = make_category(names, arrows, identities, composition,
                             name=f"{A.name or 'A'}+{B.name or 'B'}")

    def injection(side, C):
        arrow_map = {}
        for a in C.arrow_ids:
            if C.is_identity(a):
                arrow_map[a] = identities[quotient(side, C.src(a))]
            else:
                arrow_map[a] = word_id(((side, a),))
        return Functor(C, category, {x: quotient(side, x) for x in C.objects}, arrow_map).validate()

    logger.debug(f"pushout: {len(names)} objects, {len(arrows)} arrows after {steps} steps")
    return PushoutResult(category, injection('A', A), injection('B', B))


def pushout_injections(A, B, glue, budget=None):
    budget = budget if budget is not None else get_budget('pushout_steps')
    return _pushout(A, B, list(glue), budget)


def pushout_over_objects(A, B, glue, budget=None):
    """Colimit of A <- discrete(glue) -> B.

    Arrows of the result are the reduced words in the arrows of A and B;
    NonTerminating is raised if word generation exceeds the step budget.
    """
    return pushout_injections(A, B, glue, budget).category


def spine_pushout(n, budget=None):
    """[1] ∐_[0] [1] ∐_[0] ... ∐_[0] [1] with n copies of [1]."""
    if n == 0:
        return linear(0)
    result = linear(1)
    right_end = '1'
    for _ in range(n - 1):
        glued = pushout_injections(result, linear(1), [(right_end, '0')], budget)
        result = glued.category
        right_end = glued.right.object_map['1']
    return result


# -- relative categories ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RelCategory:
    base: FinCategory
    weq: FrozenSet[str]

    def __post_init__(self):
        object.__setattr__(self, 'weq', frozenset(self.weq))

    def __eq__(self, other):
        if not isinstance(other, RelCategory):
            return NotImplemented
        return self.base == other.base and self.weq == other.weq

    __hash__ = None

    def validate(self):
        base = self.base
        unknown = self.weq - set(base.arrow_ids)
        if unknown:
            raise InvalidStructure(f"Weak equivalences {sorted(unknown)} are not arrows")
        for x in base.objects:
            if base.identities[x] not in self.weq:
                raise InvalidStructure(f"Identity of {x} is not a weak equivalence", {'object': x})
        for g, f in base.composable_pairs():
            if g in self.weq and f in self.weq and base.compose(g, f) not in self.weq:
                raise InvalidStructure(f"Weak equivalences not closed under {g}∘{f}", {'pair': [g, f]})
        return self


def with_isomorphisms(category):
    return RelCategory(category, {a for a in category.arrow_ids if category.is_iso(a)}).validate()


def with_all_arrows(category):
    return RelCategory(category, set(category.arrow_ids)).validate()


def with_identities(category):
    return RelCategory(category, set(category.identities.values())).validate()


def composition_closure(category, arrows):
    closed = set(arrows) | set(category.identities.values())
    changed = True
    while changed:
        changed = False
        for g, f in category.composable_pairs():
            if g in closed and f in closed:
                gf = category.compose(g, f)
                if gf not in closed:
                    closed.add(gf)
                    changed = True
    return closed


def random_preorder(rng, max_objects):
    """A random finite preorder as a category, drawn from a numpy Generator."""
    k = int(rng.integers(1, max_objects + 1))
    relation = [[i == j or bool(rng.random() < 0.4) for j in range(k)] for i in range(k)]
    for m in range(k):
        for i in range(k):
            for j in range(k):
                if relation[i][m] and relation[m][j]:
                    relation[i][j] = True
    objects = [str(i) for i in range(k)]
    arrows = [(f"{i}->{j}", str(i), str(j)) for i in range(k) for j in range(k) if relation[i][j]]
    composition = {(f"{j}->{m}", f"{i}->{j}"): f"{i}->{m}"
                   for i in range(k) for j in range(k) for m in range(k)
                   if relation[i][j] and relation[j][m]}
    identities = {str(i): f"{i}->{i}" for i in range(k)}
    return make_category(objects, arrows, identities, composition, name=f"preorder{k}")


def random_relcategory(rng, max_objects=3):
    base = random_preorder(rng, max_objects)
    chosen = [a for a in base.non_identity_arrows() if rng.random() < 0.5]
    return RelCategory(base, composition_closure(base, chosen)).validate()


# -- exhaustive corpus ---------------------------------------------------------------

def _hom_size_configs(k, max_arrows):
    cells = [(i, j) for i in range(k) for j in range(k)]
    base = [1 if i == j else 0 for i, j in cells]
    spare = max_arrows - k
    if spare < 0:
        return
    for extra in itertools.product(range(spare + 1), repeat=len(cells)):
        if sum(extra) <= spare:
            yield {cell: b + e for cell, b, e in zip(cells, base, extra)}


def _tables_for_config(k, sizes, budget_state):
    """Yield every category with objects 0..k-1 and the given hom sizes."""
    objects = [str(i) for i in range(k)]
    identities = {str(i): f"id_{i}" for i in range(k)}
    names = iter(string.ascii_lowercase)
    arrows = [Arrow(f"id_{i}", str(i), str(i)) for i in range(k)]
    homs = {(i, j): ([f"id_{i}"] if i == j else []) for i in range(k) for j in range(k)}
    free = []
    for (i, j), size in sorted(sizes.items()):
        for _ in range(size - (1 if i == j else 0)):
            name = next(names)
            arrows.append(Arrow(name, str(i), str(j)))
            homs[(i, j)].append(name)
            free.append((name, i, j))

    endpoints = {name: (i, j) for name, i, j in free}
    pairs = [(g, f) for f in endpoints for g in endpoints if endpoints[f][1] == endpoints[g][0]]
    choices = [homs[(endpoints[f][0], endpoints[g][1])] for g, f in pairs]
    for i in range(k):
        endpoints[f"id_{i}"] = (i, i)
    triples = [(h, g, f) for f in endpoints for g in endpoints for h in endpoints
               if endpoints[f][1] == endpoints[g][0] and endpoints[g][1] == endpoints[h][0]
               and not (f.startswith('id_') or g.startswith('id_') or h.startswith('id_'))]
    table = {}

    def comp(g, f):
        if g.startswith('id_'):
            return f
        if f.startswith('id_'):
            return g
        return table.get((g, f))

    def associative():
        for h, g, f in triples:
            hg = comp(h, g)
            gf = comp(g, f)
            if hg is None or gf is None:
                continue
            lhs = comp(hg, f)
            rhs = comp(h, gf)
            if lhs is not None and rhs is not None and lhs != rhs:
                return False
        return True

    def search(index):
        if index == len(pairs):
            composition = {}
            for f in endpoints:
                for g in endpoints:
                    if endpoints[f][1] == endpoints[g][0]:
                        composition[(g, f)] = comp(g, f)
            yield make_category(objects, arrows, identities, composition, validate=False)
            return
        for value in choices[index]:
            budget_state['steps'] += 1
            if budget_state['steps'] > budget_state['budget']:
                raise BudgetExceeded("corpus generation", budget_state['budget'])
            table[pairs[index]] = value
            if associative():
                yield from search(index + 1)
            del table[pairs[index]]

    yield from search(0)


def generate_corpus(max_objects=2, max_arrows=5, budget=None):
    """All finite categories within the bounds, one per isomorphism class."""
    budget_state = {'steps': 0, 'budget': budget if budget is not None else get_budget('corpus_tables')}
    seen = set()
    corpus = []
    for k in range(max_objects + 1):
        for sizes in _hom_size_configs(k, max_arrows):
            for category in _tables_for_config(k, sizes, budget_state):
                signature = tuple(sorted(degree_signature(category)))
                key = (signature, canonical_form(category)[0])
                if key in seen:
                    continue
                seen.add(key)
                category.validate()
                corpus.append(category)
    for index, category in enumerate(corpus):
        object.__setattr__(category, 'name', f"cat{index:03d}")
    logger.info(f"generate_corpus({max_objects}, {max_arrows}): {len(corpus)} categories "
                f"from {budget_state['steps']} table steps")
    return corpus


# -- interval characterization ----------------------------------------------------------

def segal_subobjects(category, truncation=3, budget=None):
    """Strict-Segal simplicial subsets of the nerve, up to isomorphism.

    A simplicial subset of a nerve satisfying the strict Segal condition is
    the nerve of a subcategory, so candidates come from subcategories; each is
    re-checked with is_strict_segal on its nerve. Returns a list of
    representative subcategories, one per isomorphism class.
    """
    from src import sset

    budget = budget if budget is not None else get_budget('functors')
    free = category.non_identity_arrows()
    if 2 ** len(free) * 2 ** len(category.objects) > budget:
        raise BudgetExceeded("subcategory enumeration", budget)

    representatives = []
    for mask in range(2 ** len(free)):
        chosen = [a for bit, a in enumerate(free) if mask >> bit & 1]
        ids = set(chosen) | set(category.identities.values())
        if any(category.compose(g, f) not in ids
               for g, f in category.composable_pairs() if g in chosen and f in chosen):
            continue
        needed = {category.src(a) for a in chosen} | {category.tgt(a) for a in chosen}
        optional = [x for x in category.objects if x not in needed]
        for extra in itertools.product([False, True], repeat=len(optional)):
            objects = needed | {x for x, keep in zip(optional, extra) if keep}
            sub = subcategory(category, objects, chosen)
            if not sset.is_strict_segal(sset.nerve(sub, truncation)).passed:
                continue
            if not any(is_isomorphic(sub, rep) for rep in representatives):
                representatives.append(sub)
    return representatives


@dataclass
class IntervalProperties:
    category: FinCategory
    two_rigid_classes: bool
    not_discrete_pair: bool
    four_subobjects: bool
    subobject_classes: List[str]

    @property
    def matches(self):
        return self.two_rigid_classes and self.not_discrete_pair and self.four_subobjects


def _subobject_label(sub, full):
    if not sub.objects:
        return 'empty'
    if is_isomorphic(sub, point()):
        return 'point'
    if is_isomorphic(sub, discrete(2)):
        return 'point+point'
    if is_isomorphic(sub, full):
        return 'full'
    return f"other({len(sub.objects)} objects, {len(sub.arrows)} arrows)"


def interval_properties(category, truncation=3, budget=None):
    two_classes = len(isomorphism_classes(category)) == 2 and is_rigid(category)
    not_discrete = not are_equivalent(category, discrete(2), budget).equivalent
    labels = [_subobject_label(sub, category) for sub in segal_subobjects(category, truncation, budget)]
    four = sorted(labels) == sorted(['empty', 'point', 'point+point', 'full'])
    return IntervalProperties(category, two_classes, not_discrete, four, labels)


def characterize_interval(corpus, truncation=3, budget=None):
    """Categories in the corpus with the three characterizing properties of I."""
    matches = []
    for category in corpus:
        properties = interval_properties(category, truncation, budget)
        if properties.matches:
            matches.append(properties)
    return matches
