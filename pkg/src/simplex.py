"""Combinatorics of the simplex category.

Objects are the ordinals [n] = {0 < 1 < ... < n}; morphisms are weakly
increasing maps stored as full image sequences, so composition is a table
lookup and generator words only appear when a map is displayed.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from scipy.special import comb

from src.exceptions import BudgetExceeded, DomainMismatch, IndexOutOfRange
from src.utils import get_budget, get_setting

logger = logging.getLogger(__name__)

_TEXT_FORM = re.compile(r'^\s*(\d+)\s*->\s*(\d+)\s*:\s*\[([\d\s,]*)\]\s*$')


@dataclass(frozen=True, order=True)
class SimplexMap:
    """A monotone map [domain] -> [codomain]."""

    domain: int
    codomain: int
    images: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'images', tuple(int(i) for i in self.images))
        if self.domain < 0 or self.codomain < 0:
            raise DomainMismatch(f"Negative ordinal in {self.domain}->{self.codomain}")
        if len(self.images) != self.domain + 1:
            raise DomainMismatch(
                f"Map from [{self.domain}] needs {self.domain + 1} images, got {len(self.images)}"
            )
        if any(i < 0 or i > self.codomain for i in self.images):
            raise DomainMismatch(f"Images {self.images} leave [{self.codomain}]")
        if any(a > b for a, b in zip(self.images, self.images[1:])):
            raise DomainMismatch(f"Images {self.images} are not weakly increasing")

    def __str__(self):
        return f"{self.domain}->{self.codomain}:[{','.join(map(str, self.images))}]"

    def __call__(self, k):
        return self.images[k]

    @classmethod
    def parse(cls, text):
        """Parse the text form ``n->m:[i0,...,in]``."""
        match = _TEXT_FORM.match(text)
        if not match:
            raise DomainMismatch(f"Not a simplex map: {text!r}")
        n, m, body = match.groups()
        images = [int(tok) for tok in body.replace(' ', '').split(',') if tok]
        return cls(int(n), int(m), tuple(images))

    @property
    def is_injective(self):
        return len(set(self.images)) == len(self.images)

    @property
    def is_surjective(self):
        return set(self.images) == set(range(self.codomain + 1))

    @property
    def is_identity(self):
        return self.domain == self.codomain and self.images == tuple(range(self.domain + 1))


def identity(n):
    return SimplexMap(n, n, tuple(range(n + 1)))


def coface(i, n):
    """The injection [n-1] -> [n] that skips i."""
    if n < 1 or not 0 <= i <= n:
        raise IndexOutOfRange(f"coface index {i} invalid for [{n}]")
    return SimplexMap(n - 1, n, tuple(k if k < i else k + 1 for k in range(n)))


def codegeneracy(i, n):
    """The surjection [n+1] -> [n] that hits i twice."""
    if n < 0 or not 0 <= i <= n:
        raise IndexOutOfRange(f"codegeneracy index {i} invalid for [{n}]")
    return SimplexMap(n + 1, n, tuple(k if k <= i else k - 1 for k in range(n + 2)))


def vertex(i, n):
    """The map [0] -> [n] hitting i."""
    if not 0 <= i <= n:
        raise IndexOutOfRange(f"vertex {i} not in [{n}]")
    return SimplexMap(0, n, (i,))


def constant(k, i, n):
    """The constant map [k] -> [n] with value i."""
    if not 0 <= i <= n:
        raise IndexOutOfRange(f"value {i} not in [{n}]")
    return SimplexMap(k, n, (i,) * (k + 1))


def compose(f, g):
    """Return g after f, i.e. first f then g."""
    if f.codomain != g.domain:
        raise DomainMismatch(f"Cannot compose {f} then {g}: [{f.codomain}] != [{g.domain}]")
    return SimplexMap(f.domain, g.codomain, tuple(g.images[k] for k in f.images))


def se(i, n):
    """The i-th spine edge [1] -> [n], sending 0 to i and 1 to i+1."""
    if n < 1 or not 0 <= i < n:
        raise IndexOutOfRange(f"spine index {i} invalid for [{n}]")
    return SimplexMap(1, n, (i, i + 1))


def count_maps(n, m):
    """|Hom([n], [m])| = C(n+m+1, n+1)."""
    return int(comb(n + m + 1, n + 1, exact=True))


def enumerate_maps(n, m, budget=None):
    """All monotone maps [n] -> [m] in lexicographic order of their images."""
    if n < 0 or m < 0:
        raise IndexOutOfRange(f"enumerate_maps needs n, m >= 0, got {n}, {m}")
    budget = budget if budget is not None else get_budget('enumeration')
    expected = count_maps(n, m)
    if expected > budget:
        raise BudgetExceeded(f"enumerate_maps({n}, {m}) with {expected} maps", budget)

    # combinations_with_replacement yields weakly increasing tuples lexicographically
    return [SimplexMap(n, m, images)
            for images in itertools.combinations_with_replacement(range(m + 1), n + 1)]


def reverse_map(f):
    """Conjugate by order reversal: k -> m - f(n - k)."""
    n, m = f.domain, f.codomain
    return SimplexMap(n, m, tuple(m - f.images[n - k] for k in range(n + 1)))


def factorize(f):
    """Canonical generator word for f.

    Returns a list of ``(kind, index, target)`` with kind ``'d'`` (coface
    into [target]) or ``'s'`` (codegeneracy onto [target]). Read left to
    right the word is ``d_{i1} ... d_{is} s_{j1} ... s_{jt}`` with the i
    descending and the j ascending; the rightmost generator applies first.
    """
    missing = [i for i in range(f.codomain + 1) if i not in f.images]
    repeats = [j for j in range(f.domain) if f.images[j] == f.images[j + 1]]

    word = []
    target = f.codomain
    for i in sorted(missing, reverse=True):
        word.append(('d', i, target))
        target -= 1

    # codegeneracies are listed in ascending order, the last one acts first
    target = f.domain - len(repeats)
    for j in repeats:
        word.append(('s', j, target))
        target += 1
    return word


def word_to_map(word, domain):
    """Recompose a generator word produced by factorize."""
    current = identity(domain)
    for kind, index, target in reversed(word):
        generator = coface(index, target) if kind == 'd' else codegeneracy(index, target)
        current = compose(current, generator)
    return current


def format_word(word):
    if not word:
        return 'id'
    return ' '.join(f"{'δ' if kind == 'd' else 'σ'}{index}" for kind, index, _ in word)


def cosimplicial_identity_violations(max_degree=4):
    """Check the cosimplicial identities on generators up to max_degree.

    Returns a list of human readable violations; empty when all hold.
    """
    violations = []

    def record(name, lhs, rhs):
        if lhs != rhs:
            violations.append(f"{name}: {lhs} != {rhs}")

    for n in range(1, max_degree + 1):
        # d_j d_i = d_i d_{j-1} for i < j, maps [n-1] -> [n+1]
        if n + 1 <= max_degree:
            for j in range(n + 2):
                for i in range(j):
                    record(f"d{j}d{i} (n={n})",
                           compose(coface(i, n), coface(j, n + 1)),
                           compose(coface(j - 1, n), coface(i, n + 1)))

    for n in range(0, max_degree):
        # s_j s_i = s_i s_{j+1} for i <= j, maps [n+2] -> [n]
        if n + 2 <= max_degree:
            for j in range(n + 1):
                for i in range(j + 1):
                    record(f"s{j}s{i} (n={n})",
                           compose(codegeneracy(i, n + 1), codegeneracy(j, n)),
                           compose(codegeneracy(j + 1, n + 1), codegeneracy(i, n)))

    for n in range(0, max_degree):
        # mixed identities, s_j d_i : [n] -> [n]
        if n + 1 > max_degree:
            continue
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = compose(coface(i, n + 1), codegeneracy(j, n))
                if i < j:
                    rhs = compose(codegeneracy(j - 1, n - 1), coface(i, n)) if n >= 1 else None
                elif i in (j, j + 1):
                    rhs = identity(n)
                else:
                    rhs = compose(codegeneracy(j, n - 1), coface(i - 1, n)) if n >= 1 else None
                if rhs is not None:
                    record(f"s{j}d{i} (n={n})", lhs, rhs)
    return violations


@dataclass(frozen=True)
class DeltaAutomorphism:
    """An object-fixing automorphism of the truncation of Δ up to max_degree.

    ``permutations[n]`` is the induced bijection on vertices of [n]; every
    other map is conjugated by these permutations.
    """

    max_degree: int
    permutations: Tuple[Tuple[int, ...], ...]

    def apply(self, f):
        source = self.permutations[f.domain]
        target = self.permutations[f.codomain]
        images = [0] * (f.domain + 1)
        for j in range(f.domain + 1):
            images[source[j]] = target[f.images[j]]
        return SimplexMap(f.domain, f.codomain, tuple(images))

    def compose(self, other):
        perms = tuple(tuple(self.permutations[n][other.permutations[n][k]] for k in range(n + 1))
                      for n in range(self.max_degree + 1))
        return DeltaAutomorphism(self.max_degree, perms)

    @property
    def is_identity(self):
        return all(p == tuple(range(len(p))) for p in self.permutations)

    @property
    def is_reversal(self):
        return all(p == tuple(reversed(range(len(p)))) for p in self.permutations)

    @property
    def name(self):
        if self.is_identity:
            return 'identity'
        if self.is_reversal:
            return 'reversal'
        return 'other'

    def table(self):
        """Mapping table {(k, n): {str(f): str(F(f))}} over all hom-sets."""
        result = {}
        for k in range(self.max_degree + 1):
            for n in range(self.max_degree + 1):
                result[(k, n)] = {str(f): str(self.apply(f)) for f in enumerate_maps(k, n)}
        return result


def automorphisms(max_degree, budget=None):
    """Exhaustively search the object-fixing automorphisms of Δ up to max_degree.

    An object-fixing functor F is determined by its bijections on the vertex
    sets Hom([0], [n]): a map f: [k] -> [n] is determined by its values on
    vertices, and F(f)(π_k(j)) = π_n(f(j)). The search therefore runs over
    tuples of vertex permutations, keeping those whose conjugation sends every
    monotone map to a monotone map; each survivor is then verified to
    preserve identities and composition on every composable pair.
    """
    cap = get_setting('truncation', 'automorphism_cap')
    budget = budget if budget is not None else get_budget('enumeration')
    if max_degree < 0:
        raise IndexOutOfRange(f"max_degree must be >= 0, got {max_degree}")
    if max_degree > cap:
        raise BudgetExceeded(f"automorphisms({max_degree}) beyond degree cap", cap)

    homs = {(k, n): enumerate_maps(k, n, budget)
            for k in range(max_degree + 1) for n in range(max_degree + 1)}
    steps = 0
    found = []

    def conjugate(f, perms):
        source, target = perms[f.domain], perms[f.codomain]
        images = [0] * (f.domain + 1)
        for j in range(f.domain + 1):
            images[source[j]] = target[f.images[j]]
        return images

    def compatible(perms, n):
        # every map between [k] and [n] (k <= n) must stay monotone
        for k in range(n + 1):
            for f in homs[(k, n)] + (homs[(n, k)] if k != n else []):
                images = conjugate(f, perms)
                if any(a > b for a, b in zip(images, images[1:])):
                    return False
        return True

    def extend(perms):
        nonlocal steps
        n = len(perms)
        if n > max_degree:
            found.append(DeltaAutomorphism(max_degree, tuple(perms)))
            return
        for perm in itertools.permutations(range(n + 1)):
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"automorphisms({max_degree}) search", budget)
            candidate = perms + [perm]
            if compatible(candidate, n):
                extend(candidate)

    extend([])

    for auto in found:
        _verify_functorial(auto, homs)

    found.sort(key=lambda a: (not a.is_identity, a.permutations))
    logger.info(f"automorphisms({max_degree}): {len(found)} found after {steps} steps")
    return found


def _verify_functorial(auto, homs):
    degrees = range(auto.max_degree + 1)
    for n in degrees:
        if auto.apply(identity(n)) != identity(n):
            raise DomainMismatch(f"{auto.name} does not fix the identity of [{n}]")
    for a in degrees:
        for b in degrees:
            images = {f: auto.apply(f) for f in homs[(a, b)]}
            if len(set(images.values())) != len(images):
                raise DomainMismatch(f"{auto.name} is not bijective on Hom([{a}],[{b}])")
            for c in degrees:
                for f in homs[(a, b)]:
                    for g in homs[(b, c)]:
                        if auto.apply(compose(f, g)) != compose(images[f], auto.apply(g)):
                            raise DomainMismatch(f"{auto.name} breaks composition at {f}, {g}")
