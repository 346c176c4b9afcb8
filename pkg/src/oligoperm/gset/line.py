"""The ordered line backend.

Atoms are the sets of strictly increasing n-tuples of rationals, written
``inc[n]``, under the order-preserving self-bijections of the rationals (the
countable model of the orientation-preserving line homeomorphisms).

Equivariant maps ``inc[n] -> inc[m]`` are increasing coordinate selections.
Orbits of ``inc[n] x inc[m]`` are merge words over the alphabet {L, B, R}: one
letter per value of the merged tuple, recording whether the value came from
the left tuple, both, or the right tuple.  A word with c letters B is a copy
of ``inc[n+m-c]``.  Word order is lexicographic with L < B < R.

Elementary fiber classes: dropping an extremal coordinate leaves a one-sided
cut region (class ``ray``), dropping an interior coordinate leaves the region
between the two neighbours (class ``interval``).  Dropping the only coordinate
of ``inc[1]`` is classed as ``ray`` as well: the backend identifies the whole
line with its one-sided cut regions, since an order isomorphism onto either
region conjugates the stabilizer action onto the full automorphism group.
That identification is a modeling decision of this backend; the measure axiom
checks validate it indirectly.

Point-cut relations for the solver: cutting the line at one point gives
value(inc[1]) = 2 ray + 1, cutting a ray gives ray = ray + interval + 1, and
cutting an interval gives interval = 2 interval + 1.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .base import (
    Atom,
    AtomMap,
    Backend,
    ElementaryStep,
    Factorization,
    LinearRelation,
    ProductOrbit,
)

BACKEND_ID = "line"

_ORDER = {"L": 0, "B": 1, "R": 2}


def _atom(n):
    return Atom(BACKEND_ID, n, f"inc[{n}]")


def _word_key(word):
    return tuple(_ORDER[ch] for ch in word)


class LineBackend(Backend):
    backend_id = BACKEND_ID

    def unit_atom(self):
        return _atom(0)

    def atoms_up_to(self, bound):
        return [_atom(n) for n in range(bound + 1)]

    def atom_of_arity(self, n):
        return _atom(n)

    def hom_atoms(self, a, b):
        n, m = a.degree, b.degree
        return [AtomMap(a, b, sel) for sel in itertools.combinations(range(1, n + 1), m)]

    def identity_map(self, a):
        return AtomMap(a, a, tuple(range(1, a.degree + 1)))

    def compose_maps(self, outer, inner):
        if inner.target != outer.source:
            raise ValueError("atom map composition shape mismatch")
        sel = tuple(inner.data[j - 1] for j in outer.data)
        return AtomMap(inner.source, outer.target, sel)

    def is_surjective_map(self, f):
        return True

    @lru_cache(maxsize=None)
    def product_decompose(self, a, b):
        n, m = a.degree, b.degree
        words = []

        def extend(word, used_l, used_r):
            if used_l == n and used_r == m:
                words.append("".join(word))
                return
            if used_l < n:
                extend(word + ["L"], used_l + 1, used_r)
            if used_l < n and used_r < m:
                extend(word + ["B"], used_l + 1, used_r + 1)
            if used_r < m:
                extend(word + ["R"], used_l, used_r + 1)

        extend([], 0, 0)
        words.sort(key=_word_key)
        return tuple(self._orbit_of_word(a, b, w) for w in words)

    def _orbit_of_word(self, a, b, word):
        atom = _atom(len(word))
        sel1 = tuple(i + 1 for i, ch in enumerate(word) if ch in "LB")
        sel2 = tuple(i + 1 for i, ch in enumerate(word) if ch in "RB")
        return ProductOrbit(word, atom, AtomMap(atom, a, sel1), AtomMap(atom, b, sel2))

    def product_factor(self, f, g):
        if f.source != g.source:
            raise ValueError("product factor needs a common source")
        left = set(f.data)
        right = set(g.data)
        union = sorted(left | right)
        word = []
        for u in union:
            if u in left and u in right:
                word.append("B")
            elif u in left:
                word.append("L")
            else:
                word.append("R")
        orbit_atom = _atom(len(union))
        return "".join(word), AtomMap(f.source, orbit_atom, tuple(union))

    def swap_orbit(self, a, b, label):
        swapped = label.translate(str.maketrans("LR", "RL"))
        atom = _atom(len(label))
        return swapped, AtomMap(atom, atom, tuple(range(1, len(label) + 1)))

    # Elementary structure

    def _drop_class(self, position, arity):
        return "ray" if position == 1 or position == arity else "interval"

    def elementary_factorize(self, f):
        n = f.source.degree
        kept = set(f.data)
        remaining = list(range(1, n + 1))
        steps = []
        for p in sorted((i for i in range(1, n + 1) if i not in kept), reverse=True):
            k = len(remaining)
            idx = remaining.index(p) + 1
            steps.append(
                ElementaryStep(_atom(k), _atom(k - 1), self._drop_class(idx, k),
                               position=idx)
            )
            remaining.remove(p)
        iso = self.identity_map(f.source)
        return Factorization(iso, tuple(steps))

    def factorization_class_multisets(self, f):
        n = f.source.degree
        kept = set(f.data)
        complement = [i for i in range(1, n + 1) if i not in kept]
        out = set()
        for order in itertools.permutations(complement):
            remaining = list(range(1, n + 1))
            classes = []
            for p in order:
                k = len(remaining)
                idx = remaining.index(p) + 1
                classes.append(self._drop_class(idx, k))
                remaining.remove(p)
            out.add(tuple(sorted(classes)))
        return out

    def atom_chain_parent(self, a):
        n = a.degree
        if n == 0:
            return None
        drop_last = AtomMap(a, _atom(n - 1), tuple(range(1, n)))
        return drop_last, "ray"

    def fiber_classes(self, depth):
        return ["ray", "interval"]

    def fiber_decompositions(self, depth):
        return [
            # the line (= the value of inc[1], itself classed as a ray) cut at
            # a point: two rays and the point
            LinearRelation("ray", (("ray", 2),), 1),
            # a ray cut at a point: a ray, an interval and the point
            LinearRelation("ray", (("ray", 1), ("interval", 1)), 1),
            # an interval cut at a point
            LinearRelation("interval", (("interval", 2),), 1),
        ]

    def parse_atom_label(self, label):
        if not (label.startswith("inc[") and label.endswith("]")):
            raise ValueError(f"bad line atom label {label!r}")
        return _atom(int(label[4:-1]))
