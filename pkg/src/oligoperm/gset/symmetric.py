"""The infinite symmetric group backend.

Atoms are the sets of injective n-tuples, written ``inj[n]``, for the infinite
symmetric group acting on a countable set.  The object class is restricted to
unions of these tuple sets; quotient orbits are deliberately left out, which
is what makes the effectivity axiom fail (see the pre-Galois checker).

Equivariant maps ``inj[n] -> inj[m]`` are coordinate selections: injections
from the m target slots into the n source slots.  Orbits of a product
``inj[n] x inj[m]`` are indexed by partial injective matchings between the two
coordinate sets; the orbit whose matching has size k is a copy of
``inj[n+m-k]``.

Elementary fiber classes are ``omega-minus[c]``: the complement of c named
points.  Dropping one coordinate from ``inj[k]`` leaves such a fiber with
c = k - 1.  Cutting one more point out of the class ``omega-minus[c]`` gives
the point-cut relations value(c) = value(c+1) + 1 used by the measure solver.
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

BACKEND_ID = "sym"


def _atom(n):
    return Atom(BACKEND_ID, n, f"inj[{n}]")


def _matching_label(matching):
    if not matching:
        return "[]"
    return "[" + ",".join(f"{i}>{j}" for i, j in matching) + "]"


def _parse_matching(label):
    if label == "[]":
        return ()
    body = label[1:-1]
    pairs = []
    for part in body.split(","):
        i, j = part.split(">")
        pairs.append((int(i), int(j)))
    return tuple(pairs)


class SymBackend(Backend):
    backend_id = BACKEND_ID

    def unit_atom(self):
        return _atom(0)

    def atoms_up_to(self, bound):
        return [_atom(n) for n in range(bound + 1)]

    def atom_of_arity(self, n):
        return _atom(n)

    def hom_atoms(self, a, b):
        n, m = a.degree, b.degree
        return [AtomMap(a, b, sel) for sel in itertools.permutations(range(1, n + 1), m)]

    def identity_map(self, a):
        return AtomMap(a, a, tuple(range(1, a.degree + 1)))

    def compose_maps(self, outer, inner):
        if inner.target != outer.source:
            raise ValueError("atom map composition shape mismatch")
        sel = tuple(inner.data[j - 1] for j in outer.data)
        return AtomMap(inner.source, outer.target, sel)

    def is_surjective_map(self, f):
        # Every coordinate selection is onto: any target tuple extends.
        return True

    @lru_cache(maxsize=None)
    def product_decompose(self, a, b):
        n, m = a.degree, b.degree
        orbits = []
        for k in range(min(n, m) + 1):
            for left in itertools.combinations(range(1, n + 1), k):
                for right in itertools.permutations(range(1, m + 1), k):
                    matching = tuple(sorted(zip(left, right)))
                    if len({j for _, j in matching}) != k:
                        continue
                    orbits.append(matching)
        orbits = sorted(set(orbits))
        return tuple(self._orbit_of_matching(a, b, mu) for mu in orbits)

    def _orbit_of_matching(self, a, b, matching):
        n, m = a.degree, b.degree
        k = len(matching)
        atom = _atom(n + m - k)
        partner = dict(matching)
        matched_right = {j for _, j in matching}
        unmatched_right = [j for j in range(1, m + 1) if j not in matched_right]
        proj1 = AtomMap(atom, a, tuple(range(1, n + 1)))
        sel2 = []
        right_pos = {}
        for rank, j in enumerate(unmatched_right):
            right_pos[j] = n + rank + 1
        for j in range(1, m + 1):
            if j in matched_right:
                sel2.append(next(i for i, jj in matching if jj == j))
            else:
                sel2.append(right_pos[j])
        proj2 = AtomMap(atom, b, tuple(sel2))
        return ProductOrbit(_matching_label(matching), atom, proj1, proj2)

    def product_factor(self, f, g):
        if f.source != g.source:
            raise ValueError("product factor needs a common source")
        a, b = f.target, g.target
        matching = tuple(
            sorted(
                (i, j)
                for i in range(1, a.degree + 1)
                for j in range(1, b.degree + 1)
                if f.data[i - 1] == g.data[j - 1]
            )
        )
        label = _matching_label(matching)
        matched_right = {j for _, j in matching}
        unmatched_right = [j for j in range(1, b.degree + 1) if j not in matched_right]
        sel = tuple(f.data) + tuple(g.data[j - 1] for j in unmatched_right)
        orbit_atom = _atom(a.degree + b.degree - len(matching))
        return label, AtomMap(f.source, orbit_atom, sel)

    def swap_orbit(self, a, b, label):
        matching = _parse_matching(label)
        transposed = tuple(sorted((j, i) for i, j in matching))
        n, m = a.degree, b.degree
        matched_left = {i for i, _ in matching}
        matched_right = {j for _, j in matching}
        unmatched_left = [i for i in range(1, n + 1) if i not in matched_left]
        unmatched_right = [j for j in range(1, m + 1) if j not in matched_right]
        partner_of_right = {j: i for i, j in matching}
        # Source orbit coordinates: a-coordinates 1..n, then unmatched b's.
        # Target orbit coordinates: b-coordinates 1..m, then unmatched a's.
        right_pos = {j: n + rank + 1 for rank, j in enumerate(unmatched_right)}
        sel = []
        for j in range(1, m + 1):
            sel.append(partner_of_right[j] if j in matched_right else right_pos[j])
        for i in unmatched_left:
            sel.append(i)
        src_atom = _atom(n + m - len(matching))
        return _matching_label(transposed), AtomMap(src_atom, src_atom, tuple(sel))

    # Elementary structure

    def elementary_factorize(self, f):
        n, m = f.source.degree, f.target.degree
        kept = list(f.data)
        complement = [i for i in range(1, n + 1) if i not in set(kept)]
        iso = AtomMap(f.source, f.source, tuple(kept + complement))
        steps = []
        for k in range(n, m, -1):
            steps.append(ElementaryStep(_atom(k), _atom(k - 1),
                                        f"omega-minus[{k - 1}]", position=k))
        return Factorization(iso, tuple(steps))

    def factorization_class_multisets(self, f):
        # All drop orders give the same class multiset here: removing any one
        # coordinate of an injective k-tuple leaves the complement of k-1 points.
        return {self.mu_map_classes(f)}

    def atom_chain_parent(self, a):
        n = a.degree
        if n == 0:
            return None
        drop_last = AtomMap(a, _atom(n - 1), tuple(range(1, n)))
        return drop_last, f"omega-minus[{n - 1}]"

    def fiber_classes(self, depth):
        return [f"omega-minus[{c}]" for c in range(depth)]

    def fiber_decompositions(self, depth):
        rels = []
        for c in range(depth - 1):
            rels.append(
                LinearRelation(
                    f"omega-minus[{c}]",
                    ((f"omega-minus[{c + 1}]", 1),),
                    1,
                )
            )
        return rels

    def parse_atom_label(self, label):
        if not (label.startswith("inj[") and label.endswith("]")):
            raise ValueError(f"bad sym atom label {label!r}")
        return _atom(int(label[4:-1]))
