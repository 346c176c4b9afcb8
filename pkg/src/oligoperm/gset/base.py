"""Core types for the combinatorial backends.

A backend realizes a fragment of the category of finitary sets-with-symmetry
for one concrete group: its transitive pieces (atoms), the equivariant maps
between them, and complete orbit decompositions of binary products.  Objects
are finite multisets of atoms and object-level maps assign to each source atom
a target atom together with an atom-level map.

Conventions used throughout:

* ``product_decompose(a, b)`` lists the orbits of ``a x b``.  Each orbit is an
  atom ``T`` with two projections ``T -> a`` and ``T -> b`` and a canonical
  string label.  Labels are unique per (a, b) pair and the orbit list is
  sorted by label order.
* ``product_factor(f, g)`` factors a joint map ``(f, g): T -> a x b`` through
  the decomposition: it returns the label of the orbit hit by the image and
  the induced map from ``T`` onto the orbit atom.
* ``elementary_factorize`` writes an atom map as an isomorphism followed by
  one-coordinate drops; each drop carries an elementary fiber class label.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Atom:
    """A transitive piece, identified by its canonical label.

    ``degree`` is the arity for the infinite backends and the set size for the
    finite backend; it orders atoms and drives bound filtering.
    """

    backend_id: str
    degree: int
    label: str

    def render(self):
        return f"{self.backend_id}:{self.label}"


@dataclass(frozen=True)
class AtomMap:
    """An equivariant map between two atoms, in backend-specific encoding.

    For the infinite backends ``data`` is a 1-based selection tuple: output
    coordinate i of the map is input coordinate ``data[i-1]``.  For the finite
    backend ``data`` maps source point indices to target point indices.
    """

    source: Atom
    target: Atom
    data: tuple


@dataclass(frozen=True)
class ProductOrbit:
    label: str
    atom: Atom
    proj1: AtomMap
    proj2: AtomMap


@dataclass(frozen=True)
class ElementaryStep:
    """One coordinate drop, with the class of its fiber.

    ``position`` is the 1-based coordinate removed from the step's source (0
    for the finite backend, whose single step is not a coordinate drop).
    """

    source: Atom
    target: Atom
    fiber_class: str
    position: int = 0


@dataclass(frozen=True)
class Factorization:
    iso: AtomMap
    steps: tuple


@dataclass(frozen=True)
class LinearRelation:
    """value(lhs) = sum of coeff * value(cls) + const, over the rationals."""

    lhs: str
    terms: tuple  # tuple of (class label, integer coefficient)
    const: int


@dataclass(frozen=True)
class GObject:
    """A finite multiset of atoms of one backend, stored sorted."""

    backend_id: str
    atoms: tuple

    @staticmethod
    def of(backend_id, atoms):
        return GObject(backend_id, tuple(sorted(atoms)))

    def __add__(self, other):
        if other.backend_id != self.backend_id:
            raise ValueError("cannot form a coproduct across backends")
        return GObject.of(self.backend_id, self.atoms + other.atoms)

    def is_empty(self):
        return not self.atoms

    def render(self):
        if not self.atoms:
            return f"{self.backend_id}:0"
        return " + ".join(a.render() for a in self.atoms)


@dataclass(frozen=True)
class GMap:
    """An object-level equivariant map: one (target position, atom map) leg
    per source atom position."""

    source: GObject
    target: GObject
    legs: tuple  # per source position: (target position, AtomMap)

    def leg(self, i):
        return self.legs[i]


class Backend:
    """Interface shared by the three shipped backends."""

    backend_id = ""

    # Atoms and maps

    def unit_atom(self):
        raise NotImplementedError

    def atoms_up_to(self, bound):
        raise NotImplementedError

    def hom_atoms(self, a, b):
        raise NotImplementedError

    def identity_map(self, a):
        raise NotImplementedError

    def compose_maps(self, outer, inner):
        """outer o inner, where inner: a -> b and outer: b -> c."""
        raise NotImplementedError

    def is_surjective_map(self, f):
        raise NotImplementedError

    # Products

    def product_decompose(self, a, b):
        raise NotImplementedError

    def product_factor(self, f, g):
        raise NotImplementedError

    def swap_orbit(self, a, b, label):
        """Label of the transposed orbit of (b, a), with the realizing iso."""
        raise NotImplementedError

    # Elementary fiber structure

    def elementary_factorize(self, f):
        raise NotImplementedError

    def factorization_class_multisets(self, f):
        """All multisets of fiber classes over the admissible drop orders."""
        raise NotImplementedError

    def atom_chain_parent(self, a):
        """Canonical one-drop map a -> parent with its fiber class, or None
        for the unit atom.  Chains ground atom measures in fiber classes."""
        raise NotImplementedError

    def fiber_classes(self, depth):
        raise NotImplementedError

    def fiber_decompositions(self, depth):
        """Point-cut decompositions of the fiber classes, as linear relations."""
        raise NotImplementedError

    # Rendering

    def render_atom(self, a):
        return a.render()

    def parse_atom_label(self, label):
        raise NotImplementedError

    # Derived object-level helpers

    def unit_object(self):
        return GObject.of(self.backend_id, (self.unit_atom(),))

    def object_of(self, atoms):
        return GObject.of(self.backend_id, tuple(atoms))

    def identity_gmap(self, x):
        legs = tuple((i, self.identity_map(a)) for i, a in enumerate(x.atoms))
        return GMap(x, x, legs)

    def compose_gmaps(self, outer, inner):
        if inner.target != outer.source:
            raise ValueError("gmap composition shape mismatch")
        legs = []
        for (mid, m1) in inner.legs:
            tgt, m2 = outer.legs[mid]
            legs.append((tgt, self.compose_maps(m2, m1)))
        return GMap(inner.source, outer.target, tuple(legs))

    def collapse_gmap(self, x):
        """The unique map from x to the final object."""
        unit = self.unit_object()
        legs = []
        for a in x.atoms:
            maps = self.hom_atoms(a, self.unit_atom())
            legs.append((0, maps[0]))
        return GMap(x, unit, tuple(legs))

    def hom_objects(self, x, y):
        """All object-level maps x -> y."""
        per_source = []
        for a in x.atoms:
            choices = []
            for j, b in enumerate(y.atoms):
                choices.extend((j, m) for m in self.hom_atoms(a, b))
            per_source.append(choices)
        out = []
        for combo in itertools.product(*per_source):
            out.append(GMap(x, y, tuple(combo)))
        return out

    def is_surjective_gmap(self, f):
        hit = set()
        for j, m in f.legs:
            if self.is_surjective_map(m):
                hit.add(j)
        return hit == set(range(len(f.target.atoms)))

    def mu_map_classes(self, f):
        """Fiber-class multiset of the canonical factorization of an atom map."""
        fact = self.elementary_factorize(f)
        return tuple(sorted(step.fiber_class for step in fact.steps))


def fiber_product(backend, f, g):
    """The fiber product of f: X -> Z and g: Y -> Z, with its projections.

    Computed by filtering the orbit decompositions of the atom-pair products
    on which the two composites into Z agree.
    """
    if f.target != g.target:
        raise ValueError("fiber product needs a shared target")
    x, y = f.source, g.source
    atoms = []
    legs1 = []
    legs2 = []
    for i, a in enumerate(x.atoms):
        zi, ma = f.legs[i]
        for j, b in enumerate(y.atoms):
            zj, mb = g.legs[j]
            if zi != zj:
                continue
            for orbit in backend.product_decompose(a, b):
                left = backend.compose_maps(ma, orbit.proj1)
                right = backend.compose_maps(mb, orbit.proj2)
                if left == right:
                    atoms.append((orbit.atom, i, orbit.proj1, j, orbit.proj2))
    atoms.sort(key=lambda item: (item[0], item[1], item[3]))
    obj_atoms = []
    for atom, i, p1, j, p2 in atoms:
        obj_atoms.append(atom)
        legs1.append((i, p1))
        legs2.append((j, p2))
    # GObject.of sorts; the explicit sort above keeps legs aligned with it.
    obj = GObject(backend.backend_id, tuple(obj_atoms))
    return obj, GMap(obj, x, tuple(legs1)), GMap(obj, y, tuple(legs2))


def kernel_pair(backend, f):
    return fiber_product(backend, f, f)
