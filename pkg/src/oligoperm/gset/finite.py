"""Finite permutation group backend.

The group is given by explicit generators on {0, .., n-1}.  Everything is
computed by closure on concrete points, which makes this backend a total
brute-force oracle for the category layer: atoms are canonical coset spaces
(one per conjugacy class of subgroup), maps are explicit point functions, and
product orbits are literal orbits of the product action.

Elementary fiber classes are indexed by cardinality, ``size[m]``.  Restricting
a fiber to the trivial subgroup splits it into m fixed points, which pins the
class value to m; this is the point-cut relation the measure solver uses, and
it is why counting is the only measure here.
"""

from __future__ import annotations

from .base import (
    Atom,
    AtomMap,
    Backend,
    ElementaryStep,
    Factorization,
    LinearRelation,
    ProductOrbit,
)

BACKEND_ID = "finite"

MAX_GROUP_ORDER = 120


def _pcompose(p, q):
    """p after q, as permutation tuples."""
    return tuple(p[i] for i in q)


def _pinv(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def mulclose(generators, n_points):
    identity = tuple(range(n_points))
    elements = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = _pcompose(g, x)
                if y not in elements:
                    elements.add(y)
                    nxt.append(y)
                    if len(elements) > MAX_GROUP_ORDER:
                        raise ValueError(
                            f"group order exceeds {MAX_GROUP_ORDER}; this backend "
                            "is a desk-scale oracle"
                        )
        frontier = nxt
    return frozenset(elements)


def parse_cycles(text, n_points=None):
    """Parse cycle notation like "(1 2)(3 4); (1 2 3)" into permutation tuples.

    Points are 1-based in the notation.  Separate generators with ';' or ','
    outside parentheses.
    """
    gens_txt = []
    depth = 0
    current = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in ";," and depth == 0:
            gens_txt.append(current)
            current = ""
        else:
            current += ch
    if current.strip():
        gens_txt.append(current)
    cycles_per_gen = []
    max_point = 0
    for txt in gens_txt:
        cycles = []
        body = txt.strip()
        while body:
            if not body.startswith("("):
                raise ValueError(f"bad cycle notation: {text!r}")
            end = body.index(")")
            pts = [int(tok) for tok in body[1:end].replace(",", " ").split()]
            cycles.append(pts)
            max_point = max(max_point, *pts)
            body = body[end + 1:].strip()
        cycles_per_gen.append(cycles)
    n = n_points or max_point
    gens = []
    for cycles in cycles_per_gen:
        perm = list(range(n))
        for pts in cycles:
            for i, p in enumerate(pts):
                perm[p - 1] = pts[(i + 1) % len(pts)] - 1
        gens.append(tuple(perm))
    return gens, n


class FiniteBackend(Backend):
    backend_id = BACKEND_ID

    def __init__(self, generators, n_points):
        self.n_points = n_points
        self.generators = [tuple(g) for g in generators]
        self.elements = sorted(mulclose(self.generators, n_points))
        self.identity = tuple(range(n_points))
        self._subgroups = self._enumerate_subgroups()
        self._class_of = {}
        classes = []
        for h in self._subgroups:
            if h in self._class_of:
                continue
            conj = {frozenset(_pcompose(_pcompose(_pinv(g), s), g) for s in h)
                    for g in self.elements}
            classes.append(min(conj, key=lambda sub: tuple(sorted(sub))))
            for sub in conj:
                self._class_of[sub] = len(classes) - 1
        order = len(self.elements)
        ranked = sorted(
            range(len(classes)),
            key=lambda k: (order // len(classes[k]), tuple(sorted(classes[k]))),
        )
        self._reps = [classes[k] for k in ranked]
        self._class_index = {}
        for new_idx, old_idx in enumerate(ranked):
            for sub, k in list(self._class_of.items()):
                if k == old_idx:
                    self._class_index[sub] = new_idx
        self._atoms = [
            Atom(BACKEND_ID, order // len(rep), f"orbit#{k}")
            for k, rep in enumerate(self._reps)
        ]
        self._points = {}
        self._point_index = {}
        for atom, rep in zip(self._atoms, self._reps):
            cosets = set()
            for g in self.elements:
                cosets.add(frozenset(_pcompose(g, h) for h in rep))
            pts = sorted(cosets, key=lambda c: min(c))
            self._points[atom] = pts
            self._point_index[atom] = {c: i for i, c in enumerate(pts)}
        self._product_cache = {}
        self._pair_lookup = {}

    # Group plumbing

    def _enumerate_subgroups(self):
        cyclics = set()
        for g in self.elements:
            sub = {self.identity}
            x = g
            while x not in sub:
                sub.add(x)
                x = _pcompose(g, x)
            cyclics.add(frozenset(sub))
        subgroups = set(cyclics)
        frontier = set(cyclics)
        while frontier:
            new = set()
            for a in frontier:
                for b in cyclics:
                    join = mulclose(list(a | b), self.n_points)
                    if join not in subgroups:
                        subgroups.add(join)
                        new.add(join)
            frontier = new
        subgroups.add(frozenset({self.identity}))
        return sorted(subgroups, key=lambda s: (len(s), tuple(sorted(s))))

    def subgroup_atom(self, subgroup):
        """The canonical atom whose stabilizer class contains the subgroup."""
        return self._atoms[self._class_index[frozenset(subgroup)]]

    def atom_points(self, a):
        return self._points[a]

    def act(self, g, a, idx):
        coset = self._points[a][idx]
        return self._point_index[a][frozenset(_pcompose(g, x) for x in coset)]

    # Backend interface

    def unit_atom(self):
        return self._atoms[0]

    def atoms_up_to(self, bound):
        return [a for a in self._atoms if a.degree <= bound]

    def hom_atoms(self, a, b):
        h_rep = self._reps[int(a.label.split("#")[1])]
        out = []
        for q, coset in enumerate(self._points[b]):
            if all(frozenset(_pcompose(h, x) for x in coset) == coset for h in h_rep):
                data = []
                for src in self._points[a]:
                    rep = min(src)
                    img = frozenset(_pcompose(rep, x) for x in coset)
                    data.append(self._point_index[b][img])
                out.append(AtomMap(a, b, tuple(data)))
        return out

    def identity_map(self, a):
        return AtomMap(a, a, tuple(range(a.degree)))

    def compose_maps(self, outer, inner):
        if inner.target != outer.source:
            raise ValueError("atom map composition shape mismatch")
        return AtomMap(inner.source, outer.target,
                       tuple(outer.data[i] for i in inner.data))

    def is_surjective_map(self, f):
        return len(set(f.data)) == f.target.degree

    def product_decompose(self, a, b):
        key = (a, b)
        if key in self._product_cache:
            return self._product_cache[key]
        pairs = [(i, j) for i in range(a.degree) for j in range(b.degree)]
        seen = set()
        orbit_sets = []
        for p in pairs:
            if p in seen:
                continue
            orbit = {p}
            frontier = [p]
            while frontier:
                nxt = []
                for (i, j) in frontier:
                    for g in self.generators:
                        q = (self.act(g, a, i), self.act(g, b, j))
                        if q not in orbit:
                            orbit.add(q)
                            nxt.append(q)
                frontier = nxt
            seen |= orbit
            orbit_sets.append(orbit)
        orbit_sets.sort(key=lambda o: min(o))
        orbits = []
        lookup = {}
        for k, orbit in enumerate(orbit_sets):
            rep = min(orbit)
            stab = frozenset(
                g for g in self.elements
                if (self.act(g, a, rep[0]), self.act(g, b, rep[1])) == rep
            )
            c = self._atoms[self._class_index[stab]]
            h_rep = self._reps[self._class_index[stab]]
            conj = next(
                h for h in self.elements
                if frozenset(_pcompose(_pcompose(_pinv(h), s), h) for s in stab) == h_rep
            )
            data1 = []
            data2 = []
            for coset in self._points[c]:
                x = min(coset)
                g = _pcompose(x, _pinv(conj))
                pt = (self.act(g, a, rep[0]), self.act(g, b, rep[1]))
                lookup[pt] = (k, len(data1))
                data1.append(pt[0])
                data2.append(pt[1])
            orbits.append(
                ProductOrbit(f"#{k}", c,
                             AtomMap(c, a, tuple(data1)),
                             AtomMap(c, b, tuple(data2)))
            )
        result = tuple(orbits)
        self._product_cache[key] = result
        self._pair_lookup[key] = lookup
        return result

    def product_factor(self, f, g):
        if f.source != g.source:
            raise ValueError("product factor needs a common source")
        a, b = f.target, g.target
        orbits = self.product_decompose(a, b)
        lookup = self._pair_lookup[(a, b)]
        k, _ = lookup[(f.data[0], g.data[0])]
        orbit = orbits[k]
        data = tuple(lookup[(f.data[i], g.data[i])][1] for i in range(f.source.degree))
        return orbit.label, AtomMap(f.source, orbit.atom, data)

    def swap_orbit(self, a, b, label):
        k = int(label[1:])
        orbit = self.product_decompose(a, b)[k]
        self.product_decompose(b, a)
        lookup_ba = self._pair_lookup[(b, a)]
        p1, p2 = orbit.proj1.data, orbit.proj2.data
        k2, _ = lookup_ba[(p2[0], p1[0])]
        data = tuple(lookup_ba[(p2[i], p1[i])][1] for i in range(orbit.atom.degree))
        target = self.product_decompose(b, a)[k2].atom
        return f"#{k2}", AtomMap(orbit.atom, target, data)

    # Elementary structure

    def elementary_factorize(self, f):
        m = f.source.degree // f.target.degree
        step = ElementaryStep(f.source, f.target, f"size[{m}]")
        steps = () if f.source.degree == f.target.degree else (step,)
        return Factorization(self.identity_map(f.source), steps)

    def factorization_class_multisets(self, f):
        return {self.mu_map_classes(f)}

    def atom_chain_parent(self, a):
        if a == self.unit_atom():
            return None
        collapse = AtomMap(a, self.unit_atom(), tuple(0 for _ in range(a.degree)))
        return collapse, f"size[{a.degree}]"

    def fiber_classes(self, depth):
        degrees = {a.degree for a in self._atoms}
        sizes = sorted({x // y for x in degrees for y in degrees if x % y == 0})
        return [f"size[{m}]" for m in sizes if m <= max(degrees)]

    def fiber_decompositions(self, depth):
        # restricting a size-m fiber to the trivial subgroup gives m points
        return [
            LinearRelation(cls, (), int(cls[5:-1]))
            for cls in self.fiber_classes(depth)
        ]

    def parse_atom_label(self, label):
        if not label.startswith("orbit#"):
            raise ValueError(f"bad finite atom label {label!r}")
        return self._atoms[int(label.split("#")[1])]


def preset_backend(name):
    """Named example groups used throughout the test suite and CLI."""
    if name.upper() == "S3":
        gens, n = parse_cycles("(1 2); (1 2 3)")
        return FiniteBackend(gens, n)
    if name.upper() in {"C2X4", "C2-4"}:
        gens, n = parse_cycles("(1 2)", n_points=4)
        return FiniteBackend(gens, n)
    if name.upper() == "S4":
        gens, n = parse_cycles("(1 2); (1 2 3 4)")
        return FiniteBackend(gens, n)
    gens, n = parse_cycles(name)
    return FiniteBackend(gens, n)
