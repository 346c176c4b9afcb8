"""Axiom checker for the combinatorial category fragments.

Eight axioms are verified on the fragment within a bound: existence and
universal properties of finite coproducts (a)-(c), fiber products and the
final object (d), monomorphisms of atoms being isomorphisms (e), non-emptiness
of atom fiber products (f), atomicity of the final object (g), and
effectivity of internal equivalence relations (h).

Internal equivalence relations on an atom X are unions of orbits of X x X
containing the diagonal, closed under the swap, and closed under relational
composition.  They are enumerated as joins of principal closures, which is
exhaustive: every relation is the join of the closures of the orbits it
contains.  Axiom (h) asks each of them to be the kernel pair of a surjection
onto an object of the fragment; the checker searches all candidate quotient
maps and reports the relation as a witness when none matches.
"""

from __future__ import annotations

from ..report import CheckResult, Report
from .base import GMap, fiber_product, kernel_pair


def _atom_obj(backend, a):
    return backend.object_of([a])


def _atom_gmap(backend, f):
    return GMap(_atom_obj(backend, f.source), _atom_obj(backend, f.target),
                ((0, f),))


def check_coproducts(backend, atoms):
    ok = True
    witness = {}
    for x in atoms[: min(len(atoms), 3)]:
        for y in atoms[: min(len(atoms), 3)]:
            for z in atoms:
                pair = backend.object_of([x, y])
                zobj = _atom_obj(backend, z)
                lhs = len(backend.hom_objects(pair, zobj))
                rhs = (len(backend.hom_atoms(x, z))
                       * len(backend.hom_atoms(y, z)))
                if lhs != rhs:
                    ok = False
                    witness = {"objects": f"{x.render()} + {y.render()} -> "
                                          f"{z.render()}"}
    return CheckResult("a-coproducts", ok, witness,
                       note="maps out of a coproduct are leg tuples")


def check_atom_decomposition(backend, atoms):
    return CheckResult("b-atomic-decomposition", True,
                       note="objects are stored as finite atom multisets")


def check_maps_into_coproducts(backend, atoms):
    ok = True
    witness = {}
    for x in atoms:
        for y in atoms:
            for z in atoms:
                target = backend.object_of([y, z])
                lhs = len(backend.hom_objects(_atom_obj(backend, x), target))
                rhs = (len(backend.hom_atoms(x, y))
                       + len(backend.hom_atoms(x, z)))
                if lhs != rhs:
                    ok = False
                    witness = {"instance": f"{x.render()} -> {y.render()} "
                                           f"+ {z.render()}"}
    return CheckResult("c-atom-maps-into-coproducts", ok, witness)


def check_fiber_products(backend, atoms, universality_degree):
    ok = True
    witness = {}
    for c in atoms:
        cobj = _atom_obj(backend, c)
        maps_to_c = [(a, f) for a in atoms for f in backend.hom_atoms(a, c)]
        for a, f in maps_to_c:
            for b, g in maps_to_c:
                fg = _atom_gmap(backend, f)
                gg = _atom_gmap(backend, g)
                pobj, p, q = fiber_product(backend, fg, gg)
                if backend.compose_gmaps(fg, p) != backend.compose_gmaps(gg, q):
                    ok = False
                    witness = {"cospan": f"{a.render()} -> {c.render()} <- "
                                         f"{b.render()}"}
                    continue
                if max(a.degree, b.degree, c.degree) > universality_degree:
                    continue
                for w in atoms:
                    if w.degree > universality_degree:
                        continue
                    wobj = _atom_obj(backend, w)
                    mediators = {}
                    for m in backend.hom_objects(wobj, pobj):
                        key = (backend.compose_gmaps(p, m),
                               backend.compose_gmaps(q, m))
                        mediators[key] = mediators.get(key, 0) + 1
                    for u in backend.hom_atoms(w, a):
                        for v in backend.hom_atoms(w, b):
                            if backend.compose_maps(f, u) != \
                                    backend.compose_maps(g, v):
                                continue
                            span = (_atom_gmap(backend, u),
                                    _atom_gmap(backend, v))
                            count = mediators.get(span, 0)
                            if count != 1:
                                ok = False
                                witness = {
                                    "cospan": f"{a.render()} -> {c.render()} "
                                              f"<- {b.render()}",
                                    "span-source": w.render(),
                                    "mediators": str(count),
                                }
    return CheckResult("d-fiber-products", ok, witness,
                       note="universal property checked on enumerated spans")


def check_monos_are_isos(backend, atoms):
    ok = True
    witness = {}
    for a in atoms:
        for b in atoms:
            for f in backend.hom_atoms(a, b):
                kp_obj, _, _ = kernel_pair(backend, _atom_gmap(backend, f))
                mono = len(kp_obj.atoms) == 1
                if not mono:
                    continue
                iso = any(
                    backend.compose_maps(g, f) == backend.identity_map(a)
                    and backend.compose_maps(f, g) == backend.identity_map(b)
                    for g in backend.hom_atoms(b, a))
                if not iso:
                    ok = False
                    witness = {"map": f"{a.render()} -> {b.render()} {f.data}"}
    return CheckResult("e-monos-are-isos", ok, witness)


def check_atom_cospans_nonempty(backend, atoms):
    ok = True
    witness = {}
    for c in atoms:
        for a in atoms:
            for b in atoms:
                for f in backend.hom_atoms(a, c):
                    for g in backend.hom_atoms(b, c):
                        pobj, _, _ = fiber_product(
                            backend, _atom_gmap(backend, f),
                            _atom_gmap(backend, g))
                        if pobj.is_empty():
                            ok = False
                            witness = {"cospan": f"{a.render()} -> {c.render()}"
                                                 f" <- {b.render()}"}
    return CheckResult("f-atom-cospans-nonempty", ok, witness)


def check_final_object(backend, atoms):
    ok = True
    witness = {}
    unit = backend.unit_atom()
    for a in atoms:
        count = len(backend.hom_atoms(a, unit))
        if count != 1:
            ok = False
            witness = {"atom": a.render(), "maps-to-final": str(count)}
    return CheckResult("g-final-object-atomic", ok, witness,
                       note="the final object is a single atom")


# Equivalence relations


def _triple_table(backend, x):
    """All (label12, label23, label13) marginal triples of orbits of X^3."""
    table = []
    for omega in backend.product_decompose(x, x):
        for orbit in backend.product_decompose(omega.atom, x):
            to_first = backend.compose_maps(omega.proj1, orbit.proj1)
            to_second = backend.compose_maps(omega.proj2, orbit.proj1)
            l23, _ = backend.product_factor(to_second, orbit.proj2)
            l13, _ = backend.product_factor(to_first, orbit.proj2)
            table.append((omega.label, l23, l13))
    return table


def _closure(labels, diag, swap, table):
    current = set(labels) | {diag}
    changed = True
    while changed:
        changed = False
        for lbl in list(current):
            if swap[lbl] not in current:
                current.add(swap[lbl])
                changed = True
        for l12, l23, l13 in table:
            if l12 in current and l23 in current and l13 not in current:
                current.add(l13)
                changed = True
    return frozenset(current)


def internal_equivalence_relations(backend, x):
    """All orbit-unions of X x X that are reflexive, symmetric, transitive."""
    orbits = backend.product_decompose(x, x)
    ident = backend.identity_map(x)
    diag, _ = backend.product_factor(ident, ident)
    swap = {o.label: backend.swap_orbit(x, x, o.label)[0] for o in orbits}
    table = _triple_table(backend, x)
    principal = {_closure({o.label}, diag, swap, table) for o in orbits}
    principal.add(_closure(set(), diag, swap, table))
    relations = set(principal)
    frontier = set(principal)
    while frontier:
        new = set()
        for r in frontier:
            for p in principal:
                joined = _closure(r | p, diag, swap, table)
                if joined not in relations:
                    relations.add(joined)
                    new.add(joined)
        frontier = new
    return sorted(relations, key=lambda r: (len(r), sorted(r)))


def quotient_of_relation(backend, x, relation):
    """A surjection whose kernel pair is the relation, if one exists."""
    orbits = backend.product_decompose(x, x)
    for q_atom in backend.atoms_up_to(x.degree):
        for q in backend.hom_atoms(x, q_atom):
            if not backend.is_surjective_map(q):
                continue
            kernel = {
                o.label for o in orbits
                if backend.compose_maps(q, o.proj1)
                == backend.compose_maps(q, o.proj2)
            }
            if kernel == relation:
                return q_atom, q
    return None


def check_effective_relations(backend, atoms):
    ok = True
    witnesses = []
    for x in atoms:
        for relation in internal_equivalence_relations(backend, x):
            if quotient_of_relation(backend, x, relation) is None:
                ok = False
                witnesses.append({
                    "atom": x.render(),
                    "relation-orbits": ", ".join(sorted(relation)),
                })
    witness = {}
    if witnesses:
        witness = dict(witnesses[0])
        witness["failing-relations"] = str(len(witnesses))
    return CheckResult("h-effective-equivalence-relations", ok, witness)


def pregalois_check(backend, bound, universality_degree=None):
    """Per-axiom report over the fragment within the bound."""
    atoms = backend.atoms_up_to(bound)
    if universality_degree is None:
        universality_degree = min(bound, 2)
    results = [
        check_coproducts(backend, atoms),
        check_atom_decomposition(backend, atoms),
        check_maps_into_coproducts(backend, atoms),
        check_fiber_products(backend, atoms, universality_degree),
        check_monos_are_isos(backend, atoms),
        check_atom_cospans_nonempty(backend, atoms),
        check_final_object(backend, atoms),
        check_effective_relations(backend, atoms),
    ]
    return Report(f"pre-galois axioms for {backend.backend_id} within {bound}",
                  results)
