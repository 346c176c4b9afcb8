"""The tensor category of free permutation objects.

Objects are formal vector spaces Vec_X with X an object of a backend; the
morphisms Vec_X -> Vec_Y are the invariant matrices on Y x X and composition
is integral matrix multiplication.  Every object is self-dual via the diagonal
indicators, and the categorical dimension of Vec_X is the measure of X.

The linearization checker verifies that the pushforward/pullback assignment is
an additive, plenary balanced functor, and re-extracts the measure from it in
two ways: from the "unit column" relation A_f beta_X = mu(f) beta_Y, and from
pushing the constant function forward along f.  Both must return the stored
measure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import one, zero
from .errors import ShapeMismatch
from .gset.base import GMap, GObject
from .linmat import (
    InvariantMatrix,
    atom_gmap,
    block_tensor,
    column_matrix,
    column_to_fn,
    constant_fn,
    identity_matrix,
    indicator_fn,
    matmul,
    pullback_matrix,
    pushforward_fn,
    pushforward_matrix,
    scalar_entry,
    tensor_space,
    unit_orbit_label,
    wiring_gmap,
)
from .report import CheckResult, Report


@dataclass(frozen=True)
class PermObject:
    underlying: GObject

    def render(self):
        return f"Vec[{self.underlying.render()}]"


@dataclass(frozen=True)
class PermMorphism:
    source: PermObject
    target: PermObject
    matrix: InvariantMatrix


def vec(x):
    return PermObject(x)


def unit_object(backend):
    return PermObject(backend.unit_object())


def as_morphism(matrix):
    return PermMorphism(vec(matrix.source), vec(matrix.target), matrix)


def identity(backend, x, field):
    return as_morphism(identity_matrix(backend, x.underlying, field))


def hom_basis(backend, x, y, field):
    """Orbit-indicator basis of Hom(Vec_X, Vec_Y)."""
    out = []
    for iy, b in enumerate(y.underlying.atoms):
        for ix, a in enumerate(x.underlying.atoms):
            for orbit in backend.product_decompose(b, a):
                matrix = InvariantMatrix(
                    backend, x.underlying, y.underlying,
                    {(iy, ix, orbit.label): one(field)})
                out.append(as_morphism(matrix))
    return out


def hom_dimension(backend, x, y):
    total = 0
    for b in y.underlying.atoms:
        for a in x.underlying.atoms:
            total += len(backend.product_decompose(b, a))
    return total


def compose(measure, g, f):
    if f.target != g.source:
        raise ShapeMismatch("composition shape mismatch")
    return as_morphism(matmul(measure, g.matrix, f.matrix))


def tensor_object(backend, x, y):
    return vec(tensor_space(backend, [x.underlying, y.underlying]).object)


def tensor(backend, f, g, field):
    src = tensor_space(backend, [f.source.underlying, g.source.underlying])
    tgt = tensor_space(backend, [f.target.underlying, g.target.underlying])
    matrix = block_tensor(field, [f.matrix, g.matrix], src, tgt,
                          [[0], [1]], [[0], [1]])
    return as_morphism(matrix)


def symmetry(backend, x, y, field):
    src = tensor_space(backend, [x.underlying, y.underlying])
    tgt = tensor_space(backend, [y.underlying, x.underlying])
    return as_morphism(pushforward_matrix(backend, wiring_gmap(src, tgt, (1, 0)),
                                          field))


def duality_data(backend, x, field):
    """Self-duality of Vec_X: both structure maps are diagonal indicators."""
    ps2 = tensor_space(backend, [x.underlying, x.underlying])
    entries = {}
    for i, atom in enumerate(x.underlying.atoms):
        ident = backend.identity_map(atom)
        label, _ = backend.product_factor(ident, ident)
        pos = ps2.index[(i, i, label)]
        entries[(pos, 0, unit_orbit_label(backend, ps2.object.atoms[pos]))] = \
            one(field)
    coev = InvariantMatrix(backend, backend.unit_object(), ps2.object, entries)
    ev_entries = {}
    for (pos, _z, _lbl), value in coev.entries.items():
        atom = ps2.object.atoms[pos]
        orbit = backend.product_decompose(backend.unit_atom(), atom)[0]
        ev_entries[(0, pos, orbit.label)] = value
    ev = InvariantMatrix(backend, ps2.object, backend.unit_object(), ev_entries)
    return as_morphism(coev), as_morphism(ev)


def check_snake_identities(backend, x, measure):
    """The two triangle identities for the self-duality of Vec_X."""
    field = measure.field
    xobj = x.underlying
    coev, ev = duality_data(backend, x, field)
    ps3 = tensor_space(backend, [xobj, xobj, xobj])
    right_unit = tensor_space(backend, [xobj, backend.unit_object()])
    left_unit = tensor_space(backend, [backend.unit_object(), xobj])
    ident = identity_matrix(backend, xobj, field)

    id_coev = block_tensor(field, [ident, coev.matrix], right_unit, ps3,
                           [[0], [1]], [[0], [1, 2]])
    ev_id = block_tensor(field, [ev.matrix, ident], ps3, left_unit,
                         [[0, 1], [2]], [[0], [1]])
    first = matmul(measure, ev_id, id_coev)

    coev_id = block_tensor(field, [coev.matrix, ident], left_unit, ps3,
                           [[0], [1]], [[0, 1], [2]])
    id_ev = block_tensor(field, [ident, ev.matrix], ps3, right_unit,
                         [[0], [1, 2]], [[0], [1]])
    second = matmul(measure, id_ev, coev_id)

    results = [
        CheckResult("snake-right", first == ident,
                    {} if first == ident else {"object": x.render()}),
        CheckResult("snake-left", second == ident,
                    {} if second == ident else {"object": x.render()}),
    ]
    return Report(f"snake identities on {x.render()}", results)


def categorical_dim(backend, x, measure):
    """The closed loop ev o swap o coev; equals the measure of X."""
    field = measure.field
    coev, ev = duality_data(backend, x, field)
    swap = symmetry(backend, x, x, field)
    loop = matmul(measure, ev.matrix, matmul(measure, swap.matrix, coev.matrix))
    return scalar_entry(loop, field)


def gamma_invariants(backend, x, field):
    """Orbit-indicator basis of the invariants Hom(Vec_1, Vec_X)."""
    out = []
    for pos in range(len(x.underlying.atoms)):
        fn = indicator_fn(x.underlying, pos, field)
        out.append(as_morphism(column_matrix(backend, fn, field)))
    return out


def coproduct_with_inclusions(backend, x, y):
    obj = x + y
    remaining = list(range(len(obj.atoms)))

    def take(atom):
        for pos in remaining:
            if obj.atoms[pos] == atom:
                remaining.remove(pos)
                return pos
        raise AssertionError("coproduct atom bookkeeping failed")

    legs_x = tuple((take(a), backend.identity_map(a)) for a in x.atoms)
    legs_y = tuple((take(b), backend.identity_map(b)) for b in y.atoms)
    return obj, GMap(x, obj, legs_x), GMap(y, obj, legs_y)


def check_linearization(measure, bound):
    """Additivity, plenarity, functoriality and measure re-extraction."""
    backend = measure.backend
    field = measure.field
    atoms = backend.atoms_up_to(bound)
    results = []

    # additivity over coproduct inclusions
    additive_ok = True
    witness = {}
    for a in atoms:
        for b in atoms:
            x = backend.object_of([a])
            y = backend.object_of([b])
            obj, inc_x, inc_y = coproduct_with_inclusions(backend, x, y)
            ax = pushforward_matrix(backend, inc_x, field)
            ay = pushforward_matrix(backend, inc_y, field)
            bx = pullback_matrix(backend, inc_x, field)
            by = pullback_matrix(backend, inc_y, field)
            ident_x = identity_matrix(backend, x, field)
            ident_y = identity_matrix(backend, y, field)
            ident_xy = identity_matrix(backend, obj, field)
            checks = [
                matmul(measure, bx, ax) == ident_x,
                matmul(measure, by, ay) == ident_y,
                matmul(measure, bx, ay).is_zero(),
                matmul(measure, by, ax).is_zero(),
                matmul(measure, ax, bx) + matmul(measure, ay, by) == ident_xy,
            ]
            if not all(checks):
                additive_ok = False
                witness = {"pair": f"{a.render()} , {b.render()}"}
    results.append(CheckResult("additive", additive_ok, witness))

    # plenarity: Hom(Vec_X, 1) is one-dimensional, spanned by the collapse
    plenary_ok = True
    witness = {}
    for a in atoms:
        x = vec(backend.object_of([a]))
        dim = hom_dimension(backend, x, unit_object(backend))
        alpha = pushforward_matrix(backend,
                                   backend.collapse_gmap(x.underlying), field)
        basis = hom_basis(backend, x, unit_object(backend), field)
        if dim != 1 or len(basis) != 1 or basis[0].matrix != alpha:
            plenary_ok = False
            witness = {"atom": a.render(), "dim": str(dim)}
    results.append(CheckResult("plenary", plenary_ok, witness))

    # functoriality of the balanced pair on composable atom maps
    functorial_ok = True
    witness = {}
    for a in atoms:
        for b in atoms:
            if b.degree > a.degree:
                continue
            for c in atoms:
                if c.degree > b.degree:
                    continue
                for f in backend.hom_atoms(a, b)[:3]:
                    for g in backend.hom_atoms(b, c)[:3]:
                        gf = backend.compose_maps(g, f)
                        a_side = matmul(
                            measure,
                            pushforward_matrix(backend, atom_gmap(backend, g), field),
                            pushforward_matrix(backend, atom_gmap(backend, f), field))
                        b_side = matmul(
                            measure,
                            pullback_matrix(backend, atom_gmap(backend, f), field),
                            pullback_matrix(backend, atom_gmap(backend, g), field))
                        ok = (a_side == pushforward_matrix(
                                  backend, atom_gmap(backend, gf), field)
                              and b_side == pullback_matrix(
                                  backend, atom_gmap(backend, gf), field))
                        if not ok:
                            functorial_ok = False
                            witness = {"maps": f"{f.data} then {g.data}"}
    results.append(CheckResult("functorial", functorial_ok, witness))

    # measure re-extraction: alpha_f beta_X = mu'(f) beta_Y, mu' must equal mu
    extraction_ok = True
    witness = {}
    for a in atoms:
        for b in atoms:
            for f in backend.hom_atoms(a, b):
                x = backend.object_of([a])
                y = backend.object_of([b])
                beta_x = column_matrix(backend, constant_fn(backend, x, one(field)),
                                       field)
                a_f = pushforward_matrix(backend, atom_gmap(backend, f), field)
                image = column_to_fn(matmul(measure, a_f, beta_x))
                extracted = image.coeffs.get(0, zero(field))
                stored = measure.mu_map(f)
                chain = measure.mu_atom(a) == extracted * measure.mu_atom(b)
                if extracted != stored or not chain:
                    extraction_ok = False
                    witness = {
                        "map": f"{a.render()} -> {b.render()} {f.data}",
                        "extracted": extracted.render(),
                        "stored": stored.render(),
                        "chain": "ok" if chain else "violated",
                    }
    results.append(CheckResult("measure-extraction", extraction_ok, witness))

    # pushforward of the constant function: f_*(1) = mu(f) * 1
    pushforward_ok = True
    witness = {}
    for a in atoms:
        for b in atoms:
            for f in backend.hom_atoms(a, b):
                x = backend.object_of([a])
                y = backend.object_of([b])
                gmap = atom_gmap(backend, f)
                image = pushforward_fn(measure, gmap, constant_fn(backend, x,
                                                                  one(field)))
                expected = constant_fn(backend, y, measure.mu_map(f))
                if image != expected:
                    pushforward_ok = False
                    witness = {"map": f"{a.render()} -> {b.render()} {f.data}"}
    results.append(CheckResult("unit-pushforward", pushforward_ok, witness))

    return Report(f"linearization checks for {backend.backend_id} within {bound}",
                  results)
