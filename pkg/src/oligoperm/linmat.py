"""Invariant Schwartz-function calculus on products.

An invariant matrix from Vec_X to Vec_Y stores one scalar per orbit of Y x X,
keyed by (target atom position, source atom position, orbit label).  Matrix
composition is integration over the middle object: for each triple orbit lying
over a target/source orbit, the two marginal entries are multiplied by the
measure of the fiber of the triple orbit over the pair orbit.  Fiber measures
are always computed as fiber-class products of the orbit projection map, never
as a quotient of atom values, so non-regular measures are fully supported.

Product spaces track, for every atom position of an iterated product object,
the projection maps onto each factor.  They make the wiring maps (diagonals,
coordinate permutations and collapses) and blocked tensor products of
morphisms computable without any associator bookkeeping: every composite in
the category layer is expressed against one flat product space.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import one, zero
from .errors import ShapeMismatch
from .gset.base import GMap, GObject


@dataclass(frozen=True)
class PSPosition:
    atom: object
    projections: tuple  # one (position in factor object, AtomMap) per factor
    meta: tuple  # (left position, right position, orbit label) or ()


class ProductSpace:
    """An iterated product of objects with per-position factor projections."""

    def __init__(self, backend, factors, obj, positions, left, index):
        self.backend = backend
        self.factors = factors
        self.object = obj
        self.positions = positions
        self.left = left
        self.index = index


def tensor_space(backend, factors):
    factors = tuple(factors)
    cache = getattr(backend, "_ps_cache", None)
    if cache is None:
        cache = {}
        backend._ps_cache = cache
    if factors in cache:
        return cache[factors]
    if len(factors) == 1:
        obj = factors[0]
        positions = tuple(
            PSPosition(a, ((i, backend.identity_map(a)),), ())
            for i, a in enumerate(obj.atoms)
        )
        space = ProductSpace(backend, factors, obj, positions, None, {})
    else:
        left = tensor_space(backend, factors[:-1])
        right = factors[-1]
        raw = []
        for lp, lpos in enumerate(left.positions):
            for rp, ratom in enumerate(right.atoms):
                for orbit in backend.product_decompose(lpos.atom, ratom):
                    projections = tuple(
                        (fp, backend.compose_maps(m, orbit.proj1))
                        for fp, m in lpos.projections
                    ) + ((rp, orbit.proj2),)
                    raw.append(
                        PSPosition(orbit.atom, projections, (lp, rp, orbit.label))
                    )
        raw.sort(key=lambda p: (p.atom, p.meta))
        obj = GObject(backend.backend_id, tuple(p.atom for p in raw))
        index = {p.meta: i for i, p in enumerate(raw)}
        space = ProductSpace(backend, factors, obj, tuple(raw), left, index)
    cache[factors] = space
    return space


def multi_factor(backend, maps, space):
    """Factor a joint map through a product space.

    ``maps`` lists, per factor, a (position in that factor, AtomMap) pair, all
    with one common source atom.  Returns the hit position and the induced map
    onto its atom.
    """
    if len(space.factors) == 1:
        fp, m = maps[0]
        return fp, m
    lpos, lmap = multi_factor(backend, maps[:-1], space.left)
    rp, rmap = maps[-1]
    label, g = backend.product_factor(lmap, rmap)
    return space.index[(lpos, rp, label)], g


class InvariantMatrix:
    """A sparse orbit-indexed matrix; zero entries are pruned eagerly."""

    def __init__(self, backend, source, target, entries=None):
        self.backend = backend
        self.source = source
        self.target = target
        self.entries = {}
        if entries:
            for key, value in entries.items():
                if not value.is_zero():
                    self.entries[key] = value

    def __eq__(self, other):
        return (isinstance(other, InvariantMatrix)
                and self.source == other.source
                and self.target == other.target
                and self.entries == other.entries)

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise ShapeMismatch("matrix sum shape mismatch")
        out = dict(self.entries)
        for key, value in other.entries.items():
            out[key] = out[key] + value if key in out else value
        return InvariantMatrix(self.backend, self.source, self.target, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, scalar):
        return InvariantMatrix(
            self.backend, self.source, self.target,
            {k: v * scalar for k, v in self.entries.items()})

    def entry(self, key, field):
        return self.entries.get(key, zero(field))

    def is_zero(self):
        return not self.entries

    def render_entries(self):
        out = []
        for (t, s, label) in sorted(self.entries, key=lambda k: (k[0], k[1], k[2])):
            out.append([t, s, label, self.entries[(t, s, label)].render()])
        return out


def identity_matrix(backend, x, field):
    entries = {}
    for i, a in enumerate(x.atoms):
        ident = backend.identity_map(a)
        label, _ = backend.product_factor(ident, ident)
        entries[(i, i, label)] = one(field)
    return InvariantMatrix(backend, x, x, entries)


def atom_gmap(backend, f):
    src = backend.object_of([f.source])
    tgt = backend.object_of([f.target])
    return GMap(src, tgt, ((0, f),))


def pushforward_matrix(backend, f, field):
    """The indicator of the graph of f, as a matrix Vec_source -> Vec_target."""
    entries = {}
    for i, a in enumerate(f.source.atoms):
        j, m = f.legs[i]
        label, _ = backend.product_factor(m, backend.identity_map(a))
        entries[(j, i, label)] = one(field)
    return InvariantMatrix(backend, f.source, f.target, entries)


def pullback_matrix(backend, f, field):
    return transpose(pushforward_matrix(backend, f, field))


def transpose(matrix):
    backend = matrix.backend
    entries = {}
    for (t, s, label), value in matrix.entries.items():
        a = matrix.target.atoms[t]
        b = matrix.source.atoms[s]
        label2, _ = backend.swap_orbit(a, b, label)
        entries[(s, t, label2)] = value
    return InvariantMatrix(backend, matrix.target, matrix.source, entries)


def _completions(backend, z, y, x, label_zy, label_yx):
    """Triple orbits of z x y x x with the two prescribed marginals, with the
    factor map of the (z, x) marginal: a list of (label_zx, map onto the
    marginal orbit atom)."""
    cache = getattr(backend, "_completion_cache", None)
    if cache is None:
        cache = {}
        backend._completion_cache = cache
    key = (z, y, x, label_zy, label_yx)
    if key in cache:
        return cache[key]
    orbit_zy = next(o for o in backend.product_decompose(z, y) if o.label == label_zy)
    out = []
    for orbit in backend.product_decompose(orbit_zy.atom, x):
        to_y = backend.compose_maps(orbit_zy.proj2, orbit.proj1)
        label_mid, _ = backend.product_factor(to_y, orbit.proj2)
        if label_mid != label_yx:
            continue
        to_z = backend.compose_maps(orbit_zy.proj1, orbit.proj1)
        label_zx, g = backend.product_factor(to_z, orbit.proj2)
        out.append((label_zx, g))
    result = tuple(out)
    cache[key] = result
    return result


def matmul(measure, b, a):
    """Integral matrix product: (BA)(z, x) integrates B(z, y) A(y, x) over y."""
    if a.target != b.source:
        raise ShapeMismatch(
            f"cannot compose {b.source.render()} <- after -> {a.target.render()}")
    backend = a.backend
    by_source = {}
    for (iz, iy, label), value in b.entries.items():
        by_source.setdefault(iy, []).append((iz, label, value))
    out = {}
    for (iy, ix, label_yx), a_val in a.entries.items():
        for (iz, label_zy, b_val) in by_source.get(iy, ()):
            z = b.target.atoms[iz]
            y = a.target.atoms[iy]
            x = a.source.atoms[ix]
            for label_zx, g in _completions(backend, z, y, x, label_zy, label_yx):
                term = b_val * a_val * measure.mu_map(g)
                key = (iz, ix, label_zx)
                out[key] = out[key] + term if key in out else term
    return InvariantMatrix(backend, a.source, b.target, out)


def block_tensor(measure_field, mats, src_ps, tgt_ps, src_blocks, tgt_blocks):
    """Tensor product of morphisms along a block structure.

    ``mats[k]`` maps the sub-product of the source factors in src_blocks[k] to
    the sub-product of the target factors in tgt_blocks[k].  The result is a
    matrix from the flat source product to the flat target product; its value
    on an orbit is the product of the factor entries on the orbit's marginals.
    """
    backend = src_ps.backend
    sub_src = [tensor_space(backend, [src_ps.factors[i] for i in blk])
               for blk in src_blocks]
    sub_tgt = [tensor_space(backend, [tgt_ps.factors[i] for i in blk])
               for blk in tgt_blocks]
    for k, mat in enumerate(mats):
        if mat.source != sub_src[k].object or mat.target != sub_tgt[k].object:
            raise ShapeMismatch(f"block {k} does not match its sub-product")

    def block_data(ps, blocks, subs):
        data = []
        for pos in ps.positions:
            per_block = []
            for k, blk in enumerate(blocks):
                maps = [pos.projections[i] for i in blk]
                per_block.append(multi_factor(backend, maps, subs[k]))
            data.append(per_block)
        return data

    src_data = block_data(src_ps, src_blocks, sub_src)
    tgt_data = block_data(tgt_ps, tgt_blocks, sub_tgt)
    support = [
        {(t, s) for (t, s, _label) in mat.entries}
        for mat in mats
    ]
    out = {}
    for w, wblocks in enumerate(tgt_data):
        for u, ublocks in enumerate(src_data):
            if any((wblocks[k][0], ublocks[k][0]) not in support[k]
                   for k in range(len(mats))):
                continue
            watom = tgt_ps.object.atoms[w]
            uatom = src_ps.object.atoms[u]
            for orbit in backend.product_decompose(watom, uatom):
                value = one(measure_field)
                for k, mat in enumerate(mats):
                    tpos, tmap = wblocks[k]
                    spos, smap = ublocks[k]
                    lbl, _ = backend.product_factor(
                        backend.compose_maps(tmap, orbit.proj1),
                        backend.compose_maps(smap, orbit.proj2))
                    entry = mat.entries.get((tpos, spos, lbl))
                    if entry is None:
                        value = None
                        break
                    value = value * entry
                if value is not None and not value.is_zero():
                    out[(w, u, orbit.label)] = value
    return InvariantMatrix(backend, src_ps.object, tgt_ps.object, out)


def product_gmap(backend, f, g, src_ps, tgt_ps):
    """The object-level map f x g between the given product spaces."""
    legs = []
    for pos in src_ps.positions:
        (i, p1), (j, p2) = pos.projections
        ti, m1 = f.legs[i]
        tj, m2 = g.legs[j]
        maps = [(ti, backend.compose_maps(m1, p1)), (tj, backend.compose_maps(m2, p2))]
        legs.append(multi_factor(backend, maps, tgt_ps))
    return GMap(src_ps.object, tgt_ps.object, tuple(legs))


def wiring_gmap(src_ps, tgt_ps, route):
    """The map that feeds target factor j from source factor route[j]."""
    backend = src_ps.backend
    for j, i in enumerate(route):
        if tgt_ps.factors[j] != src_ps.factors[i]:
            raise ShapeMismatch("wiring route factor mismatch")
    legs = []
    for pos in src_ps.positions:
        maps = [pos.projections[i] for i in route]
        legs.append(multi_factor(backend, maps, tgt_ps))
    return GMap(src_ps.object, tgt_ps.object, tuple(legs))


# Invariant functions


@dataclass
class SchwartzFn:
    """An invariant function on an object: one coefficient per atom position;
    missing positions mean zero."""

    carrier: GObject
    coeffs: dict

    def prune(self):
        return SchwartzFn(self.carrier,
                          {k: v for k, v in self.coeffs.items() if not v.is_zero()})

    def __eq__(self, other):
        return (isinstance(other, SchwartzFn)
                and self.carrier == other.carrier
                and self.prune().coeffs == other.prune().coeffs)

    def pointwise_mul(self, other):
        if self.carrier != other.carrier:
            raise ShapeMismatch("pointwise product carrier mismatch")
        out = {}
        for k, v in self.coeffs.items():
            if k in other.coeffs:
                out[k] = v * other.coeffs[k]
        return SchwartzFn(self.carrier, out).prune()


def constant_fn(backend, x, scalar):
    return SchwartzFn(x, {i: scalar for i in range(len(x.atoms))}).prune()


def indicator_fn(x, pos, field):
    return SchwartzFn(x, {pos: one(field)})


def integrate(measure, fn):
    total = zero(measure.field)
    for pos, coeff in fn.coeffs.items():
        total = total + coeff * measure.mu_atom(fn.carrier.atoms[pos])
    return total


def unit_orbit_label(backend, a):
    """Label of the unique orbit of a x (one-point set)."""
    orbit = backend.product_decompose(a, backend.unit_atom())[0]
    return orbit.label


def column_matrix(backend, fn, field):
    """A function on X as a matrix Vec_1 -> Vec_X."""
    unit = backend.unit_object()
    entries = {}
    for pos, coeff in fn.coeffs.items():
        label = unit_orbit_label(backend, fn.carrier.atoms[pos])
        entries[(pos, 0, label)] = coeff
    return InvariantMatrix(backend, unit, fn.carrier, entries)


def column_to_fn(matrix):
    backend = matrix.backend
    coeffs = {}
    for (pos, _zero, _label), value in matrix.entries.items():
        coeffs[pos] = value
    return SchwartzFn(matrix.target, coeffs)


def row_to_fn(matrix):
    """A matrix into the unit object, read as a function on its source."""
    coeffs = {}
    for (_zero, pos, _label), value in matrix.entries.items():
        coeffs[pos] = value
    return SchwartzFn(matrix.source, coeffs)


def pullback_fn(gmap, fn):
    """Precompose an invariant function with an object-level map.

    No measure is involved: the pulled-back function takes, on each source
    orbit, the value of the target orbit it maps into.
    """
    coeffs = {}
    for i, (j, _m) in enumerate(gmap.legs):
        if j in fn.coeffs:
            coeffs[i] = fn.coeffs[j]
    return SchwartzFn(gmap.source, coeffs).prune()


def scalar_entry(matrix, field):
    """The value of a 1x1 matrix (both objects single-atom)."""
    if len(matrix.source.atoms) != 1 or len(matrix.target.atoms) != 1:
        raise ShapeMismatch("not a 1x1 matrix")
    if not matrix.entries:
        return zero(field)
    (value,) = matrix.entries.values()
    return value


def full_row_rank_on_invariants(measure, matrix):
    """Whether the induced map on invariant functions is surjective."""
    backend = matrix.backend
    field = measure.field
    columns = []
    for s in range(len(matrix.source.atoms)):
        col = matmul(measure, matrix,
                     column_matrix(backend,
                                   indicator_fn(matrix.source, s, field), field))
        fn = column_to_fn(col)
        columns.append([fn.coeffs.get(t, zero(field))
                        for t in range(len(matrix.target.atoms))])
    rows = len(matrix.target.atoms)
    grid = [[columns[s][t] for s in range(len(columns))] for t in range(rows)]
    return _rank(grid, field) == rows


def pushforward_fn(measure, gmap, fn):
    """Push an invariant function forward along an object-level map.

    The coefficient on a target orbit collects, from every source orbit
    mapping into it, the source coefficient weighted by the fiber measure of
    the restricted atom map.
    """
    out = {}
    for i, coeff in fn.coeffs.items():
        j, m = gmap.legs[i]
        term = coeff * measure.mu_map(m)
        out[j] = out[j] + term if j in out else term
    return SchwartzFn(gmap.target, out).prune()


def pushforward_surjective_on_invariants(measure, gmap):
    field = measure.field
    rows = len(gmap.target.atoms)
    grid = [[zero(field) for _ in gmap.source.atoms] for _ in range(rows)]
    for s in range(len(gmap.source.atoms)):
        j, m = gmap.legs[s]
        grid[j][s] = grid[j][s] + measure.mu_map(m)
    return _rank(grid, field) == rows


def _rank(grid, field):
    grid = [row[:] for row in grid]
    rank = 0
    cols = len(grid[0]) if grid else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(grid))
                      if not grid[r][c].is_zero()), None)
        if pivot is None:
            continue
        grid[rank], grid[pivot] = grid[pivot], grid[rank]
        inv = grid[rank][c].inv()
        grid[rank] = [v * inv for v in grid[rank]]
        for r in range(len(grid)):
            if r != rank and not grid[r][c].is_zero():
                factor = grid[r][c]
                grid[r] = [v - factor * w for v, w in zip(grid[r], grid[rank])]
        rank += 1
    return rank
