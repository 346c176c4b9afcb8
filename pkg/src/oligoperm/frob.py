"""Frobenius structure on free permutation objects, and its verifications.

Every Vec_X carries: unit = pullback of the collapse (the all-ones invariant),
multiplication = pullback of the diagonal (pointwise product), counit =
pushforward of the collapse (integrate against one), comultiplication =
pushforward of the diagonal.  The checks below verify the algebra, coalgebra,
compatibility and specialness laws; the trace form composite; perfectness of
the trace pairing via the triangle identities; splitting idempotents; and the
correspondence between equivalence idempotents and kernel pairs of backend
surjections.

All structure maps and their tensor paddings are pushforwards or pullbacks of
explicit coordinate wirings between one flat product space and another, so
the only engine underneath is integral matrix multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import one, zero
from .errors import NotSurjective
from .gset.base import GMap
from .linmat import (
    InvariantMatrix,
    SchwartzFn,
    block_tensor,
    column_to_fn,
    identity_matrix,
    matmul,
    multi_factor,
    product_gmap,
    pullback_matrix,
    pushforward_matrix,
    tensor_space,
    transpose,
    wiring_gmap,
)
from .permcat import duality_data, vec
from .report import CheckResult, Report


@dataclass
class FrobeniusStructure:
    carrier: object  # GObject
    unit: InvariantMatrix          # 1 -> A
    mult: InvariantMatrix          # A (x) A -> A
    counit: InvariantMatrix        # A -> 1
    comult: InvariantMatrix        # A -> A (x) A
    ps1: object
    ps2: object

    @property
    def backend(self):
        return self.ps1.backend

    @property
    def ps3(self):
        # only the axiom and pairing checks need the triple product space;
        # building it is the expensive part, so it stays lazy
        return tensor_space(self.backend, [self.carrier] * 3)


def build_frobenius(backend, x, field):
    """The natural Frobenius structure on Vec_X."""
    ps1 = tensor_space(backend, [x])
    ps2 = tensor_space(backend, [x, x])
    collapse = backend.collapse_gmap(x)
    diag = wiring_gmap(ps1, ps2, (0, 0))
    return FrobeniusStructure(
        carrier=x,
        unit=pullback_matrix(backend, collapse, field),
        mult=pullback_matrix(backend, diag, field),
        counit=pushforward_matrix(backend, collapse, field),
        comult=pushforward_matrix(backend, diag, field),
        ps1=ps1,
        ps2=ps2,
    )


def verify_frobenius(f, measure):
    """The four Frobenius axioms, each law checked as a matrix identity."""
    backend = f.backend
    field = measure.field
    x = f.carrier
    ident = identity_matrix(backend, x, field)
    unit_right = tensor_space(backend, [backend.unit_object(), x])
    results = []

    # (a) commutative associative unital algebra
    swap = pushforward_matrix(backend, wiring_gmap(f.ps2, f.ps2, (1, 0)), field)
    mu_id = pullback_matrix(backend, wiring_gmap(f.ps2, f.ps3, (0, 0, 1)), field)
    id_mu = pullback_matrix(backend, wiring_gmap(f.ps2, f.ps3, (0, 1, 1)), field)
    results.append(CheckResult(
        "algebra-associativity",
        matmul(measure, f.mult, mu_id) == matmul(measure, f.mult, id_mu)))
    results.append(CheckResult(
        "algebra-commutativity", matmul(measure, f.mult, swap) == f.mult))
    eta_id = block_tensor(field, [f.unit, ident], unit_right, f.ps2,
                          [[0], [1]], [[0], [1]])
    results.append(CheckResult(
        "algebra-unit", matmul(measure, f.mult, eta_id) == ident))

    # (b) cocommutative coassociative counital coalgebra
    delta_id = pushforward_matrix(backend,
                                  wiring_gmap(f.ps2, f.ps3, (0, 0, 1)), field)
    id_delta = pushforward_matrix(backend,
                                  wiring_gmap(f.ps2, f.ps3, (0, 1, 1)), field)
    results.append(CheckResult(
        "coalgebra-coassociativity",
        matmul(measure, delta_id, f.comult) == matmul(measure, id_delta, f.comult)))
    results.append(CheckResult(
        "coalgebra-cocommutativity", matmul(measure, swap, f.comult) == f.comult))
    eps_id = block_tensor(field, [f.counit, ident], f.ps2, unit_right,
                          [[0], [1]], [[0], [1]])
    results.append(CheckResult(
        "coalgebra-counit", matmul(measure, eps_id, f.comult) == ident))

    # (c) the compatibility square
    lhs = matmul(measure, id_mu, delta_id)
    mid = matmul(measure, f.comult, f.mult)
    rhs = matmul(measure, mu_id, id_delta)
    results.append(CheckResult("frobenius-compatibility", lhs == mid == rhs))

    # (d) multiplication splits comultiplication
    results.append(CheckResult(
        "special", matmul(measure, f.mult, f.comult) == ident))

    return Report(f"frobenius axioms on Vec[{x.render()}]", results)


def trace_form(f, measure):
    """The duality composite A -> A(x)A(x)A -> A(x)A -> 1 realizing the trace."""
    backend = f.backend
    field = measure.field
    x = f.carrier
    ident = identity_matrix(backend, x, field)
    coev, ev = duality_data(backend, vec(x), field)
    right_unit = tensor_space(backend, [x, backend.unit_object()])
    id_coev = block_tensor(field, [ident, coev.matrix], right_unit, f.ps3,
                           [[0], [1]], [[0], [1, 2]])
    mu_id = pullback_matrix(backend, wiring_gmap(f.ps2, f.ps3, (0, 0, 1)), field)
    trace = matmul(measure, ev.matrix, matmul(measure, mu_id, id_coev))
    return trace


def trace_pairing(f, measure):
    return matmul(measure, f.counit, f.mult)


def check_trace(f, measure):
    """trace form equals the counit, and the counit is the transposed unit."""
    trace = trace_form(f, measure)
    results = [
        CheckResult("trace-form-is-counit", trace == f.counit),
        CheckResult("counit-is-unit-transpose", f.counit == transpose(f.unit)),
    ]
    return Report(f"trace checks on Vec[{f.carrier.render()}]", results)


def check_perfect_pairing(f, measure):
    """The pairing counit o mult is perfect: the candidate coevaluation
    comult o unit satisfies both triangle identities."""
    backend = f.backend
    field = measure.field
    x = f.carrier
    ident = identity_matrix(backend, x, field)
    beta = trace_pairing(f, measure)
    alpha = matmul(measure, f.comult, f.unit)
    left_unit = tensor_space(backend, [backend.unit_object(), x])
    right_unit = tensor_space(backend, [x, backend.unit_object()])

    id_alpha = block_tensor(field, [ident, alpha], right_unit, f.ps3,
                            [[0], [1]], [[0], [1, 2]])
    beta_id = block_tensor(field, [beta, ident], f.ps3, left_unit,
                           [[0, 1], [2]], [[0], [1]])
    first = matmul(measure, beta_id, id_alpha)

    alpha_id = block_tensor(field, [alpha, ident], left_unit, f.ps3,
                            [[0], [1]], [[0, 1], [2]])
    id_beta = block_tensor(field, [ident, beta], f.ps3, right_unit,
                           [[0], [1, 2]], [[0], [1]])
    second = matmul(measure, id_beta, alpha_id)

    results = [
        CheckResult("pairing-triangle-right", first == ident),
        CheckResult("pairing-triangle-left", second == ident),
    ]
    return Report(f"perfect pairing on Vec[{x.render()}]", results)


def _diag_mult_matrix(backend, fn, field):
    """Pointwise multiplication by an invariant function, as an endomatrix."""
    entries = {}
    for pos, coeff in fn.coeffs.items():
        atom = fn.carrier.atoms[pos]
        ident = backend.identity_map(atom)
        label, _ = backend.product_factor(ident, ident)
        entries[(pos, pos, label)] = coeff
    return InvariantMatrix(backend, fn.carrier, fn.carrier, entries)


def splitting_idempotent(f, measure):
    """The splitting idempotent comult(1), with its defining verifications."""
    backend = f.backend
    field = measure.field
    alpha_col = matmul(measure, f.comult, f.unit)
    alpha_fn = column_to_fn(alpha_col)
    results = []

    results.append(CheckResult(
        "idempotent", alpha_fn.pointwise_mul(alpha_fn) == alpha_fn))
    results.append(CheckResult(
        "multiplies-to-one", matmul(measure, f.mult, alpha_col) == f.unit))

    pr1 = pullback_matrix(backend, wiring_gmap(f.ps2, f.ps1, (0,)), field)
    pr2 = pullback_matrix(backend, wiring_gmap(f.ps2, f.ps1, (1,)), field)
    diag_alpha = _diag_mult_matrix(backend, alpha_fn, field)
    left = matmul(measure, diag_alpha, pr1)
    right = matmul(measure, diag_alpha, pr2)
    results.append(CheckResult("balanced", left == right))

    # round trips: x -> (x(x)1)alpha recovers the comultiplication, and
    # evaluating the comultiplication at the unit recovers alpha
    results.append(CheckResult("splitting-recovers-comult", left == f.comult))
    coev, _ = duality_data(backend, vec(f.carrier), field)
    results.append(CheckResult("equals-diagonal-coevaluation",
                               alpha_col == coev.matrix))

    report = Report(f"splitting idempotent on Vec[{f.carrier.render()}]", results)
    return alpha_fn, report


def _position_fn(backend, gamma, ps, pair):
    """Value of a function on a 2-fold space at the marginal of two maps."""
    pos, _ = multi_factor(backend, list(pair), ps)
    return pos


def e_idempotent_check(backend, x, gamma, measure):
    """Equivalence-idempotent conditions for an invariant function on X x X."""
    field = measure.field
    ps2 = tensor_space(backend, [x, x])
    ps3 = tensor_space(backend, [x, x, x])
    if gamma.carrier != ps2.object:
        raise ValueError("gamma must live on the square of its object")
    results = []

    results.append(CheckResult(
        "idempotent", gamma.pointwise_mul(gamma) == gamma))

    frob = build_frobenius(backend, x, field)
    alpha_fn = column_to_fn(matmul(measure, frob.comult, frob.unit))
    results.append(CheckResult(
        "dominates-diagonal", alpha_fn.pointwise_mul(gamma) == alpha_fn))

    swap = wiring_gmap(ps2, ps2, (1, 0))
    swapped = {}
    for i, (j, _m) in enumerate(swap.legs):
        value = gamma.coeffs.get(j, zero(field))
        if not value.is_zero():
            swapped[i] = value
    results.append(CheckResult(
        "symmetric", SchwartzFn(ps2.object, swapped) == gamma))

    lifts = {}
    for (i, j) in [(0, 1), (0, 2), (1, 2)]:
        coeffs = {}
        for pos_idx, pos in enumerate(ps3.positions):
            pair_pos = _position_fn(backend, gamma, ps2,
                                    (pos.projections[i], pos.projections[j]))
            value = gamma.coeffs.get(pair_pos, zero(field))
            if not value.is_zero():
                coeffs[pos_idx] = value
        lifts[(i, j)] = SchwartzFn(ps3.object, coeffs)
    p12, p13, p23 = lifts[(0, 1)], lifts[(0, 2)], lifts[(1, 2)]
    triple = (p12.pointwise_mul(p23) == p12.pointwise_mul(p13)
              == p13.pointwise_mul(p23))
    results.append(CheckResult("triple-coherence", triple))

    return Report("equivalence idempotent checks", results)


def kernel_pair_gamma(backend, f, field):
    """Indicator of the kernel pair of a surjection, on the source square."""
    if not backend.is_surjective_gmap(f):
        raise NotSurjective(f"{f.source.render()} -> {f.target.render()}")
    y = f.source
    ps2 = tensor_space(backend, [y, y])
    coeffs = {}
    for idx, pos in enumerate(ps2.positions):
        (i, p1), (j, p2) = pos.projections
        ti, m1 = f.legs[i]
        tj, m2 = f.legs[j]
        if ti == tj and backend.compose_maps(m1, p1) == backend.compose_maps(m2, p2):
            coeffs[idx] = one(field)
    return SchwartzFn(ps2.object, coeffs)


def gamma_of_projection(backend, f, measure):
    """Kernel-pair idempotent of a surjection, with its verifications.

    Checks that the indicator is an equivalence idempotent and that it is the
    pullback along f x f of the splitting idempotent of the image."""
    field = measure.field
    gamma = kernel_pair_gamma(backend, f, field)
    y, x = f.source, f.target
    report = e_idempotent_check(backend, y, gamma, measure)
    results = list(report.results)

    ps2_y = tensor_space(backend, [y, y])
    ps2_x = tensor_space(backend, [x, x])
    fxf = product_gmap(backend, f, f, ps2_y, ps2_x)
    frob_x = build_frobenius(backend, x, field)
    alpha_x = matmul(measure, frob_x.comult, frob_x.unit)
    pulled = matmul(measure, pullback_matrix(backend, fxf, field), alpha_x)
    results.append(CheckResult(
        "pullback-of-target-splitting",
        column_to_fn(pulled) == gamma))

    return gamma, Report(
        f"kernel-pair idempotent of {y.render()} -> {x.render()}", results)


def check_sum_tensor_traces(backend, xa, xb, measure):
    """Trace data of sums and products against blockwise assembly.

    All comparisons precompose rows with graph maps, which is function
    pullback and needs no integration."""
    from .linmat import pullback_fn, row_to_fn
    from .permcat import coproduct_with_inclusions

    field = measure.field
    results = []

    # direct sum: the counit restricts to the summand counits and the pairing
    # is an orthogonal direct sum
    fa = build_frobenius(backend, xa, field)
    fb = build_frobenius(backend, xb, field)
    obj, inc_a, inc_b = coproduct_with_inclusions(backend, xa, xb)
    fsum = build_frobenius(backend, obj, field)
    results.append(CheckResult(
        "sum-counit-left",
        pullback_fn(inc_a, row_to_fn(fsum.counit)) == row_to_fn(fa.counit)))
    results.append(CheckResult(
        "sum-counit-right",
        pullback_fn(inc_b, row_to_fn(fsum.counit)) == row_to_fn(fb.counit)))

    beta_sum = row_to_fn(trace_pairing(fsum, measure))
    ps_aa = tensor_space(backend, [xa, xa])
    ps_ab = tensor_space(backend, [xa, xb])
    sum2 = tensor_space(backend, [obj, obj])
    inc_aa = product_gmap(backend, inc_a, inc_a, ps_aa, sum2)
    inc_ab = product_gmap(backend, inc_a, inc_b, ps_ab, sum2)
    results.append(CheckResult(
        "sum-pairing-diagonal-block",
        pullback_fn(inc_aa, beta_sum)
        == row_to_fn(trace_pairing(fa, measure))))
    results.append(CheckResult(
        "sum-pairing-cross-block",
        not pullback_fn(inc_ab, beta_sum).coeffs))

    # tensor product: the pairing of the product object is the product of the
    # pairings, compared on the flattened four-fold product
    prod = tensor_space(backend, [xa, xb])
    fprod = build_frobenius(backend, prod.object, field)
    flat4 = tensor_space(backend, [xa, xb, xa, xb])
    square = tensor_space(backend, [prod.object, prod.object])
    unflatten = _unflatten_gmap(backend, flat4, square, prod)
    lhs = pullback_fn(unflatten, row_to_fn(trace_pairing(fprod, measure)))

    beta_a = row_to_fn(trace_pairing(fa, measure))
    beta_b = row_to_fn(trace_pairing(fb, measure))
    ps2a = tensor_space(backend, [xa, xa])
    ps2b = tensor_space(backend, [xb, xb])
    coeffs = {}
    for idx, pos in enumerate(flat4.positions):
        pa, _ = multi_factor(backend, [pos.projections[0], pos.projections[2]],
                             ps2a)
        pb, _ = multi_factor(backend, [pos.projections[1], pos.projections[3]],
                             ps2b)
        if pa in beta_a.coeffs and pb in beta_b.coeffs:
            coeffs[idx] = beta_a.coeffs[pa] * beta_b.coeffs[pb]
    rhs = SchwartzFn(flat4.object, coeffs).prune()
    results.append(CheckResult("tensor-pairing-factorizes", lhs == rhs))

    return Report("sum and tensor trace assembly", results)


def _unflatten_gmap(backend, flat4, square, prod):
    """(a, b, a', b') -> ((a, b), (a', b')) between the two product spaces."""
    legs = []
    for pos in flat4.positions:
        (ia, ma), (ib, mb), (ia2, ma2), (ib2, mb2) = pos.projections
        left = multi_factor(backend, [(ia, ma), (ib, mb)], prod)
        right = multi_factor(backend, [(ia2, ma2), (ib2, mb2)], prod)
        legs.append(multi_factor(backend, [left, right], square))
    return GMap(flat4.object, square.object, tuple(legs))
