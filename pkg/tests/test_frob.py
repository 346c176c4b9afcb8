"""Frobenius structure, trace data, splitting and equivalence idempotents."""

import pytest

from oligoperm.coeff import Scalar, one
from oligoperm.errors import NotSurjective
from oligoperm.frob import (
    build_frobenius,
    check_perfect_pairing,
    check_sum_tensor_traces,
    check_trace,
    e_idempotent_check,
    gamma_of_projection,
    kernel_pair_gamma,
    splitting_idempotent,
    trace_form,
    trace_pairing,
    verify_frobenius,
)
from oligoperm.gset import LINE, SYM, GMap, preset_backend
from oligoperm.linmat import SchwartzFn, constant_fn, matmul, scalar_entry, tensor_space
from oligoperm.measure import solve_measures


@pytest.fixture(scope="module")
def mu_t():
    return solve_measures(SYM, 3).generic()


@pytest.fixture(scope="module")
def mu_line():
    return solve_measures(LINE, 3).generic()


@pytest.fixture(scope="module")
def s3():
    return preset_backend("S3")


@pytest.fixture(scope="module")
def mu_s3(s3):
    return solve_measures(s3, 6).generic()


def sym_obj(n):
    return SYM.object_of([SYM.atom_of_arity(n)])


def line_obj(n):
    return LINE.object_of([LINE.atom_of_arity(n)])


def test_unit_algebra(mu_t):
    f = build_frobenius(SYM, SYM.unit_object(), mu_t.field)
    for mat in (f.unit, f.mult, f.counit, f.comult):
        assert len(mat.entries) == 1
        assert list(mat.entries.values())[0] == one(mu_t.field)
    assert verify_frobenius(f, mu_t).passed


def test_total_measure_from_counit(mu_t):
    f = build_frobenius(SYM, sym_obj(1), mu_t.field)
    t = Scalar.variable(mu_t.field)
    total = matmul(mu_t, f.counit, f.unit)
    assert scalar_entry(total, mu_t.field) == t


def test_frobenius_axioms_sym(mu_t):
    for n in range(3):
        f = build_frobenius(SYM, sym_obj(n), mu_t.field)
        report = verify_frobenius(f, mu_t)
        assert report.passed, [r.name for r in report.failures()]


def test_frobenius_axioms_line(mu_line):
    for n in range(3):
        f = build_frobenius(LINE, line_obj(n), mu_line.field)
        report = verify_frobenius(f, mu_line)
        assert report.passed, [r.name for r in report.failures()]


def test_frobenius_axioms_finite(s3, mu_s3):
    for atom in s3.atoms_up_to(6):
        f = build_frobenius(s3, s3.object_of([atom]), mu_s3.field)
        report = verify_frobenius(f, mu_s3)
        assert report.passed, [r.name for r in report.failures()]


def test_mutant_detection_lives_in_general_composition(mu_t):
    # The structure maps are diagonal-supported indicators, so every middle
    # coordinate in the axiom composites is pinned to a point: the axiom
    # identities hold for any fiber assignment.  A broken fiber table is
    # caught by composition of general morphisms instead.
    mutant = mu_t.with_perturbed_atom(SYM.atom_of_arity(2), one(mu_t.field))
    f = build_frobenius(SYM, sym_obj(1), mutant.field)
    assert verify_frobenius(f, mutant).passed

    from oligoperm.linmat import InvariantMatrix, pushforward_matrix

    x = sym_obj(1)
    eps = pushforward_matrix(SYM, SYM.collapse_gmap(x), mutant.field)
    e_neq = InvariantMatrix(SYM, x, x, {(0, 0, "[]"): one(mutant.field)})
    lhs = matmul(mutant, matmul(mutant, eps, e_neq), e_neq)
    rhs = matmul(mutant, eps, matmul(mutant, e_neq, e_neq))
    assert lhs != rhs


def test_trace_form_equals_counit(mu_t, mu_line):
    for backend, measure, objs in [
        (SYM, mu_t, [sym_obj(1), sym_obj(2)]),
        (LINE, mu_line, [line_obj(1), line_obj(2)]),
    ]:
        for obj in objs:
            f = build_frobenius(backend, obj, measure.field)
            report = check_trace(f, measure)
            assert report.passed, [r.name for r in report.failures()]


def test_trace_pairing_is_diagonal_indicator(mu_t):
    f = build_frobenius(SYM, sym_obj(1), mu_t.field)
    beta = trace_pairing(f, mu_t)
    ps2 = tensor_space(SYM, [sym_obj(1), sym_obj(1)])
    diag = [i for i, p in enumerate(ps2.positions) if p.atom.degree == 1]
    assert set(k[1] for k in beta.entries) == set(diag)
    assert all(v == one(mu_t.field) for v in beta.entries.values())


def test_perfect_pairing(mu_t, mu_line):
    for backend, measure, obj in [
        (SYM, mu_t, sym_obj(2)),
        (LINE, mu_line, line_obj(2)),
    ]:
        f = build_frobenius(backend, obj, measure.field)
        report = check_perfect_pairing(f, measure)
        assert report.passed, [r.name for r in report.failures()]


def test_splitting_idempotent(mu_t, mu_line, s3, mu_s3):
    for backend, measure, obj in [
        (SYM, mu_t, sym_obj(2)),
        (LINE, mu_line, line_obj(1)),
        (s3, mu_s3, s3.object_of([s3.atoms_up_to(3)[2]])),
    ]:
        f = build_frobenius(backend, obj, measure.field)
        alpha, report = splitting_idempotent(f, measure)
        assert report.passed, [r.name for r in report.failures()]
        ps2 = tensor_space(backend, [obj, obj])
        diag = {i for i, p in enumerate(ps2.positions)
                if p.atom.degree == obj.atoms[0].degree
                and p.projections[0][1] == p.projections[1][1]}
        assert set(alpha.coeffs) == diag


def test_e_idempotent_diagonal_and_all_ones(mu_t):
    x = sym_obj(2)
    ps2 = tensor_space(SYM, [x, x])
    f = build_frobenius(SYM, x, mu_t.field)
    from oligoperm.linmat import column_to_fn

    alpha = column_to_fn(matmul(mu_t, f.comult, f.unit))
    assert e_idempotent_check(SYM, x, alpha, mu_t).passed

    all_ones = constant_fn(SYM, ps2.object, one(mu_t.field))
    assert e_idempotent_check(SYM, x, all_ones, mu_t).passed


def test_e_idempotent_first_coordinate(mu_t):
    # agreement in the first coordinate on pairs of injective pairs
    x = sym_obj(2)
    a2, a1 = SYM.atom_of_arity(2), SYM.atom_of_arity(1)
    select_first = [m for m in SYM.hom_atoms(a2, a1) if m.data == (1,)][0]
    f = GMap(x, SYM.object_of([a1]), ((0, select_first),))
    gamma = kernel_pair_gamma(SYM, f, mu_t.field)
    report = e_idempotent_check(SYM, x, gamma, mu_t)
    assert report.passed, [r.name for r in report.failures()]
    labels = {tensor_space(SYM, [x, x]).positions[i].meta[2]
              for i in gamma.coeffs}
    assert labels == {"[1>1]", "[1>1,2>2]"}


def test_e_idempotent_rejects_asymmetric(mu_t):
    x = sym_obj(2)
    ps2 = tensor_space(SYM, [x, x])
    coeffs = {}
    for i, p in enumerate(ps2.positions):
        if p.meta[2] in {"[1>1,2>2]", "[1>2]"}:
            coeffs[i] = one(mu_t.field)
    gamma = SchwartzFn(ps2.object, coeffs)
    report = e_idempotent_check(SYM, x, gamma, mu_t)
    assert not report.result("symmetric").passed


def test_gamma_of_projection_round_trips(mu_t, mu_line):
    for backend, measure, bound in [(SYM, mu_t, 3), (LINE, mu_line, 3)]:
        atoms = backend.atoms_up_to(bound)
        for a in atoms:
            for b in atoms:
                for m in backend.hom_atoms(a, b):
                    f = GMap(backend.object_of([a]), backend.object_of([b]),
                             ((0, m),))
                    gamma, report = gamma_of_projection(backend, f, measure)
                    assert report.passed, (a, b, m.data,
                                           [r.name for r in report.failures()])


def test_gamma_of_identity_is_diagonal(mu_t):
    x = sym_obj(2)
    f = SYM.identity_gmap(x)
    gamma, report = gamma_of_projection(SYM, f, mu_t)
    assert report.passed
    fstruct = build_frobenius(SYM, x, mu_t.field)
    from oligoperm.linmat import column_to_fn

    alpha = column_to_fn(matmul(mu_t, fstruct.comult, fstruct.unit))
    assert gamma == alpha


def test_gamma_not_surjective_error(s3, mu_s3):
    atoms = s3.atoms_up_to(6)
    x = s3.object_of([atoms[0]])
    y = s3.object_of([atoms[0], atoms[1]])
    f = GMap(x, y, ((0, s3.identity_map(atoms[0])),))
    with pytest.raises(NotSurjective):
        gamma_of_projection(s3, f, mu_s3)


def test_finite_bgamma_dimensions(s3, mu_s3):
    # kernel of x -> gamma (x tensor 1 - 1 tensor x) has dimension |target|
    from oligoperm.oracle import bgamma_kernel_dimension

    atoms = s3.atoms_up_to(6)
    for a in atoms:
        for b in atoms:
            for m in s3.hom_atoms(a, b):
                f = GMap(s3.object_of([a]), s3.object_of([b]), ((0, m),))
                gamma = kernel_pair_gamma(s3, f, mu_s3.field)
                dim = bgamma_kernel_dimension(s3, s3.object_of([a]), gamma,
                                              mu_s3.field)
                assert dim == b.degree


def test_invariant_algebra_idempotents_are_atom_subsets(mu_t):
    # idempotents of the pointwise invariant algebra on Vec_X are the 0/1
    # functions; the minimal nonzero ones pick out single atoms
    import itertools

    x = SYM.object_of([SYM.atom_of_arity(1), SYM.atom_of_arity(2)])
    field = mu_t.field
    idempotents = []
    zero_one = [Scalar.from_int(field, 0), Scalar.from_int(field, 1)]
    for combo in itertools.product(zero_one, repeat=len(x.atoms)):
        fn = SchwartzFn(x, {i: c for i, c in enumerate(combo)}).prune()
        if fn.pointwise_mul(fn) == fn:
            idempotents.append(fn)
    assert len(idempotents) == 2 ** len(x.atoms)
    minimal = [fn for fn in idempotents if len(fn.coeffs) == 1]
    assert len(minimal) == len(x.atoms)


def test_sum_tensor_traces(mu_t, mu_line):
    report = check_sum_tensor_traces(SYM, sym_obj(1), sym_obj(1), mu_t)
    assert report.passed, [r.name for r in report.failures()]
    report = check_sum_tensor_traces(LINE, line_obj(1), line_obj(2), mu_line)
    assert report.passed, [r.name for r in report.failures()]
    report = check_sum_tensor_traces(SYM, SYM.unit_object(), sym_obj(2), mu_t)
    assert report.passed, [r.name for r in report.failures()]
