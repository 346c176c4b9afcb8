"""Composite checker: everything the package verifies, per backend.

The suite bundles the measure solver and axiom checks, the category and
Frobenius layers, the equivalence-idempotent correspondence, the axiom
profile of the backend, and the concrete-model oracles.  Its pass set is the
acceptance surface of the package; the CLI ``suite`` subcommand returns exit
code 0 exactly when every entry passes.
"""

from __future__ import annotations

from .coeff import RATIONAL, Scalar, falling_factorial, one
from .frob import (
    build_frobenius,
    check_perfect_pairing,
    check_sum_tensor_traces,
    check_trace,
    e_idempotent_check,
    gamma_of_projection,
    kernel_pair_gamma,
    splitting_idempotent,
    verify_frobenius,
)
from .gset import GMap
from .gset.pregalois import pregalois_check
from .linmat import InvariantMatrix, column_to_fn, constant_fn, matmul, tensor_space
from .measure import check_measure_axioms, classify_measure, solve_measures
from .oracle import (
    bgamma_kernel_dimension,
    expand_sym_matrix,
    literal_product,
    sym_orbit_count_model,
)
from .permcat import (
    categorical_dim,
    check_linearization,
    check_snake_identities,
    hom_dimension,
    vec,
)
from .report import CheckResult, Report


def delannoy_number(m, n):
    table = {}
    for i in range(m + 1):
        for j in range(n + 1):
            table[i, j] = 1 if i == 0 or j == 0 else (
                table[i - 1, j] + table[i, j - 1] + table[i - 1, j - 1])
    return table[m, n]


def _absorb(results, report, prefix):
    ok = report.passed
    witness = {}
    if not ok:
        first = report.failures()[0]
        witness = dict(first.witness)
        witness["failing"] = ", ".join(r.name for r in report.failures())
    results.append(CheckResult(prefix, ok, witness))


def _frobenius_block(backend, measure, atoms, results):
    for atom in atoms:
        obj = backend.object_of([atom])
        frob = build_frobenius(backend, obj, measure.field)
        _absorb(results, verify_frobenius(frob, measure),
                f"frobenius[{atom.label}]")
        _absorb(results, check_trace(frob, measure), f"trace[{atom.label}]")
        _absorb(results, check_perfect_pairing(frob, measure),
                f"pairing[{atom.label}]")
        _, rep = splitting_idempotent(frob, measure)
        _absorb(results, rep, f"splitting[{atom.label}]")
        _absorb(results, check_snake_identities(backend, vec(obj), measure),
                f"snake[{atom.label}]")


def _gamma_block(backend, measure, atoms, results, kernel_dims=False):
    ok = True
    witness = {}
    dims_ok = True
    for a in atoms:
        for b in atoms:
            for m in backend.hom_atoms(a, b):
                f = GMap(backend.object_of([a]), backend.object_of([b]),
                         ((0, m),))
                if not backend.is_surjective_map(m):
                    continue
                _, rep = gamma_of_projection(backend, f, measure)
                if not rep.passed:
                    ok = False
                    witness = {"map": f"{a.render()} -> {b.render()}"}
                if kernel_dims:
                    gamma = kernel_pair_gamma(backend, f, measure.field)
                    dim = bgamma_kernel_dimension(
                        backend, backend.object_of([a]), gamma, measure.field)
                    if dim != b.degree:
                        dims_ok = False
    results.append(CheckResult("gamma-of-projection-round-trips", ok, witness))
    if kernel_dims:
        results.append(CheckResult("bgamma-kernel-dimensions", dims_ok))


def _eidem_block(backend, measure, results):
    x = backend.object_of([backend.atoms_up_to(2)[-1]])
    frob = build_frobenius(backend, x, measure.field)
    alpha = column_to_fn(matmul(measure, frob.comult, frob.unit))
    ps2 = tensor_space(backend, [x, x])
    ones = constant_fn(backend, ps2.object, one(measure.field))
    _absorb(results, e_idempotent_check(backend, x, alpha, measure),
            "eidem-diagonal")
    _absorb(results, e_idempotent_check(backend, x, ones, measure),
            "eidem-all-ones")
    a = x.atoms[0]
    smaller = [b for b in backend.atoms_up_to(a.degree) if b.degree < a.degree]
    if smaller:
        b = smaller[-1]
        maps = [m for m in backend.hom_atoms(a, b) if backend.is_surjective_map(m)]
        if maps:
            f = GMap(x, backend.object_of([b]), ((0, maps[0]),))
            gamma = kernel_pair_gamma(backend, f, measure.field)
            _absorb(results, e_idempotent_check(backend, x, gamma, measure),
                    "eidem-kernel-pair")


def run_suite(backend, bound, seed=0):
    """Every checker in the package, composed per backend."""
    results = []
    small = min(bound, 3)

    family = solve_measures(backend, max(bound, 2))
    measure = family.generic()
    results.append(CheckResult(
        "solver-residual-empty", not family.residual,
        {} if not family.residual else {"residual": "; ".join(family.residual)}))
    _absorb(results, check_measure_axioms(measure, bound), "measure-axioms")
    verdict = classify_measure(measure, small)
    results.append(CheckResult(
        "measure-classification", True,
        note=f"regular={verdict['regular']} "
             f"normal_within_bound={verdict['normal_within_bound']}"))

    if backend.backend_id == "sym":
        _sym_suite(backend, family, measure, bound, results)
    elif backend.backend_id == "line":
        _line_suite(backend, family, measure, bound, results)
    else:
        _finite_suite(backend, family, measure, bound, results)

    _absorb(results, check_linearization(measure, small), "linearization")
    _frobenius_block(backend, measure, backend.atoms_up_to(small), results)
    _eidem_block(backend, measure, results)
    _gamma_block(backend, measure, backend.atoms_up_to(small), results,
                 kernel_dims=(backend.backend_id == "finite"))

    small_atoms = backend.atoms_up_to(min(bound, 2))
    xa = backend.object_of([small_atoms[-1]])
    xb = backend.object_of([small_atoms[min(1, len(small_atoms) - 1)]])
    _absorb(results, check_sum_tensor_traces(backend, xa, xb, measure),
            "sum-tensor-traces")

    return Report(f"suite for {backend.backend_id} at bound {bound}", results)


def _sym_suite(backend, family, measure, bound, results):
    field = family.field
    t = Scalar.variable(field)
    expected = all(
        family.atom_values[a] == falling_factorial(field, t, a.degree)
        for a in backend.atoms_up_to(bound))
    results.append(CheckResult(
        "falling-factorial-family",
        expected and family.parameters == ("t",)))

    counting_ok = True
    for n_points in (5, 7):
        at_n = family.specialize(n_points)
        for a in backend.atoms_up_to(min(bound, 4)):
            count = 1
            for k in range(a.degree):
                count *= n_points - k
            if at_n.mu_atom(a) != Scalar.from_fraction(RATIONAL, count):
                counting_ok = False
    results.append(CheckResult("counting-oracle", counting_ok))

    x = backend.object_of([backend.atom_of_arity(1)])
    e_eq = InvariantMatrix(backend, x, x, {(0, 0, "[1>1]"): one(field)})
    e_neq = InvariantMatrix(backend, x, x, {(0, 0, "[]"): one(field)})
    square = matmul(measure, e_neq, e_neq)
    identity_ok = square == e_eq.scale(t - 1) + e_neq.scale(t - 2)
    model_ok = True
    for n_points in (5, 6, 7, 8):
        lhs = expand_sym_matrix(square, n_points)
        ones_minus_id = expand_sym_matrix(e_neq, n_points)
        rhs = literal_product(ones_minus_id, ones_minus_id, RATIONAL)
        if lhs != rhs:
            model_ok = False
    results.append(CheckResult("composition-identity", identity_ok and model_ok))

    dims_ok = True
    for n in range(min(bound, 3) + 1):
        for m in range(min(bound, 3) + 1):
            lhs = hom_dimension(backend, vec(backend.object_of(
                [backend.atom_of_arity(n)])),
                vec(backend.object_of([backend.atom_of_arity(m)])))
            if lhs != sym_orbit_count_model(8, n, m):
                dims_ok = False
    results.append(CheckResult("hom-dims-match-model-orbits", dims_ok))

    results.append(CheckResult(
        "dimension-of-line-object",
        categorical_dim(backend, vec(x), measure) == t))

    mutant = measure.with_perturbed_atom(backend.atom_of_arity(2), one(field))
    mutant_report = check_measure_axioms(mutant, 3)
    witness_ok = False
    for r in mutant_report.results:
        if not r.passed and r.name.startswith("product"):
            witness_ok = (r.witness.get("lhs") == (t * t).render()
                          and r.witness.get("rhs")
                          == (t + t * (t - 1) + 1).render())
            break
    assoc_broken = _associativity_breaks(backend, mutant)
    results.append(CheckResult("mutation-sensitivity",
                               witness_ok and assoc_broken))

    profile = pregalois_check(backend, min(bound, 3))
    failing = [r.name for r in profile.failures()]
    witness = profile.result("h-effective-equivalence-relations").witness
    expected_fail = (failing == ["h-effective-equivalence-relations"]
                     and witness.get("atom") == "sym:inj[2]"
                     and "[1>2,2>1]" in witness.get("relation-orbits", ""))
    results.append(CheckResult("pregalois-profile", expected_fail,
                               {} if expected_fail else {"failing":
                                                         ", ".join(failing)}))


def _associativity_breaks(backend, mutant):
    from .linmat import pushforward_matrix

    x = backend.object_of([backend.atom_of_arity(1)])
    eps = pushforward_matrix(backend, backend.collapse_gmap(x), mutant.field)
    e_neq = InvariantMatrix(backend, x, x, {(0, 0, "[]"): one(mutant.field)})
    lhs = matmul(mutant, matmul(mutant, eps, e_neq), e_neq)
    rhs = matmul(mutant, eps, matmul(mutant, e_neq, e_neq))
    return lhs != rhs


def _line_suite(backend, family, measure, bound, results):
    field = family.field
    values_ok = (family.parameters == ()
                 and all(family.atom_values[a]
                         == Scalar.from_int(field, (-1) ** a.degree)
                         for a in backend.atoms_up_to(bound))
                 and family.fiber_values["ray"] == Scalar.from_int(field, -1)
                 and family.fiber_values["interval"]
                 == Scalar.from_int(field, -1))
    m1 = family.atom_values[backend.atom_of_arity(1)]
    r = family.fiber_values["ray"]
    i = family.fiber_values["interval"]
    unit = one(field)
    oracle_ok = (m1 == r + r + unit and r == r + i + unit and i == i + i + unit)
    results.append(CheckResult("unique-alternating-measure",
                               values_ok and oracle_ok))

    dims_ok = True
    for n in range(min(bound, 3) + 1):
        for m in range(min(bound, 3) + 1):
            lhs = hom_dimension(
                backend,
                vec(backend.object_of([backend.atom_of_arity(n)])),
                vec(backend.object_of([backend.atom_of_arity(m)])))
            if lhs != delannoy_number(n, m):
                dims_ok = False
    results.append(CheckResult("hom-dims-are-delannoy", dims_ok))

    x = vec(backend.object_of([backend.atom_of_arity(1)]))
    results.append(CheckResult(
        "dimension-of-line-object",
        categorical_dim(backend, x, measure) == Scalar.from_int(field, -1)))

    profile = pregalois_check(backend, min(bound, 3))
    non_effectivity = [r for r in profile.results if not r.name.startswith("h-")]
    results.append(CheckResult(
        "pregalois-profile", all(r.passed for r in non_effectivity),
        note="effectivity outcome reported, not gated: "
             + profile.result("h-effective-equivalence-relations").status))


def _finite_suite(backend, family, measure, bound, results):
    counting_ok = (family.parameters == () and all(
        measure.mu_atom(a) == Scalar.from_int(measure.field, a.degree)
        for a in backend.atoms_up_to(bound)))
    results.append(CheckResult("unique-counting-measure", counting_ok))

    _absorb(results, pregalois_check(backend, bound), "pregalois-profile")

    from .oracle import finite_category_oracle

    _absorb(results, finite_category_oracle(backend, measure, bound),
            "permutation-matrix-oracle")
