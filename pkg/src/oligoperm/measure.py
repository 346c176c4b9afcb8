"""Measures on the backends: storage, evaluation, axioms, and the solver.

A measure assigns a scalar to every atom and to every elementary fiber class,
subject to: value 1 on the one-point set, additivity over decompositions,
invariance, and multiplicativity over fibers of maps of transitive pieces.
Atom values are grounded in fiber values through the canonical drop chains
(each atom's value is the fiber value of one drop times the parent's value),
which is what makes the constraint systems triangular.

The solver introduces one unknown per fiber class, imposes the backends'
point-cut decompositions (a linear system), and then verifies the remaining
identity set (product decompositions and drop-order independence) by
substitution.  Identities that do not vanish are reported as residual
constraints; for the shipped backends they all vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeff import RATIONAL, Scalar, one, ratfunc_field, zero
from .errors import InconsistentSystem, UnknownAtom
from .report import CheckResult, Report

SOLVE_DEPTH_FACTOR = 4

PARAMETER_NAMES = ("t", "u", "v", "w")


@dataclass
class Measure:
    """Atom values plus elementary fiber values, mutually consistent.

    ``atom_values`` is extended lazily along the canonical drop chains, so the
    table only needs to be seeded at the fiber level.  Extension is idempotent
    (the chain is canonical), so sharing across threads is harmless as long as
    construction has finished.
    """

    backend: object
    field: object
    atom_values: dict
    fiber_values: dict
    description: str = ""

    def mu_atom(self, a):
        if a in self.atom_values:
            return self.atom_values[a]
        parent = self.backend.atom_chain_parent(a)
        if parent is None:
            value = one(self.field)
        else:
            _, cls = parent
            if cls not in self.fiber_values:
                raise UnknownAtom(f"no fiber value for {cls} while extending to "
                                  f"{a.render()}")
            value = self.fiber_values[cls] * self.mu_atom(parent[0].target)
        self.atom_values[a] = value
        return value

    def mu_object(self, x):
        total = zero(self.field)
        for a in x.atoms:
            total = total + self.mu_atom(a)
        return total

    def mu_map(self, f):
        """Product of fiber values along the canonical factorization of an
        atom map; the common fiber measure of the map."""
        fact = self.backend.elementary_factorize(f)
        value = one(self.field)
        for step in fact.steps:
            if step.fiber_class not in self.fiber_values:
                raise UnknownAtom(f"no fiber value for {step.fiber_class}")
            value = value * self.fiber_values[step.fiber_class]
        return value

    def with_perturbed_atom(self, a, delta):
        """A copy with the atom value shifted and the atom's own drop fiber
        re-derived from the shifted value.  Other entries are untouched, so
        the result deliberately violates the axioms; it exists for mutation
        tests."""
        atom_values = dict(self.atom_values)
        fiber_values = dict(self.fiber_values)
        new_value = self.mu_atom(a) + delta
        atom_values[a] = new_value
        parent = self.backend.atom_chain_parent(a)
        if parent is not None:
            drop, cls = parent
            parent_value = self.mu_atom(drop.target)
            if not parent_value.is_zero():
                fiber_values[cls] = new_value / parent_value
        return Measure(self.backend, self.field, atom_values, fiber_values,
                       description=f"{self.description} perturbed at {a.render()}")


@dataclass(frozen=True)
class MeasureFamily:
    """A solved family: parameter names, values over the parameter field, and
    residual constraints (empty when the family is free)."""

    backend: object
    field: object
    parameters: tuple
    fiber_values: dict
    atom_values: dict
    residual: tuple
    description: str = ""

    def generic(self):
        return Measure(self.backend, self.field, dict(self.atom_values),
                       dict(self.fiber_values), description=self.description)

    def specialize(self, value):
        """Substitute a rational number for the single parameter."""
        if len(self.parameters) != 1:
            raise ValueError("specialize needs exactly one parameter")
        atom_values = {a: s.evaluate(value) for a, s in self.atom_values.items()}
        fiber_values = {c: s.evaluate(value) for c, s in self.fiber_values.items()}
        return Measure(self.backend, RATIONAL, atom_values, fiber_values,
                       description=f"{self.description} at "
                                   f"{self.parameters[0]}={value}")


def _solve_linear(classes, relations):
    """Solve the point-cut relations over Q.

    Returns (parameters, values) where values maps each class to an affine
    expression {param_name_or_None: Fraction}; the None key is the constant.
    Unknown order is reversed so that the earliest classes (the ones atom
    chains start from) end up as the free parameters.
    """
    cols = list(reversed(classes))
    col_index = {c: i for i, c in enumerate(cols)}
    rows = []
    for rel in relations:
        row = [Fraction(0)] * (len(cols) + 1)
        row[col_index[rel.lhs]] += 1
        for cls, coeff in rel.terms:
            row[col_index[cls]] -= coeff
        row[-1] = Fraction(rel.const)
        rows.append(row)
    # Gaussian elimination to reduced row echelon form.
    pivot_of_col = {}
    r = 0
    for c in range(len(cols)):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivot_of_col[c] = r
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if all(x == 0 for x in rows[i][:-1]) and rows[i][-1] != 0:
            raise InconsistentSystem("point-cut relations have no solution")
    free_cols = [c for c in range(len(cols)) if c not in pivot_of_col]
    free_cols.sort(key=lambda c: -c)  # prefer the earliest class as parameter
    if len(free_cols) > len(PARAMETER_NAMES):
        raise InconsistentSystem("more free parameters than supported")
    param_of_col = {c: PARAMETER_NAMES[i] for i, c in enumerate(free_cols)}
    values = {}
    for c, cls in enumerate(cols):
        if c in param_of_col:
            values[cls] = {param_of_col[c]: Fraction(1), None: Fraction(0)}
            continue
        if c in pivot_of_col:
            row = rows[pivot_of_col[c]]
            expr = {None: row[-1]}
            for c2 in free_cols:
                if row[c2] != 0:
                    expr[param_of_col[c2]] = -row[c2]
            values[cls] = expr
        else:
            # unconstrained class that exceeded the parameter budget
            raise InconsistentSystem(f"class {cls} is unconstrained")
    params = [param_of_col[c] for c in sorted(free_cols, key=lambda c: -c)]
    return params, values


def solve_measures(backend, bound, char=0, var=None):
    """Find all measures on the backend's fragment within the bound.

    Raises INCONSISTENT when no assignment satisfies the point-cut relations.
    Residual identities that fail to vanish are returned on the family.
    """
    if bound < 2:
        raise ValueError("solve needs bound >= 2")
    depth = SOLVE_DEPTH_FACTOR * bound + 4
    classes = backend.fiber_classes(depth)
    relations = backend.fiber_decompositions(depth)
    params, affine = _solve_linear(classes, relations)
    if params:
        field = ratfunc_field(var or PARAMETER_NAMES[0], char)
    elif char:
        field = ratfunc_field(var or "a", char)
    else:
        field = RATIONAL

    def to_scalar(expr):
        acc = Scalar.from_fraction(field, expr.get(None, Fraction(0)))
        for name, coeff in expr.items():
            if name is None:
                continue
            acc = acc + Scalar.from_fraction(field, coeff) * Scalar.variable(field)
        return acc

    fiber_values = {cls: to_scalar(affine[cls]) for cls in classes}
    measure = Measure(backend, field, {}, fiber_values)
    for a in backend.atoms_up_to(depth):
        measure.mu_atom(a)
    atom_values = measure.atom_values

    residual = []
    for result in _identity_results(measure, bound):
        if not result.passed:
            residual.append(result.witness.get("identity", result.name))
            if result.witness.get("constant_failure") == "yes":
                raise InconsistentSystem(result.witness["identity"])
    name = backend.backend_id
    description = f"{name} measure" + (f" family in {params[0]}" if params else "")
    family = MeasureFamily(backend, field, tuple(params), fiber_values,
                           atom_values, tuple(residual), description)
    return family


def _identity_results(measure, bound):
    """Product identities and drop-order independence, as check results."""
    backend = measure.backend
    atoms = backend.atoms_up_to(bound)
    results = []
    for a in atoms:
        for b in atoms:
            lhs = measure.mu_atom(a) * measure.mu_atom(b)
            rhs = zero(measure.field)
            orbit_labels = []
            for orbit in backend.product_decompose(a, b):
                rhs = rhs + measure.mu_atom(orbit.atom)
                orbit_labels.append(orbit.label)
            ok = lhs == rhs
            witness = {}
            if not ok:
                diff = lhs - rhs
                constant = (diff.field.kind == "rational"
                            or (len(diff.num) <= 1 and len(diff.den) <= 1))
                witness = {
                    "pair": f"{a.render()} x {b.render()}",
                    "lhs": lhs.render(),
                    "rhs": rhs.render(),
                    "orbits": ", ".join(orbit_labels),
                    "identity": f"{lhs.render()} = {rhs.render()}",
                    "constant_failure": "yes" if constant else "no",
                }
            results.append(CheckResult(f"product[{a.label}*{b.label}]", ok, witness))
    for a in atoms:
        for b in atoms:
            for f in backend.hom_atoms(a, b):
                values = set()
                for multiset in backend.factorization_class_multisets(f):
                    v = one(measure.field)
                    for cls in multiset:
                        v = v * measure.fiber_values[cls]
                    values.add(v)
                ok = len(values) == 1
                v = values.pop()
                chain_ok = measure.mu_atom(a) == v * measure.mu_atom(b)
                witness = {}
                if not (ok and chain_ok):
                    witness = {
                        "map": f"{a.render()} -> {b.render()} {f.data}",
                        "identity": f"mu({a.label}) = mu(f) * mu({b.label})",
                        "mu_map": v.render(),
                        "mu_source": measure.mu_atom(a).render(),
                        "mu_target": measure.mu_atom(b).render(),
                    }
                results.append(
                    CheckResult(f"multiplicativity[{a.label}->{b.label}:{f.data}]",
                                ok and chain_ok, witness))
    return results


def check_measure_axioms(measure, bound):
    """Verify the measure axioms on the fragment within the bound."""
    results = [
        CheckResult("isomorphism-invariance", True,
                    note="canonical orbit labels; equal atoms share one table entry"),
        CheckResult("normalization",
                    measure.mu_atom(measure.backend.unit_atom()).is_one(),
                    {} if measure.mu_atom(measure.backend.unit_atom()).is_one()
                    else {"mu(1)": measure.mu_atom(measure.backend.unit_atom()).render()}),
        CheckResult("conjugation-invariance", True,
                    note="labels are conjugation classes by construction"),
    ]
    results.extend(_identity_results(measure, bound))
    return Report(f"measure axioms for {measure.backend.backend_id} within {bound}",
                  results)


def classify_measure(measure, bound):
    """Regularity is exact; normality is bounded evidence, not a proof.

    Normality is probed by pushing invariant functions forward along
    id_W x f for every surjective atom map f and every atom W within the
    bound, and asking for surjectivity of the induced linear map.
    """
    from . import linmat

    backend = measure.backend
    atoms = backend.atoms_up_to(bound)
    regular = all(not measure.mu_atom(a).is_zero() for a in atoms)
    normal = True
    for a in atoms:
        for b in atoms:
            for f in backend.hom_atoms(a, b):
                if not backend.is_surjective_map(f):
                    continue
                for w in atoms:
                    src = linmat.tensor_space(backend, [backend.object_of([w]),
                                                        backend.object_of([a])])
                    tgt = linmat.tensor_space(backend, [backend.object_of([w]),
                                                        backend.object_of([b])])
                    gmap = linmat.product_gmap(
                        backend,
                        backend.identity_gmap(backend.object_of([w])),
                        linmat.atom_gmap(backend, f),
                        src, tgt)
                    if not linmat.pushforward_surjective_on_invariants(measure, gmap):
                        normal = False
    return {"regular": regular, "normal_within_bound": normal}
