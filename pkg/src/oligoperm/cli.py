"""Command-line surface.

Reports are deterministic: identical inputs produce byte-identical JSON
(sorted keys, canonical scalar rendering, no timing in the JSON payload;
wall-clock timing is printed on the human-readable stream only).

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
errors.  The environment variable OLIGOPERM_MAX_BOUND (default 10) guards
runaway enumeration bounds.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .coeff import parse_scalar
from .errors import OligopermError, UsageError
from .frob import (
    build_frobenius,
    check_perfect_pairing,
    check_trace,
    e_idempotent_check,
    gamma_of_projection,
    splitting_idempotent,
    verify_frobenius,
)
from .gset import LINE, SYM, GMap, preset_backend
from .gset.grammar import parse_atom_map, parse_object
from .gset.pregalois import pregalois_check
from .linmat import InvariantMatrix, SchwartzFn, matmul, tensor_space
from .measure import Measure, check_measure_axioms, solve_measures
from .permcat import categorical_dim, check_linearization, hom_dimension, vec
from .report import CheckResult, Report
from .suite import run_suite

SCHEMA = 1


def _backends(args):
    table = {"sym": SYM, "line": LINE}
    group = getattr(args, "group", None)
    if group:
        table["finite"] = preset_backend(group)
    return table


def _backend(args):
    name = getattr(args, "backend", None)
    if name is None:
        raise UsageError("--backend is required")
    if name == "finite":
        group = getattr(args, "group", None)
        if not group:
            raise UsageError("--group is required with --backend finite")
        return preset_backend(group)
    try:
        return {"sym": SYM, "line": LINE}[name]
    except KeyError:
        raise UsageError(f"unknown backend {name!r}") from None


def _char(args):
    field = getattr(args, "field", None) or "q"
    if field in {"q", "qt"}:
        return 0
    if field.startswith("fp:"):
        return int(field.split(":")[1])
    raise UsageError(f"unknown field {field!r}")


def _bound(args, default=3):
    bound = getattr(args, "bound", None)
    if bound is None:
        bound = default
    guard = int(os.environ.get("OLIGOPERM_MAX_BOUND", "10"))
    if bound > guard:
        raise UsageError(f"bound {bound} exceeds OLIGOPERM_MAX_BOUND={guard}")
    return bound


def _measure_for(backend, bound, char, objects=()):
    # deep enough fiber tables for the composites the command will build
    need = max([bound, 2] + [a.degree for obj in objects for a in obj.atoms])
    family = solve_measures(backend, need, char=char)
    return family.generic(), family


def _emit(args, report, payload=None, started=None):
    doc = {
        "schema": SCHEMA,
        "command": " ".join(args.echo),
        "backend": getattr(args, "backend", None) or "",
        "measure": getattr(args, "_measure_desc", ""),
        "results": [r.to_dict() for r in report.results],
        "status": "PASS" if report.passed else "FAIL",
    }
    if payload:
        doc["payload"] = payload
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    if started is not None:
        elapsed = time.monotonic() - started
        print(f"# {report.title}: {doc['status']} "
              f"({len(report.results)} checks, {elapsed:.2f}s)",
              file=sys.stderr)
    return 0 if report.passed else 1


# Subcommand handlers

def cmd_atoms(args):
    backend = _backend(args)
    bound = _bound(args)
    atoms = backend.atoms_up_to(bound)
    report = Report("atoms", [CheckResult("enumerate", True)])
    payload = {"atoms": [a.render() for a in atoms],
               "degrees": [a.degree for a in atoms]}
    return _emit(args, report, payload)


def cmd_homdim(args):
    backends = _backends(args)
    backend, x = parse_object(backends, args.X)
    backend2, y = parse_object(backends, args.Y)
    if backend is not backend2:
        raise UsageError("objects come from different backends")
    dim = hom_dimension(backend, vec(x), vec(y))
    report = Report("homdim", [CheckResult("hom-dimension", True)])
    return _emit(args, report, {"dim": dim})


def _load_matrix(backends, path):
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    backend, source = parse_object(backends, doc["source"])
    _, target = parse_object(backends, doc["target"])
    char = 0 if doc.get("field", "q") in {"q", "qt"} else \
        int(doc["field"].split(":")[1])
    family = solve_measures(backend, 2, char=char)
    field = family.field
    entries = {}
    for t, s, label, scalar in doc["entries"]:
        entries[(t, s, label)] = parse_scalar(field, scalar)
    return backend, field, InvariantMatrix(backend, source, target, entries)


def cmd_compose(args):
    backends = _backends(args)
    backend, field, lhs = _load_matrix(backends, args.lhs)
    backend2, _, rhs = _load_matrix(backends, args.rhs)
    if backend is not backend2:
        raise UsageError("matrices come from different backends")
    measure, family = _measure_for(backend, _bound(args), _char(args),
                                   [lhs.source, lhs.target, rhs.source])
    args._measure_desc = family.description
    product = matmul(measure, lhs, rhs)
    report = Report("compose", [CheckResult("compose", True)])
    payload = {"source": product.source.render(),
               "target": product.target.render(),
               "entries": product.render_entries()}
    return _emit(args, report, payload)


def cmd_dim(args):
    backends = _backends(args)
    backend, x = parse_object(backends, args.X)
    measure, family = _measure_for(backend, _bound(args), _char(args), [x])
    args._measure_desc = family.description
    value = categorical_dim(backend, vec(x), measure)
    report = Report("dim", [CheckResult("categorical-dimension", True)])
    return _emit(args, report, {"dim": value.render()})


def cmd_measure_solve(args):
    backend = _backend(args)
    bound = _bound(args, default=4)
    started = time.monotonic()
    family = solve_measures(backend, bound, char=_char(args))
    args._measure_desc = family.description
    atoms = backend.atoms_up_to(bound)
    payload = {
        "family_params": list(family.parameters),
        "atoms": [a.render() for a in atoms],
        "values": [family.atom_values[a].render() for a in atoms],
        "fibers": {cls: family.fiber_values[cls].render()
                   for cls in backend.fiber_classes(bound)},
        "residual": list(family.residual),
    }
    report = Report("measure solve",
                    [CheckResult("solver-residual-empty", not family.residual)])
    return _emit(args, report, payload, started)


def cmd_measure_check(args):
    backends = _backends(args)
    with open(args.spec, encoding="utf-8") as handle:
        doc = json.load(handle)
    backend = backends.get(doc["backend"])
    if backend is None:
        if doc["backend"] == "finite":
            raise UsageError("pass --group with finite measure specs")
        raise UsageError(f"unknown backend {doc['backend']!r} in spec file")
    char = 0 if doc.get("field", "q") in {"q", "qt"} else \
        int(doc["field"].split(":")[1])
    family = solve_measures(backend, 2, char=char)
    field = family.field
    atom_values = {}
    for label, text in doc.get("atoms", {}).items():
        _, atom = parse_object(backends, label)
        atom_values[atom.atoms[0]] = parse_scalar(field, text)
    fiber_values = {cls: parse_scalar(field, text)
                    for cls, text in doc.get("fibers", {}).items()}
    measure = Measure(backend, field, atom_values, fiber_values,
                      description=f"spec file {args.spec}")
    args._measure_desc = measure.description
    started = time.monotonic()
    report = check_measure_axioms(measure, _bound(args, default=3))
    return _emit(args, report, None, started)


def _gamma_from_args(args, backend, x, field):
    ps2 = tensor_space(backend, [x, x])
    if args.gamma in {"diagonal", "all-ones"}:
        from .coeff import one

        if args.gamma == "all-ones":
            coeffs = {i: one(field) for i in range(len(ps2.object.atoms))}
        else:
            coeffs = {}
            for i, atom in enumerate(x.atoms):
                ident = backend.identity_map(atom)
                label, _ = backend.product_factor(ident, ident)
                coeffs[ps2.index[(i, i, label)]] = one(field)
        return SchwartzFn(ps2.object, coeffs)
    with open(args.gamma, encoding="utf-8") as handle:
        doc = json.load(handle)
    coeffs = {}
    for i, j, label, scalar in doc["entries"]:
        coeffs[ps2.index[(i, j, label)]] = parse_scalar(field, scalar)
    return SchwartzFn(ps2.object, coeffs)


def cmd_frob_verify(args):
    backends = _backends(args)
    backend, x = parse_object(backends, args.X)
    measure, family = _measure_for(backend, _bound(args), _char(args), [x])
    args._measure_desc = family.description
    started = time.monotonic()
    frob = build_frobenius(backend, x, measure.field)
    results = []
    for rep in (verify_frobenius(frob, measure), check_trace(frob, measure),
                check_perfect_pairing(frob, measure),
                splitting_idempotent(frob, measure)[1]):
        results.extend(rep.results)
    return _emit(args, Report(f"frobenius on {x.render()}", results), None,
                 started)


def cmd_frob_eidem(args):
    backends = _backends(args)
    backend, x = parse_object(backends, args.B)
    measure, family = _measure_for(backend, _bound(args), _char(args), [x])
    args._measure_desc = family.description
    gamma = _gamma_from_args(args, backend, x, measure.field)
    report = e_idempotent_check(backend, x, gamma, measure)
    return _emit(args, report)


def cmd_frob_gamma_of(args):
    backends = _backends(args)
    text = args.map
    if os.path.exists(text):
        with open(text, encoding="utf-8") as handle:
            text = handle.read().strip()
    backend, m = parse_atom_map(backends, text)
    measure, family = _measure_for(backend, _bound(args), _char(args),
                                   [backend.object_of([m.source])])
    args._measure_desc = family.description
    f = GMap(backend.object_of([m.source]), backend.object_of([m.target]),
             ((0, m),))
    gamma, report = gamma_of_projection(backend, f, measure)
    ps2 = tensor_space(backend, [f.source, f.source])
    payload = {"gamma": [
        [list(ps2.positions[i].meta), value.render()]
        for i, value in sorted(gamma.coeffs.items())
    ]}
    return _emit(args, report, payload)


def cmd_pregalois(args):
    backend = _backend(args)
    started = time.monotonic()
    report = pregalois_check(backend, _bound(args))
    return _emit(args, report, None, started)


def cmd_check_linearization(args):
    backend = _backend(args)
    measure, family = _measure_for(backend, _bound(args), _char(args))
    args._measure_desc = family.description
    started = time.monotonic()
    report = check_linearization(measure, _bound(args))
    return _emit(args, report, None, started)


def cmd_suite(args):
    backend = _backend(args)
    started = time.monotonic()
    report = run_suite(backend, _bound(args, default=4), seed=args.seed or 0)
    return _emit(args, report, None, started)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="oligoperm",
        description="Exact workbench for measures and invariant-matrix "
                    "calculus over oligomorphic permutation groups.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p, backend=False):
        p.add_argument("--bound", type=int, default=None)
        p.add_argument("--field", default=None,
                       help="q, qt, or fp:<p>")
        p.add_argument("--group", default=None,
                       help="finite group: S3, C2x4, S4, or cycle notation")
        p.add_argument("--json", default=None, help="write the report here")
        p.add_argument("--seed", type=int, default=None)
        if backend:
            p.add_argument("--backend", choices=["sym", "line", "finite"])

    p = sub.add_parser("atoms", help="enumerate atoms within a bound")
    common(p, backend=True)
    p.set_defaults(func=cmd_atoms)

    p = sub.add_parser("homdim", help="dimension of a hom space")
    common(p)
    p.add_argument("--X", required=True)
    p.add_argument("--Y", required=True)
    p.set_defaults(func=cmd_homdim)

    p = sub.add_parser("compose", help="compose two matrices from files")
    common(p)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("dim", help="categorical dimension of an object")
    common(p)
    p.add_argument("--X", required=True)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("measure", help="measure solving and checking")
    msub = p.add_subparsers(dest="measure_cmd", required=True)
    ps = msub.add_parser("solve")
    common(ps, backend=True)
    ps.set_defaults(func=cmd_measure_solve)
    pc = msub.add_parser("check")
    common(pc, backend=True)
    pc.add_argument("--spec", required=True)
    pc.set_defaults(func=cmd_measure_check)

    p = sub.add_parser("frob", help="frobenius and idempotent checks")
    fsub = p.add_subparsers(dest="frob_cmd", required=True)
    pv = fsub.add_parser("verify")
    common(pv)
    pv.add_argument("--X", required=True)
    pv.set_defaults(func=cmd_frob_verify)
    pe = fsub.add_parser("eidem")
    common(pe)
    pe.add_argument("--B", required=True)
    pe.add_argument("--gamma", required=True,
                    help="diagonal, all-ones, or a JSON file")
    pe.set_defaults(func=cmd_frob_eidem)
    pg = fsub.add_parser("gamma-of")
    common(pg)
    pg.add_argument("--map", required=True)
    pg.set_defaults(func=cmd_frob_gamma_of)

    p = sub.add_parser("pregalois", help="axiom profile of a backend")
    common(p, backend=True)
    p.set_defaults(func=cmd_pregalois)

    p = sub.add_parser("check-linearization")
    common(p, backend=True)
    p.set_defaults(func=cmd_check_linearization)

    p = sub.add_parser("suite", help="every checker, composed")
    common(p, backend=True)
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    echo = []
    skip = False
    for token in argv:
        if skip:
            skip = False
            continue
        if token == "--json":
            skip = True
            continue
        echo.append(token)
    args.echo = echo
    args._measure_desc = ""
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OligopermError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
