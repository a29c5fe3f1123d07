"""Command-line front end.

Exit codes: 0 every blocking check passed, 1 some blocking check failed,
2 the input could not be read or parsed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, catalog, contact_structures as cs, documents, lie_core
from . import metric_connection as mc
from . import subalgebra_geometry as sg
from .errors import ContactLieError, DependentBasis, InputError
from .report import CheckReport

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Section:
    """One block of a report: checks plus free-form data."""

    def __init__(self, title, tol):
        self.title = title
        self.report = CheckReport(tol)
        self.data: dict = {}

    @property
    def passed(self):
        return self.report.passed


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    return value


def _witness(w):
    # index witnesses are shown 1-based like the input files
    if isinstance(w, (int, np.integer)) and not isinstance(w, bool):
        return int(w) + 1
    if isinstance(w, tuple) and all(isinstance(v, (int, np.integer)) for v in w):
        return [int(v) + 1 for v in w]
    return _jsonable(w)


def _section_json(sec: Section) -> dict:
    return {
        "title": sec.title,
        "passed": sec.passed,
        "checks": [
            {
                "name": c.name,
                "residual": c.residual,
                "pass": c.passed,
                "blocking": c.blocking,
                "witness": _witness(c.witness),
                "note": c.note,
            }
            for c in sec.report.checks
        ],
        "notes": list(sec.report.notes),
        "data": _jsonable(sec.data),
    }


def _load(args):
    """Return (document, digest) for --example or a file path."""
    if args.example:
        try:
            ex = catalog.get_example(args.example)
        except (KeyError, ContactLieError) as exc:
            raise InputError(str(exc).strip("'\""), "--example") from None
        text = documents.example_to_json(ex)
        doc = documents.parse_document(text)
        return doc, hashlib.sha256(text.encode()).hexdigest()
    if not args.path:
        raise InputError("no input: give a PATH or --example NAME")
    path = Path(args.path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InputError(exc.strerror or str(exc), str(path)) from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputError(f"not UTF-8 ({exc.reason})", f"byte {exc.start}") from None
    return documents.parse_document(text), hashlib.sha256(raw).hexdigest()


def _metric_for_checks(doc, normalize):
    if normalize:
        return doc.metric.normalized()
    return doc.metric, 1.0, 1.0


def _algebra_section(doc, args):
    sec = Section("algebra", args.tol)
    m, cscale, gscale = _metric_for_checks(doc, args.normalize)
    sec.report.add("jacobi", lie_core.jacobi_residual(m.algebra))
    sec.data["dim"] = doc.algebra.dim
    sec.data["normalized"] = args.normalize
    sec.data["constant_scale"] = cscale
    sec.data["gram_scale"] = gscale
    return sec


def _structure_section(doc, s, args):
    sec = Section(f"structure {s.name}", args.tol)
    sec.report.extend(cs.validate_almost_contact(doc.metric, s, args.tol))
    return sec


def _subspace_json(sub):
    return [_jsonable(col) for col in sub.basis.T]


def cmd_validate(doc, args):
    sections = [_algebra_section(doc, args)]
    for s in doc.structures:
        sections.append(_structure_section(doc, s, args))
    for name, raw in doc.subalgebras:
        sec = Section(f"subalgebra {name}", args.tol)
        sub = sg.orthonormalize(doc.metric, raw, tol=args.tol, require_closed=False, name=name)
        sec.report.add("closed", sub.closure_residual, sub.closure_witness, blocking=False,
                       note="" if sub.closed else "span is not a subalgebra")
        sections.append(sec)
    return sections


def cmd_classify(doc, args):
    alg = _algebra_section(doc, args)
    if not alg.passed:
        return [alg]
    a = doc.algebra
    sec = Section("classification", args.tol)
    series = lie_core.lower_central_series(a)
    z, perp = mc.center_perp(doc.metric)
    sec.data["series_dims"] = [t.dim for t in series]
    sec.data["nilpotency_class"] = lie_core.nilpotency_class(a)
    sec.data["two_step"] = lie_core.is_two_step(a)
    sec.data["center_dim"] = z.dim
    sec.data["center_basis"] = _subspace_json(z)
    sec.data["center_perp_basis"] = _subspace_json(perp)
    if sec.data["two_step"]:
        res = lie_core.is_nonsingular(a, doc.metric.gram, args.samples, args.seed)
        sec.data["nonsingular"] = res.verdict.value
        sec.data["nonsingular_witness"] = None if res.witness is None else _jsonable(res.witness)
        sec.data["nonsingular_tested"] = res.tested
    else:
        sec.data["nonsingular"] = "not_applicable"
    bi = mc.is_bi_invariant(doc.metric, args.tol, args.normalize)["bi_invariant"]
    sec.report.add("bi_invariant", bi.residual, bi.witness, blocking=False)
    return [alg, sec]


def cmd_contact(doc, args):
    alg = _algebra_section(doc, args)
    sections = [alg]
    if not doc.structures:
        sec = Section("contact", args.tol)
        sec.report.add("structure_present", 1.0, note="no almost contact structure in input")
        return sections + [sec]
    two_step = lie_core.is_two_step(doc.algebra)
    for s in doc.structures:
        val = _structure_section(doc, s, args)
        sections.append(val)
        if not val.passed:
            val.report.notes.append("structure invalid; classification skipped")
            continue
        sec = Section(f"contact {s.name}", args.tol)
        verdict, rep = cs.classify(doc.metric, s, args.tol)
        for c in rep.checks:
            sec.report.add(c.name, c.residual, c.witness, blocking=False)
        sec.report.notes.extend(rep.notes)
        sec.data["verdict"] = verdict.value
        sections.append(sec)
        if verdict is cs.ContactClass.COSYMPLECTIC:
            grid = Section(f"cosymplectic consequences {s.name}", args.tol)
            grid.report.extend(cs.check_cosymplectic_consequences(doc.metric, s, args.tol))
            sections.append(grid)
        if two_step:
            cc = Section(f"center constraints {s.name}", args.tol)
            cc.report.extend(cs.check_center_constraints(
                doc.metric, s, args.tol, args.normalize, args.samples, args.seed))
            sections.append(cc)
    return sections


def _subalgebra_section(doc, name, raw, structure, args):
    sec = Section(f"subalgebra {name}", args.tol)
    sub = sg.orthonormalize(doc.metric, raw, structure, args.tol, require_closed=False, name=name)
    rep = sec.report
    rep.add("closed", sub.closure_residual, sub.closure_witness, blocking=False,
            note="" if sub.closed else "span is not a subalgebra; Gauss/Weingarten evaluated anyway")
    rep.add("reconstruction", sg.reconstruction_residual(sub))
    rep.add("duality", sg.duality_residual(sub))
    rep.add("h_symmetric", sg.second_fundamental_symmetry(sub), blocking=sub.closed)
    sec.data["dim"] = sub.dim
    sec.data["basis"] = [_jsonable(c) for c in sub.basis.T]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sg.OpenSubspaceWarning)
        h = [[sg.second_fundamental_form(sub, x, y) for y in sub.basis.T] for x in sub.basis.T]
    sec.data["second_fundamental_form"] = _jsonable(np.asarray(h))
    if structure is None:
        rep.notes.append("no structure, so the phi-dependent checks were skipped")
        return sec
    q = sg.q_operator(sub, args.tol)
    rep.extend(q.report)
    sec.data["structure"] = structure.name
    sec.data["q"] = _jsonable(q.q)
    sec.data["q_spectrum"] = [{"eigenvalue": v, "multiplicity": k} for v, k in q.clusters]
    tan, nor, kind = sg.xi_decomposition(sub)
    sec.data["xi"] = {"kind": kind, "tangent": _jsonable(tan), "normal": _jsonable(nor)}
    sec.data["wirtinger_angles"] = [sg.wirtinger_angle(sub, x, args.tol) for x in sub.basis.T]
    slant = sg.is_slant(sub, args.samples, args.seed, args.tol)
    sec.data["slant"] = {
        "kind": slant.kind.value,
        "angle": slant.angle,
        "angle_range": None if slant.angle_range is None else list(slant.angle_range),
        "witness": None if slant.witness is None else [_jsonable(w) for w in slant.witness],
    }
    return sec


def cmd_subalg(doc, args):
    sections = [_algebra_section(doc, args)]
    structure = None
    if doc.structures:
        structure = doc.structures[0]
        if args.structure:
            matches = [s for s in doc.structures if s.name == args.structure]
            if not matches:
                raise InputError(f"no structure named {args.structure!r}", "--structure")
            structure = matches[0]
    subs = doc.subalgebras
    if args.name:
        subs = [(k, b) for k, b in subs if k == args.name]
        if not subs:
            raise InputError(f"no subalgebra named {args.name!r}", "--name")
    if not subs:
        sec = Section("subalgebras", args.tol)
        sec.report.notes.append("input lists no subalgebras")
        sections.append(sec)
    for name, raw in subs:
        sections.append(_subalgebra_section(doc, name, raw, structure, args))
    return sections


def cmd_connection(doc, args):
    alg = _algebra_section(doc, args)
    sec = Section("connection", args.tol)
    table = doc.metric.connection.coeffs
    labels = doc.algebra.labels
    entries = []
    n = doc.algebra.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[i, j, k] != 0.0:
                    entries.append({"x": labels[i], "y": labels[j], "component": labels[k],
                                    "value": float(table[i, j, k])})
    sec.data["nabla"] = entries
    m, _, _ = _metric_for_checks(doc, args.normalize)
    t = m.connection
    sec.report.add("torsion", mc.torsion_residual(m, t))
    sec.report.add("compatibility", mc.compatibility_residual(m, t))
    hb = mc.check_half_bracket(doc.metric, args.tol, args.normalize, require_two_step=False)
    sec.report.extend(hb)
    sec.data["two_step"] = lie_core.is_two_step(doc.algebra)
    return [alg, sec]


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "contact": cmd_contact,
    "subalg": cmd_subalg,
    "connection": cmd_connection,
}


def _render_text(command, digest, sections, args) -> str:
    lines = [f"contactlie {__version__}  {command}  input sha256 {digest[:16]}",
             f"tolerance {args.tol:g}  normalize {'on' if args.normalize else 'off'}", ""]
    for sec in sections:
        lines.append(f"== {sec.title}  [{'PASS' if sec.passed else 'FAIL'}]")
        width = max([len(c.name) for c in sec.report.checks] + [4])
        for c in sec.report.checks:
            status = "pass" if c.passed else ("FAIL" if c.blocking else "warn")
            extra = f"  ({c.note})" if c.note else ""
            wit = f"  witness {_witness(c.witness)}" if c.witness is not None and not c.passed else ""
            lines.append(f"  {c.name:<{width}}  {c.residual:.3e}  {status}{wit}{extra}")
        for key, value in sec.data.items():
            lines.append(f"  {key}: {json.dumps(_jsonable(value))}")
        for note in sec.report.notes:
            lines.append(f"  note: {note}")
        lines.append("")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contactlie", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"contactlie {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", nargs="?", help="input JSON document")
    common.add_argument("--example", metavar="NAME", help="use a bundled example instead of a file")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--samples", type=int, default=64)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--no-normalize", dest="normalize", action="store_false",
                        help="skip max|C| = max|G| = 1 scaling of algebraic checks")

    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "subalg":
            p.add_argument("--name", help="only this subalgebra")
            p.add_argument("--structure", help="structure to use (default: first)")

    exp = sub.add_parser("export", help="write a bundled example as an input document")
    exp.add_argument("name")
    sub.add_parser("examples", help="list bundled example names")
    sub.add_parser("schema", help="print the input JSON schema")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT

    if args.command == "examples":
        print("\n".join(catalog.example_names()))
        return EXIT_OK
    if args.command == "schema":
        sys.stdout.write(documents.dumps(documents.SCHEMA))
        return EXIT_OK
    if args.command == "export":
        try:
            sys.stdout.write(documents.example_to_json(catalog.get_example(args.name)))
        except (KeyError, ContactLieError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        return EXIT_OK

    if not (args.tol > 0 and math.isfinite(args.tol)) or args.samples < 0:
        print("error: --tol must be positive and --samples non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        doc, digest = _load(args)
        sections = COMMANDS[args.command](doc, args)
    except (InputError, DependentBasis) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ContactLieError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    passed = all(sec.passed for sec in sections)
    code = EXIT_OK if passed else EXIT_FAIL
    if args.json:
        out = {
            "tool": "contactlie",
            "version": __version__,
            "command": args.command,
            "input_sha256": digest,
            "tolerance": args.tol,
            "normalized": args.normalize,
            "samples": args.samples,
            "seed": args.seed,
            "passed": passed,
            "exit_code": code,
            "sections": [_section_json(s) for s in sections],
        }
        sys.stdout.write(json.dumps(out, indent=2, allow_nan=False) + "\n")
    else:
        sys.stdout.write(_render_text(args.command, digest, sections, args))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
