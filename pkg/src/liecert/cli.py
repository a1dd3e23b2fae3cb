"""``liecert`` command-line front end."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, kernels
from .chevalley import build_algebra, dual_coxeter_number, dump_constants
from .controllability import (
    CONTROLLABLE,
    SpecError,
    SystemSpec,
    canonical_json,
    decide,
)
from .elements import (
    AlgebraElement,
    ElementError,
    ad_spectrum,
    cartan_part,
    decompose,
    is_in_cartan,
    is_strong_regular,
)
from .lemma_lab import Grid, parse_grid, run_all, summarize
from .rootsys import DynkinType, dominant_roots, format_root, root_system, weyl_orbits
from .scalars import Tolerance, encode, qstr

COMMANDS = ("roots", "algebra", "weyl-orbits", "decompose", "check", "verify-lemmas", "dump-constants")


class InputError(Exception):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(message)
        self.path = path


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="Dynkin type such as A2, G2, E8")
    common.add_argument("--input", help="JSON input file ('-' for stdin)")
    common.add_argument("--tolerance", help="'exact' or a positive float (numeric mode)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--strict", action="store_true", help="exit 1 unless the verdict is CONTROLLABLE")
    common.add_argument("--grid", help='lemma grid, e.g. "type=A..G,rank<=4,theta=all"')
    common.add_argument("--out", help="write the report to this path instead of stdout")
    p = argparse.ArgumentParser(prog="liecert", description="Exact Lie-theory checks and controllability certificates.")
    p.add_argument("--version", action="version", version=f"liecert {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "roots": "list the positive roots of a root system",
        "algebra": "summarise the Lie algebra built from a root system",
        "weyl-orbits": "partition the roots into Weyl orbits",
        "decompose": "root-space decomposition of an element (or of A and B in a system spec)",
        "check": "decide the controllability conditions for a system spec",
        "verify-lemmas": "run the lemma checks over a parameter grid",
        "dump-constants": "print structure constants in the line format",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return p


def _algebra(args) -> DynkinType:
    if not args.algebra:
        raise InputError("--algebra is required for this command", "--algebra")
    try:
        return DynkinType.parse(args.algebra)
    except ValueError as e:
        raise InputError(str(e), "--algebra") from None


def _tolerance(args) -> Tolerance | None:
    if args.tolerance is None:
        return None
    try:
        return Tolerance.parse(args.tolerance)
    except ValueError as e:
        raise InputError(str(e), "--tolerance") from None


def _load(args):
    if not args.input:
        raise InputError("--input is required for this command", "--input")
    try:
        text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    except OSError as e:
        raise InputError(f"cannot read input: {e.strerror}", "--input") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e.msg} at line {e.lineno} column {e.colno}", "$") from None


# --- commands --------------------------------------------------------------------

def cmd_roots(args):
    rs = root_system(_algebra(args))
    doc = {
        "algebra": str(rs.dynkin),
        "rank": rs.rank,
        "positive_root_count": len(rs.positive_roots),
        "positive_roots": [format_root(r) for r in rs.positive_roots],
        "highest_root": format_root(rs.highest_root),
        "dominant_roots": [format_root(r) for r in dominant_roots(rs)],
        "cartan_matrix": [list(row) for row in rs.cartan_matrix],
        "form": [[qstr(x) for x in row] for row in rs.form],
    }
    lines = [f"{rs.dynkin}: {len(rs.positive_roots)} positive roots"]
    lines += [f"  {format_root(r)}  height {sum(r)}" for r in rs.positive_roots]
    lines.append(f"highest root {doc['highest_root']}; dominant roots {', '.join(doc['dominant_roots'])}")
    return doc, "\n".join(lines), 0


def cmd_algebra(args):
    lie = build_algebra(_algebra(args))
    rs = lie.rs
    doc = {
        "algebra": str(rs.dynkin),
        "dim": lie.dim,
        "rank": lie.rank,
        "basis": list(lie.labels),
        "dual_coxeter_number": dual_coxeter_number(rs.dynkin),
        "killing_over_normalized_form": qstr(lie.kappa_factor),
        "killing_simple_lengths": [qstr(lie.kappa_inner(a, a)) for a in rs.simple_roots],
        "nonzero_structure_constants": sum(1 for _ in lie.iter_structure()),
    }
    text = (
        f"{rs.dynkin}: dim {lie.dim}, rank {lie.rank}\n"
        f"Killing form = {qstr(lie.kappa_factor)} x normalized form (dual Coxeter number "
        f"{doc['dual_coxeter_number']})\n"
        f"Killing lengths of simple roots: {', '.join(doc['killing_simple_lengths'])}\n"
        f"nonzero structure constants: {doc['nonzero_structure_constants']}"
    )
    return doc, text, 0


def cmd_weyl_orbits(args):
    rs = root_system(_algebra(args))
    orbits = []
    for orb in weyl_orbits(rs):
        orbits.append({
            "size": len(orb),
            "length2": qstr(rs.length2(orb[0])),
            "kind": "long" if rs.is_long(orb[0]) else "short",
            "roots": [format_root(r) for r in orb],
        })
    doc = {"algebra": str(rs.dynkin), "orbit_count": len(orbits), "orbits": orbits}
    text = f"{rs.dynkin}: {len(orbits)} orbit(s)\n" + "\n".join(
        f"  {o['kind']} (|a|^2 = {o['length2']}): {o['size']} roots" for o in orbits)
    return doc, text, 0


def _describe_element(x: AlgebraElement) -> dict:
    a0, comps = decompose(x)
    cv = cartan_part(x)
    spec = ad_spectrum(cv)
    reg = is_strong_regular(cv)
    inc = is_in_cartan(x)
    return {
        "cartan_part": [encode(c, x.exact) for c in a0.coeffs],
        "components": {format_root(r): encode(c, x.exact) for r, c in comps.items()},
        "in_cartan": inc.value,
        "cartan_part_spectrum": [
            {"eigenvalue": encode(v, x.exact), "multiplicity": m} for v, m in spec.entries
        ],
        "cartan_part_kernel_dim": spec.kernel_dim,
        "cartan_part_strong_regular": reg.value,
        "reasons": list(reg.reasons),
        "flags": list(inc.flags) + list(reg.flags),
    }


def cmd_decompose(args):
    doc_in = _load(args)
    tol = _tolerance(args)
    if isinstance(doc_in, dict) and "A" in doc_in:
        try:
            s = SystemSpec.from_json(doc_in, tol, args.algebra)
        except SpecError as e:
            raise InputError(str(e).split(": ", 1)[-1], e.path) from None
        doc = {"algebra": str(s.lie.dynkin), "A": _describe_element(s.A), "B": _describe_element(s.B)}
    else:
        lie = build_algebra(_algebra(args))
        try:
            x = AlgebraElement.from_json(lie, doc_in, tol or Tolerance(None))
        except ElementError as e:
            raise InputError(str(e).split(": ", 1)[-1], e.path) from None
        doc = {"algebra": str(lie.dynkin), "element": _describe_element(x)}
    text = canonical_json(doc).rstrip()
    return doc, text, 0


def render_certificate(doc: dict) -> str:
    lines = [f"verdict: {doc['verdict']}  ({doc['algebra']}, tolerance {doc['tolerance']})"]
    if doc["theorem_used"]:
        lines.append(f"theorem: {doc['theorem_used']}")
    if doc["witness_root"]:
        lines.append(f"witness root: {doc['witness_root']}")
    if doc["larc"]:
        l = doc["larc"]
        lines.append(f"rank condition: generated dim {l['generated_dim']} of {l['dim_g']} (sweeps {l['trace']})")
    for c in doc["checklist"]:
        mark = "ok  " if c["passed"] else "FAIL"
        lines.append(f"  [{mark}] {c['id']}: {c['description']}")
        for k, v in c["evidence"].items():
            lines.append(f"         {k} = {json.dumps(v)}")
    if doc["inference"]:
        lines.append("inference:")
        lines += [f"  {step}" for step in doc["inference"]]
    for f in doc["confidence_flags"]:
        lines.append(f"flag: {f}")
    for n in doc["notes"]:
        lines.append(f"note: {n}")
    return "\n".join(lines)


def cmd_check(args):
    doc_in = _load(args)
    try:
        s = SystemSpec.from_json(doc_in, _tolerance(args), args.algebra)
    except SpecError as e:
        raise InputError(str(e).split(": ", 1)[-1], e.path) from None
    cert = decide(s)
    doc = cert.to_json()
    code = 1 if args.strict and cert.verdict != CONTROLLABLE else 0
    return doc, render_certificate(doc), code


def cmd_verify_lemmas(args):
    if args.grid:
        try:
            grid = parse_grid(args.grid)
        except ValueError as e:
            raise InputError(str(e), "--grid") from None
        reports = run_all(None, grid)
    else:
        dt = _algebra(args)
        reports = run_all(dt, Grid((dt,)))
    summary = summarize(reports)
    failed = [r for r in reports if not r.passed]
    doc = {"summary": summary, "all_passed": not failed, "reports": [r.to_json() for r in reports]}
    lines = [f"{len(reports)} reports, {len(failed)} failed"]
    for lemma, s in summary.items():
        lines.append(f"  {lemma:28s} reports {s['reports']:5d}  passed {s['passed']:5d}  "
                     f"failed {s['failed']:3d}  checks {s['checked']}")
    for r in failed:
        lines.append(f"FAIL {r.lemma} {r.algebra} {r.params}: {json.dumps(r.counterexample)}")
    return doc, "\n".join(lines), 1 if failed else 0


def cmd_dump_constants(args):
    lie = build_algebra(_algebra(args))
    text = dump_constants(lie)
    return None, text.rstrip("\n"), 0


HANDLERS = {
    "roots": cmd_roots,
    "algebra": cmd_algebra,
    "weyl-orbits": cmd_weyl_orbits,
    "decompose": cmd_decompose,
    "check": cmd_check,
    "verify-lemmas": cmd_verify_lemmas,
    "dump-constants": cmd_dump_constants,
}


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    sys.stderr.write(f"# liecert {__version__} command={args.command} kernels={kernels.BACKEND}\n")
    try:
        doc, text, code = HANDLERS[args.command](args)
    except InputError as e:
        if args.json:
            sys.stdout.write(canonical_json({"error": {"path": e.path, "message": str(e)}}))
        sys.stderr.write(f"error: {e.path}: {e}\n")
        return 2
    if args.json and doc is not None:
        _emit(canonical_json(doc), args.out)
    else:
        _emit(text + "\n", args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
