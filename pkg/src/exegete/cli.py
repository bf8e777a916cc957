"""Command line front end.

    exegete check <file> [--json]
    exegete laws [--exhaustive | --random] [--max-size N]
                 [--samples N] [--seed S] [--json]
    exegete matrix <file> --triple NAME [--json]
    exegete kat <file> --equation NAME [--json]

Exit status is 0 when every requested verdict agrees with its declared
expectation (checks without expectations are informational), 1 when
some check failed, 2 for usage errors and files that do not parse or
elaborate.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import laws as laws_mod
from . import specfile, triples
from .errors import ExegeteError

_GALOIS_GLYPHS = {"wlp-sp": "†", "wp-slp": "‡"}

_FAMILY_NOTES = {
    "contrapositive": "4 edges",
    "correspondence": "6 equations",
    "demonic-gap": "dwp implies angelic equation",
}


def _verdict(flag: bool) -> str:
    return "VALID" if flag else "INVALID"


def _expect_note(verdict: bool, expected: bool | None) -> str:
    if expected is None:
        return ""
    note = f"  (expected {'valid' if expected else 'invalid'})"
    if verdict != expected:
        note += " MISMATCH"
    return note


def _pred_text(states) -> str:
    return "{" + ", ".join(str(s) for s in states) + "}"


def _violation_lines(violation, indent: str) -> list[str]:
    plural = "state" if violation.size == 1 else "states"
    lines = [
        f"{indent}minimal counterexample: check {violation.check.name}, "
        f"{violation.size} {plural}",
        f"{indent}  lhs: {violation.check.lhs}",
        f"{indent}  rhs: {violation.check.rhs}",
        f"{indent}  relation:",
    ]
    for row in violation.bit_matrix():
        lines.append(f"{indent}    " + " ".join(str(bit) for bit in row))
    lines.append(f"{indent}  b = {_pred_text(violation.b_states())}")
    lines.append(f"{indent}  c = {_pred_text(violation.c_states())}")
    return lines


def _family_label(fam) -> str:
    if fam.family == "galois":
        inner = ", ".join(f"{name} {_GALOIS_GLYPHS[name]}" for name in fam.checks)
        return f"galois ({inner})"
    return f"{fam.family} ({_FAMILY_NOTES[fam.family]})"


def _laws_lines(report, heading: str) -> list[str]:
    if report.mode == "exhaustive":
        scope = f"sizes 1..{report.sizes[-1]}"
    else:
        scope = (
            f"size {report.sizes[0]}, {report.samples} samples, "
            f"seed {report.seed}"
        )
    lines = [f"{heading}: {scope}, engine {report.engine}"]
    for fam in report.families:
        if fam.passed:
            status = "PASS"
        else:
            plural = "violation" if fam.violations_total == 1 else "violations"
            status = f"FAIL, {fam.violations_total} {plural}"
            if fam.truncated:
                status += " (list truncated)"
        lines.append(
            f"  {_family_label(fam)}: {status}, "
            f"{fam.models_checked} models checked"
        )
        if not fam.passed and fam.violations:
            lines.extend(_violation_lines(fam.violations[0], "    "))
    gw = report.gap_witness
    lines.append(
        "  gap witness (2 states): angelic equation "
        f"{'holds' if gw.equation_holds else 'fails'}, demonic reading "
        f"{'holds' if gw.demonic_holds else 'fails'}: "
        f"{'CONFIRMED' if gw.confirmed else 'NOT CONFIRMED'}"
    )
    lines.append(
        "†, ‡, 4 contrapositive edges, 6 correspondences: "
        f"{'PASS' if report.passed else 'FAIL'}, "
        f"{report.models_checked} models checked"
    )
    return lines


def _triple_lines(result) -> list[str]:
    lines = [
        f"triple {result.name}: "
        f"{{{result.pre}}} {result.prog} {{{result.post}}}"
    ]
    for row in result.rows:
        lines.append(
            f"  {row.exegesis}: {_verdict(row.verdict)}"
            f"{_expect_note(row.verdict, row.expected)}"
        )
    if result.witness_requested:
        if result.witness_states is not None:
            source, target = result.witness_states
            lines.append(f"  witness: {source} -> {target}")
        else:
            lines.append("  witness: none")
    return lines


def _kat_lines(result) -> list[str]:
    lines = [f"kat {result.name}: {result.lhs} = {result.rhs}"]
    if result.bindings:
        bound = ", ".join(f"{sym} = {target}" for sym, target in result.bindings)
        lines.append(f"  bindings: {bound}")
    lines.append(
        f"  equation: {_verdict(result.holds)}"
        f"{_expect_note(result.holds, result.expected)}"
    )
    return lines


def _cmd_check(args) -> int:
    spec = specfile.load(args.file)
    report = specfile.run(spec)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
        return 0 if report.passed else 1
    plural = "check" if len(report.results) == 1 else "checks"
    print(f"{report.origin}: {len(report.results)} {plural}")
    for result in report.results:
        if result.kind == "triple":
            lines = _triple_lines(result)
        elif result.kind == "kat":
            lines = _kat_lines(result)
        else:
            lines = _laws_lines(result.report, f"laws {result.name}")
        for line in lines:
            print(line)
    print(f"check: {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def _cmd_laws(args) -> int:
    if args.random and args.max_size is not None:
        raise ExegeteError("--max-size applies to exhaustive mode only")
    if not args.random and (args.samples is not None or args.seed is not None):
        raise ExegeteError("--samples and --seed apply to random mode only")
    report = laws_mod.run_laws(
        mode="random" if args.random else "exhaustive",
        max_size=args.max_size,
        samples=args.samples,
        seed=args.seed,
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        for line in _laws_lines(report, f"laws {report.mode}"):
            print(line)
    return 0 if report.passed else 1


def _cmd_matrix(args) -> int:
    spec = specfile.load(args.file)
    decl = specfile.find_check(spec, args.triple, "triple")
    triple = specfile.build_triple(spec, decl)
    entries = triples.matrix(triple)

    expected = {}
    if decl.expect is not None:
        requested = (
            decl.exegeses if decl.exegeses is not None else triples.MATRIX_ORDER
        )
        expected = {
            exegesis.token: flag for exegesis, flag in zip(requested, decl.expect)
        }

    witness = None
    witness_states = None
    if decl.witness:
        witness = triples.bug_witness(triple)
        if witness is not None:
            witness_states = (
                spec.space.format_state(witness[0]),
                spec.space.format_state(witness[1]),
            )

    passed = all(
        entries[token].verdict == flag for token, flag in expected.items()
    )

    if args.json:
        rows = []
        for exegesis in triples.MATRIX_ORDER:
            entry = entries[exegesis.token]
            row = entry.to_dict()
            row["expected"] = expected.get(exegesis.token)
            rows.append(row)
        payload = {
            "origin": spec.origin,
            "triple": decl.name,
            "pre": decl.pre,
            "prog": decl.prog,
            "post": decl.post,
            "entries": rows,
            "witness-requested": decl.witness,
            "witness": list(witness) if witness else None,
            "witness-states": list(witness_states) if witness_states else None,
            "passed": passed,
        }
        print(json.dumps(payload, indent=2))
        return 0 if passed else 1

    print(f"matrix {decl.name}: {{{decl.pre}}} {decl.prog} {{{decl.post}}}")
    print()
    pairs = []
    galois_notes = []
    for exegesis in triples.MATRIX_ORDER:
        entry = entries[exegesis.token]
        marker = "*" if entry.core_grid else " "
        note = _expect_note(entry.verdict, expected.get(exegesis.token))
        print(
            f"  {marker} {exegesis.token:<26} {_verdict(entry.verdict):<8} "
            f"{entry.formula}{note}"
        )
        if entry.contrapositive is not None:
            pair = tuple(sorted((exegesis.token, entry.contrapositive)))
            if pair not in pairs:
                pairs.append(pair)
        if entry.galois is not None:
            galois_notes.append(f"{exegesis.token} = {entry.galois}")
    print()
    print("  * member of the six-reading core grid")
    print(
        "  contrapositives: "
        + "; ".join(f"{a} ~ {b}" for a, b in pairs)
    )
    print("  galois: " + "; ".join(galois_notes))
    if decl.witness:
        if witness_states is not None:
            source, target = witness_states
            print(f"  witness: {source} -> {target}")
        else:
            print("  witness: none")
    return 0 if passed else 1


def _cmd_kat(args) -> int:
    spec = specfile.load(args.file)
    decl = specfile.find_check(spec, args.equation, "kat")
    result = specfile.run_kat(spec, decl)
    if args.json:
        payload = result.to_dict()
        payload["origin"] = spec.origin
        print(json.dumps(payload, indent=2))
        return 0 if result.passed else 1
    for line in _kat_lines(result):
        print(line)
    return 0 if result.passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exegete",
        description="decide triple validity under ten exegeses over "
        "finite relational models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run every check in a spec file")
    check.add_argument("file", help="spec file to run")
    check.add_argument(
        "--json", action="store_true", help="emit the report as JSON"
    )
    check.set_defaults(handler=_cmd_check)

    laws = sub.add_parser("laws", help="sweep the transformer laws over small models")
    mode = laws.add_mutually_exclusive_group()
    mode.add_argument(
        "--exhaustive",
        action="store_true",
        help="check every model up to --max-size states (the default mode)",
    )
    mode.add_argument(
        "--random",
        action="store_true",
        help="check seeded random six-state models",
    )
    laws.add_argument(
        "--max-size",
        type=int,
        default=None,
        help="largest state count for --exhaustive (default 3, maximum 4)",
    )
    laws.add_argument(
        "--samples",
        type=int,
        default=None,
        help="model count for --random (default 10000)",
    )
    laws.add_argument(
        "--seed", type=int, default=None, help="seed for --random (default 0)"
    )
    laws.add_argument(
        "--json", action="store_true", help="emit the report as JSON"
    )
    laws.set_defaults(handler=_cmd_laws)

    matrix = sub.add_parser("matrix", help="all ten verdicts for one triple")
    matrix.add_argument("file", help="spec file holding the triple")
    matrix.add_argument(
        "--triple", required=True, help="name of the [triple] section to read"
    )
    matrix.add_argument(
        "--json", action="store_true", help="emit the matrix as JSON"
    )
    matrix.set_defaults(handler=_cmd_matrix)

    kat = sub.add_parser("kat", help="decide one equation from a spec file")
    kat.add_argument("file", help="spec file holding the equation")
    kat.add_argument(
        "--equation", required=True, help="name of the [kat] section to read"
    )
    kat.add_argument(
        "--json", action="store_true", help="emit the result as JSON"
    )
    kat.set_defaults(handler=_cmd_kat)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ExegeteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
