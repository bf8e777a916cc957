"""The line-oriented spec-file format and its check runner.

A spec file declares one state space, named predicates and programs,
and a list of checks. Sections:

    [space]                 one per file; lines "var: v1, v2" or
                            "var: lo..hi"
    [pred NAME]             body is one boolean expression
    [prog NAME]             body is one program, may reference other
                            programs as @NAME
    [triple NAME]           keys pre=, prog=, post= (declared names),
                            exegeses= all or a comma list of tokens,
                            expect= valid/invalid (one per exegesis,
                            or one value for all), witness= yes/no
    [kat NAME]              keys lhs=, rhs= (terms), lines
                            "bind SYM = NAME" mapping term symbols to
                            declared predicates or programs,
                            expect= valid/invalid
    [laws NAME]             keys mode= exhaustive/random, max-size=,
                            samples=, seed=

"#" starts a comment anywhere. Names may contain hyphens; variable
names may not, since they must be language identifiers. A check with
no expectation is informational and cannot fail the run.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from . import lang, laws as laws_mod, topkat, triples
from .errors import ParseError, SemanticError
from .relalg import Predicate, Relation, StateSpace

_HEADER = re.compile(r"\[\s*([a-z]+)(?:\s+([A-Za-z_][A-Za-z0-9_-]*))?\s*\]")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")
_VARIABLE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RANGE = re.compile(r"(-?\d+)\s*\.\.\s*(-?\d+)")
_INT = re.compile(r"-?\d+")

_SECTION_KINDS = ("space", "pred", "prog", "triple", "kat", "laws")


@dataclass(frozen=True)
class TripleDecl:
    name: str
    pre: str
    prog: str
    post: str
    exegeses: tuple[triples.Exegesis, ...] | None  # None means all
    expect: tuple[bool, ...] | None
    witness: bool
    line: int

    kind = "triple"


@dataclass(frozen=True)
class KatDecl:
    name: str
    lhs_text: str
    rhs_text: str
    binds: tuple[tuple[str, str], ...]  # (term symbol, declared name)
    expect: bool | None
    line: int

    kind = "kat"


@dataclass(frozen=True)
class LawsDecl:
    name: str
    mode: str
    max_size: int | None
    samples: int | None
    seed: int | None
    line: int

    kind = "laws"


CheckDecl = Union[TripleDecl, KatDecl, LawsDecl]


@dataclass(frozen=True)
class SpecFile:
    origin: str
    space: StateSpace
    preds: dict[str, Predicate]
    progs: dict[str, Relation]
    pred_sources: dict[str, str]
    prog_sources: dict[str, str]
    checks: tuple[CheckDecl, ...]


def load(path: str) -> SpecFile:
    with open(path, encoding="utf-8") as handle:
        return loads(handle.read(), origin=path)


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    if cut >= 0:
        return line[:cut]
    return line


def _split_sections(text: str):
    sections = []
    body = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            match = _HEADER.fullmatch(stripped)
            if match is None:
                raise ParseError("malformed section header", lineno, 1)
            kind, name = match.group(1), match.group(2)
            if kind not in _SECTION_KINDS:
                raise ParseError(f"unknown section kind {kind!r}", lineno, 1)
            if kind == "space" and name is not None:
                raise ParseError("[space] takes no name", lineno, 1)
            if kind != "space" and name is None:
                raise ParseError(f"[{kind}] needs a name", lineno, 1)
            body = []
            sections.append((kind, name, lineno, body))
            continue
        if body is None:
            raise ParseError("content before any section header", lineno, 1)
        body.append((lineno, line))
    return sections


def _parse_domain(text: str, lineno: int):
    text = text.strip()
    match = _RANGE.fullmatch(text)
    if match is not None:
        lo, hi = int(match.group(1)), int(match.group(2))
        if hi < lo:
            raise ParseError(f"empty range {lo}..{hi}", lineno, 1)
        return tuple(range(lo, hi + 1))
    parts = [part.strip() for part in text.split(",")]
    if not parts or any(not part for part in parts):
        raise ParseError("malformed domain list", lineno, 1)
    if all(_INT.fullmatch(part) for part in parts):
        return tuple(int(part) for part in parts)
    for part in parts:
        if not _VARIABLE.fullmatch(part):
            raise ParseError(f"bad domain value {part!r}", lineno, 1)
    return tuple(parts)


def _parse_keys(body, section: str, allowed: frozenset[str]):
    """key = value lines; returns {key: (value, lineno)} plus bind list."""
    keys: dict[str, tuple[str, int]] = {}
    binds: list[tuple[str, str, int]] = []
    for lineno, line in body:
        stripped = line.strip()
        if stripped.startswith("bind ") or stripped.startswith("bind\t"):
            rest = stripped[5:]
            if "=" not in rest:
                raise ParseError("bind needs 'bind SYM = NAME'", lineno, 1)
            sym, _, target = rest.partition("=")
            sym = sym.strip()
            target = target.strip()
            if not sym or not target:
                raise ParseError("bind needs 'bind SYM = NAME'", lineno, 1)
            binds.append((sym, target, lineno))
            continue
        if "=" not in stripped:
            raise ParseError(
                f"expected 'key = value' in [{section}]", lineno, 1
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in allowed:
            raise ParseError(f"unknown key {key!r} in [{section}]", lineno, 1)
        if key in keys:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        keys[key] = (value, lineno)
    return keys, binds


def _require(keys, name: str, section: str, header_line: int) -> tuple[str, int]:
    if name not in keys:
        raise ParseError(f"[{section}] is missing {name!r}", header_line, 1)
    return keys[name]


def _parse_exegeses(value: str, lineno: int):
    if value == "all":
        return None
    members = []
    for part in value.split(","):
        token = part.strip()
        try:
            members.append(triples.from_token(token))
        except ValueError:
            raise ParseError(f"unknown exegesis {token!r}", lineno, 1) from None
    if not members:
        raise ParseError("empty exegesis list", lineno, 1)
    return tuple(members)


def _parse_expect(value: str, lineno: int) -> tuple[bool, ...]:
    flags = []
    for part in value.split(","):
        word = part.strip()
        if word == "valid":
            flags.append(True)
        elif word == "invalid":
            flags.append(False)
        else:
            raise ParseError(
                f"expect values are 'valid' or 'invalid', not {word!r}", lineno, 1
            )
    return tuple(flags)


def _parse_yesno(value: str, lineno: int) -> bool:
    if value == "yes":
        return True
    if value == "no":
        return False
    raise ParseError(f"expected 'yes' or 'no', not {value!r}", lineno, 1)


def _parse_int(value: str, lineno: int) -> int:
    if not _INT.fullmatch(value):
        raise ParseError(f"expected an integer, not {value!r}", lineno, 1)
    return int(value)


def _body_source(body) -> tuple[int, str]:
    """Rebuild a section body with original line breaks.

    Blank and comment-only lines are dropped during sectioning, so gaps
    are restored here to keep reported error positions accurate.
    """
    first = body[0][0]
    pieces = []
    prev = first
    for lineno, line in body:
        pieces.append("\n" * (lineno - prev))
        pieces.append(line)
        prev = lineno
    return first, "".join(pieces)


def loads(text: str, origin: str = "<spec>") -> SpecFile:
    sections = _split_sections(text)

    space = None
    space_line = None
    pred_bodies: dict[str, tuple[int, list]] = {}
    prog_bodies: dict[str, tuple[int, list]] = {}
    checks: list[CheckDecl] = []
    check_names: set[str] = set()

    for kind, name, header_line, body in sections:
        if kind == "space":
            if space is not None:
                raise ParseError("duplicate [space] section", header_line, 1)
            variables = []
            for lineno, line in body:
                stripped = line.strip()
                if ":" not in stripped:
                    raise ParseError(
                        "expected 'variable: domain'", lineno, 1
                    )
                var, _, domain = stripped.partition(":")
                var = var.strip()
                if not _VARIABLE.fullmatch(var):
                    raise ParseError(f"bad variable name {var!r}", lineno, 1)
                variables.append((var, _parse_domain(domain, lineno)))
            if not variables:
                raise ParseError("[space] declares no variables", header_line, 1)
            try:
                space = StateSpace(variables)
            except ValueError as exc:
                raise SemanticError(f"bad state space: {exc}") from None
            space_line = header_line
            continue

        if kind in ("pred", "prog"):
            table = pred_bodies if kind == "pred" else prog_bodies
            if name in pred_bodies or name in prog_bodies:
                raise ParseError(
                    f"duplicate definition {name!r}", header_line, 1
                )
            if not body:
                raise ParseError(f"[{kind} {name}] has no body", header_line, 1)
            table[name] = (header_line, body)
            continue

        if name in check_names:
            raise ParseError(f"duplicate check name {name!r}", header_line, 1)
        check_names.add(name)

        if kind == "triple":
            keys, binds = _parse_keys(
                body,
                f"triple {name}",
                frozenset(["pre", "prog", "post", "exegeses", "expect", "witness"]),
            )
            if binds:
                raise ParseError(
                    "bind lines belong in [kat] sections", binds[0][2], 1
                )
            pre, _ = _require(keys, "pre", f"triple {name}", header_line)
            prog, _ = _require(keys, "prog", f"triple {name}", header_line)
            post, _ = _require(keys, "post", f"triple {name}", header_line)
            exegeses = None
            if "exegeses" in keys:
                exegeses = _parse_exegeses(*keys["exegeses"])
            expect = None
            if "expect" in keys:
                expect = _parse_expect(*keys["expect"])
            witness = False
            if "witness" in keys:
                witness = _parse_yesno(*keys["witness"])
            count = len(exegeses) if exegeses is not None else len(triples.MATRIX_ORDER)
            if expect is not None and len(expect) not in (1, count):
                raise ParseError(
                    f"expect lists {len(expect)} verdicts for {count} exegeses",
                    keys["expect"][1],
                    1,
                )
            if expect is not None and len(expect) == 1:
                expect = expect * count
            checks.append(
                TripleDecl(name, pre, prog, post, exegeses, expect, witness, header_line)
            )
            continue

        if kind == "kat":
            keys, bind_lines = _parse_keys(
                body, f"kat {name}", frozenset(["lhs", "rhs", "expect"])
            )
            lhs, _ = _require(keys, "lhs", f"kat {name}", header_line)
            rhs, _ = _require(keys, "rhs", f"kat {name}", header_line)
            expect = None
            if "expect" in keys:
                flags = _parse_expect(*keys["expect"])
                if len(flags) != 1:
                    raise ParseError(
                        "kat expect takes a single verdict", keys["expect"][1], 1
                    )
                expect = flags[0]
            seen_syms = set()
            binds = []
            for sym, target, lineno in bind_lines:
                if sym in seen_syms:
                    raise ParseError(f"symbol {sym!r} bound twice", lineno, 1)
                seen_syms.add(sym)
                binds.append((sym, target))
            checks.append(KatDecl(name, lhs, rhs, tuple(binds), expect, header_line))
            continue

        # laws
        keys, binds = _parse_keys(
            body, f"laws {name}", frozenset(["mode", "max-size", "samples", "seed"])
        )
        if binds:
            raise ParseError("bind lines belong in [kat] sections", binds[0][2], 1)
        mode, mode_line = _require(keys, "mode", f"laws {name}", header_line)
        if mode not in ("exhaustive", "random"):
            raise ParseError(
                f"mode is 'exhaustive' or 'random', not {mode!r}", mode_line, 1
            )
        max_size = _parse_int(*keys["max-size"]) if "max-size" in keys else None
        samples = _parse_int(*keys["samples"]) if "samples" in keys else None
        seed = _parse_int(*keys["seed"]) if "seed" in keys else None
        checks.append(LawsDecl(name, mode, max_size, samples, seed, header_line))

    if space is None:
        raise SemanticError(f"{origin}: no [space] section")

    preds: dict[str, Predicate] = {}
    pred_sources: dict[str, str] = {}
    for name, (header_line, body) in pred_bodies.items():
        first_line, source = _body_source(body)
        preds[name] = lang.eval_pred(
            lang.parse_bexpr(source, first_line=first_line), space
        )
        pred_sources[name] = " ".join(line.strip() for _, line in body)

    prog_asts: dict[str, lang.Program] = {}
    prog_sources: dict[str, str] = {}
    for name, (header_line, body) in prog_bodies.items():
        first_line, source = _body_source(body)
        prog_asts[name] = lang.parse_program(source, first_line=first_line)
        prog_sources[name] = " ".join(line.strip() for _, line in body)

    progs: dict[str, Relation] = {}
    for name, ast in prog_asts.items():
        resolved = lang.resolve_refs(ast, prog_asts)
        progs[name] = lang.denote(resolved, space)

    spec = SpecFile(
        origin=origin,
        space=space,
        preds=preds,
        progs=progs,
        pred_sources=pred_sources,
        prog_sources=prog_sources,
        checks=tuple(checks),
    )
    _validate_references(spec)
    return spec


def _validate_references(spec: SpecFile) -> None:
    for decl in spec.checks:
        if decl.kind == "triple":
            for key, target in (("pre", decl.pre), ("post", decl.post)):
                if target not in spec.preds:
                    raise SemanticError(
                        f"[triple {decl.name}] {key} names unknown "
                        f"predicate {target!r}"
                    )
            if decl.prog not in spec.progs:
                raise SemanticError(
                    f"[triple {decl.name}] prog names unknown "
                    f"program {decl.prog!r}"
                )
        elif decl.kind == "kat":
            for sym, target in decl.binds:
                if target not in spec.preds and target not in spec.progs:
                    raise SemanticError(
                        f"[kat {decl.name}] binds {sym!r} to unknown "
                        f"name {target!r}"
                    )


def build_triple(spec: SpecFile, decl: TripleDecl) -> triples.Triple:
    return triples.Triple(
        spec.preds[decl.pre], spec.progs[decl.prog], spec.preds[decl.post]
    )


def find_check(spec: SpecFile, name: str, kind: str) -> CheckDecl:
    for decl in spec.checks:
        if decl.name == name and decl.kind == kind:
            return decl
    raise SemanticError(f"no [{kind} {name}] in {spec.origin}")


# --- running checks ---


@dataclass(frozen=True)
class TripleRow:
    exegesis: str
    verdict: bool
    expected: bool | None
    formula: str
    galois: str | None
    contrapositive: str | None
    core_grid: bool

    @property
    def ok(self) -> bool:
        return self.expected is None or self.verdict == self.expected

    def to_dict(self) -> dict:
        return {
            "exegesis": self.exegesis,
            "verdict": self.verdict,
            "expected": self.expected,
            "ok": self.ok,
            "formula": self.formula,
            "galois": self.galois,
            "contrapositive": self.contrapositive,
            "core-grid": self.core_grid,
        }


@dataclass(frozen=True)
class TripleResult:
    name: str
    pre: str
    prog: str
    post: str
    rows: tuple[TripleRow, ...]
    witness: tuple[int, int] | None
    witness_states: tuple[str, str] | None
    witness_requested: bool

    kind = "triple"

    @property
    def passed(self) -> bool:
        return all(row.ok for row in self.rows)

    def to_dict(self) -> dict:
        return {
            "kind": "triple",
            "name": self.name,
            "pre": self.pre,
            "prog": self.prog,
            "post": self.post,
            "passed": self.passed,
            "rows": [row.to_dict() for row in self.rows],
            "witness-requested": self.witness_requested,
            "witness": list(self.witness) if self.witness else None,
            "witness-states": list(self.witness_states)
            if self.witness_states
            else None,
        }


@dataclass(frozen=True)
class KatResult:
    name: str
    lhs: str
    rhs: str
    holds: bool
    expected: bool | None
    bindings: tuple[tuple[str, str], ...]

    kind = "kat"

    @property
    def passed(self) -> bool:
        return self.expected is None or self.holds == self.expected

    def to_dict(self) -> dict:
        return {
            "kind": "kat",
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "expected": self.expected,
            "passed": self.passed,
            "bindings": {sym: target for sym, target in self.bindings},
        }


@dataclass(frozen=True)
class LawsResult:
    name: str
    report: laws_mod.LawsReport

    kind = "laws"

    @property
    def passed(self) -> bool:
        return self.report.passed

    def to_dict(self) -> dict:
        return {
            "kind": "laws",
            "name": self.name,
            "passed": self.passed,
            "report": self.report.to_dict(),
        }


CheckResult = Union[TripleResult, KatResult, LawsResult]


@dataclass(frozen=True)
class RunReport:
    origin: str
    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def to_dict(self) -> dict:
        return {
            "origin": self.origin,
            "passed": self.passed,
            "checks": [result.to_dict() for result in self.results],
        }


def run_triple(spec: SpecFile, decl: TripleDecl) -> TripleResult:
    triple = build_triple(spec, decl)
    full = triples.matrix(triple)
    requested = (
        decl.exegeses if decl.exegeses is not None else triples.MATRIX_ORDER
    )
    rows = []
    for position, exegesis in enumerate(requested):
        entry = full[exegesis.token]
        expected = decl.expect[position] if decl.expect is not None else None
        rows.append(
            TripleRow(
                exegesis=exegesis.token,
                verdict=entry.verdict,
                expected=expected,
                formula=entry.formula,
                galois=entry.galois,
                contrapositive=entry.contrapositive,
                core_grid=entry.core_grid,
            )
        )
    witness = None
    witness_states = None
    if decl.witness:
        witness = triples.bug_witness(triple)
        if witness is not None:
            witness_states = (
                spec.space.format_state(witness[0]),
                spec.space.format_state(witness[1]),
            )
    return TripleResult(
        name=decl.name,
        pre=decl.pre,
        prog=decl.prog,
        post=decl.post,
        rows=tuple(rows),
        witness=witness,
        witness_states=witness_states,
        witness_requested=decl.witness,
    )


def run_kat(spec: SpecFile, decl: KatDecl) -> KatResult:
    tests = {}
    progs = {}
    for sym, target in decl.binds:
        if target in spec.preds:
            tests[sym] = spec.preds[target]
        else:
            progs[sym] = spec.progs[target]
    lhs = topkat.parse_term(decl.lhs_text, tests, progs)
    rhs = topkat.parse_term(decl.rhs_text, tests, progs)
    interp = topkat.Interpretation(spec.space, progs, tests)
    holds = topkat.equation_holds(topkat.EncodedEquation(decl.name, lhs, rhs), interp)
    return KatResult(
        name=decl.name,
        lhs=topkat.term_text(lhs),
        rhs=topkat.term_text(rhs),
        holds=holds,
        expected=decl.expect,
        bindings=decl.binds,
    )


def run_laws_decl(decl: LawsDecl) -> LawsResult:
    report = laws_mod.run_laws(
        mode=decl.mode,
        max_size=decl.max_size,
        samples=decl.samples,
        seed=decl.seed,
    )
    return LawsResult(name=decl.name, report=report)


def run(spec: SpecFile) -> RunReport:
    results: list[CheckResult] = []
    for decl in spec.checks:
        if decl.kind == "triple":
            results.append(run_triple(spec, decl))
        elif decl.kind == "kat":
            results.append(run_kat(spec, decl))
        else:
            results.append(run_laws_decl(decl))
    return RunReport(origin=spec.origin, results=tuple(results))
