"""Triple validity under every catalogued reading.

A triple {b} p {c} is just a precondition, a relation, and a
postcondition; what it claims depends on the chosen exegesis. Each
Exegesis member carries its defining implication over the predicate
transformers. Two of them have a second, equivalent formulation
through a Galois connection (partial correctness forward through asp,
partial incorrectness forward through dslp); check_galois verifies
those equivalences on a model and check_contrapositive verifies the
four contrapositive pairings.

Demonic total correctness is deliberately the odd one out: it is not
part of the catalogue's core grid and has no equation encoding, but it
is exposed as a tenth check so the gap against the angelic reading
stays visible. demonic_gap_witness() returns the canonical 2-state
triple exhibiting that gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import transformers
from .errors import SpaceMismatch
from .relalg import Predicate, Relation, StateSpace


@dataclass(frozen=True)
class Triple:
    pre: Predicate
    prog: Relation
    post: Predicate

    def __post_init__(self):
        if self.pre.space != self.prog.space or self.post.space != self.prog.space:
            raise SpaceMismatch("triple parts live on different spaces")


class Exegesis(Enum):
    TOTAL_CORRECTNESS = "total-correctness"
    EXEGESIS_V = "exegesis-v"
    PARTIAL_CORRECTNESS = "partial-correctness"
    PARTIAL_INCORRECTNESS = "partial-incorrectness"
    EXEGESIS_VI = "exegesis-vi"
    INCORRECTNESS = "incorrectness"
    ANGELIC_LIBERAL_LHS = "angelic-liberal-lhs"
    ANGELIC_LIBERAL_RHS = "angelic-liberal-rhs"
    BUG_WITNESS = "bug-witness"
    DEMONIC_TOTAL_CORRECTNESS = "demonic-total-correctness"

    @property
    def token(self) -> str:
        return self.value


def from_token(token: str) -> Exegesis:
    for member in Exegesis:
        if member.value == token:
            return member
    raise ValueError(f"unknown exegesis {token!r}")


# canonical report order: the catalogue grid left-to-right and
# top-to-bottom, then the liberal extras, the bug check, and the
# off-grid demonic reading last
MATRIX_ORDER = (
    Exegesis.TOTAL_CORRECTNESS,
    Exegesis.EXEGESIS_V,
    Exegesis.PARTIAL_CORRECTNESS,
    Exegesis.PARTIAL_INCORRECTNESS,
    Exegesis.EXEGESIS_VI,
    Exegesis.INCORRECTNESS,
    Exegesis.ANGELIC_LIBERAL_LHS,
    Exegesis.ANGELIC_LIBERAL_RHS,
    Exegesis.BUG_WITNESS,
    Exegesis.DEMONIC_TOTAL_CORRECTNESS,
)


def _holds_tc(t: Triple) -> bool:
    return t.pre.issubset(transformers.awp(t.prog, t.post))


def _holds_v(t: Triple) -> bool:
    return transformers.dwlp(t.prog, t.post).issubset(t.pre)


def _holds_pc(t: Triple) -> bool:
    return t.pre.issubset(transformers.dwlp(t.prog, t.post))


def _holds_pinc(t: Triple) -> bool:
    return transformers.awp(t.prog, t.post).issubset(t.pre)


def _holds_vi(t: Triple) -> bool:
    return transformers.dslp(t.prog, t.pre).issubset(t.post)


def _holds_inc(t: Triple) -> bool:
    return t.post.issubset(transformers.asp(t.prog, t.pre))


def _holds_allhs(t: Triple) -> bool:
    return t.pre.issubset(transformers.awlp(t.prog, t.post))


def _holds_alrhs(t: Triple) -> bool:
    return t.post.issubset(transformers.aslp(t.prog, t.pre))


def _holds_bug(t: Triple) -> bool:
    return bool(t.pre & transformers.awp(t.prog, t.post))


def _holds_dtc(t: Triple) -> bool:
    return t.pre.issubset(transformers.dwp(t.prog, t.post))


_HOLDS = {
    Exegesis.TOTAL_CORRECTNESS: _holds_tc,
    Exegesis.EXEGESIS_V: _holds_v,
    Exegesis.PARTIAL_CORRECTNESS: _holds_pc,
    Exegesis.PARTIAL_INCORRECTNESS: _holds_pinc,
    Exegesis.EXEGESIS_VI: _holds_vi,
    Exegesis.INCORRECTNESS: _holds_inc,
    Exegesis.ANGELIC_LIBERAL_LHS: _holds_allhs,
    Exegesis.ANGELIC_LIBERAL_RHS: _holds_alrhs,
    Exegesis.BUG_WITNESS: _holds_bug,
    Exegesis.DEMONIC_TOTAL_CORRECTNESS: _holds_dtc,
}

_FORMULA = {
    Exegesis.TOTAL_CORRECTNESS: "b <= awp(p)(c)",
    Exegesis.EXEGESIS_V: "dwlp(p)(c) <= b",
    Exegesis.PARTIAL_CORRECTNESS: "b <= dwlp(p)(c)",
    Exegesis.PARTIAL_INCORRECTNESS: "awp(p)(c) <= b",
    Exegesis.EXEGESIS_VI: "dslp(p)(b) <= c",
    Exegesis.INCORRECTNESS: "c <= asp(p)(b)",
    Exegesis.ANGELIC_LIBERAL_LHS: "b <= awlp(p)(c)",
    Exegesis.ANGELIC_LIBERAL_RHS: "c <= aslp(p)(b)",
    Exegesis.BUG_WITNESS: "b & awp(p)(c) != empty",
    Exegesis.DEMONIC_TOTAL_CORRECTNESS: "b <= dwp(p)(c)",
}

# second, Galois-equivalent formulation where one exists
_GALOIS_FORM = {
    Exegesis.PARTIAL_CORRECTNESS: "asp(p)(b) <= c",
    Exegesis.PARTIAL_INCORRECTNESS: "c <= dslp(p)(b)",
}

_CONTRAPOSITIVE = {
    Exegesis.TOTAL_CORRECTNESS: Exegesis.EXEGESIS_V,
    Exegesis.EXEGESIS_V: Exegesis.TOTAL_CORRECTNESS,
    Exegesis.PARTIAL_CORRECTNESS: Exegesis.PARTIAL_INCORRECTNESS,
    Exegesis.PARTIAL_INCORRECTNESS: Exegesis.PARTIAL_CORRECTNESS,
    Exegesis.EXEGESIS_VI: Exegesis.INCORRECTNESS,
    Exegesis.INCORRECTNESS: Exegesis.EXEGESIS_VI,
}

# the six readings forming the catalogue's core grid
_CORE_GRID = frozenset(
    [
        Exegesis.TOTAL_CORRECTNESS,
        Exegesis.EXEGESIS_V,
        Exegesis.PARTIAL_CORRECTNESS,
        Exegesis.PARTIAL_INCORRECTNESS,
        Exegesis.EXEGESIS_VI,
        Exegesis.INCORRECTNESS,
    ]
)


def holds(e: Exegesis, t: Triple) -> bool:
    """Decide one triple under one exegesis, exactly."""
    return _HOLDS[e](t)


@dataclass(frozen=True)
class MatrixEntry:
    exegesis: str
    verdict: bool
    formula: str
    galois: str | None  # equivalent formulation via a Galois connection
    contrapositive: str | None  # partner exegesis token
    core_grid: bool

    def to_dict(self) -> dict:
        return {
            "exegesis": self.exegesis,
            "verdict": self.verdict,
            "formula": self.formula,
            "galois": self.galois,
            "contrapositive": self.contrapositive,
            "core-grid": self.core_grid,
        }


def matrix(t: Triple) -> dict[str, MatrixEntry]:
    """Verdicts for all ten checks, in canonical order."""
    out = {}
    for e in MATRIX_ORDER:
        contra = _CONTRAPOSITIVE.get(e)
        out[e.token] = MatrixEntry(
            exegesis=e.token,
            verdict=holds(e, t),
            formula=_FORMULA[e],
            galois=_GALOIS_FORM.get(e),
            contrapositive=contra.token if contra is not None else None,
            core_grid=e in _CORE_GRID,
        )
    return out


# --- per-model law checks ---


@dataclass(frozen=True)
class EdgeResult:
    name: str
    lhs: str
    rhs: str
    lhs_holds: bool
    rhs_holds: bool

    @property
    def ok(self) -> bool:
        return self.lhs_holds == self.rhs_holds

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhs-holds": self.lhs_holds,
            "rhs-holds": self.rhs_holds,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class LawReport:
    ok: bool
    edges: tuple[EdgeResult, ...]
    model: dict | None  # populated only when some edge fails

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "edges": [edge.to_dict() for edge in self.edges],
            "model": self.model,
        }


def _model_dict(r: Relation, b: Predicate, c: Predicate) -> dict:
    return {
        "relation": sorted(r.pairs()),
        "b": b.states(),
        "c": c.states(),
    }


def _law_report(edges: list[EdgeResult], r, b, c) -> LawReport:
    ok = all(edge.ok for edge in edges)
    return LawReport(ok, tuple(edges), None if ok else _model_dict(r, b, c))


def check_galois(r: Relation, b: Predicate, c: Predicate) -> LawReport:
    """Both Galois equivalences on one model."""
    edges = [
        EdgeResult(
            "wlp-sp",
            "b <= dwlp(c)",
            "asp(b) <= c",
            b.issubset(transformers.dwlp(r, c)),
            transformers.asp(r, b).issubset(c),
        ),
        EdgeResult(
            "wp-slp",
            "awp(c) <= b",
            "c <= dslp(b)",
            transformers.awp(r, c).issubset(b),
            c.issubset(transformers.dslp(r, b)),
        ),
    ]
    return _law_report(edges, r, b, c)


def check_contrapositive(r: Relation, b: Predicate, c: Predicate) -> LawReport:
    """All four contrapositive partner edges on one model."""
    nb, nc = ~b, ~c
    edges = [
        EdgeResult(
            "partial-correctness~partial-incorrectness",
            "b <= dwlp(c)",
            "awp(!c) <= !b",
            b.issubset(transformers.dwlp(r, c)),
            transformers.awp(r, nc).issubset(nb),
        ),
        EdgeResult(
            "total-correctness~exegesis-v",
            "b <= awp(c)",
            "dwlp(!c) <= !b",
            b.issubset(transformers.awp(r, c)),
            transformers.dwlp(r, nc).issubset(nb),
        ),
        EdgeResult(
            "partial-correctness-sp~partial-incorrectness-slp",
            "asp(b) <= c",
            "!c <= dslp(!b)",
            transformers.asp(r, b).issubset(c),
            nc.issubset(transformers.dslp(r, nb)),
        ),
        EdgeResult(
            "incorrectness~exegesis-vi",
            "c <= asp(b)",
            "dslp(!b) <= !c",
            c.issubset(transformers.asp(r, b)),
            transformers.dslp(r, nb).issubset(nc),
        ),
    ]
    return _law_report(edges, r, b, c)


def bug_witness(t: Triple) -> tuple[int, int] | None:
    """Lexicographically least (s, s') with s in b, s' in c, p(s, s')."""
    post_bits = t.post.bits
    for s in t.pre.states():
        hits = t.prog.rows[s] & post_bits
        if hits:
            return (s, (hits & -hits).bit_length() - 1)
    return None


# --- the demonic-angelic gap, pinned ---

GAP_WITNESS_PAIRS = ((0, 0), (0, 1))
GAP_WITNESS_PRE = (0,)
GAP_WITNESS_POST = (1,)


def demonic_gap_witness() -> Triple:
    """The canonical 2-state triple separating the two total readings.

    State 0 can step to 0 or to 1 and state 1 cannot step at all. With
    b = {0} and c = {1}, some run from b reaches c (the angelic total
    reading holds, and so does its equation encoding) yet not every
    run does (the demonic total reading fails).
    """
    space = StateSpace((("s", (0, 1)),))
    return Triple(
        Predicate.from_states(space, GAP_WITNESS_PRE),
        Relation.from_pairs(space, GAP_WITNESS_PAIRS),
        Predicate.from_states(space, GAP_WITNESS_POST),
    )
