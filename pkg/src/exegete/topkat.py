"""Kleene algebra with tests plus a top element, over relations.

Terms are regular expressions over two sorts of symbols: programs,
interpreted as arbitrary relations, and tests, interpreted as filter
relations (identity restricted to a predicate). Top is the universal
relation. Negation exists only on tests; general terms have no
complement.

The ASCII grammar is operator-explicit:

    term := term "+" term | term ";" term | term "*"
          | "0" | "1" | "top" | IDENT | "!" IDENT | "(" term ")"

with "*" binding tightest, then ";", then "+".

encode() builds the six equation encodings of triple validity. Each
pairs two terms whose equality over an interpretation is claimed to
match a transformer-side implication; correspondence() checks one
claim on one interpretation, and the laws module sweeps all of them
over every small model. Prefixing top to both sides of an equation
compares codomains, suffixing it compares domains; that is the whole
trick, and it is exercised here only through real term evaluation, so
the equation route stays independent of the transformer route.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from . import transformers
from .errors import ParseError, SemanticError
from .relalg import Predicate, Relation, StateSpace, equals, test

# --- terms ---


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Test:
    symbol: str


@dataclass(frozen=True)
class NegTest:
    symbol: str


@dataclass(frozen=True)
class Prog:
    symbol: str


@dataclass(frozen=True)
class Plus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Dot:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Star:
    body: "Term"


Term = Union[Zero, One, Top, Test, NegTest, Prog, Plus, Dot, Star]


def dot(*terms: Term) -> Term:
    """Left-associated product of one or more terms."""
    if not terms:
        raise ValueError("dot needs at least one term")
    node = terms[0]
    for t in terms[1:]:
        node = Dot(node, t)
    return node


def term_text(t: Term) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Top):
        return "top"
    if isinstance(t, Test):
        return t.symbol
    if isinstance(t, NegTest):
        return f"!{t.symbol}"
    if isinstance(t, Prog):
        return t.symbol
    if isinstance(t, Plus):
        return f"{term_text(t.left)} + {term_text(t.right)}"
    if isinstance(t, Dot):
        return f"{_dot_part(t.left)} ; {_dot_part(t.right)}"
    if isinstance(t, Star):
        return f"{_star_part(t.body)}*"
    raise TypeError(f"not a term: {t!r}")


def _dot_part(t: Term) -> str:
    if isinstance(t, Plus):
        return f"({term_text(t)})"
    return term_text(t)


def _star_part(t: Term) -> str:
    if isinstance(t, (Plus, Dot)):
        return f"({term_text(t)})"
    return term_text(t)


# --- parsing ---


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    line = 1
    column = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            column = 1
            i += 1
            continue
        if ch in " \t\r":
            column += 1
            i += 1
            continue
        if ch in "+;*()!":
            tokens.append(("sym", ch, line, column))
            column += 1
            i += 1
            continue
        if ch.isalnum() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_-"):
                j += 1
            tokens.append(("word", text[i:j], line, column))
            column += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, column)
    tokens.append(("eof", "", line, column))
    return tokens


class _TermParser:
    def __init__(self, text: str, tests: frozenset[str], progs: frozenset[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.tests = tests
        self.progs = progs

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        if tok[0] != "eof":
            self.pos += 1
        return tok

    def at_sym(self, text: str) -> bool:
        kind, word, _, _ = self.peek()
        return kind == "sym" and word == text

    def expect_sym(self, text: str):
        if not self.at_sym(text):
            kind, word, line, column = self.peek()
            raise ParseError(
                f"expected {text!r}, found {word or 'end of input'!r}", line, column
            )
        return self.advance()

    def term(self) -> Term:
        node = self.product()
        while self.at_sym("+"):
            self.advance()
            node = Plus(node, self.product())
        return node

    def product(self) -> Term:
        node = self.starred()
        while self.at_sym(";"):
            self.advance()
            node = Dot(node, self.starred())
        return node

    def starred(self) -> Term:
        node = self.atom()
        while self.at_sym("*"):
            self.advance()
            node = Star(node)
        return node

    def atom(self) -> Term:
        kind, word, line, column = self.peek()
        if self.at_sym("("):
            self.advance()
            node = self.term()
            self.expect_sym(")")
            return node
        if self.at_sym("!"):
            self.advance()
            kind, word, line, column = self.peek()
            if kind != "word" or word in ("0", "1", "top"):
                raise ParseError("'!' must be followed by a test symbol", line, column)
            self.advance()
            return self._negtest(word, line, column)
        if kind == "word":
            self.advance()
            if word == "0":
                return Zero()
            if word == "1":
                return One()
            if word == "top":
                return Top()
            return self._symbol(word, line, column)
        raise ParseError(
            f"expected a term, found {word or 'end of input'!r}", line, column
        )

    def _symbol(self, word: str, line: int, column: int) -> Term:
        is_test = word in self.tests
        is_prog = word in self.progs
        if is_test and is_prog:
            raise ParseError(
                f"symbol {word!r} is both a test and a program", line, column
            )
        if is_test:
            return Test(word)
        if is_prog:
            return Prog(word)
        raise ParseError(
            f"unknown symbol {word!r}: not a bound test or program", line, column
        )

    def _negtest(self, word: str, line: int, column: int) -> Term:
        if word not in self.tests:
            raise ParseError(
                f"negation applies to tests only and {word!r} is not one",
                line,
                column,
            )
        return NegTest(word)


def parse_term(text: str, tests: Iterable[str], progs: Iterable[str]) -> Term:
    """Parse a term, resolving each symbol as a test or a program."""
    parser = _TermParser(text, frozenset(tests), frozenset(progs))
    node = parser.term()
    kind, word, line, column = parser.peek()
    if kind != "eof":
        raise ParseError(f"unexpected trailing input at {word!r}", line, column)
    return node


# --- interpretation ---


@dataclass(frozen=True)
class Interpretation:
    space: StateSpace
    progs: Mapping[str, Relation]
    tests: Mapping[str, Predicate]

    def __post_init__(self):
        for name, rel in self.progs.items():
            if rel.space != self.space:
                raise SemanticError(f"program {name!r} is over a different space")
        for name, pred in self.tests.items():
            if pred.space != self.space:
                raise SemanticError(f"test {name!r} is over a different space")
        overlap = set(self.progs) & set(self.tests)
        if overlap:
            raise SemanticError(
                f"symbols bound as both test and program: {sorted(overlap)}"
            )


def eval_term(t: Term, i: Interpretation) -> Relation:
    if isinstance(t, Zero):
        return Relation.empty(i.space)
    if isinstance(t, One):
        return Relation.identity(i.space)
    if isinstance(t, Top):
        return Relation.top(i.space)
    if isinstance(t, Test):
        return test(_lookup(i.tests, t.symbol, "test"))
    if isinstance(t, NegTest):
        return test(~_lookup(i.tests, t.symbol, "test"))
    if isinstance(t, Prog):
        return _lookup(i.progs, t.symbol, "program")
    if isinstance(t, Plus):
        return eval_term(t.left, i).union(eval_term(t.right, i))
    if isinstance(t, Dot):
        return eval_term(t.left, i).compose(eval_term(t.right, i))
    if isinstance(t, Star):
        return eval_term(t.body, i).star()
    raise TypeError(f"not a term: {t!r}")


def _lookup(table, symbol, kind):
    try:
        return table[symbol]
    except KeyError:
        raise SemanticError(f"unmapped {kind} symbol {symbol!r}") from None


eval = eval_term


# --- the six equation encodings ---


@dataclass(frozen=True)
class EncodedEquation:
    name: str
    lhs: Term
    rhs: Term

    @property
    def text(self) -> str:
        return f"{term_text(self.lhs)} = {term_text(self.rhs)}"


ENCODING_LABELS = (
    "partial-correctness",
    "incorrectness",
    "angelic-total-correctness",
    "partial-incorrectness",
    "topbpc-toppc",
    "bpctop-bptop",
)


def encode(label: str, b: str = "b", p: str = "p", c: str = "c") -> EncodedEquation:
    tb, tp, tc, top = Test(b), Prog(p), Test(c), Top()
    if label == "partial-correctness":
        return EncodedEquation(label, dot(top, tb, tp, tc), dot(top, tb, tp))
    if label == "incorrectness":
        return EncodedEquation(label, dot(top, tb, tp, tc), dot(top, tc))
    if label == "angelic-total-correctness":
        return EncodedEquation(label, dot(tb, tp, tc, top), dot(tb, top))
    if label == "partial-incorrectness":
        return EncodedEquation(label, dot(tb, tp, tc, top), dot(tp, tc, top))
    if label == "topbpc-toppc":
        return EncodedEquation(label, dot(top, tb, tp, tc), dot(top, tp, tc))
    if label == "bpctop-bptop":
        return EncodedEquation(label, dot(tb, tp, tc, top), dot(tb, tp, top))
    raise SemanticError(f"unknown encoding label {label!r}")


def equation_holds(eq: EncodedEquation, i: Interpretation) -> bool:
    return equals(eval_term(eq.lhs, i), eval_term(eq.rhs, i))


# transformer-side characterisation of each encoding; the implication
# these compute is exactly what the equation is claimed to capture
def _side_pc(r, b, c):
    return transformers.asp(r, b).issubset(c)


def _side_inc(r, b, c):
    return c.issubset(transformers.asp(r, b))


def _side_atc(r, b, c):
    return b.issubset(transformers.awp(r, c))


def _side_pinc(r, b, c):
    return transformers.awp(r, c).issubset(b)


def _side_tpc(r, b, c):
    return c.issubset(transformers.aslp(r, b))


def _side_bpt(r, b, c):
    return b.issubset(transformers.awlp(r, c))


_TRANSFORMER_SIDES = {
    "partial-correctness": (_side_pc, "asp(p)(b) <= c"),
    "incorrectness": (_side_inc, "c <= asp(p)(b)"),
    "angelic-total-correctness": (_side_atc, "b <= awp(p)(c)"),
    "partial-incorrectness": (_side_pinc, "awp(p)(c) <= b"),
    "topbpc-toppc": (_side_tpc, "c <= aslp(p)(b)"),
    "bpctop-bptop": (_side_bpt, "b <= awlp(p)(c)"),
}


def transformer_side(label: str, r: Relation, b: Predicate, c: Predicate) -> bool:
    try:
        fn, _ = _TRANSFORMER_SIDES[label]
    except KeyError:
        raise SemanticError(f"unknown encoding label {label!r}") from None
    return fn(r, b, c)


@dataclass(frozen=True)
class CorrespondenceReport:
    label: str
    equation: str
    equation_holds: bool
    transformer: str
    transformer_holds: bool
    agree: bool
    model: dict | None  # populated only on disagreement

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "equation": self.equation,
            "equation-holds": self.equation_holds,
            "transformer": self.transformer,
            "transformer-holds": self.transformer_holds,
            "agree": self.agree,
            "model": self.model,
        }


def correspondence(
    label: str, i: Interpretation, b: str = "b", p: str = "p", c: str = "c"
) -> CorrespondenceReport:
    """Check one encoding against its transformer characterisation."""
    eq = encode(label, b, p, c)
    rel = _lookup(i.progs, p, "program")
    pre = _lookup(i.tests, b, "test")
    post = _lookup(i.tests, c, "test")
    fn, text = _TRANSFORMER_SIDES.get(label, (None, None))
    if fn is None:
        raise SemanticError(f"unknown encoding label {label!r}")
    eq_holds = equation_holds(eq, i)
    tr_holds = fn(rel, pre, post)
    agree = eq_holds == tr_holds
    model = None
    if not agree:
        model = {
            "relation": sorted(rel.pairs()),
            "b": pre.states(),
            "c": post.states(),
        }
    return CorrespondenceReport(
        label, eq.text, eq_holds, text, tr_holds, agree, model
    )
