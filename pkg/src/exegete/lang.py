"""A small guarded-command language denoted into finite relations.

Programs:

    prog := seq ("[]" seq)*
    seq  := post (";" post)*
    post := atom "*"*
    atom := "skip" | "diverge" | IDENT ":=" expr | "assume" "(" bexpr ")"
          | "if" bexpr "then" prog "else" prog "fi"
          | "while" bexpr "do" prog "od"
          | "(" prog ")" | "@" NAME

Boolean expressions use not/and/or with not binding tightest, the
comparisons =, !=, <, <=, >, >= and the literals true/false.
Arithmetic is + - * over integers with unary minus; symbolic domain
values compare by their declared order. "[]" is nondeterministic
choice and a postfix "*" iterates any number of times (including
zero), so loops and choice are angelic/demonic-neutral at this level;
the transformers decide how to read them.

Divergence is the absence of output pairs: diverge denotes the empty
relation and a while loop that never exits simply relates its start
state to nothing. Assignments whose value leaves the variable's
domain are hard errors, but only on states the program can actually
reach; guard a risky assignment with if/assume and the dead branch
does not count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .errors import ParseError, SemanticError
from .relalg import Predicate, Relation, StateSpace, Value, test

# --- abstract syntax ---

Pos = Union[tuple[int, int], None]


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Name:
    """A variable or a symbolic domain value; resolved at evaluation."""

    ident: str
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Arith:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[IntLit, Name, Neg, Arith]


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str
    left: Expr
    right: Expr
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Not:
    arg: "BExpr"


@dataclass(frozen=True)
class And:
    left: "BExpr"
    right: "BExpr"


@dataclass(frozen=True)
class Or:
    left: "BExpr"
    right: "BExpr"


BExpr = Union[BoolLit, Cmp, Not, And, Or]


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Diverge:
    pass


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Assume:
    cond: BExpr


@dataclass(frozen=True)
class Seq:
    first: "Program"
    second: "Program"


@dataclass(frozen=True)
class Choice:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Star:
    body: "Program"


@dataclass(frozen=True)
class If:
    guard: BExpr
    then_branch: "Program"
    else_branch: "Program"


@dataclass(frozen=True)
class While:
    guard: BExpr
    body: "Program"


@dataclass(frozen=True)
class Ref:
    name: str
    pos: Pos = field(default=None, compare=False)


Program = Union[Skip, Diverge, Assign, Assume, Seq, Choice, Star, If, While, Ref]

KEYWORDS = frozenset(
    [
        "skip",
        "diverge",
        "assume",
        "if",
        "then",
        "else",
        "fi",
        "while",
        "do",
        "od",
        "true",
        "false",
        "and",
        "or",
        "not",
    ]
)

# --- lexer ---

# longest symbols first so ":=" wins over ":" and "<=" over "<"
_SYMBOLS = (":=", "[]", "!=", "<=", ">=", ";", "*", "(", ")", "+", "-", "=", "<", ">")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", "ref", "sym", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str, first_line: int = 1) -> list[Token]:
    tokens = []
    line = first_line
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
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "@":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_-"):
                j += 1
            if j == i + 1:
                raise ParseError("'@' must be followed by a name", line, column)
            tokens.append(Token("ref", text[i + 1 : j], line, column))
            column += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, column))
            column += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], line, column))
            column += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("sym", sym, line, column))
                column += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, column)
    tokens.append(Token("eof", "", line, column))
    return tokens


class _Parser:
    def __init__(self, tokens: Sequence[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_sym(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text == text

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text == word

    def expect_sym(self, text: str) -> Token:
        if not self.at_sym(text):
            tok = self.peek()
            raise ParseError(
                f"expected {text!r}, found {tok.text or 'end of input'!r}",
                tok.line,
                tok.column,
            )
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            tok = self.peek()
            raise ParseError(
                f"expected {word!r}, found {tok.text or 'end of input'!r}",
                tok.line,
                tok.column,
            )
        return self.advance()

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(
                f"unexpected trailing input at {tok.text!r}", tok.line, tok.column
            )

    # programs

    def program(self) -> Program:
        node = self.seq()
        while self.at_sym("[]"):
            self.advance()
            node = Choice(node, self.seq())
        return node

    def seq(self) -> Program:
        node = self.post()
        while self.at_sym(";"):
            self.advance()
            node = Seq(node, self.post())
        return node

    def post(self) -> Program:
        node = self.atom()
        while self.at_sym("*"):
            self.advance()
            node = Star(node)
        return node

    def atom(self) -> Program:
        tok = self.peek()
        if self.at_keyword("skip"):
            self.advance()
            return Skip()
        if self.at_keyword("diverge"):
            self.advance()
            return Diverge()
        if self.at_keyword("assume"):
            self.advance()
            self.expect_sym("(")
            cond = self.bexpr()
            self.expect_sym(")")
            return Assume(cond)
        if self.at_keyword("if"):
            self.advance()
            guard = self.bexpr()
            self.expect_keyword("then")
            then_branch = self.program()
            self.expect_keyword("else")
            else_branch = self.program()
            self.expect_keyword("fi")
            return If(guard, then_branch, else_branch)
        if self.at_keyword("while"):
            self.advance()
            guard = self.bexpr()
            self.expect_keyword("do")
            body = self.program()
            self.expect_keyword("od")
            return While(guard, body)
        if self.at_sym("("):
            self.advance()
            node = self.program()
            self.expect_sym(")")
            return node
        if tok.kind == "ref":
            self.advance()
            return Ref(tok.text, (tok.line, tok.column))
        if tok.kind == "ident":
            if tok.text in KEYWORDS:
                raise ParseError(
                    f"unexpected keyword {tok.text!r}", tok.line, tok.column
                )
            self.advance()
            self.expect_sym(":=")
            return Assign(tok.text, self.expr(), (tok.line, tok.column))
        raise ParseError(
            f"expected a statement, found {tok.text or 'end of input'!r}",
            tok.line,
            tok.column,
        )

    # boolean expressions

    def bexpr(self) -> BExpr:
        node = self.band()
        while self.at_keyword("or"):
            self.advance()
            node = Or(node, self.band())
        return node

    def band(self) -> BExpr:
        node = self.bnot()
        while self.at_keyword("and"):
            self.advance()
            node = And(node, self.bnot())
        return node

    def bnot(self) -> BExpr:
        if self.at_keyword("not"):
            self.advance()
            return Not(self.bnot())
        return self.bprim()

    def bprim(self) -> BExpr:
        tok = self.peek()
        if self.at_keyword("true"):
            self.advance()
            return BoolLit(True)
        if self.at_keyword("false"):
            self.advance()
            return BoolLit(False)
        if self.at_sym("("):
            # either a parenthesized bexpr or a comparison whose left
            # operand is parenthesized arithmetic; try the comparison
            # first and fall back
            saved = self.pos
            try:
                return self.cmp()
            except ParseError:
                self.pos = saved
            self.advance()
            node = self.bexpr()
            self.expect_sym(")")
            return node
        return self.cmp()

    def cmp(self) -> BExpr:
        left = self.expr()
        tok = self.peek()
        if tok.kind != "sym" or tok.text not in ("=", "!=", "<", "<=", ">", ">="):
            raise ParseError(
                f"expected a comparison operator, found {tok.text or 'end of input'!r}",
                tok.line,
                tok.column,
            )
        self.advance()
        right = self.expr()
        return Cmp(tok.text, left, right, (tok.line, tok.column))

    # arithmetic expressions

    def expr(self) -> Expr:
        node = self.aterm()
        while self.peek().kind == "sym" and self.peek().text in ("+", "-"):
            op = self.advance().text
            node = Arith(op, node, self.aterm())
        return node

    def aterm(self) -> Expr:
        node = self.afactor()
        while self.at_sym("*"):
            self.advance()
            node = Arith("*", node, self.afactor())
        return node

    def afactor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text))
        if self.at_sym("-"):
            self.advance()
            return Neg(self.afactor())
        if self.at_sym("("):
            self.advance()
            node = self.expr()
            self.expect_sym(")")
            return node
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            return Name(tok.text, (tok.line, tok.column))
        raise ParseError(
            f"expected an expression, found {tok.text or 'end of input'!r}",
            tok.line,
            tok.column,
        )


def parse_program(text: str, first_line: int = 1) -> Program:
    parser = _Parser(tokenize(text, first_line))
    node = parser.program()
    parser.expect_eof()
    return node


def parse_bexpr(text: str, first_line: int = 1) -> BExpr:
    parser = _Parser(tokenize(text, first_line))
    node = parser.bexpr()
    parser.expect_eof()
    return node


# --- pretty printing, used by error messages and reports ---


def expr_text(e: Expr) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, Neg):
        return f"-{_expr_factor_text(e.arg)}"
    if isinstance(e, Arith):
        if e.op == "*":
            return f"{_expr_factor_text(e.left)} * {_expr_factor_text(e.right)}"
        return f"{expr_text(e.left)} {e.op} {_expr_term_text(e.right)}"
    raise TypeError(f"not an expression: {e!r}")


def _expr_term_text(e: Expr) -> str:
    if isinstance(e, Arith) and e.op in ("+", "-"):
        return f"({expr_text(e)})"
    return expr_text(e)


def _expr_factor_text(e: Expr) -> str:
    if isinstance(e, Arith):
        return f"({expr_text(e)})"
    return expr_text(e)


def bexpr_text(b: BExpr) -> str:
    if isinstance(b, BoolLit):
        return "true" if b.value else "false"
    if isinstance(b, Cmp):
        return f"{expr_text(b.left)} {b.op} {expr_text(b.right)}"
    if isinstance(b, Not):
        return f"not {_bexpr_atom_text(b.arg)}"
    if isinstance(b, And):
        return f"{_bexpr_and_text(b.left)} and {_bexpr_and_text(b.right)}"
    if isinstance(b, Or):
        return f"{bexpr_text(b.left)} or {bexpr_text(b.right)}"
    raise TypeError(f"not a boolean expression: {b!r}")


def _bexpr_and_text(b: BExpr) -> str:
    if isinstance(b, Or):
        return f"({bexpr_text(b)})"
    return bexpr_text(b)


def _bexpr_atom_text(b: BExpr) -> str:
    if isinstance(b, (And, Or, Cmp)):
        return f"({bexpr_text(b)})"
    return bexpr_text(b)


def program_text(p: Program) -> str:
    if isinstance(p, Skip):
        return "skip"
    if isinstance(p, Diverge):
        return "diverge"
    if isinstance(p, Assign):
        return f"{p.var} := {expr_text(p.expr)}"
    if isinstance(p, Assume):
        return f"assume({bexpr_text(p.cond)})"
    if isinstance(p, Seq):
        return f"{_seq_part(p.first)}; {_seq_part(p.second)}"
    if isinstance(p, Choice):
        return f"{program_text(p.left)} [] {program_text(p.right)}"
    if isinstance(p, Star):
        return f"({program_text(p.body)})*"
    if isinstance(p, If):
        return (
            f"if {bexpr_text(p.guard)} then {program_text(p.then_branch)} "
            f"else {program_text(p.else_branch)} fi"
        )
    if isinstance(p, While):
        return f"while {bexpr_text(p.guard)} do {program_text(p.body)} od"
    if isinstance(p, Ref):
        return f"@{p.name}"
    raise TypeError(f"not a program: {p!r}")


def _seq_part(p: Program) -> str:
    if isinstance(p, Choice):
        return f"({program_text(p)})"
    return program_text(p)


# --- evaluation ---


def _pos_suffix(pos: Pos) -> str:
    if pos is None:
        return ""
    return f" (line {pos[0]}, column {pos[1]})"


def _domain_symbols(space: StateSpace) -> frozenset[str]:
    symbols = set()
    for _, dom in space.variables:
        for value in dom:
            if isinstance(value, str):
                symbols.add(value)
    return frozenset(symbols)


def eval_expr(e: Expr, space: StateSpace, state: int) -> Value:
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, Name):
        if space.has_variable(e.ident):
            return space.value_at(state, e.ident)
        if e.ident in _domain_symbols(space):
            return e.ident
        raise SemanticError(
            f"unknown identifier {e.ident!r}: neither a variable nor a "
            f"domain value{_pos_suffix(e.pos)}"
        )
    if isinstance(e, Neg):
        value = eval_expr(e.arg, space, state)
        if not isinstance(value, int):
            raise SemanticError(f"cannot negate the symbol {value!r}")
        return -value
    if isinstance(e, Arith):
        left = eval_expr(e.left, space, state)
        right = eval_expr(e.right, space, state)
        if not (isinstance(left, int) and isinstance(right, int)):
            raise SemanticError(
                f"arithmetic needs integers, got {left!r} {e.op} {right!r}"
            )
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        return left * right
    raise TypeError(f"not an expression: {e!r}")


def _cmp_positions(c: Cmp, space: StateSpace, left: Value, right: Value) -> tuple[int, int]:
    """Map both operands of an order comparison to comparable ranks."""
    if isinstance(left, int) and isinstance(right, int):
        return left, right
    if isinstance(left, int) or isinstance(right, int):
        raise SemanticError(
            f"cannot order {left!r} against {right!r}{_pos_suffix(c.pos)}"
        )
    domains = []
    for side in (c.left, c.right):
        if isinstance(side, Name) and space.has_variable(side.ident):
            domains.append(space.domain_of(side.ident))
    if not domains:
        raise SemanticError(
            "an order comparison between symbols needs a variable operand"
            f"{_pos_suffix(c.pos)}"
        )
    if len(domains) == 2 and domains[0] != domains[1]:
        raise SemanticError(
            f"variables compared by order have different domains{_pos_suffix(c.pos)}"
        )
    dom = domains[0]
    for value in (left, right):
        if value not in dom:
            raise SemanticError(
                f"{value!r} is not in the compared domain{_pos_suffix(c.pos)}"
            )
    return dom.index(left), dom.index(right)


def _eval_cmp(c: Cmp, space: StateSpace, state: int) -> bool:
    left = eval_expr(c.left, space, state)
    right = eval_expr(c.right, space, state)
    if c.op in ("=", "!="):
        if isinstance(left, int) != isinstance(right, int):
            raise SemanticError(
                f"cannot compare {left!r} with {right!r}{_pos_suffix(c.pos)}"
            )
        return (left == right) if c.op == "=" else (left != right)
    lrank, rrank = _cmp_positions(c, space, left, right)
    if c.op == "<":
        return lrank < rrank
    if c.op == "<=":
        return lrank <= rrank
    if c.op == ">":
        return lrank > rrank
    return lrank >= rrank


def eval_bexpr(b: BExpr, space: StateSpace, state: int) -> bool:
    if isinstance(b, BoolLit):
        return b.value
    if isinstance(b, Cmp):
        return _eval_cmp(b, space, state)
    if isinstance(b, Not):
        return not eval_bexpr(b.arg, space, state)
    if isinstance(b, And):
        return eval_bexpr(b.left, space, state) and eval_bexpr(b.right, space, state)
    if isinstance(b, Or):
        return eval_bexpr(b.left, space, state) or eval_bexpr(b.right, space, state)
    raise TypeError(f"not a boolean expression: {b!r}")


def eval_pred(b: BExpr, space: StateSpace) -> Predicate:
    """The set of states satisfying a boolean expression."""
    bits = 0
    for state in range(space.size):
        if eval_bexpr(b, space, state):
            bits |= 1 << state
    return Predicate(space, bits)


# --- reference resolution ---


def resolve_refs(p: Program, defs: Mapping[str, Program]) -> Program:
    """Substitute @name references; cycles and unknown names are errors."""
    return _substitute(p, defs, ())


def _substitute(
    p: Program, defs: Mapping[str, Program], stack: tuple[str, ...]
) -> Program:
    if isinstance(p, Ref):
        if p.name in stack:
            chain = " -> ".join(stack + (p.name,))
            raise SemanticError(f"cyclic program reference: {chain}")
        if p.name not in defs:
            raise SemanticError(
                f"unknown program reference @{p.name}{_pos_suffix(p.pos)}"
            )
        return _substitute(defs[p.name], defs, stack + (p.name,))
    if isinstance(p, Seq):
        return Seq(_substitute(p.first, defs, stack), _substitute(p.second, defs, stack))
    if isinstance(p, Choice):
        return Choice(_substitute(p.left, defs, stack), _substitute(p.right, defs, stack))
    if isinstance(p, Star):
        return Star(_substitute(p.body, defs, stack))
    if isinstance(p, If):
        return If(
            p.guard,
            _substitute(p.then_branch, defs, stack),
            _substitute(p.else_branch, defs, stack),
        )
    if isinstance(p, While):
        return While(p.guard, _substitute(p.body, defs, stack))
    return p


# --- denotation ---


def denote(p: Program, space: StateSpace) -> Relation:
    """The input-output relation of a program, exactly.

    Evaluation threads the set of reachable input states through the
    syntax, so an out-of-domain assignment only errors if some
    reachable state actually triggers it. References must have been
    resolved first.
    """
    return _denote(p, space, Predicate.full(space))


def _denote(p: Program, space: StateSpace, live: Predicate) -> Relation:
    if isinstance(p, Skip):
        return test(live)
    if isinstance(p, Diverge):
        return Relation.empty(space)
    if isinstance(p, Assume):
        return test(live & eval_pred(p.cond, space))
    if isinstance(p, Assign):
        rows = [0] * space.size
        for state in live.states():
            value = eval_expr(p.expr, space, state)
            try:
                target = space.with_value(state, p.var, value)
            except KeyError:
                raise SemanticError(
                    f"assignment to unknown variable {p.var!r}{_pos_suffix(p.pos)}"
                ) from None
            except ValueError:
                raise SemanticError(
                    f"assignment {p.var} := {expr_text(p.expr)} leaves the "
                    f"domain: value {value!r} at state "
                    f"[{space.format_state(state)}]{_pos_suffix(p.pos)}"
                ) from None
            rows[state] = 1 << target
        return Relation(space, rows)
    if isinstance(p, Seq):
        first = _denote(p.first, space, live)
        second = _denote(p.second, space, first.codomain())
        return first.compose(second)
    if isinstance(p, Choice):
        return _denote(p.left, space, live).union(_denote(p.right, space, live))
    if isinstance(p, Star):
        reach = live
        while True:
            body = _denote(p.body, space, reach)
            grown = reach | body.codomain()
            if grown == reach:
                break
            reach = grown
        return test(live).compose(body.star())
    if isinstance(p, If):
        guard = eval_pred(p.guard, space)
        then_rel = _denote(p.then_branch, space, live & guard)
        else_rel = _denote(p.else_branch, space, live & ~guard)
        return test(guard).compose(then_rel).union(test(~guard).compose(else_rel))
    if isinstance(p, While):
        guard = eval_pred(p.guard, space)
        reach = live & guard
        while True:
            body = _denote(p.body, space, reach)
            grown = reach | (body.codomain() & guard)
            if grown == reach:
                break
            reach = grown
        looped = test(guard).compose(body).star()
        return test(live).compose(looped).compose(test(~guard))
    if isinstance(p, Ref):
        raise SemanticError(
            f"unresolved program reference @{p.name}: substitute references "
            f"before denoting{_pos_suffix(p.pos)}"
        )
    raise TypeError(f"not a program: {p!r}")
