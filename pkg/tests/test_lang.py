"""Parsing, printing, and exact denotation of the guarded-command language."""

import pytest

from exegete import lang
from exegete.errors import ParseError, SemanticError
from exegete.relalg import Predicate, Relation, StateSpace

from conftest import space_of_size


def counter_space() -> StateSpace:
    return StateSpace((("x", (0, 1, 2)),))


def letter_space() -> StateSpace:
    return StateSpace((("y", ("a", "b", "c")),))


def denote(text: str, space: StateSpace) -> Relation:
    return lang.denote(lang.parse_program(text), space)


class TestTokenizer:
    def test_positions(self):
        tokens = lang.tokenize("x :=\n 1")
        kinds = [(t.kind, t.text, t.line, t.column) for t in tokens]
        assert kinds[0] == ("ident", "x", 1, 1)
        assert kinds[1] == ("sym", ":=", 1, 3)
        assert kinds[2] == ("int", "1", 2, 2)
        assert tokens[-1].kind == "eof"

    def test_comments_ignored(self):
        tokens = lang.tokenize("skip # the rest\nskip")
        assert [t.text for t in tokens if t.kind != "eof"] == ["skip", "skip"]

    def test_first_line_offset(self):
        tokens = lang.tokenize("skip", first_line=40)
        assert tokens[0].line == 40

    def test_bad_character(self):
        with pytest.raises(ParseError) as err:
            lang.tokenize("x := $")
        assert "line 1, column 6" in str(err.value)

    def test_ref_token(self):
        tokens = lang.tokenize("@clean-up")
        assert tokens[0].kind == "ref"
        assert tokens[0].text == "clean-up"


class TestParser:
    def test_precedence_choice_weakest(self):
        # a ; b [] c parses as (a ; b) [] c
        p = lang.parse_program("skip ; diverge [] skip")
        assert isinstance(p, lang.Choice)
        assert isinstance(p.left, lang.Seq)

    def test_star_binds_tightest(self):
        p = lang.parse_program("skip ; (diverge)*")
        assert isinstance(p, lang.Seq)
        assert isinstance(p.second, lang.Star)

    def test_if_while_assume(self):
        p = lang.parse_program(
            "if x < 1 then x := x + 1 else skip fi ; while x < 2 do x := 2 od"
        )
        assert isinstance(p, lang.Seq)
        assert isinstance(p.first, lang.If)
        assert isinstance(p.second, lang.While)
        q = lang.parse_program("assume(x = 1 and true)")
        assert isinstance(q, lang.Assume)

    def test_keyword_cannot_be_variable(self):
        with pytest.raises(ParseError):
            lang.parse_program("while := 1")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError) as err:
            lang.parse_program("skip skip")
        assert "line 1" in str(err.value)

    def test_missing_fi(self):
        with pytest.raises(ParseError):
            lang.parse_program("if x = 1 then skip else skip")

    def test_bexpr_precedence(self):
        # not binds tighter than and, and tighter than or
        b = lang.parse_bexpr("not x = 1 and x = 2 or true")
        assert isinstance(b, lang.Or)
        assert isinstance(b.left, lang.And)
        assert isinstance(b.left.left, lang.Not)

    def test_parenthesized_bexpr_backtracking(self):
        b = lang.parse_bexpr("(x = 1 or x = 2) and (x + 1) = 2")
        assert isinstance(b, lang.And)

    def test_arith_precedence(self):
        e = lang.parse_bexpr("x + 2 * 3 = 7")
        assert isinstance(e, lang.Cmp)
        assert lang.expr_text(e.left) == "x + 2 * 3"

    def test_unary_minus(self):
        b = lang.parse_bexpr("-x + 1 = -2")
        assert lang.bexpr_text(b) == "-x + 1 = -2"


class TestPrinting:
    ROUND_TRIPS = [
        "skip",
        "diverge",
        "x := x + 1",
        "assume(x = 1 or not x < 2)",
        "skip; x := 1",
        "skip [] diverge",
        "(skip [] diverge); skip",
        "(x := 1)*",
        "if x = 1 then skip else diverge fi",
        "while x < 2 do x := x + 1 od",
        "@helper; skip",
    ]

    @pytest.mark.parametrize("source", ROUND_TRIPS)
    def test_print_parse_roundtrip(self, source):
        ast = lang.parse_program(source)
        assert lang.parse_program(lang.program_text(ast)) == ast

    def test_star_body_parenthesized(self):
        ast = lang.parse_program("(skip ; x := 1)*")
        assert lang.program_text(ast) == "(skip; x := 1)*"


class TestEvaluation:
    def test_arith_and_compare(self):
        space = counter_space()
        pred = lang.eval_pred(lang.parse_bexpr("x * x = x + x"), space)
        assert pred.states() == [0, 2]

    def test_symbol_order_comparison(self):
        space = letter_space()
        pred = lang.eval_pred(lang.parse_bexpr("y < c"), space)
        # declared order a < b < c
        assert pred.states() == [0, 1]

    def test_symbol_equality(self):
        space = letter_space()
        pred = lang.eval_pred(lang.parse_bexpr("not y = b"), space)
        assert pred.states() == [0, 2]

    def test_int_symbol_mismatch(self):
        with pytest.raises(SemanticError):
            lang.eval_pred(lang.parse_bexpr("y = 1"), letter_space())

    def test_order_comparison_needs_variable(self):
        with pytest.raises(SemanticError):
            lang.eval_pred(lang.parse_bexpr("a < b"), letter_space())

    def test_unknown_name(self):
        with pytest.raises(SemanticError) as err:
            lang.eval_pred(lang.parse_bexpr("z = 1"), counter_space())
        assert "z" in str(err.value)

    def test_cross_variable_comparison(self):
        space = StateSpace((("x", (0, 1)), ("y", (0, 1))))
        pred = lang.eval_pred(lang.parse_bexpr("x = y"), space)
        assert pred.states() == [0, 3]


class TestDenotation:
    def test_skip_identity(self):
        space = counter_space()
        assert denote("skip", space) == Relation.identity(space)

    def test_diverge_empty(self):
        space = counter_space()
        assert denote("diverge", space) == Relation.empty(space)

    def test_assume_filters(self):
        space = counter_space()
        assert list(denote("assume(x < 2)", space).pairs()) == [(0, 0), (1, 1)]

    def test_assignment(self):
        space = counter_space()
        assert list(denote("x := 2", space).pairs()) == [(0, 2), (1, 2), (2, 2)]

    def test_choice_of_constants_is_top(self):
        space = StateSpace((("x", (0, 1)),))
        assert denote("x := 0 [] x := 1", space) == Relation.top(space)

    def test_while_counter(self):
        # the loop runs x up to 2 from any start
        space = counter_space()
        r = denote("while x < 2 do x := x + 1 od", space)
        assert list(r.pairs()) == [(0, 2), (1, 2), (2, 2)]

    def test_if_guarded_increment(self):
        space = StateSpace((("x", (0, 1)),))
        r = denote("if x < 1 then x := x + 1 else skip fi", space)
        assert list(r.pairs()) == [(0, 1), (1, 1)]

    def test_star_guarded(self):
        space = counter_space()
        r = denote("(assume(x < 2); x := x + 1)*", space)
        assert list(r.pairs()) == [
            (0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2),
        ]

    def test_unguarded_increment_errors(self):
        space = counter_space()
        with pytest.raises(SemanticError) as err:
            denote("x := x + 1", space)
        assert "x=2" in str(err.value)

    def test_liveness_through_seq(self):
        # the second increment is safe because only x=0 survives assume
        space = counter_space()
        r = denote("assume(x = 0); x := x + 1; x := x + 1", space)
        assert list(r.pairs()) == [(0, 2)]

    def test_liveness_through_while_guard(self):
        # x := x + 1 would overflow at x=2, but the guard kills that state
        space = counter_space()
        r = denote("while x < 2 do x := x + 1 od", space)
        assert (2, 2) in r.pairs()

    def test_dead_branch_not_denoted(self):
        space = StateSpace((("x", (0, 1)),))
        r = denote("if x = 0 then x := x + 1 else skip fi", space)
        assert list(r.pairs()) == [(0, 1), (1, 1)]

    def test_symbolic_assignment(self):
        space = letter_space()
        r = denote("y := b", space)
        assert all(space.value_at(t, "y") == "b" for _, t in r.pairs())

    def test_assignment_to_unknown_variable(self):
        with pytest.raises(SemanticError):
            denote("z := 1", counter_space())

    def test_while_never_exits(self):
        space = StateSpace((("x", (0, 1)),))
        r = denote("while true do skip od", space)
        assert r == Relation.empty(space)


class TestReferences:
    def test_substitution(self):
        defs = {
            "bump": lang.parse_program("x := x + 1"),
            "main": lang.parse_program("assume(x = 0); @bump"),
        }
        resolved = lang.resolve_refs(defs["main"], defs)
        space = counter_space()
        assert list(lang.denote(resolved, space).pairs()) == [(0, 1)]

    def test_nested_substitution(self):
        defs = {
            "a": lang.parse_program("@b; skip"),
            "b": lang.parse_program("skip"),
        }
        resolved = lang.resolve_refs(defs["a"], defs)
        assert lang.denote(resolved, counter_space()) == Relation.identity(
            counter_space()
        )

    def test_cycle_detected(self):
        defs = {
            "a": lang.parse_program("@b"),
            "b": lang.parse_program("@a"),
        }
        with pytest.raises(SemanticError) as err:
            lang.resolve_refs(defs["a"], defs)
        assert "cyclic program reference: b -> a -> b" in str(err.value)

    def test_self_cycle(self):
        defs = {"a": lang.parse_program("@a")}
        with pytest.raises(SemanticError) as err:
            lang.resolve_refs(defs["a"], defs)
        assert "a -> a" in str(err.value)

    def test_unknown_reference(self):
        with pytest.raises(SemanticError) as err:
            lang.resolve_refs(lang.parse_program("@ghost"), {})
        assert "@ghost" in str(err.value)

    def test_unresolved_ref_cannot_denote(self):
        with pytest.raises(SemanticError) as err:
            lang.denote(lang.parse_program("@ghost"), counter_space())
        assert "unresolved" in str(err.value)
