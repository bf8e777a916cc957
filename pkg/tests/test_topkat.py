"""Relational TopKAT terms, the six encodings, and their transformer twins."""

import pytest

from exegete import topkat
from exegete.errors import ParseError, SemanticError
from exegete.relalg import Predicate, Relation, top

from conftest import model_from_codes, random_models, space_of_size


def small_interp():
    space = space_of_size(2)
    b = Predicate.from_states(space, [0])
    c = Predicate.from_states(space, [1])
    p = Relation.from_pairs(space, [(0, 0), (0, 1)])
    return topkat.Interpretation(space, {"p": p}, {"b": b, "c": c})


class TestParsing:
    TESTS = frozenset(["b", "c"])
    PROGS = frozenset(["p", "q"])

    def parse(self, text):
        return topkat.parse_term(text, self.TESTS, self.PROGS)

    def test_precedence(self):
        t = self.parse("b ; p + c ; q*")
        assert isinstance(t, topkat.Plus)
        assert isinstance(t.left, topkat.Dot)
        assert isinstance(t.right.right, topkat.Star)

    def test_constants(self):
        assert self.parse("0") == topkat.Zero()
        assert self.parse("1") == topkat.One()
        assert self.parse("top") == topkat.Top()

    def test_negated_test(self):
        assert self.parse("!b") == topkat.NegTest("b")

    def test_negation_needs_test(self):
        with pytest.raises(ParseError):
            self.parse("!p")

    def test_unknown_symbol(self):
        with pytest.raises(ParseError) as err:
            self.parse("b ; r")
        assert "unknown symbol" in str(err.value)

    def test_ambiguous_symbol(self):
        with pytest.raises(ParseError) as err:
            topkat.parse_term("x", frozenset(["x"]), frozenset(["x"]))
        assert "both" in str(err.value)

    def test_parens(self):
        t = self.parse("(b + c) ; p")
        assert isinstance(t, topkat.Dot)
        assert isinstance(t.left, topkat.Plus)

    def test_star_of_dot_needs_parens(self):
        t = self.parse("(b ; p)*")
        assert isinstance(t, topkat.Star)
        assert isinstance(t.body, topkat.Dot)

    @pytest.mark.parametrize(
        "source",
        ["b ; p ; c", "top ; b ; p", "(b + !c) ; p*", "0 + 1 ; p", "!b ; (p + q)*"],
    )
    def test_text_roundtrip(self, source):
        t = self.parse(source)
        assert self.parse(topkat.term_text(t)) == t


class TestEvaluation:
    def test_filter_composition(self):
        # test(b) ; p ; test(c) keeps exactly the b-to-c transitions
        i = small_interp()
        t = topkat.parse_term("b ; p ; c", ["b", "c"], ["p"])
        assert list(topkat.eval_term(t, i).pairs()) == [(0, 1)]

    def test_constants(self):
        i = small_interp()
        assert topkat.eval_term(topkat.Top(), i) == top(i.space)
        assert list(topkat.eval_term(topkat.Zero(), i).pairs()) == []
        assert list(topkat.eval_term(topkat.One(), i).pairs()) == [(0, 0), (1, 1)]

    def test_negated_test(self):
        i = small_interp()
        t = topkat.parse_term("!b", ["b", "c"], ["p"])
        assert list(topkat.eval_term(t, i).pairs()) == [(1, 1)]

    def test_plus_is_union(self):
        i = small_interp()
        t = topkat.parse_term("b + !b", ["b", "c"], ["p"])
        assert topkat.eval_term(t, i) == topkat.eval_term(topkat.One(), i)

    def test_star(self):
        i = small_interp()
        t = topkat.parse_term("p*", ["b", "c"], ["p"])
        assert list(topkat.eval_term(t, i).pairs()) == [(0, 0), (0, 1), (1, 1)]

    def test_unmapped_symbol(self):
        i = small_interp()
        with pytest.raises(SemanticError):
            topkat.eval_term(topkat.Prog("q"), i)

    def test_eval_alias(self):
        assert topkat.eval is topkat.eval_term

    def test_interpretation_rejects_overlap(self):
        space = space_of_size(2)
        p = Relation.identity(space)
        b = Predicate.full(space)
        with pytest.raises(SemanticError):
            topkat.Interpretation(space, {"x": p}, {"x": b})


class TestEncodings:
    EXPECTED_TEXTS = {
        "partial-correctness": "top ; b ; p ; c = top ; b ; p",
        "incorrectness": "top ; b ; p ; c = top ; c",
        "angelic-total-correctness": "b ; p ; c ; top = b ; top",
        "partial-incorrectness": "b ; p ; c ; top = p ; c ; top",
        "topbpc-toppc": "top ; b ; p ; c = top ; p ; c",
        "bpctop-bptop": "b ; p ; c ; top = b ; p ; top",
    }

    def test_labels(self):
        assert topkat.ENCODING_LABELS == tuple(self.EXPECTED_TEXTS)

    @pytest.mark.parametrize("label", list(EXPECTED_TEXTS))
    def test_equation_text(self, label):
        assert topkat.encode(label).text == self.EXPECTED_TEXTS[label]

    def test_unknown_label(self):
        with pytest.raises(SemanticError):
            topkat.encode("total-correctness")

    def test_custom_symbols(self):
        eq = topkat.encode("partial-correctness", b="pre", p="prog", c="post")
        assert eq.text == "top ; pre ; prog ; post = top ; pre ; prog"


class TestCorrespondence:
    """Equation route and transformer route, computed independently."""

    @pytest.mark.parametrize("label", topkat.ENCODING_LABELS)
    def test_exhaustive_two_states(self, label):
        eq = topkat.encode(label)
        for rel in range(16):
            for b_bits in range(4):
                for c_bits in range(4):
                    space, r, b, c = model_from_codes(2, rel, b_bits, c_bits)
                    i = topkat.Interpretation(space, {"p": r}, {"b": b, "c": c})
                    assert topkat.equation_holds(eq, i) == topkat.transformer_side(
                        label, r, b, c
                    )

    @pytest.mark.parametrize("label", topkat.ENCODING_LABELS)
    def test_sampled_four_states(self, label):
        eq = topkat.encode(label)
        for rel, b_bits, c_bits in random_models(4, 150, seed=11):
            space, r, b, c = model_from_codes(4, rel, b_bits, c_bits)
            i = topkat.Interpretation(space, {"p": r}, {"b": b, "c": c})
            assert topkat.equation_holds(eq, i) == topkat.transformer_side(
                label, r, b, c
            )

    def test_report_structure(self):
        i = small_interp()
        report = topkat.correspondence("partial-correctness", i)
        assert report.label == "partial-correctness"
        assert report.agree
        d = report.to_dict()
        assert d["equation-holds"] == report.equation_holds
        assert d["transformer-holds"] == report.transformer_holds
        assert d["agree"]

    def test_report_on_concrete_model(self):
        # p maps 0 to both 0 and 1 but c only holds 1: asp(b) not below c
        i = small_interp()
        report = topkat.correspondence("partial-correctness", i)
        assert not report.equation_holds
        assert not report.transformer_holds
        assert report.agree
