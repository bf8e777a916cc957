"""The eight predicate transformers and the laws relating them."""

import pytest

from exegete import transformers as tf
from exegete.errors import SpaceMismatch
from exegete.relalg import Predicate, Relation

from conftest import model_from_codes, random_models, space_of_size


def all_models(n):
    full = (1 << n) - 1
    for rel in range(1 << (n * n)):
        for bits in range(full + 1):
            yield model_from_codes(n, rel, bits, bits)[:3]


class TestOracles:
    """Hand-computed values on fixed models."""

    def test_awp_dwlp_dwp(self):
        space = space_of_size(2)
        r = Relation.from_pairs(space, [(0, 0), (0, 1)])
        c = Predicate.from_states(space, [1])
        # 0 may reach 1; 1 reaches nothing so dwlp holds vacuously
        assert tf.awp(r, c).states() == [0]
        assert tf.dwlp(r, c).states() == [1]
        assert tf.dwp(r, c).states() == []

    def test_asp(self):
        space = space_of_size(2)
        r = Relation.from_pairs(space, [(0, 1)])
        b = Predicate.from_states(space, [0])
        assert tf.asp(r, b).states() == [1]

    def test_dslp(self):
        space = space_of_size(2)
        r = Relation.from_pairs(space, [(0, 1), (1, 1)])
        b = Predicate.from_states(space, [0])
        # 0 has no predecessors at all, 1 has one outside b
        assert tf.dslp(r, b).states() == [0]

    def test_awlp_aslp_dsp(self):
        space = space_of_size(2)
        r = Relation.from_pairs(space, [(0, 0), (0, 1)])
        c = Predicate.from_states(space, [1])
        b = Predicate.from_states(space, [0])
        # awlp adds the successor-free state 1
        assert tf.awlp(r, c).states() == [0, 1]
        # asp(b) = {0,1}; everything is reachable so aslp adds nothing
        assert tf.aslp(r, b).states() == [0, 1]
        # dslp(b) = {0,1} (every predecessor is 0), dsp trims to codomain
        assert tf.dsp(r, b).states() == [0, 1]

    def test_empty_and_full_posts(self):
        space = space_of_size(3)
        r = Relation.from_pairs(space, [(0, 1), (1, 2)])
        assert tf.awp(r, Predicate.empty(space)).states() == []
        assert tf.dwlp(r, Predicate.full(space)) == Predicate.full(space)
        assert tf.asp(Relation.empty(space), Predicate.full(space)).states() == []
        # with no transitions every state is vacuously all-from-b
        assert tf.dslp(Relation.empty(space), Predicate.empty(space)) == (
            Predicate.full(space)
        )


class TestLaws:
    """Exhaustive small-model sweeps of the defining relationships."""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_de_morgan_dualities(self, n):
        for space, r, p in all_models(n):
            assert tf.awp(r, p) == ~tf.dwlp(r, ~p)
            assert tf.asp(r, p) == ~tf.dslp(r, ~p)
            assert tf.dwp(r, p) == ~tf.awlp(r, ~p)
            assert tf.dsp(r, p) == ~tf.aslp(r, ~p)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_derived_definitions(self, n):
        for space, r, p in all_models(n):
            assert tf.dwp(r, p) == tf.dwlp(r, p) & r.domain()
            assert tf.awlp(r, p) == tf.awp(r, p) | ~r.domain()
            assert tf.dsp(r, p) == tf.dslp(r, p) & r.codomain()
            assert tf.aslp(r, p) == tf.asp(r, p) | ~r.codomain()

    @pytest.mark.parametrize("n", [1, 2])
    def test_galois_connections(self, n):
        full = (1 << n) - 1
        for rel in range(1 << (n * n)):
            for b_bits in range(full + 1):
                for c_bits in range(full + 1):
                    space, r, b, c = model_from_codes(n, rel, b_bits, c_bits)
                    assert b.issubset(tf.dwlp(r, c)) == tf.asp(r, b).issubset(c)
                    assert tf.awp(r, c).issubset(b) == c.issubset(tf.dslp(r, b))

    def test_galois_sampled_larger(self):
        for rel, b_bits, c_bits in random_models(5, 300, seed=7):
            space, r, b, c = model_from_codes(5, rel, b_bits, c_bits)
            assert b.issubset(tf.dwlp(r, c)) == tf.asp(r, b).issubset(c)
            assert tf.awp(r, c).issubset(b) == c.issubset(tf.dslp(r, b))


class TestKinds:
    def test_everyday_names_are_aliases(self):
        assert tf.wp is tf.awp
        assert tf.sp is tf.asp
        assert tf.wlp is tf.dwlp
        assert tf.slp is tf.dslp
        assert tf.TransformerKind.WP is tf.TransformerKind.AWP
        assert tf.TransformerKind.SP is tf.TransformerKind.ASP
        assert tf.TransformerKind.WLP is tf.TransformerKind.DWLP
        assert tf.TransformerKind.SLP is tf.TransformerKind.DSLP

    def test_grid_flags(self):
        K = tf.TransformerKind
        assert not K.AWP.forward and K.AWP.angelic and not K.AWP.liberal
        assert not K.DWLP.forward and not K.DWLP.angelic and K.DWLP.liberal
        assert K.ASP.forward and K.ASP.angelic and not K.ASP.liberal
        assert K.DSLP.forward and not K.DSLP.angelic and K.DSLP.liberal
        assert K.DWP.forward is False and K.AWLP.liberal is True
        assert K.DSP.forward is True and K.ASLP.angelic is True

    def test_apply_dispatch(self):
        space = space_of_size(2)
        r = Relation.from_pairs(space, [(0, 1)])
        p = Predicate.from_states(space, [1])
        for kind in tf.TransformerKind:
            direct = getattr(tf, kind.value)(r, p)
            assert kind.apply(r, p) == direct

    def test_space_mismatch(self):
        r = Relation.identity(space_of_size(2))
        p = Predicate.full(space_of_size(3))
        with pytest.raises(SpaceMismatch):
            tf.awp(r, p)
