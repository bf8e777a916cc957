"""The packed-bitset kernels and pure/compiled backend agreement."""

import os
import random
import subprocess
import sys

import pytest

from exegete import _purekernels as pure
from exegete import kernels

from conftest import random_models

try:
    from exegete import _bitkernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(
    compiled is None, reason="compiled extension not built"
)


def random_rows(n: int, rng: random.Random) -> list[int]:
    return [rng.getrandbits(n) for _ in range(n)]


class TestPureOracles:
    def test_compose(self):
        # 0->1 composed with 1->2 over three states
        r = [0b010, 0b000, 0b000]
        s = [0b000, 0b100, 0b000]
        assert pure.compose(r, s, 3) == [0b100, 0b000, 0b000]

    def test_star_chain(self):
        r = [0b010, 0b100, 0b000]
        assert pure.star(r, 3) == [0b111, 0b110, 0b100]

    def test_star_empty_is_identity(self):
        assert pure.star([0, 0], 2) == [0b01, 0b10]

    def test_converse(self):
        r = [0b010, 0b000, 0b001]
        assert pure.converse(r, 3) == [0b100, 0b001, 0b000]

    def test_domain_codomain(self):
        r = [0b110, 0b000, 0b000]
        assert pure.domain_mask(r, 3) == 0b001
        assert pure.codomain_mask(r, 3) == 0b110

    def test_preimage_some(self):
        # states that can reach {1} under 0->{0,1}
        r = [0b011, 0b000]
        assert pure.preimage_some(r, 0b10, 2) == 0b01

    def test_preimage_all(self):
        # states whose every successor is in {1}; state 1 has none
        r = [0b011, 0b000]
        assert pure.preimage_all(r, 0b10, 2) == 0b10

    def test_image_some(self):
        r = [0b010, 0b000]
        assert pure.image_some(r, 0b01, 2) == 0b10

    def test_law_bits_clean_model(self):
        # a model on which every law side agrees
        n, rel, b, c = 2, 0b0011, 0b01, 0b10
        bits = pure.law_bits(n, rel, b, c)
        assert pure.violation_checks(bits) == []

    def test_violation_checks_decoding(self):
        # check 0 disagreeing, check 12 one-way: lhs without rhs only
        assert pure.violation_checks(0b01) == [0]
        assert pure.violation_checks(0b10) == [0]
        assert pure.violation_checks(0b11) == []
        one_way = 0b01 << 24
        assert pure.violation_checks(one_way) == [12]
        assert pure.violation_checks(0b10 << 24) == []

    def test_sweep_exhaustive_counts(self):
        models, totals, found = pure.sweep_exhaustive(2, 10)
        assert models == 16 * 4 * 4
        assert totals == [0] * pure.LAW_CHECK_COUNT
        assert found == []

    def test_sweep_models_stream(self):
        stream = [(0b0011, 0b01, 0b10), (0, 0, 0)]
        models, totals, found = pure.sweep_models(2, stream, 10)
        assert models == 2
        assert totals == [0] * pure.LAW_CHECK_COUNT


class TestBackendSelection:
    def test_backend_reported(self):
        assert kernels.BACKEND in ("pure", "compiled")

    def test_constants_reexported(self):
        assert kernels.SWEEP_MAX_STATES == 8
        assert kernels.LAW_CHECK_COUNT == 13


@needs_compiled
class TestCompiledAgreesWithPure:
    # n values straddle the one-word boundary at 64 states
    SIZES = (1, 2, 3, 7, 8, 63, 64, 65, 130)

    def test_structural_ops(self):
        rng = random.Random(1)
        for n in self.SIZES:
            r = random_rows(n, rng)
            s = random_rows(n, rng)
            bits = rng.getrandbits(n)
            assert compiled.compose(r, s, n) == pure.compose(r, s, n)
            assert compiled.star(r, n) == pure.star(r, n)
            assert compiled.converse(r, n) == pure.converse(r, n)
            assert compiled.domain_mask(r, n) == pure.domain_mask(r, n)
            assert compiled.codomain_mask(r, n) == pure.codomain_mask(r, n)
            assert compiled.preimage_some(r, bits, n) == pure.preimage_some(
                r, bits, n
            )
            assert compiled.preimage_all(r, bits, n) == pure.preimage_all(
                r, bits, n
            )
            assert compiled.image_some(r, bits, n) == pure.image_some(r, bits, n)

    def test_law_bits_exhaustive_small(self):
        for n in (1, 2):
            full = (1 << n) - 1
            for rel in range(1 << (n * n)):
                for b in range(full + 1):
                    for c in range(full + 1):
                        assert compiled.law_bits(n, rel, b, c) == pure.law_bits(
                            n, rel, b, c
                        )

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
    def test_law_bits_sampled(self, n):
        for rel, b, c in random_models(n, 200, seed=n):
            assert compiled.law_bits(n, rel, b, c) == pure.law_bits(n, rel, b, c)

    def test_law_bits_beyond_one_word_delegates(self):
        # the single-word law kernel hands sizes past 8 back to pure
        rng = random.Random(9)
        n = 9
        rel = rng.getrandbits(n * n)
        b = rng.getrandbits(n)
        c = rng.getrandbits(n)
        assert compiled.law_bits(n, rel, b, c) == pure.law_bits(n, rel, b, c)

    def test_sweep_exhaustive(self):
        for n in (1, 2, 3):
            assert compiled.sweep_exhaustive(n, 5) == pure.sweep_exhaustive(n, 5)

    def test_sweep_models(self):
        stream = list(random_models(6, 300, seed=99))
        assert compiled.sweep_models(6, stream, 5) == pure.sweep_models(
            6, stream, 5
        )

    def test_sweep_exhaustive_size_guard(self):
        with pytest.raises(ValueError):
            compiled.sweep_exhaustive(8, 5)


class TestBackendForcing:
    # selection happens at import, so forcing needs a fresh interpreter

    def _backend_in_subprocess(self, value: str):
        env = dict(os.environ, EXEGETE_BACKEND=value)
        return subprocess.run(
            [sys.executable, "-c", "from exegete import kernels; print(kernels.BACKEND)"],
            env=env,
            capture_output=True,
            text=True,
        )

    def test_force_pure(self):
        proc = self._backend_in_subprocess("pure")
        assert proc.returncode == 0
        assert proc.stdout.strip() == "pure"

    def test_unknown_choice_rejected(self):
        proc = self._backend_in_subprocess("fast")
        assert proc.returncode != 0
        assert "EXEGETE_BACKEND" in proc.stderr
