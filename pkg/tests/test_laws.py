"""The law sweep driver: families, fault injection, engine agreement."""

import pytest

from exegete import kernels, laws, transformers
from exegete.errors import ExegeteError


EXPECTED_CHECKS = [
    ("galois", "wlp-sp", "iff"),
    ("galois", "wp-slp", "iff"),
    ("contrapositive", "partial-correctness~partial-incorrectness", "iff"),
    ("contrapositive", "total-correctness~exegesis-v", "iff"),
    ("contrapositive", "partial-correctness-sp~partial-incorrectness-slp", "iff"),
    ("contrapositive", "incorrectness~exegesis-vi", "iff"),
    ("correspondence", "partial-correctness", "iff"),
    ("correspondence", "incorrectness", "iff"),
    ("correspondence", "angelic-total-correctness", "iff"),
    ("correspondence", "partial-incorrectness", "iff"),
    ("correspondence", "topbpc-toppc", "iff"),
    ("correspondence", "bpctop-bptop", "iff"),
    ("demonic-gap", "dwp-implies-angelic-equation", "implies"),
]


class TestCatalogue:
    def test_thirteen_checks(self):
        listed = [(c.family, c.name, c.kind) for c in laws.LAW_CHECKS]
        assert listed == EXPECTED_CHECKS
        assert len(laws.LAW_CHECKS) == kernels.LAW_CHECK_COUNT

    def test_indices_are_positions(self):
        for position, check in enumerate(laws.LAW_CHECKS):
            assert check.index == position

    def test_family_order(self):
        assert laws.FAMILY_ORDER == (
            "galois",
            "contrapositive",
            "correspondence",
            "demonic-gap",
        )

    def test_only_demonic_gap_is_one_way(self):
        one_way = [c.name for c in laws.LAW_CHECKS if c.kind == "implies"]
        assert one_way == ["dwp-implies-angelic-equation"]


class TestExhaustive:
    def test_small_sweep_shape(self):
        report = laws.run_laws(max_size=2)
        assert report.mode == "exhaustive"
        assert report.sizes == (1, 2)
        assert report.samples is None
        # 2 relations x 4 predicate pairs, then 16 x 16
        assert report.models_checked == 8 + 256
        assert report.engine in ("kernel-pure", "kernel-compiled")
        assert [f.family for f in report.families] == list(laws.FAMILY_ORDER)
        assert report.passed

    def test_full_criterion_sweep(self, exhaustive3):
        assert exhaustive3.sizes == (1, 2, 3)
        assert exhaustive3.models_checked == 8 + 256 + 32768
        assert exhaustive3.passed
        for fam in exhaustive3.families:
            assert fam.models_checked == exhaustive3.models_checked
            assert fam.violations_total == 0
            assert fam.violations == ()
            assert not fam.truncated

    def test_size_limit(self):
        with pytest.raises(ExegeteError):
            laws.run_laws(max_size=5)
        with pytest.raises(ExegeteError):
            laws.run_laws(max_size=0)

    def test_unknown_mode(self):
        with pytest.raises(ExegeteError):
            laws.run_laws(mode="thorough")


class TestRandom:
    def test_shape(self, random6):
        assert random6.mode == "random"
        assert random6.sizes == (laws.RANDOM_SIZE,)
        assert random6.samples == 10000
        assert random6.seed == 42
        assert random6.models_checked == 10000
        assert random6.passed

    def test_deterministic_for_seed(self):
        a = laws.run_laws(mode="random", samples=300, seed=9)
        b = laws.run_laws(mode="random", samples=300, seed=9)
        assert a.to_dict() == b.to_dict()

    def test_default_seed_is_zero(self):
        report = laws.run_laws(mode="random", samples=10)
        assert report.seed == 0

    def test_size_is_fixed(self):
        report = laws.run_laws(mode="random", samples=10, max_size=laws.RANDOM_SIZE)
        assert report.sizes == (6,)
        with pytest.raises(ExegeteError):
            laws.run_laws(mode="random", samples=10, max_size=3)

    def test_needs_positive_samples(self):
        with pytest.raises(ExegeteError):
            laws.run_laws(mode="random", samples=0)


class TestFaultInjection:
    def test_dwlp_fault_fails_demonic_gap(self):
        report = laws.run_laws(max_size=1, fault=laws.fault_demonic_uses_dwlp())
        assert report.engine == "reference"
        assert not report.passed
        by_family = {f.family: f for f in report.families}
        assert by_family["galois"].passed
        assert by_family["contrapositive"].passed
        assert by_family["correspondence"].passed
        gap = by_family["demonic-gap"]
        assert not gap.passed
        assert gap.violations_total == 2

    def test_first_violation_is_minimal(self):
        # with the empty 1-state relation dwlp is everything, so b = {0}
        # satisfies the faulted guard while the equation side fails
        report = laws.run_laws(max_size=1, fault=laws.fault_demonic_uses_dwlp())
        gap = [f for f in report.families if f.family == "demonic-gap"][0]
        first = gap.violations[0].to_dict()
        assert first == {
            "size": 1,
            "relation": [],
            "b": [0],
            "c": [],
            "family": "demonic-gap",
            "check": "dwp-implies-angelic-equation",
            "lhs": "b <= dwp(c)",
            "rhs": "b ; p ; c ; top = b ; top",
        }

    def test_pinned_witness_survives_fault_reporting(self):
        # the witness block always reports the true transformers, so the
        # fault shows up in the sweep rather than by breaking the witness
        report = laws.run_laws(max_size=1, fault=laws.fault_demonic_uses_dwlp())
        assert report.gap_witness.confirmed

    def test_collect_limit_truncates(self):
        report = laws.run_laws(
            max_size=1,
            fault=laws.fault_demonic_uses_dwlp(),
            collect_limit=1,
        )
        gap = [f for f in report.families if f.family == "demonic-gap"][0]
        assert gap.violations_total == 2
        assert len(gap.violations) == 1
        assert gap.truncated

    def test_violations_sorted(self):
        report = laws.run_laws(max_size=2, fault=laws.fault_demonic_uses_dwlp())
        gap = [f for f in report.families if f.family == "demonic-gap"][0]
        keys = [v.sort_key() for v in gap.violations]
        assert keys == sorted(keys)
        assert gap.violations[0].size == 1

    def test_fault_validation(self):
        with pytest.raises(ExegeteError):
            laws.Fault("no-such-check", "lhs", lambda r, b, c: True)
        with pytest.raises(ExegeteError):
            laws.Fault("wlp-sp", "middle", lambda r, b, c: True)

    def test_fault_on_other_side(self):
        # flipping an equation side must also surface violations
        fault = laws.Fault(
            "dwp-implies-angelic-equation", "rhs", lambda r, b, c: True
        )
        report = laws.run_laws(max_size=1, fault=fault)
        gap = [f for f in report.families if f.family == "demonic-gap"][0]
        # rhs stuck true never breaks an implication whose lhs is real
        assert gap.passed

        fault = laws.Fault("wlp-sp", "rhs", lambda r, b, c: False)
        report = laws.run_laws(max_size=1, fault=fault)
        galois = [f for f in report.families if f.family == "galois"][0]
        assert not galois.passed


class TestEngineAgreement:
    """The reference evaluator and the packed kernel, model by model."""

    @pytest.mark.parametrize("n", [1, 2])
    def test_reference_matches_kernel(self, n):
        full = (1 << n) - 1
        for rel in range(1 << (n * n)):
            for b in range(full + 1):
                for c in range(full + 1):
                    assert laws.law_bits_reference(n, rel, b, c) == kernels.law_bits(
                        n, rel, b, c
                    )

    def test_reference_loop_equals_kernel_sweep(self):
        kernel_report = laws.run_laws(max_size=2)
        reference_report = laws.run_laws(
            max_size=2,
            fault=laws.Fault(
                "wlp-sp",
                "lhs",
                lambda r, b, c: b.issubset(transformers.dwlp(r, c)),
            ),
        )
        # the "fault" recomputes the true lhs, so results must agree
        assert reference_report.engine == "reference"
        assert kernel_report.passed and reference_report.passed
        assert (
            reference_report.models_checked == kernel_report.models_checked
        )


class TestGapWitness:
    def test_confirmed_in_reports(self, exhaustive3):
        gw = exhaustive3.gap_witness
        assert gw.equation_holds
        assert not gw.demonic_holds
        assert gw.confirmed
        assert gw.model == {"relation": [(0, 0), (0, 1)], "b": [0], "c": [1]}

    def test_to_dict(self, exhaustive3):
        d = exhaustive3.to_dict()
        assert d["gap-witness"]["confirmed"]
        assert d["models-checked"] == 33032
        assert d["passed"]
