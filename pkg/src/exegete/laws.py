"""Law verification sweeps over every small model, or seeded samples.

A model is a relation plus two predicates (b, c) over a one-variable
space of n states. Thirteen checks run per model, grouped in four
families:

    galois           the two adjunction equivalences
    contrapositive   the four partner-edge equivalences
    correspondence   the six equation encodings against their
                     transformer characterisations
    demonic-gap      demonic total correctness implies the angelic
                     equation (one-way; the converse famously fails,
                     and the pinned 2-state witness proves it)

Two engines compute the same 13 checks. The kernel engine packs each
model into machine integers and asks kernels.law_bits, which evaluates
equation sides by real matrix composition. The reference engine walks
the public object layer (triples.check_galois, check_contrapositive,
topkat.correspondence, transformers) one model at a time. Sweeps use
the kernel engine; tests cross-validate the two bit-for-bit, and any
injected fault forces the reference engine so the fault is actually
exercised.

Random mode draws models at a fixed size of 6 states from Python's
random.Random (the Mersenne Twister), three draws per model in order:
getrandbits(36) for the relation, getrandbits(6) for b, getrandbits(6)
for c. Same seed, same models, byte-identical report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator, Union

from . import kernels, topkat, transformers, triples
from .errors import ExegeteError
from .relalg import Predicate, Relation, StateSpace

EXHAUSTIVE_DEFAULT_MAX_SIZE = 3
EXHAUSTIVE_SIZE_LIMIT = 4
RANDOM_SIZE = 6
RANDOM_DEFAULT_SAMPLES = 10000
COLLECT_LIMIT = 1000


@dataclass(frozen=True)
class LawCheck:
    index: int
    family: str
    name: str
    kind: str  # "iff" or "implies"
    lhs: str
    rhs: str


LAW_CHECKS = (
    LawCheck(0, "galois", "wlp-sp", "iff", "b <= dwlp(c)", "asp(b) <= c"),
    LawCheck(1, "galois", "wp-slp", "iff", "awp(c) <= b", "c <= dslp(b)"),
    LawCheck(
        2,
        "contrapositive",
        "partial-correctness~partial-incorrectness",
        "iff",
        "b <= dwlp(c)",
        "awp(!c) <= !b",
    ),
    LawCheck(
        3,
        "contrapositive",
        "total-correctness~exegesis-v",
        "iff",
        "b <= awp(c)",
        "dwlp(!c) <= !b",
    ),
    LawCheck(
        4,
        "contrapositive",
        "partial-correctness-sp~partial-incorrectness-slp",
        "iff",
        "asp(b) <= c",
        "!c <= dslp(!b)",
    ),
    LawCheck(
        5,
        "contrapositive",
        "incorrectness~exegesis-vi",
        "iff",
        "c <= asp(b)",
        "dslp(!b) <= !c",
    ),
    LawCheck(
        6,
        "correspondence",
        "partial-correctness",
        "iff",
        "top ; b ; p ; c = top ; b ; p",
        "asp(p)(b) <= c",
    ),
    LawCheck(
        7,
        "correspondence",
        "incorrectness",
        "iff",
        "top ; b ; p ; c = top ; c",
        "c <= asp(p)(b)",
    ),
    LawCheck(
        8,
        "correspondence",
        "angelic-total-correctness",
        "iff",
        "b ; p ; c ; top = b ; top",
        "b <= awp(p)(c)",
    ),
    LawCheck(
        9,
        "correspondence",
        "partial-incorrectness",
        "iff",
        "b ; p ; c ; top = p ; c ; top",
        "awp(p)(c) <= b",
    ),
    LawCheck(
        10,
        "correspondence",
        "topbpc-toppc",
        "iff",
        "top ; b ; p ; c = top ; p ; c",
        "c <= aslp(p)(b)",
    ),
    LawCheck(
        11,
        "correspondence",
        "bpctop-bptop",
        "iff",
        "b ; p ; c ; top = b ; p ; top",
        "b <= awlp(p)(c)",
    ),
    LawCheck(
        12,
        "demonic-gap",
        "dwp-implies-angelic-equation",
        "implies",
        "b <= dwp(c)",
        "b ; p ; c ; top = b ; top",
    ),
)

FAMILY_ORDER = ("galois", "contrapositive", "correspondence", "demonic-gap")

_CHECK_BY_NAME = {check.name: check for check in LAW_CHECKS}

assert len(LAW_CHECKS) == kernels.LAW_CHECK_COUNT


@dataclass(frozen=True)
class Fault:
    """Test-only override of one side of one check (reference engine)."""

    check: str  # a LawCheck name
    side: str  # "lhs" or "rhs"
    compute: Callable[[Relation, Predicate, Predicate], bool]

    def __post_init__(self):
        if self.check not in _CHECK_BY_NAME:
            raise ExegeteError(f"unknown law check {self.check!r}")
        if self.side not in ("lhs", "rhs"):
            raise ExegeteError("fault side must be 'lhs' or 'rhs'")


def fault_demonic_uses_dwlp() -> Fault:
    """The documented example fault: dwp mistaken for dwlp."""
    return Fault(
        "dwp-implies-angelic-equation",
        "lhs",
        lambda r, b, c: b.issubset(transformers.dwlp(r, c)),
    )


@dataclass(frozen=True)
class Violation:
    size: int
    rel_code: int
    b_bits: int
    c_bits: int
    check: LawCheck

    def relation_pairs(self) -> list[tuple[int, int]]:
        n = self.size
        return [
            (s, t)
            for s in range(n)
            for t in range(n)
            if (self.rel_code >> (s * n + t)) & 1
        ]

    def bit_matrix(self) -> list[list[int]]:
        n = self.size
        return [
            [(self.rel_code >> (s * n + t)) & 1 for t in range(n)]
            for s in range(n)
        ]

    def b_states(self) -> list[int]:
        return _bit_states(self.b_bits)

    def c_states(self) -> list[int]:
        return _bit_states(self.c_bits)

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "relation": self.relation_pairs(),
            "b": _bit_states(self.b_bits),
            "c": _bit_states(self.c_bits),
            "family": self.check.family,
            "check": self.check.name,
            "lhs": self.check.lhs,
            "rhs": self.check.rhs,
        }

    def sort_key(self):
        return (self.size, self.rel_code, self.b_bits, self.c_bits, self.check.index)


def _bit_states(bits: int) -> list[int]:
    out = []
    s = 0
    while bits:
        if bits & 1:
            out.append(s)
        bits >>= 1
        s += 1
    return out


@dataclass(frozen=True)
class FamilyResult:
    family: str
    checks: tuple[str, ...]
    models_checked: int
    violations_total: int
    violations: tuple[Violation, ...]
    truncated: bool

    @property
    def passed(self) -> bool:
        return self.violations_total == 0

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "checks": list(self.checks),
            "models-checked": self.models_checked,
            "violations-total": self.violations_total,
            "violations": [v.to_dict() for v in self.violations],
            "truncated": self.truncated,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class GapWitness:
    equation_holds: bool
    demonic_holds: bool
    model: dict

    @property
    def confirmed(self) -> bool:
        return self.equation_holds and not self.demonic_holds

    def to_dict(self) -> dict:
        return {
            "equation-holds": self.equation_holds,
            "demonic-holds": self.demonic_holds,
            "confirmed": self.confirmed,
            "model": self.model,
        }


@dataclass(frozen=True)
class LawsReport:
    mode: str
    engine: str
    sizes: tuple[int, ...]
    samples: int | None
    seed: int | None
    models_checked: int
    families: tuple[FamilyResult, ...]
    gap_witness: GapWitness

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families) and self.gap_witness.confirmed

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "engine": self.engine,
            "sizes": list(self.sizes),
            "samples": self.samples,
            "seed": self.seed,
            "models-checked": self.models_checked,
            "passed": self.passed,
            "families": [f.to_dict() for f in self.families],
            "gap-witness": self.gap_witness.to_dict(),
        }


# --- reference engine: one model through the public object layer ---

_SPACES: dict[int, StateSpace] = {}


def _space(n: int) -> StateSpace:
    if n not in _SPACES:
        _SPACES[n] = StateSpace((("s", tuple(range(n))),))
    return _SPACES[n]


def model_objects(n: int, rel_code: int, b_bits: int, c_bits: int):
    space = _space(n)
    rows = [(rel_code >> (s * n)) & ((1 << n) - 1) for s in range(n)]
    return space, Relation(space, rows), Predicate(space, b_bits), Predicate(space, c_bits)


def law_bits_reference(
    n: int, rel_code: int, b_bits: int, c_bits: int, fault: Fault | None = None
) -> int:
    """The 13 check sides via the object layer, packed like kernels.law_bits."""
    space, rel, b, c = model_objects(n, rel_code, b_bits, c_bits)
    interp = topkat.Interpretation(space, {"p": rel}, {"b": b, "c": c})

    sides: list[tuple[bool, bool]] = []
    galois = triples.check_galois(rel, b, c)
    for edge in galois.edges:
        sides.append((edge.lhs_holds, edge.rhs_holds))
    contra = triples.check_contrapositive(rel, b, c)
    for edge in contra.edges:
        sides.append((edge.lhs_holds, edge.rhs_holds))
    for label in topkat.ENCODING_LABELS:
        report = topkat.correspondence(label, interp)
        sides.append((report.equation_holds, report.transformer_holds))
    atc = topkat.encode("angelic-total-correctness")
    sides.append(
        (
            b.issubset(transformers.dwp(rel, c)),
            topkat.equation_holds(atc, interp),
        )
    )

    if fault is not None:
        index = _CHECK_BY_NAME[fault.check].index
        lhs, rhs = sides[index]
        forged = fault.compute(rel, b, c)
        sides[index] = (forged, rhs) if fault.side == "lhs" else (lhs, forged)

    bits = 0
    for k, (lhs, rhs) in enumerate(sides):
        if lhs:
            bits |= 1 << (2 * k)
        if rhs:
            bits |= 1 << (2 * k + 1)
    return bits


def _violations_of_bits(bits: int) -> list[int]:
    out = []
    for check in LAW_CHECKS:
        lhs = (bits >> (2 * check.index)) & 1
        rhs = (bits >> (2 * check.index + 1)) & 1
        if check.kind == "implies":
            if lhs and not rhs:
                out.append(check.index)
        elif lhs != rhs:
            out.append(check.index)
    return out


# --- model streams ---


def exhaustive_models(n: int) -> Iterator[tuple[int, int, int]]:
    full = (1 << n) - 1
    for rel_code in range(1 << (n * n)):
        for b in range(full + 1):
            for c in range(full + 1):
                yield (rel_code, b, c)


def random_models(samples: int, seed: int) -> Iterator[tuple[int, int, int]]:
    rng = random.Random(seed)
    n = RANDOM_SIZE
    for _ in range(samples):
        rel_code = rng.getrandbits(n * n)
        b = rng.getrandbits(n)
        c = rng.getrandbits(n)
        yield (rel_code, b, c)


# --- sweeping ---


def _gap_witness(fault: Fault | None) -> GapWitness:
    t = triples.demonic_gap_witness()
    interp = topkat.Interpretation(
        t.pre.space, {"p": t.prog}, {"b": t.pre, "c": t.post}
    )
    eq_holds = topkat.equation_holds(
        topkat.encode("angelic-total-correctness"), interp
    )
    if fault is not None and fault.check == "dwp-implies-angelic-equation":
        demonic = fault.compute(t.prog, t.pre, t.post)
    else:
        demonic = t.pre.issubset(transformers.dwp(t.prog, t.post))
    return GapWitness(
        equation_holds=eq_holds,
        demonic_holds=demonic,
        model={
            "relation": sorted(t.prog.pairs()),
            "b": t.pre.states(),
            "c": t.post.states(),
        },
    )


def run_laws(
    mode: str = "exhaustive",
    max_size: int | None = None,
    samples: int | None = None,
    seed: int | None = None,
    fault: Fault | None = None,
    collect_limit: int = COLLECT_LIMIT,
) -> LawsReport:
    if mode == "exhaustive":
        if max_size is None:
            max_size = EXHAUSTIVE_DEFAULT_MAX_SIZE
        if not 1 <= max_size <= EXHAUSTIVE_SIZE_LIMIT:
            raise ExegeteError(
                f"exhaustive sweeps support sizes 1..{EXHAUSTIVE_SIZE_LIMIT}, "
                f"not {max_size}"
            )
        sizes = tuple(range(1, max_size + 1))
        samples = None
        seed = None
    elif mode == "random":
        if samples is None:
            samples = RANDOM_DEFAULT_SAMPLES
        if samples < 1:
            raise ExegeteError("random mode needs at least one sample")
        if seed is None:
            seed = 0
        if max_size is not None and max_size != RANDOM_SIZE:
            raise ExegeteError(
                f"random mode always samples at size {RANDOM_SIZE}"
            )
        sizes = (RANDOM_SIZE,)
    else:
        raise ExegeteError(f"unknown laws mode {mode!r}")

    engine = f"kernel-{kernels.BACKEND}" if fault is None else "reference"
    models_checked = 0
    raw: list[Violation] = []
    totals = [0] * len(LAW_CHECKS)

    for n in sizes:
        if fault is None:
            if mode == "exhaustive":
                checked, batch_totals, found = kernels.sweep_exhaustive(
                    n, collect_limit
                )
            else:
                checked, batch_totals, found = kernels.sweep_models(
                    n, random_models(samples, seed), collect_limit
                )
            models_checked += checked
            for index, count in enumerate(batch_totals):
                totals[index] += count
            for rel_code, b, c, index in found:
                if len(raw) < collect_limit:
                    raw.append(Violation(n, rel_code, b, c, LAW_CHECKS[index]))
        else:
            if mode == "exhaustive":
                stream = exhaustive_models(n)
            else:
                stream = random_models(samples, seed)
            for rel_code, b, c in stream:
                bits = law_bits_reference(n, rel_code, b, c, fault)
                for index in _violations_of_bits(bits):
                    totals[index] += 1
                    if len(raw) < collect_limit:
                        raw.append(Violation(n, rel_code, b, c, LAW_CHECKS[index]))
                models_checked += 1

    raw.sort(key=Violation.sort_key)
    families = []
    for family in FAMILY_ORDER:
        checks = tuple(c.name for c in LAW_CHECKS if c.family == family)
        total = sum(
            totals[c.index] for c in LAW_CHECKS if c.family == family
        )
        collected = tuple(v for v in raw if v.check.family == family)
        families.append(
            FamilyResult(
                family=family,
                checks=checks,
                models_checked=models_checked,
                violations_total=total,
                violations=collected,
                truncated=total > len(collected),
            )
        )

    return LawsReport(
        mode=mode,
        engine=engine,
        sizes=sizes,
        samples=samples,
        seed=seed,
        models_checked=models_checked,
        families=tuple(families),
        gap_witness=_gap_witness(fault),
    )
