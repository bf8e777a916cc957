import random
from importlib.resources import files

import pytest

from exegete import laws, relalg, specfile

LOGIN_SPEC = str(files("exegete").joinpath("corpus", "login.spec"))

CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance verdicts where output capture cannot eat them."""
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)


def space_of_size(n: int) -> relalg.StateSpace:
    return relalg.StateSpace((("s", tuple(range(n))),))


def model_from_codes(n: int, rel_code: int, b_bits: int, c_bits: int):
    """Decode a packed model into relalg objects for object-layer checks."""
    space = space_of_size(n)
    pairs = [
        (s, t)
        for s in range(n)
        for t in range(n)
        if (rel_code >> (s * n + t)) & 1
    ]
    r = relalg.Relation.from_pairs(space, pairs)
    b = relalg.Predicate(space, b_bits)
    c = relalg.Predicate(space, c_bits)
    return space, r, b, c


def random_models(n: int, count: int, seed: int):
    rng = random.Random(seed)
    full = (1 << n) - 1
    for _ in range(count):
        yield (
            rng.getrandbits(n * n),
            rng.getrandbits(n) & full,
            rng.getrandbits(n) & full,
        )


@pytest.fixture(scope="session")
def exhaustive3() -> laws.LawsReport:
    """The full size 1..3 sweep, shared by the law and acceptance tests."""
    return laws.run_laws(mode="exhaustive", max_size=3)


@pytest.fixture(scope="session")
def random6() -> laws.LawsReport:
    return laws.run_laws(mode="random", samples=10000, seed=42)


@pytest.fixture(scope="session")
def login_spec() -> specfile.SpecFile:
    return specfile.load(LOGIN_SPEC)
