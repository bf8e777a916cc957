"""Finite state spaces, predicates, and binary relations, all exact.

A StateSpace is the cartesian product of a few small named variable
domains, flattened to indices 0..size-1 in mixed radix with the first
declared variable most significant. Predicates are bitsets over those
indices and relations are bit matrices (one row bitset per source
state), so every operation in this module is exact set algebra, no
approximation anywhere. Anything combining two values insists they
were built over structurally equal spaces.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator, Sequence

from . import kernels
from .errors import SpaceMismatch, StateCapExceeded

DEFAULT_STATE_CAP = 4096
STATE_CAP_ENV = "EXEGETE_STATE_CAP"

Value = int | str


def state_cap() -> int:
    raw = os.environ.get(STATE_CAP_ENV)
    if raw is None:
        return DEFAULT_STATE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise StateCapExceeded(
            f"{STATE_CAP_ENV} must be an integer, not {raw!r}"
        ) from None
    if cap < 1:
        raise StateCapExceeded(f"{STATE_CAP_ENV} must be positive, not {cap}")
    return cap


class StateSpace:
    """An ordered list of variables, each with a small finite domain.

    Domains are sequences of distinct values, either all ints or all
    strings per variable; the declaration order of a domain is its
    order for < and friends. States are tuples of per-variable values
    and are numbered in mixed radix, first variable most significant.
    """

    __slots__ = ("variables", "size", "_strides", "_value_index")

    def __init__(self, variables: Sequence[tuple[str, Sequence[Value]]]):
        if not variables:
            raise ValueError("a state space needs at least one variable")
        cleaned = []
        seen = set()
        for name, domain in variables:
            if not isinstance(name, str) or not name:
                raise ValueError(f"bad variable name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate variable {name!r}")
            seen.add(name)
            dom = tuple(domain)
            if not dom:
                raise ValueError(f"variable {name!r} has an empty domain")
            if len(set(dom)) != len(dom):
                raise ValueError(f"variable {name!r} repeats a domain value")
            if not (
                all(isinstance(v, int) for v in dom)
                or all(isinstance(v, str) for v in dom)
            ):
                raise ValueError(
                    f"variable {name!r} mixes ints and symbols in its domain"
                )
            cleaned.append((name, dom))
        self.variables = tuple(cleaned)

        size = 1
        for _, dom in self.variables:
            size *= len(dom)
        cap = state_cap()
        if size > cap:
            raise StateCapExceeded(
                f"state space has {size} states, cap is {cap} "
                f"(override with {STATE_CAP_ENV})"
            )
        self.size = size

        strides = []
        stride = size
        for _, dom in self.variables:
            stride //= len(dom)
            strides.append(stride)
        self._strides = tuple(strides)
        self._value_index = {
            name: {v: i for i, v in enumerate(dom)}
            for name, dom in self.variables
        }

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.variables)

    def domain_of(self, name: str) -> tuple[Value, ...]:
        for var, dom in self.variables:
            if var == name:
                return dom
        raise KeyError(name)

    def has_variable(self, name: str) -> bool:
        return name in self._value_index

    def index_of(self, values: Sequence[Value]) -> int:
        """Flat index of a full state tuple, in declaration order."""
        if len(values) != len(self.variables):
            raise ValueError(
                f"expected {len(self.variables)} values, got {len(values)}"
            )
        index = 0
        for (name, _), stride, value in zip(
            self.variables, self._strides, values
        ):
            index += stride * self.position(name, value)
        return index

    def values_at(self, index: int) -> tuple[Value, ...]:
        if not 0 <= index < self.size:
            raise ValueError(f"state index {index} out of range")
        out = []
        for (_, dom), stride in zip(self.variables, self._strides):
            out.append(dom[(index // stride) % len(dom)])
        return tuple(out)

    def position(self, name: str, value: Value) -> int:
        """Index of a value inside its variable's declared domain."""
        try:
            positions = self._value_index[name]
        except KeyError:
            raise KeyError(f"no variable {name!r}") from None
        try:
            return positions[value]
        except KeyError:
            raise ValueError(
                f"{value!r} is not in the domain of {name!r}"
            ) from None

    def value_at(self, index: int, name: str) -> Value:
        for (var, dom), stride in zip(self.variables, self._strides):
            if var == name:
                return dom[(index // stride) % len(dom)]
        raise KeyError(f"no variable {name!r}")

    def with_value(self, index: int, name: str, value: Value) -> int:
        """Flat index after overwriting one variable in a state."""
        for (var, dom), stride in zip(self.variables, self._strides):
            if var == name:
                old = (index // stride) % len(dom)
                return index + (self.position(name, value) - old) * stride
        raise KeyError(f"no variable {name!r}")

    def format_state(self, index: int) -> str:
        parts = [
            f"{name}={value}"
            for name, value in zip(self.names, self.values_at(index))
        ]
        return " ".join(parts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateSpace):
            return NotImplemented
        return self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{name}:{list(dom)!r}" for name, dom in self.variables
        )
        return f"StateSpace({inner})"


def _require_same_space(a, b) -> None:
    if a.space != b.space:
        raise SpaceMismatch(
            f"cannot combine values over {a.space!r} and {b.space!r}"
        )


class Predicate:
    """A set of states of one space, stored as a bitset."""

    __slots__ = ("space", "bits")

    def __init__(self, space: StateSpace, bits: int):
        if not 0 <= bits < (1 << space.size):
            raise ValueError("predicate bits out of range for the space")
        self.space = space
        self.bits = bits

    @classmethod
    def empty(cls, space: StateSpace) -> "Predicate":
        return cls(space, 0)

    @classmethod
    def full(cls, space: StateSpace) -> "Predicate":
        return cls(space, (1 << space.size) - 1)

    @classmethod
    def from_states(cls, space: StateSpace, states: Iterable[int]) -> "Predicate":
        bits = 0
        for s in states:
            if not 0 <= s < space.size:
                raise ValueError(f"state index {s} out of range")
            bits |= 1 << s
        return cls(space, bits)

    def states(self) -> list[int]:
        return [s for s in range(self.space.size) if (self.bits >> s) & 1]

    def __and__(self, other: "Predicate") -> "Predicate":
        _require_same_space(self, other)
        return Predicate(self.space, self.bits & other.bits)

    def __or__(self, other: "Predicate") -> "Predicate":
        _require_same_space(self, other)
        return Predicate(self.space, self.bits | other.bits)

    def __invert__(self) -> "Predicate":
        return Predicate(self.space, self.bits ^ ((1 << self.space.size) - 1))

    def issubset(self, other: "Predicate") -> bool:
        _require_same_space(self, other)
        return self.bits & ~other.bits == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Predicate):
            return NotImplemented
        _require_same_space(self, other)
        return self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.space, self.bits))

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return f"Predicate({self.states()!r} of {self.space.size})"


class Relation:
    """A binary relation on one space, stored as a tuple of row bitsets."""

    __slots__ = ("space", "rows")

    def __init__(self, space: StateSpace, rows: Sequence[int]):
        rows = tuple(rows)
        if len(rows) != space.size:
            raise ValueError("row count does not match the space size")
        limit = 1 << space.size
        for row in rows:
            if not 0 <= row < limit:
                raise ValueError("relation row out of range for the space")
        self.space = space
        self.rows = rows

    @classmethod
    def empty(cls, space: StateSpace) -> "Relation":
        return cls(space, (0,) * space.size)

    @classmethod
    def identity(cls, space: StateSpace) -> "Relation":
        return cls(space, tuple(1 << s for s in range(space.size)))

    @classmethod
    def top(cls, space: StateSpace) -> "Relation":
        full = (1 << space.size) - 1
        return cls(space, (full,) * space.size)

    @classmethod
    def from_pairs(
        cls, space: StateSpace, pairs: Iterable[tuple[int, int]]
    ) -> "Relation":
        rows = [0] * space.size
        for s, t in pairs:
            if not (0 <= s < space.size and 0 <= t < space.size):
                raise ValueError(f"pair ({s}, {t}) out of range")
            rows[s] |= 1 << t
        return cls(space, rows)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for s, row in enumerate(self.rows):
            while row:
                low = row & -row
                yield (s, low.bit_length() - 1)
                row ^= low

    def bit_matrix(self) -> list[list[int]]:
        n = self.space.size
        return [[(row >> t) & 1 for t in range(n)] for row in self.rows]

    def union(self, other: "Relation") -> "Relation":
        _require_same_space(self, other)
        return Relation(
            self.space, tuple(a | b for a, b in zip(self.rows, other.rows))
        )

    __or__ = union

    def compose(self, other: "Relation") -> "Relation":
        _require_same_space(self, other)
        return Relation(
            self.space,
            kernels.compose(list(self.rows), list(other.rows), self.space.size),
        )

    def star(self) -> "Relation":
        return Relation(
            self.space, kernels.star(list(self.rows), self.space.size)
        )

    def converse(self) -> "Relation":
        return Relation(
            self.space, kernels.converse(list(self.rows), self.space.size)
        )

    def domain(self) -> Predicate:
        return Predicate(
            self.space, kernels.domain_mask(list(self.rows), self.space.size)
        )

    def codomain(self) -> Predicate:
        return Predicate(
            self.space, kernels.codomain_mask(list(self.rows), self.space.size)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        _require_same_space(self, other)
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.space, self.rows))

    def __bool__(self) -> bool:
        return any(self.rows)

    def __repr__(self) -> str:
        return f"Relation({sorted(self.pairs())!r} of {self.space.size})"


def test(pred: Predicate) -> Relation:
    """The filter relation of a predicate: identity restricted to it."""
    rows = tuple(
        (1 << s) if (pred.bits >> s) & 1 else 0
        for s in range(pred.space.size)
    )
    return Relation(pred.space, rows)


def union(r: Relation, s: Relation) -> Relation:
    return r.union(s)


def compose(r: Relation, s: Relation) -> Relation:
    return r.compose(s)


def star(r: Relation) -> Relation:
    return r.star()


def converse(r: Relation) -> Relation:
    return r.converse()


def domain(r: Relation) -> Predicate:
    return r.domain()


def codomain(r: Relation) -> Predicate:
    return r.codomain()


def top(space: StateSpace) -> Relation:
    return Relation.top(space)


def identity(space: StateSpace) -> Relation:
    return Relation.identity(space)


def empty(space: StateSpace) -> Relation:
    return Relation.empty(space)


def equals(r: Relation, s: Relation) -> bool:
    _require_same_space(r, s)
    return r.rows == s.rows
