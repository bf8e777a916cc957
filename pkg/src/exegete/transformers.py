"""The eight predicate transformers of a relation, exactly.

Naming is a two-axis grid. The letter after the a/d prefix says which
direction the transformer walks the relation: wp/wlp go backward from
a postcondition, sp/slp go forward from a precondition. The prefix
says how nondeterminism is resolved: angelic (a) asks for at least one
witnessing pair, demonic (d) asks for all of them. Liberal variants
(the lp endings) also accept states the relation never touches.

The four everyday names are aliases into the grid: wp is angelic,
sp is angelic, wlp is demonic, slp is demonic.
"""

from __future__ import annotations

from enum import Enum

from . import kernels
from .errors import SpaceMismatch
from .relalg import Predicate, Relation


def _check(r: Relation, p: Predicate) -> None:
    if r.space != p.space:
        raise SpaceMismatch("relation and predicate live on different spaces")


def awp(r: Relation, post: Predicate) -> Predicate:
    """States with at least one successor satisfying post."""
    _check(r, post)
    return Predicate(
        r.space, kernels.preimage_some(list(r.rows), post.bits, r.space.size)
    )


def dwlp(r: Relation, post: Predicate) -> Predicate:
    """States none of whose successors violate post."""
    _check(r, post)
    return Predicate(
        r.space, kernels.preimage_all(list(r.rows), post.bits, r.space.size)
    )


def asp(r: Relation, pre: Predicate) -> Predicate:
    """States with at least one predecessor satisfying pre."""
    _check(r, pre)
    return Predicate(
        r.space, kernels.image_some(list(r.rows), pre.bits, r.space.size)
    )


def dslp(r: Relation, pre: Predicate) -> Predicate:
    """States none of whose predecessors violate pre."""
    _check(r, pre)
    return ~asp(r, ~pre)


def dwp(r: Relation, post: Predicate) -> Predicate:
    """dwlp restricted to states that can step at all."""
    return dwlp(r, post) & r.domain()


def awlp(r: Relation, post: Predicate) -> Predicate:
    """awp widened by the states that cannot step at all."""
    return awp(r, post) | ~r.domain()


def dsp(r: Relation, pre: Predicate) -> Predicate:
    """dslp restricted to states that are reached at all."""
    return dslp(r, pre) & r.codomain()


def aslp(r: Relation, pre: Predicate) -> Predicate:
    """asp widened by the states that are never reached."""
    return asp(r, pre) | ~r.codomain()


class TransformerKind(Enum):
    AWP = "awp"
    DWP = "dwp"
    AWLP = "awlp"
    DWLP = "dwlp"
    ASP = "asp"
    DSP = "dsp"
    ASLP = "aslp"
    DSLP = "dslp"

    # the common names pick a default resolution of nondeterminism
    WP = "awp"
    SP = "asp"
    WLP = "dwlp"
    SLP = "dslp"

    @property
    def forward(self) -> bool:
        return self.value in ("asp", "dsp", "aslp", "dslp")

    @property
    def angelic(self) -> bool:
        return self.value[0] == "a"

    @property
    def liberal(self) -> bool:
        return self.value.endswith("lp")

    def apply(self, r: Relation, p: Predicate) -> Predicate:
        return _BY_KIND[self.value](r, p)


_BY_KIND = {
    "awp": awp,
    "dwp": dwp,
    "awlp": awlp,
    "dwlp": dwlp,
    "asp": asp,
    "dsp": dsp,
    "aslp": aslp,
    "dslp": dslp,
}

wp = awp
sp = asp
wlp = dwlp
slp = dslp
