"""Backend selection for the bit-matrix kernels.

The compiled extension (_bitkernels) and the pure-Python module
(_purekernels) implement the same contract. By default the compiled
one is used when it imports; set EXEGETE_BACKEND=pure or
EXEGETE_BACKEND=compiled to force a choice. Forcing the compiled
backend when the extension is missing is an error rather than a
silent fallback.
"""

from __future__ import annotations

import os

from .errors import ExegeteError

_choice = os.environ.get("EXEGETE_BACKEND", "").strip().lower()
if _choice not in ("", "pure", "compiled"):
    raise ExegeteError(
        f"EXEGETE_BACKEND must be 'pure' or 'compiled', not {_choice!r}"
    )

if _choice == "pure":
    from . import _purekernels as _impl

    BACKEND = "pure"
elif _choice == "compiled":
    try:
        from . import _bitkernels as _impl
    except ImportError as exc:
        raise ExegeteError(
            "EXEGETE_BACKEND=compiled but the _bitkernels extension "
            "is not importable"
        ) from exc
    BACKEND = "compiled"
else:
    try:
        from . import _bitkernels as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _purekernels as _impl

        BACKEND = "pure"

SWEEP_MAX_STATES = _impl.SWEEP_MAX_STATES
LAW_CHECK_COUNT = _impl.LAW_CHECK_COUNT

compose = _impl.compose
star = _impl.star
converse = _impl.converse
domain_mask = _impl.domain_mask
codomain_mask = _impl.codomain_mask
preimage_some = _impl.preimage_some
preimage_all = _impl.preimage_all
image_some = _impl.image_some
law_bits = _impl.law_bits
violation_checks = _impl.violation_checks
sweep_exhaustive = _impl.sweep_exhaustive
sweep_models = _impl.sweep_models
