"""Pure-Python bit-matrix kernels.

A relation over n states is a list of n row bitsets; row s holds bit t
exactly when the pair (s, t) is in the relation. Rows are plain Python
ints, so any state count works here. The compiled twin in
_bitkernels.pyx implements the same contract; kernels.py picks one of
the two at import time, which is why every function keeps the explicit
state-count argument even where the pure code could infer it.

Alongside the structural operations this module carries the law
kernel: law_bits() evaluates both sides of every catalogued law on one
model (a relation plus two predicates, all packed into ints) and the
sweep functions fold it over model streams. The violation encoding is
shared with the compiled twin and decoded by laws.py.
"""

from __future__ import annotations

# Sweeps pack a whole relation into one machine word in the compiled
# twin, so the model size is capped independently of the general cap.
SWEEP_MAX_STATES = 8

# law_bits() reports 13 checks, two bits each: bit 2k is the left side
# of check k, bit 2k+1 the right side. Checks 0..11 assert equivalence
# of the two sides, check 12 asserts left implies right. laws.py names
# the checks; the order here is load-bearing.
LAW_CHECK_COUNT = 13
IMPLICATION_CHECKS = frozenset([12])


def compose(rows_r, rows_s, n):
    """Relational composition: out[s] collects rows_s[t] for t in rows_r[s]."""
    out = []
    for row in rows_r:
        acc = 0
        while row:
            low = row & -row
            acc |= rows_s[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return out


def star(rows, n):
    """Reflexive-transitive closure by repeated squaring of (identity | rows).

    Squaring doubles the covered path length, so the loop stabilises
    after at most ceil(log2(n)) + 1 rounds.
    """
    m = [rows[s] | (1 << s) for s in range(n)]
    while True:
        sq = compose(m, m, n)
        if sq == m:
            return m
        m = sq


def converse(rows, n):
    out = [0] * n
    for s, row in enumerate(rows):
        bit = 1 << s
        while row:
            low = row & -row
            out[low.bit_length() - 1] |= bit
            row ^= low
    return out


def domain_mask(rows, n):
    """Bitset of states with at least one successor."""
    mask = 0
    for s, row in enumerate(rows):
        if row:
            mask |= 1 << s
    return mask


def codomain_mask(rows, n):
    """Bitset of states with at least one predecessor."""
    mask = 0
    for row in rows:
        mask |= row
    return mask


def preimage_some(rows, bits, n):
    """States with at least one successor inside bits."""
    mask = 0
    for s, row in enumerate(rows):
        if row & bits:
            mask |= 1 << s
    return mask


def preimage_all(rows, bits, n):
    """States whose successors all lie inside bits (vacuously included)."""
    mask = 0
    for s, row in enumerate(rows):
        if row & ~bits == 0:
            mask |= 1 << s
    return mask


def image_some(rows, bits, n):
    """States with at least one predecessor inside bits."""
    acc = 0
    while bits:
        low = bits & -bits
        acc |= rows[low.bit_length() - 1]
        bits ^= low
    return acc


def _image_only_from(rows, bits, n, full):
    """States all of whose predecessors lie inside bits (unreached included)."""
    outside = 0
    leak = full ^ bits
    while leak:
        low = leak & -leak
        outside |= rows[low.bit_length() - 1]
        leak ^= low
    return full ^ outside


def _leq(x, y):
    return x & ~y == 0


def law_bits(n, rel_code, b, c):
    """Evaluate both sides of all 13 law checks on one packed model.

    rel_code packs the relation row-major: bit s*n+t is the pair (s, t).
    b and c are predicate bitsets. Each side of each check is computed
    from its own definition; the equation sides run the actual
    top-test-program compositions rather than any shortcut, so the two
    routes stay independent.
    """
    full = (1 << n) - 1
    rows = [(rel_code >> (s * n)) & full for s in range(n)]
    nb = b ^ full
    nc = c ^ full

    # transformer sides
    awp_c = preimage_some(rows, c, n)
    awp_nc = preimage_some(rows, nc, n)
    dwlp_c = preimage_all(rows, c, n)
    dwlp_nc = preimage_all(rows, nc, n)
    asp_b = image_some(rows, b, n)
    dslp_b = _image_only_from(rows, b, n, full)
    dslp_nb = _image_only_from(rows, nb, n, full)
    dom = domain_mask(rows, n)
    cod = codomain_mask(rows, n)
    dwp_c = dwlp_c & dom
    awlp_c = awp_c | (full ^ dom)
    aslp_b = asp_b | (full ^ cod)

    # equation sides: real compositions of test, program, and top rows
    tb = [(1 << s) if (b >> s) & 1 else 0 for s in range(n)]
    tc = [(1 << s) if (c >> s) & 1 else 0 for s in range(n)]
    top = [full] * n
    bp = compose(tb, rows, n)
    bpc = compose(bp, tc, n)
    pc = compose(rows, tc, n)
    top_bpc = compose(top, bpc, n)
    bpc_top = compose(bpc, top, n)
    eq_pc = top_bpc == compose(top, bp, n)
    eq_inc = top_bpc == compose(top, tc, n)
    eq_atc = bpc_top == compose(tb, top, n)
    eq_pinc = bpc_top == compose(pc, top, n)
    eq_tpc = top_bpc == compose(top, pc, n)
    eq_bpt = bpc_top == compose(bp, top, n)

    sides = (
        # galois wlp-sp and wp-slp
        (_leq(b, dwlp_c), _leq(asp_b, c)),
        (_leq(awp_c, b), _leq(c, dslp_b)),
        # contrapositive partner edges
        (_leq(b, dwlp_c), _leq(awp_nc, nb)),
        (_leq(b, awp_c), _leq(dwlp_nc, nb)),
        (_leq(asp_b, c), _leq(nc, dslp_nb)),
        (_leq(c, asp_b), _leq(dslp_nb, nc)),
        # equation encodings against their transformer characterisations
        (eq_pc, _leq(asp_b, c)),
        (eq_inc, _leq(c, asp_b)),
        (eq_atc, _leq(b, awp_c)),
        (eq_pinc, _leq(awp_c, b)),
        (eq_tpc, _leq(c, aslp_b)),
        (eq_bpt, _leq(b, awlp_c)),
        # demonic-total is one-way only: it implies the angelic equation
        (_leq(b, dwp_c), eq_atc),
    )
    bits = 0
    for k, (lhs, rhs) in enumerate(sides):
        if lhs:
            bits |= 1 << (2 * k)
        if rhs:
            bits |= 1 << (2 * k + 1)
    return bits


def violation_checks(bits):
    """Indices of checks whose two sides disagree in a law_bits result."""
    out = []
    for k in range(LAW_CHECK_COUNT):
        lhs = (bits >> (2 * k)) & 1
        rhs = (bits >> (2 * k + 1)) & 1
        if k in IMPLICATION_CHECKS:
            if lhs and not rhs:
                out.append(k)
        elif lhs != rhs:
            out.append(k)
    return out


def sweep_exhaustive(n, cap):
    """Check every model of size n: all relations times all b, c pairs.

    Returns (models_checked, totals, violations): totals counts
    violations per check index, violations holds at most cap
    (rel_code, b, c, check) tuples in enumeration order (rel_code
    outermost, then b, then c).
    """
    full = (1 << n) - 1
    models = 0
    totals = [0] * LAW_CHECK_COUNT
    found = []
    for rel_code in range(1 << (n * n)):
        for b in range(full + 1):
            for c in range(full + 1):
                bad = violation_checks(law_bits(n, rel_code, b, c))
                for k in bad:
                    totals[k] += 1
                    if len(found) < cap:
                        found.append((rel_code, b, c, k))
                models += 1
    return models, totals, found


def sweep_models(n, codes, cap):
    """Check an explicit model stream of (rel_code, b, c) triples."""
    models = 0
    totals = [0] * LAW_CHECK_COUNT
    found = []
    for rel_code, b, c in codes:
        bad = violation_checks(law_bits(n, rel_code, b, c))
        for k in bad:
            totals[k] += 1
            if len(found) < cap:
                found.append((rel_code, b, c, k))
        models += 1
    return models, totals, found
