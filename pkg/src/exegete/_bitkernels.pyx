# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bit-matrix kernels, the fast twin of _purekernels.

Same contract, same violation encoding; _purekernels carries the
documentation. Rows cross the boundary as Python ints and live here
as little-endian arrays of 64-bit words. Sweep models (n <= 8) pack a
whole relation into one word, so the model-enumeration loops run
without touching Python objects at all.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc
from libc.stdint cimport uint64_t
from libc.string cimport memcmp, memset

from . import _purekernels as _pure

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int exegete_ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    #else
    static inline int exegete_ctz64(unsigned long long x) {
        int c = 0;
        while (!(x & 1ULL)) { x >>= 1; ++c; }
        return c;
    }
    #endif
    """
    int exegete_ctz64(unsigned long long x) nogil

SWEEP_MAX_STATES = _pure.SWEEP_MAX_STATES
LAW_CHECK_COUNT = _pure.LAW_CHECK_COUNT
IMPLICATION_CHECKS = _pure.IMPLICATION_CHECKS

violation_checks = _pure.violation_checks


# --- conversions between Python ints and word arrays ---

cdef inline int _words_for(int n) nogil:
    return (n + 63) >> 6


cdef int _fill_words(object value, uint64_t *out, int words) except -1:
    cdef bytes raw = value.to_bytes(words * 8, "little")
    cdef const unsigned char *data = raw
    cdef int w, k
    cdef uint64_t acc
    for w in range(words):
        acc = 0
        for k in range(8):
            acc |= (<uint64_t> data[w * 8 + k]) << (8 * k)
        out[w] = acc
    return 0


cdef object _int_from_words(const uint64_t *words_ptr, int words):
    cdef bytearray raw = bytearray(words * 8)
    cdef int w, k
    cdef uint64_t value
    for w in range(words):
        value = words_ptr[w]
        for k in range(8):
            raw[w * 8 + k] = <unsigned char> ((value >> (8 * k)) & 0xFF)
    return int.from_bytes(bytes(raw), "little")


cdef uint64_t *_rows_to_c(object rows, int n, int words) except NULL:
    cdef uint64_t *out = <uint64_t *> PyMem_Malloc(n * words * sizeof(uint64_t))
    if out == NULL:
        raise MemoryError()
    cdef int s
    try:
        for s in range(n):
            _fill_words(rows[s], &out[s * words], words)
    except BaseException:
        PyMem_Free(out)
        raise
    return out


cdef list _rows_to_py(const uint64_t *rows, int n, int words):
    cdef list out = []
    cdef int s
    for s in range(n):
        out.append(_int_from_words(&rows[s * words], words))
    return out


# --- structural operations on word arrays ---

cdef void _compose_c(
    const uint64_t *rows_r, const uint64_t *rows_s, uint64_t *out, int n, int words
) nogil:
    cdef int s, w, t, base, k
    cdef uint64_t word
    memset(out, 0, n * words * sizeof(uint64_t))
    for s in range(n):
        for w in range(words):
            word = rows_r[s * words + w]
            base = w << 6
            while word:
                t = base + exegete_ctz64(word)
                word &= word - 1
                for k in range(words):
                    out[s * words + k] |= rows_s[t * words + k]


def compose(rows_r, rows_s, int n):
    cdef int words = _words_for(n)
    cdef uint64_t *r = _rows_to_c(rows_r, n, words)
    cdef uint64_t *s = NULL
    cdef uint64_t *out = NULL
    try:
        s = _rows_to_c(rows_s, n, words)
        out = <uint64_t *> PyMem_Malloc(n * words * sizeof(uint64_t))
        if out == NULL:
            raise MemoryError()
        with nogil:
            _compose_c(r, s, out, n, words)
        return _rows_to_py(out, n, words)
    finally:
        PyMem_Free(r)
        if s != NULL:
            PyMem_Free(s)
        if out != NULL:
            PyMem_Free(out)


def star(rows, int n):
    cdef int words = _words_for(n)
    cdef int total = n * words
    cdef uint64_t *m = _rows_to_c(rows, n, words)
    cdef uint64_t *sq = NULL
    cdef uint64_t *swap
    cdef int s
    cdef bint fixed = False
    try:
        sq = <uint64_t *> PyMem_Malloc(total * sizeof(uint64_t))
        if sq == NULL:
            raise MemoryError()
        for s in range(n):
            m[s * words + (s >> 6)] |= (<uint64_t> 1) << (s & 63)
        with nogil:
            while not fixed:
                _compose_c(m, m, sq, n, words)
                fixed = memcmp(m, sq, total * sizeof(uint64_t)) == 0
                swap = m
                m = sq
                sq = swap
        return _rows_to_py(m, n, words)
    finally:
        PyMem_Free(m)
        if sq != NULL:
            PyMem_Free(sq)


def converse(rows, int n):
    cdef int words = _words_for(n)
    cdef uint64_t *r = _rows_to_c(rows, n, words)
    cdef uint64_t *out = NULL
    cdef int s, w, t, base
    cdef uint64_t word
    try:
        out = <uint64_t *> PyMem_Malloc(n * words * sizeof(uint64_t))
        if out == NULL:
            raise MemoryError()
        memset(out, 0, n * words * sizeof(uint64_t))
        for s in range(n):
            for w in range(words):
                word = r[s * words + w]
                base = w << 6
                while word:
                    t = base + exegete_ctz64(word)
                    word &= word - 1
                    out[t * words + (s >> 6)] |= (<uint64_t> 1) << (s & 63)
        return _rows_to_py(out, n, words)
    finally:
        PyMem_Free(r)
        if out != NULL:
            PyMem_Free(out)


def domain_mask(rows, int n):
    cdef int words = _words_for(n)
    cdef uint64_t *r = _rows_to_c(rows, n, words)
    cdef uint64_t *mask = NULL
    cdef int s, w
    cdef bint any_bit
    try:
        mask = <uint64_t *> PyMem_Malloc(words * sizeof(uint64_t))
        if mask == NULL:
            raise MemoryError()
        memset(mask, 0, words * sizeof(uint64_t))
        for s in range(n):
            any_bit = False
            for w in range(words):
                if r[s * words + w]:
                    any_bit = True
                    break
            if any_bit:
                mask[s >> 6] |= (<uint64_t> 1) << (s & 63)
        return _int_from_words(mask, words)
    finally:
        PyMem_Free(r)
        if mask != NULL:
            PyMem_Free(mask)


def codomain_mask(rows, int n):
    cdef int words = _words_for(n)
    cdef uint64_t *r = _rows_to_c(rows, n, words)
    cdef uint64_t *mask = NULL
    cdef int s, w
    try:
        mask = <uint64_t *> PyMem_Malloc(words * sizeof(uint64_t))
        if mask == NULL:
            raise MemoryError()
        memset(mask, 0, words * sizeof(uint64_t))
        for s in range(n):
            for w in range(words):
                mask[w] |= r[s * words + w]
        return _int_from_words(mask, words)
    finally:
        PyMem_Free(r)
        if mask != NULL:
            PyMem_Free(mask)


def preimage_some(rows, bits, int n):
    cdef int words = _words_for(n)
    cdef uint64_t *r = _rows_to_c(rows, n, words)
    cdef uint64_t *target = NULL
    cdef uint64_t *mask = NULL
    cdef int s, w
    cdef bint hit
    try:
        target = <uint64_t *> PyMem_Malloc(words * sizeof(uint64_t))
        mask = <uint64_t *> PyMem_Malloc(words * sizeof(uint64_t))
        if target == NULL or mask == NULL:
            raise MemoryError()
        _fill_words(bits, target, words)
        memset(mask, 0, words * sizeof(uint64_t))
        for s in range(n):
            hit = False
            for w in range(words):
                if r[s * words + w] & target[w]:
                    hit = True
                    break
            if hit:
                mask[s >> 6] |= (<uint64_t> 1) << (s & 63)
        return _int_from_words(mask, words)
    finally:
        PyMem_Free(r)
        if target != NULL:
            PyMem_Free(target)
        if mask != NULL:
            PyMem_Free(mask)


def preimage_all(rows, bits, int n):
    cdef int words = _words_for(n)
    cdef uint64_t *r = _rows_to_c(rows, n, words)
    cdef uint64_t *target = NULL
    cdef uint64_t *mask = NULL
    cdef int s, w
    cdef bint inside
    try:
        target = <uint64_t *> PyMem_Malloc(words * sizeof(uint64_t))
        mask = <uint64_t *> PyMem_Malloc(words * sizeof(uint64_t))
        if target == NULL or mask == NULL:
            raise MemoryError()
        _fill_words(bits, target, words)
        memset(mask, 0, words * sizeof(uint64_t))
        for s in range(n):
            inside = True
            for w in range(words):
                if r[s * words + w] & ~target[w]:
                    inside = False
                    break
            if inside:
                mask[s >> 6] |= (<uint64_t> 1) << (s & 63)
        return _int_from_words(mask, words)
    finally:
        PyMem_Free(r)
        if target != NULL:
            PyMem_Free(target)
        if mask != NULL:
            PyMem_Free(mask)


def image_some(rows, bits, int n):
    cdef int words = _words_for(n)
    cdef uint64_t *r = _rows_to_c(rows, n, words)
    cdef uint64_t *source = NULL
    cdef uint64_t *acc = NULL
    cdef int s, w, base, k
    cdef uint64_t word
    try:
        source = <uint64_t *> PyMem_Malloc(words * sizeof(uint64_t))
        acc = <uint64_t *> PyMem_Malloc(words * sizeof(uint64_t))
        if source == NULL or acc == NULL:
            raise MemoryError()
        _fill_words(bits, source, words)
        memset(acc, 0, words * sizeof(uint64_t))
        for w in range(words):
            word = source[w]
            base = w << 6
            while word:
                s = base + exegete_ctz64(word)
                word &= word - 1
                for k in range(words):
                    acc[k] |= r[s * words + k]
        return _int_from_words(acc, words)
    finally:
        PyMem_Free(r)
        if source != NULL:
            PyMem_Free(source)
        if acc != NULL:
            PyMem_Free(acc)


# --- the law kernel on single-word models (n <= 8) ---

cdef inline void _comp8(
    const uint64_t *x, const uint64_t *y, uint64_t *out, int n
) nogil:
    cdef int s, t
    cdef uint64_t word, acc
    for s in range(n):
        acc = 0
        word = x[s]
        while word:
            t = exegete_ctz64(word)
            word &= word - 1
            acc |= y[t]
        out[s] = acc


cdef inline bint _eq8(const uint64_t *x, const uint64_t *y, int n) nogil:
    cdef int s
    for s in range(n):
        if x[s] != y[s]:
            return False
    return True


cdef inline bint _leq(uint64_t x, uint64_t y) nogil:
    return (x & ~y) == 0


cdef int _law_bits_c(int n, uint64_t rel_code, uint64_t b, uint64_t c) nogil:
    cdef uint64_t full = ((<uint64_t> 1) << n) - 1
    cdef uint64_t nb = b ^ full
    cdef uint64_t nc = c ^ full
    cdef uint64_t rows[8]
    cdef uint64_t tb[8]
    cdef uint64_t tc[8]
    cdef uint64_t topr[8]
    cdef uint64_t bp[8]
    cdef uint64_t bpc[8]
    cdef uint64_t pc[8]
    cdef uint64_t other[8]
    cdef int s
    cdef uint64_t row, bit

    cdef uint64_t awp_c = 0, awp_nc = 0, dwlp_c = 0, dwlp_nc = 0
    cdef uint64_t asp_b = 0, from_nb = 0
    cdef uint64_t dom = 0, cod = 0

    for s in range(n):
        row = (rel_code >> (s * n)) & full
        rows[s] = row
        bit = (<uint64_t> 1) << s
        tb[s] = bit if (b >> s) & 1 else 0
        tc[s] = bit if (c >> s) & 1 else 0
        topr[s] = full
        if row & c:
            awp_c |= bit
        if row & nc:
            awp_nc |= bit
        if not (row & nc):
            dwlp_c |= bit
        if not (row & c):
            dwlp_nc |= bit
        if (b >> s) & 1:
            asp_b |= row
        else:
            from_nb |= row
        if row:
            dom |= bit
        cod |= row

    # states reached only from inside the given set, vacuous included
    cdef uint64_t dslp_b = full ^ from_nb
    cdef uint64_t dslp_nb = full ^ asp_b
    cdef uint64_t dwp_c = dwlp_c & dom
    cdef uint64_t awlp_c = awp_c | (full ^ dom)
    cdef uint64_t aslp_b = asp_b | (full ^ cod)

    # equation sides by real composition
    _comp8(tb, rows, bp, n)
    _comp8(bp, tc, bpc, n)
    _comp8(rows, tc, pc, n)

    cdef bint eq_pc, eq_inc, eq_atc, eq_pinc, eq_tpc, eq_bpt
    cdef uint64_t top_bpc[8]
    cdef uint64_t bpc_top[8]
    _comp8(topr, bpc, top_bpc, n)
    _comp8(bpc, topr, bpc_top, n)

    _comp8(topr, bp, other, n)
    eq_pc = _eq8(top_bpc, other, n)
    _comp8(topr, tc, other, n)
    eq_inc = _eq8(top_bpc, other, n)
    _comp8(tb, topr, other, n)
    eq_atc = _eq8(bpc_top, other, n)
    _comp8(pc, topr, other, n)
    eq_pinc = _eq8(bpc_top, other, n)
    _comp8(topr, pc, other, n)
    eq_tpc = _eq8(top_bpc, other, n)
    _comp8(bp, topr, other, n)
    eq_bpt = _eq8(bpc_top, other, n)

    cdef int bits = 0

    # order matches _purekernels.law_bits exactly
    bits |= (<int> _leq(b, dwlp_c)) << 0
    bits |= (<int> _leq(asp_b, c)) << 1
    bits |= (<int> _leq(awp_c, b)) << 2
    bits |= (<int> _leq(c, dslp_b)) << 3
    bits |= (<int> _leq(b, dwlp_c)) << 4
    bits |= (<int> _leq(awp_nc, nb)) << 5
    bits |= (<int> _leq(b, awp_c)) << 6
    bits |= (<int> _leq(dwlp_nc, nb)) << 7
    bits |= (<int> _leq(asp_b, c)) << 8
    bits |= (<int> _leq(nc, dslp_nb)) << 9
    bits |= (<int> _leq(c, asp_b)) << 10
    bits |= (<int> _leq(dslp_nb, nc)) << 11
    bits |= (<int> eq_pc) << 12
    bits |= (<int> _leq(asp_b, c)) << 13
    bits |= (<int> eq_inc) << 14
    bits |= (<int> _leq(c, asp_b)) << 15
    bits |= (<int> eq_atc) << 16
    bits |= (<int> _leq(b, awp_c)) << 17
    bits |= (<int> eq_pinc) << 18
    bits |= (<int> _leq(awp_c, b)) << 19
    bits |= (<int> eq_tpc) << 20
    bits |= (<int> _leq(c, aslp_b)) << 21
    bits |= (<int> eq_bpt) << 22
    bits |= (<int> _leq(b, awlp_c)) << 23
    bits |= (<int> _leq(b, dwp_c)) << 24
    bits |= (<int> eq_atc) << 25
    return bits


cdef inline int _violation_mask(int bits) nogil:
    # bit k set iff check k is violated; check 12 is one-way
    cdef int mask = 0
    cdef int k, lhs, rhs
    for k in range(13):
        lhs = (bits >> (2 * k)) & 1
        rhs = (bits >> (2 * k + 1)) & 1
        if k == 12:
            if lhs and not rhs:
                mask |= 1 << k
        elif lhs != rhs:
            mask |= 1 << k
    return mask


def law_bits(int n, rel_code, b, c):
    if n > 8:
        return _pure.law_bits(n, rel_code, b, c)
    return _law_bits_c(n, rel_code, b, c)


def sweep_exhaustive(int n, int cap):
    # n*n must stay below 64 so the relation count fits a word
    if n > 7:
        raise ValueError("exhaustive sweeps support at most 7 states")
    cdef uint64_t rel_count = (<uint64_t> 1) << (n * n)
    cdef uint64_t full = ((<uint64_t> 1) << n) - 1
    cdef uint64_t rel_code, b, c
    cdef int mask, k
    cdef long long models = 0
    cdef long long totals[13]
    cdef list found = []
    cdef int n_found = 0
    for k in range(13):
        totals[k] = 0
    for rel_code in range(rel_count):
        for b in range(full + 1):
            for c in range(full + 1):
                mask = _violation_mask(_law_bits_c(n, rel_code, b, c))
                models += 1
                if mask:
                    for k in range(13):
                        if mask & (1 << k):
                            totals[k] += 1
                            if n_found < cap:
                                found.append((rel_code, b, c, k))
                                n_found += 1
    return models, [totals[k] for k in range(13)], found


def sweep_models(int n, codes, int cap):
    if n > 8:
        raise ValueError("model sweeps support at most 8 states")
    cdef uint64_t rel_code, b, c
    cdef int mask, k
    cdef long long models = 0
    cdef long long totals[13]
    cdef list found = []
    cdef int n_found = 0
    for k in range(13):
        totals[k] = 0
    for item in codes:
        rel_code = item[0]
        b = item[1]
        c = item[2]
        mask = _violation_mask(_law_bits_c(n, rel_code, b, c))
        models += 1
        if mask:
            for k in range(13):
                if mask & (1 << k):
                    totals[k] += 1
                    if n_found < cap:
                        found.append((rel_code, b, c, k))
                        n_found += 1
    return models, [totals[k] for k in range(13)], found
