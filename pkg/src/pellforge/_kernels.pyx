# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fiber scan; see ``_kernels_py`` for the reference semantics."""
from libc.stdlib cimport malloc, free
from libc.string cimport memset

ctypedef long long i64


cdef i64* _vandermonde(i64 p) except NULL:
    cdef i64* V = <i64*> malloc(p * p * sizeof(i64))
    if V == NULL:
        raise MemoryError()
    cdef i64 a, e, acc
    for a in range(p):
        acc = 1
        for e in range(p):
            V[a * p + e] = acc
            acc = acc * a % p
    return V


def vandermonde(p):
    return [[pow(a, e, p) for e in range(p)] for a in range(p)]


cdef void _table(i64* table, i64 size, const i64* ex, const i64* co, i64 nterms, int nvars, i64 p,
                 const i64* opow) noexcept nogil:
    cdef i64 t, idx, base
    cdef int j
    memset(table, 0, size * sizeof(i64))
    for t in range(nterms):
        base = t * nvars
        idx = 0
        for j in range(1, nvars):
            idx = idx * p + ex[base + j]
        table[idx] = (table[idx] + co[t] * opow[ex[base]]) % p


cdef void _transform(i64* vals, i64* out, i64 size, int m, i64 p, const i64* V) noexcept nogil:
    cdef i64 stride = 1, block, start, off, a, e, s
    cdef int axis
    cdef i64* tmp
    for axis in range(m):
        block = stride * p
        start = 0
        while start < size:
            for off in range(stride):
                for a in range(p):
                    s = 0
                    for e in range(p):
                        s += V[a * p + e] * vals[start + off + e * stride]
                    out[start + off + a * stride] = s % p
            start += block
        tmp = vals
        vals = out
        out = tmp
        stride = block
    if m % 2 == 1:
        # ping-pong ended in the scratch buffer; copy back to the caller's
        for a in range(size):
            out[a] = vals[a]


def fiber_table(exps, coeffs, int nvars, i64 p, i64 outer):
    cdef i64 size = p ** (nvars - 1)
    cdef i64 nterms = len(coeffs)
    cdef i64* ex = <i64*> malloc((nterms * nvars + 1) * sizeof(i64))
    cdef i64* co = <i64*> malloc((nterms + 1) * sizeof(i64))
    cdef i64* table = <i64*> malloc(size * sizeof(i64))
    cdef i64* opow = <i64*> malloc(p * sizeof(i64))
    cdef i64 i
    try:
        for i in range(nterms * nvars):
            ex[i] = exps[i]
        for i in range(nterms):
            co[i] = coeffs[i]
        opow[0] = 1
        for i in range(1, p):
            opow[i] = opow[i - 1] * outer % p
        _table(table, size, ex, co, nterms, nvars, p, opow)
        return [table[i] for i in range(size)]
    finally:
        free(ex); free(co); free(table); free(opow)


def transform(table, i64 p, int m, V=None):
    cdef i64 size = p ** m
    cdef i64* vals = <i64*> malloc(size * sizeof(i64))
    cdef i64* out = <i64*> malloc(size * sizeof(i64))
    cdef i64* Vc = _vandermonde(p)
    cdef i64 i
    try:
        for i in range(size):
            vals[i] = table[i]
        _transform(vals, out, size, m, p, Vc)
        return [vals[i] for i in range(size)]
    finally:
        free(vals); free(out); free(Vc)


def scan_fiber(polys, int nvars, i64 p, i64 outer):
    cdef int m = nvars - 1
    cdef i64 size = p ** m
    cdef i64* V = _vandermonde(p)
    cdef i64* table = <i64*> malloc(size * sizeof(i64))
    cdef i64* out = <i64*> malloc(size * sizeof(i64))
    cdef char* alive = <char*> malloc(size)
    cdef i64* opow = <i64*> malloc(p * sizeof(i64))
    cdef i64* ex
    cdef i64* co
    cdef i64 i, nterms, count = size
    try:
        memset(alive, 1, size)
        opow[0] = 1
        for i in range(1, p):
            opow[i] = opow[i - 1] * outer % p
        for exps, coeffs in polys:
            nterms = len(coeffs)
            ex = <i64*> malloc((nterms * nvars + 1) * sizeof(i64))
            co = <i64*> malloc((nterms + 1) * sizeof(i64))
            for i in range(nterms * nvars):
                ex[i] = exps[i]
            for i in range(nterms):
                co[i] = coeffs[i]
            with nogil:
                _table(table, size, ex, co, nterms, nvars, p, opow)
                _transform(table, out, size, m, p, V)
            free(ex); free(co)
            # _transform leaves the values in ``table`` whatever the parity of m
            count = 0
            for i in range(size):
                if alive[i] and table[i] != 0:
                    alive[i] = 0
                if alive[i]:
                    count += 1
            if count == 0:
                return []
        return [i for i in range(size) if alive[i]]
    finally:
        free(V); free(table); free(out); free(alive); free(opow)
