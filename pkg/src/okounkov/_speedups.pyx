# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled semigroup enumeration kernels (contract of ``_speedups_py``).

Codes must fit in an unsigned 64-bit integer; the wrapper in
``okounkov.kernels`` falls back to the pure-Python twin otherwise.
Per-degree layers are kept as sorted C++ vectors and combined with
merge/unique passes, so the whole dynamic program runs without touching
Python objects.
"""

from libc.stdint cimport uint64_t
from libcpp.vector cimport vector
from libcpp.algorithm cimport sort as cpp_sort

BACKEND = "compiled"
MAX_CODE = 2**64 - 1


cdef void _merge_shifted(vector[uint64_t]& out, vector[vector[uint64_t]]& layers,
                         long[:] degs, unsigned long long[:] codes,
                         long d) noexcept nogil:
    cdef size_t i, n
    cdef long dg, src
    cdef uint64_t cg
    cdef vector[uint64_t] merged, tmp
    cdef size_t a, b, na, nb
    out.clear()
    n = degs.shape[0]
    for i in range(n):
        dg = degs[i]
        src = d - dg
        if src < 0 or layers[src].size() == 0:
            continue
        cg = codes[i]
        # shifted source stays sorted; merge with the accumulator
        na = out.size()
        nb = layers[src].size()
        if na == 0:
            out.resize(nb)
            for b in range(nb):
                out[b] = layers[src][b] + cg
            continue
        tmp.clear()
        tmp.reserve(na + nb)
        a = 0
        b = 0
        while a < na and b < nb:
            if out[a] < layers[src][b] + cg:
                tmp.push_back(out[a]); a += 1
            elif out[a] > layers[src][b] + cg:
                tmp.push_back(layers[src][b] + cg); b += 1
            else:
                tmp.push_back(out[a]); a += 1; b += 1
        while a < na:
            tmp.push_back(out[a]); a += 1
        while b < nb:
            tmp.push_back(layers[src][b] + cg); b += 1
        out.swap(tmp)


def grow_counts(gen_degs, gen_codes, long max_degree, long window):
    """Hilbert-function values |S_d| for d = 0..max_degree."""
    import array
    cdef long[:] degs = array.array("l", gen_degs)
    cdef unsigned long long[:] codes = array.array("Q", gen_codes)
    cdef vector[vector[uint64_t]] layers
    cdef vector[uint64_t] layer
    cdef long d, drop
    layers.resize(max_degree + 1)
    layers[0].push_back(0)
    counts = [0] * (max_degree + 1)
    counts[0] = 1
    for d in range(1, max_degree + 1):
        with nogil:
            _merge_shifted(layer, layers, degs, codes, d)
            layers[d].swap(layer)
        counts[d] = layers[d].size()
        drop = d - window
        if drop > 0:
            layers[drop].clear()
            layers[drop].shrink_to_fit()
    return counts


def grow_sets(gen_degs, gen_codes, long max_degree):
    """Sorted per-degree code lists for d = 0..max_degree."""
    import array
    cdef long[:] degs = array.array("l", gen_degs)
    cdef unsigned long long[:] codes = array.array("Q", gen_codes)
    cdef vector[vector[uint64_t]] layers
    cdef vector[uint64_t] layer
    cdef long d
    cdef size_t i
    layers.resize(max_degree + 1)
    layers[0].push_back(0)
    for d in range(1, max_degree + 1):
        with nogil:
            _merge_shifted(layer, layers, degs, codes, d)
            layers[d].swap(layer)
    out = []
    for d in range(max_degree + 1):
        out.append([layers[d][i] for i in range(layers[d].size())])
    return out
