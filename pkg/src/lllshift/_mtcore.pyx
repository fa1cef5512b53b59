# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled solver kernel.

Twin of ``_mtcore_py``; consumes the flat int64 packing of a lowered
instance produced by ``kernel._pack_for_c`` and replays the exact same
SplitMix64 stream, so trajectories match the Python lane bit for bit.
"""

from libc.stdint cimport int64_t, uint64_t


cdef inline uint64_t _next64(uint64_t *state) nogil:
    cdef uint64_t z
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15ULL
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline int64_t _below(uint64_t *state, int64_t k, uint64_t mask) nogil:
    cdef uint64_t v
    while True:
        v = _next64(state) & mask
        if <int64_t>v < k:
            return <int64_t>v


cdef inline uint64_t _mask_for(int64_t k) nogil:
    cdef uint64_t m = 0
    cdef int64_t top = k - 1
    while top > 0:
        m = (m << 1) | 1
        top >>= 1
    return m


cdef bint _violated(
    int64_t e,
    const int64_t[::1] kinds,
    const int64_t[::1] dom_off,
    const int64_t[::1] dom_idx,
    const int64_t[::1] row_cnt,
    const int64_t[::1] row_off,
    const int64_t[::1] rows_flat,
    const int64_t[::1] ev_blk_off,
    const int64_t[::1] blk_pos_off,
    const int64_t[::1] blk_var,
    const int64_t[::1] blk_val,
    const int64_t[::1] values,
) nogil:
    cdef int64_t width, r, j, base, b, i
    cdef bint match
    if kinds[e] == 0:  # explicit rows
        width = dom_off[e + 1] - dom_off[e]
        for r in range(row_cnt[e]):
            base = row_off[e] + r * width
            match = True
            for j in range(width):
                if values[dom_idx[dom_off[e] + j]] != rows_flat[base + j]:
                    match = False
                    break
            if match:
                return True
        return False
    # blocks: violated iff no block is fully matched
    for b in range(ev_blk_off[e], ev_blk_off[e + 1]):
        match = True
        for i in range(blk_pos_off[b], blk_pos_off[b + 1]):
            if values[blk_var[i]] != blk_val[i]:
                match = False
                break
        if match:
            return False
    return True


def first_violated(
    const int64_t[::1] kinds,
    const int64_t[::1] dom_off,
    const int64_t[::1] dom_idx,
    const int64_t[::1] row_cnt,
    const int64_t[::1] row_off,
    const int64_t[::1] rows_flat,
    const int64_t[::1] ev_blk_off,
    const int64_t[::1] blk_pos_off,
    const int64_t[::1] blk_var,
    const int64_t[::1] blk_val,
    const int64_t[::1] values,
):
    cdef int64_t e
    cdef int64_t m = kinds.shape[0]
    for e in range(m):
        if _violated(
            e, kinds, dom_off, dom_idx, row_cnt, row_off, rows_flat,
            ev_blk_off, blk_pos_off, blk_var, blk_val, values,
        ):
            return e
    return -1


def mt_solve(
    const int64_t[::1] kinds,
    const int64_t[::1] dom_off,
    const int64_t[::1] dom_idx,
    const int64_t[::1] row_cnt,
    const int64_t[::1] row_off,
    const int64_t[::1] rows_flat,
    const int64_t[::1] ev_blk_off,
    const int64_t[::1] blk_pos_off,
    const int64_t[::1] blk_var,
    const int64_t[::1] blk_val,
    int64_t n_vars,
    int64_t k,
    uint64_t seed,
    int64_t max_resamples,
    int64_t[::1] values,
):
    """Fill ``values`` and return (status, resamples); status 0 = solved."""
    cdef uint64_t state = seed
    cdef uint64_t mask = _mask_for(k)
    cdef int64_t m = kinds.shape[0]
    cdef int64_t v, e, j, resamples
    cdef int status
    resamples = 0
    status = 1
    with nogil:
        for v in range(n_vars):
            values[v] = _below(&state, k, mask)
        while True:
            e = -1
            for j in range(m):
                if _violated(
                    j, kinds, dom_off, dom_idx, row_cnt, row_off, rows_flat,
                    ev_blk_off, blk_pos_off, blk_var, blk_val, values,
                ):
                    e = j
                    break
            if e < 0:
                status = 0
                break
            if resamples >= max_resamples:
                status = 1
                break
            for j in range(dom_off[e], dom_off[e + 1]):
                values[dom_idx[j]] = _below(&state, k, mask)
            resamples += 1
    return status, resamples
