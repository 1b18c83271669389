# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: single-pass C loops over the batch bytes."""

import numpy as np

BACKEND = "cython"


cdef void _split_local(const long long[::1] src, int m, int w,
                       long long[::1] row, long long[::1] col, long long[::1] chan):
    # block-local byte index -> (row, col, channel) inside the block
    cdef Py_ssize_t t
    cdef long long s, p
    for t in range(src.shape[0]):
        s = src[t]
        p = s // 3
        chan[t] = s % 3
        row[t] = p // m
        col[t] = p % m


def apply_block_map(images, int m, src_hi, kind_hi, src_lo, kind_lo):
    """out[j] = LUT[kind_hi[j]][in[src_hi[j]]] << 4 | LUT[kind_lo[j]][in[src_lo[j]]] per block."""
    cdef const unsigned char[:, :, :, ::1] inp = images
    out_arr = np.empty_like(images)
    cdef unsigned char[:, :, :, ::1] out = out_arr
    cdef Py_ssize_t n = inp.shape[0], h = inp.shape[1], w = inp.shape[2]
    cdef int gh = <int>(h // m), gw = <int>(w // m)
    cdef int bpb = 3 * m * m

    v = np.arange(256, dtype=np.uint8)
    lut_arr = np.stack([v >> 4, 15 - (v >> 4), v & 0x0F, 15 - (v & 0x0F)])
    cdef const unsigned char[:, ::1] lut = lut_arr
    cdef const unsigned char[::1] kh = np.ascontiguousarray(kind_hi, dtype=np.uint8)
    cdef const unsigned char[::1] kl = np.ascontiguousarray(kind_lo, dtype=np.uint8)

    ident = np.arange(bpb, dtype=np.int64)
    cdef long long[::1] dr = np.empty(bpb, np.int64), dc = np.empty(bpb, np.int64), dk = np.empty(bpb, np.int64)
    cdef long long[::1] hr = np.empty(bpb, np.int64), hc = np.empty(bpb, np.int64), hk = np.empty(bpb, np.int64)
    cdef long long[::1] lr = np.empty(bpb, np.int64), lc = np.empty(bpb, np.int64), lk = np.empty(bpb, np.int64)
    _split_local(ident, m, w, dr, dc, dk)
    _split_local(np.ascontiguousarray(src_hi, dtype=np.int64), m, w, hr, hc, hk)
    _split_local(np.ascontiguousarray(src_lo, dtype=np.int64), m, w, lr, lc, lk)

    cdef Py_ssize_t i, by, bx, t, y0, x0
    cdef unsigned char vh, vl
    with nogil:
        for i in range(n):
            for by in range(gh):
                y0 = by * m
                for bx in range(gw):
                    x0 = bx * m
                    for t in range(bpb):
                        vh = inp[i, y0 + hr[t], x0 + hc[t], hk[t]]
                        vl = inp[i, y0 + lr[t], x0 + lc[t], lk[t]]
                        out[i, y0 + dr[t], x0 + dc[t], dk[t]] = (lut[kh[t], vh] << 4) | lut[kl[t], vl]
    return out_arr


def apply_block_gather(images, int m, src):
    """Per-block byte permutation: out[j] = in[src[j]]."""
    cdef const unsigned char[:, :, :, ::1] inp = images
    out_arr = np.empty_like(images)
    cdef unsigned char[:, :, :, ::1] out = out_arr
    cdef Py_ssize_t n = inp.shape[0], h = inp.shape[1], w = inp.shape[2]
    cdef int gh = <int>(h // m), gw = <int>(w // m)
    cdef int bpb = 3 * m * m

    ident = np.arange(bpb, dtype=np.int64)
    cdef long long[::1] dr = np.empty(bpb, np.int64), dc = np.empty(bpb, np.int64), dk = np.empty(bpb, np.int64)
    cdef long long[::1] sr = np.empty(bpb, np.int64), sc = np.empty(bpb, np.int64), sk = np.empty(bpb, np.int64)
    _split_local(ident, m, w, dr, dc, dk)
    _split_local(np.ascontiguousarray(src, dtype=np.int64), m, w, sr, sc, sk)

    cdef Py_ssize_t i, by, bx, t, y0, x0
    with nogil:
        for i in range(n):
            for by in range(gh):
                y0 = by * m
                for bx in range(gw):
                    x0 = bx * m
                    for t in range(bpb):
                        out[i, y0 + dr[t], x0 + dc[t], dk[t]] = inp[i, y0 + sr[t], x0 + sc[t], sk[t]]
    return out_arr


def apply_pixel_gather(images, src):
    """Whole-grid pixel permutation, RGB triples moving together."""
    cdef Py_ssize_t n = images.shape[0], h = images.shape[1], w = images.shape[2]
    flat_in = images.reshape(n, h * w, 3)
    out_arr = np.empty_like(images)
    cdef const unsigned char[:, :, ::1] inp = flat_in
    cdef unsigned char[:, :, ::1] out = out_arr.reshape(n, h * w, 3)
    cdef const long long[::1] s = np.ascontiguousarray(src, dtype=np.int64)
    cdef Py_ssize_t i, q, sq
    with nogil:
        for i in range(n):
            for q in range(h * w):
                sq = s[q]
                out[i, q, 0] = inp[i, sq, 0]
                out[i, q, 1] = inp[i, sq, 1]
                out[i, q, 2] = inp[i, sq, 2]
    return out_arr
