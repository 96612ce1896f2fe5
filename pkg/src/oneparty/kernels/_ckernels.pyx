# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batch kernels: syndrome extraction and coset-leader decoding on
packed uint64 words."""
import numpy as np

from libc.stdint cimport uint8_t, uint64_t


cdef extern from *:
    int __builtin_parityll(unsigned long long) nogil


def pack_bits(const uint8_t[:, ::1] bits):
    cdef Py_ssize_t n_rows = bits.shape[0], n = bits.shape[1], i, j
    if n > 64:
        raise ValueError("cannot pack more than 64 bits")
    out_arr = np.empty(n_rows, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef uint64_t acc
    with nogil:
        for i in range(n_rows):
            acc = 0
            for j in range(n):
                acc |= (<uint64_t>(bits[i, j] & 1)) << j
            out[i] = acc
    return out_arr


def pauli_masks(const uint8_t[:, ::1] codes):
    cdef Py_ssize_t n_rows = codes.shape[0], n = codes.shape[1], i, j
    if n > 64:
        raise ValueError("cannot pack more than 64 bits")
    x_arr = np.empty(n_rows, dtype=np.uint64)
    z_arr = np.empty(n_rows, dtype=np.uint64)
    cdef uint64_t[::1] xo = x_arr
    cdef uint64_t[::1] zo = z_arr
    cdef uint64_t ax, az
    cdef uint8_t c
    with nogil:
        for i in range(n_rows):
            ax = 0
            az = 0
            for j in range(n):
                c = codes[i, j]
                ax |= (<uint64_t>(c & 1)) << j
                az |= (<uint64_t>((c >> 1) & 1)) << j
            xo[i] = ax
            zo[i] = az
    return x_arr, z_arr


def syndromes(const uint64_t[::1] words, const uint64_t[::1] rows):
    cdef Py_ssize_t n_words = words.shape[0], r = rows.shape[0], i, j
    out_arr = np.empty(n_words, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef uint64_t s, w
    with nogil:
        for i in range(n_words):
            w = words[i]
            s = 0
            for j in range(r):
                s |= (<uint64_t>__builtin_parityll(w & rows[j])) << j
            out[i] = s
    return out_arr


def decode_logical(const uint64_t[::1] words, const uint64_t[::1] rows,
                   const uint64_t[::1] leaders, const uint64_t[::1] proj):
    cdef Py_ssize_t n_words = words.shape[0], r = rows.shape[0], k = proj.shape[0], i, j
    out_arr = np.empty(n_words, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef uint64_t s, w, m
    with nogil:
        for i in range(n_words):
            w = words[i]
            s = 0
            for j in range(r):
                s |= (<uint64_t>__builtin_parityll(w & rows[j])) << j
            w = w ^ leaders[s]
            m = 0
            for j in range(k):
                m |= (<uint64_t>__builtin_parityll(w & proj[j])) << j
            out[i] = m
    return out_arr
