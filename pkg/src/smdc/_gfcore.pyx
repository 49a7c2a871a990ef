# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled finite-field stream kernel.

Mirrors smdc.gf.matmul_python exactly; both compute an (rows x cols)
matrix product over GF(2^e) applied to cols byte-streams of length n,
using doubled antilog tables so no modular reduction is needed.
"""


def matmul(const unsigned char[::1] mat, Py_ssize_t rows, Py_ssize_t cols,
           const unsigned char[::1] src, Py_ssize_t n,
           const unsigned char[::1] exp, const unsigned char[::1] log):
    out_obj = bytearray(rows * n)
    cdef unsigned char[::1] out = out_obj
    cdef Py_ssize_t r, c, i, src_off, out_off
    cdef int coef, lc, v
    for r in range(rows):
        out_off = r * n
        for c in range(cols):
            coef = mat[r * cols + c]
            if coef == 0:
                continue
            src_off = c * n
            if coef == 1:
                for i in range(n):
                    out[out_off + i] ^= src[src_off + i]
            else:
                lc = log[coef]
                for i in range(n):
                    v = src[src_off + i]
                    if v:
                        out[out_off + i] ^= exp[lc + log[v]]
    return bytes(out_obj)
