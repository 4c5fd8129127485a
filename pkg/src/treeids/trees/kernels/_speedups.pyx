# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled split-scan kernels.

Same contracts and the same operation order as ``_fallback.py``; keep
the two in lockstep when editing either. No -ffast-math, no reordering:
scores must match the fallback bit for bit.
"""

from libc.math cimport log2
from libc.stdlib cimport free, malloc

import numpy as np


def best_threshold_gini(double[::1] values, int[::1] y, int n_classes):
    cdef Py_ssize_t n = values.shape[0]
    cdef long *total = <long *> malloc(n_classes * sizeof(long))
    cdef long *left = <long *> malloc(n_classes * sizeof(long))
    if total == NULL or left == NULL:
        free(total)
        free(left)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef int c
    cdef long nl = 0, nr
    cdef double v, p, s, sl, sr, parent, weighted, dec
    cdef double best_dec = 0.0, best_cut = 0.0
    cdef bint found = False
    try:
        for c in range(n_classes):
            total[c] = 0
            left[c] = 0
        for i in range(n):
            total[y[i]] += 1

        s = 0.0
        for c in range(n_classes):
            p = total[c] / <double> n
            s += p * p
        parent = 1.0 - s

        i = 0
        while i < n - 1:
            v = values[i]
            j = i
            while j < n and values[j] == v:
                left[y[j]] += 1
                nl += 1
                j += 1
            if j >= n:
                break
            nr = n - nl
            sl = 0.0
            sr = 0.0
            for c in range(n_classes):
                p = left[c] / <double> nl
                sl += p * p
                p = (total[c] - left[c]) / <double> nr
                sr += p * p
            weighted = (nl / <double> n) * (1.0 - sl) + (nr / <double> n) * (1.0 - sr)
            dec = parent - weighted
            if not found or dec > best_dec:
                found = True
                best_dec = dec
                best_cut = (v + values[j]) * 0.5
            i = j
    finally:
        free(total)
        free(left)
    if not found:
        return None
    return best_dec, best_cut


def best_threshold_gain_ratio(double[::1] values, int[::1] y, int n_classes):
    cdef Py_ssize_t n = values.shape[0]
    cdef long *total = <long *> malloc(n_classes * sizeof(long))
    cdef long *left = <long *> malloc(n_classes * sizeof(long))
    if total == NULL or left == NULL:
        free(total)
        free(left)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef int c
    cdef long nl = 0, nr, r
    cdef double v, p, hl, hr, wl, wr, parent, gain, split_info, ratio
    cdef double best_ratio = 0.0, best_gain = 0.0, best_cut = 0.0
    cdef bint found = False
    try:
        for c in range(n_classes):
            total[c] = 0
            left[c] = 0
        for i in range(n):
            total[y[i]] += 1

        parent = 0.0
        for c in range(n_classes):
            if total[c] > 0:
                p = total[c] / <double> n
                parent -= p * log2(p)

        i = 0
        while i < n - 1:
            v = values[i]
            j = i
            while j < n and values[j] == v:
                left[y[j]] += 1
                nl += 1
                j += 1
            if j >= n:
                break
            nr = n - nl
            hl = 0.0
            hr = 0.0
            for c in range(n_classes):
                if left[c] > 0:
                    p = left[c] / <double> nl
                    hl -= p * log2(p)
                r = total[c] - left[c]
                if r > 0:
                    p = r / <double> nr
                    hr -= p * log2(p)
            wl = nl / <double> n
            wr = nr / <double> n
            gain = parent - wl * hl - wr * hr
            if gain > 1e-12:
                split_info = -wl * log2(wl) - wr * log2(wr)
                ratio = gain / split_info
                if not found or ratio > best_ratio:
                    found = True
                    best_ratio = ratio
                    best_gain = gain
                    best_cut = (v + values[j]) * 0.5
            i = j
    finally:
        free(total)
        free(left)
    if not found:
        return None
    return best_ratio, best_gain, best_cut


def best_threshold_gain(double[::1] values, int[::1] y, int n_classes):
    cdef Py_ssize_t n = values.shape[0]
    cdef long *total = <long *> malloc(n_classes * sizeof(long))
    cdef long *left = <long *> malloc(n_classes * sizeof(long))
    if total == NULL or left == NULL:
        free(total)
        free(left)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef int c
    cdef long nl = 0, nr, r
    cdef double v, p, hl, hr, parent, gain
    cdef double best_gain = 0.0, best_cut = 0.0
    cdef bint found = False
    try:
        for c in range(n_classes):
            total[c] = 0
            left[c] = 0
        for i in range(n):
            total[y[i]] += 1

        parent = 0.0
        for c in range(n_classes):
            if total[c] > 0:
                p = total[c] / <double> n
                parent -= p * log2(p)

        i = 0
        while i < n - 1:
            v = values[i]
            j = i
            while j < n and values[j] == v:
                left[y[j]] += 1
                nl += 1
                j += 1
            if j >= n:
                break
            nr = n - nl
            hl = 0.0
            hr = 0.0
            for c in range(n_classes):
                if left[c] > 0:
                    p = left[c] / <double> nl
                    hl -= p * log2(p)
                r = total[c] - left[c]
                if r > 0:
                    p = r / <double> nr
                    hr -= p * log2(p)
            gain = parent - (nl / <double> n) * hl - (nr / <double> n) * hr
            if not found or gain > best_gain:
                found = True
                best_gain = gain
                best_cut = (v + values[j]) * 0.5
            i = j
    finally:
        free(total)
        free(left)
    if not found:
        return None
    return best_gain, best_cut


def contingency(double[::1] codes, int[::1] y, int n_codes, int n_classes):
    table = np.zeros((n_codes, n_classes), dtype=np.int64)
    cdef long[:, ::1] t = table
    cdef Py_ssize_t i
    for i in range(codes.shape[0]):
        t[<Py_ssize_t> codes[i], y[i]] += 1
    return table
