# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the numpy kernels in _kernels_np.

Same contracts, same float accumulation orders, so results are bit-identical
with the fallback; only the constant factors change.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def im2col(cnp.ndarray[cnp.float32_t, ndim=4] xpad, int ksize, int stride,
           int out_h, int out_w):
    cdef int b = xpad.shape[0]
    cdef int c = xpad.shape[1]
    cdef int hp = xpad.shape[2]
    cdef int wp = xpad.shape[3]
    cdef cnp.ndarray[cnp.float32_t, ndim=3] cols = np.empty(
        (b, c * ksize * ksize, out_h * out_w), dtype=np.float32)
    cdef float[:, :, :, :] xv = xpad
    cdef float[:, :, :] cv = cols
    cdef int bi, ci, ky, kx, oh, ow, row
    for bi in range(b):
        for ci in range(c):
            for ky in range(ksize):
                for kx in range(ksize):
                    row = (ci * ksize + ky) * ksize + kx
                    for oh in range(out_h):
                        for ow in range(out_w):
                            cv[bi, row, oh * out_w + ow] = xv[
                                bi, ci, oh * stride + ky, ow * stride + kx]
    return cols


def col2im_add(cnp.ndarray[cnp.float32_t, ndim=3] dcols, int ksize, int stride,
               xpad_shape):
    cdef int b = xpad_shape[0]
    cdef int c = xpad_shape[1]
    cdef int hp = xpad_shape[2]
    cdef int wp = xpad_shape[3]
    cdef int out_h = (hp - ksize) // stride + 1
    cdef int out_w = (wp - ksize) // stride + 1
    cdef cnp.ndarray[cnp.float32_t, ndim=4] dxpad = np.zeros(
        (b, c, hp, wp), dtype=np.float32)
    cdef float[:, :, :] dv = dcols
    cdef float[:, :, :, :] xv = dxpad
    cdef int bi, ci, ky, kx, oh, ow, row
    # (ky, kx) outer accumulation order matches the numpy fallback exactly
    for ky in range(ksize):
        for kx in range(ksize):
            for bi in range(b):
                for ci in range(c):
                    row = (ci * ksize + ky) * ksize + kx
                    for oh in range(out_h):
                        for ow in range(out_w):
                            xv[bi, ci, oh * stride + ky, ow * stride + kx] += dv[
                                bi, row, oh * out_w + ow]
    return dxpad


def glcm_counts(cnp.ndarray[cnp.int32_t, ndim=2] levels, int n_levels):
    cdef int h = levels.shape[0]
    cdef int w = levels.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=3] counts = np.zeros(
        (4, n_levels, n_levels), dtype=np.int64)
    cdef long long[:, :, :] cv = counts
    cdef int[:, :] lv = levels
    cdef int offsets[4][2]
    offsets[0][0] = 0
    offsets[0][1] = 1
    offsets[1][0] = -1
    offsets[1][1] = 1
    offsets[2][0] = -1
    offsets[2][1] = 0
    offsets[3][0] = -1
    offsets[3][1] = -1
    cdef int d, dr, dc, r, cc, r2, c2, a, bb
    for d in range(4):
        dr = offsets[d][0]
        dc = offsets[d][1]
        for r in range(h):
            r2 = r + dr
            if r2 < 0 or r2 >= h:
                continue
            for cc in range(w):
                c2 = cc + dc
                if c2 < 0 or c2 >= w:
                    continue
                a = lv[r, cc]
                bb = lv[r2, c2]
                if a > 0 and bb > 0:
                    cv[d, a - 1, bb - 1] += 1
                    cv[d, bb - 1, a - 1] += 1
    return counts


def zone_sizes(cnp.ndarray[cnp.int32_t, ndim=2] levels):
    """8-connected constant-level zones, returned sorted by (level, size)."""
    cdef int h = levels.shape[0]
    cdef int w = levels.shape[1]
    cdef int[:, :] lv = levels
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] seen = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, :] sv = seen
    cdef cnp.ndarray[cnp.int64_t, ndim=1] stack = np.empty(h * w, dtype=np.int64)
    cdef long long[:] st = stack
    cdef list out = []
    cdef int r, c, g, size, top, cr, cc, nr, nc, dr, dc
    for r in range(h):
        for c in range(w):
            g = lv[r, c]
            if g <= 0 or sv[r, c]:
                continue
            size = 0
            top = 0
            st[top] = r * w + c
            top += 1
            sv[r, c] = 1
            while top > 0:
                top -= 1
                cr = <int>(st[top] // w)
                cc = <int>(st[top] % w)
                size += 1
                for dr in range(-1, 2):
                    for dc in range(-1, 2):
                        if dr == 0 and dc == 0:
                            continue
                        nr = cr + dr
                        nc = cc + dc
                        if 0 <= nr < h and 0 <= nc < w and not sv[nr, nc] and lv[nr, nc] == g:
                            sv[nr, nc] = 1
                            st[top] = nr * w + nc
                            top += 1
            out.append((g, size))
    out.sort()
    if not out:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    zl, zs = zip(*out)
    return np.asarray(zl, dtype=np.int64), np.asarray(zs, dtype=np.int64)


def label_components(cnp.ndarray mask, int connectivity):
    if connectivity != 4 and connectivity != 8:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef int h = m.shape[0]
    cdef int w = m.shape[1]
    cdef cnp.ndarray[cnp.int32_t, ndim=2] labels = np.zeros((h, w), dtype=np.int32)
    cdef int[:, :] lab = labels
    cdef unsigned char[:, :] mv = m
    cdef cnp.ndarray[cnp.int64_t, ndim=1] stack = np.empty(h * w, dtype=np.int64)
    cdef long long[:] st = stack
    cdef int r, c, top, cr, cc, nr, nc, dr, dc, n
    n = 0
    for r in range(h):
        for c in range(w):
            if not mv[r, c] or lab[r, c]:
                continue
            n += 1
            top = 0
            st[top] = r * w + c
            top += 1
            lab[r, c] = n
            while top > 0:
                top -= 1
                cr = <int>(st[top] // w)
                cc = <int>(st[top] % w)
                for dr in range(-1, 2):
                    for dc in range(-1, 2):
                        if dr == 0 and dc == 0:
                            continue
                        if connectivity == 4 and dr != 0 and dc != 0:
                            continue
                        nr = cr + dr
                        nc = cc + dc
                        if 0 <= nr < h and 0 <= nc < w and mv[nr, nc] and not lab[nr, nc]:
                            lab[nr, nc] = n
                            st[top] = nr * w + nc
                            top += 1
    return labels, n
