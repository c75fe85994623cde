"""Numba-compiled kernel implementations (default backend).

Each function mirrors its twin in `kernels_np` operation for operation;
keep the arithmetic order in sync when editing either module.
"""

import numpy as np
from numba import njit

TAN22 = 0.41421356237309503
TAN67 = 2.414213562373095

MINSTD_MULT = 48271
MINSTD_MOD = 2147483647


@njit(cache=True, nogil=True)
def smo_solve(K, y, C, tol, max_passes, seed):
    n = K.shape[0]
    alpha = np.zeros(n)
    b = 0.0
    E = -y.copy()
    state = seed % (MINSTD_MOD - 1) + 1
    eps = 1e-11 * max(1.0, C)
    passes = 0
    stuck = 0
    converged = False
    while passes < max_passes:
        passes += 1
        changed = 0
        violations = 0
        for i in range(n):
            r = y[i] * E[i]
            if (r < -tol and alpha[i] < C - eps) or (r > tol and alpha[i] > eps):
                violations += 1
                state = (state * MINSTD_MULT) % MINSTD_MOD
                start = state % (n - 1)
                for t in range(n - 1):
                    j = (i + 1 + ((start + t) % (n - 1))) % n
                    if y[i] != y[j]:
                        L = max(0.0, alpha[j] - alpha[i])
                        H = min(C, C + alpha[j] - alpha[i])
                    else:
                        L = max(0.0, alpha[i] + alpha[j] - C)
                        H = min(C, alpha[i] + alpha[j])
                    if L >= H:
                        continue
                    eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
                    if eta >= 0.0:
                        continue
                    aj = alpha[j] - y[j] * (E[i] - E[j]) / eta
                    if aj > H:
                        aj = H
                    elif aj < L:
                        aj = L
                    daj = aj - alpha[j]
                    if abs(daj) < 1e-10:
                        continue
                    ai = alpha[i] + y[i] * y[j] * (-daj)
                    dai = ai - alpha[i]
                    b1 = b - E[i] - y[i] * dai * K[i, i] - y[j] * daj * K[i, j]
                    b2 = b - E[j] - y[i] * dai * K[i, j] - y[j] * daj * K[j, j]
                    if 0.0 < ai < C:
                        nb = b1
                    elif 0.0 < aj < C:
                        nb = b2
                    else:
                        nb = 0.5 * (b1 + b2)
                    db = nb - b
                    ci = y[i] * dai
                    cj = y[j] * daj
                    for m in range(n):
                        E[m] = E[m] + (ci * K[i, m] + cj * K[j, m] + db)
                    alpha[i] = ai
                    alpha[j] = aj
                    b = nb
                    changed += 1
                    break
        if violations == 0:
            converged = True
            break
        if changed == 0:
            stuck += 1
            if stuck >= 3:
                break
        else:
            stuck = 0
    for i in range(n):
        if alpha[i] < eps:
            alpha[i] = 0.0
        elif alpha[i] > C - eps:
            alpha[i] = C
    return alpha, b, converged, passes


@njit(cache=True, nogil=True)
def pivot_distances(frames, pivot, use_euc, use_man, use_cos):
    T = frames.shape[0]
    npts = frames.shape[1]
    nm = 0
    if use_euc:
        nm += 1
    if use_man:
        nm += 1
    if use_cos:
        nm += 1
    out = np.empty(T * (npts - 1) * nm, np.float64)
    zero_norms = 0
    pos = 0
    for t in range(T):
        px = frames[t, pivot, 0]
        py = frames[t, pivot, 1]
        for l in range(npts):
            if l == pivot:
                continue
            qx = frames[t, l, 0]
            qy = frames[t, l, 1]
            dx = qx - px
            dy = qy - py
            if use_euc:
                out[pos] = np.sqrt(dx * dx + dy * dy)
                pos += 1
            if use_man:
                out[pos] = abs(dx) + abs(dy)
                pos += 1
            if use_cos:
                dot = qx * px + qy * py
                pn = np.sqrt(px * px + py * py)
                qn = np.sqrt(qx * qx + qy * qy)
                denom = pn * qn
                if denom == 0.0:
                    out[pos] = 1.0
                    zero_norms += 1
                else:
                    out[pos] = 1.0 - dot / denom
                pos += 1
    return out, zero_norms


@njit(cache=True, nogil=True, inline="always")
def _clamp(v, lo, hi):
    if v < lo:
        return lo
    if v > hi:
        return hi
    return v


@njit(cache=True, nogil=True)
def sobel_mag(img):
    h, w = img.shape
    out = np.empty((h, w), np.uint8)
    for y in range(h):
        ym = _clamp(y - 1, 0, h - 1)
        yp = _clamp(y + 1, 0, h - 1)
        for x in range(w):
            xm = _clamp(x - 1, 0, w - 1)
            xp = _clamp(x + 1, 0, w - 1)
            tl = np.float64(img[ym, xm])
            tc = np.float64(img[ym, x])
            tr = np.float64(img[ym, xp])
            ml = np.float64(img[y, xm])
            mr = np.float64(img[y, xp])
            bl = np.float64(img[yp, xm])
            bc = np.float64(img[yp, x])
            br = np.float64(img[yp, xp])
            gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl)
            gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr)
            mag = np.sqrt(gx * gx + gy * gy)
            v = np.floor(mag + 0.5)
            if v > 255.0:
                v = 255.0
            out[y, x] = np.uint8(v)
    return out


@njit(cache=True, nogil=True)
def laplacian_abs(img):
    h, w = img.shape
    out = np.empty((h, w), np.uint8)
    for y in range(h):
        ym = _clamp(y - 1, 0, h - 1)
        yp = _clamp(y + 1, 0, h - 1)
        for x in range(w):
            xm = _clamp(x - 1, 0, w - 1)
            xp = _clamp(x + 1, 0, w - 1)
            up = np.float64(img[ym, x])
            down = np.float64(img[yp, x])
            left = np.float64(img[y, xm])
            right = np.float64(img[y, xp])
            center = np.float64(img[y, x])
            resp = (up + down) + (left + right) - 4.0 * center
            v = abs(resp)
            if v > 255.0:
                v = 255.0
            out[y, x] = np.uint8(v)
    return out


@njit(cache=True, nogil=True)
def conv2d_replicate(img, kern):
    h, w = img.shape
    kh, kw = kern.shape
    ph = kh // 2
    pw = kw // 2
    out = np.empty((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            s = 0.0
            for ky in range(kh):
                yy = _clamp(y + ky - ph, 0, h - 1)
                for kx in range(kw):
                    xx = _clamp(x + kx - pw, 0, w - 1)
                    s = s + kern[ky, kx] * img[yy, xx]
            out[y, x] = s
    return out


@njit(cache=True, nogil=True)
def sobel_gradients(img):
    h, w = img.shape
    gx = np.empty((h, w), np.float64)
    gy = np.empty((h, w), np.float64)
    for y in range(h):
        ym = _clamp(y - 1, 0, h - 1)
        yp = _clamp(y + 1, 0, h - 1)
        for x in range(w):
            xm = _clamp(x - 1, 0, w - 1)
            xp = _clamp(x + 1, 0, w - 1)
            tl = img[ym, xm]
            tc = img[ym, x]
            tr = img[ym, xp]
            ml = img[y, xm]
            mr = img[y, xp]
            bl = img[yp, xm]
            bc = img[yp, x]
            br = img[yp, xp]
            gx[y, x] = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl)
            gy[y, x] = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr)
    return gx, gy


@njit(cache=True, nogil=True)
def nms(mag, gx, gy):
    h, w = mag.shape
    out = np.zeros((h, w), np.float64)
    if h < 3 or w < 3:
        return out
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            c = mag[y, x]
            if c <= 0.0:
                continue
            ax = abs(gx[y, x])
            ay = abs(gy[y, x])
            if ay <= ax * TAN22:
                n1 = mag[y, x - 1]
                n2 = mag[y, x + 1]
            elif ay >= ax * TAN67:
                n1 = mag[y - 1, x]
                n2 = mag[y + 1, x]
            elif gx[y, x] * gy[y, x] > 0.0:
                n1 = mag[y + 1, x + 1]
                n2 = mag[y - 1, x - 1]
            else:
                n1 = mag[y - 1, x + 1]
                n2 = mag[y + 1, x - 1]
            if c >= n1 and c >= n2:
                out[y, x] = c
    return out


@njit(cache=True, nogil=True)
def hysteresis(sup, low_abs, high_abs):
    h, w = sup.shape
    out = np.zeros((h, w), np.uint8)
    ys = np.empty(h * w, np.int64)
    xs = np.empty(h * w, np.int64)
    sp = 0
    for y in range(h):
        for x in range(w):
            if sup[y, x] >= high_abs and sup[y, x] > 0.0:
                out[y, x] = 255
                ys[sp] = y
                xs[sp] = x
                sp += 1
    while sp > 0:
        sp -= 1
        y = ys[sp]
        x = xs[sp]
        for dy in range(-1, 2):
            yy = y + dy
            if yy < 0 or yy >= h:
                continue
            for dx in range(-1, 2):
                xx = x + dx
                if xx < 0 or xx >= w:
                    continue
                if out[yy, xx] == 0 and sup[yy, xx] >= low_abs and sup[yy, xx] > 0.0:
                    out[yy, xx] = 255
                    ys[sp] = yy
                    xs[sp] = xx
                    sp += 1
    return out
