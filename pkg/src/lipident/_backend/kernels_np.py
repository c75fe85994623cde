"""Pure-numpy kernel implementations (fallback backend).

Every function here has a numba twin in `kernels_nb`; the two must keep
identical arithmetic (same operations, same order) so results match bit
for bit across backends.
"""

import numpy as np

# tan(22.5 deg), tan(67.5 deg): gradient-direction bin edges, avoids atan2
TAN22 = 0.41421356237309503
TAN67 = 2.414213562373095

MINSTD_MULT = 48271
MINSTD_MOD = 2147483647


def smo_solve(K, y, C, tol, max_passes, seed):
    """Two-index SMO sweep over a precomputed Gram matrix.

    K: (n, n) float64 Gram matrix; y: (n,) float64 labels in {-1, +1}.
    The second working index is picked by scanning from a pseudorandom
    offset drawn from a MINSTD (Lehmer) stream, so runs are reproducible
    for a given seed. Returns (alpha, bias, converged, passes).
    """
    n = K.shape[0]
    alpha = np.zeros(n)
    b = 0.0
    E = -y.copy()  # decision function is identically 0 at the start
    state = int(seed) % (MINSTD_MOD - 1) + 1
    # multipliers this close to a box bound count as sitting on it, both for
    # the violation sweep and the final snap, keeping the two views consistent
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
                    E += ci * K[i] + cj * K[j] + db
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
    alpha[alpha < eps] = 0.0
    alpha[alpha > C - eps] = C
    return alpha, b, converged, passes


def pivot_distances(frames, pivot, use_euc, use_man, use_cos):
    """Per-frame distances pivot -> each other landmark, frame-major.

    frames: (T, 8, 2) float64. Output layout: frame, then landmark in
    ascending index (pivot skipped), then metric in the fixed order
    euclidean, manhattan, cosine (restricted to the enabled ones).
    Returns (flat values, zero-norm count for the cosine fallback).
    """
    idx = np.array([l for l in range(frames.shape[1]) if l != pivot])
    px = frames[:, pivot, 0][:, None]
    py = frames[:, pivot, 1][:, None]
    qx = frames[:, idx, 0]
    qy = frames[:, idx, 1]
    dx = qx - px
    dy = qy - py
    cols = []
    zero_norms = 0
    if use_euc:
        cols.append(np.sqrt(dx * dx + dy * dy))
    if use_man:
        cols.append(np.abs(dx) + np.abs(dy))
    if use_cos:
        dot = qx * px + qy * py
        pn = np.sqrt(px * px + py * py)
        qn = np.sqrt(qx * qx + qy * qy)
        denom = pn * qn
        zero = denom == 0.0
        zero_norms = int(zero.sum())
        cos = np.empty_like(denom)
        cos[zero] = 1.0
        cos[~zero] = 1.0 - dot[~zero] / denom[~zero]
        cols.append(cos)
    out = np.stack(cols, axis=2).reshape(-1)
    return out, zero_norms


def _pad_edge(img):
    return np.pad(img, 1, mode="edge")


def sobel_mag(img):
    """Sobel gradient magnitude of a uint8 image, rounded and clamped to u8."""
    p = _pad_edge(img.astype(np.float64))
    h, w = img.shape
    tl = p[0:h, 0:w]
    tc = p[0:h, 1 : w + 1]
    tr = p[0:h, 2 : w + 2]
    ml = p[1 : h + 1, 0:w]
    mr = p[1 : h + 1, 2 : w + 2]
    bl = p[2 : h + 2, 0:w]
    bc = p[2 : h + 2, 1 : w + 1]
    br = p[2 : h + 2, 2 : w + 2]
    gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl)
    gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr)
    mag = np.sqrt(gx * gx + gy * gy)
    v = np.floor(mag + 0.5)
    return np.minimum(v, 255.0).astype(np.uint8)


def laplacian_abs(img):
    """4-neighbour Laplacian of a uint8 image, |response| clamped to u8."""
    p = _pad_edge(img.astype(np.float64))
    h, w = img.shape
    up = p[0:h, 1 : w + 1]
    down = p[2 : h + 2, 1 : w + 1]
    left = p[1 : h + 1, 0:w]
    right = p[1 : h + 1, 2 : w + 2]
    center = p[1 : h + 1, 1 : w + 1]
    resp = (up + down) + (left + right) - 4.0 * center
    v = np.abs(resp)
    return np.minimum(v, 255.0).astype(np.uint8)


def conv2d_replicate(img, kern):
    """Dense 2-D correlation with replicate borders; float64 in and out."""
    kh, kw = kern.shape
    ph = kh // 2
    pw = kw // 2
    h, w = img.shape
    p = np.pad(img, ((ph, ph), (pw, pw)), mode="edge")
    acc = np.zeros_like(img)
    for ky in range(kh):
        for kx in range(kw):
            acc += kern[ky, kx] * p[ky : ky + h, kx : kx + w]
    return acc


def sobel_gradients(img):
    """Unclamped float Sobel gradients (gx, gy) with replicate borders."""
    h, w = img.shape
    p = _pad_edge(img)
    tl = p[0:h, 0:w]
    tc = p[0:h, 1 : w + 1]
    tr = p[0:h, 2 : w + 2]
    ml = p[1 : h + 1, 0:w]
    mr = p[1 : h + 1, 2 : w + 2]
    bl = p[2 : h + 2, 0:w]
    bc = p[2 : h + 2, 1 : w + 1]
    br = p[2 : h + 2, 2 : w + 2]
    gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl)
    gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr)
    return gx, gy


def nms(mag, gx, gy):
    """Non-maximum suppression along the quantized gradient direction.

    The direction bin is found by comparing |gy| against |gx| scaled by
    tan(22.5deg)/tan(67.5deg), which avoids trig calls. The one-pixel
    border is zeroed.
    """
    h, w = mag.shape
    out = np.zeros_like(mag)
    if h < 3 or w < 3:
        return out
    c = mag[1 : h - 1, 1 : w - 1]
    ax = np.abs(gx[1 : h - 1, 1 : w - 1])
    ay = np.abs(gy[1 : h - 1, 1 : w - 1])
    sign = gx[1 : h - 1, 1 : w - 1] * gy[1 : h - 1, 1 : w - 1]
    horiz = ay <= ax * TAN22
    vert = ay >= ax * TAN67
    diag_main = (~horiz) & (~vert) & (sign > 0.0)
    diag_anti = (~horiz) & (~vert) & (sign <= 0.0)

    n1 = np.zeros_like(c)
    n2 = np.zeros_like(c)
    n1[horiz] = mag[1 : h - 1, 0 : w - 2][horiz]
    n2[horiz] = mag[1 : h - 1, 2:w][horiz]
    n1[vert] = mag[0 : h - 2, 1 : w - 1][vert]
    n2[vert] = mag[2:h, 1 : w - 1][vert]
    n1[diag_main] = mag[2:h, 2:w][diag_main]
    n2[diag_main] = mag[0 : h - 2, 0 : w - 2][diag_main]
    n1[diag_anti] = mag[0 : h - 2, 2:w][diag_anti]
    n2[diag_anti] = mag[2:h, 0 : w - 2][diag_anti]

    keep = (c > 0.0) & (c >= n1) & (c >= n2)
    inner = np.where(keep, c, 0.0)
    out[1 : h - 1, 1 : w - 1] = inner
    return out


def hysteresis(sup, low_abs, high_abs):
    """Double-threshold hysteresis; returns a {0, 255} uint8 edge map."""
    strong = (sup >= high_abs) & (sup > 0.0)
    weak = (sup >= low_abs) & (sup > 0.0)
    edges = strong.copy()
    while True:
        p = np.pad(edges, 1, mode="constant")
        h, w = edges.shape
        nbr = (
            p[0:h, 0:w]
            | p[0:h, 1 : w + 1]
            | p[0:h, 2 : w + 2]
            | p[1 : h + 1, 0:w]
            | p[1 : h + 1, 2 : w + 2]
            | p[2 : h + 2, 0:w]
            | p[2 : h + 2, 1 : w + 1]
            | p[2 : h + 2, 2 : w + 2]
        )
        grow = weak & nbr & ~edges
        if not grow.any():
            break
        edges |= grow
    return np.where(edges, 255, 0).astype(np.uint8)
