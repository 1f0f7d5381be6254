"""Compiled inner loops.  All field arithmetic goes through lookup tables
``add, mul, neg, inv`` indexed by element codes, so prime and extension
fields share one code path."""

import numpy as np
from numba import njit, types
from numba.typed import Dict

_OPTS = dict(cache=True, nogil=True)

NILPOTENT = 0
INVERTIBLE = 1
ANY = 2


@njit(**_OPTS)
def matmul(a, b, add, mul):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for l in range(k):
            x = a[i, l]
            if x != 0:
                for j in range(m):
                    y = b[l, j]
                    if y != 0:
                        out[i, j] = add[out[i, j], mul[x, y]]
    return out


@njit(**_OPTS)
def rref(a, rows, cols, add, mul, neg, inv, piv):
    """Gauss-Jordan in place; pivot columns written to ``piv``; returns rank."""
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[pr, j]
                a[pr, j] = t
        f = inv[a[r, c]]
        if f != 1:
            for j in range(c, cols):
                a[r, j] = mul[f, a[r, j]]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                g = neg[a[i, c]]
                for j in range(c, cols):
                    if a[r, j] != 0:
                        a[i, j] = add[a[i, j], mul[g, a[r, j]]]
        piv[r] = c
        r += 1
    return r


@njit(**_OPTS)
def rank_inplace(a, rows, cols, add, mul, neg, inv):
    """Row echelon (forward elimination only); returns rank."""
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(c, cols):
                t = a[r, j]
                a[r, j] = a[pr, j]
                a[pr, j] = t
        f = inv[a[r, c]]
        for i in range(r + 1, rows):
            if a[i, c] != 0:
                g = neg[mul[a[i, c], f]]
                for j in range(c, cols):
                    if a[r, j] != 0:
                        a[i, j] = add[a[i, j], mul[g, a[r, j]]]
        r += 1
    return r


@njit(**_OPTS)
def nullspace_from_rref(a, rank, cols, piv, neg, out):
    """Rows of ``out`` <- nullspace basis of an RREF matrix; returns its size."""
    is_piv = np.zeros(cols, dtype=np.bool_)
    for i in range(rank):
        is_piv[piv[i]] = True
    k = 0
    for f in range(cols):
        if is_piv[f]:
            continue
        for j in range(cols):
            out[k, j] = 0
        out[k, f] = 1
        for i in range(rank):
            out[k, piv[i]] = neg[a[i, f]]
        k += 1
    return k


@njit(**_OPTS)
def expand_rows(rows, r, p, kdeg, mul):
    """F_q-span of r rows as the F_p-span of r*kdeg rows (rows scaled by x^t)."""
    width = rows.shape[1]
    out = np.zeros((r * kdeg, width), dtype=np.int64)
    pw = 1
    for t in range(kdeg):
        for i in range(r):
            for j in range(width):
                out[i * kdeg + t, j] = mul[pw, rows[i, j]]
        pw *= p
    return out


@njit(**_OPTS)
def is_nilpotent(a, n, add, mul):
    """``a^n == 0`` by repeated squaring until the exponent reaches n."""
    if n == 0:
        return True
    p = a.copy()
    e = 1
    while e < n:
        p = matmul(p, p, add, mul)
        e *= 2
    for i in range(n):
        for j in range(n):
            if p[i, j] != 0:
                return False
    return True


@njit(**_OPTS)
def _block_ok(v, off, d, s, add, mul, neg, inv, scratch):
    if d == 0:
        return True
    if d == 1:
        if s == NILPOTENT:
            return v[off] == 0
        return v[off] != 0
    if d == 2:
        a00 = v[off]
        a01 = v[off + 1]
        a10 = v[off + 2]
        a11 = v[off + 3]
        det = add[mul[a00, a11], neg[mul[a01, a10]]]
        if s == NILPOTENT:
            return det == 0 and add[a00, a11] == 0
        return det != 0
    m = scratch[:d, :d]
    for i in range(d):
        for j in range(d):
            m[i, j] = v[off + i * d + j]
    if s == NILPOTENT:
        return is_nilpotent(m, d, add, mul)
    return rank_inplace(m, d, d, add, mul, neg, inv) == d


@njit(**_OPTS)
def blocks_have_type(v, bsizes, boffs, s, add, mul, neg, inv, scratch):
    if s == ANY:
        return True
    for b in range(bsizes.shape[0]):
        if not _block_ok(v, boffs[b], bsizes[b], s, add, mul, neg, inv, scratch):
            return False
    return True


@njit(**_OPTS)
def count_type_in_span(rows0, r0, width, bsizes, boffs, s, p, kdeg, add, mul, neg, inv):
    """#{sum c_i rows[i] : c in F_q^r} whose diagonal blocks all have type s."""
    rows = expand_rows(rows0[:r0], r0, p, kdeg, mul)
    r = r0 * kdeg
    q = p
    maxd = 1
    for b in range(bsizes.shape[0]):
        if bsizes[b] > maxd:
            maxd = bsizes[b]
    scratch = np.zeros((maxd, maxd), dtype=np.int64)
    cur = np.zeros(width, dtype=np.int64)
    digits = np.zeros(r + 1, dtype=np.int64)
    count = 0
    while True:
        if blocks_have_type(cur, bsizes, boffs, s, add, mul, neg, inv, scratch):
            count += 1
        i = 0
        while i < r:
            for j in range(width):
                cur[j] = add[cur[j], rows[i, j]]
            digits[i] += 1
            if digits[i] < q:
                break
            digits[i] = 0
            i += 1
        if i == r:
            break
    return count


@njit(**_OPTS)
def count_type_grouped(img, r2, R, bsizes, boffs, s, p, kdeg, add, mul, neg, inv,
                       nilc, unitc):
    """Type-s count in the span of RREF rows ``img[:r2, :R]``.

    Blocks linked by a common row are grouped; the span is the direct sum of
    the per-group spans, so the count is a product.  A group spanning its
    blocks completely uses the closed counts ``nilc``/``unitc`` per block;
    other groups are enumerated.
    """
    nb = bsizes.shape[0]
    if s == ANY:
        c = 1
        for _ in range(r2 * kdeg):
            c *= p
        return c
    # block of each coordinate
    owner = np.zeros(R, dtype=np.int64)
    for b in range(nb):
        for j in range(boffs[b], boffs[b] + bsizes[b] * bsizes[b]):
            owner[j] = b
    parent = np.arange(nb)
    for i in range(r2):
        first = -1
        for j in range(R):
            if img[i, j] != 0:
                b = owner[j]
                while parent[b] != b:
                    b = parent[b]
                if first < 0:
                    first = b
                elif b != first:
                    parent[b] = first
    root = np.zeros(nb, dtype=np.int64)
    for b in range(nb):
        r = b
        while parent[r] != r:
            r = parent[r]
        root[b] = r
    total = 1
    for g in range(nb):
        if root[g] != g:
            continue
        gs = np.zeros(nb, dtype=np.int64)
        go = np.zeros(nb, dtype=np.int64)
        ng = 0
        full = 0
        for b in range(nb):
            if root[b] == g:
                gs[ng] = bsizes[b]
                go[ng] = boffs[b]
                ng += 1
                full += bsizes[b] * bsizes[b]
        rows = np.zeros((r2, R), dtype=np.int64)
        nrow = 0
        for i in range(r2):
            j0 = 0
            while img[i, j0] == 0:
                j0 += 1
            if root[owner[j0]] == g:
                for j in range(R):
                    rows[nrow, j] = img[i, j]
                nrow += 1
        if nrow == full:
            for b in range(nb):
                if root[b] == g:
                    if s == NILPOTENT:
                        total *= nilc[b]
                    else:
                        total *= unitc[b]
        else:
            total *= count_type_in_span(rows, nrow, R, gs[:ng], go[:ng], s, p, kdeg,
                                        add, mul, neg, inv)
        if total == 0:
            return 0
    return total


@njit(**_OPTS)
def rref_key(img, r2, R, piv, q):
    """Exact code of an RREF basis: pivot mask, then non-pivot entries base q."""
    is_piv = np.zeros(R, dtype=np.bool_)
    mask = 0
    for i in range(r2):
        is_piv[piv[i]] = True
        mask |= 1 << piv[i]
    key = 0
    for i in range(r2):
        for j in range(piv[i] + 1, R):
            if not is_piv[j]:
                key = key * q + img[i, j]
    return key * (1 << R) + mask


def new_cache():
    return Dict.empty(key_type=types.int64, value_type=types.int64)


@njit(**_OPTS)
def centralizer_counts(bases, weights, rep_lo, rep_hi, rad, rad_lo, rad_hi,
                       D, R, T_a, T_c, T_b, T_v, bsizes, boffs, s2, p, kdeg,
                       add, mul, neg, inv, nilc, unitc, cache, use_cache, acc):
    """Accumulate, over x = bases[rep] + (radical combination), the number of
    type-``s2`` elements of the centralizer of x.

    ``acc[e]`` receives ``weight * c`` where the true contribution is
    ``weight * c * q**e``; e is the dimension of the part of the centralizer
    killed by the diagonal projection (or the full centralizer dimension when
    ``s2 == ANY``, with c = 1).  ``rad`` spans the radical over F_p (already
    expanded), and ``rad_lo:rad_hi`` index its p-ary odometer.

    With ``use_cache`` the inner count is memoized in ``cache`` under an
    exact integer encoding of the reduced basis of the projected centralizer;
    the caller must ensure that encoding fits in 63 bits.
    """
    q = p
    qq = 1
    for _ in range(kdeg):
        qq *= p
    nr = rad.shape[0]
    x = np.zeros(D, dtype=np.int64)
    ad = np.zeros((D, D), dtype=np.int64)
    piv = np.zeros(D + 1, dtype=np.int64)
    nul = np.zeros((D, D), dtype=np.int64)
    img = np.zeros((D, R + 1), dtype=np.int64)
    piv2 = np.zeros(R + 1, dtype=np.int64)
    digits = np.zeros(nr + 1, dtype=np.int64)
    nnz = T_a.shape[0]
    zero_ok = s2 == NILPOTENT
    if s2 == INVERTIBLE:
        zero_ok = True
        for b in range(bsizes.shape[0]):
            if bsizes[b] > 0:
                zero_ok = False
    for rep in range(rep_lo, rep_hi):
        w = weights[rep]
        # radical digits for rad_lo
        t = rad_lo
        for j in range(nr):
            digits[j] = t % q
            t //= q
        for j in range(D):
            x[j] = bases[rep, j]
        for i in range(nr):
            c = digits[i]
            if c != 0:
                for j in range(D):
                    if rad[i, j] != 0:
                        x[j] = add[x[j], mul[c, rad[i, j]]]
        for it in range(rad_lo, rad_hi):
            for i in range(D):
                for j in range(D):
                    ad[i, j] = 0
            for t in range(nnz):
                xa = x[T_a[t]]
                if xa != 0:
                    ci = T_c[t]
                    bi = T_b[t]
                    ad[ci, bi] = add[ad[ci, bi], mul[xa, T_v[t]]]
            rk = rref(ad, D, D, add, mul, neg, inv, piv)
            k = D - rk
            if s2 == ANY or k == 0:
                if s2 == ANY:
                    acc[k] += w
                elif zero_ok:
                    # only y = 0 is in the centralizer
                    acc[0] += w
            else:
                nullspace_from_rref(ad, rk, D, piv, neg, nul)
                for i in range(k):
                    for j in range(R):
                        img[i, j] = nul[i, j]
                r2 = rref(img, k, R, add, mul, neg, inv, piv2)
                if use_cache:
                    key = rref_key(img, r2, R, piv2, qq)
                    if key in cache:
                        cnt = cache[key]
                    else:
                        cnt = count_type_grouped(img, r2, R, bsizes, boffs, s2, p, kdeg,
                                                 add, mul, neg, inv, nilc, unitc)
                        cache[key] = cnt
                else:
                    cnt = count_type_grouped(img, r2, R, bsizes, boffs, s2, p, kdeg,
                                             add, mul, neg, inv, nilc, unitc)
                acc[k - r2] += w * cnt
            # advance the radical odometer
            if it + 1 < rad_hi:
                i = 0
                while i < nr:
                    for j in range(D):
                        if rad[i, j] != 0:
                            x[j] = add[x[j], rad[i, j]]
                    digits[i] += 1
                    if digits[i] < q:
                        break
                    digits[i] = 0
                    i += 1
    return acc


@njit(**_OPTS)
def span_elements(basis0, p, kdeg, add, mul):
    """All elements of the F_q-span of ``basis0`` (k x n x m matrices)."""
    n = basis0.shape[1]
    m = basis0.shape[2]
    flat = expand_rows(basis0.reshape(basis0.shape[0], n * m), basis0.shape[0], p, kdeg, mul)
    k = flat.shape[0]
    basis = flat.reshape(k, n, m)
    q = p
    total = 1
    for _ in range(k):
        total *= q
    out = np.zeros((total, n, m), dtype=np.int64)
    cur = np.zeros((n, m), dtype=np.int64)
    digits = np.zeros(k + 1, dtype=np.int64)
    for idx in range(total):
        out[idx] = cur
        i = 0
        while i < k:
            for a in range(n):
                for b in range(m):
                    cur[a, b] = add[cur[a, b], basis[i, a, b]]
            digits[i] += 1
            if digits[i] < q:
                break
            digits[i] = 0
            i += 1
    return out


@njit(**_OPTS)
def matrix_types(mats, add, mul, neg, inv):
    """Per matrix: (nilpotent, invertible) from the matrix itself."""
    N = mats.shape[0]
    m = mats.shape[1]
    nil = np.zeros(N, dtype=np.bool_)
    unit = np.zeros(N, dtype=np.bool_)
    for i in range(N):
        nil[i] = is_nilpotent(mats[i], m, add, mul)
        tmp = mats[i].copy()
        unit[i] = rank_inplace(tmp, m, m, add, mul, neg, inv) == m
    return nil, unit


@njit(**_OPTS)
def naive_commuting_pairs(mats, sel1, sel2, add, mul):
    """#{(i, j) in sel1 x sel2 : mats[i] mats[j] == mats[j] mats[i]}."""
    m = mats.shape[1]
    count = 0
    for ii in range(sel1.shape[0]):
        x = mats[sel1[ii]]
        for jj in range(sel2.shape[0]):
            y = mats[sel2[jj]]
            ok = True
            for a in range(m):
                for b in range(m):
                    s1 = 0
                    s2 = 0
                    for c in range(m):
                        if x[a, c] != 0 and y[c, b] != 0:
                            s1 = add[s1, mul[x[a, c], y[c, b]]]
                        if y[a, c] != 0 and x[c, b] != 0:
                            s2 = add[s2, mul[y[a, c], x[c, b]]]
                    if s1 != s2:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                count += 1
    return count


@njit(**_OPTS)
def subspace_type_count_direct(basis0, p, kdeg, s, add, mul, neg, inv):
    """Enumerate the span of ambient matrices and test each one directly."""
    m = basis0.shape[1]
    flat = expand_rows(basis0.reshape(basis0.shape[0], m * m), basis0.shape[0], p, kdeg, mul)
    k = flat.shape[0]
    basis_amb = flat.reshape(k, m, m)
    q = p
    cur = np.zeros((m, m), dtype=np.int64)
    digits = np.zeros(k + 1, dtype=np.int64)
    count = 0
    while True:
        if s == NILPOTENT:
            if is_nilpotent(cur, m, add, mul):
                count += 1
        elif s == INVERTIBLE:
            tmp = cur.copy()
            if rank_inplace(tmp, m, m, add, mul, neg, inv) == m:
                count += 1
        else:
            count += 1
        i = 0
        while i < k:
            for a in range(m):
                for b in range(m):
                    cur[a, b] = add[cur[a, b], basis_amb[i, a, b]]
            digits[i] += 1
            if digits[i] < q:
                break
            digits[i] = 0
            i += 1
        if i == k:
            break
    return count


@njit(**_OPTS)
def upper_centralizer_histogram(n, q, torus, add, mul, neg, inv, acc):
    """Histogram of dim{z strictly upper : xz = zx} over strictly upper x.

    With ``torus`` the superdiagonal entries run over {0, 1} only and
    ``acc[s, e]`` counts x with s nonzero superdiagonal entries and centralizer
    dimension e; the caller reweights by (q-1)^s.  Without it every x is
    enumerated and the count goes to ``acc[0, e]``.
    """
    N = n * (n - 1) // 2
    M = N - (n - 1)
    col = np.zeros((n, n), dtype=np.int64)
    row = -np.ones((n, n), dtype=np.int64)
    c = 0
    for i in range(n):
        for j in range(i + 1, n):
            col[i, j] = c
            c += 1
    r = 0
    for i in range(n):
        for j in range(i + 2, n):
            row[i, j] = r
            r += 1
    # free positions: superdiagonal first, then the rest
    pos_i = np.zeros(N, dtype=np.int64)
    pos_j = np.zeros(N, dtype=np.int64)
    c = 0
    for i in range(n - 1):
        pos_i[c] = i
        pos_j[c] = i + 1
        c += 1
    for i in range(n):
        for j in range(i + 2, n):
            pos_i[c] = i
            pos_j[c] = j
            c += 1
    radix = np.zeros(N, dtype=np.int64)
    for t in range(N):
        if torus and t < n - 1:
            radix[t] = 2
        else:
            radix[t] = q
    digits = np.zeros(N + 1, dtype=np.int64)
    x = np.zeros((n, n), dtype=np.int64)
    mat = np.zeros((max(M, 1), N), dtype=np.int64)
    while True:
        for a in range(M):
            for b in range(N):
                mat[a, b] = 0
        for k in range(n):
            for l in range(k + 1, n):
                cb = col[k, l]
                for i in range(k):
                    v = x[i, k]
                    if v != 0:
                        ra = row[i, l]
                        mat[ra, cb] = add[mat[ra, cb], v]
                for j in range(l + 1, n):
                    v = x[l, j]
                    if v != 0:
                        ra = row[k, j]
                        mat[ra, cb] = add[mat[ra, cb], neg[v]]
        rk = 0
        if M > 0:
            rk = rank_inplace(mat, M, N, add, mul, neg, inv)
        s = 0
        if torus:
            for t in range(n - 1):
                if x[t, t + 1] != 0:
                    s += 1
        acc[s, N - rk] += 1
        t = 0
        while t < N:
            digits[t] += 1
            if digits[t] < radix[t]:
                x[pos_i[t], pos_j[t]] = digits[t]
                break
            digits[t] = 0
            x[pos_i[t], pos_j[t]] = 0
            t += 1
        if t == N:
            break
    return acc
