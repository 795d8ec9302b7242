# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel backend (Cython twin of `lnc._pycore`).

Same API and packed-matrix encoding as the pure backend; see that module
for documentation.  Matrix side length is capped at 8 and packed codes
must fit 64 bits, which the enumeration budgets guarantee.
"""

import numpy as np

BACKEND = "c"

DEF MAXL = 8
DEF MAXQ = 64


cdef inline int _inv_mod(int a, int p):
    cdef int r = 1
    cdef int b = a % p
    cdef int e = p - 2
    while e:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


cdef inline void _decode(unsigned long long code, int L, int p, int* m):
    cdef int i
    cdef int n = L * L
    for i in range(n - 1, -1, -1):
        m[i] = <int>(code % <unsigned long long>p)
        code //= <unsigned long long>p
    return


cdef inline unsigned long long _encode(int* m, int L, int p):
    cdef unsigned long long code = 0
    cdef int i
    cdef int n = L * L
    for i in range(n):
        code = code * <unsigned long long>p + <unsigned long long>m[i]
    return code


cdef inline int _rank(int* m, int L, int p):
    # destructive elimination on the L*L buffer
    cdef int rank = 0, col, i, c, piv, inv, f
    for col in range(L):
        piv = -1
        for i in range(rank, L):
            if m[i * L + col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for c in range(L):
                f = m[rank * L + c]
                m[rank * L + c] = m[piv * L + c]
                m[piv * L + c] = f
        inv = _inv_mod(m[rank * L + col], p)
        for i in range(rank + 1, L):
            f = (m[i * L + col] * inv) % p
            if f:
                for c in range(col, L):
                    m[i * L + c] = (m[i * L + c] - f * m[rank * L + c]) % p
                    if m[i * L + c] < 0:
                        m[i * L + c] += p
        rank += 1
        if rank == L:
            break
    return rank


cdef inline int _rank_code(unsigned long long code, int L, int p):
    cdef int buf[MAXL * MAXL]
    _decode(code, L, p, buf)
    return _rank(buf, L, p)


cdef inline void _mul(int* a, int* b, int* out, int L, int p):
    cdef int i, j, k, f
    for i in range(L * L):
        out[i] = 0
    for i in range(L):
        for k in range(L):
            f = a[i * L + k]
            if f:
                for j in range(L):
                    out[i * L + j] = (out[i * L + j] + f * b[k * L + j]) % p
    return


cdef inline int _is_fpf_rows(int* rows, int L, int p):
    cdef int buf[MAXL * MAXL]
    cdef int i, j
    for i in range(L):
        for j in range(L):
            buf[i * L + j] = (p - rows[i * L + j]) % p
        buf[i * L + i] = (buf[i * L + i] + 1) % p
    return _rank(buf, L, p) == L


cdef void _charpoly(int* m0, int L, int p, int* out):
    # out receives c_0..c_L of det(xI - m0); Hessenberg + minor recurrence
    cdef int h[MAXL * MAXL]
    cdef int cp[(MAXL + 1) * (MAXL + 1)]
    cdef int i, j, c, r, piv, inv, f, k, t, a, sub
    for i in range(L * L):
        h[i] = m0[i]
    for j in range(L - 2):
        piv = -1
        for i in range(j + 1, L):
            if h[i * L + j]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != j + 1:
            for c in range(L):
                f = h[(j + 1) * L + c]
                h[(j + 1) * L + c] = h[piv * L + c]
                h[piv * L + c] = f
            for r in range(L):
                f = h[r * L + j + 1]
                h[r * L + j + 1] = h[r * L + piv]
                h[r * L + piv] = f
        inv = _inv_mod(h[(j + 1) * L + j], p)
        for i in range(j + 2, L):
            f = (h[i * L + j] * inv) % p
            if f:
                for c in range(L):
                    h[i * L + c] = (h[i * L + c] - f * h[(j + 1) * L + c]) % p
                    if h[i * L + c] < 0:
                        h[i * L + c] += p
                for r in range(L):
                    h[r * L + j + 1] = (h[r * L + j + 1] + f * h[r * L + i]) % p
    # cp[k*(MAXL+1) + t] = coefficient of x^t in char poly of leading k block
    for i in range((MAXL + 1) * (MAXL + 1)):
        cp[i] = 0
    cp[0] = 1
    for k in range(1, L + 1):
        a = h[(k - 1) * L + (k - 1)]
        for t in range(k):
            c = cp[(k - 1) * (MAXL + 1) + t]
            if c:
                cp[k * (MAXL + 1) + t + 1] = (cp[k * (MAXL + 1) + t + 1] + c) % p
                cp[k * (MAXL + 1) + t] = (cp[k * (MAXL + 1) + t] - a * c) % p
                if cp[k * (MAXL + 1) + t] < 0:
                    cp[k * (MAXL + 1) + t] += p
        sub = 1
        for i in range(2, k + 1):
            sub = (sub * h[(k - i + 1) * L + (k - i)]) % p
            if sub == 0:
                break
            f = (h[(k - i) * L + (k - 1)] * sub) % p
            if f:
                for t in range(k - i + 1):
                    c = cp[(k - i) * (MAXL + 1) + t]
                    if c:
                        cp[k * (MAXL + 1) + t] = (cp[k * (MAXL + 1) + t] - f * c) % p
                        if cp[k * (MAXL + 1) + t] < 0:
                            cp[k * (MAXL + 1) + t] += p
    for t in range(L + 1):
        out[t] = cp[L * (MAXL + 1) + t]
    return


def mat_rank_packed(code, int L, int p):
    return _rank_code(<unsigned long long>code, L, p)


def mat_mul_packed(a, b, int L, int p):
    cdef int ma[MAXL * MAXL]
    cdef int mb[MAXL * MAXL]
    cdef int mo[MAXL * MAXL]
    _decode(<unsigned long long>a, L, p, ma)
    _decode(<unsigned long long>b, L, p, mb)
    _mul(ma, mb, mo, L, p)
    return _encode(mo, L, p)


def mat_add_packed(a, b, int L, int p):
    cdef int ma[MAXL * MAXL]
    cdef int mb[MAXL * MAXL]
    cdef int i
    _decode(<unsigned long long>a, L, p, ma)
    _decode(<unsigned long long>b, L, p, mb)
    for i in range(L * L):
        ma[i] = (ma[i] + mb[i]) % p
    return _encode(ma, L, p)


def mat_sub_packed(a, b, int L, int p):
    cdef int ma[MAXL * MAXL]
    cdef int mb[MAXL * MAXL]
    cdef int i
    _decode(<unsigned long long>a, L, p, ma)
    _decode(<unsigned long long>b, L, p, mb)
    for i in range(L * L):
        ma[i] = (ma[i] - mb[i]) % p
        if ma[i] < 0:
            ma[i] += p
    return _encode(ma, L, p)


def identity_packed(int L, int p):
    cdef int m[MAXL * MAXL]
    cdef int i
    for i in range(L * L):
        m[i] = 0
    for i in range(L):
        m[i * L + i] = 1
    return _encode(m, L, p)


def charpoly_packed(code, int L, int p):
    cdef int m[MAXL * MAXL]
    cdef int out[MAXL + 1]
    cdef int i
    _decode(<unsigned long long>code, L, p, m)
    _charpoly(m, L, p, out)
    cdef unsigned long long key = 0
    for i in range(L - 1, -1, -1):
        key = key * <unsigned long long>p + <unsigned long long>out[i]
    return key


# ---------------------------------------------------------------------------
# Invertible-matrix enumeration (iterative DFS over rows, lexicographic).
#
# mode 0: count          mode 2: classify (codes + charpoly keys)
# mode 1: collect codes  mode 3: fpf scan against targets
# ---------------------------------------------------------------------------

cdef long long _walk(int L, int p, unsigned long long lo, unsigned long long hi,
                     bint fpf_only, int mode,
                     unsigned long long[::1] out_codes,
                     unsigned long long[::1] out_keys,
                     unsigned long long[::1] targets,
                     list survivors):
    cdef unsigned long long base = 1
    cdef int i
    for i in range(L):
        base *= <unsigned long long>p
    cdef unsigned long long wstack[MAXL]
    cdef unsigned long long pstack[MAXL]
    cdef int rows[MAXL * MAXL]          # chosen raw rows, row-major
    cdef int basis[MAXL * MAXL]         # normalized reduced rows
    cdef int bpiv[MAXL]
    cdef int cand[MAXL]
    cdef int red[MAXL]
    cdef int cbuf[MAXL + 1]
    cdef int dbuf[MAXL * MAXL]
    cdef long long n_emitted = 0
    cdef int level = 0
    cdef unsigned long long w = lo
    cdef unsigned long long limit, ww, code, key
    cdef int piv, inv, j, c, f, ok
    cdef Py_ssize_t nt = targets.shape[0] if targets is not None else 0
    cdef Py_ssize_t ti

    if lo >= hi:
        return 0
    while True:
        limit = hi if level == 0 else base
        if w >= limit:
            level -= 1
            if level < 0:
                break
            w = wstack[level] + 1
            continue
        # decode candidate row word
        ww = w
        for j in range(L - 1, -1, -1):
            cand[j] = <int>(ww % <unsigned long long>p)
            ww //= <unsigned long long>p
        # reduce against current basis
        for j in range(L):
            red[j] = cand[j]
        for i in range(level):
            f = red[bpiv[i]]
            if f:
                for c in range(L):
                    red[c] = (red[c] - f * basis[i * L + c]) % p
                    if red[c] < 0:
                        red[c] += p
        piv = -1
        for c in range(L):
            if red[c]:
                piv = c
                break
        if piv < 0:
            w += 1
            continue
        # accept row
        wstack[level] = w
        pstack[level] = (pstack[level - 1] if level > 0 else 0) * base + w
        for j in range(L):
            rows[level * L + j] = cand[j]
        inv = _inv_mod(red[piv], p)
        for j in range(L):
            basis[level * L + j] = (red[j] * inv) % p
        bpiv[level] = piv
        if level == L - 1:
            # full invertible matrix assembled
            ok = 1
            if fpf_only:
                ok = _is_fpf_rows(rows, L, p)
            if ok:
                code = pstack[level]
                if mode == 0:
                    n_emitted += 1
                elif mode == 1:
                    out_codes[n_emitted] = code
                    n_emitted += 1
                elif mode == 2:
                    out_codes[n_emitted] = code
                    _charpoly(rows, L, p, cbuf)
                    key = 0
                    for j in range(L - 1, -1, -1):
                        key = key * <unsigned long long>p + <unsigned long long>cbuf[j]
                    out_keys[n_emitted] = key
                    n_emitted += 1
                else:
                    n_emitted += 1
                    ok = 1
                    for ti in range(nt):
                        ww = targets[ti]
                        for j in range(L * L - 1, -1, -1):
                            dbuf[j] = (rows[j] - <int>(ww % <unsigned long long>p)) % p
                            if dbuf[j] < 0:
                                dbuf[j] += p
                            ww //= <unsigned long long>p
                        if _rank(dbuf, L, p) != L:
                            ok = 0
                            break
                    if ok:
                        survivors.append(code)
            w += 1
        else:
            level += 1
            w = 1
    return n_emitted


cdef unsigned long long _bucket_cap(int L, int p, unsigned long long lo, unsigned long long hi):
    # upper bound on invertible matrices with first-row word in [lo, hi)
    cdef unsigned long long cap = hi - lo
    cdef unsigned long long pl = 1
    cdef unsigned long long pi = 1
    cdef int i
    for i in range(L):
        pl *= <unsigned long long>p
    for i in range(1, L):
        pi *= <unsigned long long>p
        cap *= pl - pi
    return cap


_EMPTY_U64 = np.zeros(0, dtype=np.uint64)


def gl_count_range(int L, int p, lo, hi, bint fpf_only):
    return _walk(L, p, <unsigned long long>lo, <unsigned long long>hi, fpf_only, 0,
                 _EMPTY_U64, _EMPTY_U64, _EMPTY_U64, None)


def gl_collect_range(int L, int p, lo, hi, bint fpf_only):
    cdef unsigned long long cap = _bucket_cap(L, p, <unsigned long long>lo, <unsigned long long>hi)
    out = np.empty(cap, dtype=np.uint64)
    cdef long long n = _walk(L, p, <unsigned long long>lo, <unsigned long long>hi, fpf_only, 1,
                             out, _EMPTY_U64, _EMPTY_U64, None)
    return out[:n].copy()


def classify_range(int L, int p, lo, hi, bint fpf_only):
    cdef unsigned long long cap = _bucket_cap(L, p, <unsigned long long>lo, <unsigned long long>hi)
    codes = np.empty(cap, dtype=np.uint64)
    keys = np.empty(cap, dtype=np.uint64)
    cdef long long n = _walk(L, p, <unsigned long long>lo, <unsigned long long>hi, fpf_only, 2,
                             codes, keys, _EMPTY_U64, None)
    return codes[:n].copy(), keys[:n].copy()


def scan_fpf_vs_targets(int L, int p, lo, hi, targets):
    cdef list survivors = []
    tarr = np.ascontiguousarray(np.asarray(targets, dtype=np.uint64))
    cdef long long n = _walk(L, p, <unsigned long long>lo, <unsigned long long>hi, True, 3,
                             _EMPTY_U64, _EMPTY_U64, tarr, survivors)
    return n, np.array(survivors, dtype=np.uint64)


def triple_products(int L, int p, b1, b2, b3):
    cdef int m1[MAXL * MAXL]
    cdef int m2[MAXL * MAXL]
    cdef int m3[MAXL * MAXL]
    cdef int acc[MAXL * MAXL]
    cdef int tmp[MAXL * MAXL]
    cdef int ident[MAXL * MAXL]
    cdef int* pa
    cdef int* pb
    cdef int i, t
    _decode(<unsigned long long>b1, L, p, m1)
    _decode(<unsigned long long>b2, L, p, m2)
    _decode(<unsigned long long>b3, L, p, m3)
    for i in range(L * L):
        ident[i] = 0
    for i in range(L):
        ident[i * L + i] = 1
    out = np.empty(8, dtype=np.uint64)
    cdef unsigned long long[::1] ov = out
    for t in range(8):
        # acc = M3 * M2 * M1
        if t & 4:
            pa = m3
        else:
            pa = ident
        if t & 2:
            pb = m2
        else:
            pb = ident
        _mul(pa, pb, tmp, L, p)
        if t & 1:
            pb = m1
        else:
            pb = ident
        _mul(tmp, pb, acc, L, p)
        ov[t] = _encode(acc, L, p)
    return out


def swirl_prefix_scan(int L, int p, pool, int i1_lo, int i1_hi):
    cdef unsigned long long[::1] pv = np.ascontiguousarray(np.asarray(pool, dtype=np.uint64))
    cdef int n = pv.shape[0]
    cdef int mp[MAXL * MAXL]            # decoded pool entries, reused
    cdef int prods[8][MAXL * MAXL]
    cdef int tmp[MAXL * MAXL]
    cdef int tmp2[MAXL * MAXL]
    cdef int ident[MAXL * MAXL]
    cdef int m1[MAXL * MAXL]
    cdef int m2[MAXL * MAXL]
    cdef int m3[MAXL * MAXL]
    cdef int* pa
    cdef int* pb
    cdef int i, t, i1, i2, i3, i4, j, ok
    cdef list found = []
    for i in range(L * L):
        ident[i] = 0
    for i in range(L):
        ident[i * L + i] = 1
    for i1 in range(i1_lo, i1_hi):
        _decode(pv[i1], L, p, m1)
        for i2 in range(n):
            _decode(pv[i2], L, p, m2)
            for i3 in range(n):
                _decode(pv[i3], L, p, m3)
                for t in range(8):
                    if t & 4:
                        pa = m3
                    else:
                        pa = ident
                    if t & 2:
                        pb = m2
                    else:
                        pb = ident
                    _mul(pa, pb, tmp, L, p)
                    if t & 1:
                        pb = m1
                    else:
                        pb = ident
                    _mul(tmp, pb, prods[t], L, p)
                for i4 in range(n):
                    _decode(pv[i4], L, p, mp)
                    ok = 1
                    for t in range(8):
                        for j in range(L * L):
                            tmp2[j] = (mp[j] + prods[t][j]) % p
                        if _rank(tmp2, L, p) != L:
                            ok = 0
                            break
                    if ok:
                        found.append((i1, i2, i3, i4))
    return np.array(found, dtype=np.int32).reshape(-1, 4)


def swirl_pair_check(int L, int p, b7, prods_pre, prods_suf):
    cdef unsigned long long[::1] pre = np.ascontiguousarray(np.asarray(prods_pre, dtype=np.uint64))
    cdef unsigned long long[::1] suf = np.ascontiguousarray(np.asarray(prods_suf, dtype=np.uint64))
    cdef int m7[MAXL * MAXL]
    cdef int ms[MAXL * MAXL]
    cdef int mp[MAXL * MAXL]
    cdef int full[MAXL * MAXL]
    cdef int chk[MAXL * MAXL]
    cdef Py_ssize_t a, b
    cdef int j
    _decode(<unsigned long long>b7, L, p, m7)
    for b in range(suf.shape[0]):
        _decode(suf[b], L, p, ms)
        for a in range(pre.shape[0]):
            _decode(pre[a], L, p, mp)
            _mul(ms, mp, full, L, p)
            for j in range(L * L):
                chk[j] = (m7[j] + full[j]) % p
            if _rank(chk, L, p) != L:
                return False
    return True


def min_pairwise_rank_distance(int L, int p, codes):
    cdef unsigned long long[::1] cv = np.ascontiguousarray(np.asarray(codes, dtype=np.uint64))
    cdef Py_ssize_t n = cv.shape[0]
    cdef int best = L + 1
    cdef int buf[MAXL * MAXL]
    cdef int mi[MAXL * MAXL]
    cdef int mj[MAXL * MAXL]
    cdef Py_ssize_t i, j
    cdef int c, r
    for i in range(n):
        _decode(cv[i], L, p, mi)
        for j in range(i + 1, n):
            _decode(cv[j], L, p, mj)
            for c in range(L * L):
                buf[c] = (mi[c] - mj[c]) % p
                if buf[c] < 0:
                    buf[c] += p
            r = _rank(buf, L, p)
            if r < best:
                best = r
    return best


def nod_scalar_search(int omega, d_tuple, int q, mul_flat, int forbidden, bint want_witness=True):
    """Canonical scalar Lemma-1 search; see the pure backend for semantics."""
    cdef unsigned char[::1] mt = np.ascontiguousarray(np.asarray(mul_flat, dtype=np.uint8))
    cdef int d[16]
    cdef int elems[16][MAXQ]            # element universe per row
    cdef int nelem[16]
    cdef int comb[16][MAXQ]             # current combination indices per row
    cdef int firstfixed[16]             # row starts with forced element 1
    cdef int j, t, k, nrows
    cdef long long checked = 0
    cdef unsigned long long masks[17]
    cdef unsigned long long newmask
    cdef int s, a
    if omega > 16 or q > MAXQ:
        raise ValueError("search dimensions exceed compiled limits")
    nrows = omega
    for j in range(omega):
        d[j] = d_tuple[j]
    for j in range(omega):
        if j < omega - 1:
            # universe = {2..q-1}; element 1 is implicit first member
            nelem[j] = q - 2
            for t in range(q - 2):
                elems[j][t] = t + 2
            firstfixed[j] = 1
            for t in range(d[j] - 1):
                comb[j][t] = t
        else:
            nelem[j] = q - 1
            for t in range(q - 1):
                elems[j][t] = t + 1
            firstfixed[j] = 0
            for t in range(d[j]):
                comb[j][t] = t
    # row j has cnt[j] = d[j]-1 or d[j] combination slots
    cdef int cnt[16]
    for j in range(omega):
        cnt[j] = d[j] - 1 if firstfixed[j] else d[j]
        if cnt[j] > nelem[j]:
            return None, 0, True
    while True:
        checked += 1
        # product reachability via field-element bitmasks; bit s = element s
        masks[0] = 2  # {1}, the empty product
        for j in range(omega):
            newmask = 0
            for s in range(q):
                if masks[j] & (<unsigned long long>1 << s):
                    if firstfixed[j]:
                        newmask |= <unsigned long long>1 << mt[s * q + 1]
                    for t in range(cnt[j]):
                        a = elems[j][comb[j][t]]
                        newmask |= <unsigned long long>1 << mt[s * q + a]
            masks[j + 1] = newmask
        if not (masks[omega] & (<unsigned long long>1 << forbidden)):
            if want_witness:
                rows = []
                for j in range(omega):
                    row = [1] if firstfixed[j] else []
                    for t in range(cnt[j]):
                        row.append(elems[j][comb[j][t]])
                    rows.append(tuple(row))
                return tuple(rows), checked, True
            return True, checked, True
        # advance: next combination on the last row, cascade on overflow
        j = omega - 1
        while j >= 0:
            k = cnt[j] - 1
            while k >= 0 and comb[j][k] == nelem[j] - cnt[j] + k:
                k -= 1
            if k >= 0:
                comb[j][k] += 1
                for t in range(k + 1, cnt[j]):
                    comb[j][t] = comb[j][t - 1] + 1
                break
            for t in range(cnt[j]):
                comb[j][t] = t
            j -= 1
        if j < 0:
            return None, checked, True
