"""Pure-Python kernel backend.

Reference implementation of the hot kernels: packed-matrix arithmetic over
GF(p), invertible-matrix enumeration, conjugacy scan support, the Swirl
condition searches, and the scalar network-code search.  `lnc._core` is the
compiled twin with the same API; `lnc.backend` picks one at import time.

All matrix arguments are packed codes (see `lnc.packing`).  Enumerations
are bucketed by the first-row word so callers can partition work: the
bucket range [lo, hi) refers to first-row words, and results are produced
in lexicographic (= ascending code) order within and across buckets.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .packing import entries_from_row_word, pack_rows, row_word_from_entries, unpack_rows

BACKEND = "py"


def _inv_mod(a: int, p: int) -> int:
    return pow(a, p - 2, p)


def _digits(code: int, L: int, p: int) -> list[list[int]]:
    return [entries_from_row_word(w, L, p) for w in unpack_rows(code, L, p)]


def _pack_digits(m: list[list[int]], L: int, p: int) -> int:
    return pack_rows([row_word_from_entries(r, p) for r in m], L, p)


def _rank_digits(m: list[list[int]], L: int, p: int) -> int:
    m = [row[:] for row in m]
    rank = 0
    for col in range(L):
        piv = -1
        for i in range(rank, L):
            if m[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = _inv_mod(m[rank][col], p)
        for i in range(rank + 1, L):
            f = m[i][col] * inv % p
            if f:
                for c in range(col, L):
                    m[i][c] = (m[i][c] - f * m[rank][c]) % p
        rank += 1
        if rank == L:
            break
    return rank


def mat_rank_packed(code: int, L: int, p: int) -> int:
    return _rank_digits(_digits(code, L, p), L, p)


def mat_mul_packed(a: int, b: int, L: int, p: int) -> int:
    ma = _digits(a, L, p)
    mb = _digits(b, L, p)
    out = [[0] * L for _ in range(L)]
    for i in range(L):
        ra = ma[i]
        ro = out[i]
        for k in range(L):
            f = ra[k]
            if f:
                rb = mb[k]
                for j in range(L):
                    ro[j] = (ro[j] + f * rb[j]) % p
    return _pack_digits(out, L, p)


def mat_add_packed(a: int, b: int, L: int, p: int) -> int:
    ma = _digits(a, L, p)
    mb = _digits(b, L, p)
    out = [[(ma[i][j] + mb[i][j]) % p for j in range(L)] for i in range(L)]
    return _pack_digits(out, L, p)


def mat_sub_packed(a: int, b: int, L: int, p: int) -> int:
    ma = _digits(a, L, p)
    mb = _digits(b, L, p)
    out = [[(ma[i][j] - mb[i][j]) % p for j in range(L)] for i in range(L)]
    return _pack_digits(out, L, p)


def identity_packed(L: int, p: int) -> int:
    return pack_rows([p ** (L - 1 - i) for i in range(L)], L, p)


def _charpoly_digits(m: list[list[int]], L: int, p: int) -> list[int]:
    """Monic characteristic polynomial of an L x L matrix over GF(p).

    Returns coefficients c_0..c_L (c_L = 1) of det(xI - m), computed by
    similarity reduction to upper Hessenberg form followed by the leading
    principal minor recurrence.
    """
    h = [row[:] for row in m]
    for j in range(L - 2):
        piv = -1
        for i in range(j + 1, L):
            if h[i][j]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != j + 1:
            h[j + 1], h[piv] = h[piv], h[j + 1]
            for r in range(L):
                h[r][j + 1], h[r][piv] = h[r][piv], h[r][j + 1]
        inv = _inv_mod(h[j + 1][j], p)
        for i in range(j + 2, L):
            f = h[i][j] * inv % p
            if f:
                for c in range(L):
                    h[i][c] = (h[i][c] - f * h[j + 1][c]) % p
                for r in range(L):
                    h[r][j + 1] = (h[r][j + 1] + f * h[r][i]) % p
    # p_k = char poly of leading k x k block of the Hessenberg form.
    polys = [[1]]
    for k in range(1, L + 1):
        prev = polys[k - 1]
        cur = [0] * (k + 1)
        a = h[k - 1][k - 1]
        for t, c in enumerate(prev):
            cur[t + 1] = (cur[t + 1] + c) % p
            cur[t] = (cur[t] - a * c) % p
        sub = 1
        for i in range(2, k + 1):
            sub = sub * h[k - i + 1][k - i] % p
            if sub == 0:
                break
            f = h[k - i][k - 1] * sub % p
            if f:
                for t, c in enumerate(polys[k - i]):
                    cur[t] = (cur[t] - f * c) % p
        polys.append(cur)
    return polys[L]


def charpoly_packed(code: int, L: int, p: int) -> int:
    """Characteristic polynomial key: c_0..c_{L-1} packed little-endian base p."""
    coeffs = _charpoly_digits(_digits(code, L, p), L, p)
    key = 0
    for i in range(L - 1, -1, -1):
        key = key * p + coeffs[i]
    return key


def _is_fpf(rows: list[list[int]], L: int, p: int) -> bool:
    diff = [[(-rows[i][j]) % p for j in range(L)] for i in range(L)]
    for i in range(L):
        diff[i][i] = (diff[i][i] + 1) % p
    return _rank_digits(diff, L, p) == L


def _reduce_row(row: list[int], basis: list[tuple[int, list[int]]], p: int) -> list[int]:
    r = row[:]
    for piv, b in basis:
        f = r[piv]
        if f:
            for c in range(piv, len(r)):
                r[c] = (r[c] - f * b[c]) % p
    return r


def _iter_invertible(L: int, p: int, lo: int, hi: int, fpf_only: bool):
    """Yield (code, rows) for invertible matrices with first-row word in [lo, hi)."""
    base = p**L

    def rec(level: int, prefix: int, rows: list[list[int]], basis: list[tuple[int, list[int]]]):
        if level == L:
            if not fpf_only or _is_fpf(rows, L, p):
                yield prefix, rows
            return
        start, end = (lo, hi) if level == 0 else (1, base)
        for w in range(start, end):
            cand = entries_from_row_word(w, L, p)
            red = _reduce_row(cand, basis, p)
            piv = next((c for c in range(L) if red[c]), -1)
            if piv < 0:
                continue
            inv = _inv_mod(red[piv], p)
            norm = [v * inv % p for v in red]
            yield from rec(level + 1, prefix * base + w, rows + [cand], basis + [(piv, norm)])

    yield from rec(0, 0, [], [])


def gl_count_range(L: int, p: int, lo: int, hi: int, fpf_only: bool) -> int:
    return sum(1 for _ in _iter_invertible(L, p, lo, hi, fpf_only))


def gl_collect_range(L: int, p: int, lo: int, hi: int, fpf_only: bool) -> np.ndarray:
    return np.array([code for code, _ in _iter_invertible(L, p, lo, hi, fpf_only)], dtype=np.uint64)


def classify_range(L: int, p: int, lo: int, hi: int, fpf_only: bool):
    """Return (codes, charpoly keys) for the invertible matrices in the bucket range."""
    codes = []
    keys = []
    for code, rows in _iter_invertible(L, p, lo, hi, fpf_only):
        codes.append(code)
        coeffs = _charpoly_digits(rows, L, p)
        key = 0
        for i in range(L - 1, -1, -1):
            key = key * p + coeffs[i]
        keys.append(key)
    return np.array(codes, dtype=np.uint64), np.array(keys, dtype=np.uint64)


def scan_fpf_vs_targets(L: int, p: int, lo: int, hi: int, targets) -> tuple[int, np.ndarray]:
    """Stream fixed-point-free invertible matrices B with first-row word in
    [lo, hi); keep those with rank(B - T) == L for every target T."""
    tgt = [int(t) for t in targets]
    checked = 0
    survivors = []
    for code, _ in _iter_invertible(L, p, lo, hi, True):
        checked += 1
        if all(mat_rank_packed(mat_sub_packed(code, t, L, p), L, p) == L for t in tgt):
            survivors.append(code)
    return checked, np.array(survivors, dtype=np.uint64)


def triple_products(L: int, p: int, b1: int, b2: int, b3: int) -> np.ndarray:
    """The 8 products M3*M2*M1 with Mi in {I, bi}; index bit i-1 selects bi."""
    ident = identity_packed(L, p)
    out = np.zeros(8, dtype=np.uint64)
    for t in range(8):
        m1 = b1 if t & 1 else ident
        m2 = b2 if t & 2 else ident
        m3 = b3 if t & 4 else ident
        out[t] = mat_mul_packed(mat_mul_packed(m3, m2, L, p), m1, L, p)
    return out


def swirl_prefix_scan(L: int, p: int, pool, i1_lo: int, i1_hi: int) -> np.ndarray:
    """Exhaustive scan for 4-tuples (B1, B2, B3, B4), Bi drawn from the
    fixed-point-free pool, satisfying rank(B4 + M3*M2*M1) == L for all 8
    product choices.  Returns pool-index quadruples in lexicographic order."""
    pool = [int(x) for x in pool]
    n = len(pool)
    found = []
    for i1 in range(i1_lo, i1_hi):
        for i2 in range(n):
            for i3 in range(n):
                prods = triple_products(L, p, pool[i1], pool[i2], pool[i3])
                prods_i = [int(x) for x in prods]
                for i4 in range(n):
                    b4 = pool[i4]
                    if all(
                        mat_rank_packed(mat_add_packed(b4, pr, L, p), L, p) == L
                        for pr in prods_i
                    ):
                        found.append((i1, i2, i3, i4))
    return np.array(found, dtype=np.int32).reshape(-1, 4)


def swirl_pair_check(L: int, p: int, b7: int, prods_pre, prods_suf) -> bool:
    """Check rank(B7 + Ps*Pp) == L for all products of a prefix and suffix triple."""
    pre = [int(x) for x in prods_pre]
    suf = [int(x) for x in prods_suf]
    for ps in suf:
        for pp in pre:
            full = mat_mul_packed(ps, pp, L, p)
            if mat_rank_packed(mat_add_packed(b7, full, L, p), L, p) != L:
                return False
    return True


def min_pairwise_rank_distance(L: int, p: int, codes) -> int:
    codes = [int(x) for x in codes]
    best = L + 1
    for i in range(len(codes)):
        for j in range(i + 1, len(codes)):
            r = mat_rank_packed(mat_sub_packed(codes[i], codes[j], L, p), L, p)
            if r < best:
                best = r
    return best


def nod_scalar_search(omega, d_tuple, q, mul_flat, forbidden, want_witness=True):
    """Scalar Lemma-1 search over GF(q) for the five-layer network family.

    Rows hold pairwise-distinct nonzero field elements; rows 0..omega-2 are
    normalized to contain 1 as their smallest element (row scaling with unit
    product preserves both condition families, so the canonical space is
    exhaustive).  A tuple is accepted when no product, one factor per row,
    equals `forbidden`.

    Returns (witness_rows | None, tuples_checked, exhausted).
    """
    mul = [list(mul_flat[i * q : (i + 1) * q]) for i in range(q)]
    row_options = []
    for j in range(omega):
        dj = d_tuple[j]
        if j < omega - 1:
            opts = [(1,) + rest for rest in combinations(range(2, q), dj - 1)]
        else:
            opts = list(combinations(range(1, q), dj))
        if not opts:
            return None, 0, True
        row_options.append(opts)

    checked = 0
    for rows in _iter_product(row_options):
        checked += 1
        prods = {1}
        ok = True
        for row in rows:
            prods = {mul[s][a] for s in prods for a in row}
            if not prods:
                ok = False
                break
        if ok and forbidden not in prods:
            return (tuple(rows) if want_witness else True), checked, True
    return None, checked, True


def _iter_product(options):
    idx = [0] * len(options)
    n = len(options)
    while True:
        yield tuple(options[j][idx[j]] for j in range(n))
        j = n - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < len(options[j]):
                break
            idx[j] = 0
            j -= 1
        if j < 0:
            return
