"""Dense matrices over GF(p) and the general linear group machinery.

`MatF` is an immutable dense matrix over a prime field.  GF(2) ranks and
products run on bit-packed rows; other characteristics use plain modular
elimination.  The group-level operations (enumeration of GL(L, p),
fixed-point-free filtering, conjugacy classification, rank-distance
spectra) delegate their inner loops to the kernel backend and are bucketed
by the first-row word so they can be partitioned across processes.

Conjugacy classes are keyed by the invariant factors of xI - B, a complete
invariant; the scan itself keys on the characteristic polynomial and only
refines classes whose characteristic polynomial has a repeated irreducible
factor (rank profiles of f(B)^j decide the elementary-divisor partition).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import gfpoly
from .backend import core
from .errors import BudgetExceeded, DEFAULT_BUDGETS, InputError
from .packing import pack_entries, unpack_entries


@dataclass(frozen=True)
class MatF:
    """Immutable dense matrix over GF(p), entries row-major."""

    p: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise InputError("entry count does not match dimensions")
        if any(not 0 <= e < self.p for e in self.entries):
            raise InputError("entries out of range")

    # -- construction -------------------------------------------------

    @staticmethod
    def from_rows(p: int, rows) -> "MatF":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise InputError("ragged rows")
            flat.extend(int(x) % p for x in row)
        return MatF(p, r, c, tuple(flat))

    @staticmethod
    def zeros(p: int, rows: int, cols: int) -> "MatF":
        return MatF(p, rows, cols, (0,) * (rows * cols))

    @staticmethod
    def identity(p: int, n: int) -> "MatF":
        return MatF(p, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def scalar(p: int, n: int, c: int) -> "MatF":
        c %= p
        return MatF(p, n, n, tuple(c if i == j else 0 for i in range(n) for j in range(n)))

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    # -- arithmetic ----------------------------------------------------

    def _check_same(self, other: "MatF") -> None:
        if self.p != other.p:
            raise InputError("mixed characteristics")

    def __add__(self, other: "MatF") -> "MatF":
        self._check_same(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("dimension mismatch in addition")
        p = self.p
        return MatF(p, self.rows, self.cols, tuple((a + b) % p for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "MatF") -> "MatF":
        self._check_same(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("dimension mismatch in subtraction")
        p = self.p
        return MatF(p, self.rows, self.cols, tuple((a - b) % p for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "MatF":
        return MatF(self.p, self.rows, self.cols, tuple((-a) % self.p for a in self.entries))

    def scale_by(self, c: int) -> "MatF":
        c %= self.p
        return MatF(self.p, self.rows, self.cols, tuple(a * c % self.p for a in self.entries))

    def __matmul__(self, other: "MatF") -> "MatF":
        return self.mul(other)

    def mul(self, other: "MatF") -> "MatF":
        self._check_same(other)
        if self.cols != other.rows:
            raise InputError("dimension mismatch in product")
        p = self.p
        n, m, k = self.rows, other.cols, self.cols
        if p == 2:
            arows = self._bitrows()
            brows = other._bitrows()
            out = []
            for i in range(n):
                acc = 0
                r = arows[i]
                while r:
                    low = r & -r
                    acc ^= brows[low.bit_length() - 1]
                    r ^= low
                out.append(acc)
            return MatF._from_bitrows(out, n, m)
        out = [0] * (n * m)
        for i in range(n):
            for t in range(k):
                f = self.entries[i * k + t]
                if f:
                    base = t * m
                    for j in range(m):
                        out[i * m + j] = (out[i * m + j] + f * other.entries[base + j]) % p
        return MatF(p, n, m, tuple(out))

    def pow(self, e: int) -> "MatF":
        if self.rows != self.cols:
            raise InputError("power of a non-square matrix")
        if e < 0:
            return self.inv().pow(-e)
        result = MatF.identity(self.p, self.rows)
        base = self
        while e:
            if e & 1:
                result = result.mul(base)
            base = base.mul(base)
            e >>= 1
        return result

    # -- GF(2) bit-packed rows ------------------------------------------

    def _bitrows(self) -> list[int]:
        # bit j of word i = entry (i, j)
        out = []
        for i in range(self.rows):
            w = 0
            base = i * self.cols
            for j in range(self.cols):
                if self.entries[base + j]:
                    w |= 1 << j
            out.append(w)
        return out

    @staticmethod
    def _from_bitrows(words: list[int], rows: int, cols: int) -> "MatF":
        flat = []
        for w in words:
            flat.extend((w >> j) & 1 for j in range(cols))
        return MatF(2, rows, cols, tuple(flat))

    # -- elimination ----------------------------------------------------

    def rank(self) -> int:
        if self.p == 2:
            words = self._bitrows()
            rank = 0
            for col in range(self.cols):
                bit = 1 << col
                piv = next((i for i in range(rank, len(words)) if words[i] & bit), -1)
                if piv < 0:
                    continue
                words[rank], words[piv] = words[piv], words[rank]
                for i in range(len(words)):
                    if i != rank and words[i] & bit:
                        words[i] ^= words[rank]
                rank += 1
            return rank
        m = self.to_lists()
        p = self.p
        rank = 0
        for col in range(self.cols):
            piv = next((i for i in range(rank, self.rows) if m[i][col]), -1)
            if piv < 0:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            inv = pow(m[rank][col], p - 2, p)
            for i in range(self.rows):
                if i != rank and m[i][col]:
                    f = m[i][col] * inv % p
                    for j in range(col, self.cols):
                        m[i][j] = (m[i][j] - f * m[rank][j]) % p
            rank += 1
        return rank

    def det(self) -> int:
        if self.rows != self.cols:
            raise InputError("determinant of a non-square matrix")
        m = self.to_lists()
        p = self.p
        det = 1
        for col in range(self.cols):
            piv = next((i for i in range(col, self.rows) if m[i][col]), -1)
            if piv < 0:
                return 0
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det % p
            det = det * m[col][col] % p
            inv = pow(m[col][col], p - 2, p)
            for i in range(col + 1, self.rows):
                if m[i][col]:
                    f = m[i][col] * inv % p
                    for j in range(col, self.cols):
                        m[i][j] = (m[i][j] - f * m[col][j]) % p
        return det % p

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.det() != 0

    def inv(self) -> "MatF":
        if self.rows != self.cols:
            raise InputError("inverse of a non-square matrix")
        n, p = self.rows, self.p
        m = [list(self.row(i)) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((i for i in range(col, n) if m[i][col]), -1)
            if piv < 0:
                raise InputError("matrix is singular")
            m[col], m[piv] = m[piv], m[col]
            inv = pow(m[col][col], p - 2, p)
            m[col] = [x * inv % p for x in m[col]]
            for i in range(n):
                if i != col and m[i][col]:
                    f = m[i][col]
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[col])]
        return MatF.from_rows(p, [row[n:] for row in m])

    def solve_right(self, rhs: "MatF") -> "MatF":
        """A particular X with self @ X = rhs (requires full row rank)."""
        self._check_same(rhs)
        if rhs.rows != self.rows:
            raise InputError("dimension mismatch in solve")
        n, m, p = self.rows, self.cols, self.p
        aug = [list(self.row(i)) + list(rhs.row(i)) for i in range(n)]
        pivots = []
        r = 0
        for col in range(m):
            piv = next((i for i in range(r, n) if aug[i][col]), -1)
            if piv < 0:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            inv = pow(aug[r][col], p - 2, p)
            aug[r] = [x * inv % p for x in aug[r]]
            for i in range(n):
                if i != r and aug[i][col]:
                    f = aug[i][col]
                    aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[r])]
            pivots.append(col)
            r += 1
            if r == n:
                break
        if r < n:
            raise InputError("system has no solution: coefficient matrix is rank deficient")
        x = [[0] * rhs.cols for _ in range(m)]
        for row_idx, col in enumerate(pivots):
            x[col] = [aug[row_idx][m + j] for j in range(rhs.cols)]
        return MatF.from_rows(p, x)

    def transpose(self) -> "MatF":
        return MatF(self.p, self.cols, self.rows,
                    tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)))

    # -- composition ----------------------------------------------------

    @staticmethod
    def block_diag(blocks: list["MatF"]) -> "MatF":
        p = blocks[0].p
        if any(b.p != p for b in blocks):
            raise InputError("mixed characteristics")
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b.entry(i, j)
            r0 += b.rows
            c0 += b.cols
        return MatF.from_rows(p, out)

    @staticmethod
    def hstack(blocks: list["MatF"]) -> "MatF":
        p = blocks[0].p
        rows = blocks[0].rows
        if any(b.p != p or b.rows != rows for b in blocks):
            raise InputError("hstack needs matching row counts")
        out = []
        for i in range(rows):
            row = []
            for b in blocks:
                row.extend(b.row(i))
            out.append(row)
        return MatF.from_rows(p, out)

    @staticmethod
    def vstack(blocks: list["MatF"]) -> "MatF":
        p = blocks[0].p
        cols = blocks[0].cols
        if any(b.p != p or b.cols != cols for b in blocks):
            raise InputError("vstack needs matching column counts")
        out = []
        for b in blocks:
            out.extend(b.to_lists())
        return MatF.from_rows(p, out)

    # -- serialization / packing ----------------------------------------

    def to_json_dict(self) -> dict:
        return {"p": self.p, "rows": self.rows, "cols": self.cols, "entries": list(self.entries)}

    @staticmethod
    def from_json_dict(d: dict) -> "MatF":
        return MatF(int(d["p"]), int(d["rows"]), int(d["cols"]),
                    tuple(int(e) for e in d["entries"]))

    def to_packed(self) -> int:
        if self.rows != self.cols:
            raise InputError("packing requires a square matrix")
        return pack_entries(self.to_lists(), self.p)

    @staticmethod
    def from_packed(code: int, L: int, p: int) -> "MatF":
        return MatF.from_rows(p, unpack_entries(code, L, p))

    def charpoly(self) -> tuple[int, ...]:
        """Monic characteristic polynomial det(xI - self), low degree first."""
        if self.rows != self.cols:
            raise InputError("characteristic polynomial of a non-square matrix")
        from ._pycore import _charpoly_digits

        return tuple(_charpoly_digits(self.to_lists(), self.rows, self.p))

    def multiplicative_order(self, cap: int = 10**7) -> int:
        if not self.is_invertible():
            raise InputError("order of a singular matrix")
        ident = MatF.identity(self.p, self.rows)
        x = self
        order = 1
        while x != ident:
            x = x.mul(self)
            order += 1
            if order > cap:
                raise RuntimeError("order exceeds cap")
        return order


def mat_rank(m: MatF) -> int:
    """Rank over GF(p) by Gaussian elimination."""
    return m.rank()


def mat_ops(a: MatF, b, op: str):
    """Dispatch helper: op in {mul, add, sub, inv, det, pow}."""
    if op == "mul":
        return a.mul(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "inv":
        return a.inv()
    if op == "det":
        return a.det()
    if op == "pow":
        return a.pow(b)
    raise InputError(f"unknown matrix operation {op!r}")


# ---------------------------------------------------------------------------
# GL(L, p) enumeration and classification
# ---------------------------------------------------------------------------


def _check_enum_budget(L: int, p: int, budgets) -> None:
    bits = L * L * math.log2(p)
    if bits > budgets.enumeration_bits:
        raise BudgetExceeded("full GL enumeration", f"{bits:.1f} bits", budgets.enumeration_bits)


def _buckets(L: int, p: int, chunks: int) -> list[tuple[int, int]]:
    hi = p**L
    chunks = max(1, min(chunks, hi - 1))
    step = (hi - 1 + chunks - 1) // chunks
    return [(lo, min(lo + step, hi)) for lo in range(1, hi, step)]


def _count_chunk(args):
    L, p, lo, hi, fpf = args
    return core.gl_count_range(L, p, lo, hi, fpf)


def _collect_chunk(args):
    L, p, lo, hi, fpf = args
    return core.gl_collect_range(L, p, lo, hi, fpf)


def _classify_chunk(args):
    L, p, lo, hi, fpf = args
    return core.classify_range(L, p, lo, hi, fpf)


def _run_chunks(fn, tasks, threads: int):
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def gl_count(L: int, p: int, fpf_only: bool = False, budgets=DEFAULT_BUDGETS, threads: int = 1) -> int:
    """|GL(L, p)| (or its fixed-point-free subset size) by exhaustive enumeration."""
    _check_enum_budget(L, p, budgets)
    tasks = [(L, p, lo, hi, fpf_only) for lo, hi in _buckets(L, p, 4 * max(1, threads))]
    return sum(_run_chunks(_count_chunk, tasks, threads))


def gl_enumerate(L: int, p: int, predicate=None, packed: bool = False,
                 budgets=DEFAULT_BUDGETS, threads: int = 1):
    """Yield every invertible L x L matrix over GF(p) exactly once.

    Order is lexicographic on row-major entry vectors.  With packed=True,
    yields packed integer codes instead of MatF values (the fast form for
    counting); `predicate` filters MatF values and implies packed=False.
    """
    _check_enum_budget(L, p, budgets)
    tasks = [(L, p, lo, hi, False) for lo, hi in _buckets(L, p, 4 * max(1, threads))]
    for arr in _run_chunks(_collect_chunk, tasks, threads):
        for code in arr:
            if packed and predicate is None:
                yield int(code)
            else:
                m = MatF.from_packed(int(code), L, p)
                if predicate is None or predicate(m):
                    yield m


def fixed_point_free_count(L: int, p: int, budgets=DEFAULT_BUDGETS, threads: int = 1) -> int:
    """Number of invertible B with rank(I - B) = L."""
    return gl_count(L, p, fpf_only=True, budgets=budgets, threads=threads)


def fixed_point_free_stream(L: int, p: int, packed: bool = False,
                            budgets=DEFAULT_BUDGETS, threads: int = 1):
    """Yield the fixed-point-free invertible matrices in lexicographic order."""
    _check_enum_budget(L, p, budgets)
    tasks = [(L, p, lo, hi, True) for lo, hi in _buckets(L, p, 4 * max(1, threads))]
    for arr in _run_chunks(_collect_chunk, tasks, threads):
        for code in arr:
            yield int(code) if packed else MatF.from_packed(int(code), L, p)


@dataclass(frozen=True)
class ConjClassInfo:
    """One conjugacy class of GL(L, p): representative and class-level data."""

    rep: MatF
    size: int
    order: int
    invariant_factors: tuple[tuple[int, ...], ...]
    fixed_point_free: bool

    def to_json_dict(self) -> dict:
        return {
            "rep": self.rep.to_json_dict(),
            "size": self.size,
            "order": self.order,
            "invariant_factors": [list(f) for f in self.invariant_factors],
            "fixed_point_free": self.fixed_point_free,
        }


def _poly_of_matrix(m: MatF, f: tuple[int, ...]) -> MatF:
    acc = MatF.zeros(m.p, m.rows, m.cols)
    for c in reversed(f):
        acc = acc.mul(m) + MatF.scalar(m.p, m.rows, c)
    return acc


def _elementary_divisors(m: MatF) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Map irreducible factor -> exponent partition (descending) of xI - m."""
    cp = m.charpoly()
    out: dict[tuple[int, ...], tuple[int, ...]] = {}
    for g, mult in gfpoly.factor_poly(cp, m.p).items():
        if mult == 1:
            out[g] = (1,)
            continue
        d = len(g) - 1
        # nullity ladder of g(m)^j gives the number of blocks of exponent >= j
        gm = _poly_of_matrix(m, g)
        power = MatF.identity(m.p, m.rows)
        nullities = [0]
        for _ in range(mult):
            power = power.mul(gm)
            nullities.append(m.rows - power.rank())
        blocks = []
        for j in range(1, mult + 1):
            blocks.append((nullities[j] - nullities[j - 1]) // d)
        partition = []
        for e in range(mult, 0, -1):
            cnt = blocks[e - 1] - (blocks[e] if e < mult else 0)
            partition.extend([e] * cnt)
        out[g] = tuple(partition)
    return out


def invariant_factors(m: MatF) -> tuple[tuple[int, ...], ...]:
    """Invariant factors of xI - m, ascending under divisibility.

    A complete conjugacy invariant for GL(L, p).
    """
    eldiv = _elementary_divisors(m)
    depth = max(len(part) for part in eldiv.values())
    factors = []
    for slot in range(depth, 0, -1):
        f = (1,)
        for g, part in sorted(eldiv.items()):
            if len(part) >= slot:
                e = part[slot - 1]
                for _ in range(e):
                    f = gfpoly.mul(f, g, m.p)
        factors.append(f)
    return tuple(factors)


def conjugacy_classify(L: int, p: int, restrict_fpf: bool,
                       budgets=DEFAULT_BUDGETS, threads: int = 1) -> list[ConjClassInfo]:
    """Partition GL(L, p) (or its fixed-point-free subset) into conjugacy classes.

    Classes come back sorted by their lexicographically smallest member,
    which is also the reported representative.
    """
    _check_enum_budget(L, p, budgets)
    tasks = [(L, p, lo, hi, restrict_fpf) for lo, hi in _buckets(L, p, 4 * max(1, threads))]
    parts = _run_chunks(_classify_chunk, tasks, threads)
    codes = np.concatenate([c for c, _ in parts]) if parts else np.zeros(0, dtype=np.uint64)
    keys = np.concatenate([k for _, k in parts]) if parts else np.zeros(0, dtype=np.uint64)

    groups: dict[tuple, tuple[int, int]] = {}  # final key -> (size, min code)
    for key in np.unique(keys):
        sel = codes[keys == key]
        cp = _key_to_poly(int(key), L, p)
        if _squarefree(cp, p):
            groups[("cp", int(key))] = (int(sel.size), int(sel.min()))
            continue
        # same characteristic polynomial may cover several classes: refine by
        # the nullity profile of repeated factors
        refined: dict[tuple, list[int]] = {}
        repeated = [g for g, m_ in gfpoly.factor_poly(cp, p).items() if m_ > 1]
        for code in sel:
            m = MatF.from_packed(int(code), L, p)
            sig = []
            for g in sorted(repeated):
                gm = _poly_of_matrix(m, g)
                power = MatF.identity(p, L)
                mult = gfpoly.factor_poly(cp, p)[g]
                for _ in range(mult):
                    power = power.mul(gm)
                    sig.append(L - power.rank())
            refined.setdefault(("cp", int(key), tuple(sig)), []).append(int(code))
        for rkey, members in refined.items():
            groups[rkey] = (len(members), min(members))

    out = []
    for _, (size, mincode) in sorted(groups.items(), key=lambda kv: kv[1][1]):
        rep = MatF.from_packed(mincode, L, p)
        ident = MatF.identity(p, L)
        out.append(
            ConjClassInfo(
                rep=rep,
                size=size,
                order=rep.multiplicative_order(),
                invariant_factors=invariant_factors(rep),
                fixed_point_free=(ident - rep).rank() == L,
            )
        )
    return out


def _key_to_poly(key: int, L: int, p: int) -> tuple[int, ...]:
    coeffs = []
    for _ in range(L):
        coeffs.append(key % p)
        key //= p
    return gfpoly.normalize(coeffs + [1])


def _squarefree(f: tuple[int, ...], p: int) -> bool:
    return gfpoly.degree(gfpoly.gcd(f, gfpoly.derivative(f, p), p)) == 0


def rank_distance_spectrum(mats: list[MatF]) -> int:
    """Minimum pairwise rank(A_i - A_j); the rank-metric distance of the set."""
    if len(mats) < 2:
        raise InputError("rank distance needs at least two matrices")
    dims = {(m.p, m.rows, m.cols) for m in mats}
    if len(dims) != 1:
        raise InputError("matrices must share dimensions")
    p, r, c = dims.pop()
    if r == c and p ** (r * c) <= 2**63:
        codes = np.array([m.to_packed() for m in mats], dtype=np.uint64)
        return core.min_pairwise_rank_distance(r, p, codes)
    best = min((a - b).rank() for i, a in enumerate(mats) for b in mats[i + 1 :])
    return best
