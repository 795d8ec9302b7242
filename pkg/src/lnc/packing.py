"""Packed integer encoding of small matrices over GF(p).

An L x L matrix m over GF(p) is encoded as the base-p integer

    code = sum(m[i][j] * p**((L-1-i)*L + (L-1-j)) for i, j)

so entry (0, 0) is the most significant digit.  Integer order on codes is
then exactly lexicographic order on row-major entry tuples, which is the
enumeration order used by the group scans.  Row i on its own packs to the
word ``sum(m[i][j] * p**(L-1-j))``.

Codes must fit a 64-bit word on the compiled backend; the enumeration
budget (L*L*log2(p) <= 25 bits) keeps all scanned cases far below that.
"""

from __future__ import annotations


def pack_rows(row_words: list[int], L: int, p: int) -> int:
    """Combine per-row words (row 0 first) into a matrix code."""
    base = p**L
    code = 0
    for w in row_words:
        code = code * base + w
    return code


def unpack_rows(code: int, L: int, p: int) -> list[int]:
    """Split a matrix code into per-row words, row 0 first."""
    base = p**L
    words = [0] * L
    for i in range(L - 1, -1, -1):
        code, words[i] = divmod(code, base)
    return words


def row_word_from_entries(row: list[int] | tuple[int, ...], p: int) -> int:
    w = 0
    for e in row:
        w = w * p + e
    return w


def entries_from_row_word(word: int, L: int, p: int) -> list[int]:
    out = [0] * L
    for j in range(L - 1, -1, -1):
        word, out[j] = divmod(word, p)
    return out


def pack_entries(entries: list[list[int]], p: int) -> int:
    """Pack a full entry grid (list of rows) into a matrix code."""
    L = len(entries)
    return pack_rows([row_word_from_entries(r, p) for r in entries], L, p)


def unpack_entries(code: int, L: int, p: int) -> list[list[int]]:
    return [entries_from_row_word(w, L, p) for w in unpack_rows(code, L, p)]


def identity_code(L: int, p: int) -> int:
    rows = [p ** (L - 1 - i) for i in range(L)]
    return pack_rows(rows, L, p)
