"""Polynomial arithmetic over GF(p).

Polynomials are tuples of coefficients, low degree first, with no trailing
zeros (the zero polynomial is the empty tuple).  Only small degrees are
ever needed here (characteristic polynomials up to the matrix cap, field
polynomials up to degree 64), so the algorithms favor clarity: trial
division against enumerated irreducibles for factoring, square-and-multiply
modular exponentiation for the irreducibility and primitivity tests.
"""

from __future__ import annotations

from functools import lru_cache

from .numtheory import factorize

Poly = tuple[int, ...]


def normalize(coeffs) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f: Poly) -> int:
    return len(f) - 1


def add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return normalize([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return normalize([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return normalize(out)


def scale(f: Poly, c: int, p: int) -> Poly:
    return normalize([a * c % p for a in f])


def poly_divmod(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    inv = pow(g[-1], p - 2, p)
    for i in range(len(f) - len(g), -1, -1):
        c = r[i + len(g) - 1] * inv % p
        if c:
            q[i] = c
            for j, b in enumerate(g):
                r[i + j] = (r[i + j] - c * b) % p
    return normalize(q), normalize(r)


def poly_mod(f: Poly, g: Poly, p: int) -> Poly:
    return poly_divmod(f, g, p)[1]


def gcd(f: Poly, g: Poly, p: int) -> Poly:
    while g:
        f, g = g, poly_mod(f, g, p)
    if f:
        f = scale(f, pow(f[-1], p - 2, p), p)
    return f


def monic(f: Poly, p: int) -> Poly:
    if not f:
        return f
    return scale(f, pow(f[-1], p - 2, p), p)


def powmod(base: Poly, e: int, f: Poly, p: int) -> Poly:
    result: Poly = (1,)
    base = poly_mod(base, f, p)
    while e:
        if e & 1:
            result = poly_mod(mul(result, base, p), f, p)
        base = poly_mod(mul(base, base, p), f, p)
        e >>= 1
    return result


def evaluate(f: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def derivative(f: Poly, p: int) -> Poly:
    return normalize([i * f[i] % p for i in range(1, len(f))])


X: Poly = (0, 1)


def is_irreducible(f: Poly, p: int) -> bool:
    """Rabin's test: x^(p^k) = x mod f and gcd(x^(p^(k/r)) - x, f) = 1."""
    k = degree(f)
    if k < 1:
        return False
    if k == 1:
        return True
    xq = powmod(X, p**k, f, p)
    if xq != poly_mod(X, f, p):
        return False
    kfac, _ = factorize(k)
    for r in kfac:
        h = sub(powmod(X, p ** (k // r), f, p), X, p)
        if degree(gcd(h, f, p)) > 0:
            return False
    return True


def is_primitive(f: Poly, p: int, time_ms: int = 5000) -> bool:
    """Whether the root of the irreducible f generates GF(p^k)*."""
    k = degree(f)
    order = p**k - 1
    if not is_irreducible(f, p):
        return False
    if evaluate(f, 0, p) == 0:  # x divides f: root 0
        return False
    fac, complete = factorize(order, time_ms)
    if not complete:
        raise ValueError(f"cannot certify primitivity: p^k-1 = {order} not fully factored")
    for r in fac:
        if powmod(X, order // r, f, p) == (1,):
            return False
    return True


@lru_cache(maxsize=None)
def monic_irreducibles(p: int, d: int) -> tuple[Poly, ...]:
    """All monic irreducible polynomials of degree d over GF(p), lexicographic."""
    out = []
    for idx in range(p**d):
        coeffs = []
        v = idx
        for _ in range(d):
            coeffs.append(v % p)
            v //= p
        f = tuple(coeffs) + (1,)
        if is_irreducible(f, p):
            out.append(f)
    return tuple(out)


def factor_poly(f: Poly, p: int) -> dict[Poly, int]:
    """Complete factorization of a monic polynomial into monic irreducibles.

    Trial division by enumerated irreducibles; intended for the small
    degrees arising from characteristic polynomials.
    """
    f = monic(f, p)
    if degree(f) < 1:
        return {}
    out: dict[Poly, int] = {}
    d = 1
    while degree(f) > 0:
        if 2 * d > degree(f):
            out[f] = out.get(f, 0) + 1
            break
        for g in monic_irreducibles(p, d):
            while True:
                q, r = poly_divmod(f, g, p)
                if r:
                    break
                out[g] = out.get(g, 0) + 1
                f = q
        d += 1
    return out
