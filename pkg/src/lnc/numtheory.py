"""Integer routines: primality, factorization, orders, prime powers.

Primality is deterministic Miller-Rabin below 3.3e24 (fixed witness set)
and probabilistic with 48 rounds above.  Factorization combines trial
division with Brent-variant Pollard rho under a time budget; callers that
need every divisor must check the `complete` flag.
"""

from __future__ import annotations

import math
import random
import time

from .errors import BudgetExceeded

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_BELOW = 3317044064679887385961981


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < _MR_DETERMINISTIC_BELOW:
        bases = _MR_BASES
    else:
        rng = random.Random(n)
        bases = tuple(rng.randrange(2, n - 1) for _ in range(48))
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(n: int) -> list[int]:
    if n <= 2:
        return []
    sieve = bytearray([1]) * n
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n) if sieve[i]]


def _pollard_rho(n: int, rng: random.Random) -> int:
    """One Brent-cycle attempt; returns a nontrivial factor or 1."""
    if n % 2 == 0:
        return 2
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = r = q = 1
    x = ys = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if g != n else 1


def factorize(n: int, time_ms: int = 5000) -> tuple[dict[int, int], bool]:
    """Factor n; returns ({prime: exponent}, complete).

    Small factors come from trial division; the rest from Pollard rho under
    the time budget.  If the budget runs out, the unfactored cofactor is
    included as a key with `complete=False`.
    """
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    factors: dict[int, int] = {}
    for p in primes_below(10000):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        if n == 1:
            return factors, True
    deadline = time.monotonic() + time_ms / 1000.0
    rng = random.Random(0xC0FFEE)
    stack = [n]
    complete = True
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        if time.monotonic() > deadline:
            factors[m] = factors.get(m, 0) + 1
            complete = False
            continue
        d = 1
        while d == 1 and time.monotonic() <= deadline:
            d = _pollard_rho(m, rng)
        if d == 1:
            factors[m] = factors.get(m, 0) + 1
            complete = False
        else:
            stack.append(d)
            stack.append(m // d)
    return factors, complete


def divisors(n: int, time_ms: int = 5000) -> list[int]:
    """All positive divisors of n, ascending.  Raises on incomplete factorization."""
    factors, complete = factorize(n, time_ms)
    if not complete:
        raise BudgetExceeded("divisor enumeration (incomplete factorization)", n, time_ms)
    divs = [1]
    for p, e in factors.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def multiplicative_order(a: int, n: int, time_ms: int = 5000) -> int:
    """Order of a modulo n (requires gcd(a, n) = 1)."""
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    if n == 1:
        return 1
    lam = _carmichael_exponent_multiple(n, time_ms)
    order = lam
    fac, complete = factorize(lam, time_ms)
    if not complete:
        raise BudgetExceeded("order computation (incomplete factorization)", lam, time_ms)
    for p in fac:
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


def _carmichael_exponent_multiple(n: int, time_ms: int) -> int:
    fac, complete = factorize(n, time_ms)
    if not complete:
        raise BudgetExceeded("order computation (incomplete factorization)", n, time_ms)
    out = 1
    for p, e in fac.items():
        out = math.lcm(out, (p - 1) * p ** (e - 1))
    return out


def is_prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q = p**k and p prime, or None."""
    if q < 2:
        return None
    for k in range(q.bit_length(), 0, -1):
        p = round(q ** (1.0 / k))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand**k == q and is_prime(cand):
                return cand, k
    return None


# Exponents L with 2**L - 1 prime, complete up to L = 127 (larger L refused).
MERSENNE_EXPONENTS_BELOW_128 = (2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127)


def mersenne_is_prime(L: int) -> bool:
    """Primality of 2**L - 1 via the complete exponent table (L <= 127)."""
    if L < 1:
        raise ValueError("exponent must be positive")
    if L > 127:
        raise ValueError("Mersenne primality table covers exponents up to 127")
    return L in MERSENNE_EXPONENTS_BELOW_128
