"""Finite fields GF(p^k): specs, elements, and the companion-matrix lift.

A `FieldSpec` fixes the characteristic p, extension degree k, and a monic
primitive polynomial (coefficients low degree first).  `make_field` always
picks the lexicographically smallest primitive polynomial, comparing
coefficient tuples (c_0, ..., c_{k-1}) as integers, so element and matrix
values derived from a (p, k) pair are identical across runs.

`phi_lift` maps elements to k x k matrices over GF(p): row i of the image
of x holds the coefficients of gamma^i * x, so the lift of gamma itself is
the companion matrix of the field polynomial with the negated low-order
coefficients in its last row, multiplication acts on row vectors from the
right, and the map is a ring homomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import gfpoly
from .errors import InputError
from .matrices import MatF
from .numtheory import is_prime


@dataclass(frozen=True)
class FieldSpec:
    """An extension field GF(p^k) with a fixed primitive polynomial."""

    p: int
    k: int
    poly: tuple[int, ...]  # length k+1, monic, low degree first

    @property
    def q(self) -> int:
        return self.p**self.k

    def to_json_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "poly": list(self.poly)}

    @staticmethod
    def from_json_dict(d: dict) -> "FieldSpec":
        spec = FieldSpec(int(d["p"]), int(d["k"]), tuple(int(c) for c in d["poly"]))
        _validate_spec(spec)
        return spec

    def zero(self) -> "Felt":
        return Felt(self, (0,) * self.k)

    def one(self) -> "Felt":
        return Felt(self, (1,) + (0,) * (self.k - 1))

    def gen(self) -> "Felt":
        """A primitive element: the residue of x (for k = 1, the root of the polynomial)."""
        if self.k == 1:
            return Felt(self, ((-self.poly[0]) % self.p,))
        return Felt(self, (0, 1) + (0,) * (self.k - 2))

    def from_int(self, n: int) -> "Felt":
        """Element with base-p digits of n as coefficients (0 <= n < q)."""
        if not 0 <= n < self.q:
            raise InputError(f"element index {n} outside [0, {self.q})")
        coeffs = []
        for _ in range(self.k):
            coeffs.append(n % self.p)
            n //= self.p
        return Felt(self, tuple(coeffs))

    def from_exp(self, e: int) -> "Felt":
        """gamma**e, exponent arithmetic modulo q - 1."""
        return self.gen() ** (e % (self.q - 1))

    def elements(self):
        for n in range(self.q):
            yield self.from_int(n)


def _validate_spec(spec: FieldSpec) -> None:
    if not is_prime(spec.p):
        raise InputError(f"{spec.p} is not prime")
    if spec.k < 1:
        raise InputError("extension degree must be >= 1")
    if len(spec.poly) != spec.k + 1 or spec.poly[-1] != 1:
        raise InputError("field polynomial must be monic of degree k")
    if any(not 0 <= c < spec.p for c in spec.poly):
        raise InputError("polynomial coefficients out of range")
    if not gfpoly.is_primitive(spec.poly, spec.p):
        raise InputError("field polynomial must be primitive")


@lru_cache(maxsize=None)
def make_field(p: int, k: int) -> FieldSpec:
    """GF(p^k) with the lexicographically smallest primitive polynomial.

    Deterministic: coefficient tuples (c_0, ..., c_{k-1}) are scanned in
    ascending integer order and the first primitive one wins.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if k < 1:
        raise InputError("extension degree must be >= 1")
    if p**k > 2**64:
        raise InputError("field size above 2^64 is not supported")
    for idx in range(p**k):
        # c_0 is the most significant digit: ascending idx is ascending
        # lexicographic order on (c_0, ..., c_{k-1})
        coeffs = []
        v = idx
        for _ in range(k):
            v, c = divmod(v, p)
            coeffs.append(c)
        coeffs.reverse()
        poly = tuple(coeffs) + (1,)
        if gfpoly.is_primitive(poly, p):
            return FieldSpec(p, k, poly)
    raise RuntimeError(f"no primitive polynomial of degree {k} over GF({p})")  # unreachable


@dataclass(frozen=True)
class Felt:
    """An element of GF(p^k) in the polynomial basis of its spec."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.spec.k:
            raise InputError("coefficient count does not match extension degree")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_int(self) -> int:
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.spec.p + c
        return n

    def _check(self, other: "Felt") -> None:
        if self.spec != other.spec:
            raise InputError("elements belong to different fields")

    def __add__(self, other: "Felt") -> "Felt":
        self._check(other)
        p = self.spec.p
        return Felt(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Felt") -> "Felt":
        self._check(other)
        p = self.spec.p
        return Felt(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Felt":
        p = self.spec.p
        return Felt(self.spec, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: "Felt") -> "Felt":
        self._check(other)
        p, k = self.spec.p, self.spec.k
        prod = gfpoly.poly_mod(
            gfpoly.mul(gfpoly.normalize(self.coeffs), gfpoly.normalize(other.coeffs), p),
            self.spec.poly,
            p,
        )
        return Felt(self.spec, tuple(prod) + (0,) * (k - len(prod)))

    def inv(self) -> "Felt":
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self ** (self.spec.q - 2)

    def __pow__(self, e: int) -> "Felt":
        if e < 0:
            return self.inv() ** (-e)
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self):
        return f"Felt(GF({self.spec.p}^{self.spec.k}), {self.to_int()})"


def field_arith(a: Felt, b: Felt | None, op: str) -> Felt:
    """Dispatch helper: op in {add, sub, mul, inv, pow}.

    `inv` ignores b; `pow` takes b as a plain integer exponent.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "pow":
        if not isinstance(b, int):
            raise InputError("pow needs an integer exponent")
        return a**b
    raise InputError(f"unknown field operation {op!r}")


def phi_lift(x: Felt) -> MatF:
    """The k x k matrix over GF(p) representing multiplication by x.

    Row i holds the coefficients of gamma^i * x; the zero element maps to
    the zero matrix and gamma maps to the companion matrix of the field
    polynomial.  Additive and multiplicative, hence a ring homomorphism.
    """
    spec = x.spec
    rows = []
    cur = x
    gamma = spec.gen()
    for _ in range(spec.k):
        rows.append(cur.coeffs)
        cur = cur * gamma
    return MatF.from_rows(spec.p, rows)


def phi_lift_block(elts: list[Felt]) -> MatF:
    """Block-diagonal lift of several field elements (possibly from different fields
    of the same characteristic)."""
    blocks = [phi_lift(x) for x in elts]
    p = blocks[0].p
    if any(b.p != p for b in blocks):
        raise InputError("blocks must share the characteristic")
    return MatF.block_diag(blocks)


def mul_table_flat(spec: FieldSpec):
    """Flattened q*q multiplication table (int indices), for the search kernels."""
    import numpy as np

    q = spec.q
    if q > 64:
        raise InputError("multiplication tables limited to q <= 64")
    els = [spec.from_int(n) for n in range(q)]
    table = np.zeros(q * q, dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            table[a * q + b] = (els[a] * els[b]).to_int()
    return table
