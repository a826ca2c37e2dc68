"""Finite-field arithmetic over F_q.

Symbols are plain integers in ``0..q-1`` using the primitive-element
ordering ``{0, alpha^0, alpha^1, ..., alpha^(q-2)}``: index 0 is the zero
element and index ``i >= 1`` is ``alpha^(i-1)``.  With this ordering index 1
is always the multiplicative identity.

Two families are supported: binary extension fields ``q = 2^m`` (m = 1..8)
and prime fields ``q = p <= 257``.  All arithmetic goes through precomputed
``q x q`` tables so it vectorizes over numpy arrays.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# Primitive polynomials (bitmask including the leading term).
PRIMITIVE_POLYS = {
    1: 0b11,          # x + 1
    2: 0b111,         # x^2 + x + 1
    3: 0b1011,        # x^3 + x + 1
    4: 0b10011,       # x^4 + x + 1
    5: 0b100101,      # x^5 + x^2 + 1
    6: 0b1000011,     # x^6 + x + 1
    7: 0b10001001,    # x^7 + x^3 + 1
    8: 0b100011101,   # x^8 + x^4 + x^3 + x^2 + 1
}


class FieldError(ValueError):
    """Raised for unsupported field orders or invalid field operations."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _smallest_primitive_root(p: int) -> int:
    factors = [f for f in range(2, p) if (p - 1) % f == 0 and _is_prime(f)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    return 1  # p == 2


class FieldSpec:
    """The field F_q with exp/log tables and full arithmetic tables.

    ``exp_table[i]`` is the integer representation of ``alpha^i`` (a
    polynomial bitmask for ``2^m``, a residue for primes) and ``log_table``
    inverts it.  ``to_int``/``from_int`` convert between symbol indices and
    integer representations.
    """

    def __init__(self, q: int):
        q = int(q)
        self.q = q
        m = q.bit_length() - 1
        if q >= 2 and (1 << m) == q and m in PRIMITIVE_POLYS:
            self.characteristic = 2
            self.degree = m
            self.prim_poly = PRIMITIVE_POLYS[m]
            exp = np.zeros(q - 1, dtype=np.int64)
            v = 1
            for i in range(q - 1):
                exp[i] = v
                v <<= 1
                if v & q:
                    v ^= self.prim_poly
        elif _is_prime(q) and q <= 257:
            self.characteristic = q
            self.degree = 1
            self.prim_poly = None
            g = _smallest_primitive_root(q)
            exp = np.array([pow(g, i, q) for i in range(q - 1)], dtype=np.int64)
        else:
            raise FieldError(f"unsupported field order q={q}")

        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        if np.any(log[1:] < 0):
            raise FieldError(f"generator for q={q} is not primitive")

        self.exp_table = exp
        self.log_table = log
        # symbol index <-> integer representation
        self._to_int = np.concatenate(([0], exp))
        self._from_int = np.concatenate(([0], log[1:] + 1))

        ints = self._to_int
        if self.characteristic == 2:
            sum_int = ints[:, None] ^ ints[None, :]
        else:
            sum_int = (ints[:, None] + ints[None, :]) % q
        self.add_table = self._from_int[sum_int]

        idx = np.arange(q)
        mul = np.zeros((q, q), dtype=np.int64)
        mul[1:, 1:] = (idx[1:, None] - 1 + idx[None, 1:] - 1) % (q - 1) + 1
        self.mul_table = mul

        self.neg_table = np.argmax(self.add_table == 0, axis=1)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = (-(idx[1:] - 1)) % (q - 1) + 1
        self.inv_table = inv

        for t in (self.exp_table, self.log_table, self.add_table,
                  self.mul_table, self.neg_table, self.inv_table):
            t.setflags(write=False)

    def __repr__(self):
        return f"FieldSpec(q={self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self):
        return hash(("FieldSpec", self.q))

    def _check(self, a):
        a = np.asarray(a)
        if np.any((a < 0) | (a >= self.q)):
            raise FieldError(f"symbol out of range for q={self.q}")
        return a

    def to_int(self, a):
        """Integer (polynomial or residue) representation of symbol ``a``."""
        return self._to_int[self._check(a)]

    def from_int(self, v):
        v = np.asarray(v)
        if np.any((v < 0) | (v >= self.q)):
            raise FieldError("integer representation out of range")
        return self._from_int[v]

    def add(self, a, b):
        return self.add_table[self._check(a), self._check(b)]

    def sub(self, a, b):
        return self.add_table[self._check(a), self.neg_table[self._check(b)]]

    def mul(self, a, b):
        return self.mul_table[self._check(a), self._check(b)]

    def neg(self, a):
        return self.neg_table[self._check(a)]

    def inv(self, a):
        a = self._check(a)
        if np.any(a == 0):
            raise FieldError("zero has no multiplicative inverse")
        return self.inv_table[a]

    def alpha_power(self, k: int) -> int:
        """Symbol index of ``alpha^k``."""
        return int(k % (self.q - 1)) + 1


@lru_cache(maxsize=None)
def field(q: int) -> FieldSpec:
    """Cached :class:`FieldSpec` for order ``q``."""
    return FieldSpec(q)
