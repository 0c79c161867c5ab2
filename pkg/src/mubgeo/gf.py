"""Arithmetic in the finite fields GF(p^k).

Elements are integers ``0 .. p**k - 1``; element ``a`` stands for the
polynomial whose base-``p`` digits (least significant first) are its
coefficients.  The prime subfield is therefore ``0 .. p - 1``.

The modulus is the lexicographically smallest monic irreducible polynomial
of degree ``k`` (coefficients compared from the constant term upwards), so
tables are reproducible without a Conway-polynomial database.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    FieldDivisionByZero,
    IndexOutOfRange,
    NonPrimeCharacteristic,
    OrderNotPrimePower,
    OrderTooLarge,
)

DEFAULT_ORDER_CAP = 2**16
# add/mul tables above this order are only built on first access
EAGER_TABLE_LIMIT = 1024
CACHE_ENV = "MUBGEO_CACHE_DIR"


def is_prime(n: int) -> bool:
    """Trial division primality test."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``n == p**k``, or None if n is not a prime power."""
    if n < 2:
        return None
    p = next(d for d in itertools.count(2) if n % d == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` over GF(p)."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [c % p for c in a[:dm]] + [0] * max(0, dm - len(a))


def is_irreducible(coeffs: list[int], p: int) -> bool:
    """Irreducibility of a monic polynomial (low degree first) by trial division.

    Every monic polynomial of degree ``1 .. deg // 2`` is tried as a divisor.
    """
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] != 1:
        raise ValueError("expected a monic polynomial of degree >= 1")
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_mod(coeffs, list(low) + [1], p)):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible polynomial of degree k."""
    if k == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=k):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("an irreducible polynomial of every degree exists")


def _digits(order: int, p: int, k: int) -> np.ndarray:
    idx = np.arange(order)
    return np.stack([(idx // p**i) % p for i in range(k)], axis=1)


def _encode(digits: np.ndarray, p: int) -> np.ndarray:
    weights = p ** np.arange(digits.shape[-1])
    return (digits * weights).sum(axis=-1)


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Complete arithmetic for GF(p^k).

    ``exp_table[i]`` is ``g**i`` for a fixed primitive element ``g``;
    ``log_table`` is its inverse on nonzero elements.  ``add_table`` and
    ``mul_table`` are ``order x order`` lookups.  ``inv_table[0]`` and
    ``log_table[0]`` hold -1 (undefined).
    """

    p: int
    k: int
    modulus: tuple[int, ...]
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    inv_table: np.ndarray = field(repr=False)
    trace_table: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def primitive_element(self) -> int:
        return int(self.exp_table[1]) if self.order > 2 else 1

    @cached_property
    def digits(self) -> np.ndarray:
        return _digits(self.order, self.p, self.k)

    @cached_property
    def add_table(self) -> np.ndarray:
        d = self.digits
        return _encode((d[:, None, :] + d[None, :, :]) % self.p, self.p)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return _encode((-self.digits) % self.p, self.p)

    @cached_property
    def mul_table(self) -> np.ndarray:
        q1 = self.order - 1
        lg = self.log_table
        tab = self.exp_table[(lg[:, None] + lg[None, :]) % q1]
        tab[0, :] = 0
        tab[:, 0] = 0
        return tab

    def elements(self) -> range:
        return range(self.order)

    def to_json(self) -> dict:
        """Tables in the cross-implementation exchange layout."""
        return {
            "p": self.p,
            "k": self.k,
            "modulus": list(self.modulus),
            "add": self.add_table.tolist(),
            "mul": self.mul_table.tolist(),
        }


def _mul_poly_int(a: int, b: int, p: int, modulus: tuple[int, ...]) -> int:
    k = len(modulus) - 1
    da = [(a // p**i) % p for i in range(k)]
    db = [(b // p**i) % p for i in range(k)]
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                prod[i + j] += x * y
    rem = _poly_mod(prod, list(modulus), p)
    return sum(c * p**i for i, c in enumerate(rem))


def _exp_table(p: int, k: int, modulus: tuple[int, ...]) -> np.ndarray:
    order = p**k
    if order == 2:
        return np.array([1], dtype=np.int64)
    for g in range(2, order):
        powers = [1]
        x = g
        while x != 1:
            powers.append(x)
            x = _mul_poly_int(x, g, p, modulus)
        if len(powers) == order - 1:
            return np.array(powers, dtype=np.int64)
    raise AssertionError("the multiplicative group of a field is cyclic")


def _cache_path(p: int, k: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    return Path(root) / f"gf_{p}_{k}.json" if root else None


def field_create(p: int, k: int = 1, *, cap: int = DEFAULT_ORDER_CAP) -> FieldTable:
    """Build GF(p^k).

    Raises NonPrimeCharacteristic for composite ``p`` and OrderTooLarge when
    ``p**k`` exceeds ``cap``.  When ``MUBGEO_CACHE_DIR`` is set, the
    exponential table is memoized there as JSON.
    """
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    order = p**k
    if order > cap:
        raise OrderTooLarge(f"GF({p}^{k}) has order {order} > cap {cap}")

    modulus = smallest_irreducible(p, k)
    cache = _cache_path(p, k)
    exp = None
    if cache is not None and cache.exists():
        data = json.loads(cache.read_text())
        if tuple(data["modulus"]) == modulus:
            exp = np.array(data["exp"], dtype=np.int64)
    if exp is None:
        exp = _exp_table(p, k, modulus)
        if cache is not None:
            cache.parent.mkdir(parents=True, exist_ok=True)
            cache.write_text(json.dumps({"modulus": list(modulus), "exp": exp.tolist()}))

    q1 = order - 1
    log = np.full(order, -1, dtype=np.int64)
    log[exp] = np.arange(q1)
    inv = np.full(order, -1, dtype=np.int64)
    inv[1:] = exp[(-log[1:]) % q1]

    # tr(a) = a + a^p + ... + a^(p^(k-1)), accumulated digit-wise
    digits = _digits(order, p, k)
    acc = np.zeros((order, k), dtype=np.int64)
    for i in range(k):
        powered = np.zeros(order, dtype=np.int64)
        powered[1:] = exp[(log[1:] * p**i) % q1]
        acc = (acc + digits[powered]) % p
    trace = _encode(acc, p)

    F = FieldTable(p, k, modulus, exp, log, inv, trace)
    if order <= EAGER_TABLE_LIMIT:
        _ = F.add_table, F.mul_table
    return F


def field_of_order(n: int, *, cap: int = DEFAULT_ORDER_CAP) -> FieldTable:
    """GF(n) for a prime power n; OrderNotPrimePower otherwise."""
    pk = prime_power(n)
    if pk is None:
        raise OrderNotPrimePower(f"{n} is not a prime power")
    return field_create(*pk, cap=cap)


def _check(F: FieldTable, *xs: int) -> None:
    for x in xs:
        if not 0 <= x < F.order:
            raise IndexOutOfRange(f"element {x} outside GF({F.order})")


def field_add(F: FieldTable, a: int, b: int) -> int:
    _check(F, a, b)
    if F.order <= EAGER_TABLE_LIMIT:
        return int(F.add_table[a, b])
    d = F.digits
    return int(_encode((d[a] + d[b]) % F.p, F.p))


def field_neg(F: FieldTable, a: int) -> int:
    _check(F, a)
    return int(F.neg_table[a])


def field_mul(F: FieldTable, a: int, b: int) -> int:
    _check(F, a, b)
    if a == 0 or b == 0:
        return 0
    return int(F.exp_table[(F.log_table[a] + F.log_table[b]) % (F.order - 1)])


def field_inv(F: FieldTable, a: int) -> int:
    _check(F, a)
    if a == 0:
        raise FieldDivisionByZero("zero has no multiplicative inverse")
    return int(F.inv_table[a])


def field_trace(F: FieldTable, a: int) -> int:
    """Absolute trace of ``a``, an element of the prime subfield."""
    _check(F, a)
    return int(F.trace_table[a])
