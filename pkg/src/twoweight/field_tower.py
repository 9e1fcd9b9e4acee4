"""Field chain F_p < F_q < F_{q^s} < F_{q^m} (m = 2s) inside one ambient field.

Elements of the ambient field F_{p^{em}} are encoded as integers whose base-p
digits (low degree first) are the coefficients of the residue polynomial
modulo a primitive polynomial.  Multiplication goes through log/antilog
tables; subfields are the fixed sets of the corresponding Frobenius power.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

DEFAULT_SIZE_BOUND = 1 << 24


class FieldError(ValueError):
    """Invalid tower parameters or an element outside the requested subfield."""


def _ret(r):
    return int(r) if np.ndim(r) == 0 else r


class SubfieldLevel(enum.IntEnum):
    PRIME = 0
    Q = 1
    QS = 2
    QM = 3


def is_prime(n: int) -> bool:
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


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _polymulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    # f monic, coefficient lists low degree first
    deg = len(f) - 1
    prod = [0] * (2 * deg - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, deg - 1, -1):
        t = prod[k]
        if t:
            for i in range(deg + 1):
                prod[k - deg + i] = (prod[k - deg + i] - t * f[i]) % p
    return prod[:deg]


def _x_power_mod(exp: int, f: list[int], p: int) -> list[int]:
    deg = len(f) - 1
    result = [1] + [0] * (deg - 1)
    base = [0, 1] + [0] * (deg - 2) if deg > 1 else [(-f[0]) % p]
    while exp:
        if exp & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        exp >>= 1
    return result


def is_primitive_polynomial(coeffs: list[int], p: int) -> bool:
    """True iff the monic polynomial (low degree first) has a root of order p^deg - 1.

    An element of order p^deg - 1 in F_p[X]/(f) forces every nonzero residue
    to be a unit, so primitivity implies irreducibility.
    """
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] != 1 or coeffs[0] % p == 0:
        return False
    order = p**deg - 1
    one = [1] + [0] * (deg - 1)
    if _x_power_mod(order, coeffs, p) != one:
        return False
    return all(_x_power_mod(order // r, coeffs, p) != one for r in prime_factors(order))


def smallest_primitive_polynomial(p: int, deg: int) -> list[int]:
    """Smallest monic primitive polynomial of degree ``deg`` over F_p.

    Candidates are ordered by the integer sum(c_i p^i) of their coefficients,
    so X^4+X+1 precedes X^4+X^3+1 over F_2.
    """
    for low in range(1, p**deg):
        coeffs = [(low // p**i) % p for i in range(deg)] + [1]
        if is_primitive_polynomial(coeffs, p):
            return coeffs
    raise FieldError(f"no primitive polynomial of degree {deg} over F_{p}")  # unreachable for prime p


@dataclass(frozen=True, eq=False)
class TowerParams:
    p: int
    e: int
    s: int
    modulus: tuple[int, ...]
    antilog_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return 2 * self.s

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def degree(self) -> int:
        """Degree of the ambient field over F_p."""
        return self.e * self.m

    @property
    def size(self) -> int:
        return self.p**self.degree

    @property
    def order(self) -> int:
        """Order of the multiplicative group of the ambient field."""
        return self.size - 1

    @property
    def generator(self) -> int:
        return int(self.antilog_table[1])

    def modulus_str(self) -> str:
        return ",".join(str(c) for c in self.modulus)

    # --- levels -------------------------------------------------------

    def level_degree(self, level: SubfieldLevel) -> int:
        return (1, self.e, self.e * self.s, self.e * self.m)[level]

    def level_size(self, level: SubfieldLevel) -> int:
        return self.p ** self.level_degree(level)

    def cofactor(self, level: SubfieldLevel) -> int:
        """(size(ambient) - 1) / (size(level) - 1); logs of level units are its multiples."""
        return self.order // (self.level_size(level) - 1)

    def level_generator(self, level: SubfieldLevel) -> int:
        return int(self.antilog_table[self.cofactor(level) % self.order])

    def in_level(self, x, level: SubfieldLevel):
        """Membership test; vectorized over integer arrays."""
        x = np.asarray(x)
        lg = self.log_table[x]
        return (x == 0) | (lg % self.cofactor(level) == 0)

    def _check_level(self, x, level: SubfieldLevel) -> None:
        if not np.all(self.in_level(x, level)):
            raise FieldError(f"element outside subfield {level.name}")

    # --- arithmetic ---------------------------------------------------

    def digits(self, x) -> np.ndarray:
        """Base-p digits of encodings, shape x.shape + (degree,)."""
        x = np.asarray(x, dtype=np.int64)
        powers = self.p ** np.arange(self.degree, dtype=np.int64)
        return (x[..., None] // powers) % self.p

    def from_digits(self, d: np.ndarray) -> np.ndarray:
        powers = self.p ** np.arange(self.degree, dtype=np.int64)
        return (np.asarray(d, dtype=np.int64) % self.p) @ powers

    def add(self, x, y):
        if self.p == 2:
            return _ret(np.bitwise_xor(x, y))
        return _ret(self.from_digits(self.digits(x) + self.digits(y)))

    def neg(self, x):
        if self.p == 2:
            return _ret(np.asarray(x))
        return _ret(self.from_digits(-self.digits(x)))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        r = self.antilog_table[(self.log_table[x] + self.log_table[y]) % self.order]
        return _ret(np.where((x == 0) | (y == 0), 0, r))

    def inv(self, x):
        x = np.asarray(x, dtype=np.int64)
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of 0")
        return _ret(self.antilog_table[(-self.log_table[x]) % self.order])

    def pow(self, x, k: int):
        x = np.asarray(x, dtype=np.int64)
        if k == 0:
            return _ret(np.ones_like(x))
        r = self.antilog_table[(self.log_table[x] * (k % self.order)) % self.order]
        if k < 0 and np.any(x == 0):
            raise ZeroDivisionError("negative power of 0")
        return _ret(np.where(x == 0, 0, r))

    def frobenius_power(self, x, level: SubfieldLevel, i: int = 1):
        """x ** (size(level) ** i), computed on logs."""
        x = np.asarray(x, dtype=np.int64)
        k = pow(self.level_size(level), i, self.order)
        return _ret(np.where(x == 0, 0, self.antilog_table[(self.log_table[x] * k) % self.order]))

    def trace(self, x, frm: SubfieldLevel = SubfieldLevel.QM, to: SubfieldLevel = SubfieldLevel.Q):
        if to > frm:
            raise FieldError(f"{to.name} is not a subfield of {frm.name}")
        x = np.asarray(x, dtype=np.int64)
        self._check_level(x, frm)
        n_terms = self.level_degree(frm) // self.level_degree(to)
        acc = x
        for i in range(1, n_terms):
            acc = self.add(acc, self.frobenius_power(x, to, i))
        return _ret(acc)

    def norm(self, x, frm: SubfieldLevel = SubfieldLevel.QM, to: SubfieldLevel = SubfieldLevel.QS):
        if to > frm:
            raise FieldError(f"{to.name} is not a subfield of {frm.name}")
        x = np.asarray(x, dtype=np.int64)
        self._check_level(x, frm)
        exp = (self.level_size(frm) - 1) // (self.level_size(to) - 1)
        return _ret(self.pow(x, exp))

    # --- subfields ----------------------------------------------------

    def subfield_elements(self, level: SubfieldLevel) -> np.ndarray:
        return self._subfield_cache[level][0]

    def canonical_index(self, x, level: SubfieldLevel):
        x = np.asarray(x, dtype=np.int64)
        idx = self._subfield_cache[level][1][x]
        if np.any(idx < 0):
            raise FieldError(f"element outside subfield {level.name}")
        return _ret(idx)

    def index_lookup(self, level: SubfieldLevel) -> np.ndarray:
        """Array mapping every ambient encoding to its canonical index (-1 if outside)."""
        return self._subfield_cache[level][1]

    @cached_property
    def _subfield_cache(self) -> dict:
        out = {}
        for level in SubfieldLevel:
            size = self.level_size(level)
            cof = self.cofactor(level)
            units = self.antilog_table[np.arange(0, self.order, cof)]
            elems = np.sort(np.concatenate([[0], units])).astype(np.int64)
            assert len(elems) == size
            lookup = np.full(self.size, -1, dtype=np.int64)
            lookup[elems] = np.arange(size)
            out[level] = (elems, lookup)
        return out

    @cached_property
    def _level_table_store(self) -> dict:
        return {}

    @cached_property
    def trace_qm_q(self) -> np.ndarray:
        """Tr_{q^m/q} of every ambient encoding, as encodings."""
        return self.trace(np.arange(self.size), SubfieldLevel.QM, SubfieldLevel.Q)

    @cached_property
    def norm_trace_qs_q(self) -> np.ndarray:
        """Tr_{q^s/q}(x^(q^s+1)) of every ambient encoding, as encodings."""
        nx = self.norm(np.arange(self.size), SubfieldLevel.QM, SubfieldLevel.QS)
        return self.trace(nx, SubfieldLevel.QS, SubfieldLevel.Q)


def _build_antilog(p: int, deg: int, modulus: list[int]) -> np.ndarray:
    """Encodings of X^0, X^1, ..., X^(p^deg - 2)."""
    order = p**deg - 1
    powers = p ** np.arange(deg, dtype=np.int64)
    block = min(order, 4096)
    digits = np.zeros((block, deg), dtype=np.int64)
    cur = [1] + [0] * (deg - 1)
    for i in range(block):
        digits[i] = cur
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [(c - top * f) % p for c, f in zip(cur, modulus[:-1])]
    antilog = np.empty(order, dtype=np.int64)
    antilog[:block] = digits @ powers
    if block < order:
        # multiplication by X^block as an F_p-linear map on digit rows
        shift = np.zeros((deg, deg), dtype=np.int64)
        for i in range(deg):
            basis = [0] * deg
            basis[i] = 1
            shift[i] = _polymulmod(basis, cur, modulus, p)
        start = block
        while start < order:
            digits = (digits @ shift) % p
            stop = min(start + block, order)
            antilog[start:stop] = (digits[: stop - start] @ powers)
            start = stop
    return antilog


@lru_cache(maxsize=64)
def build_tower(p: int, e: int, s: int, size_bound: int = DEFAULT_SIZE_BOUND) -> TowerParams:
    """Build the ambient field F_{p^{2es}} with its subfield chain.

    Deterministic for fixed (p, e, s): the modulus is the smallest primitive
    polynomial in the ordering of :func:`smallest_primitive_polynomial`.
    """
    if not is_prime(p):
        raise FieldError(f"p = {p} is not prime")
    if e < 1 or s < 1:
        raise FieldError("e and s must be positive")
    deg = 2 * e * s
    if p**deg > size_bound:
        raise FieldError(f"ambient size {p}^{deg} exceeds bound {size_bound}")
    modulus = smallest_primitive_polynomial(p, deg)
    antilog = _build_antilog(p, deg, modulus)
    log = np.full(p**deg, -1, dtype=np.int64)
    log[antilog] = np.arange(len(antilog))
    if np.count_nonzero(log[1:] < 0):
        raise FieldError("modulus root is not primitive")  # guarded by the search
    antilog.setflags(write=False)
    log.setflags(write=False)
    return TowerParams(p, e, s, tuple(modulus), antilog, log)


@dataclass(frozen=True, eq=False)
class LevelTables:
    """Arithmetic of one subfield on canonical indices 0..size-1."""

    level: SubfieldLevel
    elements: np.ndarray  # canonical index -> ambient encoding
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] = 0 placeholder
    trace_to_prime: np.ndarray  # values in 0..p-1

    @property
    def size(self) -> int:
        return len(self.elements)


_LEVEL_TABLE_LIMIT = 1 << 12


def level_tables(tower: TowerParams, level: SubfieldLevel) -> LevelTables:
    store = tower._level_table_store
    hit = store.get(level)
    if hit is not None:
        return hit
    size = tower.level_size(level)
    if size > _LEVEL_TABLE_LIMIT:
        raise FieldError(f"level {level.name} too large for index tables ({size})")
    elems = tower.subfield_elements(level)
    look = tower.index_lookup(level)
    add = look[tower.add(elems[:, None], elems[None, :])]
    mul = look[tower.mul(elems[:, None], elems[None, :])]
    neg = look[tower.neg(elems)]
    inv = np.zeros(size, dtype=np.int64)
    inv[1:] = look[tower.inv(elems[1:])]
    trp = tower.trace(elems, level, SubfieldLevel.PRIME)
    tables = LevelTables(level, elems, add, mul, neg, inv, np.asarray(trp, dtype=np.int64))
    store[level] = tables
    return tables
