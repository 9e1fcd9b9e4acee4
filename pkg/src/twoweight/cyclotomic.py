"""Exact arithmetic in Z[zeta_p] on integer coefficient vectors."""

from __future__ import annotations

import cmath

import numpy as np


class CycVec:
    """sum_i coeffs[i] * zeta_p**i, stored in canonical form (last coordinate 0).

    The canonical form is unique because 1, zeta, ..., zeta^(p-2) is a
    Z-basis of Z[zeta_p] and sum_i zeta^i = 0.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs) -> None:
        c = np.array(coeffs, dtype=np.int64).reshape(-1)
        if len(c) != p:
            raise ValueError(f"expected {p} coefficients, got {len(c)}")
        self.p = p
        self.coeffs = c - c[-1]
        self.coeffs.setflags(write=False)

    @classmethod
    def integer(cls, p: int, t: int) -> CycVec:
        c = np.zeros(p, dtype=np.int64)
        c[0] = t
        return cls(p, c)

    @classmethod
    def root(cls, p: int, k: int = 1) -> CycVec:
        """zeta_p ** k."""
        c = np.zeros(p, dtype=np.int64)
        c[k % p] = 1
        return cls(p, c)

    @classmethod
    def from_exponents(cls, p: int, exponents, weights=None) -> CycVec:
        """sum_j weights[j] * zeta ** exponents[j]."""
        e = np.asarray(exponents, dtype=np.int64).reshape(-1) % p
        w = None if weights is None else np.asarray(weights, dtype=np.int64).reshape(-1)
        return cls(p, np.bincount(e, weights=w, minlength=p).astype(np.int64))

    def _check(self, other: CycVec) -> None:
        if self.p != other.p:
            raise ValueError(f"mismatched p: {self.p} vs {other.p}")

    def _coerce(self, other) -> CycVec:
        if isinstance(other, CycVec):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            return CycVec.integer(self.p, int(other))
        return NotImplemented

    def __add__(self, other) -> CycVec:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycVec(self.p, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self) -> CycVec:
        return CycVec(self.p, -self.coeffs)

    def __sub__(self, other) -> CycVec:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycVec(self.p, self.coeffs - other.coeffs)

    def __mul__(self, other) -> CycVec:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycVec(self.p, cyclic_convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs.tobytes()))

    def is_integer(self) -> bool:
        return not np.any(self.coeffs[1:])

    def as_integer(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self!r} is not a rational integer")
        return int(self.coeffs[0])

    def to_complex(self) -> complex:
        zeta = cmath.exp(2j * cmath.pi / self.p)
        return complex(sum(int(c) * zeta**i for i, c in enumerate(self.coeffs) if c))

    def __repr__(self) -> str:
        return f"CycVec(p={self.p}, coeffs={self.coeffs.tolist()})"


def cyclic_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product in Z[X]/(X^p - 1) of coefficient vectors (last axis of length p)."""
    p = a.shape[-1]
    full = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (2 * p - 1,), dtype=np.int64)
    for i in np.flatnonzero(np.any(a != 0, axis=tuple(range(a.ndim - 1)))):
        full[..., i:i + p] += a[..., i:i + 1] * b
    out = full[..., :p].copy()
    out[..., : p - 1] += full[..., p:]
    return out


def canonicalize(coeffs: np.ndarray) -> np.ndarray:
    """Canonical form along the last axis of a stack of coefficient vectors."""
    return coeffs - coeffs[..., -1:]
