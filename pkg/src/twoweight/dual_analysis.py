"""Dual weight distributions (MacWilliams), dual parameters, power moments."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .code_builder import CCase, WeightDistribution, length_closed


class TransformError(ArithmeticError):
    """MacWilliams output was not a nonnegative integer vector."""


class OutsideTheoremError(ValueError):
    """Parameters fall outside every case covered by the closed forms."""


def krawtchouk(n: int, q: int, j: int, i: int) -> int:
    """K_j(i) = sum_t (-1)^t (q-1)^(j-t) C(i, t) C(n-i, j-t)."""
    return sum((-1) ** t * (q - 1) ** (j - t) * comb(i, t) * comb(n - i, j - t) for t in range(j + 1))


def krawtchouk_column(n: int, q: int, i: int) -> list[int]:
    """[K_0(i), ..., K_n(i)] by the three-term recurrence in j."""
    out = [1]
    if n == 0:
        return out
    out.append((q - 1) * n - q * i)
    for j in range(1, n):
        num = (j + (q - 1) * (n - j) - q * i) * out[j] - (q - 1) * (n - j + 1) * out[j - 1]
        out.append(num // (j + 1))
    return out


def macwilliams_dual(dist: WeightDistribution) -> WeightDistribution:
    """Exact dual distribution A_j^perp = q^-k sum_i A_i K_j(i)."""
    n, q, k = dist.n, dist.q, dist.k
    if not dist.is_consistent():
        raise TransformError("input distribution is inconsistent")
    acc = [0] * (n + 1)
    for i, a in enumerate(dist.counts):
        if a:
            for j, kv in enumerate(krawtchouk_column(n, q, i)):
                acc[j] += a * kv
    scale = q**k
    counts = []
    for j, v in enumerate(acc):
        quo, rem = divmod(v, scale)
        if rem or quo < 0:
            raise TransformError(f"A_{j}^perp = {v}/{scale} is not a nonnegative integer")
        counts.append(quo)
    return WeightDistribution(n, q, n - k, tuple(counts))


def min_distance(dist: WeightDistribution) -> int | None:
    ws = dist.nonzero_weights()
    return ws[0] if ws else None


def theorem8_dual_params(q: int, s: int, c_case: CCase | str) -> tuple[int, int, int]:
    c_case = CCase(c_case)
    m = 2 * s
    if c_case is CCase.ZERO:
        n = length_closed(q, s, True)
        if q == 2 and s >= 3:
            return n, n - m, 3
        if q > 2 and s > 1:
            return n, n - m, 2
        raise OutsideTheoremError(f"no dual distance claim for q={q}, s={s}, c=0")
    n = length_closed(q, s, False)
    return n, n - m, 3 if c_case is CCase.NONZERO_EVEN else 2


def dual_low_weight_closed(q: int, s: int, c_case: CCase | str) -> tuple[int, int | None]:
    """(A_2^perp, A_3^perp or None) from the moment-derived closed forms."""
    c_case = CCase(c_case)
    if c_case is CCase.ZERO:
        if s <= 1:
            raise OutsideTheoremError("c = 0 requires s > 1")
        a2 = (q - 1) * (q - 2) * (q**s + 1) * (q ** (s - 1) - 1) // 2
        a3 = None
        if q == 2:
            a3 = (2 ** (3 * s - 4) * (2**s - 3) - 2 ** (s - 2) * (2 ** (s + 1) - 3) + 1) // 3
        return a2, a3
    if c_case is CCase.NONZERO_EVEN:
        a3 = (q ** (s - 1) * (q**s + 1) * (q - 1)
              * (q ** (s - 1) * (2 * q - 3) + q ** (2 * s - 2) * (q - 1) ** 2 + 2 - q)) // 6
        return 0, a3
    return q ** (s - 1) * (q - 1) * (q**s + 1) // 2, None


@dataclass(frozen=True)
class MomentCheck:
    name: str
    form: str  # "validated" or "printed"
    lhs: int
    rhs: Fraction
    holds: bool

    def as_json(self) -> dict:
        rhs = self.rhs.numerator if self.rhs.denominator == 1 else str(self.rhs)
        return {"name": self.name, "form": self.form, "holds": self.holds, "lhs": self.lhs, "rhs": rhs}


def _power_sum(dist: WeightDistribution, t: int) -> int:
    return sum(j**t * a for j, a in enumerate(dist.counts))


def moment_checks(dist: WeightDistribution, dual: WeightDistribution) -> list[MomentCheck]:
    """Second and third power moments that apply to this pair.

    Each identity appears twice where the printed and the validated forms
    differ: the second moment with -2A_2 vs +2A_2, and the binary third
    moment with n^3(n+3) vs n^2(n+3).
    """
    n, q, k = dist.n, dist.q, dist.k
    a1, a2 = dual.counts[1], (dual.counts[2] if n >= 2 else 0)
    a3 = dual.counts[3] if n >= 3 else 0
    qk = lambda e: Fraction(q) ** e  # noqa: E731
    out = []

    def add(name, form, lhs, rhs):
        out.append(MomentCheck(name, form, lhs, rhs, Fraction(lhs) == rhs))

    if a1 == 0:
        s2 = _power_sum(dist, 2)
        base = (q - 1) * n * (q * n - n + 1)
        add("second_moment", "validated", s2, qk(k - 2) * (base + 2 * a2))
        add("second_moment", "printed", s2, qk(k - 2) * (base - 2 * a2))
        if a2 == 0:
            s3 = _power_sum(dist, 3)
            if q == 2:
                add("third_moment_binary", "validated", s3, qk(k - 3) * (n * n * (n + 3) - 6 * a3))
                add("third_moment_binary", "printed", s3, qk(k - 3) * (n**3 * (n + 3) - 6 * a3))
            if q % 2 == 0:
                poly = q * q * n * n - 2 * q * n * n + 3 * q * n - q + n * n - 3 * n + 2
                rhs = qk(k - 3) * ((q - 1) * n * poly - 6 * a3)
                add("third_moment_even_q", "validated", s3, rhs)
                add("third_moment_even_q", "printed", s3, rhs)
    return out


def pless_moment_check(dist: WeightDistribution, dual: WeightDistribution) -> bool:
    checks = moment_checks(dist, dual)
    return bool(checks) and all(c.holds for c in checks if c.form == "validated")


@dataclass(frozen=True)
class DualReport:
    n: int
    k_dual: int
    d_dual: int | None
    dual_counts: WeightDistribution
    d_theorem8: int | None
    a2: int
    a3: int
    a2_closed: int | None
    a3_closed: int | None
    moment_checks: list[MomentCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        if self.d_theorem8 is not None and self.d_dual != self.d_theorem8:
            return False
        if self.a2_closed is not None and self.a2_closed != self.a2:
            return False
        if self.a3_closed is not None and self.a3_closed != self.a3:
            return False
        return all(c.holds for c in self.moment_checks if c.form == "validated")


def analyze_dual(dist: WeightDistribution, s: int, c_case: CCase | str) -> DualReport:
    c_case = CCase(c_case)
    dual = macwilliams_dual(dist)
    q = dist.q
    try:
        d8 = theorem8_dual_params(q, s, c_case)[2]
    except OutsideTheoremError:
        d8 = None
    try:
        a2c, a3c = dual_low_weight_closed(q, s, c_case)
    except OutsideTheoremError:
        a2c, a3c = None, None
    counts = dual.counts
    return DualReport(
        n=dist.n,
        k_dual=dual.k,
        d_dual=min_distance(dual),
        dual_counts=dual,
        d_theorem8=d8,
        a2=counts[2] if dist.n >= 2 else 0,
        a3=counts[3] if dist.n >= 3 else 0,
        a2_closed=a2c,
        a3_closed=a3c,
        moment_checks=moment_checks(dist, dual),
    )
