"""Defining sets, trace codes and their weight distributions."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .field_tower import FieldError, LevelTables, SubfieldLevel, TowerParams, level_tables

ENUMERATION_BOUND = 1 << 16


class EmptyDefiningSetError(FieldError):
    pass


class CCase(str, enum.Enum):
    ZERO = "zero"
    NONZERO_EVEN = "nonzero-even-q"
    NONZERO_ODD = "nonzero-odd-q"

    @classmethod
    def of(cls, q: int, c_is_zero: bool) -> CCase:
        if c_is_zero:
            return cls.ZERO
        return cls.NONZERO_EVEN if q % 2 == 0 else cls.NONZERO_ODD


@dataclass(frozen=True)
class DefiningSet:
    c: int  # encoding of c in F_q
    c_index: int
    elements: np.ndarray  # ascending encodings

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class WeightDistribution:
    n: int
    q: int
    k: int
    counts: tuple[int, ...]  # A_0 .. A_n

    def __post_init__(self) -> None:
        if len(self.counts) != self.n + 1:
            raise ValueError("counts must have length n + 1")

    @classmethod
    def from_dict(cls, n: int, q: int, k: int, weights: dict[int, int]) -> WeightDistribution:
        counts = [0] * (n + 1)
        for w, a in weights.items():
            counts[w] += a
        return cls(n, q, k, tuple(counts))

    def as_dict(self) -> dict[int, int]:
        return {w: a for w, a in enumerate(self.counts) if a}

    def nonzero_weights(self) -> list[int]:
        return [w for w, a in enumerate(self.counts) if a and w > 0]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def is_consistent(self) -> bool:
        return self.counts[0] == 1 and self.total == self.q**self.k and min(self.counts) >= 0


def c_from_index(tower: TowerParams, c_index: int) -> int:
    q = tower.q
    if not 0 <= c_index < q:
        raise FieldError(f"c index {c_index} outside 0..{q - 1}")
    return int(tower.subfield_elements(SubfieldLevel.Q)[c_index])


def length_closed(q: int, s: int, c_is_zero: bool) -> int:
    if c_is_zero:
        return (q**s + 1) * (q ** (s - 1) - 1)
    return q ** (s - 1) * (q**s + 1)


def build_defining_set(tower: TowerParams, c: int) -> DefiningSet:
    """All nonzero x with Tr_{q^s/q}(x^(q^s+1)) + c = 0, ascending by encoding."""
    tower._check_level(c, SubfieldLevel.Q)
    x = np.arange(1, tower.size)
    vals = tower.add(tower.norm_trace_qs_q[x], c)
    elems = x[vals == 0]
    return DefiningSet(c, int(tower.canonical_index(c, SubfieldLevel.Q)), elems)


def _chunks(total: int, workers: int, per_row: int):
    step = -(-total // max(1, workers))
    step = min(step, max(1, (1 << 22) // max(1, per_row)))
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


@dataclass(eq=False)
class TraceCode:
    tower: TowerParams
    defining_set: DefiningSet

    def __post_init__(self) -> None:
        if len(self.defining_set) == 0:
            raise EmptyDefiningSetError("empty defining set: c = 0 requires s > 1")

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def n(self) -> int:
        return len(self.defining_set)

    @property
    def k(self) -> int:
        return self.tower.m

    @property
    def basis(self) -> np.ndarray:
        """g^0 .. g^(m-1): an F_q-basis of F_{q^m} since g has degree m over F_q."""
        return self.tower.antilog_table[: self.k]

    @property
    def fq(self) -> LevelTables:
        return level_tables(self.tower, SubfieldLevel.Q)

    def _symbols(self, b) -> np.ndarray:
        """Codeword rows for an array of b encodings, as canonical F_q indices."""
        tower = self.tower
        b = np.asarray(b, dtype=np.int64)
        d = self.defining_set.elements
        prod = tower.mul(b[:, None], d[None, :])
        return tower.index_lookup(SubfieldLevel.Q)[tower.trace_qm_q[prod]]

    @cached_property
    def generator_matrix(self) -> np.ndarray:
        g = self._symbols(self.basis)
        g.setflags(write=False)
        return g

    def codeword(self, b: int) -> np.ndarray:
        self.tower._check_level(b, SubfieldLevel.QM)
        return self._symbols([b])[0]

    def weight_distribution(self, workers: int = 1) -> WeightDistribution:
        """Exact distribution from enumerating every codeword c(b), b in F_{q^m}."""
        tower = self.tower
        if tower.size > ENUMERATION_BOUND:
            raise FieldError(f"q^m = {tower.size} exceeds enumeration bound")
        n = self.n
        order = tower.order
        look = tower.index_lookup(SubfieldLevel.Q)
        tr_nonzero_by_log = look[tower.trace_qm_q[tower.antilog_table]] != 0
        logs_d = tower.log_table[self.defining_set.elements]

        def histogram(lo: int, hi: int) -> np.ndarray:
            # b = g^i for i in [lo, hi)
            i = np.arange(lo, hi)
            wt = tr_nonzero_by_log[(i[:, None] + logs_d[None, :]) % order].sum(axis=1)
            return np.bincount(wt, minlength=n + 1)

        parts = _chunks(order, workers, n)
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                hists = list(pool.map(lambda r: histogram(*r), parts))
        else:
            hists = [histogram(*r) for r in parts]
        counts = np.sum(hists, axis=0)
        counts[0] += 1  # b = 0
        return WeightDistribution(n, self.q, self.k, tuple(int(a) for a in counts))

    def rank(self) -> int:
        return rank_fq(self.generator_matrix, self.fq)

    def is_projective(self) -> bool:
        return is_projective_matrix(self.generator_matrix, self.fq)


def build_code(tower: TowerParams, c_index: int) -> TraceCode:
    c = c_from_index(tower, c_index)
    if c == 0 and tower.s == 1:
        raise EmptyDefiningSetError("empty defining set: c = 0 requires s > 1")
    return TraceCode(tower, build_defining_set(tower, c))


def rank_fq(matrix: np.ndarray, fq: LevelTables) -> int:
    """Rank over F_q of a matrix of canonical indices (Gaussian elimination)."""
    a = np.array(matrix, dtype=np.int64)
    rows, cols = a.shape
    r = 0
    for col in range(cols):
        if r == rows:
            break
        piv = np.flatnonzero(a[r:, col])
        if len(piv) == 0:
            continue
        pr = r + piv[0]
        a[[r, pr]] = a[[pr, r]]
        a[r] = fq.mul[fq.inv[a[r, col]], a[r]]
        for i in range(rows):
            if i != r and a[i, col]:
                scaled = fq.mul[fq.neg[a[i, col]], a[r]]
                a[i] = fq.add[a[i], scaled]
        r += 1
    return r


def normalized_columns(matrix: np.ndarray, fq: LevelTables) -> np.ndarray:
    """Scale each column so its first nonzero entry is 1 (zero columns stay zero)."""
    a = np.asarray(matrix, dtype=np.int64)
    nz = a != 0
    first = np.where(nz.any(axis=0), nz.argmax(axis=0), 0)
    lead = a[first, np.arange(a.shape[1])]
    scale = np.where(lead == 0, 0, fq.inv[lead])
    return fq.mul[scale[None, :], a]


def is_projective_matrix(matrix: np.ndarray, fq: LevelTables) -> bool:
    """No zero column and no two F_q-proportional columns."""
    cols = normalized_columns(matrix, fq)
    if np.any(~cols.any(axis=0)):
        return False
    return len(np.unique(cols.T, axis=0)) == cols.shape[1]


def theorem7_distribution(q: int, s: int, c_case: CCase | str) -> WeightDistribution:
    c_case = CCase(c_case)
    m = 2 * s
    base = q ** (2 * s - 2) * (q - 1)
    if c_case is CCase.ZERO:
        if s <= 1:
            raise EmptyDefiningSetError("c = 0 requires s > 1")
        n = length_closed(q, s, True)
        weights = {
            (q ** (2 * s - 2) - q ** (s - 1)) * (q - 1): (q**s + 1) * (q**s - q ** (s - 1)),
            base: (q**s + 1) * (q ** (s - 1) - 1),
        }
    elif c_case is CCase.NONZERO_EVEN:
        if q % 2:
            raise ValueError("even-q case with odd q")
        n = length_closed(q, s, False)
        weights = {
            base: (q**s + 1) * (q ** (s - 1) - 1),
            base + q ** (s - 1): (q**s + 1) * (q**s - q ** (s - 1)),
        }
    else:
        if q % 2 == 0:
            raise ValueError("odd-q case with even q")
        n = length_closed(q, s, False)
        weights = {
            base: (q**s + 1) * (q**s + q ** (s - 1) - 2) // 2,
            base + 2 * q ** (s - 1): q ** (s - 1) * (q - 1) * (q**s + 1) // 2,
        }
    weights = {w: a for w, a in weights.items() if a}
    weights[0] = 1
    return WeightDistribution.from_dict(n, q, m, weights)


def minimality_check(dist: WeightDistribution) -> tuple[bool, Fraction]:
    """(w_min / w_max > (q-1)/q, w_min / w_max) over weights that occur."""
    ws = dist.nonzero_weights()
    if not ws:
        raise ValueError("zero code has no nonzero weights")
    ratio = Fraction(min(ws), max(ws))
    return ratio > Fraction(dist.q - 1, dist.q), ratio


def format_defining_set(tower: TowerParams, dset: DefiningSet) -> str:
    head = f"{tower.p} {tower.e} {tower.s} {dset.c_index} {len(dset)}"
    return "\n".join([head, *(str(int(x)) for x in dset.elements)]) + "\n"


def format_generator_matrix(code: TraceCode) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in code.generator_matrix) + "\n"
