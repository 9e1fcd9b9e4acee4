"""Characters, Gauss sums and the exponential sums behind the code's weights.

Every sum built from additive characters and the quadratic character is
evaluated exactly in Z[zeta_p].  Two evaluation routes exist:

* ``*_bruteforce`` functions enumerate every term of the defining sum;
* ``*_table`` functions evaluate the same sums for all b (and all c) at once
  by grouping terms on the value of the inner trace expressions and
  multiplying exact cyclotomic partial sums.  No character identity is used.

The ``*_closed`` functions are the closed forms being verified.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .cyclotomic import CycVec, canonicalize
from .field_tower import FieldError, SubfieldLevel, TowerParams, level_tables

Q = SubfieldLevel.Q
QS = SubfieldLevel.QS
QM = SubfieldLevel.QM
PRIME = SubfieldLevel.PRIME


class CharSumError(ArithmeticError):
    """A brute-force sum failed to canonicalize to a rational integer."""


def _tr_to_prime(tower: TowerParams, x, level: SubfieldLevel):
    return tower.trace(x, level, PRIME)


# --- characters ---------------------------------------------------------


def additive_char(tower: TowerParams, a: int, x: int, level: SubfieldLevel = Q) -> CycVec:
    """phi_a(x) = zeta_p ** Tr_{level/p}(a x)."""
    tower._check_level([a, x], level)
    return CycVec.root(tower.p, _tr_to_prime(tower, tower.mul(a, x), level))


def quadratic_char(tower: TowerParams, x: int, level: SubfieldLevel = Q) -> int:
    size = tower.level_size(level)
    if size % 2 == 0:
        raise FieldError("quadratic character needs odd field size")
    if x == 0:
        raise FieldError("quadratic character undefined at 0")
    tower._check_level(x, level)
    return 1 if tower.pow(x, (size - 1) // 2) == 1 else -1


def _eta_by_index(tower: TowerParams, level: SubfieldLevel = Q) -> np.ndarray:
    """eta on canonical indices of the level; entry 0 is 0."""
    t = level_tables(tower, level)
    size = t.size
    if size % 2 == 0:
        raise FieldError("quadratic character needs odd field size")
    cof = tower.cofactor(level)
    k = tower.log_table[t.elements[1:]] // cof
    return np.concatenate([[0], np.where(k % 2 == 0, 1, -1)]).astype(np.int64)


def mult_char_numeric(tower: TowerParams, j: int, x: int, level: SubfieldLevel = Q) -> complex:
    """psi_j(alpha^k) = exp(2 pi i j k / (size - 1)) with alpha the level generator."""
    if x == 0:
        raise FieldError("multiplicative character undefined at 0")
    tower._check_level(x, level)
    size = tower.level_size(level)
    k = int(tower.log_table[x]) // tower.cofactor(level)
    return cmath.exp(2j * math.pi * (j % (size - 1)) * k / (size - 1))


def gauss_sum_quadratic(tower: TowerParams, level: SubfieldLevel = Q, b: int = 1) -> CycVec:
    """G(eta, phi_b) = sum over nonzero x of eta(x) zeta^Tr(bx), exact."""
    size = tower.level_size(level)
    if size % 2 == 0:
        raise FieldError("quadratic Gauss sum needs odd q")
    elems = tower.subfield_elements(level)[1:]
    cof = tower.cofactor(level)
    eta = np.where((tower.log_table[elems] // cof) % 2 == 0, 1, -1)
    exps = _tr_to_prime(tower, tower.mul(b, elems), level)
    return CycVec.from_exponents(tower.p, exps, eta)


def lemma1_closed(p: int, e: int) -> complex:
    if p == 2:
        raise ValueError("closed form needs odd p")
    sign = (-1) ** (e - 1)
    root_q = math.sqrt(p**e)
    if p % 4 == 1:
        return complex(sign * root_q)
    return sign * (1j**e) * root_q


# --- quadratic polynomial sums -------------------------------------------


def quadratic_poly_sum(tower: TowerParams, a2: int, a1: int, a0: int, b: int = 1,
                       level: SubfieldLevel = Q) -> CycVec:
    """sum over c in the level of phi_b(a2 c^2 + a1 c + a0), exact."""
    if a2 == 0:
        raise FieldError("a2 = 0: not a quadratic")
    if b == 0:
        raise FieldError("b = 0 gives the trivial character")
    tower._check_level([a2, a1, a0, b], level)
    c = tower.subfield_elements(level)
    f = tower.add(tower.add(tower.mul(a2, tower.mul(c, c)), tower.mul(a1, c)), a0)
    return CycVec.from_exponents(tower.p, _tr_to_prime(tower, tower.mul(b, f), level))


def quadratic_poly_closed(tower: TowerParams, a2: int, a1: int, a0: int, b: int = 1,
                          level: SubfieldLevel = Q) -> CycVec:
    """Closed form of :func:`quadratic_poly_sum` (completing the square for odd q,
    the a2 = b a1^2 criterion for even q)."""
    if a2 == 0:
        raise FieldError("a2 = 0: not a quadratic")
    p = tower.p
    if tower.level_size(level) % 2:
        four_a2 = tower.mul(tower.add(tower.add(1, 1), tower.add(1, 1)), a2)
        shift = tower.sub(a0, tower.mul(tower.mul(a1, a1), tower.inv(four_a2)))
        return additive_char(tower, b, shift, level) * quadratic_char(tower, a2, level) \
            * gauss_sum_quadratic(tower, level, b)
    if a2 == tower.mul(b, tower.mul(a1, a1)):
        return additive_char(tower, b, a0, level) * tower.level_size(level)
    return CycVec.integer(p, 0)


# --- Delta(a, b, c) -----------------------------------------------------------


def _check_delta_args(tower: TowerParams, a: int, b: int, c: int) -> None:
    if a == 0:
        raise FieldError("a must be nonzero")
    tower._check_level(a, QS)
    tower._check_level(b, QM)
    tower._check_level(c, Q)


def _nonzero_ambient(tower: TowerParams) -> np.ndarray:
    return tower.antilog_table


def delta_bruteforce(tower: TowerParams, a: int, b: int, c: int) -> int:
    """Delta(a,b,c) by enumerating every (y, x) with y in F_q^*, x in F_{q^m}^*."""
    _check_delta_args(tower, a, b, c)
    x = _nonzero_ambient(tower)
    inner = tower.add(tower.trace(tower.mul(a, tower.norm(x, QM, QS)), QS, Q),
                      tower.trace(tower.mul(b, x), QM, Q))
    y = tower.subfield_elements(Q)[1:]
    arg = tower.add(c, inner)[None, :]
    exps = _tr_to_prime(tower, tower.mul(y[:, None], arg), Q)
    total = CycVec.from_exponents(tower.p, exps)
    if not total.is_integer():
        raise CharSumError(f"Delta({a},{b},{c}) = {total!r} is not an integer")
    return total.as_integer()


def _unit_sums(tower: TowerParams) -> np.ndarray:
    """Row w: coefficients of sum over nonzero y in F_q of zeta^Tr(y w), by enumeration."""
    t = level_tables(tower, Q)
    exps = t.trace_to_prime[t.mul[1:, :]]  # (y, w)
    out = np.zeros((t.size, tower.p), dtype=np.int64)
    for w in range(t.size):
        out[w] = np.bincount(exps[:, w], minlength=tower.p)
    return out


def _integer_or_raise(coeffs: np.ndarray, what: str) -> np.ndarray:
    canon = canonicalize(coeffs)
    if np.any(canon[..., 1:]):
        bad = np.argwhere(np.any(canon[..., 1:] != 0, axis=-1))[0]
        raise CharSumError(f"{what} at {tuple(bad)} is not a rational integer")
    return canon[..., 0]


def _exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer matrix product through float64 BLAS; exact below 2**53."""
    bound = float(np.abs(a).max(initial=0)) * float(np.abs(b).max(initial=0)) * a.shape[-1]
    if bound >= 2.0**53:
        return a @ b
    return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)


def _chunks(total: int, per_row: int, budget: int = 1 << 22):
    step = max(1, budget // max(per_row, 1))
    for start in range(0, total, step):
        yield start, min(total, start + step)


def _trace_index_by_log(tower: TowerParams) -> np.ndarray:
    """Canonical F_q index of Tr_{q^m/q}(g^k) for k = 0..order-1."""
    look = tower.index_lookup(Q)
    return look[tower.trace_qm_q[tower.antilog_table]]


def delta_table(tower: TowerParams, a: int) -> np.ndarray:
    """Delta(a, b, c) for every b (row = encoding) and c (column = canonical index)."""
    if a == 0:
        raise FieldError("a must be nonzero")
    tower._check_level(a, QS)
    t = level_tables(tower, Q)
    q, Qs, order = t.size, tower.size, tower.order
    look = tower.index_lookup(Q)
    x = tower.antilog_table
    w = look[tower.trace(tower.mul(a, tower.norm(x, QM, QS)), QS, Q)]
    tr_by_log = _trace_index_by_log(tower)
    unit = _unit_sums(tower)
    # unit sums re-indexed: [c, t] -> sum over y of zeta^Tr(y (c + t))
    shifted = unit[t.add]  # (c, t, p)
    shifted_flat = shifted.transpose(1, 0, 2).reshape(q, q * tower.p)
    logs_x = np.arange(order)
    out = np.empty((Qs, q), dtype=np.int64)
    for lo, hi in _chunks(Qs, order):
        b = np.arange(lo, hi)
        lb = tower.log_table[b]
        u = tr_by_log[(lb[:, None] + logs_x[None, :]) % order]
        u[b == 0] = 0
        tval = t.add[w[None, :], u]
        rows = np.repeat(np.arange(hi - lo), order)
        hist = np.bincount((rows * q + tval.reshape(-1)), minlength=(hi - lo) * q).reshape(hi - lo, q)
        coeffs = _exact_matmul(hist, shifted_flat).reshape(hi - lo, q, tower.p)
        out[lo:hi] = _integer_or_raise(coeffs, "Delta")
    return out


def _trace_qs(tower: TowerParams, v: int) -> int:
    return tower.trace(v, QS, Q)


def delta_case_value(q: int, s: int, c_zero, t_zero, c_eq_t):
    """Four-case value of Delta given the case predicates (numpy-friendly)."""
    qs1 = q**s + 1
    return np.where(
        c_zero,
        np.where(t_zero, qs1 * (1 - q), qs1 - q),
        np.where(~np.asarray(t_zero) & np.asarray(c_eq_t), qs1 - q ** (s + 1), qs1),
    )


def delta_closed(tower: TowerParams, a: int, b: int, c: int) -> int:
    _check_delta_args(tower, a, b, c)
    t = _trace_qs(tower, tower.mul(tower.norm(b, QM, QS), tower.inv(a)))
    return int(delta_case_value(tower.q, tower.s, c == 0, t == 0, c == t))


# --- S_c(b) ----------------------------------------------------------------


def s_c_bruteforce(tower: TowerParams, b: int, c: int) -> int:
    """S_c(b) by enumerating every (x, y, z), x in F_{q^m}^*, y, z in F_q^*."""
    if b == 0:
        raise FieldError("b must be nonzero")
    tower._check_level(b, QM)
    tower._check_level(c, Q)
    x = _nonzero_ambient(tower)
    u = tower.trace(tower.mul(b, x), QM, Q)
    v = tower.norm_trace_qs_q[x]
    y = tower.subfield_elements(Q)[1:]
    yu = tower.mul(y[:, None], u[None, :])  # (y, x)
    zv = tower.add(c, v)
    zw = tower.mul(y[:, None], zv[None, :])  # (z, x)
    arg = tower.add(yu[:, None, :], zw[None, :, :])  # (y, z, x)
    total = CycVec.from_exponents(tower.p, _tr_to_prime(tower, arg, Q))
    if not total.is_integer():
        raise CharSumError(f"S_{c}({b}) = {total!r} is not an integer")
    return total.as_integer()


def s_c_table(tower: TowerParams, scalar_fast_path: bool = True) -> np.ndarray:
    """S_c(b) for every b (row = encoding; row 0 is the b = 0 sum) and c (canonical index).

    Terms are grouped on (u, v) = (Tr(bx), Tr(x^(q^s+1))): the y-sum and the
    z-sum then factor into enumerated partial sums, multiplied exactly.  When
    every enumerated z-sum canonicalizes to a rational integer, multiplying by
    it is scalar multiplication; ``scalar_fast_path=False`` forces the general
    cyclotomic product.
    """
    t = level_tables(tower, Q)
    q, Qs, order, p = t.size, tower.size, tower.order, tower.p
    look = tower.index_lookup(Q)
    x = tower.antilog_table
    v = look[tower.norm_trace_qs_q[x]]
    tr_by_log = _trace_index_by_log(tower)
    unit = _unit_sums(tower)  # (w, p)
    # z-sum factor as a block matrix: row (v, k), column (c, k') holds the
    # coefficient of zeta^(k'-k) in the z-sum at field value c + v
    shift = (np.arange(p)[None, :] - np.arange(p)[:, None]) % p
    w_of = t.add.T  # (v, c)
    canon_unit = canonicalize(unit)
    scalar = scalar_fast_path and not np.any(canon_unit[:, 1:])
    if scalar:
        zint = canon_unit[w_of, 0]  # (v, c)
    else:
        zmat = unit[w_of[:, None, :, None], shift[None, :, None, :]].reshape(q * p, q * p)
    logs_x = np.arange(order)
    out = np.empty((Qs, q), dtype=np.int64)
    for lo, hi in _chunks(Qs, max(order, q * q * p)):
        bsz = hi - lo
        b = np.arange(lo, hi)
        lb = tower.log_table[b]
        u = tr_by_log[(lb[:, None] + logs_x[None, :]) % order]
        u[b == 0] = 0
        rows = np.repeat(np.arange(bsz), order)
        flat = (rows * q + u.reshape(-1)) * q + np.tile(v, bsz)
        hist = np.bincount(flat, minlength=bsz * q * q).reshape(bsz, q, q)  # (b, u, v)
        # y-sum folded in: h1[b, v] = sum_u hist[b, u, v] * unit[u]
        h1 = _exact_matmul(hist.transpose(0, 2, 1).reshape(-1, q), unit)
        if scalar:
            h1 = h1.reshape(bsz, q, p).transpose(0, 2, 1).reshape(-1, q)  # (b k, v)
            acc = _exact_matmul(h1, zint).reshape(bsz, p, q).transpose(0, 2, 1)
        else:
            acc = _exact_matmul(h1.reshape(bsz, q * p), zmat).reshape(bsz, q, p)  # (b, c, k)
        out[lo:hi] = _integer_or_raise(acc, "S_c")
    return out


def s_c_case_value(tower: TowerParams, c_idx, t_idx):
    """Closed form of S_c(b) on canonical indices of c and T = Tr(b^(q^s+1)).

    For odd q and c != 0 this is the form obtained from completing the square:
    (q - 1) - q^s - q^(s+1) * (-1)^(e (p-1)/2) * eta(-c T).
    """
    q, s, p, e = tower.q, tower.s, tower.p, tower.e
    c_idx = np.asarray(c_idx)
    t_idx = np.asarray(t_idx)
    qs = q**s
    if q % 2 == 0:
        nonzero_c = np.where(t_idx == 0, (qs + 1) * (q - 1), q - 1 - qs)
    else:
        lt = level_tables(tower, Q)
        eta = _eta_by_index(tower, Q)
        sign = (-1) ** (((p - 1) // 2) * e)
        neg_ct = lt.neg[lt.mul[c_idx, t_idx]]
        odd = (q - 1) - qs - q ** (s + 1) * sign * eta[neg_ct]
        nonzero_c = np.where(t_idx == 0, (qs + 1) * (q - 1), odd)
    zero_c = np.where(t_idx == 0, -((q - 1) ** 2) * (qs + 1), (q - 1) * (qs - q + 1))
    return np.where(c_idx == 0, zero_c, nonzero_c)


def s_c_closed(tower: TowerParams, b: int, c: int) -> int:
    if b == 0:
        raise FieldError("b must be nonzero")
    tower._check_level(b, QM)
    tower._check_level(c, Q)
    look = tower.index_lookup(Q)
    t_idx = look[tower.norm_trace_qs_q[b]]
    return int(s_c_case_value(tower, look[c], t_idx))


# --- orthogonality ---------------------------------------------------------


def additive_orthogonality_holds(tower: TowerParams, level: SubfieldLevel) -> bool:
    """sum_x phi_1(a x) = size if a = 0 else 0, exactly, for every a in the level."""
    elems = tower.subfield_elements(level)
    size = len(elems)
    for a in elems:
        exps = _tr_to_prime(tower, tower.mul(int(a), elems), level)
        total = CycVec.from_exponents(tower.p, exps)
        if total != (size if a == 0 else 0):
            return False
    return True


def multiplicative_orthogonality_holds(tower: TowerParams, level: SubfieldLevel,
                                       tol: float = 1e-9) -> bool:
    """sum over nonzero x of psi_j(x) = size-1 if j = 0 else 0, within tol*sqrt(terms)."""
    size = tower.level_size(level)
    units = tower.subfield_elements(level)[1:]
    k = tower.log_table[units] // tower.cofactor(level)
    bound = tol * math.sqrt(size - 1)
    for j in range(size - 1):
        total = np.exp(2j * np.pi * j * k / (size - 1)).sum()
        want = size - 1 if j == 0 else 0
        if abs(total - want) > bound:
            return False
    return True
