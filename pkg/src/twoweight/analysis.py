"""Per-code analysis reports, parameter sweeps and character-sum audits."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import charsums as cs
from .code_builder import (
    CCase,
    TraceCode,
    build_code,
    length_closed,
    minimality_check,
    theorem7_distribution,
)
from .dual_analysis import analyze_dual
from .field_tower import SubfieldLevel, TowerParams, build_tower, is_prime, level_tables
from .srg import (
    GraphError,
    NotSRG,
    PointGraph,
    build_graph,
    omega_set,
    srg_count,
    srg_family_params,
    srg_predicted_generic,
)

DEFAULT_MAX_SIZE = 4096
FULL_DELTA_BOUND = 256
QUADRATIC_SUM_BOUND = 64
COUNTEREXAMPLE_LIMIT = 5

# (length, dimension, minimal distance, c, m, q, optimality) as listed for the family
TABLE1 = (
    (5, 4, 2, 0, 4, 2, "Optimal"),
    (27, 6, 12, 0, 6, 2, "Optimal"),
    (51, 4, 36, 0, 4, 4, "Best known"),
    (5, 2, 4, 1, 2, 4, "Optimal"),
    (64, 4, 48, 1, 4, 4, "Optimal"),
    (9, 2, 8, 1, 2, 8, "Optimal"),
    (10, 2, 8, 1, 2, 9, "Almost Optimal"),
    (30, 4, 18, 1, 4, 3, "Almost optimal"),
)


def prime_power(q: int) -> tuple[int, int] | None:
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            return (p, e) if r == 1 else None
    return None


def table1_row(q: int, m: int, c_index: int):
    for row in TABLE1:
        if row[5] == q and row[4] == m and row[3] == c_index:
            return row
    return None


@dataclass
class AnalysisResult:
    report: dict
    mismatches: list[str]
    code: TraceCode
    graph: PointGraph | None = None

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _ratio_str(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def _srg_section(code: TraceCode, dist, c_case: CCase, mismatches: list[str]):
    """SRG block for projective, non-degenerate codes; (section, graph) or (None, None)."""
    tower = code.tower
    if not code.is_projective():
        return None, None
    ws = dist.nonzero_weights()
    K = code.n * (code.q - 1)
    if K >= tower.size - 1:
        return {"skipped": f"complete graph (K = {K} = N - 1)"}, None
    graph = build_graph(tower, omega_set(code))
    counted = srg_count(graph)
    predicted = {}
    if len(ws) == 2:
        predicted["generic"] = list(srg_predicted_generic(code.n, code.q, code.k, *ws).as_tuple())
    if c_case is CCase.NONZERO_EVEN:
        predicted["family"] = list(srg_family_params(code.q, tower.s).as_tuple())
    if isinstance(counted, NotSRG):
        counted_out = {"not_srg": counted.reason, "witness": list(counted.witness or ())}
        match = False
    else:
        counted_out = list(counted.as_tuple())
        match = bool(predicted) and all(v == counted_out for v in predicted.values()) \
            and counted.feasible()
    if not match:
        mismatches.append("srg")
    return {"predicted": predicted, "counted": counted_out, "match": match}, graph


def run_analyze(p: int, e: int, s: int, c_index: int, *, with_srg: bool = True,
                workers: int = 1, keep_graph: bool = False) -> AnalysisResult:
    """Build the code and check every closed form against brute force."""
    tower = build_tower(p, e, s)
    code = build_code(tower, c_index)
    q, m = tower.q, tower.m
    c_zero = c_index == 0
    c_case = CCase.of(q, c_zero)
    mismatches: list[str] = []

    dist = code.weight_distribution(workers)
    t7 = theorem7_distribution(q, s, c_case)
    n_closed = length_closed(q, s, c_zero)
    if code.n != n_closed:
        mismatches.append("length")
    rank = code.rank()
    if rank != m:
        mismatches.append("dimension")
    bf, th = dist.as_dict(), t7.as_dict()
    weights = [{"w": w, "count_bruteforce": bf.get(w, 0), "count_theorem7": th.get(w, 0)}
               for w in sorted(set(bf) | set(th)) if w]
    t7_match = bf == th
    if not t7_match:
        mismatches.append("theorem7")
    n_weights = len(dist.nonzero_weights())
    degenerate = s == 1 and c_case is CCase.NONZERO_EVEN
    if n_weights != (1 if degenerate else 2):
        mismatches.append("weight_count")

    row = table1_row(q, m, c_index)
    table1 = None
    if row is not None:
        d_min = min(dist.nonzero_weights())
        table1 = {"n": row[0], "k": row[1], "d": row[2], "optimality": row[6],
                  "matches": [row[0], row[1], row[2]] == [code.n, rank, d_min]}
        if not table1["matches"]:
            table1["note"] = f"listed [{row[0]}, {row[1]}, {row[2]}], computed [{code.n}, {rank}, {d_min}]"

    dual = analyze_dual(dist, s, c_case)
    if not dual.ok:
        mismatches.append("dual")
    projective = code.is_projective()
    if projective != (dual.d_dual is None or dual.d_dual >= 3):
        mismatches.append("projectivity")

    holds, ratio = minimality_check(dist)
    if s >= 3 and not holds:
        mismatches.append("minimality")

    report = {
        "params": {"p": p, "e": e, "s": s, "m": m, "q": q, "c_index": c_index},
        "length": {"computed": code.n, "closed_form": n_closed, "table1": table1},
        "dimension": rank,
        "weights": weights,
        "theorem7_match": t7_match,
        "dual": {
            "n": dual.n,
            "k": dual.k_dual,
            "d_observed": dual.d_dual,
            "d_theorem8": dual.d_theorem8,
            "a2": {"transform": dual.a2, "closed_form": dual.a2_closed},
            "a3": {"transform": dual.a3, "closed_form": dual.a3_closed},
            "moment_checks": [c.as_json() for c in dual.moment_checks],
        },
        "projective": projective,
        "minimal": {"holds": holds, "ratio": _ratio_str(ratio),
                    "threshold": _ratio_str(Fraction(q - 1, q))},
    }
    graph = None
    if with_srg:
        section, graph = _srg_section(code, dist, c_case, mismatches)
        if section is not None:
            report["srg"] = section
    report["modulus"] = tower.modulus_str()
    report["mismatches"] = mismatches
    return AnalysisResult(report, mismatches, code, graph if keep_graph else None)


# --- sweeps -------------------------------------------------------------------


def admissible_towers(max_size: int = DEFAULT_MAX_SIZE) -> list[tuple[int, int, int]]:
    """All (p, e, s) with p^(2es) <= max_size, ordered by (p, e, s)."""
    out = []
    p = 2
    while p * p <= max_size:
        if is_prime(p):
            e = 1
            while p ** (2 * e) <= max_size:
                s = 1
                while p ** (2 * e * s) <= max_size:
                    out.append((p, e, s))
                    s += 1
                e += 1
        p += 1
    return out


def sweep_cases(max_size: int = DEFAULT_MAX_SIZE) -> list[tuple[int, int, int, int]]:
    cases = []
    for p, e, s in admissible_towers(max_size):
        for c_index in range(p**e):
            if c_index == 0 and s == 1:
                continue
            cases.append((p, e, s, c_index))
    return cases


@dataclass
class SweepConfig:
    max_ambient_size: int = DEFAULT_MAX_SIZE
    include_charsums: bool = False
    thread_count: int = field(default_factory=lambda: os.cpu_count() or 1)


@dataclass
class SweepResult:
    reports: list[dict]
    charsums: list[dict]

    @property
    def ok(self) -> bool:
        return all(not r["mismatches"] for r in self.reports) and all(c["ok"] for c in self.charsums)

    def as_json(self) -> dict:
        return {"ok": self.ok, "cases": self.reports, "charsums": self.charsums}


def run_sweep(config: SweepConfig) -> SweepResult:
    cases = sweep_cases(config.max_ambient_size)
    for p, e, s in {(c[0], c[1], c[2]) for c in cases}:
        build_tower(p, e, s)  # warm the cache before fanning out

    def one(case):
        return run_analyze(*case).report

    workers = max(1, config.thread_count)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(one, cases))
    else:
        reports = [one(c) for c in cases]
    sums = []
    if config.include_charsums:
        sums = [charsum_audit(*t) for t in admissible_towers(config.max_ambient_size)]
    return SweepResult(reports, sums)


# --- character-sum audit ----------------------------------------------------


def _examples(mask: np.ndarray, make) -> list[dict]:
    return [make(*idx) for idx in np.argwhere(mask)[:COUNTEREXAMPLE_LIMIT]]


def quadratic_sum_audit(tower: TowerParams) -> dict:
    """Every a2 != 0, a1, a0 in F_q with b = 1: brute-force sum vs closed form, exactly."""
    t = level_tables(tower, SubfieldLevel.Q)
    q, p = t.size, tower.p
    a2, a1, a0 = np.meshgrid(np.arange(1, q), np.arange(q), np.arange(q), indexing="ij")
    a2, a1, a0 = a2.ravel(), a1.ravel(), a0.ravel()
    c = np.arange(q)
    sq = t.mul[c, c]
    f = t.add[t.add[t.mul[a2[:, None], sq[None, :]], t.mul[a1[:, None], c[None, :]]], a0[:, None]]
    exps = t.trace_to_prime[f]
    ntrip = len(a2)
    brute = np.bincount((np.arange(ntrip)[:, None] * p + exps).ravel(),
                        minlength=ntrip * p).reshape(ntrip, p)
    closed = np.zeros((ntrip, p), dtype=np.int64)
    if q % 2:
        g = cs.gauss_sum_quadratic(tower).coeffs
        eta = cs._eta_by_index(tower)
        four = t.add[t.add[1, 1], t.add[1, 1]]
        shift = t.add[a0, t.neg[t.mul[t.mul[a1, a1], t.inv[t.mul[four, a2]]]]]
        k = t.trace_to_prime[shift]
        rolled = g[(np.arange(p)[None, :] - k[:, None]) % p]  # zeta^k * G
        closed = eta[a2][:, None] * rolled
        name = "quadratic_sum_odd"
    else:
        hit = a2 == t.mul[a1, a1]
        closed[np.flatnonzero(hit), t.trace_to_prime[a0[hit]]] = q
        name = "quadratic_sum_even"
    bad = np.any(cs.canonicalize(brute) != cs.canonicalize(closed), axis=1)
    ex = [{"a2": int(t.elements[a2[i]]), "a1": int(t.elements[a1[i]]), "a0": int(t.elements[a0[i]]),
           "bruteforce": brute[i].tolist(), "closed": closed[i].tolist()}
          for i in np.flatnonzero(bad)[:COUNTEREXAMPLE_LIMIT]]
    return {"name": name, "ok": not bad.any(), "checked": int(ntrip),
            "mismatches": int(bad.sum()), "counterexamples": ex}


def gauss_sum_audit(tower: TowerParams) -> dict:
    q = tower.q
    g = cs.gauss_sum_quadratic(tower)
    eta_m1 = cs.quadratic_char(tower, tower.neg(1))
    square_ok = g * g == eta_m1 * q
    closed = cs.lemma1_closed(tower.p, tower.e)
    num = g.to_complex()
    tol = 1e-9 * np.sqrt(q)
    numeric_ok = abs(num - closed) <= tol and abs(abs(num) - np.sqrt(q)) <= tol
    return {"name": "gauss_sum", "ok": bool(square_ok and numeric_ok), "square_exact": bool(square_ok),
            "numeric": [num.real, num.imag], "closed": [closed.real, closed.imag]}


def delta_audit(tower: TowerParams, all_a: bool | None = None) -> dict:
    if all_a is None:
        all_a = tower.size <= FULL_DELTA_BOUND
    t = level_tables(tower, SubfieldLevel.Q)
    look = tower.index_lookup(SubfieldLevel.Q)
    units_qs = tower.subfield_elements(SubfieldLevel.QS)[1:]
    a_values = units_qs if all_a else np.array([1])
    b = np.arange(tower.size)
    nb = tower.norm(b, SubfieldLevel.QM, SubfieldLevel.QS)
    c_idx = np.arange(t.size)
    checked, ex, nbad = 0, [], 0
    for a in a_values:
        a = int(a)
        brute = cs.delta_table(tower, a)
        t_enc = tower.trace(tower.mul(nb, tower.inv(a)), SubfieldLevel.QS, SubfieldLevel.Q)
        t_idx = look[t_enc]
        closed = cs.delta_case_value(tower.q, tower.s, (c_idx == 0)[None, :], (t_idx == 0)[:, None],
                                     c_idx[None, :] == t_idx[:, None])
        bad = brute != closed
        nbad += int(bad.sum())
        checked += brute.size
        if len(ex) < COUNTEREXAMPLE_LIMIT:
            ex += _examples(bad, lambda bi, ci: {"a": a, "b": int(bi), "c": int(t.elements[ci]),
                                                 "bruteforce": int(brute[bi, ci]),
                                                 "closed": int(closed[bi, ci])})
    return {"name": "delta_sum", "ok": nbad == 0, "all_a": bool(all_a), "checked": checked,
            "mismatches": nbad, "counterexamples": ex[:COUNTEREXAMPLE_LIMIT]}


def s_c_audit(tower: TowerParams) -> dict:
    t = level_tables(tower, SubfieldLevel.Q)
    look = tower.index_lookup(SubfieldLevel.Q)
    brute = cs.s_c_table(tower)[1:]
    b = np.arange(1, tower.size)
    t_idx = look[tower.norm_trace_qs_q[b]]
    closed = cs.s_c_case_value(tower, np.arange(t.size)[None, :], t_idx[:, None])
    bad = brute != closed
    ex = _examples(bad, lambda bi, ci: {"b": int(bi) + 1, "c": int(t.elements[ci]),
                                        "bruteforce": int(brute[bi, ci]), "closed": int(closed[bi, ci])})
    return {"name": "s_c_sum", "ok": not bad.any(), "checked": int(brute.size),
            "mismatches": int(bad.sum()), "counterexamples": ex}


def orthogonality_audit(tower: TowerParams) -> dict:
    levels = [lv for lv in SubfieldLevel if tower.level_size(lv) <= 1 << 12]
    add_ok = all(cs.additive_orthogonality_holds(tower, lv) for lv in levels)
    mul_ok = all(cs.multiplicative_orthogonality_holds(tower, lv) for lv in levels)
    return {"name": "orthogonality", "ok": add_ok and mul_ok, "additive": add_ok,
            "multiplicative": mul_ok, "levels": [lv.name for lv in levels]}


def charsum_audit(p: int, e: int, s: int) -> dict:
    tower = build_tower(p, e, s)
    checks = [orthogonality_audit(tower)]
    if tower.q % 2:
        checks.append(gauss_sum_audit(tower))
    if tower.q <= QUADRATIC_SUM_BOUND:
        checks.append(quadratic_sum_audit(tower))
    checks.append(delta_audit(tower))
    checks.append(s_c_audit(tower))
    return {"params": {"p": p, "e": e, "s": s, "q": tower.q}, "ok": all(c["ok"] for c in checks),
            "checks": checks}


def odd_prime_powers(limit: int) -> list[tuple[int, int]]:
    out = []
    for q in range(3, limit + 1, 2):
        pe = prime_power(q)
        if pe:
            out.append(pe)
    return out
