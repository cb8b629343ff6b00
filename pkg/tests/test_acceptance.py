"""Acceptance criteria, one test each.

Every check is exact (integer or rational equality; tolerance 0). Each test
records a single ``[criterion N] PASS|FAIL`` line, printed in the
terminal summary, with its runtime against the
pinned limit. Run standalone with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import LINES  # noqa: E402
from qcombinat import kostant as kp  # noqa: E402
from qcombinat import lweight as lw  # noqa: E402
from qcombinat import qcartan as qc  # noqa: E402
from qcombinat import qdatum as qd  # noqa: E402
from qcombinat import rootsys as rs  # noqa: E402

TOLERANCE = 0  # all comparisons are exact
SEED = 2024
SIMPLY_LACED = ["A1", "A2", "A3", "A4", "A5", "D4", "D5"]
FOLDED = ["B2", "B3", "C3", "G2", "F4"]  # from (A3,flip), (A5,flip), (D4,flip), (D4,triality), (E6,flip)
RANK_LE_6 = (["A1", "A2", "A3", "A4", "A5", "A6", "D4", "D5", "D6", "E6"]
             + ["B2", "B3", "B4", "B5", "B6", "C3", "C4", "C5", "C6", "F4", "G2"])
SMALL_DATA_TYPES = ["A1", "A2", "A3", "A4", "D4", "B2", "C3", "G2"]  # |J| <= 4


def _report(n: int, title: str, ok: bool, elapsed: float, limit: float | None, detail: str = "") -> None:
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    lim = f" / limit {limit:.0f} s" if limit is not None else ""
    extra = f"; {detail}" if detail else ""
    line = f"[criterion {n}] {status} {title} (tolerance: exact, {elapsed:.2f} s{lim}){extra}"
    LINES.append(line)
    assert ok, line
    assert within, line


def _data(label: str, count: int, rng: random.Random) -> list[qd.QDatum]:
    c, sigma = qd.unfold(label)
    return [qd.random_height_function(c, sigma, rng) for _ in range(count)]


def test_criterion_1_image_formula():
    t = time.perf_counter()
    rng = random.Random(SEED)
    bad, n = [], 0
    for label in SIMPLY_LACED + FOLDED:
        for q in _data(label, 20, rng):
            n += 1
            o = qd.adapted_word(q)
            img = set(qd.omega_tilde(o).values())
            if img != qd.image_formula(q) or len(img) != o.length:
                bad.append((label, q.xi))
    _report(1, "image of the root labelling equals the closed form, |image| = L",
            not bad, time.perf_counter() - t, 60, f"{n} data, failures {bad[:3]}")


def test_criterion_2_worked_a2():
    t = time.perf_counter()
    q = qd.QDatum.make("A2", (0, 1))
    o = qd.adapted_word(q)
    checks = {
        "word": o.word == (2, 1, 2),
        "table": qd.omega_tilde(o) == {(0, 1): (2, 1), (1, 1): (1, 0), (1, 0): (2, -1)},
        "rho": kp.rho(o, (1, 0, 1)) == (1, 1, 1) and kp.rho(o, (0, 1, 0)) == (0, 1, 1),
        "khat": lw.khat(q) == {(2, 0)},
        "poset": lw.poset_iso_check(q, (1, 1)).passed and len(kp.enumerate_partitions(o, (1, 1))) == 2,
    }
    _report(2, "worked A2 datum", all(checks.values()), time.perf_counter() - t, None,
            ", ".join(k for k, v in checks.items() if not v))


def test_criterion_3_worked_b2():
    t = time.perf_counter()
    q = qd.QDatum.make("A3", (1, 0, -1), sigma="(1 3)")
    o = qd.adapted_word(q)
    tau = qd.tau_q(q)
    lam3 = rs.fundamental_weight(q.cartan, 3)
    moved = tau.act(2, lam3)
    diff = rs.weight_to_root_int(q.cartan, tuple(a - b for a, b in zip(lam3, moved)))
    checks = {
        "word": o.word == (1, 2, 3, 2, 1, 2),
        "table": qd.omega_tilde(o) == {
            (1, 0, 0): (1, 1), (1, 1, 0): (2, 0), (1, 1, 1): (3, -1),
            (0, 0, 1): (2, -2), (0, 1, 1): (1, -3), (0, 1, 0): (2, -4)},
        "cartan": q.g0.matrix == ((2, -1), (-2, 2)),
        "tau": tau.word == (1, 2) and qd.coxeter_violations(q, tau, o) == [],
        "gamma": diff == (1, 1, 1) and qd.gamma(q, 3) == (1, 1, 1),
    }
    _report(3, "worked B2 datum from (A3, (1 3))", all(checks.values()), time.perf_counter() - t, None,
            ", ".join(k for k, v in checks.items() if not v))


def _tested_data() -> list[qd.QDatum]:
    rng = random.Random(SEED + 1)
    out = [qd.QDatum.make("A2", (0, 1)), qd.QDatum.make("A3", (1, 0, -1), sigma="(1 3)")]
    for label in SIMPLY_LACED + FOLDED:
        out += _data(label, 2, rng)
    return out


def test_criterion_4_inverse_quantum_cartan():
    t = time.perf_counter()
    U = 40
    bad = []
    for label in RANK_LE_6:
        s = qc.invert(qc.build(label), U)
        if qc.back_multiplication_failures(s):
            bad.append(f"back-multiplication {label}")
    for q in _tested_data():
        s = qc.inverse_for(q, U)
        n = q.g0.rank
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if qc.vanishing_failures(q, s, i, j):
                    bad.append(f"vanishing {q.cartan.label} {q.xi} ({i},{j})")
                for iota in q.folding.orbits[i - 1]:
                    for jota in q.folding.orbits[j - 1]:
                        for u in range(-U, U + 1):
                            if not qc.pairing_identity(q, s, i, j, u, iota, jota)[2]:
                                bad.append(f"pairing {q.cartan.label} {q.xi} ({i},{j},{u})")
    a2 = qc.invert(qc.build("A2"), U)
    if [a2.coeff(1, 1, u) for u in (1, 3, 5, 7)] != [1, 0, -1, 1]:
        bad.append("A2 a11")
    if [a2.coeff(1, 2, u) for u in (2, 4, 6, 8)] != [1, -1, 0, 1]:
        bad.append("A2 a12")
    _report(4, "inverse quantum Cartan matrix: identity, antisymmetrized pairing, vanishing, A2 values",
            not bad, time.perf_counter() - t, 30, f"{len(RANK_LE_6)} types, U={U}; failures {bad[:3]}")


def test_criterion_5_partial_sums_and_bridge():
    t = time.perf_counter()
    bad, points, pairs = [], 0, 0
    for q in _tested_data():
        o = qd.adapted_word(q)
        s = qc.inverse_for(q)
        for i, p in sorted(lw.khat(q)):
            points += 1
            if not lw.delta_identity(q, o, i, p).passed:
                bad.append(("delta", q.cartan.label, q.xi, i, p))
        for k in range(1, o.length + 1):
            for tt in range(1, o.length + 1):
                pairs += 1
                if not qc.nu_beta_bridge(o, s, k, tt)[2]:
                    bad.append(("bridge", q.cartan.label, q.xi, k, tt))
    _report(5, "partial sums are indicators on K-hat; (nu_k, beta_t) equals the inverse-coefficient difference",
            not bad, time.perf_counter() - t, 60, f"{points} K-hat points, {pairs} pairs; failures {bad[:3]}")


def test_criterion_6_poset_isomorphism():
    t = time.perf_counter()
    rng = random.Random(SEED + 2)
    bad, parts = [], 0
    for label in SMALL_DATA_TYPES:
        for q in _data(label, 1, rng):
            o = qd.adapted_word(q)
            for beta in lw.iter_betas(q.cartan, 4):
                parts += len(kp.enumerate_partitions(o, beta))
                if not lw.poset_iso_check(q, beta, o=o).passed:
                    bad.append((label, q.xi, beta))
    _report(6, "partition order matches the ℓ-weight order for |beta| <= 4",
            not bad, time.perf_counter() - t, 300, f"{parts} partitions; failures {bad[:3]}")


def test_criterion_7_mcnamara_order():
    t = time.perf_counter()
    rng = random.Random(SEED + 3)
    bad, words, betas = [], 0, 0
    for label in ["A2", "A3", "B2", "G2", "D4"]:
        for q in _data(label, 1, rng):
            for w in itertools.islice(qd.all_adapted_words(q), 6):
                o = qd.ConvexOrder.adapted(q, w)
                words += 1
                if kp.sign_pattern_failures(o):
                    bad.append(("sign", label, w))
                if o.length <= 8 and not kp.box_injective(o, 3):
                    bad.append(("box", label, w))
                height = 6 if q.cartan.rank <= 3 else 4
                for beta in lw.iter_betas(q.cartan, height):
                    betas += 1
                    ps = kp.enumerate_partitions(o, beta)
                    if len({kp.rho(o, m) for m in ps}) != len(ps):
                        bad.append(("injective", label, w, beta))
                    if kp.swap_equivariance_failures(o, ps):
                        bad.append(("swap", label, w, beta))
    _report(7, "sign pattern, rho injectivity on KP(beta) and on [-3,3]^L, swap equivariance",
            not bad, time.perf_counter() - t, None, f"{words} words, {betas} (word, beta) pairs; failures {bad[:3]}")


def test_criterion_8_adapted_words():
    t = time.perf_counter()
    rng = random.Random(SEED + 4)
    bad, total = [], 0
    for label in SMALL_DATA_TYPES:
        for q in _data(label, 3, rng):
            words = list(qd.all_adapted_words(q))
            total += len(words)
            forms = {qd.commutation_normal_form(q.cartan, w) for w in words}
            maps = {frozenset(qd.omega_tilde(qd.ConvexOrder.adapted(q, w)).items()) for w in words}
            if len(forms) != 1 or len(maps) != 1:
                bad.append((label, q.xi))
    _report(8, "all adapted words lie in one commutation class with one labelling",
            not bad, time.perf_counter() - t, None, f"{total} words; failures {bad[:3]}")


def test_criterion_9_table_cross_checks():
    t = time.perf_counter()
    bad = []
    for label in RANK_LE_6 + ["A7", "D7", "E7", "E8", "B7", "C7"]:
        c = rs.cartan(label)
        if rs.dual_coxeter(label) != rs.dual_coxeter_from_roots(c):
            bad.append(("h", label))
    for label in SIMPLY_LACED + FOLDED + ["A6", "D6", "E6", "E7", "E8", "B4", "C4"]:
        c, sigma = qd.unfold(label)
        q = qd.find_height_function(c, sigma)
        if len(qd.image_formula(q)) != rs.num_positive_roots(c):
            bad.append(("image", label))
    for label in ["A2^(2)", "A4^(2)", "A6^(2)", "A5^(2)", "A7^(2)", "D4^(2)", "D5^(2)", "D6^(2)", "E6^(2)", "D4^(3)"]:
        tt = rs.twisted_type(label)
        if rs.twisted_d_table(tt) != rs.search_d(tt):
            bad.append(("d", label))
    _report(9, "hardcoded dual Coxeter numbers and twisted d_i agree with independent computations",
            not bad, time.perf_counter() - t, None, f"failures {bad[:3]}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
