"""Command-line entry point: ``qcombinat <command> [options]``.

Exit codes: 0 success, 1 a check failed or the datum is invalid,
2 malformed input, 3 a budget was exhausted (report marked INCOMPLETE).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Callable

from . import kostant as kp
from . import lweight as lw
from . import qcartan as qc
from . import qdatum as qd
from . import rootsys as rs
from .report import Check, Report

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCOMPLETE = 0, 1, 2, 3
DEFAULT_BUDGET = 5000


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    type: str | None = None
    xi: tuple[int, ...] | None = None
    sigma: str | None = None
    beta: tuple[int, ...] | None = None
    cutoff: int | None = None
    format: str = "json"
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    datum: str | None = None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as e:
        raise InputError(f"expected comma-separated integers, got {text!r}") from e


def _default_budget() -> int:
    raw = os.environ.get("QCOMBINAT_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcombinat", description="Q-data combinatorics and verifiers.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("validate", "check the Q-datum axioms"),
        ("table", "positive roots with their (vertex, height) labels"),
        ("inverse-cartan", "coefficients of the inverse quantum Cartan matrix"),
        ("kp", "Kostant partitions of beta with rho vectors and Hasse edges"),
        ("poset-check", "compare the partition order with the ℓ-weight order"),
        ("verify-all", "run every verification suite for one datum"),
    ]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--type", help="type label such as A3, D4, B2, G2")
        sp.add_argument("--sigma", help='diagram automorphism in cycle notation, e.g. "(1 3)"')
        sp.add_argument("--xi", help="height function, comma-separated")
        sp.add_argument("--datum", help="JSON file with type, sigma and xi")
        sp.add_argument("--beta", help="root-lattice vector, comma-separated")
        sp.add_argument("--cutoff", type=int, help="largest exponent u of the inverse series")
        sp.add_argument("--format", choices=["json", "csv", "text"], default="json")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=None)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        type=ns.type,
        xi=_ints(ns.xi) if ns.xi is not None else None,
        sigma=ns.sigma,
        beta=_ints(ns.beta) if ns.beta is not None else None,
        cutoff=ns.cutoff,
        format=ns.format,
        seed=ns.seed,
        budget=ns.budget if ns.budget is not None else _default_budget(),
        datum=ns.datum,
    )


def load_datum(cfg: RunConfig) -> qd.QDatum:
    try:
        if cfg.datum:
            with open(cfg.datum, encoding="utf-8") as fh:
                return qd.QDatum.from_json(fh.read())
        if not cfg.type or cfg.xi is None:
            raise InputError("either --datum or both --type and --xi are required")
        return qd.QDatum.make(cfg.type, cfg.xi, cfg.sigma)
    except (qd.StructuralError, rs.CartanError, OSError, json.JSONDecodeError, KeyError, TypeError) as e:
        raise InputError(str(e)) from e


# -- output --------------------------------------------------------------------


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, tuple)) else v for k, v in r.items()})
    return buf.getvalue()


def _text_rows(rows: list[dict]) -> str:
    return "".join("  ".join(f"{k}={v}" for k, v in r.items()) + "\n" for r in rows)


def _report_text(reports: list[dict]) -> str:
    lines = []
    for r in reports:
        lines.append(f"[{r['status']}] {r['statement']}")
        for c in r.get("checks", []):
            tail = f": {c['detail']}" if c["detail"] else ""
            lines.append(f"    {c['status']} {c['name']}{tail}")
    return "\n".join(lines) + "\n"


def emit(cfg: RunConfig, payload: dict, rows: list[dict] | None = None, reports: list[dict] | None = None) -> str:
    if cfg.format == "json":
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if cfg.format == "csv":
        if rows is None:
            raise InputError("csv output is only available for tables")
        return _csv(rows)
    if reports is not None:
        return _report_text(reports)
    return _text_rows(rows or [])


# -- commands ------------------------------------------------------------------


def cmd_validate(cfg: RunConfig) -> tuple[int, str]:
    q = load_datum(cfg)
    bad = qd.validate(q)
    payload = {"datum": q.to_json(), "valid": not bad, "violations": bad}
    rows = [{"violation": v} for v in bad]
    reports = [{"statement": "Q-datum axioms", "status": "PASS" if not bad else "FAIL",
                "checks": [{"name": v, "status": "FAIL", "detail": ""} for v in bad]}]
    return (EXIT_OK if not bad else EXIT_FAIL), emit(cfg, payload, rows, reports)


def _valid(cfg: RunConfig) -> qd.QDatum:
    q = load_datum(cfg)
    qd.require_valid(q)
    return q


def cmd_table(cfg: RunConfig) -> tuple[int, str]:
    q = _valid(cfg)
    o = qd.adapted_word(q)
    rows = [
        {"k": k + 1, "root": list(b), "iota": i, "orbit": q.bar(i), "p": p}
        for k, (b, i, p) in enumerate(zip(o.betas, o.word, o.heights))
    ]
    payload = {"datum": q.to_json(), "word": list(o.word), "rows": rows}
    return EXIT_OK, emit(cfg, payload, rows)


def cmd_inverse_cartan(cfg: RunConfig) -> tuple[int, str]:
    q = _valid(cfg)
    cutoff = cfg.cutoff if cfg.cutoff is not None else qc.default_cutoff(q)
    if cutoff < 1:
        raise InputError("--cutoff must be positive")
    s = qc.inverse_for(q, cutoff)
    rows = s.rows(lo=1)
    payload = {"type": q.g0.label, "cutoff": cutoff, "rows": rows}
    return EXIT_OK, emit(cfg, payload, rows)


def _beta(cfg: RunConfig, q: qd.QDatum) -> tuple[int, ...]:
    if cfg.beta is None:
        raise InputError("--beta is required")
    if len(cfg.beta) != q.cartan.rank or any(x < 0 for x in cfg.beta):
        raise InputError(f"--beta needs {q.cartan.rank} nonnegative entries")
    return cfg.beta


def cmd_kp(cfg: RunConfig) -> tuple[int, str]:
    q = _valid(cfg)
    beta = _beta(cfg, q)
    o = qd.adapted_word(q)
    parts = kp.enumerate_partitions(o, beta)
    if len(parts) > cfg.budget:
        raise lw.BudgetError(len(parts), cfg.budget)
    rows = [{"index": n, "m": list(m), "rho": list(kp.rho(o, m))} for n, m in enumerate(parts)]
    edges = [list(e) for e in kp.hasse_edges(o, parts)]
    payload = {"word": list(o.word), "beta": list(beta), "partitions": rows, "hasse_edges": edges}
    return EXIT_OK, emit(cfg, payload, rows)


def _report_entry(statement: str, rep: Report) -> dict:
    return {"statement": statement, "status": "PASS" if rep.passed else "FAIL",
            "checks": [c.to_json() for c in rep.checks]}


def cmd_poset_check(cfg: RunConfig) -> tuple[int, str]:
    q = _valid(cfg)
    beta = _beta(cfg, q)
    rep = lw.poset_iso_check(q, beta, cfg.budget)
    entry = _report_entry("partition order matches the ℓ-weight order on KP(beta)", rep)
    payload = {"datum": q.to_json(), "beta": list(beta), "status": entry["status"], "report": entry}
    code = EXIT_OK if rep.passed else EXIT_FAIL
    return code, emit(cfg, payload, reports=[entry])


# -- verify-all ------------------------------------------------------------------


class _Budget:
    def __init__(self, total: int):
        self.left = total

    def take(self, n: int = 1) -> bool:
        self.left -= n
        return self.left >= 0


def _suite_image(q, o, cfg, budget) -> Report:
    rep = Report("image")
    img = set(qd.omega_tilde(o).values())
    rep.add("image equals the closed-form set", img == qd.image_formula(q))
    rep.add("image has one point per positive root", len(img) == o.length, f"L={o.length}")
    return rep


def _suite_coxeter(q, o, cfg, budget) -> Report:
    rep = Report("coxeter")
    tau = qd.tau_q(q)
    bad = qd.coxeter_violations(q, tau, o)
    rep.add("twisted Coxeter element moves roots along the image", not bad, "; ".join(bad[:3]))
    return rep


def _suite_inverse(q, o, cfg, budget) -> Report:
    rep = Report("inverse")
    cutoff = cfg.cutoff if cfg.cutoff is not None else qc.default_cutoff(q)
    s = qc.inverse_for(q, cutoff)
    rep.add("inverse series times the matrix is the identity", not qc.back_multiplication_failures(s), f"cutoff {cutoff}")
    n = q.g0.rank
    bad, van = [], []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            van += qc.vanishing_failures(q, s, i, j)
            for u in range(-cutoff, cutoff + 1):
                if not qc.pairing_identity(q, s, i, j, u)[2]:
                    bad.append((i, j, u))
    rep.add("antisymmetrized coefficients equal Coxeter pairings", not bad, f"{len(bad)} failures")
    rep.add("predicted coefficients vanish", not van, f"{len(van)} failures")
    br = [(k, t) for k in range(1, o.length + 1) for t in range(1, o.length + 1)
          if not qc.nu_beta_bridge(o, s, k, t)[2]]
    rep.add("(nu_k, beta_t) equals a difference of inverse coefficients", not br, f"{o.length ** 2} pairs")
    return rep


def _incomplete() -> Check:
    return Check("budget exhausted", True, "", status="INCOMPLETE")


def _betas_for(q: qd.QDatum, height: int):
    return list(lw.iter_betas(q.cartan, height))


def _suite_mcnamara(q, o, cfg, budget) -> Report:
    rep = Report("mcnamara")
    height = 4 if q.cartan.rank <= 4 else 2
    if o.length <= 8:
        rep.add("rho injective on [-3,3]^L", kp.box_injective(o, 3), f"L={o.length}")
    else:
        rep.skip("rho injective on [-3,3]^L", f"L={o.length} > 8")
    for beta in _betas_for(q, height):
        if not budget.take():
            rep.checks.append(_incomplete())
            return rep
        sub = kp.order_properties(o, beta, check_box=False)
        for c in sub.checks:
            if not c.passed:
                rep.add(f"{c.name} at beta={beta}", False, c.detail)
    if rep.passed:
        rep.add("sign pattern, injectivity and swap equivariance", True, f"all beta of height <= {height}")
    return rep


def _suite_khat(q, o, cfg, budget) -> Report:
    rep = lw.khat_report(q, seed=cfg.seed)
    for i, p in sorted(lw.khat(q)):
        sub = lw.delta_identity(q, o, i, p)
        rep.add(f"partial sums for the ℓ-root at ({i},{p})", sub.passed, sub.checks[-1].detail)
    return rep


def _suite_poset(q, o, cfg, budget) -> Report:
    rep = Report("poset")
    height = 4 if q.cartan.rank <= 4 else 2
    total = 0
    for beta in _betas_for(q, height):
        size = len(kp.enumerate_partitions(o, beta))
        if not budget.take(size):
            rep.checks.append(_incomplete())
            return rep
        total += size
        sub = lw.poset_iso_check(q, beta, o=o)
        for c in sub.checks:
            if not c.passed:
                rep.add(f"{c.name} at beta={beta}", False, c.detail)
    if not rep.checks:
        rep.add("partition order matches the ℓ-weight order", True, f"{total} partitions, height <= {height}")
    return rep


def _suite_words(q, o, cfg, budget) -> Report:
    rep = Report("words")
    classes, maps, n = set(), set(), 0
    for w in qd.all_adapted_words(q):
        if not budget.take():
            rep.checks.append(_incomplete())
            return rep
        n += 1
        classes.add(qd.commutation_normal_form(q.cartan, w))
        maps.add(frozenset(qd.omega_tilde(qd.ConvexOrder.adapted(q, w)).items()))
    rep.add("adapted words form one commutation class", len(classes) == 1, f"{n} words")
    rep.add("all adapted words give the same labelling", len(maps) == 1)
    return rep


SUITES: list[tuple[str, Callable]] = [
    ("closed-form image of the root labelling", _suite_image),
    ("generalized Coxeter element attached to the datum", _suite_coxeter),
    ("inverse quantum Cartan matrix identities", _suite_inverse),
    ("McNamara order on Kostant partitions", _suite_mcnamara),
    ("ℓ-root lattice on the image and the partial-sum identity", _suite_khat),
    ("partition order against the ℓ-weight order", _suite_poset),
    ("adapted words are one commutation class", _suite_words),
]


def cmd_verify_all(cfg: RunConfig) -> tuple[int, str]:
    q = load_datum(cfg)
    bad = qd.validate(q)
    entries = [{"statement": "Q-datum axioms", "status": "PASS" if not bad else "FAIL",
                "checks": [{"name": v, "status": "FAIL", "detail": ""} for v in bad]}]
    budget = _Budget(cfg.budget)
    if bad:
        entries += [{"statement": name, "status": "SKIPPED", "checks": []} for name, _ in SUITES]
    else:
        o = qd.adapted_word(q)
        for name, fn in SUITES:
            rep = fn(q, o, cfg, budget)
            entry = _report_entry(name, rep)
            if any(c.status == "INCOMPLETE" for c in rep.checks):
                entry["status"] = "INCOMPLETE"
            entries.append(entry)
    statuses = {e["status"] for e in entries}
    if "FAIL" in statuses:
        overall, code = "FAIL", EXIT_FAIL
    elif "INCOMPLETE" in statuses:
        overall, code = "INCOMPLETE", EXIT_INCOMPLETE
    else:
        overall, code = "PASS", EXIT_OK
    payload = {"datum": q.to_json(), "status": overall, "suites": entries}
    rows = [{"statement": e["statement"], "status": e["status"]} for e in entries]
    return code, emit(cfg, payload, rows, entries)


COMMANDS = {
    "validate": cmd_validate,
    "table": cmd_table,
    "inverse-cartan": cmd_inverse_cartan,
    "kp": cmd_kp,
    "poset-check": cmd_poset_check,
    "verify-all": cmd_verify_all,
}


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Returns (exit code, stdout text, stderr text)."""
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as e:
        return (EXIT_INPUT if e.code else EXIT_OK), "", ""
    try:
        cfg = config_from_args(ns)
        code, out = COMMANDS[cfg.command](cfg)
        return code, out, ""
    except InputError as e:
        return EXIT_INPUT, "", f"error: {e}\n"
    except qd.QDatumError as e:
        return EXIT_FAIL, "", f"invalid datum: {e}\n"
    except lw.BudgetError as e:
        return EXIT_INCOMPLETE, "", f"INCOMPLETE: {e}\n"
    except qc.CutoffError as e:
        return EXIT_FAIL, "", f"error: {e}\n"


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
