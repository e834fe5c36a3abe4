"""``verify``: run verification suites over parameter grids.

    verify sandwich --p 3 --n 1..3 --d 1..8 --m 0,1 --out json
    verify dist-pairing --p 2 --n 0 --deg 4
    verify all --p 2 --quick
    verify export-tree --p 2 --n 1 --output tree.json

Exit status: 0 when every record passes, 1 on any failure, 2 on bad usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from .arith import LevelParams, ParameterError, check_prime

SCHEMA_VERSION = 1
DEFAULT_CAP = 12

SUITES = ("arith", "dist-pairing", "closure", "cnj", "hopf", "charts", "ideal",
          "sandwich", "rewrite", "xi", "theorem1", "theorem2")

# full grids reproduce the acceptance runs; quick grids are smoke tests
DEFAULTS = {
    "arith": dict(p=[2, 3, 5], m=[0, 1, 2, 3], deg=12),
    "dist-pairing": dict(p=[2, 3, 5], n=[0, 1, 2], deg=6),
    "closure": dict(p=[2, 3], m=[0, 1, 2], deg=6),
    "cnj": dict(p=[2, 3, 5], n=[1, 2, 3], deg=12),
    "hopf": dict(p=[2, 3], n=[0, 1, 2, 3]),
    "charts": dict(p=[2, 3, 5], n=[0, 1, 2, 3]),
    "ideal": dict(p=[2, 3], n=[0, 1, 2], d=[0, 1, 2, 3]),
    "sandwich": dict(p=[2, 3], n=[0, 1, 2, 3], d=list(range(1, 9)), m=[0, 1]),
    "rewrite": dict(n=[1, 2, 3], d=list(range(0, 7))),
    "xi": dict(p=[2, 3], m=[0, 1, 2], deg=6),
    "theorem1": dict(p=[2, 3], m=[0, 1], deg=6),
    "theorem2": dict(p=[2, 3], n=[0, 1, 2, 3], m=[0, 1], deg=6),
}
QUICK = {
    "arith": dict(m=[0, 1], deg=6),
    "dist-pairing": dict(n=[0, 1], deg=3),
    "closure": dict(m=[0, 1], deg=3),
    "cnj": dict(n=[1, 2], deg=6),
    "hopf": dict(n=[0, 1, 2]),
    "charts": dict(n=[0, 1, 2]),
    "ideal": dict(n=[0, 1], d=[0, 1, 2]),
    "sandwich": dict(n=[0, 1, 2], d=[1, 2, 3, 4], m=[0]),
    "rewrite": dict(n=[1, 2], d=[0, 1, 2, 3]),
    "xi": dict(m=[0, 1], deg=3),
    "theorem1": dict(m=[0, 1], deg=3),
    "theorem2": dict(n=[0, 1], m=[0], deg=3),
}

COLUMNS = {
    "sandwich": ["p", "n", "d", "m", "e", "c", "lower", "upper", "status"],
    "theorem2": ["p", "n", "m", "degree", "n_prime", "N", "status"],
}
BASE_COLUMNS = ["theorem", "p", "n", "m", "degree", "status"]


class UsageError(Exception):
    pass


def parse_range(text: str) -> List[int]:
    """``"1..3"`` -> [1, 2, 3]; ``"0,2,5"`` -> [0, 2, 5]; combinations allowed."""
    out: List[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                lo_i, hi_i = int(lo), int(hi)
                if hi_i < lo_i:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(lo_i, hi_i + 1))
            else:
                out.append(int(part))
        except ValueError as exc:
            raise UsageError(f"not an integer range: {part!r}") from exc
    if not out:
        raise UsageError(f"empty range {text!r}")
    return sorted(set(out))


@dataclass
class RunConfig:
    suite: str
    p: Optional[List[int]] = None
    n: Optional[List[int]] = None
    m: Optional[List[int]] = None
    d: Optional[List[int]] = None
    deg: Optional[int] = None
    out: str = "json"
    output: Optional[str] = None
    jobs: int = 1
    quick: bool = False
    coords: str = "second_kind"
    cap: int = DEFAULT_CAP
    fault_seed: Optional[int] = None

    def grid(self, suite: str) -> Dict[str, Any]:
        g = dict(DEFAULTS[suite])
        if self.quick:
            g.update(QUICK[suite])
            if "p" in g:
                g["p"] = g["p"][:1] if self.p is None else g["p"]
        for key in ("p", "n", "m", "d", "deg"):
            val = getattr(self, key)
            if val is not None and key in g:
                g[key] = val
        return g

    def validate(self) -> None:
        if self.suite not in SUITES + ("all",):
            raise UsageError(f"unknown suite {self.suite!r}")
        for p in self.p or []:
            try:
                check_prime(p)
            except ParameterError as exc:
                raise UsageError(str(exc)) from exc
        for key in ("n", "m", "d"):
            vals = getattr(self, key)
            if vals is not None and (not vals or min(vals) < 0):
                raise UsageError(f"--{key} must be a non-empty range of non-negative integers")
        if self.deg is not None and not 1 <= self.deg <= self.cap:
            raise UsageError(f"--deg must be in 1..{self.cap}")
        if self.d is not None and max(self.d) > self.cap:
            raise UsageError(f"--d exceeds the cap {self.cap}")
        if self.out not in ("json", "csv", "text"):
            raise UsageError(f"unknown output format {self.out!r}")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.coords not in ("second_kind", "matrix"):
            raise UsageError(f"unknown coordinates {self.coords!r}")


# ---------------------------------------------------------------------------
# JSON-safe values

def _plain(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "to_json"):
        return _plain(x.to_json())
    return x


def record(theorem: str, params: Dict[str, Any], degree: Any, ok: bool,
           witness: Any = None, counterexample: Any = None, **extra) -> Dict[str, Any]:
    rec: Dict[str, Any] = {"theorem": theorem, "params": params, "degree": degree,
                           "status": "pass" if ok else "fail"}
    if witness is not None:
        rec["witness"] = witness
    if counterexample is not None:
        rec["counterexample"] = counterexample
    rec.update(extra)
    return _plain(rec)


# ---------------------------------------------------------------------------
# work items; each returns a list of records

def _item_arith(p: int, m: int, deg: int, quick: bool) -> List[dict]:
    from .arith import integrality_ratio, q_binomial_ratio, vp
    from .weyl import DiffOperator, binomial_of_operator

    P = LevelParams(p, m)
    ij_max, nu_max = (40, 60) if quick else (200, 300)
    worst = min(vp(integrality_ratio(i, s - i, P), p) for s in range(ij_max + 1) for i in range(s + 1))
    bad_ratio = [(nu, k) for nu in range(nu_max + 1) for k in range(nu + 1)
                 if q_binomial_ratio(nu, k, P).denominator != 1]
    out = [record("integrality", {"p": p, "m": m}, ij_max, worst >= 0, witness={"min_valuation": worst}),
           record("binomial-ratio", {"p": p, "m": m}, nu_max, not bad_ratio,
                  counterexample=bad_ratio[0] if bad_ratio else None)]
    if m == 0:
        xd = DiffOperator.monomial(1, 1)
        bad = [nu for nu in range(deg + 1)
               if binomial_of_operator(xd, nu) != DiffOperator.monomial(nu, nu, Fraction(1, math.factorial(nu)))]
        out.append(record("xD-binomial", {"p": p}, deg, not bad, counterexample=bad[0] if bad else None))
    return out


def _item_pairing(p: int, n: int, deg: int, coords: str) -> List[dict]:
    from .hopf import pairing_delta_report

    r = pairing_delta_report(deg, LevelParams(p, 0, n), coords)
    return [record("duality-pairing", {"p": p, "n": n, "coords": coords}, deg, r["ok"],
                   witness={"pairs": r["pairs"]}, counterexample=r["counterexample"],
                   mismatches=r["mismatches"])]


def _item_closure(p_list: List[int], m_list: List[int], deg: int) -> List[dict]:
    from .gl2 import check_subalgebra_closure_grid

    grid = [LevelParams(p, m) for p in p_list for m in m_list]
    out = []
    for P, r in zip(grid, check_subalgebra_closure_grid(deg, grid)):
        out.append(record("closure", {"p": P.p, "m": P.m}, deg, r["ok"],
                          witness={"pairs": r["pairs"], "min_valuation": r["min_valuation"]},
                          counterexample=r["counterexample"]))
    return out


def _item_cnj(p: int, n: int, deg: int, quick: bool) -> List[dict]:
    from .arith import vp
    from .gl2 import cnj_coefficients, cnj_hypothesis

    P = LevelParams(p, 0, n)
    nu_max = 15 if quick else 50
    worst, where = math.inf, None
    try:
        for nu in range(1, nu_max + 1):
            for j, c in enumerate(cnj_coefficients(nu, P), 1):
                v = vp(c, p)
                if v < worst:
                    worst, where = v, {"nu": nu, "j": j}
        ok = True
    except AssertionError as exc:
        ok, where = False, {"error": str(exc)}
    inside = cnj_hypothesis(P)
    return [record("cnj" if inside else "cnj-probe", {"p": p, "n": n}, nu_max,
                   ok and (worst >= 0 or not inside),
                   witness={"min_valuation": worst, "at": where, "hypothesis": inside})]


def _item_hopf(p: int, n: int) -> List[dict]:
    from .hopf import (coassociativity_check, delta_multiplicativity_check,
                       transition_compatibility_check, transition_delta_check)

    out = []
    co = coassociativity_check(n, p)
    out.append(record("coassociativity", {"p": p, "n": n}, None, all(co.values()), witness=co))
    out.append(record("delta-multiplicative", {"p": p, "n": n}, None, delta_multiplicativity_check(n, p)))
    if n >= 1:
        tc = transition_compatibility_check(n, p)
        out.append(record("transition", {"p": p, "n": n}, None,
                          all(tc.values()) and transition_delta_check(n, p), witness=tc))
    return out


def _item_charts(p: int, n: int) -> List[dict]:
    from .models import chart_counts, chart_tree, is_tree

    cc = chart_counts(p, n)
    want = {nu: (p + 1) * p ** (nu - 1) for nu in range(1, n + 1)}
    ok = cc["blow_up"] == want and cc["residual"] == (p + 1) * p ** n
    tree = chart_tree(p, n)
    deg_ok = all(dg in (p + 1, 1) or len(tree["nodes"]) == 1 for dg in tree["degrees"])
    ends = sum(1 for nd in tree["nodes"] if nd["level"] == n and n > 0)
    return [record("charts", {"p": p, "n": n}, None, ok and is_tree(tree) and deg_ok,
                   witness={"blow_up": cc["blow_up"], "residual": cc["residual"],
                            "vertices": len(tree["nodes"]), "ends": ends})]


def _item_ideal(p: int, n: int, d: int) -> List[dict]:
    from .models import IdealSpec, generator_span_oracle, ideal_membership
    from .weyl import Poly

    spec = IdealSpec(n, d)
    bad, count = None, 0
    for a in range(p ** n):
        for j in range(7):
            for e in range(5):
                f = Poly({j: p ** e})
                count += 1
                if ideal_membership(f, a, spec, p) != generator_span_oracle(f, a, spec, p):
                    bad = bad or {"a": a, "j": j, "e": e}
    return [record("ideal-oracle", {"p": p, "n": n}, d, bad is None, witness={"cases": count},
                   counterexample=bad)]


def _item_sandwich(p: int, n: int, d: int, m: int) -> List[dict]:
    from .models import IdealSpec, sandwich_check

    r = sandwich_check(IdealSpec(n, d), LevelParams(p, m))
    ok = r["lower_ok"] and r["upper_ok"] and (d != 1 or r["optimal_exponent"] == n)
    return [record("sandwich", {"p": p, "n": n, "m": m}, d, ok, p=p, n=n, d=d, m=m,
                   e=r["optimal_exponent"], c=r["c"], lower=r["lower_ok"], upper=r["upper_ok"])]


def _item_rewrite(n: int, d: int) -> List[dict]:
    from .models import recombine_certificate, rewrite_d_certificate
    from .weyl import DiffOperator, Poly

    bad = None
    p = 3
    for nu in range(1, n + 1):
        for k in range(d + 1):
            cert = rewrite_d_certificate(n, nu, d, k)
            want = DiffOperator({d: Poly({0: -1, 1: 1}) ** k * p ** (n * (d - k))})
            if not cert.ok or recombine_certificate(cert, p, 1) != want:
                bad = bad or {"nu": nu, "k": k, "detail": cert.detail}
    return [record("rewrite", {"n": n}, d, bad is None, counterexample=bad)]


def _item_xi(p: int, m: int, deg: int) -> List[dict]:
    from .gl2 import central_character
    from .xi import xi_level_m_integrality

    P = LevelParams(p, m)
    r = xi_level_m_integrality(deg, P)
    theta = central_character(P)
    return [record("xi-integrality", {"p": p, "m": m}, deg, r["ok"], witness={"checked": r["checked"]},
                   counterexample=r["failures"][0] if r["failures"] else None),
            record("central-character", {"p": p, "m": m}, None,
                   all(v == 0 for v in theta.values()), witness=dict(theta))]


def _item_theorem1(p: int, m: int, deg: int, quick: bool) -> List[dict]:
    from .theorems import theorem1_graded_check

    r = theorem1_graded_check(LevelParams(p, m), deg, filtered=not quick)
    bad = next((x for x in r["records"] if not (x["injective"] and x["cokernel_ok"]
                                                and x.get("filtered_injective", True))), None)
    return [record("theorem1", {"p": p, "m": m}, deg, r["ok"],
                   witness={"N": r["N"], "apriori": r["apriori"],
                            "cokernel_exponents": [x["cokernel_exponent"] for x in r["records"]],
                            "filtered_exponents": [x.get("filtered_cokernel_exponent") for x in r["records"]]},
                   counterexample=bad)]


def _item_theorem2(p: int, n: int, m: int, deg: int) -> List[dict]:
    from .theorems import n_prime, theorem2_check

    r = theorem2_check(LevelParams(p, m, n), deg)
    bad = r["left"]["failures"][0] if r["left"]["failures"] else None
    if bad is None:
        bad = next((x for x in r["right"]["records"] if not (x["inequality"] and x["containment"])), None)
    return [record("theorem2", {"p": p, "n": n, "m": m}, deg, r["ok"], p=p, n=n, m=m,
                   n_prime=n_prime(n, p), N=r["right"]["N"],
                   witness={"checked": r["left"]["checked"], "calc": r["left"]["calc_ok"],
                            "ratios": r["left"]["ratios_ok"]},
                   counterexample=bad)]


def _item_sweep(n_max: int, d_max: int) -> List[dict]:
    from .theorems import inequality_sweep

    bad = inequality_sweep(n_max, d_max)
    return [record("exponent-inequality", {"n_max": n_max, "primes": [2, 3, 5]}, d_max, not bad,
                   counterexample=bad[0] if bad else None)]


ITEMS: Dict[str, Callable[..., List[dict]]] = {
    "arith": _item_arith, "dist-pairing": _item_pairing, "closure": _item_closure, "cnj": _item_cnj,
    "hopf": _item_hopf, "charts": _item_charts, "ideal": _item_ideal, "sandwich": _item_sandwich,
    "rewrite": _item_rewrite, "xi": _item_xi, "theorem1": _item_theorem1, "theorem2": _item_theorem2,
    "sweep": _item_sweep,
}


def work_items(suite: str, cfg: RunConfig) -> List[tuple]:
    g = cfg.grid(suite)
    q = cfg.quick
    if suite == "arith":
        return [("arith", (p, m, g["deg"], q)) for p in g["p"] for m in g["m"]]
    if suite == "dist-pairing":
        return [("dist-pairing", (p, n, g["deg"], cfg.coords)) for p in g["p"] for n in g["n"]]
    if suite == "closure":
        return [("closure", (g["p"], g["m"], g["deg"]))]
    if suite == "cnj":
        return [("cnj", (p, n, g["deg"], q)) for p in g["p"] for n in g["n"]]
    if suite == "hopf":
        return [("hopf", (p, n)) for p in g["p"] for n in g["n"]]
    if suite == "charts":
        return [("charts", (p, n)) for p in g["p"] for n in g["n"]]
    if suite == "ideal":
        return [("ideal", (p, n, d)) for p in g["p"] for n in g["n"] for d in g["d"]]
    if suite == "sandwich":
        return [("sandwich", (p, n, d, m)) for p in g["p"] for n in g["n"] for d in g["d"] for m in g["m"]]
    if suite == "rewrite":
        return [("rewrite", (n, d)) for n in g["n"] for d in g["d"]]
    if suite == "xi":
        return [("xi", (p, m, g["deg"])) for p in g["p"] for m in g["m"]]
    if suite == "theorem1":
        return [("theorem1", (p, m, g["deg"], q)) for p in g["p"] for m in g["m"]]
    if suite == "theorem2":
        items = [("theorem2", (p, n, m, g["deg"])) for p in g["p"] for n in g["n"] for m in g["m"]]
        return items + [("sweep", (3 if q else 6, 6 if q else 12))]
    raise UsageError(f"unknown suite {suite!r}")


def _run_item(item: tuple) -> List[dict]:
    name, args = item
    return ITEMS[name](*args)


def run_suite(suite: str, cfg: RunConfig) -> List[dict]:
    items = work_items(suite, cfg)
    if cfg.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            chunks = list(ex.map(_run_item, items))      # map keeps input order
    else:
        chunks = [_run_item(it) for it in items]
    records = [r for chunk in chunks for r in chunk]
    if cfg.fault_seed is not None:
        inject_fault(records, cfg.fault_seed)
    return records


def inject_fault(records: List[dict], seed: int) -> None:
    """Flip the expected outcome of one seeded record (harness self-test)."""
    if not records:
        return
    i = random.Random(seed).randrange(len(records))
    rec = records[i]
    observed = rec["status"]
    rec["status"] = "fail"
    rec["counterexample"] = {"injected_fault": seed,
                             "expected": "fail" if observed == "pass" else "pass",
                             "observed": observed}


# ---------------------------------------------------------------------------
# reports

def _columns(suite: str) -> List[str]:
    return COLUMNS.get(suite, BASE_COLUMNS)


def _row(suite: str, rec: dict) -> List[Any]:
    flat = dict(rec.get("params", {}))
    flat.update(rec)
    out = []
    for c in _columns(suite):
        v = flat.get(c, "")
        if isinstance(v, bool):
            v = "true" if v else "false"
        out.append("" if v is None else v)
    return out


def table(suite: str, records: Sequence[dict], fmt: str = "text") -> str:
    cols = _columns(suite)
    rows = [_row(suite, r) for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)                      # RFC 4180: CRLF line ends, minimal quoting
        w.writerow(cols)
        for r in rows:
            w.writerow([json.dumps(v) if isinstance(v, (list, dict)) else v for v in r])
        return buf.getvalue()
    cells = [cols] + [[json.dumps(v) if isinstance(v, (list, dict)) else str(v) for v in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
    return "\n".join("  ".join(c.ljust(wd) for c, wd in zip(row, widths)).rstrip() for row in cells) + "\n"


def report_document(suite: str, cfg: RunConfig, records: List[dict]) -> dict:
    g = cfg.grid(suite)
    failed = sum(1 for r in records if r["status"] != "pass")
    return {"schema_version": SCHEMA_VERSION, "suite": suite, "grid": g, "quick": cfg.quick,
            "records": records, "summary": {"total": len(records), "passed": len(records) - failed,
                                            "failed": failed}}


def render(suite: str, cfg: RunConfig, records: List[dict]) -> str:
    if cfg.out == "json":
        return json.dumps(report_document(suite, cfg, records), sort_keys=True, indent=1) + "\n"
    return table(suite, records, cfg.out)


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    cfg.validate()
    suites = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    status = 0
    ext = {"json": "json", "csv": "csv", "text": "txt"}[cfg.out]
    for suite in suites:
        records = run_suite(suite, cfg)
        text = render(suite, cfg, records)
        if any(r["status"] != "pass" for r in records):
            status = 1
        if cfg.output:
            if cfg.suite == "all":
                os.makedirs(cfg.output, exist_ok=True)
                path = os.path.join(cfg.output, f"{suite}.{ext}")
            else:
                path = cfg.output
            try:
                with open(path, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
            except OSError as exc:
                raise OSError(f"cannot write report {path}: {exc}") from exc
        else:
            stdout.write(text)
    return status


def export_tree(p: int, n: int, path: str, cap: int = DEFAULT_CAP) -> dict:
    from .models import chart_tree

    check_prime(p)
    if not 0 <= n <= cap:
        raise ParameterError(f"n must be in 0..{cap}")
    tree = chart_tree(p, n)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(tree, fh, sort_keys=True, indent=1)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write tree to {path}: {exc}") from exc
    return tree


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description="Run exact verification suites.")
    ap.add_argument("suite", help="one of: " + ", ".join(SUITES + ("all", "export-tree")))
    ap.add_argument("--p", help="primes, e.g. 2,3")
    ap.add_argument("--n", help="depth range, e.g. 1..3")
    ap.add_argument("--m", help="level range, e.g. 0,1")
    ap.add_argument("--d", help="degree range for lattice suites, e.g. 1..8")
    ap.add_argument("--deg", type=int, help="degree bound D")
    ap.add_argument("--out", default="json", choices=["json", "csv", "text"])
    ap.add_argument("--output", help="report path (a directory for 'all')")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--quick", action="store_true", help="small smoke grid")
    ap.add_argument("--coords", default="second_kind", choices=["second_kind", "matrix"],
                    help="coordinates for dist-pairing")
    ap.add_argument("--cap", type=int, default=DEFAULT_CAP, help="hard cap on degree bounds")
    ap.add_argument("--config", help="JSON file overriding flags")
    ap.add_argument("--inject-fault", type=int, dest="fault_seed", help=argparse.SUPPRESS)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    vals: Dict[str, Any] = {}
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                vals.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"bad config file {ns.config}: {exc}") from exc
    for key in ("p", "n", "m", "d"):
        raw = getattr(ns, key)
        if raw is not None:
            vals[key] = raw
        if key in vals and not isinstance(vals[key], list):
            vals[key] = parse_range(vals[key])
    for key in ("deg", "out", "output", "jobs", "quick", "coords", "cap", "fault_seed"):
        v = getattr(ns, key)
        default = build_parser().get_default(key)
        if key not in vals or v != default:
            vals[key] = v
    unknown = set(vals) - set(RunConfig.__dataclass_fields__)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(suite=ns.suite, **vals)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        if ns.suite == "export-tree":
            p = parse_range(ns.p or "2")
            n = parse_range(ns.n or "1")
            if len(p) != 1 or len(n) != 1 or not ns.output:
                raise UsageError("export-tree needs one --p, one --n and --output")
            export_tree(p[0], n[0], ns.output, ns.cap)
            return 0
        cfg = config_from_args(ns)
        return run(cfg)
    except (UsageError, ParameterError) as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
