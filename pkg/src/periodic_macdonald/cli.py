"""Command line front end: configured checks, convergence studies and exports.

Usage::

    periodic-macdonald verify A4 [--config cfg.txt] [--out report.json]
    periodic-macdonald study A1 --parameter nodes --steps 64,128,256
    periodic-macdonald export --kind phl --config cfg.txt --out table.csv
    periodic-macdonald sample --config cfg.txt --size 10 --seed 3

Config files are flat ``key = value`` lines; rationals are written ``p/q``
and alphabets as comma separated lists.  Exit codes: 0 pass, 1 fail,
2 configuration error.

The environment variable ``PERIODIC_MACDONALD_PROFILE`` selects default
truncation settings: ``desk`` (default) or ``quick`` (smaller caps, for
smoke runs; tolerances are not relaxed, so some checks may fail).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import decimal
import io
import json
import math
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import boson, contour, measures, sixvertex, skewpolys, wfunc
from .core import enumerate_partitions, format_rational, qpoch
from .symfunc import evaluate, macdonald_P

PROFILE_ENV = "PERIODIC_MACDONALD_PROFILE"
# exact rationals wider than this are reported as 30-digit decimals
EXACT_BITS = 256


class ConfigError(ValueError):
    """Malformed or missing configuration value."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass
class CheckConfig:
    check_id: str
    params: Dict[str, str] = field(default_factory=dict)
    seed: int = 0
    out: Optional[str] = None

    def raw(self, key: str, default: str) -> str:
        return self.params.get(key, default)

    def frac(self, key: str, default: str) -> Fraction:
        text = self.raw(key, default)
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"key {key!r}: cannot parse {text!r} as a rational") from exc

    def fracs(self, key: str, default: str) -> tuple:
        text = self.raw(key, default).strip()
        if not text:
            return ()
        out = []
        for piece in text.split(","):
            try:
                out.append(Fraction(piece.strip()))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"key {key!r}: cannot parse {piece!r} as a rational") from exc
        return tuple(out)

    def int(self, key: str, default) -> int:
        text = self.raw(key, str(default))
        try:
            return int(text)
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: expected an integer, got {text!r}") from exc

    def float(self, key: str, default) -> float:
        text = self.raw(key, str(default))
        try:
            return float(text)
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: expected a number, got {text!r}") from exc


def parse_config_text(text: str) -> Dict[str, str]:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string("[config]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return dict(cp["config"])


def load_config(check_id: str, path: Optional[str] = None, overrides: Optional[dict] = None,
                out: Optional[str] = None) -> CheckConfig:
    params: Dict[str, str] = {}
    profile = os.environ.get(PROFILE_ENV, "desk")
    if profile not in PROFILES:
        raise ConfigError(f"unknown profile {profile!r} in {PROFILE_ENV}")
    params.update(PROFILES[profile].get(check_id, {}))
    if path:
        with open(path, encoding="utf-8") as fh:
            params.update(parse_config_text(fh.read()))
    if overrides:
        params.update({k: str(v) for k, v in overrides.items()})
    params.pop("check_id", None)
    seed = params.pop("seed", "0")
    try:
        seed_val = int(seed)
    except ValueError as exc:
        raise ConfigError(f"key 'seed': expected an integer, got {seed!r}") from exc
    out = params.pop("out", out) if out is None else out
    return CheckConfig(check_id, params, seed_val, out)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _ser(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        if max(x.numerator.bit_length(), x.denominator.bit_length()) <= EXACT_BITS:
            return format_rational(x)
        with decimal.localcontext() as ctx:
            ctx.prec = 30
            return {"approx": str(decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator))}
    if isinstance(x, float):
        return {"approx": repr(x)}
    if isinstance(x, complex):
        return {"approx": repr(x.real)}
    if isinstance(x, dict):
        return {str(k): _ser(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_ser(v) for v in x]
    return str(x)


@dataclass
class CheckReport:
    check_id: str
    title: str
    params: Dict[str, str]
    lhs: object
    rhs: object
    abs_err: object
    rel_err: object
    tolerance: object
    truncation: dict
    passed: bool
    reason: str = ""
    rows: List[dict] = field(default_factory=list)
    runtime_ms: Optional[int] = None

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "check_id": self.check_id,
            "title": self.title,
            "params": dict(sorted(self.params.items())),
            "lhs": _ser(self.lhs),
            "rhs": _ser(self.rhs),
            "abs_err": _ser(self.abs_err),
            "rel_err": _ser(self.rel_err),
            "tolerance": _ser(self.tolerance),
            "truncation": _ser(self.truncation),
            "pass": self.passed,
            "reason": self.reason,
            "rows": _ser(self.rows),
            "runtime_ms": self.runtime_ms if timing else None,
        }
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=False) + "\n"

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        err = self.abs_err
        err_s = f"{float(err):.3e}" if err is not None else "n/a"
        line = f"{self.check_id} {status}  abs_err={err_s}  tol={self.tolerance}  {self.title}"
        return line if self.runtime_ms is None else f"{line}  ({self.runtime_ms} ms)"


def _worst(rows: List[dict]):
    """Row with the largest abs_err."""
    return max(rows, key=lambda r: float(r["abs_err"])) if rows else None


def _report(cfg: CheckConfig, title: str, rows: List[dict], tol, truncation: dict,
            extra_ok: bool = True, reason: str = "") -> CheckReport:
    worst = _worst(rows)
    if worst is None:
        return CheckReport(cfg.check_id, title, cfg.params, None, None, 0, 0, tol, truncation, False,
                           "no instances")
    abs_err = worst["abs_err"]
    lhs, rhs = worst.get("lhs"), worst.get("rhs")
    try:
        rel = abs(float(abs_err)) / max(abs(float(rhs)), 1e-300) if rhs is not None else None
    except (TypeError, ValueError):
        rel = None
    ok = all(r.get("ok", True) for r in rows) and extra_ok
    if not ok and not reason:
        bad = [r for r in rows if not r.get("ok", True)]
        reason = f"{len(bad)} instance(s) out of tolerance" if bad else "auxiliary condition failed"
    return CheckReport(cfg.check_id, title, cfg.params, lhs, rhs, abs_err, rel, tol, truncation, ok, reason,
                       rows)


def _spec(cfg: CheckConfig, a="1/3,1/4", b="1/5,1/6", q="0", t="0", u="0") -> measures.MeasureSpec:
    return measures.MeasureSpec(cfg.fracs("a", a), cfg.fracs("b", b), cfg.frac("q", q), cfg.frac("t", t),
                                cfg.frac("u", u))


# ---------------------------------------------------------------------------
# the checks
# ---------------------------------------------------------------------------


def check_a1(cfg: CheckConfig) -> CheckReport:
    spec = _spec(cfg, q="3/10", u="1/7")
    tol = cfg.float("tol", 1e-8)
    K = cfg.int("K", 14)
    letters = [float(x) for x in spec.a] + [1 / float(y) for y in spec.b]
    quad = contour.QuadratureSpec(radius=cfg.float("radius", 0) or contour.default_radius(letters),
                                  nodes=cfg.int("nodes", 128), max_nodes=cfg.int("max_nodes", 256), tol=1e-13)
    order = cfg.int("order", 20)
    series_n_max = cfg.int("series_n_max", 3)
    trunc = measures.TruncationSpec(K=K, tol=tol)
    rows = []
    for n in range(cfg.int("n_min", 0), cfg.int("n_max", 3) + 1):
        lhs = measures.pqw_shifted_cdf(n, spec, trunc)
        rhs, meta = contour.qtsym_rhs(n, spec, "quadrature", quad)
        row = {"n": n, "lhs": lhs.value, "rhs": rhs, "abs_err": abs(float(lhs.value) - rhs),
               "K_delta": lhs.delta, "nodes": meta.get("nodes")}
        ok = row["abs_err"] < tol and lhs.converged
        if n <= series_n_max:
            sv, sm = contour.qtsym_rhs(n, spec, "series", order=order)
            row["series"] = sv
            row["series_bound"] = sm["value_bound"]
            row["series_gap"] = abs(float(sv) - rhs)
            ok = ok and row["series_gap"] <= float(sm["value_bound"]) + 1e-10
        row["ok"] = ok
        rows.append(row)
    return _report(cfg, "q-Whittaker shifted CDF vs contour integral", rows, tol,
                   {"K": K, "nodes": quad.nodes, "max_nodes": quad.max_nodes, "order": order})


def check_a2(cfg: CheckConfig) -> CheckReport:
    spec = _spec(cfg, q="3/10", u="1/7")
    tol = cfg.float("tol", 1e-8)
    K = cfg.int("K", 22)
    trunc = measures.TruncationSpec(K=K, tol=tol)
    rows = []
    for n in range(cfg.int("n_max", 3) + 1):
        x = measures.pqw_shifted_cdf(n, spec, trunc)
        y = measures.pqw_shifted_cdf(n, spec.replace(q=spec.u, u=spec.q), trunc)
        err = abs(x.value - y.value)
        rows.append({"n": n, "lhs": x.value, "rhs": y.value, "abs_err": err,
                     "K_delta": max(x.delta, y.delta), "ok": float(err) < tol and x.converged and y.converged})
    return _report(cfg, "(q,u) symmetry of the shifted CDF", rows, tol, {"K": K})


def check_a3(cfg: CheckConfig) -> CheckReport:
    spec = _spec(cfg, q="1/4")
    tol = cfg.float("tol", 1e-8)
    K = cfg.int("K", 20)
    trunc = measures.TruncationSpec(K=K, tol=tol)
    rows = []
    for n in range(cfg.int("n_max", 3) + 1):
        x = measures.periodic_schur_cdf(n, spec, trunc)
        y = measures.ims_rhs(n, spec, trunc)
        err = abs(x.value - y.value)
        rows.append({"n": n, "lhs": x.value, "rhs": y.value, "abs_err": err, "K_delta": x.delta,
                     "ok": float(err) < tol and x.converged and y.converged})
    return _report(cfg, "periodic Schur CDF vs q-Whittaker sum (t = 0 evaluation)", rows, tol, {"K": K})


def check_a4(cfg: CheckConfig) -> CheckReport:
    q = cfg.frac("q", "1/3")
    letters = cfg.fracs("x", "1/2,1/3,2/5")
    n_max, N_max, size = cfg.int("n_max", 4), cfg.int("N_max", 3), cfg.int("max_size", 8)
    rows = []
    worst = Fraction(0)
    count = 0
    for n in range(n_max + 1):
        for N in range(N_max + 1):
            for lam in enumerate_partitions(size, n):
                for mu in enumerate_partitions(lam.size, n):
                    if not lam.contains(mu):
                        continue
                    count += 1
                    r = abs(skewpolys.complement_residual(lam, mu, n, letters[:N], q))
                    if r > worst or not rows:
                        worst = max(worst, r)
                    if r:
                        rows.append({"n": n, "N": N, "lam": str(lam), "mu": str(mu), "abs_err": r, "ok": False})
    rows.insert(0, {"instances": count, "lhs": None, "rhs": None, "abs_err": worst, "ok": worst == 0})
    return _report(cfg, "complementation of skew q-Whittaker polynomials (exact)", rows, 0,
                   {"max_size": size})


def check_a5(cfg: CheckConfig) -> CheckReport:
    a, t = cfg.frac("a1", "2/7"), cfg.frac("t", "1/3")
    size = cfg.int("max_size", 8)
    parts = enumerate_partitions(size)
    rows = []
    cases = [(False, 0, 0), (False, 1, 1), (True, 1, 0), (True, 0, 1)]  # (red?, right bit, length gain)
    for dual, j, gain in cases:
        bad = 0
        n = 0
        for lam in parts:
            for mu in parts:
                n += 1
                fam = skewpolys.HL_Q if dual else skewpolys.HL_P
                want = skewpolys.skew_one(fam, lam, mu, a, t) if len(lam) == len(mu) + gain else 0
                if boson.hl_row(lam, mu, a, t, j, dual) != want:
                    bad += 1
        rows.append({"case": f"{'red' if dual else 'black'} row, right exit {j}", "pairs": n,
                     "abs_err": bad, "lhs": None, "rhs": None, "ok": bad == 0})
    return _report(cfg, "boson row partition functions vs skew Hall-Littlewood", rows, 0,
                   {"max_size": size})


def check_a6(cfg: CheckConfig) -> CheckReport:
    rng = random.Random(cfg.seed)
    count = cfg.int("instances", 50)
    cols, occ = cfg.int("support_cap", 4), cfg.int("occ_cap", 3)
    rows = []
    for k in range(count):
        a, b = Fraction(rng.randint(1, 9), 10), Fraction(rng.randint(1, 9), 10)
        t, u = Fraction(rng.randint(0, 9), 10), Fraction(rng.randint(1, 9), 10)
        bottom = [rng.randint(0, occ) for _ in range(rng.randint(0, cols))]
        top = [rng.randint(0, occ) for _ in range(rng.randint(0, cols))]
        j1, j2 = rng.randint(0, 1), rng.randint(0, 1)
        r_yb = boson.yb_exchange_residual(a, b, t, bottom, top, j1, j2)
        j = rng.randint(0, 1)
        kind = rng.choice([boson.BLACK, boson.RED])
        r_u = boson.u_shift_residual(a, u, t, bottom, top, j, kind)
        err = abs(r_yb) + abs(r_u)
        rows.append({"instance": k, "bottom": bottom, "top": top, "j1": j1, "j2": j2, "yb_residual": r_yb,
                     "shift_kind": kind, "shift_residual": r_u, "abs_err": err, "lhs": None, "rhs": None,
                     "ok": err == 0})
    return _report(cfg, "Yang-Baxter exchange and u-power shift residuals (exact)", rows, 0,
                   {"instances": count})


def _mc_ok(counts: dict, table: dict, n: int, sigmas: float, min_expected: float):
    """4-sigma test on cells with enough expected mass; the rest pooled into one cell."""
    worst = 0.0
    pooled_p, pooled_c = 0.0, 0
    for key in set(counts) | set(table):
        p = float(table.get(key, 0))
        c = counts.get(key, 0)
        if p * n < min_expected:
            pooled_p += p
            pooled_c += c
            continue
        z = abs(c / n - p) / math.sqrt(p * (1 - p) / n)
        worst = max(worst, z)
    if pooled_p > 0:
        z = abs(pooled_c / n - pooled_p) / math.sqrt(pooled_p * (1 - pooled_p) / n)
        worst = max(worst, z)
    return worst <= sigmas, worst


def check_a7(cfg: CheckConfig) -> CheckReport:
    spec = _spec(cfg, t="1/4", u="1/3")
    tol = cfg.float("tol", 1e-6)
    L, cap, K = cfg.int("L", 12), cfg.int("winding_cap", 10), cfg.int("K", 16)
    n_max = cfg.int("n_max", 6)
    M, N = spec.M, spec.N
    joint = sixvertex.shift_by_geometric(
        sixvertex.quasi_joint(L, cap, M, N, spec.a, spec.b, spec.t, spec.u), spec.u)
    phl = measures.phl_joint(spec, measures.TruncationSpec(K=K))
    rows = []
    for w in range(n_max + 1):
        for s1 in range(1 << M):
            for s2 in range(1 << N):
                b1, b2 = sixvertex.bits_of(s1, M), sixvertex.bits_of(s2, N)
                x, y = joint.get(w, b1, b2), phl.get(w, b1, b2)
                err = abs(x - y)
                rows.append({"n": w, "s1": "".join(map(str, b1)), "s2": "".join(map(str, b2)),
                             "lhs": x, "rhs": y, "abs_err": err, "ok": float(err) < tol})
    samples = cfg.int("mc_samples", 100000)
    extra_ok, reason = True, ""
    trunc_meta = {"L": L, "winding_cap": cap, "K": K, "vertex_tail": joint.tail, "phl_tail": phl.tail}
    if samples > 0:
        exact = sixvertex.quasi_joint(L, cfg.int("mc_cap", 60), M, N, spec.a, spec.b, spec.t, spec.u)
        counts = sixvertex.mc_sample(L, samples, cfg.seed, M, N, spec.a, spec.b, spec.t, spec.u)
        extra_ok, zmax = _mc_ok(counts, exact.table, samples, 4.0, cfg.float("mc_min_expected", 5))
        trunc_meta.update({"mc_samples": samples, "mc_max_z": zmax})
        if not extra_ok:
            reason = f"Monte Carlo deviation {zmax:.2f} sigma exceeds 4"
    return _report(cfg, "quasi-periodic six vertex model vs periodic Hall-Littlewood joint law", rows, tol,
                   trunc_meta, extra_ok, reason)


def check_a8(cfg: CheckConfig) -> CheckReport:
    x = cfg.fracs("x", "1/2,1/3,1/4")
    q, t = cfg.frac("q", "1/5"), cfg.frac("t", "1/3")
    cap = cfg.int("winding_cap", 12)
    rows = []
    for n in range(1, cfg.int("n_max", 3) + 1):
        for M in range(1, cfg.int("M_max", 3) + 1):
            pf = boson.rect_macdonald_pf(n, M, x, q, t, cap)
            target = qpoch(t, t, M) / qpoch(q, q, n) * evaluate(macdonald_P((n,) * M, q, t), x)
            err = abs(target - pf.value)
            rows.append({"n": n, "M": M, "lhs": pf.value, "rhs": target, "abs_err": err, "tail_bound": pf.tail,
                         "ok": err <= pf.tail})
    return _report(cfg, "rectangular Macdonald polynomial as a boson cylinder partition function", rows,
                   "tail bound", {"winding_cap": cap})


def check_a9(cfg: CheckConfig) -> CheckReport:
    spec = _spec(cfg, t="1/3", u="1/5")
    tol = cfg.float("tol", 1e-6)
    K = cfg.int("K", 12)
    rows = []
    for n in range(cfg.int("n_min", 2), cfg.int("n_max", 2) + 1):
        lhs = measures.hl_to_macdonald_lhs(n, spec, measures.TruncationSpec(K=K, tol=tol))
        letters = list(spec.a) + [1 / y for y in spec.b]
        rhs = evaluate(macdonald_P((n,) * spec.N, spec.u, spec.t), letters) / qpoch(spec.u, spec.u, n)
        for y in spec.b:
            rhs *= y**n
        err = abs(lhs.value - rhs)
        rows.append({"n": n, "lhs": lhs.value, "rhs": rhs, "abs_err": err, "K_delta": lhs.delta,
                     "ok": float(err) < tol and lhs.converged})
    return _report(cfg, "periodic Hall-Littlewood sum vs Macdonald polynomial in (u,t)", rows, tol, {"K": K})


def check_a10(cfg: CheckConfig) -> CheckReport:
    rng = random.Random(cfg.seed)
    tol = cfg.float("tol", 1e-8)
    rows = []
    bad = 0
    count = 0
    for lam in enumerate_partitions(cfg.int("sym_max_size", 6)):
        q, t = Fraction(rng.randint(1, 9), 11), Fraction(rng.randint(1, 9), 13)
        x = [Fraction(rng.randint(1, 9), 7) for _ in range(2)]
        y = [Fraction(rng.randint(1, 9), 5) for _ in range(2)]
        count += 1
        if wfunc.w_symmetry_residual(lam, q, t, x, y) != 0:
            bad += 1
    rows.append({"identity": "W symmetry", "instances": count, "lhs": None, "rhs": None, "abs_err": bad,
                 "ok": bad == 0})
    a, b = cfg.fracs("a", "1/3,1/4"), cfg.fracs("b", "1/5,1/6")
    q = cfg.frac("q", "1/4")
    K = cfg.int("K", 20)
    for n in range(cfg.int("n_max", 2) + 1):
        for M in range(1, cfg.int("M_max", 2) + 1):
            aa = a[:M]
            spec = measures.MeasureSpec(aa, b, q=q)
            lw = wfunc.ims_lhs_w(n, M, aa, b, q)
            ls = wfunc.ims_lhs_schur(n, spec, measures.TruncationSpec(K=K, tol=tol))
            rw = wfunc.qw_rhs_w(n, M, aa, b, q)
            rs = wfunc.qw_rhs_sum(n, aa, b, q)
            for name, l, r in (("IMS LHS", lw, ls.value), ("q-Whittaker", rw, rs), ("W sides", lw, rw)):
                err = abs(l - r)
                rows.append({"identity": name, "n": n, "M": M, "lhs": l, "rhs": r, "abs_err": err,
                             "ok": float(err) < tol})
    xs = cfg.fracs("x", "1/3,1/4")
    qc = cfg.frac("q_col", "1/5")
    cap = cfg.int("winding_cap", 12)
    for n in range(1, cfg.int("col_n_max", 3) + 1):
        for M in range(1, cfg.int("col_M_max", 2) + 1):
            for k in (1, 2):
                w = wfunc.w_eval((n,) * M, qc, 0, xs[:k], ())
                pf = boson.uncolored_schur_winding_pf(n, M, xs[:k], qc, cap)
                f = qpoch(qc, qc, n - 1)
                err = abs(w - f * pf.value)
                rows.append({"identity": "colored vs uncolored", "n": n, "M": M, "letters": k, "lhs": w,
                             "rhs": f * pf.value, "abs_err": err, "tail_bound": f * pf.tail,
                             "ok": err <= f * pf.tail})
    return _report(cfg, "two-alphabet W polynomial identities", rows, tol, {"K": K, "winding_cap": cap})


def check_a11(cfg: CheckConfig) -> CheckReport:
    a, b = cfg.fracs("a", "1/3,1/4"), cfg.fracs("b", "1/5,1/6")
    t = cfg.frac("t", "1/4")
    L = cfg.int("L", 40)
    us = [float(v) for v in cfg.raw("us", "0.9,0.99,0.999").split(",")]
    tol = cfg.float("tol", 1e-2)
    rows = []
    for args in ((Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)), (a[0], b[0], t)):
        r = sixvertex.bernoulli_check(*args)
        rows.append({"identity": "Bernoulli product law", "params": list(args), "abs_err": r, "lhs": None,
                     "rhs": None, "ok": r == 0})
    pi_exact = sixvertex.stationary(len(a), len(b), a, b, t, exact=True)
    prod = sixvertex.bernoulli_stationary(len(a), len(b), a, b)
    gap = max(abs(pi_exact[k] - prod[k]) for k in pi_exact)
    rows.append({"identity": "stationary = conditioned product Bernoulli", "abs_err": gap, "lhs": None,
                 "rhs": None, "ok": gap == 0})
    study = sixvertex.stationarity_study(len(a), len(b), a, b, t, us, L)
    for u, tv in study:
        rows.append({"identity": "TV distance", "u": u, "lhs": tv, "rhs": 0.0, "abs_err": 0.0, "tv": tv,
                     "ok": True})
    decreasing = all(x[1] > y[1] for x, y in zip(study, study[1:]))
    last_ok = study[-1][1] < tol
    reason = "" if decreasing and last_ok else "TV distances not strictly decreasing or final value too large"
    return _report(cfg, "stationarity of the periodic six vertex chain as u -> 1", rows, tol,
                   {"L": L, "tv": [tv for _, tv in study]}, decreasing and last_ok, reason)


def check_a12(cfg: CheckConfig) -> CheckReport:
    spec = _spec(cfg, a="1/3", b="1/5", t="1/4", u="1/5")
    tol = cfg.float("tol", 1e-8)
    K = cfg.int("K", 18)
    rows = []
    for n in range(cfg.int("n_max", 3) + 1):
        lhs = measures.phl_shifted_length_cdf(n, spec, measures.TruncationSpec(K=K, tol=tol))
        rhs, meta = contour.hl_length_cdf_rhs(n, spec)
        err = abs(float(lhs.value) - rhs)
        rows.append({"n": n, "lhs": lhs.value, "rhs": rhs, "abs_err": err, "K_delta": lhs.delta,
                     "ok": err < tol and lhs.converged})
    return _report(cfg, "Hall-Littlewood shifted length CDF vs contour integral", rows, tol, {"K": K})


def check_a13(cfg: CheckConfig) -> CheckReport:
    q, u = cfg.frac("q", "1/5"), cfg.frac("u", "1/6")
    x = cfg.fracs("x", "1/3,1/4")
    tol = cfg.float("tol", 1e-8)
    K = cfg.int("K", 16)
    rows = []
    for n in range(cfg.int("n_max", 3) + 1):
        for N in range(cfg.int("N_max", 2) + 1):
            z = measures.z_sum(n, N, q, u, x, measures.TruncationSpec(K=K, tol=tol))
            c, _ = contour.z_contour(n, N, q, u, x)
            err = abs(float(z.value) - c)
            rows.append({"n": n, "N": N, "lhs": z.value, "rhs": c, "abs_err": err, "K_delta": z.delta,
                         "ok": err < tol and z.converged})
    return _report(cfg, "Z series vs contour formula", rows, tol, {"K": K})


def check_a14(cfg: CheckConfig) -> CheckReport:
    t = cfg.frac("t", "1/3")
    x = cfg.fracs("x", "1/3,1/5")
    tol = cfg.float("tol", 1e-8)
    size = cfg.int("max_size", 3)
    rows = []
    parts = enumerate_partitions(size)
    for n in range(1, cfg.int("n_max", 3) + 1):
        quad = contour.QuadratureSpec(nodes=cfg.int("nodes", 16), max_nodes=cfg.int("max_nodes", 64))
        quad_skew = contour.QuadratureSpec(nodes=2 * quad.nodes, max_nodes=4 * quad.max_nodes)
        for lam in parts:
            for mu in parts:
                v, _ = contour.hl_orthogonality(lam, mu, n, t, quad=quad)
                want = (1 - t) ** n / qpoch(t, t, n - len(lam)) if lam == mu and len(lam) <= n else Fraction(0)
                err = abs(v - float(want))
                rows.append({"identity": "orthogonality", "n": n, "lam": str(lam), "mu": str(mu), "lhs": v,
                             "rhs": want, "abs_err": err, "ok": err < tol})
                if len(lam) <= n:
                    v, _ = contour.hl_skew_integral(lam, mu, x, t, n, quad=quad_skew)
                    want = skewpolys.skew_multi(skewpolys.HL_P, lam, mu, x, t)
                    err = abs(v - float(want))
                    rows.append({"identity": "skew integral", "n": n, "lam": str(lam), "mu": str(mu), "lhs": v,
                                 "rhs": want, "abs_err": err, "ok": err < tol})
    return _report(cfg, "torus integral formulas for Hall-Littlewood polynomials", rows, tol, {})


CHECKS: Dict[str, Callable[[CheckConfig], CheckReport]] = {
    "A1": check_a1, "A2": check_a2, "A3": check_a3, "A4": check_a4, "A5": check_a5, "A6": check_a6,
    "A7": check_a7, "A8": check_a8, "A9": check_a9, "A10": check_a10, "A11": check_a11, "A12": check_a12,
    "A13": check_a13, "A14": check_a14,
}

PROFILES: Dict[str, Dict[str, Dict[str, str]]] = {
    "desk": {},
    "quick": {
        "A1": {"n_max": "2", "series_n_max": "2"},
        "A2": {"K": "14"},
        "A3": {"K": "14"},
        "A7": {"K": "12", "mc_samples": "10000"},
        "A12": {"n_max": "2"},
        "A13": {"n_max": "2"},
    },
}


def run_check(config) -> CheckReport:
    """Run one configured check; ``config`` is a CheckConfig or a check id string."""
    if isinstance(config, str):
        config = load_config(config)
    fn = CHECKS.get(config.check_id.upper())
    if fn is None:
        raise ConfigError(f"unknown check id {config.check_id!r}; expected one of {', '.join(CHECKS)}")
    start = time.perf_counter()
    try:
        report = fn(config)
    except ConfigError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        report = CheckReport(config.check_id, "", config.params, None, None, None, None, None, {}, False,
                             f"{type(exc).__name__}: {exc}")
    report.runtime_ms = int((time.perf_counter() - start) * 1000)
    if config.out:
        _atomic_write(config.out, report.to_json())
    return report


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# studies and exports
# ---------------------------------------------------------------------------


def convergence_study(config: CheckConfig, parameter: str, steps: Sequence[int]) -> str:
    """CSV of (parameter value, abs_err of the check, change from the previous step)."""
    if parameter not in ("K", "L", "nodes", "order"):
        raise ConfigError(f"study parameter must be one of K, L, nodes, order; got {parameter!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([parameter, "abs_err", "delta"])
    prev = None
    for s in steps:
        params = dict(config.params)
        params[parameter] = str(s)
        if parameter == "nodes":
            params.setdefault("max_nodes", str(2 * s))
            params["max_nodes"] = str(2 * s)
        rep = run_check(CheckConfig(config.check_id, params, config.seed))
        val = float(rep.abs_err)
        w.writerow([s, repr(val), "" if prev is None else repr(abs(val - prev))])
        prev = val
    return buf.getvalue()


def export_distribution(config: CheckConfig, kind: str = "phl") -> str:
    spec = _spec(config, t="1/4", u="1/3")
    if kind == "phl":
        return measures.phl_joint(spec, measures.TruncationSpec(K=config.int("K", 16))).to_csv()
    if kind == "sixvertex":
        joint = sixvertex.shift_by_geometric(
            sixvertex.quasi_joint(config.int("L", 12), config.int("winding_cap", 10), spec.M, spec.N,
                                  spec.a, spec.b, spec.t, spec.u), spec.u)
        return joint.to_csv()
    if kind == "stationarity":
        us = [float(v) for v in config.raw("us", "0.9,0.99,0.999").split(",")]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u", "tv_distance"])
        for u, tv in sixvertex.stationarity_study(spec.M, spec.N, spec.a, spec.b, spec.t, us, config.int("L", 40)):
            w.writerow([repr(u), repr(float(tv))])
        return buf.getvalue()
    raise ConfigError(f"export kind must be 'phl', 'sixvertex' or 'stationarity', got {kind!r}")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="periodic-macdonald", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="verb", required=True)
    v = sub.add_parser("verify", help="run one check (or ALL)")
    v.add_argument("check_id")
    v.add_argument("--config")
    v.add_argument("--out")
    v.add_argument("--timing", action="store_true", help="include runtime in the JSON report")
    s = sub.add_parser("study", help="convergence study for one check")
    s.add_argument("check_id")
    s.add_argument("--parameter", required=True)
    s.add_argument("--steps", required=True, help="comma separated values")
    s.add_argument("--config")
    s.add_argument("--out")
    e = sub.add_parser("export", help="export a joint distribution as CSV")
    e.add_argument("--kind", default="phl", choices=["phl", "sixvertex", "stationarity"])
    e.add_argument("--config")
    e.add_argument("--out")
    m = sub.add_parser("sample", help="draw chains from the truncated periodic HL process")
    m.add_argument("--config")
    m.add_argument("--size", type=int, default=1)
    m.add_argument("--seed", type=int)
    m.add_argument("--out")
    return p


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.verb == "verify":
            ids = list(CHECKS) if args.check_id.upper() == "ALL" else [args.check_id.upper()]
            if ids[0] not in CHECKS:
                raise ConfigError(f"unknown check id {args.check_id!r}")
            ok = True
            reports = []
            for cid in ids:
                cfg = load_config(cid, args.config)
                cfg.out = None
                rep = run_check(cfg)
                reports.append(rep)
                ok = ok and rep.passed
                print(rep.summary(), file=sys.stderr)
            if args.out:
                text = reports[0].to_json(args.timing) if len(reports) == 1 else json.dumps(
                    [r.to_dict(args.timing) for r in reports], indent=2) + "\n"
                _atomic_write(args.out, text)
            return 0 if ok else 1
        if args.verb == "study":
            cfg = load_config(args.check_id.upper(), args.config)
            steps = [int(x) for x in args.steps.split(",")]
            _emit(convergence_study(cfg, args.parameter, steps), args.out)
            return 0
        if args.verb == "export":
            cfg = load_config("export", args.config)
            _emit(export_distribution(cfg, args.kind), args.out)
            return 0
        if args.verb == "sample":
            cfg = load_config("sample", args.config)
            seed = cfg.seed if args.seed is None else args.seed
            spec = _spec(cfg, t="1/4", u="1/3")
            draws = measures.sample(spec, measures.TruncationSpec(K=cfg.int("K", 8)), seed, args.size)
            lines = [json.dumps({"lambdas": [s.to_list() for s in d.lambdas], "mus": [s.to_list() for s in d.mus],
                                 "approximate": d.approximate, "tail": format_rational(d.tail)})
                     for d in draws]
            _emit("\n".join(lines) + "\n", args.out)
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
