"""Batch runner: ``padelab run config.json`` and ``padelab catalog``.

Exit codes: 0 success, 2 unreadable config or missing file, 3 precondition
violation, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import mpmath

from . import __version__
from .approx import (ConsistencyError, HPComponent, PadeRow, check_order_conditions, hermite_pade, incomplete,
                     pade, telescope_row)
from .config import ConfigError, ExperimentConfig, PreconditionError, load_config, parse_scalar
from .diagnostics import (DegenerateHankel, KSpec, approximation_error_rate, classify, conjecture_probe,
                          estimate_R_star, fabry, hadamard_radius, lemma_bound_check, regularize, theta,
                          track_zeros)
from .poly import Polynomial, roots
from .scalar import Backend, QQi, set_precision, to_mpc
from .series import CATALOG, InsufficientCoefficients, PowerSeries, SeriesSystem

EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_NUMERIC = 0, 2, 3, 4

CSV_COLUMNS = ("n", "lambda", "unique", "Q", "roots", "residual", "A", "q_star_roots")


# ---------------------------------------------------------------------------
# formatting

def fmt_real(x) -> str:
    """Shortest round-trip decimal; values outside double range keep 17 significant digits."""
    x = mpmath.mpf(x)
    f = float(x)
    if (f == 0 and x != 0) or (math.isinf(f) and mpmath.isfinite(x)):
        return mpmath.nstr(x, 17)
    return repr(f)


def fmt_coeff(c) -> str:
    """``re:im``; exact rationals as ``p/q``, floats at the working precision."""
    if isinstance(c, QQi):
        return f"{c.re}:{c.im}"
    c = to_mpc(c)
    d = mpmath.mp.dps
    return f"{mpmath.nstr(c.real, d)}:{mpmath.nstr(c.imag, d)}"


def parse_coeff(token: str, backend: Backend):
    re, im = token.split(":")
    if backend == Backend.EXACT:
        return QQi(Fraction(re), Fraction(im))
    return mpmath.mpc(re, im)


def fmt_roots(rootset) -> str:
    return ";".join(f"{fmt_real(z.real)}:{fmt_real(z.imag)}:{k}" for z, k in rootset.roots)


def fmt_points(points) -> str:
    return ";".join(f"{fmt_real(mpmath.mpc(z).real)}:{fmt_real(mpmath.mpc(z).imag)}" for z in points)


def jsonable(x):
    """Recursively convert report values into plain JSON (non-finite floats become strings)."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (QQi, Fraction)):
        return str(x)
    if isinstance(x, complex) or isinstance(x, mpmath.mpc):
        z = complex(x)
        return [jsonable(z.real), jsonable(z.imag)]
    if isinstance(x, Backend):
        return x.value
    f = float(x)
    return f if math.isfinite(f) else str(f)


# ---------------------------------------------------------------------------
# helpers

def _pmap(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _guard(fn: Callable, *args, **kw) -> dict:
    """Run an optional diagnostic; a failure is reported instead of aborting the run."""
    try:
        out = fn(*args, **kw)
    except (DegenerateHankel, InsufficientCoefficients, ValueError, ArithmeticError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}
    return out.summary() if hasattr(out, "summary") else out


def _row(n, lam, unique, Q, rootset, residual, A=None, qstar=None) -> dict:
    return {"n": n, "lambda": lam, "unique": "" if unique is None else int(bool(unique)),
            "Q": ";".join(fmt_coeff(c) for c in Q.coeffs), "roots": fmt_roots(rootset),
            "residual": fmt_real(residual), "A": "" if A is None else fmt_coeff_float(A),
            "q_star_roots": "" if qstar is None else fmt_points(qstar)}


def fmt_coeff_float(z) -> str:
    z = to_mpc(z)
    return f"{fmt_real(z.real)}:{fmt_real(z.imag)}"


def _limit_from_knob(cfg: ExperimentConfig, backend: Backend) -> Polynomial | None:
    given = cfg.knobs.get("Q_limit_roots")
    if not given:
        return None
    return Polynomial.from_roots([parse_scalar(r, backend) for r in given], backend)


def _limit_from_metadata(f: PowerSeries, m: int) -> Polynomial | None:
    """The ``m`` poles of ``f`` inside the disk of radius ``R_m``, when there are exactly ``m``."""
    poles = f.poles()
    if not poles or m == 0:
        return None
    Rm = f.radius(m)
    inside = []
    for a, tau in poles:
        if float(abs(to_mpc(a))) < Rm:
            inside += [a] * tau
    if len(inside) != m:
        return None
    return Polynomial.from_roots(inside, f.backend)


def _theta_report(cfg, records, limit: Polynomial | None, source: str) -> dict:
    recs = [(r.n, r.Q) for r in records]
    if limit is None:
        if len(recs) < 11:
            return {"error": "fewer than 11 records for a last-record limit"}
        limit, source, recs = recs[-1][1], "last_record", recs[:-1]
    same = [(n, Q) for n, Q in recs if Q.degree == limit.degree]
    if len(same) < 10:
        return {"error": f"fewer than 10 records with deg Q = {limit.degree}"}
    out = _guard(theta, same, limit, cfg.knobs["window"])
    out["limit_source"] = source
    out["limit_roots"] = [[z, k] for z, k in roots(limit).roots] if limit.degree else []
    return out


def _radii(f: PowerSeries, m: int, N: int) -> dict:
    out = {"hadamard": {str(k): _guard(hadamard_radius, f, k, N) for k in range(m + 1)},
           "fabry": _guard(fabry, f, N)}
    if f.closed_form is not None:
        out["metadata"] = {str(k): f.radius(k) for k in range(m + 1)}
    return out


def _zeros(records, cfg) -> tuple:
    if len(records) < 10:
        return None, {"error": "fewer than 10 records"}
    try:
        traj = track_zeros(records, window=cfg.knobs["window"], match_factor=cfg.knobs["match_factor"])
    except ValueError as exc:
        return None, {"error": str(exc)}
    return traj, traj.summary()


# ---------------------------------------------------------------------------
# tasks

def _need_m(cfg: ExperimentConfig) -> int:
    if cfg.m is None:
        raise PreconditionError(f"task {cfg.task} needs 'm'")
    if cfg.ns[0] < cfg.m:
        raise PreconditionError(f"n must be >= m = {cfg.m}")
    return cfg.m


def task_pade_row(cfg: ExperimentConfig):
    f = cfg.build_series()
    m = _need_m(cfg)
    records = _pmap(lambda n: pade(f, n, m), cfg.ns, cfg.knobs["workers"])
    rows = [_row(r.n, r.lam, r.unique, r.Q, r.roots, r.residual) for r in records]
    limit, source = _limit_from_knob(cfg, f.backend), "config"
    if limit is None:
        limit, source = _limit_from_metadata(f, m), "metadata"
    report = {"records": {"count": len(records), "unique": all(r.unique for r in records),
                          "exact_recovery": [r.n for r in records if r.exact]},
              "theta": _theta_report(cfg, records, limit, source),
              "zeros": _zeros(records, cfg)[1],
              "radii": _radii(f, m, cfg.knobs["N"])}
    if cfg.knobs["sup_radius"]:
        report["sup_norm_rate"] = _guard(approximation_error_rate, f, records, cfg.knobs["sup_radius"])
    return rows, report, {"components": [f], "budgets": [m]}


def task_hermite_pade_row(cfg: ExperimentConfig):
    system = cfg.build_system()
    if cfg.ns[0] < max(system.multi_index):
        raise PreconditionError("n must be >= max(multi_index)")
    records = _pmap(lambda n: hermite_pade(system, n), cfg.ns, cfg.knobs["workers"])
    rows = [_row(r.n, r.lam, r.unique, r.Q, r.roots, r.residual) for r in records]
    report = {"records": {"count": len(records), "unique_from": _unique_from(records),
                          "nullity_max": max(r.nullity for r in records)},
              "theta": _theta_report(cfg, records, _limit_from_knob(cfg, system.backend), "config"),
              "zeros": _zeros(records, cfg)[1]}
    return rows, report, {"components": list(system.components), "budgets": list(system.multi_index)}


def _unique_from(records) -> int | None:
    start = None
    for r in records:
        if r.unique and start is None:
            start = r.n
        elif not r.unique:
            start = None
    return start


def _incomplete_setup(cfg: ExperimentConfig):
    m = _need_m(cfg)
    m_star = cfg.m_star if cfg.m_star is not None else m
    strat = cfg.strategy or {"kind": "pade_row", "j": m_star}
    cancel = strat.get("cancel", True)
    if strat["kind"] == "pade_row":
        f = cfg.build_series()
        strategy = PadeRow(strat.get("j", m_star))
        budget = strategy.j
    else:
        system = cfg.build_system()
        k = strat.get("k", 1)
        if not 1 <= k <= system.d:
            raise PreconditionError(f"hp_component k={k} outside 1..{system.d}")
        strategy = HPComponent(system, k)
        f = system.components[k - 1]
        budget = system.multi_index[k - 1]
    return f, m, m_star, strategy, cancel, budget


def _R_star(cfg, f, m_star, est) -> tuple:
    choice = cfg.knobs["R_star"]
    if isinstance(choice, (int, float)):
        return float(choice), "config"
    if choice == "metadata":
        if f.closed_form is None:
            raise PreconditionError("R_star='metadata' needs a closed-form series")
        return f.radius(m_star), "metadata"
    return est.fit, "estimate"


def _incomplete_core(cfg: ExperimentConfig):
    f, m, m_star, strategy, cancel, budget = _incomplete_setup(cfg)
    records = _pmap(lambda n: incomplete(None if isinstance(strategy, HPComponent) else f, n, m, m_star,
                                         strategy, cancel), cfg.ns, cfg.knobs["workers"])
    tels = telescope_row(records)
    tel_at = {t.n: t for t in tels}
    rows = []
    for r in records:
        t = tel_at.get(r.n)
        rows.append(_row(r.n, r.lam, None, r.q_monic, r.roots, r.residual,
                         None if t is None else t.A, None if t is None else t.q_star_roots))
    est = estimate_R_star(tels, cfg.knobs["window"]) if len(tels) >= 10 else None
    report: dict = {"records": {"count": len(records), "m": m, "m_star": m_star,
                                "strategy": {"kind": "pade_row", "j": strategy.j} if isinstance(strategy, PadeRow)
                                else {"kind": "hp_component", "k": strategy.k}}}
    report["R_star_estimate"] = est.summary() if est is not None else {"error": "fewer than 10 telescopes"}
    reg, R = None, math.inf
    if est is not None or cfg.knobs["R_star"] != "estimate":
        R, src = _R_star(cfg, f, m_star, est)
        report["R_star"] = {"value": R, "source": src}
    nondeg = [t for t in tels if not t.degenerate]
    if math.isfinite(R) and len(nondeg) >= 3:
        try:
            reg = regularize([t.A for t in tels], n_offset=tels[0].n, radius=R)
            report["regularization"] = reg.summary()
        except ValueError as exc:
            report["regularization"] = {"error": str(exc)}
    else:
        report["regularization"] = {"error": "degenerate telescopes or infinite R*"}
    traj, report["zeros"] = _zeros(records, cfg)
    if traj is not None:
        report["classification"] = _guard(
            classify, traj, R, None if reg is None else list(reg.contact), tels, m, m_star,
            cfg.knobs["margin"], cfg.knobs["attract_tol"])
    ctx = {"components": [f], "budgets": [budget], "f": f, "records": records, "reg": reg, "R": R,
           "m_star": m_star, "m": m}
    return rows, report, ctx


def task_incomplete_row(cfg: ExperimentConfig):
    return _incomplete_core(cfg)


def task_diagnose(cfg: ExperimentConfig):
    rows, report, ctx = _incomplete_core(cfg)
    f = ctx["f"]
    report["radii"] = _radii(f, ctx["m"], cfg.knobs["N"])
    delta, kr = cfg.knobs["delta"], cfg.knobs["K_radius"]
    if delta and kr:
        report["lemma_bounds"] = _guard(lemma_bound_check, ctx["records"], f, ctx["reg"], ctx["R"], delta,
                                        KSpec(kr, cfg.knobs["K_kind"]))
    return rows, report, ctx


def task_conjecture_scan(cfg: ExperimentConfig):
    system = cfg.build_system()
    records = _pmap(lambda n: hermite_pade(system, n), cfg.ns, cfg.knobs["workers"])
    rows = [_row(r.n, r.lam, r.unique, r.Q, r.roots, r.residual) for r in records]
    probe = conjecture_probe(system, cfg.ns, cfg.knobs["grid"], cfg.knobs["N"], cfg.knobs["margin"], records)
    return rows, {"probe": probe.summary()}, {"components": list(system.components),
                                               "budgets": list(system.multi_index)}


TASK_RUNNERS = {"pade_row": task_pade_row, "hermite_pade_row": task_hermite_pade_row,
                "incomplete_row": task_incomplete_row, "diagnose": task_diagnose,
                "conjecture_scan": task_conjecture_scan}


# ---------------------------------------------------------------------------
# output

def write_outputs(out_dir: Path, cfg: ExperimentConfig, rows: list[dict], report: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in sorted(rows, key=lambda r: r["n"]):
        w.writerow(r)
    (out_dir / "row.csv").write_text(buf.getvalue())
    doc = {"version": __version__, "task": cfg.task, "backend": cfg.backend.value, "precision": cfg.precision,
           "n_range": [cfg.ns[0], cfg.ns[-1]], "knobs": cfg.knobs, **report}
    (out_dir / "report.json").write_text(json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n")


def read_rows(path: Path, backend: Backend) -> list[dict]:
    """Parse ``row.csv`` back into ``n``, ``lambda`` and the monic denominator."""
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            coeffs = tuple(parse_coeff(t, backend) for t in rec["Q"].split(";")) if rec["Q"] else ()
            out.append({"n": int(rec["n"]), "lambda": int(rec["lambda"]), "Q": Polynomial(coeffs, backend),
                        "residual": float(rec["residual"])})
    return out


def revalidate(path: Path, components: Sequence[PowerSeries], budgets: Sequence[int]) -> list[tuple]:
    """``(n, residual)`` per row after rebuilding numerators from the stored denominators."""
    backend = components[0].backend
    out = []
    for rec in read_rows(path, backend):
        res = max(check_order_conditions(rec["Q"], f, rec["n"], b, rec["lambda"])
                  for f, b in zip(components, budgets))
        out.append((rec["n"], res))
    return out


def run(cfg: ExperimentConfig, out_dir: Path | None = None) -> dict:
    set_precision(cfg.precision)
    rows, report, _ = TASK_RUNNERS[cfg.task](cfg)
    write_outputs(Path(out_dir or cfg.output), cfg, rows, report)
    return report


def catalog_list() -> str:
    lines = []
    for name in sorted(CATALOG):
        desc, params = CATALOG[name]
        lines.append(f"{name}: {desc}  [params: {', '.join(params)}]")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="padelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--precision", type=int, default=None, help="working precision in decimal digits")
    p_run.add_argument("--backend", choices=["exact", "float"], default=None)
    p_run.add_argument("--out", default=None, help="output directory")
    sub.add_parser("catalog", help="list builtin series constructors")
    args = parser.parse_args(argv)

    if args.command == "catalog":
        print(catalog_list())
        return EXIT_OK
    try:
        cfg = load_config(args.config).with_overrides(args.precision, args.backend, args.out)
        run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConsistencyError, ArithmeticError, AssertionError, mpmath.libmp.NoConvergence) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PreconditionError, ValueError, TypeError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(f"wrote {Path(cfg.output) / 'row.csv'} and {Path(cfg.output) / 'report.json'}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
