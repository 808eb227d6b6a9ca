"""Command-line front end: ``inspect``, ``paper-suite`` and ``sweep``.

Exit codes: 0 ok, 1 reproduction criteria failed, 2 point outside the
chart domain, 3 malformed metric spec or arguments.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import catalog as cat
from . import classify as cl
from . import pseudosym as ps
from . import tensors as tc
from .curvature import (ChartError, DomainViolation, MetricChart, curvature_pack, full_chart,
                        warped_chart, warped_components)
from .expr_dsl import BindError, ParseError, parse, pretty
from .jets import SingularMetricError

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

__all__ = [
    "SCHEMA_VERSION", "EXIT_OK", "EXIT_FAILED", "EXIT_DOMAIN", "EXIT_SPEC", "SpecError",
    "load_spec", "chart_from_spec", "dump_spec", "parse_point", "inspect_point",
    "sweep_rows", "to_json", "main",
]

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAILED, EXIT_DOMAIN, EXIT_SPEC = 0, 1, 2, 3


class SpecError(ValueError):
    """Malformed metric spec, family arguments or point."""


# --------------------------------------------------------------------------
# metric spec files

def _expr_text(value, where: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise SpecError(f"{where}: expected an expression string or number, got {value!r}")
    text = str(value)
    try:
        parse(text)
    except ParseError as exc:
        raise SpecError(f"{where}: {exc.message} at byte {exc.offset}\n{exc.caret()}") from None
    return text


def _grid(value, n: int, where: str):
    if not isinstance(value, list) or len(value) != n or any(not isinstance(r, list) or len(r) != n
                                                            for r in value):
        raise SpecError(f"{where}: expected a {n}x{n} grid of expressions")
    return [[_expr_text(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(value)]


def _table(doc, key, required=True) -> dict:
    t = doc.get(key)
    if t is None:
        if required:
            raise SpecError(f"missing [{key}] table")
        return {}
    if not isinstance(t, dict):
        raise SpecError(f"[{key}] must be a table")
    return t


def chart_from_spec(doc: dict, source: str | None = None) -> MetricChart:
    """Validate a parsed spec document and build its chart."""
    man = _table(doc, "manifold")
    unknown = set(doc) - {"manifold", "metric", "warped", "params"}
    if unknown:
        raise SpecError(f"unknown table(s): {sorted(unknown)}")
    coords = man.get("coordinates")
    if not isinstance(coords, list) or not all(isinstance(c, str) for c in coords):
        raise SpecError("[manifold] coordinates must be a list of names")
    n = man.get("dimension", len(coords))
    if not isinstance(n, int) or n != len(coords):
        raise SpecError(f"[manifold] dimension {n!r} does not match {len(coords)} coordinates")
    params = _table(doc, "params", required=False)
    for k, v in params.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SpecError(f"[params] {k} must be a number")
    if ("metric" in doc) == ("warped" in doc):
        raise SpecError("need exactly one of [metric] or [warped]")
    try:
        if "metric" in doc:
            g = _grid(_table(doc, "metric").get("g"), n, "[metric] g")
            return full_chart(coords, g, params, man.get("signature"), source=doc)
        w = _table(doc, "warped")
        base = w.get("base_coordinates", coords[:2])
        if list(base) != list(coords[:2]):
            raise SpecError("[warped] base_coordinates must be the first two manifold coordinates")
        fd = w.get("fiber_dim", n - 2)
        if not isinstance(fd, int) or fd + 2 != n:
            raise SpecError(f"[warped] fiber_dim {fd!r} requires dimension {fd + 2 if isinstance(fd, int) else '?'}")
        bm = _grid(w.get("base_metric"), 2, "[warped] base_metric")
        warping = _expr_text(w.get("warping"), "[warped] warping")
        kt = w.get("fiber_scalar_curvature", 0.0)
        if isinstance(kt, bool) or not isinstance(kt, (int, float)):
            raise SpecError("[warped] fiber_scalar_curvature must be a number")
        return warped_chart(base, bm, warping, fd, kt, params, w.get("fiber_signature"),
                            coords[2:], source=doc)
    except (ChartError, BindError) as exc:
        raise SpecError(str(exc)) from None


def load_spec(path: str | Path) -> MetricChart:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from None
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"{path}: {exc}") from None
    return chart_from_spec(doc, str(path))


def _toml_value(v) -> str:
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("nan" if math.isnan(v) else ("inf" if v > 0 else "-inf"))
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot write {v!r} as TOML")


def dump_spec(chart: MetricChart) -> str:
    """TOML spec that rebuilds ``chart`` exactly."""
    lines = ["[manifold]", f"dimension = {chart.n}", f"coordinates = {_toml_value(list(chart.coordinates))}"]
    if chart.signature is not None:
        lines.append(f"signature = {_toml_value([int(s) for s in chart.signature])}")
    if chart.is_warped:
        w = chart.warped
        lines += ["", "[warped]",
                  f"base_coordinates = {_toml_value(list(w.base_coordinates))}",
                  "base_metric = " + _toml_value([[pretty(x) for x in row] for row in w.base_metric]),
                  f"warping = {_toml_value(pretty(w.warping))}",
                  f"fiber_dim = {w.fiber_dim}",
                  f"fiber_scalar_curvature = {_toml_value(float(w.fiber_scalar_curvature))}",
                  f"fiber_signature = {_toml_value([int(s) for s in w.fiber_signature])}"]
    else:
        lines += ["", "[metric]", "g = ["]
        lines += [f"  {_toml_value([pretty(x) for x in row])}," for row in chart.metric]
        lines.append("]")
    if chart.params:
        lines += ["", "[params]"]
        lines += [f"{k} = {_toml_value(float(v))}" for k, v in chart.params]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# points and reports

def parse_point(text: str) -> dict:
    """``"t=0,r=2"`` -> {"t": 0.0, "r": 2.0}; numerals only."""
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, val = part.partition("=")
        name = name.strip()
        if not sep or not name:
            raise SpecError(f"point entry {part!r} is not name=value")
        try:
            out[name] = float(val)
        except ValueError:
            raise SpecError(f"point value for {name!r} must be a number, got {val.strip()!r}") from None
    return out


def _kv(items, what: str, convert=float) -> dict:
    out = {}
    for item in items or ():
        k, sep, v = item.partition("=")
        if not sep or not k.strip():
            raise SpecError(f"{what} {item!r} is not name=value")
        try:
            out[k.strip()] = convert(v.strip())
        except ValueError:
            raise SpecError(f"{what} {k.strip()!r} must be a number, got {v.strip()!r}") from None
    return out


def _fit(res: cl.FitResult, **extra) -> dict:
    d = {"holds": bool(res.verdict), "residual": res.residual, "status": res.status, **res.coefficients}
    d.update(extra)
    return d


def _condition(r: ps.ConditionResult) -> dict:
    d = {"id": r.id, "coefficients": dict(r.coefficients), "residual": r.residual,
         "verdict": bool(r.verdict), "status": r.status}
    if r.predicted:
        d["predicted"] = {k: v for k, v in r.predicted.items() if k in r.coefficients} or dict(r.predicted)
    if r.deltas:
        d["deltas"] = dict(r.deltas)
        d["coefficients_match"] = r.coefficients_match
    return d


def inspect_point(chart: MetricChart, point: dict, family: cat.Family | None = None,
                  rank_factor: float = cl.RANK_FACTOR) -> dict:
    """Full per-point report.  Raises DomainViolation / SingularMetricError off-domain."""
    if family is not None and not family.in_domain(point):
        raise DomainViolation(f"point {point} is outside the domain of {family.id}")
    pack = curvature_pack(chart, point)
    n = pack.n
    from .curvature import point_vector
    x = point_vector(chart, point)
    inv = None
    if chart.is_warped:
        _, inv = warped_components(chart, point)
    flags = cl.classify_pack(pack, rank_factor=rank_factor)
    invariants = {"kappa": pack.kappa, "trS2": pack.trS2, "dimension": n,
                  "norm_R": tc.norm(pack.R), "norm_S": tc.norm(pack.S)}
    if pack.C is not None:
        invariants["norm_C"] = tc.norm(pack.C)
    if inv is not None:
        invariants.update(tau1=inv.tau1, rho=inv.rho, phi=inv.phi, kappa_tilde=inv.kappa_tilde)
    classification = {
        "flat": flags.is_flat, "einstein": flags.is_einstein, "ricci_simple": flags.is_ricci_simple,
        "quasi_einstein": flags.is_quasi_einstein, "two_quasi_einstein": flags.is_2_quasi_einstein,
        "conformally_flat": flags.is_conformally_flat, "min_rank": flags.min_rank,
        "alpha": flags.alpha, "rank_S": flags.rank_S,
        "partially_einstein": _fit(flags.partially_einstein),
        "roter": _fit(flags.roter, **{k: v for k, v in flags.roter.extra.items() if k != "cond"}),
        "generalized_roter": _fit(flags.gen_roter),
        "E_proportional_C": _fit(flags.e_c),
        "summary": flags.labels(),
    }
    P = None
    conditions = [_condition(r) for r in ps.pseudo_conditions(pack)]
    if pack.C is not None:
        if inv is not None:
            conditions += [_condition(r) for r in ps.warped_conditions(pack, inv)]
        else:
            P = ps._Products(pack)
            conditions += [_condition(r) for r in (ps.fit_two_term(pack, P=P),
                                                   ps.fit_ricci_three_term(pack, P=P),
                                                   ps.fit_mixed(pack, P=P))]
        if flags.roter.verdict:
            c = flags.roter.coefficients
            conditions += [_condition(r) for r in ps.roter_suite(pack, c["phi1"], c["mu1"], c["eta1"])]
    report = {
        "coordinates": dict(zip(chart.coordinates, (float(v) for v in x))),
        "invariants": invariants,
        "classification": classification,
        "conditions": conditions,
        "lattice": ps.lattice(pack),
    }
    if family is not None and family.spec.oracles:
        try:
            report["closed_forms"] = family.oracles(point, native=True)
        except cat.CatalogError as exc:
            report["closed_forms"] = {"error": str(exc)}
    return report


_SWEEP_VERDICTS = (("einstein", "E"), ("quasi_einstein", "QE"), ("two_quasi_einstein", "2QE"),
                   ("roter", "Roter"), ("pseudosym_R", "R.R=LQ"), ("two_term", "R.R=Q(S,R)+LQ"))


def _sweep_row(chart, point, family, rank_factor):
    try:
        if family is not None and not family.in_domain(point):
            raise DomainViolation("outside family domain")
        pack = curvature_pack(chart, point)
        row = {"kappa": pack.kappa}
        if chart.is_warped:
            _, inv = warped_components(chart, point)
            row.update(tau1=inv.tau1, rho=inv.rho, phi=inv.phi)
        flags = cl.classify_pack(pack, rank_factor=rank_factor)
        P = ps._Products(pack)
        rr = ps.fit_L(P["dot", "R", "R"], P["Q", "g", "R"], "R.R", "L_R")
        row.update(einstein=flags.is_einstein, quasi_einstein=flags.is_quasi_einstein,
                   two_quasi_einstein=flags.is_2_quasi_einstein, roter=flags.roter.verdict,
                   pseudosym_R=rr.verdict, L_R=rr.coefficients["L_R"])
        if pack.C is not None:
            row["two_term"] = ps.fit_two_term(pack, P=P).verdict
        return row
    except (DomainViolation, SingularMetricError, ArithmeticError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}


def sweep_rows(chart, base_point: dict, coordinate: str, start: float, stop: float, steps: int,
               family=None, rank_factor: float = cl.RANK_FACTOR, workers: int | None = None,
               zero_tol: float = 1e-10) -> list[dict]:
    """Invariants along a coordinate line; sign changes of rho and phi are flagged."""
    if steps < 2:
        raise SpecError("--steps must be at least 2")
    if coordinate not in chart.coordinates:
        raise SpecError(f"unknown coordinate {coordinate!r}; chart has {list(chart.coordinates)}")
    values = np.linspace(start, stop, steps)
    points = [{**base_point, coordinate: float(v)} for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda p: _sweep_row(chart, p, family, rank_factor), points))
    last = {}
    for v, row in zip(values, rows):
        row[coordinate] = float(v)
        flags = []
        for key in ("rho", "phi"):
            if key not in row:
                continue
            s = 0 if abs(row[key]) < zero_tol else (1 if row[key] > 0 else -1)
            if s and last.get(key, s) != s:
                flags.append(f"{key} changes sign")
            if s:
                last[key] = s
        row["flags"] = flags
    return rows


# --------------------------------------------------------------------------
# output

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) + 0.0  # no negative zeros
    return obj


def _encode(obj, indent: int) -> str:
    pad, pad1 = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{pad1}{json.dumps(k)}: {_encode(obj[k], indent + 1)}" for k in sorted(obj))
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad1 + _encode(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return "%.12e" % obj if math.isfinite(obj) else "null"
    return json.dumps(obj)


def to_json(doc) -> str:
    """Deterministic JSON: sorted keys, floats as %.12e, non-finite floats as null."""
    return _encode(_jsonable(doc), 0) + "\n"


def _emit_json(doc, dest, out):
    text = to_json(doc)
    if dest == "-":
        out.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _f(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, (bool, np.bool_)):
        return "yes" if v else "no"
    if isinstance(v, (int, np.integer)):
        return str(v)
    return f"{float(v) + 0.0: .6e}"


def _render_inspect(rep: dict, out):
    w = out.write
    w("point: " + ", ".join(f"{k}={v:g}" for k, v in rep["coordinates"].items()) + "\n")
    w("invariants:\n")
    for k, v in rep["invariants"].items():
        w(f"  {k:12s} {_f(v)}\n")
    c = rep["classification"]
    w("classification: " + (", ".join(c["summary"]) or "none of the special classes") + "\n")
    w(f"  min rank(S - alpha g) = {c['min_rank']}  alpha = {_f(c['alpha'])}  rank S = {c['rank_S']}\n")
    pe, ro, ec = c["partially_einstein"], c["roter"], c["E_proportional_C"]
    w(f"  S^2 = lambda S + mu g: {_f(pe['holds'])}  lambda = {_f(pe['lambda'])}  mu = {_f(pe['mu'])}"
      f"  residual {pe['residual']:.1e}\n")
    w(f"  Roter: {_f(ro['holds'])}  phi1 = {_f(ro['phi1'])}  mu1 = {_f(ro['mu1'])}  eta1 = {_f(ro['eta1'])}"
      f"  ({ro['status']})\n")
    w(f"  E = lambda C: {_f(ec['holds'])}  lambda = {_f(ec['lambda'])}\n")
    w("conditions:\n")
    for r in rep["conditions"]:
        coef = "  ".join(f"{k} = {_f(v)}" for k, v in r["coefficients"].items())
        w(f"  [{'x' if r['verdict'] else ' '}] {r['id']}  residual {r['residual']:.1e}  {coef}\n")
        if "deltas" in r:
            for k, d in r["deltas"].items():
                w(f"        {k}: closed form {_f(r['predicted'].get(k))}  delta {d:.1e}\n")
        if r["status"] != "ok":
            w(f"        ({r['status']})\n")
    w("lattice:\n")
    for b in rep["lattice"]:
        mark = "?" if b["holds"] is None else ("x" if b["holds"] else " ")
        extra = f"  L = {_f(b['L'])}" if "L" in b and b["holds"] else ""
        w(f"  [{mark}] {b['box']}{extra}\n")
    if "closed_forms" in rep:
        w("closed forms:\n")
        for k, v in rep["closed_forms"].items():
            w(f"  {k:20s} {v if isinstance(v, str) else _f(v)}\n")


# --------------------------------------------------------------------------
# commands

def _chart_from_args(args):
    if bool(args.metric) == bool(args.family):
        raise SpecError("give exactly one of --metric FILE or --family ID")
    if args.metric:
        if args.param or args.function:
            raise SpecError("--param/--function apply to --family only; put parameters in [params]")
        return load_spec(args.metric), None
    try:
        fam = cat.build(args.family, _kv(args.param, "--param"), _kv(args.function, "--function", str))
    except (cat.CatalogError, ChartError, ParseError, BindError) as exc:
        raise SpecError(str(exc)) from None
    return fam.chart, fam


def _default_point(chart, family) -> dict:
    if family is not None:
        return dict(family.spec.default_point)
    return {}


def cmd_inspect(args, out) -> int:
    chart, fam = _chart_from_args(args)
    if args.dump_spec:
        out.write(dump_spec(chart))
        return EXIT_OK
    points = [parse_point(p) for p in args.point] or [_default_point(chart, fam)]
    reports = [inspect_point(chart, {**_default_point(chart, fam), **p}, fam, args.rank_factor) for p in points]
    src = {"family": fam.id, "params": dict(fam.params), "functions": dict(fam.functions)} if fam else \
        {"metric_file": str(args.metric)}
    doc = {"schema_version": SCHEMA_VERSION, "command": "inspect", "source": src, "points": reports}
    if args.json:
        _emit_json(doc, args.json, out)
    if args.json != "-":
        for rep in reports:
            _render_inspect(rep, out)
    return EXIT_OK


def cmd_suite(args, out) -> int:
    from . import suite
    checks = suite.select(args.filter)
    if not checks:
        raise SpecError(f"no check matches {args.filter!r}; known: {', '.join(c.name for c in suite.CHECKS)}")
    results = suite.run_suite(args.filter, workers=args.workers)
    ok = all(r.passed for r in results)
    if args.json:
        doc = {"schema_version": SCHEMA_VERSION, "command": "paper-suite", "passed": ok, "checks": [
            {"name": r.name, "criterion": r.criterion, "title": r.title, "passed": r.passed,
             "max_residual": r.max_residual, "error": r.error,
             "items": [{"label": i.label, "residual": i.residual, "tol": i.tol, "passed": i.passed,
                        "informational": i.informational, "count": i.count, "value": i.value,
                        "expected": i.expected, "note": i.note} for i in r.items]}
            for r in results]}
        _emit_json(doc, args.json, out)
        if args.json == "-":
            return EXIT_OK if ok else EXIT_FAILED
    w = out.write
    w(f"{'check':15s} {'crit':>4s}  {'status':6s} {'max resid':>10s} {'time':>6s}  title\n")
    for r in results:
        crit = "-" if r.criterion is None else str(r.criterion)
        w(f"{r.name:15s} {crit:>4s}  {'PASS' if r.passed else 'FAIL':6s} {r.max_residual:10.2e} "
          f"{r.elapsed:5.1f}s  {r.title}\n")
        if r.error:
            w(f"    error: {r.error}\n")
        for i in r.items:
            if not i.passed and (not i.informational or args.verbose):
                tag = "info" if i.informational else "fail"
                vals = "" if i.value is None else f"  got {i.value:.10g}, expected {i.expected:.10g}"
                w(f"    {tag}: {i.label}: residual {i.residual:.2e} > {i.tol:g}{vals}\n")
        if args.verbose:
            for i in r.items:
                if i.passed:
                    w(f"    ok:   {i.label} ({i.count}x): {i.residual:.2e} < {i.tol:g}\n")
    summary = suite.criterion_summary(results)
    if summary:
        w("\n")
        for c, (passed, worst) in summary.items():
            w(f"criterion {c:2d}: {'PASS' if passed else 'FAIL'}  max residual {worst:.2e}\n")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_sweep(args, out) -> int:
    chart, fam = _chart_from_args(args)
    base = {**_default_point(chart, fam), **(parse_point(args.point) if args.point else {})}
    rows = sweep_rows(chart, base, args.coordinate, args.start, args.stop, args.steps, fam,
                      args.rank_factor, args.workers)
    if args.json:
        src = {"family": fam.id, "params": dict(fam.params)} if fam else {"metric_file": str(args.metric)}
        _emit_json({"schema_version": SCHEMA_VERSION, "command": "sweep", "source": src,
                    "coordinate": args.coordinate, "rows": rows}, args.json, out)
    if args.json != "-":
        cols = [c for c in ("kappa", "tau1", "rho", "phi", "L_R") if any(c in r for r in rows)]
        w = out.write
        w(f"{args.coordinate:>14s} " + " ".join(f"{c:>14s}" for c in cols) + "  "
          + " ".join(label for _, label in _SWEEP_VERDICTS) + "  flags\n")
        for r in rows:
            line = f"{r[args.coordinate]:14.6g} "
            if "error" in r:
                w(line + f"  domain error: {r['error']}\n")
                continue
            line += " ".join(f"{r[c]:14.6e}" if c in r else f"{'-':>14s}" for c in cols) + "  "
            line += " ".join(f"{('yes' if r.get(k) else 'no'):>{len(label)}s}" for k, label in _SWEEP_VERDICTS)
            w(line + ("  " + "; ".join(r["flags"]) if r["flags"] else "") + "\n")
    return EXIT_DOMAIN if all("error" in r for r in rows) else EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pseudocurv", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def source_args(sp):
        sp.add_argument("--metric", metavar="FILE", help="TOML metric spec")
        sp.add_argument("--family", metavar="ID", help=f"catalog family: {', '.join(cat.family_ids())}")
        sp.add_argument("--param", action="append", metavar="K=V", help="family parameter (repeatable)")
        sp.add_argument("--function", action="append", metavar="NAME=EXPR",
                        help="replace a family's free function (repeatable)")
        sp.add_argument("--rank-factor", type=float, default=cl.RANK_FACTOR,
                        help="singular values above n * factor * sigma_max count toward rank")
        sp.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")

    sp = sub.add_parser("inspect", help="classify a metric at one or more points")
    source_args(sp)
    sp.add_argument("--point", action="append", default=[], metavar="NAME=VAL,...",
                    help="evaluation point; angles as numerals (pi/2 = 1.570796326795)")
    sp.add_argument("--dump-spec", action="store_true", help="print the chart as a TOML spec and exit")
    sp.set_defaults(func=cmd_inspect)

    sp = sub.add_parser("paper-suite", help="run the reproduction checks")
    sp.add_argument("--filter", metavar="PATTERN", help="check name, substring or glob")
    sp.add_argument("--json", metavar="PATH")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("-v", "--verbose", action="store_true", help="list every item")
    sp.set_defaults(func=cmd_suite)

    sp = sub.add_parser("sweep", help="invariants along a coordinate line")
    source_args(sp)
    sp.add_argument("--point", metavar="NAME=VAL,...", help="base point for the other coordinates")
    sp.add_argument("--coordinate", default="r")
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--steps", type=int, default=11)
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_SPEC
    try:
        return args.func(args, out)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except (ChartError, ParseError, BindError, cat.CatalogError) as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except (DomainViolation, SingularMetricError, ArithmeticError) as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
