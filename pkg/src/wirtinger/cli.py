"""Command-line entry point.

    wirtinger <command> --config <path> [--output <path>] [--format csv|json]
              [--seed <u64>] [--tol <float>]

Commands: ``validate-structure``, ``angle``, ``scan``, ``verify``,
``nijenhuis``. The job is described by one JSON document (see
``docs/cli.md`` and :data:`wirtinger.schemas.CONFIG_SCHEMA`); flags given on
the command line override the matching config keys.

Exit codes: 0 success, 1 invalid config or input, 2 property violation found
by ``verify``, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence, TextIO

import jsonschema
import numpy as np

from .angle import angle_report, verify_wirtinger
from .battery import dimension_pairs, run_battery
from .charts import ImmersionChart, angle_field, catalog_chart, field_summary, gradient_field
from .config import TOL
from .errors import ConfigError, ConvergenceFailure, EvalError, ParseError, WirtingerError
from .expr import parse_components
from .output import dumps, to_csv
from .schemas import validate_config
from .structures import (
    CompatibleStructure,
    StructureField,
    chart_field,
    nijenhuis,
    random_compatible,
    s6_structure,
    standard_structure,
    validate,
)

__all__ = ["COMMANDS", "run", "main", "build_structure", "build_chart"]

log = logging.getLogger(__name__)

COMMANDS = ("validate-structure", "angle", "scan", "verify", "nijenhuis")

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_NUMERIC = 0, 1, 2, 3


class _NumericalFailure(Exception):
    pass


@dataclass
class _Result:
    record: Any
    header: Sequence[str] | None = None
    rows: list[list] | None = None
    exit_code: int = EXIT_OK


def build_structure(desc: dict, seed: int = 0) -> CompatibleStructure | StructureField:
    kind = desc["kind"]
    if kind == "standard":
        return standard_structure(desc["n"])
    if kind == "random":
        return random_compatible(desc["n"], desc.get("seed", seed))
    if kind == "s6":
        return s6_structure(desc["point"])
    if kind == "explicit":
        return CompatibleStructure(desc["metric"], desc["jop"])
    return chart_field(desc["name"], desc.get("params", []), desc.get("step"))


def _pointwise(desc: dict, seed: int) -> CompatibleStructure:
    s = build_structure(desc, seed)
    if isinstance(s, StructureField):
        if "at" not in desc:
            raise ConfigError("a structure field needs an 'at' chart point here")
        return s(np.asarray(desc["at"], dtype=float))
    return s


def _default_variables(components, k: int) -> list[str]:
    used = set().union(*(c.variables() for c in components))
    if k == 2 and used <= {"u", "v"}:
        return ["u", "v"]
    return [f"u{i + 1}" for i in range(k)]


def build_chart(desc: dict, grid: Sequence[Sequence[float]], ambient) -> ImmersionChart:
    domain = tuple((float(a), float(b), int(n)) for a, b, n in grid)
    mode = desc.get("jacobian", "analytic")
    step = desc.get("step")
    if "catalog" in desc:
        return catalog_chart(
            desc["catalog"], domain, desc.get("params", []), ambient=ambient, jacobian=mode, step=step
        )
    comps = parse_components(desc["components"])
    names = desc.get("variables") or _default_variables(comps, len(domain))
    if len(names) != len(domain):
        raise ConfigError(f"{len(names)} variables for a {len(domain)}-dimensional grid")
    unknown = set().union(*(c.variables() for c in comps)) - set(names)
    if unknown:
        raise ConfigError(f"unknown variables in chart components: {sorted(unknown)}")

    def f(x):
        env = dict(zip(names, map(float, x)))
        return np.array([c.evaluate(env) for c in comps])

    jac = None
    if mode == "analytic":
        try:
            partials = [[c.diff(v) for v in names] for c in comps]
        except EvalError as exc:
            log.warning("falling back to central differences: %s", exc)
        else:
            def jac(x):
                env = dict(zip(names, map(float, x)))
                return np.array([[d.evaluate(env) for d in row] for row in partials])

    text = desc["components"] if isinstance(desc["components"], str) else ", ".join(desc["components"])
    return ImmersionChart(f, domain, ambient, jacobian=jac, step=step, name=text)


def _validate_structure(cfg: dict, seed: int, tol: float) -> _Result:
    s = _pointwise(cfg["structure"], seed)
    rec = {"dim": s.dim, **validate(s).as_dict()}
    return _Result(rec)


def _angle(cfg: dict, seed: int, tol: float) -> _Result:
    s = _pointwise(cfg["structure"], seed)
    rep = angle_report(s, cfg["subspace"], tol)
    chk = verify_wirtinger(s, cfg["subspace"])
    rec = {**rep.as_dict(), "bound_margin": chk.bound_margin}
    return _Result(rec)


def _scan(cfg: dict, seed: int, tol: float) -> _Result:
    ambient = build_structure(cfg["structure"], seed)
    chart = build_chart(cfg["chart"], cfg["grid"], ambient)
    af = angle_field(chart, tol)
    if all(n >= 3 for n in af.shape):
        af = gradient_field(af, chart)
    summary = field_summary(af)
    if summary.n_reported == 0:
        raise _NumericalFailure("no grid point produced an angle report")
    p = chart.param_dim
    m = p // 2
    header = [f"u{i + 1}" for i in range(p)] + ["cos_alpha", "alpha"]
    header += [f"lambda_{k + 1}" for k in range(m)] + ["classification", "grad_alpha_norm", "flags"]
    grad = af.grad_alpha_norm.ravel() if af.grad_alpha_norm is not None else np.full(len(af), np.nan)
    rows = []
    for x, rep, g, fl in zip(af.points, af.reports, grad, af.flags):
        if rep is None:
            vals = [None, None] + [None] * m + [""]
        else:
            vals = [rep.cos_alpha, rep.alpha, *rep.lambdas, rep.classification.value]
        rows.append([*x, *vals, None if not np.isfinite(g) else float(g), ";".join(fl)])
    return _Result(summary.as_dict(), header, rows)


def _as_list(v) -> list[int] | None:
    if v is None:
        return None
    return [v] if isinstance(v, int) else list(v)


def _verify(cfg: dict, seed: int, tol: float) -> _Result:
    ambient = _as_list(cfg["ambient_dim"])
    sub = _as_list(cfg.get("sub_dim"))
    try:
        pairs = dimension_pairs(ambient, sub)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    res = run_battery(cfg["count"], ambient, sub, seed, cfg.get("complex_fraction", 0.0))
    rec = {
        "count": res.count,
        "seed": seed,
        "dimension_pairs": [list(p) for p in pairs],
        "worst_bound_margin": res.worst_bound_margin,
        "worst_index": res.worst_index,
        "max_abs_cos_alpha": res.max_abs_cos,
        "n_complex_detected": res.n_complex_detected,
        "n_violations": len(res.violations),
        "n_equality_inconsistent": len(res.inconsistencies),
        "violations": (res.violations + res.inconsistencies)[:20],
        "passed": res.ok,
    }
    return _Result(rec, exit_code=EXIT_OK if res.ok else EXIT_VIOLATION)


def _nijenhuis(cfg: dict, seed: int, tol: float) -> _Result:
    f = build_structure(cfg["structure"], seed)
    if not isinstance(f, StructureField):
        raise ConfigError("nijenhuis needs a structure of kind 'field'")
    if "step" in cfg:
        f = f.with_step(cfg["step"])
    d = f.chart_dim
    eye = np.eye(d)
    if "vectors" in cfg:
        pairs = [(np.asarray(a, float), np.asarray(b, float)) for a, b in cfg["vectors"]]
    else:
        idx = cfg.get("pairs", [[0, 1]])
        if any(i >= d or j >= d for i, j in idx):
            raise ConfigError(f"coordinate index out of range for a {d}-dimensional chart")
        pairs = [(eye[i], eye[j]) for i, j in idx]
    half = f.with_step(f.smoothness_step / 2)
    rows = []
    for x in cfg["points"]:
        x = np.asarray(x, float)
        for X, Y in pairs:
            n1 = float(np.linalg.norm(nijenhuis(f, x, X, Y)))
            n2 = float(np.linalg.norm(nijenhuis(half, x, X, Y)))
            ratio = n2 / n1 if n1 > 0 else None
            rows.append({"point": x.tolist(), "X": X.tolist(), "Y": Y.tolist(), "norm": n1, "norm_half_step": n2, "ratio": ratio})
    rec = {"field": f.name, "step": f.smoothness_step, "rows": rows}
    header = [*(f"x{i + 1}" for i in range(d)), *(f"X{i + 1}" for i in range(d)), *(f"Y{i + 1}" for i in range(d)), "norm", "norm_half_step", "ratio"]
    table = [[*r["point"], *r["X"], *r["Y"], r["norm"], r["norm_half_step"], r["ratio"]] for r in rows]
    return _Result(rec, header, table)


_HANDLERS = {
    "validate-structure": _validate_structure,
    "angle": _angle,
    "scan": _scan,
    "verify": _verify,
    "nijenhuis": _nijenhuis,
}


def _record_csv(rec: dict) -> str:
    flat = {k: (";".join(map(str, v)) if isinstance(v, list) else v) for k, v in rec.items() if not isinstance(v, dict)}
    return to_csv(list(flat), [list(flat.values())])


def _emit(cmd: str, res: _Result, fmt: str | None, output: str | None, out: TextIO, err: TextIO) -> None:
    if cmd == "scan":
        fmt = fmt or "csv"
        if fmt == "csv":
            body = to_csv(res.header, res.rows)
        else:
            body = dumps([dict(zip(res.header, r)) for r in res.rows])
        summary = dumps(res.record)
        if output:
            path = Path(output)
            path.write_text(body, encoding="utf-8", newline="\n")
            path.with_name(path.stem + ".summary.json").write_text(summary, encoding="utf-8", newline="\n")
            out.write(summary)
        else:
            out.write(body)
            err.write(summary)
        return
    fmt = fmt or "json"
    if fmt == "json":
        body = dumps(res.record)
    elif res.header is not None:
        body = to_csv(res.header, res.rows)
    else:
        body = _record_csv(res.record)
    if output:
        Path(output).write_text(body, encoding="utf-8", newline="\n")
    out.write(body)


def run(
    config: dict,
    *,
    output: str | None = None,
    fmt: str | None = None,
    seed: int | None = None,
    tol: float | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    """Execute one job; returns the process exit code."""
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        validate_config(config)
    except jsonschema.ValidationError as exc:
        err.write(f"invalid config: {exc.message}\n")
        return EXIT_INPUT
    cmd = config["command"]
    seed = config.get("seed", 0) if seed is None else seed
    tol = config.get("tol", TOL.classify) if tol is None else tol
    output = output if output is not None else config.get("output")
    fmt = fmt if fmt is not None else config.get("format")
    try:
        res = _HANDLERS[cmd](config, seed, tol)
    except (ConvergenceFailure, _NumericalFailure) as exc:
        err.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_INPUT
    except (WirtingerError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    _emit(cmd, res, fmt, output, out, err)
    return res.exit_code


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wirtinger", description="Kähler angles and Wirtinger's inequality")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON job configuration")
    p.add_argument("--output", help="report path (scan also writes <stem>.summary.json)")
    p.add_argument("--format", choices=("csv", "json"), dest="fmt")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not isinstance(config, dict):
        print("config must be a JSON object", file=sys.stderr)
        return EXIT_INPUT
    config.setdefault("command", args.command)
    if config["command"] != args.command:
        print(f"config is for {config['command']!r}, not {args.command!r}", file=sys.stderr)
        return EXIT_INPUT
    if args.seed is not None and args.seed < 0:
        print("--seed must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    return run(config, output=args.output, fmt=args.fmt, seed=args.seed, tol=args.tol)


if __name__ == "__main__":
    sys.exit(main())
