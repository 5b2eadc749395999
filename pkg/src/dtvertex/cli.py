"""Command-line entry point.

Exit status: 0 when every check passes, 1 when a verification fails (the
failures are itemized in the report), 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from .classes import COHOMOLOGICAL, K_THEORETIC
from .geometry import ELLIPTIC, Insertion, InvalidGeometry, build_geometry, dt_invariant, dt_series
from .partitions import CurvePartition, PlanePartition, enumerate_curve, enumerate_plane, enumerate_solid, iter_plane, iter_solid
from .verify import (
    verify_chi,
    verify_curve_signs,
    verify_edge_signs,
    verify_sign_patching,
    verify_vertex_signs,
)

REPORT_VERSION = 1
PARALLEL_ENV = "DTVERTEX_PARALLEL"

# per-command defaults; also the set of keys a --config file may set
DEFAULTS = {
    "enumerate": {"kind": "solid", "n": 1, "legs": None, "kmax": 0, "count_only": False},
    "vertex-signs": {"max_size": 4},
    "edge-signs": {"max_size": 3, "m_set": None},
    "curve-signs": {"legs_budget": 2, "extra_budget": 1},
    "chi": {"samples": 100, "seed": 0, "d_max": 2, "n_max": 3, "m_set": None},
    "sign-patching": {"n_max": 2, "d_max": 1},
    "dt": {"geometry": "C4", "n": 1, "d": None, "insertion": "unit", "mode": COHOMOLOGICAL, "order": 0,
           "vertex_axes": None, "edge_axes": None, "log": False},
    "dt-series": {"geometry": "C4", "n_max": 3, "d": None, "insertion": "unit", "mode": COHOMOLOGICAL, "order": 0},
}
COMMON = {"format": "json", "output": None, "parallel": None, "timing": False}
NONNEGATIVE = {"n", "kmax", "max_size", "legs_budget", "extra_budget", "samples", "d_max", "n_max", "order"}


class ConfigError(ValueError):
    pass


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--parallel", type=int, help=f"worker processes (default ${PARALLEL_ENV} or 1)")
    p.add_argument("--config", help="JSON file of option values; unknown keys are rejected")
    p.add_argument("--timing", action="store_true", default=None, help="add wall time to the report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dtvertex", description="DT invariants of toric CY4 folds by the vertex formalism")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list or count partitions")
    p.add_argument("--kind", choices=("solid", "plane", "curve"))
    p.add_argument("--n", type=int)
    p.add_argument("--legs", help="JSON file with the four leg plane partitions")
    p.add_argument("--kmax", type=int)
    p.add_argument("--count-only", action="store_true", default=None)
    _add_common(p)

    pv = sub.add_parser("verify", help="verification sweeps")
    vs = pv.add_subparsers(dest="check", required=True)
    p = vs.add_parser("vertex-signs")
    p.add_argument("--max-size", type=int)
    _add_common(p)
    p = vs.add_parser("edge-signs")
    p.add_argument("--max-size", type=int)
    p.add_argument("--m-set", help="JSON file: list of [m2, m3, m4]")
    _add_common(p)
    p = vs.add_parser("curve-signs")
    p.add_argument("--legs-budget", type=int)
    p.add_argument("--extra-budget", type=int)
    _add_common(p)
    p = vs.add_parser("chi")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--d-max", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--m-set")
    _add_common(p)
    p = vs.add_parser("sign-patching")
    p.add_argument("--n-max", type=int)
    p.add_argument("--d-max", type=int)
    _add_common(p)

    for name in ("dt", "dt-series"):
        p = sub.add_parser(name, help="localized DT invariant" + (" series" if name == "dt-series" else ""))
        p.add_argument("--geometry", help="C4, KP3, or a geometry JSON file")
        if name == "dt":
            p.add_argument("--n", type=int)
            p.add_argument("--vertex-axes", help="comma-separated square-root axis per vertex")
            p.add_argument("--edge-axes", help="comma-separated square-root axis (2..4) per edge")
            p.add_argument("--log", action="store_true", default=None, help="include per-fixed-point terms")
        else:
            p.add_argument("--n-max", type=int)
        p.add_argument("--d", help="comma-separated curve degree per edge")
        p.add_argument("--insertion", choices=("unit", "mass"))
        p.add_argument("--mode", choices=(COHOMOLOGICAL, K_THEORETIC, ELLIPTIC))
        p.add_argument("--order", type=int, help="p-truncation order for the elliptic mode")
        _add_common(p)
    return ap


def resolve(args: argparse.Namespace) -> dict:
    """Merge command line, --config file and defaults into one strict config."""
    key = args.check if args.command == "verify" else args.command
    allowed = {**DEFAULTS[key], **COMMON}
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = sorted(set(data) - set(allowed))
        if unknown:
            raise ConfigError(f"unknown config fields {unknown}")
        cfg.update(data)
    for k in allowed:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    out = {k: cfg.get(k, d) for k, d in allowed.items()}
    if out["parallel"] is None:
        env = os.environ.get(PARALLEL_ENV, "1")
        try:
            out["parallel"] = int(env)
        except ValueError:
            raise ConfigError(f"${PARALLEL_ENV} must be an integer, got {env!r}") from None
    if out["parallel"] < 1:
        raise ConfigError("--parallel must be at least 1")
    if out["format"] not in ("json", "csv"):
        raise ConfigError(f"unknown format {out['format']!r}")
    for k in NONNEGATIVE & set(out):
        if not isinstance(out[k], int) or out[k] < 0:
            raise ConfigError(f"{k} must be a nonnegative integer")
    out["command"] = args.command if args.command != "verify" else f"verify {args.check}"
    return out


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read {path}: {e}") from None


def _int_list(s):
    if s is None:
        return None
    if isinstance(s, (list, tuple)):
        return [int(x) for x in s]
    if isinstance(s, int):
        return [s]
    try:
        return [int(x) for x in str(s).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {s!r}") from None


def _geometry(spec):
    if isinstance(spec, dict):
        return build_geometry(spec)
    if spec in ("C4", "KP3"):
        return build_geometry(spec)
    return build_geometry(_load_json(spec))


def _m_set(path):
    if path is None:
        return None
    data = path if isinstance(path, list) else _load_json(path)
    try:
        ms = [tuple(int(x) for x in m) for m in data]
    except (TypeError, ValueError):
        raise ConfigError("m-set must be a list of integer triples") from None
    if any(len(m) != 3 or sum(m) != -2 for m in ms):
        raise ConfigError("every m in the m-set must be three integers summing to -2")
    return ms


def run_enumerate(cfg: dict) -> dict:
    kind, n = cfg["kind"], cfg["n"]
    if kind == "curve":
        if not cfg["legs"]:
            raise ConfigError("--kind curve needs --legs")
        data = cfg["legs"] if isinstance(cfg["legs"], list) else _load_json(cfg["legs"])
        try:
            legs = [PlanePartition.from_json(l) for l in data]
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad legs: {e}") from None
        if len(legs) != 4:
            raise ConfigError("--legs must hold four plane partitions")
        if cfg["count_only"]:
            return {"kind": kind, "count": len(enumerate_curve(legs, cfg["kmax"]))}
        items = [p.to_json() for p in enumerate_curve(legs, cfg["kmax"])]
    elif cfg["count_only"]:
        it = iter_solid(n) if kind == "solid" else iter_plane(n)
        return {"kind": kind, "n": n, "count": sum(1 for _ in it)}
    else:
        items = [p.to_json() for p in (enumerate_solid(n) if kind == "solid" else enumerate_plane(n))]
    return {"kind": kind, "count": len(items), "partitions": items}


def run_verify(cfg: dict) -> dict:
    w = cfg["parallel"]
    check = cfg["command"].split()[1]
    if check == "vertex-signs":
        return verify_vertex_signs(cfg["max_size"], workers=w)
    if check == "edge-signs":
        return verify_edge_signs(cfg["max_size"], _m_set(cfg["m_set"]), workers=w)
    if check == "curve-signs":
        return verify_curve_signs(cfg["legs_budget"], cfg["extra_budget"], workers=w)
    if check == "chi":
        return verify_chi(cfg["samples"], cfg["seed"], cfg["d_max"], cfg["n_max"], _m_set(cfg["m_set"]))
    return verify_sign_patching(cfg["n_max"], cfg["d_max"])


def _insertion(cfg) -> Insertion:
    try:
        return Insertion(cfg["insertion"], cfg["mode"], cfg["order"])
    except ValueError as e:
        raise ConfigError(str(e)) from None


def run_dt(cfg: dict) -> dict:
    g = _geometry(cfg["geometry"])
    d = _int_list(cfg["d"])
    r = dt_invariant(g, cfg["n"], d, _insertion(cfg), _int_list(cfg["vertex_axes"]), _int_list(cfg["edge_axes"]),
                     workers=cfg["parallel"], log=bool(cfg["log"]))
    return {"geometry": g.name, **r.to_json()}


def run_dt_series(cfg: dict) -> dict:
    g = _geometry(cfg["geometry"])
    rs = dt_series(g, _insertion(cfg), cfg["n_max"], _int_list(cfg["d"]), workers=cfg["parallel"])
    return {"geometry": g.name, "results": [r.to_json() for r in rs]}


def _csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in report.items():
        w.writerow([k, v if isinstance(v, (int, str)) else json.dumps(v, sort_keys=True, separators=(",", ":"))])
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        return _csv(report)
    return json.dumps(report, indent=1, sort_keys=True) + "\n"


def run(cfg: dict) -> tuple[int, dict]:
    t0 = time.perf_counter()
    cmd = cfg["command"]
    if cmd == "enumerate":
        body = run_enumerate(cfg)
    elif cmd.startswith("verify"):
        body = run_verify(cfg)
    elif cmd == "dt":
        body = run_dt(cfg)
    else:
        body = run_dt_series(cfg)
    config = {k: v for k, v in cfg.items() if k not in ("command", "output", "parallel", "timing")}
    report = {"report_version": REPORT_VERSION, "command": cmd, "config": config, "ordering": "lexicographic", **body}
    if cfg["timing"]:
        report["wall_time_s"] = round(time.perf_counter() - t0, 3)
    status = 1 if body.get("failures") else 0
    return status, report


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        t0 = time.perf_counter()
        status, report = run(cfg)
    except (ConfigError, InvalidGeometry, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if cfg["command"] == "enumerate" and cfg["count_only"]:
        text = f"{report['count']}\n"
    else:
        text = render(report, cfg["format"])
    if cfg["output"]:
        with open(cfg["output"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{cfg['command']}: status {status}, {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
