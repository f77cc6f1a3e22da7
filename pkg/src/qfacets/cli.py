"""Command-line front end.

Subcommands: ``eval``, ``sweep``, ``figure``, ``table1``, ``witness``.
Exit codes: 0 success, 2 usage or domain error, 3 singular point, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .analysis import CSV_FIELDS, SweepConfig, figure_series, run_sweep, table1, witness_consistency
from .channels import ChannelPoint, NmdParams, RtnParams, apply_channel
from .errors import QFacetsError, SingularityError
from .infomeasures import avg_gate_fidelity, holevo_dephased_closed, holevo_nmd_closed
from .qfi import qfi_flow_nmd, qfi_flow_rtn, qfi_phi_closed, qfi_theta_closed
from .qstate import beta_balance, coherence_l1, mixedness, pure_qubit

EXIT_OK, EXIT_USAGE, EXIT_SINGULAR, EXIT_IO = 0, 2, 3, 4
SCHEMA = 1

FACETS = (
    "lambda", "omega", "rate", "coherence", "mixedness", "beta", "qfi-theta", "qfi-phi",
    "flow-theta", "flow-phi", "gate-fidelity", "holevo",
)

_ANGLE_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?$")


class UsageError(Exception):
    pass


def parse_angle(text) -> float:
    """Float, or a multiple of pi such as ``pi/4``, ``3pi/4``, ``0.5*pi``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower().replace("π", "pi")
    m = _ANGLE_RE.match(s)
    if m:
        k = m.group(1)
        k = 1.0 if k in ("", "+") else -1.0 if k == "-" else float(k)
        d = float(m.group(2)) if m.group(2) else 1.0
        return k * math.pi / d
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def fmt(x, precision: int) -> str:
    if x is None:
        return "SINGULAR"
    if isinstance(x, str):
        return x
    x = float(x)
    if x == 0.0:
        x = 0.0  # drops the sign of -0.0
    return format(x, f".{precision}g")


def _json_num(x, precision: int):
    if x is None:
        return "SINGULAR"
    if isinstance(x, str):
        return x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(format(x, f".{precision}g")) + 0.0


# ------------------------------------------------------------ parser

_FLOAT_FLAGS = ("a", "gamma", "alpha", "t", "p", "start", "stop")
_ANGLE_FLAGS = ("theta", "phi")
_INT_FLAGS = ("steps", "precision", "threads", "theta_steps")
_DEFAULTS = {"theta": math.pi / 4, "phi": 0.0, "format": "csv", "precision": 12, "threads": 1, "steps": analysis.DEFAULT_STEPS}


def _add_common(p, formats=("csv", "json", "svg")):
    p.add_argument("--theta", type=parse_angle, default=None, help="polar angle of the initial state (accepts pi/4 etc.)")
    p.add_argument("--phi", type=parse_angle, default=None)
    p.add_argument("--format", choices=formats, default=None)
    p.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")
    p.add_argument("--precision", type=int, default=None, help="significant digits, 6..17 (default 12)")
    p.add_argument("--config", default=None, help="key=value file supplying any flag")
    p.add_argument("--threads", type=int, default=None)


def _add_channel(p):
    p.add_argument("channel", choices=("rtn", "nmd"), type=str.lower)
    p.add_argument("--a", type=float, default=None, help="RTN coupling strength")
    p.add_argument("--gamma", type=float, default=None, help="RTN fluctuation rate")
    p.add_argument("--alpha", type=float, default=None, help="NMD memory parameter in [0, 1]")


def _add_range(p):
    p.add_argument("--start", type=float, default=None)
    p.add_argument("--stop", type=float, default=None)
    p.add_argument("--steps", type=int, default=None, help="number of grid points (default 2000)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfacets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one facet at one point")
    _add_channel(p)
    _add_common(p)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--facet", choices=FACETS, default=None)

    p = sub.add_parser("sweep", help="every facet along t (RTN) or p (NMD)")
    _add_channel(p)
    _add_common(p)
    _add_range(p)
    p.add_argument("--plot", action="store_true", help="also render an SVG next to the data file")

    p = sub.add_parser("figure", help="datasets for figures 1-7, one file per panel")
    p.add_argument("figure_id", type=int)
    _add_common(p)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--plot", action="store_true", help="also render an SVG next to each data file")

    p = sub.add_parser("table1", help="closed-form table entries next to brute-force values")
    _add_channel(p)
    _add_common(p, formats=("csv", "json"))
    _add_range(p)
    p.add_argument("--theta-steps", type=int, default=None, help="grid theta over [0, pi] instead of a single --theta")

    p = sub.add_parser("witness", help="compare QFI-flow and decoherence-rate witnesses (JSON)")
    _add_channel(p)
    _add_common(p, formats=("json",))
    _add_range(p)
    return parser


def read_config(path) -> dict:
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.lstrip("-").replace("-", "_")] = v
    return out


def _merge_config(args):
    if args.config:
        try:
            cfg = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        for k, v in cfg.items():
            if not hasattr(args, k) or k in ("command", "config"):
                raise UsageError(f"unknown config key {k!r}")
            if getattr(args, k) is not None and getattr(args, k) is not False:
                continue  # command line wins
            try:
                if k in _FLOAT_FLAGS:
                    v = float(v)
                elif k in _ANGLE_FLAGS:
                    v = parse_angle(v)
                elif k in _INT_FLAGS or k == "figure_id":
                    v = int(v)
                elif k == "plot":
                    v = v.lower() in ("1", "true", "yes", "on")
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"bad config value for {k}: {v!r}") from exc
            setattr(args, k, v)
    for k, v in _DEFAULTS.items():
        if getattr(args, k, "absent") is None:
            setattr(args, k, v)
    if not 6 <= args.precision <= 17:
        raise UsageError("--precision must lie in [6, 17]")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")


def _params(args):
    if args.channel == "rtn":
        if args.a is None or args.gamma is None:
            raise UsageError("rtn needs --a and --gamma")
        return RtnParams(args.a, args.gamma)
    if args.alpha is None:
        raise UsageError("nmd needs --alpha")
    return NmdParams(args.alpha)


def _sweep_config(args, params) -> SweepConfig:
    if args.channel == "rtn":
        default_stop = 100.0 if 2 * params.a > params.gamma else 10.0
    else:
        default_stop = 0.5
    start = 0.0 if args.start is None else args.start
    stop = default_stop if args.stop is None else args.stop
    return SweepConfig(args.channel.upper(), params, args.theta, args.phi, start, stop, args.steps)


# ------------------------------------------------------------ output


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return open(p, "w", newline=""), True


def _write_text(text: str, path) -> None:
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA}\n")
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False, allow_nan=False) + "\n"


# ------------------------------------------------------------ commands


def cmd_eval(args) -> int:
    params = _params(args)
    rtn = args.channel == "rtn"
    x = args.t if rtn else args.p
    if x is None:
        raise UsageError(f"{args.channel} eval needs --{'t' if rtn else 'p'}")
    if args.facet is None:
        raise UsageError("--facet is required")
    facet = args.facet
    if (facet == "lambda" and not rtn) or (facet == "omega" and rtn):
        raise UsageError(f"facet {facet!r} does not apply to {args.channel}")
    point = ChannelPoint.rtn(params, x) if rtn else ChannelPoint.nmd(params, x)
    f, th = point.factor, args.theta
    if facet in ("lambda", "omega"):
        val = f
    elif facet == "rate":
        val = point.decoherence_rate()
    elif facet in ("coherence", "mixedness", "beta"):
        rho = apply_channel(point.kraus(), pure_qubit(th, args.phi))
        val = {"coherence": coherence_l1, "mixedness": mixedness, "beta": beta_balance}[facet](rho)
    elif facet == "qfi-theta":
        val = qfi_theta_closed(f, th)
    elif facet == "qfi-phi":
        val = qfi_phi_closed(f, th)
    elif facet in ("flow-theta", "flow-phi"):
        flows = qfi_flow_rtn(params, x, th) if rtn else qfi_flow_nmd(params, x, th)
        val = flows.flow_theta if facet == "flow-theta" else flows.flow_phi
    elif facet == "gate-fidelity":
        val = avg_gate_fidelity(point.kraus())
    else:
        val = holevo_dephased_closed(f, th) if rtn else holevo_nmd_closed(params, x)
    _write_text(fmt(val, args.precision) + "\n", args.out)
    return EXIT_OK


def _sweep_rows(records, precision):
    rows = []
    for r in records:
        d = r.as_dict()
        rows.append([fmt(d[k], precision) for k in CSV_FIELDS])
    return rows


def cmd_sweep(args) -> int:
    params = _params(args)
    config = _sweep_config(args, params)
    records = run_sweep(config, threads=args.threads)
    prec = args.precision
    if args.format == "svg":
        from .plotting import render_sweep

        if args.out in (None, "-"):
            raise UsageError("svg output needs --out PATH")
        render_sweep(records, ["factor", "coherence", "flow_phi", "rate"], args.out, "t" if args.channel == "rtn" else "p")
        return EXIT_OK
    if args.format == "json":
        text = _json_text({
            "schema": SCHEMA,
            "fields": list(CSV_FIELDS),
            "records": [{k: _json_num(v, prec) for k, v in r.as_dict().items()} for r in records],
        })
    else:
        text = _csv_text(CSV_FIELDS, _sweep_rows(records, prec))
    _write_text(text, args.out)
    if args.plot and args.out not in (None, "-"):
        from .plotting import render_sweep

        render_sweep(records, ["factor", "coherence", "flow_phi", "rate"], Path(args.out).with_suffix(".svg"),
                     "t" if args.channel == "rtn" else "p")
    return EXIT_OK


def _panel_csv(panel, prec) -> str:
    comments = [f"figure={panel.figure} panel={panel.panel} title={panel.title}",
                f"xlabel={panel.xlabel} ylabel={panel.ylabel}"]
    for c in panel.curves:
        ps = " ".join(f"{k}={fmt(v, prec)}" for k, v in c.params.items())
        comments.append(f"curve={c.label} scale={fmt(c.scale, prec)} {ps}")
    for k, v in panel.metadata.items():
        comments.append(f"{k}={json.dumps(v, sort_keys=True)}")
    rows = [[c.label, fmt(x, prec), fmt(y, prec)] for c in panel.curves for x, y in zip(c.x, c.y)]
    return _csv_text(["curve", "abscissa", "value"], rows, comments)


def _panel_json(panel, prec) -> str:
    return _json_text({
        "schema": SCHEMA,
        "figure": panel.figure,
        "panel": panel.panel,
        "title": panel.title,
        "xlabel": panel.xlabel,
        "ylabel": panel.ylabel,
        "metadata": panel.metadata,
        "curves": [
            {
                "label": c.label,
                "scale": c.scale,
                "params": {k: _json_num(v, prec) for k, v in c.params.items()},
                "x": [_json_num(v, prec) for v in c.x],
                "y": [_json_num(v, prec) for v in c.y],
            }
            for c in panel.curves
        ],
    })


def cmd_figure(args) -> int:
    if args.figure_id not in range(1, 8):
        raise UsageError(f"unknown figure id {args.figure_id}; expected 1..7")
    panels = figure_series(args.figure_id, steps=args.steps)
    outdir = Path("." if args.out in (None, "-") else args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    from .plotting import render_panel

    for panel in panels:
        base = outdir / panel.name
        if args.format == "svg":
            render_panel(panel, base.with_suffix(".svg"))
            print(base.with_suffix(".svg"))
            continue
        text = _panel_csv(panel, args.precision) if args.format == "csv" else _panel_json(panel, args.precision)
        path = base.with_suffix("." + args.format)
        _write_text(text, path)
        print(path)
        if args.plot:
            render_panel(panel, base.with_suffix(".svg"))
            print(base.with_suffix(".svg"))
    return EXIT_OK


def cmd_table1(args) -> int:
    params = _params(args)
    config = _sweep_config(args, params)
    xs = np.linspace(config.start, config.stop, config.steps)
    thetas = [args.theta] if not args.theta_steps else list(np.linspace(0.0, math.pi, args.theta_steps))
    rows = table1(args.channel, params, xs, thetas)
    prec = args.precision
    facets = analysis.TABLE1_FACETS
    if args.format == "json":
        text = _json_text({
            "schema": SCHEMA,
            "channel": args.channel.upper(),
            "max_abs_diff": _json_num(max(r.max_diff for r in rows), prec),
            "rows": [
                {
                    "abscissa": _json_num(r.abscissa, prec),
                    "theta": _json_num(r.theta, prec),
                    "factor": _json_num(r.factor, prec),
                    **{f"{k}_closed": _json_num(r.closed[k], prec) for k in facets},
                    **{f"{k}_oracle": _json_num(r.oracle[k], prec) for k in facets},
                    **{f"{k}_absdiff": _json_num(r.diff(k), prec) for k in facets},
                }
                for r in rows
            ],
        })
    else:
        header = ["abscissa", "theta", "factor"] + [f"{k}_{s}" for k in facets for s in ("closed", "oracle", "absdiff")]
        body = [
            [fmt(r.abscissa, prec), fmt(r.theta, prec), fmt(r.factor, prec)]
            + [fmt(v, prec) for k in facets for v in (r.closed[k], r.oracle[k], r.diff(k))]
            for r in rows
        ]
        text = _csv_text(header, body, [f"channel={args.channel.upper()} max_abs_diff={fmt(max(r.max_diff for r in rows), 3)}"])
    _write_text(text, args.out)
    return EXIT_OK


def cmd_witness(args) -> int:
    params = _params(args)
    config = _sweep_config(args, params)
    report = witness_consistency(run_sweep(config, threads=args.threads))
    prec = args.precision
    d = report.to_dict()

    def clean(v):
        if isinstance(v, list):
            return [clean(u) for u in v]
        if isinstance(v, (bool, str, int)):
            return v
        return _json_num(v, prec)

    out = {"schema": SCHEMA, "channel": args.channel.upper(), **{k: clean(v) for k, v in d.items()}}
    _write_text(_json_text(out), args.out)
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "sweep": cmd_sweep, "figure": cmd_figure, "table1": cmd_table1, "witness": cmd_witness}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qfacets: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularityError as exc:
        print(f"qfacets: singular: {exc} (location={exc.location:.12g})", file=sys.stderr)
        return EXIT_SINGULAR
    except QFacetsError as exc:
        print(f"qfacets: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qfacets: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
