"""Command-line interface: ``onionpeel generate|peel|detect|eval``.

Exit status is 0 on success, 2 for usage or data errors and 1 for anything
unexpected. Diagnostics go to stderr; results go to files and stdout.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from onionpeel.datagen import GenSpec, load_points, save_points, generate, dumps_points
from onionpeel.detector import DetectionConfig, detect
from onionpeel.errors import OnionPeelError, ParseError
from onionpeel.evaluation import DEFAULT_SCENARIOS, Scenario, run_experiment
from onionpeel.geometry import onion_peel
from onionpeel.svg import scatter_svg

EVAL_DEFAULTS = {
    "n": "1500",
    "mean": "0,0",
    "var": "1,100",
    "contamination": "0.01",
    "radius": "4",
    "k": "15",
    "seeds": "0..9",
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class UsageError(OnionPeelError):
    pass


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}") from None


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {v}")
    return v


def _parse_seeds(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = _u64(a.strip()), _u64(b.strip())
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
        return list(range(lo, hi + 1))
    return [_u64(s.strip()) for s in text.split(",") if s.strip()]


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# ------------------------------------------------------------------ generate


def cmd_generate(args) -> int:
    spec = GenSpec(
        n=args.n,
        mean=args.mean,
        variances=args.var,
        contamination=args.contamination,
        outlier_radius_multiplier=args.radius,
        seed=args.seed,
    )
    ds = generate(spec)
    if args.output in (None, "-"):
        sys.stdout.write(dumps_points(ds, args.format or "csv"))
    else:
        save_points(ds, args.output, args.format)
        print(
            f"wrote {ds.n} points ({len(ds.truth_outlier_ids)} planted outliers, "
            f"contamination {spec.contamination}, seed {spec.seed}) to {args.output}"
        )
    return 0


# ---------------------------------------------------------------------- peel


def _peel_doc(dec) -> dict:
    return {
        "layers": [
            {
                "vertex_ids": list(h.vertex_ids),
                "duplicate_ids": list(h.duplicate_ids),
                "area": h.area,
            }
            for h in dec.layers
        ],
        "residual_ids": list(dec.residual_ids),
    }


def cmd_peel(args) -> int:
    ds = load_points(args.input, args.input_format)
    dec = onion_peel(ds.points)
    fmt = args.format or "json"
    if args.output:
        if fmt == "json":
            text = json.dumps(_peel_doc(dec), indent=2) + "\n"
        else:
            lines = ["layer,area,vertex_ids"]
            lines += [
                f"{i},{h.area!r},{' '.join(map(str, h.member_ids))}" for i, h in enumerate(dec.layers)
            ]
            text = "\n".join(lines) + "\n"
        _write(args.output, text)
    for i, h in enumerate(dec.layers):
        print(f"layer {i}: {len(h.member_ids)} points, area {h.area!r}")
    print(f"residual: {len(dec.residual_ids)} points")
    if args.verify:
        seen = [i for h in dec.layers for i in h.member_ids] + list(dec.residual_ids)
        ok = len(seen) == len(set(seen)) and set(seen) == set(range(ds.n))
        ok = ok and all(a >= b for a, b in zip(dec.areas, dec.areas[1:]))
        print("PASS" if ok else "FAIL")
        if not ok:
            return 1
    if args.svg:
        rings = [h.vertex_ids for h in dec.layers]
        _write(args.svg, scatter_svg(ds.points, rings=rings, title=f"{len(rings)} convex layers"))
    return 0


# -------------------------------------------------------------------- detect


def cmd_detect(args) -> int:
    if args.rings and not args.svg:
        raise UsageError("--rings only makes sense together with --svg")
    ds = load_points(args.input, args.input_format)
    config = DetectionConfig(
        k=args.k,
        metric=args.metric,
        scoring=args.scoring,
        removal=args.removal,
        standardize_first=args.standardize,
    )
    report = detect(ds.points, config)
    fmt = args.format or "json"
    ids_csv = "rank,id,score,volume\n" + "".join(
        f"{r},{i},{s!r},{v!r}\n"
        for r, (i, s, v) in enumerate(zip(report.outlier_ids, report.scores, report.volumes))
    )
    _write(args.output, report.to_json() if fmt == "json" else ids_csv)
    if args.ids_csv:
        _write(args.ids_csv, ids_csv)
    if args.svg:
        rings = []
        if args.rings:
            rings = [h.vertex_ids for h in onion_peel(ds.points).layers[: args.rings]]
        title = f"{config.metric.value}, k={config.k}"
        _write(args.svg, scatter_svg(ds.points, report.outlier_ids, rings, title=title))
    if report.early_termination:
        print(
            f"warning: hull degenerated after {len(report.outlier_ids)} outliers",
            file=sys.stderr,
        )
    return 0


# ---------------------------------------------------------------------- eval


def _bool(text: str, line: int) -> bool:
    t = text.strip().lower()
    if t in _TRUE:
        return True
    if t in _FALSE:
        return False
    raise ParseError(f"expected a boolean, got {text!r}", line)


def parse_eval_config(text: str):
    """Parse the flat ``key = value`` experiment file.

    Global keys: n, mean, var, contamination, radius, k, seeds, workers.
    A line ``scenario <name>`` opens a block whose keys (metric, scoring,
    removal, standardize) describe one detector configuration. Without any
    scenario block the three default scenarios are used.

    Returns:
        (GenSpec, list of Scenario, list of seeds, workers)
    """
    glob = dict(EVAL_DEFAULTS)
    glob["workers"] = "1"
    blocks: list[tuple[str, dict, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.split()[0] == "scenario":
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise ParseError("scenario needs a name", lineno)
            blocks.append((parts[1].strip(), {}, lineno))
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if blocks:
            if key not in {"metric", "scoring", "removal", "standardize"}:
                raise ParseError(f"unknown scenario key {key!r}", lineno)
            blocks[-1][1][key] = (value, lineno)
        else:
            if key not in glob:
                raise ParseError(f"unknown key {key!r}", lineno)
            glob[key] = value

    try:
        spec = GenSpec(
            n=int(glob["n"]),
            mean=_pair(glob["mean"]),
            variances=_pair(glob["var"]),
            contamination=float(glob["contamination"]),
            outlier_radius_multiplier=float(glob["radius"]),
        )
        k = int(glob["k"])
        seeds = _parse_seeds(glob["seeds"])
        workers = int(glob["workers"])
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise ParseError(str(exc)) from None
    if not seeds:
        raise ParseError("no seeds given")

    if not blocks:
        scenarios = [Scenario(s.name, DetectionConfig(k, s.config.metric, s.config.scoring,
                                                      s.config.removal, s.config.standardize_first))
                     for s in DEFAULT_SCENARIOS]
    else:
        scenarios = []
        for name, kv, lineno in blocks:
            opts = {key: val for key, (val, _) in kv.items()}
            std = _bool(kv["standardize"][0], kv["standardize"][1]) if "standardize" in kv else False
            try:
                cfg = DetectionConfig(
                    k=k,
                    metric=opts.get("metric", "euclidean"),
                    scoring=opts.get("scoring", "sum"),
                    removal=opts.get("removal", "point"),
                    standardize_first=std,
                )
            except OnionPeelError as exc:
                raise ParseError(f"scenario {name!r}: {exc}", lineno) from None
            scenarios.append(Scenario(name, cfg))
    return spec, scenarios, seeds, workers


def cmd_eval(args) -> int:
    text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
    spec, scenarios, seeds, workers = parse_eval_config(text)
    if args.seeds is not None:
        seeds = args.seeds
    elif args.runs is not None:
        seeds = list(range(args.seed or 0, (args.seed or 0) + args.runs))
    _, summary = run_experiment(spec, scenarios, seeds, max_workers=workers)
    fmt = args.format or "csv"
    if args.output:
        _write(args.output, summary.to_json() if fmt == "json" else summary.to_csv())
    sys.stdout.write(summary.to_text())
    return 0


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="onionpeel", description="Onion-peeling outlier detection for 2-D data.")
    sub = p.add_subparsers(dest="command", required=True)

    def shared(sp, default_format=None):
        sp.add_argument("--format", choices=("csv", "json"), default=default_format,
                        help="output format")
        sp.add_argument("-o", "--output", help="output path ('-' for stdout)")

    g = sub.add_parser("generate", help="write a synthetic Gaussian dataset")
    shared(g)
    g.add_argument("--n", type=int, default=1500)
    g.add_argument("--mean", type=_pair, default=(0.0, 0.0), help="x,y")
    g.add_argument("--var", type=_pair, default=(1.0, 100.0), help="var_x,var_y")
    g.add_argument("--contamination", type=float, default=0.0,
                   help="fraction of planted outliers, in [0, 1)")
    g.add_argument("--radius", type=float, default=4.0,
                   help="minimum Mahalanobis radius of planted outliers")
    g.add_argument("--seed", type=_u64, default=0)
    g.set_defaults(func=cmd_generate)

    pl = sub.add_parser("peel", help="convex-layer decomposition")
    shared(pl)
    pl.add_argument("input")
    pl.add_argument("--input-format", choices=("csv", "json"))
    pl.add_argument("--svg", help="draw the nested layers")
    pl.add_argument("--verify", action="store_true", help="check the partition and print PASS/FAIL")
    pl.set_defaults(func=cmd_peel)

    d = sub.add_parser("detect", help="top-k outlier detection")
    shared(d)
    d.add_argument("input")
    d.add_argument("--input-format", choices=("csv", "json"))
    d.add_argument("--k", type=int, default=15)
    d.add_argument("--metric", choices=("euclidean", "std-euclidean", "mahalanobis"), default="euclidean")
    d.add_argument("--scoring", choices=("sum", "center"), default="sum")
    d.add_argument("--removal", choices=("point", "hull"), default="point")
    d.add_argument("--standardize", action="store_true", help="scale each axis to unit variance first")
    d.add_argument("--ids-csv", help="also write the ranked ids as CSV")
    d.add_argument("--svg", help="scatter plot with the outliers marked")
    d.add_argument("--rings", type=int, default=0, metavar="N",
                   help="overlay the N outermost convex layers on the plot")
    d.set_defaults(func=cmd_detect)

    e = sub.add_parser("eval", help="scenario x seed experiment")
    shared(e)
    e.add_argument("config", nargs="?", help="key = value experiment file (built-in defaults if omitted)")
    seeds = e.add_mutually_exclusive_group()
    seeds.add_argument("--seeds", type=_parse_seeds, help="'0..9' or '1,5,7'")
    seeds.add_argument("--runs", type=int, help="number of consecutive seeds starting at --seed")
    e.add_argument("--seed", type=_u64, help="first seed when --runs is given")
    e.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "seed", None) is not None and args.command == "eval" and args.runs is None:
        print("onionpeel: error: --seed needs --runs", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (OnionPeelError, OSError) as exc:
        print(f"onionpeel {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"onionpeel {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
