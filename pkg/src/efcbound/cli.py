"""Command-line front end.

    efcbound run <config.yaml> [--out DIR] [--csv] [--summary]
                 [--sweep PARAM=V1,V2,...]

Exit codes: 0 when every enabled bound family passed, 1 when any check was
violated, 2 on configuration or runtime errors.
"""

from __future__ import annotations

import argparse
import copy
import sys
from pathlib import Path

import yaml

from .harness import ExperimentConfig, emit_csv, run, summarize


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efcbound",
        description=(
            "Coarse-grid conservation-law solver with interpolant accuracy "
            "bounds checked against a fine-grid reference run."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one experiment (or a sweep) from a YAML config")
    p_run.add_argument("config", help="path to the YAML experiment config")
    p_run.add_argument("--out", help="directory for output files (created if needed)")
    p_run.add_argument("--csv", action="store_true", help="write the per-subnode CSV report")
    p_run.add_argument("--summary", action="store_true", help="write the summary text file")
    p_run.add_argument(
        "--sweep",
        metavar="PARAM=V1,V2,...",
        help="repeat the run for each value of PARAM (dotted paths reach nested keys)",
    )
    return parser


def _set_path(raw: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = raw
    for key in keys[:-1]:
        if not isinstance(node.get(key), dict):
            raise ValueError(f"sweep parameter {dotted!r} does not name a config entry")
        node = node[key]
    if keys[-1] not in node:
        raise ValueError(f"sweep parameter {dotted!r} does not name a config entry")
    node[keys[-1]] = value


def _expand_sweep(raw: dict, sweep: str | None) -> list[tuple[str, dict]]:
    if sweep is None:
        return [("", raw)]
    if "=" not in sweep:
        raise ValueError(f"--sweep expects PARAM=V1,V2,..., got {sweep!r}")
    param, _, values = sweep.partition("=")
    param = param.strip()
    variants = []
    for text in values.split(","):
        text = text.strip()
        if not text:
            raise ValueError(f"--sweep has an empty value in {values!r}")
        variant = copy.deepcopy(raw)
        _set_path(variant, param, yaml.safe_load(text))
        variants.append((f"{param}={text}", variant))
    if not variants:
        raise ValueError("--sweep needs at least one value")
    return variants


def _output_path(configured, default_name: str, out_dir: Path | None, label: str) -> Path:
    path = Path(configured) if configured else Path(default_name)
    if label:
        safe = label.replace("=", "_").replace(",", "_").replace("/", "_").replace(".", "p")
        path = path.with_name(f"{path.stem}__{safe}{path.suffix}")
    if out_dir is not None:
        path = out_dir / path.name
    return path


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
        variants = _expand_sweep(raw, args.sweep)
        out_dir = Path(args.out) if args.out else None
        if out_dir is not None:
            out_dir.mkdir(parents=True, exist_ok=True)
        all_ok = True
        for label, raw_cfg in variants:
            config = ExperimentConfig.from_dict(raw_cfg)
            report, counters = run(config)
            if label:
                print(f"=== {label} ===")
            print(summarize(report, counters), end="")
            if args.csv or config.outputs.get("csv"):
                csv_path = _output_path(config.outputs.get("csv"), "report.csv", out_dir, label)
                emit_csv(report, csv_path)
                print(f"csv written: {csv_path}")
            if args.summary or config.outputs.get("summary"):
                summary_path = _output_path(
                    config.outputs.get("summary"), "summary.txt", out_dir, label
                )
                with open(summary_path, "w", encoding="utf-8") as fh:
                    fh.write(summarize(report, counters))
                print(f"summary written: {summary_path}")
            if not report.all_ok(config.checks):
                all_ok = False
    except Exception as exc:  # config or runtime failure, distinct from bound violations
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if all_ok else 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
