"""Command-line entry point: ``run``, ``generate`` and ``list``.

Exit codes: 0 success, 2 usage or configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import inspect
import json
import sys
from pathlib import Path

from .core import ConfigError, ParseError
from .evaluation import EvalConfig, EvaluationError, holdout_run, prequential_run
from .generators import GENERATOR_DEFAULTS, GENERATORS
from .registry import build_model, build_stream, derive_seed, listing

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3

TOP_LEVEL_KEYS = ("seed", "stream", "models", "evaluator", "output")
EVALUATOR_KEYS = ("type", "max_samples", "batch_size", "sample_frequency", "pretrain_size",
                  "test_size", "test_interval", "window_size")


def _fmt(value) -> str:
    return repr(float(value))


def load_experiment(config_path, timing=True):
    """Parse and build everything a run needs; raises ConfigError on bad input."""
    path = Path(config_path)
    try:
        cfg = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    for key in cfg:
        if key not in TOP_LEVEL_KEYS:
            raise ConfigError(f"unknown key '{key}' at top level")
    for key in ("stream", "models"):
        if key not in cfg:
            raise ConfigError(f"missing key '{key}'")
    seed = cfg.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("'seed' must be an integer")

    stream = build_stream(cfg["stream"], derive_seed(seed, 1))

    entries = cfg["models"]
    if not isinstance(entries, list) or not entries:
        raise ConfigError("'models' must be a non-empty list")
    models = {}
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ConfigError(f"models[{i}] must be an object")
        name = entry.get("name", entry.get("type"))
        if name in models:
            raise ConfigError(f"duplicate model name '{name}'")
        models[name] = build_model(entry, derive_seed(seed, i + 2))

    ev = dict(cfg.get("evaluator", {}))
    for key in ev:
        if key not in EVALUATOR_KEYS:
            raise ConfigError(f"unknown key '{key}' in evaluator")
    kind = ev.pop("type", "prequential")
    if kind not in ("prequential", "holdout"):
        raise ConfigError(f"unknown evaluator type '{kind}'")
    try:
        config = EvalConfig(**ev, timing=timing)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc

    output = Path(cfg.get("output", path.with_suffix(".metrics.csv").name))
    if not output.is_absolute():
        output = path.parent / output
    return stream, models, kind, config, output


def write_trace(records, models, out_path):
    names = list(models)
    metric_names = list(records[0].metrics[names[0]]) if records else []
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["samples_seen", "wall_time_s"]
                        + [f"{n}.{m}" for n in names for m in metric_names])
        for rec in records:
            writer.writerow([rec.samples_seen, _fmt(rec.wall_time_s)]
                            + [_fmt(rec.metrics[n][m]) for n in names for m in metric_names])


def cmd_run(config_path, no_timing=False) -> int:
    try:
        stream, models, kind, config, output = load_experiment(config_path, timing=not no_timing)
    except (ConfigError, ParseError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    run = prequential_run if kind == "prequential" else holdout_run
    try:
        records = run(stream, models, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EvaluationError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:
        seen = getattr(stream, "samples_emitted", "unknown")
        print(f"runtime error: {exc} (samples_seen={seen})", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        output.parent.mkdir(parents=True, exist_ok=True)
        write_trace(records, models, output)
    except OSError as exc:
        print(f"runtime error: cannot write {output}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if records and records[-1].truncated:
        print("warning: final holdout test batch was truncated", file=sys.stderr)
    last = records[-1] if records else None
    summary = [f"records={len(records)}"]
    if last is not None:
        summary.append(f"samples_seen={last.samples_seen}")
        for name, values in last.metrics.items():
            summary.extend(f"{name}.{m}={v:.6f}" for m, v in values.items())
    summary.append(f"output={output}")
    print(" ".join(summary))
    return EXIT_OK


def _parse_param(text):
    if "=" not in text:
        raise ConfigError(f"--param expects key=value, got '{text}'")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def make_generator(name, seed, params):
    if name not in GENERATORS:
        raise ConfigError(f"unknown generator '{name}'")
    params = dict(params)
    cls = GENERATORS[name]
    accepted = inspect.signature(cls.__init__).parameters
    for key in ("seed", "seed_model", "seed_sample"):
        if key in accepted:
            params.setdefault(key, seed)
    params = {**GENERATOR_DEFAULTS.get(name, {}), **params}
    for key in params:
        if key not in accepted:
            raise ConfigError(f"unknown parameter '{key}' for generator '{name}'")
    try:
        return cls(**params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid parameters for generator '{name}': {exc}") from exc


def write_instances(stream, n, out_path):
    schema = stream.schema
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(schema.feature_names) + list(schema.target_names))
        remaining = n
        while remaining > 0:
            batch = stream.next_sample(min(remaining, 1000))
            if not batch:
                break
            for inst in batch:
                writer.writerow([repr(float(v)) for v in inst.features]
                                + [int(t) for t in inst.targets])
            remaining -= len(batch)


def cmd_generate(name, n, seed, out_path, params=()) -> int:
    if n < 0:
        print("config error: --n must be non-negative", file=sys.stderr)
        return EXIT_CONFIG
    try:
        stream = make_generator(name, seed, dict(_parse_param(p) for p in params))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        write_instances(stream, n, out_path)
    except OSError as exc:
        print(f"runtime error: cannot write {out_path}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_list() -> int:
    for section, names in listing():
        print(f"# {section}")
        for name in names:
            print(name)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="streamlearn",
                                     description="Stream learning experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config")
    run.add_argument("--no-timing", action="store_true",
                     help="write 0.0 for wall_time_s so outputs are byte-reproducible")

    gen = sub.add_parser("generate", help="write generator output as CSV")
    gen.add_argument("name")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--out", required=True)
    gen.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")

    sub.add_parser("list", help="list registered components")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config, no_timing=args.no_timing)
    if args.command == "generate":
        return cmd_generate(args.name, args.n, args.seed, args.out, args.param)
    return cmd_list()


if __name__ == "__main__":
    sys.exit(main())
