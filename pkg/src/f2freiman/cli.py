"""Command line interface: generators, analysis, the pipeline, sweeps.

Exit codes: 0 success, 2 certificate violation (a defect signal from the
machinery, never an input problem), 1 usage or input errors.  Every command
is byte-deterministic for a fixed seed; wall-times appear only behind
--with-times because they would break that guarantee.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .core import DEFAULT_DENSE_LIMIT
from .errors import F2Error, InvariantViolationError
from .generators import gen_extremal, gen_random, gen_subspace
from .pipeline import PipelineReport, analyze_set, run_batch, run_pipeline
from .selfcheck import selftest
from .setfile import format_set, read_set

__all__ = ["entry", "main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this artifact reserves 2 for
    certificate violations, so usage errors exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_range(text: str) -> list[int]:
    """'3' -> [3]; '2:5' -> [2, 3, 4, 5]; '5:4' -> [] (empty range)."""
    parts = text.split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"bad range {text!r}; use N or LO:HI") from None
    if len(nums) == 1:
        return nums
    if len(nums) == 2:
        return list(range(nums[0], nums[1] + 1))
    raise ValueError(f"bad range {text!r}; use N or LO:HI")


def _write_text(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


SWEEP_COLUMNS = [
    "family",
    "d",
    "k",
    "n",
    "size_param",
    "seed",
    "a_size",
    "doubling_k",
    "rank",
    "model_dim",
    "identity_on_span",
    "codim",
    "bound_budget",
    "pullback_size",
    "cover_overhead",
    "cover_rounds",
    "final_coset_size",
    "final_ratio",
    "min_coset_size",
    "ratio_vs_minimal",
    "fit_model_exp",
    "fit_cover_c",
    "fit_theorem_c",
]
TIME_COLUMNS = ["t_model", "t_structure", "t_pullback", "t_cover"]


def _fit_str(v) -> str:
    return "" if v is None else repr(v)


def _report_row(
    report: PipelineReport,
    family: str = "",
    d: int | None = None,
    k: int | None = None,
    n: int | None = None,
    size_param: int | None = None,
    seed: int | None = None,
    with_times: bool = False,
) -> dict:
    j = report.to_json_dict()
    row = {
        "family": family,
        "d": "" if d is None else d,
        "k": "" if k is None else k,
        "n": "" if n is None else n,
        "size_param": "" if size_param is None else size_param,
        "seed": "" if seed is None else seed,
        "a_size": report.a.size,
        "doubling_k": j["doubling_k"],
        "rank": report.model.a_span.dim,
        "model_dim": report.model.model_dim,
        "identity_on_span": report.model.identity_on_span,
        "codim": report.structure.codim,
        "bound_budget": report.structure.bound_budget,
        "pullback_size": report.pullback.size,
        "cover_overhead": report.cover.overhead_dim,
        "cover_rounds": ";".join(str(s) for s in report.cover.round_sizes),
        "final_coset_size": report.final_coset.size,
        "final_ratio": j["final"]["ratio"],
        "min_coset_size": report.min_coset.size,
        "ratio_vs_minimal": j["final"]["ratio_vs_minimal"],
        "fit_model_exp": _fit_str(report.fits["fit_model_exp"]),
        "fit_cover_c": _fit_str(report.fits["fit_cover_c"]),
        "fit_theorem_c": _fit_str(report.fits["fit_theorem_c"]),
    }
    if with_times:
        for col, stage in zip(TIME_COLUMNS, ("model", "structure", "pullback", "cover")):
            row[col] = repr(report.stage_seconds.get(stage, 0.0))
    return row


def _rows_to_csv(rows: list[dict], with_times: bool) -> str:
    columns = SWEEP_COLUMNS + (TIME_COLUMNS if with_times else [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _cmd_gen(args) -> int:
    if args.family == "extremal":
        if args.d is None or args.k is None:
            raise ValueError("extremal family needs --d and --k")
        a = gen_extremal(args.d, args.k, args.n)
    elif args.family == "random":
        if args.n is None or args.size is None:
            raise ValueError("random family needs --n and --size")
        a = gen_random(args.n, args.size, args.seed)
    else:
        if args.d is None:
            raise ValueError("subspace family needs --d")
        n = args.n if args.n is not None else max(args.d, 1)
        a = gen_subspace(args.d, n)
    _write_text(args.out, format_set(a))
    return 0


def _cmd_analyze(args) -> int:
    a = read_set(args.infile)
    report = analyze_set(a, dense_limit=args.dense_limit)
    if args.format == "csv":
        flat = dict(report)
        spectrum = flat.pop("spectrum") or {}
        for key, value in spectrum.items():
            flat[f"spectrum_{key}"] = value
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
        writer.writeheader()
        writer.writerow(flat)
        _write_text(args.out, buf.getvalue())
    else:
        _write_text(args.out, _json_text(report))
    return 0


def _cmd_pipeline(args) -> int:
    a = read_set(args.infile)
    report = run_pipeline(a, seed=args.seed, dense_limit=args.dense_limit)
    if args.trace:
        j = report.to_json_dict(include_times=args.with_times)
        lines = []
        for stage in ("model", "structure", "pullback", "cover"):
            entry_obj = {"stage": stage, "data": j[stage]}
            if args.with_times:
                entry_obj["seconds"] = report.stage_seconds.get(stage)
            lines.append(json.dumps(entry_obj))
        _write_text(args.trace, "\n".join(lines) + "\n")
    if args.format == "csv":
        row = _report_row(report, seed=args.seed, with_times=args.with_times)
        _write_text(args.out, _rows_to_csv([row], args.with_times))
    else:
        _write_text(args.out, _json_text(report.to_json_dict(include_times=args.with_times)))
    return 0


def _sweep_instances(args) -> tuple[list, list[int], list[dict]]:
    """Instances, per-instance pipeline seeds and row stubs, in index order."""
    sets, seeds, stubs = [], [], []

    def add(a, **stub):
        index = len(sets)
        derived = args.seed * 1_000_003 + index
        sets.append(a)
        seeds.append(derived)
        stubs.append({"seed": derived, **stub})

    if args.family == "extremal":
        if args.d is None or args.k is None:
            raise ValueError("extremal sweep needs --d and --k ranges")
        for d in _parse_range(args.d):
            for k in _parse_range(args.k):
                n = int(args.n) if args.n else None
                add(gen_extremal(d, k, n), family="extremal", d=d, k=k, n=n)
    elif args.family == "random":
        if args.n is None or args.size is None:
            raise ValueError("random sweep needs --n and --size ranges")
        for n in _parse_range(args.n):
            for size in _parse_range(args.size):
                for _ in range(args.count):
                    gen_seed = args.seed * 1_000_003 + len(sets)
                    add(
                        gen_random(n, size, gen_seed),
                        family="random",
                        n=n,
                        size_param=size,
                    )
    else:
        if args.d is None:
            raise ValueError("subspace sweep needs a --d range")
        for d in _parse_range(args.d):
            n = int(args.n) if args.n else max(d, 1)
            add(gen_subspace(d, n), family="subspace", d=d, n=n)
    return sets, seeds, stubs


def _cmd_sweep(args) -> int:
    sets, seeds, stubs = _sweep_instances(args)
    reports = run_batch(sets, seeds, dense_limit=args.dense_limit, max_workers=args.workers)
    rows = [
        _report_row(report, with_times=args.with_times, **stub)
        for report, stub in zip(reports, stubs)
    ]
    if args.format == "json":
        _write_text(args.out, _json_text(rows))
    else:
        _write_text(args.out, _rows_to_csv(rows, args.with_times))
    return 0


def _cmd_selftest(_args) -> int:
    ok = selftest(write=print)
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="f2freiman", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_gen = sub.add_parser("gen", help="write an instance as a set file")
    p_gen.add_argument("--family", required=True, choices=["extremal", "random", "subspace"])
    p_gen.add_argument("--d", type=int, help="subspace dimension (extremal/subspace)")
    p_gen.add_argument("--k", type=int, help="coset count (extremal)")
    p_gen.add_argument("--n", type=int, help="ambient dimension")
    p_gen.add_argument("--size", type=int, help="number of points (random)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None, help="output path, default stdout")
    p_gen.set_defaults(fn=_cmd_gen)

    p_an = sub.add_parser("analyze", help="exact doubling/spectrum summary of a set file")
    p_an.add_argument("--in", dest="infile", required=True)
    p_an.add_argument("--dense-limit", type=int, default=DEFAULT_DENSE_LIMIT)
    p_an.add_argument("--format", choices=["json", "csv"], default="json")
    p_an.add_argument("--out", default=None)
    p_an.set_defaults(fn=_cmd_analyze)

    p_pipe = sub.add_parser("pipeline", help="run the full certified pipeline on a set file")
    p_pipe.add_argument("--in", dest="infile", required=True)
    p_pipe.add_argument("--seed", type=int, default=0)
    p_pipe.add_argument("--dense-limit", type=int, default=DEFAULT_DENSE_LIMIT)
    p_pipe.add_argument("--format", choices=["json", "csv"], default="json")
    p_pipe.add_argument("--with-times", action="store_true", help="include wall times (not byte-deterministic)")
    p_pipe.add_argument("--trace", default=None, help="write one JSON object per stage to this path")
    p_pipe.add_argument("--out", default=None)
    p_pipe.set_defaults(fn=_cmd_pipeline)

    p_sweep = sub.add_parser("sweep", help="run the pipeline over an instance family")
    p_sweep.add_argument("--family", required=True, choices=["extremal", "random", "subspace"])
    p_sweep.add_argument("--d", help="range as N or LO:HI")
    p_sweep.add_argument("--k", help="range as N or LO:HI")
    p_sweep.add_argument("--n", help="ambient dimension (single value or range for random)")
    p_sweep.add_argument("--size", help="point count range (random)")
    p_sweep.add_argument("--count", type=int, default=1, help="instances per parameter combo (random)")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--dense-limit", type=int, default=DEFAULT_DENSE_LIMIT)
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("--with-times", action="store_true", help="include wall times (not byte-deterministic)")
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_self = sub.add_parser("selftest", help="run the built-in invariant battery")
    p_self.set_defaults(fn=_cmd_selftest)
    return parser


def entry(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except InvariantViolationError as e:
        sys.stderr.write(f"certificate violation: {e}\n")
        return 2
    except (F2Error, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1


def main() -> None:
    raise SystemExit(entry())
