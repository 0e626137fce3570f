"""Command-line entry point.

    coded-lea simulate --config scenario.cfg [--strategy lea] [--out rounds.csv]
    coded-lea sweep --config a.cfg b.cfg --seeds 0:10 --strategies lea,static
    coded-lea verify
    coded-lea encode-demo --data chunks.txt --n 3 --r 2 --deg-f 2

Exit codes: 0 success, 1 configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .allocation import DeadlineInfeasible
from .coding import CodingError, WorkFunction, decode, encode, make_scheme, read_dataset
from .config import parse_config
from .field import DEFAULT_PRIME
from .results import emit_results, estimates_csv, summary_text, sweep_csv
from .sim import STRATEGIES, ConfigError, run_paired

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 1, 2


def _apply_overrides(cfg, args):
    changes = {}
    for key in ("rounds", "seed", "strategy", "fidelity"):
        value = getattr(args, key, None)
        if value is not None:
            changes[key] = value
    return cfg.with_(**changes) if changes else cfg


def cmd_simulate(args) -> int:
    cfg = _apply_overrides(parse_config(args.config), args)
    strategies = [cfg.strategy] + [s for s in (args.compare or "").split(",") if s and s != cfg.strategy]
    reports = run_paired(cfg, strategies)
    for name in strategies:
        report = reports[name]
        if args.out:
            out = Path(args.out)
            if len(strategies) > 1:
                out = out.with_name(f"{out.stem}.{name}{out.suffix}")
            emit_results(report, out, args.format)
        if args.estimates_out and report.final_estimates is not None:
            Path(args.estimates_out).write_text(estimates_csv(report))
        sys.stdout.write(summary_text(report))
        if len(strategies) > 1:
            sys.stdout.write("\n")
    return EXIT_OK


def _sweep_cell(job):
    path, seed, strategies, rounds = job
    cfg = parse_config(path).with_(seed=seed)
    if rounds is not None:
        cfg = cfg.with_(rounds=rounds)
    rows = []
    for name, report in run_paired(cfg, strategies).items():
        prof = cfg.profile
        rows.append({
            "config": str(path), "seed": seed, "strategy": name, "rounds": cfg.rounds,
            "K_star": prof.K_star, "l_g": prof.l_g, "l_b": prof.l_b,
            "throughput": report.throughput,
        })
    return rows


def _parse_seeds(spec: str) -> list[int]:
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        return list(range(int(lo), int(hi)))
    return [int(s) for s in spec.split(",") if s]


def cmd_sweep(args) -> int:
    for path in args.config:
        parse_config(path)  # fail fast on bad configs
    strategies = [s for s in args.strategies.split(",") if s]
    for s in strategies:
        if s not in STRATEGIES:
            raise ConfigError(f"unknown strategy {s!r}")
    jobs = [(path, seed, strategies, args.rounds) for path in args.config for seed in _parse_seeds(args.seeds)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            cells = list(pool.map(_sweep_cell, jobs))
    else:
        cells = [_sweep_cell(job) for job in jobs]
    text = sweep_csv(row for cell in cells for row in cell)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suites

    results = run_suites(args.suite, seed=args.seed)
    for res in results:
        print(res.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_encode_demo(args) -> int:
    data = read_dataset(args.data, args.prime)
    scheme = make_scheme(args.n, args.r, data.k, args.deg_f, data.p)
    shards = encode(data, scheme)
    lines = [f"# mode={scheme.mode} K*={scheme.recovery_threshold} shards={scheme.num_shards}"]
    for s in shards:
        lines.append(f"{s.index} {s.owner} " + " ".join(str(int(x)) for x in s.payload))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)

    rng = np.random.default_rng(args.seed)
    f = WorkFunction.random(args.deg_f, data.chunk_len, rng, data.p)
    picked = sorted(rng.choice(scheme.num_shards, size=scheme.recovery_threshold, replace=False) + 1)
    results = [(int(v), f(shards[v - 1].payload, data.p)) for v in picked]
    decoded = decode(results, scheme, f)
    expected = [f(c, data.p) for c in data.chunks]
    ok = all(np.array_equal(a, b) for a, b in zip(decoded, expected))
    print(f"# decoded f(X_1..X_{data.k}) from shards {picked}: {'ok' if ok else 'MISMATCH'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coded-lea", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("simulate", help="run one scenario")
    p.add_argument("--config", required=True)
    p.add_argument("--rounds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--strategy", choices=STRATEGIES)
    p.add_argument("--fidelity", choices=("analytic", "full"))
    p.add_argument("--compare", help="extra strategies run on the same trajectory, comma separated")
    p.add_argument("--out", help="per-round CSV (or summary with --format text)")
    p.add_argument("--format", choices=("csv", "text"), default="csv")
    p.add_argument("--estimates-out", help="CSV of final LEA estimates per worker")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run configs x seeds, one summary row per cell")
    p.add_argument("--config", required=True, nargs="+")
    p.add_argument("--seeds", default="0:1", help="'lo:hi' range or comma list")
    p.add_argument("--strategies", default="lea,static,genie")
    p.add_argument("--rounds", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the randomized oracle suites")
    p.add_argument("--suite", action="append", choices=("success_model", "allocation", "coding"))
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("encode-demo", help="encode a dataset file and decode from K* random shards")
    p.add_argument("--data", required=True, help="text or binary dataset file, one chunk per row")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--deg-f", type=int, default=1)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, CodingError, DeadlineInfeasible, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
