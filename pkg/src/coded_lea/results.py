"""Writers for simulation output: per-round CSV and a key-value summary."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .sim import SummaryReport

ROUND_COLUMNS = ("round", "strategy", "i_star", "est_success_prob", "n_good_true", "on_time_evals", "success")
SWEEP_COLUMNS = ("config", "seed", "strategy", "rounds", "K_star", "l_g", "l_b", "throughput")
ESTIMATE_COLUMNS = ("worker", "p_hat_gg", "p_hat_bb")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rounds_csv(report: SummaryReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROUND_COLUMNS)
    for o in report.rounds:
        writer.writerow([_fmt(getattr(o, col)) for col in ROUND_COLUMNS])
    return buf.getvalue()


def summary_text(report: SummaryReport) -> str:
    cfg = report.config
    profile = cfg.profile
    pairs = [
        ("strategy", report.strategy),
        ("R", report.throughput),
        ("M", report.M),
        ("successes", sum(o.success for o in report.rounds)),
        ("seed", cfg.seed),
        ("n", cfg.n),
        ("r", cfg.r),
        ("k", cfg.k),
        ("deg_f", cfg.deg_f),
        ("d", cfg.d),
        ("K_star", profile.K_star),
        ("l_g", profile.l_g),
        ("l_b", profile.l_b),
        ("fidelity", cfg.fidelity),
    ]
    for worker, gg, bb in report.final_estimates or []:
        pairs.append((f"p_hat_gg.{worker}", gg))
        pairs.append((f"p_hat_bb.{worker}", bb))
    return "".join(f"{key} = {_fmt(value)}\n" for key, value in pairs)


def estimates_csv(report: SummaryReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ESTIMATE_COLUMNS)
    for row in report.final_estimates or []:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def emit_results(report: SummaryReport, out, fmt: str = "csv") -> None:
    if fmt == "csv":
        text = rounds_csv(report)
    elif fmt == "text":
        text = summary_text(report)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    Path(out).write_text(text)


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[col]) for col in SWEEP_COLUMNS])
    return buf.getvalue()
