"""Command-line front end.

Subcommands: predict, simulate, estimate, distinguish, geometry.  Output is
line-oriented ``key: value`` text.  Exit codes: 0 success, 2 config or
geometry validation, 3 I/O failure, 4 malformed trial data.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .config import config_items, load_config
from .design import distinguish
from .probs import JointCounts, JointProbs
from .protocol import ProtocolConfig, effective_collapse_time, model_joint, sample_outcomes
from .spacetime import (
    FlatHypersurface,
    GeometryError,
    SpacetimeEvent,
    StaticWorldline,
    boost,
    intercept_bounds,
    intercept_time,
    interval,
)
from .stats import UnderSampledError, chi_square_gof, empirical, mle_phase, phase_preimages

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_DATA = 4

CSV_HEADER = "trial_index,c_outcome,b_outcome,t_collapse"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _emit(lines: list[tuple[str, object]], stream=None) -> None:
    stream = stream or sys.stdout
    for key, value in lines:
        stream.write(f"{key}: {_fmt(value)}\n")


def _probs_lines(prefix: str, p: JointProbs) -> list[tuple[str, object]]:
    return [(f"{prefix}.p_pp", p.p_pp), (f"{prefix}.p_pm", p.p_pm),
            (f"{prefix}.p_mp", p.p_mp), (f"{prefix}.p_mm", p.p_mm),
            (f"{prefix}.p_same", p.p_same)]


@dataclass
class RunSummary:
    config: ProtocolConfig
    analytic: JointProbs
    t_collapse: float
    counts: JointCounts | None = None
    empirical: JointProbs | None = None
    chi_square: tuple | None = None
    chi_square_note: str | None = None
    duration: float = 0.0
    extra: list = field(default_factory=list)

    def lines(self) -> list[tuple[str, object]]:
        out: list[tuple[str, object]] = [(f"config.{k}", v) for k, v in config_items(self.config)]
        out.append(("t_collapse", self.t_collapse))
        out.extend(_probs_lines("analytic", self.analytic))
        if self.counts is not None:
            out += [("counts.n_pp", self.counts.n_pp), ("counts.n_pm", self.counts.n_pm),
                    ("counts.n_mp", self.counts.n_mp), ("counts.n_mm", self.counts.n_mm),
                    ("counts.total", self.counts.total)]
            out.extend(_probs_lines("empirical", self.empirical))
            if self.chi_square is not None:
                out += [("chi2.stat", self.chi_square.stat), ("chi2.dof", self.chi_square.dof),
                        ("chi2.p_value", self.chi_square.p_value)]
            else:
                out.append(("chi2", f"unavailable ({self.chi_square_note})"))
        out.extend(self.extra)
        out.append(("duration_s", round(self.duration, 6)))
        return out


def config_from_summary(text: str) -> str:
    """Recover the ``key = value`` config file from a printed summary."""
    rows = []
    for line in text.splitlines():
        if line.startswith("config."):
            key, value = line[len("config."):].split(": ", 1)
            rows.append(f"{key} = {value}\n")
    return "".join(rows)


def _load(args) -> ProtocolConfig:
    if args.config is None:
        raise CliError(EXIT_CONFIG, "--config is required")
    try:
        return load_config(args.config, {"seed": args.seed, "n_trials": args.trials})
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read config: {exc}") from None
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, f"invalid config: {exc}") from None


def _collapse_time(config: ProtocolConfig) -> float:
    try:
        return effective_collapse_time(config)
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, f"invalid geometry: {exc}") from None


def cmd_predict(args) -> RunSummary:
    start = time.perf_counter()
    config = _load(args)
    t_a = _collapse_time(config)
    return RunSummary(config, model_joint(config), t_a, duration=time.perf_counter() - start)


def format_csv(c, b, t_collapse: float) -> str:
    t = f"{t_collapse:.9g}"
    rows = [CSV_HEADER]
    rows.extend(f"{i},{ci:+d},{bi:+d},{t}" for i, (ci, bi) in enumerate(zip(c.tolist(), b.tolist())))
    return "\n".join(rows) + "\n"


def cmd_simulate(args) -> RunSummary:
    start = time.perf_counter()
    config = _load(args)
    t_a = _collapse_time(config)
    if args.out is None:
        raise CliError(EXIT_CONFIG, "--out is required for simulate")
    c, b = sample_outcomes(config, workers=args.workers)
    try:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(format_csv(c, b, t_a))
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {args.out}: {exc}") from None

    counts = JointCounts.from_outcomes(c, b)
    expected = model_joint(config)
    summary = RunSummary(config, expected, t_a, counts=counts, empirical=empirical(counts))
    try:
        summary.chi_square = chi_square_gof(counts, expected)
    except UnderSampledError as exc:
        summary.chi_square_note = str(exc)
    summary.extra.append(("csv", str(args.out)))
    summary.duration = time.perf_counter() - start
    return summary


def read_trials_csv(path: str | Path) -> JointCounts:
    """Tally a simulate-format CSV, raising CliError(EXIT_DATA) with the offending line."""
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError:
        raise CliError(EXIT_DATA, f"{path}: not ASCII") from None
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CliError(EXIT_DATA, f"{path}: line 1: empty file, expected header {CSV_HEADER!r}")
    if lines[0] != CSV_HEADER:
        raise CliError(EXIT_DATA, f"{path}: line 1: bad header {lines[0]!r}")
    if len(lines) == 1:
        raise CliError(EXIT_DATA, f"{path}: no trial rows")
    c_out, b_out = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        try:
            if len(parts) != 4:
                raise ValueError(f"expected 4 fields, got {len(parts)}")
            index, c, b = int(parts[0]), int(parts[1]), int(parts[2])
            t = float(parts[3])
            if index != lineno - 2:
                raise ValueError(f"trial_index {index} out of sequence")
            if c not in (1, -1) or b not in (1, -1):
                raise ValueError("outcomes must be +1 or -1")
            if not math.isfinite(t):
                raise ValueError("t_collapse is not finite")
        except ValueError as exc:
            raise CliError(EXIT_DATA, f"{path}: line {lineno}: {exc}") from None
        c_out.append(c)
        b_out.append(b)
    return JointCounts.from_outcomes(c_out, b_out)


def cmd_estimate(args) -> list[tuple[str, object]]:
    if args.input is None:
        raise CliError(EXIT_CONFIG, "--in is required for estimate")
    omega = args.omega
    if omega is None and args.config is not None:
        omega = _load(args).omega
    if omega is None or not omega > 0:
        raise CliError(EXIT_CONFIG, "a positive --omega (or --config) is required")
    if not 0.0 < args.confidence < 1.0:
        raise CliError(EXIT_CONFIG, "--confidence must lie in (0, 1)")
    window = args.window or (0.0, math.pi / omega)
    if window[0] > window[1]:
        raise CliError(EXIT_CONFIG, "--window must satisfy T0 <= T1")

    counts = read_trials_csv(args.input)
    est = mle_phase(counts, args.confidence)
    candidates = phase_preimages(est.theta_hat, omega, *window)
    out = [("n", est.n), ("f_same", est.f_same), ("theta_hat", est.theta_hat),
           ("ci_low", est.ci_low), ("ci_high", est.ci_high), ("confidence", est.confidence),
           ("degenerate", est.degenerate),
           ("window", f"{window[0]!r},{window[1]!r}"),
           ("candidate_t_a", ",".join(repr(t) for t in candidates) or "none")]
    return out


def cmd_distinguish(args) -> list[tuple[str, object]]:
    start = time.perf_counter()
    config = _load(args)
    if args.v0 == args.v1:
        raise CliError(EXIT_CONFIG, "v0 == v1: hypotheses are indistinguishable")
    try:
        report = distinguish(config, args.v0, args.v1, args.alpha, args.power, args.repetitions)
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, f"invalid geometry: {exc}") from None
    out: list[tuple[str, object]] = [("v0", report.v0), ("v1", report.v1),
                                     ("t_a0", report.t_a0), ("t_a1", report.t_a1)]
    out += _probs_lines("h0", report.h0) + _probs_lines("h1", report.h1)
    out += [("alpha", report.alpha), ("power", report.power), ("n_required", report.n_required),
            ("repetitions", report.repetitions),
            ("h1_selected_under_h1", report.h1_selected_under_h1),
            ("h0_selected_under_h0", report.h0_selected_under_h0),
            ("empirical_power", report.empirical_power),
            ("duration_s", round(time.perf_counter() - start, 6))]
    return out


def cmd_geometry(args) -> list[tuple[str, object]]:
    try:
        anchor = SpacetimeEvent(args.b, args.t1)
        alice = StaticWorldline(args.a)
        surface = FlatHypersurface(anchor, args.v)
        t_a = intercept_time(surface, alice)
        lo, hi = intercept_bounds(anchor, alice)
    except GeometryError as exc:
        raise CliError(EXIT_CONFIG, f"invalid geometry: {exc}") from None
    event = alice.at(t_a)
    s2, kind = interval(event, anchor)
    dt_boosted = boost(event, args.v, anchor).t
    return [("intercept", t_a), ("bounds_low", lo), ("bounds_high", hi),
            ("interval_s2", s2), ("interval_class", kind.value),
            ("boosted_dt", dt_boosted)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proxyclock", description=__doc__.split("\n", 1)[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value experiment file")
    common.add_argument("--out", help="output CSV path (simulate)")
    common.add_argument("--seed", type=int, help="override config seed")
    common.add_argument("--trials", type=int, help="override config n_trials")
    common.add_argument("--workers", type=int, default=1, help="threads for trial generation")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("predict", parents=[common], help="analytic C/B table for the configured model")
    sub.add_parser("simulate", parents=[common], help="sample trials and write CSV")

    p = sub.add_parser("estimate", parents=[common], help="infer the folded clock phase from a CSV")
    p.add_argument("--in", dest="input", help="trial CSV written by simulate")
    p.add_argument("--omega", type=float, help="clock angular frequency (rad/s)")
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--window", type=float, nargs=2, metavar=("T0", "T1"),
                   help="time window for candidate t_a (default [0, pi/omega])")

    p = sub.add_parser("distinguish", parents=[common], help="sample size and power for v0 vs v1")
    p.add_argument("--v0", type=float, required=True)
    p.add_argument("--v1", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--power", type=float, default=0.90)
    p.add_argument("--repetitions", type=int, default=100)

    p = sub.add_parser("geometry", help="intercept of a simultaneity plane through (b, t1)")
    p.add_argument("--a", type=float, required=True, help="Alice's position (ls)")
    p.add_argument("--b", type=float, required=True, help="Bob's position (ls)")
    p.add_argument("--t1", type=float, required=True, help="Bob's measurement time (s)")
    p.add_argument("--v", type=float, required=True, help="simultaneity velocity (fraction of c)")
    return parser


COMMANDS = {
    "predict": cmd_predict,
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "distinguish": cmd_distinguish,
    "geometry": cmd_geometry,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    _emit(result.lines() if isinstance(result, RunSummary) else result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
