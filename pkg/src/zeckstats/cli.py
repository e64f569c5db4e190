"""``zeckstats`` command line.

Exit status: 0 ok, 1 verify found a failing criterion, 2 invalid input,
3 an exhaustive computation exceeded its size limit.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import acceptance
from .counting import count_dp, count_dp_series, count_exhaustive, fit_line, ks_distance, moments
from .decomposition import decompose, from_digits, is_legal
from .errors import ScaleTooLarge, ValidationError, WindowTooSmall, ZeckError
from .fardiff import INTERVALS, TARGET_CORRELATION, correlation, fardiff_decompose, joint_counts
from .recurrence import generate, parse_spec
from .spectral import root_report

FORMATS = ("text", "csv", "jsonl", "tsv")


def fmt_float(x: float) -> str:
    return f"{x:.15g}"


@dataclass
class RunConfig:
    command: str
    spec: str = "1,1"
    args: list = field(default_factory=list)
    n: Optional[int] = None
    n_min: Optional[int] = None
    n_max: Optional[int] = None
    interval: str = "leading"
    exhaustive: bool = False
    output: Optional[str] = None
    format: Optional[str] = None
    tol: float = 1e-12
    threads: int = 1
    seed: Optional[int] = None


class Output:
    """Collects machine-readable text and writes it once, in order."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.chunks: list[str] = []

    def write(self, text: str) -> None:
        self.chunks.append(text)

    def close(self) -> None:
        data = "".join(self.chunks)
        if self.path:
            with open(self.path, "w", newline="") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _jsonl(records) -> str:
    return "".join(json.dumps(r) + "\n" for r in records)


def cmd_seq(cfg: RunConfig, out: Output) -> int:
    table = generate(parse_spec(cfg.spec), cfg.n or 20)
    if cfg.format == "jsonl":
        out.write(_jsonl({"index": i, "term": str(h)} for i, h in enumerate(table.terms, 1)))
    else:
        out.write(table.to_csv())
    return 0


def cmd_decomp(cfg: RunConfig, out: Output) -> int:
    table = generate(parse_spec(cfg.spec), 2)
    for arg in cfg.args:
        d = decompose(int(arg), table)
        if cfg.format == "jsonl":
            out.write(d.json() + "\n")
        elif cfg.format in ("tsv", "csv"):
            out.write(d.line() + "\n")
        else:
            out.write(d.text() + "\n")
    return 0


def cmd_legal(cfg: RunConfig, out: Output) -> int:
    spec = parse_spec(cfg.spec)
    try:
        digits = [int(a) for a in cfg.args[0].split(",")]
    except ValueError:
        raise ValidationError(f"cannot parse digit string {cfg.args[0]!r}") from None
    if any(a < 0 for a in digits):
        raise ValidationError("digits must be nonnegative")
    d = from_digits(digits, generate(spec, len(digits)))
    legal = is_legal(d, spec)
    if cfg.format == "jsonl":
        out.write(json.dumps({**d.record(), "legal": legal}) + "\n")
    else:
        out.write(f"{','.join(map(str, digits))} {'legal' if legal else 'illegal'} (value={d.value})\n")
    return 0


def cmd_count(cfg: RunConfig, out: Output) -> int:
    spec = parse_spec(cfg.spec)
    if cfg.exhaustive:
        t = count_exhaustive(spec, cfg.n, workers=cfg.threads)
    else:
        t = count_dp(spec, cfg.n)
    if cfg.format == "jsonl":
        out.write(_jsonl({"n": t.n, "k": k, "count": str(c)} for k, c in t.counts.items()))
    else:
        out.write(t.to_csv())
    return 0


def cmd_stats(cfg: RunConfig, out: Output) -> int:
    spec = parse_spec(cfg.spec)
    if cfg.n_max - cfg.n_min < 5:
        raise WindowTooSmall(f"window [{cfg.n_min}, {cfg.n_max}] spans fewer than 5 steps")
    rows = []
    for t in count_dp_series(spec, cfg.n_max):
        if t.n < cfg.n_min:
            continue
        m = moments(t)
        ks = ks_distance(t) if m.variance > 0 else None
        rows.append((t.n, m, ks))
    ns = [r[0] for r in rows]
    fits = []
    for name, ys in (("mean", [r[1].mean_float for r in rows]), ("variance", [r[1].variance_float for r in rows])):
        f = fit_line(ns, ys)
        fits.append({
            "fit": name, "spec": str(spec), "n_min": cfg.n_min, "n_max": cfg.n_max,
            "slope": fmt_float(f.slope), "intercept": fmt_float(f.intercept),
            "residual": fmt_float(f.residual),
        })
    if cfg.format == "jsonl":
        out.write(_jsonl(
            {"n": n, "mean": str(m.mean), "mean_float": fmt_float(m.mean_float),
             "variance": str(m.variance), "variance_float": fmt_float(m.variance_float),
             "ks": None if ks is None else fmt_float(ks)}
            for n, m, ks in rows
        ))
        out.write(_jsonl(fits))
    else:
        out.write("n,mean,variance,ks_distance\n")
        for n, m, ks in rows:
            out.write(f"{n},{fmt_float(m.mean_float)},{fmt_float(m.variance_float)},"
                      f"{'' if ks is None else fmt_float(ks)}\n")
        for f in fits:
            out.write("# " + json.dumps(f) + "\n")
    return 0


def cmd_fardiff(cfg: RunConfig, out: Output) -> int:
    for arg in cfg.args:
        d = fardiff_decompose(int(arg))
        out.write((d.json() if cfg.format == "jsonl" else d.text()) + "\n")
    return 0


def cmd_fdstats(cfg: RunConfig, out: Output) -> int:
    t = joint_counts(cfg.n, cfg.interval)
    r = correlation(t)
    summary = f"correlation={fmt_float(r)}, target={TARGET_CORRELATION:.6f}"
    if cfg.format == "jsonl":
        out.write(_jsonl({"n": t.n, "k_plus": p, "k_minus": m, "count": str(c)}
                         for (p, m), c in t.counts.items()))
        out.write(json.dumps({"n": t.n, "interval": t.interval, "correlation": fmt_float(r),
                              "target": fmt_float(TARGET_CORRELATION)}) + "\n")
        return 0
    out.write(t.to_csv())
    if cfg.output:
        print(summary)
    else:
        out.write(summary + "\n")
    return 0


def cmd_root(cfg: RunConfig, out: Output) -> int:
    report = root_report(parse_spec(cfg.spec), cfg.tol)
    if cfg.format == "jsonl":
        out.write(json.dumps({**report, "lambda": fmt_float(report["lambda"]),
                              "growth_deviation": fmt_float(report["growth_deviation"])}) + "\n")
    else:
        out.write(f"lambda = {report['lambda']!r}\n")
        out.write(f"growth_deviation = {report['growth_deviation']:.3e}\n")
    return 0


def cmd_verify(cfg: RunConfig, out: Output) -> int:
    def echo(line: str) -> None:
        if cfg.output:
            out.write(line + "\n")
        print(line, flush=True)

    results = acceptance.run_all(echo=echo)
    passed = sum(r.passed for r in results)
    echo(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


COMMANDS = {
    "seq": cmd_seq,
    "decomp": cmd_decomp,
    "legal": cmd_legal,
    "count": cmd_count,
    "stats": cmd_stats,
    "fardiff": cmd_fardiff,
    "fdstats": cmd_fdstats,
    "root": cmd_root,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", default="1,1", help="recurrence coefficients, e.g. 1,1 or 2,0,3")
    common.add_argument("-o", "--output", help="write machine-readable output here")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--tol", type=float, default=1e-12, help="root-finding tolerance")
    common.add_argument("--threads", type=int, default=1, help="cap on worker processes")
    common.add_argument("--seed", type=int, help="reserved; no command samples randomly yet")

    parser = argparse.ArgumentParser(prog="zeckstats", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", parents=[common], help="export H_1..H_n as CSV")
    p.add_argument("-n", type=int, default=20)
    p = sub.add_parser("decomp", parents=[common], help="legal decomposition of N")
    p.add_argument("args", nargs="+", metavar="N")
    p = sub.add_parser("legal", parents=[common], help="check a digit string a_1,...,a_m")
    p.add_argument("args", nargs=1, metavar="DIGITS")
    p = sub.add_parser("count", parents=[common], help="summand counts over [H_n, H_{n+1})")
    p.add_argument("n", type=int)
    p.add_argument("--exhaustive", action="store_true", help="decompose every integer instead of DP")
    p = sub.add_parser("stats", parents=[common], help="moments, KS distance and linear fits")
    p.add_argument("n_min", type=int)
    p.add_argument("n_max", type=int)
    p = sub.add_parser("fardiff", parents=[common], help="far-difference representation of N")
    p.add_argument("args", nargs="+", metavar="N")
    p = sub.add_parser("fdstats", parents=[common], help="joint (K+, K-) counts and correlation")
    p.add_argument("n", type=int)
    p.add_argument("--interval", choices=INTERVALS, default="leading")
    sub.add_parser("root", parents=[common], help="dominant root of the characteristic polynomial")
    sub.add_parser("verify", parents=[common], help="run every acceptance criterion")
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(**{k: v for k, v in vars(ns).items() if v is not None})


def run(cfg: RunConfig) -> int:
    out = Output(cfg.output)
    try:
        parse_spec(cfg.spec)
        if cfg.n is not None and cfg.n < 1:
            raise ValidationError(f"n must be >= 1, got {cfg.n}")
        if cfg.args and cfg.command in ("decomp", "fardiff"):
            for a in cfg.args:
                try:
                    int(a)
                except ValueError:
                    raise ValidationError(f"not an integer: {a!r}") from None
        status = COMMANDS[cfg.command](cfg, out)
    except ScaleTooLarge as exc:
        print(f"zeckstats: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, ZeckError) as exc:
        print(f"zeckstats: {exc}", file=sys.stderr)
        return 2
    out.close()
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
