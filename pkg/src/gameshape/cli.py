"""gameshape command line: simulate, analyze, classify, pipeline.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O or parse
error, 3 internal invariant failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from collections import Counter
from dataclasses import fields
from fractions import Fraction
from pathlib import Path

from .efg import EfgConfig, center_fires, efg_run
from .lattice import FrameParseError, PreconditionError, parse_frame, parse_trajectory, serialize_trajectory
from .pd import ConfigError, PdConfig, pd_run
from .ph import FiltrationOrderError, FiltrationTooLarge, render
from .ph.export import BarcodeParseError, barcode_from_csv, barcode_svg, barcode_to_csv
from .pipeline import analyze, classify_analysis
from .pointcloud import IterationInterval, cloud_to_csv
from .presets import PRESETS, get_preset, mixed_lattice
from .shapes import SignificancePolicy, classify
from .strategies import parse_label


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


# -- small parsers ----------------------------------------------------------------

_SQRT = re.compile(r"^\s*sqrt\(\s*([0-9./]+)\s*\)\s*$")


def parse_scale_squared(text: str):
    """An epsilon given as ``2``, ``2.5``, ``3/2`` or ``sqrt(5)``, returned squared (exact)."""
    m = _SQRT.match(text)
    try:
        sq = Fraction(m.group(1)) if m else Fraction(text.strip()) ** 2
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad scale {text!r}; use a number or sqrt(N)") from None
    if sq < 0:
        raise UsageError(f"scale must be non-negative, got {text!r}")
    return int(sq) if sq.denominator == 1 else sq


def parse_window(text: str) -> tuple:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise UsageError(f"window must look like LO:HI, got {text!r}")
    return parse_scale_squared(lo), parse_scale_squared(hi)


def parse_interval(text: str) -> IterationInterval:
    try:
        return IterationInterval.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def policy_from_args(args, base: SignificancePolicy = SignificancePolicy()) -> SignificancePolicy:
    lo, hi = base.window_low_sq, base.window_high_sq
    if getattr(args, "window", None):
        lo, hi = parse_window(args.window)
    mp = base.min_persistence if getattr(args, "min_persistence", None) is None else args.min_persistence
    try:
        return SignificancePolicy(lo, hi, mp)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def occupancy_csv(traj) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    labels = list(traj.frames[0][1].occupancy()) if traj.frames else []
    w.writerow(["t"] + [s.value for s in labels])
    for t, occ in traj.occupancy_table():
        w.writerow([t] + [occ[s] for s in labels])
    return buf.getvalue()


# -- configs ----------------------------------------------------------------------

def load_config(path: str, seed=None, iterations=None):
    """JSON config -> (game, config, initial lattice, iterations).

    Keys: ``game`` ("pd" or "efg"), any PdConfig/EfgConfig field,
    ``iterations``, and ``initial``: a frame file path (relative to the
    config), ``"mixed:D,C"`` for an equal shuffled mix, or ``"fires"`` for
    the central 2x2 fire block.
    """
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"config file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise UsageError("config must be a JSON object")
    game = raw.pop("game", "pd")
    initial = raw.pop("initial", None)
    n = raw.pop("iterations", 20 if game == "efg" else 100)
    cls = {"pd": PdConfig, "efg": EfgConfig}.get(game)
    if cls is None:
        raise UsageError(f"unknown game {game!r}; expected pd or efg")
    known = {f.name for f in fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise UsageError(f"unknown config keys {sorted(unknown)}; valid: {sorted(known)}")
    if seed is not None:
        raw["seed"] = seed
    if iterations is not None:
        n = iterations
    if game == "efg":
        raw["iterations"] = n
    try:
        cfg = cls(**raw)
    except (TypeError, ConfigError) as exc:
        raise UsageError(f"bad config: {exc}") from None
    if initial is None:
        raise UsageError("config needs an 'initial' entry")
    if initial == "fires":
        lat = center_fires(cfg)
    elif isinstance(initial, str) and initial.startswith("mixed:"):
        try:
            labels = [parse_label("pd", s) for s in initial[6:].split(",")]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        lat = mixed_lattice(labels, cfg.seed, cfg.width, cfg.height, cfg)
    else:
        frame = Path(path).parent / initial
        lat = parse_frame(frame.read_text(), default_score=getattr(cfg, "SS", 0))
        if lat.game != game:
            raise UsageError(f"initial frame is a {lat.game} lattice but the config game is {game}")
    return game, cfg, lat, n


def simulate_from_args(args):
    """Returns (trajectory, preset or None)."""
    if args.preset and args.config:
        raise UsageError("give either --preset or --config, not both")
    if args.preset:
        try:
            preset = get_preset(args.preset)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        preset = preset.with_seed(args.seed if args.seed is not None else 0)
        if args.iterations is not None and preset.fixture is not None:
            raise UsageError(f"preset {preset.name} replays a fixed trajectory; --iterations does not apply")
        return preset.run(args.iterations), preset
    if not args.config:
        raise UsageError("simulate needs --preset or --config")
    game, cfg, lat, n = load_config(args.config, args.seed, args.iterations)
    if n < 0:
        raise UsageError("iterations must be non-negative")
    try:
        traj = efg_run(cfg, lat) if game == "efg" else pd_run(cfg, lat, n)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    return traj, None


# -- commands ---------------------------------------------------------------------

def cmd_simulate(args, out=sys.stdout):
    traj, _ = simulate_from_args(args)
    text = serialize_trajectory(traj)
    dest = Path(args.out or ".")
    write_atomic(dest / "trajectory.txt", text)
    occ = occupancy_csv(traj)
    write_atomic(dest / "occupancy.csv", occ)
    out.write(occ)
    return 0


def _strategy(game: str, text: str):
    try:
        return parse_label(game, text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _analysis_outputs(a, title: str, dest, fmt: str, out, summary: bool = True):
    csv_text = barcode_to_csv(a.barcode)
    svg_text = barcode_svg(a.barcode, title)
    if dest is not None:
        write_atomic(dest / "barcode.csv", csv_text)
        write_atomic(dest / "barcode.svg", svg_text)
        write_atomic(dest / "cloud.csv", cloud_to_csv(a.cloud))
    if summary:
        radius = a.enclosing_radius_squared
        print(f"points: {len(a.cloud)}", file=sys.stderr)
        print("enclosing radius: " + ("n/a" if radius is None else f"{render(radius)} (squared {radius})"),
              file=sys.stderr)
        print(f"threshold: {render(a.threshold) if a.threshold is not None else 'none'}", file=sys.stderr)
        for w in a.warnings:
            print(f"warning: {w}", file=sys.stderr)
    if fmt == "csv":
        out.write(csv_text)
    elif fmt == "svg":
        out.write(svg_text)
    else:
        out.write(barcode_text(a.barcode))


def barcode_text(b) -> str:
    """Bars grouped by (dimension, birth, death) with multiplicities."""
    lines = []
    for d in range(3):
        bars = b.dimension(d)
        lines.append(f"H{d}: {len(bars)} bars")
        groups = Counter((bar.birth, bar.death) for bar in bars)
        key = lambda kv: (kv[0][0], math.inf if kv[0][1] is None else kv[0][1])
        for (birth, death), k in sorted(groups.items(), key=key):
            lines.append(f"  [{render(birth)}, {render(death)}) x{k}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args, out=sys.stdout):
    try:
        traj = parse_trajectory(Path(args.trajectory).read_text())
    except FileNotFoundError:
        raise OSError(f"trajectory file {args.trajectory} not found") from None
    if not args.strategy:
        raise UsageError("analyze needs --strategy")
    s = _strategy(traj.game, args.strategy)
    ts = traj.iterations
    iv = parse_interval(args.interval) if args.interval else IterationInterval(ts[0], ts[-1])
    if iv.start < ts[0] or iv.end > ts[-1]:
        raise UsageError(f"interval [{iv.start}, {iv.end}] outside trajectory range [{ts[0]}, {ts[-1]}]")
    threshold = parse_scale_squared(args.threshold) if args.threshold else None
    a = analyze(traj, s, iv, _time_scale(args.time_scale), threshold)
    _analysis_outputs(a, f"{s.name.lower()} t={iv.start}..{iv.end}",
                      Path(args.out) if args.out else None, args.format or "csv", out)
    return 0


def _time_scale(text):
    if text is None:
        return 1
    try:
        ts = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad time scale {text!r}") from None
    if ts <= 0:
        raise UsageError("time scale must be positive")
    return ts


def _report_text(report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({
            "classification": report.classification,
            "b0": report.b0, "b1": report.b1, "b2": report.b2,
            "policy": {"window_low_squared": str(report.policy.window_low_sq),
                       "window_high_squared": str(report.policy.window_high_sq),
                       "min_persistence": report.policy.min_persistence},
            "significant": [{"dimension": b.dim, "birth_squared": str(b.birth),
                             "death_squared": "inf" if b.death is None else str(b.death)}
                            for b in report.bars],
            "warnings": report.warnings}, indent=2) + "\n"
    return report.render()


def cmd_classify(args, out=sys.stdout):
    try:
        text = Path(args.barcode).read_text()
    except FileNotFoundError:
        raise OSError(f"barcode file {args.barcode} not found") from None
    report = classify(barcode_from_csv(text), policy_from_args(args))
    out.write(_report_text(report, args.format or "text"))
    return 0


def cmd_pipeline(args, out=sys.stdout):
    if not args.preset:
        raise UsageError(f"pipeline needs --preset; available: {', '.join(sorted(PRESETS))}")
    args.config = None
    traj, preset = simulate_from_args(args)
    dest = Path(args.out or f"out-{preset.name}-seed{preset.config.seed}")
    write_atomic(dest / "trajectory.txt", serialize_trajectory(traj))
    write_atomic(dest / "occupancy.csv", occupancy_csv(traj))
    s = _strategy(traj.game, args.strategy) if args.strategy else preset.strategy
    iv = parse_interval(args.interval) if args.interval else preset.analysis_interval(traj)
    threshold = parse_scale_squared(args.threshold) if args.threshold else preset.threshold
    a = analyze(traj, s, iv, _time_scale(args.time_scale), threshold)
    sink = io.StringIO()
    _analysis_outputs(a, f"{preset.name} seed {preset.config.seed}: {s.name.lower()}", dest, "text", sink,
                      summary=False)
    write_atomic(dest / "barcode.txt", sink.getvalue())
    report = classify_analysis(a, policy_from_args(args, preset.policy))
    fmt = "json" if args.format == "json" else "text"
    write_atomic(dest / "report.txt", report.render())
    out.write(f"preset: {preset.name} ({preset.description})\n"
              f"seed: {preset.config.seed}\nstrategy: {s.name.lower()}\n"
              f"interval: {iv.start}:{iv.end}\npoints: {len(a.cloud)}\noutputs: {dest}\n")
    out.write(_report_text(report, fmt))
    return 0


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gameshape", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, sim=False, ana=False, cls=False):
        if sim:
            sp.add_argument("--preset", help="named scenario: " + ", ".join(sorted(PRESETS)))
            sp.add_argument("--config", help="JSON config file")
            sp.add_argument("--seed", type=int)
            sp.add_argument("--iterations", type=int)
        if ana:
            sp.add_argument("--strategy", help="strategy code or name, e.g. D or tft")
            sp.add_argument("--interval", help="iterations A:B (inclusive)")
            sp.add_argument("--time-scale", help="length of one iteration on the time axis (default 1)")
            sp.add_argument("--threshold", help="largest epsilon, e.g. 2.5 or sqrt(5) (default: enclosing radius)")
        if cls:
            sp.add_argument("--window", help="significance window LO:HI in epsilon (default sqrt(2):2)")
            sp.add_argument("--min-persistence", type=float,
                            help="bar overlap with the window needed to count (default: whole window)")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--format", choices=["csv", "svg", "text", "json"])

    sp = sub.add_parser("simulate", help="run a game and write a trajectory")
    common(sp, sim=True)
    sp = sub.add_parser("analyze", help="barcode of one strategy's space-time cloud")
    sp.add_argument("trajectory")
    common(sp, ana=True)
    sp = sub.add_parser("classify", help="shape report for a barcode CSV")
    sp.add_argument("barcode")
    common(sp, cls=True)
    sp = sub.add_parser("pipeline", help="simulate, analyze and classify a preset")
    common(sp, sim=True, ana=True, cls=True)
    return p


COMMANDS = {"simulate": cmd_simulate, "analyze": cmd_analyze,
            "classify": cmd_classify, "pipeline": cmd_pipeline}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ConfigError, PreconditionError, FiltrationTooLarge) as exc:
        print(f"gameshape: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, FrameParseError, BarcodeParseError) as exc:
        print(f"gameshape: error: {exc}", file=sys.stderr)
        return 2
    except (AssertionError, FiltrationOrderError) as exc:
        print(f"gameshape: internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
