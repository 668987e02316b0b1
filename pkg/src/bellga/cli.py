"""Command-line driver: ``bellga {run,scan,audit,brute,selftest}``.

Structured output (JSON or CSV) goes to ``--out`` when given, otherwise to
stdout; the human-readable summary then goes to stderr so stdout stays
machine-readable.

Exit statuses: 0 success, 2 usage error, 3 contract violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from . import chsh, correlators, extraction, selftest
from .correlators import EXACT, mc
from .errors import BellGAError, ContractViolation, InvalidInputError
from .ga import CONVENTIONS, Direction, X_AXIS, Y_AXIS
from .models import check_seed

EXIT_OK, EXIT_USAGE, EXIT_CONTRACT = 0, 2, 3
DEFAULT_ANGLES = (0.0, 90.0, 45.0, 135.0)


@dataclass
class ExperimentConfig:
    model: str = "vector"
    convention: str = "oriented"
    angles: tuple[float, ...] | None = DEFAULT_ANGLES
    dirs: tuple[float, ...] | None = None
    mode: str = "mc"
    samples: int = 100_000
    seed: int = 0
    workers: int = 1
    format: str = "json"
    out: str | None = None
    resolution: int = 19
    grid: int = 50
    tables: int = 1000
    references: int = 20

    def __post_init__(self):
        if self.model not in correlators.MODELS:
            raise InvalidInputError(f"--model must be one of {correlators.MODELS}")
        if self.convention not in CONVENTIONS:
            raise InvalidInputError(f"--convention must be one of {CONVENTIONS}")
        if self.mode not in ("exact", "mc"):
            raise InvalidInputError("mode must be 'exact' or 'mc'")
        if self.format not in ("json", "csv"):
            raise InvalidInputError("--format must be json or csv")
        for name in ("samples", "workers", "resolution", "grid"):
            if int(getattr(self, name)) < 1:
                raise InvalidInputError(f"--{name} must be >= 1")
        if self.tables < 0 or self.references < 0:
            raise InvalidInputError("--tables and --references must be >= 0")
        self.seed = check_seed(self.seed)
        if self.dirs is not None and len(self.dirs) != 12:
            raise InvalidInputError("--dirs takes twelve floats")
        if self.dirs is None and (self.angles is None or len(self.angles) != 4):
            raise InvalidInputError("--angles takes four comma-separated degrees")

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidInputError(f"unknown config fields: {', '.join(unknown)}")
        data = dict(data)
        for key in ("angles", "dirs"):
            if data.get(key) is not None:
                data[key] = tuple(float(x) for x in data[key])
        return cls(**data)

    def settings(self) -> chsh.ChshSettings:
        if self.dirs is not None:
            v = self.dirs
            return chsh.ChshSettings(*(Direction(*v[i:i + 3]) for i in range(0, 12, 3)))
        return chsh.ChshSettings.from_angles(self.angles)

    def run_mode(self):
        return EXACT if self.mode == "exact" else mc(self.samples, self.seed, self.workers)


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bellga",
                                     description="Bell/CHSH laboratory for sign, vector and bivector models.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with ExperimentConfig fields (flags override)")
    common.add_argument("--model", choices=correlators.MODELS)
    common.add_argument("--convention", choices=CONVENTIONS)
    common.add_argument("--angles", type=_floats, help="A,A',B,B' in degrees")
    common.add_argument("--dirs", type=float, nargs=12, metavar="F",
                        help="explicit unit directions a a' b b' as twelve floats")
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--exact", action="store_true", help="sum the hidden measure exactly")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", help="output path (default: stdout)")

    sub.add_parser("run", parents=[common], help="CHSH value for one model and settings")
    p = sub.add_parser("scan", parents=[common], help="E(theta) over [0, 180] degrees")
    p.add_argument("--resolution", type=int)
    p = sub.add_parser("audit", parents=[common], help="Bell-bound audit of +/-1 readouts")
    p.add_argument("--grid", type=int)
    p.add_argument("--tables", type=int, help="number of random table maps")
    p.add_argument("--references", type=int, help="number of random axis_reference maps")
    sub.add_parser("brute", parents=[common], help="enumerate the 16 deterministic strategies")
    p = sub.add_parser("selftest", help="run the randomised invariant suite")
    p.add_argument("--cases", type=int, default=1000)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read config {args.config}: {exc}")
        if not isinstance(data, dict):
            raise InvalidInputError("config file must hold a JSON object")
    for key in ("model", "convention", "angles", "dirs", "samples", "seed", "workers",
                "format", "out", "resolution", "grid", "tables", "references"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    if getattr(args, "exact", False):
        data["mode"] = "exact"
    if "format" not in data:
        data["format"] = "csv" if args.command == "scan" else "json"
    return ExperimentConfig.from_mapping(data)


def _emit(cfg: ExperimentConfig, payload: str, summary: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(payload)
        print(summary)
    else:
        sys.stdout.write(payload)
        print(summary, file=sys.stderr)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_run(cfg: ExperimentConfig) -> int:
    settings = cfg.settings()
    mode = cfg.run_mode()
    residuals: list[float] = []
    if cfg.model == "bivector":
        def corr(a, b, m):
            r = correlators.algebraic_correlation(a, b, cfg.convention, m)
            residuals.append(r.residual_bivector_norm)
            return r.estimate
    else:
        corr = correlators.correlator(cfg.model, cfg.convention)
    result = chsh.chsh_value(corr, settings, mode)
    for e in result.correlations:
        if not np.isfinite(e.mean) or abs(e.mean) > 1.0 + 1e-12:
            raise ContractViolation(f"correlation {e.mean!r} outside [-1, 1]")

    record = {"model": cfg.model, "convention": cfg.convention,
              "settings": settings.to_dict(), **result.to_dict(),
              "seed": cfg.seed, "mode": cfg.mode,
              "samples": cfg.samples if cfg.mode == "mc" else 0}
    if residuals:
        record["residual_bivector_norm"] = dict(zip(chsh.PAIR_NAMES, residuals))
    if cfg.format == "json":
        payload = _json(record)
    else:
        rows = [(name, e.mean, e.stderr, e.n) for name, e in zip(chsh.PAIR_NAMES, result.correlations)]
        rows.append(("S", result.S, result.S_stderr, rows[0][3]))
        payload = _csv(("quantity", "mean", "stderr", "n"), rows)
    lines = [f"model={cfg.model} convention={cfg.convention} mode={cfg.mode}"]
    lines += [f"  {name:7s} = {e.mean:+.12f}  (stderr {e.stderr:.3g})"
              for name, e in zip(chsh.PAIR_NAMES, result.correlations)]
    lines.append(f"  S       = {result.S:+.12f}  classical bound {chsh.CLASSICAL_BOUND:g}, "
                 f"Tsirelson {chsh.TSIRELSON!r}; violates Bell: {result.violates_bell}")
    if residuals:
        lines.append(f"  max residual bivector norm = {max(residuals):.3g}")
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK


def cmd_scan(cfg: ExperimentConfig) -> int:
    kind = "bivector_scalar_part" if cfg.model == "bivector" else cfg.model
    corr = correlators.correlator(cfg.model, cfg.convention)
    points = chsh.correlation_scan(corr, (X_AXIS, Y_AXIS), cfg.resolution, cfg.run_mode())
    rows = []
    for p in points:
        b = Direction.from_angle(p.theta_deg)
        # "+ 0.0" folds -0.0 into 0.0 for stable text output
        rows.append((p.theta_deg, p.estimate.mean + 0.0,
                     correlators.exact_correlation_formula(kind, X_AXIS, b) + 0.0,
                     p.estimate.stderr, p.estimate.n))
    header = ("theta_deg", "E_mean", "E_exact", "stderr", "n")
    if cfg.format == "csv":
        payload = _csv(header, rows)
    else:
        payload = _json({"model": cfg.model, "convention": cfg.convention, "mode": cfg.mode,
                         "seed": cfg.seed, "classical_bound": chsh.CLASSICAL_BOUND,
                         "tsirelson": chsh.TSIRELSON,
                         "rows": [dict(zip(header, r)) for r in rows]})
    worst = max(abs(r[1] - r[2]) for r in rows)
    _emit(cfg, payload, f"scan model={cfg.model}: {len(rows)} points, max |E - E_exact| = {worst:.3g}")
    return EXIT_OK


def build_audit(cfg: ExperimentConfig):
    rng = np.random.default_rng(cfg.seed)
    grid = chsh.random_planar_settings(rng, cfg.grid)
    dirs = [d for s in grid for d in (s.a, s.a_prime, s.b, s.b_prime)]
    maps = [extraction.orientation_sign()]
    maps += [extraction.axis_reference(Direction.normalized(rng.normal(size=3)))
             for _ in range(cfg.references)]
    maps += [extraction.component_parity(k) for k in range(3)]
    maps += [extraction.random_table_map(rng, dirs) for _ in range(cfg.tables)]
    desc = f"{cfg.grid} random planar CHSH settings (seed {cfg.seed})"
    return maps, grid, desc


def cmd_audit(cfg: ExperimentConfig) -> int:
    maps, grid, desc = build_audit(cfg)
    report = extraction.audit_bell_bound(maps, grid, cfg.run_mode(), desc)
    if cfg.format == "json":
        payload = _json({**report.to_dict(), "seed": cfg.seed})
    else:
        payload = _csv(("map", "max_abs_S", "argmax_grid_index", "stderr_at_max"),
                       [(json.dumps(m.map.describe(), sort_keys=True), m.max_abs_S, m.argmax,
                         m.stderr_at_max) for m in report.per_map])
    _emit(cfg, payload, f"audit: {len(maps)} maps x {len(grid)} settings, "
                        f"global max |S| = {report.global_max!r}, bound holds: {report.bound_holds}")
    return EXIT_OK if report.bound_holds else EXIT_CONTRACT


def cmd_brute(cfg: ExperimentConfig) -> int:
    settings = cfg.settings()
    table = chsh.brute_force_table(settings)
    hi, arg = chsh.max_deterministic_S(settings)
    lo, _ = chsh.min_deterministic_S(settings)
    header = ("A", "A'", "B", "B'", "S")
    rows = [(*t.side1_responses, *t.side2_responses, s) for t, s in table]
    if cfg.format == "csv":
        payload = _csv(header, rows)
    else:
        payload = _json({"settings": settings.to_dict(), "rows": [dict(zip(header, r)) for r in rows],
                         "max_S": hi, "min_S": lo,
                         "argmax": {"side1": list(arg.side1_responses), "side2": list(arg.side2_responses)},
                         "classical_bound": chsh.CLASSICAL_BOUND, "tsirelson": chsh.TSIRELSON})
    _emit(cfg, payload, f"brute: {len(rows)} deterministic strategies, max S = {hi}, min S = {lo}")
    return EXIT_OK


def cmd_selftest(cases: int) -> int:
    results = selftest.run_selftest(cases)
    for name, ok, detail in results:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    failed = sum(not ok for _, ok, _ in results)
    print(f"{len(results) - failed}/{len(results)} invariants hold")
    return EXIT_OK if failed == 0 else EXIT_CONTRACT


COMMANDS = {"run": cmd_run, "scan": cmd_scan, "audit": cmd_audit, "brute": cmd_brute}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "selftest":
            if args.cases < 1:
                raise InvalidInputError("--cases must be >= 1")
            return cmd_selftest(args.cases)
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg)
    except InvalidInputError as exc:
        print(f"bellga: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContractViolation, BellGAError) as exc:
        print(f"bellga: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
