"""
Command-line front end.

    python cli.py solve --epsilon1 -2.5 --nu 0 --k 2 --range=-5:5 --samples 201
    python cli.py paramspace --k-max 3 --range=-5:5 --format csv
    python cli.py verify [--battery battery.json]

Exit codes: 0 ok, 1 verification failure, 2 singular spec with --strict,
64 usage error (including a --range beyond what the series can evaluate).
"""

import argparse
import csv
from dataclasses import dataclass
import json
import logging
import os
import sys

import numpy as np

import config
from errors import AccuracyError, ContractError, DomainError, PainleveError, RangeError
from painleve import PivSolution, parameter_space, solve_curve
from seeds import SeedSpec, regularity_check
from verify import BatteryEntry, default_battery, load_battery, run_battery

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_SINGULAR = 2
EXIT_USAGE = 64

CURVE_COLUMNS = ("x", "re_g", "im_g", "re_residual", "im_residual", "regular")
PARAMSPACE_COLUMNS = ("family", "k", "epsilon1", "a", "b", "hierarchy", "regime", "point")
VERIFY_COLUMNS = ("entry", "name", "passed", "max_residual", "points")
VERIFY_SAMPLES = 41


class UsageError(PainleveError):
    """Bad combination of command-line flags."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> tuple[float, float]:
    """'LO:HI' -> (LO, HI)."""
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


@dataclass(frozen=True)
class RunConfig:
    command: str
    epsilon1: float | None = None
    lambda_re: float | None = None
    lambda_im: float | None = None
    nu: float | None = None
    k: int = 1
    family: int = 1
    x_lo: float = -5.0
    x_hi: float = 5.0
    samples: int = 201
    k_max: int = 3
    out: str | None = None
    fmt: str = "csv"
    strict: bool = False
    battery: str | None = None
    b_offset: float = 0.0
    workers: int = 1

    def __post_init__(self):
        if self.samples < 2:
            raise UsageError(f"--samples must be >= 2, got {self.samples}")
        if not self.x_lo < self.x_hi:
            raise UsageError(f"empty range {self.x_lo}:{self.x_hi}")
        if self.nu is not None and (self.lambda_re is not None or self.lambda_im is not None):
            raise UsageError("give either --nu or --lambda-re/--lambda-im, not both")
        if self.k_max < 1:
            raise UsageError(f"--k-max must be >= 1, got {self.k_max}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        lo, hi = args.range if args.range is not None else (config.SCAN_X_LO, config.SCAN_X_HI)
        if args.samples is not None:
            samples = args.samples
        elif args.command == "verify":
            samples = VERIFY_SAMPLES
        else:
            samples = config.DEFAULT_SAMPLES
        return cls(
            command=args.command,
            epsilon1=args.epsilon1,
            lambda_re=args.lambda_re,
            lambda_im=args.lambda_im,
            nu=args.nu,
            k=args.k,
            family=args.family,
            x_lo=lo,
            x_hi=hi,
            samples=samples,
            k_max=args.k_max,
            out=args.out,
            fmt=args.format,
            strict=args.strict,
            battery=args.battery,
            b_offset=args.b_offset,
            workers=args.workers if args.workers is not None else config.WORKERS,
        )

    @property
    def has_parameter(self) -> bool:
        return self.nu is not None or self.lambda_re is not None or self.lambda_im is not None

    def seed_spec(self) -> SeedSpec:
        if self.epsilon1 is None:
            raise UsageError("--epsilon1 is required")
        if not self.has_parameter:
            raise UsageError("give --nu or --lambda-re/--lambda-im")
        if self.nu is not None:
            return SeedSpec.from_nu(self.epsilon1, self.nu, self.k, self.family)
        Lambda = complex(self.lambda_re or 0.0, self.lambda_im or 0.0)
        return SeedSpec(self.epsilon1, Lambda, self.k, self.family)

    def output_path(self) -> str:
        if self.out is None:
            return config.setup_output_path(self.command, self.fmt)
        parent = os.path.dirname(self.out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        config.set_output_path(self.out)
        return self.out


def _num(value) -> str:
    return "" if value is None else format(value, ".17g")


def _write_csv(path: str, columns, rows):
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)


def _write_json(path: str, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, ensure_ascii=False)
        f.write("\n")


def _sample_fields(sample) -> tuple:
    g = sample.g
    r = sample.residual
    return (
        sample.x,
        None if g is None else g.real,
        None if g is None else g.imag,
        None if r is None else r.real,
        None if r is None else r.imag,
    )


def curve_header(solution: PivSolution) -> dict:
    spec = solution.spec
    return {
        "epsilon1": spec.epsilon1,
        "lambda": {"re": spec.Lambda.real, "im": spec.Lambda.imag},
        "k": spec.k,
        "family": spec.family,
        "a": solution.params.a,
        "b": solution.params.b,
        "hierarchy": solution.tag.value,
    }


def write_curve(path: str, solution: PivSolution, fmt: str):
    if fmt == "csv":
        rows = []
        for s in solution.samples:
            fields = _sample_fields(s)
            rows.append([_num(v) for v in fields] + [1 if s.regular else 0])
        _write_csv(path, CURVE_COLUMNS, rows)
        return
    samples = []
    for s in solution.samples:
        samples.append(dict(zip(CURVE_COLUMNS, _sample_fields(s) + (1 if s.regular else 0,))))
    _write_json(path, {"header": curve_header(solution), "samples": samples})


def cmd_solve(cfg: RunConfig) -> int:
    spec = cfg.seed_spec()
    if cfg.strict or (spec.family != 1 and spec.is_real):
        verdict = regularity_check(spec, (cfg.x_lo, cfg.x_hi))
        if not verdict.is_regular:
            zeros = ", ".join(f"{z:.10g}" for z in verdict.zeros)
            if cfg.strict:
                logging.error(f"Spec {spec} is singular at x = {zeros}")
                print(f"singular spec: poles at x = {zeros}", file=sys.stderr)
                return EXIT_SINGULAR
            logging.warning(f"Spec {spec} is singular at x = {zeros}; poles are flagged in the output")

    xs = np.linspace(cfg.x_lo, cfg.x_hi, cfg.samples)
    solution = solve_curve(spec, xs, workers=cfg.workers)
    path = cfg.output_path()
    write_curve(path, solution, cfg.fmt)
    logging.info(f"Curve written to {path}")
    print(config.get_output_path())
    return EXIT_OK


def cmd_paramspace(cfg: RunConfig) -> int:
    records = parameter_space(cfg.k_max, cfg.x_lo, cfg.x_hi, cfg.samples)
    path = cfg.output_path()
    if cfg.fmt == "csv":
        rows = [[_num(r[c]) if isinstance(r[c], float) else r[c] for c in PARAMSPACE_COLUMNS] for r in records]
        _write_csv(path, PARAMSPACE_COLUMNS, rows)
    else:
        _write_json(path, records)
    logging.info(f"Parameter space written to {path}")
    print(config.get_output_path())
    return EXIT_OK


def _battery_for(cfg: RunConfig) -> list[BatteryEntry]:
    if cfg.battery is not None:
        try:
            return load_battery(cfg.battery)
        except (OSError, ValueError, KeyError) as e:
            raise UsageError(f"cannot read battery {cfg.battery}: {e}") from e
    if cfg.epsilon1 is not None:
        spec = cfg.seed_spec()
        return [BatteryEntry(spec, "command_line", cfg.b_offset, cfg.x_lo, cfg.x_hi, cfg.samples)]
    return default_battery()


def cmd_verify(cfg: RunConfig) -> int:
    report = run_battery(_battery_for(cfg))
    path = cfg.output_path()
    if cfg.fmt == "csv":
        rows = [
            [s["entry"], s["name"], 1 if s["passed"] else 0, _num(s["max_residual"]), s["points"]]
            for s in report["suites"]
        ]
        _write_csv(path, VERIFY_COLUMNS, rows)
    else:
        _write_json(path, report)
    logging.info(f"Verification report written to {path}: passed={report['passed']}")
    print(config.get_output_path())
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


COMMANDS = {
    "solve": cmd_solve,
    "paramspace": cmd_paramspace,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--epsilon1", type=float, help="factorization energy of the first seed")
    common.add_argument("--nu", type=float, help="real-case seed parameter")
    common.add_argument("--lambda-re", dest="lambda_re", type=float, help="real part of Lambda")
    common.add_argument("--lambda-im", dest="lambda_im", type=float, help="imaginary part of Lambda")
    common.add_argument("--k", type=int, default=1, help="SUSY order")
    common.add_argument("--family", type=int, choices=(1, 2, 3), default=1)
    common.add_argument("--range", type=parse_range, help="LO:HI, x window (epsilon1 window for paramspace)")
    common.add_argument("--samples", type=int, help="grid size")
    common.add_argument("--k-max", dest="k_max", type=int, default=3)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (default: timestamped file under runs/)")
    common.add_argument("--strict", action="store_true", help="exit 2 if the spec is singular")
    common.add_argument("--battery", help="JSON list of battery entries for verify")
    common.add_argument("--b-offset", dest="b_offset", type=float, default=0.0)
    common.add_argument("--workers", type=int, help="process pool size for sampling")
    common.add_argument("--log-level", dest="log_level", default=config.LOG_LEVEL)

    parser = _Parser(description="Painleve IV solutions from higher-order SUSY of the harmonic oscillator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common], help="sample g on an x grid")
    sub.add_parser("paramspace", parents=[common], help="(a, b) curves and hierarchy markers")
    sub.add_parser("verify", parents=[common], help="run the residual battery")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.INFO))

    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, DomainError, ContractError) as e:
        logging.error(f"Usage error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (AccuracyError, RangeError) as e:
        logging.error(f"Numeric range exceeded: {e}")
        print(f"error: {e} (narrow --range)", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
