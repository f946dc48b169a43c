"""Command line front end.

Every subcommand prints deterministic text: identical inputs produce
byte-identical output. Numeric results are shown with 40 significant
digits by default; --full-precision switches to exact serialized tags
that round-trip without loss.

Exit codes: 0 success, 2 configuration or usage problems, 3 violated
mathematical invariants, 4 file I/O failures.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
from contextlib import contextmanager

from . import __version__, checks
from .disks import sup_on_circle, sup_on_line
from .errors import ConfigError, MathInvariantError
from .experiments import (
    default_grid,
    emit_figure,
    fit_c1,
    fit_quadrature_rate,
    fit_truncation_rate,
    run_figure,
    validate_tail_bound,
)
from .hermite import build_rule, k_for_support, rule_from_csv, rule_to_csv
from .measures import (
    DiscreteMeasure,
    StandardGaussian,
    TruncatedGaussian,
)
from .precision import MIN_BITS, PComplex, PReal, working_bits
from .superflat import build_superflat, flatness_certificate, superflat_to_csv

_ENV_PRECISION = "GAUSDISK_PRECISION"


# ---------------------------------------------------------------------------
# shared option handling


def _bits_from_text(text: str, source: str) -> int:
    try:
        bits = int(text)
    except ValueError:
        raise ConfigError(
            f"{source} must be 'auto' or an integer bit count, got {text!r}"
        ) from None
    if bits < MIN_BITS:
        raise ConfigError(f"{source} must be at least {MIN_BITS} bits, got {bits}")
    return bits


def _resolve_bits(args, auto_policy) -> int:
    """Precedence: explicit --precision, then the environment, then policy."""
    if args.precision != "auto":
        return _bits_from_text(args.precision, "--precision")
    env = os.environ.get(_ENV_PRECISION)
    if env is not None and env.strip() and env.strip().lower() != "auto":
        return _bits_from_text(env.strip(), _ENV_PRECISION)
    return auto_policy()


def _explicit_bits(args) -> int | None:
    """The bit count pinned by flag or environment, or None for auto."""
    if args.precision != "auto":
        return _bits_from_text(args.precision, "--precision")
    env = os.environ.get(_ENV_PRECISION)
    if env is not None and env.strip() and env.strip().lower() != "auto":
        return _bits_from_text(env.strip(), _ENV_PRECISION)
    return None


def _fmt_real(value: PReal, full: bool) -> str:
    return value.serialize() if full else value.str_digits(40)


def _fmt_complex(value: PComplex, full: bool) -> str:
    return f"{_fmt_real(value.real, full)} {_fmt_real(value.imag, full)}"


@contextmanager
def _out_stream(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            yield handle


# ---------------------------------------------------------------------------
# measure specifications

_MEASURE_HELP = "gauss | trunc:A | rule:K | rulefor:A | csv:PATH"


def _parse_measure_spec(spec: str):
    kind, sep, rest = spec.partition(":")
    kind = kind.strip().lower()
    rest = rest.strip()
    if kind == "gauss" and not sep:
        return ("gauss", None)
    if kind in ("trunc", "rulefor") and sep:
        try:
            a = float(rest)
        except ValueError:
            raise ConfigError(
                f"measure spec {spec!r}: expected a numeric half-width"
            ) from None
        if not math.isfinite(a) or a <= 0:
            raise ConfigError(f"measure spec {spec!r}: half-width must be positive")
        return (kind, a)
    if kind == "rule" and sep:
        try:
            k = int(rest)
        except ValueError:
            raise ConfigError(
                f"measure spec {spec!r}: expected an integer node count"
            ) from None
        if k < 1:
            raise ConfigError(f"measure spec {spec!r}: node count must be >= 1")
        return ("rule", k)
    if kind == "csv" and sep:
        if not rest:
            raise ConfigError(f"measure spec {spec!r}: missing file path")
        return ("csv", rest)
    raise ConfigError(f"unknown measure spec {spec!r}; use {_MEASURE_HELP}")


def _measure_and_bits(args, radius_hint: float):
    """Build the requested measure at the resolved working precision.

    Auto precision uses the support half-width implied by the spec
    together with the largest evaluation radius the command will touch.
    """
    kind, value = _parse_measure_spec(args.measure)
    radius = max(1.0, float(radius_hint))
    if kind == "csv":
        with open(value, "r", encoding="utf-8") as handle:
            text = handle.read()
        first = next(
            (ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")),
            "",
        )
        if first == "node,weight":
            loaded = DiscreteMeasure.from_quadrature(rule_from_csv(io.StringIO(text)))
        else:
            loaded = DiscreteMeasure.from_csv(io.StringIO(text))
        bits = _explicit_bits(args)
        if bits is None or bits == loaded.bits:
            return loaded, loaded.bits
        atoms = [(x.round_to(bits), w.round_to(bits)) for x, w in loaded.atoms]
        return DiscreteMeasure(atoms, bits), bits

    if kind == "gauss":
        bits = _resolve_bits(args, lambda: working_bits(1.0, radius))
        return StandardGaussian(bits), bits
    if kind == "trunc":
        bits = _resolve_bits(args, lambda: working_bits(value, radius))
        return TruncatedGaussian(value, bits), bits
    if kind == "rule":
        support = math.sqrt(4 * value + 2)
        bits = _resolve_bits(args, lambda: working_bits(support, radius))
        return DiscreteMeasure.from_quadrature(build_rule(value, bits)), bits
    # rulefor: smallest rule whose nodes fit inside [-a, a]
    bits = _resolve_bits(args, lambda: working_bits(value, radius))
    k = k_for_support(value)
    return DiscreteMeasure.from_quadrature(build_rule(k, bits)), bits


# ---------------------------------------------------------------------------
# config file overlay

_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}


def _parse_config_bool(key: str, text: str) -> bool:
    low = text.strip().lower()
    if low in _TRUE_WORDS:
        return True
    if low in _FALSE_WORDS:
        return False
    raise ConfigError(f"config key {key!r}: expected a boolean, got {text!r}")


# dest -> (option string, converter); used both to validate config keys and
# to skip keys the user already pinned on the command line
_CONFIG_KEYS = {
    "precision": ("--precision", str),
    "full_precision": ("--full-precision", _parse_config_bool),
    "out": ("--out", str),
    "k": ("--k", int),
    "a": ("--a", float),
    "measure": ("--measure", str),
    "what": ("--what", str),
    "r": ("--r", float),
    "line": ("--line", _parse_config_bool),
    "samples": ("--samples", int),
    "grid": ("--grid", str),
    "b": ("--b", float),
    "csv": ("--csv", str),
    "svg": ("--svg", str),
    "manifest": ("--manifest", str),
    "certify": ("--certify", _parse_config_bool),
    "quick": ("--quick", _parse_config_bool),
}


def _read_config_file(path: str) -> dict:
    pairs = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw_line in enumerate(handle, start=1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(
                    f"{path}:{lineno}: expected key=value, got {line!r}"
                )
            key, _, value = line.partition("=")
            pairs[key.strip().replace("-", "_")] = value.strip()
    return pairs


def _apply_config(args, argv) -> None:
    """Fill settings from the config file without overriding the CLI.

    A key takes effect only when its option string is absent from the
    command line and the active subcommand actually defines it.
    """
    pairs = _read_config_file(args.config)
    pinned = set()
    for token in argv:
        if token == "--":
            break
        if token.startswith("--"):
            pinned.add(token.split("=", 1)[0])
    for key, text in pairs.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r} in {args.config}")
        option, convert = _CONFIG_KEYS[key]
        if not hasattr(args, key):
            continue
        if option in pinned:
            continue
        try:
            value = convert(text) if convert is not _parse_config_bool else convert(key, text)
        except ConfigError:
            raise
        except ValueError:
            raise ConfigError(
                f"config key {key!r}: could not parse value {text!r}"
            ) from None
        setattr(args, key, value)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_rule(args) -> int:
    if (args.k is None) == (args.a is None):
        raise ConfigError("rule: give exactly one of --k or --a")
    if args.k is not None:
        if args.k < 1:
            raise ConfigError("rule: --k must be >= 1")
        k = args.k
        support = math.sqrt(4 * k + 2)
    else:
        if not math.isfinite(args.a) or args.a <= 0:
            raise ConfigError("rule: --a must be positive")
        k = k_for_support(args.a)
        support = args.a
    bits = _resolve_bits(args, lambda: working_bits(support, 1.0))
    rule = build_rule(k, bits)
    with _out_stream(args.out) as out:
        rule_to_csv(rule, out)
    return 0


def _parse_complex_token(token: str) -> tuple[str, str]:
    parts = token.replace(",", " ").split()
    if len(parts) == 1:
        return parts[0], "0"
    if len(parts) == 2:
        return parts[0], parts[1]
    raise ConfigError(f"--z expects 'RE' or 'RE,IM', got {token!r}")


def _cmd_transform(args) -> int:
    points = []
    for token in args.z or []:
        re_text, im_text = _parse_complex_token(token)
        points.append(("z", re_text, im_text))
    for token in args.t or []:
        points.append(("t", token, "0"))
    if not points:
        raise ConfigError("transform: give at least one --z or --t")

    def rough(text: str) -> float:
        try:
            return abs(float(text))
        except ValueError:
            raise ConfigError(f"could not parse number {text!r}") from None

    radius = max(math.hypot(rough(re), rough(im)) for _, re, im in points)
    measure, bits = _measure_and_bits(args, radius)
    full = args.full_precision
    with _out_stream(args.out) as out:
        for tag, re_text, im_text in points:
            try:
                re_val = PReal(re_text, bits)
                im_val = PReal(im_text, bits)
            except ConfigError:
                raise
            point = PComplex(re_val, im_val)
            if args.what == "char":
                result = measure.char_fn(point if tag == "z" else re_val)
            elif args.what == "laplace":
                result = measure.laplace(point)
            else:
                result = measure.laplace_error(point)
            label = "t" if tag == "t" else "z"
            print(
                f"{label} {_fmt_real(re_val, full)} {_fmt_real(im_val, full)} "
                f"{args.what} {_fmt_complex(result, full)}",
                file=out,
            )
    return 0


def _cmd_supdisk(args) -> int:
    if not math.isfinite(args.r) or args.r < 0:
        raise ConfigError("supdisk: --r must be nonnegative")
    if args.samples < 8:
        raise ConfigError("supdisk: --samples must be at least 8")
    measure, bits = _measure_and_bits(args, args.r)
    full = args.full_precision
    with _out_stream(args.out) as out:
        if args.line:
            report = sup_on_line(measure, args.r, bits=bits, n_samples=args.samples)
            print(f"line_offset {_fmt_real(report.offset, full)}", file=out)
            print(f"bits {bits}", file=out)
            print(f"samples {report.n_samples}", file=out)
            print(f"sup_lower_bound {_fmt_real(report.sup_value, full)}", file=out)
            print(f"witness {_fmt_complex(report.witness, full)}", file=out)
            print(f"scan_height {_fmt_real(report.height, full)}", file=out)
            print(f"tail_ceiling {_fmt_real(report.tail_ceiling, full)}", file=out)
            print(f"certified {report.certified}", file=out)
        else:
            if args.r == 0:
                raise ConfigError("supdisk: circle radius must be positive")
            report = sup_on_circle(measure, args.r, bits=bits, n_samples=args.samples)
            print(f"circle_radius {_fmt_real(report.radius, full)}", file=out)
            print(f"bits {bits}", file=out)
            print(f"samples {report.n_samples}", file=out)
            print(f"arc {report.arc}", file=out)
            print(f"sup_lower_bound {_fmt_real(report.sup_value, full)}", file=out)
            print(f"witness {_fmt_complex(report.witness, full)}", file=out)
    return 0


def _parse_grid_text(text: str):
    text = text.strip()
    if not text:
        raise ConfigError("figure: empty --grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError("figure: range grids use START:STOP:STEP")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"figure: could not parse grid {text!r}") from None
        if step <= 0 or stop < start:
            raise ConfigError("figure: need STEP > 0 and STOP >= START")
        values = []
        index = 0
        while True:
            value = start + index * step
            if value > stop + 1e-9:
                break
            values.append(round(value, 12))
            index += 1
        return values
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"figure: could not parse grid {text!r}") from None


def _cmd_figure(args) -> int:
    grid = _parse_grid_text(args.grid) if args.grid else default_grid()
    if args.samples < 8:
        raise ConfigError("figure: --samples must be at least 8")
    if not math.isfinite(args.b) or args.b <= 0:
        raise ConfigError("figure: --b must be positive")
    override = _explicit_bits(args)
    table = run_figure(
        grid, b=args.b, n_samples=args.samples, bits_override=override
    )
    full = args.full_precision
    with _out_stream(args.out) as out:
        for row in table.rows:
            print(
                f"a {row.a!r} k {row.k} bits {row.bits} "
                f"err_trunc {_fmt_real(row.err_trunc, full)} "
                f"err_quad {_fmt_real(row.err_quad, full)}",
                file=out,
            )
        trunc_fit = quad_fit = model = None
        try:
            trunc_fit = fit_truncation_rate(table)
            print(
                f"fit_trunc slope {trunc_fit.slope:.6f} "
                f"intercept {trunc_fit.intercept:.6f} rows {trunc_fit.n_rows}",
                file=out,
            )
        except Exception as exc:  # noqa: BLE001 - report, keep going
            print(f"fit_trunc unavailable: {exc}", file=out)
        try:
            quad_fit = fit_quadrature_rate(table)
            print(
                f"fit_quad slope {quad_fit.slope:.6f} "
                f"intercept {quad_fit.intercept:.6f} rows {quad_fit.n_rows}",
                file=out,
            )
        except Exception as exc:  # noqa: BLE001
            print(f"fit_quad unavailable: {exc}", file=out)
        try:
            model = fit_c1(table)
            print(
                f"fit_c1 {_fmt_real(model.c1, full)} binding_a {model.binding_a!r} "
                f"floored {model.floored}",
                file=out,
            )
        except Exception as exc:  # noqa: BLE001
            print(f"fit_c1 unavailable: {exc}", file=out)
        if model is not None:
            for row in table.rows:
                report = validate_tail_bound(
                    row.a,
                    table.b,
                    c1_fit=model.c1,
                    err_quad=row.err_quad,
                    bits=min(row.bits, 512),
                )
                flags = ",".join(
                    f"{name}={value}" for name, value in sorted(report.checks.items())
                )
                print(f"tail_chain a {row.a!r} {flags}", file=out)
    emit_figure(
        table,
        csv_path=args.csv,
        svg_path=args.svg,
        manifest_path=args.manifest,
        model=model,
        trunc_fit=trunc_fit,
        quad_fit=quad_fit,
    )
    return 0


def _cmd_superflat(args) -> int:
    if not math.isfinite(args.a) or args.a < 4:
        raise ConfigError("superflat: --a must be at least 4")
    if args.samples < 8:
        raise ConfigError("superflat: --samples must be at least 8")
    bits = _resolve_bits(args, lambda: working_bits(args.a, 2.0))
    mixture = build_superflat(args.a, bits)
    full = args.full_precision
    with _out_stream(args.out) as out:
        superflat_to_csv(mixture, out)
        if args.certify:
            certificate = flatness_certificate(mixture, n_samples=args.samples)
            print(f"# certificate_passed {certificate.passed}", file=out)
            print(
                f"# boundary_deviation {_fmt_real(certificate.eps2, full)}",
                file=out,
            )
            print(
                f"# deviation_witness "
                f"{_fmt_complex(certificate.eps2_witness, full)}",
                file=out,
            )
            for index, bound in enumerate(certificate.derivative_bounds):
                order = index + 1
                line = f"# derivative {order} cauchy_bound {_fmt_real(bound, full)}"
                if index < len(certificate.direct_sups):
                    direct = certificate.direct_sups[index]
                    ratio = certificate.ratios[index]
                    line += (
                        f" direct_sup {_fmt_real(direct, full)}"
                        f" ratio {ratio:.6f}"
                    )
                print(line, file=out)
    return 0


def _cmd_verify(args) -> int:
    ok = checks.run_all(quick=args.quick, emit=print)
    return 0 if ok else 3


# ---------------------------------------------------------------------------
# parser assembly


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--precision",
        default="auto",
        metavar="BITS",
        help="working precision in bits, or 'auto' for the built-in policy "
        f"(environment override: {_ENV_PRECISION})",
    )
    common.add_argument(
        "--config",
        default=None,
        metavar="PATH",
        help="key=value file supplying defaults for options not given here",
    )
    common.add_argument(
        "--full-precision",
        action="store_true",
        help="print exact serialized values instead of 40 significant digits",
    )
    common.add_argument(
        "--out",
        default=None,
        metavar="PATH",
        help="write output to a file instead of stdout",
    )

    parser = argparse.ArgumentParser(
        prog="gausdisk",
        description="Compactly supported stand-ins for the standard Gaussian: "
        "quadrature rules, transform error bounds on disks, and flatness "
        "certificates, all at configurable precision.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rule = sub.add_parser(
        "rule",
        parents=[common],
        help="print a Gaussian quadrature rule as CSV",
    )
    group = p_rule.add_argument_group("rule selection")
    group.add_argument("--k", type=int, default=None, help="number of nodes")
    group.add_argument(
        "--a",
        type=float,
        default=None,
        help="support half-width; picks the smallest rule fitting inside",
    )
    p_rule.set_defaults(func=_cmd_rule)

    p_transform = sub.add_parser(
        "transform",
        parents=[common],
        help="evaluate a measure's exponential transform at given points",
    )
    p_transform.add_argument(
        "--measure", default="gauss", metavar="SPEC", help=_MEASURE_HELP
    )
    p_transform.add_argument(
        "--z",
        action="append",
        metavar="RE[,IM]",
        help="complex evaluation point (repeatable)",
    )
    p_transform.add_argument(
        "--t",
        action="append",
        metavar="T",
        help="real frequency, evaluated on the imaginary axis (repeatable)",
    )
    p_transform.add_argument(
        "--what",
        choices=("laplace", "error", "char"),
        default="error",
        help="which quantity to print (default: error against the Gaussian)",
    )
    p_transform.set_defaults(func=_cmd_transform)

    p_supdisk = sub.add_parser(
        "supdisk",
        parents=[common],
        help="certified lower bound for the transform error sup on a circle "
        "or vertical line",
    )
    p_supdisk.add_argument(
        "--measure", default="gauss", metavar="SPEC", help=_MEASURE_HELP
    )
    p_supdisk.add_argument(
        "--r",
        type=float,
        required=True,
        help="circle radius, or the real offset of the line with --line",
    )
    p_supdisk.add_argument(
        "--line",
        action="store_true",
        help="scan the vertical line Re z = R instead of the circle |z| = R",
    )
    p_supdisk.add_argument(
        "--samples", type=int, default=1024, help="seed points for the scan"
    )
    p_supdisk.set_defaults(func=_cmd_supdisk)

    p_figure = sub.add_parser(
        "figure",
        parents=[common],
        help="run the two error curves over a grid of support half-widths "
        "and emit CSV/SVG/manifest artifacts",
    )
    p_figure.add_argument(
        "--grid",
        default=None,
        metavar="START:STOP:STEP|A,B,...",
        help="support half-widths to measure (default 4:12:0.5)",
    )
    p_figure.add_argument(
        "--b", type=float, default=1.0, help="disk radius for the error sups"
    )
    p_figure.add_argument(
        "--samples", type=int, default=256, help="seed points per boundary scan"
    )
    p_figure.add_argument("--csv", default=None, metavar="PATH")
    p_figure.add_argument("--svg", default=None, metavar="PATH")
    p_figure.add_argument("--manifest", default=None, metavar="PATH")
    p_figure.set_defaults(func=_cmd_figure)

    p_superflat = sub.add_parser(
        "superflat",
        parents=[common],
        help="build the tilted mixture whose transform is flat on a disk",
    )
    p_superflat.add_argument(
        "--a", type=float, required=True, help="support half-width (>= 4)"
    )
    p_superflat.add_argument(
        "--certify",
        action="store_true",
        help="append the flatness certificate to the output",
    )
    p_superflat.add_argument(
        "--samples", type=int, default=512, help="seed points per certificate scan"
    )
    p_superflat.set_defaults(func=_cmd_superflat)

    p_verify = sub.add_parser(
        "verify",
        parents=[common],
        help="run the internal cross-check suite",
    )
    p_verify.add_argument(
        "--quick",
        action="store_true",
        help="smaller parameter ranges, same set of checks",
    )
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        if getattr(args, "config", None):
            _apply_config(args, argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MathInvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
