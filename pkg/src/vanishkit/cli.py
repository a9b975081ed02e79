"""Command-line front end.

Subcommands map one-to-one onto the library: convolve, decay, coeffs,
mean, fourier, bessel, rlcheck, rajchman, blocks, suite.  Exit codes
follow one convention everywhere: 0 means the run succeeded (and any
verdict came out affirmative), 2 means a mathematical check ran and
failed (non-vanishing verdict, deviation above tolerance, hypotheses
violated, quadrature that would not converge), and 1 means the tool was
misused (bad flags, malformed JSON, unknown names).

Output is deterministic: no timestamps, sorted JSON keys, 17
significant digits in CSV.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from typing import Sequence

import numpy as np

from . import specio
from .acceptance import format_results, run_all
from .analysis import (
    VANISHING,
    coefficients_vanishing,
    decay_profile,
    mean_abs,
)
from .constructions import build_example, generate_block_sum, validate_block_sum
from .errors import (
    HypothesesNotSatisfied,
    InvalidArgument,
    QuadratureError,
    TruncationTailError,
    UnknownExample,
)
from .fourier import (
    bessel_j0_check,
    exp_sum,
    ft_compact,
    rajchman_check,
    rl_crosscheck,
    series_density,
    spectral_constant,
    spectral_series,
    spectral_sinc_sq,
)
from .measures import AbsCont, FiniteAtoms, PurePoint, convolve_grid
from .testfunctions import tf_hat

__all__ = ["main", "entrypoint"]


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the convention here is 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_spec_text(value: str) -> str:
    if value.lstrip().startswith("{"):
        return value
    if os.path.exists(value):
        with open(value, "r") as fh:
            return fh.read()
    raise InvalidArgument(f"spec file not found: {value}")


def _load_measure(args: argparse.Namespace):
    if not args.spec:
        raise InvalidArgument("--spec is required for this command")
    return specio.parse_measure_spec(_load_spec_text(args.spec))


def _test_function(args: argparse.Namespace):
    step = args.f_step if args.f_step is not None else None
    return tf_hat(args.f_center, args.f_halfwidth, args.f_height, step=step)


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidArgument("--grid expects lo:hi:step")
    lo, hi, step = (float(p) for p in parts)
    if step <= 0.0 or hi < lo:
        raise InvalidArgument("--grid expects lo <= hi and step > 0")
    n = int(np.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(n + 1)


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InvalidArgument(f"{flag} expects comma-separated numbers")
    if not values:
        raise InvalidArgument(f"{flag} expects at least one value")
    return values


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header: str, rows: Sequence[Sequence[float]]) -> str:
    buf = io.StringIO()
    specio.write_csv(buf, header, rows)
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _default_annulus_step(f, radii: Sequence[float]) -> float:
    # Cap the scan at ~200k sample points so huge radii stay responsive.
    return max(f.step / 2.0, 2.0 * max(radii) / 200000.0)


def _cmd_convolve(args: argparse.Namespace) -> int:
    mu = _load_measure(args)
    f = _test_function(args)
    xs = _parse_grid(args.grid)
    values = convolve_grid(mu, f, xs, tol=args.tolerance)
    if args.format == "json":
        rows = [
            {"x": float(x), "re": float(v.real), "im": float(v.imag)}
            for x, v in zip(xs, values)
        ]
        _emit(args, _json_text({"rows": rows}))
    else:
        _emit(args, _csv_text("x,re,im", specio.xy_rows(xs, values)))
    return 0


def _cmd_decay(args: argparse.Namespace) -> int:
    mu = _load_measure(args)
    f = _test_function(args)
    radii = _parse_floats(args.radii, "--radii")
    profile = decay_profile(
        mu, f, radii, args.epsilon, annulus_step=_default_annulus_step(f, radii)
    )
    if args.format == "json":
        _emit(args, _json_text(specio.decay_report_dict(profile)))
    else:
        _emit(args, _csv_text("R,sup", specio.decay_rows(profile)))
    return 0 if profile.verdict == VANISHING else 2


def _cmd_coeffs(args: argparse.Namespace) -> int:
    mu = _load_measure(args)
    if not isinstance(mu, PurePoint):
        raise InvalidArgument("coeffs expects a pure-point measure spec")
    cv = coefficients_vanishing(mu.source, args.epsilon, r_max=args.rmax)
    if args.format == "json":
        _emit(args, _json_text(specio.coeffs_report_dict(cv)))
    else:
        _emit(
            args,
            "verdict,radius,scanned\n"
            f"{cv.verdict},{specio.fmt(cv.radius)},{cv.scanned}\n",
        )
    return 0 if cv.verdict == VANISHING else 2


def _cmd_mean(args: argparse.Namespace) -> int:
    mu = _load_measure(args)
    f = _test_function(args)
    n_list = [int(v) for v in _parse_floats(args.nlist, "--nlist")]
    trace = mean_abs(mu, f, n_list)
    if args.format == "json":
        _emit(args, _json_text(specio.mean_report_dict(trace)))
    else:
        _emit(args, _csv_text("n,average", specio.mean_rows(trace)))
    return 0


def _cmd_fourier(args: argparse.Namespace) -> int:
    ks = _parse_grid(args.grid)
    if args.spec:
        mu = specio.parse_measure_spec(_load_spec_text(args.spec))
        if isinstance(mu, PurePoint):
            if not isinstance(mu.source, FiniteAtoms):
                raise InvalidArgument(
                    "fourier on a pure-point spec needs a finite_atoms builder"
                )
            atoms = list(
                zip(mu.source.positions.tolist(), mu.source.weights.tolist())
            )
            values = exp_sum(atoms, ks)
        elif isinstance(mu, AbsCont):
            values = ft_compact(mu.density, ks, tol=args.tolerance)
        else:
            raise InvalidArgument(
                "fourier expects a pure-point or absolutely continuous root"
            )
        if args.format == "json":
            rows = [
                {"k": float(k), "re": float(v.real), "im": float(v.imag)}
                for k, v in zip(ks, values)
            ]
            _emit(args, _json_text({"rows": rows}))
        else:
            _emit(args, _csv_text("k,re,im", specio.xy_rows(ks, values)))
        return 0
    values = series_density(ks, args.truncation)
    if args.format == "json":
        rows = [{"k": float(k), "value": float(v)} for k, v in zip(ks, values)]
        _emit(args, _json_text({"rows": rows}))
    else:
        _emit(args, _csv_text("k,value", specio.spectral_rows(ks, values)))
    return 0


def _cmd_bessel(args: argparse.Namespace) -> int:
    rs = _parse_grid(args.grid)
    pairs = [bessel_j0_check(float(r), quad_points=512) for r in rs]
    worst = max(abs(lhs - rhs) for lhs, rhs in pairs)
    if args.format == "json":
        rows = [
            {
                "r": float(r),
                "lhs": lhs,
                "rhs": rhs,
                "deviation": abs(lhs - rhs),
            }
            for r, (lhs, rhs) in zip(rs, pairs)
        ]
        _emit(args, _json_text({"max_deviation": worst, "rows": rows}))
    else:
        _emit(args, _csv_text("r,lhs,rhs,deviation", specio.bessel_rows(rs, pairs)))
    return 0 if worst <= args.tolerance else 2


def _spectral_density(args: argparse.Namespace):
    if args.density == "const":
        return spectral_constant(1.0)
    if args.density == "sincsq":
        return spectral_sinc_sq()
    return spectral_series(args.truncation)


def _cmd_rlcheck(args: argparse.Namespace) -> int:
    if args.spec:
        mu = specio.parse_measure_spec(_load_spec_text(args.spec))
    else:
        mu = build_example("ex_sinc_series", truncation=args.truncation)
    f = _test_function(args)
    xs = _parse_grid(args.grid)
    report = rl_crosscheck(mu, _spectral_density(args), f, xs, tolerance=args.tolerance)
    if args.format == "json":
        _emit(args, _json_text(specio.rl_report_dict(report)))
    else:
        _emit(
            args,
            _csv_text(
                "x,direct_re,direct_im,spectral_re,spectral_im,deviation",
                specio.rl_rows(report),
            ),
        )
    return 0 if report.max_deviation <= args.tolerance else 2


def _cmd_rajchman(args: argparse.Namespace) -> int:
    mu = _load_measure(args)
    f = _test_function(args)
    radii = _parse_floats(args.radii, "--radii")
    profile = rajchman_check(
        mu, f, radii, epsilon=args.epsilon,
        annulus_step=_default_annulus_step(f, radii),
    )
    if args.format == "json":
        _emit(args, _json_text(specio.decay_report_dict(profile)))
    else:
        _emit(args, _csv_text("R,sup", specio.decay_rows(profile)))
    return 0 if profile.verdict == VANISHING else 2


def _cmd_blocks(args: argparse.Namespace) -> int:
    if not args.spec:
        raise InvalidArgument("--spec is required for this command")
    inp = specio.parse_block_spec(_load_spec_text(args.spec))
    report = validate_block_sum(inp)
    payload = specio.block_report_dict(report)
    if report.overall:
        generated = generate_block_sum(inp)
        payload["covered"] = [generated.covered.lo, generated.covered.hi]
        payload["n_parts"] = generated.n_parts
    if args.format == "json":
        _emit(args, _json_text(payload))
    else:
        lines = ["field,value"]
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, float):
                value = specio.fmt(value)
            lines.append(f"{key},{value}")
        _emit(args, "\n".join(lines) + "\n")
    return 0 if report.overall else 2


def _cmd_suite(args: argparse.Namespace) -> int:
    only = None
    if args.only:
        only = [int(v) for v in _parse_floats(args.only, "--only")]
    results = run_all(only=only)
    passed = sum(1 for r in results if r.passed)
    text = format_results(results)
    text += f"\n{passed}/{len(results)} criteria passed\n"
    _emit(args, text)
    return 0 if passed == len(results) else 2


def build_parser() -> _Parser:
    parser = _Parser(prog="vanishkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    spec_p = argparse.ArgumentParser(add_help=False)
    spec_p.add_argument("--spec", help="measure-spec JSON, inline or a file path")

    out_p = argparse.ArgumentParser(add_help=False)
    out_p.add_argument("--out", help="output path (default: stdout)")
    out_p.add_argument("--format", choices=("csv", "json"), default="csv")

    def f_parent(center=0.0, halfwidth=0.25, height=1.0):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--f-center", type=float, default=center)
        p.add_argument("--f-halfwidth", type=float, default=halfwidth)
        p.add_argument("--f-height", type=float, default=height)
        p.add_argument("--f-step", type=float, default=None)
        return p

    p = sub.add_parser(
        "convolve", parents=[spec_p, f_parent(), out_p], help="sample mu*f on a grid"
    )
    p.add_argument("--grid", required=True, help="lo:hi:step")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.set_defaults(func=_cmd_convolve)

    p = sub.add_parser(
        "decay",
        parents=[spec_p, f_parent(), out_p],
        help="annulus sup profile of mu*f; exit 2 unless it vanishes",
    )
    p.add_argument("--radii", default="50,100,200", help="comma-separated radii")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.set_defaults(func=_cmd_decay)

    p = sub.add_parser(
        "coeffs",
        parents=[spec_p, out_p],
        help="atom-weight decay verdict for a pure-point spec",
    )
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--rmax", type=float, default=1000.0)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser(
        "mean",
        parents=[spec_p, f_parent(), out_p],
        help="averages of |mu*f| over growing centered intervals",
    )
    p.add_argument("--nlist", default="10,100,1000", help="comma-separated horizons")
    p.set_defaults(func=_cmd_mean)

    p = sub.add_parser(
        "fourier",
        parents=[spec_p, out_p],
        help="transform values on a frequency grid",
    )
    p.add_argument("--grid", required=True, help="lo:hi:step")
    p.add_argument("--truncation", type=int, default=20)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.set_defaults(func=_cmd_fourier)

    p = sub.add_parser(
        "bessel", parents=[out_p], help="circle-average identity table"
    )
    p.add_argument("--grid", default="0:10:0.1", help="lo:hi:step over r")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.set_defaults(func=_cmd_bessel)

    p = sub.add_parser(
        "rlcheck",
        parents=[spec_p, f_parent(halfwidth=0.5), out_p],
        help="direct vs spectral autocorrelation cross-check",
    )
    p.add_argument("--grid", default="-3:3:0.025", help="lo:hi:step")
    p.add_argument("--density", choices=("const", "sincsq", "series"), default="series")
    p.add_argument("--truncation", type=int, default=20)
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.set_defaults(func=_cmd_rlcheck)

    p = sub.add_parser(
        "rajchman",
        parents=[spec_p, f_parent(), out_p],
        help="decay profile of the spatial autocorrelation mu*f*(f reflected)",
    )
    p.add_argument("--radii", default="6,12,24,48", help="comma-separated radii")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.set_defaults(func=_cmd_rajchman)

    p = sub.add_parser(
        "blocks",
        parents=[spec_p, out_p],
        help="validate a block-sum description and generate the measure",
    )
    p.set_defaults(func=_cmd_blocks)

    p = sub.add_parser("suite", parents=[out_p], help="run the acceptance criteria")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=_cmd_suite)

    return parser


_VALUE_FLAGS = {
    "--grid", "--radii", "--nlist", "--only",
    "--f-center", "--f-halfwidth", "--f-height", "--f-step",
    "--epsilon", "--rmax", "--tolerance",
}


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Fold ``--grid -3:3:0.1`` into ``--grid=-3:3:0.1``.

    argparse would otherwise read the value as an unknown option because
    it starts with a dash.
    """
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            nxt = argv[i + 1]
            if len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_negative_values(list(argv)))
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(
            f"error: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 1
    except (InvalidArgument, UnknownExample, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TruncationTailError as exc:
        print(f"error: frequency truncation insufficient: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"error: quadrature did not converge: {exc}", file=sys.stderr)
        return 2
    except HypothesesNotSatisfied as exc:
        print(f"error: hypotheses not satisfied: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
