"""Measure-spec JSON parsing and deterministic CSV/JSON report emission.

The measure-spec wire format is ``{"expr": {"kind": ...}}`` where kind is
one of pp, ac, example, translate, reflect, scale, sum.  Unknown keys or
kinds are rejected with a path to the offending entry.  All emitters format
floats with 17 significant digits and produce byte-identical output for
identical inputs.
"""

from __future__ import annotations

import json
from typing import Any, IO, Sequence

import numpy as np

from .analysis import CoefficientVerdict, DecayProfile, MeanTrace
from .constructions import (
    BlockPart,
    BlockSumInput,
    HypothesisReport,
    build_example,
    ex_a_block_input,
    ex_b_block_input,
    nu_block_input,
)
from .errors import InvalidArgument
from .fourier import RLReport
from .measures import (
    AbsCont,
    ConstantDensity,
    FiniteAtoms,
    IndicatorDensity,
    LatticeComb,
    MeasureExpr,
    PurePoint,
    ReflectConj,
    Scale,
    Sum,
    Translate,
    TriangleDensity,
)
from .testfunctions import Window

__all__ = [
    "parse_measure_spec",
    "parse_block_spec",
    "block_input_to_dict",
    "fmt",
    "write_csv",
    "xy_rows",
    "decay_rows",
    "mean_rows",
    "spectral_rows",
    "rl_rows",
    "bessel_rows",
    "decay_report_dict",
    "mean_report_dict",
    "coeffs_report_dict",
    "rl_report_dict",
    "block_report_dict",
]


def _reject_unknown(d: dict, allowed: set[str], where: str) -> None:
    extra = set(d) - allowed
    if extra:
        raise InvalidArgument(f"unknown key(s) {sorted(extra)} in {where}")


def _require(d: dict, key: str, where: str) -> Any:
    if key not in d:
        raise InvalidArgument(f"missing key {key!r} in {where}")
    return d[key]


def _as_float(v: Any, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InvalidArgument(f"expected a number in {where}, got {v!r}")
    return float(v)


_WEIGHT_RULES = {
    "ones": lambda n: np.ones(n.shape, dtype=np.complex128),
    "harmonic": lambda n: (1.0 / (1.0 + np.abs(n))).astype(np.complex128),
}


def _parse_pp(d: dict, where: str) -> MeasureExpr:
    builder = _require(d, "builder", where)
    if builder == "ex_a" or builder == "ex_nu":
        _reject_unknown(d, {"kind", "builder"}, where)
        return build_example(builder)
    if builder == "finite_atoms":
        _reject_unknown(d, {"kind", "builder", "atoms"}, where)
        rows = _require(d, "atoms", where)
        atoms = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != 3:
                raise InvalidArgument(f"atom {i} in {where} must be [pos, re, im]")
            p, re, im = (_as_float(v, f"{where}.atoms[{i}]") for v in row)
            atoms.append((p, complex(re, im)))
        return PurePoint(FiniteAtoms(atoms))
    if builder == "lattice":
        _reject_unknown(d, {"kind", "builder", "spacing", "offset", "weights"}, where)
        spacing = _as_float(d.get("spacing", 1.0), where)
        offset = _as_float(d.get("offset", 0.0), where)
        rule = d.get("weights", "ones")
        if rule not in _WEIGHT_RULES:
            raise InvalidArgument(f"unknown lattice weights {rule!r} in {where}")
        return PurePoint(LatticeComb(spacing, offset, _WEIGHT_RULES[rule]))
    raise InvalidArgument(f"unknown pp builder {builder!r} in {where}")


def _parse_ac(d: dict, where: str) -> MeasureExpr:
    builder = _require(d, "builder", where)
    if builder in ("ex_bf", "ex_tent", "j0_radial"):
        _reject_unknown(d, {"kind", "builder"}, where)
        return build_example(builder)
    if builder == "indicator":
        _reject_unknown(d, {"kind", "builder", "interval"}, where)
        iv = _require(d, "interval", where)
        if not isinstance(iv, list) or len(iv) != 2:
            raise InvalidArgument(f"indicator interval in {where} must be [a, b]")
        a, b = (_as_float(v, where) for v in iv)
        return AbsCont(IndicatorDensity(a, b))
    if builder == "triangle":
        _reject_unknown(d, {"kind", "builder", "center", "halfwidth", "height"}, where)
        return AbsCont(
            TriangleDensity(
                _as_float(d.get("center", 0.0), where),
                _as_float(d.get("halfwidth", 1.0), where),
                _as_float(d.get("height", 1.0), where),
            )
        )
    if builder == "constant":
        _reject_unknown(d, {"kind", "builder", "value", "support"}, where)
        sup = None
        if "support" in d:
            iv = d["support"]
            if not isinstance(iv, list) or len(iv) != 2:
                raise InvalidArgument(f"constant support in {where} must be [a, b]")
            sup = Window(_as_float(iv[0], where), _as_float(iv[1], where))
        return AbsCont(ConstantDensity(_as_float(d.get("value", 1.0), where), sup))
    raise InvalidArgument(f"unknown ac builder {builder!r} in {where}")


def _parse_expr(d: Any, where: str) -> MeasureExpr:
    if not isinstance(d, dict):
        raise InvalidArgument(f"expected an object at {where}")
    kind = _require(d, "kind", where)
    if kind == "pp":
        return _parse_pp(d, where)
    if kind == "ac":
        return _parse_ac(d, where)
    if kind == "example":
        _reject_unknown(d, {"kind", "name", "truncation"}, where)
        name = _require(d, "name", where)
        trunc = d.get("truncation")
        if trunc is not None:
            trunc = int(trunc)
        return build_example(name, trunc)
    if kind == "translate":
        _reject_unknown(d, {"kind", "t", "child"}, where)
        return Translate(_as_float(_require(d, "t", where), where), _parse_expr(_require(d, "child", where), where + ".child"))
    if kind == "reflect":
        _reject_unknown(d, {"kind", "child"}, where)
        return ReflectConj(_parse_expr(_require(d, "child", where), where + ".child"))
    if kind == "scale":
        _reject_unknown(d, {"kind", "factor", "child"}, where)
        factor = _require(d, "factor", where)
        if isinstance(factor, list):
            if len(factor) != 2:
                raise InvalidArgument(f"scale factor in {where} must be a number or [re, im]")
            c = complex(_as_float(factor[0], where), _as_float(factor[1], where))
        else:
            c = complex(_as_float(factor, where), 0.0)
        return Scale(c, _parse_expr(_require(d, "child", where), where + ".child"))
    if kind == "sum":
        _reject_unknown(d, {"kind", "children"}, where)
        children = _require(d, "children", where)
        if not isinstance(children, list) or not children:
            raise InvalidArgument(f"sum children in {where} must be a nonempty list")
        return Sum(tuple(_parse_expr(c, f"{where}.children[{i}]") for i, c in enumerate(children)))
    raise InvalidArgument(f"unknown expr kind {kind!r} in {where}")


def parse_measure_spec(spec: str | dict) -> MeasureExpr:
    """Parse a measure spec from JSON text or an already-decoded dict.

    Malformed JSON raises json.JSONDecodeError (with line/column); schema
    violations raise InvalidArgument naming the offending path.
    """
    d = json.loads(spec) if isinstance(spec, str) else spec
    if not isinstance(d, dict):
        raise InvalidArgument("measure spec must be a JSON object")
    _reject_unknown(d, {"expr"}, "spec")
    return _parse_expr(_require(d, "expr", "spec"), "expr")


# ---------------------------------------------------------------------------
# Block-sum input wire format
# ---------------------------------------------------------------------------

_BLOCK_RECIPES = {
    "ex_a": (ex_a_block_input, "t alternates +n, -n"),
    "ex_nu": (nu_block_input, "t[n] = n"),
    "ex_b": (ex_b_block_input, "t alternates +n, -n with a merged middle"),
}


def parse_block_spec(spec: str | dict) -> BlockSumInput:
    """Parse a block-sum input: a named recipe or explicit parts.

    Recipe form: {"recipe": "ex_a"|"ex_nu"|"ex_b", "n": int}.  Explicit
    form: {"window": [lo, hi], "parts": [{"shift": t, "atoms": [[p, re,
    im], ...], "densities": [{"builder": "indicator", "interval": [a, b],
    "weight": [re, im]}, ...]}, ...]} with optional gap_floor, pairing_tol,
    translate_rule.
    """
    d = json.loads(spec) if isinstance(spec, str) else spec
    if not isinstance(d, dict):
        raise InvalidArgument("block spec must be a JSON object")
    if "recipe" in d:
        _reject_unknown(d, {"recipe", "n"}, "block spec")
        name = d["recipe"]
        if name not in _BLOCK_RECIPES:
            raise InvalidArgument(f"unknown block recipe {name!r}")
        return _BLOCK_RECIPES[name][0](int(_require(d, "n", "block spec")))
    _reject_unknown(
        d, {"window", "parts", "gap_floor", "pairing_tol", "translate_rule"}, "block spec"
    )
    iv = _require(d, "window", "block spec")
    window = Window(_as_float(iv[0], "window"), _as_float(iv[1], "window"))
    parts = []
    for i, pd in enumerate(_require(d, "parts", "block spec")):
        where = f"parts[{i}]"
        _reject_unknown(pd, {"shift", "atoms", "densities", "label"}, where)
        shift = _as_float(_require(pd, "shift", where), where)
        terms: list[MeasureExpr] = []
        atoms = [
            (_as_float(r[0], where), complex(_as_float(r[1], where), _as_float(r[2], where)))
            for r in pd.get("atoms", [])
        ]
        if atoms:
            terms.append(PurePoint(FiniteAtoms(atoms)))
        for j, dd in enumerate(pd.get("densities", [])):
            dwhere = f"{where}.densities[{j}]"
            _reject_unknown(dd, {"builder", "interval", "weight"}, dwhere)
            if _require(dd, "builder", dwhere) != "indicator":
                raise InvalidArgument(f"only indicator densities supported in {dwhere}")
            a, b = (_as_float(v, dwhere) for v in _require(dd, "interval", dwhere))
            wre, wim = (_as_float(v, dwhere) for v in dd.get("weight", [1.0, 0.0]))
            terms.append(AbsCont(IndicatorDensity(a, b, complex(wre, wim))))
        if not terms:
            raise InvalidArgument(f"{where} has neither atoms nor densities")
        measure = terms[0] if len(terms) == 1 else Sum(tuple(terms))
        parts.append(BlockPart(measure, shift, str(pd.get("label", ""))))
    kwargs = {}
    if "gap_floor" in d:
        kwargs["gap_floor"] = _as_float(d["gap_floor"], "block spec")
    if "pairing_tol" in d:
        kwargs["pairing_tol"] = _as_float(d["pairing_tol"], "block spec")
    return BlockSumInput(tuple(parts), window, **kwargs)


def block_input_to_dict(inp: BlockSumInput, translate_rule: str = "") -> dict:
    """Serialize a block-sum input with explicit atom/density lists.

    Only pure-atom and indicator-density parts round-trip; anything else
    raises.
    """
    parts_out = []
    for part in inp.parts:
        atoms: list[list[float]] = []
        densities: list[dict] = []

        def collect(node: MeasureExpr, scale: complex) -> None:
            if isinstance(node, PurePoint) and isinstance(node.source, FiniteAtoms):
                for p, w in zip(node.source.positions, node.source.weights):
                    ww = scale * w
                    atoms.append([float(p), float(ww.real), float(ww.imag)])
            elif isinstance(node, AbsCont) and isinstance(node.density, IndicatorDensity):
                ww = scale * node.density.value
                densities.append(
                    {
                        "builder": "indicator",
                        "interval": [node.density.support.lo, node.density.support.hi],
                        "weight": [float(ww.real), float(ww.imag)],
                    }
                )
            elif isinstance(node, Scale):
                collect(node.child, scale * node.c)
            elif isinstance(node, Sum):
                for c in node.children:
                    collect(c, scale)
            else:
                raise InvalidArgument(
                    f"cannot serialize part node {type(node).__name__}"
                )

        collect(part.measure, 1.0 + 0.0j)
        entry: dict[str, Any] = {"shift": part.shift}
        if atoms:
            entry["atoms"] = atoms
        if densities:
            entry["densities"] = densities
        if part.label:
            entry["label"] = part.label
        parts_out.append(entry)
    out: dict[str, Any] = {
        "window": [inp.window.lo, inp.window.hi],
        "parts": parts_out,
        "gap_floor": inp.gap_floor,
        "pairing_tol": inp.pairing_tol,
    }
    if translate_rule:
        out["translate_rule"] = translate_rule
    return out


# ---------------------------------------------------------------------------
# Deterministic emission
# ---------------------------------------------------------------------------


def fmt(v: float) -> str:
    """17-significant-digit decimal, locale independent."""
    return format(float(v), ".17g")


def write_csv(out: IO[str], header: str, rows: Sequence[Sequence[float]]) -> None:
    out.write(header + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


def xy_rows(xs: np.ndarray, values: np.ndarray) -> list[list[float]]:
    vals = np.asarray(values, dtype=np.complex128)
    return [[float(x), float(v.real), float(v.imag)] for x, v in zip(xs, vals)]


def decay_rows(profile: DecayProfile) -> list[list[float]]:
    return [[r, s] for r, s in profile.entries]


def mean_rows(trace: MeanTrace) -> list[list[float]]:
    return [[float(n), avg] for n, avg in trace.entries]


def spectral_rows(ks: np.ndarray, values: np.ndarray) -> list[list[float]]:
    return [[float(k), float(v)] for k, v in zip(ks, values)]


def rl_rows(report: RLReport) -> list[list[float]]:
    rows = []
    for x, d, s in zip(report.xs, report.direct, report.spectral):
        rows.append(
            [float(x), float(d.real), float(d.imag), float(s.real), float(s.imag), float(abs(d - s))]
        )
    return rows


def bessel_rows(rs: Sequence[float], pairs: Sequence[tuple[float, float]]) -> list[list[float]]:
    return [[float(r), lhs, rhs, abs(lhs - rhs)] for r, (lhs, rhs) in zip(rs, pairs)]


def decay_report_dict(profile: DecayProfile) -> dict:
    return {
        "verdict": profile.verdict,
        "epsilon": profile.epsilon,
        "K_eps_estimate": profile.k_eps_estimate,
        "entries": [[r, s] for r, s in profile.entries],
        "lip_margin": profile.lip_margin,
    }


def mean_report_dict(trace: MeanTrace) -> dict:
    return {
        "entries": [[n, avg] for n, avg in trace.entries],
        "limit_estimate": trace.limit_estimate,
    }


def coeffs_report_dict(cv: CoefficientVerdict) -> dict:
    return {"verdict": cv.verdict, "radius": cv.radius, "scanned": cv.scanned}


def rl_report_dict(report: RLReport) -> dict:
    return {
        "max_deviation": report.max_deviation,
        "k_window": report.k_window,
        "tail_estimate": report.tail_estimate,
        "quad_estimate": report.quad_estimate,
        "rows": [
            {
                "x": float(x),
                "direct_re": float(d.real),
                "direct_im": float(d.imag),
                "spectral_re": float(s.real),
                "spectral_im": float(s.imag),
                "deviation": float(abs(d - s)),
            }
            for x, d, s in zip(report.xs, report.direct, report.spectral)
        ],
    }


def block_report_dict(report: HypothesisReport) -> dict:
    return {
        "h_support": report.h_support,
        "support_offender": report.support_offender,
        "h_bounded": report.h_bounded,
        "sup_variation": report.sup_variation,
        "h_vague_null": report.h_vague_null,
        "worst_pairing": report.worst_pairing,
        "h_udiscrete": report.h_udiscrete,
        "min_shift_gap": report.min_shift_gap,
        "overall": report.overall,
    }
