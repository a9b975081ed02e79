"""Builders for the shipped example measures and the block-sum generator.

The example catalog covers the structured measures the rest of the library
is exercised against: offset-pair combs with exact cancellation, Riemann
block combs, shrinking tents, alternating dyadic densities, the dyadic step
family with its sinc-squared spectral side, and the radial Bessel density.

The block-sum machinery assembles a measure as a sum of translated parts
sharing a common compact carrier window, validates the four hypotheses that
make such a sum vanish at infinity (support containment, bounded variation,
vague convergence to zero, uniformly discrete translates), and generates a
lazily windowed measure when they hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import HypothesesNotSatisfied, InvalidArgument, UnknownExample
from .fourier import bessel_j0_vec
from .measures import (
    AbsCont,
    AtomSource,
    ConstantDensity,
    DensitySource,
    FiniteAtoms,
    IndicatorDensity,
    MeasureExpr,
    PurePoint,
    ReflectConj,
    Scale,
    Sum,
    Translate,
    TriangleDensity,
    _merge,
    convolve,
    resolve_window,
    variation_on,
)
from .testfunctions import TestFunction, Window, tf_hat, tf_reflect_conj

__all__ = [
    "OffsetPairComb",
    "RiemannComb",
    "ShrinkingTentsDensity",
    "AlternatingDyadicDensity",
    "DyadicStepDensity",
    "RadialBesselDensity",
    "EXAMPLE_NAMES",
    "build_example",
    "BlockPart",
    "BlockSumInput",
    "HypothesisReport",
    "GeneratedBlockSum",
    "default_probes",
    "validate_block_sum",
    "generate_block_sum",
    "ex_a_block_input",
    "nu_block_input",
    "ex_b_block_input",
]


class OffsetPairComb(AtomSource):
    """Atoms +1 at n + 1/n and -1 at n, over all nonzero integers n.

    The +1 atom of n = 1 lands exactly on the integer 2 and cancels the
    -1 atom of n = 2; same at -2 by symmetry.  Enumeration merges on exact
    position equality, so those two positions carry no atom.
    """

    def enumerate_window(self, w: Window) -> tuple[np.ndarray, np.ndarray]:
        n_lo = math.floor(w.lo) - 2
        n_hi = math.ceil(w.hi) + 2
        ns = [n for n in range(n_lo, n_hi + 1) if n != 0]
        if not ns:
            return np.empty(0), np.empty(0, dtype=np.complex128)
        pos = np.empty(2 * len(ns))
        wts = np.empty(2 * len(ns), dtype=np.complex128)
        for i, n in enumerate(ns):
            pos[2 * i] = float(n)
            wts[2 * i] = -1.0
            pos[2 * i + 1] = n + 1.0 / n
            wts[2 * i + 1] = 1.0
        pos, wts = _merge(pos, wts)
        keep = (pos >= w.lo) & (pos <= w.hi)
        return pos[keep], wts[keep]

    def __repr__(self) -> str:
        return "OffsetPairComb()"


class RiemannComb(AtomSource):
    """Block combs: for each n >= 1, atoms of weight 1/n at n + k/n.

    ``k_start = 0`` gives k = 0..n-1 (blocks [n, n+1), an atom on every
    integer); ``k_start = 1`` gives k = 1..n (blocks (n, n+1], closing at
    the right endpoint).  Either way block n is a Riemann-sum comb whose
    vague limit is Lebesgue on a unit interval.
    """

    def __init__(self, k_start: int = 0) -> None:
        if k_start not in (0, 1):
            raise InvalidArgument(f"k_start must be 0 or 1, got {k_start}")
        self.k_start = k_start

    def enumerate_window(self, w: Window) -> tuple[np.ndarray, np.ndarray]:
        n_lo = max(1, math.floor(w.lo) - 1)
        n_hi = math.floor(w.hi) + 1
        chunks_p = []
        chunks_w = []
        for n in range(n_lo, n_hi + 1):
            ks = np.arange(self.k_start, n + self.k_start)
            p = n + ks / n
            inside = (p >= w.lo) & (p <= w.hi)
            if np.any(inside):
                chunks_p.append(p[inside])
                chunks_w.append(np.full(int(np.sum(inside)), 1.0 / n, dtype=np.complex128))
        if not chunks_p:
            return np.empty(0), np.empty(0, dtype=np.complex128)
        return _merge(np.concatenate(chunks_p), np.concatenate(chunks_w))

    def __repr__(self) -> str:
        return f"RiemannComb(k_start={self.k_start})"


# Tents narrower than 2^-50 collapse to their center in float64 (n +- 2^-n
# rounds to n), so the family is cut there; the omitted mass is 2^-50 total.
_TENT_CAP = 50


class ShrinkingTentsDensity(DensitySource):
    """Tents of height 1 and halfwidth 2^-n centered at n = 1, 2, ...

    The tent at n has integral 2^-n, so the measure vanishes at infinity
    while the density keeps peak value 1 on every block.
    """

    support = None

    def evalv(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        m = np.rint(xs)
        ok = (m >= 1) & (m <= _TENT_CAP)
        mm = np.where(ok, m, 1.0)
        val = 1.0 - np.exp2(mm) * np.abs(xs - mm)
        return np.where(ok & (val > 0.0), val, 0.0).astype(np.complex128)

    def knots(self, w: Window) -> np.ndarray:
        n_lo = max(1, math.floor(w.lo))
        n_hi = min(_TENT_CAP, math.ceil(w.hi))
        out = []
        for n in range(n_lo, n_hi + 1):
            h = 2.0 ** (-n)
            out.extend((n - h, float(n), n + h))
        return np.array(out)

    def local_bound(self, w: Window) -> float:
        return 1.0

    def __repr__(self) -> str:
        return "ShrinkingTentsDensity()"


# Beyond level 14 a block has over 16k sign changes per unit; representing
# its knots is pointless at desk scale and the block is dropped (its
# convolution with any Lipschitz f is below Lip(f) * 2^-15 in sup norm).
_BF_MAX_LEVEL = 14


class AlternatingDyadicDensity(DensitySource):
    """Density (-1)^k on [n + k/2^n, n + (k+1)/2^n) for n >= 1, 0 elsewhere.

    Left-closed subinterval convention; the density does not vanish at
    infinity pointwise (it keeps hitting +-1) but the measure it defines
    does, through cancellation at ever finer scales.
    """

    support = None

    def evalv(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        m = np.floor(xs)
        ok = (m >= 1) & (m <= _BF_MAX_LEVEL)
        mm = np.where(ok, m, 1.0)
        k = np.floor((xs - mm) * np.exp2(mm))
        val = 1.0 - 2.0 * np.mod(k, 2.0)
        return np.where(ok, val, 0.0).astype(np.complex128)

    def knots(self, w: Window) -> np.ndarray:
        n_lo = max(1, math.floor(w.lo))
        n_hi = min(_BF_MAX_LEVEL, math.ceil(w.hi))
        out = [np.array([1.0, _BF_MAX_LEVEL + 1.0])]
        for n in range(n_lo, n_hi + 1):
            out.append(n + np.arange(2**n + 1) / 2.0**n)
        return np.unique(np.concatenate(out))

    def local_bound(self, w: Window) -> float:
        return 1.0

    def __repr__(self) -> str:
        return f"AlternatingDyadicDensity(max_level={_BF_MAX_LEVEL})"


class DyadicStepDensity(DensitySource):
    """Steps 2^-n on [n, n+1) and on [-n-1, -n) for n = 0..n_trunc.

    The absolutely continuous spread of the truncated dyadic block family;
    support is [-(n_trunc+1), n_trunc+1].
    """

    def __init__(self, n_trunc: int) -> None:
        if n_trunc < 0:
            raise InvalidArgument(f"n_trunc must be nonnegative, got {n_trunc}")
        self.n_trunc = n_trunc
        self.support = Window(-(n_trunc + 1.0), n_trunc + 1.0)

    def evalv(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        m = np.floor(xs)
        pos = (m >= 0) & (m <= self.n_trunc)
        neg = (m >= -(self.n_trunc + 1)) & (m <= -1)
        out = np.zeros(xs.shape)
        out[pos] = np.exp2(-m[pos])
        out[neg] = np.exp2(m[neg] + 1.0)
        return out.astype(np.complex128)

    def knots(self, w: Window) -> np.ndarray:
        lo = max(-(self.n_trunc + 1), math.floor(w.lo))
        hi = min(self.n_trunc + 1, math.ceil(w.hi))
        if lo > hi:
            return np.empty(0)
        return np.arange(lo, hi + 1, dtype=float)

    def local_bound(self, w: Window) -> float:
        return 1.0

    def __repr__(self) -> str:
        return f"DyadicStepDensity(n_trunc={self.n_trunc})"


class RadialBesselDensity(DensitySource):
    """2 pi J0(2 pi |x|): the 1-d radial profile of the circle transform."""

    support = None

    def evalv(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return (2.0 * np.pi * bessel_j0_vec(2.0 * np.pi * np.abs(xs))).astype(np.complex128)

    def local_bound(self, w: Window) -> float:
        return 2.0 * np.pi

    def __repr__(self) -> str:
        return "RadialBesselDensity()"


EXAMPLE_NAMES = (
    "ex_a",
    "ex_nu",
    "ex_tent",
    "ex_bf",
    "ex_b",
    "ex_sinc_series",
    "j0_radial",
)


def build_example(name: str, truncation: int | None = None) -> MeasureExpr:
    """Build a catalog measure by name.

    ``truncation`` applies only to ex_sinc_series (series cutoff N,
    default 20); the other examples are lazily windowed and need none.
    """
    if name != "ex_sinc_series" and truncation is not None:
        raise InvalidArgument(f"{name} takes no truncation parameter")
    if name == "ex_a":
        return PurePoint(OffsetPairComb())
    if name == "ex_nu":
        return PurePoint(RiemannComb(k_start=0))
    if name == "ex_tent":
        return AbsCont(ShrinkingTentsDensity())
    if name == "ex_bf":
        return AbsCont(AlternatingDyadicDensity())
    if name == "ex_b":
        return Sum(
            (
                AbsCont(ConstantDensity(1.0)),
                Scale(-1.0, PurePoint(RiemannComb(k_start=1))),
                Scale(-1.0, ReflectConj(PurePoint(RiemannComb(k_start=1)))),
            )
        )
    if name == "ex_sinc_series":
        n = 20 if truncation is None else int(truncation)
        if n < 0:
            raise InvalidArgument(f"truncation must be nonnegative, got {truncation}")
        total = 2.0 - 2.0**-n
        return Sum(
            (
                PurePoint(FiniteAtoms([(0.0, total)])),
                AbsCont(DyadicStepDensity(n)),
                Scale(total, AbsCont(TriangleDensity(0.0, 1.0, 1.0))),
            )
        )
    if name == "j0_radial":
        return AbsCont(RadialBesselDensity())
    raise UnknownExample(name)


# ---------------------------------------------------------------------------
# Block sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockPart:
    """One summand: a measure carried by the common window, then shifted."""

    measure: MeasureExpr
    shift: float
    label: str = ""


@dataclass(frozen=True)
class BlockSumInput:
    """Parts with a shared carrier window and per-part shifts.

    ``gap_floor`` is the uniform-discreteness floor for the shifts;
    ``pairing_tol`` bounds the probe pairings on the last quarter of the
    index range for the vague-null hypothesis.
    """

    parts: tuple[BlockPart, ...]
    window: Window
    gap_floor: float = 1e-6
    pairing_tol: float = 1e-3

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise InvalidArgument("block sum needs at least one part")
        if not (self.gap_floor > 0):
            raise InvalidArgument(f"gap_floor must be positive, got {self.gap_floor}")


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the four block-sum hypotheses.

    h_support: every part carried inside the window (offender index else
    None).  h_bounded: per-part variation shows no growth trend across the
    last half of indices; sup_variation is the overall sup.  h_vague_null:
    probe pairings on the last quarter of indices stay below tolerance;
    pairing_trace holds the per-index worst |pairing|.  h_udiscrete: shifts
    pairwise separated by at least the floor.
    """

    h_support: bool
    support_offender: int | None
    h_bounded: bool
    sup_variation: float
    h_vague_null: bool
    worst_pairing: float
    pairing_trace: tuple[float, ...]
    h_udiscrete: bool
    min_shift_gap: float
    overall: bool

    def summary(self) -> str:
        def mark(ok: bool) -> str:
            return "pass" if ok else "FAIL"

        lines = [
            f"(i)   support containment: {mark(self.h_support)}"
            + (f" (offender part {self.support_offender})" if self.support_offender is not None else ""),
            f"(ii)  bounded variation:   {mark(self.h_bounded)} (sup {self.sup_variation:.6g})",
            f"(iii) vague null sequence: {mark(self.h_vague_null)} (worst tail pairing {self.worst_pairing:.3e})",
            f"(iv)  discrete translates: {mark(self.h_udiscrete)} (min gap {self.min_shift_gap:.6g})",
            f"overall: {mark(self.overall)}",
        ]
        return "\n".join(lines)


def default_probes(window: Window) -> list[TestFunction]:
    """Hats at 3 dyadic scales and 5 centers spanning the window."""
    centers = np.linspace(window.lo, window.hi, 5)
    scales = [window.width / 2.0, window.width / 4.0, window.width / 8.0]
    return [tf_hat(float(c), hw, 1.0) for hw in scales for c in centers]


def _pairings(part: MeasureExpr, window: Window, probes: Sequence[TestFunction]) -> tuple[float, float]:
    """(worst |<g, part>| over probes, variation of part on the window)."""
    rw = resolve_window(part, window)
    if not rw.pieces:
        worst = 0.0
        for g in probes:
            if rw.positions.size:
                pair = complex(np.sum(rw.weights * g.values(rw.positions)))
            else:
                pair = 0.0
            worst = max(worst, abs(pair))
        return worst, float(np.sum(np.abs(rw.weights)))
    worst = 0.0
    for g in probes:
        pair = convolve(part, tf_reflect_conj(g), 0.0)
        worst = max(worst, abs(pair))
    return worst, variation_on(part, window)


def validate_block_sum(
    inp: BlockSumInput, probes: Sequence[TestFunction] | None = None
) -> HypothesisReport:
    """Check the four hypotheses on a block-sum input.

    Support containment is probed on a finitely expanded window (content
    further out is invisible to any finite check); vague convergence is
    tested against the probe family only, so a pass is evidence, not proof.
    """
    if probes is None:
        probes = default_probes(inp.window)
    if not probes:
        raise InvalidArgument("probe family must be nonempty")
    k = inp.window
    pad = 10.0 * max(1.0, k.width)
    probe_window = Window(k.lo - pad, k.hi + pad)

    support_ok = True
    offender: int | None = None
    variations = np.empty(len(inp.parts))
    trace = np.empty(len(inp.parts))
    for i, part in enumerate(inp.parts):
        if support_ok:
            rw = resolve_window(part.measure, probe_window)
            if rw.positions.size and not np.all(
                (rw.positions >= k.lo) & (rw.positions <= k.hi)
            ):
                support_ok = False
                offender = i
            for piece in rw.pieces:
                psup = piece.support
                if psup is None or psup.lo < k.lo - 1e-12 or psup.hi > k.hi + 1e-12:
                    support_ok = False
                    offender = i
                    break
        trace[i], variations[i] = _pairings(part.measure, k, probes)

    n = len(inp.parts)
    sup_var = float(np.max(variations))
    if n >= 4:
        half = n // 2
        bounded_ok = float(np.max(variations[half:])) <= 1.05 * float(np.max(variations[:half])) + 1e-9
    else:
        bounded_ok = np.isfinite(sup_var)

    quarter = max(1, n - max(1, n // 4))
    worst_pairing = float(np.max(trace[quarter:]))
    vague_ok = worst_pairing < inp.pairing_tol

    shifts = np.sort(np.array([p.shift for p in inp.parts], dtype=float))
    if shifts.size >= 2:
        min_gap = float(np.min(np.diff(shifts)))
    else:
        min_gap = float("inf")
    discrete_ok = min_gap >= inp.gap_floor

    overall = support_ok and bounded_ok and vague_ok and discrete_ok
    return HypothesisReport(
        h_support=support_ok,
        support_offender=offender,
        h_bounded=bool(bounded_ok),
        sup_variation=sup_var,
        h_vague_null=bool(vague_ok),
        worst_pairing=worst_pairing,
        pairing_trace=tuple(float(t) for t in trace),
        h_udiscrete=bool(discrete_ok),
        min_shift_gap=min_gap,
        overall=bool(overall),
    )


class BlockAtomSource(AtomSource):
    """Lazy atoms of a pure-point block sum, indexed by sorted shifts.

    Enumeration touches only parts whose shifted carrier window meets the
    query window.
    """

    def __init__(self, parts: Sequence[BlockPart], window: Window) -> None:
        order = np.argsort([p.shift for p in parts], kind="stable")
        self._parts = [parts[i] for i in order]
        self._shifts = np.array([p.shift for p in self._parts], dtype=float)
        self._window = window

    def enumerate_window(self, w: Window) -> tuple[np.ndarray, np.ndarray]:
        k = self._window
        lo = np.searchsorted(self._shifts, w.lo - k.hi, side="left")
        hi = np.searchsorted(self._shifts, w.hi - k.lo, side="right")
        chunks_p = []
        chunks_w = []
        for i in range(lo, hi):
            t = self._shifts[i]
            local = Window(max(k.lo, w.lo - t), min(k.hi, w.hi - t))
            if local.lo > local.hi:
                continue
            rw = resolve_window(self._parts[i].measure, local)
            if rw.positions.size:
                chunks_p.append(rw.positions + t)
                chunks_w.append(rw.weights)
        if not chunks_p:
            return np.empty(0), np.empty(0, dtype=np.complex128)
        pos, wts = _merge(np.concatenate(chunks_p), np.concatenate(chunks_w))
        keep = (pos >= w.lo) & (pos <= w.hi)
        return pos[keep], wts[keep]

    def __repr__(self) -> str:
        return f"BlockAtomSource(n_parts={len(self._parts)})"


@dataclass(frozen=True)
class GeneratedBlockSum:
    """A generated block-sum measure with its validation report.

    ``covered`` is the spatial range the truncated index family accounts
    for; windows inside it see the exact sum.
    """

    measure: MeasureExpr
    report: HypothesisReport
    covered: Window
    n_parts: int


def _is_pure_point(expr: MeasureExpr) -> bool:
    if isinstance(expr, PurePoint):
        return True
    if isinstance(expr, AbsCont):
        return False
    if isinstance(expr, (Translate, ReflectConj, Scale)):
        return _is_pure_point(expr.child)
    if isinstance(expr, Sum):
        return all(_is_pure_point(c) for c in expr.children)
    raise InvalidArgument(f"unknown expression node {type(expr).__name__}")


def generate_block_sum(
    inp: BlockSumInput,
    probes: Sequence[TestFunction] | None = None,
    override: bool = False,
) -> GeneratedBlockSum:
    """Validate and assemble the translated block sum.

    Raises HypothesesNotSatisfied (carrying the report) when validation
    fails, unless ``override`` is set for counterexample study.  Pure-point
    inputs get a lazily windowed atom source; mixed inputs fall back to an
    explicit expression sum.
    """
    report = validate_block_sum(inp, probes)
    if not report.overall and not override:
        raise HypothesesNotSatisfied(report)
    shifts = np.array([p.shift for p in inp.parts], dtype=float)
    covered = Window(float(np.min(shifts)) + inp.window.lo, float(np.max(shifts)) + inp.window.hi)
    if all(_is_pure_point(p.measure) for p in inp.parts):
        measure: MeasureExpr = PurePoint(BlockAtomSource(inp.parts, inp.window))
    else:
        measure = Sum(tuple(Translate(p.shift, p.measure) for p in inp.parts))
    return GeneratedBlockSum(measure, report, covered, len(inp.parts))


# ---------------------------------------------------------------------------
# Documented decompositions
# ---------------------------------------------------------------------------


def ex_a_block_input(n_half: int) -> BlockSumInput:
    """Offset-pair parts: {+1 at 1/n, -1 at 0} shifted by n, both signs.

    Reassembles the offset-pair comb exactly on windows inside
    [-n_half - 1, n_half + 1].
    """
    if n_half < 1:
        raise InvalidArgument(f"n_half must be >= 1, got {n_half}")
    parts = []
    for n in range(1, n_half + 1):
        parts.append(
            BlockPart(PurePoint(FiniteAtoms([(1.0 / n, 1.0), (0.0, -1.0)])), float(n), f"+{n}")
        )
        parts.append(
            BlockPart(PurePoint(FiniteAtoms([(-1.0 / n, 1.0), (0.0, -1.0)])), float(-n), f"-{n}")
        )
    return BlockSumInput(tuple(parts), Window(-1.0, 1.0))


def nu_block_input(n_max: int) -> BlockSumInput:
    """Riemann-comb parts (1/n at k/n, k = 0..n-1) shifted by n.

    The parts converge vaguely to Lebesgue on [0, 1], not to zero, so
    validation fails the vague-null hypothesis; the generated sum (with
    override) is the staircase comb whose convolutions plateau.
    """
    if n_max < 1:
        raise InvalidArgument(f"n_max must be >= 1, got {n_max}")
    parts = []
    for n in range(1, n_max + 1):
        atoms = [(k / n, 1.0 / n) for k in range(n)]
        parts.append(BlockPart(PurePoint(FiniteAtoms(atoms)), float(n), f"n={n}"))
    return BlockSumInput(tuple(parts), Window(0.0, 1.0))


def ex_b_block_input(n_max: int) -> BlockSumInput:
    """Lebesgue-minus-Riemann parts reassembling the ex_b measure.

    Index 0 carries Lebesgue on [-1, 1] (the two half-line families' n = 0
    terms share shift 0, so they are merged into one part to keep the
    shifts pairwise distinct); index n >= 1 carries Lebesgue on a unit
    interval minus the right-endpoint Riemann comb (1/n at k/n, k = 1..n),
    shifted by +-n.  Equals the ex_b catalog measure on covered windows.
    """
    if n_max < 1:
        raise InvalidArgument(f"n_max must be >= 1, got {n_max}")
    parts = [BlockPart(AbsCont(IndicatorDensity(-1.0, 1.0)), 0.0, "middle")]
    for n in range(1, n_max + 1):
        comb = FiniteAtoms([(k / n, 1.0 / n) for k in range(1, n + 1)])
        plus = Sum(
            (AbsCont(IndicatorDensity(0.0, 1.0)), Scale(-1.0, PurePoint(comb)))
        )
        comb_neg = FiniteAtoms([(-k / n, 1.0 / n) for k in range(1, n + 1)])
        minus = Sum(
            (AbsCont(IndicatorDensity(-1.0, 0.0)), Scale(-1.0, PurePoint(comb_neg)))
        )
        parts.append(BlockPart(plus, float(n), f"+{n}"))
        parts.append(BlockPart(minus, float(-n), f"-{n}"))
    return BlockSumInput(tuple(parts), Window(-1.0, 1.0))
