"""Decay verdicts, coefficient scans, and interval means for measures.

The central object is the decay profile: sups of |mu*f| over a chain of
annuli.  Since only finitely many annuli can ever be inspected, a passing
verdict is named ``vanishing-up-to-horizon`` rather than claiming true
membership in C_0.

Verdict strings: ``vanishing-up-to-horizon``, ``not-vanishing``,
``inconclusive``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidArgument
from .measures import (
    AtomSource,
    MeasureExpr,
    PurePoint,
    convolve_grid,
    sup_norm_K,
)
from .testfunctions import TestFunction, Window, tf_convolve, tf_hat, tf_reflect_conj

__all__ = [
    "VANISHING",
    "NOT_VANISHING",
    "INCONCLUSIVE",
    "DecayProfile",
    "decay_profile",
    "default_family",
    "VanishingReport",
    "vanishing_verdict",
    "CoefficientVerdict",
    "coefficients_vanishing",
    "min_gap",
    "DiscreteSupportReport",
    "discrete_support_crosscheck",
    "MeanTrace",
    "mean_abs",
]

VANISHING = "vanishing-up-to-horizon"
NOT_VANISHING = "not-vanishing"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DecayProfile:
    """Annulus sups of |mu*f| plus the derived verdict.

    ``entries`` pairs each requested radius with the sup of |mu*f| over
    grid points x with radius <= |x| < next radius (the last annulus
    extends by the width of the previous one).  ``k_eps_estimate`` is the
    radius from which every inspected annulus stays below epsilon; it is
    set exactly when the verdict is vanishing-up-to-horizon.
    ``lip_margin`` bounds how much a true sup can exceed the grid sup
    (half grid step times a Lipschitz bound for mu*f).
    """

    entries: tuple[tuple[float, float], ...]
    epsilon: float
    verdict: str
    k_eps_estimate: float | None
    lip_margin: float

    @property
    def radii(self) -> tuple[float, ...]:
        return tuple(r for r, _ in self.entries)

    @property
    def sups(self) -> tuple[float, ...]:
        return tuple(s for _, s in self.entries)


def _annulus_bounds(radii: Sequence[float]) -> list[tuple[float, float]]:
    rs = [float(r) for r in radii]
    if len(rs) == 0:
        raise InvalidArgument("radii must be nonempty")
    if any(b <= a for a, b in zip(rs, rs[1:])):
        raise InvalidArgument("radii must be strictly increasing")
    if rs[0] < 0:
        raise InvalidArgument("radii must be nonnegative")
    last_width = rs[-1] - rs[-2] if len(rs) >= 2 else rs[-1]
    outer = rs[-1] + (last_width if last_width > 0 else 1.0)
    return list(zip(rs, rs[1:] + [outer]))


def _annulus_grid(lo: float, hi: float, step: float) -> np.ndarray:
    n = max(1, int(np.ceil((hi - lo) / step)))
    xs = lo + step * np.arange(n)
    return xs[xs < hi]


def decay_profile(
    mu: MeasureExpr,
    f: TestFunction,
    radii: Sequence[float],
    epsilon: float,
    annulus_step: float | None = None,
) -> DecayProfile:
    """Sups of |mu*f| over the annuli radii[i] <= |x| < radii[i+1].

    Both signs of x are scanned.  The grid step defaults to half the test
    function's own step; the reported lip_margin says how far the true
    sup can sit above the grid sup.
    """
    if not (epsilon > 0):
        raise InvalidArgument(f"epsilon must be positive, got {epsilon}")
    if annulus_step is None:
        annulus_step = f.step / 2.0
    if not (annulus_step > 0):
        raise InvalidArgument(f"annulus_step must be positive, got {annulus_step}")
    bounds = _annulus_bounds(radii)
    entries: list[tuple[float, float]] = []
    for lo, hi in bounds:
        xs = _annulus_grid(lo, hi, annulus_step)
        sup = 0.0
        if xs.size:
            sup = float(np.max(np.abs(convolve_grid(mu, f, xs))))
            neg = np.sort(-xs)
            sup = max(sup, float(np.max(np.abs(convolve_grid(mu, f, neg)))))
        entries.append((lo, sup))
    outer = bounds[-1][1]
    # |mu*f| is Lipschitz with constant Lip(f) * sup_x |mu|(x + supp f)
    mass_bound = sup_norm_K(
        mu, Window(f.lo, f.hi), Window(-outer, outer), step=max(1.0, annulus_step)
    )
    lip_margin = 0.5 * annulus_step * f.lipschitz * mass_bound
    sups = [s for _, s in entries]
    if sups[-1] < epsilon:
        j = len(sups)
        while j > 0 and sups[j - 1] < epsilon:
            j -= 1
        verdict = VANISHING
        k_eps: float | None = entries[j][0]
    elif sups[-1] >= 0.5 * max(sups):
        verdict, k_eps = NOT_VANISHING, None
    else:
        verdict, k_eps = INCONCLUSIVE, None
    return DecayProfile(tuple(entries), float(epsilon), verdict, k_eps, lip_margin)


def default_family() -> list[tuple[str, TestFunction]]:
    """Labelled default test family: three hats and their autocorrelations."""
    out: list[tuple[str, TestFunction]] = []
    for hw in (0.125, 0.25, 0.5):
        h = tf_hat(0.0, hw, 1.0)
        out.append((f"hat(0,{hw})", h))
        out.append((f"autocorr(hat(0,{hw}))", tf_convolve(h, tf_reflect_conj(h))))
    return out


@dataclass(frozen=True)
class VanishingReport:
    """Aggregated decay verdict over a family of test functions."""

    verdict: str
    epsilon: float
    r_max: float
    profiles: tuple[tuple[str, DecayProfile], ...]
    worst_label: str
    worst_sup: float


def vanishing_verdict(
    mu: MeasureExpr,
    family: Sequence[tuple[str, TestFunction]] | None = None,
    epsilon: float = 0.05,
    r_max: float = 1000.0,
    annulus_step: float | None = None,
) -> VanishingReport:
    """Run decay_profile for every family member and aggregate.

    The aggregate is vanishing only if every member's profile is; a single
    not-vanishing member decides the whole report.  The worst offender is
    the member with the largest final-annulus sup.
    """
    if family is None:
        family = default_family()
    if len(family) == 0:
        raise InvalidArgument("family must be nonempty")
    radii = [r_max / 8.0, r_max / 4.0, r_max / 2.0, r_max]
    profiles: list[tuple[str, DecayProfile]] = []
    for label, f in family:
        profiles.append((label, decay_profile(mu, f, radii, epsilon, annulus_step)))
    verdicts = [p.verdict for _, p in profiles]
    if all(v == VANISHING for v in verdicts):
        verdict = VANISHING
    elif NOT_VANISHING in verdicts:
        verdict = NOT_VANISHING
    else:
        verdict = INCONCLUSIVE
    worst_label, worst_sup = "", -1.0
    for label, p in profiles:
        final_sup = p.entries[-1][1]
        if final_sup > worst_sup:
            worst_label, worst_sup = label, final_sup
    return VanishingReport(verdict, float(epsilon), float(r_max), tuple(profiles), worst_label, worst_sup)


class CoefficientVerdict(NamedTuple):
    """Result of the atom-weight scan; unpacks as (verdict, radius)."""

    verdict: str
    radius: float
    scanned: int


def coefficients_vanishing(src: AtomSource, epsilon: float, r_max: float = 1000.0) -> CoefficientVerdict:
    """Scan atoms in [-r_max, r_max] for weights still >= epsilon far out.

    Returns the smallest R such that every scanned atom with |position| > R
    has |weight| < epsilon.  The not-vanishing call is a heuristic: it
    fires when the quarter of scanned atoms with the largest |position|
    still contains a violating weight.
    """
    if not (epsilon > 0):
        raise InvalidArgument(f"epsilon must be positive, got {epsilon}")
    pos, wts = src.enumerate_window(Window(-r_max, r_max))
    n = pos.size
    if n == 0:
        return CoefficientVerdict(VANISHING, 0.0, 0)
    abspos = np.abs(pos)
    order = np.argsort(abspos, kind="stable")
    violating = np.abs(wts[order]) >= epsilon
    if not np.any(violating):
        return CoefficientVerdict(VANISHING, 0.0, n)
    radius = float(abspos[order][np.nonzero(violating)[0][-1]])
    outer_quarter = max(1, int(np.ceil(n / 4)))
    if np.any(violating[-outer_quarter:]):
        return CoefficientVerdict(NOT_VANISHING, radius, n)
    return CoefficientVerdict(VANISHING, radius, n)


def min_gap(src: AtomSource, w: Window) -> float:
    """Minimum distance between distinct atom positions in w; inf if < 2 atoms."""
    pos, _ = src.enumerate_window(w)
    if pos.size < 2:
        return float("inf")
    return float(np.min(np.diff(np.sort(pos))))


@dataclass(frozen=True)
class DiscreteSupportReport:
    """Coefficient verdict vs convolution-decay verdict on one source.

    For uniformly discrete support the two notions of vanishing agree, so
    ``agree=False`` on an applicable input indicates a library defect.
    When the measured gap is below the declared floor the comparison is
    not applicable and no verdicts are computed.
    """

    applicable: bool
    gap: float
    gap_floor: float
    coefficient_verdict: str | None
    decay_verdict: str | None
    agree: bool | None
    note: str


def discrete_support_crosscheck(
    src: AtomSource,
    f: TestFunction,
    epsilon: float,
    r_max: float,
    gap_floor: float,
    annulus_step: float | None = None,
) -> DiscreteSupportReport:
    """Check that weight decay and convolution decay give the same verdict."""
    if not (gap_floor > 0):
        raise InvalidArgument(f"gap_floor must be positive, got {gap_floor}")
    gap = min_gap(src, Window(-r_max, r_max))
    if gap < gap_floor:
        return DiscreteSupportReport(
            False, gap, gap_floor, None, None, None,
            "support is not uniformly discrete at the declared floor",
        )
    coeff = coefficients_vanishing(src, epsilon, r_max)
    radii = [r_max / 4.0, r_max / 2.0, r_max]
    decay = decay_profile(PurePoint(src), f, radii, epsilon, annulus_step)
    if decay.verdict == INCONCLUSIVE:
        return DiscreteSupportReport(
            True, gap, gap_floor, coeff.verdict, decay.verdict, None,
            "decay profile inconclusive; no comparison made",
        )
    agree = (coeff.verdict == VANISHING) == (decay.verdict == VANISHING)
    note = "" if agree else "verdicts disagree on uniformly discrete support: library defect"
    return DiscreteSupportReport(True, gap, gap_floor, coeff.verdict, decay.verdict, agree, note)


@dataclass(frozen=True)
class MeanTrace:
    """Averages of |mu*f| over the intervals [-n, n]."""

    entries: tuple[tuple[int, float], ...]
    limit_estimate: float


def mean_abs(mu: MeasureExpr, f: TestFunction, n_list: Sequence[int]) -> MeanTrace:
    """Trapezoid averages (1/2n) * integral of |mu*f| over [-n, n].

    One convolution grid at the test function's own step covers the whole
    largest interval; each requested n reads off a prefix sum.
    """
    ns = [int(n) for n in n_list]
    if len(ns) == 0:
        raise InvalidArgument("n_list must be nonempty")
    if any(n <= 0 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise InvalidArgument("n_list must be strictly increasing positive integers")
    big = ns[-1]
    h = f.step
    k_max = int(round(2 * big / h))
    grid = -big + h * np.arange(k_max + 1)
    vals = np.abs(convolve_grid(mu, f, grid))
    seg = 0.5 * (vals[:-1] + vals[1:]) * h
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    entries: list[tuple[int, float]] = []
    for n in ns:
        i_lo = int(round((big - n) / h))
        i_hi = int(round((big + n) / h))
        entries.append((n, float((cum[i_hi] - cum[i_lo]) / (2.0 * n))))
    return MeanTrace(tuple(entries), entries[-1][1])
