"""Estimation of growth constants from exact volume profiles.

Inputs here are `VolumeProfile`s (exact integer ball counts); every ratio is
kept as a `Fraction` until a logarithm or least-squares step forces floats.

Notation used throughout, for a profile around x:

    shell(n, k)   = mu(B(x, n)) - mu(B(x, n-k)),   written c_{n-k,n}
    sphere(n)     = shell(n+1, 1)                  (vertices at distance n+1)

The central quantity is the shell-comparison constant

    alpha = inf over admitted (n, k) of  c_{n-k,n} / c_{n,n+k},

the infimum of inner-shell to outer-shell volume ratios at matched widths.
On a doubling space alpha is bounded away from zero once k exceeds a small
multiple of the monotone-geodesic constant (k_min = 5 covers unit-edge
graphs), and a telescoping recursion over dyadic widths turns alpha into a
polynomial sphere-decay certificate with exponent delta = log2(1 + alpha):

    mu(S(x, n)) <= C * n^(-delta) * mu(B(x, n)).

`lemma_recursion_audit` replays that telescoping step by step on a concrete
profile; `verify_sphere_bound` fits the constant C and checks it stays flat;
`dyadic_subsequence` certifies the cheaper radius-selection route that needs
only the doubling constant; `abelian_isop_check` measures the stronger 1/n
decay available on abelian groups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .space import VolumeProfile

__all__ = [
    "ShellRecord",
    "ShellReport",
    "RecursionAudit",
    "DyadicRecord",
    "DyadicSelection",
    "SphereBoundReport",
    "GrowthFit",
    "doubling_constant",
    "shell_alpha",
    "delta_from_alpha",
    "lemma_recursion_audit",
    "verify_sphere_bound",
    "dyadic_subsequence",
    "abelian_isop_check",
    "growth_exponent_fit",
    "least_squares_slope",
]


# -- small helpers -----------------------------------------------------------


def least_squares_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Slope of the least-squares line through (xs, ys)."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need at least two points")
    slope, _ = np.polyfit(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), 1)
    return float(slope)


def _shell(profile: VolumeProfile, n: int, k: int) -> int:
    """Exact c_{n-k,n} = mu(B(n)) - mu(B(n-k)); requires 0 <= n-k, n <= depth."""
    return profile.ball[n] - profile.ball[n - k]


def _as_profiles(
    profiles: VolumeProfile | Sequence[VolumeProfile],
) -> tuple[VolumeProfile, ...]:
    if isinstance(profiles, VolumeProfile):
        return (profiles,)
    return tuple(profiles)


# -- doubling ----------------------------------------------------------------


def doubling_constant(
    profiles: VolumeProfile | Sequence[VolumeProfile], r_max: int
) -> Fraction:
    """Max of mu(B(x, 2r)) / mu(B(x, r)) over the given centers and 1 <= r <= r_max.

    Profiles must extend to depth 2 * r_max.  Exact.
    """
    profs = _as_profiles(profiles)
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    best = Fraction(0)
    for p in profs:
        if p.depth < 2 * r_max:
            raise ValueError(
                f"profile at center {p.center} has depth {p.depth}, "
                f"need {2 * r_max} for r_max={r_max}"
            )
        for r in range(1, r_max + 1):
            best = max(best, Fraction(p.ball[2 * r], p.ball[r]))
    return best


# -- shell comparison --------------------------------------------------------


@dataclass(frozen=True)
class ShellRecord:
    center: int
    n: int
    k: int
    c_lo: int  # inner shell c_{n-k,n}
    c_hi: int  # outer shell c_{n,n+k}
    ratio: Fraction | None  # None when the outer shell is empty


@dataclass(frozen=True)
class ShellReport:
    """Result of a shell-comparison sweep.

    alpha is the infimum of admitted ratios (outer shell nonempty); worst is
    the record attaining it.  records holds the full table only when the
    sweep was run with record_all=True, otherwise just the worst record.
    """

    k_min: int
    n_max: int
    alpha: Fraction
    delta: float
    fitted_constant: float
    pairs_tested: int
    worst: ShellRecord
    records: tuple[ShellRecord, ...]


def shell_alpha(
    profiles: VolumeProfile | Sequence[VolumeProfile],
    k_min: int = 5,
    n_max: int | None = None,
    record_all: bool = False,
) -> ShellReport:
    """Sweep inner/outer shell ratios c_{n-k,n} / c_{n,n+k} and take the infimum.

    Admits pairs with k_min <= k <= n <= n_max and n + k within the profile
    depth; pairs whose outer shell is empty are excluded (they impose no
    constraint; by then the ball has stopped growing in that direction).
    Raises if no pair is admitted at all.
    """
    profs = _as_profiles(profiles)
    if k_min < 1:
        raise ValueError("k_min must be positive")
    depth = min(p.depth for p in profs)
    if n_max is None:
        n_max = depth // 2
    if n_max + k_min > depth:
        raise ValueError(
            f"profiles too shallow: depth {depth} < n_max + k_min = {n_max + k_min}"
        )
    # The sweep is the hot path (quadratically many pairs per center), so the
    # running minimum is tracked with integer cross-multiplication and only
    # materialized as a Fraction at the end.
    best: tuple[int, int] | None = None  # (c_lo, c_hi) of the current minimum
    worst: ShellRecord | None = None
    records: list[ShellRecord] = []
    tested = 0
    for p in profs:
        ball = p.ball
        for n in range(k_min, n_max + 1):
            for k in range(k_min, min(n, depth - n) + 1):
                c_lo = ball[n] - ball[n - k]
                c_hi = ball[n + k] - ball[n]
                if c_hi == 0:
                    if record_all:
                        records.append(ShellRecord(p.center, n, k, c_lo, c_hi, None))
                    continue
                tested += 1
                if record_all:
                    records.append(
                        ShellRecord(p.center, n, k, c_lo, c_hi, Fraction(c_lo, c_hi))
                    )
                if best is None or c_lo * best[1] < best[0] * c_hi:
                    best = (c_lo, c_hi)
                    worst = ShellRecord(
                        p.center, n, k, c_lo, c_hi, Fraction(c_lo, c_hi)
                    )
    if best is None or worst is None:
        raise ValueError("no admissible shell pair in the requested range")
    alpha = Fraction(best[0], best[1])
    delta = delta_from_alpha(alpha)
    fitted = _fitted_constant(profs, delta, n_max)
    return ShellReport(
        k_min=k_min,
        n_max=n_max,
        alpha=alpha,
        delta=delta,
        fitted_constant=fitted,
        pairs_tested=tested,
        worst=worst,
        records=tuple(records) if record_all else (worst,),
    )


def delta_from_alpha(alpha: Fraction | float) -> float:
    """Decay exponent log2(1 + alpha) certified by a shell constant alpha."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    return math.log2(1 + alpha)


def _fitted_constant(
    profiles: Sequence[VolumeProfile], delta: float, n_max: int
) -> float:
    """Smallest C with mu(S(x,n)) <= C n^(-delta) mu(B(x,n)) on the tested range."""
    best = 0.0
    for p in profiles:
        sphere = p.sphere
        for n in range(1, min(n_max, p.depth - 1) + 1):
            value = sphere[n] * n**delta / p.ball[n]
            best = max(best, value)
    return best


# -- telescoping recursion audit ---------------------------------------------


@dataclass(frozen=True)
class RecursionAudit:
    """Replay of the dyadic telescoping that converts alpha into sphere decay.

    With b_i = c_{n - 2^i, n} the chain asserts, for i = 1 .. floor(log2 n):

        b_i >= (1 + alpha) * b_(i-1)

    and then  mu(B(x,n)) >= b_top >= (1+alpha)^top * b_0  with
    (1+alpha)^top >= n^log2(1+alpha) / (1+alpha).  `violations` lists the
    indices i whose step inequality fails (empty on any space whose measured
    alpha really is a lower shell bound at all dyadic widths).
    """

    n: int
    alpha: Fraction
    b: tuple[int, ...]
    violations: tuple[int, ...]
    chain_ok: bool
    final_bound_ok: bool

    @property
    def passed(self) -> bool:
        return not self.violations and self.chain_ok and self.final_bound_ok


def lemma_recursion_audit(
    profile: VolumeProfile, n: int, alpha: Fraction
) -> RecursionAudit:
    """Recompute the telescoping chain at radius n with a given alpha, exactly."""
    if n < 1 or n > profile.depth:
        raise ValueError(f"radius n={n} outside profile depth {profile.depth}")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    top = n.bit_length() - 1  # floor(log2 n)
    b = tuple(_shell(profile, n, 2**i) for i in range(top + 1))
    one_plus = Fraction(1) + alpha
    violations = tuple(
        i for i in range(1, top + 1) if Fraction(b[i]) < one_plus * b[i - 1]
    )
    chain_ok = profile.ball[n] >= b[top] and Fraction(b[top]) >= one_plus**top * b[0]
    # top > log2(n) - 1, so (1+alpha)^top >= n^log2(1+alpha) / (1+alpha).
    final_bound_ok = float(one_plus) ** top >= n ** math.log2(
        float(one_plus)
    ) / float(one_plus)
    if violations:
        chain_ok = False
    return RecursionAudit(
        n=n,
        alpha=Fraction(alpha),
        b=b,
        violations=violations,
        chain_ok=chain_ok,
        final_bound_ok=final_bound_ok,
    )


# -- sphere-decay verification ------------------------------------------------


@dataclass(frozen=True)
class SphereBoundReport:
    """Fit of C(n) = mu(S(x,n)) * n^delta / mu(B(x,n)) over a radius range.

    fitted_constant is the max over centers and radii; trend_slope is the
    least-squares slope of log C(n) against log n over the top half of the
    range, taking the per-n max across centers.  passed means the constant is
    finite and the trend does not drift upward beyond the tolerance.
    """

    delta: float
    n_lo: int
    n_hi: int
    fitted_constant: float
    trend_slope: float
    slope_tolerance: float
    constants: tuple[float, ...]  # per-n max of the ratio, n = n_lo..n_hi

    @property
    def passed(self) -> bool:
        return math.isfinite(self.fitted_constant) and (
            self.trend_slope <= self.slope_tolerance
        )


def verify_sphere_bound(
    profiles: VolumeProfile | Sequence[VolumeProfile],
    delta: float,
    n_range: tuple[int, int] | None = None,
    slope_tolerance: float = 0.05,
) -> SphereBoundReport:
    """Measure the constant in mu(S) <= C n^(-delta) mu(B) and test its trend."""
    profs = _as_profiles(profiles)
    depth = min(p.depth for p in profs)
    if n_range is None:
        n_range = (1, depth - 1)
    n_lo, n_hi = n_range
    if not 1 <= n_lo < n_hi <= depth - 1:
        raise ValueError(f"radius range {n_range} not within profile depth {depth}")
    per_n: list[float] = []
    for n in range(n_lo, n_hi + 1):
        best = 0.0
        for p in profs:
            best = max(best, p.sphere[n] * n**delta / p.ball[n])
        per_n.append(best)
    fitted = max(per_n)
    half_start = (n_lo + n_hi) // 2
    xs, ys = [], []
    for n, value in zip(range(n_lo, n_hi + 1), per_n):
        if n >= half_start and value > 0:
            xs.append(math.log(n))
            ys.append(math.log(value))
    slope = least_squares_slope(xs, ys) if len(xs) >= 2 else 0.0
    return SphereBoundReport(
        delta=delta,
        n_lo=n_lo,
        n_hi=n_hi,
        fitted_constant=fitted,
        trend_slope=slope,
        slope_tolerance=slope_tolerance,
        constants=tuple(per_n),
    )


# -- dyadic radius selection --------------------------------------------------


@dataclass(frozen=True)
class DyadicRecord:
    i: int
    radius: int  # the selected r_i in (2^i, 2^(i+1)]
    sphere: int
    ball: int
    bound: Fraction  # doubling * ball / 2^i
    certified: bool


@dataclass(frozen=True)
class DyadicSelection:
    center: int
    doubling: Fraction
    records: tuple[DyadicRecord, ...]

    @property
    def all_certified(self) -> bool:
        return all(rec.certified for rec in self.records)


def dyadic_subsequence(
    profile: VolumeProfile,
    doubling: Fraction,
    i_max: int | None = None,
) -> DyadicSelection:
    """Pick, per dyadic window (2^i, 2^(i+1)], the radius with the smallest sphere.

    Ties break toward the smaller radius.  Each selected r_i is certified
    against mu(S(x, r_i)) <= doubling * mu(B(x, r_i)) / 2^i, the pigeonhole
    consequence of 2^i * min-sphere <= mu(B(x, 2^(i+1))) combined with the
    doubling constant.  Requires profile depth > 2^(i+1) for each admitted i.
    """
    depth = profile.depth
    limit = i_max if i_max is not None else depth.bit_length()
    records: list[DyadicRecord] = []
    for i in range(0, limit + 1):
        lo, hi = 2**i, 2 ** (i + 1)
        if hi + 1 > depth:
            break
        best_r = min(range(lo + 1, hi + 1), key=lambda r: (profile.sphere[r], r))
        sphere, ball = profile.sphere[best_r], profile.ball[best_r]
        bound = doubling * Fraction(ball, lo)
        records.append(
            DyadicRecord(
                i=i,
                radius=best_r,
                sphere=sphere,
                ball=ball,
                bound=bound,
                certified=Fraction(sphere) <= bound,
            )
        )
    if not records:
        raise ValueError(f"profile depth {depth} admits no dyadic window")
    return DyadicSelection(
        center=profile.center, doubling=doubling, records=tuple(records)
    )


# -- abelian-style isoperimetry ----------------------------------------------


def abelian_isop_check(ball_sizes: Sequence[int], n_max: int | None = None) -> Fraction:
    """Max over 1 <= n <= n_max of n * (mu(B(n+1)) - mu(B(n))) / mu(B(n)).

    `ball_sizes[n]` must be mu(B(0, n)), either a profile's ball array or
    the sizes of a product-power sequence.  A bounded result is the 1/n
    boundary decay characteristic of abelian (and more generally polynomial,
    rank-one-commutator) situations.
    """
    if len(ball_sizes) < 3:
        raise ValueError("need sizes up to radius at least 2")
    top = len(ball_sizes) - 2
    if n_max is not None:
        top = min(top, n_max)
    best = Fraction(0)
    for n in range(1, top + 1):
        best = max(
            best, Fraction(n * (ball_sizes[n + 1] - ball_sizes[n]), ball_sizes[n])
        )
    return best


# -- growth exponent ---------------------------------------------------------


@dataclass(frozen=True)
class GrowthFit:
    exponent: float
    intercept: float
    residual_rms: float
    radii: tuple[int, ...]


def growth_exponent_fit(
    ball_sizes: Sequence[int],
    radii: Sequence[int] | None = None,
    top_half: bool = True,
    min_points: int = 8,
) -> GrowthFit:
    """Least-squares slope of log volume against log radius.

    By default fits radii in the top half of [1, len(ball_sizes) - 1]; pass
    explicit `radii` (e.g. dyadic scales) to control the sample.  Requires at
    least `min_points` data points.
    """
    if radii is None:
        r_hi = len(ball_sizes) - 1
        r_lo = max(1, r_hi // 2) if top_half else 1
        radii = range(r_lo, r_hi + 1)
    radii = tuple(radii)
    if len(radii) < min_points:
        raise ValueError(f"need at least {min_points} radii, got {len(radii)}")
    xs = np.log([float(r) for r in radii])
    ys = np.log([float(ball_sizes[r]) for r in radii])
    slope, intercept = np.polyfit(xs, ys, 1)
    residuals = ys - (slope * xs + intercept)
    return GrowthFit(
        exponent=float(slope),
        intercept=float(intercept),
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
        radii=radii,
    )
