"""Injective piecewise contractions of [0, 1) and periodic-orbit certificates.

A map here is affine on each half-open piece [x_{i-1}, x_i) with slope of
absolute value strictly below 1.  Unlike an interval exchange the images need
not tile [0, 1); they only have to stay inside it and be pairwise disjoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BadPartition,
    CodingUndecidable,
    DenominatorBlowup,
    ImageEscapes,
    InsufficientVisits,
    NotContracting,
    NotInjective,
    OutOfDomain,
    PeriodicOrbit,
)
from .intervals import Interval
from .numeric import Ball, ExactNumber, Scalarish, format_scalar, parse_scalar, to_ball

DEFAULT_BIT_BUDGET = 4096


def _exact(x: Scalarish) -> ExactNumber:
    v = ExactNumber._coerce(x)
    if v is None:
        raise TypeError(f"expected exact scalar, got {type(x)!r}")
    return v


@dataclass(frozen=True)
class PiecewiseContraction:
    """A validated injective piecewise contraction; construct via new_pc."""

    breakpoints: tuple[ExactNumber, ...]
    slopes: tuple[ExactNumber, ...]
    intercepts: tuple[ExactNumber, ...]
    images: tuple[Interval, ...]

    @property
    def n(self) -> int:
        return len(self.slopes)

    @property
    def interior_breakpoints(self) -> tuple[ExactNumber, ...]:
        return self.breakpoints[1:-1]

    def piece_interval(self, i: int) -> Interval:
        return Interval(self.breakpoints[i - 1], self.breakpoints[i])

    def piece_index(self, x: Scalarish) -> int:
        v = _exact(x)
        if v < 0 or v >= 1:
            raise OutOfDomain(f"{v} outside [0, 1)")
        lo = 0
        hi = self.n - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if v >= self.breakpoints[mid]:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1

    def eval(self, x: Scalarish) -> ExactNumber:
        v = _exact(x)
        i = self.piece_index(v)
        return self.slopes[i - 1] * v + self.intercepts[i - 1]

    def to_json_dict(self) -> dict:
        return {
            "type": "pc",
            "breakpoints": [format_scalar(b) for b in self.breakpoints],
            "slopes": [format_scalar(s) for s in self.slopes],
            "intercepts": [format_scalar(c) for c in self.intercepts],
        }


def new_pc(
    breakpoints: Sequence[Scalarish],
    slopes: Sequence[Scalarish],
    intercepts: Sequence[Scalarish],
) -> PiecewiseContraction:
    """Validate and build; raises BadPartition, NotContracting, NotInjective,
    or ImageEscapes."""
    bps = tuple(_exact(b) for b in breakpoints)
    sls = tuple(_exact(s) for s in slopes)
    ics = tuple(_exact(c) for c in intercepts)
    n = len(sls)
    if n < 1 or len(bps) != n + 1 or len(ics) != n:
        raise BadPartition("need n+1 breakpoints, n slopes, n intercepts")
    if bps[0] != 0 or bps[-1] != 1:
        raise BadPartition("breakpoints must run from 0 to 1")
    for a, b in zip(bps, bps[1:]):
        if not a < b:
            raise BadPartition("breakpoints must be strictly increasing")
    images = []
    for i in range(n):
        s = sls[i]
        if s == 0:
            raise NotInjective(f"piece {i + 1} has slope 0")
        if not abs(s) < 1:
            raise NotContracting(f"piece {i + 1} slope {s} has |slope| >= 1")
        lo_val = s * bps[i] + ics[i]
        hi_val = s * bps[i + 1] + ics[i]
        if s > 0:
            img = Interval(lo_val, hi_val, lo_closed=True, hi_closed=False)
        else:
            img = Interval(hi_val, lo_val, lo_closed=False, hi_closed=True)
        below = img.lo < 0
        above = img.hi > 1 or (img.hi == 1 and img.hi_closed)
        if below or above:
            raise ImageEscapes(f"piece {i + 1} image {img} leaves [0, 1)")
        images.append(img)
    for i in range(n):
        for j in range(i + 1, n):
            if not images[i].is_disjoint(images[j]):
                raise NotInjective(f"images of pieces {i + 1} and {j + 1} overlap")
    return PiecewiseContraction(bps, sls, ics, tuple(images))


def coding(
    f: PiecewiseContraction,
    x: Scalarish,
    length: int,
    bit_budget: int = DEFAULT_BIT_BUDGET,
    approximate: bool = False,
    precision_bits: int = 192,
):
    """Itinerary of x under f for the given number of steps.

    Exact mode iterates in exact arithmetic and raises DenominatorBlowup once
    a point's representation exceeds bit_budget bits.  Approximate mode tracks
    the orbit as a shrinking-slope ball instead; it never blows up but raises
    CodingUndecidable at the first step where the ball straddles a breakpoint.
    """
    from .words import SymbolicWord

    if length < 1:
        raise ValueError("length must be >= 1")
    if approximate:
        return _coding_ball(f, _exact(x), length, precision_bits)
    point = _exact(x)
    letters = []
    for step in range(length):
        bits = point.bit_size()
        if bits > bit_budget:
            raise DenominatorBlowup(step, bits, bit_budget)
        i = f.piece_index(point)
        letters.append(i)
        point = f.slopes[i - 1] * point + f.intercepts[i - 1]
    return SymbolicWord(tuple(letters), f.n, "pc coding")


def _coding_ball(f: PiecewiseContraction, x: ExactNumber, length: int, precision_bits: int):
    from .words import SymbolicWord

    slope_balls = [to_ball(s, precision_bits) for s in f.slopes]
    intercept_balls = [to_ball(c, precision_bits) for c in f.intercepts]
    ball = to_ball(x, precision_bits)
    letters = []
    for step in range(length):
        i = None
        for idx in range(1, f.n + 1):
            lo, hi = f.breakpoints[idx - 1], f.breakpoints[idx]
            if (lo <= ball.lo or lo == 0) and ball.hi < hi:
                i = idx
                break
        if i is None:
            raise CodingUndecidable(step)
        letters.append(i)
        prod = _ball_mul(slope_balls[i - 1], ball, precision_bits)
        ball = prod + intercept_balls[i - 1]
    return SymbolicWord(tuple(letters), f.n, "pc coding (ball)")


def _ball_mul(a: Ball, b: Ball, precision_bits: int) -> Ball:
    """Outward-rounded product of two balls."""
    from .numeric import dyadic_ceil

    center = a.center * b.center
    radius = (
        abs(a.center) * b.radius + abs(b.center) * a.radius + a.radius * b.radius
    )
    grid = max(precision_bits + 8, 16)
    c_lo = Fraction(math.floor(center * 2**grid), 2**grid)
    slack = center - c_lo
    return Ball(c_lo, dyadic_ceil(radius + slack, grid))


# ------------------------------------------------------- periodic certificates


def _affine_preimage(a: ExactNumber, c: ExactNumber, iv: Interval) -> Interval:
    """Preimage of iv under x -> a*x + c (a nonzero)."""
    u = (iv.lo - c) / a
    v = (iv.hi - c) / a
    if a > 0:
        return Interval(u, v, iv.lo_closed, iv.hi_closed)
    return Interval(v, u, iv.hi_closed, iv.lo_closed)


def _compose_cycle(f: PiecewiseContraction, word: Sequence[int]):
    """Cylinder of the word and the full-cycle affine map.

    Returns (C, a, c) where C is the set of x whose first len(word) letters
    are exactly word, and f^p restricted to C is x -> a*x + c.  Returns None
    when the cylinder is empty.
    """
    C = f.piece_interval(word[0])
    a = ExactNumber(1)
    c = ExactNumber(0)
    for m in range(1, len(word)):
        s = f.slopes[word[m - 1] - 1]
        b = f.intercepts[word[m - 1] - 1]
        a = s * a
        c = s * c + b
        C = C.intersect(_affine_preimage(a, c, f.piece_interval(word[m])))
        if C is None:
            return None
    s = f.slopes[word[-1] - 1]
    b = f.intercepts[word[-1] - 1]
    return C, s * a, s * c + b


def _cycle_contracts(C: Interval, a: ExactNumber, c: ExactNumber) -> bool:
    """True when the cycle maps the cylinder into itself as a point set.

    Containment need not be strict: endpoint flags carry the half-open
    bookkeeping, so equality at a closed end of C is sound (every point of
    C still re-enters C and the period word repeats).  The common case is a
    fixed point sitting exactly at 0."""
    lo = a * C.lo + c
    hi = a * C.hi + c
    if a > 0:
        img = Interval(lo, hi, C.lo_closed, C.hi_closed)
    else:
        img = Interval(hi, lo, C.hi_closed, C.lo_closed)
    return C.contains_interval(img)


@dataclass(frozen=True)
class PeriodicCertificate:
    """Machine-checkable proof that the coding of start is q-preperiodic with
    period word period: f^p maps the cylinder of the period word into itself
    (as a point set, endpoint flags included) and f^q(start) lands inside
    that cylinder."""

    start: ExactNumber
    q: int
    p: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    cylinder: Interval
    cycle_slope: ExactNumber
    cycle_intercept: ExactNumber
    fixed_point: ExactNumber

    def eventual_word(self, length: int):
        """First letters of the certified infinite coding."""
        from .words import SymbolicWord

        letters = list(self.preperiod)
        while len(letters) < length:
            letters.extend(self.period)
        alpha = max(max(self.preperiod, default=1), max(self.period))
        return SymbolicWord(tuple(letters[:length]), alpha, "certified periodic")

    def to_json_dict(self) -> dict:
        return {
            "type": "periodic-certificate",
            "start": format_scalar(self.start),
            "q": self.q,
            "p": self.p,
            "preperiod": list(self.preperiod),
            "period": list(self.period),
            "cylinder": {
                "lo": format_scalar(self.cylinder.lo),
                "hi": format_scalar(self.cylinder.hi),
                "lo_closed": self.cylinder.lo_closed,
                "hi_closed": self.cylinder.hi_closed,
            },
            "cycle_slope": format_scalar(self.cycle_slope),
            "cycle_intercept": format_scalar(self.cycle_intercept),
            "fixed_point": format_scalar(self.fixed_point),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PeriodicCertificate":
        cyl = data["cylinder"]
        return cls(
            start=parse_scalar(data["start"]),
            q=int(data["q"]),
            p=int(data["p"]),
            preperiod=tuple(int(v) for v in data["preperiod"]),
            period=tuple(int(v) for v in data["period"]),
            cylinder=Interval(
                parse_scalar(cyl["lo"]),
                parse_scalar(cyl["hi"]),
                bool(cyl["lo_closed"]),
                bool(cyl["hi_closed"]),
            ),
            cycle_slope=parse_scalar(data["cycle_slope"]),
            cycle_intercept=parse_scalar(data["cycle_intercept"]),
            fixed_point=parse_scalar(data["fixed_point"]),
        )


def _float_params(f: PiecewiseContraction):
    bps = [float(b) for b in f.breakpoints]
    sls = [float(s) for s in f.slopes]
    ics = [float(c) for c in f.intercepts]
    return bps, sls, ics


def _float_orbit(f: PiecewiseContraction, x0: float, length: int):
    """(points, letters) of the float orbit; cheap candidate generator only."""
    bps, sls, ics = _float_params(f)
    n = f.n
    pts = [0.0] * length
    lets = [0] * length
    x = x0
    for k in range(length):
        i = n
        for idx in range(1, n):
            if x < bps[idx]:
                i = idx
                break
        pts[k] = x
        lets[k] = i
        x = sls[i - 1] * x + ics[i - 1]
        if x < 0.0:
            x = 0.0
        elif x >= 1.0:
            x = math.nextafter(1.0, 0.0)
    return pts, lets


def _detection_candidates(f: PiecewiseContraction, x: ExactNumber, detect_len: int):
    """Candidate (q, p) pairs from the float orbit, cheapest-first."""
    from .words import SymbolicWord, detect_eventual_period

    pts, lets = _float_orbit(f, float(x), detect_len)
    candidates: list[tuple[int, int]] = []
    seen_at: dict[float, int] = {}
    for k, v in enumerate(pts):
        key = round(v, 10)
        if key in seen_at:
            q0, p0 = seen_at[key], k - seen_at[key]
            candidates.append((q0, p0))
            break
        seen_at[key] = k
    if len(lets) >= 8:
        word = SymbolicWord(tuple(lets), f.n, "float detection")
        hit = detect_eventual_period(word)
        if hit is not None:
            candidates.append(hit)
    out = []
    for q, p in candidates:
        for pair in ((q, p), (q, 2 * p)):
            if pair not in out and pair[1] >= 1:
                out.append(pair)
    return sorted(out, key=lambda t: (t[0], t[1]))


def certify_periodic(
    f,
    x: Scalarish,
    budget: int = 4096,
    bit_budget: int = 65536,
) -> Optional[PeriodicCertificate]:
    """Certify that the coding of x is ultimately periodic, or return None.

    Detection runs in floating point over the first `budget` orbit steps;
    every accepted certificate is verified in exact arithmetic (cylinder
    mapped strictly inside itself, orbit entry into the cylinder), so a
    wrong float hint can only cost time.  None means inconclusive, never
    a proof of aperiodicity.

    f may also be a constructed contraction carrying parameter enclosures
    (see construct.build_pc_from_iet).  Certificates are then additionally
    required to hold for every map inside the enclosures; a cycle that is
    an artifact of truncating the true parameters has containment margins
    far below the enclosure radii and is rejected, so the answer speaks
    for the true map, not for its representative.
    """
    wrapped = getattr(f, "pc", None)
    if wrapped is not None and hasattr(f, "intercept_balls"):
        from .construct import robust_certificate

        cpc = f
        return _certify_exact(
            wrapped, x, budget, bit_budget,
            _accept=lambda cert: robust_certificate(cpc, cert),
        )
    return _certify_exact(f, x, budget, bit_budget)


def _certify_exact(
    f: PiecewiseContraction,
    x: Scalarish,
    budget: int,
    bit_budget: int,
    _accept=None,
) -> Optional[PeriodicCertificate]:
    x0 = _exact(x)
    candidates = _detection_candidates(f, x0, budget)
    if not candidates:
        return None

    orbit = [x0]

    def orbit_point(m: int) -> Optional[ExactNumber]:
        while len(orbit) <= m:
            point = orbit[-1]
            if point.bit_size() > bit_budget:
                raise DenominatorBlowup(len(orbit) - 1, point.bit_size(), bit_budget)
            i = f.piece_index(point)
            orbit.append(f.slopes[i - 1] * point + f.intercepts[i - 1])
        return orbit[m]

    _, float_letters = _float_orbit(f, float(x0), budget)
    for q_hint, p in candidates:
        if q_hint + 2 * p + 1 > budget:
            continue
        base = tuple(float_letters[q_hint : q_hint + p])
        for m in range(max(0, q_hint - p), q_hint + 2 * p + 1):
            shift = (m - q_hint) % p
            word = base[shift:] + base[:shift]
            built = _compose_cycle(f, word)
            if built is None:
                continue
            C, a, c = built
            if not _cycle_contracts(C, a, c):
                continue
            y = orbit_point(m)
            if not C.contains(y):
                continue
            pre = tuple(f.piece_index(orbit_point(t)) for t in range(m))
            fixed = c / (ExactNumber(1) - a)
            if not C.contains(fixed):
                continue
            cert = PeriodicCertificate(
                start=x0,
                q=m,
                p=p,
                preperiod=pre,
                period=word,
                cylinder=C,
                cycle_slope=a,
                cycle_intercept=c,
                fixed_point=fixed,
            )
            if _accept is None or _accept(cert):
                return cert
    return None


def check_certificate(f: PiecewiseContraction, cert: PeriodicCertificate) -> bool:
    """Re-derive every claim of the certificate from f alone."""
    if cert.p < 1 or cert.q < 0 or len(cert.period) != cert.p:
        return False
    if len(cert.preperiod) != cert.q:
        return False
    if any(not 1 <= w <= f.n for w in cert.period + cert.preperiod):
        return False
    built = _compose_cycle(f, cert.period)
    if built is None:
        return False
    C, a, c = built
    if (C.lo, C.hi, C.lo_closed, C.hi_closed) != (
        cert.cylinder.lo,
        cert.cylinder.hi,
        cert.cylinder.lo_closed,
        cert.cylinder.hi_closed,
    ):
        return False
    if a != cert.cycle_slope or c != cert.cycle_intercept:
        return False
    if not _cycle_contracts(C, a, c):
        return False
    if cert.fixed_point != c / (ExactNumber(1) - a):
        return False
    if not C.contains(cert.fixed_point):
        return False
    point = cert.start
    for m in range(cert.q):
        i = f.piece_index(point)
        if i != cert.preperiod[m]:
            return False
        point = f.slopes[i - 1] * point + f.intercepts[i - 1]
    return C.contains(point)


# ------------------------------------------------------------ empirical factor


@dataclass(frozen=True)
class EmpiricalFactor:
    """Candidate semiconjugacy data read off one long orbit.

    h_grid samples the empirical distribution function of the orbit on a
    uniform grid; the factor candidate sends each visited piece
    [x_{i-1}, x_i) to a translation by translations_hat[i].  residual is
    the worst observed violation of h(f(s)) = h(s) + translation over the
    kept pieces.  approximate marks orbits that outgrew the exact bit
    budget and were continued in outward-rounded ball arithmetic.
    """

    orbit_len: int
    visit_counts: tuple[int, ...]
    kept_pieces: tuple[int, ...]
    breakpoints_hat: tuple[float, ...]
    translations_hat: dict[int, float]
    residual: float
    h_grid: tuple[float, ...]
    approximate: bool


def _fraction_bits(q: Fraction) -> int:
    return max(q.numerator.bit_length(), q.denominator.bit_length())


def _orbit_stats(
    f: PiecewiseContraction,
    x0: ExactNumber,
    length: int,
    bit_budget: int,
    precision_bits: int,
):
    """Orbit points as floats plus exact letters, for statistics.

    Float iteration silently truncates parameters to 53 bits, and a
    contraction near a rotation locks onto an attractor whose period grows
    with parameter precision, so statistics must follow the exact orbit of
    the given map.  Exact arithmetic runs as long as representations stay
    under bit_budget bits; past that the orbit continues as an
    outward-rounded ball and the result is flagged approximate.
    """
    import bisect as _bisect

    n = f.n
    pts = [0.0] * length
    lets = [0] * length
    k = 0
    rational = x0.is_rational and all(
        v.is_rational for v in (*f.breakpoints, *f.slopes, *f.intercepts)
    )
    if rational:
        bps = [b.to_fraction() for b in f.breakpoints]
        sls = [s.to_fraction() for s in f.slopes]
        ics = [c.to_fraction() for c in f.intercepts]
        point = x0.to_fraction()
        while k < length and _fraction_bits(point) <= bit_budget:
            i = _bisect.bisect_right(bps, point, 1, n)
            pts[k] = float(point)
            lets[k] = i
            point = sls[i - 1] * point + ics[i - 1]
            k += 1
        carry = ExactNumber(point)
    else:
        point = x0
        while k < length and point.bit_size() <= bit_budget:
            i = f.piece_index(point)
            pts[k] = float(point)
            lets[k] = i
            point = f.slopes[i - 1] * point + f.intercepts[i - 1]
            k += 1
        carry = point
    if k == length:
        return pts, lets, False

    slope_balls = [to_ball(s, precision_bits) for s in f.slopes]
    intercept_balls = [to_ball(c, precision_bits) for c in f.intercepts]
    ball = to_ball(carry, precision_bits)
    while k < length:
        i = None
        for idx in range(1, n + 1):
            lo, hi = f.breakpoints[idx - 1], f.breakpoints[idx]
            if (lo <= ball.lo or lo == 0) and ball.hi < hi:
                i = idx
                break
        if i is None:
            # ball straddles a breakpoint; pick the center's piece and let
            # the approximate flag own the ambiguity
            i = f.piece_index(ExactNumber(ball.center))
        pts[k] = float(ball.center)
        lets[k] = i
        prod = _ball_mul(slope_balls[i - 1], ball, precision_bits)
        ball = prod + intercept_balls[i - 1]
        k += 1
    return pts, lets, True


def empirical_factor(
    f,
    x: Scalarish,
    m: int = 20000,
    grid_size: int = 512,
    bit_budget: int = 1 << 17,
    precision_bits: int = 192,
    burn_in: int = 64,
) -> EmpiricalFactor:
    """Estimate a translation structure for f from the orbit of x.

    f may be a plain contraction or a constructed one carrying parameter
    enclosures; statistics always follow the exact representative orbit.
    The m samples start at f^burn_in(x): after burn_in steps the orbit is
    within lambda^burn_in of its omega-limit, so the discarded head only
    smears the distribution function with transient mass.
    Raises PeriodicOrbit when the coding of x is certifiably ultimately
    periodic (a finite orbit closure supports no useful statistics) and
    InsufficientVisits when no piece collects at least log2(m) visits.
    """
    import numpy as np

    if m < 1000:
        raise ValueError("m must be >= 1000")
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    rep = f
    wrapped = getattr(f, "pc", None)
    if wrapped is not None and hasattr(f, "intercept_balls"):
        rep = wrapped
    x0 = _exact(x)
    cert = certify_periodic(f, x0)
    if cert is not None:
        raise PeriodicOrbit(
            f"coding is ultimately periodic (q={cert.q}, p={cert.p})"
        )
    pts, lets, approximate = _orbit_stats(
        rep, x0, burn_in + m + 1, bit_budget, precision_bits
    )
    orbit = np.asarray(pts[burn_in:])
    letters = np.asarray(lets[burn_in:])
    sample = np.sort(orbit[:m])
    H = np.searchsorted(sample, orbit, side="right") / m

    counts = [int(np.count_nonzero(letters[:m] == i)) for i in range(1, rep.n + 1)]
    threshold = math.log2(m)
    kept = tuple(i for i in range(1, rep.n + 1) if counts[i - 1] >= threshold)
    if not kept:
        raise InsufficientVisits(
            f"no piece reached {threshold:.1f} visits in {m} steps"
        )

    # h at a breakpoint counts samples to its left, which the exact letters
    # already know; float comparisons would misplace samples when the
    # attractor has structure below double precision
    bps_hat = tuple(float(v) for v in np.concatenate(
        ([0.0], np.cumsum(counts) / m)
    ))
    grid = np.linspace(0.0, 1.0, grid_size + 1)
    h_grid = tuple(
        float(v) for v in np.searchsorted(sample, grid, side="right") / m
    )
    jumps = H[1:] - H[:-1]
    piece_of_s = letters[:-1]
    translations: dict[int, float] = {}
    residual = 0.0
    for i in kept:
        mask = piece_of_s == i
        if not mask.any():
            continue
        b_hat = float(np.median(jumps[mask]))
        translations[i] = b_hat
        residual = max(residual, float(np.abs(jumps[mask] - b_hat).max()))
    return EmpiricalFactor(
        orbit_len=m,
        visit_counts=tuple(counts),
        kept_pieces=kept,
        breakpoints_hat=bps_hat,
        translations_hat=translations,
        residual=residual,
        h_grid=h_grid,
        approximate=approximate,
    )
