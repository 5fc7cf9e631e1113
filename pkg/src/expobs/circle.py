"""Piecewise-linear circle and interval dynamics with exact certificates.

Circle maps are handled through degree-one lifts F with F(x+1) = F(x) + 1,
represented by rational breakpoints in [0, 1) and their lift values.  All
root finding is per linear piece, so rotation numbers, periodic sets and
wandering intervals come out exact.  A certificate pins down a probe interval
whose iterates stay below a requested diameter for every integer time: the
finite trace covers |n| <= N and an affine contraction span at both ends
guarantees the infinite tails.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    AllFixed,
    HorizonExceeded,
    InconsistentRotationNumber,
    InvalidDocument,
    NoPeriodicOrbit,
    NotRigid,
    NotWandering,
    NoWanderingInterval,
)
from .exact import format_rational, parse_rational
from .library import rotation_grid
from .relations import (
    chain_components,
    e_star,
    indistinguishability_quotient,
    omega_map,
)
from .model import mesh as system_mesh

CIRCLE_DIAM_CAP = Fraction(1, 2)
INTERVAL_DIAM_CAP = Fraction(1)
DEFAULT_Q_MAX = 64
DEFAULT_N_MAX = 100_000
_MAX_HALVINGS = 512


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


# --- node-level helpers (xs strictly increasing, exact interpolation) --------


def _interp(xs, ys, x: Fraction) -> Fraction:
    if not xs[0] <= x <= xs[-1]:
        raise ValueError(f"{x} outside [{xs[0]}, {xs[-1]}]")
    lo, hi = 0, len(xs) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    x1, x2, y1, y2 = xs[lo], xs[lo + 1], ys[lo], ys[lo + 1]
    return y1 + (x - x1) * (y2 - y1) / (x2 - x1)


def _inverse_interp(xs, ys, y: Fraction) -> Fraction:
    """Preimage under a strictly monotone PL node list (either direction)."""
    increasing = ys[-1] > ys[0]
    for i in range(len(xs) - 1):
        y1, y2 = ys[i], ys[i + 1]
        lo, hi = (y1, y2) if increasing else (y2, y1)
        if lo <= y <= hi:
            if y1 == y2:
                return xs[i]
            return xs[i] + (y - y1) * (xs[i + 1] - xs[i]) / (y2 - y1)
    raise ValueError(f"{y} outside the value range [{ys[0]}, {ys[-1]}]")


# --- circle lifts -------------------------------------------------------------


@dataclass(frozen=True)
class PLCircleMap:
    """Degree-one lift of an increasing PL circle homeomorphism."""

    breakpoints: tuple
    values: tuple

    @classmethod
    def build(cls, breakpoints, values) -> "PLCircleMap":
        bs = tuple(Fraction(b) for b in breakpoints)
        vs = tuple(Fraction(v) for v in values)
        if len(bs) != len(vs) or not bs:
            raise InvalidDocument("breakpoints and lift values must pair up")
        if bs[0] != 0:
            raise InvalidDocument("breakpoints must start at 0")
        if any(not 0 <= b < 1 for b in bs):
            raise InvalidDocument("breakpoints must lie in [0, 1)")
        if any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])):
            raise InvalidDocument("breakpoints must be strictly increasing")
        if any(v2 <= v1 for v1, v2 in zip(vs, vs[1:])) or vs[-1] >= vs[0] + 1:
            raise InvalidDocument("lift values must increase strictly with slope > 0")
        return cls(bs, vs)

    def _nodes(self):
        xs = self.breakpoints + (Fraction(1),)
        ys = self.values + (self.values[0] + 1,)
        return xs, ys

    def eval_lift(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        n = _floor(x)
        xs, ys = self._nodes()
        return _interp(xs, ys, x - n) + n

    def inverse_lift(self, y: Fraction) -> Fraction:
        y = Fraction(y)
        xs, ys = self._nodes()
        k = _floor(y - ys[0])
        yr = y - k
        if yr >= ys[-1]:  # exact top edge after flooring
            k += 1
            yr -= 1
        return _inverse_interp(xs, ys, yr) + k

    def node_positions(self) -> tuple:
        return self.breakpoints

    def affine_span_slope(self, lo: Fraction, hi: Fraction):
        """Slope of the map on [lo, hi] if it is affine there, else None.

        Affine means no lift node strictly inside (lo, hi).
        """
        if hi < lo:
            lo, hi = hi, lo
        if lo == hi:
            return None
        for n in range(_floor(lo), _floor(hi) + 1):
            for b in self.breakpoints:
                if lo < b + n < hi:
                    return None
        return (self.eval_lift(hi) - self.eval_lift(lo)) / (hi - lo)


def compose_circle(outer: PLCircleMap, inner: PLCircleMap) -> PLCircleMap:
    """The lift of outer о inner, with exact pulled-back breakpoints."""
    breaks = set(inner.breakpoints)
    for b in outer.breakpoints:
        x = inner.inverse_lift(b)
        breaks.add(x - _floor(x))
    bs = sorted(breaks)
    vs = [outer.eval_lift(inner.eval_lift(b)) for b in bs]
    return PLCircleMap.build(bs, vs)


def circle_power(base: PLCircleMap, q: int) -> PLCircleMap:
    if q < 1:
        raise ValueError("power needs q >= 1")
    acc = base
    for _ in range(q - 1):
        acc = compose_circle(base, acc)
    return acc


def shift_values(mapping: PLCircleMap, p: int) -> PLCircleMap:
    return PLCircleMap(mapping.breakpoints, tuple(v - p for v in mapping.values))


def parse_circle_map(document) -> PLCircleMap:
    doc = _loads(document)
    for key in ("breakpoints", "lift_values"):
        if key not in doc:
            raise InvalidDocument(f"circle map document lacks {key!r}")
    return PLCircleMap.build(
        [parse_rational(b) for b in doc["breakpoints"]],
        [parse_rational(v) for v in doc["lift_values"]],
    )


def serialize_circle_map(mapping: PLCircleMap) -> dict:
    return {
        "breakpoints": [format_rational(b) for b in mapping.breakpoints],
        "lift_values": [format_rational(v) for v in mapping.values],
    }


def _loads(document):
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InvalidDocument(f"not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise InvalidDocument("document must be a JSON object")
    return document


# --- rotation numbers and periodic sets ---------------------------------------


def rotation_number(mapping: PLCircleMap, q_max: int = DEFAULT_Q_MAX):
    """Exact rotation number p/q when a periodic orbit of period <= q_max
    exists, else None.  The displacement of a lift power spans less than 1,
    so at most one integer p can be crossed at each q; the first hit is the
    reduced fraction.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    power = mapping
    for q in range(1, q_max + 1):
        xs = power.breakpoints
        disp = [power.eval_lift(b) - b for b in xs]
        lo, hi = min(disp), max(disp)
        p_lo = -((-lo.numerator) // lo.denominator)  # ceil(lo)
        if p_lo <= hi:
            assert gcd(p_lo, q) == 1, "earlier q would have produced this orbit"
            return Fraction(p_lo, q)
        if q < q_max:
            power = compose_circle(mapping, power)
    return None


def periodic_points(mapping: PLCircleMap, p: int, q: int):
    """Solution set of F^q(x) = x + p in [0, 1), as merged closed blocks.

    Returns (blocks, full): blocks are (lo, hi) in lift coordinates with
    lo in [0, 1) and hi <= lo + 1 (a block with hi > 1 wraps through 0);
    full means the whole circle is periodic.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    g = circle_power(mapping, q)
    xs, ys = g._nodes()
    pieces = []
    for i in range(len(xs) - 1):
        x1, x2, y1, y2 = xs[i], xs[i + 1], ys[i], ys[i + 1]
        slope = (y2 - y1) / (x2 - x1)
        if slope == 1:
            if y1 - x1 == p:
                pieces.append([x1, x2])
        else:
            root = x1 + (p - (y1 - x1)) / (slope - 1)
            if x1 <= root <= x2 and root < 1:
                pieces.append([root, root])
    if not pieces:
        raise InconsistentRotationNumber(f"no solutions of F^{q}(x) = x + {p}")
    pieces.sort(key=lambda piece: piece[0])
    merged = [pieces[0]]
    for lo, hi in pieces[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    full = False
    if merged[0][0] == 0 and merged[-1][1] == 1:
        if len(merged) == 1:
            full = True
        else:
            first = merged.pop(0)
            merged[-1][1] = first[1] + 1
    blocks = tuple((lo, hi) for lo, hi in merged)
    return blocks, full


def _complement_arcs(blocks, full: bool):
    """Open arcs of the circle between consecutive fixed blocks, in lift
    coordinates (a, b) with a in [0, 1) and a < b <= a + 1."""
    if full:
        return ()
    arcs = []
    m = len(blocks)
    for i in range(m):
        a = blocks[i][1]
        b = blocks[(i + 1) % m][0] + (1 if i == m - 1 else 0)
        if a >= 1:
            a, b = a - 1, b - 1
        assert a < b, "merged blocks cannot touch"
        arcs.append((a, b))
    arcs.sort(key=lambda arc: arc[0])
    return tuple(arcs)


@dataclass(frozen=True)
class WanderingReport:
    arcs: tuple
    q: int
    p: int


def wandering_intervals(mapping: PLCircleMap, q_max: int = DEFAULT_Q_MAX) -> WanderingReport:
    """Complement of the periodic set of the reduced power g = F^q - p.

    Every complementary arc is wandering for g: its points drift from the
    repelling end to the attracting end, never to return.
    """
    rho = rotation_number(mapping, q_max)
    if rho is None:
        raise NoPeriodicOrbit(f"no periodic orbit with period <= {q_max}")
    p, q = rho.numerator, rho.denominator
    blocks, full = periodic_points(mapping, p, q)
    return WanderingReport(arcs=_complement_arcs(blocks, full), q=q, p=p)


def reduced_power(mapping: PLCircleMap, q_max: int = DEFAULT_Q_MAX):
    """(g, report) where g = F^q - p has the wandering arcs as its fixed-free
    region and fixes every arc endpoint."""
    report = wandering_intervals(mapping, q_max)
    g = shift_values(circle_power(mapping, report.q), report.p)
    return g, report


# --- wandering interval certificates ------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Replayable evidence that one interval has uniformly small orbit images.

    trace covers |n| <= horizon with exact interval endpoints; in mode
    'contracting' the tail spans certify an affine contraction beside the
    adjacent fixed points, making diam(g^n U) <= delta for every |n| > horizon;
    in mode 'cap' delta is at least the diameter of the whole space and the
    bound is unconditional.
    """

    space: str            # "circle" | "interval"
    map_document: dict
    map_id: str
    delta: Fraction
    q: int
    p: int
    arc: tuple
    probe: tuple
    horizon: int
    direction: int        # +1 drift toward the right arc end, -1 toward the left
    mode: str             # "contracting" | "cap"
    trace: tuple          # ((n, lo, hi), ...) for n = -horizon .. horizon
    tail: dict            # {"forward": {"span": (lo, hi), "slope": s}, "backward": ...}


def map_identifier(doc: dict) -> str:
    return hashlib.sha256(
        json.dumps(doc, sort_keys=True).encode("utf-8")
    ).hexdigest()[:12]


def _diam(space: str, lo: Fraction, hi: Fraction) -> Fraction:
    length = hi - lo
    if space == "circle":
        return min(length, CIRCLE_DIAM_CAP)
    return length


def _drift_direction(g, arc) -> int:
    a, b = arc
    midpoint = (a + b) / 2
    image = g.eval_lift(midpoint)
    assert image != midpoint, "arc interior cannot contain fixed points"
    return 1 if image > midpoint else -1


def _tail_reached(g, lo, hi, target, delta) -> bool:
    """True when [lo, hi] sits in one affine piece together with the adjacent
    fixed point `target` and is already no longer than delta."""
    if hi - lo > delta:
        return False
    span = (min(lo, target), max(hi, target))
    slope = g.affine_span_slope(*span)
    return slope is not None


def property_p_check(mapping: PLCircleMap, arc, probe, n_max: int = 1000,
                     q_max: int = DEFAULT_Q_MAX):
    """Verify the disjoint-iterates property of a probe interval inside a
    wandering arc, with the total-length bound and eventual monotonicity.
    """
    g, report = reduced_power(mapping, q_max)
    arc = (Fraction(arc[0]), Fraction(arc[1]))
    if arc not in report.arcs:
        raise NotWandering(f"{arc} is not a wandering arc of the reduced power")
    u1, u2 = Fraction(probe[0]), Fraction(probe[1])
    if not (arc[0] < u1 <= u2 < arc[1]):
        raise NotWandering("probe must sit strictly inside the arc")
    fwd = _endpoint_orbit(g.eval_lift, u1, u2, n_max)
    bwd = _endpoint_orbit(g.inverse_lift, u1, u2, n_max)
    intervals = list(reversed(bwd[1:])) + fwd  # n = -n_max .. n_max
    for (lo1, hi1), (lo2, hi2) in zip(intervals, intervals[1:]):
        if not (hi1 < lo2 or hi2 < lo1):
            raise NotWandering(
                f"iterates overlap: [{lo1}, {hi1}] meets [{lo2}, {hi2}]"
            )
    total = sum(hi - lo for lo, hi in intervals)
    diams_fwd = [hi - lo for lo, hi in fwd]
    diams_bwd = [hi - lo for lo, hi in bwd]
    att = arc[1] if _drift_direction(g, arc) > 0 else arc[0]
    rep = arc[0] + arc[1] - att
    return {
        "arc": arc,
        "probe": (u1, u2),
        "n_max": n_max,
        "disjoint": True,
        "total_length": total,
        "total_length_ok": total <= 1,
        "fwd_monotone_from": _monotone_tail_start(diams_fwd),
        "bwd_monotone_from": _monotone_tail_start(diams_bwd),
        "fwd_tail_guaranteed": _tail_reached(g, *fwd[-1], att, arc[1] - arc[0]),
        "bwd_tail_guaranteed": _tail_reached(g, *bwd[-1], rep, arc[1] - arc[0]),
    }


def _endpoint_orbit(step, u1, u2, count):
    out = [(u1, u2)]
    lo, hi = u1, u2
    for _ in range(count):
        lo, hi = step(lo), step(hi)
        out.append((lo, hi))
    return out


def _monotone_tail_start(diams):
    start = len(diams) - 1
    while start > 0 and diams[start - 1] >= diams[start]:
        start -= 1
    return start


def _certify_core(g, space: str, arcs, q: int, p: int, delta: Fraction,
                  n_max: int, map_doc: dict) -> Certificate:
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not arcs:
        raise NoWanderingInterval("the fixed set leaves no complementary interval")
    arc = arcs[0]
    a, b = arc
    direction = _drift_direction(g, arc)
    att = b if direction > 0 else a
    rep = a if direction > 0 else b
    cap = CIRCLE_DIAM_CAP if space == "circle" else INTERVAL_DIAM_CAP
    third = (b - a) / 3
    u1, u2 = a + third, b - third
    if delta >= cap:
        return Certificate(
            space=space, map_document=map_doc, map_id=map_identifier(map_doc),
            delta=delta, q=q, p=p, arc=arc, probe=(u1, u2), horizon=0,
            direction=direction, mode="cap",
            trace=((0, u1, u2),), tail={},
        )
    for _ in range(_MAX_HALVINGS):
        result = _attempt(g, space, arc, att, rep, u1, u2, delta, n_max)
        if result is not None:
            trace, horizon, tail = result
            return Certificate(
                space=space, map_document=map_doc, map_id=map_identifier(map_doc),
                delta=delta, q=q, p=p, arc=arc, probe=(u1, u2), horizon=horizon,
                direction=direction, mode="contracting", trace=trace, tail=tail,
            )
        center = (u1 + u2) / 2
        quarter = (u2 - u1) / 4
        u1, u2 = center - quarter, center + quarter
    raise HorizonExceeded("could not certify within the halving budget")


def _attempt(g, space, arc, att, rep, u1, u2, delta, n_max):
    if _diam(space, u1, u2) > delta:
        return None
    # Pairwise disjointness of the full iterate family reduces to one step:
    # g is monotone, so g(U) beyond U propagates to every consecutive pair.
    if att > rep:
        if g.eval_lift(u1) <= u2:
            return None
    elif g.eval_lift(u2) >= u1:
        return None
    fwd = [(u1, u2)]
    lo, hi = u1, u2
    while not _tail_reached(g, lo, hi, att, delta):
        if len(fwd) > n_max:
            raise HorizonExceeded(f"forward orbit exceeded n_max = {n_max}")
        lo, hi = g.eval_lift(lo), g.eval_lift(hi)
        fwd.append((lo, hi))
    bwd = [(u1, u2)]
    lo, hi = u1, u2
    while not _tail_reached(g, lo, hi, rep, delta):
        if len(bwd) > n_max:
            raise HorizonExceeded(f"backward orbit exceeded n_max = {n_max}")
        lo, hi = g.inverse_lift(lo), g.inverse_lift(hi)
        bwd.append((lo, hi))
    horizon = max(len(fwd), len(bwd)) - 1
    while len(fwd) <= horizon:
        lo, hi = fwd[-1]
        fwd.append((g.eval_lift(lo), g.eval_lift(hi)))
    while len(bwd) <= horizon:
        lo, hi = bwd[-1]
        bwd.append((g.inverse_lift(lo), g.inverse_lift(hi)))
    if any(_diam(space, lo, hi) > delta for lo, hi in fwd + bwd):
        return None
    f_lo, f_hi = fwd[-1]
    b_lo, b_hi = bwd[-1]
    fwd_span = (min(f_lo, att), max(f_hi, att))
    bwd_span = (min(b_lo, rep), max(b_hi, rep))
    tail = {
        "forward": {"span": fwd_span, "slope": g.affine_span_slope(*fwd_span)},
        "backward": {"span": bwd_span, "slope": g.affine_span_slope(*bwd_span)},
    }
    trace = tuple(
        (n, lo, hi)
        for n, (lo, hi) in enumerate(list(reversed(bwd[1:])) + fwd, start=-horizon)
    )
    return trace, horizon, tail


def certify(mapping: PLCircleMap, delta: Fraction, q_max: int = DEFAULT_Q_MAX,
            n_max: int = DEFAULT_N_MAX) -> Certificate:
    """Certificate that the first wandering arc contains an interval whose
    images under the reduced power stay below delta in diameter, forever."""
    g, report = reduced_power(mapping, q_max)
    return _certify_core(
        g, "circle", report.arcs, report.q, report.p, delta, n_max,
        serialize_circle_map(mapping),
    )


@dataclass(frozen=True)
class VerificationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_certificate(cert: Certificate, delta: Fraction = None) -> VerificationReport:
    """Replay a certificate from its embedded map document.

    Recomputes the reduced power, re-walks the probe orbit, and re-checks
    every inequality; any exact mismatch or failed bound becomes a violation.
    A larger delta may be supplied: a certificate for delta also certifies
    every delta' >= delta.
    """
    delta = cert.delta if delta is None else Fraction(delta)
    violations = []
    if delta < cert.delta:
        violations.append("override delta is smaller than the certified delta")
    try:
        if cert.space == "circle":
            base = parse_circle_map(cert.map_document)
            g = shift_values(circle_power(base, cert.q), cert.p)
            cap = CIRCLE_DIAM_CAP
        else:
            # Parsing already reduces a decreasing document to its square,
            # so the parsed map replays directly; q records the reduction.
            g, power = parse_interval_map(cert.map_document)
            cap = INTERVAL_DIAM_CAP
            if power != cert.q:
                violations.append(
                    f"power annotation {cert.q} does not match the document ({power})"
                )
    except InvalidDocument as exc:
        return VerificationReport((f"embedded map does not parse: {exc}",))
    if cert.map_id != map_identifier(cert.map_document):
        violations.append("map identifier does not match the embedded document")
    a, b = cert.arc
    for endpoint in (a, b):
        if g.eval_lift(endpoint) != endpoint:
            violations.append(f"arc endpoint {endpoint} is not fixed by the reduced power")
    u1, u2 = cert.probe
    if not (a < u1 < u2 < b):
        violations.append("probe interval is not strictly inside the arc")
    expected = {n: (lo, hi) for n, lo, hi in cert.trace}
    if sorted(expected) != list(range(-cert.horizon, cert.horizon + 1)):
        violations.append("trace does not cover -N..N")
        return VerificationReport(tuple(violations))
    lo, hi = u1, u2
    if expected[0] != (lo, hi):
        violations.append("trace at n=0 is not the probe interval")
    for n in range(1, cert.horizon + 1):
        lo, hi = g.eval_lift(lo), g.eval_lift(hi)
        if expected[n] != (lo, hi):
            violations.append(f"trace mismatch at n={n}: recomputed ({lo}, {hi})")
            break
    lo, hi = u1, u2
    for n in range(1, cert.horizon + 1):
        lo, hi = g.inverse_lift(lo), g.inverse_lift(hi)
        if expected[-n] != (lo, hi):
            violations.append(f"trace mismatch at n={-n}: recomputed ({lo}, {hi})")
            break
    for n, lo_n, hi_n in cert.trace:
        if lo_n >= hi_n:
            violations.append(f"degenerate interval at n={n}")
        if _diam(cert.space, lo_n, hi_n) > delta:
            violations.append(
                f"diameter at n={n} is {_diam(cert.space, lo_n, hi_n)} > {delta}"
            )
    ordered = sorted(cert.trace, key=lambda entry: entry[0])
    for _n, lo_n, hi_n in ordered:
        if not (a <= lo_n and hi_n <= b):
            violations.append(f"trace interval at n={_n} leaves the arc")
    for (n1, lo1, hi1), (_n2, lo2, hi2) in zip(ordered, ordered[1:]):
        if not (hi1 < lo2 or hi2 < lo1):
            violations.append(f"iterates at n={n1} and n={n1 + 1} overlap")
        drift_ok = lo1 < lo2 and hi1 < hi2 if cert.direction > 0 else (
            lo1 > lo2 and hi1 > hi2
        )
        if not drift_ok:
            violations.append(
                f"endpoints do not drift monotonically between n={n1} and n={n1 + 1}"
            )
    if cert.mode == "cap":
        if delta < cap:
            violations.append("cap mode needs delta >= the diameter of the space")
    elif cert.mode == "contracting":
        att = b if cert.direction > 0 else a
        rep = a if cert.direction > 0 else b
        last_fwd = expected[cert.horizon]
        last_bwd = expected[-cert.horizon]
        violations.extend(
            _check_tail(g, "forward", cert.tail.get("forward"), last_fwd, att, delta, contracting=True)
        )
        violations.extend(
            _check_tail(g, "backward", cert.tail.get("backward"), last_bwd, rep, delta, contracting=False)
        )
    else:
        violations.append(f"unknown certificate mode {cert.mode!r}")
    return VerificationReport(tuple(violations))


def _check_tail(g, label, tail, last, fixed_point, delta, contracting: bool):
    out = []
    if tail is None:
        return [f"{label} tail data missing"]
    span = tail["span"]
    slope = g.affine_span_slope(span[0], span[1])
    if slope is None:
        out.append(f"{label} tail span is not affine")
        return out
    if slope != tail["slope"]:
        out.append(f"{label} tail slope mismatch: recomputed {slope}")
    if not (span[0] <= last[0] and last[1] <= span[1]):
        out.append(f"{label} tail span does not contain the trace end")
    if not span[0] <= fixed_point <= span[1]:
        out.append(f"{label} tail span does not reach its fixed point")
    if last[1] - last[0] > delta:
        out.append(f"{label} trace end is wider than delta")
    if contracting and slope >= 1:
        out.append(f"{label} tail slope {slope} is not < 1")
    if not contracting and slope <= 1:
        out.append(f"{label} tail slope {slope} is not > 1")
    return out


# --- separation gaps -----------------------------------------------------------


@dataclass(frozen=True)
class PLObservable:
    """Real-valued PL function on the unit interval chart (complex observables
    are handled component-wise)."""

    breakpoints: tuple
    values: tuple

    @classmethod
    def build(cls, breakpoints, values) -> "PLObservable":
        bs = tuple(Fraction(b) for b in breakpoints)
        vs = tuple(Fraction(v) for v in values)
        if len(bs) != len(vs) or len(bs) < 2:
            raise InvalidDocument("observable needs paired breakpoints and values")
        if bs[0] != 0 or bs[-1] != 1:
            raise InvalidDocument("observable chart must cover [0, 1]")
        if any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])):
            raise InvalidDocument("breakpoints must be strictly increasing")
        return cls(bs, vs)

    def eval(self, x: Fraction) -> Fraction:
        return _interp(self.breakpoints, self.values, Fraction(x))

    def oscillation(self, lo: Fraction, hi: Fraction) -> Fraction:
        candidates = [self.eval(lo), self.eval(hi)]
        candidates += [v for bp, v in zip(self.breakpoints, self.values) if lo < bp < hi]
        return max(candidates) - min(candidates)


def parse_pl_observable(document) -> PLObservable:
    doc = _loads(document)
    for key in ("breakpoints", "values"):
        if key not in doc:
            raise InvalidDocument(f"PL observable document lacks {key!r}")
    return PLObservable.build(
        [parse_rational(b) for b in doc["breakpoints"]],
        [parse_rational(v) for v in doc["values"]],
    )


def _oscillation_candidates(phi: PLObservable, lo: Fraction, hi: Fraction):
    vals = [phi.eval(lo), phi.eval(hi)]
    vals += [v for bp, v in zip(phi.breakpoints, phi.values) if lo < bp < hi]
    return vals


def separation_gap(cert: Certificate, phi: PLObservable) -> Fraction:
    """Half the oscillation of phi over the certified probe interval.

    Every observable expansive at the certified threshold is constant on the
    probe, so phi sits at least this far (in sup distance) from all of them.
    The probe may live in a wandering arc through 0; the chart split keeps
    oscillation candidates exact in that case.
    """
    u1, u2 = cert.probe
    if u2 <= 1:
        vals = _oscillation_candidates(phi, u1, u2)
    elif u1 >= 1:
        vals = _oscillation_candidates(phi, u1 - 1, u2 - 1)
    else:
        vals = _oscillation_candidates(phi, u1, Fraction(1))
        vals += _oscillation_candidates(phi, Fraction(0), u2 - 1)
    return (max(vals) - min(vals)) / 2


# --- rigid rotations ------------------------------------------------------------


@dataclass(frozen=True)
class RotationCaseReport:
    rho: Fraction
    p: int
    q: int
    grid_size: int
    e_star: Fraction
    mesh: Fraction
    omega_identity: bool
    quotient_threshold: Fraction
    blocks: tuple
    single_block: bool
    identity_chain_match: bool


def analyze_rotation_case(mapping: PLCircleMap) -> RotationCaseReport:
    """For a rigid rotation lift x + p/q, analyze the invariant q-point grid:
    the rotation is an isometry, so orbit separation equals plain distance
    (omega_identity) and the quotient agrees with plain chain components at
    every realized threshold (identity_chain_match); at threshold 1/q the
    indistinguishability quotient collapses to a single block — only constants
    are expansive there.  An integer rotation (the identity on the circle) is
    demonstrated on an 8-point grid.
    """
    rho = mapping.values[0] - mapping.breakpoints[0]
    if any(v - b != rho for b, v in zip(mapping.breakpoints, mapping.values)):
        raise NotRigid("lift is not x + c on every breakpoint")
    p, q = rho.numerator, rho.denominator
    grid = rotation_grid(8, 0) if q == 1 else rotation_grid(q, p % q)
    identity_match = all(
        indistinguishability_quotient(grid, t).blocks == chain_components(grid, t)
        for t in grid.realized_distances()
    )
    threshold = Fraction(1, len(grid.points))
    quotient = indistinguishability_quotient(grid, threshold)
    return RotationCaseReport(
        rho=rho,
        p=p,
        q=q,
        grid_size=len(grid.points),
        e_star=e_star(grid),
        mesh=system_mesh(grid),
        omega_identity=all(
            omega_map(grid, t) == t for t in grid.realized_distances()
        ),
        quotient_threshold=threshold,
        blocks=quotient.blocks,
        single_block=len(quotient.blocks) == 1,
        identity_chain_match=identity_match,
    )


# --- interval maps ---------------------------------------------------------------


@dataclass(frozen=True)
class PLIntervalMap:
    """Increasing PL homeomorphism of [0, 1] fixing both endpoints."""

    breakpoints: tuple
    values: tuple

    @classmethod
    def build(cls, breakpoints, values) -> "PLIntervalMap":
        bs = tuple(Fraction(b) for b in breakpoints)
        vs = tuple(Fraction(v) for v in values)
        if len(bs) != len(vs) or len(bs) < 2:
            raise InvalidDocument("breakpoints and values must pair up")
        if bs[0] != 0 or bs[-1] != 1:
            raise InvalidDocument("interval map must cover [0, 1]")
        if any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])):
            raise InvalidDocument("breakpoints must be strictly increasing")
        if vs[0] != 0 or vs[-1] != 1:
            raise InvalidDocument("interval map must fix 0 and 1")
        if any(v2 <= v1 for v1, v2 in zip(vs, vs[1:])):
            raise InvalidDocument("values must be strictly increasing")
        return cls(bs, vs)

    def eval_lift(self, x: Fraction) -> Fraction:
        return _interp(self.breakpoints, self.values, Fraction(x))

    def inverse_lift(self, y: Fraction) -> Fraction:
        return _inverse_interp(self.breakpoints, self.values, Fraction(y))

    def affine_span_slope(self, lo: Fraction, hi: Fraction):
        if hi < lo:
            lo, hi = hi, lo
        if lo == hi:
            return None
        if any(lo < b < hi for b in self.breakpoints):
            return None
        return (self.eval_lift(hi) - self.eval_lift(lo)) / (hi - lo)


def compose_interval(outer, inner) -> "PLIntervalMap":
    breaks = set(inner.breakpoints)
    for b in outer.breakpoints:
        breaks.add(_inverse_interp(inner.breakpoints, inner.values, b))
    bs = sorted(breaks)
    vs = [
        _interp(outer.breakpoints, outer.values,
                _interp(inner.breakpoints, inner.values, b))
        for b in bs
    ]
    return PLIntervalMap.build(bs, vs)


def interval_power(base: PLIntervalMap, q: int) -> PLIntervalMap:
    acc = base
    for _ in range(q - 1):
        acc = compose_interval(base, acc)
    return acc


def parse_interval_map(document):
    """Parse an interval homeomorphism document.

    Returns (map, power): an increasing map comes back as (map, 1); a
    decreasing homeomorphism (swapping the endpoints) is analyzed through its
    square, returned as (square, 2).
    """
    doc = _loads(document)
    for key in ("breakpoints", "values"):
        if key not in doc:
            raise InvalidDocument(f"interval map document lacks {key!r}")
    bs = [parse_rational(b) for b in doc["breakpoints"]]
    vs = [parse_rational(v) for v in doc["values"]]
    if len(bs) >= 2 and vs and vs[0] == 1 and vs[-1] == 0:
        if any(v2 >= v1 for v1, v2 in zip(vs, vs[1:])):
            raise InvalidDocument("decreasing map must decrease strictly")
        square_bs = sorted(set(bs) | {
            _inverse_interp(tuple(bs), tuple(vs), b) for b in bs
        })
        square_vs = [
            _interp(tuple(bs), tuple(vs), _interp(tuple(bs), tuple(vs), b))
            for b in square_bs
        ]
        return PLIntervalMap.build(square_bs, square_vs), 2
    return PLIntervalMap.build(bs, vs), 1


def serialize_interval_map(mapping: PLIntervalMap) -> dict:
    return {
        "breakpoints": [format_rational(b) for b in mapping.breakpoints],
        "values": [format_rational(v) for v in mapping.values],
    }


def interval_fixed_blocks(mapping: PLIntervalMap):
    """Merged closed blocks of Fix(F) inside [0, 1] (0 and 1 always fixed)."""
    xs, ys = mapping.breakpoints, mapping.values
    pieces = []
    for i in range(len(xs) - 1):
        x1, x2, y1, y2 = xs[i], xs[i + 1], ys[i], ys[i + 1]
        slope = (y2 - y1) / (x2 - x1)
        if slope == 1:
            if y1 == x1:
                pieces.append([x1, x2])
        else:
            root = x1 + (0 - (y1 - x1)) / (slope - 1)
            if x1 <= root <= x2:
                pieces.append([root, root])
    pieces.sort(key=lambda piece: piece[0])
    merged = [pieces[0]]
    for lo, hi in pieces[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


def interval_pipeline(document, delta: Fraction,
                      n_max: int = DEFAULT_N_MAX) -> Certificate:
    """Locate the wandering components of an interval homeomorphism and
    certify the first one.

    Accepts a map document or a PLIntervalMap; a decreasing document is
    reduced to its square (recorded as q=2 in the certificate).  Raises
    AllFixed (with an analytical report) when the reduced map is the
    identity, where every observable is trivially stable on every component.
    """
    if isinstance(document, PLIntervalMap):
        doc = serialize_interval_map(document)
    else:
        doc = _loads(document)
    mapping, power = parse_interval_map(doc)
    blocks = interval_fixed_blocks(mapping)
    if blocks == ((Fraction(0), Fraction(1)),):
        raise AllFixed(
            "every point is fixed; dynamics adds nothing to plain distance",
            report={
                "outcome": "all_fixed",
                "power": power,
                "note": (
                    "Fix(F) = [0,1]: orbit separation equals distance, the "
                    "indistinguishability quotient at any delta equals the "
                    "delta-chain components, and locally constant observables "
                    "are exactly the delta-expansive ones."
                ),
            },
        )
    arcs = []
    for (lo1, hi1), (lo2, hi2) in zip(blocks, blocks[1:]):
        arcs.append((hi1, lo2))
    if not arcs:
        raise NoWanderingInterval("fixed set has a single block covering [0, 1]")
    return _certify_core(mapping, "interval", tuple(arcs), power, 0, delta, n_max, doc)


# --- certificate interchange -----------------------------------------------------


def _base_slope_bound(cert: Certificate) -> Fraction:
    """Lipschitz constant of the base map (max |slope| over its pieces)."""
    doc = cert.map_document
    bs = [parse_rational(b) for b in doc["breakpoints"]]
    if cert.space == "circle":
        vs = [parse_rational(v) for v in doc["lift_values"]]
        bs = bs + [Fraction(1)]
        vs = vs + [vs[0] + 1]
    else:
        vs = [parse_rational(v) for v in doc["values"]]
    return max(
        abs((v2 - v1) / (b2 - b1))
        for b1, b2, v1, v2 in zip(bs, bs[1:], vs, vs[1:])
    )


def serialize_certificate(cert: Certificate) -> dict:
    """Certificate as a replayable document.

    delta is the threshold for the reduced power g; base_delta translates it
    back to the base map: orbit separation under the base map exceeds that
    under g by at most the slope bound per skipped step, so any observable
    expansive for the base map at base_delta is expansive for g at delta and
    hence constant on the probe.  Both thresholds are printed.
    """
    slope_bound = _base_slope_bound(cert)
    doc = {
        "space": cert.space,
        "map": cert.map_document,
        "map_id": cert.map_id,
        "delta": format_rational(cert.delta),
        "base_delta": format_rational(cert.delta * slope_bound ** (cert.q - 1)),
        "base_map_max_slope": format_rational(slope_bound),
        "q": cert.q,
        "p": cert.p,
        "arc": [format_rational(cert.arc[0]), format_rational(cert.arc[1])],
        "probe": [format_rational(cert.probe[0]), format_rational(cert.probe[1])],
        "horizon": cert.horizon,
        "direction": cert.direction,
        "mode": cert.mode,
        "trace": [
            {
                "n": n,
                "lo": format_rational(lo),
                "hi": format_rational(hi),
                "diam": format_rational(_diam(cert.space, lo, hi)),
            }
            for n, lo, hi in cert.trace
        ],
    }
    if cert.tail:
        doc["tail"] = {
            label: {
                "span": [format_rational(t["span"][0]), format_rational(t["span"][1])],
                "slope": format_rational(t["slope"]),
            }
            for label, t in cert.tail.items()
        }
    return doc


def parse_certificate(document) -> Certificate:
    doc = _loads(document)
    needed = ("space", "map", "map_id", "delta", "q", "p", "arc", "probe",
              "horizon", "direction", "mode", "trace")
    for key in needed:
        if key not in doc:
            raise InvalidDocument(f"certificate lacks {key!r}")
    tail = {}
    for label, t in doc.get("tail", {}).items():
        tail[label] = {
            "span": (parse_rational(t["span"][0]), parse_rational(t["span"][1])),
            "slope": parse_rational(t["slope"]),
        }
    return Certificate(
        space=doc["space"],
        map_document=doc["map"],
        map_id=doc["map_id"],
        delta=parse_rational(doc["delta"]),
        q=int(doc["q"]),
        p=int(doc["p"]),
        arc=(parse_rational(doc["arc"][0]), parse_rational(doc["arc"][1])),
        probe=(parse_rational(doc["probe"][0]), parse_rational(doc["probe"][1])),
        horizon=int(doc["horizon"]),
        direction=int(doc["direction"]),
        mode=doc["mode"],
        trace=tuple(
            (int(t["n"]), parse_rational(t["lo"]), parse_rational(t["hi"]))
            for t in doc["trace"]
        ),
        tail=tail,
    )


def conjugate_by_rotation(mapping: PLCircleMap, c: Fraction) -> PLCircleMap:
    """R_c o F o R_{-c}: the same circle dynamics seen from a rotated chart."""
    c = Fraction(c)
    breaks = {Fraction(0)}
    for b in mapping.breakpoints:
        x = b + c
        breaks.add(x - _floor(x))
    bs = sorted(breaks)
    return PLCircleMap.build(bs, [mapping.eval_lift(x - c) + c for x in bs])
