"""Newslopes, derivative polygons, breakpoint criteria, and thresholds.

The derivative polygon of a weight k packages how the anchored ghost
valuations bend around the center index: its hull slopes s_1 < ... < s_N
drive everything else here.  A pair (n, w) is near-Steinberg for k2 when
the distance from w to w_{k2} reaches the l-th hull increment of k2's
derivative polygon (l the offset of n from k2's center); indices that
are near-Steinberg for nobody are exactly the breakpoints of the ghost
Newton polygon at w.  Newslopes follow a closed form above the zero
radius M(k) and an exact parametric sweep below it.

All hull reads from finite windows are certified against the infinite
series: a window is accepted only once every omitted coefficient
provably stays above the supporting line at the right edge of the
region of interest, using the exact lower bound
v_p(g_n(w)) >= min(radius, 1) * deg(g_n) and the periodicity of the
dimension sequences.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple

from .errors import DomainError, VerificationError
from .ghost import (
    GhostContext,
    WeightIndex,
    WeightPoint,
    degree_table,
    dimensions,
    hatted_valuation_table,
    level_tables,
    max_zero_distance,
    point_distance,
    support_interval,
)
from .polygon import RationalPolygon, lower_hull, newton_polygon_at
from .valuation import INF, Valuation, format_rational

# -- derivative polygons ------------------------------------------------------


@dataclass(frozen=True)
class DerivativePolygon:
    """Raw values, hull, and slope data of a weight's derivative polygon.

    ``raw[l]`` is the anchored valuation at center + l minus (k-2)/2 * l,
    for l = 0..d_new/2.  ``slopes`` pairs the distinct hull slopes
    s_1 < ... < s_N with multiplicities; ``breakpoints`` lists the hull
    vertex abscissae n_0 = 0 < ... < n_N = d_new/2; ``increments[l]`` is
    the hull slope over [l, l+1].  ``M_index`` is the smallest i with
    s_i > M(k), or N + 1 when no slope clears M(k).
    """

    k: WeightIndex
    raw: Tuple[Fraction, ...]
    hull: RationalPolygon
    slopes: Tuple[Tuple[Fraction, int], ...]
    breakpoints: Tuple[int, ...]
    increments: Tuple[Fraction, ...]
    M_index: int
    m_of_k: Valuation

    def distinct_slopes(self) -> List[Fraction]:
        return [s for s, _ in self.slopes]

    def hull_increment(self, l: int) -> Fraction:
        """Hull slope over [l, l+1]; the near-Steinberg threshold at offset l."""
        return self.increments[l]


def derivative_polygon(ctx: GhostContext, k: int) -> DerivativePolygon:
    """Derivative polygon of k, with the duality check run on the way.

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> dp = derivative_polygon(ctx, 24)
    >>> dp.raw
    (Fraction(17, 1), Fraction(19, 1), Fraction(25, 1), Fraction(34, 1))
    >>> dp.distinct_slopes()
    [Fraction(2, 1), Fraction(6, 1), Fraction(9, 1)]
    """
    wi = ctx.weight(k)
    cache = ctx._cache("derivative")
    if wi.k_bullet in cache:
        return cache[wi.k_bullet]
    trip = dimensions(ctx, k)
    c, h = trip.d_iw // 2, trip.d_new // 2
    table = hatted_valuation_table(ctx, k, trip.d_iw)
    for l in range(1, h + 1):
        if table[c + l] - table[c - l] != (k - 2) * l:
            raise VerificationError(
                f"anchored-valuation duality fails at k = {k}, offset {l}"
            )
    half = Fraction(k - 2, 2)
    raw = tuple(table[c + l] - half * l for l in range(h + 1))
    hull = lower_hull(enumerate(raw))
    slopes = hull.slopes
    increments = tuple(hull.slope_list())
    m_of_k = max_zero_distance(ctx, k)
    m_index = len(slopes) + 1
    for i, (s, _) in enumerate(slopes, start=1):
        if Valuation(s) > m_of_k:
            m_index = i
            break
    dp = DerivativePolygon(
        k=wi,
        raw=raw,
        hull=hull,
        slopes=slopes,
        breakpoints=hull.vertex_xs(),
        increments=increments,
        M_index=m_index,
        m_of_k=m_of_k,
    )
    cache[wi.k_bullet] = dp
    return dp


# -- near-Steinberg criterion ---------------------------------------------------


def is_near_steinberg(ctx: GhostContext, n: int, w: WeightPoint, k2: int) -> bool:
    """Whether the pair (n, w) is near-Steinberg for the weight k2.

    True iff n lies strictly between the old-form counts of k2 and the
    distance from w to w_{k2} reaches the derivative-hull increment at
    offset |n - center(k2)|.

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> is_near_steinberg(ctx, 4, WeightPoint(24, 7), 24)
    True
    >>> is_near_steinberg(ctx, 1, WeightPoint(24, 7), 24)
    False
    """
    trip = dimensions(ctx, k2)
    if not trip.d_ur < n < trip.d_iw - trip.d_ur:
        return False
    l = abs(n - trip.d_iw // 2)
    need = derivative_polygon(ctx, k2).hull_increment(l)
    return point_distance(ctx, w, k2) >= Valuation(need)


def _near_steinberg_witness(ctx: GhostContext, n: int, w: WeightPoint) -> int:
    """A bullet index whose weight makes (n, w) near-Steinberg, or -1.

    The scan is pruned by two provable facts: the hull increment at
    offset l is at least 3/2 + (p-1) * l / 4 (convexity plus the raw
    increment lower bound), so a witness k2 needs distance >= 3/2 --
    ruling out every weight at the generic distance 1 -- and can only
    have its center within 4 * (dist - 3/2) / (p - 1) of n.
    """
    p = ctx.p
    lo, hi = support_interval(ctx, n)
    kb = ctx.weight(w.anchor).k_bullet
    if lo <= kb < hi and is_near_steinberg(ctx, n, w, w.anchor):
        return kb
    # widest possible window: distance can't beat 1 + v_p of the largest
    # bullet gap (and never beats the radius)
    dmax = Valuation(1 + _floor_log(p, max(kb + hi, p)) + 1)
    if w.radius < dmax:
        dmax = w.radius
    if dmax < Fraction(3, 2):
        return -1
    width = int(4 * (dmax.value - Fraction(3, 2)) / (p - 1)) + 1
    center0 = n - 1 + ctx.delta_eps  # bullet whose center index is n
    for j in range(max(lo, center0 - width), min(hi, center0 + width + 1)):
        if j == kb:
            continue
        dist = point_distance(ctx, w, ctx.weight_of_bullet(j))
        l = abs(n - (j + 1 - ctx.delta_eps))
        if dist < Fraction(3, 2) + Fraction((p - 1) * l, 4):
            continue
        if is_near_steinberg(ctx, n, w, ctx.weight_of_bullet(j)):
            return j
    return -1


def _floor_log(base: int, n: int) -> int:
    e, v = 0, base
    while v <= n:
        v *= base
        e += 1
    return e


def breakpoints_by_criterion(ctx: GhostContext, w: WeightPoint, n_range: int) -> set:
    """Indices n in [0, n_range] that are near-Steinberg for no weight.

    By the breakpoint criterion these are exactly the vertex abscissae
    of the ghost Newton polygon at w; index 0 always qualifies.
    """
    out = {0}
    for n in range(1, n_range + 1):
        if _near_steinberg_witness(ctx, n, w) < 0:
            out.add(n)
    return out


# -- window certification ---------------------------------------------------------


def _period_maxima(ctx: GhostContext) -> tuple:
    cache = ctx._cache("period")
    if "maxima" not in cache:
        durs = [ctx.dims_of_bullet(j)[1] for j in range(ctx.p + 1)]
        spans = [
            ctx.dims_of_bullet(j)[0] - ctx.dims_of_bullet(j)[1]
            for j in range(ctx.p + 1)
        ]
        cache["maxima"] = (max(durs), max(spans))
    return cache["maxima"]


def _degree_increment_floor(ctx: GhostContext, n: int) -> int:
    """A provable lower bound for deg g_{m+1} - deg g_m, all m >= n.

    Uses the exact periodicity d_ur(j + p + 1) = d_ur(j) + 2 (and the
    analogue for spans): the count of multiplicity-raising weights at
    level m grows linearly in m with slope (p+1)/2 + (p+1)/(2p).
    """
    p = ctx.p
    max_ur, max_span = _period_maxima(ctx)

    def lower(m):
        j1 = (p + 1) * max(0, (m - max_ur) // 2 + 1)
        j2 = (p + 1) * max(0, (m - max_span) // (2 * p) + 1)
        return j1 + j2 - 2 * m

    return min(lower(m) for m in range(n, n + 2 * p))


def certified_newton_polygon(
    ctx: GhostContext, w: WeightPoint, q_hi: int
) -> RationalPolygon:
    """Finite-window ghost Newton polygon whose restriction to [0, q_hi]
    provably equals that of the full series.

    The window grows until every omitted coefficient lies above the
    supporting line at q_hi: v_p(g_n(w)) >= min(radius, 1) * deg(g_n),
    and the degree increments beyond the window edge are bounded below
    by :func:`_degree_increment_floor`.
    """
    trip = dimensions(ctx, w.anchor)
    rfac = Fraction(1) if w.radius.is_infinite else min(w.radius.value, Fraction(1))
    if rfac <= 0:
        raise DomainError("hull certification needs a positive radius")
    n_window = max(q_hi + 8, trip.d_iw)
    for _ in range(60):
        np_ = newton_polygon_at(ctx, n_window, w)
        y_q = np_.hull_value(q_hi).value
        sigma_q = np_.slope_list()[q_hi]
        deg = degree_table(ctx, n_window)
        if (
            rfac * deg[n_window] >= y_q + sigma_q * (n_window - q_hi)
            and rfac * _degree_increment_floor(ctx, n_window) >= sigma_q
        ):
            return np_
        n_window *= 2
    raise VerificationError("newton polygon window certification diverged")


# -- k-newslopes -------------------------------------------------------------------


def k_newslopes(
    ctx: GhostContext, k: int, w: WeightPoint, method: str = "auto"
) -> List[Fraction]:
    """The d_new slopes attached to k on the ghost polygon at w, ascending.

    ``method`` picks the evaluation route: "closed" uses the three-part
    description valid above the zero radius M(k) (error outside its
    regions), "hull" always reads the certified polygon, and "auto"
    prefers the closed form where it applies.

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> k_newslopes(ctx, 24, WeightPoint(24, 10))
    [Fraction(11, 1), Fraction(11, 1), Fraction(11, 1), Fraction(11, 1), Fraction(11, 1), Fraction(11, 1)]
    >>> k_newslopes(ctx, 24, WeightPoint(24, 7))
    [Fraction(9, 1), Fraction(11, 1), Fraction(11, 1), Fraction(11, 1), Fraction(11, 1), Fraction(13, 1)]
    """
    if method not in ("auto", "closed", "hull"):
        raise DomainError(f"unknown newslope method {method!r}")
    trip = dimensions(ctx, k)
    if trip.d_new == 0:
        return []
    if method != "hull":
        closed = _closed_form_newslopes(ctx, k, w)
        if closed is not None:
            return closed
        if method == "closed":
            raise DomainError(
                "closed form needs radius above M(k) and off the derivative slopes"
            )
    hull = certified_newton_polygon(ctx, w, trip.d_iw - trip.d_ur)
    return hull.slope_list()[trip.d_ur : trip.d_iw - trip.d_ur]


def _closed_form_newslopes(ctx, k, w):
    # valid for radius > max(M(k), s_{i-1}) strictly between derivative
    # slopes, or at/above max(s_N, M(k)); None signals "out of region"
    dp = derivative_polygon(ctx, k)
    trip = dimensions(ctx, k)
    half = Fraction(k - 2, 2)
    ss = dp.distinct_slopes()
    m_of_k = dp.m_of_k
    top = max(Valuation(ss[-1]), m_of_k) if ss else m_of_k
    if w.radius >= top:
        return [half] * trip.d_new
    nu = w.radius.value
    i = None
    for idx, s in enumerate(ss, start=1):
        prev = ss[idx - 2] if idx >= 2 else Fraction(0)
        lo = max(m_of_k.value, prev)
        if lo < nu < s:
            i = idx
            break
    if i is None:
        return None
    ns, counts = dp.breakpoints, [m for _, m in dp.slopes]
    out = []
    for j in range(len(ss), i - 1, -1):
        out.extend([half + nu - ss[j - 1]] * counts[j - 1])
    out.extend([half] * (2 * ns[i - 1]))
    for j in range(i, len(ss) + 1):
        out.extend([half + ss[j - 1] - nu] * counts[j - 1])
    return out


# -- thresholds --------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdVector:
    """Radii where each newslope locks to (k-2)/2, with provenance.

    ``local_thresholds`` has one entry per newslope index 1..d_new;
    entries tagged "closed" equal a derivative slope s_j with
    j >= M_index, entries tagged "sweep" come from the exact parametric
    search below M(k).  ``global_thresholds`` repeats each entry
    global_mult times, one per stretched index.
    """

    k: WeightIndex
    local_thresholds: Tuple[Valuation, ...]
    global_thresholds: Tuple[Valuation, ...]
    provenance: Tuple[str, ...]
    global_mult: int

    def to_json_dict(self) -> dict:
        return {
            "k": self.k.k,
            "local": [format_rational(v) for v in self.local_thresholds],
            "provenance": list(self.provenance),
            "global_mult": self.global_mult,
        }


def k_thresholds(ctx: GhostContext, k: int) -> ThresholdVector:
    """All d_new threshold radii for k.

    Indices in the outer blocks take the closed-form value s_j; the
    central 2 * n_{M_index - 1} indices are found by the exact sweep.

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> [format_rational(v) for v in k_thresholds(ctx, 24).local_thresholds]
    ['9', '6', '2', '1', '6', '9']
    """
    dp = derivative_polygon(ctx, k)
    trip = dimensions(ctx, k)
    h = trip.d_new // 2
    ss = dp.distinct_slopes()
    ns = dp.breakpoints
    local: list = [None] * (trip.d_new + 1)
    prov: list = [None] * (trip.d_new + 1)
    for j in range(dp.M_index, len(ss) + 1):
        val = Valuation(ss[j - 1])
        for n in range(h - ns[j] + 1, h - ns[j - 1] + 1):
            local[n], prov[n] = val, "closed"
        for n in range(h + ns[j - 1] + 1, h + ns[j] + 1):
            local[n], prov[n] = val, "closed"
    central = ns[dp.M_index - 1]
    for n in range(h - central + 1, h + central + 1):
        local[n], prov[n] = sweep_threshold(ctx, k, n), "sweep"
    return ThresholdVector(
        k=dp.k,
        local_thresholds=tuple(local[1:]),
        global_thresholds=tuple(global_stretch(local[1:], ctx.global_mult)),
        provenance=tuple(prov[1:]),
        global_mult=ctx.global_mult,
    )


def global_stretch(local: Iterable, m: int) -> list:
    """Each entry of a slope or threshold multiset repeated m times."""
    if m < 1:
        raise DomainError("global multiplicity must be >= 1")
    out = []
    for v in local:
        out.extend([v] * m)
    return out


def slope_window(ctx: GhostContext, k: int, i: int) -> tuple:
    """(test radius r_i, max newslope, min newslope) over the i-th disc.

    The radius sits just above max(M(k), s_{i-1}): the midpoint of the
    gap up to s_i, clipped to within 1 of the left edge.  The extreme
    newslopes over the disc of that radius are (k-2)/2 +- (s_N - r_i).
    """
    dp = derivative_polygon(ctx, k)
    ss = dp.distinct_slopes()
    if not dp.M_index <= i <= len(ss):
        raise DomainError(f"index {i} outside [{dp.M_index}, {len(ss)}]")
    prev = ss[i - 2] if i >= 2 else Fraction(0)
    lo = max(dp.m_of_k.value, prev)
    gap = ss[i - 1] - lo
    r_i = lo + min(Fraction(1), gap) / 2
    half = Fraction(k - 2, 2)
    s_top = ss[-1]
    return (
        Valuation(r_i),
        Valuation(half + s_top - r_i),
        Valuation(half - s_top + r_i),
    )


# -- the exact sweep below M(k) ---------------------------------------------------
#
# On each radius interval [level, level + 1] every coefficient valuation
# is A_n + B_n * r with integer tables, so the n-th newslope is piecewise
# linear in r.  A piece [r1, r2] is certified by taking the hull at the
# midpoint and checking, at both endpoints, that its slopes stay sorted,
# every point stays on or above it, and the tail stays above the
# supporting line; each check is linear in r, so endpoint validity
# extends to the whole piece.  A failed check is solved exactly for its
# crossing radius and the piece splits there.  All hull comparisons run
# on values scaled by the radius denominator, in plain integers.


def _int_hull_xs(vals: list) -> list:
    # monotone chain over (index, value); collinear points drop
    stack: list = []
    for x, y in enumerate(vals):
        while len(stack) >= 2:
            (x1, y1), (x2, y2) = stack[-2], stack[-1]
            if (y2 - y1) * (x - x2) < (y - y2) * (x2 - x1):
                break
            stack.pop()
        stack.append((x, y))
    return [x for x, _ in stack]


def _piece_violation(A, B, deg, xs, r: Fraction, q_hi, n_window, inc_floor, level):
    """First failed certificate at radius r, as ("kind", data), or None."""
    u, v = r.numerator, r.denominator
    vn = [A[q] * v + B[q] * u for q in range(n_window + 1)]
    for t in range(len(xs) - 2):
        x0, x1, x2 = xs[t], xs[t + 1], xs[t + 2]
        if (vn[x1] - vn[x0]) * (x2 - x1) > (vn[x2] - vn[x1]) * (x1 - x0):
            return ("slope", t)
    for x0, x1 in zip(xs, xs[1:]):
        e, y0, y1 = x1 - x0, vn[x0], vn[x1]
        for q in range(x0 + 1, x1):
            if vn[q] * e < y0 * (x1 - q) + y1 * (q - x0):
                return ("point", q)
    rfac = min(r, Fraction(1)) if level == 0 else Fraction(1)
    i = bisect_right(xs, q_hi) - 1
    x0, x1 = xs[i], xs[i + 1]
    e = x1 - x0
    y_q = Fraction(vn[x0] * (x1 - q_hi) + vn[x1] * (q_hi - x0), v * e)
    sigma_q = Fraction(vn[x1] - vn[x0], v * e)
    if rfac * deg[n_window] < y_q + sigma_q * (n_window - q_hi):
        return ("tail", None)
    if rfac * inc_floor < sigma_q:
        return ("tail", None)
    return None


def _violation_root(A, B, xs, kind, data, r1, r2):
    # exact crossing radius of a linear certificate inside (r1, r2)
    if kind == "slope":
        t = data
        x0, x1, x2 = xs[t], xs[t + 1], xs[t + 2]
        lhs_a = (A[x1] - A[x0]) * (x2 - x1) - (A[x2] - A[x1]) * (x1 - x0)
        lhs_b = (B[x1] - B[x0]) * (x2 - x1) - (B[x2] - B[x1]) * (x1 - x0)
    else:
        q = data
        i = bisect_right(xs, q) - 1
        x0, x1 = xs[i], xs[i + 1]
        e = x1 - x0
        lhs_a = A[x0] * (x1 - q) + A[x1] * (q - x0) - A[q] * e
        lhs_b = B[x0] * (x1 - q) + B[x1] * (q - x0) - B[q] * e
    if lhs_b == 0:
        return None
    root = Fraction(-lhs_a, lhs_b)
    if r1 < root < r2:
        return root
    return None


def _level_pieces(ctx: GhostContext, k: int, level: int, r_lo, r_hi, q_hi: int):
    """Certified constant-hull pieces of [r_lo, r_hi] at one radius level.

    Returns [(r1, r2, vertex_xs, A, B)], consecutive, covering the range.
    """
    kb = ctx.weight(k).k_bullet
    cache = ctx._cache("pieces")
    key = (kb, level, q_hi)
    if key in cache:
        return cache[key]
    trip = dimensions(ctx, k)
    n_window = max(q_hi + 8, trip.d_iw)
    for _ in range(40):
        A, B = level_tables(ctx, k, level, n_window)
        deg = degree_table(ctx, n_window)
        inc_floor = _degree_increment_floor(ctx, n_window)
        done: list = []
        stack = [(Fraction(r_lo), Fraction(r_hi))]
        grew = False
        guard = 0
        while stack:
            guard += 1
            if guard > 100000:
                raise VerificationError("newslope sweep failed to stabilize")
            r1, r2 = stack.pop()
            mid = (r1 + r2) / 2
            u, v = mid.numerator, mid.denominator
            xs = _int_hull_xs([A[q] * v + B[q] * u for q in range(n_window + 1)])
            viol = None
            for r in (r1, r2):
                viol = _piece_violation(
                    A, B, deg, xs, r, q_hi, n_window, inc_floor, level
                )
                if viol:
                    break
            if viol is None:
                done.append((r1, r2, tuple(xs)))
                continue
            kind, data = viol
            if kind == "tail":
                grew = True
                break
            root = _violation_root(A, B, xs, kind, data, r1, r2)
            if root is None:
                raise VerificationError("sweep certificate root escaped its piece")
            stack.append((r1, root))
            stack.append((root, r2))
        if not grew:
            done.sort()
            out = [(r1, r2, xs, A, B) for r1, r2, xs in done]
            cache[key] = out
            return out
        n_window *= 2
    raise VerificationError("sweep window certification diverged")


def _hull_value_at(xs, vals, x) -> Fraction:
    # linear interpolation of hull values between bracketing vertices
    i = bisect_right(xs, x) - 1
    if xs[i] == x:
        return vals[i]
    x0, x1 = xs[i], xs[i + 1]
    return vals[i] + (vals[i + 1] - vals[i]) * Fraction(x - x0, x1 - x0)


def _newslope_at(xs, A, B, x_pos, r) -> Fraction:
    vals = [Fraction(A[x]) + B[x] * r for x in xs]
    return _hull_value_at(xs, vals, x_pos) - _hull_value_at(xs, vals, x_pos - 1)


def sweep_threshold(ctx: GhostContext, k: int, n: int) -> Valuation:
    """Exact lock radius of the n-th newslope, searched below M(k).

    The newslope is piecewise linear in the radius; the threshold is the
    largest piece endpoint to the right of which every piece holds the
    value (k-2)/2 identically.

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> sweep_threshold(ctx, 24, 4)
    Valuation(1)
    >>> sweep_threshold(ctx, 24, 3)
    Valuation(2)
    """
    trip = dimensions(ctx, k)
    if not 1 <= n <= trip.d_new:
        raise DomainError(f"newslope index {n} outside [1, {trip.d_new}]")
    target = Fraction(k - 2, 2)
    m_int = int(max_zero_distance(ctx, k).value)
    x_pos = trip.d_ur + n
    q_hi = trip.d_iw - trip.d_ur
    best = Fraction(0)
    # below radius 1 every valuation is radius * degree, so the newslope
    # is radius * (degree-hull slope): linear through 0, never locked
    for r1, r2, xs, A, B in _level_pieces(ctx, k, 0, Fraction(1, 1000), 1, q_hi):
        e1 = _newslope_at(xs, A, B, x_pos, r1)
        e2 = _newslope_at(xs, A, B, x_pos, r2)
        if not (e1 == target and e2 == target):
            best = max(best, r2)
    for level in range(1, m_int):
        for r1, r2, xs, A, B in _level_pieces(
            ctx, k, level, level, level + 1, q_hi
        ):
            e1 = _newslope_at(xs, A, B, x_pos, r1)
            e2 = _newslope_at(xs, A, B, x_pos, r2)
            if not (e1 == target and e2 == target):
                best = max(best, r2)
    return Valuation(best)
