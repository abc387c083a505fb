"""Ghost series for a fixed (p, a, eps): dimensions, multiplicities, zeros.

A ghost context fixes a prime p, a residual parameter a, and a twist
exponent s_eps.  Weights live in the congruence class k = k_eps mod (p-1);
the class member with index j ("bullet") is k = k_eps + j*(p-1).  The
ghost series is G(w, t) = 1 + sum_n g_n(w) t^n where each coefficient
g_n(w) = prod_k (w - w_k)^{m_n(k)} is a product over ghost zeros, and the
multiplicity pattern m_n(k) is the triangle

    m_n(k) = min(n - d_ur(k), d_iw(k) - d_ur(k) - n)   clipped at 0,

built from the dimension triple (d_iw, d_ur, d_new) of each weight.

Everything here is exact integer/rational arithmetic.  The module also
provides batch kernels (valuation tables over all n at once) used by the
polygon and threshold layers; these run in O(number of contributing
zeros) by accumulating second differences of the triangles instead of
looping over (n, k) pairs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

from .errors import ConfigError, DomainError, VerificationError
from .valuation import INF, Valuation, vp_int_raw, weight_distance

Rational = Union[int, Fraction]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _floor_log(base: int, n: int) -> int:
    """floor(log_base(n)) for n >= 1, exactly."""
    if n < 1:
        raise ValueError("log of a nonpositive integer")
    e = 0
    power = base
    while power <= n:
        power *= base
        e += 1
    return e


@dataclass(frozen=True)
class WeightIndex:
    """A classical weight k in the fixed congruence class.

    ``k_bullet`` is the class index: k = k_eps + k_bullet*(p-1).
    """

    k: int
    k_bullet: int


@dataclass(frozen=True)
class DimensionTriple:
    """(d_iw, d_ur, d_new) for one weight; d_iw = d_new + 2*d_ur always.

    The raw formulas can produce d_ur = -1 / d_iw = 0 for degenerate tiny
    weights below the first genuinely new form; multiplicity lookups
    treat those as empty support, so no clamping is applied.
    """

    d_iw: int
    d_ur: int
    d_new: int


@dataclass(frozen=True)
class WeightPoint:
    """A generic point w_* of weight space, located by its distance to an
    anchor weight: radius = v_p(w_* - w_anchor), INFINITY meaning w_* is
    w_anchor exactly.

    Under the generic-position convention the distance to any other ghost
    weight k' is min(radius, weight_distance(anchor, k')).
    """

    anchor: int
    radius: Valuation
    generic: bool = True

    def __post_init__(self):
        if isinstance(self.anchor, WeightIndex):
            object.__setattr__(self, "anchor", self.anchor.k)
        if not isinstance(self.radius, Valuation):
            object.__setattr__(self, "radius", Valuation(self.radius))
        if self.radius < 0:
            raise DomainError("weight point radius must be >= 0")


@dataclass(frozen=True)
class GhostPolynomial:
    """g_n(w) as a sparse zero -> multiplicity map (absent means zero)."""

    n: int
    zeros: tuple  # ((k, mult), ...) ascending in k

    def multiplicity(self, k: int) -> int:
        for kk, m in self.zeros:
            if kk == k:
                return m
        return 0

    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "zeros": [{"k": k, "mult": m} for k, m in self.zeros]}


@dataclass(frozen=True)
class GhostZeroSet:
    """Zeros of g_1 .. g_{d_iw(k)} together with M(k), the largest
    distance from w_k to another zero (the good-region radius)."""

    k: int
    zeros: tuple  # ascending weights, k itself included when it is a zero
    m_of_k: Valuation


@dataclass(frozen=True)
class GhostContext:
    """Immutable parameters of one ghost series, plus derived constants.

    Parameters
    ----------
    p : prime
    a : int
        Residual weight parameter.
    s_eps : int
        Twist exponent in [0, p-2].
    global_mult : int
        The global multiplicity stretch m(rbar), default 1.
    mode : str
        "strict" enforces p >= 11 and 2 <= a <= p-5, the range where
        every slope statement is unconditional; "exploratory" allows
        p >= 5 and 1 <= a <= p-4 (the combinatorics is defined there)
        and flags the output with a warning.
    k_ceiling : int
        Hard cap for upward weight scans; exceeding it raises, guarding
        against misconfiguration (mathematically the scans terminate).

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1, mode="exploratory")
    >>> ctx.k_eps, ctx.delta_eps, ctx.t1, ctx.t2
    (6, 0, 1, 5)
    """

    p: int
    a: int
    s_eps: int
    global_mult: int = 1
    mode: str = "exploratory"
    k_ceiling: int = 10**9

    k_eps: int = field(init=False)
    delta_eps: int = field(init=False)
    t1: int = field(init=False)
    t2: int = field(init=False)

    _caches: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        p, a, s = self.p, self.a, self.s_eps
        if self.mode not in ("strict", "exploratory"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not _is_prime(p):
            raise ConfigError(f"p = {p} is not prime")
        if self.mode == "strict":
            if p < 11:
                raise ConfigError(f"strict mode requires p >= 11, got {p}")
            if not (2 <= a <= p - 5):
                raise ConfigError(f"strict mode requires 2 <= a <= p-5, got a={a}")
        else:
            if p < 5:
                raise ConfigError(f"p must be at least 5, got {p}")
            if not (1 <= a <= p - 4):
                raise ConfigError(f"a must satisfy 1 <= a <= p-4, got a={a}")
        if not (0 <= s <= p - 2):
            raise ConfigError(f"s_eps must lie in [0, p-2], got {s}")
        if self.global_mult < 1:
            raise ConfigError(f"global_mult must be >= 1, got {self.global_mult}")

        pm1 = p - 1
        bar = lambda x: x % pm1  # representative in [0, p-2]
        object.__setattr__(self, "k_eps", 2 + bar(a + 2 * s))
        delta = (s + bar(a + s)) // pm1
        object.__setattr__(self, "delta_eps", delta)
        if a + s < pm1:
            t1, t2 = s + delta, a + s + delta + 2
        else:
            # t2 here makes t1 + t2 = k_eps mod (p+1), which the duality
            # of anchored valuations forces; it also keeps both dimension
            # counts nonnegative for every weight k >= 2 of the class.
            t1, t2 = bar(a + s) + delta + 1, s + delta + 1
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)
        object.__setattr__(self, "_caches", {})

    # -- congruence-class bookkeeping -------------------------------------

    @property
    def warning(self) -> bool:
        """True when the parameters fall outside the strict hypotheses."""
        return self.p < 11 or not (2 <= self.a <= self.p - 5)

    def in_class(self, k: int) -> bool:
        return k >= 2 and (k - self.k_eps) % (self.p - 1) == 0

    def weight(self, k: int) -> WeightIndex:
        if not self.in_class(k):
            raise DomainError(
                f"k = {k} is not in the class k = {self.k_eps} mod {self.p - 1}"
            )
        return WeightIndex(k=k, k_bullet=(k - self.k_eps) // (self.p - 1))

    def weight_of_bullet(self, j: int) -> int:
        return self.k_eps + j * (self.p - 1)

    def class_members(self, lo: int, hi: int) -> Iterator[int]:
        """Weights of the class in [lo, hi], ascending."""
        pm1 = self.p - 1
        start = lo + (self.k_eps - lo) % pm1
        for k in range(max(start, self.k_eps), hi + 1, pm1):
            yield k

    # -- dimensions --------------------------------------------------------

    def dims_of_bullet(self, j: int) -> tuple:
        """(d_iw, d_ur) of the weight with bullet index j (uncached O(1))."""
        q = (j - self.t1) // (self.p + 1)
        rem = j - (self.p + 1) * q
        d_ur = 2 * q + 1 + (1 if rem >= self.t2 else 0)
        d_iw = 2 * j + 2 - 2 * self.delta_eps
        return d_iw, d_ur

    def _cache(self, name: str) -> dict:
        return self._caches.setdefault(name, {})


def dimensions(ctx: GhostContext, k: int) -> DimensionTriple:
    """Dimension triple (d_iw, d_ur, d_new) of a weight in the class.

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> dimensions(ctx, 24)
    DimensionTriple(d_iw=8, d_ur=1, d_new=6)
    >>> dimensions(ctx, 6)
    DimensionTriple(d_iw=2, d_ur=0, d_new=2)
    """
    j = ctx.weight(k).k_bullet
    cache = ctx._cache("dims")
    trip = cache.get(j)
    if trip is None:
        d_iw, d_ur = ctx.dims_of_bullet(j)
        trip = DimensionTriple(d_iw=d_iw, d_ur=d_ur, d_new=d_iw - 2 * d_ur)
        cache[j] = trip
    return trip


def _first_bullet_with(ctx: GhostContext, pred: Callable[[int], bool], hint: int) -> int:
    """Smallest bullet j >= 0 with pred(j), for monotone pred (False then True)."""
    if pred(0):
        return 0
    hi = max(4, hint)
    ceiling = ctx.k_ceiling // (ctx.p - 1) + 2
    while not pred(hi):
        hi *= 2
        if hi > ceiling:
            raise DomainError("weight scan exceeded k_ceiling; misconfigured context?")
    lo = 0  # invariant: pred(lo) false, pred(hi) true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def support_interval(ctx: GhostContext, n: int) -> tuple:
    """Bullet range [lo, hi) of the zero support of g_n.

    The support is exactly the j with d_ur(j) < n < d_iw(j) - d_ur(j);
    both bounding functions are non-decreasing in j, so the support is a
    contiguous interval found by binary search.
    """
    if n < 1:
        return (0, 0)
    est = (ctx.p + 1) * (n + abs(ctx.t1) + 4) // 2
    # first j whose unramified dimension has caught up with n
    hi = _first_bullet_with(ctx, lambda j: ctx.dims_of_bullet(j)[1] >= n, est)
    # first j whose span d_iw - d_ur exceeds n
    lo = _first_bullet_with(
        ctx, lambda j: ctx.dims_of_bullet(j)[0] - ctx.dims_of_bullet(j)[1] > n, est
    )
    return (lo, hi) if lo < hi else (0, 0)


def ghost_multiplicity(ctx: GhostContext, n: int, k: int) -> int:
    """m_n(k): the triangle min(n - d_ur, d_iw - d_ur - n), clipped at 0.

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> ghost_multiplicity(ctx, 4, 24)
    3
    >>> ghost_multiplicity(ctx, 1, 24)
    0
    """
    if n < 1:
        raise DomainError(f"ghost index n must be >= 1, got {n}")
    trip = dimensions(ctx, k)
    lo, hi = trip.d_ur, trip.d_iw - trip.d_ur
    if lo < n < hi:
        return min(n - lo, hi - n)
    return 0


def ghost_polynomial(ctx: GhostContext, n: int) -> GhostPolynomial:
    """The n-th ghost coefficient g_n(w) as its zero/multiplicity list.

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> [k for k, m in ghost_polynomial(ctx, 2).zeros]
    [12, 18, 24, 30]
    """
    if n < 1:
        raise DomainError(f"ghost index n must be >= 1, got {n}")
    lo, hi = support_interval(ctx, n)
    zeros = []
    for j in range(lo, hi):
        d_iw, d_ur = ctx.dims_of_bullet(j)
        m = min(n - d_ur, d_iw - d_ur - n)
        if m > 0:
            zeros.append((ctx.weight_of_bullet(j), m))
    return GhostPolynomial(n=n, zeros=tuple(zeros))


def ghost_polynomials_json(ctx: GhostContext, n_max: int) -> list:
    """JSON-ready dump of g_1 .. g_{n_max} with zeros ascending in k."""
    return [ghost_polynomial(ctx, n).to_json_dict() for n in range(1, n_max + 1)]


# -- ghost zero sets and the good-region radius M(k) -----------------------


def _zero_set_bullet_bound(ctx: GhostContext, k: int) -> int:
    """Bullets j < bound are the candidates for GZ(k) membership."""
    d_iw = dimensions(ctx, k).d_iw
    if d_iw < 1:
        return 0
    est = (ctx.p + 1) * (d_iw + abs(ctx.t1) + 4) // 2
    return _first_bullet_with(ctx, lambda j: ctx.dims_of_bullet(j)[1] >= d_iw, est)


def _is_zero_bullet(ctx: GhostContext, j: int, bound: int) -> bool:
    if not (0 <= j < bound):
        return False
    d_iw, d_ur = ctx.dims_of_bullet(j)
    # a zero of some g_n with n >= 1 needs a nonempty triangle meeting n >= 1
    return d_iw - 2 * d_ur >= 2 and d_iw - d_ur >= 2


def max_zero_distance(ctx: GhostContext, k: int) -> Valuation:
    """M(k): the largest weight distance from w_k to another ghost zero
    of g_1 .. g_{d_iw(k)}.  Returns 0 when no other zero exists.

    Runs in O(log k): the candidate bullets form the interval
    [0, bound), minus finitely many degenerate small weights, and the
    largest attainable v_p(k_bullet - j) is found by descending over
    powers of p with explicit witnesses.
    """
    kb = ctx.weight(k).k_bullet
    bound = _zero_set_bullet_bound(ctx, k)
    if bound <= 0 or (bound == 1 and kb == 0):
        return Valuation(0)
    reach = max(kb, bound - 1 - kb)
    e = _floor_log(ctx.p, reach) if reach >= 1 else 0
    while e >= 0:
        pe = ctx.p**e
        # nearest congruent candidates first; they are valid unless they
        # land on a degenerate small weight, in which case enumerate.
        found = False
        for t in (1, 2, 3):
            for j in (kb - t * pe, kb + t * pe):
                if _is_zero_bullet(ctx, j, bound):
                    found = True
                    break
            if found:
                break
        if not found:
            j = kb % pe
            while j < bound:
                if j != kb and _is_zero_bullet(ctx, j, bound):
                    found = True
                    break
                j += pe
        if found:
            return Valuation(1 + e)
        e -= 1
    return Valuation(0)


def ghost_zero_set(ctx: GhostContext, k: int) -> GhostZeroSet:
    """GZ(k) with its good-region radius M(k).

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> ghost_zero_set(ctx, 24).m_of_k
    Valuation(2)
    """
    kb = ctx.weight(k).k_bullet
    bound = _zero_set_bullet_bound(ctx, k)
    zeros = tuple(
        ctx.weight_of_bullet(j) for j in range(bound) if _is_zero_bullet(ctx, j, bound)
    )
    m_of_k = max_zero_distance(ctx, k)
    # Good-region radius bound; a failure here is an implementation bug.
    cap = (_floor_log(ctx.p, kb) if kb >= 1 else 0) + 3
    if m_of_k > cap:
        raise VerificationError(f"M({k}) = {m_of_k} exceeds the log bound {cap}")
    return GhostZeroSet(k=k, zeros=zeros, m_of_k=m_of_k)


# -- pointwise evaluation ---------------------------------------------------


def point_distance(ctx: GhostContext, w: WeightPoint, k2: int) -> Valuation:
    """v_p(w_* - w_{k2}) under the generic convention."""
    if k2 == w.anchor:
        return w.radius
    return min(w.radius, weight_distance(w.anchor, k2, ctx.p))


def evaluate_ghost_valuation(ctx: GhostContext, n: int, w: WeightPoint) -> Valuation:
    """v_p(g_n(w_*)) = sum over zeros k' of m_n(k') * v_p(w_* - w_{k'}).

    INFINITY exactly when w_* is a ghost zero of g_n (infinite radius at
    an anchor with m_n(anchor) > 0).
    """
    if n == 0:
        return Valuation(0)
    lo, hi = support_interval(ctx, n)
    anchor_b = ctx.weight(w.anchor).k_bullet
    p = ctx.p
    if w.radius.is_infinite:
        if lo <= anchor_b < hi:
            d_iw, d_ur = ctx.dims_of_bullet(anchor_b)
            if min(n - d_ur, d_iw - d_ur - n) > 0:
                return INF  # anchor itself is a zero: g_n(w_k) = 0
        radius_scaled, den = None, 1
    else:
        den = w.radius.value.denominator
        radius_scaled = w.radius.value.numerator
    total = 0
    for j in range(lo, hi):
        d_iw, d_ur = ctx.dims_of_bullet(j)
        m = min(n - d_ur, d_iw - d_ur - n)
        if m <= 0:
            continue
        if j == anchor_b:
            total += m * radius_scaled  # min(radius, INF) = radius
            continue
        d = 1 + vp_int_raw(anchor_b - j, p)
        if radius_scaled is None:
            total += m * d
        else:
            total += m * min(radius_scaled, d * den)
    return Valuation(Fraction(total, den))


def anchored_valuation(ctx: GhostContext, n: int, k: int) -> int:
    """v_p of the hatted coefficient g_{n, k-hat} at w_k: the full sum of
    m_n(k') * weight_distance(k, k') over zeros k' != k.  Always an integer.

    Examples
    --------
    >>> ctx = GhostContext(p=7, a=2, s_eps=1)
    >>> anchored_valuation(ctx, 4, 24)
    17
    """
    lo, hi = support_interval(ctx, n)
    kb = ctx.weight(k).k_bullet
    p = ctx.p
    total = 0
    for j in range(lo, hi):
        if j == kb:
            continue
        d_iw, d_ur = ctx.dims_of_bullet(j)
        m = min(n - d_ur, d_iw - d_ur - n)
        if m > 0:
            total += m * (1 + vp_int_raw(kb - j, p))
    return total


# -- batch kernels ----------------------------------------------------------
#
# All tables below aggregate weighted triangles with a difference array:
# the triangle of bullet j contributes slope +w on [d_ur, mid) and -w on
# [mid, b) where b = d_iw - d_ur and mid = d_iw/2, so two cumulative sums
# of a sparse array reconstruct every value at once.


def _triangle_accumulate(dg: list, a: int, mid: int, b: int, w: int, n_hi: int):
    if w == 0 or b - a < 2:
        return
    if a <= n_hi + 1:
        dg[a] += w
    if mid <= n_hi + 1:
        dg[mid] -= 2 * w
    if b <= n_hi + 1:
        dg[b] += w


def _tables_from_triangles(ctx, n_hi: int, weight_of_bullet) -> list:
    """[f(0), ..., f(n_hi)] with f(n) = sum_j weight(j) * m_n(bullet j)."""
    dg = [0] * (n_hi + 2)
    direct = []  # raw d_ur < 0 triangles poke below n = 0; add them pointwise
    hi = _first_bullet_with(
        ctx,
        lambda j: ctx.dims_of_bullet(j)[1] >= n_hi,
        (ctx.p + 1) * (n_hi + abs(ctx.t1) + 4) // 2,
    )
    for j in range(hi):
        d_iw, d_ur = ctx.dims_of_bullet(j)
        if d_iw - 2 * d_ur < 2:
            continue
        if d_ur < 0:
            direct.append(j)
            continue
        w = weight_of_bullet(j)
        _triangle_accumulate(dg, d_ur, d_iw // 2, d_iw - d_ur, w, n_hi)
    out = [0] * (n_hi + 1)
    slope = 0
    val = 0
    for n in range(n_hi + 1):
        out[n] = val
        slope += dg[n]
        val += slope
    for j in direct:
        d_iw, d_ur = ctx.dims_of_bullet(j)
        w = weight_of_bullet(j)
        for n in range(1, min(d_iw - d_ur - 1, n_hi) + 1):
            out[n] += w * min(n - d_ur, d_iw - d_ur - n)
    return out


def degree_table(ctx: GhostContext, n_hi: int) -> list:
    """deg g_n for n = 0..n_hi (deg g_0 = 0)."""
    key = ("deg", n_hi)
    cache = ctx._cache("tables")
    if key not in cache:
        cache[key] = _tables_from_triangles(ctx, n_hi, lambda j: 1)
    return cache[key]


def hatted_valuation_table(ctx: GhostContext, k: int, n_hi: int) -> list:
    """[v_p(g_{n, k-hat}(w_k))]_{n=0..n_hi} as plain ints.

    Matches :func:`anchored_valuation` pointwise; runs in one pass.
    """
    kb = ctx.weight(k).k_bullet
    key = ("hat", kb, n_hi)
    cache = ctx._cache("tables")
    if key in cache:
        return cache[key]
    p = ctx.p

    def wt(j):
        return 0 if j == kb else 1 + vp_int_raw(kb - j, p)

    table = _tables_from_triangles(ctx, n_hi, wt)
    cache[key] = table
    return table


def valuation_table_at(ctx: GhostContext, k: int, radius, n_hi: int) -> tuple:
    """(numerators, den) with v_p(g_n(w_*)) = numerators[n]/den for a point
    at finite rational ``radius`` from anchor k, n = 0..n_hi."""
    radius = Fraction(radius)
    if radius < 0:
        raise DomainError("radius must be >= 0")
    kb = ctx.weight(k).k_bullet
    num, den = radius.numerator, radius.denominator
    p = ctx.p

    def wt(j):
        if j == kb:
            return num
        return min(num, (1 + vp_int_raw(kb - j, p)) * den)

    return _tables_from_triangles(ctx, n_hi, wt), den


def infinite_radius_table(ctx: GhostContext, k: int, n_hi: int) -> tuple:
    """(table, zero_lo, zero_hi) for w_* = w_k exactly: table[n] is
    v_p(g_n(w_k)) for n outside (zero_lo, zero_hi), and the valuation is
    INFINITY for n strictly inside (where m_n(k) > 0)."""
    table = hatted_valuation_table(ctx, k, n_hi)
    trip = dimensions(ctx, k)
    return table, trip.d_ur, trip.d_iw - trip.d_ur


def level_tables(ctx: GhostContext, k: int, level: int, n_hi: int) -> tuple:
    """(A, B) with v_p(g_n(w_*)) = A[n] + B[n]*r exactly for every radius
    r in [level, level+1] (level >= 0): distances <= level contribute their
    full weight to A, strictly larger ones ride the radius in B."""
    kb = ctx.weight(k).k_bullet
    key = ("level", kb, level, n_hi)
    cache = ctx._cache("tables")
    if key in cache:
        return cache[key]
    p = ctx.p

    def wt_a(j):
        if j == kb:
            return 0
        d = 1 + vp_int_raw(kb - j, p)
        return d if d <= level else 0

    def wt_b(j):
        if j == kb:
            return 1
        return 0 if 1 + vp_int_raw(kb - j, p) <= level else 1

    pair = (
        _tables_from_triangles(ctx, n_hi, wt_a),
        _tables_from_triangles(ctx, n_hi, wt_b),
    )
    cache[key] = pair
    return pair
