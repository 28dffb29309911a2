"""Builders for the N=3 character numerators, the U-space bases, the
explicit level 1/2/4 characters, and the derived denominator.

The numerator family F[m, s] is *defined* here by its closed expansion at
the character slice (quotient bracket + twisted-constant divisor + triple
sums + boundary sums), never by the companion-series definition it came
from; the p-independence, ladder and z-freeness checks in the identity
registry over-determine the construction and would expose a transcription
slip.  Sector rule: half-integer s for every level m, integer s only for
odd m (no base formula exists otherwise).

All builders guarantee ``result.cutoff >= order`` and are memoized; the
cache is read-concurrent with single-writer insertion.
"""

from __future__ import annotations

import threading

from . import cyclo
from ._rational import R0, R1, rat
from .cyclo import phase
from .series import InsufficientOrderError, Series
from .thetalib import (
    bracket,
    eta,
    mumford,
    theta_jm,
    theta_pm,
    theta_zero_arg,
)

_cache: dict = {}
_cache_lock = threading.Lock()


def _cached(key, build):
    hit = _cache.get(key)
    if hit is not None:
        return hit
    val = build()
    with _cache_lock:
        return _cache.setdefault(key, val)


def ensure_order(builder, order, max_tries=8):
    """Re-run ``builder`` with boosted internal order until the propagated
    cutoff covers ``order``.  Converges in one or two tries for every
    builder here (trust losses are fixed shifts)."""
    order = rat(order)
    boost = R0
    for _ in range(max_tries):
        s = builder(order + boost)
        if s.cutoff >= order:
            return s
        boost += order - s.cutoff
    raise InsufficientOrderError(
        f"builder failed to reach trusted order {order}", max_order=s.cutoff
    )


def _min_coset_abs(n0):
    """min |n| over the coset n0 + Z."""
    f = n0 - n0.__floor__()
    return min(f, 1 - f)


def theta_inv_half(j, order) -> Series:
    """1 / theta_{j,1}(tau, z) for j = +-1/2 (unit monomial leading layer)."""

    def build(k):
        return theta_jm(j, 1, k + rat(1, 8)).inverse()

    return _cached(("thinv", rat(j), rat(order)), lambda: ensure_order(build, order))


def ratio_pair(a, big_m, order) -> Series:
    """theta_{a,M}/theta_{-1/2,1} - theta_{-a,M}/theta_{1/2,1}."""
    a = rat(a)
    big_m = rat(big_m)

    def build(k):
        return theta_jm(a, big_m, k) * theta_inv_half(rat(-1, 2), k) - theta_jm(
            -a, big_m, k
        ) * theta_inv_half(rat(1, 2), k)

    return _cached(
        ("rpair", a, big_m, rat(order)), lambda: ensure_order(build, order)
    )


def _triple_sum_weights(m: int, alpha, bound):
    """z-free weight series W_k (k odd, 1 <= k <= m-1) of the double j,r sums.

    Each (j, r, k) contributes, with t = 2mr -+ k and sign (-1)^j,
    ``q^{j^2 - t^2/(4m)} { q^{(j+alpha) t} e^{i pi (2mr+k)/2}
                         + q^{(j-alpha) t} e^{i pi (2mr-k)/2} }``
    (the r-sum over 1..j, subtracted r-sum over 0..j-1 with t = 2mr + k and
    the two unit phases swapped).  Truncation: every term with index j obeys
    exponent >= j^2 - 2m*max(alpha,0)*j  (because t <= 2mj and t^2/(4m) <=
    tj/2), so j may stop at the positive root of that quadratic against
    ``bound``; widened by one and asserted per kept term.
    """
    alpha = rat(alpha)
    bound = rat(bound)
    ks = list(range(1, m, 2))
    if not ks:
        return {}
    a_pos = alpha if alpha > 0 else R0
    g = 2 * m * a_pos
    disc = float(g) ** 2 + max(float(bound), 0.0)
    jmax = int(float(g) + disc**0.5) + 2
    acc = {k: {} for k in ks}

    def put(k, ex, coeff):
        assert ex >= jj * jj - g * jj
        if ex >= bound:
            return
        slot = acc[k]
        cur = slot.get(ex)
        s = coeff if cur is None else cur + coeff
        if s.is_zero():
            slot.pop(ex, None)
        else:
            slot[ex] = s

    for jj in range(1, jmax + 1):
        sj = cyclo.minus_one_pow(jj)
        jr = rat(jj)
        for k in ks:
            for r in range(1, jj + 1):
                t = rat(2 * m * r - k)
                base = jr * jr - t * t / (4 * m)
                ph_plus = sj * phase(rat(2 * m * r + k, 4))
                ph_minus = sj * phase(rat(2 * m * r - k, 4))
                put(k, base + (jr + alpha) * t, ph_plus)
                put(k, base + (jr - alpha) * t, ph_minus)
            for r in range(0, jj):
                t = rat(2 * m * r + k)
                base = jr * jr - t * t / (4 * m)
                ph_plus = sj * phase(rat(2 * m * r - k, 4))
                ph_minus = sj * phase(rat(2 * m * r + k, 4))
                # subtracted double sum
                put(k, base + (jr + alpha) * t, -ph_plus)
                put(k, base + (jr - alpha) * t, -ph_minus)
    return {
        k: Series({(ex, R0): c for ex, c in slot.items()}, bound, _normalized=True)
        for k, slot in acc.items()
    }


class DegenerateDivisorError(ZeroDivisionError):
    """The twisted theta-constant divisor vanishes identically.

    Happens for even m exactly when m(4p+1)/(2(m+1)) is an odd integer
    (the index coset is then symmetric and the alternating sum cancels in
    pairs), e.g. (m, p) = (2, 2).  The closed expansion is 0/0 there; the
    surviving content is that the undivided combination vanishes, which
    :func:`undivided_half_combination` exposes for checking.
    """


def _half_divisor_degenerate(m: int, p: int) -> bool:
    if m % 2:
        return False  # plus twist: all coefficients +1, never cancels
    two_n0 = rat(m * (4 * p + 1), 2 * (m + 1))
    return two_n0.denominator == 1 and int(two_n0) % 2 == 1


def numerator_half(m: int, p: int, order) -> Series:
    """The half-sector numerator F[m, 1/2] built with ladder offset p >= 0.

    Independent of p up to the propagated cutoff; the registry checks this.
    """
    m = int(m)
    p = int(p)
    if m < 1:
        raise ValueError("level m must be a positive integer")
    if p < 0:
        raise ValueError("shift p must be a nonnegative integer")
    if _half_divisor_degenerate(m, p):
        raise DegenerateDivisorError(
            f"twisted constant of index {m}*(4*{p}+1)/2 at degree {m + 1} "
            "vanishes identically; the expansion is undefined at this shift"
        )
    return _cached(
        ("numh", m, p, rat(order)),
        lambda: ensure_order(lambda k: _numerator_half_raw(m, p, k), order),
    )


def undivided_half_combination(m: int, p: int, order) -> Series:
    """The half-sector combination before dividing by the twisted constant:

    ``-i q^{m(p+1/4)^2} eta(2tau)^3 * (ratio pair)
      + q^{m^2/(m+1) (p+1/4)^2} * (triple sums)``

    Equals the twisted constant times the numerator at shifted arguments;
    at degenerate (m, p) it must vanish identically, which is the only
    checkable residue of p-independence there.
    """
    m = int(m)
    p = int(p)

    def build(k):
        a = eta(2, 3, k) * ratio_pair(rat(4 * p + 1, 4) * 2, m + 1, k)
        a = a.times_monomial(
            -cyclo.I, rat(m) * rat(4 * p + 1, 4) ** 2, R0
        )
        kw = k - rat(m * m, m + 1) * rat(4 * p + 1, 4) ** 2
        weights = _triple_sum_weights(m, rat(4 * p + 1, 4), max(kw, k) + 1)
        s = Series.zero(max(kw, k) + 1)
        for kk, w in weights.items():
            s = s + w * bracket(kk, m, max(kw, k) + 1)
        return a + s.times_monomial(
            cyclo.ONE, rat(m * m, m + 1) * rat(4 * p + 1, 4) ** 2, R0
        )

    return ensure_order(build, order)


def _numerator_half_raw(m, p, order):
    eps = 1 if m % 2 else -1
    big_m = m + 1
    idx0 = rat(m * (4 * p + 1), 2)
    sign_mp = cyclo.minus_one_pow(m * p)
    o0 = big_m * _min_coset_abs(idx0 / (2 * big_m)) ** 2
    pref = -rat(m, big_m) * rat(4 * p + 1, 4) ** 2

    def build_a(k):
        th0_inv = theta_pm(eps, idx0, big_m, k + 2 * o0 + 1).inverse(order=k)
        s = eta(2, 3, k) * th0_inv * ratio_pair(rat(4 * p + 1, 4) * 2, big_m, k)
        return s.times_monomial(-cyclo.I * sign_mp)

    total = ensure_order(build_a, order)

    def build_b(k):
        kw = k - pref + 2 * o0
        weights = _triple_sum_weights(m, rat(4 * p + 1, 4), kw)
        if not weights:
            return Series.zero(k)
        th0_inv = theta_pm(eps, idx0, big_m, kw + 2 * o0 + 1).inverse(order=kw)
        s = Series.zero(kw)
        for kk, w in weights.items():
            s = s + w * bracket(kk, m, kw)
        return (s * th0_inv).times_monomial(sign_mp, pref, R0)

    total = total + ensure_order(build_b, order)

    for kk in range(1, p * m + 1):
        shift = -rat(1, m) * (rat(kk) - rat(1, 2) + rat(m, 4)) ** 2
        coeff = -cyclo.I * cyclo.minus_one_pow(kk)
        br = bracket(2 * kk - 1, m, order - shift)
        total = total + br.times_monomial(coeff, shift, R0)
    return total


def numerator_int(m: int, p: int, order) -> Series:
    """The integer-sector numerator F[m, 0]; defined for odd m only."""
    m = int(m)
    p = int(p)
    if m < 1:
        raise ValueError("level m must be a positive integer")
    if m % 2 == 0:
        raise ValueError("integer-s numerator undefined for even m")
    if p < 0:
        raise ValueError("shift p must be a nonnegative integer")
    return _cached(
        ("numi", m, p, rat(order)),
        lambda: ensure_order(lambda k: _numerator_int_raw(m, p, k), order),
    )


def _numerator_int_raw(m, p, order):
    big_m = m + 1
    idx0 = rat(m * (4 * p - 1), 2)
    sign_mp = cyclo.minus_one_pow(m * p)
    ph_m = phase(-rat(m, 4))  # e^{-pi i m / 2}
    o0 = big_m * _min_coset_abs(idx0 / (2 * big_m)) ** 2
    pref = -rat(m, big_m) * rat(4 * p - 1, 4) ** 2

    def build_a(k):
        th0_inv = theta_zero_arg(idx0, big_m, k + 2 * o0 + 1).inverse(order=k)
        s = eta(2, 3, k) * th0_inv * ratio_pair(
            rat(4 * p - 1, 4) * 2 + big_m, big_m, k
        )
        return s.times_monomial(-cyclo.I * sign_mp * ph_m)

    total = ensure_order(build_a, order)

    def build_b(k):
        kw = k - pref + 2 * o0
        weights = _triple_sum_weights(m, rat(4 * p - 1, 4), kw)
        if not weights:
            return Series.zero(k)
        th0_inv = theta_zero_arg(idx0, big_m, kw + 2 * o0 + 1).inverse(order=kw)
        s = Series.zero(kw)
        for kk, w in weights.items():
            s = s + w * bracket(kk + m, m, kw)
        return (s * th0_inv).times_monomial(sign_mp * ph_m, pref, R0)

    total = total + ensure_order(build_b, order)

    for kk in range(1, (m - 1) // 2 + 1):
        shift = -m * (rat(4 * p + 1, 4) - rat(kk, m)) ** 2
        coeff = sign_mp * cyclo.minus_one_pow(kk)
        br = bracket(2 * kk, m, order - shift)
        total = total + br.times_monomial(coeff, shift, R0)

    for kk in range(1, p * m + 1):
        shift = -rat(1, m) * (rat(kk) + rat(m, 4)) ** 2
        coeff = cyclo.minus_one_pow(kk)
        br = bracket(2 * kk, m, order - shift)
        total = total + br.times_monomial(coeff, shift, R0)
    return total


def ladder_step(m: int, s, order) -> Series:
    """F[m, s] - F[m, s+1] built directly:
    e^{-pi i s} q^{-(s - m/4)^2 / m} [theta_{2s,m} - theta_{-2s,m}]."""
    s = rat(s)
    if (2 * s).denominator != 1:
        raise ValueError("ladder parameter s must be a half-integer")
    shift = -rat(1, m) * (s - rat(m, 4)) ** 2
    coeff = phase(-s / 2)
    br = bracket(2 * s, m, rat(order) - shift)
    return br.times_monomial(coeff, shift, R0)


def numerator(m: int, s, order) -> Series:
    """F[m, s] from the sector base by ladder steps (upward or downward)."""
    m = int(m)
    s = rat(s)
    if (2 * s).denominator != 1:
        raise ValueError("s must be a half-integer")
    half_sector = s.denominator == 2
    if not half_sector and m % 2 == 0:
        raise ValueError("integer-s numerator undefined for even m")

    def build(k):
        base_s = rat(1, 2) if half_sector else R0
        f = (
            numerator_half(m, 0, k)
            if half_sector
            else numerator_int(m, 0, k)
        )
        t = base_s
        while t < s:
            f = f - ladder_step(m, t, k)
            t += 1
        while t > s:
            t -= 1
            f = f + ladder_step(m, t, k)
        return f

    return _cached(("num", m, s, rat(order)), lambda: ensure_order(build, order))


def u_basis(m: int, sector: str, order) -> list[Series]:
    """Generators of the theta-quotient span at level m.

    half sector: the 1/2-index ratio pair plus odd-k brackets;
    integer sector: the (m+1/2)-index ratio pair plus even-k brackets.
    """
    m = int(m)
    if sector not in ("half", "integer"):
        raise ValueError("sector must be 'half' or 'integer'")
    order = rat(order)

    def build():
        if sector == "half":
            first = ratio_pair(rat(1, 2), m + 1, order)
            kk = range(1, m, 2)
        else:
            first = ratio_pair(rat(2 * m + 1, 2), m + 1, order)
            kk = range(2, m, 2)
        out = [first]
        for k in kk:
            out.append(ensure_order(lambda t, k=k: bracket(k, m, t), order))
        return out

    return _cached(("ubasis", m, sector, order), build)


SUPPORTED_CHARACTERS = ((1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (4, 1), (4, 3))


def character(m: int, m2: int, order) -> Series:
    """Closed-form character of the level-m module with label m2.

    Only the levels with explicit formulas are available: see
    SUPPORTED_CHARACTERS.
    """
    m = int(m)
    m2 = int(m2)
    if (m, m2) not in SUPPORTED_CHARACTERS:
        raise ValueError(f"character formula not available for ({m}, {m2})")
    return _cached(
        ("char", m, m2, rat(order)),
        lambda: ensure_order(lambda k: _character_raw(m, m2, k), order),
    )


def _character_raw(m, m2, order):
    k = order
    if m == 1:
        th = theta_jm(m2, 1, k)
        s = th * eta(1, -1, k)
        return s.times_monomial(-cyclo.I if m2 == 1 else -cyclo.ONE)
    if m == 2 and m2 == 1:
        s = eta(2, 1, k) * eta(rat(1, 2), -1, k) * eta(1, -1, k) * mumford("10", k)
        return s.times_monomial(cyclo.I)
    if m == 2:
        a = eta(rat(1, 2), 1, k) * eta(1, -1, k) * eta(2, -1, k) * mumford("01", k)
        b = eta(rat(1, 2), -1, k) * eta(2, -1, k) * mumford("00", k)
        sgn = cyclo.ONE if m2 == 0 else cyclo.MINUS_ONE
        return (a + b.times_monomial(sgn)).times_monomial(
            cyclo.from_rational(rat(-1, 2))
        )
    # m == 4
    pref = eta(rat(1, 2), -1, k) * eta(2, -1, k)
    a = mumford("01", k) * mumford("10", k)
    b = eta(2, 1, k) * eta(1, -2, k) * mumford("00", k) * mumford("10", k)
    sgn = cyclo.ONE if m2 == 1 else cyclo.MINUS_ONE
    s = pref * (a + b.times_monomial(sgn))
    return s.times_monomial(cyclo.I.scale(rat(1, 2)))


class DenominatorInconsistency(AssertionError):
    """Raised by the strict z-freeness check on the derived denominator."""


def derived_denominator(order, require_zfree: bool = False) -> Series:
    """R0 := -eta * F[1,1/2] / theta_{0,1}.

    Equals the true N=3 denominator up to a z-free unit, which is all the
    span statements downstream are sensitive to.  R0 is NOT free of the
    elliptic variable: its monomials all carry half-integer zeta-exponents
    (the quotient-bracket generators live on the zeta^{1/2+Z} coset while
    theta_{0,1} lives on zeta^Z, so the ratio cannot land on zeta^0; the
    algebra's odd half-roots are visible here).  ``require_zfree=True``
    turns that structural fact into a hard error for callers that insist
    on a z-free denominator.
    """

    def build():
        def raw(k):
            f = numerator_half(1, 0, k + rat(1, 8))
            th_inv = theta_jm(0, 1, k + rat(1, 8)).inverse(order=k)
            return (eta(1, 1, k) * f * th_inv).times_monomial(cyclo.MINUS_ONE)

        return ensure_order(raw, order)

    r = _cached(("rden", rat(order)), build)
    if require_zfree and not r.is_zfree():
        raise DenominatorInconsistency(
            "eta * F[1,1/2] / theta_{0,1} carries half-integer powers of "
            "the elliptic variable; no z-free derived denominator exists"
        )
    return r


def denominator_z_coset(order):
    """Distinct zeta-exponent residues (mod 1) of the derived denominator."""
    r = derived_denominator(order)
    return sorted({z - (z.numerator // z.denominator) for _, z in r.terms})


def clear_cache():
    with _cache_lock:
        _cache.clear()
