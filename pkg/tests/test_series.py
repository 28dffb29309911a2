import pytest

from thetaq._rational import INF, rat
from thetaq import cyclo
from thetaq.series import InsufficientOrderError, NonUnitLeadingError, Series
from thetaq.thetalib import eta, mumford, theta_jm

from conftest import assert_equal_series, random_series


def S(pairs, cutoff=INF):
    return Series({(rat(q), rat(z)): cyclo.from_rational(rat(c))
                   for q, z, c in pairs}, cutoff)


def test_add_cancels_and_propagates_cutoff():
    a = S([(0, 0, 1), (1, 1, 1)], cutoff=5)
    b = S([(0, 0, -1)], cutoff=3)
    c = a + b
    assert c.terms == S([(1, 1, 1)]).terms
    assert c.cutoff == 3
    assert (a + Series.zero()).terms == a.terms


def test_mul_binomials():
    a = S([(rat(1, 2), 1, 1), (0, 0, -1)])
    b = S([(rat(1, 2), 1, 1), (0, 0, 1)])
    prod = a * b
    assert prod.terms == S([(1, 2, 1), (0, 0, -1)]).terms


def test_mul_cutoff_rule():
    a = S([(1, 0, 1)], cutoff=4)  # ord 1
    b = S([(2, 0, 1)], cutoff=5)  # ord 2
    c = a * b
    # min(4 + 2, 5 + 1) = 6
    assert c.cutoff == 6


def test_mul_by_one_keeps_terms():
    a = random_series(__import__("random").Random(7))
    one = Series.one()
    assert (a * one).terms == a.terms
    assert (a * one).cutoff == min(a.cutoff, INF)


def test_geometric_inverse():
    g = S([(0, 0, 1), (1, 0, -1)], cutoff=6)
    inv = g.inverse()
    expect = S([(i, 0, 1) for i in range(6)], cutoff=6)
    assert_equal_series(inv, expect, 6)
    assert_equal_series(g * inv, Series.one(), rat(5))


def test_inverse_of_monomial():
    m = Series.monomial(cyclo.ONE, rat(1, 16), rat(-1, 4))
    inv = m.inverse(order=rat(3))
    assert inv.terms == {(rat(-1, 16), rat(1, 4)): cyclo.ONE}


def test_inverse_cutoff_rule():
    a = theta_jm(rat(-1, 2), 1, 4)  # ord 1/16, cutoff 4
    inv = a.inverse()
    assert inv.cutoff == 4 - rat(1, 8)
    assert_equal_series(a * inv, Series.one(), inv.cutoff + rat(1, 16))


def test_inverse_rejects_two_monomial_layer():
    with pytest.raises(NonUnitLeadingError):
        mumford("10", 4).inverse()


def test_inverse_of_exact_needs_order():
    g = S([(0, 0, 1), (1, 0, -1)])  # infinite trust
    with pytest.raises(ValueError):
        g.inverse()
    inv = g.inverse(order=3)
    assert inv.cutoff == 3


def test_scale_args():
    a = S([(0, 0, 1), (1, 1, 1)], cutoff=7)
    b = a.scale_args(2, 2)
    assert b.terms == S([(0, 0, 1), (2, 2, 1)]).terms
    assert b.cutoff == 14
    assert a.scale_args(1, 1).terms == a.terms
    with pytest.raises(ValueError):
        a.scale_args(0, 1)


def test_scale_args_z_projection_merges():
    a = S([(1, 1, 1), (1, -1, 1), (2, 1, 1), (2, -1, -1)], cutoff=9)
    proj = a.scale_args(1, 0)
    assert proj.terms == S([(1, 0, 2)]).terms


def test_scaled_eta_leading_exponent():
    e = eta(rat(1, 2), 1, 2)
    assert e.ord == rat(1, 48)


def test_is_zfree():
    assert eta(1, 1, 6).is_zfree()
    assert not theta_jm(0, 1, 6).is_zfree()


def test_equal_up_to():
    a = S([(0, 0, 1), (1, 0, 1)], cutoff=4)
    b = S([(0, 0, 1)], cutoff=4)
    ok, mm = a.equal_up_to(b, rat(1, 2))
    assert ok and mm is None
    ok, mm = a.equal_up_to(b, 2)
    assert not ok and mm == (1, 0)
    with pytest.raises(InsufficientOrderError):
        a.equal_up_to(b, 5)
    assert a.equal_up_to(a, 4)[0]


def test_ring_axioms_randomized(rng):
    for _ in range(25):
        a = random_series(rng)
        b = random_series(rng)
        c = random_series(rng)
        lhs = (a * b) * c
        rhs = a * (b * c)
        o = min(lhs.cutoff, rhs.cutoff)
        assert_equal_series(lhs, rhs, o, "associativity")
        o2 = min((a * b).cutoff, (b * a).cutoff)
        assert_equal_series(a * b, b * a, o2, "commutativity")
        lhs = a * (b + c)
        rhs = a * b + a * c
        assert_equal_series(lhs, rhs, min(lhs.cutoff, rhs.cutoff),
                            "distributivity")


def test_refinement_determinism():
    # recomputing with a larger cutoff reproduces all trusted terms
    lo = theta_jm(0, 1, 5) * theta_jm(1, 1, 5) * eta(1, -1, 5)
    hi = theta_jm(0, 1, 9) * theta_jm(1, 1, 9) * eta(1, -1, 9)
    assert_equal_series(lo, hi, lo.cutoff)


def test_text_and_json_forms():
    th = theta_jm(0, 1, 5)
    assert th.text() == ("1 + q^(1) * z^(-1) + q^(1) * z^(1) "
                         "+ q^(4) * z^(-2) + q^(4) * z^(2)")
    obj = th.json_obj()
    assert obj["cutoff"] == "5"
    assert obj["terms"][0] == ["0", "0", ["1", "0", "0", "0"]]
    assert Series.zero(rat(2)).text() == "0"
    minus = S([(0, 0, 1), (1, 0, -2)])
    assert minus.text() == "1 - 2 * q^(1)"
