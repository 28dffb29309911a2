import pytest

from thetaq._rational import rat
from thetaq import cyclo
from thetaq.identities import (
    UnknownIdentityError,
    equality_check,
    list_identities,
    registry,
    run_all,
    run_identity,
    summarize,
)
from thetaq.series import Series
from thetaq.thetalib import theta_jm


def test_registry_nonempty_and_sorted():
    rows = list_identities()
    assert len(rows) >= 40
    ids = [r[0] for r in rows]
    assert ids == sorted(ids)
    assert len(set(ids)) == len(ids)


def test_registry_contains_pinned_ids():
    ids = {r[0] for r in list_identities()}
    for required in (
        "S2.mumford.item2",
        "S2.squares.item3",
        "S3.prod.K1xK1.case1",
        "S4.pindep.m1.half",
        "S5.UeqV.m3.integer",
        "S5.ladder.m2.s1/2",
    ):
        assert required in ids


def test_default_orders():
    reg = registry()
    assert reg["S2.mult-lemma.n1m1.j0k0"].default_order == 6
    assert reg["S3.coincide.00"].default_order == 8
    assert reg["S5.UeqV.m1.half"].default_order == 4


def test_run_identity_pass():
    r = run_identity("S2.squares.item3", 6)
    assert r.status == "pass"
    assert r.certified_order == 6
    assert r.first_mismatch is None


def test_run_identity_unknown():
    with pytest.raises(UnknownIdentityError):
        run_identity("nonsense")


def test_injected_fault_reports_mismatch():
    # perturb one side by +q^3 and watch the report pinpoint it
    chk = equality_check(
        lambda o: theta_jm(0, 1, o) + Series.monomial(cyclo.ONE, rat(3), rat(0)),
        lambda o: theta_jm(0, 1, o),
    )
    res = chk(rat(6))
    assert res.status == "fail"
    assert res.first_mismatch == (3, 0)


def test_monotone_certification():
    # raising the order never flips trusted terms
    low = run_identity("S2.mumford.item2", 4)
    high = run_identity("S2.mumford.item2", 7)
    assert low.status == high.status == "pass"


def test_run_all_subset_and_summary():
    ids = [
        "S2.mumford.item1",
        "S2.mumford.item2",
        "S2.squares.item1",
        "S5.ladder.degenerate.m1",
    ]
    reports = run_all(ids=ids)
    assert [r.id for r in reports] == ids
    counts = summarize(reports)
    assert counts["pass"] == 4
    assert counts["total"] == 4


def test_run_all_parallel_matches_serial():
    ids = [
        "S2.mumford.item2",
        "S2.squares.item3",
        "S3.coincide.00",
        "S3.prod.K1xK1.case1",
        "S5.member.half.m1.p0",
        "S5.UeqV.m1.half",
    ]
    serial = run_all(ids=ids)
    parallel = run_all(ids=ids, jobs=2)
    for a, b in zip(serial, parallel):
        assert a.json_obj() == b.json_obj()


def test_order_override():
    r = run_identity("S2.mumford.item2", rat(3))
    assert r.status == "pass" and r.certified_order == 3


def test_report_json_schema():
    r = run_identity("S2.squares.item3")
    obj = r.json_obj()
    assert set(obj) == {"id", "kind", "status", "certified_order",
                        "first_mismatch", "wall_ms"}
    assert obj["wall_ms"] is None
    timed = r.json_obj(include_timing=True)
    assert isinstance(timed["wall_ms"], float)


def test_anchor_text_present():
    for _, _, _, anchor in list_identities()[:20]:
        assert anchor and isinstance(anchor, str)
