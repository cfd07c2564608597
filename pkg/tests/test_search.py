import pytest
from sympy import isprime

from cyclosrg.search import (evaluate_pair, index4_check, mult_order, order_lift_check,
                             report_rows, search_pairs, stage1_reason)


def test_mult_order():
    assert mult_order(7, 37) == 9
    assert mult_order(3, 13) == 3
    assert mult_order(2, 5) == 4
    with pytest.raises(ValueError):
        mult_order(6, 9)


def test_index4_check():
    assert index4_check(7, 37)[0]
    assert index4_check(3, 13)[0]
    ok, diag = index4_check(2, 13)
    assert not ok and not all(diag.values())
    with pytest.raises(ValueError):
        index4_check(13, 13)


def _non_lifting_prime():
    # 3 has order 39 mod 169, so x = 3^13 has order 3 mod 169 and mod 13
    x = pow(3, 13, 169)
    p = x
    while not isprime(p):
        p += 169
    return p


def test_order_lift():
    assert order_lift_check(7, 37)
    assert order_lift_check(3, 13)
    p = _non_lifting_prime()
    assert mult_order(p, 13) == 3 and index4_check(p, 13)[0]
    assert not order_lift_check(p, 13)
    assert mult_order(p, 169) == 3


def test_stage1():
    assert stage1_reason(13) is None and stage1_reason(37) is None
    assert stage1_reason(5) == "p1 <= 5"
    assert stage1_reason(17) == "p1 != 5 mod 8"
    assert stage1_reason(29) is not None


def test_evaluate_pair():
    kind, hit = evaluate_pair(7, 37)
    assert kind == "hit" and hit.predicted.as_tuple() == (40353607, 1090638, 28277, 29510)
    assert evaluate_pair(19, 101)[0] == "undecided"


def test_small_ranges():
    assert search_pairs(10, 10).hits == []
    rep = search_pairs(10, 40)
    assert [(h.p, h.p1) for h in rep.hits] == [(3, 13), (7, 37)]
    assert str(rep.hits[0].predicted) == "srg(27,2,1,0)"


def _partition_ok(rep):
    c = rep.counters
    stage2 = [r for r in rep.rejected if r[2] == "stage 2"]
    stage3 = [r for r in rep.rejected if r[2] == "stage 3"]
    assert len(stage2) + c.get("stage 2 passed", 0) == c.get("index-4 pairs", 0)
    assert len(rep.hits) + len(rep.undecided) + len(stage3) == c.get("stage 2 passed", 0)
    keys = [(h.p, h.p1) for h in rep.hits] + [u[:2] for u in rep.undecided] + [r[:2] for r in rep.rejected]
    assert len(keys) == len(set(keys))


def test_partition_and_determinism():
    rep = search_pairs(400, 400)
    _partition_ok(rep)
    assert len(rep.rejected_p1) + rep.counters["p1 stage 1 passed"] == rep.counters["p1 examined"]
    assert rep.to_json() == search_pairs(400, 400).to_json()


def test_audit():
    rep = search_pairs(200, 120, audit=True)
    assert rep.audit
    assert all(a[3] != "srg" for a in rep.audit)


def test_workers_agree():
    assert search_pairs(300, 400, workers=2).to_json() == search_pairs(300, 400).to_json()


def test_report_rows():
    rows = list(report_rows(search_pairs(100, 110)))
    assert {(r["p"], r["p1"]) for r in rows if r["status"] == "hit"} == {(3, 13), (7, 37)}
    assert any(r["status"] == "undecided" and (r["p"], r["p1"]) == (19, 101) for r in rows)


def test_hits_confirmed_directly():
    from cyclosrg.pipeline import verify
    for h in search_pairs(10, 40).hits:
        q = h.p ** h.qd.ftilde
        assert q <= 5 * 10 ** 7
        rep = verify(h.p, h.p1, 1)
        assert rep["direct"]["distinct"] == 2
        assert rep["direct"]["spectrum"] == {str(k): v for k, v in h.spectrum.items()}
        assert rep["direct"]["params"]["name"] == str(h.predicted)
