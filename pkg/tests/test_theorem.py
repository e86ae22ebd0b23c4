import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finring.constructions import compile_spec, poly_quotient, zmod
from finring.enumeration import enumerate_rings
from finring.theorem import (KOH_LEFT, RA_CONSTRUCTION, NoZeroDivisors, bound_report,
                             is_prime_power, koh_equality_check, proposition_check,
                             theorem_trace, verify_corpus)
from finring.zd_analysis import profile

from conftest import POOL_SPECS, pool_ring


def test_bound_report_z9():
    rep = bound_report(zmod(9))
    assert rep.n == 2 and rep.hirano_bound == 9
    assert rep.holds["hirano"] and rep.equality["hirano"]


def test_bound_report_z6():
    assert profile(zmod(6)).two_sided == (2, 3, 4)
    rep = bound_report(zmod(6))
    assert rep.n == 3 and rep.hirano_bound == 16
    assert rep.holds["hirano"] and not rep.equality["hirano"]


def test_bound_report_field():
    rep = bound_report(zmod(7))
    assert rep.bounds() == {}
    assert rep.hirano_bound is None and rep.ganesan_bound is None


def test_bound_report_column_ring(column_ring):
    rep = bound_report(column_ring)
    assert (rep.m_left, rep.m_right, rep.n) == (3, 1, 1)
    assert rep.bounds() == {"koh_left": 16, "koh_right": 4, "ganesan": 4, "hirano": 4}
    assert all(rep.holds.values())
    assert rep.equality == {"koh_left": False, "koh_right": True, "ganesan": True, "hirano": True}
    assert rep.ordering_ok()


def test_trace_z9():
    t = theorem_trace(zmod(9))
    assert t.branch == KOH_LEFT
    assert (t.c, t.d) == (3, 3)
    assert t.partition.a0_size == 3 and t.partition.class_count == 3
    assert all(ok for _, ok in t.steps)


def test_trace_column_ring(column_ring):
    t = theorem_trace(column_ring)
    assert t.branch == RA_CONSTRUCTION
    assert (t.a, t.b) == (1, 2)  # E11, E21
    assert t.ra_order == 4 and t.ra_elements == (0, 1, 2, 3)
    assert t.ra_right_zero_divisors == (2,)
    assert t.bijection == (0, 1, 2, 3)


def test_trace_upper_triangular(upper_ring):
    p = profile(upper_ring)
    assert p.left == p.two_sided
    assert theorem_trace(upper_ring).branch == KOH_LEFT


def test_trace_zmod25():
    t = theorem_trace(zmod(25))
    assert t.partition.a0_size == 5 and t.partition.class_count == 5


def test_trace_field_raises():
    with pytest.raises(NoZeroDivisors):
        theorem_trace(zmod(11))


def test_trace_serialises(column_ring):
    d = theorem_trace(column_ring).to_dict()
    assert d["branch"] == RA_CONSTRUCTION and d["Ra_order"] == 4
    assert [s["step"] for s in d["steps"]][-1] == "theorem_bound"


@pytest.mark.parametrize("q, expected", [(1, False), (2, True), (4, True), (6, False), (9, True),
                                         (12, False), (49, True), (64, True), (65, False)])
def test_is_prime_power(q, expected):
    assert is_prime_power(q) is expected


def test_koh_equality_examples():
    assert koh_equality_check(zmod(9))
    assert koh_equality_check(zmod(6))
    R = poly_quotient(2, [0, 0, 1])
    assert profile(R).m_left == 1 and R.order == 4
    assert koh_equality_check(R)


def test_verify_corpus_empty():
    s = verify_corpus([])
    assert s.rings == 0 and s.equality_cases == []
    assert all(v["checked"] == 0 for v in s.claims.values())


def test_verify_corpus_small_orders():
    items = [(R.name, R) for n in range(1, 5) for R in enumerate_rings(n).rings]
    s = verify_corpus(items)
    assert s.rings == 16
    assert all(v["failed"] == 0 for v in s.claims.values())
    assert {case["order"] for case in s.equality_cases} == {4}


def test_verify_corpus_constructions():
    specs = ["zmod:4", "zmod:6", "zmod:9", "zmod:25", "closure(matrix:zmod:2:2; E11,E12,E22)",
             "closure(matrix:zmod:2:2; E11,E21)", "zeromul:4", "zeromul:2,2"]
    s = verify_corpus([(x, compile_spec(x)) for x in specs])
    assert s.rings == len(specs)
    assert s.branches[RA_CONSTRUCTION] == 1


def test_verify_corpus_parallel_matches_serial():
    items = [(x, pool_ring(x)) for x in POOL_SPECS]
    assert verify_corpus(items, workers=2).to_dict() == verify_corpus(items).to_dict()


def test_proposition_check_rejects_wrong_inputs(upper_ring):
    assert proposition_check([], upper_ring)["status"] == "fail"
    assert proposition_check([("z", zmod(4))], upper_ring)["status"] == "fail"
    assert proposition_check([("ut", upper_ring)], upper_ring)["status"] == "pass"


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(POOL_SPECS))
def test_bounds_and_trace_on_pool(spec):
    R = pool_ring(spec)
    rep = bound_report(R)
    assert all(rep.holds.values())
    assert rep.ordering_ok()
    if rep.n > 0:
        t = theorem_trace(R)
        assert all(ok for _, ok in t.steps)
        assert R.order <= (rep.n + 1) ** 2
    assert koh_equality_check(R, "left") and koh_equality_check(R, "right")
