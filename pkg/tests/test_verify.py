import pytest

from ppra import verify


def test_fast_suites_pass():
    rows = verify.run_suites(["identity", "mtsum", "ubound", "zbound",
                              "reconstruct"], seed=3)
    assert rows and all(r["passed"] for r in rows)
    assert set(r["anchor"] for r in rows) <= set(verify.ANCHORS.values())
    assert all(set(r) == set(verify.FIELDS) for r in rows)


def test_canonical_order_independent_of_request_order():
    a = verify.run_suites(["zbound", "ubound"])
    b = verify.run_suites(["ubound", "zbound"])
    assert a == b
    assert [r["suite"] for r in a] == ["ubound"] * 3 + ["zbound"] * 2


def test_seed_changes_identity_instances():
    a = verify.suite_identity(seed=1, instances=3)
    b = verify.suite_identity(seed=2, instances=3)
    assert [r["measured"] for r in a] != [r["measured"] for r in b]


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suites(["nope"])


def test_summary():
    rows = [{"suite": "s", "measured": 1.0, "budget": 2.0, "passed": True},
            {"suite": "s", "measured": 3.0, "budget": 2.0, "passed": False},
            {"suite": "t", "measured": 1.0, "budget": 0.0, "passed": False}]
    s = verify.summarize(rows)
    assert s["total"] == 3 and s["passed"] == 1 and s["failed"] == 2
    assert s["worst_ratio"] == {"s": 1.5, "t": None}
