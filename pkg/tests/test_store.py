import math

from numsym.database import check_connection
from numsym.schemas import FrequencyReport, GroupOrderRow, IdealSpec
from numsym.store import (
    check_group_order,
    fingerprint,
    lookup_group_order,
    record_frequency,
    record_group_order,
)


def make_row(order: int, source: str = "young:3,1") -> GroupOrderRow:
    return GroupOrderRow(source=source, length=5, path_count=3, order=order, order_method="bfs")


def test_connection(db_url):
    assert check_connection(db_url)


def test_fingerprint_is_stable():
    assert fingerprint("group", "young:3,1", 5) == fingerprint("group", "young:3,1", 5)
    assert fingerprint("group", "young:3,1", 5) != fingerprint("group", "young:3,1", 6)


def test_group_order_fixture_lifecycle(db_url):
    row = make_row(6)
    assert check_group_order(row, db_url) is None
    assert record_group_order(row, db_url)
    assert not record_group_order(make_row(7), db_url)
    assert lookup_group_order("young:3,1", 5, db_url) == 6
    assert check_group_order(row, db_url) is True
    assert check_group_order(make_row(7), db_url) is False


def test_large_orders_survive_storage(db_url):
    order = math.factorial(30)
    assert record_group_order(make_row(order, source="box:3,3"), db_url)
    assert lookup_group_order("box:3,3", 5, db_url) == order


def test_frequency_records_are_deduplicated(db_url):
    report = FrequencyReport(sampler="plancherel", ideal=IdealSpec.hook(1, 0), n_steps=100,
                             replicas=10, estimate=0.2, stderr=0.01, seed=7)
    assert record_frequency(report, db_url)
    assert not record_frequency(report, db_url)
