import math
from dataclasses import replace

import pytest

from numsym.errors import InputError
from numsym.poset import (
    PathNumbering,
    build_antichain,
    build_chain,
    build_window,
    build_young_poset,
    enumerate_numberings,
)
from numsym.schemas import ORBIT_TAGS
from numsym.symmetry import (
    apply_sigma,
    classify_local,
    closure,
    depth_table,
    fiber_transitivity,
    generate_group,
    hook_series,
    orbit,
    schreier_sims_order,
    verify_relations,
)

TEST_CAP = 10_000


def test_sigma_swaps_incomparable_pair():
    poset = build_antichain(2).poset
    phi = PathNumbering.of(poset, [0, 1, 2])
    assert apply_sigma(1, phi).elements == (0, 2, 1)


def test_sigma_fixes_comparable_pair():
    poset = build_chain(3).poset
    phi = PathNumbering.of(poset, [0, 1, 2])
    assert apply_sigma(1, phi) == phi


def test_sigma_index_out_of_range():
    phi = PathNumbering.of(build_chain(3).poset, [0, 1, 2])
    with pytest.raises(InputError):
        apply_sigma(2, phi)
    with pytest.raises(InputError):
        apply_sigma(0, phi)


def test_sigmas_commute_pointwise_and_keep_endpoints(corpus_window):
    length = corpus_window.poset.n
    for phi in enumerate_numberings(corpus_window, length):
        for i in range(1, length - 1):
            image = apply_sigma(i, phi)
            assert image.endpoint == phi.endpoint
            assert apply_sigma(i, image) == phi
            for j in range(i + 2, length - 1):
                assert apply_sigma(i, apply_sigma(j, phi)) == apply_sigma(j, apply_sigma(i, phi))


def test_chain_group_is_trivial():
    handle = generate_group(build_chain(4), 4)
    assert handle.path_count == 1
    assert handle.order == 1
    assert all(g == (0,) for g in handle.generators)
    assert verify_relations(handle).ok


def test_antichain_group_is_s3():
    handle = generate_group(build_antichain(3), 4)
    assert handle.path_count == 6
    assert handle.order == 6
    assert handle.order_method == "bfs"
    assert schreier_sims_order(handle.generators, handle.path_count) == 6


def test_orbits():
    chain = build_chain(4)
    phi = PathNumbering.of(chain.poset, [0, 1, 2, 3])
    assert orbit(phi, chain, 4) == {phi}

    young = build_young_poset([2, 1])
    phi = PathNumbering.of(young.poset, [0, 1, 2, 3])
    assert len(orbit(phi, young, 4)) == 2

    young = build_young_poset([3, 2])
    phi = PathNumbering.of(young.poset, [0, 1, 2, 3, 4, 5])
    assert len(orbit(phi, young, 6)) == 5


def test_orbit_rejects_wrong_length():
    young = build_young_poset([2, 1])
    phi = PathNumbering.of(young.poset, [0, 1, 2])
    with pytest.raises(InputError):
        orbit(phi, young, 4)


def test_relations_hold_on_corpus(corpus_window):
    handle = generate_group(corpus_window, corpus_window.poset.n, cap=TEST_CAP)
    report = verify_relations(handle)
    assert report.ok, report.violations
    families = {c.family for c in report.checks}
    if len(handle.generators) >= 2:
        assert "hexagonal" in families


def test_relation_violations_are_reported():
    handle = generate_group(build_antichain(3), 4)
    broken = replace(handle, generators=((1, 2, 0, 3, 4, 5),) + handle.generators[1:])
    report = verify_relations(broken)
    assert not report.ok
    assert report.violations[0].family == "involution"
    assert report.violations[0].witness == 0


def test_local_groups_on_corpus(corpus_window):
    handle = generate_group(corpus_window, corpus_window.poset.n, cap=TEST_CAP)
    for i in range(1, len(handle.generators)):
        local = classify_local(handle, i)
        assert local.product_order in (1, 2, 3, 6)
        assert local.group_order in (1, 2, 4, 6, 12)
        assert {o.tag for o in local.orbit_types} <= set(ORBIT_TAGS)
        assert sum(o.size * o.count for o in local.orbit_types) == handle.path_count


def test_antichain_local_group():
    handle = generate_group(build_antichain(3), 4)
    local = classify_local(handle, 1)
    assert local.product_order == 3
    assert local.group_order == 6
    assert local.degeneracy == "dihedral"
    assert [(o.size, o.tag, o.count) for o in local.orbit_types] == [(6, "S3-class", 1)]


def test_chain_local_group_is_trivial():
    handle = generate_group(build_chain(6), 6)
    local = classify_local(handle, 1)
    assert local.product_order == 1
    assert local.group_order == 1
    assert local.degeneracy == "trivial-pair"


def test_young_3_1_local_group():
    handle = generate_group(build_young_poset([3, 1]), 4)
    local = classify_local(handle, 1)
    assert local.degeneracy == "single-involution"
    assert local.group_order == 2
    with pytest.raises(InputError):
        classify_local(handle, 2)


def test_fiber_transitivity_on_corpus(corpus_window):
    assert fiber_transitivity(corpus_window, corpus_window.poset.n) == []


def test_partial_fibers_are_orbits():
    assert fiber_transitivity(build_young_poset([1]), 5) == []


def test_cap_falls_back_to_stabilizer_chain():
    handle = generate_group(build_window("antichain:4"), 5, cap=5)
    assert handle.cayley.cap_exceeded
    assert handle.order_method == "schreier-sims"
    assert handle.order == 24


def test_closure_reports_diameter():
    stats = closure([(1, 0, 2), (0, 2, 1)], 3)
    assert stats.elements == 6
    assert stats.diameter == 3
    assert not stats.cap_exceeded


def test_hook_series_orders():
    rows = hook_series([4, 5, 6], cap=TEST_CAP)
    for n, row in zip([4, 5, 6], rows):
        assert row.source == f"young:{n - 1},1"
        assert row.length == n + 1
        assert row.path_count == n - 1
        assert row.order == math.factorial(n - 1)
        assert row.matches == "S_{n-1}"
    with pytest.raises(InputError):
        hook_series([2])


def test_depth_table_keeps_window_until_too_small():
    rows = depth_table(build_young_poset([2, 1]), 5, cap=TEST_CAP)
    assert [r.length for r in rows] == [3, 4, 5]
    assert [r.source for r in rows] == ["young:2,1", "young:2,1", "young:4,2,1,1"]
    assert [r.path_count for r in rows[:2]] == [2, 2]
    assert [r.order for r in rows[:2]] == [1, 2]


def test_depth_table_stays_two_row():
    rows = depth_table(build_young_poset([10, 10]), 6, cap=TEST_CAP)
    assert {r.source for r in rows} == {"young:10,10"}
    # standard tableaux of at most two rows with 2, 3, 4, 5 cells
    assert [r.path_count for r in rows] == [2, 3, 6, 10]
