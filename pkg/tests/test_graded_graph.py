from collections import Counter

import pytest

from numsym.errors import InputError
from numsym.graded_graph import (
    build_graph,
    dimension,
    graph_csv,
    iter_root_paths,
    numbering_of,
    path_line,
    path_of,
    up_dimension,
)
from numsym.poset import (
    PathNumbering,
    addable_elements,
    build_chain,
    build_window,
    build_young_poset,
    enumerate_numberings,
    mask_of,
)


def test_chain_has_one_vertex_per_level():
    g = build_graph(build_chain(4), 3)
    assert [len(level) for level in g.levels] == [1, 1, 1, 1]
    assert all(dimension(g, v) == 1 for level in g.levels for v in level)


def test_young_2_1_top_dimension():
    g = build_graph(build_young_poset([2, 1]), 3)
    top = g.levels[3]
    assert len(top) == 1
    assert dimension(g, top[0]) == 2


def test_young_3_2_top_dimension():
    g = build_graph(build_young_poset([3, 2]), 5)
    assert dimension(g, g.levels[5][0]) == 5


def test_box_3_3_top_dimension():
    window = build_young_poset([3, 3, 3])
    g = build_graph(window, 9)
    assert dimension(g, g.levels[9][0]) == 42

    box = build_window("box:3,3")
    gb = build_graph(box, box.size)
    assert dimension(gb, gb.levels[-1][0]) == 42


def test_dimensions_match_enumeration(corpus_window):
    depth = corpus_window.size
    g = build_graph(corpus_window, depth)
    for level in range(depth + 1):
        counts = Counter(p.endpoint for p in enumerate_numberings(corpus_window, level + 1))
        assert {v.mask: dimension(g, v) for v in g.levels[level]} == dict(counts)


def test_root_paths_follow_enumeration_order(corpus_window):
    g = build_graph(corpus_window, corpus_window.size)
    walked = [p.elements for p in iter_root_paths(g, g.depth)]
    enumerated = [p.elements for p in enumerate_numberings(corpus_window, g.depth + 1)]
    assert walked == enumerated


def test_up_dimension():
    window = build_young_poset([2, 1])
    g = build_graph(window, 3)
    cell = window.poset.element_id
    top = g.levels[3][0]
    one_cell = g.vertex([0, cell((1, 1))])
    assert up_dimension(g, g.root, top) == dimension(g, top)
    assert up_dimension(g, top, top) == 1
    assert up_dimension(g, one_cell, top) == 2

    row = g.vertex([0, cell((1, 1)), cell((1, 2))])
    column = g.vertex([0, cell((1, 1)), cell((2, 1))])
    assert up_dimension(g, row, column) == 0
    with pytest.raises(InputError):
        up_dimension(g, top, one_cell)


def test_path_of_and_back():
    window = build_young_poset([2, 1])
    g = build_graph(window, 3)
    cell = window.poset.element_id
    phi = PathNumbering.of(window.poset, [0, cell((1, 1)), cell((1, 2))])
    path = path_of(phi, g)
    assert [v.ideal for v in path] == [(0,), (0, cell((1, 1))), (0, cell((1, 1)), cell((1, 2)))]
    assert path[-1].mask == mask_of(phi.elements)
    assert numbering_of(g, path) == phi

    with pytest.raises(InputError):
        numbering_of(g, [path[0], path[2]])


def test_every_young_3_2_numbering_round_trips():
    window = build_young_poset([3, 2])
    g = build_graph(window, 5)
    numberings = enumerate_numberings(window, 6)
    assert len(numberings) == 5
    for phi in numberings:
        path = path_of(phi, g)
        assert [v.level for v in path] == list(range(6))
        assert numbering_of(g, path) == phi


def test_up_edges_are_the_addable_elements(corpus_window):
    depth = min(corpus_window.size, 6)
    g = build_graph(corpus_window, depth)
    poset = corpus_window.poset
    for level in g.levels[:-1]:
        for v in level:
            added = sorted(x for x, _ in g.up_neighbors(v))
            assert added == sorted(addable_elements(poset, v.ideal))
            for x, w in g.up_neighbors(v):
                assert w.mask == v.mask | (1 << x)


def test_vertex_lookup_errors():
    g = build_graph(build_young_poset([2, 1]), 2)
    with pytest.raises(InputError):
        g.vertex_at(3, 0)
    with pytest.raises(InputError):
        g.vertex([0, 2])
    assert not g.contains(mask_of([0, 2]))


def test_graph_grows_young_window():
    g = build_graph(build_young_poset([1]), 4)
    assert [len(level) for level in g.levels] == [1, 1, 2, 3, 5]
    assert [sum(dimension(g, v) for v in level) for level in g.levels] == [1, 1, 2, 4, 10]


def test_graph_csv_and_path_line():
    window = build_young_poset([2, 1])
    g = build_graph(window, 3)
    lines = graph_csv(g)
    assert lines[0] == "level,index,ideal,dim"
    assert lines[1] == "0,0,0,1"
    assert lines[-1] == "3,0,0 1 2 3,2"
    assert g.vertex_count() == len(lines) - 1
    assert path_line(next(iter_root_paths(g, 3))) == "0,1,2,3"
