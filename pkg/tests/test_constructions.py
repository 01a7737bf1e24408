import random
from fractions import Fraction

import pytest

from exlab.assignments import validate_assignment
from exlab.constructions import (
    build_h,
    embed_assignment,
    embed_for_th_test,
    th_membership_via_h,
)
from exlab.errors import ResourceLimitError
from exlab.graphs import (
    Graph,
    complement,
    cycle_graph,
    empty_graph,
    is_perfect,
    is_self_complementary,
    path_graph,
)
from exlab.scalars import ZERO
from exlab.theta import in_th

F = Fraction


def random_graph(n, p, rng):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, edges)


def q_c5(y):
    return [F(1, 3), F(2, 3), y, F(2, 3), F(1, 3)]


def test_skeleton_is_perfect():
    assert is_perfect(path_graph(4)).is_perfect


def test_build_h_heptagon():
    hc = build_h(cycle_graph(7))
    assert hc.h_graph.n == 28
    assert hc.verified
    assert hc.witness is not None
    assert hc.block_ranges == ((0, 7), (7, 14), (14, 21), (21, 28))


def test_build_h_pentagon():
    hc = build_h(cycle_graph(5))
    assert hc.h_graph.n == 20
    assert hc.verified


def test_build_h_single_vertex_gives_path():
    hc = build_h(empty_graph(1))
    assert hc.h_graph.adj == path_graph(4).adj
    assert hc.verified


def test_block_structure():
    g = cycle_graph(7)
    hc = build_h(g)
    h = hc.h_graph
    n = g.n
    blocks = [range(*r) for r in hc.block_ranges]
    joined = {(0, 1), (1, 2), (2, 3)}
    for bi in range(4):
        for bj in range(bi + 1, 4):
            for u in blocks[bi]:
                for v in blocks[bj]:
                    assert h.has_edge(u, v) == ((bi, bj) in joined)
    # blocks 1 and 4 induce g, middle blocks its complement
    gbar = complement(g)
    for bi, expected in ((0, g), (1, gbar), (2, gbar), (3, g)):
        off = bi * n
        for i in range(n):
            for j in range(i + 1, n):
                assert h.has_edge(off + i, off + j) == expected.has_edge(i, j)


def test_h_self_complementary_on_random_graphs():
    rng = random.Random(97)
    for _ in range(8):
        g = random_graph(rng.randint(1, 7), rng.random(), rng)
        hc = build_h(g)
        assert hc.verified
        assert is_self_complementary(hc.h_graph)


def test_iso_cap_and_override():
    g = empty_graph(15)
    with pytest.raises(ResourceLimitError):
        build_h(g)
    hc = build_h(g, skip_verification=True)
    assert not hc.verified and hc.witness is None
    assert hc.h_graph.n == 60


def test_embedding_layout():
    g = cycle_graph(5)
    pa = validate_assignment(g, [F(2, 5)] * 5)
    emb = embed_for_th_test(g, pa)
    assert emb.graph.n == 20
    assert emb.p[:5] == pa.p and emb.p[15:] == pa.p
    assert all(v == ZERO for v in emb.p[5:15])


def test_zero_assignment_in():
    g = cycle_graph(5)
    res = th_membership_via_h(g, [0] * 5)
    assert res.verdict.status == "IN"


def test_via_h_matches_direct_on_both_sides():
    g = cycle_graph(5)
    inside = validate_assignment(g, [F(40, 100)] * 5)
    outside = validate_assignment(g, [F(46, 100)] * 5)
    assert in_th(inside).status == "IN"
    r = th_membership_via_h(g, inside)
    assert r.verdict.status == "IN"
    assert in_th(outside).status == "OUT"
    r = th_membership_via_h(g, outside)
    assert r.verdict.status == "OUT"
    assert r.witness is not None
    assert r.witness.inner_product > 1 + 1e-6
    assert r.witness.theta_of_witness <= 1 - 1e-6


def test_via_h_out_for_y_02():
    g = cycle_graph(5)
    res = th_membership_via_h(g, q_c5(F(1, 5)))
    assert res.verdict.status == "OUT"
    assert res.witness is not None


def test_via_h_heptagon_agreement():
    g = cycle_graph(7)
    for val, expected in ((F(35, 100), None), (F(10, 100), "IN")):
        pa = validate_assignment(g, [val] * 7)
        direct = in_th(pa)
        via = th_membership_via_h(g, pa)
        if direct.status != "BOUNDARY" and via.verdict.status != "BOUNDARY":
            assert direct.status == via.verdict.status
        if expected:
            assert via.verdict.status == expected


def test_embed_assignment_requires_valid_input():
    g = cycle_graph(5)
    hc = build_h(g)
    pa = validate_assignment(g, [F(1, 5)] * 5)
    emb = embed_assignment(hc, pa)
    assert len(emb.p) == 20
