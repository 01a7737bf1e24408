import random
from fractions import Fraction

import pytest

from exlab.assignments import (
    in_qstab,
    in_stab,
    self_inconsistency_check,
    tensor_power,
    unit_range_assignment,
    validate_assignment,
)
from exlab.cliques import enumerate_independent_sets
from exlab.errors import InvalidArgumentError, ValidationFailure
from exlab.graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    or_power,
    path_graph,
    product_index,
)
from exlab.scalars import ONE, ZERO, ScalarQ2

F = Fraction


def q_c5(y):
    return [F(1, 3), F(2, 3), F(y) if not isinstance(y, F) else y, F(2, 3), F(1, 3)]


def random_graph(n, p, rng):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# validation


def test_validate_uniform_half_pentagon():
    pa = validate_assignment(cycle_graph(5), [F(1, 2)] * 5)
    assert len(pa) == 5


def test_validate_worked_example_vector():
    validate_assignment(cycle_graph(5), q_c5(F(1, 3)))


def test_validate_collects_all_violations():
    with pytest.raises(ValidationFailure) as exc:
        validate_assignment(complete_graph(2), ["0.6", "0.6"])
    assert any(kind == "edge" for kind, *_ in exc.value.violations)


def test_validate_range_violations():
    with pytest.raises(ValidationFailure) as exc:
        validate_assignment(cycle_graph(5), [F(1, 2), F(3, 2), F(-1, 2), 0, 0])
    kinds = [v[0] for v in exc.value.violations]
    assert kinds.count("vertex") == 2


def test_validate_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        validate_assignment(cycle_graph(5), [F(1, 2)] * 4)


# ---------------------------------------------------------------------------
# clique-bound membership


def test_qstab_uniform_half_in():
    pa = validate_assignment(cycle_graph(5), [F(1, 2)] * 5)
    assert in_qstab(pa).status == "IN"


def test_qstab_y_034_out_with_certificate():
    # y = 0.34 breaks an edge bound, so it enters through the range-only
    # constructor and must come back OUT with that pair as certificate
    pa = unit_range_assignment(cycle_graph(5), q_c5(F(34, 100)))
    verdict = in_qstab(pa)
    assert verdict.status == "OUT"
    cert = verdict.certificate
    assert cert.weight == ScalarQ2(F(34, 100) + F(2, 3))
    # two edges tie at that weight; the lexicographically first is returned
    assert cert.clique.vertices == (1, 2)


def test_qstab_boundary_weight_one_is_in():
    pa = validate_assignment(complete_graph(3), [F(1, 3)] * 3)
    assert in_qstab(pa).status == "IN"


# ---------------------------------------------------------------------------
# stable-set polytope membership


def deco_reproduces(pa, decomposition):
    for i in range(pa.graph.n):
        tot = sum((c for s, c in decomposition if i in s), ZERO)
        if tot != pa.p[i]:
            return False
    total = sum((c for _, c in decomposition), ZERO)
    return total == ONE


def test_stab_uniform_two_fifths():
    pa = validate_assignment(cycle_graph(5), [F(2, 5)] * 5)
    verdict = in_stab(pa)
    assert verdict.status == "IN"
    assert deco_reproduces(pa, verdict.decomposition)
    sets = dict(verdict.decomposition)
    for s in sets:
        assert all(not pa.graph.has_edge(i, j) for i in s for j in s if i < j)


def test_stab_indicator_single_term():
    pa = validate_assignment(cycle_graph(5), [1, 0, 1, 0, 0])
    verdict = in_stab(pa)
    assert verdict.status == "IN"
    assert verdict.decomposition == (((0, 2), ONE),)


def test_stab_uniform_041_out_with_rank_inequality():
    pa = validate_assignment(cycle_graph(5), [F(41, 100)] * 5)
    verdict = in_stab(pa)
    assert verdict.status == "OUT"
    a, rhs = verdict.separating
    assert list(a) == [ONE] * 5
    assert rhs == ScalarQ2(2)


def test_stab_separator_is_valid():
    rng = random.Random(51)
    found_out = 0
    while found_out < 6:
        g = random_graph(rng.randint(2, 7), rng.random(), rng)
        p = [F(rng.randint(0, 10), 10) for _ in range(g.n)]
        try:
            pa = validate_assignment(g, p)
        except ValidationFailure:
            continue
        verdict = in_stab(pa)
        if verdict.status != "OUT":
            continue
        found_out += 1
        a, rhs = verdict.separating
        for s in enumerate_independent_sets(g):
            assert (sum((a[i] for i in s), ZERO) - rhs).sign() <= 0
        value = sum((ai * pi for ai, pi in zip(a, pa.p)), ZERO)
        assert (value - rhs).sign() > 0


def test_stab_down_closure():
    rng = random.Random(53)
    checked = 0
    while checked < 10:
        g = random_graph(rng.randint(2, 6), rng.random(), rng)
        sets = enumerate_independent_sets(g)
        weights = [F(rng.randint(0, 5)) for _ in sets]
        tot = sum(weights)
        if tot == 0:
            continue
        p = [ZERO] * g.n
        for s, w in zip(sets, weights):
            for i in s:
                p[i] = p[i] + ScalarQ2(F(w, tot))
        pa = validate_assignment(g, p)
        assert in_stab(pa).status == "IN"
        q = [v * F(rng.randint(0, 4), 4) for v in p]
        qa = validate_assignment(g, q)
        assert in_stab(qa).status == "IN"
        checked += 1


# ---------------------------------------------------------------------------
# tensor powers


def test_tensor_power_uniform():
    pa = validate_assignment(cycle_graph(5), [F(1, 2)] * 5)
    p2 = tensor_power(pa, 2)
    assert p2.graph.n == 25
    assert all(v == ScalarQ2(F(1, 4)) for v in p2.p)


def test_tensor_power_identity():
    pa = validate_assignment(cycle_graph(5), q_c5(F(1, 5)))
    assert tensor_power(pa, 1) is pa


def test_tensor_power_indicator():
    pa = validate_assignment(cycle_graph(5), [1, 0, 0, 0, 0])
    p3 = tensor_power(pa, 3)
    assert p3.p[0] == ONE
    assert all(v == ZERO for v in p3.p[1:])


def test_tensor_power_mixed_radix_alignment():
    pa = validate_assignment(cycle_graph(5), q_c5(F(1, 5)))
    p2 = tensor_power(pa, 2)
    for i in range(5):
        for j in range(5):
            v = product_index((i, j), 5)
            assert p2.p[v] == pa.p[i] * pa.p[j]


# ---------------------------------------------------------------------------
# multi-copy self-inconsistency


def test_uniform_046_violates_at_two_copies():
    pa = validate_assignment(cycle_graph(5), [F(46, 100)] * 5)
    verdict = self_inconsistency_check(pa, 2)
    assert verdict.first_violation is not None
    fv = verdict.first_violation
    assert fv.copies == 2
    assert len(fv.clique.vertices) == 5
    assert fv.weight == ScalarQ2(5 * F(46, 100) ** 2)
    # single copy is clean: recorded max weight 2x <= 1
    k1, w1, _ = verdict.per_copy[0]
    assert (k1, w1) == (1, ScalarQ2(F(92, 100)))


def test_y_023_violates_at_two_copies():
    pa = validate_assignment(cycle_graph(5), q_c5(F(23, 100)))
    verdict = self_inconsistency_check(pa, 2)
    fv = verdict.first_violation
    assert fv is not None and fv.copies == 2
    assert fv.weight == ScalarQ2(F(23, 100) + F(7, 9))


def test_uniform_02_clean_at_two_copies():
    pa = validate_assignment(cycle_graph(5), [F(1, 5)] * 5)
    verdict = self_inconsistency_check(pa, 2)
    assert verdict.first_violation is None
    assert verdict.n_checked == 2


def test_budget_stop_reported():
    pa = validate_assignment(cycle_graph(5), [F(1, 5)] * 5)
    verdict = self_inconsistency_check(pa, 3, vertex_budget=30)
    assert verdict.budget_stopped_at == 3
    assert verdict.n_checked == 2
    assert verdict.first_violation is None


def test_rejects_silly_copy_count():
    pa = validate_assignment(cycle_graph(5), [F(1, 2)] * 5)
    with pytest.raises(InvalidArgumentError):
        self_inconsistency_check(pa, 0)


# ---------------------------------------------------------------------------
# the three-copy ten-clique identity


KNOWN_TEN_CLIQUE = (
    (0, 0, 0), (0, 1, 3), (1, 2, 2), (1, 3, 0), (1, 4, 3),
    (2, 1, 2), (2, 2, 1), (3, 0, 1), (3, 1, 4), (4, 3, 1),
)


def test_ten_clique_is_a_clique_and_weight_identity():
    g3 = or_power(cycle_graph(5), 3)
    ids = [product_index(t, 5) for t in KNOWN_TEN_CLIQUE]
    for a in ids:
        for b in ids:
            if a != b:
                assert g3.has_edge(a, b)
    # exact weight is 2 y^2 + 25/27 at three rational instantiations
    for y in (F(1, 5), F(2, 9), F(19, 100)):
        pa = validate_assignment(cycle_graph(5), q_c5(y))
        p3 = tensor_power(pa, 3)
        weight = sum((p3.p[v] for v in ids), ZERO)
        assert weight == ScalarQ2(2 * y * y + F(25, 27))


# ---------------------------------------------------------------------------
# structural properties


def test_monotone_chain_stab_implies_qstab():
    rng = random.Random(61)
    checked = 0
    while checked < 15:
        g = random_graph(rng.randint(2, 7), rng.random(), rng)
        p = [F(rng.randint(0, 8), 16) for _ in range(g.n)]
        try:
            pa = validate_assignment(g, p)
        except ValidationFailure:
            continue
        checked += 1
        if in_stab(pa).status == "IN":
            assert in_qstab(pa).status == "IN"


def test_perfect_collapse_small():
    rng = random.Random(63)
    for g in (cycle_graph(4), cycle_graph(6), path_graph(4), complete_graph(4)):
        for _ in range(25):
            p = [F(rng.randint(0, 8), 16) for _ in range(g.n)]
            try:
                pa = validate_assignment(g, p)
            except ValidationFailure:
                continue
            assert in_stab(pa).is_in == in_qstab(pa).is_in


def test_monotone_chain_through_th():
    # stab IN => th not OUT; th IN => qstab IN (random small instances)
    from exlab.theta import in_th

    rng = random.Random(67)
    checked = 0
    while checked < 12:
        g = random_graph(rng.randint(2, 8), rng.random(), rng)
        p = [F(rng.randint(0, 10), 20) for _ in range(g.n)]
        try:
            pa = validate_assignment(g, p)
        except ValidationFailure:
            continue
        checked += 1
        th = in_th(pa)
        if in_stab(pa).is_in:
            assert th.status != "OUT"
        if th.status == "IN":
            assert in_qstab(pa).is_in


def test_certificates_deterministic_across_reruns():
    pa = unit_range_assignment(cycle_graph(5), q_c5(F(34, 100)))
    v1, v2 = in_qstab(pa), in_qstab(pa)
    assert v1 == v2
    pb = validate_assignment(cycle_graph(5), [F(41, 100)] * 5)
    s1, s2 = in_stab(pb), in_stab(pb)
    assert s1 == s2
