"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints nothing on its own; conftest.py emits a summary line per
criterion at the end of the run.  Stated runtime budgets are asserted
with the wall clock.
"""

import math
import random
import time
from fractions import Fraction
from itertools import combinations

import pytest

from exlab.assignments import (
    in_qstab,
    in_stab,
    self_inconsistency_check,
    validate_assignment,
)
from exlab.cliques import max_weighted_clique
from exlab.constructions import build_h, th_membership_via_h
from exlab.errors import ValidationFailure
from exlab.graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    find_isomorphism,
    induced_subgraph,
    is_perfect,
    is_self_complementary,
    or_product,
    path_graph,
)
from exlab.scalars import ONE, ZERO, ScalarQ2
from exlab.scenarios import (
    CHSH_PENTAGON_VERTICES,
    KCBS_PENTAGON_VERTICES,
    behavior_to_assignment,
    bell_chsh_scenario,
    complete_chsh_behavior,
    deterministic_strategies,
    exclusivity_graph,
    in_classical,
    kcbs_scenario,
    make_behavior,
    strategy_vector,
    validate_behavior,
)
from exlab.theta import extract_witness, in_th, lovasz_theta

F = Fraction

EQ9_EIGHT = [
    F(2993, 5500),
    F(22, 125),
    F(107, 700),
    F(37, 700),
    ScalarQ2(F(7, 11), F(1, 9)),
    ScalarQ2(0, F(1, 9)),
    F(137, 500),
    F(8, 1375),
]

KNOWN_TEN_CLIQUE = (
    (0, 0, 0), (0, 1, 3), (1, 2, 2), (1, 3, 0), (1, 4, 3),
    (2, 1, 2), (2, 2, 1), (3, 0, 1), (3, 1, 4), (4, 3, 1),
)


def q_c5(y):
    return [F(1, 3), F(2, 3), y, F(2, 3), F(1, 3)]


def random_graph(n, p, rng):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, edges)


def test_criterion_01_pentagon_theta():
    """theta(C5, unit) = sqrt(5) within 1e-6, under a second."""
    t0 = time.perf_counter()
    res = lovasz_theta(cycle_graph(5), [1] * 5)
    elapsed = time.perf_counter() - t0
    assert abs(res.value - math.sqrt(5)) < 1e-6
    assert elapsed < 1.0


def test_criterion_02_one_ninth_boundary():
    """Membership boundary of the worked vector at y = 1/9.

    The vector saturates an edge, so theta(complement, q) = 1 exactly for
    every y <= 1/9 and the member side pins to the boundary value (it can
    never resolve IN under the band rule; see the decisions ledger).  The
    outside resolves OUT beyond the band.
    """
    g = cycle_graph(5)
    t0 = time.perf_counter()
    above = in_th(validate_assignment(g, q_c5(F(1, 9) + F(1, 1000))))
    t_above = time.perf_counter() - t0
    assert above.status == "OUT"
    assert above.margin >= above.band
    assert t_above < 1.0

    for y in (F(1, 9), F(1, 9) - F(1, 1000)):
        t0 = time.perf_counter()
        member = in_th(validate_assignment(g, q_c5(y)))
        elapsed = time.perf_counter() - t0
        assert member.status in ("IN", "BOUNDARY")
        assert member.theta_of_complement == pytest.approx(1.0, abs=2e-6)
        assert elapsed < 1.0


def test_criterion_03_copy_thresholds():
    """Multi-copy clique-bound thresholds on the pentagon, exact."""
    g = cycle_graph(5)
    t0 = time.perf_counter()

    # uniform x = 0.46: clean at one copy, violated at two by 5x^2
    x = F(46, 100)
    verdict = self_inconsistency_check(validate_assignment(g, [x] * 5), 2)
    assert verdict.per_copy[0][1] == ScalarQ2(2 * x)  # single-copy max is an edge
    fv = verdict.first_violation
    assert fv is not None and fv.copies == 2
    assert len(fv.clique.vertices) == 5
    assert fv.weight == ScalarQ2(5 * x * x)

    # y = 0.23 > 2/9: violated at two copies
    verdict = self_inconsistency_check(validate_assignment(g, q_c5(F(23, 100))), 2)
    fv = verdict.first_violation
    assert fv is not None and fv.copies == 2
    assert fv.weight == ScalarQ2(F(23, 100) + F(7, 9))

    # y = 0.20: clean through two copies, violated at three by the known
    # optimal 10-clique with weight exactly 2 y^2 + 25/27
    y = F(1, 5)
    verdict = self_inconsistency_check(validate_assignment(g, q_c5(y)), 3)
    fv = verdict.first_violation
    assert fv is not None and fv.copies == 3
    assert [k for k, _, _ in verdict.per_copy] == [1, 2, 3]
    for k, w, _ in verdict.per_copy[:2]:
        assert (w - ONE).sign() <= 0
    assert fv.clique_digits(5) == KNOWN_TEN_CLIQUE
    assert fv.weight == ScalarQ2(2 * y * y + F(25, 27))

    # y = 0.19 < 1/(3 sqrt 3): clean through three copies
    verdict = self_inconsistency_check(validate_assignment(g, q_c5(F(19, 100))), 3)
    assert verdict.first_violation is None
    assert verdict.n_checked == 3

    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0


def test_criterion_04_exclusivity_graphs():
    """CHSH graph order/size and the two pentagon subsets."""
    chsh = exclusivity_graph(bell_chsh_scenario())
    assert chsh.graph.n == 16
    assert chsh.graph.edge_count == 56
    sub, _ = induced_subgraph(chsh.graph, CHSH_PENTAGON_VERTICES)
    assert find_isomorphism(sub, cycle_graph(5)) is not None
    kcbs = exclusivity_graph(kcbs_scenario())
    sub, _ = induced_subgraph(kcbs.graph, KCBS_PENTAGON_VERTICES)
    assert find_isomorphism(sub, cycle_graph(5)) is not None


def test_criterion_05_eq9_behavior():
    """Exact completion and constraint checks; theta-body membership of the
    induced assignment within tolerance (the value pins to the boundary:
    normalization saturates every context clique)."""
    t0 = time.perf_counter()
    scenario = bell_chsh_scenario()
    behavior = complete_chsh_behavior(EQ9_EIGHT)
    report = validate_behavior(scenario, behavior)
    assert report.ok

    # explicitly: 4 exact normalization sums and 8 no-signaling equalities
    from exlab.scenarios import _marginal

    for ci in range(4):
        total = sum(behavior.tables[ci], ZERO)
        assert total == ONE
    checked = 0
    for c1 in range(4):
        for c2 in range(c1 + 1, 4):
            shared = set(scenario.maximal_contexts[c1]) & set(
                scenario.maximal_contexts[c2]
            )
            for m in sorted(shared):
                for o in (0, 1):
                    m1 = _marginal(scenario, behavior, c1, (m,), (o,))
                    m2 = _marginal(scenario, behavior, c2, (m,), (o,))
                    assert m1 == m2
                    checked += 1
    assert checked == 8

    pa = behavior_to_assignment(scenario, behavior)
    verdict = in_th(pa)
    assert verdict.status in ("IN", "BOUNDARY")
    assert verdict.theta_of_complement <= 1.0 + verdict.band
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0


def test_criterion_06_h_construction():
    """28-vertex host for C7 with verified witness; random-G suite; skeleton."""
    hc = build_h(cycle_graph(7))
    assert hc.h_graph.n == 28
    assert hc.verified and hc.witness is not None
    m = hc.witness.mapping
    from exlab.graphs import complement

    hbar = complement(hc.h_graph)
    for i in range(28):
        for j in range(i + 1, 28):
            assert hc.h_graph.has_edge(i, j) == hbar.has_edge(m[i], m[j])

    rng = random.Random(2024)
    for _ in range(20):
        g = random_graph(rng.randint(1, 9), rng.random(), rng)
        hc = build_h(g)
        assert hc.verified
        assert is_self_complementary(hc.h_graph)

    assert is_perfect(path_graph(4)).is_perfect


def test_criterion_07_via_h_faithfulness():
    """Host-graph membership agrees with direct membership on 50 random
    pairs (BOUNDARY excluded) and on the two heptagon spot checks."""
    rng = random.Random(777)
    compared = 0
    attempts = 0
    while compared < 50 and attempts < 400:
        attempts += 1
        n = rng.randint(3, 9)
        g = random_graph(n, rng.random(), rng)
        p = [F(rng.randint(0, 60), 100) for _ in range(n)]
        try:
            pa = validate_assignment(g, p)
        except ValidationFailure:
            continue
        direct = in_th(pa)
        via = th_membership_via_h(g, pa)
        if direct.status == "BOUNDARY" or via.verdict.status == "BOUNDARY":
            continue
        assert direct.status == via.verdict.status
        compared += 1
    assert compared == 50

    g7 = cycle_graph(7)
    for val in (F(35, 100), F(10, 100)):
        pa = validate_assignment(g7, [val] * 7)
        direct = in_th(pa)
        via = th_membership_via_h(g7, pa)
        if "BOUNDARY" not in (direct.status, via.verdict.status):
            assert direct.status == via.verdict.status
    assert th_membership_via_h(g7, [F(10, 100)] * 7).verdict.status == "IN"


def test_criterion_08_witness_soundness():
    """Every witness for 20 random outside assignments verifies; none escape
    unverified."""
    rng = random.Random(4242)
    g = cycle_graph(5)
    extracted = 0
    attempts = 0
    while extracted < 20 and attempts < 300:
        attempts += 1
        p = [F(rng.randint(40, 50), 100) for _ in range(5)]
        pa = validate_assignment(g, p)
        if in_th(pa).status != "OUT":
            continue
        w = extract_witness(pa)
        # re-verify both post-conditions independently of the extractor
        assert w.theta_of_witness <= 1 - 1e-6
        inner = sum(float(a) * float(b) for a, b in zip(pa.p, w.q.p))
        assert inner > 1 + 1e-6
        assert in_th(w.q).status in ("IN", "BOUNDARY")
        assert w.inner_product == pytest.approx(inner, rel=1e-9)
        extracted += 1
    assert extracted == 20


def test_criterion_09_perfect_collapse():
    """On perfect graphs the polytope tests coincide exactly and the SDP
    verdict agrees within its band."""
    rng = random.Random(909)
    for g in (cycle_graph(4), cycle_graph(6), path_graph(4), complete_graph(4)):
        for _ in range(100):
            p = [F(rng.randint(0, 16), 16) for _ in range(g.n)]
            try:
                pa = validate_assignment(g, p)
            except ValidationFailure:
                continue
            stab = in_stab(pa)
            qstab = in_qstab(pa)
            assert stab.is_in == qstab.is_in
            th = in_th(pa)
            if stab.is_in:
                assert th.status != "OUT"
            else:
                assert th.status != "IN"


def test_criterion_10_oracle_equivalence():
    """Clique search against exhaustive subsets; theta against the odd-cycle
    closed form and the 25-vertex product value."""
    rng = random.Random(1001)
    draws = 0
    while draws < 200:
        n = rng.randint(1, 12)
        g = random_graph(n, rng.random(), rng)
        w = [F(rng.randint(0, 24), rng.randint(1, 12)) for _ in range(n)]
        clique, tot = max_weighted_clique(g, w)
        best = ZERO
        for r in range(n + 1):
            for sub in combinations(range(n), r):
                if all(g.has_edge(i, j) for i in sub for j in sub if i < j):
                    s = sum((ScalarQ2.coerce(w[i]) for i in sub), ZERO)
                    if (s - best).sign() > 0:
                        best = s
        assert tot == best
        draws += 1

    c = math.cos(math.pi / 7)
    assert abs(lovasz_theta(cycle_graph(7), [1] * 7).value - 7 * c / (1 + c)) < 1e-5
    prod = or_product(cycle_graph(5), cycle_graph(5))
    assert abs(lovasz_theta(prod, [1] * 25).value - 5.0) < 1e-4


def test_criterion_11_local_polytope():
    """PR box separated at value 4 against the enumerated local bound;
    deterministic behaviors decompose to themselves; all exact."""
    scenario = bell_chsh_scenario()
    tables = []
    for ctx in scenario.maximal_contexts:
        x = 0 if ctx[0] == 0 else 1
        y = 0 if ctx[1] == 2 else 1
        tables.append(
            [F(1, 2) if (a ^ b) == (x & y) else F(0) for a in (0, 1) for b in (0, 1)]
        )
    pr = make_behavior(scenario, tables)
    verdict = in_classical(scenario, pr)
    assert verdict.status == "OUT"
    a, bound, value = verdict.separating
    assert value == ScalarQ2(4)
    assert bound == ScalarQ2(3)
    # the bound really is the enumerated maximum over all 16 strategies
    best = max(
        sum((ai for ai, vi in zip(a, strategy_vector(scenario, s)) if vi == ONE), ZERO)
        for s in deterministic_strategies(scenario)
    )
    assert best == bound

    for strategy in deterministic_strategies(scenario):
        vec = strategy_vector(scenario, strategy)
        b = make_behavior(
            scenario, [vec[0:4], vec[4:8], vec[8:12], vec[12:16]]
        )
        v = in_classical(scenario, b)
        assert v.status == "IN"
        assert v.decomposition == ((strategy, ONE),)
