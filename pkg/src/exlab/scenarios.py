"""Measurement scenarios, behaviors, and their exclusivity structure.

A scenario lists measurements with their outcomes and which subsets are
jointly measurable; a behavior attaches one exact probability
distribution per maximal context.  Basic events (one outcome tuple per
maximal context) become the vertices of the exclusivity graph: two
events are adjacent iff some shared measurement takes different outcomes
in them.  Every edge carries a witness: the joint measurement when the
contexts coincide, otherwise a two-level sequential tree rooted at the
deciding shared measurement.

Builders are shipped for the two-party two-setting Bell scenario (CHSH)
and the five-cycle contextuality scenario (KCBS); the data model itself
is generic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional

from .assignments import ProbabilityAssignment, validate_assignment
from .errors import (
    InfeasibleBehaviorError,
    InvalidArgumentError,
    ResourceLimitError,
)
from .graphs import Graph
from .lp import canonical_inequality, gaussian_solve, solve_lp
from .scalars import ONE, ZERO, ScalarQ2


@dataclass(frozen=True)
class Measurement:
    name: str
    outcomes: tuple


@dataclass(frozen=True)
class MeasurementScenario:
    measurements: tuple  # Measurement, ...
    maximal_contexts: tuple  # sorted measurement-index tuples, declaration order
    contexts: frozenset  # downward closure (subsets of maximal contexts)

    @staticmethod
    def make(measurements, maximal_contexts) -> "MeasurementScenario":
        ms = tuple(
            m if isinstance(m, Measurement) else Measurement(str(m[0]), tuple(m[1]))
            for m in measurements
        )
        maxc = []
        for ctx in maximal_contexts:
            t = tuple(sorted(set(ctx)))
            if not t:
                raise InvalidArgumentError("empty context")
            for i in t:
                if not 0 <= i < len(ms):
                    raise InvalidArgumentError(f"context index {i} out of range")
            maxc.append(t)
        closure = set()
        for ctx in maxc:
            for r in range(len(ctx) + 1):
                for sub in combinations(ctx, r):
                    closure.add(sub)
        covered = {i for ctx in maxc for i in ctx}
        if covered != set(range(len(ms))):
            missing = sorted(set(range(len(ms))) - covered)
            raise InvalidArgumentError(f"measurements {missing} appear in no context")
        return MeasurementScenario(ms, tuple(maxc), frozenset(closure))

    def measurement_index(self, name: str) -> int:
        for i, m in enumerate(self.measurements):
            if m.name == name:
                return i
        raise InvalidArgumentError(f"no measurement named {name}")


@dataclass(frozen=True)
class Event:
    """One outcome per measurement of a declared context."""

    context: tuple  # sorted measurement indices
    outcomes: tuple  # aligned with context

    def outcome_of(self, m: int):
        return self.outcomes[self.context.index(m)]

    def label(self, scenario: MeasurementScenario) -> str:
        parts = [
            f"{scenario.measurements[m].name}={o}"
            for m, o in zip(self.context, self.outcomes)
        ]
        return ",".join(parts)


def basic_events(scenario: MeasurementScenario):
    """Vertices of the exclusivity graph: maximal contexts in declaration
    order, outcome tuples in lexicographic product order."""
    events = []
    for ctx in scenario.maximal_contexts:
        spaces = [scenario.measurements[m].outcomes for m in ctx]
        for combo in product(*spaces):
            events.append(Event(ctx, tuple(combo)))
    return tuple(events)


def events_exclusive(e1: Event, e2: Event) -> bool:
    """Adjacent iff a shared measurement takes different outcomes."""
    shared = set(e1.context) & set(e2.context)
    return any(e1.outcome_of(m) != e2.outcome_of(m) for m in shared)


# ---------------------------------------------------------------------------
# edge witnesses (the exclusivity data of each edge)


@dataclass(frozen=True)
class SameContextWitness:
    """Both events arise from one joint measurement; these shared
    measurements take different outcomes."""

    measurements: tuple


@dataclass(frozen=True)
class SequentialTreeWitness:
    """Two-level measurement tree: measure ``root``; on the first branch
    outcome continue with the first event's remaining measurements, on
    the second with the second event's."""

    root: int
    branches: tuple  # ((root outcome, remaining measurement indices), ...) x2


def edge_witness(scenario: MeasurementScenario, e1: Event, e2: Event):
    """Witness measurement for the exclusivity of e1 and e2, or None."""
    shared = sorted(set(e1.context) & set(e2.context))
    differing = [m for m in shared if e1.outcome_of(m) != e2.outcome_of(m)]
    if not differing:
        return None
    if e1.context == e2.context:
        return SameContextWitness(tuple(differing))
    root = differing[0]
    b1 = (e1.outcome_of(root), tuple(m for m in e1.context if m != root))
    b2 = (e2.outcome_of(root), tuple(m for m in e2.context if m != root))
    return SequentialTreeWitness(root, (b1, b2))


@dataclass(frozen=True)
class ColoredExclusivityGraph:
    scenario: MeasurementScenario
    graph: Graph
    events: tuple
    edge_witnesses: tuple  # (((i, j), witness), ...) with i < j

    def witness_for(self, i: int, j: int):
        i, j = min(i, j), max(i, j)
        for (a, b), w in self.edge_witnesses:
            if (a, b) == (i, j):
                return w
        return None


def exclusivity_graph(scenario: MeasurementScenario) -> ColoredExclusivityGraph:
    """One vertex per basic event; edges between exclusive events, each
    decorated with its witness measurement."""
    events = basic_events(scenario)
    n = len(events)
    edges = []
    witnesses = []
    for i in range(n):
        for j in range(i + 1, n):
            w = edge_witness(scenario, events[i], events[j])
            if w is not None:
                edges.append((i, j))
                witnesses.append(((i, j), w))
    labels = [e.label(scenario) for e in events]
    return ColoredExclusivityGraph(
        scenario, Graph(n, edges, vertex_labels=labels), events, tuple(witnesses)
    )


# ---------------------------------------------------------------------------
# behaviors


@dataclass(frozen=True)
class Behavior:
    """One exact probability distribution per maximal context, stored in
    the same order as the corresponding basic events."""

    scenario: MeasurementScenario
    tables: tuple  # per maximal context, tuple of ScalarQ2 in product order

    def probability(self, event: Event) -> ScalarQ2:
        ctx_idx = self.scenario.maximal_contexts.index(event.context)
        spaces = [self.scenario.measurements[m].outcomes for m in event.context]
        pos = 0
        for o, space in zip(event.outcomes, spaces):
            pos = pos * len(space) + space.index(o)
        return self.tables[ctx_idx][pos]

    def vector(self):
        return tuple(v for table in self.tables for v in table)


def make_behavior(scenario: MeasurementScenario, tables) -> Behavior:
    out = []
    if len(tables) != len(scenario.maximal_contexts):
        raise InvalidArgumentError(
            f"need {len(scenario.maximal_contexts)} context tables, got {len(tables)}"
        )
    for ctx, table in zip(scenario.maximal_contexts, tables):
        size = 1
        for m in ctx:
            size *= len(scenario.measurements[m].outcomes)
        vals = tuple(ScalarQ2.coerce(v) for v in table)
        if len(vals) != size:
            raise InvalidArgumentError(
                f"context {ctx} needs {size} probabilities, got {len(vals)}"
            )
        out.append(vals)
    return Behavior(scenario, tuple(out))


@dataclass
class BehaviorReport:
    ok: bool
    violations: list  # ("normalization", ctx, total) | ("no-disturbance", ...)


def _marginal(scenario, behavior, ctx_idx, subset, assignment):
    """Exact marginal probability of ``subset -> outcomes`` within a context."""
    ctx = scenario.maximal_contexts[ctx_idx]
    spaces = [scenario.measurements[m].outcomes for m in ctx]
    total = ZERO
    table = behavior.tables[ctx_idx]
    for pos, combo in enumerate(product(*spaces)):
        ok = True
        for m, o in zip(subset, assignment):
            if combo[ctx.index(m)] != o:
                ok = False
                break
        if ok:
            total = total + table[pos]
    return total


def validate_behavior(scenario: MeasurementScenario, behavior: Behavior) -> BehaviorReport:
    """Exact normalization and no-disturbance checks, all violations listed.

    No-disturbance is checked in general form: whenever two maximal
    contexts share a subset of measurements, their joint marginals on the
    shared subset must agree outcome by outcome.
    """
    if behavior.scenario is not scenario and behavior.scenario != scenario:
        raise InvalidArgumentError("behavior belongs to a different scenario")
    violations = []
    for ci, table in enumerate(behavior.tables):
        total = ZERO
        for v in table:
            if v.sign() < 0:
                violations.append(
                    ("negative", scenario.maximal_contexts[ci], str(v))
                )
            total = total + v
        if total != ONE:
            violations.append(
                ("normalization", scenario.maximal_contexts[ci], str(total))
            )
    nctx = len(scenario.maximal_contexts)
    for c1 in range(nctx):
        for c2 in range(c1 + 1, nctx):
            shared = tuple(
                sorted(
                    set(scenario.maximal_contexts[c1])
                    & set(scenario.maximal_contexts[c2])
                )
            )
            if not shared:
                continue
            spaces = [scenario.measurements[m].outcomes for m in shared]
            for combo in product(*spaces):
                m1 = _marginal(scenario, behavior, c1, shared, combo)
                m2 = _marginal(scenario, behavior, c2, shared, combo)
                if m1 != m2:
                    violations.append(
                        (
                            "no-disturbance",
                            shared,
                            combo,
                            scenario.maximal_contexts[c1],
                            str(m1),
                            scenario.maximal_contexts[c2],
                            str(m2),
                        )
                    )
    return BehaviorReport(not violations, violations)


def behavior_to_assignment(
    scenario: MeasurementScenario, behavior: Behavior
) -> ProbabilityAssignment:
    """Assignment induced on the exclusivity graph by event probabilities."""
    report = validate_behavior(scenario, behavior)
    if not report.ok:
        raise InfeasibleBehaviorError(
            "behavior fails scenario constraints", report.violations
        )
    ceg = exclusivity_graph(scenario)
    return validate_assignment(ceg.graph, behavior.vector())


# ---------------------------------------------------------------------------
# CHSH and KCBS builders


def bell_chsh_scenario() -> MeasurementScenario:
    """Two parties, two binary measurements each; contexts pair one
    measurement per party."""
    measurements = [
        Measurement("A1", (0, 1)),
        Measurement("A2", (0, 1)),
        Measurement("B1", (0, 1)),
        Measurement("B2", (0, 1)),
    ]
    contexts = [(0, 2), (0, 3), (1, 2), (1, 3)]  # A1B1, A1B2, A2B1, A2B2
    return MeasurementScenario.make(measurements, contexts)


def kcbs_scenario() -> MeasurementScenario:
    """Five binary measurements on a cycle; neighbors are compatible."""
    measurements = [Measurement(f"C{j+1}", (0, 1)) for j in range(5)]
    contexts = [tuple(sorted((j, (j + 1) % 5))) for j in range(5)]
    return MeasurementScenario.make(measurements, contexts)


# Five CHSH events inducing a pentagon: the lexicographically first
# induced 5-cycle through (A1=0,B1=0) and (A1=1,B2=1), the standard
# exclusive pair.  Vertex ids follow basic_events order.
CHSH_PENTAGON_VERTICES = (0, 3, 7, 8, 14)

# KCBS events (C_j = 1, C_{j+1} = 0) for j = 1..5.
KCBS_PENTAGON_VERTICES = (2, 6, 10, 14, 17)


# eight-probability CHSH parameterization: the events with a XOR b equal
# to (x-1)(y-1), in context order A1B1, A1B2, A2B1, A2B2, two per context
CHSH_EIGHT_EVENTS = (
    ((0, 2), (0, 0)),
    ((0, 2), (1, 1)),
    ((0, 3), (0, 0)),
    ((0, 3), (1, 1)),
    ((1, 2), (0, 0)),
    ((1, 2), (1, 1)),
    ((1, 3), (0, 1)),
    ((1, 3), (1, 0)),
)


def complete_chsh_behavior(eight) -> Behavior:
    """Complete the canonical 8 probabilities to the full 16 exactly.

    Solves the normalization and no-signaling system for the remaining
    entries; raises if the system were rank-deficient for the unknowns or
    if any completed entry leaves [0, 1].
    """
    scenario = bell_chsh_scenario()
    vals = [ScalarQ2.coerce(v) for v in eight]
    if len(vals) != 8:
        raise InvalidArgumentError("need exactly 8 probabilities")
    for v in vals:
        if v.sign() < 0 or (v - ONE).sign() > 0:
            raise InfeasibleBehaviorError(
                f"given probability {v} outside [0,1]", [str(v)]
            )
    known = dict(zip(CHSH_EIGHT_EVENTS, vals))
    events = basic_events(scenario)
    unknown_keys = [
        (e.context, e.outcomes) for e in events if (e.context, e.outcomes) not in known
    ]
    uidx = {k: i for i, k in enumerate(unknown_keys)}

    rows = []
    rhs = []

    def add_equation(keys_plus, keys_minus, const):
        row = [ZERO] * len(unknown_keys)
        r = ScalarQ2.coerce(const)
        for k in keys_plus:
            if k in known:
                r = r - known[k]
            else:
                row[uidx[k]] = row[uidx[k]] + ONE
        for k in keys_minus:
            if k in known:
                r = r + known[k]
            else:
                row[uidx[k]] = row[uidx[k]] - ONE
        rows.append(row)
        rhs.append(r)

    for ctx in scenario.maximal_contexts:
        keys = [(ctx, o) for o in product((0, 1), (0, 1))]
        add_equation(keys, [], 1)
    # no-signaling: marginals of each shared measurement across context pairs
    pairs = [((0, 2), (0, 3), 0), ((1, 2), (1, 3), 1), ((0, 2), (1, 2), 2), ((0, 3), (1, 3), 3)]
    for ctx1, ctx2, meas in pairs:
        for o in (0, 1):
            keys1 = [
                (ctx1, out)
                for out in product((0, 1), (0, 1))
                if out[ctx1.index(meas)] == o
            ]
            keys2 = [
                (ctx2, out)
                for out in product((0, 1), (0, 1))
                if out[ctx2.index(meas)] == o
            ]
            add_equation(keys1, keys2, 0)

    status, solution, rank = gaussian_solve(rows, rhs)
    if status == "inconsistent":
        raise InfeasibleBehaviorError(
            "normalization/no-signaling system inconsistent with the given values",
            [],
        )
    if status != "unique":
        raise InfeasibleBehaviorError(
            f"completion not unique (rank {rank} of {len(unknown_keys)})", []
        )
    full = dict(known)
    for k, i in uidx.items():
        v = solution[i]
        if v.sign() < 0 or (v - ONE).sign() > 0:
            raise InfeasibleBehaviorError(
                f"completed entry for {k} is {v}, outside [0,1]",
                [f"{k}: {v}"],
            )
        full[k] = v
    tables = []
    for ctx in scenario.maximal_contexts:
        tables.append([full[(ctx, o)] for o in product((0, 1), (0, 1))])
    return make_behavior(scenario, tables)


def extract_chsh_eight(behavior: Behavior):
    """The canonical 8 parameters of a CHSH behavior (round-trip inverse)."""
    out = []
    for ctx, outcomes in CHSH_EIGHT_EVENTS:
        out.append(behavior.probability(Event(ctx, outcomes)))
    return tuple(out)


# ---------------------------------------------------------------------------
# classical (noncontextual) membership


DEFAULT_STRATEGY_CAP = 1 << 20


def deterministic_strategies(scenario: MeasurementScenario, cap: int = DEFAULT_STRATEGY_CAP):
    """Global outcome functions, one outcome per measurement, in
    lexicographic order."""
    total = 1
    for m in scenario.measurements:
        total *= len(m.outcomes)
    if total > cap:
        raise ResourceLimitError(
            f"{total} deterministic strategies exceed the cap {cap}",
            limit=cap,
            requested=total,
        )
    spaces = [m.outcomes for m in scenario.measurements]
    return list(product(*spaces))


def strategy_vector(scenario: MeasurementScenario, strategy):
    """Deterministic behavior vector over basic events."""
    vec = []
    for e in basic_events(scenario):
        hit = all(strategy[m] == o for m, o in zip(e.context, e.outcomes))
        vec.append(ONE if hit else ZERO)
    return tuple(vec)


@dataclass(frozen=True)
class ClassicalVerdict:
    status: str  # "IN" | "OUT"
    decomposition: Optional[tuple]  # ((strategy, coefficient), ...)
    separating: Optional[tuple]  # (coefficients, local bound, value at behavior)

    @property
    def is_in(self):
        return self.status == "IN"


def in_classical(
    scenario: MeasurementScenario,
    behavior: Behavior,
    strategy_cap: int = DEFAULT_STRATEGY_CAP,
) -> ClassicalVerdict:
    """Membership in the convex hull of deterministic strategies, exact.

    OUT returns the most violated normalized inequality over event
    probabilities (coefficients in [0,1], integerized when rational)
    together with its enumerated local bound.
    """
    report = validate_behavior(scenario, behavior)
    if not report.ok:
        raise InfeasibleBehaviorError(
            "behavior fails scenario constraints", report.violations
        )
    strategies = deterministic_strategies(scenario, cap=strategy_cap)
    vectors = [strategy_vector(scenario, s) for s in strategies]
    target = behavior.vector()
    nev = len(target)

    A = [[vec[i] for vec in vectors] for i in range(nev)]
    A.append([ONE] * len(vectors))
    b = list(target) + [ONE]
    res = solve_lp(A, b, [ZERO] * len(vectors))
    if res.status == "optimal":
        decomposition = tuple(
            (strategies[j], coeff) for j, coeff in enumerate(res.x) if coeff != ZERO
        )
        return ClassicalVerdict("IN", decomposition, None)

    # separation LP: max a.target - bound, a in [0,1]^events
    nstrat = len(vectors)
    ncols = nev + 1 + nstrat + nev
    A2 = []
    b2 = []
    for si, vec in enumerate(vectors):
        row = [ZERO] * ncols
        for i in range(nev):
            row[i] = vec[i]
        row[nev] = -ONE
        row[nev + 1 + si] = ONE
        A2.append(row)
        b2.append(ZERO)
    for i in range(nev):
        row = [ZERO] * ncols
        row[i] = ONE
        row[nev + 1 + nstrat + i] = ONE
        A2.append(row)
        b2.append(ONE)
    c2 = [-v for v in target] + [ONE] + [ZERO] * (nstrat + nev)
    res2 = solve_lp(A2, b2, c2)
    assert res2.status == "optimal"
    a = tuple(res2.x[:nev])
    bound = res2.x[nev]
    a, bound = canonical_inequality(a, bound)
    # audits: the bound is attained over strategies and beaten by the behavior
    best = max(
        (sum((ai for ai, vi in zip(a, vec) if vi == ONE), ZERO) for vec in vectors),
    )
    assert best == bound
    value = sum((ai * ti for ai, ti in zip(a, target)), ZERO)
    assert (value - bound).sign() > 0
    return ClassicalVerdict("OUT", None, (a, bound, value))
