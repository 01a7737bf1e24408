"""Probability assignments on exclusivity graphs and their exact membership
tests.

An assignment attaches one probability per vertex and must respect
p_i + p_j <= 1 across every edge.  Membership in the clique-constrained
polytope (every clique sums to <= 1) and in the stable-set polytope
(convex hull of independent-set indicators) is decided in exact
arithmetic with certificates: a violating maximal clique on the way out,
a convex decomposition or separating inequality for the polytope test.
Tensor powers live on OR-power graphs and drive the multi-copy
self-consistency search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cliques import (
    DEFAULT_CLIQUE_CAP,
    enumerate_independent_sets,
    extend_to_maximal,
    max_weighted_clique,
)
from .errors import InvalidArgumentError, ValidationFailure
from .graphs import DEFAULT_PRODUCT_CAP, Clique, Graph, or_power, product_digits
from .lp import canonical_inequality, solve_lp
from .scalars import ONE, ZERO, ScalarQ2


@dataclass(frozen=True)
class ProbabilityAssignment:
    """A vector p in [0,1]^V with p_i + p_j <= 1 on every edge."""

    graph: Graph
    p: tuple

    def __len__(self):
        return len(self.p)

    def floats(self):
        return [float(v) for v in self.p]


def validate_assignment(g: Graph, p) -> ProbabilityAssignment:
    """Check the defining bounds; collect every violation before failing."""
    if len(p) != g.n:
        raise InvalidArgumentError(f"need {g.n} probabilities, got {len(p)}")
    vec = tuple(ScalarQ2.coerce(v) for v in p)
    violations = []
    for i, v in enumerate(vec):
        if v.sign() < 0:
            violations.append(("vertex", i, f"p_{i} = {v} < 0"))
        elif (v - ONE).sign() > 0:
            violations.append(("vertex", i, f"p_{i} = {v} > 1"))
    for i, j in g.edges():
        s = vec[i] + vec[j]
        if (s - ONE).sign() > 0:
            violations.append(("edge", (i, j), f"p_{i} + p_{j} = {s} > 1"))
    if violations:
        raise ValidationFailure(
            f"{len(violations)} assignment bound(s) violated", violations
        )
    return ProbabilityAssignment(g, vec)


def unit_range_assignment(g: Graph, p) -> ProbabilityAssignment:
    """Range-only construction (0 <= p_i <= 1), skipping the edge bounds.

    Membership queries accept vectors that break edge bounds; those come
    back OUT of the clique-constrained set with the violating pair as
    certificate rather than failing validation up front.
    """
    if len(p) != g.n:
        raise InvalidArgumentError(f"need {g.n} probabilities, got {len(p)}")
    vec = tuple(ScalarQ2.coerce(v) for v in p)
    violations = []
    for i, v in enumerate(vec):
        if v.sign() < 0 or (v - ONE).sign() > 0:
            violations.append(("vertex", i, f"p_{i} = {v} outside [0,1]"))
    if violations:
        raise ValidationFailure(
            f"{len(violations)} range bound(s) violated", violations
        )
    return ProbabilityAssignment(g, vec)


# ---------------------------------------------------------------------------
# clique-bound membership


@dataclass(frozen=True)
class CliqueCertificate:
    clique: Clique
    weight: ScalarQ2


@dataclass(frozen=True)
class QstabVerdict:
    status: str  # "IN" | "OUT"
    certificate: Optional[CliqueCertificate]

    @property
    def is_in(self):
        return self.status == "IN"


def in_qstab(pa: ProbabilityAssignment) -> QstabVerdict:
    """Every-clique-sums-to-at-most-one test, exact.

    OUT comes with a maximal clique of weight > 1 (the maximum-weight
    clique, extended to maximal, ties broken lexicographically).
    """
    clique, weight = max_weighted_clique(pa.graph, pa.p)
    if (weight - ONE).sign() > 0:
        verts = extend_to_maximal(pa.graph, clique.vertices)
        return QstabVerdict("OUT", CliqueCertificate(Clique(verts), weight))
    return QstabVerdict("IN", None)


# ---------------------------------------------------------------------------
# stable-set polytope membership


@dataclass(frozen=True)
class StabVerdict:
    status: str  # "IN" | "OUT"
    decomposition: Optional[tuple]  # ((vertices, coefficient), ...)
    separating: Optional[tuple]  # (coefficients, rhs): a.x <= rhs valid, a.p > rhs

    @property
    def is_in(self):
        return self.status == "IN"


def in_stab(pa: ProbabilityAssignment, set_cap: int = DEFAULT_CLIQUE_CAP) -> StabVerdict:
    """Membership in the convex hull of independent-set indicator vectors.

    IN returns an exact convex decomposition; OUT returns the most
    violated normalized separating inequality (coefficients in [0,1],
    scaled to coprime integers when rational), so certificates are
    deterministic.
    """
    g = pa.graph
    n = g.n
    p = pa.p

    # polytope vertex fast path
    if all(v == ZERO or v == ONE for v in p):
        support = tuple(i for i, v in enumerate(p) if v == ONE)
        if all(not g.has_edge(i, j) for i in support for j in support if i < j):
            return StabVerdict("IN", ((support, ONE),), None)

    sets = enumerate_independent_sets(g, cap=set_cap)

    # feasibility: columns are independent sets, rows are vertices plus mass
    A = []
    for i in range(n):
        A.append([ONE if i in s else ZERO for s in sets])
    A.append([ONE] * len(sets))
    b = list(p) + [ONE]
    res = solve_lp(A, b, [ZERO] * len(sets))
    if res.status == "optimal":
        decomposition = tuple(
            (sets[j], coeff) for j, coeff in enumerate(res.x) if coeff != ZERO
        )
        # exactness audit
        for i in range(n):
            tot = sum((c for s, c in decomposition if i in s), ZERO)
            assert tot == p[i]
        return StabVerdict("IN", decomposition, None)

    # separation: max a.p - rhs  s.t.  a.chi_S <= rhs for all S, 0 <= a <= 1
    # standard form variables: a (n), rhs (1), slack per set, slack per bound
    nsets = len(sets)
    ncols = n + 1 + nsets + n
    A2 = []
    b2 = []
    for si, s in enumerate(sets):
        row = [ZERO] * ncols
        for i in s:
            row[i] = ONE
        row[n] = -ONE
        row[n + 1 + si] = ONE
        A2.append(row)
        b2.append(ZERO)
    for i in range(n):
        row = [ZERO] * ncols
        row[i] = ONE
        row[n + 1 + nsets + i] = ONE
        A2.append(row)
        b2.append(ONE)
    c2 = [-v for v in p] + [ONE] + [ZERO] * (nsets + n)
    res2 = solve_lp(A2, b2, c2)
    assert res2.status == "optimal", "separation LP must be solvable"
    a = res2.x[:n]
    rhs = res2.x[n]
    a, rhs = canonical_inequality(a, rhs)
    # soundness audit: valid on every independent set, violated by p
    for s in sets:
        assert (sum((a[i] for i in s), ZERO) - rhs).sign() <= 0
    assert (sum((ai * pi for ai, pi in zip(a, p)), ZERO) - rhs).sign() > 0
    return StabVerdict("OUT", None, (a, rhs))


# ---------------------------------------------------------------------------
# tensor powers and the multi-copy search


def tensor_power(
    pa: ProbabilityAssignment, k: int, cap: int = DEFAULT_PRODUCT_CAP
) -> ProbabilityAssignment:
    """Product assignment on the OR power, matching its mixed-radix indexing."""
    if k < 1:
        raise InvalidArgumentError("power must be >= 1")
    if k == 1:
        return pa
    g = pa.graph
    power = or_power(g, k, cap=cap)
    base = pa.p
    probs = list(base)
    for _ in range(k - 1):
        probs = [x * y for x in probs for y in base]
    return ProbabilityAssignment(power, tuple(probs))


@dataclass(frozen=True)
class CopyViolation:
    copies: int
    clique: Clique
    weight: ScalarQ2

    def clique_digits(self, base: int):
        """Clique vertices as factor-coordinate tuples."""
        return tuple(product_digits(v, base, self.copies) for v in self.clique)


@dataclass(frozen=True)
class CopyVerdict:
    n_checked: int
    first_violation: Optional[CopyViolation]
    per_copy: tuple  # ((k, max weight, clique), ...) for each checked k
    budget_stopped_at: Optional[int] = None  # k whose power graph blew the budget

    @property
    def is_violated(self):
        return self.first_violation is not None


def self_inconsistency_check(
    pa: ProbabilityAssignment,
    n_max: int,
    vertex_budget: int = DEFAULT_PRODUCT_CAP,
) -> CopyVerdict:
    """Scan k = 1..n_max for a clique bound broken by the k-fold product.

    The first violating copy count is reported with its maximum-weight
    clique.  A clean scan is NOT a proof of self-consistency; it only
    says no violation exists up to n_max copies.
    """
    if n_max < 1:
        raise InvalidArgumentError("n_max must be >= 1")
    g = pa.graph
    per_copy = []
    for k in range(1, n_max + 1):
        if g.n**k > vertex_budget:
            return CopyVerdict(k - 1, None, tuple(per_copy), budget_stopped_at=k)
        pk = tensor_power(pa, k, cap=vertex_budget)
        clique, weight = max_weighted_clique(pk.graph, pk.p)
        per_copy.append((k, weight, clique))
        if (weight - ONE).sign() > 0:
            cert = Clique(extend_to_maximal(pk.graph, clique.vertices))
            return CopyVerdict(
                k, CopyViolation(k, cert, weight), tuple(per_copy)
            )
    return CopyVerdict(n_max, None, tuple(per_copy))
