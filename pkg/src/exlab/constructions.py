"""The four-block self-complementary extension and membership through it.

For any graph G, composing [G, complement(G), complement(G), G] along a
path skeleton yields a graph on 4n vertices that is self-complementary
regardless of G: complementing swaps the joined/unjoined block pairs and
flips each block, which the block permutation (1 3)(2 4) undoes.  That
reduction lets theta-body membership questions about an arbitrary G be
posed on a self-complementary host: embed p as (p, 0, 0, p) and test the
embedded vector there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .assignments import ProbabilityAssignment, validate_assignment
from .errors import ResourceLimitError
from .graphs import (
    Graph,
    IsomorphismWitness,
    complement,
    find_isomorphism,
    generalized_composition,
    path_graph,
)
from .scalars import ZERO
from .theta import (
    DEFAULT_DIM_CAP,
    DEFAULT_TOL,
    MembershipVerdict,
    WitnessExtraction,
    extract_witness,
    in_th,
)

DEFAULT_ISO_CAP = 40


@dataclass(frozen=True)
class HConstruction:
    base: Graph
    h_graph: Graph
    block_ranges: tuple  # four (start, stop) ranges
    witness: Optional[IsomorphismWitness]  # self-complementarity permutation
    verified: bool


def build_h(
    g: Graph,
    iso_cap: int = DEFAULT_ISO_CAP,
    skip_verification: bool = False,
) -> HConstruction:
    """Compose [g, complement(g), complement(g), g] along the 4-path.

    Self-complementarity of the result is proved by isomorphism search
    unless the 4n order exceeds ``iso_cap``; callers may skip the proof
    explicitly, which leaves ``verified`` False.
    """
    n = g.n
    gbar = complement(g)
    h = generalized_composition(path_graph(4), [g, gbar, gbar, g])
    ranges = tuple((b * n, (b + 1) * n) for b in range(4))
    if 4 * n > iso_cap:
        if not skip_verification:
            raise ResourceLimitError(
                f"self-complementarity proof capped at {iso_cap} vertices "
                f"(needs {4 * n}); pass skip_verification to build anyway",
                limit=iso_cap,
                requested=4 * n,
            )
        return HConstruction(g, h, ranges, None, False)
    witness = find_isomorphism(h, complement(h))
    if witness is None:  # pragma: no cover - mathematically impossible
        raise AssertionError("four-block composition failed self-complementarity")
    return HConstruction(g, h, ranges, witness, True)


def embed_assignment(hc: HConstruction, pa: ProbabilityAssignment) -> ProbabilityAssignment:
    """(p, 0, 0, p): blocks 1 and 4 carry p, middle blocks carry zeros."""
    n = hc.base.n
    zeros = tuple([ZERO] * n)
    return validate_assignment(hc.h_graph, tuple(pa.p) + zeros + zeros + tuple(pa.p))


def embed_for_th_test(g: Graph, p, iso_cap: int = DEFAULT_ISO_CAP) -> ProbabilityAssignment:
    """Embedding of an assignment on g into its four-block host graph."""
    pa = p if isinstance(p, ProbabilityAssignment) else validate_assignment(g, p)
    hc = build_h(g, iso_cap=iso_cap)
    return embed_assignment(hc, pa)


@dataclass
class ViaHResult:
    verdict: MembershipVerdict
    construction: HConstruction
    embedded: ProbabilityAssignment
    witness: Optional[WitnessExtraction]


def th_membership_via_h(
    g: Graph,
    p,
    tol: float = DEFAULT_TOL,
    iso_cap: int = DEFAULT_ISO_CAP,
    dim_cap: int = DEFAULT_DIM_CAP,
    skip_verification: bool = False,
) -> ViaHResult:
    """Theta-body membership decided on the self-complementary host.

    Faithful by down-closure and convexity: the embedded vector lies in
    the host's theta body iff p lies in the theta body of g.  An OUT
    verdict additionally carries a verified witness on the host graph.
    """
    pa = p if isinstance(p, ProbabilityAssignment) else validate_assignment(g, p)
    hc = build_h(g, iso_cap=iso_cap, skip_verification=skip_verification)
    embedded = embed_assignment(hc, pa)
    verdict = in_th(embedded, tol=tol, dim_cap=dim_cap)
    witness = None
    if verdict.status == "OUT":
        witness = extract_witness(embedded, tol=tol, dim_cap=dim_cap)
    return ViaHResult(verdict, hc, embedded, witness)
