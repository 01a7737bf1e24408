"""Finite simple graphs and the constructions used throughout the package.

Vertices are always 0-based integers.  Graphs are immutable; adjacency is
stored as one bitmask per vertex, which keeps the clique and isomorphism
machinery branch-free on set operations.  OR-product vertices use
row-major mixed-radix indexing (leftmost factor most significant) so that
clique certificates on product graphs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidArgumentError, ResourceLimitError

DEFAULT_PRODUCT_CAP = 10**6
DEFAULT_PERFECT_CAP = 24


class Graph:
    """Immutable simple graph on {0..n-1} with optional vertex labels."""

    __slots__ = ("n", "adj", "vertex_labels")

    def __init__(self, n: int, edges=(), vertex_labels=None):
        if n < 0:
            raise InvalidArgumentError("vertex count must be nonnegative")
        masks = [0] * n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidArgumentError(f"edge ({i},{j}) out of range for n={n}")
            if i == j:
                raise InvalidArgumentError(f"self-loop at vertex {i}")
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        if vertex_labels is not None:
            vertex_labels = tuple(str(x) for x in vertex_labels)
            if len(vertex_labels) != n:
                raise InvalidArgumentError("vertex_labels must have exactly n entries")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", tuple(masks))
        object.__setattr__(self, "vertex_labels", vertex_labels)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @staticmethod
    def from_masks(n, masks, vertex_labels=None) -> "Graph":
        g = Graph.__new__(Graph)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", tuple(masks))
        object.__setattr__(g, "vertex_labels", tuple(vertex_labels) if vertex_labels else None)
        return g

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and bool((self.adj[i] >> j) & 1)

    def neighbors(self, i: int):
        return _bits(self.adj[i])

    def degree(self, i: int) -> int:
        return self.adj[i].bit_count()

    def edges(self):
        out = []
        for i in range(self.n):
            m = self.adj[i] >> (i + 1)
            j = i + 1
            while m:
                if m & 1:
                    out.append((i, j))
                m >>= 1
                j += 1
        return out

    @property
    def edge_count(self) -> int:
        return sum(self.adj[i].bit_count() for i in range(self.n)) // 2

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj and self.vertex_labels == other.vertex_labels

    def __hash__(self):
        return hash((self.n, self.adj, self.vertex_labels))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count})"


@dataclass(frozen=True)
class Clique:
    """Strictly sorted vertex list, pairwise adjacent in a host graph."""

    vertices: tuple

    @staticmethod
    def of(g: Graph, vertices) -> "Clique":
        vs = tuple(sorted(vertices))
        if len(set(vs)) != len(vs):
            raise InvalidArgumentError("clique vertices must be distinct")
        for i, v in enumerate(vs):
            if not 0 <= v < g.n:
                raise InvalidArgumentError(f"vertex {v} out of range")
            for u in vs[i + 1:]:
                if not g.has_edge(v, u):
                    raise InvalidArgumentError(f"vertices {v},{u} not adjacent")
        return Clique(vs)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


@dataclass(frozen=True)
class IsomorphismWitness:
    """Permutation of {0..n-1} mapping one graph onto another."""

    mapping: tuple

    def apply(self, v: int) -> int:
        return self.mapping[v]


def _bits(mask: int):
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


# ---------------------------------------------------------------------------
# basic builders


def cycle_graph(n: int) -> Graph:
    """C_n: n vertices connected in a closed chain."""
    if n < 3:
        raise InvalidArgumentError("cycle graph needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    """P_n: n vertices in a chain."""
    if n < 1:
        raise InvalidArgumentError("path graph needs at least 1 vertex")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    """K_n."""
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def empty_graph(n: int) -> Graph:
    """n isolated vertices."""
    return Graph(n, [])


def complement(g: Graph) -> Graph:
    """Same vertices; two distinct vertices adjacent iff not adjacent in g."""
    full = (1 << g.n) - 1
    masks = [(full ^ g.adj[i]) & ~(1 << i) for i in range(g.n)]
    return Graph.from_masks(g.n, masks, g.vertex_labels)


# ---------------------------------------------------------------------------
# products and compositions


def or_product(g: Graph, h: Graph, cap: int = DEFAULT_PRODUCT_CAP) -> Graph:
    """Disjunctive (co-normal) product: tuples adjacent iff adjacent in >= 1 slot.

    Vertex (i, i') maps to index i*|V(h)| + i'.
    """
    n = g.n * h.n
    if n > cap:
        raise ResourceLimitError(
            f"product would have {n} vertices (cap {cap})", limit=cap, requested=n
        )
    hn = h.n
    hfull = (1 << hn) - 1
    masks = [0] * n
    # rows fully adjacent through the first coordinate
    rowfull = [0] * g.n
    for i in range(g.n):
        m = 0
        for j in _bits(g.adj[i]):
            m |= hfull << (j * hn)
        rowfull[i] = m
    # second-coordinate adjacency replicated across every row
    hspread = [0] * hn
    for ip in range(hn):
        m = 0
        for j in range(g.n):
            m |= h.adj[ip] << (j * hn)
        hspread[ip] = m
    for i in range(g.n):
        for ip in range(hn):
            v = i * hn + ip
            masks[v] = (rowfull[i] | hspread[ip]) & ~(1 << v)
    return Graph.from_masks(n, masks)


def or_power(g: Graph, k: int, cap: int = DEFAULT_PRODUCT_CAP) -> Graph:
    """Iterated OR product of k copies of g, leftmost factor most significant."""
    if k < 1:
        raise InvalidArgumentError("power must be >= 1")
    n = g.n**k
    if n > cap:
        raise ResourceLimitError(
            f"power graph would have {n} vertices (cap {cap})", limit=cap, requested=n
        )
    out = g
    for _ in range(k - 1):
        out = or_product(out, g, cap=cap)
    return out


def product_index(digits: Sequence[int], base: int) -> int:
    """Mixed-radix index of a product vertex (leftmost most significant)."""
    v = 0
    for d in digits:
        v = v * base + d
    return v


def product_digits(v: int, base: int, k: int) -> tuple:
    """Inverse of :func:`product_index`."""
    out = []
    for _ in range(k):
        v, d = divmod(v, base)
        out.append(d)
    return tuple(reversed(out))


def generalized_composition(skeleton: Graph, parts: Sequence[Graph]) -> Graph:
    """Disjoint union of parts, fully joining parts i and j on skeleton edges.

    Block boundaries are recorded in vertex labels as "b<i>:<orig>".
    """
    if len(parts) != skeleton.n:
        raise InvalidArgumentError(
            f"need {skeleton.n} parts for the skeleton, got {len(parts)}"
        )
    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.n
    edges = []
    labels = []
    for bi, p in enumerate(parts):
        off = offsets[bi]
        for i, j in p.edges():
            edges.append((off + i, off + j))
        for v in range(p.n):
            orig = p.vertex_labels[v] if p.vertex_labels else str(v)
            labels.append(f"b{bi}:{orig}")
    for bi, bj in skeleton.edges():
        for u in range(parts[bi].n):
            for w in range(parts[bj].n):
                edges.append((offsets[bi] + u, offsets[bj] + w))
    return Graph(total, edges, vertex_labels=labels)


def induced_subgraph(g: Graph, vertices) -> tuple:
    """Relabeled induced subgraph; returns (subgraph, mapping to original ids)."""
    vs = sorted(set(vertices))
    for v in vs:
        if not 0 <= v < g.n:
            raise InvalidArgumentError(f"vertex {v} out of range")
    pos = {v: i for i, v in enumerate(vs)}
    edges = [
        (pos[u], pos[v]) for u in vs for v in vs if u < v and g.has_edge(u, v)
    ]
    labels = None
    if g.vertex_labels:
        labels = [g.vertex_labels[v] for v in vs]
    return Graph(len(vs), edges, vertex_labels=labels), tuple(vs)


# ---------------------------------------------------------------------------
# isomorphism


def _refine_colors(g: Graph, init=None):
    """Iterative neighborhood color refinement; returns per-vertex color ids."""
    colors = list(init) if init is not None else [g.degree(v) for v in range(g.n)]
    while True:
        sig = [
            (colors[v], tuple(sorted(colors[u] for u in g.neighbors(v))))
            for v in range(g.n)
        ]
        remap = {}
        new = []
        for s in sig:
            if s not in remap:
                remap[s] = len(remap)
            new.append(remap[s])
        if new == colors:
            return colors
        colors = new


def find_isomorphism(g: Graph, h: Graph) -> Optional[IsomorphismWitness]:
    """Adjacency-preserving bijection g -> h, or None.

    Backtracking over color classes from a joint neighborhood refinement;
    deterministic for fixed inputs.  Intended for the desk scale of this
    package (a few dozen vertices).
    """
    if g.n != h.n:
        return None
    if g.edge_count != h.edge_count:
        return None
    n = g.n
    if n == 0:
        return IsomorphismWitness(())

    # joint refinement: same signature dictionary for both graphs
    gcol = [g.degree(v) for v in range(n)]
    hcol = [h.degree(v) for v in range(n)]
    while True:
        sig_g = [(gcol[v], tuple(sorted(gcol[u] for u in g.neighbors(v)))) for v in range(n)]
        sig_h = [(hcol[v], tuple(sorted(hcol[u] for u in h.neighbors(v)))) for v in range(n)]
        remap = {}
        for s in sorted(set(sig_g) | set(sig_h)):
            remap[s] = len(remap)
        ng = [remap[s] for s in sig_g]
        nh = [remap[s] for s in sig_h]
        if ng == gcol and nh == hcol:
            break
        gcol, hcol = ng, nh
    if sorted(gcol) != sorted(hcol):
        return None

    h_by_color = {}
    for v in range(n):
        h_by_color.setdefault(hcol[v], []).append(v)
    cand_masks = []
    for v in range(n):
        m = 0
        for u in h_by_color.get(gcol[v], ()):
            m |= 1 << u
        if m == 0:
            return None
        cand_masks.append(m)

    # process g-vertices: most-constrained first, then by connectivity to mapped
    order = sorted(range(n), key=lambda v: (cand_masks[v].bit_count(), v))
    ordered = []
    placed = 0
    remaining = set(order)
    while remaining:
        best = None
        for v in sorted(remaining):
            conn = sum(1 for u in g.neighbors(v) if u not in remaining)
            key = (-conn, cand_masks[v].bit_count(), v)
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        ordered.append(v)
        remaining.discard(v)

    mapping = [-1] * n
    used = 0

    def backtrack(k: int) -> bool:
        nonlocal used
        if k == n:
            return True
        v = ordered[k]
        cand = cand_masks[v] & ~used
        # restrict by already-mapped neighbors/non-neighbors
        for u in ordered[:k]:
            mu = mapping[u]
            if g.has_edge(v, u):
                cand &= h.adj[mu]
            else:
                cand &= ~h.adj[mu]
            if not cand:
                return False
        for w in _bits(cand):
            mapping[v] = w
            used |= 1 << w
            if backtrack(k + 1):
                return True
            used &= ~(1 << w)
            mapping[v] = -1
        return False

    if not backtrack(0):
        return None
    witness = IsomorphismWitness(tuple(mapping))
    assert _witness_valid(g, h, witness)
    return witness


def _witness_valid(g: Graph, h: Graph, w: IsomorphismWitness) -> bool:
    m = w.mapping
    if sorted(m) != list(range(g.n)):
        return False
    return all(
        g.has_edge(i, j) == h.has_edge(m[i], m[j])
        for i in range(g.n)
        for j in range(i + 1, g.n)
    )


def is_self_complementary(g: Graph) -> bool:
    """True iff g is isomorphic to its complement."""
    return find_isomorphism(g, complement(g)) is not None


# ---------------------------------------------------------------------------
# perfection


@dataclass(frozen=True)
class PerfectnessReport:
    is_perfect: bool
    witness: Optional[tuple]  # vertex set of an induced odd hole/antihole
    witness_kind: Optional[str]  # "odd-hole" | "odd-antihole"


def _find_induced_odd_hole(g: Graph) -> Optional[tuple]:
    """Vertices of an induced odd cycle of length >= 5, or None.

    DFS over induced paths anchored at their minimum vertex v0; the second
    path vertex is kept below the closing vertex to skip mirror images.
    ``ban`` collects path vertices and neighbors of path[1..k-1], so any
    extension keeps the path induced; v0's neighborhood is tracked apart
    because only the closing vertex may touch it.
    """
    n = g.n
    adj = g.adj
    for v0 in range(n):
        above = ~((1 << (v0 + 1)) - 1)  # vertices strictly greater than v0
        n_v0 = adj[v0]

        def dfs(path, ban):
            last = path[-1]
            length = len(path)
            ext = adj[last] & above & ~ban
            # closing candidates: adjacent to both last and v0
            if length >= 4 and (length + 1) % 2 == 1:
                for w in _bits(ext & n_v0):
                    if w > path[1]:
                        return tuple(path + [w])
            for w in _bits(ext & ~n_v0):
                # last becomes an interior vertex: its neighborhood is now off limits
                r = dfs(path + [w], ban | (1 << w) | adj[last])
                if r:
                    return r
            return None

        for v1 in _bits(n_v0 & above):
            r = dfs([v0, v1], (1 << v0) | (1 << v1))
            if r:
                return r
    return None


def is_perfect(g: Graph, cap: int = DEFAULT_PERFECT_CAP) -> PerfectnessReport:
    """Exhaustive induced odd-hole/antihole search in g and its complement."""
    if g.n > cap:
        raise ResourceLimitError(
            f"perfection test capped at {cap} vertices (got {g.n})",
            limit=cap,
            requested=g.n,
        )
    hole = _find_induced_odd_hole(g)
    if hole is not None:
        return PerfectnessReport(False, tuple(sorted(hole)), "odd-hole")
    anti = _find_induced_odd_hole(complement(g))
    if anti is not None:
        return PerfectnessReport(False, tuple(sorted(anti)), "odd-antihole")
    return PerfectnessReport(True, None, None)
