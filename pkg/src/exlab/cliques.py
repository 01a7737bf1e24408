"""Clique enumeration and exact maximum-weight clique search.

Enumeration is pivoted Bron-Kerbosch on bitmasks.  The weighted search
runs branch-and-bound twice: a value phase that establishes the exact
maximum, and a completion phase that rebuilds the lexicographically
smallest optimal clique through decision queries, so certificates are
deterministic regardless of search order.

Rational weights are rescaled to a common denominator and searched with
int64 arithmetic in a numba kernel; weights with an irrational sqrt(2)
part, or graphs too large for the kernel, fall back to an equivalent
pure-Python search over exact field elements.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .graphs import Clique, Graph, complement, _bits
from .scalars import ScalarQ2

DEFAULT_CLIQUE_CAP = 1 << 20
_KERNEL_MAX_VERTICES = 1024
_INT64_BUDGET = 1 << 62


# ---------------------------------------------------------------------------
# Bron-Kerbosch enumeration


def enumerate_maximal_cliques(g: Graph, cap: int = DEFAULT_CLIQUE_CAP):
    """All maximal cliques, each exactly once, lexicographically sorted."""
    out = []
    adj = g.adj

    def bk(r, p, x):
        if not p and not x:
            out.append(r)
            if len(out) > cap:
                raise ResourceLimitError(
                    f"more than {cap} maximal cliques", limit=cap
                )
            return
        # pivot: maximize |P & N(u)|, ties to the smallest vertex
        best_u, best_c = -1, -1
        for u in _bits(p | x):
            c = (p & adj[u]).bit_count()
            if c > best_c:
                best_u, best_c = u, c
        for v in _bits(p & ~adj[best_u]):
            bv = 1 << v
            bk(r | bv, p & adj[v], x & adj[v])
            p &= ~bv
            x |= bv

    if g.n:
        bk(0, (1 << g.n) - 1, 0)
    cliques = sorted(tuple(_bits(m)) for m in out)
    return [Clique(c) for c in cliques]


# ---------------------------------------------------------------------------
# weight preparation


def _as_scalars(weights, n):
    if len(weights) != n:
        raise InvalidArgumentError(f"need {n} weights, got {len(weights)}")
    ws = [ScalarQ2.coerce(w) for w in weights]
    for i, w in enumerate(ws):
        if w.sign() < 0:
            raise InvalidArgumentError(f"negative weight at vertex {i}")
    return ws


def _int_scale(ws):
    """Common-denominator int64 rescaling, or None if not representable."""
    if any(w.b != 0 for w in ws):
        return None
    den = 1
    for w in ws:
        den = den * w.a.denominator // gcd(den, w.a.denominator)
    scaled = [int(w.a * den) for w in ws]
    if sum(scaled) >= _INT64_BUDGET:
        return None
    return scaled, den


# ---------------------------------------------------------------------------
# numba kernel (compiled lazily on first use)

_kernel = None


def _get_kernel():
    global _kernel
    if _kernel is None:
        from numba import njit

        @njit(cache=True)
        def search(adj, wts, words, cand0, curw0, target, mode, best_in):
            """Branch and bound over bitset rows.

            mode 0: return (best_weight, best_clique_len, clique...) maximizing.
            mode 1: stop at the first clique with weight >= target.
            Vertices are assumed relabeled so index order is descending weight.
            """
            n = adj.shape[0]
            one = np.uint64(1)
            cand = np.zeros((n + 2, words), dtype=np.uint64)
            rem = np.zeros(n + 2, dtype=np.int64)
            curw = np.zeros(n + 2, dtype=np.int64)
            path = np.zeros(n + 2, dtype=np.int64)
            out = np.full(n + 2, -1, dtype=np.int64)
            best = best_in
            best_len = 0
            s = np.int64(0)
            for wd in range(words):
                cand[0, wd] = cand0[wd]
                m = cand0[wd]
                base = wd * 64
                while m:
                    b = m & (~m + one)
                    idx = base
                    bb = b
                    while bb > one:
                        bb >>= one
                        idx += 1
                    s += wts[idx]
                    m ^= b
            rem[0] = s
            curw[0] = curw0
            level = 0
            while level >= 0:
                if mode == 0:
                    if curw[level] + rem[level] <= best:
                        level -= 1
                        continue
                else:
                    if curw[level] + rem[level] < target:
                        level -= 1
                        continue
                v = -1
                for wd in range(words):
                    m = cand[level, wd]
                    if m:
                        b = m & (~m + one)
                        idx = wd * 64
                        bb = b
                        while bb > one:
                            bb >>= one
                            idx += 1
                        v = idx
                        break
                if v < 0:
                    level -= 1
                    continue
                cand[level, v >> 6] ^= one << np.uint64(v & 63)
                rem[level] -= wts[v]
                w2 = curw[level] + wts[v]
                child_empty = True
                cs = np.int64(0)
                for wd in range(words):
                    c = cand[level, wd] & adj[v, wd]
                    cand[level + 1, wd] = c
                    if c:
                        child_empty = False
                        m = c
                        base = wd * 64
                        while m:
                            b = m & (~m + one)
                            idx = base
                            bb = b
                            while bb > one:
                                bb >>= one
                                idx += 1
                            cs += wts[idx]
                            m ^= b
                path[level + 1] = v
                if mode == 1 and w2 >= target:
                    out[0] = w2
                    out[1] = level + 1
                    for i in range(1, level + 1):
                        out[i + 1] = path[i]
                    out[level + 2] = v
                    return out
                if child_empty:
                    if mode == 0 and w2 > best:
                        best = w2
                        best_len = level + 1
                        out[1] = best_len
                        for i in range(1, level + 1):
                            out[i + 1] = path[i]
                        out[level + 2] = v
                else:
                    level += 1
                    curw[level] = w2
                    rem[level] = cs
            if mode == 0:
                out[0] = best
                return out
            out[0] = -1
            return out

        _kernel = search
    return _kernel


class _IntEngine:
    """int64 weighted clique search on a relabeled bitset graph."""

    def __init__(self, g: Graph, scaled):
        n = g.n
        order = sorted(range(n), key=lambda v: (-scaled[v], v))
        rank = [0] * n
        for r, v in enumerate(order):
            rank[v] = r
        self.order = order
        self.rank = rank
        self.n = n
        self.words = max(1, (n + 63) // 64)
        self.w_orig = scaled
        adj = np.zeros((n, self.words), dtype=np.uint64)
        for v in range(n):
            m = g.adj[v]
            nm = 0
            while m:
                b = m & -m
                nm |= 1 << rank[b.bit_length() - 1]
                m ^= b
            for wd in range(self.words):
                adj[rank[v], wd] = (nm >> (64 * wd)) & 0xFFFFFFFFFFFFFFFF
        self.adj = adj
        self.w = np.array([scaled[order[r]] for r in range(n)], dtype=np.int64)

    def _cand_array(self, mask: int):
        c = np.zeros(self.words, dtype=np.uint64)
        for wd in range(self.words):
            c[wd] = (mask >> (64 * wd)) & 0xFFFFFFFFFFFFFFFF
        return c

    def _to_ranked(self, mask: int) -> int:
        nm = 0
        while mask:
            b = mask & -mask
            nm |= 1 << self.rank[b.bit_length() - 1]
            mask ^= b
        return nm

    def max_weight(self, mask: int) -> int:
        kern = _get_kernel()
        out = kern(self.adj, self.w, self.words, self._cand_array(self._to_ranked(mask)),
                   np.int64(0), np.int64(0), 0, np.int64(0))
        return int(out[0])

    def find_ge(self, mask: int, base_weight: int, target: int):
        """Original-label clique completing base_weight to >= target, or None."""
        if base_weight >= target:
            return []
        kern = _get_kernel()
        out = kern(self.adj, self.w, self.words, self._cand_array(self._to_ranked(mask)),
                   np.int64(base_weight), np.int64(target), 1, np.int64(0))
        if out[0] < 0:
            return None
        ln = int(out[1])
        return [self.order[int(out[i + 1])] for i in range(1, ln + 1)]


class _FieldEngine:
    """Pure-Python exact search over ScalarQ2 weights (fallback path)."""

    def __init__(self, g: Graph, ws):
        self.g = g
        self.ws = ws
        self.n = g.n
        self.order = sorted(range(g.n), key=lambda v: (float(ws[v]), v), reverse=True)

    def _candidates(self, mask):
        c = [v for v in self.order if (mask >> v) & 1]
        return c

    def max_weight(self, mask):
        ws, adj = self.ws, self.g.adj
        best = [ScalarQ2(0)]

        def expand(cand_mask, cur):
            cand = self._candidates(cand_mask)
            rem = cur
            for v in cand:
                rem = rem + ws[v]
            for v in cand:
                if rem <= best[0]:
                    return
                w2 = cur + ws[v]
                sub = cand_mask & adj[v]
                if not sub:
                    if w2 > best[0]:
                        best[0] = w2
                else:
                    expand(sub, w2)
                cand_mask &= ~(1 << v)
                rem = rem - ws[v]

        expand(mask, ScalarQ2(0))
        return best[0]

    def find_ge(self, mask, base_weight, target):
        ws, adj = self.ws, self.g.adj
        if base_weight >= target:
            return []

        def expand(cand_mask, cur, acc):
            cand = self._candidates(cand_mask)
            rem = cur
            for v in cand:
                rem = rem + ws[v]
            if rem < target:
                return None
            for v in cand:
                w2 = cur + ws[v]
                if w2 >= target:
                    return acc + [v]
                sub = cand_mask & adj[v]
                if sub:
                    r = expand(sub, w2, acc + [v])
                    if r is not None:
                        return r
                cand_mask &= ~(1 << v)
            return None

        return expand(mask, base_weight, [])


def _make_engine(g: Graph, ws):
    scaled = _int_scale(ws)
    if scaled is not None and g.n <= _KERNEL_MAX_VERTICES:
        ints, den = scaled
        return _IntEngine(g, ints), ("int", den)
    return _FieldEngine(g, ws), ("field", None)


def max_weighted_clique(g: Graph, weights):
    """Maximum-weight clique with exact weight; ties resolved to the
    lexicographically smallest sorted vertex list."""
    ws = _as_scalars(weights, g.n)
    if g.n == 0:
        return Clique(()), ScalarQ2(0)
    engine, (kind, den) = _make_engine(g, ws)

    positive = 0
    for v in range(g.n):
        if ws[v].sign() > 0:
            positive |= 1 << v
    if kind == "int":
        wmax = engine.max_weight(positive)
        best = ScalarQ2(Fraction(wmax, den))
        target = wmax
        base = lambda acc: sum(engine.w_orig[v] for v in acc)
    else:
        best = engine.max_weight(positive)
        target = best
        base = lambda acc: sum((ws[v] for v in acc), ScalarQ2(0))

    if best.sign() == 0:
        return Clique(()), ScalarQ2(0)

    # lexicographically smallest optimum via decision completions,
    # zero-weight vertices included
    chosen = []
    cand = (1 << g.n) - 1
    while True:
        cw = base(chosen)
        if not (cw < target):
            break
        progressed = False
        for v in _bits(cand):
            sub = cand & g.adj[v]
            r = engine.find_ge(sub, cw + (engine.w_orig[v] if kind == "int" else ws[v]),
                               target)
            if r is not None:
                chosen.append(v)
                cand = sub
                progressed = True
                break
            cand &= ~(1 << v)
        if not progressed:  # pragma: no cover - value phase guarantees a witness
            raise AssertionError("optimal clique vanished during completion")
    return Clique.of(g, chosen), best


def max_weight_independent_set(g: Graph, weights):
    """Maximum-weight independent set = maximum-weight clique of the complement."""
    clique, w = max_weighted_clique(complement(g), weights)
    return tuple(clique.vertices), w


def extend_to_maximal(g: Graph, vertices) -> tuple:
    """Greedily extend a clique to a maximal one (ascending vertex order)."""
    cur = list(vertices)
    mask = (1 << g.n) - 1
    for v in cur:
        mask &= g.adj[v]
    for v in range(g.n):
        if (mask >> v) & 1:
            cur.append(v)
            mask &= g.adj[v]
    return tuple(sorted(cur))


# ---------------------------------------------------------------------------
# independent sets


def enumerate_independent_sets(g: Graph, cap: int = DEFAULT_CLIQUE_CAP):
    """All independent sets (including the empty set) as sorted tuples."""
    out = []
    adj = g.adj

    def rec(start, acc, banned):
        out.append(tuple(acc))
        if len(out) > cap:
            raise ResourceLimitError(
                f"more than {cap} independent sets", limit=cap
            )
        for v in range(start, g.n):
            if (banned >> v) & 1:
                continue
            acc.append(v)
            rec(v + 1, acc, banned | adj[v] | (1 << v))
            acc.pop()

    rec(0, [], 0)
    return out
