"""Weighted Lovasz theta function by semidefinite programming.

The program solved is

    maximize  <C, X>,  C_ij = sqrt(w_i w_j)
    s.t.      tr(X) = 1,  X_ij = 0 for every edge (i,j),  X PSD.

A primal-dual path-following interior-point method with Nesterov-Todd
scaling and a Mehrotra-style adaptive centering parameter does the work
on dense matrices.  The theta program always has a strictly feasible
primal start (the scaled identity) and dual start (a shifted identity),
so the iteration stays exactly feasible and only has to close the gap.

Membership of an assignment p in the theta body of G is decided through
theta(complement(G), p) <= 1 with an honest BOUNDARY band around the
threshold; witnesses for OUT verdicts are extracted from the optimal
primal Gram factorization and verified before they are returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .assignments import ProbabilityAssignment, validate_assignment
from .errors import (
    ExtractionFailure,
    InvalidArgumentError,
    PreconditionViolation,
    ResourceLimitError,
    SolverFailure,
)
from .graphs import Graph, complement
from .scalars import ScalarQ2

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 200
DEFAULT_DIM_CAP = 1200
BAND_FACTOR = 10.0


@dataclass(frozen=True)
class SdpProblem:
    """max <objective, X> s.t. <A_k, X> = b_k, X PSD (dense symmetric data)."""

    dimension: int
    objective: np.ndarray
    constraints: tuple  # ((matrix, rhs), ...)


@dataclass
class SdpSolution:
    X: np.ndarray
    primal: float
    dual: float
    gap: float
    iterations: int
    residual: float


@dataclass
class ThetaResult:
    value: float
    primal_matrix: np.ndarray
    dual_value: float
    gap: float
    iterations: int


@dataclass(frozen=True)
class MembershipVerdict:
    status: str  # "IN" | "OUT" | "BOUNDARY"
    theta_of_complement: float
    margin: float  # theta - 1
    band: float
    theta: ThetaResult

    @property
    def is_in(self):
        return self.status == "IN"


def _max_step(S: np.ndarray, dS: np.ndarray) -> float:
    """Largest step a <= 1 with S + a*dS still PSD."""
    L = np.linalg.cholesky(S)
    Li = np.linalg.inv(L)
    M = Li @ dS @ Li.T
    lmin = float(np.linalg.eigvalsh((M + M.T) / 2)[0])
    if lmin >= -1e-14:
        return 1.0
    return min(1.0, -1.0 / lmin)


def _nt_scaling(X: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """W with W Z W = X (the Nesterov-Todd scaling point)."""
    Lx = np.linalg.cholesky(X)
    A = Lx.T @ Z @ Lx
    d, Q = np.linalg.eigh((A + A.T) / 2)
    d = np.maximum(d, 1e-300)
    W = Lx @ (Q * (1.0 / np.sqrt(d))) @ Q.T @ Lx.T
    return (W + W.T) / 2


def _ipm(C, Aop, Astar, schur, b, X, y, Z, tol, max_iter):
    """Shared interior-point loop; starts must be strictly PSD."""
    n = C.shape[0]
    m = len(b)
    iters = 0
    for it in range(max_iter):
        iters = it
        mu = float(np.sum(X * Z)) / n
        pobj = float(np.sum(C * X))
        dobj = float(b @ y)
        gap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        rp = b - Aop(X)
        Rd = C - Astar(y) + Z
        resid = max(float(np.linalg.norm(rp)), float(np.linalg.norm(Rd)))
        if gap <= tol and resid <= tol and mu <= tol:
            return SdpSolution(X, pobj, dobj, gap, iters, resid)
        try:
            W = _nt_scaling(X, Z)
            M = schur(W)
            WRdW = W @ Rd @ W

            def direction(Rc):
                rhs = Aop(Rc) + Aop(WRdW) - rp
                dy = np.linalg.solve(M, rhs)
                dZ = Astar(dy) - Rd
                dX = Rc - W @ dZ @ W
                return (dX + dX.T) / 2, dy, dZ

            dXa, dya, dZa = direction(-X)
            ap = _max_step(X, dXa)
            ad = _max_step(Z, dZa)
            mu_aff = float(np.sum((X + ap * dXa) * (Z + ad * dZa))) / n
            sigma = min(1.0, max((mu_aff / mu) ** 3, 1e-10))
            Zi = np.linalg.inv(Z)
            Rc = sigma * mu * (Zi + Zi.T) / 2 - X
            dX, dy, dZ = direction(Rc)
            ap = min(1.0, 0.98 * _max_step(X, dX))
            ad = min(1.0, 0.98 * _max_step(Z, dZ))
        except np.linalg.LinAlgError as exc:
            raise SolverFailure(
                f"linear algebra breakdown at iteration {it}: {exc}",
                {"gap": gap, "mu": mu, "residual": resid, "iterations": it},
            )
        X = X + ap * dX
        X = (X + X.T) / 2
        y = y + ad * dy
        Z = Z + ad * dZ
        Z = (Z + Z.T) / 2
    mu = float(np.sum(X * Z)) / n
    pobj = float(np.sum(C * X))
    dobj = float(b @ y)
    gap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
    rp = b - Aop(X)
    Rd = C - Astar(y) + Z
    resid = max(float(np.linalg.norm(rp)), float(np.linalg.norm(Rd)))
    raise SolverFailure(
        f"no convergence in {max_iter} iterations",
        {"gap": gap, "mu": mu, "residual": resid, "iterations": max_iter},
    )


def solve_sdp(problem: SdpProblem, tol: float = DEFAULT_TOL,
              max_iter: int = DEFAULT_MAX_ITER,
              dim_cap: int = DEFAULT_DIM_CAP) -> SdpSolution:
    """General dense equality-constrained SDP solve (see :class:`SdpProblem`).

    The constraint set must admit a strictly feasible point; the solver
    starts from shifted identities and recovers feasibility through the
    residual terms of the Newton system.
    """
    n = problem.dimension
    if n > dim_cap:
        raise ResourceLimitError(
            f"SDP dimension {n} over cap {dim_cap}", limit=dim_cap, requested=n
        )
    if n == 0:
        return SdpSolution(np.zeros((0, 0)), 0.0, 0.0, 0.0, 0, 0.0)
    C = np.asarray(problem.objective, dtype=float)
    mats = [np.asarray(A, dtype=float) for A, _ in problem.constraints]
    b = np.array([float(r) for _, r in problem.constraints])
    m = len(mats)
    if m == 0:
        raise InvalidArgumentError("constraint list must be nonempty")

    def Aop(Xm):
        return np.array([float(np.sum(A * Xm)) for A in mats])

    def Astar(y):
        out = np.zeros((n, n))
        for yk, A in zip(y, mats):
            out += yk * A
        return out

    def schur(W):
        WAW = [W @ A @ W for A in mats]
        M = np.empty((m, m))
        for k in range(m):
            for l in range(k, m):
                M[k, l] = M[l, k] = float(np.sum(mats[k] * WAW[l]))
        return M

    X = np.eye(n)
    scale = float(np.linalg.norm(C)) + 1.0
    Z = scale * np.eye(n)
    y = np.zeros(m)
    return _ipm(C, Aop, Astar, schur, b, X, y, Z, tol, max_iter)


def _theta_ipm(n, edges, w, tol, max_iter):
    """Theta program with the structured (vectorized) Schur assembly."""
    s = np.sqrt(np.asarray(w, dtype=float))
    C = np.outer(s, s)
    ei = np.array([e[0] for e in edges], dtype=int)
    ej = np.array([e[1] for e in edges], dtype=int)
    m = 1 + len(edges)
    b = np.zeros(m)
    b[0] = 1.0

    def Aop(M):
        v = np.empty(m)
        v[0] = float(np.trace(M))
        if len(edges):
            v[1:] = 2.0 * M[ei, ej]
        return v

    def Astar(y):
        M = y[0] * np.eye(n)
        if len(edges):
            M[ei, ej] += y[1:]
            M[ej, ei] += y[1:]
        return M

    def schur(W):
        M = np.empty((m, m))
        W2 = W @ W
        M[0, 0] = float(np.sum(W * W))
        if len(edges):
            M[0, 1:] = 2.0 * W2[ei, ej]
            M[1:, 0] = M[0, 1:]
            M[1:, 1:] = 2.0 * (
                W[np.ix_(ei, ei)] * W[np.ix_(ej, ej)]
                + W[np.ix_(ei, ej)] * W[np.ix_(ej, ei)]
            )
        return M

    X = np.eye(n) / n
    lam = float(np.linalg.eigvalsh(C)[-1]) + 1.0
    y = np.zeros(m)
    y[0] = lam
    Z = lam * np.eye(n) - C
    return _ipm(C, Aop, Astar, schur, b, X, y, Z, tol, max_iter)


def _weight_floats(w):
    out = []
    for v in w:
        if isinstance(v, ScalarQ2):
            out.append(0.0 if v.sign() == 0 else float(v))
        elif isinstance(v, (int, Fraction)):
            out.append(float(v))
        else:
            out.append(float(v))
    return out


def lovasz_theta(
    g: Graph,
    w,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> ThetaResult:
    """theta(g, w): SDP value upper-bounding the weighted independence number.

    Zero-weight vertices are deleted before solving; their rows in the
    returned primal matrix are zero.
    """
    if len(w) != g.n:
        raise InvalidArgumentError(f"need {g.n} weights, got {len(w)}")
    wf = _weight_floats(w)
    if any(v < 0 for v in wf):
        raise InvalidArgumentError("weights must be nonnegative")
    if g.n > dim_cap:
        raise ResourceLimitError(
            f"graph order {g.n} over SDP cap {dim_cap}", limit=dim_cap, requested=g.n
        )
    keep = [i for i in range(g.n) if wf[i] > 0.0]
    if not keep:
        return ThetaResult(0.0, np.zeros((g.n, g.n)), 0.0, 0.0, 0)
    pos = {v: i for i, v in enumerate(keep)}
    edges = [
        (pos[i], pos[j])
        for (i, j) in g.edges()
        if i in pos and j in pos
    ]
    sol = _theta_ipm(len(keep), edges, [wf[i] for i in keep], tol, max_iter)
    X = np.zeros((g.n, g.n))
    X[np.ix_(keep, keep)] = sol.X
    return ThetaResult(sol.primal, X, sol.dual, sol.gap, sol.iterations)


# ---------------------------------------------------------------------------
# theta-body membership


def in_th(
    pa: ProbabilityAssignment,
    tol: float = DEFAULT_TOL,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> MembershipVerdict:
    """p is in the theta body of G iff theta(complement(G), p) <= 1.

    Within ``band = 10*tol`` of the threshold the verdict is BOUNDARY:
    floating point cannot honestly resolve those points.
    """
    res = lovasz_theta(complement(pa.graph), pa.p, tol=tol, dim_cap=dim_cap)
    band = BAND_FACTOR * tol
    margin = res.value - 1.0
    if res.value <= 1.0 - band:
        status = "IN"
    elif res.value >= 1.0 + band:
        status = "OUT"
    else:
        status = "BOUNDARY"
    return MembershipVerdict(status, res.value, margin, band, res)


@dataclass
class WitnessExtraction:
    """Verified witness q against an assignment outside the theta body."""

    q: ProbabilityAssignment  # assignment on complement(G), inside its theta body
    inner_product: float  # sum_i p_i q_i, verified > 1 + band
    theta_of_witness: float  # theta(G, q), verified <= 1 - band
    scaled_by: float


def extract_witness(
    pa: ProbabilityAssignment,
    tol: float = DEFAULT_TOL,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> WitnessExtraction:
    """Gram-factor the optimal primal and read off a violating witness.

    Requires a prior OUT verdict.  The handle is the normalized
    sqrt(p)-combination of the Gram vectors; the candidate q_i are its
    squared overlaps with the unit Gram directions.  q is scaled safely
    inside the theta body and both post-conditions are re-verified with
    fresh solves before anything is returned.
    """
    band = BAND_FACTOR * tol
    verdict = in_th(pa, tol=tol, dim_cap=dim_cap)
    if verdict.status != "OUT":
        raise PreconditionViolation(
            f"witness extraction requires an OUT verdict, got {verdict.status}"
        )
    gbar = complement(pa.graph)
    X = verdict.theta.primal_matrix
    vals, vecs = np.linalg.eigh((X + X.T) / 2)
    vals = np.maximum(vals, 0.0)
    V = (vecs * np.sqrt(vals)).T  # column i is the Gram vector of vertex i
    p = np.array(pa.floats())
    handle = V @ np.sqrt(p)
    hn = float(np.linalg.norm(handle))
    if hn <= 0:
        raise ExtractionFailure("degenerate handle", {"norm": hn})
    handle /= hn
    norms = np.linalg.norm(V, axis=0)
    q = np.zeros(pa.graph.n)
    nz = norms > 1e-12
    q[nz] = (V[:, nz].T @ handle) ** 2 / norms[nz] ** 2
    q = np.clip(q, 0.0, 1.0)

    theta_q = lovasz_theta(pa.graph, q, tol=tol, dim_cap=dim_cap).value
    scale = 1.0
    if theta_q > 1.0 - 2 * band:
        scale = (1.0 - 2 * band) / theta_q
        q = q * scale
        theta_q = lovasz_theta(pa.graph, q, tol=tol, dim_cap=dim_cap).value
    inner = float(p @ q)

    diagnostics = {
        "theta_of_witness": theta_q,
        "inner_product": inner,
        "scaled_by": scale,
        "band": band,
    }
    if not theta_q <= 1.0 - band:
        raise ExtractionFailure("witness failed theta-body membership", diagnostics)
    if not inner > 1.0 + band:
        raise ExtractionFailure("witness failed violation bound", diagnostics)
    q_exact = [ScalarQ2(Fraction(float(v))) for v in q]
    q_pa = validate_assignment(gbar, q_exact)
    return WitnessExtraction(q_pa, inner, theta_q, scale)


# ---------------------------------------------------------------------------
# quantum certificate verification


@dataclass(frozen=True)
class QuantumCertificate:
    """Unit handle psi plus one unit vector per vertex, orthogonal on edges."""

    dimension: int
    psi: tuple
    vectors: tuple  # one tuple per vertex

    @staticmethod
    def make(psi, vectors) -> "QuantumCertificate":
        psi = tuple(float(x) for x in psi)
        vectors = tuple(tuple(float(x) for x in v) for v in vectors)
        return QuantumCertificate(len(psi), psi, vectors)


@dataclass
class CertificateReport:
    ok: bool
    violations: list


def verify_quantum_certificate(
    g: Graph, p, cert: QuantumCertificate, tol: float = 1e-7
) -> CertificateReport:
    """Check norms, edge orthogonality, and |<v_i, psi>|^2 = p_i, each to tol."""
    if len(cert.vectors) != g.n:
        raise InvalidArgumentError(
            f"certificate has {len(cert.vectors)} vectors for {g.n} vertices"
        )
    psi = np.array(cert.psi, dtype=float)
    if any(len(v) != cert.dimension for v in cert.vectors) or len(psi) != cert.dimension:
        raise InvalidArgumentError("inconsistent certificate dimensions")
    V = np.array(cert.vectors, dtype=float)
    pf = _weight_floats(p)
    if len(pf) != g.n:
        raise InvalidArgumentError(f"need {g.n} probabilities, got {len(pf)}")
    violations = []
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        violations.append(("handle-norm", float(np.linalg.norm(psi))))
    for i in range(g.n):
        ni = float(np.linalg.norm(V[i]))
        if abs(ni - 1.0) > tol:
            violations.append(("vector-norm", i, ni))
    for i, j in g.edges():
        ip = float(V[i] @ V[j])
        if abs(ip) > tol:
            violations.append(("edge-orthogonality", (i, j), ip))
    for i in range(g.n):
        ov = float(V[i] @ psi) ** 2
        if abs(ov - pf[i]) > tol:
            violations.append(("overlap", i, ov, pf[i]))
    return CertificateReport(not violations, violations)
