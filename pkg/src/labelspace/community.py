"""Community detection on label co-occurrence graphs.

All five detectors respect edge weights and return a :class:`CommunityAssignment`
whose communities never span two connected components. Randomised methods
take an explicit seed; deterministic ones break ties toward the lowest
node/community index.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, UndefinedQualityError
from .label_graph import LabelGraph

logger = logging.getLogger(__name__)

__all__ = [
    "CommunityAssignment",
    "modularity",
    "map_equation",
    "fast_greedy",
    "leading_eigenvector",
    "label_propagation",
    "walktrap",
    "infomap",
    "METHODS",
    "detect",
]

# absolute slack for floating comparisons of objective values
_EPS = 1e-12

POWER_TOL = 1e-10
POWER_MAX_ITER = 10_000
_POWER_START_SEED = 20_170_601
LABEL_PROPAGATION_MAX_SWEEPS = 100
WALKTRAP_STEPS = 4


@dataclass(frozen=True, eq=False)
class CommunityAssignment:
    """Community index per node, numbered 0..n_communities-1 by lowest member."""

    community_of: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.community_of)
        mapping: dict = {}
        out = np.empty(len(raw), dtype=int)
        for i, c in enumerate(raw.tolist()):
            out[i] = mapping.setdefault(c, len(mapping))
        out.setflags(write=False)
        object.__setattr__(self, "community_of", out)

    @property
    def n_communities(self) -> int:
        return int(self.community_of.max()) + 1 if len(self.community_of) else 0

    @property
    def n_nodes(self) -> int:
        return len(self.community_of)

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_communities)]
        for node, c in enumerate(self.community_of.tolist()):
            out[c].append(node)
        return out

    @classmethod
    def from_blocks(cls, blocks, n_nodes: int) -> "CommunityAssignment":
        member = np.full(n_nodes, -1, dtype=int)
        for c, block in enumerate(blocks):
            for node in block:
                member[node] = c
        if np.any(member < 0):
            raise ValueError("blocks do not cover every node")
        return cls(member)

    def __eq__(self, other):
        if not isinstance(other, CommunityAssignment):
            return NotImplemented
        return np.array_equal(self.community_of, other.community_of)

    __hash__ = None

    def to_text(self) -> str:
        return "".join(f"{i} {c}\n" for i, c in enumerate(self.community_of.tolist()))


def _require_edges(g: LabelGraph) -> float:
    W = g.total_weight
    if W <= 0:
        raise UndefinedQualityError("graph has no edges; community quality is undefined")
    return W


def modularity(g: LabelGraph, a: CommunityAssignment) -> float:
    """Newman modularity: sum over communities of w_c/W - (s_c/2W)^2."""
    W = _require_edges(g)
    member = np.asarray(a.community_of)
    if len(member) != g.n_nodes:
        raise ValueError("assignment does not cover the graph's nodes")
    A = g.adjacency
    deg = g.degrees
    Q = 0.0
    for c in range(a.n_communities):
        idx = np.nonzero(member == c)[0]
        w_c = A[np.ix_(idx, idx)].sum() / 2.0
        s_c = deg[idx].sum()
        Q += w_c / W - (s_c / (2.0 * W)) ** 2
    return float(Q)


def _plogp(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def map_equation(g: LabelGraph, a: CommunityAssignment) -> float:
    """Two-level map equation description length (bits) with undirected flow."""
    W = _require_edges(g)
    member = np.asarray(a.community_of)
    A = g.adjacency / (2.0 * W)
    p = A.sum(axis=1)
    M = np.zeros((g.n_nodes, a.n_communities))
    M[np.arange(g.n_nodes), member] = 1.0
    p_mod = M.T @ p
    exit_ = p_mod - np.diag(M.T @ A @ M)
    return float(
        _plogp(exit_.sum())
        - 2.0 * _plogp(exit_).sum()
        - _plogp(p).sum()
        + _plogp(exit_ + p_mod).sum()
    )


def _split_components(g: LabelGraph) -> list[np.ndarray]:
    comp = g.connected_components()
    return [np.nonzero(comp == c)[0] for c in range(comp.max() + 1)]


# --------------------------------------------------------------------------
# fast greedy (Clauset-Newman-Moore agglomeration)

def fast_greedy(g: LabelGraph) -> CommunityAssignment:
    """Merge the adjacent pair with the largest modularity gain until no
    adjacent pairs remain, then cut the dendrogram at its modularity peak."""
    W = _require_edges(g)
    n = g.n_nodes
    m2 = 2.0 * W
    A = g.adjacency
    a = g.degrees / m2
    e: dict[int, dict[int, float]] = {i: {} for i in range(n)}
    for i, j in g.edges:
        e[i][j] = e[j][i] = A[i, j] / m2

    member = np.arange(n)
    Q = float(-(a ** 2).sum())
    best_Q, best_member = Q, member.copy()
    while True:
        best = None
        for i in sorted(e):
            for j in sorted(e[i]):
                if j <= i:
                    continue
                dq = 2.0 * (e[i][j] - a[i] * a[j])
                if best is None or dq > best[0] + _EPS:
                    best = (dq, i, j)
        if best is None:
            break
        dq, i, j = best
        for k, v in e.pop(j).items():
            if k == i:
                continue
            del e[k][j]
            e[i][k] = e[i].get(k, 0.0) + v
            e[k][i] = e[i][k]
        del e[i][j]
        a[i] += a[j]
        a[j] = 0.0
        member[member == j] = i
        Q += dq
        if Q > best_Q + _EPS:
            best_Q, best_member = Q, member.copy()
    return CommunityAssignment(best_member)


# --------------------------------------------------------------------------
# leading eigenvector (Newman spectral bisection)

def _leading_eigenpair(B: np.ndarray):
    """Power iteration on the shifted matrix.

    Rows of a generalised modularity matrix sum to zero, so the all-ones
    vector is always an eigenvector with eigenvalue 0; it is projected out
    at every step. A leading eigenvalue of 0 therefore shows up as <= 0.
    """
    n = B.shape[0]
    shift = float(np.abs(B).sum(axis=1).max())
    M = B + shift * np.eye(n)
    # a symmetric perturbation can be orthogonal to the leading eigenvector
    # (e.g. the centre node of a path), so use a fixed pseudo-random one
    x = np.ones(n) + 0.5 * np.random.default_rng(_POWER_START_SEED).standard_normal(n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    lam = float(x @ M @ x)
    for _ in range(POWER_MAX_ITER):
        y = M @ x
        y -= y.mean()
        norm = np.linalg.norm(y)
        if norm == 0:
            return -shift, x
        x = y / norm
        lam_new = float(x @ M @ x)
        if abs(lam_new - lam) < POWER_TOL:
            return lam_new - shift, x
        lam = lam_new
    raise ConvergenceError(
        f"power iteration did not converge in {POWER_MAX_ITER} iterations"
    )


def _refine_split(Bg: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Vertex-moving fine tuning of a two-way split (each vertex moves once
    per round, the best intermediate state is kept)."""
    s = s.copy()
    score = float(s @ Bg @ s)
    n = len(s)
    while True:
        trial = s.copy()
        cur = score
        moved = np.zeros(n, dtype=bool)
        best_score, best_state = score, None
        for _ in range(n):
            # flipping i changes s'Bs by -4 s_i sum_{j!=i} B_ij s_j
            field_ = Bg @ trial - np.diag(Bg) * trial
            gains = -4.0 * trial * field_
            gains[moved] = -np.inf
            i = int(np.argmax(gains))
            trial[i] = -trial[i]
            moved[i] = True
            cur += gains[i]
            if cur > best_score + _EPS:
                best_score, best_state = cur, trial.copy()
        if best_state is None:
            return s
        s, score = best_state, best_score


def leading_eigenvector(g: LabelGraph) -> CommunityAssignment:
    """Recursive bisection by the leading eigenvector of the generalised
    modularity matrix; a branch stops once no split raises modularity."""
    W = _require_edges(g)
    A = g.adjacency
    k = g.degrees
    B = A - np.outer(k, k) / (2.0 * W)

    groups = _split_components(g)
    final: list[np.ndarray] = []
    queue = [grp for grp in groups]
    while queue:
        grp = queue.pop(0)
        if len(grp) < 2 or k[grp].sum() == 0:
            final.append(grp)
            continue
        Bg = B[np.ix_(grp, grp)].copy()
        Bg -= np.diag(Bg.sum(axis=1))
        lam, v = _leading_eigenpair(Bg)
        if lam <= POWER_TOL:
            final.append(grp)
            continue
        s = np.where(v >= 0, 1.0, -1.0)
        s = _refine_split(Bg, s)
        gain = float(s @ Bg @ s) / (4.0 * W)
        if gain <= _EPS or np.all(s == s[0]):
            final.append(grp)
            continue
        left, right = grp[s > 0], grp[s < 0]
        before = _membership(final + [grp] + queue, g.n_nodes)
        after = _membership(final + [left, right] + queue, g.n_nodes)
        q_before = modularity(g, CommunityAssignment(before))
        q_after = modularity(g, CommunityAssignment(after))
        assert q_after > q_before, "accepted spectral split did not increase modularity"
        queue += [left, right]
    final.sort(key=lambda grp: int(grp.min()))
    return CommunityAssignment(_membership(final, g.n_nodes))


def _membership(groups, n: int) -> np.ndarray:
    member = np.empty(n, dtype=int)
    for c, grp in enumerate(groups):
        member[grp] = c
    return member


# --------------------------------------------------------------------------
# label propagation (Raghavan, Albert, Kumara)

def label_propagation(
    g: LabelGraph, seed: int = 0, max_sweeps: int = LABEL_PROPAGATION_MAX_SWEEPS
) -> CommunityAssignment:
    """Asynchronous label propagation in seeded random node order.

    Each node moves to a label of maximal total edge weight among its
    neighbours, keeping its own label whenever that label is already maximal.
    Ties between maximal labels go to the label of smallest volume (summed
    degree of its holders), then uniformly at random. Stops after a sweep with
    no changes, or after ``max_sweeps`` sweeps with a warning.
    """
    rng = np.random.default_rng(seed)
    n = g.n_nodes
    A = g.adjacency
    deg = g.degrees
    nbrs = [g.neighbors(i) for i in range(n)]
    labels = np.arange(n)
    volume = deg.copy()
    for _ in range(max_sweeps):
        changed = False
        for i in rng.permutation(n):
            if len(nbrs[i]) == 0:
                continue
            totals: dict[int, float] = {}
            for j in nbrs[i]:
                totals[labels[j]] = totals.get(labels[j], 0.0) + A[i, j]
            top = max(totals.values())
            tol = _EPS * max(1.0, top)
            dominant = sorted(c for c, w in totals.items() if w >= top - tol)
            if labels[i] in dominant:
                continue
            low = min(volume[c] for c in dominant)
            dominant = [c for c in dominant if volume[c] <= low + tol]
            new = dominant[rng.integers(len(dominant))]
            volume[labels[i]] -= deg[i]
            volume[new] += deg[i]
            labels[i] = new
            changed = True
        if not changed:
            break
    else:
        logger.warning(
            "label propagation hit the %d-sweep cap; accepting current labels", max_sweeps
        )
    return CommunityAssignment(labels)


# --------------------------------------------------------------------------
# walktrap (Pons-Latapy)

def walktrap(g: LabelGraph, t: int = WALKTRAP_STEPS) -> CommunityAssignment:
    """Ward-style agglomeration of adjacent communities by t-step random-walk
    distance; the dendrogram is cut where modularity peaks."""
    W = _require_edges(g)
    if t < 1:
        raise ValueError("walk length t must be positive")
    n = g.n_nodes
    A = g.adjacency
    deg_count = (A > 0).sum(axis=1)
    # each vertex gets a self-loop carrying its mean incident edge weight
    loops = np.where(deg_count > 0, A.sum(axis=1) / np.maximum(deg_count, 1), 1.0)
    Aw = A + np.diag(loops)
    d = Aw.sum(axis=1)
    P = Aw / d[:, None]
    Pt = np.linalg.matrix_power(P, t)
    inv_sqrt_d = 1.0 / np.sqrt(d)

    size = {i: 1 for i in range(n)}
    prob = {i: Pt[i] * inv_sqrt_d for i in range(n)}
    adj = {i: set(g.neighbors(i).tolist()) for i in range(n)}

    def delta_sigma(c1, c2):
        diff = prob[c1] - prob[c2]
        return float(size[c1] * size[c2] / (size[c1] + size[c2]) * (diff @ diff) / n)

    dist = {}
    for i in range(n):
        for j in adj[i]:
            if i < j:
                dist[(i, j)] = delta_sigma(i, j)

    member = np.arange(n)
    best_Q = modularity(g, CommunityAssignment(member))
    best_member = member.copy()
    while dist:
        (c1, c2), _ = min(dist.items(), key=lambda kv: (kv[1], kv[0]))
        # merged community keeps the lower id c1
        for c in (c1, c2):
            for other in adj[c]:
                dist.pop((min(c, other), max(c, other)), None)
        neighbours = (adj[c1] | adj[c2]) - {c1, c2}
        prob[c1] = (size[c1] * prob[c1] + size[c2] * prob[c2]) / (size[c1] + size[c2])
        size[c1] += size[c2]
        for other in adj.pop(c2):
            adj[other].discard(c2)
        del prob[c2], size[c2]
        adj[c1] = neighbours
        for other in neighbours:
            adj[other].add(c1)
            dist[(min(c1, other), max(c1, other))] = delta_sigma(c1, other)
        member[member == c2] = c1
        Q = modularity(g, CommunityAssignment(member))
        if Q > best_Q + _EPS:
            best_Q, best_member = Q, member.copy()
    return CommunityAssignment(best_member)


# --------------------------------------------------------------------------
# infomap (two-level map equation, Louvain-style optimisation)

class _FlowNetwork:
    """Aggregated undirected flow network used by the infomap optimiser."""

    def __init__(self, weights: np.ndarray, flow: np.ndarray):
        self.weights = weights  # symmetric, zero diagonal, normalised by 2W
        self.flow = flow
        self.out = weights.sum(axis=1)
        self.nbrs = [np.nonzero(weights[i])[0] for i in range(len(flow))]


def _plogp1(x: float) -> float:
    return x * np.log2(x) if x > 0 else 0.0


def _local_moves(net: _FlowNetwork, member: np.ndarray, rng) -> tuple[np.ndarray, bool]:
    """Greedy single-node moves until no move shortens the code length."""
    n = len(net.flow)
    member = member.copy()
    n_mod = max(n, int(member.max()) + 1)
    M = np.zeros((n, n_mod))
    M[np.arange(n), member] = 1.0
    p_mod = M.T @ net.flow
    # exit flow = member out-weight minus internal weight (counted in both directions)
    exit_ = M.T @ net.out - np.einsum("ij,ik,kj->j", M, net.weights, M)
    exit_ = np.maximum(exit_, 0.0)
    size = M.sum(axis=0).astype(int)
    total_exit = float(exit_.sum())
    any_moved = False

    def term(q, p):
        return -2.0 * _plogp1(q) + _plogp1(q + p)

    while True:
        moved = False
        for u in rng.permutation(n):
            if len(net.nbrs[u]) == 0:
                continue
            a = member[u]
            w_to: dict[int, float] = {}
            for v in net.nbrs[u]:
                w_to[member[v]] = w_to.get(member[v], 0.0) + net.weights[u, v]
            w_ua = w_to.get(a, 0.0)
            out_u, p_u = net.out[u], net.flow[u]
            qa_new = exit_[a] - out_u + 2.0 * w_ua
            pa_new = p_mod[a] - p_u
            candidates = sorted(c for c in w_to if c != a)
            if size[a] > 1:
                empty = np.nonzero(size == 0)[0]
                if len(empty):
                    candidates.append(int(empty[0]))
            best = None
            for b in candidates:
                w_ub = w_to.get(b, 0.0)
                qb_new = exit_[b] + out_u - 2.0 * w_ub
                new_total = total_exit - exit_[a] - exit_[b] + qa_new + qb_new
                delta = (
                    _plogp1(max(new_total, 0.0)) - _plogp1(total_exit)
                    + term(max(qa_new, 0.0), pa_new) - term(exit_[a], p_mod[a])
                    + term(max(qb_new, 0.0), p_mod[b] + p_u) - term(exit_[b], p_mod[b])
                )
                if best is None or delta < best[0] - _EPS:
                    best = (delta, b, qb_new)
            if best is None or best[0] >= -1e-10:
                continue
            delta, b, qb_new = best
            total_exit += qa_new + qb_new - exit_[a] - exit_[b]
            exit_[a], exit_[b] = max(qa_new, 0.0), max(qb_new, 0.0)
            p_mod[a] = pa_new
            p_mod[b] += p_u
            size[a] -= 1
            size[b] += 1
            member[u] = b
            moved = any_moved = True
        if not moved:
            break
    return member, any_moved


def _renumber(member: np.ndarray) -> np.ndarray:
    return CommunityAssignment(member).community_of.copy()


def infomap(g: LabelGraph, seed: int = 0) -> CommunityAssignment:
    """Minimise the two-level map equation by repeated node moves and module
    aggregation, finishing with a node-level pass so the result is a local
    minimum under single-node moves."""
    W = _require_edges(g)
    rng = np.random.default_rng(seed)
    weights = g.adjacency / (2.0 * W)
    base = _FlowNetwork(weights, weights.sum(axis=1))
    member = np.arange(g.n_nodes)
    codelength = map_equation(g, CommunityAssignment(member))

    def checked(new_member):
        nonlocal codelength
        new_len = map_equation(g, CommunityAssignment(new_member))
        assert new_len <= codelength + 1e-9, "map equation increased during optimisation"
        codelength = new_len
        return new_member

    while True:
        start = member.copy()
        member, _ = _local_moves(base, member, rng)
        member = checked(_renumber(member))
        while True:
            k = int(member.max()) + 1
            M = np.zeros((g.n_nodes, k))
            M[np.arange(g.n_nodes), member] = 1.0
            agg_w = M.T @ weights @ M
            np.fill_diagonal(agg_w, 0.0)
            coarse = _FlowNetwork(agg_w, M.T @ base.flow)
            coarse_member, moved = _local_moves(coarse, np.arange(k), rng)
            if not moved:
                break
            member = checked(_renumber(coarse_member[member]))
        if np.array_equal(_renumber(start), member):
            break
    return CommunityAssignment(member)


# --------------------------------------------------------------------------

METHODS = ("fast_greedy", "leading_eigenvector", "label_propagation", "walktrap", "infomap")


def detect(g: LabelGraph, method: str, seed: int = 0, walktrap_steps: int = WALKTRAP_STEPS):
    """Dispatch to one of :data:`METHODS` by name."""
    if method == "fast_greedy":
        return fast_greedy(g)
    if method == "leading_eigenvector":
        return leading_eigenvector(g)
    if method == "label_propagation":
        return label_propagation(g, seed)
    if method == "walktrap":
        return walktrap(g, walktrap_steps)
    if method == "infomap":
        return infomap(g, seed)
    raise ValueError(f"unknown community detection method {method!r}; expected one of {METHODS}")
