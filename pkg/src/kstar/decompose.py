"""k-star decompositions of concrete graphs.

A k-star decomposition is the same thing as an orientation in which every
in-degree is a multiple of k (group each vertex's in-edges k at a time).
``solve`` searches over per-vertex in-degree targets and certifies each
complete assignment with a max-flow orientation.
"""

from __future__ import annotations

import itertools
import random
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .pairing import Multigraph, is_simple


@dataclass
class Orientation:
    """heads[e] is the endpoint edge e points into."""

    heads: list[int]
    indeg: list[int]


@dataclass
class StarDecomposition:
    stars: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    def centres(self) -> list[int]:
        return sorted({c for c, _ in self.stars})

    def format(self) -> str:
        return "".join(f"{c}: {' '.join(map(str, es))}\n" for c, es in self.stars)

    @classmethod
    def parse(cls, text: str) -> "StarDecomposition":
        stars = []
        for line in text.splitlines():
            if not line.strip():
                continue
            head, _, rest = line.partition(":")
            stars.append((int(head), tuple(int(x) for x in rest.split())))
        return cls(stars)


@dataclass
class SolveOptions:
    mode: str = "auto"  # exact | heuristic | auto
    time_limit: float = 60.0
    seed: int = 0
    node_cap: int = 2_000_000
    independence_cap: int = 60
    heuristic_restarts: int = 200

    def __post_init__(self):
        if self.mode not in ("exact", "heuristic", "auto"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.time_limit <= 0 or self.node_cap <= 0:
            raise ValueError("caps must be positive")


@dataclass
class SolveResult:
    status: str  # found | proven-none | unknown
    decomposition: StarDecomposition | None = None
    stats: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == "found"


# --------------------------------------------------------------------------
# verification


def verify(g: Multigraph, s: StarDecomposition, k: int) -> bool:
    used = [0] * g.m
    for centre, edges in s.stars:
        if len(edges) != k or len(set(edges)) != k:
            return False
        leaves = []
        for e in edges:
            if not 0 <= e < g.m:
                return False
            u, v = g.edges[e]
            if u == v or centre not in (u, v):
                return False
            leaves.append(v if u == centre else u)
            used[e] += 1
        if len(set(leaves)) != k:
            return False
    return all(c == 1 for c in used)


def orientation_to_stars(g: Multigraph, o: Orientation, k: int) -> StarDecomposition:
    """Group each vertex's in-edges k at a time, in edge-id order."""
    incoming = [[] for _ in range(g.n)]
    for e, h in enumerate(o.heads):
        incoming[h].append(e)
    stars = []
    for v in range(g.n):
        if len(incoming[v]) % k:
            raise ValueError(f"in-degree of {v} is not a multiple of {k}")
        for i in range(0, len(incoming[v]), k):
            stars.append((v, tuple(incoming[v][i : i + k])))
    return StarDecomposition(stars)


def stars_to_orientation(g: Multigraph, s: StarDecomposition) -> Orientation:
    heads = [-1] * g.m
    for c, es in s.stars:
        for e in es:
            heads[e] = c
    indeg = [0] * g.n
    for h in heads:
        indeg[h] += 1
    return Orientation(heads, indeg)


# --------------------------------------------------------------------------
# max flow (Dinic), integral and deterministic


class _Flow:
    def __init__(self, n: int):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> int:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        return len(self.to) - 2

    def maxflow(self, s: int, t: int) -> int:
        total = 0
        n = len(self.adj)
        to, cap, adj = self.to, self.cap, self.adj
        while True:
            level = [-1] * n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for a in adj[u]:
                    if cap[a] > 0 and level[to[a]] < 0:
                        level[to[a]] = level[u] + 1
                        q.append(to[a])
            if level[t] < 0:
                return total
            it = [0] * n

            def push(u, f):
                if u == t:
                    return f
                while it[u] < len(adj[u]):
                    a = adj[u][it[u]]
                    v = to[a]
                    if cap[a] > 0 and level[v] == level[u] + 1:
                        got = push(v, min(f, cap[a]))
                        if got:
                            cap[a] -= got
                            cap[a ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                f = push(s, 1 << 60)
                if not f:
                    break
                total += f


def bounded_orientation(g: Multigraph, lower: Sequence[int], upper: Sequence[int]) -> Orientation | None:
    """An orientation with lower[v] <= indeg(v) <= upper[v] for all v, or None.

    Flow network: every edge node ships one unit to one of its endpoints;
    vertex v forwards at most lower[v] units straight to the sink and the
    rest through a relay whose capacity forces all lower bounds to be met.
    """
    m, n = g.m, g.n
    slack = m - sum(lower)
    if slack < 0 or sum(upper) < m or any(lo > hi for lo, hi in zip(lower, upper)):
        return None
    S, T, R = 0, 1, 2
    fl = _Flow(3 + m + n)
    arcs = []
    for e, (u, v) in enumerate(g.edges):
        fl.add(S, 3 + e, 1)
        a_u = fl.add(3 + e, 3 + m + u, 1)
        a_v = fl.add(3 + e, 3 + m + v, 1) if v != u else None
        arcs.append((a_u, a_v))
    for v in range(n):
        if lower[v]:
            fl.add(3 + m + v, T, lower[v])
        if upper[v] > lower[v]:
            fl.add(3 + m + v, R, upper[v] - lower[v])
    fl.add(R, T, slack)
    if fl.maxflow(S, T) != m:
        return None
    heads = []
    for e, (u, v) in enumerate(g.edges):
        a_u, _ = arcs[e]
        heads.append(u if fl.cap[a_u] == 0 else v)
    indeg = [0] * n
    for h in heads:
        indeg[h] += 1
    return Orientation(heads, indeg)


def orientation_feasible(g: Multigraph, targets: Sequence[int]) -> Orientation | None:
    """Orientation with in-degree exactly targets[v] at every vertex, or None."""
    if sum(targets) != g.m:
        raise ValueError(f"targets sum to {sum(targets)}, graph has {g.m} edges")
    return bounded_orientation(g, targets, targets)


# --------------------------------------------------------------------------
# constructive special cases


def euler_orientation(g: Multigraph) -> Orientation:
    """Orient every component along an Euler circuit (all degrees must be even)."""
    if any(x % 2 for x in g.degrees()):
        raise ValueError("Euler orientation needs every degree even")
    inc = g.incidence()
    used = [False] * g.m
    ptr = [0] * g.n
    heads = [-1] * g.m
    for start in range(g.n):
        stack = [start]
        while stack:
            v = stack[-1]
            while ptr[v] < len(inc[v]) and used[inc[v][ptr[v]]]:
                ptr[v] += 1
            if ptr[v] == len(inc[v]):
                stack.pop()
                continue
            e = inc[v][ptr[v]]
            used[e] = True
            a, b = g.edges[e]
            w = b if a == v else a
            heads[e] = w
            stack.append(w)
    indeg = [0] * g.n
    for h in heads:
        indeg[h] += 1
    return Orientation(heads, indeg)


def eulerian_stars(g: Multigraph, k: int) -> StarDecomposition:
    """Euler-circuit orientation gives in-degree deg/2; split it into k-stars."""
    deg = g.degrees()
    if not g.is_connected():
        raise ValueError("eulerian_stars needs a connected graph")
    if any(x % 2 or (x // 2) % k for x in deg):
        raise ValueError(f"eulerian_stars needs every degree even with {k} | deg/2")
    return orientation_to_stars(g, euler_orientation(g), k)


def two_star_decompose(g: Multigraph) -> StarDecomposition:
    """2-star decomposition of a connected simple graph with an even edge count.

    Vertices are processed leaves-first along a DFS tree; each pairs up its
    unused edges, borrowing the edge to its parent when the count is odd.
    """
    if g.m % 2:
        raise ValueError("two_star_decompose needs an even number of edges")
    if not g.is_connected():
        raise ValueError("two_star_decompose needs a connected graph")
    if not is_simple(g):
        raise ValueError("two_star_decompose needs a simple graph")
    inc = g.incidence()
    parent_edge = [-1] * g.n
    order = []
    seen = [False] * g.n
    root = next((v for v in range(g.n) if inc[v]), 0)
    stack = [root]
    seen[root] = True
    while stack:
        v = stack.pop()
        order.append(v)
        for e in inc[v]:
            a, b = g.edges[e]
            w = b if a == v else a
            if not seen[w]:
                seen[w] = True
                parent_edge[w] = e
                stack.append(w)
    used = [False] * g.m
    stars = []
    for v in reversed(order):
        free = [e for e in inc[v] if not used[e] and e != parent_edge[v]]
        if len(free) % 2:
            free.append(parent_edge[v])
        for i in range(0, len(free), 2):
            stars.append((v, (free[i], free[i + 1])))
            used[free[i]] = used[free[i + 1]] = True
    return StarDecomposition(stars)


# --------------------------------------------------------------------------
# independence number


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def maximum_independent_set(g: Multigraph, cap: int = 60) -> list[int]:
    """Exact maximum independent set by branch and bound on bitsets."""
    n = g.n
    if n > cap:
        raise ValueError(f"graph has {n} vertices, above independence cap {cap}")
    nbr = [0] * n
    for u, v in g.edges:
        if u != v:
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
    loops = 0
    for u, v in g.edges:
        if u == v:
            loops |= 1 << u

    # greedy: repeatedly take a minimum-degree vertex
    P = ((1 << n) - 1) & ~loops
    greedy = []
    while P:
        v = min(_bits(P), key=lambda x: (nbr[x] & P).bit_count())
        greedy.append(v)
        P &= ~(nbr[v] | (1 << v))
    best = [list(greedy)]

    def matching_bound(P: int) -> int:
        left = P
        matched = 0
        while left:
            low = left & -left
            v = low.bit_length() - 1
            left ^= low
            cand = nbr[v] & left
            if cand:
                w = (cand & -cand).bit_length() - 1
                left &= ~(1 << w)
                matched += 1
        return P.bit_count() - matched

    def rec(P: int, chosen: list[int]):
        if not P:
            if len(chosen) > len(best[0]):
                best[0] = list(chosen)
            return
        if len(chosen) + matching_bound(P) <= len(best[0]):
            return
        # degree <= 1 vertices are always safe to take
        pick, pick_deg = -1, -1
        for v in _bits(P):
            dv = (nbr[v] & P).bit_count()
            if dv <= 1:
                chosen.append(v)
                rec(P & ~(nbr[v] | (1 << v)), chosen)
                chosen.pop()
                return
            if dv > pick_deg:
                pick, pick_deg = v, dv
        v = pick
        chosen.append(v)
        rec(P & ~(nbr[v] | (1 << v)), chosen)
        chosen.pop()
        rec(P & ~(1 << v), chosen)

    rec(((1 << n) - 1) & ~loops, [])
    return sorted(best[0])


def independence_number(g: Multigraph, cap: int = 60) -> int:
    return len(maximum_independent_set(g, cap))


# --------------------------------------------------------------------------
# search


class _Budget:
    def __init__(self, opts: SolveOptions):
        self.deadline = time.monotonic() + opts.time_limit
        self.node_cap = opts.node_cap
        self.nodes = 0
        self.flow_calls = 0

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.node_cap:
            return False
        if self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            return False
        return True


class _OutOfBudget(Exception):
    pass


def _propagate(g_nb: list[list[int]], deg: list[int], dom: list[list[int]]) -> bool:
    """Shrink domains: leaves force an in-edge on neighbours, full sinks force an out-edge."""
    n = len(dom)
    changed = True
    while changed:
        changed = False
        for v in range(n):
            forced_in = sum(1 for w in g_nb[v] if dom[w] == [0])
            forced_out = sum(1 for w in g_nb[v] if dom[w] == [deg[w]] and deg[w] > 0)
            new = [t for t in dom[v] if forced_in <= t <= deg[v] - forced_out]
            if not new:
                return False
            if new != dom[v]:
                dom[v] = new
                changed = True
    return True


def _exact(g: Multigraph, k: int, opts: SolveOptions, budget: _Budget) -> Orientation | None:
    n, m = g.n, g.m
    deg = g.degrees()
    nb = [sorted(s) for s in g.neighbours()]
    dom = [list(range(0, deg[v] + 1, k)) for v in range(n)]
    if not _propagate(nb, deg, dom):
        return None

    def feasible_relaxation(dom) -> bool:
        lo = [d[0] for d in dom]
        hi = [d[-1] for d in dom]
        if sum(lo) > m or sum(hi) < m:
            return False
        budget.flow_calls += 1
        return bounded_orientation(g, lo, hi) is not None

    def choose(dom) -> int:
        best, key = -1, None
        for v in range(n):
            if len(dom[v]) == 1:
                continue
            leaf_nbrs = sum(1 for w in nb[v] if dom[w] == [0])
            kv = (-leaf_nbrs, -deg[v], v)
            if key is None or kv < key:
                best, key = v, kv
        return best

    def rec(dom) -> Orientation | None:
        if not budget.tick():
            raise _OutOfBudget
        if not feasible_relaxation(dom):
            return None
        v = choose(dom)
        if v < 0:
            return orientation_feasible(g, [d[0] for d in dom])
        for t in dom[v]:
            child = [list(d) for d in dom]
            child[v] = [t]
            if not _propagate(nb, deg, child):
                continue
            got = rec(child)
            if got is not None:
                return got
        return None

    return rec(dom)


def _leaf_count_needed(g: Multigraph, k: int) -> int | None:
    """When every degree is below 2k the zero in-degree vertices form an
    independent set of a forced size; return that size, else None."""
    deg = g.degrees()
    if any(x >= 2 * k for x in deg):
        return None
    return g.n - g.m // k


def _heuristic(g: Multigraph, k: int, opts: SolveOptions) -> Orientation | None:
    deg = g.degrees()
    need = _leaf_count_needed(g, k)
    if need is None or need < 0:
        return None
    nb = g.neighbours()
    forced = [v for v in range(g.n) if deg[v] < k]
    rng = random.Random(opts.seed)
    verts = list(range(g.n))

    def targets_for(leaves: set[int]):
        return [0 if v in leaves else k for v in range(g.n)]

    for _ in range(opts.heuristic_restarts):
        rng.shuffle(verts)
        leaves: set[int] = set(forced)
        if any(w in leaves for v in forced for w in nb[v]):
            return None
        for v in verts:
            if v not in leaves and not (nb[v] & leaves):
                leaves.add(v)
        if len(leaves) < need:
            continue
        pool = sorted(leaves - set(forced), key=lambda _: rng.random())
        chosen = set(forced) | set(pool[: need - len(forced)])
        rest = pool[need - len(forced) :]
        for _swap in range(len(pool) + 1):
            o = orientation_feasible(g, targets_for(chosen))
            if o is not None:
                return o
            if not rest:
                break
            out = rng.choice(sorted(chosen - set(forced)))
            chosen.remove(out)
            chosen.add(rest.pop())
    return None


def _fast_path(g: Multigraph, k: int) -> StarDecomposition | None:
    """Eulerian and 2-star constructions, applied component by component."""
    deg = g.degrees()
    stars = []
    for comp in g.components():
        sub, ids = g.subgraph(comp)
        if sub.m == 0:
            continue
        sdeg = [deg[v] for v in comp]
        if all(x % 2 == 0 and (x // 2) % k == 0 for x in sdeg):
            part = eulerian_stars(sub, k)
        elif k == 2 and sub.m % 2 == 0:
            part = two_star_decompose(sub)
        else:
            return None
        stars.extend((comp[c], tuple(ids[e] for e in es)) for c, es in part.stars)
    return StarDecomposition(stars)


def solve(g: Multigraph, k: int, options: SolveOptions | None = None) -> SolveResult:
    opts = options or SolveOptions()
    if k < 1:
        raise ValueError("k must be positive")
    if not is_simple(g):
        raise ValueError("solve accepts simple graphs only (found loops or parallel edges)")
    t0 = time.monotonic()
    stats: dict = {"nodes": 0, "flow_calls": 0}

    def done(status, dec=None, **extra):
        stats.update(extra)
        stats["seconds"] = time.monotonic() - t0
        return SolveResult(status, dec, stats)

    if g.m % k:
        return done("proven-none", reason="k does not divide |E|")

    if opts.mode in ("auto", "heuristic"):
        fast = _fast_path(g, k)
        if fast is not None:
            return done("found", fast, method="constructive")
        o = _heuristic(g, k, opts)
        if o is not None:
            return done("found", orientation_to_stars(g, o, k), method="heuristic")
        if opts.mode == "heuristic":
            return done("unknown", method="heuristic")

    need = _leaf_count_needed(g, k)
    if need is not None:
        if need < 0:
            return done("proven-none", reason="too many edges for the leaf count")
        if g.n <= opts.independence_cap:
            alpha = independence_number(g, opts.independence_cap)
            stats["alpha"] = alpha
            if alpha < need:
                return done("proven-none", reason=f"independence number {alpha} < {need} leaves")

    budget = _Budget(opts)
    try:
        o = _exact(g, k, opts, budget)
    except _OutOfBudget:
        stats.update(nodes=budget.nodes, flow_calls=budget.flow_calls)
        return done("unknown", method="exact", reason="node or time cap exceeded")
    stats.update(nodes=budget.nodes, flow_calls=budget.flow_calls)
    if o is None:
        return done("proven-none", method="exact")
    return done("found", orientation_to_stars(g, o, k), method="exact")


# --------------------------------------------------------------------------
# brute force (test oracle)


def brute_force_decomposable(g: Multigraph, k: int) -> bool:
    """Try all 2^|E| orientations (vectorised in blocks of 2^16)."""
    import numpy as np

    m = g.m
    if m == 0:
        return True
    us = np.array([u for u, _ in g.edges])
    vs = np.array([v for _, v in g.edges])
    low = min(m, 16)
    block = np.arange(1 << low, dtype=np.int64)
    low_bits = ((block[:, None] >> np.arange(low)) & 1).astype(bool)
    for high in range(1 << (m - low)):
        high_bits = np.array([(high >> j) & 1 for j in range(m - low)], dtype=bool)
        bits = np.concatenate([low_bits, np.broadcast_to(high_bits, (len(block), m - low))], axis=1)
        heads = np.where(bits, vs, us)
        indeg = np.zeros((len(block), g.n), dtype=np.int64)
        np.add.at(indeg, (np.repeat(np.arange(len(block)), m), heads.ravel()), 1)
        if np.any(np.all(indeg % k == 0, axis=1)):
            return True
    return False
