"""Configuration (pairing) model Omega_{n,d} and its projected multigraphs.

Point p belongs to cell p // d.  Randomness goes through numpy Generators
seeded from plain integers; per-trial seeds come from ``mix_seed`` so any
single trial can be regenerated on its own.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

_MASK64 = (1 << 64) - 1


def mix_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed with the splitmix64 finaliser."""
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h = (h ^ (int(p) & _MASK64)) & _MASK64
        h = (h + 0x9E3779B97F4A7C15) & _MASK64
        z = h
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        h = z ^ (z >> 31)
    return h


def m_pairings(a: int) -> int:
    """M(2a) = (2a)! / (a! 2^a), the number of perfect matchings of 2a points."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    return math.factorial(2 * a) // (math.factorial(a) * 2**a)


@dataclass(frozen=True)
class Pairing:
    n: int
    d: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = sorted(p for pair in self.pairs for p in pair)
        if seen != list(range(self.n * self.d)):
            raise ValueError("pairs must cover every point exactly once")

    def multigraph(self) -> "Multigraph":
        d = self.d
        return Multigraph(self.n, [(a // d, b // d) for a, b in self.pairs])


@dataclass
class Multigraph:
    """Vertices 0..n-1 and an edge list in input order (loops as (u, u))."""

    n: int
    edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.edges = [(int(u), int(v)) for u, v in self.edges]
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def loops(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    def multiplicities(self) -> Counter:
        """Multiplicity of each non-loop vertex pair (u < v)."""
        return Counter((min(u, v), max(u, v)) for u, v in self.edges if u != v)

    def neighbours(self) -> list[set[int]]:
        nb = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u != v:
                nb[u].add(v)
                nb[v].add(u)
        return nb

    def incidence(self) -> list[list[int]]:
        inc = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append(e)
            if v != u:
                inc[v].append(e)
        return inc

    def components(self) -> list[list[int]]:
        nb = self.neighbours()
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in nb[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def subgraph(self, vertices: Sequence[int]) -> tuple["Multigraph", list[int]]:
        """Induced subgraph on ``vertices`` (relabelled 0..) and the original edge ids."""
        index = {v: i for i, v in enumerate(vertices)}
        edges, ids = [], []
        for e, (u, v) in enumerate(self.edges):
            if u in index and v in index:
                edges.append((index[u], index[v]))
                ids.append(e)
        return Multigraph(len(vertices), edges), ids


# --------------------------------------------------------------------------
# sampling


def sample_pairing(n: int, d: int, seed: int) -> Pairing:
    """Uniform pairing: shuffle the dn points and pair consecutive ones."""
    if (n * d) % 2:
        raise ValueError(f"dn must be even, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n * d)
    pairs = tuple((int(perm[i]), int(perm[i + 1])) for i in range(0, n * d, 2))
    return Pairing(n, d, pairs)


def is_simple(g: Multigraph) -> bool:
    if g.loops():
        return False
    return all(c == 1 for c in g.multiplicities().values())


class SamplingExhausted(RuntimeError):
    def __init__(self, tries: int):
        super().__init__(f"no simple graph after {tries} tries")
        self.tries = tries


def sample_simple_graph(n: int, d: int, seed: int, max_tries: int = 2_000_000) -> tuple[Multigraph, int]:
    """Uniform simple d-regular graph by rejection; returns (graph, tries used).

    One generator per seed draws candidate pairings in batches; the first
    simple one in draw order wins, so the result depends on the seed only.
    """
    if (n * d) % 2:
        raise ValueError(f"dn must be even, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    base = np.arange(n * d)
    done = 0
    while done < max_tries:
        batch = min(512, max_tries - done)
        perms = rng.permuted(np.broadcast_to(base, (batch, n * d)), axis=1)
        a, b = perms[:, 0::2] // d, perms[:, 1::2] // d
        keys = np.sort(np.minimum(a, b) * n + np.maximum(a, b), axis=1)
        bad = (a == b).any(axis=1) | (np.diff(keys, axis=1) == 0).any(axis=1)
        good = np.flatnonzero(~bad)
        if good.size:
            i = int(good[0])
            return Multigraph(n, list(zip(a[i].tolist(), b[i].tolist()))), done + i + 1
        done += batch
    raise SamplingExhausted(max_tries)


# --------------------------------------------------------------------------
# cycles


def count_cycles(g: Multigraph, m: int) -> list[int]:
    """[X_1, ..., X_m]: cycle counts in the pairing sense.

    X_1 counts loops, X_2 pairs of parallel edges, and X_j (j >= 3) the
    j-cycles of the underlying simple graph weighted by the product of
    edge multiplicities (distinct edge subsets).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    mult = g.multiplicities()
    out = [g.loops()]
    if m >= 2:
        out.append(sum(math.comb(c, 2) for c in mult.values()))
    if m >= 3:
        adj = [sorted(s) for s in g.neighbours()]
        counts = [0] * (m + 1)

        def weight(path):
            w = 1
            for a, b in zip(path, path[1:] + path[:1]):
                w *= mult[(min(a, b), max(a, b))]
            return w

        # simple cycles with smallest vertex first; each undirected cycle
        # is seen twice (two directions), keep path[1] < path[-1]
        for s in range(g.n):
            stack = [(s, [s], {s})]
            while stack:
                u, path, on = stack.pop()
                for w in adj[u]:
                    if w < s:
                        continue
                    if w == s and len(path) >= 3:
                        if path[1] < path[-1]:
                            counts[len(path)] += weight(path)
                        continue
                    if w in on or len(path) >= m:
                        continue
                    stack.append((w, path + [w], on | {w}))
        out.extend(counts[3 : m + 1])
    return out


# --------------------------------------------------------------------------
# graph file format: "n m" header, then "u v" per edge, 0-based


def format_graph(g: Multigraph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Multigraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise ValueError("graph file must start with 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"header says {m} edges, found {len(body)}")
    edges = []
    for r in body:
        if len(r) != 2:
            raise ValueError(f"bad edge line: {' '.join(r)}")
        edges.append((int(r[0]), int(r[1])))
    return Multigraph(n, edges)


def write_graph(g: Multigraph, path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8", newline="\n")


def read_graph(path) -> Multigraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


# --------------------------------------------------------------------------
# a few named graphs used by tests and the CLI


def complete_graph(n: int) -> Multigraph:
    return Multigraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(a: int, b: int) -> Multigraph:
    return Multigraph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def cycle_graph(n: int) -> Multigraph:
    return Multigraph(n, [(i, (i + 1) % n) for i in range(n)])


def petersen_graph() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Multigraph(10, outer + spokes + inner)


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Multigraph:
    return Multigraph(n, list(edges))
