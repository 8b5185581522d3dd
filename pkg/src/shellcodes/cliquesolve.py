"""Maximum-weight clique search.

``max_weight_clique`` is a branch and bound over Python-int bitsets with a
greedy weighted-coloring upper bound (each color class contributes its
heaviest member).  ``brute_force_clique`` is an independent exhaustive
oracle for small graphs.
"""
from __future__ import annotations

import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import TooLarge, VerificationFailed

BRUTE_FORCE_LIMIT = 40


@dataclass(frozen=True)
class SolveBudget:
    time_limit: float | None = None
    node_limit: int | None = None
    target_weight: int | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")


@dataclass
class CliqueResult:
    vertices: tuple
    weight: int
    proven_optimal: bool
    nodes_explored: int = 0
    wall_time: float = field(default=0.0, compare=False)

    def to_json(self) -> str:
        record = asdict(self)
        record["vertices"] = list(self.vertices)
        return json.dumps(record, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CliqueResult":
        d = json.loads(text)
        return cls(tuple(d["vertices"]), d["weight"], d["proven_optimal"],
                   d.get("nodes_explored", 0), d.get("wall_time", 0.0))


def _check(graph, result: CliqueResult) -> CliqueResult:
    if not graph.is_clique(result.vertices):
        raise VerificationFailed(f"vertex set {result.vertices} is not a clique")
    w = graph.weights
    if sum(w[v] for v in result.vertices) != result.weight:
        raise VerificationFailed("clique weight does not match its members")
    return result


def greedy_seed(graph, rng_seed: int = 0) -> CliqueResult:
    """Maximal clique grown by largest weighted degree inside the candidate set."""
    start = time.perf_counter()
    count = len(graph)
    if count == 0:
        return CliqueResult((), 0, False, 0, 0.0)
    rng = random.Random(rng_seed)
    dense = graph.dense()
    w = np.asarray(graph.weights, dtype=np.int64)
    noise = np.array([rng.random() for _ in range(count)])
    cand = np.ones(count, dtype=bool)
    chosen = []
    while cand.any():
        idx = np.flatnonzero(cand)
        score = w[idx] + dense[np.ix_(idx, idx)] @ w[idx]
        best = score.max()
        ties = idx[score == best]
        v = int(ties[np.argmax(noise[ties])])
        chosen.append(v)
        cand &= dense[v]
    chosen.sort()
    result = CliqueResult(tuple(chosen), int(w[chosen].sum()), False, 0, time.perf_counter() - start)
    return _check(graph, result)


class _Stop(Exception):
    pass


def max_weight_clique(graph, budget: SolveBudget | None = None) -> CliqueResult:
    """Best clique found within the budget; ``proven_optimal`` iff the search tree was closed."""
    budget = budget or SolveBudget()
    start = time.perf_counter()
    count = len(graph)
    if count == 0:
        return CliqueResult((), 0, True, 0, 0.0)

    weights = graph.weights
    bits = graph.bitsets
    degree = [b.bit_count() for b in bits]
    # heavy vertices first; ties by degree, then by original index
    order = sorted(range(count), key=lambda v: (-weights[v], -degree[v], v))
    pos = {v: i for i, v in enumerate(order)}
    w = [weights[v] for v in order]
    adj = []
    for v in order:
        row = 0
        b = bits[v]
        while b:
            low = b & -b
            row |= 1 << pos[low.bit_length() - 1]
            b ^= low
        adj.append(row)

    seed = greedy_seed(graph, budget.rng_seed)
    best_w = seed.weight
    best_set = [pos[v] for v in seed.vertices]
    nodes = 0
    deadline = None if budget.time_limit is None else start + budget.time_limit
    node_limit = budget.node_limit
    target = budget.target_weight
    if target is not None and best_w >= target:
        result = CliqueResult(tuple(sorted(seed.vertices)), best_w, False, 0, time.perf_counter() - start)
        return _check(graph, result)

    def color_order(cand):
        """Vertices of cand grouped into independent sets, with prefix upper bounds."""
        verts, bounds = [], []
        total = 0
        uncolored = cand
        while uncolored:
            q = uncolored
            cls = []
            while q:
                low = q & -q
                v = low.bit_length() - 1
                cls.append(v)
                q &= ~adj[v]
                q ^= low
                uncolored ^= low
            # ids are sorted by weight, so cls[0] is the heaviest member
            for v in reversed(cls):
                verts.append(v)
                bounds.append(total + w[v])
            total += w[cls[0]]
        return verts, bounds

    current = []

    def expand(cand, cur_w):
        nonlocal best_w, best_set, nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise _Stop
        if deadline is not None and nodes & 255 == 0 and time.perf_counter() > deadline:
            raise _Stop
        verts, bounds = color_order(cand)
        for i in range(len(verts) - 1, -1, -1):
            if cur_w + bounds[i] <= best_w:
                return
            v = verts[i]
            current.append(v)
            new_w = cur_w + w[v]
            nxt = cand & adj[v]
            if nxt:
                expand(nxt, new_w)
            elif new_w > best_w:
                best_w = new_w
                best_set = list(current)
                if target is not None and best_w >= target:
                    current.pop()
                    raise _Stop
            current.pop()
            cand &= ~(1 << v)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, count + 1000))
    proven = True
    try:
        expand((1 << count) - 1, 0)
    except _Stop:
        proven = False
    finally:
        sys.setrecursionlimit(limit)

    members = tuple(sorted(order[i] for i in best_set))
    result = CliqueResult(members, best_w, proven, nodes, time.perf_counter() - start)
    return _check(graph, result)


def brute_force_clique(graph) -> CliqueResult:
    """Exact maximum-weight clique by plain recursion over candidate lists."""
    start = time.perf_counter()
    count = len(graph)
    if count > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force is limited to {BRUTE_FORCE_LIMIT} vertices, got {count}")
    dense = graph.dense().tolist()
    w = list(graph.weights)
    best = [0, ()]
    calls = 0

    def rec(cands, cur, cur_w):
        nonlocal calls
        calls += 1
        if cur_w > best[0]:
            best[0], best[1] = cur_w, tuple(cur)
        rest = sum(w[v] for v in cands)
        for idx, v in enumerate(cands):
            if cur_w + rest <= best[0]:
                break
            rest -= w[v]
            row = dense[v]
            rec([u for u in cands[idx + 1:] if row[u]], cur + [v], cur_w + w[v])

    rec(list(range(count)), [], 0)
    result = CliqueResult(tuple(sorted(best[1])), best[0], True, calls, time.perf_counter() - start)
    return _check(graph, result)
