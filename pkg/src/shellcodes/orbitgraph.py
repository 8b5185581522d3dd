"""Weighted orbit-compatibility graphs.

Vertices are the G-orbits of a shell whose own vectors already satisfy the
inner-product bound; an edge joins two orbits when every cross pair does.
Because G is transitive on each orbit and preserves inner products, both
tests only need one representative against the members of an orbit.
"""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import CapExceeded, MalformedFile
from .shellgeom import CodeSpec, ShellId
from .symgroup import GroupSpec, Orbit, OrbitTable

DEFAULT_VERTEX_CAP = 50_000
DEFAULT_PAIR_BUDGET = 400_000_000

_NEG = np.iinfo(np.int64).min


@dataclass(frozen=True)
class OrbitVertex:
    orbit_index: int
    weight: int
    internal_max_ip: int | None
    representative: tuple = ()


class CompatibilityGraph:
    """Vertex-weighted simple graph with bit-packed adjacency rows.

    ``adjacency`` is either a dense boolean matrix or rows already packed
    with ``np.packbits(..., bitorder="little")``.
    """

    def __init__(self, vertices, adjacency, spec: CodeSpec | None = None, group: GroupSpec | None = None):
        adjacency = np.asarray(adjacency)
        count = len(vertices)
        if adjacency.dtype == bool:
            dense = adjacency.astype(bool)
            if dense.shape != (count, count):
                raise ValueError("adjacency shape does not match vertex count")
            if count and (dense.diagonal().any() or not (dense == dense.T).all()):
                raise ValueError("adjacency must be symmetric without self-loops")
            packed = np.packbits(dense, axis=1, bitorder="little")
        else:
            packed = adjacency.astype(np.uint8)
        self.vertices = list(vertices)
        self.packed = packed
        self.spec = spec
        self.group = group

    def __len__(self):
        return len(self.vertices)

    @property
    def weights(self) -> list:
        return [v.weight for v in self.vertices]

    def dense(self) -> np.ndarray:
        count = len(self.vertices)
        if count == 0:
            return np.zeros((0, 0), dtype=bool)
        return np.unpackbits(self.packed, axis=1, count=count, bitorder="little").astype(bool)

    @cached_property
    def bitsets(self) -> list:
        """Row i as a Python int with bit j set iff i ~ j."""
        return [int.from_bytes(row.tobytes(), "little") for row in self.packed]

    def has_edge(self, i, j) -> bool:
        return bool(self.bitsets[i] >> j & 1)

    def edges(self):
        d = np.triu(self.dense(), 1)
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(d))]

    @property
    def edge_count(self) -> int:
        return int(np.triu(self.dense(), 1).sum())

    def is_clique(self, members) -> bool:
        members = list(members)
        bits = self.bitsets
        for a, i in enumerate(members):
            for j in members[a + 1:]:
                if not bits[i] >> j & 1:
                    return False
        return len(set(members)) == len(members)

    def __eq__(self, other):
        return (isinstance(other, CompatibilityGraph) and self.weights == other.weights
                and np.array_equal(self.packed, other.packed))

    # -- DIMACS ---------------------------------------------------------

    def to_dimacs(self) -> str:
        edges = self.edges()
        lines = []
        if self.spec is not None:
            lines.append(f"c shell n={self.spec.n} k={self.spec.k} t={self.spec.t}")
        if self.group is not None:
            lines.append(f"c group {self.group.name} order={self.group.order()}")
        lines.append(f"p edge {len(self.vertices)} {len(edges)}")
        lines += [f"n {i + 1} {v.weight}" for i, v in enumerate(self.vertices)]
        lines += [f"e {i + 1} {j + 1}" for i, j in edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> "CompatibilityGraph":
        count = None
        weights = {}
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            parts = raw.split()
            if not parts or parts[0] == "c":
                continue
            try:
                if parts[0] == "p":
                    count = int(parts[2])
                elif parts[0] == "n":
                    weights[int(parts[1]) - 1] = int(parts[2])
                elif parts[0] == "e":
                    edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
                else:
                    raise MalformedFile(f"line {lineno}: unknown record {parts[0]!r}")
            except (IndexError, ValueError) as exc:
                raise MalformedFile(f"line {lineno}: {raw!r}") from exc
        if count is None:
            raise MalformedFile("missing 'p edge V E' line")
        dense = np.zeros((count, count), dtype=bool)
        for i, j in edges:
            if i == j or not (0 <= i < count and 0 <= j < count):
                raise MalformedFile(f"bad edge {i + 1} {j + 1}")
            dense[i, j] = dense[j, i] = True
        vertices = [OrbitVertex(i, weights.get(i, 1), None) for i in range(count)]
        return cls(vertices, dense)


def graph_from_weights(weights, dense_adjacency) -> CompatibilityGraph:
    """Plain weighted graph (no shell/group attached), e.g. for solver tests."""
    vertices = [OrbitVertex(i, int(w), None) for i, w in enumerate(weights)]
    return CompatibilityGraph(vertices, np.asarray(dense_adjacency, dtype=bool))


# -- construction -----------------------------------------------------------

def orbit_internal_max(table: OrbitTable) -> np.ndarray:
    """Per orbit, max inner product between the representative and its other members.

    Singleton orbits get the int64 minimum (no distinct pair).
    """
    count = len(table.vectors)
    labels = np.empty(count, dtype=np.int64)
    reps = np.empty((len(table.orbits), table.shell.n), dtype=np.int64)
    for i, orb in enumerate(table.orbits):
        labels[orb.indices] = i
        reps[i] = orb.representative
    ips = np.einsum("ij,ij->i", table.vectors, reps[labels])
    ips[ips == table.shell.k] = _NEG  # the representative itself
    out = np.full(len(table.orbits), _NEG, dtype=np.int64)
    np.maximum.at(out, labels, ips)
    return out


def admissible_orbits(table: OrbitTable, t: int) -> list:
    """Orbits whose distinct members pairwise have inner product <= t."""
    internal = orbit_internal_max(table)
    out = []
    for i, orb in enumerate(table.orbits):
        m = int(internal[i])
        if orb.size == 1 or m <= t:
            out.append(OrbitVertex(i, orb.size, None if orb.size == 1 else m, orb.representative))
    return out


def cross_max(table: OrbitTable, i: int, j: int) -> int:
    """Max inner product between orbit i and orbit j (representative of i against members of j)."""
    rep = np.asarray(table.orbits[i].representative, dtype=np.int64)
    return int((table.members(j) @ rep).max())


def cross_compatible(table: OrbitTable, i: int, j: int, t: int) -> bool:
    if i == j:
        raise ValueError("cross compatibility is defined for distinct orbits")
    return cross_max(table, i, j) <= t


def cross_max_matrix(table: OrbitTable, orbit_ids, pair_budget: int = DEFAULT_PAIR_BUDGET) -> np.ndarray:
    """Matrix of cross maxima between the listed orbits (diagonal left undefined)."""
    orbit_ids = list(orbit_ids)
    count = len(orbit_ids)
    if count == 0:
        return np.zeros((0, 0), dtype=np.int64)
    members = [table.orbits[i].indices for i in orbit_ids]
    sizes = np.array([len(m) for m in members])
    total = int(sizes.sum())
    if count * total > pair_budget:
        raise CapExceeded(f"{count} vertices x {total} member vectors exceeds pair budget {pair_budget}")
    stacked = table.vectors[np.concatenate(members)]
    starts = np.r_[0, np.cumsum(sizes)[:-1]]
    reps = np.array([table.orbits[i].representative for i in orbit_ids], dtype=np.int64)
    out = np.empty((count, count), dtype=np.int64)
    chunk = max(1, 20_000_000 // max(total, 1))
    for lo in range(0, count, chunk):
        block = reps[lo:lo + chunk] @ stacked.T
        out[lo:lo + chunk] = np.maximum.reduceat(block, starts, axis=1)
    return out


def build_graph(table: OrbitTable, t: int, vertex_cap: int = DEFAULT_VERTEX_CAP,
                pair_budget: int = DEFAULT_PAIR_BUDGET, allowed=None) -> CompatibilityGraph:
    """Orbit-compatibility graph for the shell code problem (table.shell, t) under table.group.

    ``allowed`` optionally restricts the vertices to a set of orbit indices.
    Raises CapExceeded when the admissible orbits exceed ``vertex_cap`` or
    the representative-vs-member scan exceeds ``pair_budget``.
    """
    spec = CodeSpec(table.shell, t)
    vertices = admissible_orbits(table, t)
    if allowed is not None:
        allowed = set(allowed)
        vertices = [v for v in vertices if v.orbit_index in allowed]
    if len(vertices) > vertex_cap:
        raise CapExceeded(f"{len(vertices)} admissible orbits exceed the vertex cap {vertex_cap}")
    cm = cross_max_matrix(table, [v.orbit_index for v in vertices], pair_budget)
    if len(vertices):
        off = ~np.eye(len(vertices), dtype=bool)
        if not (cm[off] == cm.T[off]).all():
            raise AssertionError("cross maxima are not symmetric; the orbit table is inconsistent")
    dense = cm <= t
    np.fill_diagonal(dense, False)
    return CompatibilityGraph(vertices, dense, spec=spec, group=table.group)


# -- binary cache -----------------------------------------------------------

def cache_key(shell: ShellId, group: GroupSpec, t: int) -> str:
    text = f"{shell.n}:{shell.k}:{t}:{group.digest()}"
    return hashlib.sha256(text.encode()).hexdigest()[:24]


def save_graph(path, graph: CompatibilityGraph) -> None:
    np.savez_compressed(
        path,
        packed=graph.packed,
        orbit_index=np.array([v.orbit_index for v in graph.vertices], dtype=np.int64),
        weight=np.array([v.weight for v in graph.vertices], dtype=np.int64),
        internal=np.array([_NEG if v.internal_max_ip is None else v.internal_max_ip
                           for v in graph.vertices], dtype=np.int64),
        reps=np.array([v.representative for v in graph.vertices], dtype=np.int64).reshape(len(graph), -1),
    )


def load_graph(path, spec=None, group=None) -> CompatibilityGraph:
    with np.load(path) as data:
        vertices = [
            OrbitVertex(int(o), int(w), None if int(m) == _NEG else int(m), tuple(int(x) for x in r))
            for o, w, m, r in zip(data["orbit_index"], data["weight"], data["internal"], data["reps"])
        ]
        packed = data["packed"]
    return CompatibilityGraph(vertices, packed, spec=spec, group=group)


def cached_build_graph(table: OrbitTable, t: int, cache_dir=None, **caps) -> CompatibilityGraph:
    """build_graph with an on-disk cache keyed by (shell, group digest, t)."""
    cache_dir = cache_dir or os.environ.get("SHELLCODES_CACHE")
    if not cache_dir:
        return build_graph(table, t, **caps)
    path = Path(cache_dir) / f"graph-{cache_key(table.shell, table.group, t)}.npz"
    spec = CodeSpec(table.shell, t)
    if path.exists():
        return load_graph(path, spec, table.group)
    graph = build_graph(table, t, **caps)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_graph(path, graph)
    return graph
