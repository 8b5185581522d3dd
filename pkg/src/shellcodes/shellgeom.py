"""Shells of the integer lattice Z^n.

A shell ``s_k`` is the set of integer vectors of squared norm ``k``.  Vectors
are plain tuples of ints when handled one at a time and ``(N, n)`` int64
arrays when handled in bulk; enumeration order is always lexicographic on
the coordinate tuples.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, DimensionMismatch, MalformedFile, TooFewVectors

DEFAULT_SHELL_CAP = 10**7

Vector = tuple  # tuple[int, ...]


@dataclass(frozen=True, order=True)
class ShellId:
    n: int
    k: int

    def __post_init__(self):
        if int(self.n) < 1 or int(self.k) < 1:
            raise ValueError(f"shell needs n >= 1 and k >= 1, got n={self.n}, k={self.k}")

    def __str__(self):
        return f"s_{self.k}(Z^{self.n})"


@dataclass(frozen=True)
class CodeSpec:
    """Target parameters of a shell code: vectors of ``shell`` with pairwise inner product <= t."""

    shell: ShellId
    t: int

    def __post_init__(self):
        k = self.shell.k
        if not -k <= self.t <= k - 1:
            raise ValueError(f"t={self.t} outside [{-k}, {k - 1}] for shell k={k}")

    @property
    def n(self):
        return self.shell.n

    @property
    def k(self):
        return self.shell.k


def _as_shell(shell) -> ShellId:
    if isinstance(shell, ShellId):
        return shell
    n, k = shell
    return ShellId(int(n), int(k))


# -- counting ---------------------------------------------------------------

def shell_size(shell) -> int:
    """Number of vectors in the shell, by n-fold convolution of the 1-d sequence.

    The one-dimensional sequence has a 1 at 0 and a 2 at every positive
    square; its n-th convolution power evaluated at k is ``|s_k|``.
    """
    shell = _as_shell(shell)
    k = shell.k
    base = [0] * (k + 1)
    base[0] = 1
    c = 1
    while c * c <= k:
        base[c * c] = 2
        c += 1
    acc = [1] + [0] * k
    for _ in range(shell.n):
        nxt = [0] * (k + 1)
        for i, a in enumerate(acc):
            if a:
                for j in range(0, k + 1 - i):
                    if base[j]:
                        nxt[i + j] += a * base[j]
        acc = nxt
    return acc[k]


def aut_orbit_size(rep: Sequence[int]) -> int:
    """Size of the Aut(Z^n)-orbit of ``rep``: n!/prod(m_i!) * 2^(#nonzero)."""
    counts = Counter(abs(int(x)) for x in rep)
    size = math.factorial(len(rep))
    for m in counts.values():
        size //= math.factorial(m)
    nonzero = sum(1 for x in rep if x != 0)
    return size << nonzero


# -- enumeration ------------------------------------------------------------

@lru_cache(maxsize=None)
def _reachable(dims: int, k: int) -> np.ndarray:
    """Boolean table: reach[j, r] is True iff r is a sum of j squares."""
    reach = np.zeros((dims + 1, k + 1), dtype=bool)
    reach[0, 0] = True
    squares = [c * c for c in range(math.isqrt(k) + 1)]
    for j in range(1, dims + 1):
        for s in squares:
            reach[j, s:] |= reach[j - 1, : k + 1 - s]
    return reach


def enumerate_shell(shell, cap: int = DEFAULT_SHELL_CAP) -> np.ndarray:
    """All vectors of the shell as an ``(N, n)`` int64 array in lexicographic order."""
    shell = _as_shell(shell)
    n, k = shell.n, shell.k
    predicted = shell_size(shell)
    if predicted > cap:
        raise CapExceeded(f"{shell} has {predicted} vectors, cap is {cap}")
    reach = _reachable(n, k)
    r = math.isqrt(k)
    vals = np.arange(-r, r + 1, dtype=np.int64)
    sq = vals * vals
    prefix = np.zeros((1, 0), dtype=np.int64)
    rem = np.array([k], dtype=np.int64)
    for pos in range(n):
        left = n - pos - 1
        cand = rem[:, None] - sq[None, :]
        ok = cand >= 0
        ok[ok] = reach[left, cand[ok]]
        rows, cols = np.nonzero(ok)
        prefix = np.concatenate([prefix[rows], vals[cols, None]], axis=1)
        rem = cand[rows, cols]
    return prefix


def vector_keys(vectors: np.ndarray, k: int):
    """Order-preserving int64 keys for shell vectors, or None when they would overflow."""
    vectors = np.asarray(vectors, dtype=np.int64)
    n = vectors.shape[1]
    r = math.isqrt(k)
    base = 2 * r + 1
    if base ** n >= 2**62:
        return None
    weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (vectors + r) @ weights


def _distinct_permutations(items: Sequence[int]) -> Iterator[tuple]:
    counts = Counter(items)
    values = sorted(counts, reverse=True)
    n = len(items)
    out = [0] * n

    def rec(pos):
        if pos == n:
            yield tuple(out)
            return
        for v in values:
            if counts[v]:
                counts[v] -= 1
                out[pos] = v
                yield from rec(pos + 1)
                counts[v] += 1

    yield from rec(0)


def aut_orbit(rep: Sequence[int]) -> Iterator[tuple]:
    """Every member of the Aut(Z^n)-orbit of ``rep`` (no particular order)."""
    absval = [abs(int(x)) for x in rep]
    for perm in _distinct_permutations(absval):
        nz = [i for i, x in enumerate(perm) if x]
        for signs in itertools.product((1, -1), repeat=len(nz)):
            v = list(perm)
            for i, s in zip(nz, signs):
                v[i] *= s
            yield tuple(v)


def stream_shell(shell) -> Iterator[tuple]:
    """Generate the shell orbit by orbit from canonical representatives, without a size cap."""
    for rep in aut_orbit_reps(shell):
        yield from aut_orbit(rep)


# -- canonical forms --------------------------------------------------------

def canonical_form(v: Sequence[int]) -> tuple:
    """Absolute values sorted in descending order; labels the Aut(Z^n)-orbit of v."""
    return tuple(sorted((abs(int(x)) for x in v), reverse=True))


def aut_orbit_reps(shell) -> list:
    """One canonical representative per Aut(Z^n)-orbit, lexicographically descending.

    Representatives are the partitions of k into at most n squares, padded
    with zeros.
    """
    shell = _as_shell(shell)
    n, k = shell.n, shell.k
    reps = []

    def rec(remaining, max_part, parts):
        if remaining == 0:
            reps.append(tuple(parts) + (0,) * (n - len(parts)))
            return
        if len(parts) == n:
            return
        for a in range(min(max_part, math.isqrt(remaining)), 0, -1):
            # the rest must fit into the remaining slots using parts <= a
            if a * a * (n - len(parts)) < remaining:
                break
            parts.append(a)
            rec(remaining - a * a, a, parts)
            parts.pop()

    rec(k, math.isqrt(k), [])
    return sorted(reps, reverse=True)


# -- inner products ---------------------------------------------------------

def shell_max_inner(shell, cap: int = DEFAULT_SHELL_CAP) -> int | None:
    """Largest inner product between distinct vectors of the shell (None if it has < 2 vectors).

    For t at or above this value the whole shell is a code.  Every pair is
    moved by Aut(Z^n) onto a pair containing an orbit representative, so the
    representatives against the shell suffice.
    """
    shell = _as_shell(shell)
    vectors = enumerate_shell(shell, cap=cap)
    if len(vectors) < 2:
        return None
    reps = np.array(aut_orbit_reps(shell), dtype=np.int64)
    ips = reps @ vectors.T
    ips[ips == shell.k] = np.iinfo(np.int64).min
    return int(ips.max())


def inner(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise DimensionMismatch(f"lengths {len(u)} and {len(v)} differ")
    return sum(int(a) * int(b) for a, b in zip(u, v))


def max_pairwise_inner(vectors) -> int:
    """Maximum inner product over unordered pairs of distinct entries."""
    arr = np.asarray(list(vectors) if not isinstance(vectors, np.ndarray) else vectors, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise TooFewVectors("need at least two vectors")
    best = None
    chunk = max(1, 2_000_000 // arr.shape[0])
    for start in range(0, arr.shape[0], chunk):
        block = arr[start:start + chunk] @ arr.T
        rows = np.arange(block.shape[0])
        block[rows, rows + start] = np.iinfo(np.int64).min
        m = int(block.max())
        best = m if best is None else max(best, m)
    return best


# -- vector files -----------------------------------------------------------

def parse_vector_lines(lines: Iterable[str]) -> list:
    out = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(tuple(int(tok) for tok in line.split()))
        except ValueError as exc:
            raise MalformedFile(f"line {lineno}: {raw.strip()!r}") from exc
    if out and len({len(v) for v in out}) != 1:
        raise MalformedFile("vectors of different lengths")
    return out


def read_vectors(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return parse_vector_lines(fh)


def format_vector(v: Sequence[int]) -> str:
    return " ".join(str(int(x)) for x in v)


def write_vectors(path, vectors, header: str | None = None) -> None:
    lines = []
    if header:
        lines += [line if line.startswith("#") else f"# {line}" for line in header.splitlines()]
    lines.extend(format_vector(v) for v in vectors)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
