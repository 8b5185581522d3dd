"""Signed permutations, groups of them, and orbit partitions of shells.

A signed permutation acts on a vector by ``(s.v)[image[i]] = sign[i] * v[i]``.
Indices are 0-based in code; the text file format and cycle notation helpers
use 1-based points like the rest of the literature.

Degree-2n encoding: coordinate ``i`` with sign ``+`` is point ``2i``, with
sign ``-`` point ``2i+1``.  Signed permutations are exactly the permutations
of ``range(2n)`` preserving the pairing ``{2i, 2i+1}``.
"""
from __future__ import annotations

import functools
import hashlib
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BlockSystemViolation, DimensionMismatch, MalformedFile, UnsupportedFamily
from .shellgeom import DEFAULT_SHELL_CAP, ShellId, _as_shell, enumerate_shell, vector_keys


@dataclass(frozen=True)
class SignedPermutation:
    image: tuple
    sign: tuple

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        sign = tuple(int(x) for x in self.sign)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"image {image} is not a permutation of 0..{len(image) - 1}")
        if len(sign) != len(image) or any(s not in (1, -1) for s in sign):
            raise ValueError(f"bad sign vector {sign}")
        object.__setattr__(self, "image", image)
        object.__setattr__(self, "sign", sign)

    @property
    def n(self):
        return len(self.image)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), (1,) * n)

    def is_identity(self):
        return self.image == tuple(range(self.n)) and all(s == 1 for s in self.sign)

    def __call__(self, v):
        return apply(self, v)

    def __mul__(self, other):
        return compose(self, other)

    def __str__(self):
        img = " ".join(str(i + 1) for i in self.image)
        sgn = " ".join("+1" if s > 0 else "-1" for s in self.sign)
        return f"img: {img} ; sgn: {sgn}"


def apply(sigma: SignedPermutation, v):
    if len(v) != sigma.n:
        raise DimensionMismatch(f"permutation on {sigma.n} coordinates applied to length {len(v)}")
    out = [0] * sigma.n
    for i, (j, s) in enumerate(zip(sigma.image, sigma.sign)):
        out[j] = s * int(v[i])
    return tuple(out)


def apply_array(sigma: SignedPermutation, vectors: np.ndarray) -> np.ndarray:
    """Apply ``sigma`` to every row of an ``(N, n)`` array."""
    vectors = np.asarray(vectors)
    if vectors.shape[-1] != sigma.n:
        raise DimensionMismatch(f"permutation on {sigma.n} coordinates, arrays of width {vectors.shape[-1]}")
    out = np.empty_like(vectors)
    out[..., list(sigma.image)] = vectors * np.asarray(sigma.sign, dtype=vectors.dtype)
    return out


def compose(sigma: SignedPermutation, tau: SignedPermutation) -> SignedPermutation:
    """``sigma`` after ``tau``."""
    if sigma.n != tau.n:
        raise DimensionMismatch(f"cannot compose degrees {sigma.n} and {tau.n}")
    image = tuple(sigma.image[j] for j in tau.image)
    sign = tuple(sigma.sign[j] * s for j, s in zip(tau.image, tau.sign))
    return SignedPermutation(image, sign)


def inverse(sigma: SignedPermutation) -> SignedPermutation:
    image = [0] * sigma.n
    sign = [1] * sigma.n
    for i, (j, s) in enumerate(zip(sigma.image, sigma.sign)):
        image[j] = i
        sign[j] = s
    return SignedPermutation(tuple(image), tuple(sign))


def to_degree_2n_perm(sigma: SignedPermutation) -> tuple:
    """Permutation of ``range(2n)`` induced on coordinate/sign pairs."""
    perm = [0] * (2 * sigma.n)
    for i, (j, s) in enumerate(zip(sigma.image, sigma.sign)):
        plus, minus = (2 * j, 2 * j + 1) if s > 0 else (2 * j + 1, 2 * j)
        perm[2 * i] = plus
        perm[2 * i + 1] = minus
    return tuple(perm)


def from_degree_2n_perm(perm: Sequence[int]) -> SignedPermutation:
    perm = tuple(int(x) for x in perm)
    if len(perm) % 2 or sorted(perm) != list(range(len(perm))):
        raise ValueError("expected a permutation of an even number of points")
    image, sign = [], []
    for i in range(len(perm) // 2):
        a, b = perm[2 * i], perm[2 * i + 1]
        if a // 2 != b // 2:
            raise BlockSystemViolation(
                f"block {{{2 * i + 1},{2 * i + 2}}} is sent to {{{a + 1},{b + 1}}}, not a block")
        image.append(a // 2)
        sign.append(1 if a % 2 == 0 else -1)
    return SignedPermutation(tuple(image), tuple(sign))


def perm_from_cycles(cycles: Iterable[Sequence[int]], degree: int) -> tuple:
    """0-based permutation tuple from 1-based cycle notation, e.g. ``[(1, 3), (2, 4)]``."""
    perm = list(range(degree))
    for cyc in cycles:
        cyc = [int(c) - 1 for c in cyc]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return tuple(perm)


# -- stabilizer chain -------------------------------------------------------

def _pmul(p, q):
    """p after q."""
    return tuple(p[x] for x in q)


def _pinv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class _Level:
    __slots__ = ("base", "gens", "trans", "trans_inv", "points", "done")

    def __init__(self, base, identity):
        self.base = base
        self.gens = []
        self.trans = {base: identity}
        self.trans_inv = {base: identity}
        self.points = [base]
        self.done = set()

    def add_gen(self, g):
        self.gens.append(g)
        idx = 0
        while idx < len(self.points):
            p = self.points[idx]
            for s in self.gens:
                q = s[p]
                if q not in self.trans:
                    u = _pmul(s, self.trans[p])
                    self.trans[q] = u
                    self.trans_inv[q] = _pinv(u)
                    self.points.append(q)
            idx += 1


class StabilizerChain:
    """Deterministic Schreier-Sims stabilizer chain for a permutation group.

    Every Schreier generator is sifted exactly once per level; residues are
    added as strong generators to every level whose base prefix they fix.
    """

    def __init__(self, generators: Iterable[Sequence[int]], degree: int):
        self.degree = degree
        self.identity = tuple(range(degree))
        self.levels: list[_Level] = []
        for g in generators:
            g = tuple(g)
            h, j = self.strip(g)
            if h != self.identity:
                self._add_strong(h, j)
        self._complete()

    def strip(self, g, start=0):
        for m in range(start, len(self.levels)):
            lvl = self.levels[m]
            x = g[lvl.base]
            if x not in lvl.trans:
                return g, m
            g = _pmul(lvl.trans_inv[x], g)
        return g, len(self.levels)

    def _add_strong(self, h, j):
        if j == len(self.levels):
            moved = next(x for x in range(self.degree) if h[x] != x)
            self.levels.append(_Level(moved, self.identity))
        for m in range(j + 1):
            self.levels[m].add_gen(h)

    def _complete(self):
        i = len(self.levels) - 1
        while i >= 0:
            lvl = self.levels[i]
            added = False
            for p in list(lvl.points):
                for gi, s in enumerate(lvl.gens):
                    if (p, gi) in lvl.done:
                        continue
                    lvl.done.add((p, gi))
                    q = s[p]
                    sch = _pmul(lvl.trans_inv[q], _pmul(s, lvl.trans[p]))
                    if sch == self.identity:
                        continue
                    h, j = self.strip(sch, i + 1)
                    if h != self.identity:
                        self._add_strong(h, j)
                        i = j
                        added = True
                        break
                if added:
                    break
            if not added:
                i -= 1

    def order(self) -> int:
        return math.prod(len(lvl.points) for lvl in self.levels)

    def contains(self, g) -> bool:
        h, _ = self.strip(tuple(g))
        return h == self.identity

    @property
    def base(self):
        return [lvl.base for lvl in self.levels]


# -- groups -----------------------------------------------------------------

FAMILY_TAGS = ("s", "sq", "p", "pq", "n", "custom")


@dataclass(frozen=True)
class GroupSpec:
    n: int
    generators: tuple
    family_tag: str = "custom"
    q: int = 0
    name: str = ""

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if self.family_tag not in FAMILY_TAGS:
            raise UnsupportedFamily(f"unknown family tag {self.family_tag!r}")
        for g in gens:
            if g.n != self.n:
                raise DimensionMismatch(f"generator of degree {g.n} in a group on {self.n} coordinates")
        if self.family_tag in ("sq", "pq", "s", "p", "n") and self.q:
            m = self.n - self.q
            for g in gens:
                if any(g.image[i] != i or g.sign[i] != 1 for i in range(m, self.n)):
                    raise ValueError(f"generator {g} moves one of the last {self.q} coordinate/sign pairs")
        if self.family_tag in ("p", "pq"):
            if any(s != 1 for g in gens for s in g.sign):
                raise ValueError("permutation families carry no sign changes")

    @property
    def tag(self) -> str:
        """Construction tag in the style of the bound tables, e.g. ``s``, ``s2``, ``p1``, ``n``."""
        if self.family_tag in ("s", "sq"):
            return "s" + (str(self.q) if self.q else "")
        if self.family_tag in ("p", "pq"):
            return "p" + (str(self.q) if self.q else "")
        return self.family_tag

    @cached_property
    def chain(self) -> StabilizerChain:
        return StabilizerChain([to_degree_2n_perm(g) for g in self.generators], 2 * self.n)

    def order(self) -> int:
        return group_order(self)

    def contains(self, sigma: SignedPermutation) -> bool:
        return self.chain.contains(to_degree_2n_perm(sigma))

    def point_orbit(self, point: int) -> set:
        """Orbit of a coordinate/sign point (0-based, degree-2n encoding)."""
        perms = [to_degree_2n_perm(g) for g in self.generators]
        seen = {point}
        stack = [point]
        while stack:
            x = stack.pop()
            for p in perms:
                if p[x] not in seen:
                    seen.add(p[x])
                    stack.append(p[x])
        return seen

    def is_transitive_on_pairs(self, m: int | None = None) -> bool:
        m = self.n - self.q if m is None else m
        return len(self.point_orbit(0)) == 2 * m

    def digest(self) -> str:
        text = f"n={self.n};" + ";".join(str(g) for g in self.generators)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def elements(self, limit: int = 100_000) -> list:
        """Brute-force closure; only for small groups (tests, diagnostics)."""
        ident = SignedPermutation.identity(self.n)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = compose(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > limit:
                            raise ValueError(f"group has more than {limit} elements")
            frontier = nxt
        return sorted(seen, key=lambda s: (s.image, s.sign))


def group_order(g: GroupSpec) -> int:
    return g.chain.order()


# -- permutation building blocks on m points --------------------------------

def _cycle(m):
    return tuple((i + 1) % m for i in range(m))


def _is_prime(p):
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def _primitive_root(p):
    if p == 2:
        return 1
    phi = p - 1
    factors = {d for d in range(2, phi + 1) if phi % d == 0 and _is_prime(d)}
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    raise ValueError(p)


def _perm_generators(kind: str, m: int) -> list:
    """Generators (0-based point maps) of a transitive permutation group on m points."""
    if m == 1:
        return []
    if kind == "cyclic":
        return [_cycle(m)]
    if kind == "dihedral":
        return [_cycle(m), tuple((-i) % m for i in range(m))]
    if kind == "symmetric":
        swap = list(range(m))
        swap[0], swap[1] = 1, 0
        return [_cycle(m), tuple(swap)]
    if kind == "alternating":
        if m < 3:
            return []
        three = list(range(m))
        three[0], three[1], three[2] = 1, 2, 0
        if m % 2:
            big = _cycle(m)
        else:
            big = tuple([0] + [1 + (i % (m - 1)) for i in range(1, m)])
        return [tuple(three), big]
    if kind == "affine":
        if not _is_prime(m):
            raise UnsupportedFamily(f"affine group needs a prime number of points, got {m}")
        g = _primitive_root(m)
        return [_cycle(m), tuple((g * i) % m for i in range(m))]
    if kind == "affine2":
        r = m.bit_length() - 1
        if m != 1 << r or r < 1:
            raise UnsupportedFamily(f"affine2 needs a power of two, got {m}")
        gens = [tuple(i ^ 1 for i in range(m))]
        if r >= 2:
            # basis rotation and one transvection generate GL(r, 2)
            rot = tuple(((i << 1) | (i >> (r - 1))) & (m - 1) for i in range(m))
            transv = tuple(i ^ ((i & 1) << 1) for i in range(m))
            gens += [rot, transv]
        return gens
    if kind == "psl2":
        p = m - 1
        if not _is_prime(p):
            raise UnsupportedFamily(f"psl2 needs m - 1 prime, got m={m}")
        inf = p
        shift = tuple([(i + 1) % p for i in range(p)] + [inf])
        g = _primitive_root(p)
        sq = (g * g) % p
        mult = tuple([(sq * i) % p for i in range(p)] + [inf])

        def neg_inv(i):
            if i == inf:
                return 0
            if i == 0:
                return inf
            return (-pow(i, -1, p)) % p

        return [shift, mult, tuple(neg_inv(i) for i in range(m))]
    raise UnsupportedFamily(f"unknown permutation group kind {kind!r}")


def _sign_generators(kind: str, m: int) -> list:
    """Sign-change vectors (length m) for the sign part of a signed family."""
    if kind == "none":
        return []
    if kind == "pm":
        return [(-1,) * m]
    if kind == "all":
        return [(-1,) + (1,) * (m - 1)]
    if kind == "even":
        if m < 2:
            raise UnsupportedFamily("even sign changes need at least two coordinates")
        return [(-1, -1) + (1,) * (m - 2)]
    if kind == "rm1":
        r = m.bit_length() - 1
        if m != 1 << r or r < 1:
            raise UnsupportedFamily(f"rm1 signs need a power of two, got {m}")
        return [(-1,) * m, tuple(-1 if i & 1 else 1 for i in range(m))]
    raise UnsupportedFamily(f"unknown sign part {kind!r}")


def _embed(image, sign, n, offset=0):
    """Signed permutation on n coordinates acting as (image, sign) on a block at ``offset``."""
    full_img = list(range(n))
    full_sgn = [1] * n
    for i, (j, s) in enumerate(zip(image, sign)):
        full_img[offset + i] = offset + j
        full_sgn[offset + i] = s
    return SignedPermutation(tuple(full_img), tuple(full_sgn))


PERM_KINDS = ("cyclic", "dihedral", "affine", "affine2", "psl2", "alternating", "symmetric")
SIGN_KINDS = ("pm", "even", "all", "rm1")


def _block_generators(variant: str, m: int, signed: bool) -> list:
    """Generators as (image, sign) pairs on an m-point block."""
    ident = tuple(range(m))
    if variant == "trivial":
        return []
    if variant == "full":
        variant = "symmetric*all"
    if variant == "negacyclic" or variant.startswith("negacyclic-affine:"):
        if not signed:
            raise UnsupportedFamily("negacyclic groups carry sign changes")
        gens = [(_cycle(m), (1,) * (m - 1) + (-1,))]
        if variant != "negacyclic":
            a = int(variant.split(":", 1)[1])
            if math.gcd(a, 2 * m) != 1:
                raise UnsupportedFamily(f"multiplier {a} is not a unit mod {2 * m}")
            # residue r < m is (r, +), r >= m is (r - m, -); multiplication by odd a keeps {r, r+m}
            img, sgn = [], []
            for r in range(m):
                x = (a * r) % (2 * m)
                img.append(x % m)
                sgn.append(1 if x < m else -1)
            gens.append((tuple(img), tuple(sgn)))
        return gens
    if variant.startswith("random:"):
        raise UnsupportedFamily("random variants are built by random_transitive_family")
    if variant.startswith("regular:"):
        if not signed:
            raise UnsupportedFamily("regular variants carry sign changes")
        try:
            N, M, r, s, e, z = (int(x) for x in variant[8:].split(","))
        except ValueError as exc:
            raise UnsupportedFamily(f"bad regular variant {variant!r}") from exc
        if N * M << e != 2 * m:
            raise UnsupportedFamily(f"{variant!r} has order {N * M << e}, need {2 * m}")
        return _regular_generators(N, M, r, s, e, z)
    perm_kind, _, sign_kind = variant.partition("*")
    if signed and not sign_kind:
        sign_kind = "pm"
    if not signed and sign_kind not in ("", "none"):
        raise UnsupportedFamily(f"permutation families take no sign part, got {variant!r}")
    gens = [(p, (1,) * m) for p in _perm_generators(perm_kind, m)]
    if signed:
        gens += [(ident, s) for s in _sign_generators(sign_kind, m)]
    return gens


def _metacyclic_mul(N, M, r, s):
    """Normal-form product in <a, b | a^N, b^M = a^s, b a b^-1 = a^r> x C2^e.

    Elements are (i, j, v) standing for a^i b^j c^v with v a bit mask.
    """
    powers = [pow(r, j, N) for j in range(M)]

    def mul(x, y):
        i, j, v = x
        k, l, w = y
        a = (i + powers[j] * k) % N
        b = j + l
        if b >= M:
            b -= M
            a = (a + s) % N
        return a, b, v ^ w

    return mul


def _metacyclic_ok(N, M, r, s):
    return (math.gcd(r, N) == 1 and pow(r, M, N) == 1 % N and (r * s - s) % N == 0)


def _regular_generators(N, M, r, s, e, z_index) -> list:
    """Left-regular action of an order-2m group H with a central involution z.

    The 2m elements of H are the coordinate/sign pairs; h and zh form the
    block of one coordinate, so H becomes a signed permutation group on m
    coordinates that is regular on the 2m pairs.
    """
    if not _metacyclic_ok(N, M, r, s):
        raise UnsupportedFamily(f"no metacyclic group with parameters {(N, M, r, s)}")
    mul = _metacyclic_mul(N, M, r, s)
    elements = [(i, j, v) for i in range(N) for j in range(M) for v in range(1 << e)]
    one = (0, 0, 0)
    gens = [(1 % N, 0, 0)] + ([(0, 1, 0)] if M > 1 else []) + [(0, 0, 1 << t) for t in range(e)]
    central = [z for z in elements if z != one and mul(z, z) == one and all(mul(z, g) == mul(g, z) for g in gens)]
    if not 0 <= z_index < len(central):
        raise UnsupportedFamily(f"group {(N, M, r, s, e)} has {len(central)} central involutions")
    z = central[z_index]
    coord, sign = {}, {}
    for h in elements:
        if h not in coord:
            coord[h] = coord[mul(z, h)] = len(coord) // 2
            sign[h], sign[mul(z, h)] = 1, -1
    reps = sorted((c, h) for h, c in coord.items() if sign[h] == 1)
    out = []
    for g in gens:
        img, sgn = [], []
        for _, h in reps:
            y = mul(g, h)
            img.append(coord[y])
            sgn.append(sign[y])
        out.append((tuple(img), tuple(sgn)))
    return out


@functools.lru_cache(maxsize=None)
def regular_variants(m: int) -> tuple:
    """Variant names ``regular:N,M,r,s,e,z`` for the regular signed groups on m coordinates.

    One name is kept per conjugacy-invariant fingerprint (orders and traces
    of all elements), which removes most repeated presentations.
    """
    out, seen = [], set()
    order = 2 * m
    e = 0
    while order % (1 << e) == 0:
        rest = order >> e
        for N in range(1, rest + 1):
            if rest % N:
                continue
            M = rest // N
            for r in range(1 % N if N > 1 else 0, max(N, 1)):
                for s in range(N):
                    if not _metacyclic_ok(N, M, r, s):
                        continue
                    for z in range(2 * m):
                        try:
                            gens = _regular_generators(N, M, r, s, e, z)
                        except UnsupportedFamily:
                            break
                        key = _fingerprint(gens, m)
                        if key not in seen:
                            seen.add(key)
                            out.append(f"regular:{N},{M},{r},{s},{e},{z}")
        e += 1
    return tuple(out)


def _fingerprint(gens, m):
    g = GroupSpec(m, tuple(SignedPermutation(i, s) for i, s in gens), "custom")
    stats = []
    for x in g.elements():
        k, y = 1, x
        while not y.is_identity():
            y = compose(x, y)
            k += 1
        trace = sum(sg for i, (im, sg) in enumerate(zip(x.image, x.sign)) if im == i)
        stats.append((k, trace))
    return tuple(sorted(stats))


def builtin_family(tag: str, n: int, q: int = 0, variant: str = "full") -> GroupSpec:
    """Generating set for one of the shipped group families.

    ``tag`` is ``s``/``sq`` (signed, transitive on the 2(n-q) coordinate/sign
    pairs of the first n-q coordinates), ``p``/``pq`` (sign-free, transitive
    on the first n-q coordinates) or ``n`` (intransitive products).

    Variants for s/sq: ``full``, ``negacyclic``, ``negacyclic-affine:<a>``,
    ``<perm>*<sign>`` with perm in PERM_KINDS and sign in SIGN_KINDS,
    ``regular:N,M,r,s,e,z`` (see regular_variants) and ``random:<seed>``.  Variants for p/pq: ``<perm>``.  Variants for n:
    ``<v1>@<m1>+<v2>@<m2>+...`` (direct product on consecutive blocks) or
    ``diag:<v>@<m>x<copies>`` (one group acting identically on each block).
    """
    if tag not in ("s", "sq", "p", "pq", "n"):
        raise UnsupportedFamily(f"unknown family tag {tag!r}")
    if not 0 <= q < n:
        raise UnsupportedFamily(f"need 0 <= q < n, got q={q}, n={n}")
    m = n - q
    family_tag = tag.rstrip("q") + ("q" if q else "")
    if tag == "n":
        family_tag = "n"
        gens = _product_generators(variant, n, m)
    elif variant.startswith("random:"):
        return random_transitive_family(n, q, seed=int(variant.split(":")[1]), signed=tag.startswith("s"))
    else:
        signed = tag.startswith("s")
        gens = [_embed(img, sgn, n) for img, sgn in _block_generators(variant, m, signed)]
    gens = [g for g in gens if not g.is_identity()]
    return GroupSpec(n, tuple(gens), family_tag, q, name=f"{tag[0]}{q or ''}:{variant}")


def _is_signed_variant(variant: str) -> bool:
    perm_kind, _, sign_kind = variant.partition("*")
    return not (perm_kind in PERM_KINDS and sign_kind in ("", "none"))


def _product_generators(variant: str, n: int, m: int) -> list:
    gens = []
    if variant.startswith("diag:"):
        inner_variant, _, shape = variant[5:].rpartition("@")
        size, copies = (int(x) for x in shape.split("x"))
        if size * copies != m:
            raise UnsupportedFamily(f"{copies} blocks of size {size} do not cover {m} coordinates")
        signed = _is_signed_variant(inner_variant)
        for img, sgn in _block_generators(inner_variant, size, signed):
            full_img, full_sgn = [], []
            for c in range(copies):
                full_img += [c * size + j for j in img]
                full_sgn += list(sgn)
            full_img += list(range(m, n))
            full_sgn += [1] * (n - m)
            gens.append(SignedPermutation(tuple(full_img), tuple(full_sgn)))
        return gens
    offset = 0
    for part in variant.split("+"):
        inner_variant, _, size = part.rpartition("@")
        size = int(size)
        signed = _is_signed_variant(inner_variant)
        for img, sgn in _block_generators(inner_variant, size, signed):
            gens.append(_embed(img, sgn, n, offset))
        offset += size
    if offset != m:
        raise UnsupportedFamily(f"blocks of {variant!r} cover {offset} coordinates, expected {m}")
    return gens


def random_signed_permutation(n: int, rng: random.Random, m: int | None = None) -> SignedPermutation:
    """Uniform signed permutation of the first m coordinates (default all), fixing the rest."""
    m = n if m is None else m
    img = list(range(m))
    rng.shuffle(img)
    sgn = [rng.choice((1, -1)) for _ in range(m)]
    return _embed(img, sgn, n)


def random_transitive_family(n: int, q: int = 0, seed: int = 0, signed: bool = True,
                             max_order: int | None = None, attempts: int = 200) -> GroupSpec:
    """Two-generated subgroup, transitive on the first n-q coordinates (and their signs).

    Candidates are drawn from a seeded RNG until one is transitive and, when
    ``max_order`` is given, not larger than it.
    """
    m = n - q
    rng = random.Random(f"{n}:{q}:{seed}:{signed}")
    tag = ("s" if signed else "p") + ("q" if q else "")
    for _ in range(attempts):
        gens = []
        for _ in range(2):
            g = random_signed_permutation(n, rng, m)
            if not signed:
                g = SignedPermutation(g.image, (1,) * n)
            gens.append(g)
        gens = [g for g in gens if not g.is_identity()]
        spec = GroupSpec(n, tuple(gens), tag, q, name=f"{'s' if signed else 'p'}{q or ''}:random:{seed}")
        if signed:
            ok = spec.is_transitive_on_pairs(m)
        else:
            ok = len(spec.point_orbit(0)) == m
        if ok and (max_order is None or spec.order() <= max_order):
            return spec
    raise UnsupportedFamily(f"no transitive random subgroup found for n={n}, q={q}, seed={seed}")


def trivial_group(n: int) -> GroupSpec:
    return GroupSpec(n, (), "custom", 0, name="trivial")


def full_group(n: int) -> GroupSpec:
    return builtin_family("s", n, 0, "full")


# -- generator files --------------------------------------------------------

def parse_group_text(text: str, family_tag: str = "custom", q: int = 0, name: str = "") -> GroupSpec:
    n = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if n is None:
                if not line.startswith("n="):
                    raise MalformedFile(f"line {lineno}: expected 'n=<dim>'")
                n = int(line[2:])
                continue
            if line.startswith("perm2n:"):
                perm = [int(x) - 1 for x in line[len("perm2n:"):].split()]
                if len(perm) != 2 * n:
                    raise MalformedFile(f"line {lineno}: perm2n needs {2 * n} entries")
                gens.append(from_degree_2n_perm(perm))
                continue
            left, right = line.split(";")
            left, right = left.strip(), right.strip()
            if not left.startswith("img:") or not right.startswith("sgn:"):
                raise MalformedFile(f"line {lineno}: expected 'img: ... ; sgn: ...'")
            img = [int(x) - 1 for x in left[4:].split()]
            sgn = [int(x) for x in right[4:].split()]
            if len(img) != n or len(sgn) != n:
                raise MalformedFile(f"line {lineno}: generator length differs from n={n}")
            gens.append(SignedPermutation(tuple(img), tuple(sgn)))
        except (ValueError, IndexError) as exc:
            if isinstance(exc, MalformedFile):
                raise
            raise MalformedFile(f"line {lineno}: {raw.strip()!r}: {exc}") from exc
    if n is None:
        raise MalformedFile("missing 'n=<dim>' header")
    return GroupSpec(n, tuple(gens), family_tag, q, name=name or "custom")


def read_group_file(path, family_tag: str = "custom", q: int = 0) -> GroupSpec:
    path = Path(path)
    return parse_group_text(path.read_text(encoding="utf-8"), family_tag, q, name=f"file:{path.name}")


def format_group(g: GroupSpec) -> str:
    lines = [f"# {g.name or g.family_tag}", f"n={g.n}"]
    lines += [str(s) for s in g.generators]
    return "\n".join(lines) + "\n"


def write_group_file(path, g: GroupSpec) -> None:
    Path(path).write_text(format_group(g), encoding="utf-8")


# -- orbits -----------------------------------------------------------------

@dataclass
class Orbit:
    representative: tuple
    size: int
    indices: np.ndarray = field(repr=False)


@dataclass
class OrbitTable:
    shell: ShellId
    group: GroupSpec
    vectors: np.ndarray = field(repr=False)
    orbits: list

    def members(self, i: int) -> np.ndarray:
        return self.vectors[self.orbits[i].indices]

    def __len__(self):
        return len(self.orbits)

    def sizes(self) -> np.ndarray:
        return np.array([o.size for o in self.orbits], dtype=np.int64)


def generator_index_maps(vectors: np.ndarray, k: int, generators) -> list:
    """For each generator, the array mapping row i of ``vectors`` to the row of its image."""
    keys = vector_keys(vectors, k)
    maps = []
    if keys is not None:
        for g in generators:
            img_keys = vector_keys(apply_array(g, vectors), k)
            maps.append(np.searchsorted(keys, img_keys))
    else:
        lookup = {tuple(v): i for i, v in enumerate(vectors.tolist())}
        for g in generators:
            maps.append(np.fromiter((lookup[tuple(w)] for w in apply_array(g, vectors).tolist()),
                                    dtype=np.int64, count=len(vectors)))
    return maps


def partition_orbits(shell, g: GroupSpec, cap: int = DEFAULT_SHELL_CAP) -> OrbitTable:
    """Split the shell into G-orbits; orbits are listed by descending representative.

    The representative of an orbit is its lexicographically greatest member.
    """
    shell = _as_shell(shell)
    if shell.n != g.n:
        raise DimensionMismatch(f"group on {g.n} coordinates, shell in dimension {shell.n}")
    vectors = enumerate_shell(shell, cap=cap)
    count = len(vectors)
    if count == 0:
        return OrbitTable(shell, g, vectors, [])
    maps = generator_index_maps(vectors, shell.k, g.generators)
    if maps:
        rows = np.concatenate([np.arange(count)] * len(maps))
        cols = np.concatenate(maps)
        adj = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(count, count))
        _, labels = connected_components(adj, directed=True, connection="weak")
    else:
        labels = np.arange(count)
    order = np.argsort(labels, kind="stable")
    sorted_labels = labels[order]
    starts = np.flatnonzero(np.r_[True, sorted_labels[1:] != sorted_labels[:-1]])
    groups = np.split(order, starts[1:])
    # vectors are lexicographically sorted, so the greatest member has the largest index
    groups.sort(key=lambda idx: -int(idx[-1]))
    orbits = [Orbit(tuple(int(x) for x in vectors[idx[-1]]), len(idx), idx) for idx in groups]
    return OrbitTable(shell, g, vectors, orbits)
