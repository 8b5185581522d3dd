"""Shell codes, spherical codes and the constructions that connect them.

Everything here is exact: inner products inside one shell are integers and
cosines between different shells are kept as ``c * sqrt(d)`` with rational
``c`` and square-free ``d`` (see :class:`Cosine`).
"""
from __future__ import annotations

import functools
import itertools
import json
import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (CosineExceeded, DegenerateSpan, DimensionMismatch, DuplicatePoint,
                     IrrationalAngle, MalformedFile, NoKnownConstruction, NotOrthogonal,
                     UnequalRowNorms, VerificationFailed)
from .shellgeom import CodeSpec, ShellId, format_vector, parse_vector_lines


# -- exact cosines ----------------------------------------------------------

def _squarefree_split(m: int):
    """m = f*f*d with d square-free; returns (f, d)."""
    f, d = 1, 1
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1
    return f, d * m


@functools.total_ordering
class Cosine:
    """Exact real number ``coef * sqrt(radicand)`` with square-free radicand."""

    __slots__ = ("coef", "radicand")

    def __init__(self, coef, radicand: int = 1):
        coef = Fraction(coef)
        if radicand < 1:
            raise ValueError("radicand must be positive")
        f, d = _squarefree_split(int(radicand))
        coef *= f
        if coef == 0:
            d = 1
        self.coef = coef
        self.radicand = d

    @classmethod
    def from_inner(cls, ip: int, k1: int, k2: int) -> "Cosine":
        """Cosine of the angle between x in s_k1 and y in s_k2 with <x, y> = ip."""
        f, d = _squarefree_split(k1 * k2)
        return cls(Fraction(ip, f * d), d)

    @property
    def is_rational(self):
        return self.radicand == 1

    def _key(self):
        sign = (self.coef > 0) - (self.coef < 0)
        return sign, self.coef * self.coef * self.radicand

    def __eq__(self, other):
        if not isinstance(other, Cosine):
            if isinstance(other, (numbers.Rational, int)):
                other = Cosine(other)
            else:
                return NotImplemented
        return self.coef == other.coef and self.radicand == other.radicand

    def __lt__(self, other):
        if not isinstance(other, Cosine):
            other = Cosine(Fraction(other))
        s1, q1 = self._key()
        s2, q2 = other._key()
        if s1 != s2:
            return s1 < s2
        return q1 < q2 if s1 > 0 else q1 > q2

    def __hash__(self):
        return hash((self.coef, self.radicand))

    def __float__(self):
        return float(self.coef) * math.sqrt(self.radicand)

    def __str__(self):
        if self.radicand == 1:
            return str(self.coef)
        return f"{self.coef}*sqrt({self.radicand})"

    def __repr__(self):
        return f"Cosine({self})"


def parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise IrrationalAngle(f"{value!r} is not an exact rational") from exc
    if getattr(value, "is_rational", None) is True:  # sympy numbers
        return Fraction(str(value))
    raise IrrationalAngle(f"{value!r} is not an exact rational")


# -- shell codes ------------------------------------------------------------

@dataclass
class ShellCode:
    spec: CodeSpec
    vectors: list
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vectors = [tuple(int(x) for x in v) for v in self.vectors]

    def __len__(self):
        return len(self.vectors)

    def array(self) -> np.ndarray:
        return np.asarray(self.vectors, dtype=np.int64).reshape(len(self.vectors), self.spec.n)


@dataclass
class VerifyReport:
    ok: bool
    norms_ok: bool
    distinct_ok: bool
    bound_ok: bool
    max_inner: int | None
    angle_set: list
    bad_norm: list = field(default_factory=list)
    duplicates: list = field(default_factory=list)
    violating_pair: tuple | None = None

    def summary(self) -> str:
        if self.ok:
            return f"PASS max inner product {self.max_inner}"
        parts = []
        if not self.norms_ok:
            parts.append(f"{len(self.bad_norm)} vectors off the shell")
        if not self.distinct_ok:
            parts.append(f"{len(self.duplicates)} repeated vectors")
        if not self.bound_ok:
            a, b = self.violating_pair
            parts.append(f"inner product {self.max_inner} between ({format_vector(a)}) and ({format_vector(b)})")
        return "FAIL " + "; ".join(parts)


def verify_shell_code(code: ShellCode) -> VerifyReport:
    spec = code.spec
    arr = code.array()
    if arr.shape[1] != spec.n:
        raise DimensionMismatch(f"vectors of length {arr.shape[1]} in a code for dimension {spec.n}")
    norms = np.einsum("ij,ij->i", arr, arr)
    bad = [code.vectors[i] for i in np.flatnonzero(norms != spec.k)]
    seen = {}
    dups = []
    for v in code.vectors:
        if v in seen:
            dups.append(v)
        seen[v] = True
    max_ip = None
    pair = None
    angles = set()
    count = len(arr)
    chunk = max(1, 4_000_000 // max(count, 1))
    for lo in range(0, count, chunk):
        block = arr[lo:lo + chunk] @ arr.T
        for r in range(block.shape[0]):
            row = block[r, lo + r + 1:]
            if row.size == 0:
                continue
            angles.update(np.unique(row).tolist())
            j = int(np.argmax(row))
            if max_ip is None or row[j] > max_ip:
                max_ip = int(row[j])
                pair = (code.vectors[lo + r], code.vectors[lo + r + 1 + j])
    bound_ok = max_ip is None or max_ip <= spec.t
    return VerifyReport(
        ok=not bad and not dups and bound_ok,
        norms_ok=not bad,
        distinct_ok=not dups,
        bound_ok=bound_ok,
        max_inner=max_ip,
        angle_set=sorted(angles, reverse=True),
        bad_norm=bad,
        duplicates=dups,
        violating_pair=None if bound_ok else pair,
    )


def assemble(clique, table, spec: CodeSpec, graph=None) -> ShellCode:
    """Union of the orbits selected by a clique of the compatibility graph."""
    from .orbitgraph import admissible_orbits

    vertices = graph.vertices if graph is not None else admissible_orbits(table, spec.t)
    vectors = []
    for v in sorted(clique.vertices):
        orbit_index = vertices[v].orbit_index
        vectors.extend(tuple(int(x) for x in row) for row in table.members(orbit_index))
    if len(vectors) != clique.weight:
        raise VerificationFailed(f"clique weight {clique.weight} but {len(vectors)} vectors assembled")
    vectors.sort(reverse=True)
    group = table.group
    provenance = {
        "construction": "search",
        "group": group.name,
        "group_tag": group.tag,
        "group_order": group.order(),
        "generators": [str(g) for g in group.generators],
        "clique": [int(v) for v in sorted(clique.vertices)],
        "orbit_representatives": [list(vertices[v].representative) for v in sorted(clique.vertices)],
        "proven_optimal": bool(clique.proven_optimal),
    }
    code = ShellCode(spec, vectors, provenance)
    report = verify_shell_code(code)
    if not report.ok:
        raise VerificationFailed(f"assembled code does not verify: {report.summary()}")
    return code


# -- integer orthogonal matrices -------------------------------------------

@dataclass(frozen=True)
class IntegerOrthogonalMatrix:
    rows: tuple
    c: int

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("matrix rows must be non-empty and of equal length")
        for i, r in enumerate(rows):
            if sum(x * x for x in r) != self.c:
                raise UnequalRowNorms(f"row {i + 1} has squared norm {sum(x * x for x in r)}, expected {self.c}")
        for i, j in itertools.combinations(range(len(rows)), 2):
            if sum(a * b for a, b in zip(rows[i], rows[j])) != 0:
                raise NotOrthogonal(f"rows {i + 1} and {j + 1} are not orthogonal")

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)


def _direct_sum(blocks, c) -> IntegerOrthogonalMatrix:
    n = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for r in b:
            row = [0] * n
            row[offset:offset + len(r)] = r
            rows.append(tuple(row))
        offset += len(b)
    return IntegerOrthogonalMatrix(tuple(rows), c)


def _two_squares(c):
    for a in range(1, math.isqrt(c) + 1):
        b2 = c - a * a
        b = math.isqrt(b2)
        if b * b == b2 and b >= a:
            return a, b
    return None


def _four_squares(c):
    """Representation c = a^2+b^2+c^2+d^2 with as many nonzero terms as possible."""
    best = None
    r = math.isqrt(c)
    for a in range(r, -1, -1):
        for b in range(min(a, math.isqrt(c - a * a)), -1, -1):
            for d1 in range(min(b, math.isqrt(c - a * a - b * b)), -1, -1):
                rest = c - a * a - b * b - d1 * d1
                d2 = math.isqrt(rest)
                if d2 * d2 == rest and d2 <= d1:
                    cand = (a, b, d1, d2)
                    if best is None or sum(x != 0 for x in cand) > sum(x != 0 for x in best):
                        best = cand
    return best


def _fewest_squares(m):
    """Shortest list of positive integers whose squares sum to m (at most four)."""

    def rec(rest, terms, top):
        if rest == 0:
            return ()
        if terms == 0:
            return None
        low = math.isqrt((rest - 1) // terms) + 1 if terms > 1 else math.isqrt(rest)
        for a in range(min(top, math.isqrt(rest)), max(low, 1) - 1, -1):
            tail = rec(rest - a * a, terms - 1, a)
            if tail is not None:
                return (a,) + tail
        return None

    for terms in range(1, 5):
        found = rec(m, terms, m)
        if found is not None:
            return found
    raise AssertionError("every positive integer is a sum of four squares")


def _quaternion_block(a, b, c, d):
    return ((a, -b, -c, -d), (b, a, -d, c), (c, d, a, -b), (d, -c, b, a))


def builtin_orthogonal(c: int, n: int, kind: str | None = None) -> IntegerOrthogonalMatrix:
    """Square n x n integer matrix Q with Q Q^T = c I.

    kinds: ``scalar`` (c a square), ``pairs`` (2x2 blocks [[a,b],[b,-a]],
    c = a^2 + b^2, n even), ``quaternion`` (4x4 blocks from c as a sum of four
    squares, 4 | n, padded with one pairs block when n = 2 mod 4).  With
    ``kind=None`` the first applicable kind in that order is used.
    """
    if c < 1 or n < 1:
        raise ValueError("need c >= 1 and n >= 1")
    kinds = [kind] if kind else ["scalar", "pairs", "quaternion"]
    for kd in kinds:
        if kd == "scalar":
            lam = math.isqrt(c)
            if lam * lam == c:
                return _direct_sum([((lam,),)] * n, c)
        elif kd == "pairs":
            ab = _two_squares(c)
            if ab and n % 2 == 0:
                a, b = ab
                return _direct_sum([((a, b), (b, -a))] * (n // 2), c)
        elif kd == "quaternion":
            rep = _four_squares(c)
            if n % 4 == 0:
                return _direct_sum([_quaternion_block(*rep)] * (n // 4), c)
            ab = _two_squares(c)
            if n % 4 == 2 and ab:
                a, b = ab
                return _direct_sum([_quaternion_block(*rep)] * (n // 4) + [((a, b), (b, -a))], c)
        else:
            raise ValueError(f"unknown kind {kd!r}")
    raise NoKnownConstruction(f"no built-in integer orthogonal matrix with c={c} in dimension {n}")


def tensor_orthogonal(q1: IntegerOrthogonalMatrix, q2: IntegerOrthogonalMatrix) -> IntegerOrthogonalMatrix:
    rows = np.kron(q1.array(), q2.array())
    return IntegerOrthogonalMatrix(tuple(map(tuple, rows.tolist())), q1.c * q2.c)


def embed_scale(code: ShellCode, q: IntegerOrthogonalMatrix) -> ShellCode:
    """Image of the code under v -> Qv: shell k goes to c*k and t to c*t."""
    n = code.spec.n
    if q.shape != (n, n):
        raise DimensionMismatch(f"matrix of shape {q.shape} for a code in dimension {n}")
    out = code.array() @ q.array().T
    spec = CodeSpec(ShellId(n, q.c * code.spec.k), q.c * code.spec.t)
    provenance = dict(code.provenance)
    provenance["embeddings"] = list(code.provenance.get("embeddings", [])) + [
        {"c": q.c, "rows": [list(r) for r in q.rows], "from_k": code.spec.k}]
    return ShellCode(spec, [tuple(r) for r in out.tolist()], provenance)


# -- rational codes into integer shells ------------------------------------

def _rational_matrix(rows):
    try:
        return [[parse_rational(x) for x in r] for r in rows]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        if isinstance(exc, IrrationalAngle):
            raise
        raise IrrationalAngle(str(exc)) from exc


def rational_embed(points=None, gram=None) -> ShellCode:
    """Integral copy, in some shell of some Z^q, of a code with rational inner products.

    Give either rational ``points`` spanning their ambient space or a rational
    ``gram`` matrix; all points must share one squared norm.  The returned
    vectors have Gram matrix ``L^2 * gram`` for an integer L.

    Orthogonalize a basis chosen among the points, scale each basis vector
    by the least integer making its squared norm m_j integral, send it to a
    vector of Z^4 (or fewer coordinates) with squared norm m_j in its own
    block, and clear the remaining denominators.
    """
    if (points is None) == (gram is None):
        raise ValueError("give exactly one of points or gram")
    if points is not None:
        pts = _rational_matrix(points)
        if not pts:
            raise DegenerateSpan("no points")
        dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise DimensionMismatch("points of different lengths")
        g = [[sum(a * b for a, b in zip(p, q)) for q in pts] for p in pts]
    else:
        g = _rational_matrix(gram)
        dim = None
        if any(len(r) != len(g) for r in g):
            raise ValueError("gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(i)):
            raise ValueError("gram matrix must be symmetric")
    count = len(g)
    if count == 0:
        raise DegenerateSpan("no points")
    norm = g[0][0]
    if norm <= 0:
        raise DegenerateSpan("zero vector in the code")
    if any(g[i][i] != norm for i in range(count)):
        raise ValueError("all points must have the same norm")

    # proj[j][i] = <u_j, x_i> for the orthogonal vectors u_j; sq[j] = <u_j, u_j>
    proj, sq, basis = [], [], []
    for i in range(count):
        resid = g[i][i] - sum(p[i] * p[i] / s for p, s in zip(proj, sq))
        if resid < 0:
            raise ValueError("gram matrix is not positive semidefinite")
        if resid == 0:
            continue
        row = [g[i][x] - sum(p[i] * p[x] / s for p, s in zip(proj, sq)) for x in range(count)]
        proj.append(row)
        sq.append(resid)
        basis.append(i)
    # dependent points must be consistent (zero residual inner products)
    for i in range(count):
        resid = [g[i][x] - sum(p[i] * p[x] / s for p, s in zip(proj, sq)) for x in range(count)]
        if any(r != 0 for r in resid):
            raise ValueError("gram matrix is not positive semidefinite")
    if dim is not None and len(basis) != dim:
        raise DegenerateSpan(f"points span a {len(basis)}-dimensional subspace of R^{dim}")

    blocks = []
    for row, s_j in zip(proj, sq):
        # least integer scale with an integral squared norm, then a short vector of that norm
        scale = 1
        while (scale * scale * s_j).denominator != 1:
            scale += 1
        w = _fewest_squares(int(scale * scale * s_j))
        blocks.append((w, [x / (s_j * scale) for x in row]))
    denom = math.lcm(*(c.denominator for _, coefs in blocks for c in coefs))
    vectors = []
    for i in range(count):
        v = []
        for w, coefs in blocks:
            a = coefs[i] * denom
            v.extend(int(a * x) for x in w)
        vectors.append(tuple(v))
    if len(set(vectors)) != len(vectors):
        raise DuplicatePoint("the input contains repeated points")
    q = len(vectors[0])
    k = sum(x * x for x in vectors[0])
    if count > 1:
        arr = np.array(vectors, dtype=object)
        ips = arr @ arr.T
        t = max(int(ips[i][j]) for i in range(count) for j in range(count) if i != j)
    else:
        t = k - 1
    provenance = {"construction": "rational_embed", "scale": denom, "block_dims": [len(w) for w, _ in blocks],
                  "basis": basis}
    return ShellCode(CodeSpec(ShellId(q, k), t), vectors, provenance)


# -- spherical codes --------------------------------------------------------

@dataclass
class SphericalCode:
    n: int
    points: list  # (vector, k) pairs, the point being vector / sqrt(k)
    t_max: Fraction | None
    max_cosine: Cosine | None
    angle_set: frozenset

    @property
    def N(self):
        return len(self.points)


def cosine_accepts(ips, k1, k2, p, q):
    """Elementwise test ips / sqrt(k1 k2) <= p/q in integer arithmetic (q > 0)."""
    if p >= 0:
        return (ips <= 0) | (q * q * ips * ips <= p * p * k1 * k2)
    return (ips < 0) & (q * q * ips * ips >= p * p * k1 * k2)


def union_scaled(parts: Sequence[ShellCode], t_max) -> SphericalCode:
    """Normalized union of shell codes, checked exactly against a cosine bound.

    For x in s_k1 and y in s_k2 the cosine <x,y>/sqrt(k1 k2) is compared with
    t_max = p/q through integers only.  Raises CosineExceeded (with the
    offending pair) or DuplicatePoint.
    """
    t_max = parse_rational(t_max)
    if not parts:
        raise ValueError("no parts")
    n = parts[0].spec.n
    if any(part.spec.n != n for part in parts):
        raise DimensionMismatch("parts live in different dimensions")
    p, q = t_max.numerator, t_max.denominator
    arrays = []
    for part in parts:
        arr = part.array()
        norms = np.einsum("ij,ij->i", arr, arr)
        if (norms != part.spec.k).any():
            raise ValueError(f"a vector of a part for k={part.spec.k} is off its shell")
        arrays.append(arr)
    big = max(abs(p), q) > 10**6 or max(part.spec.k for part in parts) > 10**4
    angles = {}
    for a, b in itertools.combinations_with_replacement(range(len(parts)), 2):
        k1, k2 = parts[a].spec.k, parts[b].spec.k
        ips = arrays[a] @ arrays[b].T
        if a == b:
            mask = np.triu(np.ones(ips.shape, dtype=bool), 1)
        else:
            mask = np.ones(ips.shape, dtype=bool)
        if big:
            ips = ips.astype(object)
        dup = mask & (ips > 0) & (ips * ips == k1 * k2)
        if dup.any():
            i, j = (int(x[0]) for x in np.nonzero(dup))
            pair = ((parts[a].vectors[i], k1), (parts[b].vectors[j], k2))
            raise DuplicatePoint("two vectors normalize to the same point", pair)
        bad = mask & ~cosine_accepts(ips, k1, k2, p, q)
        if bad.any():
            i, j = (int(x[0]) for x in np.nonzero(bad))
            pair = ((parts[a].vectors[i], k1), (parts[b].vectors[j], k2))
            cos = Cosine.from_inner(int(ips[i, j]), k1, k2)
            raise CosineExceeded(f"cosine {cos} exceeds {t_max}", pair, cos)
        for ip in np.unique(np.asarray(ips[mask], dtype=np.int64)).tolist():
            angles[Cosine.from_inner(int(ip), k1, k2)] = True
    angle_set = frozenset(angles)
    max_cos = max(angle_set) if angle_set else None
    if max_cos is not None and max_cos > Cosine(t_max):
        raise AssertionError("exact recheck of the maximum cosine failed")
    points = [(v, part.spec.k) for part in parts for v in part.vectors]
    return SphericalCode(n, points, t_max, max_cos, angle_set)


def to_spherical(code: ShellCode) -> SphericalCode:
    """The shell code as a spherical code with cosine bound t/k."""
    return union_scaled([code], Fraction(code.spec.t, code.spec.k))


def augment(code: ShellCode, extra, t_max=None) -> SphericalCode:
    """Add explicit (vector, k) points to a shell code; default bound is the code's own t/k."""
    t_max = Fraction(code.spec.t, code.spec.k) if t_max is None else t_max
    pieces = [code]
    for v, k in extra:
        v = tuple(int(x) for x in v)
        if sum(x * x for x in v) != k:
            raise ValueError(f"extra vector {v} is not in shell {k}")
        pieces.append(ShellCode(CodeSpec(ShellId(len(v), k), k - 1), [v], {"construction": "added"}))
    return union_scaled(pieces, t_max)


def spherical_params(code: SphericalCode):
    """(n, N, max cosine, angle set sorted descending)."""
    return code.n, code.N, code.max_cosine, sorted(code.angle_set, reverse=True)


def spherical_from_points(points, t_max) -> SphericalCode:
    """Group (vector, k) points by shell and run union_scaled."""
    by_k = {}
    for v, k in points:
        by_k.setdefault(int(k), []).append(tuple(int(x) for x in v))
    parts = [ShellCode(CodeSpec(ShellId(len(vs[0]), k), k - 1), vs) for k, vs in sorted(by_k.items())]
    return union_scaled(parts, t_max)


# -- files ------------------------------------------------------------------

def _header_fields(line: str) -> dict:
    out = {}
    for tok in line.split():
        key, _, value = tok.partition("=")
        if not value:
            raise MalformedFile(f"bad header token {tok!r}")
        out[key] = value
    return out


def format_witness(code: ShellCode) -> str:
    spec = code.spec
    lines = [f"n={spec.n} k={spec.k} t={spec.t}"]
    if code.provenance:
        lines.append("# provenance: " + json.dumps(code.provenance, sort_keys=True))
    lines += [format_vector(v) for v in code.vectors]
    return "\n".join(lines) + "\n"


def write_witness(path, code: ShellCode) -> None:
    Path(path).write_text(format_witness(code), encoding="utf-8")


def parse_witness(text: str) -> ShellCode:
    lines = text.splitlines()
    provenance = {}
    body = []
    header = None
    for raw in lines:
        stripped = raw.strip()
        if stripped.startswith("# provenance:"):
            provenance = json.loads(stripped[len("# provenance:"):])
            continue
        if header is None:
            content = stripped.split("#", 1)[0].strip()
            if not content:
                continue
            header = content
            continue
        body.append(raw)
    if header is None:
        raise MalformedFile("missing 'n=<n> k=<k> t=<t>' header")
    try:
        fields = _header_fields(header)
        spec = CodeSpec(ShellId(int(fields["n"]), int(fields["k"])), int(fields["t"]))
    except (KeyError, ValueError) as exc:
        raise MalformedFile(f"bad witness header {header!r}") from exc
    vectors = parse_vector_lines(body)
    if any(len(v) != spec.n for v in vectors):
        raise MalformedFile(f"vector length differs from n={spec.n}")
    return ShellCode(spec, vectors, provenance)


def read_witness(path) -> ShellCode:
    return parse_witness(Path(path).read_text(encoding="utf-8"))


def format_spherical(code: SphericalCode) -> str:
    tmax = code.t_max if code.t_max is not None else code.max_cosine
    lines = [f"n={code.n} tmax={Fraction(tmax).numerator}/{Fraction(tmax).denominator}"]
    lines += [f"k={k}: {format_vector(v)}" for v, k in code.points]
    return "\n".join(lines) + "\n"


def write_spherical(path, code: SphericalCode) -> None:
    Path(path).write_text(format_spherical(code), encoding="utf-8")


def read_spherical(path) -> SphericalCode:
    """Read a spherical code file and re-verify it against its tmax header."""
    header = None
    points = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = _header_fields(line)
            continue
        left, _, right = line.partition(":")
        if not left.startswith("k=") or not right:
            raise MalformedFile(f"line {lineno}: expected 'k=<k>: <vector>'")
        points.append((tuple(int(x) for x in right.split()), int(left[2:])))
    if header is None or "n" not in header or "tmax" not in header:
        raise MalformedFile("missing 'n=<n> tmax=<p>/<q>' header")
    code = spherical_from_points(points, Fraction(header["tmax"]))
    if code.n != int(header["n"]):
        raise MalformedFile("dimension in header differs from vectors")
    return code


def read_matrix(path) -> IntegerOrthogonalMatrix:
    c = None
    rows = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if c is None:
            if not line.startswith("c="):
                raise MalformedFile("matrix file must start with 'c=<c>'")
            c = int(line[2:])
            continue
        rows.append(tuple(int(x) for x in line.split()))
    if c is None or not rows:
        raise MalformedFile("empty matrix file")
    if len(rows) != len(rows[0]):
        raise MalformedFile("matrix must be square")
    return IntegerOrthogonalMatrix(tuple(rows), c)


def write_matrix(path, q: IntegerOrthogonalMatrix) -> None:
    lines = [f"c={q.c}"] + [format_vector(r) for r in q.rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- bound catalog ----------------------------------------------------------

@dataclass
class BoundRecord:
    n: int
    t: int
    k: int
    bound: int
    construction_tag: str
    witness: str
    group: str = ""
    proven_optimal: bool = False

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(**{f: d[f] for f in cls.__dataclass_fields__ if f in d})

    def witness_path(self, base=None) -> Path:
        p = Path(self.witness)
        return p if p.is_absolute() or base is None else Path(base) / p

    def check(self, base=None) -> ShellCode:
        """Load the witness and confirm it matches and verifies."""
        code = read_witness(self.witness_path(base))
        if (code.spec.n, code.spec.k, code.spec.t) != (self.n, self.k, self.t):
            raise VerificationFailed(f"witness {self.witness} is for different parameters")
        if len(code) != self.bound:
            raise VerificationFailed(f"witness {self.witness} has {len(code)} vectors, record says {self.bound}")
        report = verify_shell_code(code)
        if not report.ok:
            raise VerificationFailed(f"witness {self.witness}: {report.summary()}")
        return code


def read_catalog(path, verify: bool = True) -> list:
    path = Path(path)
    records = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip():
            continue
        try:
            rec = BoundRecord.from_dict(json.loads(raw))
        except (json.JSONDecodeError, TypeError) as exc:
            raise MalformedFile(f"{path}:{lineno}: {exc}") from exc
        if verify:
            rec.check(path.parent)
        records.append(rec)
    return records


def write_catalog(path, records) -> None:
    Path(path).write_text("".join(r.to_json() + "\n" for r in records), encoding="utf-8")


def merge_records(records) -> dict:
    """Best record per (n, t, k)."""
    best = {}
    for r in records:
        key = (r.n, r.t, r.k)
        if key not in best or r.bound > best[key].bound:
            best[key] = r
    return best


def render_catalog(records, n: int, ts=None, ks=range(4, 16), gap: str = "-") -> str:
    """Text table of lower bounds for dimension n; rows t, columns k, cells like ``18s2``."""
    best = merge_records(r for r in records if r.n == n)
    if ts is None:
        ts = sorted({t for (_, t, _) in best}) or [1]
    ks = list(ks)
    cells = [["t\\k"] + [str(k) for k in ks]]
    for t in ts:
        row = [str(t)]
        for k in ks:
            r = best.get((n, t, k))
            if r is None or not -k <= t <= k - 1:
                row.append(gap if r is None and -k <= t <= k - 1 else "")
            else:
                row.append(f"{r.bound}{r.construction_tag}")
        cells.append(row)
    widths = [max(len(row[i]) for row in cells) for i in range(len(cells[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells) + "\n"


def catalog_row(records, n: int, t: int, ks=range(4, 16)) -> list:
    """Bounds for one table row; None marks a gap."""
    best = merge_records(r for r in records if r.n == n)
    return [best[(n, t, k)].bound if (n, t, k) in best else None for k in ks]
