"""Search driver: orbits -> graph -> clique -> code, over one group or a list of them."""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .assembler import (ShellCode, assemble, builtin_orthogonal, cosine_accepts, embed_scale, merge_records,
                        parse_rational, read_witness, verify_shell_code)
from .cliquesolve import CliqueResult, SolveBudget, max_weight_clique
from .errors import CapExceeded, DimensionMismatch, NoKnownConstruction, UnsupportedFamily
from .orbitgraph import DEFAULT_PAIR_BUDGET, DEFAULT_VERTEX_CAP, build_graph, cached_build_graph
from .shellgeom import DEFAULT_SHELL_CAP, CodeSpec, ShellId, shell_size
from .symgroup import (PERM_KINDS, GroupSpec, builtin_family, full_group, partition_orbits,
                       random_transitive_family, read_group_file, regular_variants, trivial_group)

STATUS_EXIT = {"optimal": 0, "budget": 2, "skipped": 3}


@dataclass
class Caps:
    shell: int = DEFAULT_SHELL_CAP
    vertices: int = DEFAULT_VERTEX_CAP
    pairs: int = DEFAULT_PAIR_BUDGET


@dataclass
class SearchOutcome:
    group: GroupSpec
    status: str  # optimal | budget | skipped
    code: ShellCode | None = None
    result: CliqueResult | None = None
    stats: dict = field(default_factory=dict)
    message: str = ""

    @property
    def size(self) -> int:
        return len(self.code) if self.code is not None else 0


def search_with_group(spec: CodeSpec, group: GroupSpec, budget: SolveBudget | None = None,
                      caps: Caps | None = None, cache_dir=None) -> SearchOutcome:
    caps = caps or Caps()
    stats = {"group": group.name, "group_order": group.order()}
    t0 = time.perf_counter()
    try:
        table = partition_orbits(spec.shell, group, cap=caps.shell)
        stats["orbits"] = len(table)
        stats["orbit_time"] = time.perf_counter() - t0
        t1 = time.perf_counter()
        graph = cached_build_graph(table, spec.t, cache_dir=cache_dir,
                                   vertex_cap=caps.vertices, pair_budget=caps.pairs)
    except CapExceeded as exc:
        stats["time"] = time.perf_counter() - t0
        return SearchOutcome(group, "skipped", stats=stats, message=str(exc))
    stats["vertices"] = len(graph)
    stats["edges"] = graph.edge_count
    stats["graph_time"] = time.perf_counter() - t1
    result = max_weight_clique(graph, budget)
    stats["solve_time"] = result.wall_time
    stats["nodes"] = result.nodes_explored
    code = assemble(result, table, spec, graph)
    stats["time"] = time.perf_counter() - t0
    status = "optimal" if result.proven_optimal else "budget"
    return SearchOutcome(group, status, code, result, stats)


def search_next_shell(spec: CodeSpec, group: GroupSpec, parts, t_max, budget: SolveBudget | None = None,
                      caps: Caps | None = None) -> SearchOutcome:
    """Search a code in spec.shell that can join ``parts`` under the cosine bound ``t_max``.

    Only G-orbits whose every member passes the exact cosine test against
    every vector of every part are offered to the clique search, so
    ``union_scaled(parts + [result.code], t_max)`` succeeds whenever the
    result is not empty.
    """
    caps = caps or Caps()
    t_max = parse_rational(t_max)
    stats = {"group": group.name, "group_order": group.order()}
    t0 = time.perf_counter()
    try:
        table = partition_orbits(spec.shell, group, cap=caps.shell)
    except CapExceeded as exc:
        return SearchOutcome(group, "skipped", stats=stats, message=str(exc))
    ok = np.ones(len(table.vectors), dtype=bool)
    k = spec.k
    for part in parts:
        if part.spec.n != spec.n:
            raise DimensionMismatch("parts live in different dimensions")
        ips = table.vectors @ part.array().T
        k2 = part.spec.k
        ok &= cosine_accepts(ips, k, k2, t_max.numerator, t_max.denominator).all(axis=1)
        ok &= ~((ips > 0) & (ips * ips == k * k2)).any(axis=1)
    allowed = [i for i, orb in enumerate(table.orbits) if ok[orb.indices].all()]
    stats["compatible_orbits"] = len(allowed)
    try:
        graph = build_graph(table, spec.t, vertex_cap=caps.vertices, pair_budget=caps.pairs, allowed=allowed)
    except CapExceeded as exc:
        return SearchOutcome(group, "skipped", stats=stats, message=str(exc))
    result = max_weight_clique(graph, budget)
    code = assemble(result, table, spec, graph)
    stats["time"] = time.perf_counter() - t0
    return SearchOutcome(group, "optimal" if result.proven_optimal else "budget", code, result, stats)


# -- group lists ------------------------------------------------------------

# regular groups are enumerated up to this many coordinates (cost grows fast)
REGULAR_MAX_M = 16


def _is_prime(p):
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def signed_variants(m: int) -> list:
    """Variant names of the shipped signed families on m coordinates."""
    out = ["full", "negacyclic"]
    perms = ["cyclic", "dihedral"]
    if _is_prime(m) and m > 2:
        perms.append("affine")
    if m >= 4 and m & (m - 1) == 0:
        perms.append("affine2")
    if _is_prime(m - 1) and m >= 4:
        perms.append("psl2")
    if m >= 4:
        perms.append("alternating")
    perms.append("symmetric")
    for p in perms:
        signs = ["pm", "even", "all"] if m >= 2 else ["pm"]
        if p == "affine2":
            signs.insert(1, "rm1")
        out += [f"{p}*{s}" for s in signs if not (p == "symmetric" and s == "all")]
    units = [a for a in range(3, 2 * m, 2) if math.gcd(a, 2 * m) == 1]
    out += [f"negacyclic-affine:{a}" for a in units]
    if m <= REGULAR_MAX_M:
        out += list(regular_variants(m))
    return out


def perm_variants(m: int) -> list:
    out = ["cyclic", "dihedral"]
    if _is_prime(m) and m > 2:
        out.append("affine")
    if m >= 4 and m & (m - 1) == 0:
        out.append("affine2")
    if _is_prime(m - 1) and m >= 4:
        out.append("psl2")
    if m >= 4:
        out.append("alternating")
    out.append("symmetric")
    return out


def product_variants(n: int) -> list:
    """Intransitive families: products over two blocks and diagonal actions."""
    out = []
    for a in range(max(1, n // 2), n):
        b = n - a
        if b < 1:
            continue
        for va, vb in (("full", "full"), ("negacyclic", "negacyclic"), ("cyclic*pm", "cyclic*pm")):
            if (a == 1 and va != "full") or (b == 1 and vb != "full"):
                continue
            out.append(f"{va}@{a}+{vb}@{b}")
    for size in range(2, n):
        if n % size == 0:
            for v in ("negacyclic", "cyclic*pm", "cyclic*all", "full"):
                out.append(f"diag:{v}@{size}x{n // size}")
    return out


def family_sweep(n: int, tags=("s", "p", "n"), max_q: int = 2, random_seeds: int = 4) -> list:
    """Shipped group list for a dimension, largest groups first."""
    groups = []
    seen = set()

    def add(spec):
        key = tuple(sorted(str(g) for g in spec.generators))
        if key not in seen:
            seen.add(key)
            groups.append(spec)

    for q in range(0, min(max_q, n - 1) + 1):
        m = n - q
        if "s" in tags:
            for v in signed_variants(m):
                try:
                    add(builtin_family("s", n, q, v))
                except UnsupportedFamily:
                    pass
            for seed in range(random_seeds):
                try:
                    add(random_transitive_family(n, q, seed=seed, signed=True))
                except UnsupportedFamily:
                    pass
        if "p" in tags and m >= 2:
            for v in perm_variants(m):
                try:
                    add(builtin_family("p", n, q, v))
                except UnsupportedFamily:
                    pass
    if "n" in tags:
        for v in product_variants(n):
            try:
                add(builtin_family("n", n, 0, v))
            except UnsupportedFamily:
                pass
    groups.sort(key=lambda g: -g.order())
    return groups


def parse_group_arg(arg: str, n: int) -> list:
    """Group list from a --group argument.

    ``aut`` (full Aut(Z^n) followed by every shipped family), ``full``,
    ``trivial``, ``s``/``s2``/``p1``/``n`` (every shipped variant of that
    family), ``s2:regular`` (all regular signed groups), ``s2:<variant>``
    style single families, or a generator file path.
    """
    if arg == "aut":
        return family_sweep(n)
    if arg == "full":
        return [full_group(n)]
    if arg == "trivial":
        return [trivial_group(n)]
    if Path(arg).is_file():
        return [read_group_file(arg)]
    head, _, variant = arg.partition(":")
    tag = head.rstrip("0123456789")
    q = int(head[len(tag):] or 0)
    if tag not in ("s", "p", "n"):
        raise UnsupportedFamily(f"cannot parse group argument {arg!r}")
    if variant == "regular" and tag == "s":
        return [builtin_family(tag, n, q, v) for v in regular_variants(n - q)]
    if variant:
        return [builtin_family(tag, n, q, variant)]
    if tag == "n":
        return family_sweep(n, tags=("n",), max_q=0)
    m = n - q
    names = signed_variants(m) if tag == "s" else perm_variants(m)
    out = []
    for v in names:
        try:
            out.append(builtin_family(tag, n, q, v))
        except UnsupportedFamily:
            pass
    if tag == "s":
        for seed in range(4):
            try:
                out.append(random_transitive_family(n, q, seed=seed))
            except UnsupportedFamily:
                pass
    return sorted(out, key=lambda g: -g.order())


_TAG_PRIORITY = {"s": 2, "p": 1}


def _rank(outcome):
    # bigger codes first; on ties prefer transitive families, then proven optima
    return outcome.size, _TAG_PRIORITY.get(outcome.group.tag[:1], 0), outcome.status == "optimal"


def _run_one(args):
    spec, group, budget, caps, cache_dir, parts, t_max = args
    if parts:
        return search_next_shell(spec, group, parts, t_max, budget, caps)
    return search_with_group(spec, group, budget, caps, cache_dir)


def search(spec: CodeSpec, groups, budget: SolveBudget | None = None, caps: Caps | None = None,
           total_time: float | None = None, target: int | None = None, cache_dir=None,
           progress=None, workers: int = 1, parts=None, t_max=None):
    """Run search_with_group over ``groups``; returns (best outcome or None, all outcomes).

    With ``parts`` and ``t_max`` every group runs search_next_shell instead,
    so the winner can be joined to the parts under the cosine bound.

    Stops early once ``target`` vectors are reached or ``total_time`` seconds
    have passed.  Equal sizes are broken by family (signed transitive, then
    plain transitive, then the rest) and then by list position, so results
    are deterministic under node limits.  ``workers > 1`` evaluates groups in batches of that
    many processes.
    """
    budget = budget or SolveBudget()
    if target is not None:
        budget = SolveBudget(budget.time_limit, budget.node_limit, target, budget.rng_seed)
    start = time.perf_counter()
    groups = list(groups)
    outcomes = []
    best = None
    workers = max(1, int(workers or 1))
    pool = ProcessPoolExecutor(workers) if workers > 1 and len(groups) > 1 else None
    try:
        for lo in range(0, len(groups), workers):
            if total_time is not None and time.perf_counter() - start > total_time:
                break
            batch = [(spec, g, budget, caps, cache_dir, parts, t_max) for g in groups[lo:lo + workers]]
            results = pool.map(_run_one, batch) if pool else map(_run_one, batch)
            for outcome in results:
                outcomes.append(outcome)
                if progress:
                    progress(outcome)
                if outcome.code is not None and (best is None or _rank(outcome) > _rank(best)):
                    best = outcome
            if target is not None and best is not None and best.size >= target:
                break
    finally:
        if pool:
            pool.shutdown()
    return best, outcomes


def overall_status(best, outcomes) -> str:
    if best is None:
        return "skipped"
    return best.status


def default_budget(seconds: float = 10.0) -> SolveBudget:
    return SolveBudget(time_limit=seconds)


def shell_is_searchable(n: int, k: int, caps: Caps | None = None) -> bool:
    caps = caps or Caps()
    return shell_size(ShellId(n, k)) <= caps.shell


def shipped_catalog_path() -> Path:
    return Path(__file__).parent / "data" / "catalog.jsonl"


def embedding_candidates(records, n: int, t: int, k: int, base=None):
    """Codes for (n, t, k) obtained from catalogued smaller shells.

    A code in s_q with bound t' maps into s_{cq} with bound c t' under an
    integer matrix with Q Q^T = cI, and a code with bound t' <= t is also a
    code with bound t.  Yields (ShellCode, construction tag) pairs.
    """
    best = merge_records(r for r in records if r.n == n)
    for (_, rt, rk), r in sorted(best.items()):
        if rk == k and rt < t:
            code = read_witness(r.witness_path(base))
            yield ShellCode(CodeSpec(ShellId(n, k), t), code.vectors, code.provenance), r.construction_tag
        elif rk < k and k % rk == 0 and (k // rk) * rt <= t:
            c = k // rk
            try:
                q = builtin_orthogonal(c, n)
            except NoKnownConstruction:
                continue
            code = embed_scale(read_witness(r.witness_path(base)), q)
            yield ShellCode(CodeSpec(ShellId(n, k), t), code.vectors, code.provenance), f"o{rk}"
