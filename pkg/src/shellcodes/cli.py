"""Command line front end: ``shellcodes <command> ...``.

Exit codes: 0 success / proven optimal, 2 budget-limited (bound still
valid), 3 every group skipped by a cap, 1 error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .assembler import (BoundRecord, builtin_orthogonal, embed_scale, read_catalog, read_matrix,
                        read_witness, render_catalog, spherical_params, union_scaled,
                        verify_shell_code, write_spherical, write_witness)
from .cliquesolve import SolveBudget, max_weight_clique
from .errors import ShellCodesError
from .orbitgraph import CompatibilityGraph, build_graph
from .pipeline import (STATUS_EXIT, Caps, embedding_candidates, overall_status, parse_group_arg,
                       search, shipped_catalog_path)
from .shellgeom import (CodeSpec, ShellId, aut_orbit_reps, enumerate_shell, format_vector,
                        shell_max_inner, shell_size, stream_shell)
from .symgroup import partition_orbits

log = logging.getLogger("shellcodes")

CONFIG_KEYS = {
    "shell_cap": int, "vertex_cap": int, "pair_budget": int, "time_limit": float,
    "node_limit": int, "total_time": float, "threads": int, "seed": int,
}


def read_config(path) -> dict:
    """key=value lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in CONFIG_KEYS:
            raise ShellCodesError(f"{path}:{lineno}: unknown config line {raw.strip()!r}")
        out[key] = CONFIG_KEYS[key](value.strip())
    return out


def _file_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _settings(args) -> dict:
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            conf[key] = value
    conf.setdefault("time_limit", 10.0)
    conf.setdefault("seed", 0)
    conf.setdefault("threads", 1)
    if getattr(args, "deterministic", False):
        conf["time_limit"] = None
        conf["total_time"] = None
        conf.setdefault("node_limit", 200_000)
    return conf


def _caps(conf) -> Caps:
    caps = Caps()
    if "shell_cap" in conf:
        caps.shell = conf["shell_cap"]
    if "vertex_cap" in conf:
        caps.vertices = conf["vertex_cap"]
    if "pair_budget" in conf:
        caps.pairs = conf["pair_budget"]
    return caps


def _budget(conf, target=None) -> SolveBudget:
    return SolveBudget(time_limit=conf.get("time_limit"), node_limit=conf.get("node_limit"),
                       target_weight=target, rng_seed=conf.get("seed", 0))


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        print(text)


# -- commands ---------------------------------------------------------------

def cmd_shell(args) -> int:
    shell = ShellId(args.n, args.k)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        if args.reps_only:
            for rep in aut_orbit_reps(shell):
                print(format_vector(rep), file=out)
        elif args.count:
            print(shell_size(shell), file=out)
        elif args.stream:
            for v in stream_shell(shell):
                print(format_vector(v), file=out)
        else:
            for v in enumerate_shell(shell).tolist():
                print(format_vector(v), file=out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _outcome_record(o) -> dict:
    return {"group": o.group.name, "status": o.status, "size": o.size, "stats": o.stats, "message": o.message}


def cmd_search(args) -> int:
    conf = _settings(args)
    spec = CodeSpec(ShellId(args.n, args.k), args.t)
    groups = parse_group_arg(args.group, args.n)
    started = time.time()
    parts = [read_witness(p) for p in args.join or []]
    if parts and args.tmax is None:
        raise ShellCodesError("--join needs --tmax")

    def progress(o):
        log.info("%-32s %-8s size=%d %s", o.group.name, o.status, o.size, o.message)

    best, outcomes = search(spec, groups, _budget(conf), _caps(conf), total_time=conf.get("total_time"),
                            target=args.target, cache_dir=os.environ.get("SHELLCODES_CACHE"),
                            progress=progress, workers=conf.get("threads", 1),
                            parts=parts, t_max=Fraction(args.tmax) if parts else None)
    status = overall_status(best, outcomes)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"n{args.n}_k{args.k}_t{args.t}"
    outputs = {}
    record = None
    if best is not None:
        witness_path = out_dir / f"witness_{stem}.txt"
        write_witness(witness_path, best.code)
        record = BoundRecord(args.n, args.t, args.k, best.size, best.group.tag, witness_path.name,
                             best.group.name, best.status == "optimal")
        catalog = out_dir / "catalog.jsonl"
        with open(catalog, "a", encoding="utf-8") as fh:
            fh.write(record.to_json() + "\n")
        outputs = {"witness": str(witness_path), "catalog": str(catalog)}
    manifest = {
        "command": sys.argv,
        "version": __version__,
        "config": conf,
        "config_hash": hashlib.sha256(json.dumps(conf, sort_keys=True).encode()).hexdigest(),
        "inputs": {p: _file_hash(p) for p in (args.config, args.group, *(args.join or []))
                   if p and Path(p).is_file()},
        "spec": {"n": args.n, "k": args.k, "t": args.t, "shell_size": shell_size(spec.shell)},
        "groups": [_outcome_record(o) for o in outcomes],
        "outcome": {"status": status, "bound": best.size if best else 0,
                    "group": best.group.name if best else None},
        "outputs": outputs,
        "wall_time": time.time() - started,
    }
    manifest_path = out_dir / f"manifest_{stem}.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    bound = best.size if best else 0
    _emit(args, {"status": status, "bound": bound, "record": record.__dict__ if record else None,
                 "manifest": str(manifest_path)},
          f"Sh({args.n},{args.t},{args.k}) >= {bound}  [{status}"
          + (f", {best.group.name}]" if best else "]"))
    return STATUS_EXIT[status]


def cmd_verify(args) -> int:
    code = read_witness(args.witness)
    report = verify_shell_code(code)
    payload = {"ok": report.ok, "size": len(code), "max_inner": report.max_inner,
               "angle_set": report.angle_set,
               "violating_pair": report.violating_pair, "bad_norm": report.bad_norm,
               "duplicates": report.duplicates}
    _emit(args, payload, f"{args.witness}: {len(code)} vectors, {report.summary()}")
    return 0 if report.ok else 1


def cmd_embed(args) -> int:
    code = read_witness(args.witness)
    if args.matrix:
        q = read_matrix(args.matrix)
    else:
        q = builtin_orthogonal(args.c, code.spec.n, args.kind)
    out = embed_scale(code, q)
    report = verify_shell_code(out)
    if not report.ok:
        raise ShellCodesError(f"embedded code does not verify: {report.summary()}")
    write_witness(args.output, out)
    _emit(args, {"output": args.output, "k": out.spec.k, "t": out.spec.t, "size": len(out)},
          f"wrote {args.output}: n={out.spec.n} k={out.spec.k} t={out.spec.t}, {len(out)} vectors")
    return 0


def cmd_union(args) -> int:
    parts = [read_witness(p) for p in args.parts]
    code = union_scaled(parts, Fraction(args.tmax))
    n, count, max_cos, angles = spherical_params(code)
    if args.output:
        write_spherical(args.output, code)
    _emit(args, {"n": n, "N": count, "max_cosine": str(max_cos), "angle_set": [str(a) for a in angles]},
          f"spherical code ({n},{count},{max_cos})")
    return 0


def cmd_catalog(args) -> int:
    paths = args.records or [shipped_catalog_path()]
    records = []
    for p in paths:
        records += read_catalog(p, verify=not args.no_verify)
    dims = [args.n] if args.n else sorted({r.n for r in records})
    ts = None
    if args.t:
        ts = [int(x) for x in args.t.split(",")]
    for n in dims:
        ks = default_k_range(n)
        print(f"Lower bounds for Sh({n},t,k)")
        print(render_catalog(records, n, ts=ts, ks=ks))
    return 0


def cmd_graph(args) -> int:
    conf = _settings(args)
    groups = parse_group_arg(args.group, args.n)
    if len(groups) != 1:
        raise ShellCodesError("graph export needs a single group")
    table = partition_orbits(ShellId(args.n, args.k), groups[0], cap=_caps(conf).shell)
    graph = build_graph(table, args.t, vertex_cap=_caps(conf).vertices, pair_budget=_caps(conf).pairs)
    Path(args.output).write_text(graph.to_dimacs(), encoding="utf-8")
    print(f"wrote {args.output}: {len(graph)} vertices, {graph.edge_count} edges")
    return 0


def cmd_solve(args) -> int:
    conf = _settings(args)
    graph = CompatibilityGraph.from_dimacs(Path(args.graph).read_text(encoding="utf-8"))
    result = max_weight_clique(graph, _budget(conf, args.target))
    print(result.to_json())
    return 0 if result.proven_optimal else 2


def cmd_sweep(args) -> int:
    """Search every (t, k) cell for one dimension and append to a catalog."""
    conf = _settings(args)
    out_dir = Path(args.out_dir)
    (out_dir / "witnesses").mkdir(parents=True, exist_ok=True)
    catalog = out_dir / "catalog.jsonl"
    existing = read_catalog(catalog, verify=False) if catalog.exists() else []
    groups = parse_group_arg(args.group, args.n)
    ks = _int_range(args.k) if args.k else default_k_range(args.n)
    ts = _int_range(args.t) if args.t else list(range(1, max(ks)))
    records = list(existing)
    worst = 0
    for k in ks:
        top = shell_max_inner(ShellId(args.n, k))
        for t in ts:
            # for t >= top the answer is the whole shell; the tables leave those cells out
            if not -k <= t <= k - 1 or top is None or t >= top:
                continue
            spec = CodeSpec(ShellId(args.n, k), t)
            best, outcomes = search(spec, groups, _budget(conf), _caps(conf),
                                    total_time=conf.get("total_time"), workers=conf.get("threads", 1))
            candidates = []
            if best is not None:
                candidates.append((best.size, best.group.tag, best.code, best.group.name,
                                   best.status == "optimal"))
            for code, tag in embedding_candidates(records, args.n, t, k, out_dir):
                candidates.append((len(code), tag, code, "embedding", False))
            if not candidates:
                worst = max(worst, STATUS_EXIT["skipped"])
                print(f"t={t} k={k}: skipped")
                continue
            size, tag, code, gname, proven = max(candidates, key=lambda c: c[0])
            kept = [r for r in records if (r.n, r.t, r.k) == (args.n, t, k) and r.bound >= size]
            if kept:
                print(f"t={t} k={k}: {kept[0].bound}{kept[0].construction_tag} (kept, found {size})", flush=True)
                continue
            rel = f"witnesses/n{args.n}_t{t}_k{k}.txt"
            write_witness(out_dir / rel, code)
            rec = BoundRecord(args.n, t, k, size, tag, rel, gname, proven)
            records = [r for r in records if (r.n, r.t, r.k) != (args.n, t, k)] + [rec]
            print(f"t={t} k={k}: {size}{tag}", flush=True)
    records.sort(key=lambda r: (r.n, r.t, r.k))
    catalog.write_text("".join(r.to_json() + "\n" for r in records), encoding="utf-8")
    return worst


def default_k_range(n: int) -> list:
    """Shell range searched for each dimension in the published tables."""
    if n <= 11:
        return list(range(4, 16))
    return list(range(4, 27 - n))


def _int_range(text: str) -> list:
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition("-")
        out += list(range(int(lo), int(hi) + 1)) if sep else [int(lo)]
    return out


# -- parser -----------------------------------------------------------------

def _add_search_options(p):
    p.add_argument("--config", help="key=value file with caps and budgets")
    p.add_argument("--time-limit", "--budget", dest="time_limit", type=float,
                   help="seconds per group for the clique search")
    p.add_argument("--node-limit", dest="node_limit", type=int)
    p.add_argument("--total-time", dest="total_time", type=float, help="seconds for the whole group list")
    p.add_argument("--shell-cap", dest="shell_cap", type=int)
    p.add_argument("--vertex-cap", dest="vertex_cap", type=int)
    p.add_argument("--pair-budget", dest="pair_budget", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--deterministic", action="store_true",
                   help="ignore wall-clock limits and use node limits only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shellcodes", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shell", help="list a lattice shell")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--reps-only", action="store_true", help="one Aut(Z^n) representative per orbit")
    p.add_argument("--count", action="store_true", help="print the shell size only")
    p.add_argument("--stream", action="store_true", help="orbit-by-orbit output without a size cap")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_shell)

    p = sub.add_parser("search", help="search a shell code with prescribed automorphisms")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--group", default="aut", help="aut, full, trivial, s, s2, p1:cyclic, n:<variant>, or a file")
    p.add_argument("--target", type=int, help="stop once a code of this size is found")
    p.add_argument("--join", nargs="+", metavar="WITNESS",
                   help="only use vectors whose cosines with these witnesses stay within --tmax")
    p.add_argument("--tmax", help="cosine bound p/q for --join")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--json", action="store_true")
    _add_search_options(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="verify a witness file")
    p.add_argument("witness")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("embed", help="map a witness into a larger shell with an integer orthogonal matrix")
    p.add_argument("witness")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix")
    g.add_argument("--c", type=int)
    p.add_argument("--kind", choices=["scalar", "pairs", "quaternion"])
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("union", help="union of witnesses as a spherical code")
    p.add_argument("parts", nargs="+")
    p.add_argument("--tmax", required=True, help="cosine bound p/q")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_union)

    p = sub.add_parser("catalog", help="render bound records as tables")
    p.add_argument("records", nargs="*", help="catalog.jsonl files (default: shipped catalog)")
    p.add_argument("--n", type=int)
    p.add_argument("--t", help="comma separated rows")
    p.add_argument("--no-verify", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("graph", help="export the compatibility graph in DIMACS-like format")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--group", required=True)
    p.add_argument("-o", "--output", required=True)
    _add_search_options(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("solve", help="max-weight clique of a DIMACS-like graph, JSON output")
    p.add_argument("graph")
    p.add_argument("--target", type=int)
    _add_search_options(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="search a grid of (t, k) cells into a catalog directory")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", help="e.g. 1-8 (default 1 up to the largest k minus one)")
    p.add_argument("--k", help="e.g. 4-15 (default 4-15, or 4 to 26-n for n >= 12)")
    p.add_argument("--group", default="aut")
    p.add_argument("--out-dir", required=True)
    _add_search_options(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ShellCodesError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
