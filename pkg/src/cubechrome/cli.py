"""Command-line interface: ``cubechrome solve|construct|classify|enumerate|verify|generate``.

Exit codes: 0 found / verified, 1 proven absent / obstruction / failed
verification, 2 usage or input error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .constructive import (
    BlockMode,
    HypothesisError,
    RebalanceParams,
    avoid_block_decomposition,
    avoid_proper_partition,
    avoid_rebalance,
    avoid_single_per_color,
    avoid_subcube,
    avoid_three_colors,
    classify_extend_avoid,
    classify_extension,
)
from .enumeration import ConfigurationCatalog, enumerate_minimal_unavoidable
from .generators import Family, InstanceSpec, counterexample_graph, near_vertex_unavoidable, random_instance
from .hypercube import Hypercube
from .io import FormatError, coloring_from_json, coloring_to_json, dump, lists_from_json, lists_to_json, load
from .solver import ImproperPrecoloring, Status, avoid_exact, extend_avoid_exact, extend_exact, list_color_exact

EXIT_FOUND, EXIT_ABSENT, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("cubechrome")


class UsageError(Exception):
    pass


def worker_count() -> int:
    raw = os.environ.get("CUBECHROME_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise UsageError(f"CUBECHROME_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _write_witness(args, f) -> None:
    if args.output:
        dump(coloring_to_json(f), args.output)


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def _parse_shards(text):
    if text is None:
        return None
    try:
        i, n = (int(x) for x in text.split("/"))
    except ValueError:
        raise UsageError(f"--shards expects i/n, got {text!r}") from None
    if not 0 <= i < n:
        raise UsageError(f"shard index {i} outside 0..{n - 1}")
    return i, n


# -- solve -------------------------------------------------------------------


def cmd_solve(args) -> int:
    obj = load(args.input)
    if args.mode == "list-color":
        lists = lists_from_json(obj)
        res = list_color_exact(lists.host, lists, budget=args.budget, max_edges=max(64, lists.host.n_edges))
        return _finish(args, res, None)
    if args.mode == "extend-avoid":
        if not isinstance(obj, dict) or "phi" not in obj or "psi" not in obj:
            raise FormatError("extend-avoid input needs 'phi' and 'psi'")
        phi, psi = coloring_from_json(obj["phi"]), coloring_from_json(obj["psi"])
        res = extend_avoid_exact(phi.host, phi, psi, args.palette, budget=args.budget)
        kind = None
        if res.status is Status.NONE and _classifiable(phi, psi):
            kind = classify_extend_avoid(phi, psi)
        return _finish(args, res, kind)
    phi = coloring_from_json(obj)
    if args.mode == "avoid":
        res = avoid_exact(phi.host, phi, args.palette, budget=args.budget)
        return _finish(args, res, None)
    res = extend_exact(phi.host, phi, args.palette, budget=args.budget)
    kind = None
    if res.status is Status.NONE and _classifiable(phi):
        kind = classify_extension(phi)
    return _finish(args, res, kind)


def _classifiable(phi, psi=None) -> bool:
    host = phi.host
    if not isinstance(host, Hypercube) or phi.palette != host.d:
        return False
    if psi is None:
        return len(phi) <= host.d
    return psi.palette == host.d and len(psi) >= 1 and len(phi) + len(psi) == host.d


def _finish(args, res, obstruction) -> int:
    out = {"status": res.status.value, "nodes": res.nodes, "elapsed": round(res.elapsed, 4)}
    if obstruction is not None:
        out["obstruction"] = {"kind": obstruction.kind.value, "witness": obstruction.witness}
    if res.status is Status.FOUND:
        _write_witness(args, res.witness)
        if args.output:
            out["witness"] = str(args.output)
        else:
            out["witness"] = coloring_to_json(res.witness)
    _emit(out)
    return {Status.FOUND: EXIT_FOUND, Status.NONE: EXIT_ABSENT, Status.INDETERMINATE: EXIT_BUDGET}[res.status]


# -- construct -----------------------------------------------------------------

CONSTRUCTIONS = {
    "single": lambda cube, phi, a: avoid_single_per_color(cube, phi),
    "three": lambda cube, phi, a: avoid_three_colors(cube, phi),
    "partition": lambda cube, phi, a: avoid_proper_partition(cube, phi),
    "subcube": lambda cube, phi, a: avoid_subcube(cube, phi, cube.d - 1 if a.split_dim is None else a.split_dim),
    **{f"block-{m.value}": (lambda m: lambda cube, phi, a: avoid_block_decomposition(cube, phi, m))(m) for m in BlockMode},
}


def cmd_construct(args) -> int:
    phi = coloring_from_json(load(args.input))
    cube = phi.host
    if not isinstance(cube, Hypercube):
        raise FormatError("constructions need a hypercube coloring")
    if args.method in ("rebalance-i", "rebalance-ii"):
        variant = args.method.split("-")[1]
        params = RebalanceParams.part_i(cube.d) if variant == "i" else RebalanceParams.part_ii(cube.d)
        f, trace = avoid_rebalance(cube, phi, params)
        out = {
            "status": "found" if f is not None else "absent",
            "interchanges": trace.q,
            "warnings": trace.warnings,
            "failure": trace.failure,
        }
        if f is not None:
            _write_witness(args, f)
        _emit(out)
        return EXIT_FOUND if f is not None else EXIT_ABSENT
    f = CONSTRUCTIONS[args.method](cube, phi, args)
    _write_witness(args, f)
    _emit({"status": "found", "witness": str(args.output) if args.output else coloring_to_json(f)})
    return EXIT_FOUND


# -- classify ------------------------------------------------------------------


def cmd_classify(args) -> int:
    obj = load(args.input)
    if args.mode == "extension":
        ob = classify_extension(coloring_from_json(obj))
    else:
        if not isinstance(obj, dict) or "phi" not in obj or "psi" not in obj:
            raise FormatError("extend-avoid input needs 'phi' and 'psi'")
        ob = classify_extend_avoid(coloring_from_json(obj["phi"]), coloring_from_json(obj["psi"]))
    _emit({"kind": ob.kind.value, "witness": ob.witness})
    return EXIT_ABSENT if ob.blocks else EXIT_FOUND


# -- enumerate -----------------------------------------------------------------


def _run_shard(job):
    d, proper, shard, n, ckpt, budget = job
    enumerate_minimal_unavoidable(d, proper, shards=(shard, n), checkpoint_dir=ckpt, budget=budget, verify=False)
    return shard


def cmd_enumerate(args) -> int:
    if args.d not in (1, 2, 3, 4):
        raise UsageError(f"enumeration supports d in 1..4, got {args.d}")
    shards = _parse_shards(args.shards)
    workers = worker_count()
    ckpt = args.checkpoint_dir
    if shards is None and workers > 1:
        # fill per-shard checkpoints in parallel, then merge them
        ckpt = ckpt or tempfile.mkdtemp(prefix="cubechrome-shards-")
        jobs = [(args.d, args.proper, i, workers, ckpt, args.budget) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            list(pool.map(_run_shard, jobs))
        cat = merge_shards(args.d, args.proper, workers, ckpt, args.budget)
    else:
        cat = enumerate_minimal_unavoidable(args.d, args.proper, shards=shards, checkpoint_dir=ckpt, budget=args.budget)
    out = Path(args.output) if args.output else None
    if out is not None:
        cat.write_jsonl(out)
        _write_catalog_table(cat, out.with_suffix(".tsv"))
        if args.figure or args.d == 3:
            from .plotting import plot_catalog

            plot_catalog(cat, args.figure or out.with_suffix(".png"))
    else:
        for e in cat.entries:
            sys.stdout.write(json.dumps(e.to_json(), sort_keys=True) + "\n")
    sys.stderr.write(f"{len(cat)} configurations (complete={cat.complete})\n")
    return EXIT_FOUND if cat.complete else EXIT_BUDGET


def merge_shards(d: int, proper: bool, n: int, ckpt, budget) -> ConfigurationCatalog:
    """Union of all ``n`` shard catalogs; finished shards are read from ``ckpt``."""
    by_key, complete, nodes = {}, True, 0
    for i in range(n):
        part = enumerate_minimal_unavoidable(d, proper, shards=(i, n), checkpoint_dir=ckpt, budget=budget)
        by_key.update((e.key.hex(), e) for e in part.entries)
        complete &= part.shards_exhausted
        nodes += part.nodes
    entries = [by_key[k] for k in sorted(by_key)]
    return ConfigurationCatalog(d, proper, entries, complete, nodes)


def _write_catalog_table(cat: ConfigurationCatalog, path: Path) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t")
        w.writerow(["index", "key", "edges", "color_multiset"])
        for k, e in enumerate(cat.entries):
            m = e.metadata
            w.writerow([k + 1, e.key.hex(), m["edges"], ",".join(map(str, m["color_multiset"]))])


# -- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    from .verify import PROCEDURES, run_verification

    if args.theorem not in PROCEDURES:
        raise UsageError(f"unknown result id {args.theorem!r}; known: {', '.join(PROCEDURES)}")
    params = _parse_params(args.param)
    if args.seed is not None:
        params.setdefault("seed", args.seed)
    if args.budget is not None:
        params.setdefault("budget", args.budget)
    rep = run_verification(args.theorem, params)
    outdir = Path(args.output or "reports")
    outdir.mkdir(parents=True, exist_ok=True)
    dump(rep.to_json(), outdir / f"{args.theorem}.json")
    with (outdir / f"{args.theorem}.tsv").open("w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t")
        w.writerow(["group", "instances", "failed"])
        for g, row in rep.breakdown.items():
            if isinstance(row, dict) and "instances" in row:
                w.writerow([g, row["instances"], row["failed"]])
        w.writerow(["total", rep.instances, rep.failed])
    from .plotting import plot_claim_table, plot_report

    plot_report(rep, outdir / f"{args.theorem}.png")
    if args.theorem == "claim1":
        plot_claim_table(rep.breakdown["table"], outdir / "claim1_table.png")
    sys.stdout.write(rep.line() + "\n")
    return EXIT_FOUND if rep.status == "PASS" else EXIT_ABSENT


# -- generate ------------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.family == "counterexample":
        if args.d is None:
            raise UsageError("--d is required")
        _, phi = counterexample_graph(args.d)
        obj = coloring_to_json(phi)
    elif args.family == "near-vertex":
        if args.d is None:
            raise UsageError("--d is required")
        obj = coloring_to_json(near_vertex_unavoidable(args.d))
    else:
        if args.d is None:
            raise UsageError("--d is required")
        try:
            family = Family(args.family)
        except ValueError:
            raise UsageError(f"unknown family {args.family!r}") from None
        inst = random_instance(InstanceSpec(family, args.d, args.seed or 0, _parse_params(args.param)))
        obj = lists_to_json(inst) if family is Family.MULTI else coloring_to_json(inst)
    text = dump(obj, args.output)
    if not args.output:
        sys.stdout.write(text)
    return EXIT_FOUND


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubechrome", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="exact avoid / extend / extend-avoid / list-color")
    s.add_argument("mode", choices=["avoid", "extend", "extend-avoid", "list-color"])
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.add_argument("--palette", type=int)
    s.add_argument("--budget", type=int)
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("construct", help="run a polynomial avoidance construction")
    c.add_argument("method", choices=sorted(CONSTRUCTIONS) + ["rebalance-i", "rebalance-ii"])
    c.add_argument("--input", required=True)
    c.add_argument("--output")
    c.add_argument("--split-dim", type=int)
    c.set_defaults(func=cmd_construct)

    k = sub.add_parser("classify", help="name the obstruction to extension")
    k.add_argument("mode", choices=["extension", "extend-avoid"])
    k.add_argument("--input", required=True)
    k.set_defaults(func=cmd_classify)

    e = sub.add_parser("enumerate", help="catalog minimal unavoidable colorings")
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--proper", action="store_true")
    e.add_argument("--output")
    e.add_argument("--shards")
    e.add_argument("--checkpoint-dir")
    e.add_argument("--budget", type=int)
    e.add_argument("--figure")
    e.set_defaults(func=cmd_enumerate)

    v = sub.add_parser("verify", help="run a verification procedure and persist its report")
    v.add_argument("theorem")
    v.add_argument("--param", action="append", metavar="KEY=VALUE")
    v.add_argument("--seed", type=int)
    v.add_argument("--budget", type=int)
    v.add_argument("--output", help="report directory (default ./reports)")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", help="write a named or random instance")
    g.add_argument("family", help="counterexample, near-vertex or a random family tag")
    g.add_argument("--d", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--param", action="append", metavar="KEY=VALUE")
    g.add_argument("--output")
    g.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_FOUND
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, FormatError, HypothesisError, ImproperPrecoloring, KeyError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
