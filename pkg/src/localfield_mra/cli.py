"""Command-line driver.

    localfield-mra field find-irreducible --p 2 --s 2
    localfield-mra tree random --p 2 --s 2 --seed 1 [--out tree.json]
    localfield-mra tree enumerate --p 3 --s 1
    localfield-mra tree validate --tree tree.json
    localfield-mra build --tree tree.json [--lambdas lambdas.json] [--out DIR]
    localfield-mra verify --tree tree.json [--out report.json]
    localfield-mra sweep --p 2 --s 2 [--sample N --seed S] [--workers W]

Errors are reported as JSON on stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .analysis import full_report
from .gf import GF, find_irreducible
from .mra import mask_from_tree, spectrum_from_product
from .synthesis import extract_indicator, grid_export, scaling_from_spectrum
from .trees import RootedTree, enumerate_trees, enumeration_cap, random_tree, tree_count


class UsageError(Exception):
    pass


def _field(args) -> GF:
    modulus = [int(c) for c in args.modulus.split(",")] if getattr(args, "modulus", None) else None
    return GF.make(args.p, args.s, modulus)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _write(path: Path, text: str):
    path.write_text(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _load_lambdas(tree: RootedTree, path: str | None) -> dict[tuple[int, int], int]:
    """{"edges": [{"parent": "1,1", "child": "0,1", "exp": 1}, ...]}"""
    if path is None:
        return {}
    data = _load_json(path)
    f = tree.field
    return {(f.parse(e["parent"]), f.parse(e["child"])): int(e["exp"]) for e in data["edges"]}


# -- subcommands ------------------------------------------------------------------------


def cmd_field(args) -> int:
    poly = find_irreducible(args.p, args.s)
    print(_dump({"p": args.p, "s": args.s, "modulus": list(poly)}))
    return 0


def cmd_tree(args) -> int:
    if args.action == "validate":
        tree = RootedTree.from_json(_load_json(args.tree))
        print(_dump({"valid": True, "height": tree.height, "first_level": [tree.field.label(v) for v in tree.first_level]}))
        return 0
    f = _field(args)
    if args.action == "random":
        if args.seed is None:
            raise UsageError("tree random needs --seed")
        tree = random_tree(f, args.seed)
        text = _dump(tree.to_json())
        if args.out:
            _write(Path(args.out), text)
        print(text)
        return 0
    cap = args.cap if args.cap is not None else enumeration_cap()
    trees = list(enumerate_trees(f, cap))
    if args.out:
        _write(Path(args.out), _dump([t.to_json() for t in trees]))
    print(_dump({"p": f.p, "s": f.s, "count": len(trees), "expected": tree_count(f)}))
    return 0


def cmd_build(args) -> int:
    tree = RootedTree.from_json(_load_json(args.tree))
    mask = mask_from_tree(tree, _load_lambdas(tree, args.lambdas))
    spec = spectrum_from_product(mask, tree.M)
    phi = scaling_from_spectrum(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "mask.json", _dump(mask.to_json()))
    _write(out / "spectrum.json", _dump(spec.to_json()))
    _write(out / "phi.json", _dump(phi.to_json()))
    _write(out / "phi.csv", grid_export(phi, "csv"))
    indicator = extract_indicator(phi)
    _write(out / "indicator.json", _dump(indicator.to_json()))
    written = ["mask.json", "spectrum.json", "phi.json", "phi.csv", "indicator.json"]
    if tree.field.s == 2:
        _write(out / "grid.txt", grid_export(phi, "text", args.origin))
        _write(out / "spectrum_grid.txt", grid_export(spec, "text", args.origin))
        written += ["grid.txt", "spectrum_grid.txt"]
    print(_dump({"out": str(out), "files": written, "height": tree.height, "M": tree.M}))
    return 0


def cmd_verify(args) -> int:
    tree = RootedTree.from_json(_load_json(args.tree))
    report = full_report(tree, _load_lambdas(tree, args.lambdas))
    text = _dump(report.to_json())
    if args.out:
        _write(Path(args.out), text)
    print(text)
    return 0 if report.certified_mra else 1


def _sweep_one(tree: RootedTree) -> tuple[int, bool, list[str]]:
    report = full_report(tree)
    return tree.height, report.certified_mra, [v.criterion for v in report.criteria if not v.passed]


def cmd_sweep(args) -> int:
    f = _field(args)
    if args.sample is not None:
        if args.seed is None:
            raise UsageError("sampling needs --seed")
        rng = random.Random(args.seed)
        trees = [random_tree(f, rng) for _ in range(args.sample)]
    else:
        cap = args.cap if args.cap is not None else enumeration_cap()
        trees = enumerate_trees(f, cap)
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    total = certified = 0
    heights: Counter[int] = Counter()
    failures = []
    if args.workers == 1:
        results = map(lambda t: (t, _sweep_one(t)), trees)
        pool = None
    else:
        pool = ProcessPoolExecutor(args.workers)
        trees = list(trees)
        results = zip(trees, pool.map(_sweep_one, trees, chunksize=64))
    try:
        for index, (tree, (height, ok, failed)) in enumerate(results):
            total += 1
            heights[height] += 1
            if ok:
                certified += 1
            else:
                failures.append({"index": index, "tree": tree.to_json()["parent"], "failed": failed})
    finally:
        if pool is not None:
            pool.shutdown()
    summary = {
        "p": f.p,
        "s": f.s,
        "trees": total,
        "certified": certified,
        "height_histogram": {str(h): n for h, n in sorted(heights.items())},
        "failures": failures[:20],
    }
    print(f"{total} trees, {certified} certified", file=sys.stderr)
    print(_dump(summary))
    return 0 if certified == total else 1


# -- parser ---------------------------------------------------------------------------------


def _add_field_args(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, required=True, help="characteristic (prime)")
    p.add_argument("--s", type=int, required=True, help="degree of the residue field")
    p.add_argument("--modulus", help="irreducible modulus, constant coefficient first, e.g. 1,1,1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localfield-mra", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    pf = sub.add_parser("field", help="finite-field utilities")
    pf.add_argument("action", choices=["find-irreducible"])
    pf.add_argument("--p", type=int, required=True)
    pf.add_argument("--s", type=int, required=True)
    pf.set_defaults(func=cmd_field)

    pt = sub.add_parser("tree", help="generate, enumerate or validate trees")
    pt.add_argument("action", choices=["random", "enumerate", "validate"])
    pt.add_argument("--p", type=int)
    pt.add_argument("--s", type=int)
    pt.add_argument("--modulus")
    pt.add_argument("--seed", type=int)
    pt.add_argument("--cap", type=int, help="enumeration cap (default 10^6 or $LOCALFIELD_MRA_CAP)")
    pt.add_argument("--tree", help="tree.json to validate")
    pt.add_argument("--out", help="write the tree(s) here")
    pt.set_defaults(func=cmd_tree)

    pb = sub.add_parser("build", help="mask, spectrum, phi and grids for a tree")
    pb.add_argument("--tree", required=True)
    pb.add_argument("--lambdas", help="edge exponents: {\"edges\": [{\"parent\", \"child\", \"exp\"}]}")
    pb.add_argument("--out", default=".")
    pb.add_argument("--origin", choices=["bottom", "top"], default="bottom", help="where grid row 0 is printed")
    pb.set_defaults(func=cmd_build)

    pv = sub.add_parser("verify", help="run every criterion on a tree")
    pv.add_argument("--tree", required=True)
    pv.add_argument("--lambdas")
    pv.add_argument("--out", help="report.json path")
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("sweep", help="verify all (or sampled) trees of a field")
    _add_field_args(ps)
    ps.add_argument("--sample", type=int)
    ps.add_argument("--seed", type=int)
    ps.add_argument("--cap", type=int)
    ps.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    ps.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "tree" and args.action != "validate" and (args.p is None or args.s is None):
            raise UsageError("tree random/enumerate need --p and --s")
        if args.command == "tree" and args.action == "validate" and not args.tree:
            raise UsageError("tree validate needs --tree")
        return args.func(args)
    except Exception as exc:  # reported as machine-readable JSON
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
