"""Command-line interface: ``robustph <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 resource error, 3 network error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .exceptions import DataError, InputError, NetworkError, ResourceError

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_NETWORK = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def fmt_number(x):
    """Shortest round-trip text for a float, without a trailing ``.0``."""
    if math.isinf(x):
        return "inf"
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _parse_threshold(text):
    return None if text is None or text.lower() == "auto" else float(text)


def _parse_seeds(text):
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise InputError("no seeds given")
    return seeds


def _parse_grid(text):
    grid = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            a1, a2 = part.split(":")
            grid.append((float(a1), float(a2)))
        except ValueError:
            raise InputError(f"grid entries look like alpha1:alpha2, got {part!r}") from None
    if not grid:
        raise InputError("empty grid")
    return grid


def _load_D(args):
    from .metricspace import distance_matrix, read_distance_csv, read_points_csv

    if getattr(args, "distance", False):
        return read_distance_csv(args.input)
    return distance_matrix(read_points_csv(args.input))


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# --- subcommands ----------------------------------------------------------
def cmd_trim(args):
    from .trimming import TrimSpec, trim_asymmetric

    D = _load_D(args)
    if args.one_sided:
        spec = TrimSpec(args.alpha1, 0.0, one_sided=True)
    else:
        spec = TrimSpec(args.alpha1, args.alpha2)
    res = trim_asymmetric(D, spec)
    _write(res.to_json() + "\n", args.output)


def cmd_rips(args):
    import io

    from .rips import rips_filtration

    f = rips_filtration(_load_D(args), args.max_dim, _parse_threshold(args.threshold),
                        budget=args.budget)
    buf = io.StringIO()
    f.dump(buf)
    _write(buf.getvalue(), args.output)


def cmd_ph(args):
    from .persistence import persistent_homology, rips_persistence
    from .rips import rips_filtration

    D = _load_D(args)
    thr = _parse_threshold(args.threshold)
    max_dim = args.max_dim if args.max_dim is not None else args.hom_dim + 1
    if max_dim < args.hom_dim + 1:
        raise InputError(f"--max-dim {max_dim} is too small for --hom-dim {args.hom_dim}")
    if args.engine == "explicit":
        dgm = persistent_homology(rips_filtration(D, max_dim, thr, budget=args.budget), args.hom_dim)
    else:
        dgm = rips_persistence(D, args.hom_dim, thr)
    text = dgm.to_json() + "\n" if args.format == "json" else dgm.to_csv()
    _write(text, args.output)


def _read_diagram(path):
    from .diagram import PersistenceDiagram

    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return PersistenceDiagram.from_json(text)
    return PersistenceDiagram.from_csv(text)


def cmd_bottleneck(args):
    from .bottleneck import bottleneck

    res = bottleneck(_read_diagram(args.a), _read_diagram(args.b), args.dim)
    if args.json:
        _write(json.dumps(res.to_dict()) + "\n", None)
    else:
        _write(fmt_number(res.value) + "\n", None)


def cmd_hausdorff(args):
    from .metricspace import hausdorff, read_points_csv

    _write(fmt_number(hausdorff(read_points_csv(args.a), read_points_csv(args.b))) + "\n", None)


def cmd_select(args):
    from .metricspace import read_points_csv
    from .selection import SelectionConfig, select_asymmetric, select_one_sided

    cfg = SelectionConfig(
        alpha1=args.alpha1, alpha2=args.alpha2, step1=args.step1, step2=args.step2,
        hom_dim=args.dim, tau_min=args.tau_min, max_iter=args.max_iter,
        threshold=_parse_threshold(args.threshold),
    )
    X = read_points_csv(args.input)
    out = select_asymmetric(X, cfg) if args.mode == "asym" else select_one_sided(X, cfg)
    _write(json.dumps(out.to_dict()) + "\n", args.output)


def cmd_gen(args):
    from .metricspace import write_points_csv
    from .synth import gen_case_study_1, gen_case_study_2, gen_uniform_circle

    labels = None
    if args.design == "case1":
        X, labels = gen_case_study_1(args.seed, return_labels=True)
    elif args.design == "case2":
        X, labels = gen_case_study_2(args.seed, return_labels=True)
    else:
        X = gen_uniform_circle(args.n, args.seed)
    header = f"{args.design} seed={args.seed}"
    if args.output in (None, "-"):
        sys.stdout.write(f"# {header}\n")
        for row in X:
            sys.stdout.write(",".join(repr(float(v)) for v in row) + "\n")
    else:
        write_points_csv(args.output, X, header=header)
    if args.labels:
        if labels is None:
            labels = np.zeros(len(X), dtype=int)
        with open(args.labels, "w") as fh:
            fh.write("label\n" + "".join(f"{int(v)}\n" for v in labels))


def cmd_exp(args):
    from . import experiments as ex

    if args.study in ("case1", "case2"):
        seeds = _parse_seeds(args.seeds)
        default = ex.CASE1_GRID if args.study == "case1" else ex.CASE2_GRID
        grid = _parse_grid(args.grid) if args.grid else default
        run = ex.run_case_study_1 if args.study == "case1" else ex.run_case_study_2
        report = run(seeds, grid)
        payload = report.to_dict()
        if args.csv:
            with open(args.csv, "w") as fh:
                fh.write(report.to_csv())
    elif args.study == "protein":
        from .pdb import parse_pdb_heavy_atoms

        if not args.pdb:
            raise InputError("exp protein needs --pdb")
        with open(args.pdb) as fh:
            X = parse_pdb_heavy_atoms(fh.read(), args.chain)
        grid = _parse_grid(args.grid) if args.grid else ex.PROTEIN_GRID
        thr = _parse_threshold(args.threshold) if args.threshold else 13.0
        report = ex.run_protein_study(X, grid, thr)
        payload = report.to_dict()
        if args.csv:
            with open(args.csv, "w") as fh:
                fh.write(report.to_csv())
    elif args.study == "convergence":
        cfg = ex.ConvergenceConfig(reps=args.reps)
        payload = ex.convergence_experiment(cfg, args.seed).to_dict()
    else:
        payload = ex.stability_suite(args.trials, args.seed)
    _write(json.dumps(payload, default=_json_default) + "\n", args.out)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    raise TypeError(type(o))


def cmd_pdb(args):
    from .metricspace import write_points_csv
    from .pdb import fetch_structure, parse_pdb_heavy_atoms

    if args.action == "fetch":
        if not args.id:
            raise InputError("pdb fetch needs --id")
        path = fetch_structure(args.id, args.output or f"{args.id.lower()}.pdb")
        sys.stdout.write(path + "\n")
        return
    if not args.input:
        raise InputError("pdb parse needs --input")
    with open(args.input) as fh:
        X = parse_pdb_heavy_atoms(fh.read(), args.chain)
    sys.stderr.write(f"{len(X)} heavy atoms in chain {args.chain}\n")
    if args.output in (None, "-"):
        for row in X:
            sys.stdout.write(",".join(repr(float(v)) for v in row) + "\n")
    else:
        write_points_csv(args.output, X, header=f"{args.input} chain {args.chain}")


def build_parser():
    p = _Parser(prog="robustph", description="Trimmed Vietoris-Rips persistent homology.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add_input(sp):
        sp.add_argument("--input", "-i", required=True, help="point CSV (or distance CSV)")
        sp.add_argument("--distance", action="store_true", help="input is a distance matrix")
        sp.add_argument("--output", "-o", default=None)

    sp = sub.add_parser("trim", help="trim by average pairwise distance")
    add_input(sp)
    sp.add_argument("--alpha1", type=float, default=0.0)
    sp.add_argument("--alpha2", type=float, default=0.0)
    sp.add_argument("--one-sided", action="store_true")
    sp.set_defaults(func=cmd_trim)

    sp = sub.add_parser("rips", help="dump a Rips filtration")
    add_input(sp)
    sp.add_argument("--max-dim", type=int, default=2)
    sp.add_argument("--threshold", default=None, help="edge-length cap or 'auto'")
    sp.add_argument("--budget", type=int, default=50_000_000)
    sp.set_defaults(func=cmd_rips)

    sp = sub.add_parser("ph", help="persistence diagram")
    add_input(sp)
    sp.add_argument("--max-dim", type=int, default=None)
    sp.add_argument("--hom-dim", type=int, default=1)
    sp.add_argument("--threshold", default=None)
    sp.add_argument("--engine", choices=["implicit", "explicit"], default="implicit")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--budget", type=int, default=50_000_000)
    sp.set_defaults(func=cmd_ph)

    sp = sub.add_parser("bottleneck", help="bottleneck distance of two diagram files")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--json", action="store_true", help="also print the matching")
    sp.set_defaults(func=cmd_bottleneck)

    sp = sub.add_parser("hausdorff", help="Hausdorff distance of two point CSVs")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.set_defaults(func=cmd_hausdorff)

    sp = sub.add_parser("select", help="choose trimming proportions")
    sp.add_argument("--input", "-i", required=True)
    sp.add_argument("--output", "-o", default=None)
    sp.add_argument("--mode", choices=["asym", "one"], default="asym")
    sp.add_argument("--alpha1", type=float, default=0.0)
    sp.add_argument("--alpha2", type=float, default=0.0)
    sp.add_argument("--step1", type=float, default=0.05)
    sp.add_argument("--step2", type=float, default=0.01)
    sp.add_argument("--tau-min", type=float, required=True)
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--max-iter", type=int, default=10)
    sp.add_argument("--threshold", default=None)
    sp.set_defaults(func=cmd_select)

    sp = sub.add_parser("gen", help="generate a synthetic cloud")
    sp.add_argument("design", choices=["case1", "case2", "circle"])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--output", "-o", default=None)
    sp.add_argument("--labels", default=None, help="optional label sidecar CSV")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("exp", help="run a reproduction study")
    sp.add_argument("study", choices=["case1", "case2", "convergence", "stability", "protein"])
    sp.add_argument("--seeds", default="0-19")
    sp.add_argument("--grid", default=None, help="e.g. 0.3:0.08,0.1:0.01")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--reps", type=int, default=20)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--pdb", default=None)
    sp.add_argument("--chain", default="A")
    sp.add_argument("--threshold", default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--csv", default=None)
    sp.set_defaults(func=cmd_exp)

    sp = sub.add_parser("pdb", help="parse or fetch PDB structures")
    sp.add_argument("action", choices=["parse", "fetch"])
    sp.add_argument("--input", "-i", default=None)
    sp.add_argument("--id", default=None)
    sp.add_argument("--chain", default="A")
    sp.add_argument("--output", "-o", default=None)
    sp.set_defaults(func=cmd_pdb)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except NetworkError as exc:
        print(f"robustph: network error: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    except ResourceError as exc:
        print(f"robustph: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, DataError, OSError) as exc:
        print(f"robustph: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
