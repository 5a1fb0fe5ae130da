"""Command-line front end.

Subcommands: classify, construct g, check, lemma, bundle dim,
color-or-embed, report.  Exit codes: 0 success, 2 input error, 3 budget
exhausted, 4 infeasible parameters.  All randomness flows from --seed;
per-component seeds are derived by stable hashing.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .budgets import BudgetExceededError, default_budget
from .construct import (
    build_g,
    derive_seed,
    dump_layered,
    load_layered,
    verify_construction,
)
from .hypercore import Hypergraph, HypergraphError, dump_hypergraph, load_hypergraph
from .recognize import PartitionWitness, WitnessError, check_strong_witness, check_unifoliate_witness, classify
from .spheregeo import (
    InfeasibleParamsError,
    SQRT2,
    cap_measure,
    near_or_far_margin,
    point_at_chord,
    sample_points,
    theta_budget,
    theta_chain_margins,
    verify_near_or_far,
)
from . import bundle as bundle_mod

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INFEASIBLE = 4


def _read_hypergraph(path: str) -> Hypergraph:
    try:
        with open(path) as fh:
            return load_hypergraph(fh.read())
    except OSError as exc:
        raise HypergraphError(f"cannot read {path}: {exc}") from exc


def _write(path: str | None, text: str, out) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_classify(args, out) -> int:
    F = _read_hypergraph(args.file)
    result = classify(F, args.budget)
    print(json.dumps(result.to_json_dict(), sort_keys=True), file=out)
    return EXIT_BUDGET if result.status == "budget" else EXIT_OK


def cmd_construct_g(args, out) -> int:
    if args.f_file:
        F = _read_hypergraph(args.f_file)
        if F.r != args.r:
            raise HypergraphError(f"--r {args.r} does not match the pattern uniformity {F.r}")
    else:
        # default forbidden pattern: a single transversal edge
        names = [f"e{i}" for i in range(args.r)]
        F = Hypergraph(args.r, names, [tuple(names)])
    G = build_g(
        F,
        k=args.k,
        epsilon=args.eps,
        n=args.n,
        seed=args.seed,
        mode=args.mode,
        blowup_factor=args.blowup,
        sparsen_p=args.sparsen_p,
        sphere_points=args.sphere_points,
        d=args.d,
        beta=args.beta,
        theta=args.theta,
        budget=args.budget,
    )
    text = dump_layered(G)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    report = verify_construction(G)
    if args.degrees_csv:
        with open(args.degrees_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["vertex", "layer", "degree"])
            for v in G.graph.vertices:
                writer.writerow([v, G.layers[v], G.graph.degree(v)])
    print(json.dumps(report, sort_keys=True, default=float), file=out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    if args.layered:
        with open(args.file) as fh:
            G = load_layered(fh.read())
        round_trip = load_layered(dump_layered(G))
        ok = dump_layered(round_trip) == dump_layered(G)
        print(json.dumps({"ok": ok, "kind": "layered"}), file=out)
        return EXIT_OK if ok else EXIT_INPUT
    H = _read_hypergraph(args.file)
    ok = load_hypergraph(dump_hypergraph(H)) == H
    result = {"ok": ok, "kind": "hypergraph", "vertices": len(H.vertices), "edges": len(H.edges)}
    if args.certificate:
        with open(args.certificate) as fh:
            cert = json.load(fh)
        result["certificate_class"] = cert.get("class")
        if cert.get("witness"):
            w = PartitionWitness.from_json_dict(cert["witness"])
            chk = check_unifoliate_witness(H, w)
            result["witness_unifoliate"] = chk.ok
            ok = ok and chk.ok
            if cert["class"] == "StrongUnifoliate":
                strong = check_strong_witness(H, w)
                result["witness_strong"] = strong.ok
                ok = ok and strong.ok
            elif cert["class"] == "UnifoliateOnly":
                strong = check_strong_witness(H, w)
                result["witness_strong"] = strong.ok
                ok = ok and not strong.ok
        result["ok"] = ok
    print(json.dumps(result, sort_keys=True), file=out)
    return EXIT_OK if ok else EXIT_INPUT


def _lemma_near_or_far(args, writer) -> float:
    rng = np.random.default_rng(derive_seed(args.seed, "lemma-near-or-far"))
    passes = 0
    for trial in range(args.trials):
        a = float(rng.uniform(args.a_min, args.a_max))
        x = sample_points(1, args.d, int(rng.integers(2**31))).points[0]
        near_xy = bool(rng.integers(2))
        near_yz = bool(rng.integers(2))
        chord_xy = float(rng.uniform(0, a)) * 0.999 if near_xy else 2.0 - float(rng.uniform(0, a)) * 0.999
        chord_yz = float(rng.uniform(0, a)) * 0.999 if near_yz else 2.0 - float(rng.uniform(0, a)) * 0.999
        y = point_at_chord(x, chord_xy, rng)
        z = point_at_chord(y, chord_yz, rng)
        holds = verify_near_or_far(x, y, z, a)
        passes += holds
        writer.writerow(
            [
                "trial",
                trial,
                args.d,
                f"{a:.6g}",
                f"{chord_xy:.6g}",
                f"{chord_yz:.6g}",
                f"{np.linalg.norm(x - z):.6g}",
                int(holds),
                f"{near_or_far_margin(x, y, z, a):.6g}",
                "",
            ]
        )
    frac = passes / args.trials
    writer.writerow(["summary", args.trials, args.d, "", "", "", "", "", "", f"{frac:.6g}"])
    return frac


def _lemma_cap(args, writer) -> float:
    radius = SQRT2 if args.radius == "sqrt2" else float(args.radius)
    est = cap_measure(args.d, radius, args.samples, derive_seed(args.seed, "lemma-cap"))
    stderr = math.sqrt(max(est * (1 - est), 1e-12) / args.samples)
    ok = 0.0 <= est <= 1.0
    writer.writerow(["trial", 0, args.d, f"{radius:.6g}", args.samples, f"{est:.6g}", f"{stderr:.6g}", int(ok), "", ""])
    writer.writerow(["summary", 1, args.d, "", "", "", "", "", "", f"{float(ok):.6g}"])
    return float(ok)


def _lemma_theta_chain(args, writer) -> float:
    # default theta sits strictly under the compounded budget ceiling
    theta = args.theta if args.theta is not None else 0.5 * (0.1 / 4**args.f) ** (2**args.f)
    rows = theta_chain_margins(theta, args.f)
    passes = 0
    for j, lhs, rhs in rows:
        holds = lhs <= rhs + 1e-12
        passes += holds
        writer.writerow(["trial", j, args.f, f"{theta:.6g}", f"{lhs:.6g}", f"{rhs:.6g}", "", int(holds), "", ""])
    frac = passes / len(rows)
    budget = theta_budget(theta, args.f)
    writer.writerow(["summary", len(rows), args.f, f"{theta:.6g}", "", "", f"{budget:.6g}", "", "", f"{frac:.6g}"])
    return frac


def cmd_lemma(args, out) -> int:
    writer = csv.writer(out)
    writer.writerow(
        ["row", "trial", "d_or_f", "a_or_radius", "v1", "v2", "v3", "holds", "margin", "pass_fraction"]
    )
    if args.name == "near-or-far":
        _lemma_near_or_far(args, writer)
    elif args.name == "cap":
        _lemma_cap(args, writer)
    elif args.name == "theta-chain":
        _lemma_theta_chain(args, writer)
    else:
        raise HypergraphError(f"unknown lemma {args.name!r}")
    return EXIT_OK


def cmd_bundle_dim(args, out) -> int:
    H = _read_hypergraph(args.h)
    T = _read_hypergraph(args.t_file)
    bres = bundle_mod.t_bundle(H, T, args.budget)
    if bres.status == "budget":
        print(json.dumps({"status": "budget"}), file=out)
        return EXIT_BUDGET
    spec = bundle_mod.CompletePartiteSpec(H.r - 1, args.part_size)
    res = bundle_mod.dim_at_least(bres.bundle, spec, args.t, args.budget)
    payload = {
        "status": res.status,
        "t": args.t,
        "part_size": args.part_size,
        "matching": [list(e) for e in res.matching] if res.matching is not None else None,
    }
    print(json.dumps(payload, sort_keys=True), file=out)
    return EXIT_BUDGET if res.status == "budget" else EXIT_OK


def cmd_color_or_embed(args, out) -> int:
    H = _read_hypergraph(args.h)
    G = _read_hypergraph(args.g)
    if args.witness:
        with open(args.witness) as fh:
            w = PartitionWitness.from_json_dict(json.load(fh))
    else:
        from .recognize import is_strong_unifoliate

        found = is_strong_unifoliate(G, args.budget)
        if found.status == "budget":
            print(json.dumps({"status": "budget"}), file=out)
            return EXIT_BUDGET
        if found.witness is None:
            raise WitnessError("pattern is not strong unifoliate; provide --witness")
        w = found.witness
    res = bundle_mod.color_or_embed(H, G, w, part_size_cap=args.part_size_cap, budget=args.budget)
    if res.kind == "embedding":
        payload = {"embedding": dict(sorted(res.embedding.mapping.items()))}
    elif res.kind == "coloring":
        payload = {
            "coloring": dict(sorted(res.coloring.assignment.items())),
            "colors": res.colors,
            "chi_base": res.chi_base,
            "class_bound": res.class_bound,
            "notes": res.notes,
        }
    else:
        print(json.dumps({"status": "budget", "notes": res.notes}), file=out)
        return EXIT_BUDGET
    print(json.dumps(payload, sort_keys=True), file=out)
    return EXIT_OK


def cmd_report(args, out) -> int:
    with open(args.file) as fh:
        G = load_layered(fh.read())
    report = verify_construction(G)
    writer = csv.writer(out)
    writer.writerow(["metric", "value"])

    def emit(prefix, obj):
        if isinstance(obj, dict):
            for key in sorted(obj):
                emit(f"{prefix}.{key}" if prefix else key, obj[key])
        else:
            writer.writerow([prefix, obj])

    emit("", report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unifoliate")
    parser.add_argument("--seed", type=int, default=0, help="master seed; component seeds derive from it")
    parser.add_argument("--budget", type=int, default=None, help="search node budget (default from UNIFOLIATE_BUDGET)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a hypergraph file")
    p.add_argument("file")

    p = sub.add_parser("construct", help="construction pipeline")
    csub = p.add_subparsers(dest="construct_command", required=True)
    g = csub.add_parser("g", help="build the layered construction")
    g.add_argument("--r", type=int, default=3)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--eps", type=float, default=0.05)
    g.add_argument("--f-file", default=None)
    g.add_argument("--mode", choices=["strict", "relaxed"], default="strict")
    g.add_argument("--blowup", type=int, default=2)
    g.add_argument("--sparsen-p", type=float, default=1.0)
    g.add_argument("--sphere-points", type=int, default=4)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--beta", type=float, default=None)
    g.add_argument("--theta", type=float, default=None)
    g.add_argument("--out", default=None, help="layered JSON output path")
    g.add_argument("--degrees-csv", default=None, help="per-vertex degree CSV path")

    p = sub.add_parser("check", help="validate files and certificates")
    p.add_argument("file")
    p.add_argument("--certificate", default=None)
    p.add_argument("--layered", action="store_true")

    p = sub.add_parser("lemma", help="run a geometric property suite, CSV to stdout")
    p.add_argument("name", choices=["near-or-far", "cap", "theta-chain"])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--a-min", type=float, default=0.001)
    p.add_argument("--a-max", type=float, default=0.099)
    p.add_argument("--radius", default="sqrt2")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--f", type=int, default=3)
    p.add_argument("--theta", type=float, default=None)

    p = sub.add_parser("bundle", help="fiber bundle operations")
    bsub = p.add_subparsers(dest="bundle_command", required=True)
    d = bsub.add_parser("dim", help="dimension witness search")
    d.add_argument("--h", required=True)
    d.add_argument("--t-file", required=True)
    d.add_argument("--part-size", type=int, default=2)
    d.add_argument("--t", type=int, required=True)

    p = sub.add_parser("color-or-embed", help="embed the pattern or color the host")
    p.add_argument("--h", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--witness", default=None)
    p.add_argument("--part-size-cap", type=int, default=3)

    p = sub.add_parser("report", help="verification report for a layered construction, CSV")
    p.add_argument("file")
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "classify":
            return cmd_classify(args, out)
        if args.command == "construct":
            return cmd_construct_g(args, out)
        if args.command == "check":
            return cmd_check(args, out)
        if args.command == "lemma":
            return cmd_lemma(args, out)
        if args.command == "bundle":
            return cmd_bundle_dim(args, out)
        if args.command == "color-or-embed":
            return cmd_color_or_embed(args, out)
        if args.command == "report":
            return cmd_report(args, out)
        raise HypergraphError(f"unknown command {args.command!r}")
    except (HypergraphError, WitnessError, json.JSONDecodeError, OSError, KeyError, ValueError) as exc:
        if isinstance(exc, InfeasibleParamsError):
            print(f"infeasible parameters: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
