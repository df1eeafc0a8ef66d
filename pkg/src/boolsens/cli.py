"""Command-line front end: analyze, search, feas, amplify, mm, circuit, repro."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import amplify, circuits, core, feasibility, mm, repro, search

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_UNKNOWN = 0, 2, 20, 30


def _point(text: str, n: int) -> tuple[int, ...]:
    """Witness given as a hexadecimal point index."""
    return core.point_bits(int(text, 16), n)


def _bits(text: str) -> tuple[int, ...]:
    if set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"not a bit string: {text}")
    return tuple(int(c) for c in text)


def _write(path, text: str) -> None:
    Path(path).write_text(text)


def cmd_analyze(args) -> int:
    f = core.read_table(args.tt) if args.tt else core.from_hex(args.n, args.hex)
    print(core.profile(f).to_json())
    return EXIT_OK


def cmd_search(args) -> int:
    t0 = time.perf_counter()
    query = {"n": args.n, "resiliency": args.resiliency, "dual_order": args.dual_order, "rotsym": args.rotsym}
    tables: list[core.TruthTable] = []
    if args.rotsym:
        tables = search.rotsym_search(args.n, args.resiliency, args.dual_order)
        count = len(tables)
        extra = {}
    else:
        if args.resiliency != args.n - 4:
            print("exhaustive search covers [4,k,0], [5,k,1] and [6,k,2] only", file=sys.stderr)
            return EXIT_USAGE
        if args.n in (4, 5):
            words = search.one_resilient_n5(args.partitions, args.threads) if args.n == 5 else search.balanced_tables(4)
            orders = search.dual_orders(words, args.n)
            counts = {k: int((orders >= k).sum()) for k in range(1, args.n + 1)}
            extra = {}
            if args.emit:
                keep = words[orders >= max(args.dual_order, 1)]
                tables = [search.table_from_word(int(w), args.n) for w in keep]
        else:
            r = search.search_n6(args.partitions, args.threads, keep_functions=bool(args.emit))
            counts = r.counts
            extra = {"case_split": r.case_split, "candidate_pairs": r.candidate_pairs}
            tables = [core.TruthTable.from_int(6, w) for w in r.functions]
        count = counts[args.dual_order] if args.dual_order else counts
        extra["counts"] = counts
    summary = {"query": query, "count": count, "wall_time_seconds": round(time.perf_counter() - t0, 3), **extra}
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        if args.dual_order and args.n == 6:
            tables = [t for t in tables if core.max_dual_sensitivity_order(t)[0] >= args.dual_order]
        for i, t in enumerate(tables):
            core.write_table(t, out / f"f{i:05d}.tt")
        _write(out / "counts.json", json.dumps(summary, indent=1) + "\n")
    print(json.dumps(summary))
    return EXIT_OK


def cmd_feas(args) -> int:
    if args.action == "encode":
        sys_ = feasibility.encode_existence(args.n, args.pdeg, int(args.witness, 16))
        text = feasibility.export_lp(sys_)
        if args.out:
            _write(args.out, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    sys_ = feasibility.parse_lp(Path(args.file).read_text())
    res = feasibility.solve_feasibility(sys_, int(float(args.nodes)))
    out = {"verdict": res.verdict, "nodes": res.nodes}
    if res:
        out["table"] = core.to_hex(feasibility.decode_solution(sys_, res.assignment))
    print(json.dumps(out))
    return {feasibility.FEASIBLE: EXIT_OK, feasibility.INFEASIBLE: EXIT_INFEASIBLE}.get(res.verdict, EXIT_UNKNOWN)


def cmd_amplify(args) -> int:
    base = core.read_table(args.base)
    if args.mode == "plain":
        cf = amplify.plain_power(base, args.levels)
    elif args.mode == "modified":
        if args.witness is None:
            print("--witness is required in modified mode", file=sys.stderr)
            return EXIT_USAGE
        cf = amplify.modified_power(base, args.levels, _point(args.witness, base.n))
    else:
        if args.constants is None:
            print("--constants is required in shifted mode", file=sys.stderr)
            return EXIT_USAGE
        cf = amplify.shifted_compose(base, args.constants, args.levels)
    report = {"n": cf.n, "mode": cf.mode, "levels": cf.depth}
    if cf.n <= core.MAX_VARS:
        t = cf.truth_table()
        if args.emit_table:
            core.write_table(t, args.emit_table)
        report["profile"] = json.loads(core.profile(t).to_json()) if cf.n <= 20 else {"pdeg": core.pdeg(t)}
        report["verification"] = "exact truth table"
    else:
        report["verification"] = "point evaluation at the witness"
        if cf.witness is not None:
            report["order1_at_witness"] = amplify.sensitivity_order_at_witness(cf, 1)
    print(json.dumps(report))
    return EXIT_OK


def cmd_mm(args) -> int:
    ledger = None
    info = {}
    if args.mode == "th1":
        spec = mm.build_th1(args.n1, args.n2)
    elif args.mode == "ladder":
        spec, ledger, z = mm.ladder_reduce(args.n1, args.n2)
        info["z"] = z
    elif args.mode == "korder":
        spec = mm.build_korder(args.n1, args.n2, args.k)
    else:
        spec, ledger, p = mm.ladder_reduce_korder(args.n1, args.n2, args.k)
        info["p"] = p
    if args.out:
        _write(args.out, spec.to_json(ledger))
    if args.table:
        core.write_table(mm.mm_truth_table(spec), args.table)
    info.update({"n": spec.n, "mm_family": mm.check_mm_family(spec)})
    if spec.n <= 22:
        info["pdeg"] = core.pdeg(mm.mm_truth_table(spec))
    print(json.dumps(info))
    return EXIT_OK


def cmd_circuit(args) -> int:
    if args.action == "synth":
        net = circuits.synth_from_anf(core.read_table(args.tt))
    else:
        base = circuits.parse(Path(args.base).read_text())
        consts = None
        if args.modified:
            if args.witness is None:
                print("--witness is required with --modified", file=sys.stderr)
                return EXIT_USAGE
            y = _point(args.witness, base.n_inputs)
            ref = circuits.simulate(base, y)
            consts = [tuple(ref ^ b for b in y)] * (args.levels - 1)
        net = circuits.layered_amplify(base, args.levels, consts)
        if args.parity:
            net = circuits.append_parity(net)
    if args.out:
        _write(args.out, circuits.emit(net))
    else:
        sys.stdout.write(circuits.emit(net))
    if args.stats:
        st = circuits.stats(net)
        print(json.dumps({**st.__dict__, "instances": net.instances}), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_repro(args) -> int:
    if args.list or not args.id:
        for r in repro.RECIPES:
            print(f"{r.id:16s} {r.budget:9s} {r.summary}")
        return EXIT_OK
    try:
        recipe = repro.get(args.id)
    except KeyError:
        print(f"unknown recipe: {args.id}", file=sys.stderr)
        return EXIT_USAGE
    report = repro.run_recipe(recipe, args.budget)
    for c in report["checks"]:
        print(f"{c['status']:4s} {c['name']}: expected {c['expected']} [{c['tag']}], got {c['got']}")
    print(f"{report['id']}: {report['status']} ({report['seconds']} s)")
    if args.report:
        _write(args.report, json.dumps(report, indent=1) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boolsens", description=__doc__)
    p.add_argument("--threads", type=int, default=1, help="worker processes for searches")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="profile of a truth table")
    a.add_argument("--tt", help="truth-table file")
    a.add_argument("--hex", help="table as hex (with --n)")
    a.add_argument("--n", type=int)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("search", help="exhaustive or rotation-symmetric search")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--resiliency", type=int, required=True)
    s.add_argument("--dual-order", type=int, default=0)
    s.add_argument("--rotsym", action="store_true")
    s.add_argument("--emit")
    s.add_argument("--partitions", type=int, default=1)
    s.set_defaults(func=cmd_search)

    f = sub.add_parser("feas", help="feasibility encodings")
    fsub = f.add_subparsers(dest="action", required=True)
    fe = fsub.add_parser("encode")
    fe.add_argument("--n", type=int, required=True)
    fe.add_argument("--pdeg", type=int, required=True)
    fe.add_argument("--witness", default="0", help="hex point index")
    fe.add_argument("--out")
    fs = fsub.add_parser("solve")
    fs.add_argument("file")
    fs.add_argument("--nodes", default="1e6")
    f.set_defaults(func=cmd_feas)

    m = sub.add_parser("amplify", help="recursive amplification")
    m.add_argument("--base", required=True)
    m.add_argument("--levels", type=int, required=True)
    m.add_argument("--mode", choices=["plain", "modified", "shifted"], default="plain")
    m.add_argument("--witness", help="hex point index")
    m.add_argument("--constants", type=_bits)
    m.add_argument("--emit-table")
    m.add_argument("--report", action="store_true")
    m.set_defaults(func=cmd_amplify)

    mmp = sub.add_parser("mm", help="Maiorana-McFarland constructions")
    mmsub = mmp.add_subparsers(dest="action", required=True)
    mb = mmsub.add_parser("build")
    mb.add_argument("--mode", choices=["th1", "ladder", "korder", "korder-ladder"], required=True)
    mb.add_argument("--n1", type=int, required=True)
    mb.add_argument("--n2", type=int, required=True)
    mb.add_argument("--k", type=int, default=1)
    mb.add_argument("--out")
    mb.add_argument("--table")
    mmp.set_defaults(func=cmd_mm)

    c = sub.add_parser("circuit", help="layered circuits")
    csub = c.add_subparsers(dest="action", required=True)
    cs = csub.add_parser("synth")
    cs.add_argument("--tt", required=True)
    cs.add_argument("--out")
    cs.add_argument("--stats", action="store_true")
    ca = csub.add_parser("amplify")
    ca.add_argument("--base", required=True)
    ca.add_argument("--levels", type=int, required=True)
    ca.add_argument("--modified", action="store_true")
    ca.add_argument("--witness")
    ca.add_argument("--parity", action="store_true")
    ca.add_argument("--out")
    ca.add_argument("--stats", action="store_true")
    c.set_defaults(func=cmd_circuit)

    r = sub.add_parser("repro", help="recompute a published result")
    r.add_argument("id", nargs="?")
    r.add_argument("--list", action="store_true")
    r.add_argument("--budget", choices=repro.BUDGETS, default="fast")
    r.add_argument("--report")
    r.set_defaults(func=cmd_repro)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "analyze" and not args.tt and (args.hex is None or args.n is None):
        print("analyze needs --tt or --hex with --n", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, core.CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
