"""
Command line entry point: poset, graph, paths, group, measure, compare.

Reports go to stdout (deterministic for a given command line), logs to stderr.
Exit codes: 0 ok, 1 property violation, 2 usage/input error, 3 cap exceeded.
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from numsym.config import Settings, get_settings, setup_logging
from numsym.errors import InputError, NumsymError
from numsym.graded_graph import build_graph, dimension, graph_csv, path_line
from numsym.measures import (
    parse_measure,
    path_measure,
    perturb_measure,
    is_central,
    uniform_level_measure,
)
from numsym.poset import (
    PosetWindow,
    build_window,
    enumerate_numberings,
    serialize_poset,
)
from numsym.samplers import (
    compare_frequency_profiles,
    estimate_frequency,
    sample_kernel_walk,
    sample_plancherel,
    sample_rsk_thoma,
)
from numsym.schemas import (
    FrequencyReport,
    GroupOrderRow,
    IdealSpec,
    MeasureVariant,
    OutputFormat,
    RunConfig,
    csv_line,
)
from numsym.store import check_group_order, record_frequency, record_group_order
from numsym.symmetry import (
    classify_local,
    depth_table,
    generate_group,
    hook_series,
    verify_relations,
)

logger = logging.getLogger("numsym.cli")

Output = Tuple[List[str], int]


# ================= ARGUMENTS =================

def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None


def _add_source(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--young", metavar="PARTS", help="Young diagram, e.g. 3,2")
    group.add_argument("--box", metavar="BOUNDS", help="box window of Z_+^d, e.g. 2,2,2")
    group.add_argument("--chain", metavar="N", help="chain with N elements")
    group.add_argument("--antichain", metavar="N", help="N incomparable elements above the minimum")
    group.add_argument("--file", metavar="PATH", help="poset file")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--depth", type=int, help="numbering length N, position 0 included")
    parser.add_argument("--csv", action="store_true", help="machine-readable output")
    parser.add_argument("--path-limit", type=int)
    parser.add_argument("--cap", type=int, help="group closure cap")


def _add_sampler(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--endpoint", metavar="LEVEL:INDEX")
    group.add_argument("--plancherel", action="store_true")
    group.add_argument("--rsk", metavar="ALPHA", help="letter probabilities, e.g. 0.7,0.3")
    group.add_argument("--markov", metavar="PATH")
    group.add_argument("--uniform", action="store_true", help="uniform measure on all paths (check only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="numsym", description="Symmetries of poset numberings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poset", help="build or parse a poset and print it")
    _add_source(p)
    _add_common(p)

    p = sub.add_parser("graph", help="graded graph of ideals with dimensions")
    _add_source(p)
    _add_common(p)
    p.add_argument("--list", action="store_true", help="list every vertex")

    p = sub.add_parser("paths", help="count or list numberings")
    _add_source(p)
    _add_common(p)
    p.add_argument("--list", action="store_true")

    p = sub.add_parser("group", help="generator relations, order and local subgroups")
    _add_source(p, required=False)
    _add_common(p)
    p.add_argument("--local", type=int, action="append", default=[], metavar="I")
    p.add_argument("--all-local", action="store_true")
    p.add_argument("--hook-series", type=_int_list, metavar="N,...",
                   help="orders for the diagrams (n-1,1)")
    p.add_argument("--depth-table", action="store_true", help="orders for lengths 3..N")
    p.add_argument("--record", action="store_true", help="store orders as fixtures")
    p.add_argument("--check-fixtures", action="store_true", help="compare orders with stored fixtures")

    p = sub.add_parser("measure", help="centrality check, sampling, frequencies")
    p.add_argument("action", choices=["check", "sample", "freq"])
    _add_source(p, required=False)
    _add_common(p)
    _add_sampler(p)
    p.add_argument("--perturb", type=float, metavar="EPS", help="move EPS mass inside one endpoint fiber")
    p.add_argument("--ideal", action="append", default=[], metavar="SPEC")
    p.add_argument("--n", type=int, help="steps per sampled numbering (default 1000, or the kernel depth)")
    p.add_argument("--replicas", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--record", action="store_true")

    p = sub.add_parser("compare", help="distinguishability of frequency profiles")
    _add_source(p, required=False)
    _add_common(p)
    p.add_argument("--sampler", action="append", required=True, metavar="SPEC")
    p.add_argument("--ideal", action="append", required=True, metavar="SPEC")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--replicas", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--sigmas", type=float)
    return parser


# ================= HELPERS =================

def resolve_window(args) -> Optional[PosetWindow]:
    for family in ("young", "box", "chain", "antichain", "file"):
        value = getattr(args, family, None)
        if value is not None:
            return build_window(f"{family}:{value}")
    return None


def run_config(args, settings: Settings, source: str, length: Optional[int] = None, **extra) -> RunConfig:
    """`length` is the resolved numbering length, echoed as the depth."""
    return RunConfig(
        subcommand=args.command + (f" {args.action}" if getattr(args, "action", None) else ""),
        source=source,
        depth=length,
        seed=extra.pop("seed", None),
        replicas=extra.pop("replicas", None),
        output_format=OutputFormat.CSV if args.csv else OutputFormat.TEXT,
        path_limit=args.path_limit or settings.path_limit,
        group_cap=args.cap or settings.group_cap,
        extra=[(k, str(v)) for k, v in extra.items()],
    )


def full_length(window: PosetWindow, depth: Optional[int]) -> int:
    return window.poset.n if depth is None else depth


# ================= SUBCOMMANDS =================

def cmd_poset(args, settings: Settings) -> Output:
    window = resolve_window(args)
    poset = window.poset
    lines = run_config(args, settings, window.label, full_length(window, args.depth)).header_lines()
    lines += [
        f"# elements: {poset.n}",
        f"# covers: {len(poset.covers)}",
        f"# incomparable_pairs: {len(poset.incomparable_pairs())}",
    ]
    lines += serialize_poset(window).rstrip("\n").split("\n")
    return lines, 0


def cmd_graph(args, settings: Settings) -> Output:
    window = resolve_window(args)
    length = full_length(window, args.depth)
    g = build_graph(window, length - 1)
    lines = run_config(args, settings, window.label, length).header_lines()
    if args.csv:
        return lines + graph_csv(g), 0
    lines.append(f"{'level':>5} {'vertices':>8} {'paths':>12} {'max_dim':>10}")
    for level in g.levels:
        dims = [dimension(g, v) for v in level]
        lines.append(f"{level[0].level:>5} {len(level):>8} {sum(dims):>12} {max(dims):>10}")
        if args.list:
            for v in level:
                lines.append(f"      {v.index}: {{{' '.join(map(str, v.ideal))}}} dim={dimension(g, v)}")
    return lines, 0


def cmd_paths(args, settings: Settings) -> Output:
    window = resolve_window(args)
    length = full_length(window, args.depth)
    paths = enumerate_numberings(window, length, limit=args.path_limit or settings.path_limit)
    lines = run_config(args, settings, window.label, length).header_lines()
    lines.append(f"paths: {len(paths)}")
    if args.list:
        lines += [path_line(p) for p in paths]
    return lines, 0


def _order_rows_output(rows: Sequence[GroupOrderRow], args) -> List[str]:
    if args.csv:
        out = ["source,length,paths,order,method,cap_exceeded,s_n,s_n_minus_1,matches"]
        out += [csv_line([r.source, r.length, r.path_count, r.order, r.order_method, int(r.cap_exceeded),
                          r.symmetric_n or "", r.symmetric_n_minus_1 or "", r.matches])
                for r in rows]
        return out
    out = [f"{'source':<14} {'length':>6} {'paths':>6} {'order':>12} {'method':<13} "
           f"{'|S_n|':>8} {'|S_n-1|':>8} matches"]
    for r in rows:
        out.append(f"{r.source:<14} {r.length:>6} {r.path_count:>6} {r.order:>12} {r.order_method:<13} "
                   f"{r.symmetric_n or '-':>8} {r.symmetric_n_minus_1 or '-':>8} {r.matches}")
    return out


def _fixtures(rows: Sequence[GroupOrderRow], args) -> Tuple[List[str], int]:
    lines, code = [], 0
    for row in rows:
        if args.record:
            stored = record_group_order(row)
            lines.append(f"# fixture {row.source} length {row.length}: {'recorded' if stored else 'kept'}")
        if args.check_fixtures:
            verdict = check_group_order(row)
            status = {None: "missing", True: "match", False: "MISMATCH"}[verdict]
            lines.append(f"# fixture {row.source} length {row.length}: {status}")
            if verdict is False:
                code = 1
    return lines, code


def cmd_group(args, settings: Settings) -> Output:
    cap = args.cap or settings.group_cap
    if args.hook_series:
        rows = hook_series(args.hook_series, cap=cap)
        lines = run_config(args, settings, "young:(n-1,1)",
                           hook_series=",".join(map(str, args.hook_series))).header_lines()
        fixture_lines, code = _fixtures(rows, args)
        code = code or (3 if any(r.cap_exceeded for r in rows) else 0)
        return lines + _order_rows_output(rows, args) + fixture_lines, code

    window = resolve_window(args)
    if window is None:
        raise InputError("group needs a poset source or --hook-series")
    length = full_length(window, args.depth)

    if args.depth_table:
        rows = depth_table(window, length, cap=cap)
        lines = run_config(args, settings, window.label, length, depth_table="yes").header_lines()
        fixture_lines, code = _fixtures(rows, args)
        code = code or (3 if any(r.cap_exceeded for r in rows) else 0)
        return lines + _order_rows_output(rows, args) + fixture_lines, code

    handle = generate_group(window, length, cap=cap, path_limit=args.path_limit or settings.path_limit)
    report = verify_relations(handle)
    local_indices = list(range(1, len(handle.generators))) if args.all_local else args.local
    locals_ = [classify_local(handle, i) for i in local_indices]

    lines = run_config(args, settings, window.label, length).header_lines()
    stats = handle.cayley
    if args.csv:
        lines.append("family,i,j,status,witness")
        lines += [f"{c.family},{c.i},{c.j},{'pass' if c.passed else 'fail'},"
                  f"{'' if c.witness is None else c.witness}" for c in report.checks]
        lines.append("")
        lines.append("paths,order,method,cayley_elements,diameter,cap_exceeded")
        lines.append(f"{handle.path_count},{handle.order},{handle.order_method},"
                     f"{stats.elements},{stats.diameter},{int(stats.cap_exceeded)}")
        if locals_:
            lines.append("")
            lines.append("i,product_order,group_order,degeneracy,orbits")
            for r in locals_:
                orbits = ";".join(f"{o.size}:{o.tag}x{o.count}" for o in r.orbit_types)
                lines.append(f"{r.i},{r.product_order},{r.group_order},{r.degeneracy},{orbits}")
    else:
        lines.append(f"paths: {handle.path_count}")
        lines.append(f"order: {handle.order} ({handle.order_method})")
        lines.append(f"cayley: elements={stats.elements} diameter={stats.diameter} "
                     f"cap_exceeded={'yes' if stats.cap_exceeded else 'no'}")
        for family in ("involution", "commutation", "hexagonal"):
            checks = [c for c in report.checks if c.family == family]
            failed = [c for c in checks if not c.passed]
            status = "pass" if not failed else f"FAIL at {[(c.i, c.j, c.witness) for c in failed]}"
            lines.append(f"relations {family}: {len(checks)} checked, {status}")
        for r in locals_:
            orbits = ", ".join(f"{o.count}x{o.tag}({o.size})" for o in r.orbit_types)
            lines.append(f"local i={r.i}: product_order={r.product_order} group_order={r.group_order} "
                         f"{r.degeneracy}; orbits {orbits}")

    code = 1 if not report.ok else (3 if stats.cap_exceeded else 0)
    if args.record or args.check_fixtures:
        row = GroupOrderRow(source=window.label, length=length, path_count=handle.path_count,
                            order=handle.order, order_method=handle.order_method,
                            cap_exceeded=stats.cap_exceeded)
        fixture_lines, fixture_code = _fixtures([row], args)
        lines += fixture_lines
        code = code or fixture_code
    return lines, code


def _sampler(args, window: Optional[PosetWindow]):
    if args.plancherel:
        return parse_measure("plancherel")
    if args.rsk:
        return parse_measure(f"rsk:{args.rsk}")
    if args.markov:
        return parse_measure(f"markov:{args.markov}")
    if args.endpoint:
        return parse_measure(f"endpoint:{args.endpoint}", window)
    raise InputError("choose a measure: --endpoint, --plancherel, --rsk or --markov")


def cmd_measure(args, settings: Settings) -> Output:
    window = resolve_window(args)
    seed = settings.default_seed if args.seed is None else args.seed
    replicas = settings.default_replicas if args.replicas is None else args.replicas

    if args.action == "check":
        return _measure_check(args, settings, window)

    spec = _sampler(args, window)
    n_steps = args.n or (spec.kernel.depth if spec.kernel is not None else 1000)
    if args.action == "sample":
        lines = run_config(args, settings, spec.label, seed=seed, n=n_steps).header_lines()
        if spec.variant in (MeasureVariant.PLANCHEREL, MeasureVariant.RSK_THOMA):
            growth = (sample_plancherel(n_steps, seed) if spec.variant == MeasureVariant.PLANCHEREL
                      else sample_rsk_thoma(spec.alpha, n_steps, seed))
            lines.append(f"# shape: {','.join(map(str, growth.shape))}")
            lines.append("step,row,col")
            lines += [f"{k},{r},{c}" for k, (r, c) in enumerate(growth.cells.tolist(), start=1)]
        else:
            lines.append(",".join(map(str, [0] + sample_kernel_walk(spec, n_steps, seed))))
        return lines, 0

    ideals = [IdealSpec.parse(text) for text in (args.ideal or ["full"])]
    lines = run_config(args, settings, spec.label, seed=seed, replicas=replicas, n=n_steps,
                       ideals=" ".join(map(str, ideals))).header_lines()
    reports = [estimate_frequency(spec, ideal, n_steps, replicas, seed) for ideal in ideals]
    if spec.flags:
        lines.append(f"# flags: {','.join(spec.flags)}")
    lines.append(FrequencyReport.CSV_HEADER)
    lines += [r.csv_row() for r in reports]
    if args.record:
        for r in reports:
            record_frequency(r)
    return lines, 0


def _measure_check(args, settings: Settings, window: Optional[PosetWindow]) -> Output:
    if args.uniform:
        if window is None:
            raise InputError("--uniform needs a poset source")
        length = full_length(window, args.depth)
        g = build_graph(window, length - 1)
        measure, label = uniform_level_measure(g, length), "uniform"
    else:
        spec = _sampler(args, window)
        if spec.kernel is None:
            raise InputError(f"{spec.label} has no exact kernel to check")
        window = spec.window
        length = spec.kernel.depth + 1
        g = build_graph(window, length - 1)
        measure, label = path_measure(g, spec.kernel, length), spec.label
    if args.perturb:
        measure = perturb_measure(measure, args.perturb)
        label += f" perturbed by {args.perturb}"

    report = is_central(g, measure)
    lines = run_config(args, settings, window.label, length, measure=label).header_lines()
    mode = "exact" if report.exact else "float"
    lines.append(f"central: {'yes' if report.central else 'no'} ({mode})")
    lines.append(f"sigma_invariant: {'yes' if report.invariant else 'no'}")
    if report.witness_generator is not None:
        lines.append(f"witness: sigma_{report.witness_generator} on {_path_line(report.witness_path)}")
    lines.append(f"fiber_uniform: {'yes' if report.fiber_uniform else 'no'}")
    if report.witness_fiber is not None:
        lines.append(f"witness_fiber: {' '.join(map(str, report.witness_fiber))}")
    expected_central = not args.perturb
    return lines, 0 if report.central == expected_central else 1


def _path_line(elements) -> str:
    return ",".join(map(str, elements))


def cmd_compare(args, settings: Settings) -> Output:
    window = resolve_window(args)
    seed = settings.default_seed if args.seed is None else args.seed
    replicas = settings.default_replicas if args.replicas is None else args.replicas
    samplers = [parse_measure(text, window) for text in args.sampler]
    ideals = [IdealSpec.parse(text) for text in args.ideal]
    sigmas = settings.distinguish_sigmas if args.sigmas is None else args.sigmas

    matrix, rows = compare_frequency_profiles(samplers, ideals, args.n, replicas, seed, sigmas)
    lines = run_config(args, settings, " vs ".join(s.label for s in samplers),
                       seed=seed, replicas=replicas, n=args.n, sigmas=sigmas,
                       ideals=" ".join(map(str, ideals))).header_lines()
    lines.append(FrequencyReport.CSV_HEADER)
    for reports in matrix:
        lines += [r.csv_row() for r in reports]
    lines.append("")
    lines.append("first,second,verdict,max_separation")
    for row in rows:
        lines.append(csv_line([row.first, row.second, row.verdict, f"{max(row.separations):.3f}"]))
    return lines, 0


COMMANDS = {
    "poset": cmd_poset,
    "graph": cmd_graph,
    "paths": cmd_paths,
    "group": cmd_group,
    "measure": cmd_measure,
    "compare": cmd_compare,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = get_settings()
    except ValidationError as e:
        print(f"error: invalid configuration: {e}", file=sys.stderr)
        return 2
    setup_logging(settings.log_level)
    args = build_parser().parse_args(argv)

    try:
        lines, code = COMMANDS[args.command](args, settings)
    except NumsymError as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValidationError, OSError) as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2

    sys.stdout.write("\n".join(lines) + "\n")
    return code
