#!/usr/bin/env python3

import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional
from pathlib import Path

# Add the project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from dagster import DagsterInstance, materialize  # noqa: E402
from dotenv import load_dotenv  # noqa: E402

from domain.exceptions import (  # noqa: E402
    NumericError,
    OutOfDepthError,
    ParameterError,
    ResourceError,
)
from domain.geometry import (  # noqa: E402
    census_depth,
    diagonal_census,
    realize,
    realize_word_class,
    tile_point_segment,
)
from domain.growth import (  # noqa: E402
    SURFACE_KINDS,
    growth_series,
    series_coefficients,
    surface_growth_series,
    tiling_growth_rate,
    type_matrix_spectral_radius,
)
from domain.langrate import debruijn, forbidden_set, perron_rate  # noqa: E402
from domain.models import Rule, TilingParams  # noqa: E402
from domain.paths import is_minimal, minimal_path, tiling_distance  # noqa: E402
from domain.services import TableService, TilingService  # noqa: E402
from domain.tiling import build_tiling, tiles_at_distance  # noqa: E402
from domain.words import (  # noqa: E402
    check_admissible,
    enumerate_admissible_classes,
    format_word,
    parse_word,
    word_class,
    word_to_path,
)
from infrastructure.config import RunConfig, Settings  # noqa: E402
from infrastructure.rendering import write_svg  # noqa: E402
from infrastructure.storage import (  # noqa: E402
    JsonGraphRepository,
    JsonStorageAdapter,
    TableExporter,
    format_float,
)

EXIT_OK = 0
EXIT_JOB_FAILED = 1
EXIT_PARAMETER = 2
EXIT_NUMERIC = 3

JOBS = [
    ("tables_job", "Growth rates, language bounds and complexity ranges"),
    ("growth_job", "Growth series of HYPBILL_P, HYPBILL_Q"),
    ("census_job", "Generalized-diagonal census in the Poincare disk"),
    ("full_pipeline_job", "All of the above"),
]


def setup_argparse() -> argparse.ArgumentParser:
    """Setup command line argument parser"""
    parser = argparse.ArgumentParser(
        prog="hypbill",
        description="Hyperbolic (p,q)-tilings, growth series and billiard languages",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Commands:
  growth      - Growth series and tile counts by tiling distance
  alpha       - Tiling growth rate
  tables      - Published growth-rate tables (1, 2, 3)
  word        - Admissibility, word classes, class counts
  path        - Tiling distance and path minimality
  lang-rate   - Growth rate of a forbidden-word language
  draw        - Poincare disk drawing as SVG
  census      - Generalized diagonals by combinatorial length
  jobs        - List and run the dagster jobs

Examples:
  hypbill growth --p 4 --q 6 --terms 8 --depth 5
  hypbill tables --which 1 --format csv
  hypbill word check --p 4 --q 8 --word 12121
  hypbill word class --p 4 --q 8 --word 12124141
  hypbill census --p 4 --q 6 --kmax 3 --format json
  hypbill jobs --job tables_job --verbose
        """
    )
    parser.add_argument(
        "--env-file",
        type=str,
        default=".env",
        help="Path to environment file (default: .env)"
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", default="text",
                        choices=["text", "csv", "json"], help="Output format (default: text)")
    common.add_argument("--output", type=str, help="Write the result to this file")
    common.add_argument("--tolerance", type=float, help="Numeric tolerance (HYPBILL_TOLERANCE)")

    tiling = argparse.ArgumentParser(add_help=False)
    tiling.add_argument("--p", type=int, required=True, help="Sides per tile")
    tiling.add_argument("--q", type=int, required=True, help="Tiles per vertex")

    sub = parser.add_subparsers(dest="command")

    growth = sub.add_parser("growth", parents=[common], help="Growth series")
    growth.add_argument("--p", type=int, help="Sides per tile")
    growth.add_argument("--q", type=int, help="Tiles per vertex")
    growth.add_argument("--terms", type=int, default=10, help="Coefficients N_td(0..terms)")
    growth.add_argument("--depth", type=int, help="Also generate the tiling and compare counts")
    growth.add_argument("--surface", choices=SURFACE_KINDS, help="Series of a glued polygon surface")
    growth.add_argument("--n", type=int, help="Surface parameter for --surface")
    growth.add_argument("--save-graph", type=str, help="Save the generated tiling as JSON")

    alpha = sub.add_parser("alpha", parents=[common, tiling], help="Tiling growth rate")
    alpha.add_argument("--types", action="store_true", help="Also report the type-matrix spectral radius")

    tables = sub.add_parser("tables", parents=[common], help="Published tables")
    tables.add_argument("--which", choices=["1", "2", "3"], required=True)

    word = sub.add_parser("word", help="Billiard words")
    word_sub = word.add_subparsers(dest="word_command")
    check = word_sub.add_parser("check", parents=[common, tiling], help="Admissibility check")
    check.add_argument("--word", required=True)
    check.add_argument("--rule", choices=[r.value for r in Rule],
                       help="Rule family (default: e for even q, o-upper for odd q)")
    check.add_argument("--zero-based", action="store_true", help="Letters are 0..p-1")
    cls = word_sub.add_parser(
        "class",
        parents=[common, tiling],
        help="Word class (even q)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="""
Closure of a word under vertex-sequence moves, and whether every member is
admissible.

Letters 1 and p are adjacent, so a move only swaps letters that share a tile
corner. Under this rule the (4,8) word 12123131 has the admissible class
{12123131, 21213131}; it is not equivalent to 12121313. The word 12124141 is
admissible but its class, which contains 12121414, is not.
        """
    )
    cls.add_argument("--word", required=True)
    cls.add_argument("--zero-based", action="store_true", help="Letters are 0..p-1")
    cls.add_argument("--class-cap", type=int, help="HYPBILL_CLASS_CAP")
    classes = word_sub.add_parser("classes", parents=[common, tiling], help="Count admissible classes")
    classes.add_argument("--n", type=int, required=True, help="Word length")
    classes.add_argument("--budget", type=int, help="HYPBILL_ENUM_BUDGET")

    path = sub.add_parser("path", help="Tiling paths")
    path_sub = path.add_subparsers(dest="path_command")
    dist = path_sub.add_parser("dist", parents=[common, tiling], help="Tiling distance")
    dist.add_argument("--depth", type=int, required=True)
    dist.add_argument("--from", dest="tile_a", type=int, required=True)
    dist.add_argument("--to", dest="tile_b", type=int, required=True)
    minimal = path_sub.add_parser("minimal", parents=[common, tiling], help="Minimality of a word path")
    minimal.add_argument("--depth", type=int, required=True)
    minimal.add_argument("--word", required=True)

    lang = sub.add_parser("lang-rate", parents=[common, tiling], help="Forbidden-language growth rate")
    lang.add_argument("--rule", choices=[r.value for r in Rule], required=True)
    lang.add_argument("--power-iter-cap", type=int, help="HYPBILL_POWER_ITER_CAP")

    draw = sub.add_parser("draw", parents=[tiling], help="Poincare disk SVG")
    draw.add_argument("--depth", type=int, help="HYPBILL_GEOMETRY_DEPTH")
    draw.add_argument("--svg", required=True, help="Output SVG file")
    draw.add_argument("--word", help="Trace the segment realizing this word from the base tile")
    draw.add_argument("--seed", type=int, help="HYPBILL_SEED")

    census = sub.add_parser("census", parents=[common, tiling], help="Generalized diagonals")
    census.add_argument("--kmax", type=int, required=True)
    census.add_argument("--depth", type=int, help="Realization depth (default: the least depth the census needs)")
    census.add_argument("--json", action="store_true", help="Same as --format json")

    jobs = sub.add_parser("jobs", help="Dagster jobs")
    jobs.add_argument("--job", type=str, help="Job name to execute")
    jobs.add_argument("--list", dest="list_jobs", action="store_true", help="List all available jobs")
    jobs.add_argument("--verbose", action="store_true", help="Enable verbose logging")
    jobs.add_argument("--dry-run", action="store_true", help="Show what would be executed without running")

    return parser


def load_environment(env_file: str, quiet: bool = False) -> bool:
    """Load environment variables from file"""
    env_path = Path(env_file)
    if env_path.exists():
        load_dotenv(env_path)
        if not quiet:
            print(f"✓ Loaded environment from {env_path}")
        return True
    if not quiet:
        print(f"⚠ Environment file not found: {env_path}")
    return False


def emit(config: RunConfig, text: str, document: Dict[str, Any], rows: Optional[List[Dict[str, Any]]] = None) -> None:
    """Print or write the result in the configured format"""
    if config.output_format == "json":
        payload = json.dumps({"schema": 1, **document}, indent=2, sort_keys=True)
    elif config.output_format == "csv":
        import pandas as pd
        payload = pd.DataFrame(rows if rows is not None else [document]).to_csv(
            index=False, float_format="%.14f", lineterminator="\n"
        ).rstrip("\n")
    else:
        payload = text
    if config.output_path:
        out = Path(config.output_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(payload + "\n", encoding="utf-8")
        if config.output_format == "text":
            print(f"✓ Wrote {out}")
    else:
        print(payload)


def _params(args: argparse.Namespace) -> TilingParams:
    return TilingParams(args.p, args.q)


def cmd_growth(args: argparse.Namespace, config: RunConfig) -> int:
    if args.surface:
        if args.n is None:
            raise ParameterError("--surface needs --n")
        series = surface_growth_series(args.n, args.surface)
        label = f"{args.surface} surface n={args.n}"
    else:
        if args.p is None or args.q is None:
            raise ParameterError("growth needs --p and --q, or --surface and --n")
        series = growth_series(_params(args))
        label = str(_params(args))
    coeffs = series_coefficients(series, args.terms)
    lines = [
        f"📊 Growth series {label}",
        f"  numerator:   {list(series.numerator)}",
        f"  denominator: {list(series.denominator)}",
        f"  N_td(0..{args.terms}): {coeffs}",
    ]
    measured: Optional[List[int]] = None
    if args.depth is not None:
        if args.surface:
            raise ParameterError("--depth is not available with --surface")
        service = TilingService(JsonGraphRepository("."))
        if args.save_graph:
            g, result = service.build_and_save(_params(args), args.depth, args.save_graph)
            lines.append(f"  {'✓' if result.success else '❌'} {result.message}")
            if not result.success:
                emit(config, "\n".join(lines), {"errors": result.errors})
                return EXIT_NUMERIC
        else:
            g = service.build(_params(args), args.depth)
        measured = [tiles_at_distance(g, n) for n in range(min(args.terms, args.depth) + 1)]
        matches = measured == coeffs[:len(measured)]
        marker = "✓" if matches else "❌"
        lines.append(f"  {marker} generated tiling (depth {args.depth}): {measured}")
        if not matches:
            emit(config, "\n".join(lines), {"coefficients": coeffs, "measured": measured})
            return EXIT_NUMERIC
    document: Dict[str, Any] = {
        "series": label,
        "numerator": list(series.numerator),
        "denominator": list(series.denominator),
        "coefficients": coeffs,
    }
    if measured is not None:
        document["measured"] = measured
    rows = [{"n": n, "tiles": c} for n, c in enumerate(coeffs)]
    emit(config, "\n".join(lines), document, rows)
    return EXIT_OK


def cmd_alpha(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    rate = tiling_growth_rate(params, config.settings.tolerance)
    document: Dict[str, Any] = {"p": params.p, "q": params.q, "alpha": float(format_float(rate.alpha))}
    text = f"📊 alpha{params} = {format_float(rate.alpha)} (±{rate.precision:.1e})"
    if args.types:
        radius = type_matrix_spectral_radius(params, tol=config.settings.tolerance, seed=config.settings.seed)
        document["type_matrix_radius"] = float(format_float(radius))
        text += f"\n  type-matrix spectral radius = {format_float(radius)}"
    emit(config, text, document)
    return EXIT_OK


def cmd_tables(args: argparse.Namespace, config: RunConfig) -> int:
    settings = config.settings
    service = TableService(settings.tolerance, settings.power_iter_cap)
    table = f"table{args.which}"
    if args.which == "1":
        df = service.table1_frame()
    elif args.which == "3":
        df = service.table3_frame()
    else:
        df = service.table2_frame()
    published = TableExporter.publish(df, table)
    if config.output_format == "csv":
        payload = published.to_csv(index=False, lineterminator="\n").rstrip("\n")
    elif config.output_format == "json":
        payload = json.dumps(
            {**JsonStorageAdapter.to_document(df), "table": table}, indent=2, sort_keys=True
        )
    else:
        payload = f"📋 Table {args.which}\n" + published.to_markdown(index=False)
    if config.output_path:
        out = Path(config.output_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(payload + "\n", encoding="utf-8")
        if config.output_format == "text":
            print(f"✓ Wrote {out}")
    else:
        print(payload)
    return EXIT_OK


def _default_rule(params: TilingParams) -> Rule:
    return Rule.E if params.q_even else Rule.O_UPPER


def cmd_word(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    settings = config.settings
    if args.word_command == "check":
        word = parse_word(args.word, params.p, args.zero_based)
        rule = Rule(args.rule) if args.rule else _default_rule(params)
        verdict = check_admissible(word, params, rule)
        document: Dict[str, Any] = {"word": format_word(word, params.p), "rule": rule.value,
                                    "admissible": verdict.admissible}
        if verdict.admissible:
            text = f"✅ {format_word(word, params.p)} is admissible under rule {rule.value}"
        else:
            v = verdict.violation
            document["violation"] = {"rule": v.rule, "position": v.position, "length": v.length}
            text = (f"❌ {format_word(word, params.p)} violates {v.rule} "
                    f"at position {v.position}, length {v.length}")
        emit(config, text, document)
        return EXIT_OK
    if args.word_command == "class":
        word = parse_word(args.word, params.p, args.zero_based)
        cap = args.class_cap or settings.class_cap
        cls = word_class(word, params, cap)
        members = sorted(format_word(m, params.p) for m in cls.members)
        document = {"canonical": format_word(cls.canonical, params.p), "size": len(cls),
                    "admissible": cls.class_admissible, "members": members}
        marker = "✅" if cls.class_admissible else "❌"
        text = (f"{marker} class of {format_word(word, params.p)}: {len(cls)} members, "
                f"canonical {document['canonical']}, "
                f"{'admissible' if cls.class_admissible else 'inadmissible'}")
        if not cls.class_admissible:
            bad = next(m for m in sorted(cls.members)
                       if not check_admissible(m, params, Rule.E).admissible)
            document["witness"] = format_word(bad, params.p)
            text += f" (member {document['witness']})"
        emit(config, text, document, [{"member": m} for m in members])
        return EXIT_OK
    if args.word_command == "classes":
        budget = args.budget or settings.enum_budget
        result = enumerate_admissible_classes(params, args.n, budget, settings.class_cap)
        document = {"p": params.p, "q": params.q, "n": args.n, "count": result.count}
        text = f"📊 admissible classes of length {args.n} for {params}: {result.count}"
        emit(config, text, document)
        return EXIT_OK
    raise ParameterError("word needs one of: check, class, classes")


def cmd_path(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    g = build_tiling(params, args.depth)
    if args.path_command == "dist":
        d = tiling_distance(g, args.tile_a, args.tile_b)
        route = minimal_path(g, args.tile_a, args.tile_b)
        document = {"from": args.tile_a, "to": args.tile_b, "distance": d, "tiles": list(route.tiles)}
        emit(config, f"📊 td({args.tile_a}, {args.tile_b}) = {d} via {list(route.tiles)}", document)
        return EXIT_OK
    if args.path_command == "minimal":
        word = parse_word(args.word, params.p)
        route = word_to_path(word, g)
        report = is_minimal(route)
        document: Dict[str, Any] = {"word": format_word(word, params.p), "minimal": report.minimal,
                                    "length": report.length, "distance": report.distance,
                                    "witness": report.witness_kind}
        if report.minimal:
            text = f"✅ path of {document['word']} is minimal (length {report.length})"
        else:
            text = (f"❌ path of {document['word']} has length {report.length}, "
                    f"distance {report.distance}; witness: {report.witness_kind}")
            if report.doubled_class is not None:
                document["doubled_class"] = report.doubled_class
        emit(config, text, document)
        return EXIT_OK
    raise ParameterError("path needs one of: dist, minimal")


def cmd_lang_rate(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    settings = config.settings
    rule = Rule(args.rule)
    graph = debruijn(forbidden_set(params, rule))
    rate = perron_rate(graph, settings.tolerance, args.power_iter_cap or settings.power_iter_cap)
    document = {"p": params.p, "q": params.q, "rule": rule.value,
                "vertices": len(graph.vertices), "rate": float(format_float(rate))}
    text = (f"📊 {rule.value} language of {params}: rate {format_float(rate)} "
            f"({len(graph.vertices)} transfer-graph vertices)")
    emit(config, text, document)
    return EXIT_OK


def cmd_draw(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    settings = config.settings
    depth = args.depth if args.depth is not None else settings.geometry_depth
    g = build_tiling(params, depth)
    r = realize(g, depth)
    segment = None
    if args.word:
        word = parse_word(args.word, params.p)
        if params.q_even:
            found = realize_word_class(r, word_class(word, params, settings.class_cap), seed=settings.seed)
            if found.refuted:
                print(f"⚠ class of {format_word(word, params.p)} is inadmissible; no segment drawn")
            segment = found.segment
        else:
            end = word_to_path(word, g).end
            if end != g.base_tile:
                segment = tile_point_segment(r, g.base_tile, end)
    result = write_svg(r, args.svg, segment=segment)
    if not result.success:
        print(f"❌ {result.message}: {'; '.join(result.errors)}")
        return EXIT_NUMERIC
    print(f"✓ {result.message} ({result.record_count} edges, {len(r.tiles)} tiles)")
    return EXIT_OK


def cmd_census(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    depth = args.depth if args.depth is not None else census_depth(params.q, args.kmax)
    g = build_tiling(params, depth)
    census = diagonal_census(realize(g, depth), args.kmax)
    df = TableService.census_frame(census)
    rows = df.to_dict("records")
    document = {
        "p": params.p, "q": params.q, "k_max": census.k_max,
        "n_cl": {str(k): v for k, v in census.n_cl.items()},
        "n_cl_prim": {str(k): v for k, v in census.n_cl_prim.items()},
        "gd": {str(k): str(v) for k, v in census.gd.items()},
        "excluded": census.excluded,
        "edges_skipped": census.edges_skipped,
    }
    text = f"📊 generalized diagonals of {params} (depth {depth})\n" + df.to_markdown(index=False)
    if census.excluded:
        text += f"\n⚠ {census.excluded} segments too close to a vertex were excluded"
    emit(config, text, document, rows)
    return EXIT_OK


def list_available_jobs() -> None:
    """List all available jobs"""
    print("\n📋 Available Jobs:")
    print("=" * 50)
    for job_name, description in JOBS:
        print(f"  {job_name:<20} - {description}")
    print("\n💡 Usage: hypbill jobs --job <job_name>")


def execute_job(job_name: str, verbose: bool = False, dry_run: bool = False) -> bool:
    """Materialize the assets of a Dagster job"""
    from usecase.jobs import JOB_ASSETS

    if job_name not in JOB_ASSETS:
        print(f"❌ Job '{job_name}' not found.")
        print(f"Available jobs: {', '.join(JOB_ASSETS)}")
        return False
    assets = JOB_ASSETS[job_name]
    description = dict(JOBS)[job_name]

    if dry_run:
        print(f"🔍 Dry run for job: {job_name}")
        print(f"Description: {description}")
        print("Assets that would be materialized:")
        for asset in assets:
            print(f"  - {asset.key.to_user_string()}")
        return True

    print(f"🚀 Executing job: {job_name}")
    print(f"Description: {description}")
    print(f"📊 Materializing {len(assets)} assets...")
    if verbose:
        for asset in assets:
            print(f"  - {asset.key.to_user_string()}")

    try:
        result = materialize(assets, instance=DagsterInstance.ephemeral(), raise_on_error=False)
    except Exception as e:
        print(f"❌ Job execution failed with error: {str(e)}")
        if verbose:
            import traceback
            traceback.print_exc()
        return False

    if result.success:
        print(f"✅ Job '{job_name}' completed successfully!")
        if verbose:
            print("\n📊 Execution Summary:")
            for event in result.all_events:
                if event.event_type_value == "STEP_SUCCESS":
                    print(f"  ✓ {event.step_key}")
        return True

    print(f"❌ Job '{job_name}' failed!")
    if verbose:
        print("\n🔍 Error Details:")
        for event in result.all_events:
            if event.event_type_value == "STEP_FAILURE":
                print(f"  ✗ {event.step_key}: {event.event_specific_data}")
    return False


def cmd_jobs(args: argparse.Namespace, config: RunConfig) -> int:
    if args.list_jobs or not args.job:
        list_available_jobs()
        return EXIT_OK
    ok = execute_job(args.job, verbose=args.verbose, dry_run=args.dry_run)
    return EXIT_OK if ok else EXIT_JOB_FAILED


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "growth": cmd_growth,
    "alpha": cmd_alpha,
    "tables": cmd_tables,
    "word": cmd_word,
    "path": cmd_path,
    "lang-rate": cmd_lang_rate,
    "draw": cmd_draw,
    "census": cmd_census,
    "jobs": cmd_jobs,
}


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge environment settings with command-line values"""
    settings = Settings.from_env(args.env_file if Path(args.env_file).exists() else None)
    settings = settings.with_overrides(
        tolerance=getattr(args, "tolerance", None),
        class_cap=getattr(args, "class_cap", None),
        enum_budget=getattr(args, "budget", None),
        power_iter_cap=getattr(args, "power_iter_cap", None),
        geometry_depth=getattr(args, "depth", None) if args.command == "draw" else None,
        seed=getattr(args, "seed", None),
    )
    output_format = getattr(args, "output_format", "text")
    if getattr(args, "json", False):
        output_format = "json"
    return RunConfig(
        subcommand=args.command,
        settings=settings,
        p=getattr(args, "p", None),
        q=getattr(args, "q", None),
        depth=getattr(args, "depth", None),
        terms=getattr(args, "terms", None),
        output_format=output_format,
        output_path=getattr(args, "output", None),
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, dispatch and map errors to exit codes"""
    parser = setup_argparse()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_OK

    machine = getattr(args, "output_format", "text") != "text" or getattr(args, "json", False)
    load_environment(args.env_file, quiet=machine or args.command != "jobs")

    try:
        config = build_config(args)
        return COMMANDS[args.command](args, config)
    except ParameterError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_PARAMETER
    except (NumericError, ResourceError, OutOfDepthError) as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC


def main():
    """Main CLI function"""
    sys.exit(run())


if __name__ == "__main__":
    main()
