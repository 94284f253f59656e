"""
Main entry point for netfair.

Subcommands: ingest, perceive, sweep, parity, axioms, synth. Exit status is 0
on success, 2 for usage errors, 3 for data errors, and 4 when a verification
fails (axiom violation, refused disconnected network, convergence mismatch).
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from . import __version__
from .engines.axiom_engine import (
    AxiomSuiteConfig, format_suite_report, load_axiom_config, run_axiom_suite, verdicts_frame
)
from .engines.perception_engine import ExpectationPolicy, summarize
from .excel.workbook_generator import generate_excel_workbook
from .exceptions import (
    ArgumentError, NetfairError, NetworkConstructionError, PitfallConstructionError
)
from .network.graph_core import AttributedNetwork, DecisionVector, connected_components
from .parsers.network_io import export_network, load_decisions, load_network
from .parsers.review_parser import LinkRule, ProtectedAttribute, load_review_dataset
from .processors.metrics_processor import MetricsProcessor
from .processors.visibility_processor import (
    GroupPartition, VisibilityProcessor, convergence_check, visibility_sweep
)
from .reports.manifest import OUTPUT_FORMATS, RunManifest, resolve_table, write_table, write_text
from .reports.plot_script import write_sweep_script
from .synth.generator import SynthConfig, biased_decision, load_synth_config, pitfall_instance, random_attributed_graph
from .utils import log
from .utils.constants import (
    DECISIONS_FILE, DEFAULT_AXIOM_TRIALS, DEFAULT_DELTA, DEFAULT_DELTA_MAX, DEFAULT_EPSILON,
    DEFAULT_LIST_SEPARATOR, DEFAULT_OUTPUT_DIR, DEFAULT_SEED, DEFAULT_THRESHOLD, DEGENERATE_FLAG_VALUES,
    EDGES_FILE, EXIT_DATA, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, NODES_FILE,
)


def positive_int(value: str) -> int:
    """argparse type for integers >= 1."""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value!r}") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value!r}")
    return number


def non_negative_float(value: str) -> float:
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {value!r}") from None
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {value!r}")
    return number


def _policy(args: argparse.Namespace) -> ExpectationPolicy:
    return ExpectationPolicy(delta=args.delta, degenerate_rule=DEGENERATE_FLAG_VALUES[args.degenerate])


def _decisions_path(args: argparse.Namespace) -> Path:
    return Path(args.decisions) if args.decisions else Path(args.network) / DECISIONS_FILE


def _load_inputs(args: argparse.Namespace) -> Tuple[AttributedNetwork, DecisionVector]:
    log.info(f"Loading network from {args.network}...")
    net = load_network(args.network, normalize=args.normalize_edges)
    decisions = load_decisions(_decisions_path(args), net)
    log.debug(f"  {net.node_count} nodes, {len(net.edges)} edges")
    return net, decisions


def _output_names(keys: Sequence[str], fmt: str) -> List[str]:
    names = []
    for key in keys:
        if fmt in ('csv', 'both'):
            names.append(f"{key}.csv")
        if fmt in ('json', 'both'):
            names.append(f"{key}.json")
    return names


def _emit(
    tables: Dict[str, pd.DataFrame],
    args: argparse.Namespace,
    manifest: RunManifest,
) -> None:
    """Write every table (and the optional workbook) into the output directory."""
    out = Path(args.out)
    for key, df in tables.items():
        for path in write_table(df, out / f"{key}.csv", manifest, args.format):
            log.debug(f"  Wrote {path}")
    if args.excel:
        generate_excel_workbook(tables, args.excel, manifest)
        log.info(f"Excel workbook: {args.excel}")


def _network_manifest(command: str, args: argparse.Namespace, outputs: List[str]) -> RunManifest:
    return RunManifest(
        command=command,
        inputs={'network': str(args.network), 'decisions': str(resolve_table(_decisions_path(args)))},
        delta=args.delta,
        degenerate_rule=DEGENERATE_FLAG_VALUES[args.degenerate],
        outputs=outputs,
    )


def cmd_ingest(args: argparse.Namespace) -> int:
    """Build the review network, write it as interchange tables plus summary.txt."""
    dataset = load_review_dataset(
        papers_path=args.papers,
        authors_path=args.authors,
        famous_path=args.famous,
        top_institutions_path=args.top_institutions,
        attribute=args.attribute,
        link_rule=args.link,
        threshold=args.threshold,
        separator=args.list_sep,
        normalize_ids=args.normalize_ids,
    )
    net, h = dataset.network, dataset.decisions
    outputs = _output_names([Path(NODES_FILE).stem, Path(EDGES_FILE).stem, Path(DECISIONS_FILE).stem, 'papers'],
                            args.format) + ['summary.txt']
    inputs = {'papers': str(args.papers), 'authors': str(args.authors)}
    if args.famous:
        inputs['famous'] = str(args.famous)
    if args.top_institutions:
        inputs['top_institutions'] = str(args.top_institutions)
    manifest = RunManifest(
        command='ingest',
        inputs=inputs,
        threshold=args.threshold,
        outputs=outputs,
        parameters={
            'attribute': args.attribute,
            'link': args.link,
            'list_sep': args.list_sep,
            'normalize_ids': args.normalize_ids,
        },
    )

    out = Path(args.out)
    export_network(net, out, h, manifest, args.format)
    papers = pd.DataFrame({'node_id': list(net.nodes), 'paper_id': dataset.paper_ids})
    write_table(papers, out / 'papers.csv', manifest, args.format)

    metrics = MetricsProcessor(net, h)
    visibility = VisibilityProcessor(net, h)
    mean_degree = visibility.mean_degree()
    lines = [
        f"papers: {net.node_count}",
        f"links: {len(net.edges)}",
        f"protected_attribute: {args.attribute}",
        f"acceptable: {sum(net.outcome)}",
        f"accepted: {sum(h.decisions)}",
    ]
    for key, group in visibility.partition.items():
        lines.append(f"group {key}: size={len(group)} mean_degree={mean_degree[key]:.3f}")
    lines.append('')
    lines.append(metrics.render_tables())
    write_text('\n'.join(lines), out / 'summary.txt', manifest)

    for key, group in visibility.partition.items():
        log.group_line(key, papers=len(group), mean_degree=mean_degree[key])
    log.success(f"Ingested {net.node_count} papers, {len(net.edges)} links into {out}")
    return EXIT_OK


def cmd_perceive(args: argparse.Namespace) -> int:
    """Per-node perception report with the per-group aggregates."""
    net, h = _load_inputs(args)
    processor = VisibilityProcessor(net, h, _policy(args))
    tables = {
        'perception': processor.perception_frame(),
        'breakdown': processor.breakdown_frame(),
        'expectation_distribution': processor.expectation_distribution(),
        'degree_distribution': processor.degree_distribution(),
    }
    manifest = _network_manifest('perceive', args, _output_names(list(tables), args.format))
    _emit(tables, args, manifest)

    summary = summarize(processor.records)
    log.info(f"Perceived fair: {summary.fair}/{summary.total} (ineligible {summary.ineligible})")
    for key, result in processor.visibility().items():
        log.group_line(key, fv=result.value, eligible=result.denominator, size=result.group_size)
    log.success(f"Wrote perception reports to {args.out}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """Fairness visibility for delta = 1..delta_max plus the saturation check."""
    net, h = _load_inputs(args)
    components = connected_components(net)
    if args.require_connected and len(components) != 1:
        sizes = sorted((len(c) for c in components), reverse=True)
        log.error(f"network has {len(components)} components (sizes {sizes[:10]}); refusing to sweep")
        return EXIT_VERIFICATION

    policy = _policy(args)
    partition = GroupPartition.from_network(net)
    sweep = visibility_sweep(net, h, partition, args.delta_max, policy)
    report = convergence_check(net, h, partition, policy)

    outputs = _output_names(['sweep'], args.format) + ['convergence.txt']
    if args.plot:
        outputs.append('plot_sweep.py')
    manifest = _network_manifest('sweep', args, outputs)
    manifest.delta = None
    manifest.parameters['delta_max'] = args.delta_max

    out = Path(args.out)
    _emit({'sweep': sweep.to_dataframe()}, args, manifest)
    write_text(report.to_text(), out / 'convergence.txt', manifest)
    if args.plot:
        table = out / ('sweep.json' if args.format == 'json' else 'sweep.csv')
        write_sweep_script(out / 'plot_sweep.py', table, manifest)

    for key, row in sweep.terminal().items():
        log.group_line(key, delta=row.delta, fv=row.fairness_visibility, acceptance=row.acceptance_probability)
    if not report.hypotheses_hold:
        for failure in report.failures:
            log.warn(f"saturation hypothesis not met: {failure}")
    elif report.converged is False:
        log.error(f"visibility did not reach acceptance probability for groups {report.mismatched_groups}")
        return EXIT_VERIFICATION
    log.success(f"Wrote sweep to {args.out}")
    return EXIT_OK


def cmd_parity(args: argparse.Namespace) -> int:
    """Per-group parity table, confusion counts, and the two parity gaps."""
    net, h = _load_inputs(args)
    processor = VisibilityProcessor(net, h, _policy(args))
    if len(processor.partition) < 2:
        raise ArgumentError("parity needs at least two protected groups")
    tables = {
        'parity': processor.parity_frame(),
        'confusion': MetricsProcessor(net, h).confusion_frame(),
    }
    outputs = _output_names(list(tables), args.format) + ['parity_gaps.txt']
    manifest = _network_manifest('parity', args, outputs)
    manifest.parameters['epsilon'] = args.epsilon
    _emit(tables, args, manifest)

    gaps = processor.parity_gaps(args.epsilon)
    parity_text = '\n'.join(f"{key}: {value}" for key, value in gaps.items())
    write_text(parity_text, Path(args.out) / 'parity_gaps.txt', manifest)
    log.report(parity_text)
    log.success(f"Wrote parity report to {args.out}")
    return EXIT_OK


def cmd_axioms(args: argparse.Namespace) -> int:
    """Randomized axiom campaign; exits 4 on any violation or missed quota."""
    config = load_axiom_config(args.config) if args.config else AxiomSuiteConfig()
    seed = DEFAULT_SEED if args.seed is None else args.seed
    log.info(f"Running axiom suite: {args.trials} trials per axiom, seed {seed}...")
    verdicts = run_axiom_suite(config, args.trials, seed)

    manifest = RunManifest(
        command='axioms',
        inputs={'config': str(args.config)} if args.config else {},
        seed=seed,
        outputs=_output_names(['axioms'], args.format) + ['axioms.txt'],
        parameters={'trials': args.trials},
    )
    report = format_suite_report(verdicts)
    _emit({'axioms': verdicts_frame(verdicts)}, args, manifest)
    write_text(report, Path(args.out) / 'axioms.txt', manifest)
    log.report(report)

    if not all(v.passed for v in verdicts):
        log.error("axiom suite failed")
        return EXIT_VERIFICATION
    log.success("All axioms hold")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    """Generate a synthetic network with decisions, or a pitfall instance."""
    if args.pitfall and args.config:
        raise ArgumentError("--pitfall and --config are mutually exclusive")
    if args.pitfall:
        seed = DEFAULT_SEED if args.seed is None else args.seed
        net, h = pitfall_instance(seed)
        parameters = {'pitfall': True}
    else:
        config = load_synth_config(args.config) if args.config else SynthConfig()
        if args.seed is not None:
            config = config.with_seed(args.seed)
        seed = config.seed
        net = random_attributed_graph(config)
        h = biased_decision(net, config)
        parameters = {'config': json.dumps(config.to_dict(), sort_keys=True)}

    outputs = _output_names([Path(NODES_FILE).stem, Path(EDGES_FILE).stem, Path(DECISIONS_FILE).stem], args.format)
    manifest = RunManifest(
        command='synth',
        inputs={'config': str(args.config)} if args.config else {},
        seed=seed,
        outputs=outputs,
        parameters=parameters,
    )
    export_network(net, args.out, h, manifest, args.format)
    log.success(f"Generated {net.node_count} nodes, {len(net.edges)} edges into {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--delta', type=positive_int, default=DEFAULT_DELTA,
                        help='Neighborhood radius (default: 1)')
    common.add_argument('--degenerate', choices=sorted(DEGENERATE_FLAG_VALUES), default='zero',
                        help='Nodes without same-outcome neighbors: zero expectation or exclude')
    common.add_argument('--threshold', type=float, default=DEFAULT_THRESHOLD,
                        help='Acceptability threshold; acceptable iff avg rating > threshold - 1')
    common.add_argument('--seed', type=int, default=None, help='Random seed')
    common.add_argument('--out', default=str(DEFAULT_OUTPUT_DIR), help='Output directory')
    common.add_argument('--epsilon', type=non_negative_float, default=DEFAULT_EPSILON,
                        help='Parity tolerance (default: 0)')
    common.add_argument('--format', choices=OUTPUT_FORMATS, default='csv',
                        help='Table format: csv, json, or both')
    common.add_argument('--excel', default=None, help='Also write all tables to this .xlsx workbook')
    common.add_argument('--verbose', action='store_true', help='Enable extra debug output')
    common.add_argument('--log-file', type=str, default=None, help='Write logs to file')

    network_inputs = argparse.ArgumentParser(add_help=False)
    network_inputs.add_argument('--network', required=True, help='Directory with nodes.csv and edges.csv')
    network_inputs.add_argument('--decisions', default=None,
                                help='Decision table (default: decisions.csv in the network directory)')
    network_inputs.add_argument('--normalize-edges', action='store_true',
                                help='Drop self-loops and duplicate edges instead of failing')

    parser = argparse.ArgumentParser(
        prog='netfair',
        description='netfair - Network-centric fairness perception and visibility analysis',
    )
    parser.add_argument('--version', action='version', version=f"netfair {__version__}")
    subparsers = parser.add_subparsers(dest='command', required=True)

    ingest = subparsers.add_parser('ingest', parents=[common], help='Build the peer-review network')
    ingest.add_argument('--papers', required=True, help='Papers table (CSV or JSON)')
    ingest.add_argument('--authors', required=True, help='Authors table (CSV or JSON)')
    ingest.add_argument('--famous', default=None, help='Famous-author roster, one id per line')
    ingest.add_argument('--top-institutions', default=None, help='Top-institution roster, one name per line')
    ingest.add_argument('--attribute', choices=[a.value for a in ProtectedAttribute],
                        default=ProtectedAttribute.FAMOUS.value, help='Protected attribute')
    ingest.add_argument('--link', choices=[r.value for r in LinkRule], default=LinkRule.SHARED_AUTHOR.value,
                        help='Link on shared authors only, or also on prior collaborations')
    ingest.add_argument('--list-sep', default=DEFAULT_LIST_SEPARATOR, help='Separator of list fields')
    ingest.add_argument('--normalize-ids', action='store_true',
                        help='Case-fold and collapse whitespace in ids and institution names')
    ingest.set_defaults(handler=cmd_ingest)

    perceive = subparsers.add_parser('perceive', parents=[common, network_inputs],
                                     help='Per-node fairness perception report')
    perceive.set_defaults(handler=cmd_perceive)

    sweep = subparsers.add_parser('sweep', parents=[common, network_inputs],
                                  help='Fairness visibility across neighborhood sizes')
    sweep.add_argument('--delta-max', type=positive_int, default=DEFAULT_DELTA_MAX,
                       help='Largest neighborhood radius')
    sweep.add_argument('--plot', action='store_true', help='Also write a matplotlib script')
    sweep.add_argument('--require-connected', action='store_true',
                       help='Refuse disconnected networks')
    sweep.set_defaults(handler=cmd_sweep)

    parity = subparsers.add_parser('parity', parents=[common, network_inputs],
                                   help='Visibility and demographic parity report')
    parity.set_defaults(handler=cmd_parity)

    axioms = subparsers.add_parser('axioms', parents=[common], help='Randomized axiom verification')
    axioms.add_argument('--config', default=None, help='Axiom suite config (JSON)')
    axioms.add_argument('--trials', type=positive_int, default=DEFAULT_AXIOM_TRIALS,
                        help='Trials per axiom')
    axioms.set_defaults(handler=cmd_axioms)

    synth = subparsers.add_parser('synth', parents=[common], help='Generate a synthetic network')
    synth.add_argument('--config', default=None, help='Generator config (JSON)')
    synth.add_argument('--pitfall', action='store_true', help='Generate a pitfall instance')
    synth.set_defaults(handler=cmd_synth)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    # Configure logging
    log.set_verbosity(args.verbose)
    log.set_log_file(args.log_file)
    if args.log_file:
        log.info(f"Logging to file: {args.log_file}")

    try:
        return args.handler(args)
    except NetworkConstructionError as e:
        log.exception("Invalid network", e)
        return EXIT_DATA
    except PitfallConstructionError as e:
        log.exception("Pitfall construction failed", e)
        return EXIT_VERIFICATION
    except ArgumentError as e:
        log.exception("Invalid argument", e)
        return EXIT_USAGE
    except (NetfairError, OSError) as e:
        log.exception("Data error", e)
        return EXIT_DATA


def run() -> None:
    sys.exit(main())


if __name__ == '__main__':
    run()
