"""
Implementations of the CLI subcommands.

Every command takes a validated RunConfig plus the loaded Config and
returns an exit code. Results go to stdout (or to --out); diagnostics go
to the logger.
"""

import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from config.config_manager import Config, RoofConfig, set_config
from entanglement.convex_roof import RoofObjective, negativity_lower_bound, roof_upper_bound
from entanglement.measures import cren, is_ppt, mixed_concurrence, negativity
from models.errors import StateInputError
from models.measure_value import MeasureKind
from models.quantum_state import AnyState, PureState, load_state
from models.register import Partition
from monogamy.audit import AuditReport, Verdict, audit, ckw_comparison
from monogamy.bounds import BOUNDS_BY_KIND, counterexample_bound
from monogamy.figures import build_figure, figure_to_csv, figure_to_json
from monogamy.report import report_to_csv, report_to_json, write_report
from states.catalog import BUILTIN_RECIPES, kim_sanders_state, ou_state, resolve_builtin
from states.random_states import haar_random_pure
from utils.logging_utils import get_logger, log_system_event
from utils.tensor_ops import partial_trace, reduce_to

from .run_config import RunConfig

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INPUT_ERROR = 2
EXIT_VALIDATION_ERROR = 3
EXIT_VIOLATION = 4

# Separability is decided by the PPT test alone in these dimensions.
PPT_EXACT_DIMS = {(2, 2), (2, 3), (3, 2)}

EQUALITY_TOLERANCE = 1e-12


def resolve_state(source: str) -> AnyState:
    """
    A builtin state by name, or a state read from a JSON file.

    Raises:
        StateInputError: If the name is unknown and no such file exists
    """
    if source in BUILTIN_RECIPES:
        return resolve_builtin(source)
    path = Path(source)
    if path.suffix == '.json' or path.exists():
        return load_state(path)
    raise StateInputError(f"{source!r} is neither a builtin state ({', '.join(BUILTIN_RECIPES)}) nor a file")


def emit(text: str, out: Optional[Path]) -> None:
    """Write text to `out`, or print it when no path is given."""
    if out is None:
        sys.stdout.write(text if text.endswith('\n') else text + '\n')
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    logger.info(f"Wrote {out}")


def _measure_entry(value) -> Dict[str, object]:
    entry = value.to_dict(encode_json=True)
    entry['lower'] = value.lower
    entry['upper'] = value.upper
    return entry


def cmd_measure(cfg: RunConfig, config: Config) -> int:
    """Concurrence, negativity and CREN of one state across one partition."""
    state = resolve_state(cfg.state)
    if cfg.partition:
        partition = Partition.parse(cfg.partition)
    else:
        partition = Partition.split(state.n_subsystems, cfg.first_subsystem)
    reduced, local = reduce_to(state, partition)
    roof = cfg.roof_config(config.convex_roof)

    values = {
        'concurrence': mixed_concurrence(reduced, local, roof),
        'negativity': negativity(reduced, local),
        'cren': cren(reduced, local, roof),
    }
    side_dims = (reduced.dims.dim_of(local.side_a), reduced.dims.dim_of(local.side_b))
    separable = is_ppt(reduced, local) if side_dims in PPT_EXACT_DIMS else None

    if cfg.format == 'csv':
        lines = ['measure,value,method,lower,upper']
        for name, value in values.items():
            lines.append(','.join([name, format(value.value, cfg.float_format), value.method.value,
                                   format(value.lower, cfg.float_format), format(value.upper, cfg.float_format)]))
        emit('\n'.join(lines) + '\n', cfg.out)
    else:
        result = {
            'state': cfg.state,
            'dims': list(state.dims.dims),
            'partition': str(partition),
            'measures': {name: _measure_entry(value) for name, value in values.items()},
            'separable': separable,
        }
        emit(json.dumps(result, indent=2), cfg.out)
    return EXIT_OK


def _print_violations(report: AuditReport) -> None:
    for row in report.violations():
        print(f"VIOLATED {report.label} nu={row.nu:g} {row.bound_id}: lhs={row.lhs!r} "
              f"rhs_low={row.rhs_low!r} worst_margin={row.worst_margin!r}", file=sys.stderr)


def cmd_audit(cfg: RunConfig, config: Config) -> int:
    """Audit one state over the nu grid; exit 4 if any bound fails with certainty."""
    state = resolve_state(cfg.state)
    report = audit(
        state,
        first_subsystem=cfg.first_subsystem,
        measure_kind=cfg.measure,
        nu_grid=cfg.nu_grid(),
        tolerance=cfg.tolerance,
        b1=cfg.b1,
        label=cfg.state,
        roof_config=cfg.roof_config(config.convex_roof),
        absolute_tolerance=cfg.absolute_tolerance,
        grid_points=cfg.grid_points,
        allow_mixed=cfg.allow_mixed,
    )
    if cfg.out is not None:
        write_report(report, cfg.out, cfg.format)
    else:
        emit(report_to_csv(report, cfg.float_format) if cfg.format == 'csv' else report_to_json(report), None)

    if report.violations():
        _print_violations(report)
        return EXIT_VIOLATION
    uncertain = {k: v for k, v in report.verdict_counts().items() if k != Verdict.HOLDS.value and v}
    if uncertain:
        logger.warning(f"{cfg.state}: verdicts short of certain: {uncertain}")
    return EXIT_OK


def cmd_figure(cfg: RunConfig, config: Config) -> int:
    """Curve data of fig1 or fig2 over the nu grid; exit 4 if a plotted bound exceeds the LHS."""
    data = build_figure(cfg.figure, cfg.quoted_values, cfg.nu_grid())
    text = figure_to_csv(data, cfg.float_format) if cfg.format == 'csv' else figure_to_json(data)
    emit(text, cfg.out)
    for item in data.mismatches:
        print(f"DISCREPANCY {item.quantity}: state {item.state_value!r}, quoted {item.quoted_value!r}, "
              f"closed form {item.closed_form_value!r}", file=sys.stderr)
    if not data.ordering_holds:
        logger.warning(f"{data.figure} ({data.source}): lemma-form bound is not strictly tightest on every row")
    violations = data.violations()
    for row, column in violations:
        print(f"VIOLATED {data.figure} nu={row.nu:g} {column}: lhs={row.lhs!r} "
              f"rhs={getattr(row, column)!r}", file=sys.stderr)
    return EXIT_VIOLATION if violations else EXIT_OK


@dataclass(frozen=True)
class SampleTask:
    """Everything a worker needs to audit one random draw."""
    index: int
    dims: Tuple[int, ...]
    seed: int
    measure: MeasureKind
    nu_grid: Tuple[float, ...]
    tolerance: float
    absolute_tolerance: float
    grid_points: int
    roof: RoofConfig


def audit_sample(task: SampleTask) -> Tuple[int, AuditReport]:
    psi = haar_random_pure(task.dims, task.seed, task.index)
    report = audit(psi, measure_kind=task.measure, nu_grid=task.nu_grid, tolerance=task.tolerance,
                   label=f"sample-{task.index:06d}", roof_config=task.roof,
                   absolute_tolerance=task.absolute_tolerance, grid_points=task.grid_points)
    return task.index, report


def summarize_campaign(reports: Sequence[AuditReport], cfg: RunConfig) -> Dict[str, object]:
    """Deterministic summary: verdict totals and the smallest margins per bound."""
    order = [bound_id.value for bound_id in BOUNDS_BY_KIND[cfg.measure]]
    min_margin: Dict[str, float] = {}
    min_worst: Dict[str, float] = {}
    counts = {verdict.value: 0 for verdict in Verdict}
    for report in reports:
        for row in report.rows():
            counts[row.verdict] += 1
            min_margin[row.bound_id] = min(min_margin.get(row.bound_id, math.inf), row.margin)
            min_worst[row.bound_id] = min(min_worst.get(row.bound_id, math.inf), row.worst_margin)
    return {
        'dims': list(cfg.dims),
        'measure': cfg.measure.value,
        'seed': cfg.seed,
        'samples': len(reports),
        'nu_grid': list(cfg.nu_grid()),
        'verdict_counts': counts,
        'min_margin': {b: min_margin[b] for b in order if b in min_margin},
        'min_worst_margin': {b: min_worst[b] for b in order if b in min_worst},
        'violating_samples': sorted(r.label for r in reports if r.violations()),
    }


def cmd_random_audit(cfg: RunConfig, config: Config) -> int:
    """Audit Haar-random pure states; exit 4 and dump the offenders on any violation."""
    roof = cfg.roof_config(config.convex_roof)
    tasks = [SampleTask(i, tuple(cfg.dims), cfg.seed, cfg.measure, cfg.nu_grid(), cfg.tolerance,
                        cfg.absolute_tolerance, cfg.grid_points, roof)
             for i in range(cfg.samples)]
    log_system_event("RANDOM_AUDIT", "campaign started",
                     {'samples': cfg.samples, 'dims': cfg.dims, 'workers': cfg.workers}, logger=logger)

    results: List[Tuple[int, AuditReport]] = []
    progress = tqdm(total=len(tasks), desc="Auditing", unit="state", disable=None, file=sys.stderr)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers, initializer=set_config, initargs=(config,)) as pool:
            for item in pool.map(audit_sample, tasks, chunksize=max(1, len(tasks) // (cfg.workers * 8))):
                results.append(item)
                progress.update(1)
    else:
        for task in tasks:
            results.append(audit_sample(task))
            progress.update(1)
    progress.close()

    results.sort(key=lambda item: item[0])
    reports = [report for _, report in results]
    summary = summarize_campaign(reports, cfg)
    emit(json.dumps(summary, indent=2), None)
    if cfg.out is not None:
        write_report(reports, cfg.out, cfg.format)

    failing = [(index, report) for index, report in results if report.violations()]
    if not failing:
        return EXIT_OK
    dump = []
    for index, report in failing:
        _print_violations(report)
        dump.append({
            'label': report.label,
            'index': index,
            'state': haar_random_pure(cfg.dims, cfg.seed, index).to_dict(),
            'violations': [row.to_dict() for row in report.violations()],
        })
    dump_path = Path(config.output.directory) / f"random_audit_failures_seed{cfg.seed}.json"
    emit(json.dumps(dump, indent=2), dump_path)
    print(f"offending states written to {dump_path}", file=sys.stderr)
    return EXIT_VIOLATION


@dataclass(frozen=True)
class CounterexampleCase:
    """Quoted CREN ingredients of a CKW counterexample."""
    name: str
    total_sq: float
    first_sq: float
    second_sq: float
    epsilon: float


COUNTEREXAMPLES = (
    CounterexampleCase('ou', 4.0, 1.0, 1.0, 2.0),
    CounterexampleCase('kim-sanders', 4.0, 8 / 9, 8 / 9, 20 / 9),
)


def _counterexample_state(name: str) -> PureState:
    return ou_state() if name == 'ou' else kim_sanders_state()


def check_counterexample(case: CounterexampleCase, nu_grid: Sequence[float],
                         roof: RoofConfig) -> Dict[str, object]:
    """
    Lemma-form CREN bound of one counterexample next to the values computed from its state.

    The CKW comparison uses the quoted pairwise values as concurrences: every
    pure state in the support of these two-party reductions has Schmidt rank
    two, where concurrence and negativity coincide.
    """
    psi = _counterexample_state(case.name)
    split = Partition.split(psi.n_subsystems, 0)
    rows = []
    holds = True
    for nu in nu_grid:
        lhs = case.total_sq ** (nu / 2.0)
        rhs = counterexample_bound(case.first_sq, case.second_sq, case.epsilon, nu)
        equal = abs(lhs - rhs) <= EQUALITY_TOLERANCE * max(1.0, abs(lhs))
        holds = holds and lhs >= rhs - EQUALITY_TOLERANCE * max(1.0, abs(lhs))
        rows.append({'nu': nu, 'lhs': lhs, 'rhs': rhs, 'equal': equal})

    pairwise = {}
    for other in (1, 2):
        reduced = partial_trace(psi, [0, other])
        value = cren(reduced, Partition((0,), (1,)), roof)
        pairwise[str(other)] = {'value': value.value, 'lower': value.lower, 'upper': value.upper,
                                'converged': value.converged}

    ckw = ckw_comparison(psi, pairwise_values=[math.sqrt(case.first_sq), math.sqrt(case.second_sq)])
    return {
        'state': case.name,
        'dims': list(psi.dims.dims),
        'quoted': {'total_sq': case.total_sq, 'pairwise_sq': [case.first_sq, case.second_sq],
                   'epsilon': case.epsilon},
        'computed': {'total_trace_norm': negativity(psi, split).value,
                     'pairwise_cren': pairwise},
        'rows': rows,
        'holds': holds,
        'ckw': ckw,
    }


def cmd_counterexamples(cfg: RunConfig, config: Config) -> int:
    """Check the lemma-form CREN bound on the two CKW counterexamples; exit 4 if it fails on either."""
    roof = cfg.roof_config(config.convex_roof)
    results = [check_counterexample(case, cfg.nu_grid(), roof) for case in COUNTEREXAMPLES]
    emit(json.dumps(results, indent=2), cfg.out)
    failing = [result for result in results if not result['holds']]
    for result in failing:
        for row in result['rows']:
            if row['lhs'] < row['rhs'] - EQUALITY_TOLERANCE * max(1.0, abs(row['lhs'])):
                print(f"VIOLATED {result['state']} nu={row['nu']:g} lemma3_N: lhs={row['lhs']!r} "
                      f"rhs={row['rhs']!r}", file=sys.stderr)
    return EXIT_VIOLATION if failing else EXIT_OK


def cmd_croof(cfg: RunConfig, config: Config) -> int:
    """Convex-roof bracket of a reduced state."""
    state = resolve_state(cfg.state)
    keep = list(state.dims.check_indices(cfg.keep))
    reduced = partial_trace(state, keep)
    if cfg.partition:
        partition = Partition.parse(cfg.partition)
    else:
        partition = Partition.split(reduced.n_subsystems, 0)
    objective = RoofObjective(cfg.objective)
    value = roof_upper_bound(reduced, partition, objective, cfg.roof_config(config.convex_roof))
    result = {
        'state': cfg.state,
        'keep': keep,
        'partition': str(partition),
        'objective': objective.value,
        'value': value.value,
        'lower': value.lower,
        'upper': value.upper,
        'negativity': negativity_lower_bound(reduced, partition),
        'converged': value.converged,
    }
    emit(json.dumps(result, indent=2), cfg.out)
    return EXIT_OK


COMMAND_HANDLERS = {
    'measure': cmd_measure,
    'audit': cmd_audit,
    'figure': cmd_figure,
    'random-audit': cmd_random_audit,
    'counterexamples': cmd_counterexamples,
    'croof': cmd_croof,
}


def run_command(cfg: RunConfig, config: Config) -> int:
    return COMMAND_HANDLERS[cfg.command](cfg, config)
