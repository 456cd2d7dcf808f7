"""
CLI Commands
Command definitions for ring listing, solving, verification, braids and gate experiments
"""

import functools
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click

import config
from core.errors import AnyonLabError
from core.solve_pipeline import PHASE_UNITS, SolvePipeline
from modules import catalog
from modules.braidrep import export_rep
from modules.gatelab import GateTarget
from utils.file_io import save_json
from utils.validators import RunConfig, parse_rational

logger = logging.getLogger(__name__)


def _emit(result: dict, as_json: bool, text: Optional[str] = None) -> None:
    if as_json or text is None:
        click.echo(json.dumps(result, indent=2, default=str))
    else:
        click.echo(text)


def handle_errors(func):
    """Map failures to exit codes: 1 domain/data, 2 unsolvable, 3 I/O"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        as_json = kwargs.get("as_json", False)
        try:
            return func(*args, **kwargs)
        except AnyonLabError as e:
            code, message = e.exit_code, str(e)
            logger.error(f"{type(e).__name__}: {e}")
        except OSError as e:
            code, message = 3, str(e)
            logger.error(f"I/O error: {e}")
        if as_json:
            click.echo(json.dumps({"success": False, "error": message}))
        else:
            click.echo(f"Error: {message}", err=True)
        sys.exit(code)

    return wrapper


def _default_anyon(ring_ref: str, anyon: Optional[str]) -> str:
    if anyon:
        return anyon
    ring = catalog.resolve_ring(ring_ref)
    return next(label.name for label in ring.labels if label.index != ring.vacuum)


def _parse_order(text: Optional[str]):
    if not text:
        return None
    return [int(x) for x in text.split(",")]


ring_option = click.option('--ring', required=True, help='Catalog ring name or path to a ring JSON file')
workers_option = click.option('--workers', default=None, type=int,
                              help='Worker processes (default: all cores, or WORKERS from .env)')
json_option = click.option('--json', 'as_json', is_flag=True, help='Print the result as JSON')


def braid_options(func):
    func = click.option('--strands', default=3, type=int, show_default=True, help='Number of strands m')(func)
    func = click.option('--root', default=None, help='Total charge b (default: the anyon)')(func)
    func = click.option('--anyon', default=None, help='Strand label a (default: first non-vacuum label)')(func)
    return func


@click.command('list-rings')
@json_option
@handle_errors
def list_rings(as_json: bool):
    """List the catalog rings with their labels and unknown counts."""
    table = SolvePipeline().list_rings()
    if as_json:
        click.echo(json.dumps(table.to_dict(orient="records"), indent=2))
    else:
        click.echo(table.to_string(index=False))


@click.command('solve')
@ring_option
@workers_option
@click.option('--max-component-size', default=config.MAX_COMPONENT_SIZE, type=int, show_default=True,
              help='Largest equation-graph component solved with Groebner bases in step 1')
@click.option('--enumerate-signs', is_flag=True, help='Try other root signs until verification passes')
@click.option('--check', is_flag=True, help='Verify the result; re-verify an existing output without solving')
@click.option('--output', type=click.Path(path_type=Path), default=None, help='F-symbol output file')
@click.option('--dump-pentagons', type=click.Path(path_type=Path), default=None,
              help='Also write the generated pentagon system to this file')
@json_option
@handle_errors
def solve_cmd(ring, workers, max_component_size, enumerate_signs, check, output, dump_pentagons, as_json):
    """Solve the pentagon and hexagon equations of a ring."""
    cfg = RunConfig("solve", ring=ring, workers=workers, max_component_size=max_component_size,
                    enumerate_signs=enumerate_signs, output=output).validate()
    pipeline = SolvePipeline()
    if dump_pentagons:
        pipeline.dump_pentagons(cfg, dump_pentagons)
    result = pipeline.solve(cfg, check=check)
    if result.get("solved"):
        s = result["summary"]
        text = (f"Solved {s['ring']}: {s['variables']} F-symbols, {s['step1_solved']} fixed in step 1, "
                f"{len(s['rounds'])} elimination rounds, {s['radicals']} radicals\nWrote {result['output']}")
    else:
        text = f"{result['output']}: verification {'passed' if result['success'] else 'FAILED'}"
    _emit(result, as_json, text)
    if not result["success"]:
        sys.exit(1)


@click.command('verify')
@ring_option
@click.option('--input', 'input_path', type=click.Path(path_type=Path), default=None,
              help='F-symbol file (default: the cached solution)')
@click.option('--numeric', is_flag=True, help='Check embedded residuals instead of exact ones')
@click.option('--precision-bits', default=config.PRECISION_BITS, type=int, show_default=True)
@json_option
@handle_errors
def verify_cmd(ring, input_path, numeric, precision_bits, as_json):
    """Check every axiom on stored F-symbols."""
    result = SolvePipeline().verify(ring, input_path, numeric, precision_bits)
    checks = result["verification"]["checks"]
    lines = [f"{name}: {c['checked']} checked, {len(c['failures'])} failed" for name, c in checks.items()]
    lines.append("PASSED" if result["success"] else "FAILED")
    _emit(result, as_json, "\n".join(lines))
    if not result["success"]:
        sys.exit(1)


@click.command('braid')
@ring_option
@braid_options
@click.option('--order', default=None, help='Comma-separated reordering of the basis, e.g. 0,2,1')
@click.option('--precision-bits', default=53, type=int, show_default=True)
@click.option('--output', type=click.Path(path_type=Path), default=None, help='Write the representation as JSON')
@json_option
@handle_errors
def braid_cmd(ring, anyon, root, strands, order, precision_bits, output, as_json):
    """Print the computational basis and braid generator matrices."""
    anyon = _default_anyon(ring, anyon)
    cfg = RunConfig("braid", ring=ring, anyon=anyon, root=root or anyon, strands=strands,
                    precision_bits=precision_bits, output=output).validate()
    pipeline = SolvePipeline()
    rep = pipeline.braid(cfg, _parse_order(order))
    result = pipeline.braid_report(rep, precision_bits)
    if output:
        save_json(result, output)
    _emit(result, as_json, export_rep(rep, "text", precision_bits))


@click.group('gate')
def gate():
    """Group orders and weave searches on braid images."""


@gate.command('order')
@ring_option
@braid_options
@click.option('--phase', default=None, help='Divide every generator by a root of unity, e.g. 1/12')
@click.option('--phase-units', type=click.Choice(PHASE_UNITS), default='half-turns', show_default=True,
              help='Whether --phase counts half turns (exp(pi i phase)) or full turns')
@click.option('--cap', default=config.CLOSURE_CAP, type=int, show_default=True, help='Largest group enumerated')
@json_option
@handle_errors
def gate_order(ring, anyon, root, strands, phase, phase_units, cap, as_json):
    """Order of the finite group generated by the braid generators."""
    anyon = _default_anyon(ring, anyon)
    cfg = RunConfig("gate order", ring=ring, anyon=anyon, root=root or anyon, strands=strands).validate()
    result = SolvePipeline().gate_order(cfg, parse_rational(phase) if phase else None, cap, phase_units)
    _emit(result, as_json, f"order: {result['order']}")


@gate.command('weave')
@ring_option
@braid_options
@click.option('--target', required=True, help='Target JSON file or a named gate (iX, X, Z, H)')
@click.option('--max-len', default=config.WEAVE_MAX_LEN, type=int, show_default=True)
@click.option('--tol', default=config.WEAVE_TOLERANCE, type=float, show_default=True)
@workers_option
@click.option('--output', type=click.Path(path_type=Path), default=None, help='Write the result as JSON')
@json_option
@handle_errors
def gate_weave(ring, anyon, root, strands, target, max_len, tol, workers, output, as_json):
    """Brute-force search for a weave approximating a target gate."""
    anyon = _default_anyon(ring, anyon)
    cfg = RunConfig("gate weave", ring=ring, anyon=anyon, root=root or anyon, strands=strands,
                    target=target, max_len=max_len, tol=tol, workers=workers, output=output).validate()
    result = SolvePipeline().gate_weave(cfg, GateTarget.from_file(target))
    if output:
        save_json(result, output)
    if result["found"]:
        text = f"word: {result['word']}\npattern: {result['pattern']}\ndistance: {result['distance']:.3e}"
    else:
        text = f"no weave up to length {max_len} within {tol}"
    _emit(result, as_json, text)


commands = [list_rings, solve_cmd, verify_cmd, braid_cmd, gate]
