#!/usr/bin/env python3
"""
joinmat - exact join and meet matrices on finite lattices
"""

import functools
import logging
from typing import List, Optional, Sequence, Tuple

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from src.divisor_tools import divisor_lattice, lcm_of_set
from src.errors import InputError, LatticeMatrixError
from src.exact_linalg_oracle import oracle_det, oracle_inverse
from src.formatter import ReportFormatter
from src.matrix_engine import (
    MatrixKind,
    MatrixSpec,
    Method,
    build_matrix,
    default_basis,
    det_closed_form,
    factorize_join,
    factorize_meet,
    inverse_closed_form,
    select_method,
)
from src.poset_core import (
    ElementId,
    FinitePoset,
    OrderedSubset,
    PosetFunction,
    closure_predicates,
    integer_chain,
    linear_function,
    load_poset,
)
from src.psi_engine import PsiMethod, applicable_methods, compute_psi
from src.utils import (
    load_config,
    parse_chain,
    parse_element_list,
    parse_function,
    parse_int_list,
    parse_linear_shift,
    parse_rational,
)
from src.verify import CampaignSettings, run_campaign
from src.worked_examples import EXAMPLES, consecutive_chain, run_example, run_smith

logger = logging.getLogger("joinmat")

# stdout carries only the report; diagnostics and logs go to stderr
console = Console(highlight=False, soft_wrap=True)
err_console = Console(stderr=True)


class _InputErrorExit:
    """Report click usage errors with the input-error exit code."""

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as e:
            e.exit_code = InputError.exit_code
            raise


class JoinmatCommand(_InputErrorExit, click.Command):
    pass


class JoinmatGroup(_InputErrorExit, click.Group):
    command_class = JoinmatCommand


def _method_choices(values: Sequence[str]) -> List[str]:
    return sorted(set(values) | {v.replace("_", "-") for v in values})


def _normalize(_ctx, _param, value):
    return value.replace("-", "_") if isinstance(value, str) else value


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, rich_tracebacks=True, show_path=False)],
        force=True,
    )


def _emit(text: str) -> None:
    console.print(text, markup=False, emoji=False)


def handle_errors(func):
    """Turn a LatticeMatrixError into a stderr diagnostic and its exit code."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except LatticeMatrixError as e:
            logger.debug("command failed", exc_info=True)
            err_console.print(f"[red]error:[/red] {escape(str(e))}")
            click.get_current_context().exit(e.exit_code)
    return wrapper


# Shared input options

def input_options(func):
    options = [
        click.option('--poset', 'poset_file', type=click.Path(), help='Poset file (elem/rel lines)'),
        click.option('--set', 'set_x', help='Elements of X, comma-separated (with --poset)'),
        click.option('--set-y', 'set_y', help='Elements of Y; defaults to X'),
        click.option('--chain', help='Strictly increasing integers, hosted in [min, max]'),
        click.option('--divisors', 'divisor_set', help='Positive integers, hosted in the divisors of their lcm'),
        click.option('--start', type=int, help='First element of a consecutive chain'),
        click.option('--n', 'length', type=int, help='Length of a consecutive chain'),
        click.option('--basis', help='Explicit basis D containing every x_i join y_j'),
        click.option('--f', 'f_spec', help='identity, constant:<r>, linear:t=<r> or a values file'),
        click.option('--f-linear', help='Shorthand for --f linear:<t>; f(k) = k + t'),
        click.option('--kind', type=click.Choice(['join', 'meet']), default='join', show_default=True,
                     help='Join matrix [X,Y]_f or meet matrix (X,Y)_f'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _lists(set_x: Optional[str], set_y: Optional[str], basis: Optional[str], parse) -> Tuple[list, list, list]:
    x = parse(set_x)
    y = parse(set_y) if set_y else x
    d = parse(basis) if basis else []
    return x, y, d


def resolve_host(poset_file, set_x, set_y, chain, divisor_set, start, length,
                 basis) -> Tuple[FinitePoset, List[ElementId], List[ElementId], List[ElementId]]:
    """Host poset and the element lists of X, Y and the optional basis."""
    sources = [poset_file is not None, chain is not None, divisor_set is not None,
               start is not None or length is not None]
    if sum(sources) != 1:
        raise InputError("give exactly one of --poset, --chain, --divisors or --start/--n")
    if poset_file is not None:
        if not set_x:
            raise InputError("--poset needs --set")
        host = load_poset(poset_file)
        return (host,) + _lists(set_x, set_y, basis, parse_element_list)
    if set_x is not None:
        raise InputError("--set goes with --poset; with --chain or --divisors list the elements there")
    if divisor_set is not None:
        x, y, d = _lists(divisor_set, set_y, basis, parse_int_list)
        return (divisor_lattice(lcm_of_set(x + y + d)), x, y, d)
    if chain is None:
        if start is None or length is None:
            raise InputError("a consecutive chain needs both --start and --n")
        chain = ",".join(str(k) for k in consecutive_chain(start, length))
    x, y, d = _lists(chain, set_y, basis, parse_chain)
    everything = x + y + d
    return (integer_chain(min(everything), max(everything)), x, y, d)


def resolve_function(host: FinitePoset, f_spec: Optional[str], f_linear: Optional[str]) -> PosetFunction:
    if f_spec and f_linear:
        raise InputError("use either --f or --f-linear")
    if f_linear:
        return linear_function(host, parse_linear_shift(f_linear))
    return parse_function(f_spec or 'identity', host)


def build_spec(kind, poset_file=None, set_x=None, set_y=None, chain=None, divisor_set=None,
               start=None, length=None, basis=None, f_spec=None, f_linear=None) -> MatrixSpec:
    host, x, y, d = resolve_host(poset_file, set_x, set_y, chain, divisor_set, start, length, basis)
    f = resolve_function(host, f_spec, f_linear)
    return MatrixSpec(MatrixKind(kind), OrderedSubset.of(host, x), OrderedSubset.of(host, y), f,
                      OrderedSubset.of(host, d) if d else None)


def _engine_settings(ctx: click.Context, cap: Optional[int]) -> Tuple[int, bool]:
    engine = ctx.obj['config']['engine']
    return (cap if cap is not None else int(engine['cauchy_binet_cap']),
            bool(engine['mobius_of_generated']))


# Commands

@click.group(cls=JoinmatGroup)
@click.option('--config', 'config_path', type=click.Path(), help='Configuration file path')
@click.option('--verbose', '-v', is_flag=True, help='Enable debug logging on stderr')
@click.version_option(version='0.1.0')
@click.pass_context
@handle_errors
def cli(ctx, config_path, verbose):
    """Exact join and meet matrices on finite lattices.

    Examples:
        python joinmat.py det --kind join --chain 1,2,3 --f-linear t=0
        python joinmat.py inv --kind meet --chain 1,2,3 --f-linear t=0 --check
        python joinmat.py example 2 --chain 4,5,6 --t 0
        python joinmat.py verify --trials 200 --seed 42
    """
    config = load_config(config_path)
    _configure_logging('DEBUG' if verbose else str(config['logging']['level']).upper())
    ctx.obj = {'config': config}


@cli.command()
@input_options
@click.option('--factors', is_flag=True, help='Also print the structure-theorem factors')
@click.pass_context
@handle_errors
def build(ctx, factors, kind, **inputs):
    """Print the matrix and the closure flags of X."""
    spec = build_spec(kind, **inputs)
    report = ReportFormatter().field('kind', spec.kind.value)
    report.subset('X', spec.x).subset('Y', spec.y).flags(closure_predicates(spec.x))
    report.matrix('matrix', build_matrix(spec))
    if factors:
        if spec.kind is MatrixKind.JOIN:
            fac = factorize_join(spec)
            report.subset('basis', fac.basis).matrix('E(X)', fac.e_x)
            report.matrix('Lambda', fac.lam).matrix('E(Y)', fac.e_y)
        else:
            fac = factorize_meet(spec)
            report.subset('basis', fac.basis).matrix('Delta_X', fac.delta_x).matrix('E(X)', fac.e_x)
            report.matrix('Lambda', fac.lam).matrix('E(Y)', fac.e_y).matrix('Delta_Y', fac.delta_y)
    _emit(report.render())


@cli.command()
@input_options
@click.option('--method', default='all', callback=_normalize,
              type=click.Choice(['all'] + _method_choices([m.value for m in PsiMethod])),
              help='Psi formula, or all applicable ones')
@click.pass_context
@handle_errors
def psi(ctx, method, kind, **inputs):
    """Print Psi_{D,f} on the basis D (default: join-closure of the joins)."""
    spec = build_spec(kind, **inputs)
    d = spec.d if spec.d is not None else default_basis(spec.x, spec.y)
    f = spec.f if spec.kind is MatrixKind.JOIN else spec.f.reciprocal()
    _, use_generated = _engine_settings(ctx, None)
    methods = applicable_methods(d) if method == 'all' else [PsiMethod(method)]
    vectors = [compute_psi(d, f, m, use_generated=use_generated) for m in methods]
    report = ReportFormatter().subset('basis', d).field('function', f.name)
    for vector in vectors:
        report.psi(vector)
    if len(vectors) > 1:
        report.field('verdict', 'AGREE' if all(v.same_values(vectors[0]) for v in vectors) else 'DISAGREE')
    _emit(report.render())
    if len(vectors) > 1 and not all(v.same_values(vectors[0]) for v in vectors):
        ctx.exit(1)


def matrix_command_options(func):
    func = click.option('--force', is_flag=True, help='Run Cauchy-Binet past the subset cap')(func)
    func = click.option('--cap', type=int, help='Cauchy-Binet subset cap (default from config)')(func)
    func = click.option('--check', is_flag=True, help='Compare against the oracle')(func)
    func = click.option('--method', default='auto', callback=_normalize,
                        type=click.Choice(_method_choices([m.value for m in Method])),
                        help='Closed form to use')(func)
    return input_options(func)


@cli.command()
@matrix_command_options
@click.pass_context
@handle_errors
def det(ctx, method, check, cap, force, kind, **inputs):
    """Determinant by a closed form."""
    spec = build_spec(kind, **inputs)
    cap, use_generated = _engine_settings(ctx, cap)
    chosen = select_method(spec, Method(method))
    value = det_closed_form(spec, chosen, cap=cap, force=force, use_generated=use_generated)
    matrix = build_matrix(spec)
    report = ReportFormatter().field('kind', spec.kind.value).field('method', chosen.value)
    report.matrix('matrix', matrix).field('det', value)
    agree = True
    if check:
        oracle = oracle_det(matrix)
        report.comparison(value, oracle)
        agree = value == oracle
    _emit(report.render())
    if not agree:
        ctx.exit(1)


@cli.command()
@matrix_command_options
@click.pass_context
@handle_errors
def inv(ctx, method, check, cap, force, kind, **inputs):
    """Inverse by a closed form."""
    spec = build_spec(kind, **inputs)
    cap, use_generated = _engine_settings(ctx, cap)
    chosen = select_method(spec, Method(method), for_inverse=True)
    verify_inverse = bool(ctx.obj['config']['engine']['verify_inverse'])
    value = inverse_closed_form(spec, chosen, cap=cap, force=force, use_generated=use_generated,
                                verify=verify_inverse)
    matrix = build_matrix(spec)
    report = ReportFormatter().field('kind', spec.kind.value).field('method', chosen.value)
    report.matrix('matrix', matrix).matrix('inverse', value)
    agree = True
    if check:
        oracle = oracle_inverse(matrix)
        report.comparison(value, oracle)
        agree = value == oracle
    _emit(report.render())
    if not agree:
        ctx.exit(1)


@cli.command()
@click.option('--trials', type=int, help='Number of random trials (default from config)')
@click.option('--seed', type=int, help='Random seed (default from config)')
@click.option('--max-elements', type=int, help='Largest random lattice')
@click.option('--cap', type=int, help='Cauchy-Binet subset cap')
@click.pass_context
@handle_errors
def verify(ctx, trials, seed, max_elements, cap):
    """Randomized campaign over every identity the engine relies on."""
    cap, use_generated = _engine_settings(ctx, cap)
    settings = CampaignSettings.from_config(
        ctx.obj['config']['verify'], trials=trials, seed=seed, max_elements=max_elements,
        cap=cap, use_generated=use_generated,
    )
    report = run_campaign(settings)
    _emit(report.render())
    if not report.ok:
        ctx.exit(1)


@cli.command()
@click.argument('name', type=click.Choice(sorted(EXAMPLES) + ['smith']))
@click.option('--chain', help='Strictly increasing integers x_1 < ... < x_n')
@click.option('--start', type=int, help='x_1 of a consecutive chain')
@click.option('--n', 'length', type=int, help='Chain length (or the n of smith)')
@click.option('--t', 't_value', default='0', show_default=True, help='Shift t in f(k) = k + t')
@click.option('--cap', type=int, help='Cauchy-Binet subset cap (smith)')
@click.option('--force', is_flag=True, help='Run Cauchy-Binet past the subset cap (smith)')
@click.pass_context
@handle_errors
def example(ctx, name, chain, start, length, t_value, cap, force):
    """Reproduce a worked example: closed formula, engine and oracle."""
    if name == 'smith':
        result = run_smith(length or 6, cap=_engine_settings(ctx, cap)[0], force=force)
    else:
        if chain is not None and (start is not None or length is not None):
            raise InputError("use either --chain or --start/--n")
        if chain is not None:
            members = parse_chain(chain)
        elif start is not None and length is not None:
            members = consecutive_chain(start, length)
        else:
            raise InputError("example needs --chain or --start and --n")
        result = run_example(name, members, parse_rational(t_value), cap=_engine_settings(ctx, cap)[0])

    report = ReportFormatter().field('example', result.name).field('description', result.description)
    report.field('method', result.method.value).matrix('matrix', result.matrix)
    for label, value in (('closed form', result.closed_form), ('engine', result.engine),
                         ('oracle', result.oracle)):
        if result.is_inverse:
            report.matrix(label, value)
        else:
            report.field(label, value)
    report.field('verdict', 'AGREE' if result.agree else 'DISAGREE')
    _emit(report.render())
    if not result.agree:
        ctx.exit(1)


def main():
    cli()  # pylint: disable=no-value-for-parameter


if __name__ == '__main__':
    main()
