"""
factperm - finite checks for permutative relative categories and Segal functors

Every command prints one report per check and exits 0 when all pass, 1 when any
fails, and 2 when a fixture cannot be read.
"""
import functools
import logging
import sys
from typing import Callable, List, Optional

import click
from pydantic import ValidationError

from . import config
from .errors import ExportError, FactpermError, FixtureError
from .export import export as render, reports_to_json
from .factop import fact_categories
from .fincat import twisted_arrow
from .loader import load_fixture
from .permcat import PermRelCategory
from .permconstr import fact_functor, perm_build
from .schemas import Report, RunConfig
from .sset import nerve_truncate
from . import suite

logger = logging.getLogger(__name__)

EXPORT_ENTITIES = ('category', 'tw', 'nerve', 'fact', 'perm')


def _configure_logging(verbose: bool):
    level = logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def _format_text(reports: List[Report]) -> str:
    lines = []
    for r in reports:
        bounds = ' '.join(f"{k}={v}" for k, v in r.bounds.items())
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  [{r.anchor}]" + (f"  ({bounds})" if bounds else ''))
        lines += [f"      {c}" for c in r.counterexamples]
    passed = sum(r.passed for r in reports)
    lines.append(f"{passed}/{len(reports)} checks passed")
    return '\n'.join(lines) + '\n'


def _write(run: RunConfig, text: str):
    if run.out:
        with open(run.out, 'w', encoding='utf-8') as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _emit(ctx: click.Context, reports: List[Report]):
    run: RunConfig = ctx.obj
    if run.fmt == 'dot':
        raise click.UsageError('reports render as text or json; dot is for `factperm export`')
    _write(run, reports_to_json(reports) if run.fmt == 'json' else _format_text(reports))
    ctx.exit(0 if all(r.passed for r in reports) else 1)


def guarded(command: Callable) -> Callable:
    """Fixture and parse errors exit 2 with their location; construction errors exit 1"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except (FixtureError, ValidationError, ExportError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)
        except FactpermError as exc:
            click.echo(f"failed: {exc}", err=True)
            ctx.exit(1)
    return wrapper


def _permutative(name: str, marking: Optional[str]) -> PermRelCategory:
    fixture = load_fixture(name, marking)
    if not isinstance(fixture, PermRelCategory):
        raise FixtureError(f"{name}: needs tensor_obj, tensor_mor, unit and braid tables")
    return fixture


@click.group()
@click.option('--max-n', type=int, default=config.MAX_N, show_default=True, help='Truncation bound for ⟨n⟩.')
@click.option('--format', 'fmt', type=click.Choice(config.OUTPUT_FORMATS), default='text', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Write the output here.')
@click.option('--verbose', is_flag=True, help='Log construction sizes and check outcomes.')
@click.pass_context
def cli(ctx: click.Context, max_n: int, fmt: str, out: Optional[str], verbose: bool):
    """Finite constructions on permutative relative categories."""
    _configure_logging(verbose)
    try:
        ctx.obj = RunConfig(max_n=max_n, fmt=fmt, out=out, verbose=verbose)
    except ValidationError as exc:
        click.echo(f"error: {exc.errors()[0]['msg']}", err=True)
        ctx.exit(2)


marking_option = click.option('--marking', default=None, help='Use a named weq marking of the fixture.')


@cli.command()
@click.argument('fixtures', nargs=-1)
@marking_option
@click.option('--checks', 'checks', multiple=True, type=click.Choice(config.SUITES),
              help='Run only these check groups; repeatable. All groups by default.')
@click.option('--truncate', 'N', type=int, default=config.PERM_N, show_default=True,
              help='Truncation for the perm, roundtrip and eta groups.')
@click.pass_context
@guarded
def check(ctx: click.Context, fixtures, marking: Optional[str], checks, N: int):
    """Every selected check group over the given fixtures; all bundled fixtures by default."""
    update = {'fixtures': list(fixtures), 'perm_n': N}
    if checks:
        update['checks'] = list(checks)
    run = RunConfig.model_validate({**ctx.obj.model_dump(), **update})
    _emit(ctx, suite.run_suite(run, marking))


@cli.command()
@click.argument('fixture')
@marking_option
@click.pass_context
@guarded
def fact(ctx: click.Context, fixture: str, marking: Optional[str]):
    """Fact_n(C) for n <= max-n: algebra laws, Φ/Ψ, lax squares and Segal witnesses."""
    _emit(ctx, suite.fact_reports(_permutative(fixture, marking), ctx.obj.max_n))


@cli.command()
@click.argument('fixture')
@click.option('--truncate', 'N', type=int, default=config.PERM_N, show_default=True)
@marking_option
@click.pass_context
@guarded
def perm(ctx: click.Context, fixture: str, N: int, marking: Optional[str]):
    """Perm_N(Fact(C)): F^Tw, the Grothendieck construction and its permutative laws."""
    _emit(ctx, suite.perm_reports(_permutative(fixture, marking), N))


@cli.command()
@click.argument('fixture')
@click.option('--n', 'N', type=int, default=config.PERM_N, show_default=True)
@marking_option
@click.pass_context
@guarded
def roundtrip(ctx: click.Context, fixture: str, N: int, marking: Optional[str]):
    """The counit Perm_N(Fact(C)) -> C."""
    _emit(ctx, suite.roundtrip_reports(_permutative(fixture, marking), N))


@cli.command('eta-check')
@click.argument('fixture')
@click.option('--n', 'N', type=int, default=config.PERM_N, show_default=True)
@marking_option
@click.pass_context
@guarded
def eta_check(ctx: click.Context, fixture: str, N: int, marking: Optional[str]):
    """η for F = Fact(C), Path(η) and the α/β checks."""
    _emit(ctx, suite.eta_reports(_permutative(fixture, marking), N))


@cli.command()
@click.argument('fixture')
@marking_option
@click.pass_context
@guarded
def segal(ctx: click.Context, fixture: str, marking: Optional[str]):
    """Functoriality and Segal witnesses of Fact(C)."""
    _emit(ctx, suite.segal_reports(_permutative(fixture, marking), min(ctx.obj.max_n, config.SEGAL_N)))


@cli.command('probe-initial')
@click.argument('fixture')
@click.pass_context
@guarded
def probe_initial(ctx: click.Context, fixture: str):
    """π₀ and H₁ of Tw(C) ×_C C/c for every object c."""
    _emit(ctx, suite.probe_reports(suite.base_of(load_fixture(fixture))))


@cli.command()
@click.pass_context
@guarded
def finstar(ctx: click.Context):
    """Factorization, ρ, wedge and ∇ ≅ Δ^op checks on Fin_* up to max-n."""
    _emit(ctx, suite.finstar_reports(ctx.obj.max_n))


@cli.command()
@click.argument('fixture')
@click.option('--dimension', type=int, default=2, show_default=True)
@click.pass_context
@guarded
def sset(ctx: click.Context, fixture: str, dimension: int):
    """Nerve, ε and the marking of the category of simplices."""
    _emit(ctx, suite.sset_reports(suite.base_of(load_fixture(fixture)), dimension))


@cli.command('export')
@click.argument('entity', type=click.Choice(EXPORT_ENTITIES))
@click.argument('fixture')
@click.option('--n', 'N', type=int, default=1, show_default=True, help='Arity for fact, truncation for perm.')
@marking_option
@click.pass_context
@guarded
def export_command(ctx: click.Context, entity: str, fixture: str, N: int, marking: Optional[str]):
    """Render a category, Tw(C), a nerve, Fact_n(C) or Perm_N(Fact(C))."""
    run: RunConfig = ctx.obj
    loaded = load_fixture(fixture, marking)
    if entity == 'category':
        target = loaded
    elif entity == 'tw':
        target = twisted_arrow(suite.base_of(loaded))
    elif entity == 'nerve':
        target = nerve_truncate(suite.base_of(loaded), 2)
    elif entity == 'fact':
        target = fact_categories(_permutative(fixture, marking), N)[N].rel
    else:
        target = perm_build(fact_functor(_permutative(fixture, marking), N, segal=False), N)
    _write(run, render(target, run.fmt))
