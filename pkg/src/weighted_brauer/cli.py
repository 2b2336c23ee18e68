"""
Command-line front end.

Every subcommand builds a Report, prints it as tables (or JSON with --json)
and returns it, so `run` can hand both the report and the exit code to tests.
Exit codes: 0 ok, 1 invalid input or usage error, 2 internal failure.
"""
import logging
import sys
import traceback
from typing import Optional

import click

from weighted_brauer.cech import build_double_complex, dilation_action, e_pages
from weighted_brauer.divisors import class_group, picard_index, stack_comparison
from weighted_brauer.errors import InvalidInputError
from weighted_brauer.fan import build_fan, is_smooth, singular_cones
from weighted_brauer.intlin import localize_at_prime
from weighted_brauer.reports import Report
from weighted_brauer.sheafcoh import h_dim, monomial_basis
from weighted_brauer.sweep import sweep as run_sweep
from weighted_brauer.utils.common_functions import require_prime
from weighted_brauer.utils.config import load_settings
from weighted_brauer.weights import WeightVector, gcd_scale, is_isomorphic, normalize, p_reduce, twist_transport

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
ISO_SEPARATOR = "vs"


def output_options(func):
    func = click.option('--out', 'out', type=click.Path(dir_okay=False), default=None,
                        help='Also write the JSON report to this file')(func)
    func = click.option('--json', 'as_json', is_flag=True, help='Print JSON instead of tables')(func)
    return func


def weights_argument(func):
    return click.argument('weights', nargs=-1, type=int, required=True)(func)


def _emit(report: Report, as_json: bool, out: Optional[str], extra: Optional[str] = None) -> Report:
    if as_json:
        click.echo(report.to_json(), nl=False)
    else:
        click.echo(report.render(), nl=False)
        if extra:
            click.echo(extra)
    if out:
        report.write(out)
    return report


def _pages_of(w: WeightVector):
    return e_pages(build_double_complex(build_fan(w)))


@click.group()
@click.option('--verbose', is_flag=True, help='Log at DEBUG level')
@click.option('--log-level', default=None, type=click.Choice(LOG_LEVELS, case_sensitive=False),
              help='Explicit log level (default from settings)')
@click.option('--config', 'config_path', default=None, type=click.Path(dir_okay=False),
              help='YAML settings file')
@click.pass_context
def cli(ctx, verbose, log_level, config_path):
    """Exact computations on weighted projective spaces and stacks."""
    settings = load_settings(config_path)
    level = "DEBUG" if verbose else (log_level or settings.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )
    ctx.obj = settings


@cli.command('normalize')
@weights_argument
@output_options
def normalize_weights(weights, as_json, out):
    """Reduce weights to their well-formed normal form."""
    result = normalize(WeightVector(weights))
    return _emit(Report("normalize", {"weights": list(weights)}, result.to_dict()), as_json, out)


@cli.command()
@click.argument('arguments', nargs=-1, required=True)
@output_options
def iso(arguments, as_json, out):
    """Decide whether two weighted projective spaces are isomorphic: W... vs W..."""
    if list(arguments).count(ISO_SEPARATOR) != 1:
        raise InvalidInputError("Separate the two weight lists with a single '--' or 'vs'")
    split = arguments.index(ISO_SEPARATOR)
    try:
        left = [int(a) for a in arguments[:split]]
        right = [int(a) for a in arguments[split + 1:]]
    except ValueError as e:
        raise InvalidInputError(f"Weights must be integers: {e}") from e
    first, second = WeightVector(tuple(left)), WeightVector(tuple(right))

    payload = {
        "isomorphic": is_isomorphic(first, second),
        "normal_forms": [list(normalize(w).normal_form.rho) for w in (first, second)],
    }
    inputs = {"first": list(first.rho), "second": list(second.rho)}
    return _emit(Report("iso", inputs, payload), as_json, out)


@cli.command()
@weights_argument
@output_options
def fan(weights, as_json, out):
    """Rays, completion and cone multiplicities."""
    f = build_fan(WeightVector(weights))
    payload = f.to_dict()
    payload["smooth"] = is_smooth(f)
    payload["singular_cones"] = [list(cone) for cone in singular_cones(f)]
    return _emit(Report("fan", {"weights": list(weights)}, payload), as_json, out)


@cli.command()
@weights_argument
@click.option('--pages', 'with_pages', is_flag=True, help='Include every E1 and E2 entry')
@output_options
def brauer(weights, with_pages, as_json, out):
    """E2^{0,1} of the Čech spectral sequence."""
    _, normalized = gcd_scale(WeightVector(weights))
    pages = _pages_of(normalized)
    payload = {"E2_01": pages.group(2, 0, 1).to_dict()}
    inputs = {"weights": list(weights)}
    if with_pages:
        payload["pages"] = pages.to_dict()
        inputs["pages"] = True
    return _emit(Report("brauer", inputs, payload), as_json, out)


@cli.command('class-groups')
@weights_argument
@output_options
def class_groups(weights, as_json, out):
    """Class group, Picard index and the stack pullback multiplier."""
    w = WeightVector(weights)
    f = build_fan(w)
    payload = {
        "class_group": class_group(f).to_dict(),
        "picard_index": picard_index(f).index_in_class_group,
        "stack_pullback_multiplier": stack_comparison(w).pullback_multiplier,
    }
    return _emit(Report("class-groups", {"weights": list(weights)}, payload), as_json, out)


@cli.command()
@weights_argument
@click.option('--i', 'degree', type=int, required=True, help='Cohomological degree')
@click.option('--ell', type=int, required=True, help='Twist')
@click.option('--basis', 'with_basis', is_flag=True, help='List the monomial basis')
@click.option('--stack', is_flag=True, help='Compute on the weighted projective stack')
@output_options
@click.pass_obj
def cohomology(settings, weights, degree, ell, with_basis, stack, as_json, out):
    """Rank (and basis) of H^i(O(ell))."""
    w = WeightVector(weights)
    dim = h_dim(w, degree, ell, stack=stack, twist_limit=settings.twist_limit)
    payload = {"i": degree, "ell": ell, "dim": dim, "stack": stack}
    inputs = {"weights": list(weights), "i": degree, "ell": ell, "basis": with_basis, "stack": stack}
    if with_basis:
        basis = monomial_basis(w, degree, ell, stack=stack, limit=settings.basis_limit,
                               twist_limit=settings.twist_limit)
        payload["basis"] = [list(e) for e in basis]
    return _emit(Report("cohomology", inputs, payload), as_json, out)


@cli.command()
@weights_argument
@click.option('--ell', type=int, required=True, help='Twist to transport')
@output_options
def twist(weights, ell, as_json, out):
    """Transport O(ell) through one reduction step."""
    result = twist_transport(WeightVector(weights), ell)
    return _emit(Report("twist", {"weights": list(weights), "ell": ell}, result.to_dict()), as_json, out)


@cli.command('sweep')
@click.option('--dim', type=int, required=True, help='n; vectors have n+1 entries')
@click.option('--max-weight', type=int, required=True, help='Largest weight')
@click.option('--jobs', type=int, default=None, help='Worker processes (default from settings)')
@output_options
@click.pass_obj
def sweep_cmd(settings, dim, max_weight, jobs, as_json, out):
    """Check every weight vector of a corpus."""
    result = run_sweep(dim, max_weight, jobs=jobs or settings.jobs, chunksize=settings.sweep_chunksize)
    report = Report("sweep", {"dim": dim, "max_weight": max_weight}, result.payload())
    return _emit(report, as_json, out, extra=result.summary_table())


@cli.command()
@weights_argument
@click.option('--d', 'd', type=int, required=True, help='Dilation factor')
@output_options
def dilation(weights, d, as_json, out):
    """Action of multiplication by d on the double complex and its pages."""
    w = WeightVector(weights)
    dc = build_double_complex(build_fan(w))
    action = dilation_action(dc, d)
    payload = {"weights": list(w.rho), **action.to_dict()}
    return _emit(Report("dilation", {"weights": list(weights), "d": d}, payload), as_json, out)


@cli.command('p-reduce')
@weights_argument
@click.option('--p', 'p', type=int, required=True, help='Prime')
@output_options
def p_reduce_cmd(weights, p, as_json, out):
    """Compare p-primary parts of E1^{0,1} and E2^{0,1} before and after p-reduction."""
    require_prime(p)
    _, w = gcd_scale(WeightVector(weights))
    reduced = p_reduce(w, p)
    original_pages, reduced_pages = _pages_of(w), _pages_of(reduced)

    def local(pages, page):
        return localize_at_prime(pages.group(page, 0, 1), p)

    payload = {
        "p": p,
        "weights": list(w.rho),
        "reduced": list(reduced.rho),
        "E1_01": {"original": local(original_pages, 1).to_dict(), "reduced": local(reduced_pages, 1).to_dict()},
        "E2_01": {"original": local(original_pages, 2).to_dict(), "reduced": local(reduced_pages, 2).to_dict()},
        "E2_agree": local(original_pages, 2) == local(reduced_pages, 2),
    }
    return _emit(Report("p-reduce", {"weights": list(weights), "p": p}, payload), as_json, out)


def _split_iso_arguments(args: list[str]) -> list[str]:
    """A bare '--' after `iso` separates the two weight lists."""
    if "iso" not in args:
        return args
    start = args.index("iso")
    return args[:start + 1] + [ISO_SEPARATOR if a == "--" else a for a in args[start + 1:]]


def _failure(command: str, args: list[str], status: str, message: str, as_json: bool) -> Report:
    report = Report(command, {"argv": args}, {"error": message}, status=status)
    if as_json:
        click.echo(report.to_json(), nl=False)
    else:
        click.echo(f"Error: {message}", err=True)
    return report


def run(argv: Optional[list[str]] = None) -> tuple[Optional[Report], int]:
    """
    Parse and execute one command line.

    Returns:
        (report, exit code); the report is None when only help was shown
    """
    args = _split_iso_arguments(list(sys.argv[1:] if argv is None else argv))
    as_json = "--json" in args
    command = next((a for a in args if a in cli.commands), "weighted-brauer")

    try:
        result = cli.main(args=args, prog_name="weighted-brauer", standalone_mode=False)
    except (click.ClickException, click.exceptions.Abort) as e:
        message = e.format_message() if isinstance(e, click.ClickException) else "Aborted"
        return _failure(command, args, "invalid-input", message, as_json), 1
    except InvalidInputError as e:
        logger.error(f"Invalid input: {e}")
        return _failure(command, args, "invalid-input", str(e), as_json), 1
    except Exception as e:
        logger.error(f"Internal failure in {command}: {e}")
        logger.debug(f"Full traceback: {traceback.format_exc()}")
        return _failure(command, args, "internal-error", str(e), as_json), 2

    if isinstance(result, Report):
        return result, 0
    return None, int(result or 0)


def main():
    sys.exit(run()[1])


if __name__ == '__main__':
    main()
