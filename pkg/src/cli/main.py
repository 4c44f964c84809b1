"""Typer CLI for ambient-forms."""

from __future__ import annotations

import json
import uuid
from pathlib import Path
from typing import TYPE_CHECKING, Annotated, Any

import structlog
import typer

if TYPE_CHECKING:
    from calculus.forms import Form
    from verify.result import ResidualReport

app = typer.Typer(name="ambient-forms", no_args_is_help=True)
logger = structlog.get_logger()

OPERATORS = ("d", "delta", "box", "star")


def _classify_error(exc: Exception) -> tuple[str, bool]:
    """Return a one-line diagnostic and whether the error is known.

    Returns:
        (message, known): known=True means the diagnostic is sufficient,
        no traceback needed.
    """
    from pydantic import ValidationError

    from calculus.errors import FormsError

    chain: BaseException | None = exc
    while chain is not None:
        if isinstance(chain, ValidationError):
            first = chain.errors()[0]
            location = ".".join(str(part) for part in first["loc"]) or "config"
            return f"invalid {location}: {first['msg']}", True
        if isinstance(chain, FormsError):
            return f"{type(chain).__name__}: {chain}", True
        if isinstance(chain, OSError):
            return f"I/O error: {chain}", True
        if isinstance(chain, json.JSONDecodeError):
            return f"invalid JSON: {chain}", True
        chain = getattr(chain, "__cause__", None)

    return str(exc), False


def _fail(exc: Exception, event: str) -> typer.Exit:
    message, known = _classify_error(exc)
    logger.error(event, error=message)
    if not known:
        logger.error(f"{event}.trace", exc_info=exc)
    typer.echo(message, err=True)
    return typer.Exit(code=1)


def _report_line(report: ResidualReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    return (
        f"{status} {report.identity:<28} {report.geometry:<20} "
        f"max={report.max_residual:.2e} tol={report.tolerance:.2e}"
    )


@app.command()
def run(
    geometry: Annotated[
        list[str] | None,
        typer.Option("--geometry", help="Geometry case (ds, ads, sphere); repeatable"),
    ] = None,
    n: Annotated[
        list[int] | None, typer.Option("--n", help="Hypersurface dimension; repeatable")
    ] = None,
    hubble: Annotated[float | None, typer.Option("--H", help="Inverse radius H > 0")] = None,
    degree: Annotated[
        list[int] | None, typer.Option("--degree", help="Form degree; repeatable")
    ] = None,
    homogeneity: Annotated[
        list[int] | None,
        typer.Option("--homogeneity", help="Homogeneity degree s; repeatable"),
    ] = None,
    points: Annotated[
        int | None, typer.Option("--points", help="Sample points per case")
    ] = None,
    seed: Annotated[int | None, typer.Option("--seed", help="Master seed")] = None,
    tol: Annotated[float | None, typer.Option("--tol", help="Relative tolerance")] = None,
    abs_floor: Annotated[
        float | None, typer.Option("--abs-floor", help="Absolute tolerance floor")
    ] = None,
    suite: Annotated[
        list[str] | None,
        typer.Option("--suite", help="theorems, props, examples, algebra or all; repeatable"),
    ] = None,
    report: Annotated[
        Path | None, typer.Option("--report", help="Write the JSON report here")
    ] = None,
    box: Annotated[
        float | None, typer.Option("--box", help="Half-width of the chart box")
    ] = None,
    config_file: Annotated[
        Path | None, typer.Option("--config", help="JSON file mirroring SuiteConfig")
    ] = None,
    json_logs: Annotated[bool, typer.Option("--json-logs", help="Output JSON log lines")] = False,
    log_level: Annotated[
        str | None, typer.Option("--log-level", help="debug, info, warning or error")
    ] = None,
    mutate: Annotated[list[str] | None, typer.Option("--mutate", hidden=True)] = None,
) -> None:
    """Run the verification suites and emit a JSON report."""
    from config.settings import load_config
    from utils.logger import configure_logging
    from verify.result import emit_report, render_report
    from verify.suite import run_suite

    overrides: dict[str, Any] = {
        "geometries": geometry,
        "n": n,
        "H": hubble,
        "degrees": degree,
        "homogeneities": homogeneity,
        "points": points,
        "seed": seed,
        "rel_tol": tol,
        "abs_floor": abs_floor,
        "suites": suite,
        "report": report,
        "box_half_width": box,
        "mutations": mutate,
        "log_level": log_level,
        "json_logs": json_logs or None,
    }
    try:
        config = load_config(overrides, config_file)
    except Exception as exc:
        message, _ = _classify_error(exc)
        typer.echo(f"Usage error: {message}", err=True)
        raise typer.Exit(code=2) from None

    configure_logging(json_output=config.json_logs, log_level=config.log_level)

    run_id = uuid.uuid4().hex[:12]
    suites = ",".join(s.value for s in config.selected_suites())
    structlog.contextvars.bind_contextvars(run_id=run_id, suites=suites)
    logger.info(
        "suite.starting",
        geometries=[g.value for g in config.geometries],
        n=config.n,
        points=config.points,
        seed=config.seed,
        mutations=config.mutations or None,
    )

    try:
        result = run_suite(config)
        if config.report is not None:
            emit_report(result, config.report)
        else:
            typer.echo(render_report(result), nl=False)
    except Exception as exc:
        structlog.contextvars.unbind_contextvars("run_id", "suites")
        raise _fail(exc, "suite.failed") from None

    summary = result.summary
    logger.info(
        "suite.completed",
        passed=summary.passed,
        failed=summary.failed,
        sign_eq5=summary.sign_eq5,
        coeff_eq2=summary.coeff_eq2,
        ok=result.ok,
    )
    for case in result.cases:
        if case.gating and not case.passed:
            typer.echo(_report_line(case), err=True)
    structlog.contextvars.unbind_contextvars("run_id", "suites")
    if not result.ok:
        raise typer.Exit(code=1)


@app.command()
def check(
    n: Annotated[int, typer.Option("--n", help="Hypersurface dimension")] = 2,
    points: Annotated[int, typer.Option("--points", help="Sample points")] = 8,
    seed: Annotated[int, typer.Option("--seed", help="Seed")] = 42,
) -> None:
    """Quick self-check: the core algebra identities on a flat and a chart metric."""
    from calculus.errors import FormsError
    from geometry.ambient import Case, Geometry
    from geometry.chart import GraphChart, chart_array, off_sigma_points
    from utils.logger import configure_logging
    from verify.algebra import core_algebra
    from verify.residuals import Tolerance
    from verify.suite import case_rng

    configure_logging(json_output=False, log_level="warning")
    tolerance = Tolerance()
    try:
        geo = Geometry(Case.DS, n)
        chart = GraphChart(geo)
        rng = case_rng(seed, f"{geo.label}/check")
        sample = chart.sample_points(points, rng)
        reports = core_algebra(
            geo.metric,
            off_sigma_points(sample, rng),
            tolerance,
            rng,
            label=f"{geo.label}/ambient",
            forms_per_degree=1,
        )
        reports += core_algebra(
            chart.metric,
            chart_array(sample),
            tolerance,
            rng,
            label=f"{geo.label}/chart",
            orientation=chart.orientation,
            forms_per_degree=1,
        )
    except FormsError as exc:
        raise _fail(exc, "check.failed") from None

    for report in reports:
        typer.echo(_report_line(report))
    if not all(report.passed for report in reports):
        raise typer.Exit(code=1)


def _apply_operator(operator: str, form: Form, geometry_payload: dict[str, Any]) -> Form:
    from calculus.errors import FormMismatchError
    from calculus.forms import Space
    from calculus.operators import codifferential, ext_d, hodge, laplace_de_rham
    from geometry.ambient import Geometry, GeometrySpec
    from geometry.chart import GraphChart

    geo = Geometry.from_spec(GeometrySpec.model_validate(geometry_payload))
    if form.space is Space.AMBIENT:
        metric, orientation = geo.metric, 1
    else:
        chart = GraphChart(geo)
        metric, orientation = chart.metric, chart.orientation
    if form.dim != metric.dim:
        msg = f"{form.space} form on {form.dim} variables does not fit {geo.label}"
        raise FormMismatchError(msg)
    if operator == "d":
        return ext_d(form)
    if operator == "delta":
        return codifferential(form, metric, orientation)
    if operator == "box":
        return laplace_de_rham(form, metric, orientation)
    return hodge(form, metric, orientation)


@app.command(name="eval")
def evaluate(
    operator: Annotated[str, typer.Argument(help="d, delta, box or star")],
    form_file: Annotated[Path, typer.Option("--form", help="JSON form payload")],
    geometry_file: Annotated[Path, typer.Option("--geometry", help="JSON geometry payload")],
    points_file: Annotated[
        Path, typer.Option("--points", help="JSON list of points in the form's variables")
    ],
) -> None:
    """Apply an operator to a JSON form and print its components at the given points."""
    import numpy as np

    from calculus.codec import form_from_json, form_to_json

    if operator not in OPERATORS:
        typer.echo(f"Unknown operator '{operator}'. Valid operators: {', '.join(OPERATORS)}")
        raise typer.Exit(code=2)
    try:
        form = form_from_json(json.loads(form_file.read_text(encoding="utf-8")))
        geometry_payload = json.loads(geometry_file.read_text(encoding="utf-8"))
        sample = np.asarray(json.loads(points_file.read_text(encoding="utf-8")), dtype=float)
        result = _apply_operator(operator, form, geometry_payload)
        values = result.evaluate(np.atleast_2d(sample))
    except Exception as exc:
        raise _fail(exc, "eval.failed") from None

    output = {
        "form": form_to_json(result),
        "components": {
            ",".join(str(k) for k in index): column.tolist() for index, column in values.items()
        },
    }
    typer.echo(json.dumps(output, indent=2))


if __name__ == "__main__":
    app()
