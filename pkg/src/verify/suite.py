"""Suite runner: geometries × n × selected suites, one ResidualReport per check."""

from __future__ import annotations

import zlib
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import structlog

from calculus.errors import FormsError
from calculus.forms import Space
from calculus.polynomials import random_form, random_seed_form
from config.settings import Suite, SuiteConfig
from geometry.ambient import Case, Geometry
from geometry.chart import GraphChart, SigmaPoint, chart_array, off_sigma_points
from geometry.frame import build_frame
from verify.algebra import core_algebra
from verify.closed_forms import oneform_example, scalar_example, sphere_eigen
from verify.properties import frame_residuals, verify_basis_properties
from verify.residuals import Tolerance
from verify.result import ResidualReport, SuiteReport, summarize
from verify.theorems import (
    EQ2_COEFFICIENTS,
    adjudicate_eq2,
    th1_box,
    th1_box_dilation,
    th1_delta,
    th2_box,
    th2_delta,
    th3,
    th4,
)

logger = structlog.get_logger()


@dataclass(frozen=True)
class CaseContext:
    """Everything a suite needs for one (geometry, n) case."""

    key: str
    config: SuiteConfig
    chart: GraphChart
    points: list[SigmaPoint]
    tolerance: Tolerance
    coefficient: str

    def rng(self, suite: Suite) -> np.random.Generator:
        return case_rng(self.config.seed, f"{self.key}/{suite}")


def case_rng(seed: int, key: str) -> np.random.Generator:
    """Generator determined by the master seed and the case key alone."""
    return np.random.default_rng([seed, zlib.crc32(key.encode())])


def _degrees(config: SuiteConfig, upper: int) -> list[int]:
    if config.degrees is None:
        return list(range(upper + 1))
    return [p for p in config.degrees if p <= upper]


def run_theorems(ctx: CaseContext) -> list[ResidualReport]:
    config, chart = ctx.config, ctx.chart
    geo = chart.geo
    rng = ctx.rng(Suite.THEOREMS)
    mutations = config.mutations
    reports: list[ResidualReport] = []
    for p in _degrees(config, geo.dim):
        alpha = random_form(rng, p, geo.dim, Space.AMBIENT)
        if p >= 1:
            reports.append(
                th1_delta(
                    alpha,
                    chart,
                    ctx.points,
                    ctx.tolerance,
                    coefficient=ctx.coefficient,
                    mutations=mutations,
                )
            )
        reports.append(th1_box(alpha, chart, ctx.points, ctx.tolerance, mutations=mutations))
        reports.append(th1_box_dilation(alpha, chart, ctx.points, ctx.tolerance))
        reports.append(th3(alpha, chart, ctx.points, ctx.tolerance, mutations=mutations))
    for b in _degrees(config, geo.n):
        for s in config.homogeneities:
            seed = random_seed_form(rng, b, geo.dim)
            reports.append(th2_delta(seed, s, chart, ctx.points, ctx.tolerance))
            reports.append(
                th2_box(seed, s, chart, ctx.points, ctx.tolerance, mutations=mutations)
            )
            reports.append(th4(seed, s, chart, ctx.points, ctx.tolerance, mutations=mutations))
    return reports


def run_props(ctx: CaseContext) -> list[ResidualReport]:
    frame = build_frame(ctx.chart)
    rng = ctx.rng(Suite.PROPS)
    reports = frame_residuals(frame, ctx.points, ctx.tolerance, rng)
    reports += verify_basis_properties(
        frame,
        ctx.points,
        ctx.tolerance,
        rng,
        monomials_per_degree=ctx.config.monomials_per_degree,
    )
    return reports


def run_examples(ctx: CaseContext) -> list[ResidualReport]:
    geo = ctx.chart.geo
    rng = ctx.rng(Suite.EXAMPLES)
    reports = [
        scalar_example(random_seed_form(rng, 0, geo.dim), ctx.chart, ctx.points, ctx.tolerance),
        oneform_example(random_seed_form(rng, 1, geo.dim), ctx.chart, ctx.points, ctx.tolerance),
    ]
    eigen = sphere_eigen(ctx.chart, ctx.points, ctx.tolerance)
    if eigen is not None:
        reports.append(eigen)
    return reports


def run_algebra(ctx: CaseContext) -> list[ResidualReport]:
    chart = ctx.chart
    rng = ctx.rng(Suite.ALGEBRA)
    per_degree = ctx.config.forms_per_degree
    ambient = core_algebra(
        chart.geo.metric,
        off_sigma_points(ctx.points, rng),
        ctx.tolerance,
        rng,
        label=f"{ctx.key}/ambient",
        forms_per_degree=per_degree,
    )
    intrinsic = core_algebra(
        chart.metric,
        chart_array(ctx.points),
        ctx.tolerance,
        rng,
        label=f"{ctx.key}/chart",
        orientation=chart.orientation,
        forms_per_degree=per_degree,
    )
    return ambient + intrinsic


RUNNERS: dict[Suite, Callable[[CaseContext], list[ResidualReport]]] = {
    Suite.THEOREMS: run_theorems,
    Suite.PROPS: run_props,
    Suite.EXAMPLES: run_examples,
    Suite.ALGEBRA: run_algebra,
}


def _failure(suite: Suite, key: str, n: int, exc: Exception) -> ResidualReport:
    return ResidualReport(
        identity=f"{suite}_error",
        suite=suite.value,
        geometry=key,
        n=n,
        passed=False,
        note=str(exc),
    )


def _build_case(
    config: SuiteConfig, case: Case, n: int
) -> tuple[GraphChart, list[SigmaPoint]]:
    geo = Geometry(case, n, config.H)
    chart = GraphChart.from_spec(geo, config.chart_spec(n))
    points = chart.sample_points(config.points, case_rng(config.seed, geo.label))
    return chart, points


def _eq2_coefficient(
    config: SuiteConfig, tolerance: Tolerance
) -> tuple[str | None, list[ResidualReport]]:
    """Evaluate both printed coefficient variants on the first configured case."""
    case, n = config.geometries[0], config.n[0]
    chart, points = _build_case(config, case, n)
    rng = case_rng(config.seed, f"{chart.geo.label}/eq2")
    alpha = random_form(rng, 2, chart.geo.dim, Space.AMBIENT)
    return adjudicate_eq2(alpha, chart, points, tolerance)


def _consistent_sign(reports: Sequence[ResidualReport]) -> int | None:
    signs = {r.adjudicated_sign for r in reports if r.adjudicated_sign is not None}
    if len(signs) == 1:
        return signs.pop()
    return None


def run_suite(config: SuiteConfig) -> SuiteReport:
    """Run every selected suite over every configured case; failures become reports."""
    suites = config.selected_suites()
    tolerance = Tolerance(config.rel_tol, config.abs_floor)
    cases: list[ResidualReport] = []
    coefficient: str | None = None
    if not suites or not config.geometries or not config.n:
        return SuiteReport(cases=cases, summary=summarize(cases))

    if Suite.THEOREMS in suites:
        try:
            coefficient, adjudication = _eq2_coefficient(config, tolerance)
            cases.extend(adjudication)
        except FormsError as exc:
            logger.error("suite.eq2.failed", error=str(exc))
            cases.append(_failure(Suite.THEOREMS, "eq2", config.n[0], exc))

    for case in config.geometries:
        for n in config.n:
            key = f"{case}-n{n}"
            try:
                chart, points = _build_case(config, case, n)
            except FormsError as exc:
                logger.error("suite.case.failed", case=key, error=str(exc))
                cases.extend(_failure(suite, key, n, exc) for suite in suites)
                continue
            ctx = CaseContext(
                key=key,
                config=config,
                chart=chart,
                points=points,
                tolerance=tolerance,
                coefficient=coefficient or EQ2_COEFFICIENTS[0],
            )
            for suite in suites:
                logger.info("suite.case.start", case=key, suite=suite.value)
                try:
                    reports = RUNNERS[suite](ctx)
                except FormsError as exc:
                    logger.error("suite.case.failed", case=key, suite=suite.value, error=str(exc))
                    cases.append(_failure(suite, key, n, exc))
                    continue
                failed = [r.identity for r in reports if r.gating and not r.passed]
                logger.info(
                    "suite.case.done",
                    case=key,
                    suite=suite.value,
                    reports=len(reports),
                    failed=len(failed),
                )
                cases.extend(reports)

    sign = _consistent_sign(cases)
    return SuiteReport(cases=cases, summary=summarize(cases, sign, coefficient))
