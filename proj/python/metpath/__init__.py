"""Metric derivative, variation and theorem checks for paths in metric spaces."""

from ._core import (
    EvaluationError,
    Fixture,
    FixtureMeta,
    InputError,
    Interval,
    Path,
    fixture_names,
    hausdorff_length,
    integrate_grid,
    load_csv,
    make_fixture,
    md_profile,
    metric_derivative,
    parse_csv,
    reports_json,
    run_checks,
    variation,
)

__all__ = [
    "EvaluationError",
    "Fixture",
    "FixtureMeta",
    "InputError",
    "Interval",
    "Path",
    "fixture_names",
    "hausdorff_length",
    "integrate_grid",
    "load_csv",
    "make_fixture",
    "md_profile",
    "metric_derivative",
    "parse_csv",
    "reports_json",
    "run_checks",
    "variation",
]
