"""Python access to the CG + augmented Lagrangian solver and its harness."""

from ._core import (
    Config,
    ConfigError,
    NumericalAbort,
    Problem,
    fit_rate,
    gen_ball_qp,
    gen_qcqp,
    metrics,
    oracle_optimum_2d,
    parse_config,
    preset,
    preset_names,
    run,
    simulate,
    solve_assignment,
)

__all__ = [
    "Config",
    "ConfigError",
    "NumericalAbort",
    "Problem",
    "fit_rate",
    "gen_ball_qp",
    "gen_qcqp",
    "metrics",
    "oracle_optimum_2d",
    "parse_config",
    "preset",
    "preset_names",
    "run",
    "simulate",
    "solve_assignment",
]
