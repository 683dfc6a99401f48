"""Volumetric-barrier FTRL for online learning of quantum states with logarithmic loss."""

from ._vbftrl import (
    DEFAULT_LAMBDA,
    DEFAULT_MU,
    ConfigError,
    DomainError,
    ParseError,
    SolverError,
    hindsight_optimum,
    minimize_potential,
    parse_config,
    play_game,
    read_replay,
    run_verify,
)

__all__ = [
    "DEFAULT_LAMBDA",
    "DEFAULT_MU",
    "ConfigError",
    "DomainError",
    "ParseError",
    "SolverError",
    "hindsight_optimum",
    "minimize_potential",
    "parse_config",
    "play_game",
    "read_replay",
    "run_verify",
]
