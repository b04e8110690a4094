"""Scenarios, presets, command dispatch and the ``ore-lab`` CLI."""

from .commands import EXIT_FAILURE, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, CommandError, Report, reproduce_all, run_command
from .main import main
from .scenario import PRESETS, SCHEMA, ScenarioConfig, ScenarioError, load_scenario, preset

__all__ = [
    "EXIT_FAILURE",
    "EXIT_OK",
    "EXIT_UNKNOWN",
    "EXIT_USAGE",
    "PRESETS",
    "SCHEMA",
    "CommandError",
    "Report",
    "ScenarioConfig",
    "ScenarioError",
    "load_scenario",
    "main",
    "preset",
    "reproduce_all",
    "run_command",
]
