"""
Command-line layer: config schema and command handlers
"""
from cli.schema import (
    TuneConfig,
    TuneSetup,
    build_setup,
    canonical_config,
    load_config,
    load_setup,
    parse_config,
)
from cli.commands import (
    cmd_bench,
    cmd_generate,
    cmd_render,
    cmd_tune,
    cmd_validate,
)

__all__ = [
    "TuneConfig",
    "TuneSetup",
    "build_setup",
    "canonical_config",
    "load_config",
    "load_setup",
    "parse_config",
    "cmd_bench",
    "cmd_generate",
    "cmd_render",
    "cmd_tune",
    "cmd_validate",
]
