"""
Command-line surface: configuration files, subcommands and artifact output
"""
from .config_file import parse_config, write_config, apply_overrides
from .output_writer import emit_plot_data, PlotKind
from .commands import HANDLERS

__all__ = [
    "parse_config",
    "write_config",
    "apply_overrides",
    "emit_plot_data",
    "PlotKind",
    "HANDLERS",
]
