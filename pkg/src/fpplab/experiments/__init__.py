"""Named experiments, their configuration files and reports."""
from .config import ConfigError, ExperimentConfig, load_config, parse_config, render_config
from .registry import REGISTRY, ExperimentSpec, Outcome, run_experiment
from .report import Cell, Check, ExperimentReport, cells_csv, plot_svg, report_bytes, write_report

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config", "render_config",
           "REGISTRY", "ExperimentSpec", "Outcome", "run_experiment",
           "Cell", "Check", "ExperimentReport", "cells_csv", "plot_svg", "report_bytes", "write_report"]
