"""
Instance generators and verification suites
"""

from .generators import InstanceGenerator, MapInstance, builtin_zoo, flat_epimorphisms_from, generate_maps
from .suites import SUITES, SuiteContext, SuiteReport, run_all, run_suite, write_report

__all__ = [
    "InstanceGenerator",
    "MapInstance",
    "builtin_zoo",
    "flat_epimorphisms_from",
    "generate_maps",
    "SUITES",
    "SuiteContext",
    "SuiteReport",
    "run_all",
    "run_suite",
    "write_report"
]
