"""
Command-line interface
"""

from .cli import build_parser, dispatch, effective_settings, parse_args

__all__ = [
    "build_parser",
    "dispatch",
    "effective_settings",
    "parse_args"
]
