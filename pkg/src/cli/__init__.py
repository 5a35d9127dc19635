"""
Command-line front end
"""
from .parser import parse_args, build_parser
from .commands import run, main

__all__ = ["parse_args", "build_parser", "run", "main"]
