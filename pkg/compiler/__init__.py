"""
External Java compiler invocation and diagnostics parsing.
"""

from .javac import CompilationResult, Diagnostic, JavaCompiler, parse_diagnostics

__all__ = ['CompilationResult', 'Diagnostic', 'JavaCompiler', 'parse_diagnostics']
