"""Systemic sentence generation over a paradigmatic type lattice, with
result-focused debugging, multilingual resource merging, region-modular
development, and feature-indexed regression suites."""

from .errors import LatticeError, SyntaxProblem
from .generator import GenerationResult, generate
from .network import Cond, Lexeme, System, SystemNetwork, validate_network
from .resources import ResourceSet, ValidationFailed, load_resources, save_resources
from .semantics import SemanticGraph, parse_spl
from .suite import Suite, record_example, run_suite
from .trace import diff_traces, selection_expression, where_introduced
from .workspace import Edit, Patch, Workspace

__all__ = [
    "Cond",
    "Edit",
    "GenerationResult",
    "LatticeError",
    "Lexeme",
    "Patch",
    "ResourceSet",
    "SemanticGraph",
    "Suite",
    "SyntaxProblem",
    "System",
    "SystemNetwork",
    "ValidationFailed",
    "Workspace",
    "diff_traces",
    "generate",
    "load_resources",
    "parse_spl",
    "record_example",
    "run_suite",
    "save_resources",
    "selection_expression",
    "validate_network",
    "where_introduced",
]

__version__ = "0.1.0"
