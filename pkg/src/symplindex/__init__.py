"""Maslov, Hormander and Conley-Zehnder indices of sampled symplectic paths."""

from .forms import (DEFAULT_TOL, PAPER, STANDARD, InertiaTriple, SignConvention,
                    SymmetricForm, ToleranceContext, inertia, signature)
from .maslov import IndexValue, LagrangianPath, maslov_index

__all__ = [
    "DEFAULT_TOL", "PAPER", "STANDARD", "InertiaTriple", "SignConvention",
    "SymmetricForm", "ToleranceContext", "inertia", "signature",
    "IndexValue", "LagrangianPath", "maslov_index",
]

__version__ = "0.1.0"
