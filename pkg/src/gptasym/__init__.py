"""High-order asymptotics of boundary data for small conductivity inclusions.

The package computes generalized polarization tensors by Nystrom
discretization of the Neumann-Poincare resolvent, assembles the boundary
expansions of the perturbed potential in a disk, and checks them against a
dense full-accuracy transmission solver.
"""

from .asymptotics import (
    CorrectionLadder,
    ExpansionResult,
    correction_ladder,
    expand_dirichlet,
    expand_free_space,
    expand_neumann,
    expansion_with_H,
    inclusion_gpt,
    superpose_multi,
)
from .domain_functions import DiskDomain, background_U, background_V, green_function, neumann_function, taylor_neumann
from .errors import (
    DegenerateContrastError,
    DiscardedMeanWarning,
    DomainError,
    GptAsymError,
    IncompatibleDataError,
    InvalidArgumentError,
    InvertibilityError,
    NearSingularError,
    NearSingularWarning,
    SingularPointError,
)
from .forward_oracle import annulus_reference, solve_dirichlet, solve_neumann
from .geometry import BoundaryCurve, ShapeSpec, discretize
from .inclusion import InclusionSpec
from .kernels import BACKEND
from .layer_potentials import Density, double_layer, jump_check, single_layer
from .transmission import GptTable, NPOSolver, gpt_table, phi_i, polarization_tensor, resolvent_parameter

taylor_N = taylor_neumann

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "annulus_reference",
    "BACKEND",
    "background_U",
    "background_V",
    "BoundaryCurve",
    "correction_ladder",
    "CorrectionLadder",
    "DegenerateContrastError",
    "Density",
    "DiscardedMeanWarning",
    "discretize",
    "DiskDomain",
    "DomainError",
    "double_layer",
    "expand_dirichlet",
    "expand_free_space",
    "expand_neumann",
    "expansion_with_H",
    "ExpansionResult",
    "gpt_table",
    "GptAsymError",
    "GptTable",
    "green_function",
    "inclusion_gpt",
    "InclusionSpec",
    "IncompatibleDataError",
    "InvalidArgumentError",
    "InvertibilityError",
    "jump_check",
    "NearSingularError",
    "NearSingularWarning",
    "neumann_function",
    "NPOSolver",
    "phi_i",
    "polarization_tensor",
    "resolvent_parameter",
    "ShapeSpec",
    "single_layer",
    "SingularPointError",
    "solve_dirichlet",
    "solve_neumann",
    "superpose_multi",
    "taylor_N",
    "taylor_neumann",
]
