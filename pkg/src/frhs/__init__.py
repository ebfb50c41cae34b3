"""Numerical workbench for invariant (alpha, beta)-metrics on homogeneous spaces."""
from .catalog import catalog_get, catalog_list
from .config import RunConfig, Tolerances
from .curvature import curvature_scan, flag_curvature
from .lie_algebra import StructureConstants, decompose, validate
from .metric import AlphaBetaModel, InnerProduct, PhiFamily, check_admissibility
from .reductivity import Verdict, reductivity_verdict
from .tensors import TensorSample, verify_tensors

__all__ = [
    "AlphaBetaModel",
    "InnerProduct",
    "PhiFamily",
    "RunConfig",
    "StructureConstants",
    "TensorSample",
    "Tolerances",
    "Verdict",
    "catalog_get",
    "catalog_list",
    "check_admissibility",
    "curvature_scan",
    "decompose",
    "flag_curvature",
    "reductivity_verdict",
    "validate",
    "verify_tensors",
]
