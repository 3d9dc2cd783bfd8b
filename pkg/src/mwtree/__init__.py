"""Squared distance matrices of trees whose edge weights are positive definite matrices."""
from ._accel import NUMBA_AVAILABLE, backend_name
from .errors import (
    BadLabels, BadWeightShape, BetaSingular, Degree2Present, IllConditioned, LinAlgError,
    MWTreeError, NonFinite, NonSquare, NotATree, NotPositiveDefinite, NTooSmall, ParseError,
    ShapeMismatch, Singular, TreeError, VertexOutOfRange,
)
from .formulas import Branch, DetResult, InverseResult, beta, det_formula, eta, inverse_formula
from .fuzz import FuzzConfig, FuzzReport, fuzz, replay
from .generate import random_instance, random_tree, random_weights
from .io import dump_tree, load_example, parse_tree_file, read_tree
from .linalg import lu_decompose, lu_det, lu_inverse, lu_slogdet, lu_solve
from .matrices import TreeMatrices, build, distance_matrix, laplacian, squared_distance_matrix
from .tree import Edge, WeightedTree, classify_weights, degree_profile, tree_path, validate
from .verify import DEFAULT_TOLERANCES, IDENTITIES, ResidualReport, run_all

__version__ = "0.1.0"
