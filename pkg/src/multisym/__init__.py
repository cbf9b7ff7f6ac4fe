"""Multisymmetric power-sum embeddings of unordered point sets."""
from .basis import GeneratorBasis, enumerate_generators, generator_count
from .calculus import RankReport, classify_rank, jacobian, singularity_predicate
from .decompose import (
    FittedDecomposition,
    LabeledDataset,
    SymmetryReport,
    check_symmetry,
    eval_g,
    fit_g,
    invert_d1,
)
from .embed import Configuration, Embedding, Permutation, canonicalize, embed, permute, point_features, reconstruct_norm
from .geometry2x2 import FiberClassification, FiberQuery, GridSpec, fiber, fiber_cardinality_scan, image_membership
from .probes import ProbePath, builtin_examples, holder_exponent, lipschitz_ratio_sequence
from .separation import (
    SeparatingPolynomial,
    evaluate_separating,
    orbit_equal,
    quotient_distance,
    separating_polynomial,
)

__version__ = "0.1.0"
