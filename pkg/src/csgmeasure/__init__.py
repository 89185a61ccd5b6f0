"""Cumulative Spectral Gradient (CSG) complexity measure for labeled embeddings."""

__version__ = "0.1.0"

from .exceptions import CSGError, DataError, NumericalError  # noqa: E402
from .dataset import (  # noqa: E402
    ClassView, EmbeddedDataset, generate_blobs, load, load_binary, load_csv, save,
    save_binary, save_csv, stratified_sample, subsample_ratio, swap_labels,
)
from .density import (  # noqa: E402
    DensityParams, class_likelihood_vector, hypercube_density, knn_radius,
)
from .similarity import (  # noqa: E402
    AdjacencyMatrix, SimilarityMatrix, SimilarityParams, bray_curtis_adjacency,
    monte_carlo_similarity,
)
from .report import ComplexityReport  # noqa: E402
from .spectral import (  # noqa: E402
    CsgResult, Spectrum, csg, csg_from_adjacency, csg_pipeline, eigenvalues_symmetric,
    laplacian, normalized_eigengaps,
)
from .mds import ClassMap, classical_mds  # noqa: E402
from .baselines import BaselineScores, baseline_scores, pearson  # noqa: E402
from .reduction import SweepResult, sweep  # noqa: E402
