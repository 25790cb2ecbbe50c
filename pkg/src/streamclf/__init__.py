"""streamclf: data-stream classification toolkit.

Hoeffding trees with pluggable adaptive leaves, frozen random feature
filters, sliding-window kNN, online hinge-loss SGD, naive Bayes, online and
leveraging bagging with ADWIN change detection, a random-projection network
trained by momentum SGD, synthetic stream generators, CSV/ARFF ingestion,
and a prequential evaluation harness.
"""

from .core import (
    AttributeSpec,
    Classifier,
    Instance,
    InstanceStream,
    Schema,
    encode_dense,
    make_schema,
    nominal,
    numeric,
    vote_argmax,
)
from .drift import Adwin
from .ensembles import OnlineBagging, leveraging_bagging, poisson_draw
from .evaluation import prequential_run, rank_methods, write_results_csv
from .features import FilteredClassifier, FilteredStream, RandomFeatureFilter
from .generators import HyperplaneGenerator, LedGenerator, RbfGenerator
from .ingestion import ArffStream, CsvStream, NormalizedStream, Normalizer
from .learners import HoeffdingTree, KnnClassifier, NaiveBayes, SgdLinear, hoeffding_bound
from .projection import GridSearchSpec, RandomProjectionNetwork, batched_apply, grid_search

__version__ = "0.1.0"

__all__ = [
    "AttributeSpec",
    "Schema",
    "Instance",
    "InstanceStream",
    "Classifier",
    "make_schema",
    "numeric",
    "nominal",
    "encode_dense",
    "vote_argmax",
    "RbfGenerator",
    "HyperplaneGenerator",
    "LedGenerator",
    "CsvStream",
    "ArffStream",
    "Normalizer",
    "NormalizedStream",
    "RandomFeatureFilter",
    "FilteredStream",
    "FilteredClassifier",
    "HoeffdingTree",
    "KnnClassifier",
    "SgdLinear",
    "NaiveBayes",
    "hoeffding_bound",
    "Adwin",
    "OnlineBagging",
    "leveraging_bagging",
    "poisson_draw",
    "RandomProjectionNetwork",
    "GridSearchSpec",
    "grid_search",
    "batched_apply",
    "prequential_run",
    "write_results_csv",
    "rank_methods",
    "__version__",
]
