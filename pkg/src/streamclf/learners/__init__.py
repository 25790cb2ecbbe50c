"""Base incremental classifiers: Hoeffding tree with adaptive leaves,
sliding-window kNN, hinge-loss SGD, and Gaussian naive Bayes."""

from .bayes import NaiveBayes, SufficientStats
from .linear import SgdLinear
from .neighbors import KnnClassifier
from .tree import HoeffdingTree, entropy, hoeffding_bound

__all__ = [
    "NaiveBayes",
    "SufficientStats",
    "SgdLinear",
    "KnnClassifier",
    "HoeffdingTree",
    "entropy",
    "hoeffding_bound",
]
