"""refdoc: classify the refactoring type documented in a commit message."""

from .corpus import (
    ALL_TYPES,
    METHOD_TYPES,
    CommitRecord,
    Dataset,
    RefactoringType,
    class_distribution,
    load_corpus,
    stratified_sample,
)
from .classifiers import ModelConfig, TrainedModel, predict, predicted_label, train
from .pipeline import fit, predict_message

__version__ = "0.1.0"

__all__ = [
    "ALL_TYPES",
    "METHOD_TYPES",
    "CommitRecord",
    "Dataset",
    "ModelConfig",
    "RefactoringType",
    "TrainedModel",
    "class_distribution",
    "fit",
    "load_corpus",
    "predict",
    "predict_message",
    "predicted_label",
    "stratified_sample",
    "train",
    "__version__",
]
