from .model import (
    MODEL_SCHEMA,
    BinAxis,
    CategoricalAxis,
    ContinuousAxis,
    DomainError,
    FeatureKind,
    GamModel,
    GraphTerm,
    MissingFeatureError,
    RowScore,
    UnknownCategoryError,
    global_importances,
    load_model,
    model_from_dict,
    model_to_dict,
    model_to_json,
    predict,
    save_model,
    term_from_dict,
    term_to_dict,
    term_value_at,
)
from .fit import EARLY_STOP_PATIENCE, FitConfig, FitError, fit_gam

__all__ = [
    "MODEL_SCHEMA",
    "BinAxis",
    "CategoricalAxis",
    "ContinuousAxis",
    "DomainError",
    "EARLY_STOP_PATIENCE",
    "FeatureKind",
    "FitConfig",
    "FitError",
    "GamModel",
    "GraphTerm",
    "MissingFeatureError",
    "RowScore",
    "UnknownCategoryError",
    "fit_gam",
    "global_importances",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "model_to_json",
    "predict",
    "save_model",
    "term_from_dict",
    "term_to_dict",
    "term_value_at",
]
