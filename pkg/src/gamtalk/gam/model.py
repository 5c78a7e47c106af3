"""Piecewise-constant additive models: terms, models, prediction, persistence."""

from __future__ import annotations

import enum
import json
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np

MODEL_SCHEMA = "gamtalk-model/1"


class DomainError(ValueError):
    """A continuous query point lies outside the term's axis."""


class UnknownCategoryError(ValueError):
    """A categorical query value is not one of the term's categories."""


class MissingFeatureError(ValueError):
    """A prediction row does not supply a value for one of the model's features."""


class FeatureKind(str, enum.Enum):
    CONTINUOUS = "continuous"
    CATEGORICAL = "categorical"
    BOOLEAN = "boolean"


@dataclass(frozen=True)
class ContinuousAxis:
    """Ordered interval edges; bin i covers [edges[i], edges[i+1])."""

    edges: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(float(e) for e in self.edges))
        if len(self.edges) < 2:
            raise ValueError("a continuous axis needs at least two edges")
        for lo, hi in zip(self.edges, self.edges[1:]):
            if not lo < hi:
                raise ValueError(f"axis edges must be strictly increasing, got {lo} >= {hi}")

    @property
    def n_bins(self) -> int:
        return len(self.edges) - 1


@dataclass(frozen=True)
class CategoricalAxis:
    """Ordered category labels, one bin per label."""

    categories: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "categories", tuple(str(c) for c in self.categories))
        if not self.categories:
            raise ValueError("a categorical axis needs at least one category")
        if any(c == "" for c in self.categories):
            raise ValueError("category labels must be non-empty")
        if len(set(self.categories)) != len(self.categories):
            raise ValueError("category labels must be unique")

    @property
    def n_bins(self) -> int:
        return len(self.categories)


BinAxis = ContinuousAxis | CategoricalAxis


@dataclass(frozen=True)
class GraphTerm:
    """One feature's shape function: per-bin mean contribution with a 95% CI band.

    Contributions are in link units (log-odds under a logit link). ``weights``
    are the training sample counts per bin and drive centering, importances,
    and merge decisions during simplification.
    """

    feature_name: str
    kind: FeatureKind
    axis: BinAxis
    means: tuple[float, ...]
    lower_ci: tuple[float, ...]
    upper_ci: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", FeatureKind(self.kind))
        for name in ("means", "lower_ci", "upper_ci", "weights"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        n = self.axis.n_bins
        if self.kind is FeatureKind.CONTINUOUS:
            if not isinstance(self.axis, ContinuousAxis):
                raise ValueError("continuous terms need a ContinuousAxis")
        else:
            if not isinstance(self.axis, CategoricalAxis):
                raise ValueError(f"{self.kind.value} terms need a CategoricalAxis")
        if self.kind is FeatureKind.BOOLEAN and n != 2:
            raise ValueError("boolean terms must have exactly two categories")
        for name in ("means", "lower_ci", "upper_ci", "weights"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} must have one entry per bin ({n}), "
                                 f"got {len(getattr(self, name))}")
        for i, (lo, m, hi) in enumerate(zip(self.lower_ci, self.means, self.upper_ci)):
            if not (lo <= m <= hi):
                raise ValueError(f"bin {i}: confidence bounds must bracket the mean "
                                 f"({lo} <= {m} <= {hi} fails)")
        if any(w < 0 for w in self.weights):
            raise ValueError("bin weights must be non-negative")

    @property
    def n_bins(self) -> int:
        return self.axis.n_bins

    # -- lookup ------------------------------------------------------------

    def bin_index(self, x, clamp: bool = False) -> int:
        """Index of the bin containing ``x``.

        Continuous bins are half-open [lo, hi); the last bin also includes its
        upper edge. With ``clamp`` out-of-domain values map to the nearest bin.
        """
        if isinstance(self.axis, ContinuousAxis):
            edges = self.axis.edges
            xf = float(x)
            if xf < edges[0] or xf > edges[-1]:
                if not clamp:
                    raise DomainError(
                        f"{self.feature_name}: value {xf} outside axis domain "
                        f"[{edges[0]}, {edges[-1]}]")
                return 0 if xf < edges[0] else self.n_bins - 1
            return min(bisect_right(edges, xf) - 1, self.n_bins - 1)
        label = str(x)
        try:
            return self.axis.categories.index(label)
        except ValueError:
            raise UnknownCategoryError(
                f"{self.feature_name}: unknown category {label!r}") from None

    def value_at(self, x) -> float:
        """Mean contribution of the bin containing ``x`` (strict domain check)."""
        return self.means[self.bin_index(x)]

    def bin_indices(self, values: np.ndarray, clamp: bool = True) -> np.ndarray:
        """Vectorized bin lookup for a column of feature values."""
        if isinstance(self.axis, ContinuousAxis):
            edges = np.asarray(self.axis.edges)
            vals = np.asarray(values, dtype=float)
            if not clamp and (np.any(vals < edges[0]) or np.any(vals > edges[-1])):
                raise DomainError(f"{self.feature_name}: values outside axis domain")
            idx = np.searchsorted(edges, vals, side="right") - 1
            return np.clip(idx, 0, self.n_bins - 1)
        lookup = {c: i for i, c in enumerate(self.axis.categories)}
        try:
            return np.array([lookup[str(v)] for v in values], dtype=int)
        except KeyError as exc:
            raise UnknownCategoryError(
                f"{self.feature_name}: unknown category {exc.args[0]!r}") from None


def term_value_at(term: GraphTerm, x) -> float:
    """Exact graph lookup; the oracle that LLM value-reading answers are graded against."""
    return term.value_at(x)


@dataclass(frozen=True)
class RowScore:
    score: float
    out_of_range: tuple[str, ...] = ()


@dataclass(frozen=True)
class GamModel:
    """Intercept plus one GraphTerm per feature; the score is their plain sum."""

    intercept: float
    link: str
    terms: tuple[GraphTerm, ...]
    importances: tuple[float, ...]
    target_description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "intercept", float(self.intercept))
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "importances", tuple(float(v) for v in self.importances))
        if self.link not in ("identity", "logit"):
            raise ValueError(f"link must be 'identity' or 'logit', got {self.link!r}")
        names = [t.feature_name for t in self.terms]
        if len(set(names)) != len(names):
            raise ValueError("term feature names must be unique")
        if len(self.importances) != len(self.terms):
            raise ValueError("importances must have one entry per term")
        if any(v < 0 for v in self.importances):
            raise ValueError("importances must be non-negative")

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(t.feature_name for t in self.terms)

    def term(self, feature_name: str) -> GraphTerm:
        for t in self.terms:
            if t.feature_name == feature_name:
                return t
        raise MissingFeatureError(f"model has no term for feature {feature_name!r}")

    def score_row(self, row: Mapping[str, Any]) -> RowScore:
        """Additive score for one row, with the features whose value was clamped."""
        total = self.intercept
        clamped = []
        for t in self.terms:
            if t.feature_name not in row:
                raise MissingFeatureError(f"row is missing feature {t.feature_name!r}")
            x = row[t.feature_name]
            if isinstance(t.axis, ContinuousAxis):
                xf = float(x)
                if xf < t.axis.edges[0] or xf > t.axis.edges[-1]:
                    clamped.append(t.feature_name)
                total += t.means[t.bin_index(xf, clamp=True)]
            else:
                total += t.value_at(x)
        return RowScore(score=total, out_of_range=tuple(clamped))

    def predict(self, row: Mapping[str, Any]) -> float:
        return self.score_row(row).score


def predict(model: GamModel, row: Mapping[str, Any]) -> float:
    """Score = intercept + sum of per-term contributions, exactly."""
    return model.predict(row)


def global_importances(model: GamModel, table) -> tuple[float, ...]:
    """Mean absolute term contribution over the rows of ``table``, per term.

    ``table`` is a pandas DataFrame whose columns cover the model's features.
    Out-of-range continuous values clamp, matching prediction semantics.
    """
    out = []
    for t in model.terms:
        if t.feature_name not in table.columns:
            raise MissingFeatureError(f"table has no column {t.feature_name!r}")
        idx = t.bin_indices(table[t.feature_name].to_numpy())
        contrib = np.asarray(t.means)[idx]
        out.append(float(np.mean(np.abs(contrib))))
    return tuple(out)


# -- persistence (schema gamtalk-model/1) ----------------------------------

def term_to_dict(term: GraphTerm) -> dict:
    d: dict[str, Any] = {"feature_name": term.feature_name, "kind": term.kind.value}
    if isinstance(term.axis, ContinuousAxis):
        d["edges"] = list(term.axis.edges)
    else:
        d["categories"] = list(term.axis.categories)
    d["means"] = list(term.means)
    d["lower_ci"] = list(term.lower_ci)
    d["upper_ci"] = list(term.upper_ci)
    d["weights"] = list(term.weights)
    return d


def term_from_dict(d: Mapping[str, Any]) -> GraphTerm:
    kind = FeatureKind(d["kind"])
    if kind is FeatureKind.CONTINUOUS:
        axis: BinAxis = ContinuousAxis(tuple(d["edges"]))
    else:
        axis = CategoricalAxis(tuple(d["categories"]))
    return GraphTerm(
        feature_name=d["feature_name"],
        kind=kind,
        axis=axis,
        means=tuple(d["means"]),
        lower_ci=tuple(d["lower_ci"]),
        upper_ci=tuple(d["upper_ci"]),
        weights=tuple(d["weights"]),
    )


def model_to_dict(model: GamModel) -> dict:
    return {
        "schema": MODEL_SCHEMA,
        "link": model.link,
        "intercept": model.intercept,
        "target_description": model.target_description,
        "importances": list(model.importances),
        "terms": [term_to_dict(t) for t in model.terms],
    }


def model_from_dict(d: Mapping[str, Any]) -> GamModel:
    if d.get("schema") != MODEL_SCHEMA:
        raise ValueError(f"unsupported model schema {d.get('schema')!r}, "
                         f"expected {MODEL_SCHEMA!r}")
    return GamModel(
        intercept=d["intercept"],
        link=d["link"],
        terms=tuple(term_from_dict(t) for t in d["terms"]),
        importances=tuple(d["importances"]),
        target_description=d.get("target_description", ""),
    )


def model_to_json(model: GamModel) -> str:
    """Deterministic serialization: identical models yield identical bytes."""
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def save_model(model: GamModel, path: str | Path) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path: str | Path) -> GamModel:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
