"""Desk-scale trainer: cyclic gradient boosting over per-feature histogram bins.

Each outer bag boosts on a bootstrap resample and validates on the out-of-bag
rows; bags share one global binning so their per-bin scores can be averaged.
The 95% CI is the bag mean +/- 1.96 standard errors across bags.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .model import (
    CategoricalAxis,
    ContinuousAxis,
    FeatureKind,
    GamModel,
    GraphTerm,
)

EARLY_STOP_PATIENCE = 50
Z_95 = 1.96
_MIN_ROWS = 20


class FitError(ValueError):
    """The training table violates a precondition of the trainer."""


@dataclass(frozen=True)
class FitConfig:
    max_bins: int = 64
    outer_bags: int = 8
    learning_rate: float = 0.1
    boosting_rounds: int = 2000
    random_seed: int = 0

    def __post_init__(self):
        if self.max_bins < 2:
            raise ValueError("max_bins must be >= 2")
        if self.outer_bags < 1:
            raise ValueError("outer_bags must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.boosting_rounds < 1:
            raise ValueError("boosting_rounds must be >= 1")


@dataclass(frozen=True)
class _Binned:
    """One feature's global binning plus the bin index of every table row."""

    name: str
    kind: FeatureKind
    axis: ContinuousAxis | CategoricalAxis
    indices: np.ndarray    # int bin index per row
    counts: np.ndarray     # rows per bin over the full table
    constant: bool         # skip during boosting, term stays all-zero


def _bin_continuous(name: str, values: np.ndarray, max_bins: int) -> _Binned:
    values = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(values)):
        raise FitError(f"feature {name!r} contains non-finite values")
    edges = np.unique(np.quantile(values, np.linspace(0.0, 1.0, max_bins + 1)))
    if len(edges) < 2:
        # constant feature: a single bin around the lone value, zero contribution
        c = float(values[0])
        axis = ContinuousAxis((c - 0.5, c + 0.5))
        return _Binned(name, FeatureKind.CONTINUOUS, axis,
                       np.zeros(len(values), dtype=int),
                       np.array([float(len(values))]), constant=True)
    axis = ContinuousAxis(tuple(edges))
    idx = np.clip(np.searchsorted(edges, values, side="right") - 1, 0, len(edges) - 2)
    counts = np.bincount(idx, minlength=len(edges) - 1).astype(float)
    return _Binned(name, FeatureKind.CONTINUOUS, axis, idx, counts, constant=False)


def _bin_categorical(name: str, values: np.ndarray, boolean: bool) -> _Binned:
    labels = np.array([str(v) for v in values])
    categories = tuple(sorted(set(labels)))
    axis = CategoricalAxis(categories)
    lookup = {c: i for i, c in enumerate(categories)}
    idx = np.array([lookup[v] for v in labels], dtype=int)
    counts = np.bincount(idx, minlength=len(categories)).astype(float)
    kind = FeatureKind.BOOLEAN if boolean and len(categories) == 2 else FeatureKind.CATEGORICAL
    return _Binned(name, kind, axis, idx, counts, constant=len(categories) == 1)


def _bin_features(table: pd.DataFrame, feature_cols: list[str], max_bins: int) -> list[_Binned]:
    binned = []
    for name in feature_cols:
        col = table[name]
        if pd.api.types.is_bool_dtype(col):
            binned.append(_bin_categorical(name, col.to_numpy(), boolean=True))
        elif pd.api.types.is_numeric_dtype(col):
            binned.append(_bin_continuous(name, col.to_numpy(), max_bins))
        else:
            binned.append(_bin_categorical(name, col.to_numpy(), boolean=False))
    return binned


def _resolve_target(y: pd.Series, link: str) -> tuple[np.ndarray, str]:
    if link == "logit" or (link == "auto" and _looks_binary(y)):
        values = sorted(pd.unique(y.dropna()), key=str)
        if len(values) != 2:
            raise FitError(f"logit link needs a binary target, got {len(values)} "
                           f"distinct values in {y.name!r}")
        return (y.to_numpy() == values[1]).astype(float), "logit"
    if not pd.api.types.is_numeric_dtype(y):
        raise FitError(f"target {y.name!r} must be numeric for the identity link")
    return y.to_numpy(dtype=float), "identity"


def _looks_binary(y: pd.Series) -> bool:
    return pd.api.types.is_bool_dtype(y) or len(pd.unique(y.dropna())) == 2


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -35.0, 35.0)))


def _base_score(y: np.ndarray, link: str) -> float:
    if link == "identity":
        return float(np.mean(y))
    p = float(np.clip(np.mean(y), 1e-6, 1 - 1e-6))
    return float(np.log(p / (1 - p)))


def _loss(y: np.ndarray, f: np.ndarray, link: str) -> float:
    if link == "identity":
        return float(np.mean((y - f) ** 2))
    p = np.clip(_sigmoid(f), 1e-12, 1 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


def _boost_one_bag(binned: list[_Binned], y: np.ndarray, link: str,
                   config: FitConfig, rng: np.random.Generator
                   ) -> tuple[list[np.ndarray], float]:
    """Boost on a bootstrap resample; returns per-feature bin scores and the base score."""
    n = len(y)
    train = rng.integers(0, n, size=n)
    oob = np.setdiff1d(np.arange(n), np.unique(train))
    if len(oob) == 0:  # degenerate resample; hold out a deterministic slice instead
        perm = rng.permutation(n)
        cut = max(1, n // 5)
        oob, train = perm[:cut], perm[cut:]

    y_tr, y_val = y[train], y[oob]
    idx_tr = [b.indices[train] for b in binned]
    idx_val = [b.indices[oob] for b in binned]
    counts_tr = [np.bincount(ix, minlength=b.axis.n_bins).astype(float)
                 for b, ix in zip(binned, idx_tr)]

    f0 = _base_score(y_tr, link)
    f_tr = np.full(len(train), f0)
    f_val = np.full(len(oob), f0)
    scores = [np.zeros(b.axis.n_bins) for b in binned]
    active = [j for j, b in enumerate(binned) if not b.constant]

    best_loss = _loss(y_val, f_val, link)
    best_scores = [s.copy() for s in scores]
    best_round = 0

    for rnd in range(1, config.boosting_rounds + 1):
        for j in active:
            nb = binned[j].axis.n_bins
            if link == "identity":
                residual = y_tr - f_tr
                num = np.bincount(idx_tr[j], weights=residual, minlength=nb)
                den = counts_tr[j]
            else:
                p = _sigmoid(f_tr)
                num = np.bincount(idx_tr[j], weights=y_tr - p, minlength=nb)
                den = np.bincount(idx_tr[j], weights=p * (1 - p), minlength=nb)
            update = config.learning_rate * np.divide(
                num, den, out=np.zeros(nb), where=den > 0)
            scores[j] += update
            f_tr += update[idx_tr[j]]
            f_val += update[idx_val[j]]
        loss = _loss(y_val, f_val, link)
        if loss < best_loss - 1e-12:
            best_loss = loss
            best_scores = [s.copy() for s in scores]
            best_round = rnd
        elif rnd - best_round >= EARLY_STOP_PATIENCE:
            break

    return best_scores, f0


def fit_gam(table: pd.DataFrame, target: str, config: FitConfig | None = None,
            link: str = "auto", target_description: str = "") -> GamModel:
    """Fit a piecewise-constant additive model on a table with a named target column.

    Parameters
    ----------
    table : DataFrame with at least one feature column and >= 20 rows.
    target : name of the target column; numeric targets use the identity link,
        binary targets the logit link (``link`` forces the choice).
    config : binning / bagging / boosting settings.
    target_description : what the additive score contributes to; carried on the
        model and substituted into prompts.

    Terms come back mean-centered over the training data (the weighted offset
    folds into the intercept) and the fit is deterministic for a fixed seed.
    """
    config = config or FitConfig()
    if link not in ("auto", "identity", "logit"):
        raise FitError(f"unknown link {link!r}")
    if target not in table.columns:
        raise FitError(f"table has no target column {target!r}")
    feature_cols = [c for c in table.columns if c != target]
    if not feature_cols:
        raise FitError("table needs at least one feature column")
    if len(table) < _MIN_ROWS:
        raise FitError(f"table needs at least {_MIN_ROWS} rows, got {len(table)}")

    y, link = _resolve_target(table[target], link)
    if np.any(~np.isfinite(y)):
        raise FitError(f"target {target!r} contains non-finite values")
    binned = _bin_features(table, feature_cols, config.max_bins)

    bag_means = []      # per bag: list of centered per-feature score arrays
    bag_intercepts = []
    for b in range(config.outer_bags):
        rng = np.random.default_rng([config.random_seed, b])
        scores, f0 = _boost_one_bag(binned, y, link, config, rng)
        intercept = f0
        centered = []
        for bn, s in zip(binned, scores):
            total = bn.counts.sum()
            mu = float(np.dot(bn.counts, s) / total) if total > 0 else 0.0
            centered.append(s - mu)
            intercept += mu
        bag_means.append(centered)
        bag_intercepts.append(intercept)

    n_bags = config.outer_bags
    terms = []
    for j, bn in enumerate(binned):
        stack = np.stack([bag_means[b][j] for b in range(n_bags)])
        means = stack.mean(axis=0)
        if n_bags > 1:
            se = stack.std(axis=0, ddof=1) / np.sqrt(n_bags)
        else:
            se = np.zeros_like(means)
        terms.append(GraphTerm(
            feature_name=bn.name,
            kind=bn.kind,
            axis=bn.axis,
            means=tuple(means),
            lower_ci=tuple(means - Z_95 * se),
            upper_ci=tuple(means + Z_95 * se),
            weights=tuple(bn.counts),
        ))

    importances = []
    for t, bn in zip(terms, binned):
        total = bn.counts.sum()
        importances.append(float(np.dot(bn.counts, np.abs(t.means)) / total)
                           if total > 0 else 0.0)

    return GamModel(
        intercept=float(np.mean(bag_intercepts)),
        link=link,
        terms=tuple(terms),
        importances=tuple(importances),
        target_description=target_description,
    )
