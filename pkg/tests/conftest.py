"""Shared fixtures: the Age graph ground truth, random term generators, and
independent brute-force oracles used to cross-check the fast implementations."""

from __future__ import annotations

import numpy as np
import pytest

from gamtalk.gam.model import CategoricalAxis, ContinuousAxis, FeatureKind, GraphTerm
from gamtalk.graphtext import estimate_tokens, parse_graph_text, render_graph_text

AGE_MEANS_JSON = (
    '{"(2.0, 2.5)": -0.308, "(2.5, 3.5)": 0.839, "(3.5, 12.5)": 0.91, '
    '"(12.5, 17.5)": 0.904, "(17.5, 20.0)": 0.035, "(20.0, 21.5)": 0.144, '
    '"(21.5, 25.5)": 0.304, "(25.5, 28.5)": 0.375, "(28.5, 31.5)": 0.254, '
    '"(31.5, 33.5)": 0.349, "(33.5, 36.25)": 0.399, "(36.25, 36.75)": 0.047, '
    '"(36.75, 37.5)": 0.038, "(37.5, 38.5)": 0.246, "(38.5, 39.5)": 0.2, '
    '"(39.5, 41.0)": 0.103, "(41.0, 43.0)": 0.086, "(43.0, 44.5)": -0.93, '
    '"(44.5, 46.5)": -1.153, "(46.5, 47.5)": -1.132, "(47.5, 50.5)": -0.301, '
    '"(50.5, 51.5)": 0.104, "(51.5, 52.5)": 0.121, "(52.5, 53.5)": 0.065, '
    '"(53.5, 55.0)": -0.637, "(55.0, 56.5)": -0.627, "(56.5, 57.5)": -0.648, '
    '"(57.5, 60.5)": -0.628, "(60.5, 62.5)": -0.977, "(62.5, 67.5)": -0.945, '
    '"(67.5, 80.0)": -0.887}')

AGE_LOWER_JSON = (
    '{"(2.0, 2.5)": -2.464, "(2.5, 3.5)": -0.518, "(3.5, 12.5)": -0.303, '
    '"(12.5, 17.5)": -0.314, "(17.5, 20.0)": -0.405, "(20.0, 21.5)": -0.299, '
    '"(21.5, 25.5)": 0.097, "(25.5, 28.5)": -0.12, "(28.5, 31.5)": 0.11, '
    '"(31.5, 33.5)": 0.153, "(33.5, 36.25)": 0.132, "(36.25, 36.75)": -0.329, '
    '"(36.75, 37.5)": -0.321, "(37.5, 38.5)": -0.285, "(38.5, 39.5)": -0.36, '
    '"(39.5, 41.0)": -0.514, "(41.0, 43.0)": -0.467, "(43.0, 44.5)": -2.148, '
    '"(44.5, 46.5)": -2.244, "(46.5, 47.5)": -2.242, "(47.5, 50.5)": -0.49, '
    '"(50.5, 51.5)": -0.522, "(51.5, 52.5)": -0.483, "(52.5, 53.5)": -0.59, '
    '"(53.5, 55.0)": -1.135, "(55.0, 56.5)": -1.135, "(56.5, 57.5)": -1.186, '
    '"(57.5, 60.5)": -1.165, "(60.5, 62.5)": -1.889, "(62.5, 67.5)": -1.804, '
    '"(67.5, 80.0)": -1.604}')

AGE_UPPER_JSON = (
    '{"(2.0, 2.5)": 1.848, "(2.5, 3.5)": 2.196, "(3.5, 12.5)": 2.123, '
    '"(12.5, 17.5)": 2.122, "(17.5, 20.0)": 0.475, "(20.0, 21.5)": 0.588, '
    '"(21.5, 25.5)": 0.511, "(25.5, 28.5)": 0.869, "(28.5, 31.5)": 0.399, '
    '"(31.5, 33.5)": 0.544, "(33.5, 36.25)": 0.665, "(36.25, 36.75)": 0.423, '
    '"(36.75, 37.5)": 0.396, "(37.5, 38.5)": 0.778, "(38.5, 39.5)": 0.759, '
    '"(39.5, 41.0)": 0.72, "(41.0, 43.0)": 0.639, "(43.0, 44.5)": 0.288, '
    '"(44.5, 46.5)": -0.061, "(46.5, 47.5)": -0.023, "(47.5, 50.5)": -0.112, '
    '"(50.5, 51.5)": 0.73, "(51.5, 52.5)": 0.725, "(52.5, 53.5)": 0.719, '
    '"(53.5, 55.0)": -0.14, "(55.0, 56.5)": -0.118, "(56.5, 57.5)": -0.111, '
    '"(57.5, 60.5)": -0.09, "(60.5, 62.5)": -0.065, "(62.5, 67.5)": -0.087, '
    '"(67.5, 80.0)": -0.169}')

AGE_TEXT = (
    "Feature Name: Age\n\n"
    "Feature Type: continuous\n\n"
    f"Means: {AGE_MEANS_JSON}\n\n"
    f"Lower Bounds (95%-Confidence Interval): {AGE_LOWER_JSON}\n\n"
    f"Upper Bounds (95%-Confidence Interval): {AGE_UPPER_JSON}")


@pytest.fixture
def age_term() -> GraphTerm:
    return parse_graph_text(AGE_TEXT)


@pytest.fixture
def sex_term() -> GraphTerm:
    return GraphTerm(
        feature_name="Sex",
        kind=FeatureKind.CATEGORICAL,
        axis=CategoricalAxis(("female", "male")),
        means=(1.397, -1.397),
        lower_ci=(1.1, -1.7),
        upper_ci=(1.7, -1.1),
        weights=(314.0, 577.0),
    )


def make_continuous_term(rng: np.random.Generator, n_bins: int | None = None,
                         name: str = "f", monotone: str | None = None) -> GraphTerm:
    """Random valid continuous term; edges are well separated so that 3-decimal
    rendering stays unambiguous."""
    n = n_bins or int(rng.integers(2, 201))
    start = float(rng.uniform(-100, 100))
    edges = np.concatenate([[start], start + np.cumsum(rng.uniform(0.5, 10.0, n))])
    means = rng.normal(0.0, 2.0, n)
    if monotone == "increasing":
        means = np.sort(means)
    elif monotone == "decreasing":
        means = -np.sort(means)
    spread = np.abs(rng.normal(0.0, 1.0, n))
    return GraphTerm(
        feature_name=name,
        kind=FeatureKind.CONTINUOUS,
        axis=ContinuousAxis(tuple(edges)),
        means=tuple(means),
        lower_ci=tuple(means - spread),
        upper_ci=tuple(means + spread),
        weights=tuple(float(w) for w in rng.integers(1, 50, n)),
    )


def make_categorical_term(rng: np.random.Generator, n_bins: int | None = None,
                          name: str = "c") -> GraphTerm:
    n = n_bins or int(rng.integers(2, 12))
    means = rng.normal(0.0, 2.0, n)
    spread = np.abs(rng.normal(0.0, 1.0, n))
    return GraphTerm(
        feature_name=name,
        kind=FeatureKind.CATEGORICAL,
        axis=CategoricalAxis(tuple(f"cat{i}" for i in range(n))),
        means=tuple(means),
        lower_ci=tuple(means - spread),
        upper_ci=tuple(means + spread),
        weights=tuple(float(w) for w in rng.integers(1, 50, n)),
    )


def single_bin_floor(term: GraphTerm) -> int:
    """Token cost of the coarsest possible rendering (everything merged into
    one bin); the smallest budget simplify_graph can ever satisfy."""
    total = sum(term.weights)
    if total > 0:
        mean = sum(w * m for w, m in zip(term.weights, term.means)) / total
    else:
        mean = sum(term.means) / len(term.means)
    single = GraphTerm(
        feature_name=term.feature_name, kind=term.kind,
        axis=ContinuousAxis((term.axis.edges[0], term.axis.edges[-1])),
        means=(mean,), lower_ci=(min(term.lower_ci),),
        upper_ci=(max(term.upper_ci),), weights=(total,))
    return estimate_tokens(render_graph_text(single))


# -- independent brute-force oracles (kept free of the library's numpy paths) --

def brute_force_monotonicity(means) -> str:
    means = list(means)
    equal = all(b == a for a, b in zip(means, means[1:]))
    if equal:
        return "constant"
    if all(b >= a for a, b in zip(means, means[1:])):
        return "increasing"
    if all(b <= a for a, b in zip(means, means[1:])):
        return "decreasing"
    return "not_monotone"


def brute_force_largest_jump(means, edges) -> tuple[float, float]:
    """(boundary_x, delta) by exhaustive scan; first strict maximum wins ties."""
    best_i, best_mag = 0, -1.0
    for i in range(len(means) - 1):
        mag = abs(means[i + 1] - means[i])
        if mag > best_mag:
            best_i, best_mag = i, mag
    return edges[best_i + 1], means[best_i + 1] - means[best_i]
