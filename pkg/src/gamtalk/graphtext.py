"""Textual graph serialization: the key-value format LLMs read graphs in.

A rendered graph is a small plain-text document: two header lines naming the
feature and its type, then JSON objects mapping bins to means and confidence
bounds. ``parse_graph_text`` inverts the rendering, ``estimate_tokens`` prices
a text against a context window, and ``simplify_graph`` merges adjacent bins
until a rendering fits a token budget.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gam.model import (
    CategoricalAxis,
    ContinuousAxis,
    FeatureKind,
    GraphTerm,
)

MEANS_LABEL = "Means"
LOWER_LABEL = "Lower Bounds (95%-Confidence Interval)"
UPPER_LABEL = "Upper Bounds (95%-Confidence Interval)"
WEIGHTS_LABEL = "Weights"
NAME_LABEL = "Feature Name"
TYPE_LABEL = "Feature Type"

_INTERVAL_KEY = re.compile(r"^\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)$")
# characters str.splitlines treats as line breaks; they cannot survive the
# line-oriented canonical format
_LINE_BREAKS = "\n\r\x0b\x0c\x1c\x1d\x1e\x85  "


class GraphTextError(ValueError):
    """The text is not a valid canonical graph rendering."""


class BudgetError(ValueError):
    """The token budget cannot be met even by the coarsest rendering."""


@dataclass(frozen=True)
class RenderOptions:
    decimals: int = 3
    include_ci: bool = True
    include_weights: bool = False

    def __post_init__(self):
        if not 0 <= self.decimals <= 12:
            raise ValueError("decimals must be in [0, 12]")


@dataclass(frozen=True)
class GraphText:
    """Canonical rendering of one graph, plus the options that produced it."""

    text: str
    options: RenderOptions = RenderOptions()

    @property
    def feature_kind(self) -> FeatureKind:
        m = re.search(rf"^{TYPE_LABEL}: (\w+)$", self.text, flags=re.MULTILINE)
        if m is None:
            raise GraphTextError(f"missing '{TYPE_LABEL}:' line")
        return FeatureKind(m.group(1))


def _round(x: float, decimals: int) -> float:
    v = round(float(x), decimals)
    return 0.0 if v == 0 else v  # normalize -0.0


def format_number(x: float, decimals: int = 3) -> str:
    """Shortest decimal form of ``x`` rounded to ``decimals`` (json style: 0.91, 2.0)."""
    return json.dumps(_round(x, decimals))


def round_term(term: GraphTerm, decimals: int) -> GraphTerm:
    """The term with every real rounded to ``decimals``; what a rendering preserves."""
    if isinstance(term.axis, ContinuousAxis):
        axis: ContinuousAxis | CategoricalAxis = ContinuousAxis(
            tuple(_round(e, decimals) for e in term.axis.edges))
    else:
        axis = term.axis
    return GraphTerm(
        feature_name=term.feature_name,
        kind=term.kind,
        axis=axis,
        means=tuple(_round(v, decimals) for v in term.means),
        lower_ci=tuple(_round(v, decimals) for v in term.lower_ci),
        upper_ci=tuple(_round(v, decimals) for v in term.upper_ci),
        weights=tuple(_round(v, decimals) for v in term.weights),
    )


def required_decimals(term: GraphTerm, base: int = 3, limit: int = 12) -> int:
    """Smallest precision >= ``base`` at which the term's axis stays unambiguous.

    Graphs over narrow ranges (standardized features) need more decimal places
    than the default 3 to keep adjacent interval edges distinct.
    """
    if isinstance(term.axis, CategoricalAxis):
        return base
    for decimals in range(base, limit + 1):
        rounded = [_round(e, decimals) for e in term.axis.edges]
        if all(lo < hi for lo, hi in zip(rounded, rounded[1:])):
            return decimals
    raise GraphTextError(f"{term.feature_name}: axis edges are closer than "
                         f"10^-{limit}; cannot render unambiguously")


def _bin_keys(term: GraphTerm, decimals: int) -> list[str]:
    if isinstance(term.axis, ContinuousAxis):
        rounded = [_round(e, decimals) for e in term.axis.edges]
        if any(lo >= hi for lo, hi in zip(rounded, rounded[1:])):
            raise GraphTextError(
                f"{term.feature_name}: axis edges collapse at {decimals} decimals")
        edges = [json.dumps(e) for e in rounded]
        return [f"({lo}, {hi})" for lo, hi in zip(edges, edges[1:])]
    return list(term.axis.categories)


def _kv_object(keys: list[str], values, decimals: int) -> str:
    return json.dumps({k: _round(v, decimals) for k, v in zip(keys, values)},
                      ensure_ascii=False)


def render_graph_text(term: GraphTerm, opts: RenderOptions | None = None) -> GraphText:
    """Render a term to its canonical text.

    Continuous keys are "(lo, hi)" intervals; categorical keys are the raw
    labels. Adjacent bins with equal rounded means are kept distinct; merging
    is ``simplify_graph``'s job.
    """
    opts = opts or RenderOptions()
    names = [term.feature_name] + (list(term.axis.categories)
                                   if isinstance(term.axis, CategoricalAxis) else [])
    for name in names:
        if any(c in _LINE_BREAKS for c in name):
            raise GraphTextError(f"{name!r} contains line-breaking characters and "
                                 "cannot appear in the canonical text format")
    keys = _bin_keys(term, opts.decimals)
    blocks = [
        f"{NAME_LABEL}: {term.feature_name}",
        f"{TYPE_LABEL}: {term.kind.value}",
        f"{MEANS_LABEL}: {_kv_object(keys, term.means, opts.decimals)}",
    ]
    if opts.include_ci:
        blocks.append(f"{LOWER_LABEL}: {_kv_object(keys, term.lower_ci, opts.decimals)}")
        blocks.append(f"{UPPER_LABEL}: {_kv_object(keys, term.upper_ci, opts.decimals)}")
    if opts.include_weights:
        blocks.append(f"{WEIGHTS_LABEL}: {_kv_object(keys, term.weights, opts.decimals)}")
    return GraphText(text="\n\n".join(blocks), options=opts)


def _parse_fields(text: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        label, sep, value = line.partition(": ")
        if not sep or label not in (NAME_LABEL, TYPE_LABEL, MEANS_LABEL,
                                    LOWER_LABEL, UPPER_LABEL, WEIGHTS_LABEL):
            raise GraphTextError(f"unrecognized line {line!r}")
        if label in fields:
            raise GraphTextError(f"duplicate field {label!r}")
        fields[label] = value
    for required in (NAME_LABEL, TYPE_LABEL, MEANS_LABEL):
        if required not in fields:
            raise GraphTextError(f"missing '{required}:' line")
    if (LOWER_LABEL in fields) != (UPPER_LABEL in fields):
        raise GraphTextError("confidence bounds need both Lower Bounds and Upper Bounds")
    return fields


def _parse_object(label: str, raw: str) -> dict[str, float]:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise GraphTextError(f"{label}: invalid JSON object ({exc})") from None
    if not isinstance(obj, dict) or not obj:
        raise GraphTextError(f"{label}: expected a non-empty JSON object")
    out = {}
    for k, v in obj.items():
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise GraphTextError(f"{label}: value for key {k!r} is not a number")
        out[str(k)] = float(v)
    return out


def _axis_from_keys(keys: list[str], kind: FeatureKind) -> ContinuousAxis | CategoricalAxis:
    if kind is not FeatureKind.CONTINUOUS:
        return CategoricalAxis(tuple(keys))
    edges = [None] * (len(keys) + 1)
    prev_hi = None
    for i, key in enumerate(keys):
        m = _INTERVAL_KEY.match(key)
        if m is None:
            raise GraphTextError(f"malformed interval key {key!r}")
        try:
            lo, hi = float(m.group(1)), float(m.group(2))
        except ValueError:
            raise GraphTextError(f"malformed interval key {key!r}") from None
        if not lo < hi:
            raise GraphTextError(f"empty interval {key!r}")
        if prev_hi is not None and lo != prev_hi:
            if lo > prev_hi:
                raise GraphTextError(f"gap in axis between {prev_hi} and {lo}")
            raise GraphTextError(f"overlapping intervals at {lo}")
        edges[i] = lo
        prev_hi = hi
    edges[-1] = prev_hi
    return ContinuousAxis(tuple(edges))


def parse_graph_text(text: GraphText | str) -> GraphTerm:
    """Parse a canonical rendering back into a GraphTerm.

    Confidence bounds absent from the text degenerate to the means; weights
    absent from the text are restored as 1 per bin.
    """
    raw = text.text if isinstance(text, GraphText) else text
    fields = _parse_fields(raw)
    try:
        kind = FeatureKind(fields[TYPE_LABEL])
    except ValueError:
        raise GraphTextError(f"unknown feature type {fields[TYPE_LABEL]!r}") from None

    means_obj = _parse_object(MEANS_LABEL, fields[MEANS_LABEL])
    keys = list(means_obj)
    objects = {MEANS_LABEL: means_obj}
    for label in (LOWER_LABEL, UPPER_LABEL, WEIGHTS_LABEL):
        if label in fields:
            obj = _parse_object(label, fields[label])
            if list(obj) != keys:
                raise GraphTextError(f"mismatched axes: {label} keys differ from Means keys")
            objects[label] = obj

    means = [means_obj[k] for k in keys]
    lower = [objects[LOWER_LABEL][k] for k in keys] if LOWER_LABEL in objects else list(means)
    upper = [objects[UPPER_LABEL][k] for k in keys] if UPPER_LABEL in objects else list(means)
    weights = ([objects[WEIGHTS_LABEL][k] for k in keys]
               if WEIGHTS_LABEL in objects else [1.0] * len(keys))
    return GraphTerm(
        feature_name=fields[NAME_LABEL],
        kind=kind,
        axis=_axis_from_keys(keys, kind),
        means=tuple(means),
        lower_ci=tuple(lower),
        upper_ci=tuple(upper),
        weights=tuple(weights),
    )


def write_graph_text(gtext: GraphText, path: str | Path) -> None:
    Path(path).write_text(gtext.text + "\n", encoding="utf-8")


def read_graph_text(path: str | Path, opts: RenderOptions | None = None) -> GraphText:
    raw = Path(path).read_text(encoding="utf-8")
    return GraphText(text=raw.rstrip("\n"), options=opts or RenderOptions())


# -- token estimation --------------------------------------------------------

@dataclass(frozen=True)
class TokenEstimator:
    """Token pricing for prompt budgeting.

    Heuristic mode charges ceil(chars / 4) and needs no external data;
    vocabulary mode counts greedy longest-match subwords from a loaded
    vocabulary file (one subword per line, rank order).
    """

    mode: str = "heuristic"
    vocabulary: tuple[str, ...] = ()

    def __post_init__(self):
        if self.mode not in ("heuristic", "vocabulary"):
            raise ValueError(f"unknown estimator mode {self.mode!r}")
        if self.mode == "vocabulary" and not self.vocabulary:
            raise ValueError("vocabulary mode needs a non-empty vocabulary")

    @classmethod
    def from_vocabulary_file(cls, path: str | Path) -> "TokenEstimator":
        try:
            lines = Path(path).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise ValueError(f"cannot load vocabulary file {path}: {exc}") from None
        subwords = tuple(line for line in lines if line)
        return cls(mode="vocabulary", vocabulary=subwords)

    def count(self, text: str) -> int:
        if self.mode == "heuristic":
            return math.ceil(len(text) / 4)
        vocab = set(self.vocabulary)
        max_len = max(len(s) for s in vocab)
        n, i, tokens = len(text), 0, 0
        while i < n:
            step = 1
            for length in range(min(max_len, n - i), 0, -1):
                if text[i:i + length] in vocab:
                    step = length
                    break
            tokens += 1
            i += step
        return tokens


def estimate_tokens(text: str | GraphText, estimator: TokenEstimator | None = None) -> int:
    raw = text.text if isinstance(text, GraphText) else text
    return (estimator or TokenEstimator()).count(raw)


# -- simplification ----------------------------------------------------------

@dataclass(frozen=True)
class SimplifyResult:
    """Outcome of merging a term down to a token budget.

    ``max_merge_gap`` is the largest |mean difference| the greedy procedure
    accepted; the weighted mean absolute deviation of the simplified graph
    from the original stays within it.
    """

    term: GraphTerm
    token_estimate: int
    merge_count: int
    max_merge_gap: float


def _merge_pair(term: GraphTerm, i: int) -> GraphTerm:
    assert isinstance(term.axis, ContinuousAxis)
    w = term.weights[i] + term.weights[i + 1]
    if w > 0:
        mean = (term.weights[i] * term.means[i] + term.weights[i + 1] * term.means[i + 1]) / w
    else:
        mean = (term.means[i] + term.means[i + 1]) / 2
    edges = term.axis.edges[:i + 1] + term.axis.edges[i + 2:]
    return GraphTerm(
        feature_name=term.feature_name,
        kind=term.kind,
        axis=ContinuousAxis(edges),
        means=term.means[:i] + (mean,) + term.means[i + 2:],
        lower_ci=term.lower_ci[:i] + (min(term.lower_ci[i], term.lower_ci[i + 1]),)
        + term.lower_ci[i + 2:],
        upper_ci=term.upper_ci[:i] + (max(term.upper_ci[i], term.upper_ci[i + 1]),)
        + term.upper_ci[i + 2:],
        weights=term.weights[:i] + (w,) + term.weights[i + 2:],
    )


def simplify_graph(term: GraphTerm, budget: int,
                   estimator: TokenEstimator | None = None,
                   opts: RenderOptions | None = None) -> SimplifyResult:
    """Greedily merge adjacent bins until the rendering fits ``budget`` tokens.

    Each step merges the adjacent pair with the smallest |mean difference|
    (ties to the leftmost); the merged mean is the weight-weighted average and
    the merged CI is the conservative envelope [min lower, max upper].
    Categorical axes never merge: if the full rendering is over budget the
    budget is unreachable.
    """
    estimator = estimator or TokenEstimator()
    opts = opts or RenderOptions()

    def cost(t: GraphTerm) -> int:
        return estimator.count(render_graph_text(t, opts).text)

    current = term
    tokens = cost(current)
    merges = 0
    max_gap = 0.0
    while tokens > budget:
        if not isinstance(current.axis, ContinuousAxis):
            raise BudgetError(
                f"{term.feature_name}: categorical axes cannot be merged and the "
                f"full rendering needs {tokens} tokens > budget {budget}")
        if current.n_bins == 1:
            raise BudgetError(
                f"{term.feature_name}: budget {budget} unreachable, single-bin "
                f"rendering still needs {tokens} tokens")
        gaps = np.abs(np.diff(current.means))
        i = int(np.argmin(gaps))  # first minimum = leftmost tie
        max_gap = max(max_gap, float(gaps[i]))
        current = _merge_pair(current, i)
        merges += 1
        tokens = cost(current)
    return SimplifyResult(term=current, token_estimate=tokens,
                          merge_count=merges, max_merge_gap=max_gap)
