"""gamtalk: train glass-box additive models, render their graphs as text, talk
to a chat LLM about them, and grade the answers against exact oracles."""

from .gam import (
    CategoricalAxis,
    ContinuousAxis,
    FeatureKind,
    FitConfig,
    GamModel,
    GraphTerm,
    fit_gam,
    global_importances,
    load_model,
    predict,
    save_model,
    term_value_at,
)
from .gateway import (
    ChatParams,
    LiveTransport,
    ReplayTransport,
    ResponseCache,
    ScriptedTransport,
    complete_chat,
)
from .graphtext import (
    GraphText,
    RenderOptions,
    TokenEstimator,
    estimate_tokens,
    parse_graph_text,
    render_graph_text,
    simplify_graph,
)
from .harness import (
    BenchmarkReport,
    JumpResult,
    MonotonicityClass,
    grade_case,
    oracle_largest_jump,
    oracle_monotonicity,
    oracle_value_at,
    parse_numeric_answer,
    perturb_invert_y,
    perturb_swap_categories,
    run_benchmark,
)
from .prompts import (
    DatasetContext,
    GraphTask,
    Message,
    TaskKind,
    build_graph_conversation,
    build_model_summary_prompt,
    build_system_prompt,
    next_turn,
)
from .datasets import load_bundled_dataset

__version__ = "0.1.0"
