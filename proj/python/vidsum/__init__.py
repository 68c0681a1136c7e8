"""Python bindings for the vidsum video summarization core."""

import json as _json

from ._core import (  # noqa: F401
    Error,
    FormatError,
    IdMismatchError,
    InvalidValueError,
    IoError,
    ShapeError,
    binarize_percentile,
    budget_frames,
    default_config,
    generate_dataset,
    kts_segment,
    knapsack_select,
    overlap_metrics,
    read_features,
    summarize,
    write_features,
)
from ._core import crossval as _crossval


def crossval(manifest, **overrides):
    """k-fold evaluation; keyword overrides use RunConfig key names."""
    return _json.loads(_crossval(str(manifest), _json.dumps(overrides)))
