"""Weighted epsilon-samples for halfplane ranges built from low-crossing partitions."""

from ._esample import (
    EsampleError,
    approx_error,
    cutting,
    epsilon_sample,
    exact_error,
    generate,
    partition,
    sample_size_for_epsilon,
)

METHODS = ("random", "mat", "chan", "chan_simple", "ham", "double_ham")

__all__ = [
    "EsampleError",
    "METHODS",
    "approx_error",
    "cutting",
    "epsilon_sample",
    "exact_error",
    "generate",
    "partition",
    "sample_size_for_epsilon",
]
