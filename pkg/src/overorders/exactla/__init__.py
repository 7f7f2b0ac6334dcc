"""Exact linear algebra over Z, Z/N and finite fields."""

from .finfield import FFMatrix, FiniteField, ff_kernel, ff_make
from .intmat import det, hnf, hnf_full, snf, snf_with_transforms, xgcd
from .kernels import BACKEND

__all__ = [
    "BACKEND",
    "FFMatrix",
    "FiniteField",
    "det",
    "ff_kernel",
    "ff_make",
    "hnf",
    "hnf_full",
    "snf",
    "snf_with_transforms",
    "xgcd",
]
