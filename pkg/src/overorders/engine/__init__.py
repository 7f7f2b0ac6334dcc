"""Overorder enumeration engines."""

from .generic import (
    SpinError,
    intermediate_rings,
    minimal_overrings,
    p_overorders_generic,
    ring_spin,
    spin,
)
from .local import (
    NonCommutativeError,
    P_overorder_count,
    P_overorders,
    minimal_overorders_at_P,
    p_overorders_etale,
)
from .overorders import DEFAULT_MAX_MATERIALIZE, overorder_count, overorders
from .poset import Branch, OverorderPoset
from .submodules import (
    SubmoduleSearchSpace,
    all_stable_subgroups,
    all_stable_submodules,
    minimal_stable_submodules,
)

__all__ = [
    "Branch",
    "DEFAULT_MAX_MATERIALIZE",
    "NonCommutativeError",
    "OverorderPoset",
    "P_overorder_count",
    "P_overorders",
    "SpinError",
    "SubmoduleSearchSpace",
    "all_stable_subgroups",
    "all_stable_submodules",
    "intermediate_rings",
    "minimal_overorders_at_P",
    "minimal_overrings",
    "minimal_stable_submodules",
    "overorder_count",
    "overorders",
    "p_overorders_etale",
    "p_overorders_generic",
    "ring_spin",
    "spin",
]
