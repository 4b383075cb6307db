"""Invariants of transvection groups in dimension three and the Gorenstein test."""
from __future__ import annotations

__version__ = "0.1.0"

from .gf import FieldCtx, field_create  # noqa: E402
from .group import MatrixGroup, closure, transvection_subgroup  # noqa: E402
from .modstruct import classify_case  # noqa: E402

__all__ = ["__version__", "FieldCtx", "field_create", "MatrixGroup", "closure",
           "transvection_subgroup", "classify_case"]
