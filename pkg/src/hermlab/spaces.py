"""Finite-dimensional value spaces for coefficient tables.

Coefficients of an expansion live either in the scalars (real or complex)
or in a finite-dimensional sequence space l^q_d.  The l^q_d spaces act as
desk-scale surrogates for the Banach-space targets of the norm experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["ValueSpace"]


@dataclass(frozen=True)
class ValueSpace:
    """Descriptor of a coefficient codomain with its norm.

    kind is one of "real", "complex", "lq".  For "lq", ``q`` >= 1 is the
    exponent and ``d`` >= 1 the dimension; values are length-d arrays
    (real or complex entries).  Scalar values are plain floats/complexes.
    """

    kind: str
    q: float | None = None
    d: int | None = None

    def __post_init__(self):
        if self.kind not in ("real", "complex", "lq"):
            raise ValidationError(f"unknown value-space kind {self.kind!r}")
        if self.kind == "lq":
            if self.q is None or self.q < 1:
                raise ValidationError("lq space needs exponent q >= 1")
            if self.d is None or self.d < 1:
                raise ValidationError("lq space needs dimension d >= 1")

    @staticmethod
    def real() -> "ValueSpace":
        return ValueSpace("real")

    @staticmethod
    def complex() -> "ValueSpace":
        return ValueSpace("complex")

    @staticmethod
    def lq(q: float, d: int) -> "ValueSpace":
        return ValueSpace("lq", q=float(q), d=int(d))

    @property
    def is_scalar(self) -> bool:
        return self.kind in ("real", "complex")

    @property
    def is_hilbert(self) -> bool:
        """True when the norm is Euclidean (scalar or q = 2)."""
        return self.is_scalar or self.q == 2.0

    @property
    def components(self) -> int:
        return 1 if self.is_scalar else int(self.d)

    def zero(self):
        if self.is_scalar:
            return 0.0 if self.kind == "real" else 0.0j
        return np.zeros(self.d)

    def norm(self, value) -> float:
        """Norm of a single value."""
        if self.is_scalar:
            return abs(value)
        v = np.asarray(value)
        if v.shape != (self.d,):
            raise ValidationError(f"expected a length-{self.d} value, got shape {v.shape}")
        if self.q == np.inf:
            return float(np.max(np.abs(v)))
        return float(np.sum(np.abs(v) ** self.q) ** (1.0 / self.q))

    def norm_array(self, values: np.ndarray) -> np.ndarray:
        """Vectorized norm along the last axis of a sample array.

        For scalar spaces the input is used as-is (elementwise abs).
        """
        values = np.asarray(values)
        if self.is_scalar:
            return np.abs(values)
        if values.shape[-1] != self.d:
            raise ValidationError(
                f"trailing axis must have length {self.d}, got {values.shape[-1]}"
            )
        if self.q == np.inf:
            return np.max(np.abs(values), axis=-1)
        return np.sum(np.abs(values) ** self.q, axis=-1) ** (1.0 / self.q)

    def promote_complex(self) -> "ValueSpace":
        """The same space with complex scalars allowed."""
        if self.kind == "real":
            return ValueSpace("complex")
        return self
