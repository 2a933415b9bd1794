"""Gate parameters and the feed-forward matrices.

A :class:`ParamVector` ``(a, b, c)`` names the phase polynomial

.. math:: f(q) = a q + b q^2 / 2 + c q^3 / 3,

which is the exponent of the phase gate :math:`D_q^f = e^{i f(q)}`.  The same
triple is used for measurement parameters, client pre-rotations and the
correction vectors sent to the server.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ParamVector:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"ParamVector.{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, arr) -> "ParamVector":
        a, b, c = (float(x) for x in np.asarray(arr, dtype=float).reshape(3))
        return cls(a, b, c)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __add__(self, other: "ParamVector") -> "ParamVector":
        return ParamVector(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: "ParamVector") -> "ParamVector":
        return ParamVector(self.a - other.a, self.b - other.b, self.c - other.c)

    def __neg__(self) -> "ParamVector":
        return ParamVector(-self.a, -self.b, -self.c)

    def scale(self, k: float) -> "ParamVector":
        return ParamVector(k * self.a, k * self.b, k * self.c)

    @property
    def degree(self) -> int:
        """Index of the largest nonzero coefficient (0 for the zero polynomial)."""
        for deg, coef in ((3, self.c), (2, self.b), (1, self.a)):
            if coef != 0.0:
                return deg
        return 0

    @property
    def is_zero(self) -> bool:
        return self.a == 0.0 and self.b == 0.0 and self.c == 0.0

    @property
    def is_gaussian(self) -> bool:
        return self.c == 0.0

    def __call__(self, q):
        """Evaluate f(q)."""
        return self.a * q + self.b * q**2 / 2 + self.c * q**3 / 3

    def derivative(self, q):
        return self.a + self.b * q + self.c * q**2

    def reflected(self) -> "ParamVector":
        """Coefficients of q -> f(-q)."""
        return ParamVector(-self.a, self.b, -self.c)

    def isclose(self, other: "ParamVector", atol: float = 1e-9) -> bool:
        return bool(np.allclose(self.as_array(), other.as_array(), rtol=0.0, atol=atol))


# Phase polynomials share the representation.
PhasePoly = ParamVector

#: Unit vector picking the linear coefficient.
E_LINEAR = ParamVector(1.0, 0.0, 0.0)


def mm_matrix(m: float) -> np.ndarray:
    """Feed-forward matrix M_m with R_q(v) X(m) = Z(m) R_q(M_m v)."""
    m = float(m)
    return np.array([[1.0, m, m * m], [0.0, 1.0, 2.0 * m], [0.0, 0.0, 1.0]])


def mm_inverse(m: float) -> np.ndarray:
    m = float(m)
    return np.array([[1.0, -m, m * m], [0.0, 1.0, -2.0 * m], [0.0, 0.0, 1.0]])


def apply_mm(m: float, v: ParamVector) -> ParamVector:
    return ParamVector.from_array(mm_matrix(m) @ v.as_array())


def apply_mm_inverse(m: float, v: ParamVector) -> ParamVector:
    return ParamVector.from_array(mm_inverse(m) @ v.as_array())


def push_x_through_rq(v: ParamVector, m: float) -> tuple[float, ParamVector]:
    """Rewrite R_q(v) X(m) as Z(m) R_q(v_new).

    Returns ``(m, v_new)``: the Z byproduct left behind and the shifted
    parameters ``M_m v``.  The scalar phase ``f_v(m)`` picked up by the
    rewrite is dropped here; :func:`cvbqc.algebra.rewrite.normalize`
    tracks it.
    """
    return float(m), apply_mm(m, v)


@dataclass(frozen=True)
class ObservablePoly:
    """The observable ``p + a + b q + c q^2``."""

    coeffs: ParamVector = ParamVector()

    @property
    def a(self):
        return self.coeffs.a

    @property
    def b(self):
        return self.coeffs.b

    @property
    def c(self):
        return self.coeffs.c

    @property
    def is_linear(self) -> bool:
        return self.coeffs.c == 0.0

    def __str__(self):
        terms = ["p"]
        if self.a:
            terms.append(f"{self.a:+g}")
        if self.b:
            terms.append(f"{self.b:+g}*q")
        if self.c:
            terms.append(f"{self.c:+g}*q^2")
        return " ".join(terms)


P_QUADRATURE = ObservablePoly()


def conjugate_p_by_phase_gate(f: ParamVector) -> ObservablePoly:
    """Heisenberg image of p under D_q^f: e^{-if(q)} p e^{if(q)} = p + f'(q)."""
    return ObservablePoly(ParamVector(f.a, f.b, f.c))
