"""Dense geometric algebra of Cl(3,0).

Multivectors are 8 real coefficients over the basis

    1, e1, e2, e3, e23, e31, e12, e123

so that the pseudoscalar dual of ``e_i`` lands on the i-th bivector slot with
coefficient +1 (``I e1 = e23``, ``I e2 = e31``, ``I e3 = e12``).  The product
is a precomputed 8x8 index/sign table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import ContractViolation, InvalidInputError

BASIS = ("1", "e1", "e2", "e3", "e23", "e31", "e12", "e123")
GRADES = np.array([0, 1, 1, 1, 2, 2, 2, 3])
GRADE_SLICES = {0: slice(0, 1), 1: slice(1, 4), 2: slice(4, 7), 3: slice(7, 8)}

UNIT_TOL = 1e-12
EXACT_TOL = 1e-12
CHAIN_TOL = 1e-10

Convention = Literal["standard", "oriented"]
CONVENTIONS = ("standard", "oriented")

# (canonical bitmask, sign) of each basis blade; e31 = -e1e3
_BLADES = ((0b000, 1), (0b001, 1), (0b010, 1), (0b100, 1),
           (0b110, 1), (0b101, -1), (0b011, 1), (0b111, 1))


def _reorder_sign(a: int, b: int) -> int:
    """Sign from bringing canonical blade product a*b into canonical order."""
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def _build_table() -> tuple[np.ndarray, np.ndarray]:
    slot = {mask: (k, s) for k, (mask, s) in enumerate(_BLADES)}
    index = np.zeros((8, 8), dtype=np.int64)
    sign = np.zeros((8, 8))
    for i, (mi, si) in enumerate(_BLADES):
        for j, (mj, sj) in enumerate(_BLADES):
            k, sk = slot[mi ^ mj]
            index[i, j] = k
            # Euclidean metric: repeated vectors square to +1
            sign[i, j] = si * sj * sk * _reorder_sign(mi, mj)
    return index, sign


PRODUCT_INDEX, PRODUCT_SIGN = _build_table()
PRODUCT_INDEX.setflags(write=False)
PRODUCT_SIGN.setflags(write=False)

_PRODUCT_TENSOR = np.zeros((8, 8, 8))
for _i in range(8):
    for _j in range(8):
        _PRODUCT_TENSOR[_i, _j, PRODUCT_INDEX[_i, _j]] = PRODUCT_SIGN[_i, _j]
_PRODUCT_TENSOR.setflags(write=False)


class Multivector:
    """Immutable element of Cl(3,0).

    Arithmetic operators: ``+``, ``-``, unary ``-``, and ``*`` (geometric
    product with another multivector, or scaling by a real number).
    """

    __slots__ = ("_c",)

    def __init__(self, coefficients: Sequence[float] | np.ndarray):
        c = np.array(coefficients, dtype=np.float64).reshape(-1)
        if c.shape != (8,):
            raise InvalidInputError(f"a multivector has 8 coefficients, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("multivector coefficients must be finite")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def scalar(cls, value: float) -> "Multivector":
        c = np.zeros(8)
        c[0] = value
        return cls(c)

    @classmethod
    def vector(cls, v: "Direction | Sequence[float] | np.ndarray") -> "Multivector":
        arr = v.as_array() if isinstance(v, Direction) else np.asarray(v, dtype=np.float64)
        c = np.zeros(8)
        c[1:4] = arr
        return cls(c)

    @classmethod
    def blade(cls, name: str, coefficient: float = 1.0) -> "Multivector":
        c = np.zeros(8)
        c[BASIS.index(name)] = coefficient
        return cls(c)

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    def grade(self, k: int) -> "Multivector":
        return grade_projection(self, k)

    @property
    def scalar_part(self) -> float:
        return float(self._c[0])

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.sqrt(np.dot(self._c, self._c)))

    def isclose(self, other: "Multivector | float", tol: float = EXACT_TOL) -> bool:
        other = _coerce(other)
        return bool(np.max(np.abs(self._c - other._c)) <= tol)

    def __add__(self, other):
        return Multivector(self._c + _coerce(other)._c)

    __radd__ = __add__

    def __sub__(self, other):
        return Multivector(self._c - _coerce(other)._c)

    def __rsub__(self, other):
        return Multivector(_coerce(other)._c - self._c)

    def __neg__(self):
        return Multivector(-self._c)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self._c * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self._c * float(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        terms = []
        for name, v in zip(BASIS, self._c):
            if v != 0.0:
                terms.append(f"{v:g}" if name == "1" else f"{v:g}*{name}")
        return "Multivector(" + (" + ".join(terms) if terms else "0") + ")"


def _coerce(x) -> Multivector:
    if isinstance(x, Multivector):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Multivector.scalar(float(x))
    raise TypeError(f"cannot use {type(x).__name__} as a multivector")


ONE = Multivector.scalar(1.0)
I = Multivector.blade("e123")
E1 = Multivector.blade("e1")
E2 = Multivector.blade("e2")
E3 = Multivector.blade("e3")
E23 = Multivector.blade("e23")
E31 = Multivector.blade("e31")
E12 = Multivector.blade("e12")


@dataclass(frozen=True)
class Direction:
    """Unit vector in R^3.  Non-unit input is rejected, never normalised."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidInputError(f"direction component {name} is not finite")
            object.__setattr__(self, name, v)
        n2 = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(n2 - 1.0) > UNIT_TOL:
            raise InvalidInputError(f"direction must be a unit vector, |v|^2 = {n2!r}")

    @classmethod
    def from_array(cls, v: Sequence[float] | np.ndarray) -> "Direction":
        arr = np.asarray(v, dtype=np.float64).reshape(-1)
        if arr.shape != (3,):
            raise InvalidInputError("a direction has three components")
        return cls(*arr)

    @classmethod
    def normalized(cls, v: Sequence[float] | np.ndarray) -> "Direction":
        """Explicitly normalise ``v``; zero vectors are rejected."""
        arr = np.asarray(v, dtype=np.float64).reshape(-1)
        n = float(np.linalg.norm(arr))
        if not math.isfinite(n) or n == 0.0:
            raise InvalidInputError("cannot normalise a zero or non-finite vector")
        return cls.from_array(arr / n)

    @classmethod
    def from_angle(cls, degrees: float, u: "Direction | None" = None,
                   v: "Direction | None" = None) -> "Direction":
        """Direction at ``degrees`` in the plane spanned by orthonormal ``u``, ``v``."""
        u = u or X_AXIS
        v = v or Y_AXIS
        t = math.radians(degrees)
        c, s = math.cos(t), math.sin(t)
        # Exact values at multiples of 90 degrees keep axis-aligned settings exact.
        if float(degrees) % 90.0 == 0.0:
            q = int(round(float(degrees) / 90.0)) % 4
            c, s = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[q]
        arr = c * u.as_array() + s * v.as_array()
        return cls.from_array(arr)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def __neg__(self) -> "Direction":
        return Direction(-self.x, -self.y, -self.z)

    def scaled(self, sign: int) -> "Direction":
        if sign not in (1, -1):
            raise InvalidInputError("a direction can only be scaled by +1 or -1")
        return self if sign == 1 else -self


X_AXIS = Direction(1.0, 0.0, 0.0)
Y_AXIS = Direction(0.0, 1.0, 0.0)
Z_AXIS = Direction(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Orientation:
    """Handedness lambda of the hidden trivector mu = lambda * I."""

    lam: int

    def __post_init__(self):
        if self.lam not in (1, -1) or isinstance(self.lam, bool):
            raise InvalidInputError(f"orientation must be +1 or -1, got {self.lam!r}")
        object.__setattr__(self, "lam", int(self.lam))

    @property
    def mu(self) -> Multivector:
        return self.lam * I


@dataclass(frozen=True)
class BivectorOutcome:
    value: Multivector

    def __post_init__(self):
        c = self.value.coefficients
        if np.max(np.abs(c[[0, 1, 2, 3, 7]])) > EXACT_TOL:
            raise InvalidInputError("bivector outcome has non-bivector components")
        if abs(float(np.linalg.norm(c[4:7])) - 1.0) > EXACT_TOL:
            raise InvalidInputError("bivector outcome must have unit norm")


def geometric_product(x: Multivector, y: Multivector) -> Multivector:
    """Clifford product of two multivectors."""
    if not isinstance(x, Multivector) or not isinstance(y, Multivector):
        raise InvalidInputError("geometric_product takes two Multivectors")
    return Multivector(np.einsum("i,j,ijk->k", x.coefficients, y.coefficients, _PRODUCT_TENSOR))


def grade_projection(x: Multivector, k: int) -> Multivector:
    if k not in GRADE_SLICES or isinstance(k, bool):
        raise InvalidInputError(f"grade index must be 0..3, got {k!r}")
    c = np.zeros(8)
    sl = GRADE_SLICES[k]
    c[sl] = x.coefficients[sl]
    return Multivector(c)


def dot(a: Direction, b: Direction) -> float:
    return a.x * b.x + a.y * b.y + a.z * b.z


def cross(a: Direction, b: Direction) -> np.ndarray:
    return np.array([a.y * b.z - a.z * b.y,
                     a.z * b.x - a.x * b.z,
                     a.x * b.y - a.y * b.x])


def wedge(a: Direction, b: Direction) -> Multivector:
    # a^b = I (a x b); with this basis order the slots coincide
    c = np.zeros(8)
    c[4:7] = cross(a, b)
    return Multivector(c)


def bivector_outcome(mu: Orientation, a: Direction) -> BivectorOutcome:
    """The algebraic measurement result (lambda I) a."""
    return BivectorOutcome(geometric_product(mu.mu, Multivector.vector(a)))


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise InvalidInputError(f"unknown product convention {convention!r}; use one of {CONVENTIONS}")


def outcome_product(A: BivectorOutcome, B: BivectorOutcome, a: Direction, b: Direction,
                    mu: Orientation, convention: Convention = "standard") -> Multivector:
    """Product of two outcomes of the bivector model.

    ``standard`` is the plain geometric product, ``-a.b - I (a x b)`` for
    either orientation.  ``oriented`` weights the grade-2 part by the
    handedness, giving ``-a.b - lambda I (a x b)``.
    """
    _check_convention(convention)
    if not A.value.isclose(bivector_outcome(mu, a).value) or \
            not B.value.isclose(bivector_outcome(mu, b).value):
        raise ContractViolation("outcomes do not match the stated orientation and settings")
    p = geometric_product(A.value, B.value)
    if convention == "standard":
        return p
    c = p.coefficients.copy()
    c[4:7] *= mu.lam
    return Multivector(c)
