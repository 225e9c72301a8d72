"""Central charges, exact phases and the two group actions on stability data.

Phases are never turned into floats for comparison: a phase is a nonzero
Gaussian rational ``z`` in the semi-closed upper half plane together with an
integer ``k``, standing for ``arg(z)/pi + k``.  Ordering is decided by the sign
of a cross product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import total_ordering
from typing import Any, Iterable, Sequence

from . import linalg
from .lattice import LatticeClass
from .linalg import frac

INF = math.inf


@dataclass(frozen=True)
class QQi:
    """A Gaussian rational ``re + im*i``."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", frac(self.re))
        object.__setattr__(self, "im", frac(self.im))

    def __add__(self, other: "QQi") -> "QQi":
        return QQi(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "QQi") -> "QQi":
        return QQi(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "QQi":
        return QQi(-self.re, -self.im)

    def __mul__(self, other: "QQi") -> "QQi":
        return QQi(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    def scale(self, c) -> "QQi":
        return QQi(self.re * c, self.im * c)

    def conj(self) -> "QQi":
        return QQi(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def in_hbar(self) -> bool:
        """Semi-closed upper half plane: ``Im > 0``, or ``Im = 0`` and ``Re < 0``."""
        return self.im > 0 or (self.im == 0 and self.re < 0)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}


ZERO = QQi(0, 0)


def cross(a: QQi, b: QQi) -> Fraction:
    """``Re(a)Im(b) - Im(a)Re(b)``; positive iff ``b`` lies counterclockwise of ``a`` (less than a half turn)."""
    return a.re * b.im - a.im * b.re


@total_ordering
@dataclass(frozen=True, eq=False)
class PhaseValue:
    """The real number ``arg(z)/pi + k`` with ``z`` in the semi-closed upper half plane."""

    z: QQi
    k: int = 0

    def __post_init__(self):
        if not self.z.in_hbar():
            raise ValueError(f"{self.z} is not in the semi-closed upper half plane")

    @classmethod
    def of(cls, z: QQi, k: int = 0) -> "PhaseValue":
        """Phase of any nonzero ``z`` taken in ``(k-1, k+1]``-style normal form."""
        if z.is_zero():
            raise ValueError("zero has no phase")
        if z.in_hbar():
            return cls(z, k)
        # arg(z) = arg(-z) - pi
        return cls(-z, k - 1)

    @classmethod
    def integer(cls, n: int) -> "PhaseValue":
        return cls(QQi(-1, 0), n - 1)

    def _key(self):
        # direction of z inside the closed upper half plane, as an exact rational
        return (self.k, None if self.z.im == 0 else self.z.re / self.z.im)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseValue):
            return NotImplemented
        return self.k == other.k and cross(self.z, other.z) == 0

    def __hash__(self) -> int:
        return hash(self._key())

    def __lt__(self, other: "PhaseValue") -> bool:
        if self.k != other.k:
            return self.k < other.k
        # both arguments lie in (0, pi]; they differ by less than a half turn
        return cross(self.z, other.z) > 0

    def __add__(self, other: "PhaseValue") -> "PhaseValue":
        w = self.z * other.z
        base = self.k + other.k
        return PhaseValue(w, base) if w.in_hbar() else PhaseValue(-w, base + 1)

    def __neg__(self) -> "PhaseValue":
        if self.z.im == 0:
            return PhaseValue(self.z, -self.k - 2)
        return PhaseValue(QQi(-self.z.re, self.z.im), -self.k - 1)

    def __sub__(self, other: "PhaseValue") -> "PhaseValue":
        return self + (-other)

    def shifted(self, n: int) -> "PhaseValue":
        return PhaseValue(self.z, self.k + n)

    def as_integer(self) -> int | None:
        return self.k + 1 if self.z.im == 0 else None

    def exact(self) -> Fraction | None:
        """The value as a rational when ``z`` sits on an axis or a diagonal, else ``None``."""
        re, im = self.z.re, self.z.im
        if im == 0:
            base = Fraction(1)
        elif re == 0:
            base = Fraction(1, 2)
        elif re == im:
            base = Fraction(1, 4)
        elif re == -im:
            base = Fraction(3, 4)
        else:
            return None
        return base + self.k

    def approx(self) -> float:
        return math.atan2(float(self.z.im), float(self.z.re)) / math.pi + self.k

    def upper_bound(self, den: int = 10**9) -> Fraction:
        """A rational ``>=`` the phase; exact whenever :meth:`exact` is known."""
        e = self.exact()
        if e is not None:
            return e
        # atan2 in double precision is good to a few ulps; 1/den dwarfs that
        return Fraction(math.ceil(self.approx() * den) + 1, den)

    def lower_bound(self, den: int = 10**9) -> Fraction:
        return -((-self).upper_bound(den))

    def __repr__(self) -> str:
        e = self.exact()
        if e is not None:
            return f"PhaseValue({e})"
        return f"PhaseValue(arg({self.z})/pi + {self.k} ~ {self.approx():.6f})"

    def to_json(self) -> dict:
        out = {"z": self.z.to_json(), "k": self.k}
        e = self.exact()
        if e is not None:
            out["value"] = str(e)
        return out


def ccw(u: QQi, w: QQi) -> PhaseValue:
    """Counterclockwise angle from ``u`` to ``w`` divided by pi, in ``[0, 2)``."""
    c = w * u.conj()
    if c.is_zero():
        raise ValueError("angle to the zero vector")
    if c.im == 0 and c.re > 0:
        return PhaseValue.integer(0)
    if c.in_hbar():
        return PhaseValue(c, 0)
    return PhaseValue(-c, 1)


@dataclass(frozen=True)
class CentralCharge:
    """A rational linear map from the lattice to ``C``, stored as two rows."""

    re: tuple[Fraction, ...]
    im: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "re", tuple(frac(x) for x in self.re))
        object.__setattr__(self, "im", tuple(frac(x) for x in self.im))
        if len(self.re) != len(self.im):
            raise ValueError("real and imaginary rows must have equal length")

    @property
    def rank(self) -> int:
        return len(self.re)

    def flatten(self) -> "CentralCharge":
        return self

    def __call__(self, beta) -> QQi:
        return evaluate(self, beta)

    def __neg__(self) -> "CentralCharge":
        return CentralCharge(tuple(-x for x in self.re), tuple(-x for x in self.im))

    def to_json(self) -> dict:
        return {"re": [str(x) for x in self.re], "im": [str(x) for x in self.im]}

    @classmethod
    def from_json(cls, obj: dict) -> "CentralCharge":
        return cls(tuple(obj["re"]), tuple(obj["im"]))


@dataclass(frozen=True)
class GluedCharge:
    """Ordered per-component charges; evaluation sums node charges over node blocks."""

    nodes: tuple[CentralCharge, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if not self.nodes:
            raise ValueError("a glued charge needs at least one node")

    @property
    def rank(self) -> int:
        return sum(z.rank for z in self.nodes)

    def blocks(self, coords: Sequence) -> list[tuple]:
        out, pos = [], 0
        for z in self.nodes:
            out.append(tuple(coords[pos:pos + z.rank]))
            pos += z.rank
        return out

    def flatten(self) -> CentralCharge:
        return CentralCharge(
            tuple(x for z in self.nodes for x in z.re),
            tuple(x for z in self.nodes for x in z.im),
        )

    def __call__(self, beta) -> QQi:
        return evaluate(self, beta)

    def to_json(self) -> dict:
        return {"nodes": [z.to_json() for z in self.nodes]}

    @classmethod
    def from_json(cls, obj: dict) -> "GluedCharge":
        return cls(tuple(CentralCharge.from_json(z) for z in obj["nodes"]))


def charge_from_json(obj: dict) -> CentralCharge | GluedCharge:
    return GluedCharge.from_json(obj) if "nodes" in obj else CentralCharge.from_json(obj)


def _coords(beta) -> tuple:
    return beta.coords if isinstance(beta, LatticeClass) else tuple(beta)


def evaluate(Z: CentralCharge | GluedCharge, beta) -> QQi:
    coords = _coords(beta)
    if len(coords) != Z.rank:
        raise ValueError(f"class of rank {len(coords)} does not match a charge of rank {Z.rank}")
    if isinstance(Z, GluedCharge):
        total = ZERO
        for node, block in zip(Z.nodes, Z.blocks(coords)):
            total = total + evaluate(node, block)
        return total
    return QQi(linalg.dot(Z.re, coords), linalg.dot(Z.im, coords))


def slope(Z, beta) -> Fraction | float:
    z = evaluate(Z, beta)
    if z.is_zero():
        raise ValueError("zero object class")
    if z.im == 0:
        return INF
    return -z.re / z.im


def phase(Z, beta) -> PhaseValue:
    z = evaluate(Z, beta)
    if not z.in_hbar():
        raise ValueError(f"not a heart class under Z: Z = {z}")
    return PhaseValue(z, 0)


def glue_charges(charges: Iterable[CentralCharge]) -> GluedCharge:
    charges = tuple(charges)
    if not charges:
        raise ValueError("cannot glue an empty list of charges")
    return GluedCharge(charges)


def alpha_node_charge(alpha) -> CentralCharge:
    """``Z(d, r) = -d - alpha*r + i*r`` on one copy of ``Z^2``."""
    return CentralCharge((-1, -frac(alpha)), (0, 1))


def alpha_chain_charge(alphas: Sequence) -> GluedCharge:
    return glue_charges(alpha_node_charge(a) for a in alphas)


def alpha_quiver_charge(alphas: Sequence) -> GluedCharge:
    """The same family restricted to rank-only classes: ``Z(S_j) = -alpha_j + i``."""
    return glue_charges(CentralCharge((-frac(a),), (1,)) for a in alphas)


# --- GL~+(2,R) ------------------------------------------------------------

def _apply(T, z: QQi) -> QQi:
    return QQi(T[0][0] * z.re + T[0][1] * z.im, T[1][0] * z.re + T[1][1] * z.im)


@dataclass(frozen=True)
class GLtildeElement:
    """A pair ``(T, f)`` with ``f = f_T + k``.

    ``f_T`` is the lift of ``T`` with ``f_T(0)`` in ``(-1, 1]``; ``k`` shifts
    every lifted phase by an integer.
    """

    T: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    k: int = 0

    def __post_init__(self):
        T = tuple(tuple(frac(x) for x in row) for row in self.T)
        if len(T) != 2 or any(len(r) != 2 for r in T):
            raise ValueError("T must be 2x2")
        if T[0][0] * T[1][1] - T[0][1] * T[1][0] <= 0:
            raise ValueError("det(T) must be positive")
        object.__setattr__(self, "T", T)

    @property
    def det(self) -> Fraction:
        T = self.T
        return T[0][0] * T[1][1] - T[0][1] * T[1][0]

    def T_inv(self):
        T, d = self.T, self.det
        return ((T[1][1] / d, -T[0][1] / d), (-T[1][0] / d, T[0][0] / d))

    def _base(self) -> PhaseValue:
        v = _apply(self.T, QQi(1, 0))
        return PhaseValue(v, 0) if v.in_hbar() else PhaseValue(-v, -1)

    def lift_T(self, phi: PhaseValue) -> PhaseValue:
        step = ccw(_apply(self.T, QQi(1, 0)), _apply(self.T, phi.z))
        return (self._base() + step).shifted(phi.k)

    def lift(self, phi: PhaseValue) -> PhaseValue:
        """``f(phi)``."""
        return self.lift_T(phi).shifted(self.k)

    def unlift(self, psi: PhaseValue) -> PhaseValue:
        """``f^{-1}(psi)``, computed exactly."""
        x = psi.shifted(-self.k)
        g = GLtildeElement(self.T_inv()).lift_T(x)
        diff = (x - self.lift_T(g)).as_integer()
        if diff is None or diff % 2:
            raise ArithmeticError("lift inversion failed to land on an even integer")
        return g.shifted(diff)

    def inverse(self) -> "GLtildeElement":
        zero = PhaseValue.integer(0)
        target = self.unlift(zero)
        got = GLtildeElement(self.T_inv()).lift_T(zero)
        k = (target - got).as_integer()
        return GLtildeElement(self.T_inv(), k)


@dataclass(frozen=True)
class SemistableRecord:
    label: str
    cls: LatticeClass
    phase: PhaseValue
    obj: Any = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {"label": self.label, "class": self.cls.to_json(), "phase": self.phase.to_json()}


@dataclass(frozen=True)
class StabilityData:
    """A charge together with recorded semistable classes and their phases."""

    charge: CentralCharge | GluedCharge
    records: tuple[SemistableRecord, ...] = ()

    def labels(self) -> set[str]:
        return {r.label for r in self.records}


def _transform_charge(Z, M):
    """Compose a charge with a real 2x2 matrix acting on ``C = R^2``."""
    if isinstance(Z, GluedCharge):
        return GluedCharge(tuple(_transform_charge(z, M) for z in Z.nodes))
    (a, b), (c, d) = M
    return CentralCharge(
        tuple(a * x + b * y for x, y in zip(Z.re, Z.im)),
        tuple(c * x + d * y for x, y in zip(Z.re, Z.im)),
    )


def act_gl(data: StabilityData, g: GLtildeElement) -> StabilityData:
    """Right action: ``Z' = T^{-1} Z`` and each recorded phase becomes ``f^{-1}`` of the old one."""
    charge = _transform_charge(data.charge, g.T_inv())
    records = tuple(replace(r, phase=g.unlift(r.phase)) for r in data.records)
    return StabilityData(charge, records)


def act_autoequivalence(data: StabilityData, phi, name: str = "Phi") -> StabilityData:
    """Left action of an autoequivalence with class map ``phi`` (integer, invertible over Z)."""
    M = linalg.to_matrix(phi)
    n = data.charge.rank
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError(f"class map must be {n}x{n}")
    if any(x.denominator != 1 for row in M for x in row) or abs(linalg.det(M)) != 1:
        raise ValueError("class map is not invertible over Z")
    Minv = linalg.inverse(M)
    flat = data.charge.flatten()
    re = linalg.matmul([list(flat.re)], Minv)[0]
    im = linalg.matmul([list(flat.im)], Minv)[0]
    charge = CentralCharge(tuple(re), tuple(im))
    records = []
    for r in data.records:
        img = linalg.matvec(M, [Fraction(c) for c in r.cls.coords])
        cls = LatticeClass(r.cls.kind, r.cls.n, tuple(int(x) for x in img))
        records.append(SemistableRecord(f"{name}({r.label})", cls, r.phase, r.obj))
    return StabilityData(charge, tuple(records))
