"""Numerical alpha-stability for chains of sheaves over a curve.

Only classes are handled here: ``(d_i, r_i)`` per node.  Candidate
destabilizers are enumerated inside user-supplied degree boxes, so walls
found are potential walls; every true wall inside the box is among them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .charge import INF, QQi, PhaseValue
from .lattice import LatticeClass
from .linalg import frac
from .walls import Wall, alpha_chain_family, walls_for_candidates


@dataclass(frozen=True)
class ChainClass:
    g: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(d), int(r)) for d, r in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.g < 0:
            raise ValueError("genus must be nonnegative")
        if any(r < 0 for _, r in pairs):
            raise ValueError("ranks must be nonnegative")

    @classmethod
    def of(cls, pairs: Sequence[Sequence[int]], g: int = 0) -> "ChainClass":
        return cls(g, tuple(tuple(p) for p in pairs))

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def degree(self) -> int:
        return sum(d for d, _ in self.pairs)

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.pairs)

    def is_heart_class(self) -> bool:
        return all(r > 0 or d >= 0 for d, r in self.pairs)

    def is_zero(self) -> bool:
        return all(d == 0 and r == 0 for d, r in self.pairs)

    def lattice(self) -> LatticeClass:
        return LatticeClass.chain(self.pairs)

    def __add__(self, other: "ChainClass") -> "ChainClass":
        if self.n != other.n:
            raise ValueError("chain classes of different lengths")
        return ChainClass(self.g, tuple((a + c, b + d) for (a, b), (c, d) in zip(self.pairs, other.pairs)))

    def to_json(self) -> dict:
        return {"g": self.g, "pairs": [list(p) for p in self.pairs]}

    @classmethod
    def from_json(cls, obj: dict) -> "ChainClass":
        return cls(int(obj.get("g", 0)), tuple(tuple(p) for p in obj["pairs"]))


def _check(alpha, beta: ChainClass):
    if len(alpha) != beta.n:
        raise ValueError(f"alpha has length {len(alpha)} but the chain has {beta.n} nodes")


def z_alpha(alpha: Sequence, beta: ChainClass) -> QQi:
    """``sum_j -d_j - alpha_j r_j + i r_j``."""
    _check(alpha, beta)
    alpha = [frac(a) for a in alpha]
    re = sum((-d - a * r for a, (d, r) in zip(alpha, beta.pairs)), Fraction(0))
    return QQi(re, beta.rank)


def mu_alpha(alpha: Sequence, beta: ChainClass) -> Fraction | float:
    _check(alpha, beta)
    if beta.rank == 0:
        return INF
    alpha = [frac(a) for a in alpha]
    return (beta.degree + sum((a * r for a, (_, r) in zip(alpha, beta.pairs)), Fraction(0))) / beta.rank


def phase_band(beta: ChainClass, alpha: Sequence | None = None) -> str:
    """``"phase-1"`` for pure torsion classes, otherwise ``"interior"`` (phase in ``(0, 1)``)."""
    return "phase-1" if beta.rank == 0 else "interior"


@dataclass
class TorsionVerdict:
    possible: bool
    note: str = ""

    def __bool__(self) -> bool:
        return self.possible


def torsion_free_necessary(beta: ChainClass, band: str | None = None) -> TorsionVerdict:
    """Necessary condition for a semistable class of phase in ``(0, 1)``.

    A node with ``r_i = 0`` and ``d_i > 0`` carries torsion; pushing that
    torsion to the last node gives a phase-1 subchain, which destabilizes
    as soon as some node has positive rank.
    """
    if not beta.is_heart_class():
        raise ValueError("not a heart class")
    band = band or phase_band(beta)
    if band == "phase-1" or beta.rank == 0:
        return TorsionVerdict(True, "phase-1 locus")
    torsion = [i + 1 for i, (d, r) in enumerate(beta.pairs) if r == 0 and d > 0]
    if torsion:
        return TorsionVerdict(False, f"torsion at node {torsion[0]} gives a phase-1 subchain")
    return TorsionVerdict(True)


def alpha_walls(beta: ChainClass, bounds: Sequence[tuple[int, int]]) -> list[Wall]:
    """Potential alpha-walls from every candidate subclass in the degree box.

    Candidates ``beta'`` have ``0 <= r'_i <= r_i`` and ``d'_i`` in
    ``bounds[i]``; they must be heart classes, nonzero and different from
    ``beta``.  The wall is ``mu_alpha(beta') = mu_alpha(beta)``, written as
    ``R * (d' + alpha.r') - R' * (d + alpha.r) = 0`` with ``R, R'`` the total ranks.
    """
    if len(bounds) != beta.n:
        raise ValueError("need one degree range per node")
    if any(lo > hi for lo, hi in bounds):
        raise ValueError("empty box")
    if beta.rank == 0:
        return []
    axes = []
    for (d, r), (lo, hi) in zip(beta.pairs, bounds):
        axes.append([(dd, rr) for rr in range(r + 1) for dd in range(lo, hi + 1)])
    cands = []
    for combo in itertools.product(*axes):
        sub = ChainClass(beta.g, combo)
        if sub.is_zero() or sub.pairs == beta.pairs or not sub.is_heart_class():
            continue
        cands.append([c for p in combo for c in p])
    family = alpha_chain_family(beta.n)
    return walls_for_candidates([c for p in beta.pairs for c in p], cands, family)


@dataclass
class SymPowerReport:
    phase: PhaseValue
    length: int
    model: str

    def to_json(self) -> dict:
        return {"phase": "1", "length": self.length, "model": self.model}


def sym_power_case(beta: ChainClass) -> SymPowerReport:
    """Pure torsion chains: phase 1, moduli modelled by ``Sym^{sum d_i}(C)``."""
    if any(r != 0 for _, r in beta.pairs):
        raise ValueError("sym_power_case needs all ranks zero")
    if beta.degree == 0:
        raise ValueError("zero class")
    if any(d < 0 for d, _ in beta.pairs):
        raise ValueError("torsion classes need nonnegative degrees")
    return SymPowerReport(PhaseValue.integer(1), beta.degree, f"Sym^{beta.degree}(C)")
