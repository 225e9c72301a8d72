"""Lattice classes, quadratic forms and the support-property checker."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .linalg import Matrix, frac


@dataclass(frozen=True)
class LatticeClass:
    """An integer class in a numerical Grothendieck lattice.

    ``kind="quiver"`` holds a dimension vector of length ``n``; ``kind="chain"``
    holds ``(d_1, r_1, ..., d_n, r_n)`` for a chain over a curve.
    """

    kind: str
    n: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("quiver", "chain"):
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        want = self.n if self.kind == "quiver" else 2 * self.n
        if len(self.coords) != want:
            raise ValueError(f"{self.kind} class with n={self.n} needs {want} coordinates, got {len(self.coords)}")

    @classmethod
    def quiver(cls, coords: Iterable[int]) -> "LatticeClass":
        coords = tuple(coords)
        return cls("quiver", len(coords), coords)

    @classmethod
    def chain(cls, pairs: Iterable[tuple[int, int]]) -> "LatticeClass":
        flat = [c for pair in pairs for c in pair]
        return cls("chain", len(flat) // 2, tuple(flat))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def pairs(self) -> list[tuple[int, int]]:
        if self.kind != "chain":
            raise ValueError("pairs() only makes sense for chain classes")
        return [(self.coords[2 * i], self.coords[2 * i + 1]) for i in range(self.n)]

    def is_heart_class(self) -> bool:
        if self.kind == "quiver":
            return all(c >= 0 for c in self.coords)
        return all(r >= 0 and (r > 0 or d >= 0) for d, r in self.pairs())

    def __add__(self, other: "LatticeClass") -> "LatticeClass":
        self._check(other)
        return LatticeClass(self.kind, self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeClass") -> "LatticeClass":
        self._check(other)
        return LatticeClass(self.kind, self.n, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeClass":
        return LatticeClass(self.kind, self.n, tuple(-a for a in self.coords))

    def _check(self, other):
        if (self.kind, self.n) != (other.kind, other.n):
            raise ValueError("classes live in different lattices")

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "coords": list(self.coords)}

    @classmethod
    def from_json(cls, obj: dict) -> "LatticeClass":
        try:
            return cls(obj["kind"], int(obj["n"]), tuple(obj["coords"]))
        except KeyError as exc:
            raise ValueError(f"lattice class is missing field {exc}") from None


@dataclass(frozen=True)
class QuadForm:
    """Symmetric rational bilinear form on the real span of the lattice."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(frac(x) for x in row) for row in self.matrix)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("quadratic form matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"quadratic form is not symmetric at ({i},{j})")
        object.__setattr__(self, "matrix", rows)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __call__(self, u: Sequence, v: Sequence) -> Fraction:
        return linalg.dot(u, linalg.matvec([list(r) for r in self.matrix], [frac(x) for x in v]))

    def gram(self, basis: Sequence[Sequence[Fraction]]) -> Matrix:
        return [[self(u, v) for v in basis] for u in basis]

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.matrix]

    @classmethod
    def from_json(cls, rows) -> "QuadForm":
        if isinstance(rows, dict):
            rows = rows["matrix"]
        return cls(tuple(tuple(frac(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int, scale=1) -> "QuadForm":
        return cls(tuple(tuple(Fraction(scale) if i == j else Fraction(0) for j in range(n)) for i in range(n)))


def leading_minors(m: Matrix) -> list[Fraction]:
    return [linalg.det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def is_negative_definite(m: Matrix) -> bool:
    """Sylvester's criterion on ``-m``: every leading principal minor of ``-m`` is positive.

    The empty form is negative definite vacuously.
    """
    neg = [[-x for x in row] for row in m]
    return all(d > 0 for d in leading_minors(neg))


def is_positive_definite(m: Matrix) -> bool:
    return all(d > 0 for d in leading_minors(m))


def _charge_rows(Z) -> tuple[list[Fraction], list[Fraction]]:
    flat = Z.flatten() if hasattr(Z, "flatten") else Z
    re, im = list(flat.re), list(flat.im)
    if len(re) != len(im):
        raise ValueError("central charge rows differ in length")
    return re, im


def kernel_basis(Z) -> list[list[Fraction]]:
    """Rational basis of ``ker Z``, each vector primitive with positive leading entry."""
    re, im = _charge_rows(Z)
    return [linalg.primitive(v) for v in linalg.nullspace([re, im], len(re))]


@dataclass
class SupportReport:
    kernel_negdef: bool
    violating_samples: list[LatticeClass]
    kernel: list[list[Fraction]]

    def to_json(self) -> dict:
        return {
            "kernel_negdef": self.kernel_negdef,
            "violating_samples": [s.to_json() for s in self.violating_samples],
            "kernel_basis": [[str(x) for x in v] for v in self.kernel],
        }


def check_support_property(Z, Q: QuadForm, samples: Iterable[LatticeClass] = (),
                           basis: Sequence[Sequence[Fraction]] | None = None) -> SupportReport:
    """Test a user-supplied form ``Q`` against ``Z``.

    ``kernel_negdef`` is decided by Sylvester's criterion on the Gram matrix of
    ``Q`` in a kernel basis; ``basis`` overrides the computed kernel basis.
    Samples with ``Q(b, b) < 0`` are reported as violating.
    """
    re, _ = _charge_rows(Z)
    if Q.rank != len(re):
        raise ValueError(f"form has rank {Q.rank} but the charge has {len(re)} columns")
    kernel = kernel_basis(Z) if basis is None else [[frac(x) for x in v] for v in basis]
    negdef = is_negative_definite(Q.gram(kernel))
    bad = []
    for s in samples:
        if s.rank != Q.rank:
            raise ValueError(f"sample {s.coords} has the wrong rank")
        if Q(s.coords, s.coords) < 0:
            bad.append(s)
    return SupportReport(negdef, bad, kernel)
