"""Semiorthogonal decompositions at the level of classes.

A record lists components (each spanned by ``rank`` generator classes) and the
Euler pairing ``gram[i][j] = chi(g_i, g_j)`` between all generators.  Rows of
``classes`` give the generators in some fixed ambient basis; mutations act on
them by an integer change of generators ``P`` and on the Gram matrix by
``P G P^T``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from . import linalg
from .linalg import Matrix


@dataclass(frozen=True)
class Component:
    label: str
    rank: int


@dataclass
class SODRecord:
    components: list[Component]
    gram: Matrix
    classes: Matrix | None = None

    def __post_init__(self):
        self.components = [c if isinstance(c, Component) else Component(*c) for c in self.components]
        self.gram = linalg.to_matrix(self.gram)
        size = self.size
        if any(c.rank < 1 for c in self.components):
            raise ValueError("every component needs at least one generator")
        if len(self.gram) != size or any(len(r) != size for r in self.gram):
            raise ValueError(f"gram must be {size}x{size}")
        if self.classes is None:
            self.classes = linalg.identity(size)
        else:
            self.classes = linalg.to_matrix(self.classes)
            if len(self.classes) != size:
                raise ValueError("need one class per generator")

    @property
    def size(self) -> int:
        return sum(c.rank for c in self.components)

    def block(self, k: int) -> range:
        start = sum(c.rank for c in self.components[:k])
        return range(start, start + self.components[k].rank)

    def sub_gram(self, rows: range, cols: range) -> Matrix:
        return [[self.gram[i][j] for j in cols] for i in rows]

    def to_json(self) -> dict:
        return {
            "components": [{"label": c.label, "rank": c.rank} for c in self.components],
            "gram": [[str(x) for x in row] for row in self.gram],
            "classes": [[str(x) for x in row] for row in self.classes],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SODRecord":
        comps = [Component(c["label"], int(c.get("rank", 1))) for c in obj["components"]]
        return cls(comps, obj["gram"], obj.get("classes"))


def check_semiorthogonal(record: SODRecord) -> bool:
    """No pairing from a later component back to an earlier one: the gram is block upper triangular."""
    for i in range(len(record.components)):
        for j in range(i):
            if any(x != 0 for row in record.sub_gram(record.block(i), record.block(j)) for x in row):
                return False
    return True


def _unimodular_block(record: SODRecord, k: int) -> Matrix:
    g = record.sub_gram(record.block(k), record.block(k))
    if abs(linalg.det(g)) != 1:
        raise ValueError(f"component {record.components[k].label!r} has a non-unimodular self-pairing block")
    return g


def _apply(record: SODRecord, order: list[int], rows: dict[int, list[Fraction]], comps: list[Component]) -> SODRecord:
    """New generators: row ``rows[i]`` (coefficients over old generators) for old generator ``i``, in ``order``."""
    size = record.size
    P = []
    for i in order:
        P.append(rows.get(i) or [Fraction(int(j == i)) for j in range(size)])
    gram = linalg.matmul(linalg.matmul(P, record.gram), linalg.transpose(P))
    classes = linalg.matmul(P, record.classes)
    return SODRecord(comps, gram, classes)


def _wrap(label: str, outer: str, inner: str, by: str) -> str:
    """Label of ``outer_by(label)``, cancelling an ``inner_by(..)`` it undoes."""
    undo = f"{inner}_{{{by}}}("
    if label.startswith(undo) and label.endswith(")"):
        return label[len(undo):-1]
    return f"{outer}_{{{by}}}({label})"


def left_mutate(record: SODRecord, k: int) -> SODRecord:
    """``<.., A, B, ..>  ->  <.., L_A B, A, ..>`` with ``A`` the component at ``k``.

    Each generator ``b`` of ``B`` becomes ``b - sum c_i a_i`` where
    ``G_A c = (chi(a_j, b))_j``, so the new component is left-orthogonal to ``A``.
    """
    if not 0 <= k < len(record.components) - 1:
        raise IndexError(f"no adjacent pair at index {k}")
    gA = _unimodular_block(record, k)
    A, B = record.block(k), record.block(k + 1)
    inv = linalg.inverse(gA)
    rows = {}
    for b in B:
        v = [record.gram[a][b] for a in A]
        c = linalg.matvec(inv, v)
        row = [Fraction(int(j == b)) for j in range(record.size)]
        for ci, a in zip(c, A):
            row[a] -= ci
        rows[b] = row
    order = [i for i in range(record.size) if i < A.start] + list(B) + list(A) + [i for i in range(B.stop, record.size)]
    ca, cb = record.components[k], record.components[k + 1]
    new_b = Component(_wrap(cb.label, "L", "R", ca.label), cb.rank)
    comps = record.components[:k] + [new_b, ca] + record.components[k + 2:]
    return _apply(record, order, rows, comps)


def right_mutate(record: SODRecord, k: int) -> SODRecord:
    """``<.., A, B, ..>  ->  <.., B, R_B A, ..>`` with ``A`` the component at ``k``.

    Each generator ``a`` becomes ``a - sum d_i b_i`` where
    ``G_B^T d = (chi(a, b_j))_j``.
    """
    if not 0 <= k < len(record.components) - 1:
        raise IndexError(f"no adjacent pair at index {k}")
    gB = _unimodular_block(record, k + 1)
    A, B = record.block(k), record.block(k + 1)
    inv_t = linalg.inverse(linalg.transpose(gB))
    rows = {}
    for a in A:
        w = [record.gram[a][b] for b in B]
        d = linalg.matvec(inv_t, w)
        row = [Fraction(int(j == a)) for j in range(record.size)]
        for di, b in zip(d, B):
            row[b] -= di
        rows[a] = row
    order = [i for i in range(record.size) if i < A.start] + list(B) + list(A) + [i for i in range(B.stop, record.size)]
    ca, cb = record.components[k], record.components[k + 1]
    new_a = Component(_wrap(ca.label, "R", "L", cb.label), ca.rank)
    comps = record.components[:k] + [cb, new_a] + record.components[k + 2:]
    return _apply(record, order, rows, comps)


def euler_pairing(classes: Matrix, chi: Matrix) -> Matrix:
    """Gram matrix ``classes * chi * classes^T`` for classes given in an ambient basis."""
    classes, chi = linalg.to_matrix(classes), linalg.to_matrix(chi)
    return linalg.matmul(linalg.matmul(classes, chi), linalg.transpose(classes))


def complement_component_count(n: int, ranks: Sequence[int] = ()) -> int:
    """Number of copies of ``D^b(X)`` in the complement of the chain category.

    The tower has ``t(1) = 2`` and ``t(j) = t(j-1) * rk(K_j)`` components;
    ``ranks`` lists ``rk(K_2), ..., rk(K_n)``.  The result is ``t(n) - n``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    ranks = list(ranks)
    if len(ranks) != n - 1:
        raise ValueError(f"need {n - 1} ranks rk(K_2)..rk(K_n), got {len(ranks)}")
    if any(int(r) != r or r < 2 for r in ranks):
        raise ValueError("ranks of K_j must be integers >= 2")
    return 2 * prod(int(r) for r in ranks) - n
