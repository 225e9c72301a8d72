"""Chains of vector spaces: representations of the linear A_n quiver ``1 -> 2 -> ... -> n``.

This is the point-case model of the chain category.  Everything is decided
exactly: interval decomposition, Hom/Ext between interval sums, which
dimension vectors occur as subrepresentations, semistability, HN
filtrations, and membership in glued hearts.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Iterator, Sequence

from . import linalg
from .charge import CentralCharge, GluedCharge, PhaseValue, QQi, phase
from .lattice import LatticeClass
from .linalg import frac


@dataclass(frozen=True)
class ChainRep:
    """``V_1 -> V_2 -> ... -> V_n``; ``maps[i]`` has shape ``dims[i+1] x dims[i]``."""

    n: int
    dims: tuple[int, ...]
    maps: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        maps = tuple(tuple(tuple(frac(x) for x in row) for row in m) for m in self.maps)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", maps)
        if self.n < 1 or len(dims) != self.n:
            raise ValueError(f"expected {self.n} node dimensions, got {len(dims)}")
        if any(d < 0 for d in dims):
            raise ValueError("node dimensions must be nonnegative")
        if len(maps) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} maps, got {len(maps)}")
        for i, m in enumerate(maps):
            if len(m) != dims[i + 1] or any(len(row) != dims[i] for row in m):
                raise ValueError(f"map {i + 1} must have shape {dims[i + 1]}x{dims[i]}")

    @classmethod
    def from_lists(cls, dims: Sequence[int], maps: Sequence) -> "ChainRep":
        return cls(len(dims), tuple(dims), tuple(tuple(tuple(r) for r in m) for m in maps))

    @property
    def cls(self) -> LatticeClass:
        return LatticeClass.quiver(self.dims)

    def matrix(self, i: int) -> linalg.Matrix:
        return [list(row) for row in self.maps[i]]

    def composite(self, i: int, j: int) -> linalg.Matrix:
        """Composite map from node ``i`` to node ``j`` (0-based, ``i <= j``)."""
        m = linalg.identity(self.dims[i])
        for p in range(i, j):
            if self.dims[i] == 0 or self.dims[p + 1] == 0:
                return [[Fraction(0)] * self.dims[i] for _ in range(self.dims[j])]
            m = linalg.matmul(self.matrix(p), m, inner=self.dims[p])
        return m

    @cached_property
    def rank_table(self) -> tuple[tuple[int, ...], ...]:
        n = self.n
        table = [[0] * n for _ in range(n)]
        for i in range(n):
            table[i][i] = self.dims[i]
            m = linalg.identity(self.dims[i])
            for j in range(i + 1, n):
                if self.dims[i] == 0 or self.dims[j] == 0:
                    m = [[Fraction(0)] * self.dims[i] for _ in range(self.dims[j])]
                else:
                    m = linalg.matmul(self.matrix(j - 1), m, inner=self.dims[j - 1])
                table[i][j] = linalg.rank(m)
        return tuple(tuple(r) for r in table)

    def kernel_table(self) -> tuple[tuple[int, ...], ...]:
        """``[i][j]`` is ``dim ker(V_i -> V_j)`` for ``i <= j``."""
        r = self.rank_table
        return tuple(tuple(self.dims[i] - r[i][j] if j >= i else 0 for j in range(self.n)) for i in range(self.n))

    def to_json(self) -> dict:
        return {"n": self.n, "dims": list(self.dims),
                "maps": [[[str(x) for x in row] for row in m] for m in self.maps]}

    @classmethod
    def from_json(cls, obj: dict) -> "ChainRep":
        try:
            dims = [int(d) for d in obj["dims"]]
            n = int(obj.get("n", len(dims)))
            maps = obj["maps"]
        except KeyError as exc:
            raise ValueError(f"chain representation is missing field {exc}") from None
        return cls(n, tuple(dims), tuple(tuple(tuple(r) for r in m) for m in maps))


@dataclass(frozen=True)
class IntervalSum:
    """A direct sum of shifted interval modules ``M[a,b][shift]`` (1-based nodes)."""

    n: int
    terms: tuple[tuple[int, int, int, int], ...] = ()

    def __post_init__(self):
        counts: Counter = Counter()
        for t in self.terms:
            a, b, s, m = (tuple(t) + (1,))[:4] if len(t) == 3 else tuple(t)
            if not 1 <= a <= b <= self.n:
                raise ValueError(f"interval [{a},{b}] does not fit in A_{self.n}")
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
            if m:
                counts[(int(a), int(b), int(s))] += int(m)
        object.__setattr__(self, "terms", tuple(sorted((a, b, s, m) for (a, b, s), m in counts.items())))

    @classmethod
    def of(cls, n: int, intervals: Iterable[tuple]) -> "IntervalSum":
        """Build from ``(a, b)`` or ``(a, b, shift)`` tuples, one per summand."""
        out = []
        for iv in intervals:
            a, b = iv[0], iv[1]
            s = iv[2] if len(iv) > 2 else 0
            out.append((a, b, s, 1))
        return cls(n, tuple(out))

    @classmethod
    def simple(cls, n: int, j: int, mult: int = 1, shift: int = 0) -> "IntervalSum":
        return cls(n, ((j, j, shift, mult),))

    def __add__(self, other: "IntervalSum") -> "IntervalSum":
        if self.n != other.n:
            raise ValueError("direct sum of objects over different quivers")
        return IntervalSum(self.n, self.terms + other.terms)

    def shift(self, k: int) -> "IntervalSum":
        return IntervalSum(self.n, tuple((a, b, s + k, m) for a, b, s, m in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def intervals(self) -> list[tuple[int, int, int]]:
        return [(a, b, s) for a, b, s, m in self.terms for _ in range(m)]

    def shifts(self) -> set[int]:
        return {s for _, _, s, _ in self.terms}

    @property
    def cls(self) -> LatticeClass:
        v = [0] * self.n
        for a, b, s, m in self.terms:
            sign = -1 if s % 2 else 1
            for j in range(a - 1, b):
                v[j] += sign * m
        return LatticeClass.quiver(v)

    def kernel_table(self) -> tuple[tuple[int, ...], ...]:
        """Same as :meth:`ChainRep.kernel_table` for the unshifted realization."""
        n = self.n
        table = [[0] * n for _ in range(n)]
        for a, b, _, m in self.terms:
            for i in range(a - 1, b):
                for j in range(b, n):
                    table[i][j] += m
        return tuple(tuple(r) for r in table)

    def to_rep(self) -> ChainRep:
        """Block-diagonal realization with identity maps along each interval."""
        if any(s != 0 for s in self.shifts()):
            raise ValueError("only unshifted interval sums are representations")
        ivs = self.intervals()
        dims = [sum(1 for a, b, _ in ivs if a <= j + 1 <= b) for j in range(self.n)]
        index = [[t for t, (a, b, _) in enumerate(ivs) if a <= j + 1 <= b] for j in range(self.n)]
        maps = []
        for j in range(self.n - 1):
            m = [[Fraction(0)] * dims[j] for _ in range(dims[j + 1])]
            for col, t in enumerate(index[j]):
                if t in index[j + 1]:
                    m[index[j + 1].index(t)][col] = Fraction(1)
            maps.append(m)
        return ChainRep.from_lists(dims, maps)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for a, b, s, m in self.terms:
            piece = f"M[{a},{b}]" + (f"[{s}]" if s else "")
            parts.append(piece if m == 1 else f"{m}*{piece}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"n": self.n, "terms": [{"a": a, "b": b, "shift": s, "mult": m} for a, b, s, m in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> "IntervalSum":
        terms = tuple((t["a"], t["b"], t.get("shift", 0), t.get("mult", 1)) for t in obj["terms"])
        n = obj.get("n") or max((t[1] for t in terms), default=1)
        return cls(int(n), terms)


def _as_rep_data(obj) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Dimension vector and kernel table of a ChainRep or an unshifted-up-to-a-uniform-shift IntervalSum."""
    if isinstance(obj, ChainRep):
        return obj.dims, obj.kernel_table()
    if isinstance(obj, IntervalSum):
        if len(obj.shifts()) > 1:
            raise ValueError("object is not a shift of a heart object")
        plain = obj.shift(-next(iter(obj.shifts()))) if obj.terms else obj
        return tuple(plain.cls.coords), plain.kernel_table()
    raise TypeError(f"expected ChainRep or IntervalSum, got {type(obj).__name__}")


# --- decomposition ---------------------------------------------------------

def decompose(rep: ChainRep) -> IntervalSum:
    """Interval multiplicities from ranks of composite maps.

    ``mult M[a,b] = r(a,b) - r(a-1,b) - r(a,b+1) + r(a-1,b+1)``, with
    ``r(i,i) = dim V_i`` and out-of-range ranks zero.
    """
    n, r = rep.n, rep.rank_table

    def R(i, j):
        if i < 0 or j >= n:
            return 0
        return r[i][j]

    terms = []
    for a in range(n):
        for b in range(a, n):
            m = R(a, b) - R(a - 1, b) - R(a, b + 1) + R(a - 1, b + 1)
            if m < 0:
                raise ArithmeticError(f"negative interval multiplicity at [{a + 1},{b + 1}]")
            if m:
                terms.append((a + 1, b + 1, 0, m))
    return IntervalSum(n, tuple(terms))


@dataclass
class Bar:
    """One interval summand with explicit vectors ``vecs[p]`` at nodes ``a..b`` (1-based)."""

    a: int
    b: int
    vecs: dict[int, list[Fraction]]


def interval_basis(rep: ChainRep) -> list[Bar]:
    """Explicit interval basis: each map sends a bar vector to the next one or to zero.

    Bars are swept left to right; when images become dependent the youngest
    bar dies after being corrected by older ones, which keeps every earlier
    node consistent.
    """
    n = rep.n
    alive: list[Bar] = []
    done: list[Bar] = []

    def unit(d, k):
        return [Fraction(int(i == k)) for i in range(d)]

    for k in range(rep.dims[0]):
        alive.append(Bar(1, 1, {1: unit(rep.dims[0], k)}))
    for i in range(1, n):  # transition node i -> i+1 (1-based)
        A = rep.matrix(i - 1)
        d_next = rep.dims[i]
        alive.sort(key=lambda bar: bar.a)
        kept: list[tuple[Bar, list[Fraction]]] = []
        survivors: list[Bar] = []
        for bar in alive:
            w = linalg.matvec(A, bar.vecs[i]) if d_next else []
            coeffs = _solve_in_span([img for _, img in kept], w, d_next)
            if coeffs is None:
                kept.append((bar, w))
                survivors.append(bar)
                continue
            for (older, _), c in zip(kept, coeffs):
                if c:
                    for p in range(bar.a, i + 1):
                        bar.vecs[p] = [x - c * y for x, y in zip(bar.vecs[p], older.vecs[p])]
            bar.b = i
            done.append(bar)
        for bar, w in kept:
            bar.vecs[i + 1] = w
            bar.b = i + 1
        span = [w for _, w in kept]
        for k in range(d_next):
            e = unit(d_next, k)
            if _solve_in_span(span, e, d_next) is None:
                span.append(e)
                survivors.append(Bar(i + 1, i + 1, {i + 1: e}))
        alive = survivors
    done.extend(alive)
    done.sort(key=lambda bar: (bar.a, bar.b))
    return done


def _solve_in_span(vectors: list[list[Fraction]], w: list[Fraction], dim: int) -> list[Fraction] | None:
    """Coefficients expressing ``w`` in independent ``vectors``, or ``None`` if outside their span."""
    if dim == 0 or all(x == 0 for x in w):
        return [Fraction(0)] * len(vectors)
    if not vectors:
        return None
    k = len(vectors)
    aug = [[vectors[c][r] for c in range(k)] + [w[r]] for r in range(dim)]
    red, pivots = linalg.rref(aug)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for row, pc in zip(red, pivots):
        coeffs[pc] = row[k]
    return coeffs


# --- homological algebra ---------------------------------------------------

def euler_form(u: Sequence[int], v: Sequence[int]) -> int:
    """``chi(u, v) = sum u_i v_i - sum u_i v_{i+1}`` for the orientation ``i -> i+1``."""
    return sum(a * b for a, b in zip(u, v)) - sum(u[i] * v[i + 1] for i in range(len(u) - 1))


def _hom_intervals(a, b, c, d) -> int:
    return 1 if c <= a <= d <= b else 0


def _ext_intervals(a, b, c, d, n) -> int:
    u = [1 if a <= i <= b else 0 for i in range(1, n + 1)]
    v = [1 if c <= i <= d else 0 for i in range(1, n + 1)]
    return _hom_intervals(a, b, c, d) - euler_form(u, v)


def hom_dim(A: IntervalSum, B: IntervalSum) -> int:
    """``dim Hom(A, B)`` in the derived category (the category is hereditary)."""
    total = 0
    for a, b, s, m in A.terms:
        for c, d, t, k in B.terms:
            deg = t - s
            if deg == 0:
                total += m * k * _hom_intervals(a, b, c, d)
            elif deg == 1:
                total += m * k * _ext_intervals(a, b, c, d, A.n)
    return total


def ext1_dim(A: IntervalSum, B: IntervalSum) -> int:
    return hom_dim(A, B.shift(1))


# --- subobjects --------------------------------------------------------------

def _check_box(dims, u):
    if len(u) != len(dims) or any(not 0 <= x <= d for x, d in zip(u, dims)):
        raise ValueError(f"subclass {tuple(u)} is outside the box 0..{tuple(dims)}")


def _feasible(dims, ker, u) -> bool:
    n = len(dims)
    return all(u[i] <= u[j] + ker[i][j] for i in range(n) for j in range(i + 1, n))


def subclass_feasible(rep, u) -> bool:
    """Whether ``rep`` has a subrepresentation of dimension vector ``u``.

    Rank criterion: ``u_i <= u_j + dim ker(V_i -> V_j)`` for all ``i <= j``.
    """
    dims, ker = _as_rep_data(rep)
    u = tuple(u.coords if isinstance(u, LatticeClass) else u)
    _check_box(dims, u)
    return _feasible(dims, ker, u)


def feasible_subclasses(rep) -> Iterator[tuple[int, ...]]:
    """All feasible subclasses (including 0 and the full class), lexicographic order."""
    dims, ker = _as_rep_data(rep)
    yield from _feasible_iter(dims, ker)


def _feasible_iter(dims, ker) -> Iterator[tuple[int, ...]]:
    n = len(dims)
    u = [0] * n

    def rec(j):
        if j == n:
            yield tuple(u)
            return
        lo = max([0] + [u[i] - ker[i][j] for i in range(j)])
        for x in range(lo, dims[j] + 1):
            u[j] = x
            yield from rec(j + 1)

    yield from rec(0)


def realize_subclass(bars: Sequence[tuple[int, int]], u: Sequence[int], n: int) -> list[int | None] | None:
    """Choose sub-intervals ``[c, e]`` inside bars ``[a, e]`` adding up to ``u``.

    Greedy right-to-left sweep; at each node the bars reaching furthest left
    are kept.  Returns the cut ``c`` per bar (``None`` = unused) or ``None``
    when no such choice exists.
    """
    cut: list[int | None] = [None] * len(bars)
    active: list[int] = []
    for j in range(n, 0, -1):
        pool = [t for t in active if bars[t][0] <= j]
        pool += [t for t, (a, e) in enumerate(bars) if e == j and cut[t] is None and t not in active]
        need = u[j - 1]
        if len(pool) < need:
            return None
        pool.sort(key=lambda t: (bars[t][0], t))
        active = pool[:need]
        for t in active:
            cut[t] = j
    return cut


# --- semistability -----------------------------------------------------------

def _int_rows(Z, n: int) -> tuple[list[int], list[int]]:
    """Charge rows scaled by a positive integer; phases are unchanged."""
    flat = Z.flatten()
    if flat.rank != n:
        raise ValueError(f"charge of rank {flat.rank} on a quiver with {n} nodes")
    den = 1
    for x in flat.re + flat.im:
        den = lcm(den, x.denominator)
    return [int(x * den) for x in flat.re], [int(x * den) for x in flat.im]


def _check_heart(re, im, dims):
    for j, d in enumerate(dims):
        if d and not (im[j] > 0 or (im[j] == 0 and re[j] < 0)):
            raise ValueError(f"not a heart class under Z: Z(S_{j + 1}) = {re[j]}+{im[j]}i (scaled)")


def _cmp(re, im, u, v) -> int:
    """Sign of ``phase(u) - phase(v)`` for classes with values in the upper half plane."""
    ur = sum(a * b for a, b in zip(re, u))
    ui = sum(a * b for a, b in zip(im, u))
    vr = sum(a * b for a, b in zip(re, v))
    vi = sum(a * b for a, b in zip(im, v))
    c = ur * vi - ui * vr
    return (c < 0) - (c > 0)


@dataclass
class SemistabilityResult:
    verdict: bool
    certificate: LatticeClass | None
    stable: bool

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self) -> dict:
        return {"semistable": self.verdict, "stable": self.stable,
                "certificate": None if self.certificate is None else self.certificate.to_json()}


def is_semistable(rep, Z) -> SemistabilityResult:
    """Exhaustive check over feasible proper nonzero subclasses."""
    dims, ker = _as_rep_data(rep)
    if not any(dims):
        raise ValueError("the zero representation has no phase")
    re, im = _int_rows(Z, len(dims))
    _check_heart(re, im, dims)
    best, stable = None, True
    for u in _feasible_iter(dims, ker):
        if not any(u) or u == dims:
            continue
        c = _cmp(re, im, u, dims)
        if c >= 0:
            stable = False
        if c > 0 and (best is None or _cmp(re, im, u, best) > 0):
            best = u
    cert = None if best is None else LatticeClass.quiver(best)
    return SemistabilityResult(best is None, cert, stable and best is None)


@dataclass
class HNFactor:
    cls: LatticeClass
    phase: PhaseValue
    witness: IntervalSum

    def to_json(self) -> dict:
        return {"class": self.cls.to_json(), "phase": self.phase.to_json(), "witness": self.witness.to_json()}


@dataclass
class HNResult:
    factors: list[HNFactor]
    # flag[k][p]: basis of the k-th filtration step at node p (0-based)
    flag: list[list[list[list[Fraction]]]] = field(default_factory=list)

    def type(self) -> tuple[tuple[int, ...], ...]:
        return tuple(f.cls.coords for f in self.factors)

    def to_json(self) -> dict:
        return {
            "factors": [f.to_json() for f in self.factors],
            "flag_dims": [[len(node) for node in step] for step in self.flag],
        }


def maximal_destabilizing_class(rep, Z) -> tuple[int, ...]:
    """Feasible nonzero subclass of maximal phase, coordinatewise largest among those."""
    dims, ker = _as_rep_data(rep)
    re, im = _int_rows(Z, len(dims))
    _check_heart(re, im, dims)
    top: list[tuple[int, ...]] = []
    for u in _feasible_iter(dims, ker):
        if not any(u):
            continue
        if not top:
            top = [u]
            continue
        c = _cmp(re, im, u, top[0])
        if c > 0:
            top = [u]
        elif c == 0:
            top.append(u)
    join = tuple(max(col) for col in zip(*top))
    if join not in top:
        raise ArithmeticError(f"maximal-phase subclasses {top} have no feasible join")
    return join


def hn_filtration(rep, Z) -> HNResult:
    """HN filtration with explicit subspace flag.

    Works on an interval basis of ``rep``: every step cuts each bar from the
    right, so all filtration steps are spans of bar vectors.
    """
    if isinstance(rep, IntervalSum):
        rep = rep.to_rep()
    if not any(rep.dims):
        raise ValueError("the zero representation has no HN filtration")
    n = rep.n
    bars = interval_basis(rep)
    tops = [bar.b for bar in bars]
    factors: list[HNFactor] = []
    flag = []
    while any(e >= bar.a for e, bar in zip(tops, bars)):
        live = [t for t, bar in enumerate(bars) if tops[t] >= bar.a]
        quotient = IntervalSum.of(n, [(bars[t].a, tops[t]) for t in live])
        u = maximal_destabilizing_class(quotient, Z)
        cuts = realize_subclass([(bars[t].a, tops[t]) for t in live], u, n)
        if cuts is None:
            raise ArithmeticError(f"feasible class {u} has no interval realization in {quotient}")
        pieces = []
        for t, c in zip(live, cuts):
            if c is not None:
                pieces.append((c, tops[t]))
                tops[t] = c - 1
        witness = IntervalSum.of(n, pieces)
        factors.append(HNFactor(LatticeClass.quiver(u), phase(Z, u), witness))
        step = [[bar.vecs[p] for t, bar in enumerate(bars) if tops[t] < p <= bar.b] for p in range(1, n + 1)]
        flag.append(step)
    return HNResult(factors, flag)


# --- glued hearts ------------------------------------------------------------

def node_heart_object(n: int, j: int, m_j: int, mult: int = 1) -> IntervalSum:
    """The node-``j`` heart object ``S_j`` placed in cohomological degree ``m_j``."""
    return IntervalSum.simple(n, j, mult, shift=-m_j)


def gluing_condition_holds(m: Sequence[int]) -> bool:
    """``Hom^{<=0}(i_l A_l, i_j A_j) = 0`` for all ``l < j``, checked with :func:`hom_dim`."""
    n = len(m)
    for l in range(1, n + 1):
        for j in range(l + 1, n + 1):
            X = node_heart_object(n, l, m[l - 1])
            Y = node_heart_object(n, j, m[j - 1])
            # Hom(X, Y[p]) can only be nonzero for p in {d, d+1}
            d = m[j - 1] - m[l - 1]
            for p in range(d - 1, min(0, d + 2) + 1):
                if p <= 0 and hom_dim(X, Y.shift(p)):
                    return False
    return True


@dataclass
class ShiftVectorReport:
    n: int
    constraint: str
    vectors: list[tuple[int, ...]]

    def to_json(self) -> dict:
        return {"n": self.n, "constraint": self.constraint, "vectors": [list(v) for v in self.vectors]}


def glued_heart_shift_vectors(n: int, box: tuple[int, int] | Sequence[tuple[int, int]] = (0, 1)) -> ShiftVectorReport:
    """Shift vectors whose node hearts glue, enumerated inside ``box``.

    ``m_j`` is the cohomological degree of the node-``j`` heart, so the node
    heart is ``Vec`` placed at ``S_j[-m_j]``.
    """
    if n < 1:
        raise ValueError("need at least one node")
    ranges = [box] * n if isinstance(box[0], int) else list(box)
    if len(ranges) != n:
        raise ValueError("box needs one range per node")
    vecs = [v for v in itertools.product(*[range(lo, hi + 1) for lo, hi in ranges]) if gluing_condition_holds(v)]
    constraint = " <= ".join(f"m{j}" for j in range(1, n + 1))
    return ShiftVectorReport(n, constraint, vecs)


@dataclass
class Triangle:
    node: int
    sub: IntervalSum
    total: IntervalSum
    cone: IntervalSum

    def to_json(self) -> dict:
        return {"node": self.node, "sub": self.sub.to_json(), "total": self.total.to_json(),
                "cone": self.cone.to_json(), "cone_class": self.cone.cls.to_json()}


def gluing_filtration(obj: IntervalSum, m: Sequence[int]) -> list[Triangle]:
    """Filtration triangles ``E_{k-1} -> E_k -> A_{n-k+1}`` of a glued-heart object.

    ``E_k`` keeps the part of ``obj`` supported on nodes ``>= n-k+1``; the
    cone is the node component, concentrated in degree ``m_j``.
    """
    n = obj.n
    if len(m) != n:
        raise ValueError(f"need {n} shifts")
    if not gluing_condition_holds(m):
        raise ValueError(f"shift vector {tuple(m)} does not satisfy the gluing condition")
    for a, b, s, _ in obj.terms:
        for j in range(a, b + 1):
            if m[j - 1] != -s:
                raise ValueError(f"object is not in the glued heart: node {j} component sits in degree {-s}, "
                                 f"heart needs degree {m[j - 1]}")

    def truncate(t):
        return IntervalSum(n, tuple((max(a, t), b, s, k) for a, b, s, k in obj.terms if b >= t))

    out = []
    prev = IntervalSum(n)
    for k in range(1, n + 1):
        j = n - k + 1
        cur = truncate(j)
        mult = sum(k_ for a, b, _, k_ in obj.terms if a <= j <= b)
        cone = node_heart_object(n, j, m[j - 1], mult) if mult else IntervalSum(n)
        out.append(Triangle(j, prev, cur, cone))
        prev = cur
    return out


def is_semistable_by(rep, phase_of) -> SemistabilityResult:
    """Brute-force semistability with an arbitrary phase function on dimension vectors.

    Used when phases come from somewhere other than a heart charge, e.g. the
    relabeled phases after a group action.
    """
    dims, ker = _as_rep_data(rep)
    if not any(dims):
        raise ValueError("the zero representation has no phase")
    total = phase_of(dims)
    best, best_phase, stable = None, None, True
    for u in _feasible_iter(dims, ker):
        if not any(u) or u == dims:
            continue
        p = phase_of(u)
        if p >= total:
            stable = False
        if p > total and (best is None or p > best_phase):
            best, best_phase = u, p
    cert = None if best is None else LatticeClass.quiver(best)
    return SemistabilityResult(best is None, cert, stable and best is None)
