"""Walls, chambers, HN strata and semistable enumeration for the A_n model."""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .anmodel import IntervalSum, hn_filtration, is_semistable
from .charge import CentralCharge, PhaseValue, phase
from .lattice import LatticeClass
from .linalg import frac


@dataclass(frozen=True)
class ChargeFamily:
    """A charge whose rows depend affinely on parameters ``p``.

    ``Re Z_p = re0 + sum_k p_k re_lin[k]`` and likewise for ``Im``.
    """

    re0: tuple[Fraction, ...]
    im0: tuple[Fraction, ...]
    re_lin: tuple[tuple[Fraction, ...], ...]
    im_lin: tuple[tuple[Fraction, ...], ...]
    names: tuple[str, ...] = ()
    kind: str = "quiver"

    def __post_init__(self):
        conv = lambda rows: tuple(tuple(frac(x) for x in r) for r in rows)
        object.__setattr__(self, "re0", tuple(frac(x) for x in self.re0))
        object.__setattr__(self, "im0", tuple(frac(x) for x in self.im0))
        object.__setattr__(self, "re_lin", conv(self.re_lin))
        object.__setattr__(self, "im_lin", conv(self.im_lin))
        if len(self.re_lin) != len(self.im_lin):
            raise ValueError("real and imaginary parts need the same number of parameters")
        if any(len(r) != len(self.re0) for r in self.re_lin + self.im_lin) or len(self.im0) != len(self.re0):
            raise ValueError("family rows have inconsistent lengths")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"a{k + 1}" for k in range(len(self.re_lin))))

    @property
    def n_params(self) -> int:
        return len(self.re_lin)

    @property
    def rank(self) -> int:
        return len(self.re0)

    def at(self, p: Sequence) -> CentralCharge:
        p = [frac(x) for x in p]
        if len(p) != self.n_params:
            raise ValueError(f"family takes {self.n_params} parameters, got {len(p)}")
        re = [x + sum((pk * r[j] for pk, r in zip(p, self.re_lin)), Fraction(0)) for j, x in enumerate(self.re0)]
        im = [x + sum((pk * r[j] for pk, r in zip(p, self.im_lin)), Fraction(0)) for j, x in enumerate(self.im0)]
        return CentralCharge(tuple(re), tuple(im))

    def _affine(self, u: Sequence[int]):
        """Re and Im of ``Z_p(u)`` as ``(const, coeffs)`` pairs."""
        re = (linalg.dot(self.re0, u), [linalg.dot(r, u) for r in self.re_lin])
        im = (linalg.dot(self.im0, u), [linalg.dot(r, u) for r in self.im_lin])
        return re, im


def alpha_quiver_family(n: int) -> ChargeFamily:
    """``Z_alpha(S_j) = -alpha_j + i``."""
    lin = tuple(tuple(-1 if j == k else 0 for j in range(n)) for k in range(n))
    zero = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    return ChargeFamily((0,) * n, (1,) * n, lin, zero)


def alpha_chain_family(n: int) -> ChargeFamily:
    """``Z_alpha(d, r) = sum_j -d_j - alpha_j r_j + i r_j`` on ``Z^{2n}``."""
    re0 = tuple(-1 if c % 2 == 0 else 0 for c in range(2 * n))
    im0 = tuple(1 if c % 2 else 0 for c in range(2 * n))
    lin = tuple(tuple(-1 if c == 2 * k + 1 else 0 for c in range(2 * n)) for k in range(n))
    zero = tuple(tuple(0 for _ in range(2 * n)) for _ in range(n))
    return ChargeFamily(re0, im0, lin, zero, kind="chain")


@dataclass
class Wall:
    """``sum_k coeffs[k] p_k + const = 0``, where ``subclasses`` and ``beta`` have equal phase."""

    coeffs: tuple[Fraction, ...]
    const: Fraction
    subclasses: list[LatticeClass]
    names: tuple[str, ...] = ()
    active_region: tuple[tuple[Fraction, Fraction], ...] | None = None

    @property
    def subclass(self) -> LatticeClass:
        return self.subclasses[0]

    def value(self, p: Sequence) -> Fraction:
        return sum((c * frac(x) for c, x in zip(self.coeffs, p)), Fraction(0)) + self.const

    def contains(self, p: Sequence) -> bool:
        return self.value(p) == 0

    def side(self, p: Sequence) -> int:
        v = self.value(p)
        return (v > 0) - (v < 0)

    def equation(self) -> str:
        names = self.names or tuple(f"a{k + 1}" for k in range(len(self.coeffs)))
        parts = []
        for c, name in zip(self.coeffs, names):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            sign = "-" if c < 0 else "+"
            parts.append((sign, f"{mag}{name}"))
        if not parts:
            lhs = "0"
        else:
            lhs = ("-" if parts[0][0] == "-" else "") + parts[0][1]
            lhs += "".join(f" {s} {t}" for s, t in parts[1:])
        rhs = -self.const
        return f"{lhs} = {rhs}"

    def __str__(self) -> str:
        return self.equation()

    def to_json(self) -> dict:
        return {
            "equation": {"coeffs": [str(c) for c in self.coeffs], "const": str(self.const)},
            "display": self.equation(),
            "subclass": list(self.subclass.coords),
            "subclasses": [list(s.coords) for s in self.subclasses],
        }


def _normalize(coeffs: list[Fraction], const: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    v = linalg.primitive(list(coeffs) + [const])
    return tuple(v[:-1]), v[-1]


def _meets_box(coeffs, const, box) -> bool:
    lo = hi = const
    for c, (a, b) in zip(coeffs, box):
        lo += min(c * a, c * b)
        hi += max(c * a, c * b)
    return lo <= 0 <= hi


def wall_equation(beta: Sequence[int], u: Sequence[int], family: ChargeFamily):
    """Affine form whose zero set is where ``Z_p(u)`` and ``Z_p(beta)`` are parallel.

    Raises if the cross product picks up a quadratic term in the parameters.
    """
    (ur0, ur), (ui0, ui) = family._affine(u)
    (br0, br), (bi0, bi) = family._affine(beta)
    k = family.n_params
    for s in range(k):
        for t in range(k):
            if ur[s] * bi[t] - ui[s] * br[t] + ur[t] * bi[s] - ui[t] * br[s] != 0:
                raise ValueError("charge family is not affine: wall equation has a quadratic term")
    const = ur0 * bi0 - ui0 * br0
    coeffs = [ur0 * bi[s] + ur[s] * bi0 - ui0 * br[s] - ui[s] * br0 for s in range(k)]
    return coeffs, const


def _box(box, k):
    if box is None:
        return None
    box = [(frac(a), frac(b)) for a, b in box]
    if len(box) != k:
        raise ValueError(f"box needs {k} ranges")
    if any(a > b for a, b in box):
        raise ValueError("empty box")
    return tuple(box)


def walls_for_candidates(beta, candidates: Iterable[Sequence[int]], family: ChargeFamily, box=None) -> list[Wall]:
    """Walls of ``beta`` from an explicit list of candidate subclasses (merged by equation)."""
    box = _box(box, family.n_params)
    merged: dict = {}
    for u in candidates:
        coeffs, const = wall_equation(beta, u, family)
        if all(c == 0 for c in coeffs):
            # constant phase relation: either never or always equal, no wall either way
            continue
        key = _normalize(coeffs, const)
        if box is not None and not _meets_box(key[0], key[1], box):
            continue
        n = len(u) // 2 if family.kind == "chain" else len(u)
        cls = LatticeClass(family.kind, n, tuple(u))
        merged.setdefault(key, []).append(cls)
    walls = [Wall(c, k, subs, family.names, box) for (c, k), subs in merged.items()]
    walls.sort(key=lambda w: (w.coeffs, w.const))
    return walls


def exact_walls(beta, family: ChargeFamily | None = None, box=None) -> list[Wall]:
    """All potential walls for the quiver class ``beta``: one per ``0 < u < beta``."""
    beta = tuple(beta.coords if isinstance(beta, LatticeClass) else beta)
    if any(b < 0 for b in beta):
        raise ValueError("beta must be nonnegative")
    family = family or alpha_quiver_family(len(beta))
    if family.rank != len(beta):
        raise ValueError("family rank does not match beta")
    cands = [u for u in itertools.product(*[range(b + 1) for b in beta]) if any(u) and u != beta]
    return walls_for_candidates(beta, cands, family, box)


# --- semistable enumeration ---------------------------------------------------

def _all_intervals(n):
    return [(a, b) for a in range(1, n + 1) for b in range(a, n + 1)]


def objects_of_class(beta: Sequence[int]) -> list[IntervalSum]:
    """Every unshifted interval sum with dimension vector ``beta`` (Krull-Schmidt classification)."""
    beta = tuple(beta)
    n = len(beta)
    ivs = _all_intervals(n)
    out = []

    def rec(i, rem, chosen):
        if not any(rem):
            out.append(IntervalSum(n, tuple((a, b, 0, m) for (a, b), m in chosen)))
            return
        if i == len(ivs):
            return
        a, b = ivs[i]
        cap = min(rem[a - 1:b])
        for m in range(cap + 1):
            nxt = list(rem)
            for j in range(a - 1, b):
                nxt[j] -= m
            rec(i + 1, nxt, chosen + ([((a, b), m)] if m else []))

    rec(0, list(beta), [])
    out.sort(key=lambda s: s.terms)
    return out


def enumerate_semistables(beta, Z, shift_bound: int = 0) -> list[IntervalSum]:
    """Semistable objects of class ``beta``, ordered by phase then by terms.

    With ``shift_bound > 0`` even shifts ``X[2s]`` with ``|2s| <= shift_bound``
    are added; they share the class and have phase shifted by ``2s``.
    """
    beta = tuple(beta.coords if isinstance(beta, LatticeClass) else beta)
    if any(b < 0 for b in beta):
        raise ValueError("beta must be nonnegative")
    if not any(beta):
        return []
    base = [obj for obj in objects_of_class(beta) if is_semistable(obj, Z).verdict]
    shifts = [s for s in range(-shift_bound, shift_bound + 1) if s % 2 == 0]
    return [obj.shift(s) for s in shifts for obj in base]


def semistables_by_phase(objs: Iterable[IntervalSum], Z) -> list[tuple[PhaseValue, list[IntervalSum]]]:
    groups: list[tuple[PhaseValue, list[IntervalSum]]] = []
    for obj in objs:
        s = next(iter(obj.shifts()))
        ph = phase(Z, obj.shift(-s).cls).shifted(s)
        for p, members in groups:
            if p == ph:
                members.append(obj)
                break
        else:
            groups.append((ph, [obj]))
    groups.sort(key=lambda g: g[0])
    return groups


def hn_type(obj: IntervalSum, Z) -> tuple[tuple[int, ...], ...]:
    return hn_filtration(obj.to_rep(), Z).type()


def hn_stratification(beta, Z) -> list[tuple[tuple[tuple[int, ...], ...], list[IntervalSum]]]:
    """Group all objects of class ``beta`` by HN type, in lexicographic order of type."""
    beta = tuple(beta.coords if isinstance(beta, LatticeClass) else beta)
    strata: dict = {}
    for obj in objects_of_class(beta):
        strata.setdefault(hn_type(obj, Z), []).append(obj)
    return sorted(strata.items())


# --- chambers ---------------------------------------------------------------

@dataclass
class ChamberReport:
    point: tuple[Fraction, ...]
    semistable: list[IntervalSum]
    unstable: list[tuple[IntervalSum, tuple[tuple[int, ...], ...]]]
    signature: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "point": [str(x) for x in self.point],
            "semistable": [str(s) for s in self.semistable],
            "unstable": [{"object": str(o), "hn_type": [list(c) for c in t]} for o, t in self.unstable],
        }


def off_wall_point(p: Sequence[Fraction], walls: Sequence[Wall], scale: Fraction = Fraction(1, 1000)) -> tuple[Fraction, ...]:
    """Nudge ``p`` off every wall; the result is checked, not assumed."""
    p = tuple(frac(x) for x in p)
    t = 0
    while True:
        q = tuple(x + scale * Fraction(t, 7 * (k + 3)) for k, x in enumerate(p))
        if not any(w.contains(q) for w in walls):
            return q
        t += 1


def chamber_report(beta, family: ChargeFamily, p: Sequence) -> ChamberReport:
    beta = tuple(beta)
    Z = family.at(p)
    ss, bad = [], []
    for obj in objects_of_class(beta):
        if is_semistable(obj, Z).verdict:
            ss.append(obj)
        else:
            bad.append((obj, hn_type(obj, Z)))
    return ChamberReport(tuple(frac(x) for x in p), ss, bad)


def grid_points(beta, family: ChargeFamily, box, k: int) -> list[tuple[Fraction, ...]]:
    """``k`` cell midpoints per axis, each nudged off every wall of ``beta``."""
    if family.kind != "quiver":
        raise ValueError("chamber grids are computed for the quiver model")
    box = _box(box, family.n_params)
    if k < 1:
        raise ValueError("grid needs at least one point per axis")
    walls = exact_walls(beta, family, box)
    axes = [[a + (b - a) * Fraction(2 * i + 1, 2 * k) for i in range(k)] for a, b in box]
    return [off_wall_point(p, walls) for p in itertools.product(*axes)]


def chamber_grid(beta, family: ChargeFamily | None, box, k: int) -> list[ChamberReport]:
    beta = tuple(beta.coords if isinstance(beta, LatticeClass) else beta)
    family = family or alpha_quiver_family(len(beta))
    walls = exact_walls(beta, family, _box(box, family.n_params))
    out = []
    for q in grid_points(beta, family, box, k):
        rep = chamber_report(beta, family, q)
        rep.signature = tuple(w.side(q) for w in walls)
        out.append(rep)
    return out


def chamber_csv(reports: Sequence[ChamberReport], names: Sequence[str]) -> str:
    """CSV rows ``param_1..param_k, n_semistable, hn_type_id`` with rational strings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(names) + ["n_semistable", "hn_type_id"])
    ids: dict = {}
    for rep in reports:
        key = tuple(sorted(t for _, t in rep.unstable))
        tid = ids.setdefault(key, len(ids))
        w.writerow([str(x) for x in rep.point] + [len(rep.semistable), tid])
    return buf.getvalue()


# --- slicing distance ---------------------------------------------------------

@dataclass
class SlicingSample:
    """A tau-semistable object: its tau-phase and the phases of its sigma-HN factors."""

    tau_phase: PhaseValue
    sigma_phases: list[PhaseValue]
    label: str = ""


@dataclass
class SlicingEstimate:
    delta: PhaseValue
    upper: Fraction
    exact: Fraction | None
    worst: str = ""

    def to_json(self) -> dict:
        return {"delta": self.delta.to_json(), "upper_bound": str(self.upper),
                "exact": None if self.exact is None else str(self.exact), "worst": self.worst}


def slicing_distance_estimate(samples: Sequence[SlicingSample]) -> SlicingEstimate:
    """``max`` over samples of ``max(top_sigma - phi_tau, phi_tau - bottom_sigma)``.

    All differences are exact phase values; ``upper`` is a rational bound
    that equals the value whenever that value is rational and recognised.
    """
    if not samples:
        raise ValueError("slicing distance needs at least one sample")
    best, worst = None, ""
    for s in samples:
        if not s.sigma_phases:
            raise ValueError(f"sample {s.label!r} has no sigma-HN factors")
        top, bot = max(s.sigma_phases), min(s.sigma_phases)
        d = max(top - s.tau_phase, s.tau_phase - bot)
        if best is None or d > best:
            best, worst = d, s.label
    return SlicingEstimate(best, best.upper_bound(), best.exact(), worst)


def slicing_samples(objs: Iterable[IntervalSum], Z_sigma, Z_tau) -> list[SlicingSample]:
    """Samples from the tau-semistable members of ``objs`` (unshifted)."""
    out = []
    for obj in objs:
        if not is_semistable(obj, Z_tau).verdict:
            continue
        hn = hn_filtration(obj.to_rep(), Z_sigma)
        out.append(SlicingSample(phase(Z_tau, obj.cls), [f.phase for f in hn.factors], str(obj)))
    return out
