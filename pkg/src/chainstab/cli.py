"""``chainstab`` command line.

Every command writes JSON (or CSV for ``chambers``) to stdout.  Failures
write ``{"error": ..., "message": ...}`` to stderr and exit with status 2.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Sequence

from . import anmodel, curvechain, lattice, sodcalc, towerrw, walls
from .charge import alpha_quiver_charge, charge_from_json, phase
from .lattice import LatticeClass, QuadForm
from .linalg import frac


class UsageError(ValueError):
    pass


def threads() -> int:
    raw = os.environ.get("CHAINSTAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"CHAINSTAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("CHAINSTAB_THREADS must be at least 1")
    return n


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _rationals(text: str) -> list[Fraction]:
    return [frac(x) for x in text.split(",") if x.strip()]


def _ranges(text: str, conv=frac) -> list[tuple]:
    out = []
    for part in text.split(","):
        lo, _, hi = part.partition(":")
        if not hi:
            raise UsageError(f"range {part!r} must look like lo:hi")
        out.append((conv(lo), conv(hi)))
    return out


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _alpha(args, n: int):
    if args.alpha is None:
        raise UsageError("--alpha is required")
    alpha = _rationals(args.alpha)
    if len(alpha) != n:
        raise UsageError(f"--alpha needs {n} values")
    return alpha_quiver_charge(alpha)


# --- commands ------------------------------------------------------------------

def cmd_decompose(args) -> int:
    rep = anmodel.ChainRep.from_json(_load(args.rep))
    _emit(anmodel.decompose(rep).to_json())
    return 0


def cmd_ss_check(args) -> int:
    rep = anmodel.ChainRep.from_json(_load(args.rep))
    Z = _alpha(args, rep.n)
    res = anmodel.is_semistable(rep, Z)
    out = res.to_json()
    out["phase"] = phase(Z, rep.dims).to_json()
    _emit(out)
    return 0 if res.verdict else 1


def cmd_hn(args) -> int:
    rep = anmodel.ChainRep.from_json(_load(args.rep))
    _emit(anmodel.hn_filtration(rep, _alpha(args, rep.n)).to_json())
    return 0


def cmd_walls(args) -> int:
    beta = _ints(args.beta)
    if args.model == "quiver":
        box = _ranges(args.box) if args.box else None
        ws = walls.exact_walls(beta, walls.alpha_quiver_family(len(beta)), box)
    else:
        if len(beta) % 2:
            raise UsageError("chain classes are given as d1,r1,d2,r2,...")
        if not args.bounds:
            raise UsageError("--bounds dmin:dmax,... is required for the chain model")
        cls = curvechain.ChainClass.of([beta[i:i + 2] for i in range(0, len(beta), 2)], args.genus)
        ws = curvechain.alpha_walls(cls, _ranges(args.bounds, int))
    _emit([w.to_json() for w in ws])
    return 0


def _report(job):
    beta, family, p = job
    return walls.chamber_report(beta, family, p)


def cmd_chambers(args) -> int:
    beta = _ints(args.beta)
    family = walls.alpha_quiver_family(len(beta))
    box = _ranges(args.box)
    workers = threads()
    if workers == 1:
        reports = walls.chamber_grid(beta, family, box, args.grid)
    else:
        # same points as chamber_grid; map keeps the order
        pts = walls.grid_points(beta, family, box, args.grid)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_report, [(tuple(beta), family, p) for p in pts]))
    sys.stdout.write(walls.chamber_csv(reports, family.names))
    return 0


def cmd_glue_check(args) -> int:
    m = _ints(args.shifts)
    if not m:
        raise UsageError("--shifts needs at least one value")
    ok = anmodel.gluing_condition_holds(m)
    report = anmodel.glued_heart_shift_vectors(len(m), [(x, x) for x in m])
    _emit({"shifts": m, "admissible": ok, "constraint": report.constraint})
    return 0 if ok else 1


def cmd_support_check(args) -> int:
    Z = charge_from_json(_load(args.charge))
    Q = QuadForm.from_json(_load(args.qform))
    samples = [LatticeClass.from_json(s) for s in _load(args.samples)] if args.samples else []
    if args.random_samples:
        rng = random.Random(args.seed)
        rank = Z.rank
        kind = samples[0].kind if samples else "quiver"
        for _ in range(args.random_samples):
            coords = tuple(rng.randint(-3, 3) for _ in range(rank))
            n = rank // 2 if kind == "chain" else rank
            samples.append(LatticeClass(kind, n, coords))
    _emit(lattice.check_support_property(Z, Q, samples).to_json())
    return 0


def cmd_tower(args) -> int:
    tower = towerrw.build_tower(args.n)
    derivs = []
    if args.derive == "gluing":
        derivs.append(("gluing", towerrw.derive_gluing_functor(args.n)))
    elif args.derive == "sod":
        for j in range(2, args.n + 1):
            derivs.append((f"sod j={j}", towerrw.check_semiorthogonality(args.n, j)))
    if args.format == "json":
        _emit({"tower": tower.to_json(),
               "derivations": [dict(d.to_json(), name=name) for name, d in derivs]})
        return 0
    lines = [f"tower n={tower.n}"]
    for lvl in tower.levels:
        lines.append(f"  level {lvl.level}: {lvl.description}, fiber rank {lvl.fiber_rank}")
    for name, value in tower.line_bundles.items():
        lines.append(f"  {name} = {value}")
    for name, d in derivs:
        lines += ["", f"derivation ({name}), {len(d.steps)} steps:", d.pretty()]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_mutate(args) -> int:
    rec = sodcalc.SODRecord.from_json(_load(args.sod))
    fn = sodcalc.left_mutate if args.side == "left" else sodcalc.right_mutate
    _emit(fn(rec, args.index).to_json())
    return 0


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chainstab", description="Exact stability computations for chains.")
    p.add_argument("--config", help="JSON file whose keys provide defaults for the command's options")
    p.add_argument("--seed", type=int, default=0, help="seed for commands that sample")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("decompose", help="interval decomposition of a chain representation")
    s.add_argument("rep")
    s.set_defaults(func=cmd_decompose)

    for name, func, doc in (("ss-check", cmd_ss_check, "semistability verdict (exit 0 semistable, 1 unstable)"),
                            ("hn", cmd_hn, "Harder-Narasimhan filtration")):
        s = sub.add_parser(name, help=doc)
        s.add_argument("rep")
        s.add_argument("--alpha", help="comma-separated rationals, one per node")
        s.set_defaults(func=func)

    s = sub.add_parser("walls", help="potential walls for a class")
    s.add_argument("--beta", required=True, help="dimension vector, or d1,r1,d2,r2,... for chains")
    s.add_argument("--model", choices=["quiver", "chain"], default="quiver")
    s.add_argument("--bounds", help="degree ranges dmin:dmax per node (chain model)")
    s.add_argument("--box", help="parameter ranges lo:hi per node (quiver model)")
    s.add_argument("--genus", type=int, default=0)
    s.set_defaults(func=cmd_walls)

    s = sub.add_parser("chambers", help="CSV grid of semistable counts and HN types")
    s.add_argument("--beta", required=True)
    s.add_argument("--box", required=True, help="lo:hi per parameter")
    s.add_argument("--grid", type=int, default=4)
    s.set_defaults(func=cmd_chambers)

    s = sub.add_parser("glue-check", help="is a shift vector admissible for gluing node hearts")
    s.add_argument("--shifts", required=True)
    s.set_defaults(func=cmd_glue_check)

    s = sub.add_parser("support-check", help="test a quadratic form against a central charge")
    s.add_argument("--charge", required=True)
    s.add_argument("--qform", required=True)
    s.add_argument("--samples")
    s.add_argument("--random-samples", type=int, default=0, help="add this many seeded random classes")
    s.set_defaults(func=cmd_support_check)

    s = sub.add_parser("tower", help="tower record and derivations")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--derive", choices=["gluing", "sod"])
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_tower)

    s = sub.add_parser("mutate", help="mutate a semiorthogonal decomposition record")
    s.add_argument("--sod", required=True)
    s.add_argument("--index", type=int, required=True, help="0-based position of the left member of the pair")
    s.add_argument("--side", choices=["left", "right"], required=True)
    s.set_defaults(func=cmd_mutate)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config:
        cfg = _load(args.config)
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        for k, v in cfg.items():
            dest = k.replace("-", "_")
            if getattr(args, dest, None) is None:
                setattr(args, dest, ",".join(map(str, v)) if isinstance(v, list) else v)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except (ValueError, KeyError, TypeError, IndexError, ArithmeticError, OSError, RuntimeError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
