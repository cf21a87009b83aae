"""Command-line front end.

Every subcommand prints machine-readable records (JSON lines by default,
CSV with ``--format csv``).  A single ``#``-prefixed header line records
the command, its configuration, the seed and a timestamp; ``--no-header``
drops it, after which identical arguments give byte-identical output.

Exit codes: 0 when every check holds, 1 when a check is refuted, 2 for
invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .kernels import KernelSpec, PointSet, complete_pick_gram, min_eigenvalue, pick_refutation_search, random_points
from .multops import (
    MultiplierTuple,
    counterexample_sweep,
    leibnitz_constant,
    random_tuple,
    row_from_column_report,
)
from .oracle import QuadratureConfig, norm_cross_validation, orthogonality_checks
from .polyring import Polynomial, format_polynomial
from .spaces import RadialWeight, SpaceSpec, space_norm
from .textio import parse_polynomial
from .weakprod import SmirnovWitness, hankel_build, hankel_intertwine_check, hankel_norm_lower, smirnov_verify

EXIT_OK, EXIT_REFUTED, EXIT_INVALID = 0, 1, 2
TRENT_BOUND = math.sqrt(18)


class Emitter:
    def __init__(self, args: argparse.Namespace, config: dict):
        self.fmt = args.format
        self.stream = io.StringIO()
        self.fields: list[str] | None = None
        self.writer = None
        if not args.no_header:
            header = {
                "command": args.command,
                "config": config,
                "seed": args.seed,
                "version": __version__,
                "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            }
            self.stream.write("# " + json.dumps(header) + "\n")

    def record(self, rec: dict) -> None:
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(rec) + "\n")
            return
        if self.writer is None:
            self.fields = list(rec)
            self.writer = csv.DictWriter(self.stream, self.fields, lineterminator="\n", extrasaction="ignore")
            self.writer.writeheader()
        self.writer.writerow({k: _csv_cell(v) for k, v in rec.items()})

    def note(self, text: str) -> None:
        """Trailing comment line (CSV output only)."""
        if self.fmt == "csv":
            self.stream.write("# " + text + "\n")

    def flush(self, out: str | None) -> None:
        data = self.stream.getvalue()
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _csv_cell(v):
    return json.dumps(v) if isinstance(v, (list, dict)) else v


def _poly(text: str, dim: int) -> Polynomial:
    return parse_polynomial(text, dim)


def _space(text: str) -> SpaceSpec:
    try:
        return SpaceSpec.parse(_maybe_file(text))
    except (KeyError, json.JSONDecodeError) as exc:
        raise ValueError(f"invalid space spec: {exc}") from exc


def _kernel(text: str) -> KernelSpec:
    try:
        return KernelSpec.parse(_maybe_file(text))
    except (KeyError, json.JSONDecodeError) as exc:
        raise ValueError(f"invalid kernel spec: {exc}") from exc


def _maybe_file(text: str) -> str:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read()
    return text


def _positive(kind):
    def conv(x):
        v = kind(x)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {x}")
        return v

    return conv


# -- subcommands -----------------------------------------------------------------


def cmd_norm(args) -> int:
    space = _space(args.space)
    p = _poly(args.poly, space.dim)
    em = Emitter(args, {"space": space.to_config(), "poly": args.poly})
    em.record({"space": space.label(), "poly": format_polynomial(p), "norm": space_norm(space, p)})
    em.flush(args.out)
    return EXIT_OK


def cmd_pick_check(args) -> int:
    k = _kernel(args.kernel)
    z0 = None
    if args.z0 is not None:
        z0 = np.array([complex(x) for x in args.z0.split(",")])
    tol = args.tol if args.tol is not None else 1e-10
    config = {"kernel": k.to_config(), "tol": tol, "strict": args.strict}
    if args.search:
        config.update(search=args.search)
        res = pick_refutation_search(k, args.search, args.seed, threshold=-tol, z0=z0)
        refuted = res.min_eig < -tol
        rec = {
            "kernel": k.label(),
            "seed": args.seed,
            "trials": res.trials,
            "min_eig": res.min_eig,
            "verdict": "REFUTED" if refuted else "psd-evidence",
        }
        if refuted:
            rec["witness"] = res.witness.to_json()
    else:
        if args.points:
            with open(args.points, encoding="utf-8") as fh:
                pts = PointSet.from_json(json.load(fh))
            source = {"points": pts.to_json()}
        else:
            pts = random_points(k.dim, args.count, args.seed)
            source = {"seed": args.seed, "count": args.count}
        config.update(source)
        G = complete_pick_gram(k, pts, z0)
        lam = min_eigenvalue(G)
        if args.strict:
            # anything below roundoff level counts as negative
            tol = min(tol, 64 * np.finfo(float).eps * max(1.0, float(np.linalg.norm(G, 2))))
        refuted = lam < -tol
        rec = {"kernel": k.label(), **source, "min_eig": lam, "verdict": "REFUTED" if refuted else "psd-evidence"}
        if refuted:
            rec["witness"] = pts.to_json()
    em = Emitter(args, config)
    em.record(rec)
    em.flush(args.out)
    return EXIT_REFUTED if refuted else EXIT_OK


def cmd_counterexample(args) -> int:
    if args.dim < 2:
        raise ValueError("the construction requires d >= 2")
    D = args.degree if args.degree is not None else args.nmax + 1
    em = Emitter(args, {"d": args.dim, "n_max": args.nmax, "D": D})
    row = 0.0
    for n, col, row in counterexample_sweep(args.dim, args.nmax, D):
        em.record({"n": n, "column_sq_lower": col, "row_upper_truncated": row})
    limit = math.pi / math.sqrt(6)
    ok = row <= limit + 1e-8
    verdict = "row-bounded" if ok else "REFUTED"
    summary = {"row_upper_truncated": row, "row_limit": limit, "verdict": verdict}
    if args.format == "jsonl":
        em.record(summary)
    else:
        em.note(f"row {row!r} vs pi/sqrt(6) {limit!r}: {verdict}")
    em.flush(args.out)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_rowcol(args) -> int:
    src = _space(args.space)
    dst = _space(args.dst) if args.dst else src
    rng = np.random.default_rng(args.seed)
    tuples = [random_tuple(src.dim, args.arity, args.poly_degree, rng) for _ in range(args.count)]
    rep = row_from_column_report(src, dst, tuples, args.degree)
    bound = args.bound if args.bound is not None else TRENT_BOUND
    tol = args.tol if args.tol is not None else 0.01
    config = {
        "space_src": src.to_config(),
        "space_dst": dst.to_config(),
        "D": args.degree,
        "count": args.count,
        "arity": args.arity,
        "poly_degree": args.poly_degree,
        "bound": bound,
        "tol": tol,
    }
    em = Emitter(args, config)
    base = {"space_src": src.label(), "space_dst": dst.label(), "D": args.degree}
    if args.verbose:
        for i, r in enumerate(rep.ratios):
            em.record({**base, "value": r, "bound_kind": "exact", "quantity": f"ratio[{i}]"})
    ok = rep.empirical_c <= bound + tol
    em.record({**base, "value": rep.empirical_c, "bound_kind": "lower", "quantity": "empirical_c", "verdict": "ok" if ok else "REFUTED"})
    em.flush(args.out)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_leibnitz(args) -> int:
    src = _space(args.space)
    dst = _space(args.dst) if args.dst else src
    Phi = MultiplierTuple(tuple(_poly(t, src.dim) for t in args.phi))
    c2 = leibnitz_constant(Phi, args.j, args.k, src, dst, args.degree)
    em = Emitter(args, {"space_src": src.to_config(), "space_dst": dst.to_config(), "phi": args.phi, "j": args.j, "k": args.k, "D": args.degree})
    em.record(
        {
            "space_src": src.label(),
            "space_dst": dst.label(),
            "D": args.degree,
            "value": math.sqrt(c2),
            "bound_kind": "lower",
            "quantity": f"leibnitz_constant(j={args.j}, k={args.k})",
        }
    )
    em.flush(args.out)
    return EXIT_OK


def cmd_hankel(args) -> int:
    space = _space(args.space)
    b = _poly(args.symbol, space.dim)
    phi = _poly(args.phi, space.dim)
    inner = args.inner if args.inner is not None else args.degree - max(phi.degree, 0)
    tol = args.tol if args.tol is not None else 1e-12
    H = hankel_build(space, b, args.degree)
    defect = hankel_intertwine_check(H, phi, inner)
    em = Emitter(args, {"space": space.to_config(), "symbol": args.symbol, "phi": args.phi, "D": args.degree, "D_inner": inner, "tol": tol})
    base = {"space_src": space.label(), "space_dst": space.label(), "D": args.degree}
    em.record({**base, "value": hankel_norm_lower(H), "bound_kind": "lower", "quantity": "hankel_norm"})
    ok = defect <= tol
    em.record({**base, "value": defect, "bound_kind": "exact", "quantity": "intertwine_defect", "verdict": "ok" if ok else "REFUTED"})
    em.flush(args.out)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_smirnov(args) -> int:
    space = _space(args.space)
    h = _poly(args.h, space.dim)
    psi = _poly(args.psi, space.dim)
    one = Polynomial.constant(space.dim, 1)
    phi = _poly(args.phi, space.dim) if args.phi else (one - psi) ** 2 * h
    rs = tuple(float(r) for r in args.rs.split(","))
    tol = args.tol if args.tol is not None else 1e-12
    rep = smirnov_verify(SmirnovWitness(h, phi, psi, rs), space, args.degree)
    ok = rep.residual <= tol and rep.ok(1e-9)
    em = Emitter(args, {"space": space.to_config(), "h": args.h, "psi": args.psi, "phi": format_polynomial(phi), "D": args.degree, "rs": list(rs), "tol": tol})
    em.record(
        {
            "space": space.label(),
            "D": args.degree,
            "residual": rep.residual,
            "psi_mult_lower": rep.psi_mult_lower,
            "bounds": {str(r): list(v) for r, v in rep.frac_bounds.items()},
            "verdict": "ok" if ok else "REFUTED",
        }
    )
    em.flush(args.out)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_oracle(args) -> int:
    weight = RadialWeight.one() if args.weight_a is None else RadialWeight.standard(args.weight_a)
    cfg = QuadratureConfig(n_samples=args.samples, seed=args.seed)
    z_max = args.tol if args.tol is not None else 3.0
    em = Emitter(args, {"dim": args.dim, "degree": args.degree, "weight": weight.to_config(), "samples": args.samples, "z_max": z_max})
    ok = True
    for r in norm_cross_validation([weight], [args.dim], args.degree):
        good = r.rel_error <= 0.005
        ok &= good
        em.record({"check": r.check, "label": r.label, "estimate": r.estimate, "stderr": None, "reference": r.reference, "z_score": None, "rel_error": r.rel_error})
    for r in orthogonality_checks(args.dim, args.degree, cfg, weight):
        ok &= r.z_score <= z_max
        em.record({"check": r.check, "label": r.label, "estimate": r.estimate, "stderr": r.stderr, "reference": r.reference, "z_score": r.z_score, "rel_error": None})
    em.flush(args.out)
    return EXIT_OK if ok else EXIT_REFUTED


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=_positive(float), default=None, help="check tolerance (command-specific default)")
    common.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    common.add_argument("--out", default=None, help="write records here instead of stdout")
    common.add_argument("--strict", action="store_true", help="pick-check: fail on any eigenvalue below roundoff level")
    common.add_argument("--no-header", action="store_true", help="omit the header line")

    ap = argparse.ArgumentParser(prog="pickspace", description="Finite-truncation checks for weighted Besov spaces and complete Pick kernels.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="norm of a polynomial")
    p.add_argument("--space", required=True, help="shorthand (da:2, bergman:2, besov:2:1:1) or JSON, @file to read one")
    p.add_argument("poly", help='polynomial text, e.g. "z1z2 - 0.5*z1^2", or JSON records')
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("pick-check", parents=[common], help="complete Pick certificate on sampled points")
    p.add_argument("--kernel", required=True, help="da:D, szego, dirichlet, power:D:beta, bergman:D or JSON")
    p.add_argument("--count", type=_positive(int), default=30)
    p.add_argument("--points", default=None, help="JSON file: a list of points, each a list of [re, im] coordinates")
    p.add_argument("--z0", default=None, help="normalization point, comma separated complex numbers")
    p.add_argument("--search", type=_positive(int), default=None, help="random refutation search with this budget")
    p.set_defaults(func=cmd_pick_check)

    p = sub.add_parser("counterexample", parents=[common], help="row/column sweep for the unbounded column family")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--nmax", type=_positive(int), default=20)
    p.add_argument("--degree", type=_positive(int), default=None, help="truncation degree (default n_max + 1)")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("rowcol", parents=[common], help="row over column ratio for random tuples")
    p.add_argument("--space", required=True)
    p.add_argument("--dst", default=None)
    p.add_argument("--degree", type=_positive(int), default=12)
    p.add_argument("--count", type=_positive(int), default=50)
    p.add_argument("--arity", type=_positive(int), default=5)
    p.add_argument("--poly-degree", type=int, default=4)
    p.add_argument("--bound", type=_positive(float), default=None, help="contract bound (default sqrt(18))")
    p.add_argument("--verbose", action="store_true", help="emit every ratio")
    p.set_defaults(func=cmd_rowcol)

    p = sub.add_parser("leibnitz", parents=[common], help="Leibnitz constant over polynomials of bounded degree")
    p.add_argument("--space", required=True)
    p.add_argument("--dst", default=None)
    p.add_argument("--phi", action="append", required=True, help="tuple entry (repeatable)")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--degree", type=_positive(int), default=10)
    p.set_defaults(func=cmd_leibnitz)

    p = sub.add_parser("hankel", parents=[common], help="Hankel form norm and intertwining defect")
    p.add_argument("--space", required=True)
    p.add_argument("--symbol", required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--degree", type=_positive(int), default=8)
    p.add_argument("--inner", type=int, default=None, help="inner degree (default degree - deg phi)")
    p.set_defaults(func=cmd_hankel)

    p = sub.add_parser("smirnov", parents=[common], help="verify a quotient representation h = phi / (1 - psi)^2")
    p.add_argument("--space", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--phi", default=None, help="default (1 - psi)^2 h")
    p.add_argument("--degree", type=_positive(int), default=15)
    p.add_argument("--rs", default="0.5,0.9,0.99")
    p.set_defaults(func=cmd_smirnov)

    p = sub.add_parser("oracle", parents=[common], help="quadrature and Monte-Carlo cross-checks of the monomial norms")
    p.add_argument("--dim", type=_positive(int), default=2)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--samples", type=_positive(int), default=100_000)
    p.add_argument("--weight-a", type=float, default=None, help="standard weight exponent (default constant weight)")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"pickspace {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
