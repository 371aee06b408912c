"""Command-line front end: ``pgblock verify|search|tables|bounds|replay``.

Exit codes: 0 property holds / search succeeded, 1 property fails (or a
replay differs), 2 bad input, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, bounds, codes, cutcheck, search
from . import io as fmt
from .gf import NotPrimePower
from .pg import EnumerationTooLarge, Geometry

SEED_ENV = "PGBLOCK_SEED"


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def parse_range(text: str) -> list[int]:
    """``"2..6"``, ``"2-6"`` or ``"2,3,5"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        for sep in ("..", "-"):
            if sep in part:
                a, b = part.split(sep, 1)
                out.extend(range(int(a), int(b) + 1))
                break
        else:
            out.append(int(part))
    return out


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, separators=(",", ":"), default=str)
    return v


def _emit(rows: list[dict], form: str, out) -> None:
    if form == "json":
        out.write(json.dumps(rows, indent=2, default=str) + "\n")
        return
    keys: list[str] = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    w = csv.DictWriter(out, keys, delimiter="\t", lineterminator="\n", restval="")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(v) for k, v in r.items()})


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# --------------------------------------------------------------------------
# verify


def _point_set_of(parsed: fmt.Parsed) -> cutcheck.PointSet:
    if parsed.kind == "pg":
        return cutcheck.PointSet.from_points(parsed.geometry, parsed.points)
    if parsed.kind == "lines":
        return cutcheck.LineSet.from_pairs(parsed.geometry, parsed.lines).union()
    return codes.GeneratorMatrix(parsed.matrix, parsed.q).point_set()


def cmd_verify(args) -> int:
    parsed = fmt.read(args.input)
    t0 = time.perf_counter()
    sizes: dict = {}
    if args.cutting is not None:
        S = _point_set_of(parsed)
        prop, v = f"cutting({args.cutting})", cutcheck.is_cutting_t_blocking(S, args.cutting, args.method)
        sizes = {"points": len(S)}
    elif args.tfold is not None:
        S = _point_set_of(parsed)
        prop, v = f"tfold({args.tfold},{args.r})", cutcheck.is_t_fold_r_blocking(S, args.tfold, args.r)
        sizes = {"points": len(S)}
    elif args.hp:
        if parsed.kind != "lines":
            raise UsageError("--hp needs a 'lines' file")
        L = cutcheck.LineSet.from_pairs(parsed.geometry, parsed.lines)
        prop, v = "hp", cutcheck.is_higgledy_piggledy(L)
        sizes = {"lines": len(L), "union": len(L.union())}
    elif args.saturating is not None:
        S = _point_set_of(parsed)
        prop, v = f"saturating({args.saturating})", cutcheck.is_rho_saturating(S, args.saturating)
        if args.coverage_only:
            v = cutcheck.Verdict(v.details["covered"], v.witness, v.details)
        sizes = {"points": len(S)}
    elif args.minimal_code:
        G = codes.GeneratorMatrix(parsed.matrix, parsed.q) if parsed.kind == "mat" else codes.code_from_pointset(_point_set_of(parsed))
        prop, v = "minimal-code", codes.is_minimal_code(G, args.code_method)
        if v:
            v.details.update({k: val for k, val in codes.check_bounds(G).to_record().items() if k not in ("n", "k", "q")})
        sizes = {"n": G.n, "k": G.k, "q": G.q}
    elif args.covering_radius is not None:
        if parsed.kind == "mat":
            H, q = parsed.matrix, parsed.q
        else:
            S = _point_set_of(parsed)
            H, q = np.array(S.points, dtype=np.int64).T, S.geometry.q
        R = codes.covering_radius(H, q)
        want = args.covering_radius
        prop = "covering-radius"
        v = cutcheck.Verdict(want < 0 or R == want, details={"R": R})
        sizes = {"r": int(np.shape(H)[0]), "n": int(np.shape(H)[1])}
    else:
        raise UsageError("choose a property: --cutting, --tfold, --hp, --saturating, --minimal-code or --covering-radius")
    rec = v.to_record(prop, sizes, round(time.perf_counter() - t0, 6) if args.timing else None)
    if "u" in v.details:
        rec["failing_u"] = list(v.details["u"])
    _emit([rec], args.format, sys.stdout)
    return 0 if v else 1


# --------------------------------------------------------------------------
# search and replay


def _search_params(args) -> dict:
    return {
        "N": args.N,
        "q": args.q,
        "kind": args.kind,
        "size": args.size,
        "t": args.t,
        "budget": args.budget,
        "seed": args.seed if args.seed is not None else _default_seed(),
        "strategy": args.strategy,
        "sampling": args.sampling,
        "collect": args.collect,
    }


def run_search(params: dict, out: Path) -> tuple[int, dict]:
    """Run a search, write artifacts into ``out``, return (exit code, manifest)."""
    t0 = time.perf_counter()
    cfg = search.SearchConfig(
        params["N"], params["q"], params["kind"], params["size"], params["budget"], params["seed"],
        params["strategy"], params["sampling"], t=params["t"],
    )
    rep = search.monte_carlo_search(cfg, collect=params["collect"])
    out.mkdir(parents=True, exist_ok=True)
    g = Geometry(cfg.N, cfg.q)
    files = {"report": out / "report.json"}
    files["report"].write_text(rep.to_json())
    if rep.success:
        if cfg.kind == "lines":
            text = fmt.format_lines(g, rep.line_set().pairs())
            files["object"] = out / "found.lines"
        else:
            text = fmt.format_points(g, rep.point_set().points)
            files["object"] = out / "found.pg"
        files["object"].write_text(text)
    manifest = {
        "command": "search",
        "parameters": params,
        "seed": params["seed"],
        "artifacts": {k: {"path": str(p), "sha256": _sha256(p)} for k, p in sorted(files.items())},
        "version": __version__,
        "duration_s": round(time.perf_counter() - t0, 3),
        "success": rep.success,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return (0 if rep.success else 3), manifest


def cmd_search(args) -> int:
    if args.size is None:
        raise UsageError("--size is required")
    code, manifest = run_search(_search_params(args), Path(args.out))
    summary = {"success": manifest["success"], "out": args.out}
    summary.update({k: v["path"] for k, v in manifest["artifacts"].items()})
    _emit([summary], args.format, sys.stdout)
    return code


def cmd_replay(args) -> int:
    old = json.loads(Path(args.manifest).read_text())
    if old.get("command") != "search":
        raise UsageError("only search manifests can be replayed")
    out = Path(args.out) if args.out else Path(args.manifest).parent / "replay"
    _, new = run_search(old["parameters"], out)
    same = {k: old["artifacts"].get(k, {}).get("sha256") == v["sha256"] for k, v in new["artifacts"].items()}
    same_keys = set(old["artifacts"]) == set(new["artifacts"])
    rows = [{"artifact": k, "identical": v} for k, v in sorted(same.items())]
    _emit(rows, args.format, sys.stdout)
    return 0 if same_keys and all(same.values()) else 1


# --------------------------------------------------------------------------
# tables and bounds


def _bound_rows(which: str, ks, qs, Ns, rhos, ms, prec: int) -> list[dict]:
    rows: list[dict] = []
    if which == "m":
        for q in qs:
            for k in ks:
                rows += [r.as_row() for r in bounds.m_bounds(k, q, prec=prec)]
    elif which == "saturating":
        for q in qs:
            for N in Ns:
                for rho in rhos or range(1, N):
                    if 1 <= rho <= N - 1:
                        rows += [r.as_row() for r in bounds.saturating_bounds(N, rho, q, prec)]
    elif which == "success":
        for q in qs:
            for N in Ns:
                for m in ms or [bounds.min_lines_for_regime(N, q)]:
                    try:
                        sb = bounds.success_prob_lower(N, q, m, prec)
                    except bounds.RegimeViolation as exc:
                        rows.append({"name": "success_lower", "N": N, "q": q, "m": m, "value": None, "note": str(exc)})
                        continue
                    rows.append({
                        "name": "success_lower", "N": N, "q": q, "m": m, "side": "lower",
                        "value": float(sb.value), "p_low": float(sb.p_low), "p_codim2": float(sb.p_codim2),
                        "eta": str(sb.eta), "eta_bound": str(sb.eta_bound),
                        "citation": "1 - q^-6 gamma(q) - codim-2 term",
                    })
    elif which == "binary":
        for N in Ns:
            rows.append({"name": "binary_cutting_upper", "N": N, "q": 2, "side": "upper",
                         "value": bounds.binary_cutting_upper(N, prec), "citation": "ceil(log 2/log(4/3) (2N+1))"})
    elif which == "hp":
        for q in qs:
            for N in Ns:
                rows.append({"name": "hp_line_lower", "N": N, "q": q, "side": "lower",
                             "value": bounds.hp_line_lower(N, q), "citation": "N + floor(N/2) - floor((N-1)/q)"})
    else:
        raise UsageError(f"unknown bound family {which!r}")
    return rows


def cmd_bounds(args) -> int:
    rows = _bound_rows(
        args.family, parse_range(args.k), parse_range(args.qs), parse_range(args.Ns),
        parse_range(args.rho) if args.rho else [], parse_range(args.m) if args.m else [], args.prec,
    )
    _emit(rows, args.format, sys.stdout)
    return 0


def cmd_tables(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rows: list[dict] = []
    if args.which in ("pointsets", "hplines"):
        kind = "points" if args.which == "pointsets" else "lines"
        for N in parse_range(args.range):
            row = search.smallest_found(N, kind, 2, args.budget, seed, collect=args.collect)
            rec = {"N": N}
            if kind == "points":
                rec.update({"size": row.found, "size/N": round(row.found / N, 2) if row.found else None,
                            "reference": row.reference})
            else:
                rec.update({"floor(3N/2)": 3 * N // 2, "m": row.found, "union": row.union_size,
                            "reference_m": row.reference, "reference_union": search.REFERENCE_HPUNIONS.get(N)})
            rec.update({"budget": row.budget, "trials": row.trials,
                        "status": "found" if row.found is not None else "not found"})
            rows.append(rec)
    else:
        for q in parse_range(args.qs):
            for k in parse_range(args.range):
                rep = {r.name: r for r in bounds.m_bounds(k, q)}
                rows.append({
                    "k": k, "q": q,
                    "lower": rep["m_lower"].integer,
                    "nonconstructive_upper": rep["m_nonconstructive_upper"].integer,
                    "probabilistic_upper": rep["m_probabilistic_upper"].integer,
                })
    _emit(rows, args.format, sys.stdout)
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pgblock", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("tsv", "json"), default="tsv")

    v = sub.add_parser("verify", help="check a property of a point set, line set or matrix file")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--cutting", type=int, metavar="T", help="cutting T-blocking (T=1: cutting blocking set)")
    v.add_argument("--tfold", type=int, metavar="T", help="T-fold blocking with respect to (N-r)-subspaces")
    v.add_argument("--r", type=int, default=1)
    v.add_argument("--hp", action="store_true", help="higgledy-piggledy line set")
    v.add_argument("--saturating", "--rho", dest="saturating", type=int, metavar="RHO")
    v.add_argument("--coverage-only", action="store_true", help="saturating: ignore minimality of rho")
    v.add_argument("--minimal-code", action="store_true")
    v.add_argument("--code-method", choices=("geometric", "bruteforce"), default="geometric")
    v.add_argument("--covering-radius", type=int, nargs="?", const=-1, metavar="R",
                   help="compute the covering radius of the columns; with R, check equality")
    v.add_argument("--method", choices=("containment", "rank"), default="containment")
    v.add_argument("--timing", action="store_true")
    common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="Monte Carlo search")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--kind", choices=("points", "lines", "subspaces"), default="points")
    s.add_argument("--size", type=int)
    s.add_argument("--t", type=int, help="subspaces: strong blocking multiplicity (2..N)")
    s.add_argument("--budget", type=int, default=10**5)
    s.add_argument("--seed", type=int, help=f"default: ${SEED_ENV} or 0")
    s.add_argument("--strategy", choices=("pure_random", "random_with_restarts"), default="pure_random")
    s.add_argument("--sampling", choices=("distinct", "multiset"))
    s.add_argument("--collect", type=int, default=1, help="keep the smallest union among this many successes")
    s.add_argument("--out", default="pgblock-run")
    common(s)
    s.set_defaults(func=cmd_search)

    r = sub.add_parser("replay", help="rerun a search manifest and compare artifacts")
    r.add_argument("--in", dest="manifest", required=True)
    r.add_argument("--out")
    common(r)
    r.set_defaults(func=cmd_replay)

    t = sub.add_parser("tables", help="reproduce the small-N search tables or a bound table")
    t.add_argument("which", choices=("pointsets", "hplines", "bounds"))
    t.add_argument("--range", default="2..6", help="N range for searches, k range for bounds")
    t.add_argument("--q", dest="qs", default="2,3", help="bounds: field orders")
    t.add_argument("--budget", type=int, default=10**5)
    t.add_argument("--seed", type=int)
    t.add_argument("--collect", type=int, default=1)
    common(t)
    t.set_defaults(func=cmd_tables)

    b = sub.add_parser("bounds", help="evaluate bound formulas over a grid")
    b.add_argument("family", choices=("m", "saturating", "success", "binary", "hp"))
    b.add_argument("--k", default="2..12")
    b.add_argument("--q", dest="qs", default="2,3")
    b.add_argument("--N", dest="Ns", default="2..6")
    b.add_argument("--rho")
    b.add_argument("--m")
    b.add_argument("--prec", type=int, default=bounds.DEFAULT_PREC)
    common(b)
    b.set_defaults(func=cmd_bounds)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (fmt.FormatError, UsageError, NotPrimePower, FileNotFoundError, ValueError, EnumerationTooLarge) as exc:
        print(f"pgblock: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
