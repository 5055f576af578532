"""
Command-line entry point: ``cwilf <subcommand> ...``.

Exit codes: 0 success, 1 verification mismatch or consistency failure,
2 malformed input, 3 enumeration budget exceeded.  Reports go to stdout and
depend only on the inputs; timings and progress go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from pathlib import Path

from cwilf import equivalence, overlap, qseries, recursions, tabloids, verify
from cwilf.config import RunConfig, use_config
from cwilf.errors import BudgetExceededError, ConsistencyError, InvalidInputError
from cwilf.perm_core import (PatternSet, match_count, match_positions, parse_perm, reduce,
                             stats)

log = logging.getLogger("cwilf")


class Mismatch(Exception):
    """Raised by a command whose check failed; carries the report to print."""

    def __init__(self, report: dict):
        super().__init__("verification mismatch")
        self.report = report


# -- argument helpers ------------------------------------------------------------

def pattern_list(values) -> list[str]:
    """Patterns from repeated or comma-separated arguments; an argument with
    spaces is a single long pattern."""
    out = []
    for v in values or []:
        v = v.strip()
        if " " in v:
            out.append(v)
        else:
            out.extend(p for p in v.split(",") if p)
    return out


def series_json(s: qseries.QSeries) -> dict:
    return {"norm": s.norm, "coeffs": [str(c) for c in s.coeffs]}


def _patterns(args) -> list[str]:
    pats = pattern_list(getattr(args, "set", None)) + pattern_list(
        [args.pattern] if getattr(args, "pattern", None) else [])
    if not pats:
        raise InvalidInputError("give --pattern or --set")
    return pats


# -- commands ---------------------------------------------------------------------

def cmd_stats(args) -> dict:
    s = parse_perm(args.sigma)
    b = stats(s)
    return {"sigma": str(s), "des": b.des, "inv": b.inv, "coinv": b.coinv,
            "lrmin": b.lrmin, "descent_set": sorted(b.des_set)}


def cmd_reduce(args) -> dict:
    text = args.word.strip()
    if any(ch in text for ch in " ,"):
        word = [int(v) for v in text.replace(",", " ").split()]
    elif text.isdigit():
        word = [int(ch) for ch in text]
    else:
        raise InvalidInputError(f"cannot parse word {args.word!r}")
    sep = "" if all(0 <= v <= 9 for v in word) else " "
    return {"word": sep.join(map(str, word)), "reduced": str(reduce(word))}


def cmd_match(args) -> dict:
    s = parse_perm(args.sigma)
    ps = PatternSet.of(pattern_list(args.patterns))
    out = {"sigma": str(s), "patterns": [str(p) for p in ps], "count": match_count(s, ps)}
    if len(ps.by_length) == 1:
        out["positions"] = match_positions(s, ps)
    else:
        out["intervals"] = [[a + 1, b + 1] for a, b in ps.match_intervals(s)]
    return out


def cmd_minoverlap(args) -> dict:
    return overlap.is_minimal_overlapping(args.tau, method=args.method).to_json()


def cmd_mutual(args) -> dict:
    return overlap.are_mutually_minimal_overlapping(args.alpha, args.beta, method=args.method).to_json()


def cmd_packings(args) -> dict:
    table = overlap.packing_table(args.tau, args.n)
    out = table.to_json()
    if parse_perm(args.tau)[0] == 1:
        for row in out["rows"]:
            row["closed_form_agrees"] = (overlap.closed_form_mp(args.tau, row["n"] - 1)
                                         == table.rows[row["n"] - 1].poly)
    return out


def cmd_inm(args) -> dict:
    pats = _patterns(args)
    return {"patterns": pats, "inm": series_json(qseries.brute_inm(pats, args.n))}


def cmd_iu(args) -> dict:
    pats = _patterns(args)
    brute = qseries.iu_from_brute(pats, args.n)
    out = {"patterns": pats, "iu": series_json(brute)}
    if args.check:
        rec = (recursions.iu_thm_key(pats[0], args.n) if args.check == "thm-key" and len(pats) == 1
               else recursions.iu_thm_set(pats, args.n))
        gap = qseries.series_equal_upto(rec, brute, args.n)
        out["check"] = {"recursion": args.check, "first_mismatch": gap, "agrees": gap is None}
        if gap is not None:
            raise Mismatch(out)
    return out


def cmd_nmxy(args) -> dict:
    pats = _patterns(args)
    brute = qseries.brute_nm_xy(pats, args.n)
    out = {"patterns": pats, "nm_xy": series_json(brute)}
    if args.via_u:
        gap = qseries.series_equal_upto(qseries.nm_xy_from_u(pats[0], args.n), brute, args.n)
        out["via_u"] = {"first_mismatch": gap, "agrees": gap is None}
        if gap is not None:
            raise Mismatch(out)
    return out


def cmd_matchdist(args) -> dict:
    pats = _patterns(args)
    s = qseries.match_distribution(pats, args.n)
    if args.p1:
        s = s.substitute(p=1)
    return {"patterns": pats, "match_distribution": series_json(s)}


def cmd_recur(args) -> dict:
    pats = pattern_list(args.set)
    spec = recursions.RecursionSpec(
        args.family, args.n,
        pattern=parse_perm(args.pattern) if args.pattern else None,
        patterns=tuple(parse_perm(p) for p in pats),
        p=args.p, k1=args.k1, k2=args.k2, s=args.s, printed=args.printed)
    if spec.family == "thm-key" and spec.pattern is None:
        raise InvalidInputError("thm-key needs --pattern")
    if spec.family == "thm-set" and not spec.patterns:
        raise InvalidInputError("thm-set needs --set")
    series = recursions.run(spec)
    out = {"family": spec.family, "series": series_json(series)}
    if args.check_oracle:
        gamma = recursions.family_patterns(spec)
        if spec.family in ("thm-key", "thm-set"):
            oracle = qseries.iu_from_brute(gamma, args.n)
        else:
            oracle = qseries.u_from_brute(gamma, args.n)
        gap = qseries.series_equal_upto(series, oracle, args.n)
        out["oracle"] = {"patterns": [str(p) for p in gamma], "first_mismatch": gap,
                         "agrees": gap is None}
        if spec.family in recursions.CLOSED:
            out["oracle"]["n_min"] = recursions.closed_n_min(spec.family, list(oracle), spec.printed)
        if gap is not None:
            raise Mismatch(out)
    return out


def cmd_tabloids(args) -> dict:
    gamma = pattern_list(args.set)
    if args.verify:
        r = tabloids.verify_involution(gamma, args.n)
        out = r.to_json()
        iu = qseries.iu_from_brute(gamma, args.n)[args.n]
        out["iu"] = str(iu)
        out["fixed_total_equals_iu"] = r.fixed_total == iu
        if not (r.ok and r.fixed_total == iu):
            raise Mismatch(out)
        return out
    source = tabloids.fixed_points if args.fixed_only else tabloids.enumerate_objects
    rows = []
    for i, obj in enumerate(source(gamma, args.n)):
        if args.limit is not None and i >= args.limit:
            break
        rows.append(obj.to_json())
    return {"patterns": gamma, "n": args.n, "fixed_only": args.fixed_only, "rows": rows}


def cmd_classify(args) -> dict:
    pats = pattern_list(args.pattern_args)
    if args.patterns:
        text = Path(args.patterns).read_text()
        pats += [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    report = equivalence.classify(pats, args.stats, args.n, threads=args.threads)
    out = report.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(out, indent=2) + "\n")
    return out


def cmd_phi(args) -> dict:
    img = equivalence.phi(args.alpha, args.beta, args.sigma)
    return {"alpha": args.alpha, "beta": args.beta, "sigma": str(parse_perm(args.sigma)),
            "image": str(img)}


def cmd_family(args) -> dict:
    if args.variant is None:
        perms = equivalence.family_variants(args.kind, args.blocks)
    else:
        perms = [equivalence.family(args.kind, args.blocks, args.variant)]
    rows = []
    for p in perms:
        b = stats(p)
        rows.append({"sigma": str(p), "des": b.des, "inv": b.inv,
                     "minimal_overlapping": overlap.is_minimal_overlapping(p).verdict})
    return {"kind": args.kind, "blocks": args.blocks, "rows": rows}


def cmd_verify_all(args) -> dict:
    only = [int(v) for v in args.only.split(",")] if args.only else None
    results = verify.run_all(only)
    out = {"checks": [r.to_json() for r in results],
           "passed": sum(r.passed for r in results), "total": len(results)}
    if not all(r.passed for r in results):
        raise Mismatch(out)
    return out


# -- output ------------------------------------------------------------------------

def _pretty(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}[{i}]")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def _csv(obj: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rows = obj.get("rows") if isinstance(obj, dict) else None
    if isinstance(rows, list) and rows and isinstance(rows[0], dict):
        cols = list(rows[0])
        w.writerow(cols)
        for r in rows:
            w.writerow([json.dumps(r[c]) if isinstance(r[c], (dict, list)) else r[c] for c in cols])
        return buf.getvalue()
    w.writerow(["key", "value"])
    for k, v in obj.items():
        w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
    return buf.getvalue()


def render(obj: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2) + "\n"
    if fmt == "csv":
        return _csv(obj)
    return "\n".join(_pretty(obj)) + "\n"


# -- parser ------------------------------------------------------------------------

def _add_pattern_opts(p):
    p.add_argument("--pattern", help="a single pattern, e.g. 13542")
    p.add_argument("--set", nargs="+", help="several patterns, space or comma separated")
    p.add_argument("--n", type=int, required=True, help="largest length")


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand; the copies
    # attached to subcommands default to SUPPRESS so they never overwrite
    def global_options(p, defaults: bool):
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        p.add_argument("--format", choices=("json", "csv", "pretty"), default=d("json"))
        p.add_argument("--threads", type=int, default=d(os.cpu_count() or 1),
                       help="worker threads (default: number of cores)")
        p.add_argument("--cache", default=d(None),
                       help="cache directory (default: $CWILF_CACHE, else no cache)")
        p.add_argument("--budget", type=int, default=d(None),
                       help="largest n to enumerate (default: $CWILF_BUDGET or 9)")
        p.add_argument("-v", "--verbose", action="store_true", default=d(False))

    common = argparse.ArgumentParser(add_help=False)
    global_options(common, defaults=False)
    ap = argparse.ArgumentParser(prog="cwilf", description=__doc__.strip().splitlines()[0])
    global_options(ap, defaults=True)
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name: str, help: str):
        return sub.add_parser(name, help=help, parents=[common])

    p = command("stats", "des, inv, coinv, lrmin of a permutation")
    p.add_argument("sigma")
    p.set_defaults(fn=cmd_stats)

    p = command("reduce", "reduce a word of distinct integers")
    p.add_argument("word")
    p.set_defaults(fn=cmd_reduce)

    p = command("match", "consecutive matches of patterns in a permutation")
    p.add_argument("sigma")
    p.add_argument("--patterns", nargs="+", required=True)
    p.set_defaults(fn=cmd_match)

    p = command("minoverlap", "is a pattern minimal overlapping")
    p.add_argument("tau")
    p.add_argument("--method", choices=overlap.METHODS, default="fast")
    p.set_defaults(fn=cmd_minoverlap)

    p = command("mutual", "are two patterns mutually minimal overlapping")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.add_argument("--method", choices=overlap.METHODS, default="fast")
    p.set_defaults(fn=cmd_mutual)

    p = command("packings", "maximum packings and mp(p,q)")
    p.add_argument("tau")
    p.add_argument("--n", type=int, required=True, help="largest number of matches")
    p.set_defaults(fn=cmd_packings)

    for name, fn, text in (("inm", cmd_inm, "INM polynomials by brute force"),
                           ("matchdist", cmd_matchdist, "match distribution by brute force")):
        p = command(name, text)
        _add_pattern_opts(p)
        if name == "matchdist":
            p.add_argument("--p1", action="store_true", help="set p = 1")
        p.set_defaults(fn=fn)

    p = command("iu", "IU polynomials, optionally checked against a recursion")
    _add_pattern_opts(p)
    p.add_argument("--check", choices=("thm-key", "thm-set"))
    p.set_defaults(fn=cmd_iu)

    p = command("nmxy", "lrmin/des polynomials of avoiders")
    _add_pattern_opts(p)
    p.add_argument("--via-u", action="store_true", help="also derive them as (1/U)^x and compare")
    p.set_defaults(fn=cmd_nmxy)

    p = command("recur", "run a recursion or closed form")
    p.add_argument("--family", required=True, choices=recursions.FAMILIES)
    p.add_argument("--pattern")
    p.add_argument("--set", nargs="+")
    p.add_argument("--p", type=int)
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--printed", action="store_true",
                   help="use the bounds/exponents exactly as usually stated")
    p.add_argument("--check-oracle", action="store_true")
    p.set_defaults(fn=cmd_recur)

    p = command("tabloids", "signed brick tabloid objects and the involution")
    p.add_argument("--set", nargs="+", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fixed-only", action="store_true")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--limit", type=int)
    p.set_defaults(fn=cmd_tabloids)

    p = command("classify", "c-Wilf classes up to n")
    p.add_argument("pattern_args", nargs="*", metavar="PATTERN")
    p.add_argument("--patterns", help="file with one pattern per line")
    p.add_argument("--stats", default="des")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_classify)

    p = command("phi", "apply the replacement bijection")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--sigma", required=True)
    p.set_defaults(fn=cmd_phi)

    p = command("family", "t/s family permutations")
    p.add_argument("kind", choices=("t", "s"))
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--variant", help="digits 1/2, one per block; all variants if omitted")
    p.set_defaults(fn=cmd_family)

    p = command("verify-all", "run every acceptance check")
    p.add_argument("--only", help="comma-separated check numbers")
    p.set_defaults(fn=cmd_verify_all)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    t0 = time.perf_counter()
    code = 0
    try:
        cfg = RunConfig.from_env(budget_n=args.budget, threads=args.threads,
                                 cache_dir=Path(args.cache) if args.cache else None,
                                 fmt=args.format)
        with use_config(cfg):
            result = args.fn(args)
    except Mismatch as m:
        result, code = m.report, 1
    except (InvalidInputError, OSError) as exc:
        print(f"cwilf: invalid input: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"cwilf: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"cwilf: consistency failure: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(render(result, args.format))
    log.info("%s finished in %.2fs", args.command, time.perf_counter() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
