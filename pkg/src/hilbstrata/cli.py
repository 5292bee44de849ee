"""Command-line entry point: ``hilbstrata <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .border_relations import StratumData, commutator_relations, compare_relation_sources, hardrel_relations
from .cache import ResultsCache
from .config import ConfigError, CountingConfig
from .counting import BudgetExceeded
from .motivic import MotivicPoly, MotivicSeries, global_hilbert_series, hilbert_series_from_classes
from .partitions import MDPartition, PartitionError, enumerate_partitions
from .quotient_algebra import ideal_generators, round_trip, solution_set
from .stratum import StratumResult, eliminate, stratum_class, stratum_results

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
PRINTED_GLOBAL_ROWS = 5

log = logging.getLogger("hilbstrata")


def _emit(record, fmt: str, text: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _config(args) -> CountingConfig:
    primes = None
    if args.primes:
        try:
            primes = tuple(int(x) for x in args.primes.split(","))
        except ValueError:
            raise ConfigError(f"bad --primes list: {args.primes!r}") from None
    return CountingConfig.from_env(
        primes=primes,
        holdout_count=args.holdout,
        budget=args.budget,
        workers=args.workers,
        assume_polynomial=args.assume_polynomial_count or None,
        cache_path=args.cache,
        seed=args.seed,
        method=args.method,
    )


def _cache(cfg: CountingConfig):
    return ResultsCache(cfg.cache_path, cfg) if cfg.cache_path else None


def _kind(results: list[StratumResult], cfg: CountingConfig) -> str:
    if any(r.from_counts for r in results) and not cfg.assume_polynomial:
        return "counting polynomial"
    return "class"


def punctual_rows(m: int, n_max: int, cfg: CountingConfig, cache=None) -> list[dict]:
    rows = []
    for n in range(1, n_max + 1):
        results = stratum_results(m, n, cfg, cache)
        total = MotivicPoly.zero()
        flagged = []
        for r in results:
            if r.klass is None:
                flagged.append(r.lam.to_json())
            else:
                total = total + r.klass
        rows.append(
            {
                "n": n,
                "class": total.to_json(),
                "class_text": total.pretty(),
                "kind": _kind(results, cfg),
                "unresolved": flagged,
                "strata": [r.summary_json() for r in results],
            }
        )
    return rows


def _row_text(row: dict) -> str:
    s = row["class_text"]
    for lam in row["unresolved"]:
        s += f" + [V {json.dumps(lam['entries'])}]"
    return s


def cmd_partitions(args) -> int:
    lams = enumerate_partitions(args.dim, args.n)
    if args.count_only:
        _emit({"m": args.dim, "n": args.n, "count": len(lams)}, args.format, str(len(lams)))
        return EXIT_OK
    for lam in lams:
        print(json.dumps(lam.to_json()))
    return EXIT_OK


def _load_partition(path: str) -> MDPartition:
    raw = sys.stdin.read() if path == "-" else Path(path).read_text()
    return MDPartition.from_json(json.loads(raw))


def cmd_stratum(args) -> int:
    cfg = _config(args)
    lam = _load_partition(args.partition)
    data = StratumData(lam)
    system = commutator_relations(lam, data)
    emit = args.emit
    base = {"lambda": lam.to_json(), "emit": emit}
    if emit == "variables":
        rec = base | {"variables": system.to_json()["variables"]}
        text = "\n".join(v.name for v in system.variables) or "(no variables)"
    elif emit == "relations":
        rec = base | system.to_json()
        text = "\n".join(system.format_relations()) or "(no relations)"
    elif emit == "residual":
        residual = eliminate(system)
        rec = base | residual.to_json(system.name) | {"dimension": residual.dimension}
        if residual.empty:
            text = "empty"
        elif residual.affine:
            text = f"affine, dim {residual.dimension}"
        else:
            text = f"not affine, ambient dim {residual.dimension}\n" + "\n".join(
                rec["residual_relations_text"]
            )
    elif emit == "generators":
        gens = ideal_generators(lam, data=data)
        rec = base | {"generators": gens}
        text = "(" + ",\n ".join(gens) + ")"
    else:
        cache = _cache(cfg)
        result = cache.get(lam) if cache else None
        if result is None:
            try:
                result = stratum_class(lam, cfg)
            except BudgetExceeded as exc:
                _emit(base | {"error": str(exc)}, args.format, f"budget exceeded: {exc}")
                return EXIT_BUDGET
            if cache:
                cache.put(result)
        kind = _kind([result], cfg)
        rec = base | result.summary_json() | {"kind": kind}
        if result.klass is None:
            text = f"not polynomial: {result.evidence.reason}\ncounts: {rec['counts']}"
        else:
            text = str(result.klass)
    _emit(rec, args.format, text)
    return EXIT_OK


def cmd_punctual(args) -> int:
    cfg = _config(args)
    cache = _cache(cfg)
    try:
        rows = punctual_rows(args.dim, args.n, cfg, cache)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if args.format == "json":
        for row in rows:
            if not args.breakdown:
                row = {k: v for k, v in row.items() if k != "strata"}
            print(json.dumps({"m": args.dim} | row, sort_keys=True))
        return EXIT_OK
    print(f"n | [Hilb_0^n(A^{args.dim + 1})]")
    for row in rows:
        tag = "" if row["kind"] == "class" else "  (counting polynomial)"
        print(f"{row['n']} | {_row_text(row)}{tag}")
        if args.breakdown:
            for s in row["strata"]:
                lam = MDPartition.from_json(s["lambda"])
                cls = s["class_text"] if s["class_text"] is not None else "?"
                flag = "" if s["affine"] else "  [non-affine]"
                print(f"    {lam}: {cls}{flag}")
    return EXIT_OK


def global_series(N: int, cfg: CountingConfig, cache=None) -> tuple[list[dict], MotivicSeries, MotivicSeries]:
    rows = punctual_rows(2, N, cfg, cache)
    unresolved = [lam for r in rows for lam in r["unresolved"]]
    if unresolved:
        raise ValueError(f"punctual classes unresolved for {unresolved}")
    punctual = hilbert_series_from_classes([MotivicPoly(tuple(r["class"])) for r in rows], N)
    return rows, punctual, global_hilbert_series(3, N, punctual)


def cmd_global(args) -> int:
    cfg = _config(args)
    cache = _cache(cfg)
    try:
        rows, punctual, glob = global_series(args.n, cfg, cache)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VERIFY
    if args.format == "json":
        print(json.dumps({"punctual": punctual.to_json(), "global": glob.to_json()}, sort_keys=True))
        return EXIT_OK
    print("n | [Hilb^n(A^3)]")
    for n in range(1, args.n + 1):
        note = "  (prediction)" if n > PRINTED_GLOBAL_ROWS else ""
        print(f"{n} | {glob[n].pretty()}{note}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    qs = [int(x) for x in args.q.split(",")]
    failures = 0
    for lam in enumerate_partitions(args.dim, args.n):
        if lam.n == 0:
            continue
        for q in qs:
            rep = round_trip(lam, q, args.samples, seed=cfg.seed, budget=cfg.budget)
            print(json.dumps(rep.to_json(), sort_keys=True))
            if not rep.ok:
                failures += 1
                print(f"FAIL {lam} q={q}: {rep.detail}", file=sys.stderr)
        if lam.n <= 4:
            diff = compare_relation_sources(lam)
            if diff:
                print(f"note: relation sources differ at {diff[0]} for {lam}", file=sys.stderr)
            for q in qs:
                same = solution_set(commutator_relations(lam), q) == solution_set(hardrel_relations(lam), q)
                if not same:
                    failures += 1
                    print(f"FAIL {lam} q={q}: solution sets of the two relation systems differ", file=sys.stderr)
    cache = _cache(cfg)
    if cache is not None:
        for (m, enc), rec in sorted(cache.records(args.dim).items()):
            try:
                cached = StratumResult.from_record(rec)
            except (KeyError, TypeError, ValueError) as exc:
                failures += 1
                print(f"FAIL cache entry {enc}: unreadable ({exc})", file=sys.stderr)
                continue
            if cached.lam.n > args.n:
                continue
            fresh = stratum_class(cached.lam, cfg)
            if fresh.summary_json() != cached.summary_json():
                failures += 1
                print(f"FAIL cache entry {enc}: does not match recomputation", file=sys.stderr)
    return EXIT_VERIFY if failures else EXIT_OK


def stability_table(rows: list[dict]) -> dict:
    """Coefficient of L^k in the punctual class for each n, and where it settles."""
    n_vals = [r["n"] for r in rows]
    width = max(len(r["class"]) for r in rows)
    table = {}
    for k in range(width):
        col = [r["class"][k] if k < len(r["class"]) else 0 for r in rows]
        # first n from which the coefficient no longer changes (needs two equal values)
        start = None
        for i in range(len(col) - 1, 0, -1):
            if col[i] == col[i - 1]:
                start = n_vals[i - 1]
            else:
                break
        table[k] = {"values": col, "stable_from": start}
    return {"n": n_vals, "coefficients": {str(k): v for k, v in table.items()}}


def cmd_stability(args) -> int:
    cfg = _config(args)
    cache = _cache(cfg)
    try:
        rows = punctual_rows(args.dim, args.n_max, cfg, cache)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    tab = stability_table(rows)
    if args.format == "json":
        print(json.dumps(tab, sort_keys=True))
        return EXIT_OK
    print("k   | " + " ".join(f"n={n:<3}" for n in tab["n"]) + " | stable from")
    for k, ent in tab["coefficients"].items():
        vals = " ".join(f"{v:<5}" for v in ent["values"])
        sf = f"n={ent['stable_from']}" if ent["stable_from"] else "-"
        print(f"L^{k:<2}| {vals} | {sf}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", help="results cache (JSON lines); env HILBSTRATA_CACHE")
    common.add_argument("--workers", type=int, help="parallel strata; env HILBSTRATA_WORKERS")
    common.add_argument("--budget", type=int, help="max assignments per count")
    common.add_argument("--primes", help="comma-separated ascending primes for counting")
    common.add_argument("--holdout", type=int, help="validation primes beyond interpolation nodes")
    common.add_argument("--seed", type=int)
    common.add_argument("--method", choices=["split", "brute"], help="point-counting engine")
    common.add_argument("--assume-polynomial-count", action="store_true",
                        help="present interpolated point counts as classes")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="hilbstrata", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("partitions", parents=[common], help="enumerate m-dimensional partitions")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count-only", action="store_true")
    sp.set_defaults(func=cmd_partitions)

    sp = sub.add_parser("stratum", parents=[common], help="artifacts of a single stratum")
    sp.add_argument("--partition", required=True, help="partition JSON file ('-' for stdin)")
    sp.add_argument("--emit", required=True,
                    choices=["variables", "relations", "residual", "class", "generators"])
    sp.set_defaults(func=cmd_stratum)

    sp = sub.add_parser("punctual", parents=[common], help="punctual Hilbert scheme classes")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--breakdown", action="store_true", help="per-partition classes")
    sp.set_defaults(func=cmd_punctual)

    sp = sub.add_parser("global", parents=[common], help="classes of Hilb^n(A^3)")
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_global)

    sp = sub.add_parser("verify", parents=[common], help="matrix round-trip oracle")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", default="2,3")
    sp.add_argument("--samples", type=int, default=50)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("stability", parents=[common], help="coefficient stability across n")
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--n-max", type=int, required=True)
    sp.set_defaults(func=cmd_stability)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    for attr in ("dim", "n", "n_max", "samples"):
        val = getattr(args, attr, None)
        if val is not None and val < (1 if attr == "dim" else 0):
            parser.error(f"--{attr.replace('_', '-')} out of range: {val}")
    try:
        return args.func(args)
    except (PartitionError, ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("interrupted; finished strata are in the cache", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
