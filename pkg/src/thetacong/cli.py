"""Command line entry point: partition tables, verification suites, search.

    thetacong pr-table --r 1,17 --ell-min 5 --ell-max 7 --cache-dir cache
    thetacong verify etafamily --ell-max 50
    thetacong search --r 3-23:2 --ell-max 200 --m-max 200 --threads 4 --out verdicts.csv
    thetacong figure-pairs --out pairs.csv

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget-limited
search verdicts present.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .arith import primes_between
from .congruence.export import rows_to_csv, summarize, verdicts_to_csv, verdicts_to_json
from .congruence.search import SearchTask, ramanujan_check, search_grid
from .congruence.theorems import abnormal_verify, etafamily_verify, family_enumerate, figure_pairs
from .errors import HypothesisError, PrecisionError, ThetaCongError, VerificationError
from .etaforms import eta_pow
from .partitions import (
    ChecksumError,
    TableCache,
    build_f,
    build_f0_via_lemma,
    pr_exact,
    pr_mod,
    prtable_path,
    read_prtable,
    write_prtable,
)
from .qseries import first_difference, v_op

log = logging.getLogger("thetacong")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

SUITES = ("ramanujan", "lemma27", "etafamily", "abnormal", "decomposition")

# Ramanujan's three congruences for p(n); the ramanujan suite fails if these do.
KNOWN_RAMANUJAN = {(1, 5), (1, 7), (1, 11)}

ABNORMAL_PAIRS = (
    [(1, r, ell) for r, ell in ((23, 5), (23, 7), (47, 7), (47, 13), (71, 13))]
    + [(1, r, ell) for r, ell in ((71, 19), (95, 13), (95, 17), (119, 11), (119, 13))]
    + [(2, 21, 5), (2, 45, 7), (3, 23, 5)]
)

REPORT_COLUMNS = ("suite", "r", "ell", "case", "trunc", "status", "first_failure", "detail")


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """'3-23:2' -> 3, 5, ..., 23; '1,5,7' -> [1, 5, 7]; pieces may be mixed."""
    out: set[int] = set()
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            span, _, step_text = piece.partition(":")
            step = int(step_text) if step_text else 1
            lo, _, hi = span.partition("-")
            lo_i = int(lo)
            hi_i = int(hi) if hi else lo_i
        except ValueError as exc:
            raise UsageError(f"bad range {text!r}") from exc
        if step < 1 or hi_i < lo_i:
            raise UsageError(f"bad range {piece!r}")
        out.update(range(lo_i, hi_i + 1, step))
    return sorted(out)


@dataclass
class JobConfig:
    command: str
    r_values: list[int]
    ell_min: int
    ell_max: int
    m_min: int
    m_max: int
    deltas: tuple[int, ...]
    trunc: int
    n_max: int | None
    cache_dir: str | None
    out: str | None
    fmt: str
    threads: int
    no_build: bool = False
    force: bool = False
    exact: bool = False
    suite: str | None = None
    t_budget: int = 100_000
    case2: bool = False
    r_explicit: bool = False

    def ells(self) -> list[int]:
        return primes_between(max(self.ell_min, 5), self.ell_max)

    def pairs(self):
        """(r, ell) with ell prime in range; pairs with ell | r are skipped."""
        for r in self.r_values:
            for ell in self.ells():
                if r % ell == 0:
                    log.info("skipping r=%d, ell=%d: ell divides r", r, ell)
                    continue
                yield r, ell

    def cache(self) -> TableCache:
        return TableCache(self.cache_dir, build=not self.no_build)


def _emit(config: JobConfig, text: str):
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# pr-table


def cmd_pr_table(config: JobConfig) -> int:
    if not config.cache_dir:
        raise UsageError("pr-table needs --cache-dir")
    cache_dir = Path(config.cache_dir)
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        log.error("cannot create cache dir %s: %s", cache_dir, exc)
        return EXIT_FAIL
    n_max = config.n_max if config.n_max is not None else 10_000
    status = EXIT_OK
    rows = []
    jobs = [(r, None) for r in config.r_values] if config.exact else list(config.pairs())
    for r, ell in jobs:
        path = prtable_path(cache_dir, r, ell)
        if path.exists():
            try:
                have = read_prtable(path)
            except ChecksumError as exc:
                if not config.force:
                    log.error("%s; rerun with --force to rebuild", exc)
                    rows.append((r, ell or 0, n_max, "corrupt"))
                    status = EXIT_FAIL
                    continue
                have = None
            if have is not None and have.n_max >= n_max:
                rows.append((r, ell or 0, have.n_max, "kept"))
                continue
        table = pr_exact(r, n_max) if ell is None else pr_mod(r, ell, n_max)
        try:
            write_prtable(path, table)
        except OSError as exc:
            log.error("cannot write %s: %s", path, exc)
            return EXIT_FAIL
        rows.append((r, ell or 0, n_max, "written"))
    _emit(config, rows_to_csv(("r", "ell", "n_max", "action"), rows))
    return status


# ---------------------------------------------------------------------------
# verify


def _table_for(cache: TableCache | None, r: int, ell: int, n: int):
    return cache.get(r, ell, n) if cache is not None else None


def _suite_ramanujan(config: JobConfig, cache):
    n_probe = config.n_max if config.n_max is not None else 2000
    for r, ell in config.pairs():
        holds = ramanujan_check(r, ell, n_probe, cache)
        expected = (r, ell) in KNOWN_RAMANUJAN
        status = "pass" if holds else ("fail" if expected else "negative")
        yield ("ramanujan", r, ell, "", n_probe, status, "", "holds" if holds else "no congruence")


def _suite_lemma27(config: JobConfig, cache):
    for r, ell in config.pairs():
        table = _table_for(cache, r, ell, (ell * config.trunc + r) // 24)
        direct = build_f(r, ell, 0, config.trunc, table).series
        bad = first_difference(build_f0_via_lemma(r, ell, config.trunc), direct)
        yield ("lemma27", r, ell, "", config.trunc, "pass" if bad is None else "fail", "" if bad is None else bad, "")


def _suite_etafamily(config: JobConfig, cache):
    for row in family_enumerate(config.ell_max, config.ell_min, probe=False):
        for case, r in ((1, row.r1), (2, row.r2)):
            if r is None or (config.r_explicit and r not in config.r_values):
                continue
            table = _table_for(cache, r, row.ell, (row.ell * config.trunc + r) // 24)
            try:
                alpha = etafamily_verify(r, row.ell, case, config.trunc, table=table)
                yield ("etafamily", r, row.ell, case, config.trunc, "pass", "", f"alpha={alpha}")
            except VerificationError as exc:
                yield ("etafamily", r, row.ell, case, config.trunc, "fail", exc.index, str(exc))


def _suite_abnormal(config: JobConfig, cache):
    for case, r, ell in ABNORMAL_PAIRS:
        if not config.ell_min <= ell <= config.ell_max:
            continue
        if config.r_explicit and r not in config.r_values:
            continue
        table = _table_for(cache, r, ell, (ell * config.trunc + r) // 24)
        try:
            shape = abnormal_verify(r, ell, case, config.trunc, table=table)
            yield ("abnormal", r, ell, case, config.trunc, "pass", "", f"{shape.kind} alpha={shape.scalar}")
        except HypothesisError as exc:
            yield ("abnormal", r, ell, case, config.trunc, "fail", "", str(exc))
        except VerificationError as exc:
            yield ("abnormal", r, ell, case, config.trunc, "fail", exc.index, str(exc))


def _suite_decomposition(config: JobConfig, cache):
    trunc = config.trunc
    for r, ell in config.pairs():
        table = _table_for(cache, r, ell, (trunc + ell + r) // 24 + 1)
        f0 = build_f(r, ell, 0, trunc // ell + 1, table).series
        total = v_op(f0, ell).truncate(trunc)
        for delta in (-1, 1):
            total = total + build_f(r, ell, delta, trunc, table).series
        bad = first_difference(total, eta_pow(-r, ell, trunc))
        yield ("decomposition", r, ell, "", trunc, "pass" if bad is None else "fail", "" if bad is None else bad, "")


_SUITE_FUNCS = {
    "ramanujan": _suite_ramanujan,
    "lemma27": _suite_lemma27,
    "etafamily": _suite_etafamily,
    "abnormal": _suite_abnormal,
    "decomposition": _suite_decomposition,
}


def cmd_verify(config: JobConfig) -> int:
    if config.suite not in _SUITE_FUNCS:
        raise UsageError(f"unknown suite {config.suite!r}; choose from {', '.join(SUITES)}")
    cache = config.cache() if config.cache_dir else None
    try:
        rows = list(_SUITE_FUNCS[config.suite](config, cache))
    except FileNotFoundError as exc:
        log.error("%s (run pr-table first or drop --no-build)", exc)
        return EXIT_FAIL
    except PrecisionError as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    if config.fmt == "json":
        recs = [dict(zip(REPORT_COLUMNS, row)) for row in rows]
        _emit(config, json.dumps({"suite": config.suite, "checks": recs}, indent=1, sort_keys=True) + "\n")
    else:
        _emit(config, rows_to_csv(REPORT_COLUMNS, rows))
    return EXIT_FAIL if any(row[5] == "fail" for row in rows) else EXIT_OK


# ---------------------------------------------------------------------------
# search


def cmd_search(config: JobConfig) -> int:
    if any(r % 2 == 0 or r < 1 for r in config.r_values):
        raise UsageError("search needs odd positive r")
    tasks = [
        SearchTask(
            r, ell, config.deltas, config.m_min, config.m_max, config.t_budget,
            trunc=config.trunc, cache_dir=config.cache_dir,
        )
        for r, ell in config.pairs()
    ]
    verdicts = search_grid(tasks, config.threads)
    text = verdicts_to_json(verdicts) if config.fmt == "json" else verdicts_to_csv(verdicts)
    _emit(config, text)
    summary = summarize(verdicts)
    log.info("search summary: %s", {k: v for k, v in summary.items() if k != "candidate_triples"})
    return EXIT_BUDGET if summary["budget_limited"] else EXIT_OK


# ---------------------------------------------------------------------------
# figure-pairs


def cmd_figure_pairs(config: JobConfig) -> int:
    r_lo = min(config.r_values) if config.r_values else 1
    r_hi = max(config.r_values) if config.r_values else 501
    pairs = figure_pairs(r_hi, config.ell_min, config.ell_max, r_min=r_lo, include_case2=config.case2)
    rows = []
    for p in pairs:
        # re-derive the line from (r, ell) rather than trusting the enumerator
        offset = 1 if p.case == 1 else 3
        assert p.r == p.a * (p.ell - 1) - offset
        rows.append((p.r, p.ell, p.a, p.case))
    rows.sort()
    if config.fmt == "json":
        recs = [dict(zip(("r", "ell", "a", "case"), row)) for row in rows]
        _emit(config, json.dumps(recs, indent=1) + "\n")
    else:
        _emit(config, rows_to_csv(("r", "ell", "a", "case"), rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument handling

_DEFAULTS = {
    "pr-table": dict(r="1", ell_max=13),
    "verify": dict(r="1-23:2", ell_max=13),
    "search": dict(r="3-23:2", ell_max=200),
    "figure-pairs": dict(r="1-501", ell_max=1583),
}


# the family and sporadic suites cover their whole tables by default
_SUITE_ELL_MAX = {"etafamily": 50, "abnormal": 19}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", help="r values: '3-23:2', '1,17' (command-specific default)")
    common.add_argument("--ell-min", type=int, default=5)
    common.add_argument("--ell-max", type=int)
    common.add_argument("--m-min", type=int, default=5)
    common.add_argument("--m-max", type=int, default=200)
    common.add_argument("--delta", type=int, choices=(0, -1), action="append",
                        help="class delta to search; repeatable, default both 0 and -1")
    common.add_argument("--trunc", type=int, default=2000, help="grid truncation for series checks")
    common.add_argument("--n-max", type=int, help="table length (pr-table) or probe depth (ramanujan)")
    common.add_argument("--cache-dir")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--no-build", action="store_true", help="fail instead of building missing tables")
    common.add_argument("--force", action="store_true", help="rebuild cache files that fail their checksum")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="thetacong", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("pr-table", parents=[common], help="write p_r(n) mod ell cache files")
    p.add_argument("--exact", action="store_true", help="write exact integer tables instead")
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p = sub.add_parser("search", parents=[common], help="rule out theta-type congruences")
    p.add_argument("--t-budget", type=int, default=100_000)
    p = sub.add_parser("figure-pairs", parents=[common], help="list eta-family (r, ell) pairs")
    p.add_argument("--case2", action="store_true", help="include the eta^3 lines too")
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    defaults = _DEFAULTS[args.command]
    r_values = parse_range(args.r if args.r is not None else defaults["r"])
    ell_max = args.ell_max
    if ell_max is None:
        ell_max = _SUITE_ELL_MAX.get(getattr(args, "suite", None), defaults["ell_max"])
    if args.threads < 1:
        raise UsageError("--threads must be positive")
    if args.trunc < 0:
        raise UsageError("--trunc must be non-negative")
    return JobConfig(
        command=args.command,
        r_values=r_values,
        ell_min=args.ell_min,
        ell_max=ell_max,
        m_min=args.m_min,
        m_max=args.m_max,
        deltas=tuple(sorted(set(args.delta), reverse=True)) if args.delta else (0, -1),
        trunc=args.trunc,
        n_max=args.n_max,
        cache_dir=args.cache_dir,
        out=args.out,
        fmt=args.format,
        threads=args.threads,
        no_build=args.no_build,
        force=args.force,
        exact=getattr(args, "exact", False),
        suite=getattr(args, "suite", None),
        t_budget=getattr(args, "t_budget", 100_000),
        case2=getattr(args, "case2", False),
        r_explicit=args.r is not None,
    )


COMMANDS = {
    "pr-table": cmd_pr_table,
    "verify": cmd_verify,
    "search": cmd_search,
    "figure-pairs": cmd_figure_pairs,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
        return COMMANDS[config.command](config)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"thetacong: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ThetaCongError as exc:
        print(f"thetacong: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
