"""Acceptance gate: every guarantee the package makes, checked exactly.

Each test covers one criterion and registers a single human-readable
PASS/FAIL line (printed in the terminal summary by conftest).  All checks
are exact — integer game theory leaves no tolerance to spend.

Oracle sweeps are shared between the characterization criteria and the
strategy-soundness criterion through a module-level cache, so each region
is solved exhaustively exactly once.
"""

import time

import numpy

from conftest import record_acceptance
from delsplit import cli
from delsplit.classifier import classify_heaps
from delsplit.core import PN, canonicalize, parse_ruleset
from delsplit.numtheory import (
    is_k_evenoid,
    is_k_oddoid,
    least_power_above,
    split_equal_valuation,
    split_evenoid_bounded,
    split_small,
    v2,
)
from delsplit.oracle import Oracle, region_oracle, strategy_violations, sweep
from delsplit.strategy import partitions_into

# every exhaustively verified region: (ruleset code, max heap size)
SWEEP_CONFIGS = (
    ("delete-nim", 64),
    ("vdn", 40),
    ("abo:3", 30),
    ("abo:4", 26),
    ("nmth:3", 24),
    ("nmth:4", 14),
    ("nmth:5", 10),
    ("half:2", 20),
    ("half:3", 10),
    ("kfrac:3,1", 30),
    ("kfrac:3,2", 11),
    ("single:3", 32),
    ("single:4", 16),
)

_SWEEPS: dict = {}


def get_sweep(code, max_heap):
    """Sweep the region once, caching (report, oracle, seconds)."""
    key = (code, max_heap)
    if key not in _SWEEPS:
        ruleset = parse_ruleset(code)
        oracle = region_oracle(ruleset, max_heap)
        start = time.perf_counter()
        report = sweep(ruleset, max_heap, oracle=oracle)
        _SWEEPS[key] = (report, oracle, time.perf_counter() - start)
    return _SWEEPS[key]


def check(name, passed, detail=""):
    record_acceptance(name, passed, detail)
    assert passed, f"{name}: {detail}"


def test_delete_nim_grundy_formula():
    ruleset = parse_ruleset("delete-nim")
    oracle = region_oracle(ruleset, 64)
    start = time.perf_counter()
    mismatches = sum(
        1
        for x in range(65)
        for y in range(65)
        if oracle.solve_grundy(ruleset, canonicalize(ruleset, (x, y)))
        != v2((x | y) + 1)
    )
    elapsed = time.perf_counter() - start
    check(
        "delete-nim: oracle grundy equals v2((x|y)+1) for 0 <= x,y <= 64",
        mismatches == 0 and elapsed < 5.0,
        f"4225 positions, {mismatches} mismatches, {elapsed:.2f}s",
    )


def test_vdn_matches_delete_nim_shifted_down():
    vdn = parse_ruleset("vdn")
    delete_nim = parse_ruleset("delete-nim")
    oracle = Oracle(max_tokens=96)
    mismatches = sum(
        1
        for x in range(1, 41)
        for y in range(1, 41)
        if oracle.solve_outcome(vdn, canonicalize(vdn, (x, y)))
        is not oracle.solve_outcome(delete_nim,
                                    canonicalize(delete_nim, (x - 1, y - 1)))
    )
    check(
        "vdn: oracle outcome of (x,y) equals delete-nim (x-1,y-1) for 1 <= x,y <= 40",
        mismatches == 0,
        f"1600 pairs, {mismatches} mismatches",
    )


def test_abo_characterization():
    report3, _, t3 = get_sweep("abo:3", 30)
    report4, _, t4 = get_sweep("abo:4", 26)
    elapsed = t3 + t4
    check(
        "abo: classifier matches oracle (n=3 heaps <= 30, n=4 heaps <= 26)",
        report3.mismatches == 0 and report4.mismatches == 0 and elapsed < 60.0,
        f"{len(report3.rows) + len(report4.rows)} positions, "
        f"{report3.mismatches + report4.mismatches} mismatches, {elapsed:.1f}s",
    )


def test_nmth_characterization():
    reports = [get_sweep(code, bound)[0]
               for code, bound in (("nmth:3", 24), ("nmth:4", 14), ("nmth:5", 10))]
    total = sum(len(r.rows) for r in reports)
    bad = sum(r.mismatches for r in reports)
    check(
        "nmth: classifier matches oracle (n=3 <= 24, n=4 <= 14, n=5 <= 10)",
        bad == 0,
        f"{total} positions, {bad} mismatches",
    )


def test_half_characterization():
    reports = [get_sweep(code, bound)[0]
               for code, bound in (("half:2", 20), ("half:3", 10))]
    total = sum(len(r.rows) for r in reports)
    bad = sum(r.mismatches for r in reports)
    check(
        "half: classifier matches oracle (m=2 heaps <= 20, m=3 heaps <= 10)",
        bad == 0,
        f"{total} positions, {bad} mismatches",
    )


def test_kfrac_characterization():
    report31, _, t31 = get_sweep("kfrac:3,1", 30)
    abo3 = get_sweep("abo:3", 30)[0]
    report32, _, t32 = get_sweep("kfrac:3,2", 11)
    rows_match = report31.rows == abo3.rows
    check(
        "kfrac: classifier matches oracle; (k=3,m=1) run identical to abo:3",
        rows_match
        and report31.mismatches == 0
        and report32.mismatches == 0
        and (t31 + t32) < 600.0,
        f"{len(report31.rows) + len(report32.rows)} positions, "
        f"{report31.mismatches + report32.mismatches} mismatches, "
        f"rows identical to abo:3: {rows_match}, {t31 + t32:.1f}s",
    )


def test_single_characterization_hits_every_case():
    report3 = get_sweep("single:3", 32)[0]
    report4 = get_sweep("single:4", 16)[0]
    ruleset4 = parse_ruleset("single:4")
    hit = {
        classify_heaps(ruleset4, row.heaps).certificate
        for row in report4.rows
        if row.closed is PN.P
    }
    wanted = {f"single4-case{i}" for i in range(1, 6)}
    missing = sorted(wanted - hit)
    check(
        "single: classifier matches oracle (n=3 <= 32, n=4 <= 16); "
        "all five n=4 cases observed",
        report3.mismatches == 0 and report4.mismatches == 0 and not missing,
        f"{len(report3.rows) + len(report4.rows)} positions, "
        f"{report3.mismatches + report4.mismatches} mismatches, "
        f"missing cases: {missing or 'none'}",
    )


def test_strategy_soundness_over_every_sweep():
    rows_checked = 0
    problems = []
    for code, bound in SWEEP_CONFIGS:
        report, oracle, _ = get_sweep(code, bound)
        rows_checked += len(report.rows)
        found = strategy_violations(parse_ruleset(code), report.rows, oracle)
        problems.extend(f"{code}: {p}" for p in found)
    check(
        "strategy: every N-position has a constructed winning move to a "
        "verified P successor; every P-position has none",
        not problems,
        f"{rows_checked} positions across {len(SWEEP_CONFIGS)} regions, "
        f"{len(problems)} violations",
    )


def test_number_theory_lemmas_at_scale():
    limit = 5000
    failures = []

    # additivity of the 2-adic valuation under +
    table = numpy.zeros(2 * limit + 1, dtype=numpy.int8)
    for z in range(2, 2 * limit + 1, 2):
        table[z] = table[z >> 1] + 1
    vy = table[1 : limit + 1]
    additivity_bad = 0
    for x in range(1, limit + 1):
        vx = int(table[x])
        vsum = table[x + 1 : x + limit + 1]
        ok = numpy.where(vy == vx, vsum > vx, vsum == numpy.minimum(vy, vx))
        additivity_bad += int(numpy.count_nonzero(~ok))
    if additivity_bad:
        failures.append(f"{additivity_bad} valuation-additivity violations")

    # the equal-valuation split (z - 2^j, 2^j) for every j below v2(z)
    split_bad = sum(
        1
        for z in range(1, limit + 1)
        for j in range(v2(z))
        for parts in [split_equal_valuation(z, j)]
        if sum(parts) != z or any(v2(part) != j for part in parts)
    )
    if split_bad:
        failures.append(f"{split_bad} equal-valuation split violations")

    # no k-oddoid number splits into k k-oddoid parts (k = 2, 3; z <= 60)
    oddoid_bad = sum(
        1
        for k in (2, 3)
        for z in range(1, 61)
        if is_k_oddoid(z, k)
        for parts in partitions_into(z, k)
        if all(is_k_oddoid(part, k) for part in parts)
    )
    if oddoid_bad:
        failures.append(f"{oddoid_bad} oddoid splits that should not exist")

    # near-equal split of the small window k..k(k-1): k parts in 1..k-1
    small_bad = 0
    for k in range(2, 9):
        for x in range(k, k * (k - 1) + 1):
            parts = split_small(x, k)
            if (len(parts) != k or sum(parts) != x or min(parts) < 1
                    or max(parts) > k - 1 or max(parts) - min(parts) > 1):
                small_bad += 1
    if small_bad:
        failures.append(f"{small_bad} near-equal split violations")

    # bounded evenoid split: k oddoid parts below k^(s-1) for minimal s
    evenoid_bad = 0
    for k in range(2, 9):
        for y in range(1, limit + 1):
            if not is_k_evenoid(y, k):
                continue
            s = least_power_above(k, y)
            parts = split_evenoid_bounded(y, k, s)
            bound = k ** (s - 1)
            if (len(parts) != k or sum(parts) != y
                    or any(not is_k_oddoid(part, k) or part >= bound
                           for part in parts)):
                evenoid_bad += 1
    if evenoid_bad:
        failures.append(f"{evenoid_bad} bounded evenoid split violations")

    check(
        "number theory: valuation additivity and all three split lemmas "
        "hold at scale (inputs <= 5000, k <= 8)",
        not failures,
        "; ".join(failures) or "0 violations",
    )


def test_cli_verify_passes_every_region():
    bad = [
        (code, bound, rc)
        for code, bound in SWEEP_CONFIGS
        for rc in [cli.main(["verify", "--ruleset", code,
                             "--max-heap", str(bound)])]
        if rc != 0
    ]
    check(
        "cli: `delsplit verify` exits 0 on every verified region",
        not bad,
        f"{len(SWEEP_CONFIGS)} regions, failures: {bad or 'none'}",
    )
