"""Full-size acceptance checks, one test per criterion.

Each test prints a single ``criterion N PASS|FAIL`` line; the lines are
repeated in the terminal summary.  Sizes and time limits are the stated ones.
"""

import json
import random
import time

import pytest

from cubechrome.cli import main
from cubechrome.coloring import PartialColoring, is_proper
from cubechrome.enumeration import CLAIM_BOUNDS, canonical_key
from cubechrome.figure1 import configurations
from cubechrome.generators import Family, InstanceSpec, random_instance, satisfies
from cubechrome.hypercube import build
from cubechrome.solver import ImproperPrecoloring, Status, avoid_exact, extend_exact
from cubechrome.verify import run_verification

from oracles import naive_avoidable, naive_extendable

pytestmark = pytest.mark.acceptance

MINUTE = 60


def _enumerate(tmp_path, capsys, *flags):
    out = tmp_path / "catalog.jsonl"
    t0 = time.perf_counter()
    code = main(["enumerate", "--d", "3", "--output", str(out), *flags])
    capsys.readouterr()
    rows = [json.loads(x) for x in out.read_text().splitlines()]
    return code, rows, time.perf_counter() - t0


def test_criterion_01_proper_catalog(tmp_path, capsys, criterion):
    code, rows, dt = _enumerate(tmp_path, capsys, "--proper")
    drawn = {canonical_key(phi).hex() for phi in configurations()}
    keys = {r["key"] for r in rows}
    ok = code == 0 and len(rows) == 6 and keys == drawn and dt < 5 * MINUTE
    criterion(1, ok, f"{len(rows)} proper configurations, drawn keys matched={keys == drawn}, {dt:.1f}s")


def test_criterion_02_general_catalog(tmp_path, capsys, criterion):
    code, rows, dt = _enumerate(tmp_path, capsys)
    ok = code == 0 and len(rows) == 29 and dt < 30 * MINUTE
    criterion(2, ok, f"{len(rows)} configurations, {dt:.1f}s")


def _kinds(rep):
    groups = {k: v for k, v in rep.breakdown.items() if k != "kinds"}
    return groups, rep.breakdown.get("kinds", {})


def test_criterion_03_extension_classifier(criterion):
    rep = run_verification("th15", {"exhaustive_dims": [3], "samples": 100_000, "seed": 1})
    groups, kinds = _kinds(rep)
    q3, q4 = groups["Q3 exhaustive"], groups["Q4 sampled"]
    ok = rep.failed == 0 and q4["instances"] >= 100_000 and rep.elapsed < 10 * MINUTE
    criterion(
        3,
        ok,
        f"Q3 {q3['instances']} exhaustive, Q4 {q4['instances']} sampled, "
        f"{rep.failed} disagreements, kinds {kinds}, {rep.elapsed:.1f}s",
    )


def test_criterion_04_extend_avoid_classifier(criterion):
    rep = run_verification("th16", {"exhaustive_dims": [3], "samples": 100_000, "seed": 1})
    groups, kinds = _kinds(rep)
    q3, q4 = groups["Q3 exhaustive"], groups["Q4 sampled"]
    ok = rep.failed == 0 and q4["instances"] >= 100_000 and rep.elapsed < 20 * MINUTE
    criterion(
        4,
        ok,
        f"Q3 {q3['instances']} exhaustive pairs, Q4 {q4['instances']} sampled, "
        f"{rep.failed} disagreements or bad witnesses, kinds {kinds}, {rep.elapsed:.1f}s",
    )


CONSTRUCTION_IDS = ["lem7", "prop9", "th13", "prop10", "cor1", "cor2", "cor3", "cor4"]
CONSTRUCTION_FAMILIES = {
    "lem7": (Family.SINGLE, [3, 4, 5, 6]),
    "prop9": (Family.THREE, [3, 4, 5, 6]),
    "th13": (Family.PROPER_D2, [3, 4, 5, 6]),
    "prop10": (Family.HALF, [3, 4, 5, 6]),
    "cor1": (Family.MATCHING, [3, 6]),
    "cor2": (Family.FEW_MATCHINGS, [3, 4, 5, 6]),
    "cor3": (Family.PROPER_2FLOOR, [3, 4, 5, 6]),
    "cor4": (Family.INDUCED_3K, [3, 6]),
}


def test_criterion_05_constructions(criterion):
    t0 = time.perf_counter()
    total = failed = 0
    detail = []
    in_class = True
    for tid in CONSTRUCTION_IDS:
        family, dims = CONSTRUCTION_FAMILIES[tid]
        rep = run_verification(tid, {"samples": 1000, "dims": dims, "seed": 0})
        # the instances handed to each construction meet its hypothesis class
        in_class &= all(satisfies(InstanceSpec(family, d, s), random_instance(InstanceSpec(family, d, s)))
                        for d in dims for s in range(0, 1000, 97))
        per_d = {k: v["instances"] for k, v in rep.breakdown.items()}
        ok_d = all(n == 1000 for n in per_d.values()) and len(per_d) == len(dims)
        total += rep.instances
        failed += rep.failed + (0 if ok_d else 1)
        detail.append(f"{tid}={rep.passed}/{rep.instances}")
    dt = time.perf_counter() - t0
    ok = failed == 0 and in_class and dt < 15 * MINUTE
    criterion(5, ok, f"{total} instances, {failed} failures ({', '.join(detail)}), {dt:.1f}s")


def test_criterion_06_small_cube_lemmas(criterion):
    reps = [run_verification(t) for t in ("lem11", "lem12", "lem14")]
    dt = sum(r.elapsed for r in reps)
    ok = all(r.status == "PASS" for r in reps) and dt < 5 * MINUTE
    criterion(6, ok, ", ".join(f"{r.theorem} {r.passed}/{r.instances}" for r in reps) + f", {dt:.1f}s")


def test_criterion_07_counterexamples(criterion):
    rep = run_verification("prop3", {"dims": [2, 3, 4], "near_dims": [3, 4], "budget": 3_000_000})
    statuses = [f"{f['d']}:{f['status']}" for f in rep.failures]
    ok = rep.status == "PASS" and rep.instances == 5 and rep.elapsed < 10 * MINUTE
    criterion(7, ok, f"{rep.passed}/{rep.instances} proven unavoidable {statuses or ''} {rep.notes or ''}, {rep.elapsed:.1f}s")


def test_criterion_08_four_cycles(criterion):
    rep = run_verification("lem4", {"max_d": 10})
    ok = rep.status == "PASS" and rep.instances == 9
    criterion(8, ok, f"d=2..10 all edges checked, {rep.failed} dimensions with bad edges, {rep.elapsed:.1f}s")


def test_criterion_09_claim_table(criterion):
    rep = run_verification("claim1", {"samples": 10_000, "enumerate_up_to": 8, "seed": 0})
    table = rep.breakdown["table"]
    low = all(r["observed"] == 0 for r in table if r["a"] <= 6)
    high = all(r["observed"] <= CLAIM_BOUNDS[r["a"]] for r in table)
    covered = {r["a"] for r in table} == set(range(13))
    sampled = all(r["instances"] == 10_000 for r in table if r["mode"] == "sampled")
    ok = low and high and covered and sampled and rep.elapsed < 30 * MINUTE
    shown = " ".join(f"a={r['a']}:{r['observed']}/{r['bound']}" for r in table)
    criterion(9, ok, f"{shown}, {rep.elapsed:.1f}s")


def test_criterion_10_rebalancing(criterion):
    reps = [run_verification(t, {"samples": 100, "dims": [8, 10, 12], "stress_samples": 20}) for t in ("th8i", "th8ii")]
    dt = sum(r.elapsed for r in reps)
    per = []
    ok = dt < 10 * MINUTE
    for r in reps:
        stated = {k: v for k, v in r.breakdown.items() if k.startswith("sparse d=")}
        ok &= r.status == "PASS" and len(stated) == 3 and all(v["instances"] == 100 for v in stated.values())
        per.append(f"{r.theorem} {r.passed}/{r.instances} ({'; '.join(r.notes)})")
    criterion(10, ok, " | ".join(per) + f", {dt:.1f}s")


def test_criterion_11_relabeling(criterion):
    rep = run_verification("prop4", {"samples": 1000, "max_d": 8})
    ok = rep.status == "PASS" and rep.instances == 1000 * 3 * sum(d - 1 for d in range(2, 9))
    criterion(11, ok, f"{rep.passed}/{rep.instances} relabelings verified ({', '.join(rep.breakdown)}), {rep.elapsed:.1f}s")


def test_criterion_12_solver_cross_check(criterion):
    t0 = time.perf_counter()
    rng = random.Random(12)
    checked = mismatches = 0
    for d in (2, 3):
        cube = build(d)
        ends = cube.endpoints
        for _ in range(1000):
            density = rng.random()
            cs = tuple(rng.randint(1, d) if rng.random() < density else 0 for _ in range(cube.n_edges))
            phi = PartialColoring(cube, d, cs)
            mismatches += (avoid_exact(cube, phi).status is Status.FOUND) != naive_avoidable(ends, cs, d)
            try:
                found = extend_exact(cube, phi).status is Status.FOUND
            except ImproperPrecoloring:
                found = False
                mismatches += is_proper(phi)
            mismatches += found != naive_extendable(ends, cs, d)
            checked += 1
    dt = time.perf_counter() - t0
    criterion(12, mismatches == 0, f"{checked} partial colorings on Q2/Q3, {mismatches} disagreements, {dt:.1f}s")
