"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
verdict lines.  Expected values come from independent oracles computed inside
this module (brute-force enumeration, Riemann sums, closed forms), never from
the code paths under test.
"""

import itertools
import json
import math

import numpy as np
import pytest

from lawprice import (
    AtomSpace,
    Market,
    Payoff,
    atom_indexed_acceptance,
    collapse_scan,
    condition,
    choquet_eval,
    conditioning_closure_check,
    convex_order_geq,
    convex_order_oracle,
    entropic,
    es_loss_acceptance,
    evaluate,
    expectation,
    expectation_acceptance,
    expectation_functional,
    expected_shortfall,
    floor_gauge,
    gate,
    hl_product,
    is_frictionless,
    is_strongly_frictionless,
    law_invariance_witness,
    luxemburg_norm,
    max_correlation_oracle,
    mean_abs_dev,
    min_loss_acceptance,
    pointedness_check,
    power_distortion,
    choquet_functional,
    random_partition,
    recession,
    risk_measure,
    spread,
    z_additivity_check,
)
from lawprice.orlicz import delta2_check, exp_young, linf_young, power_young
from lawprice.cli import main as cli_main


def _verdict(num: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"[ACCEPTANCE] criterion {num:2d} ({name}): {'PASS' if ok else 'FAIL'}"
    if detail and not ok:
        line += f"  -- {detail}"
    print(line)
    assert ok, f"criterion {num} ({name}) failed: {detail}"


# ---------------------------------------------------------------------------
# 1. maximal-correlation exactness
# ---------------------------------------------------------------------------

def test_criterion_1_hardy_littlewood_exactness():
    rng = np.random.default_rng(101)
    mismatches = 0
    for _ in range(500):
        n = int(rng.integers(2, 9))
        space = AtomSpace(n)
        x = Payoff(space, rng.integers(-5, 6, size=n).astype(float))
        y = Payoff(space, rng.integers(-5, 6, size=n).astype(float))
        if hl_product(x, y) != max_correlation_oracle(x, y):
            mismatches += 1
    _verdict(1, "hardy-littlewood exactness", mismatches == 0, f"{mismatches} mismatches")


# ---------------------------------------------------------------------------
# 2. Choquet consistency
# ---------------------------------------------------------------------------

def _choquet_riemann(dist, x: Payoff, steps: int = 100_000) -> float:
    """Midpoint Riemann sum of the survival-function integral, split at 0."""
    vals = np.sort(x.values)
    lo = min(float(vals[0]), 0.0)
    hi = max(float(vals[-1]), 0.0)
    if hi == lo:
        return 0.0
    width = (hi - lo) / steps
    xs = lo + width * (np.arange(steps) + 0.5)
    survival = (vals.size - np.searchsorted(vals, xs, side="right")) / vals.size
    c = np.asarray(dist.g(survival), dtype=float)
    integrand = np.where(xs < 0.0, c - 1.0, c)
    return float(integrand.sum() * width)


def _comonotone_pair_from_ranks(rng, n: int) -> tuple[Payoff, Payoff]:
    space = AtomSpace(n)
    z = rng.normal(size=n)
    uniq, inv = np.unique(z, return_inverse=True)
    f = np.sort(rng.normal(0.0, 2.0, size=uniq.size))
    g = np.sort(rng.uniform(-3.0, 3.0, size=uniq.size))
    return Payoff(space, f[inv]), Payoff(space, g[inv])


def test_criterion_2_choquet_consistency():
    rng = np.random.default_rng(202)
    worst_gap = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 11))
        x = Payoff(AtomSpace(n), rng.uniform(-2.0, 2.0, size=n))
        for gamma in (0.5, 1.0, 2.0):
            dist = power_distortion(gamma)
            gap = abs(choquet_eval(dist, x) - _choquet_riemann(dist, x))
            worst_gap = max(worst_gap, gap)
    riemann_ok = worst_gap <= 1e-4

    dist = power_distortion(0.5)
    worst_add = 0.0
    for _ in range(200):
        x, y = _comonotone_pair_from_ranks(rng, int(rng.integers(2, 7)))
        lhs = choquet_eval(dist, x + y)
        rhs = choquet_eval(dist, x) + choquet_eval(dist, y)
        worst_add = max(worst_add, abs(lhs - rhs))
    additive_ok = worst_add <= 1e-10

    _verdict(
        2,
        "choquet consistency",
        riemann_ok and additive_ok,
        f"riemann gap {worst_gap:.2e}, additivity gap {worst_add:.2e}",
    )


# ---------------------------------------------------------------------------
# 3. convex-order cross-validation
# ---------------------------------------------------------------------------

def test_criterion_3_convex_order_cross_validation():
    grid = (-2, -1, 0, 1, 2)
    disagreements = 0
    checked = 0

    def agree(x: Payoff, y: Payoff) -> bool:
        return convex_order_geq(x, y, tol=0.0) == convex_order_oracle(x, y)

    # full products for n <= 3
    for n in (1, 2, 3):
        space = AtomSpace(n)
        vectors = [Payoff(space, np.array(v, dtype=float)) for v in itertools.product(grid, repeat=n)]
        for x in vectors:
            for y in vectors:
                checked += 1
                if not agree(x, y):
                    disagreements += 1

    # n = 4: both routes sort first, so sorted representatives cover all pairs;
    # permutation invariance is checked explicitly below
    space = AtomSpace(4)
    reps = [
        Payoff(space, np.array(v, dtype=float))
        for v in itertools.combinations_with_replacement(grid, 4)
    ]
    for x in reps:
        for y in reps:
            checked += 1
            if not agree(x, y):
                disagreements += 1

    rng = np.random.default_rng(303)
    perm_ok = True
    for _ in range(50):
        x = Payoff(space, rng.integers(-2, 3, size=4).astype(float))
        y = Payoff(space, rng.integers(-2, 3, size=4).astype(float))
        base_geq = convex_order_geq(x, y, tol=0.0)
        base_orc = convex_order_oracle(x, y)
        for _ in range(8):
            xp = Payoff(space, x.values[rng.permutation(4)])
            yp = Payoff(space, y.values[rng.permutation(4)])
            perm_ok &= convex_order_geq(xp, yp, tol=0.0) == base_geq
            perm_ok &= convex_order_oracle(xp, yp) == base_orc

    _verdict(
        3,
        "convex-order cross-validation",
        disagreements == 0 and perm_ok,
        f"{disagreements}/{checked} disagreements, permutation-invariant={perm_ok}",
    )


# ---------------------------------------------------------------------------
# 4. collapse dichotomy
# ---------------------------------------------------------------------------

def test_criterion_4_collapse_dichotomy():
    problems = []

    for c in (0.5, 1.0, 2.0):
        rep = collapse_scan(expectation_functional(c), AtomSpace(10), tol=1e-9, seed=404, budget=10)
        if rep.verdict != "COLLAPSE" or abs(rep.c - c) > 1e-9 or rep.linearity_residual > 1e-9:
            problems.append(f"expectation({c}): {rep.verdict}, c={rep.c}")

    for beta in (0.5, 0.9):
        rep = collapse_scan(expected_shortfall(beta), AtomSpace(10), tol=1e-9, seed=404, budget=10)
        if rep.verdict != "NO_FRICTIONLESS_RISKY" or rep.min_objective < 1e-3:
            problems.append(f"es({beta}) n=10: {rep.verdict}, min={rep.min_objective}")
        two_point = collapse_scan(expected_shortfall(beta), AtomSpace(2), tol=1e-9, seed=404, budget=6)
        if two_point.certificate != "exhaustive-grid(n<=3)" or two_point.min_objective < 1e-3:
            problems.append(f"es({beta}) n=2 certificate: {two_point.min_objective}")

    rep = collapse_scan(gate(), AtomSpace(10), tol=1e-9, seed=404, budget=10)
    witness_mean_ok = abs(rep.best_witness_mean) <= math.sqrt(1e-9)
    witness_frictionless = rep.best_witness_objective <= 1e-9
    if rep.verdict != "BOUNDARY" or not (witness_mean_ok and witness_frictionless):
        problems.append(f"gate: {rep.verdict}, mean={rep.best_witness_mean}")

    _verdict(4, "collapse dichotomy", not problems, "; ".join(problems))


# ---------------------------------------------------------------------------
# 5. convex counterexample: friction vanishes at unit volume only
# ---------------------------------------------------------------------------

def test_criterion_5_floor_gauge_counterexample():
    f = floor_gauge()
    x = Payoff(AtomSpace(2), [-1.0, 1.0])
    problems = []
    if spread(f, x) != 0.0:
        problems.append(f"spread {spread(f, x)}")
    if not is_frictionless(f, x, tol=1e-12):
        problems.append("not frictionless")
    if is_strongly_frictionless(f, x, tol=1e-9):
        problems.append("volume linearity should fail")
    if evaluate(f, 2.0 * x) != 1.0:
        problems.append(f"F(2X) = {evaluate(f, 2.0 * x)} != 1")
    rec = recession(f, x, lambda_max=1e6)
    # the grid supremum 1 - 1/lambda_max sits exactly at the tolerance, so the
    # comparison is boundary-inclusive up to one float rounding of the ratio
    if abs(rec.value - 1.0) > 1e-6 * (1.0 + 1e-9):
        problems.append(f"recession {rec.value!r}")
    _verdict(5, "unit-volume-only frictionless payoff", not problems, "; ".join(problems))


# ---------------------------------------------------------------------------
# 6. volume-linearity equivalences
# ---------------------------------------------------------------------------

def test_criterion_6_volume_equivalences():
    rng = np.random.default_rng(606)
    members = (expected_shortfall(0.5), mean_abs_dev(0.5), expectation_functional(1.0))
    problems = []
    for i in range(200):
        f = members[i % 3]
        n = int(rng.integers(2, 8))
        space = AtomSpace(n)
        style = i % 4
        if style == 0:
            z = Payoff.constant(space, float(rng.normal()))
        elif style == 1:
            raw = rng.normal(size=n)
            z = Payoff(space, raw - raw.mean())
        else:
            z = Payoff(space, rng.normal(0, 2, size=n))
        frictionless = is_frictionless(f, z, tol=1e-9)
        strong = is_strongly_frictionless(f, z, tol=1e-9)
        additive = z_additivity_check(f, z, trials=40, tol=1e-8, seed=i).not_falsified
        if not (frictionless == strong == additive):
            problems.append(f"{f.name}: fl={frictionless} strong={strong} add={additive}")

    ent = entropic(1.0)
    for i in range(40):
        n = int(rng.integers(2, 8))
        space = AtomSpace(n)
        z = Payoff(space, rng.normal(0, 1.5, size=n))
        if float(np.ptp(z.values)) < 1e-6:
            continue
        if is_strongly_frictionless(ent, z, tol=1e-8):
            problems.append(f"entropic passed a nonconstant payoff {z.values}")
        const = Payoff.constant(space, float(rng.normal()))
        if not is_strongly_frictionless(ent, const, tol=1e-8):
            problems.append("entropic failed a constant payoff")

    _verdict(6, "volume-linearity equivalences", not problems, "; ".join(problems[:3]))


# ---------------------------------------------------------------------------
# 7. capital-requirement suite
# ---------------------------------------------------------------------------

def test_criterion_7_capital_suite():
    problems = []

    # closed form: cash-only market with the nonnegative-mean set
    space = AtomSpace(8)
    acc = expectation_acceptance(space)
    cash = Market(basis=(Payoff.constant(space, 1.0),), prices=np.array([1.0]))
    rng = np.random.default_rng(707)
    worst = 0.0
    for _ in range(100):
        x = Payoff(space, rng.normal(0.0, 2.0, size=8))
        worst = max(worst, abs(risk_measure(acc, cash, x, tol=1e-11) + expectation(x)))
    if worst > 1e-9:
        problems.append(f"closed form gap {worst:.2e}")

    # law invariance passes exactly for law-invariant sets
    space6 = AtomSpace(6)
    es_acc = es_loss_acceptance(space6, 0.5)
    cash6 = Market(basis=(Payoff.constant(space6, 1.0),), prices=np.array([1.0]))
    w = law_invariance_witness(es_acc, cash6, trials=1000, seed=707, tol=1e-6)
    if w is not None:
        problems.append(f"false witness gap {w.gap:.2e}")

    # and fails with an atom-indexed set
    atom_acc = atom_indexed_acceptance(space6, atom=0)
    w = law_invariance_witness(atom_acc, cash6, trials=1000, seed=707, tol=1e-6)
    if w is None:
        problems.append("no witness for the atom-indexed set")

    # pointedness dichotomy
    rep = pointedness_check(expectation_acceptance(AtomSpace(4)), trials=200, seed=7)
    if rep.verdict != "NOT_POINTED" or rep.witness is None:
        problems.append("mean set should not be pointed")
    rep = pointedness_check(es_loss_acceptance(AtomSpace(2), 0.5), trials=200, seed=7)
    if rep.verdict != "POINTED" or not rep.exhaustive:
        problems.append("tail set should be pointed exhaustively at n=2")

    # a risky eligible asset breaks law invariance measurably
    space2 = AtomSpace(2)
    es2 = es_loss_acceptance(space2, 0.5)
    risky_market = Market(
        basis=(Payoff.constant(space2, 1.0), Payoff(space2, [0.0, 2.0])),
        prices=np.array([1.0, 0.8]),
    )
    w = law_invariance_witness(es2, risky_market, trials=1000, seed=707, tol=1e-3)
    if w is None or w.gap <= 1e-3:
        problems.append("no witness with a risky eligible asset")

    _verdict(7, "capital-requirement suite", not problems, "; ".join(problems))


# ---------------------------------------------------------------------------
# 8. consistency with coarsening
# ---------------------------------------------------------------------------

def test_criterion_8_schur_and_conditioning():
    members = (
        expectation_functional(1.0),
        expected_shortfall(0.5),
        expected_shortfall(0.9),
        entropic(1.0),
        gate(),
        floor_gauge(),
        mean_abs_dev(0.5),
        choquet_functional(power_distortion(0.5)),
    )
    space = AtomSpace(10)
    rng = np.random.default_rng(808)
    problems = []
    for f in members:
        violations = 0
        for _ in range(10_000):
            x = Payoff(space, rng.normal(0.0, float(rng.choice([0.5, 1.0, 3.0])), size=10))
            part = random_partition(space, rng)
            coarse = condition(x, part)
            vx = evaluate(f, x)
            if evaluate(f, coarse) > vx + 1e-9:
                violations += 1
        if violations:
            problems.append(f"{f.name}: {violations} coarsening violations")

    for acc in (
        expectation_acceptance(AtomSpace(8)),
        es_loss_acceptance(AtomSpace(8), 0.5),
        min_loss_acceptance(AtomSpace(8)),
    ):
        report = conditioning_closure_check(acc, trials=10_000, seed=808)
        if not report.ok:
            problems.append(f"{acc.name}: {report.violations} closure violations")

    _verdict(8, "coarsening consistency", not problems, "; ".join(problems))


# ---------------------------------------------------------------------------
# 9. Luxemburg gauges
# ---------------------------------------------------------------------------

def test_criterion_9_orlicz_gauges():
    rng = np.random.default_rng(909)
    problems = []
    p1, p2 = power_young(1.0), power_young(2.0)
    worst1 = worst2 = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        x = Payoff(AtomSpace(n), rng.normal(0.0, 2.0, size=n))
        worst1 = max(worst1, abs(luxemburg_norm(p1, x, tol=1e-11) - float(np.abs(x.values).mean())))
        worst2 = max(
            worst2,
            abs(luxemburg_norm(p2, x, tol=1e-11) - math.sqrt(float((x.values**2).mean()))),
        )
    if worst1 > 1e-8:
        problems.append(f"p=1 gap {worst1:.2e}")
    if worst2 > 1e-8:
        problems.append(f"p=2 gap {worst2:.2e}")

    indicator = linf_young()
    worst_inf = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 13))
        x = Payoff(AtomSpace(n), rng.normal(0.0, 2.0, size=n))
        worst_inf = max(
            worst_inf, abs(luxemburg_norm(indicator, x, tol=1e-11) - float(np.abs(x.values).max()))
        )
    if worst_inf > 1e-8:
        problems.append(f"sup-gauge gap {worst_inf:.2e}")

    for p in (1.0, 1.5, 2.0, 3.0):
        verdict = delta2_check(power_young(p))
        if not verdict.holds or abs(verdict.k - 2.0**p) > 1e-9:
            problems.append(f"power {p}: k={verdict.k}")
    verdict = delta2_check(exp_young(), t_max=50.0)
    if verdict.holds or not bool(np.all(np.diff(verdict.ratios) > 0)):
        problems.append("exponential growth not flagged")

    _verdict(9, "luxemburg gauges", not problems, "; ".join(problems))


# ---------------------------------------------------------------------------
# 10. CLI determinism
# ---------------------------------------------------------------------------

def test_criterion_10_cli_determinism(tmp_path):
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({"n": 2, "payoffs": {"sym": [-1.0, 1.0], "up": [1.0, 3.0]}}))
    setups = {
        "eval": {"functionals": [{"type": "expected_shortfall", "beta": 0.5}]},
        "collapse": {"functionals": [{"type": "gate"}], "budget": 6},
        "risk": {
            "market": {"basis": [[1.0, 1.0]], "prices": [1.0]},
            "acceptance": {"type": "es_loss", "beta": 0.5},
        },
        "audit": {"functionals": [{"type": "mean_abs_dev", "lam": 0.5}]},
        "orlicz": {"young": {"type": "power", "p": 2}},
    }
    problems = []
    for command, extra in setups.items():
        out = tmp_path / f"{command}.json"
        config = tmp_path / f"{command}_config.json"
        config.write_text(
            json.dumps({"scenario": str(scenario), "seed": 11, "tolerance": 1e-9, "out": str(out), **extra})
        )
        blobs = []
        for _ in range(2):
            code = cli_main([command, "--config", str(config)])
            if code != 0:
                problems.append(f"{command}: exit {code}")
                break
            blobs.append(out.read_bytes())
            if command == "collapse":
                blobs.append((tmp_path / f"{command}.json.landscape.csv").read_bytes())
        if len(blobs) >= 2 and blobs[: len(blobs) // 2] != blobs[len(blobs) // 2:]:
            problems.append(f"{command}: reports differ between runs")
    _verdict(10, "cli determinism", not problems, "; ".join(problems))
