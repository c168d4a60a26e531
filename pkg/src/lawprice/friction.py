"""Bid-ask friction diagnostics and the collapse-to-the-mean scanner.

The spread of a payoff is ask plus bid-side ask, F(X) + F(-X).  A payoff is
frictionless when its spread vanishes and strongly frictionless when its
price is exactly linear in transacted volume.  For a law-invariant price the
scanner searches for a frictionless risky payoff with nonzero mean; finding
one forces the functional to be a multiple of the expectation (verdict
COLLAPSE), finding witnesses only at zero mean marks the boundary regime, and
finding none certifies strictly positive friction up to the reported minimum.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import FlagError, ValidationError
from .functionals import PricingFunctional, evaluate, imul
from .spaces import AtomSpace, Payoff

__all__ = [
    "DEFAULT_M_GRID",
    "spread",
    "is_frictionless",
    "is_strongly_frictionless",
    "strong_residual",
    "z_additivity_check",
    "ZAdditivityResult",
    "FrictionReport",
    "friction_report",
    "collapse_scan",
    "CollapseReport",
    "spread_landscape",
    "write_spread_landscape",
]

DEFAULT_M_GRID = (-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0)


def spread(f: PricingFunctional, x: Payoff) -> float:
    """Bid-ask spread F(X) + F(-X); +inf absorbs."""
    return evaluate(f, x) + evaluate(f, -x)


def is_frictionless(f: PricingFunctional, x: Payoff, tol: float = 1e-9) -> bool:
    ask, neg_ask = evaluate(f, x), evaluate(f, -x)
    return math.isfinite(ask) and math.isfinite(neg_ask) and abs(ask + neg_ask) <= tol


def _check_m_grid(m_grid) -> tuple[float, ...]:
    grid = tuple(float(m) for m in m_grid)
    if 1.0 not in grid or -1.0 not in grid:
        raise ValidationError("volume grid must contain +1 and -1")
    if not any(abs(m) >= 2.0 for m in grid):
        raise ValidationError("volume grid must reach magnitudes >= 2")
    if not (any(m > 0 for m in grid) and any(m < 0 for m in grid)):
        raise ValidationError("volume grid must contain positive and negative volumes")
    return grid


def is_strongly_frictionless(
    f: PricingFunctional,
    x: Payoff,
    m_grid=DEFAULT_M_GRID,
    tol: float = 1e-9,
) -> bool:
    """Volume linearity on a grid: F(mX) = m F(X) within tol*max(1,|m|)."""
    grid = _check_m_grid(m_grid)
    base = evaluate(f, x)
    if not math.isfinite(base):
        return False
    for m in grid:
        v = evaluate(f, m * x)
        if not math.isfinite(v) or abs(v - m * base) > tol * max(1.0, abs(m)):
            return False
    return True


def strong_residual(f: PricingFunctional, x: Payoff, m_grid=DEFAULT_M_GRID) -> float:
    """Total deviation from volume linearity over the grid; +inf absorbs."""
    base = evaluate(f, x)
    if not math.isfinite(base):
        return math.inf
    total = 0.0
    for m in m_grid:
        v = evaluate(f, m * x)
        if not math.isfinite(v):
            return math.inf
        total += abs(v - m * base)
    return total


@dataclass(frozen=True)
class ZAdditivityResult:
    falsified: bool
    witness: tuple[Payoff, float] | None
    witness_gap: float
    trials_run: int

    @property
    def not_falsified(self) -> bool:
        return not self.falsified


def z_additivity_check(
    f: PricingFunctional,
    z: Payoff,
    trials: int = 200,
    tol: float = 1e-9,
    seed: int = 0,
    one_sided: bool = False,
) -> ZAdditivityResult:
    """Randomized search for a violation of F(X + mZ) = F(X) + m F(Z).

    Deterministic probes first (X = -Z with m = 1 kills any non-frictionless
    Z immediately), then random (X, m) draws.  With ``one_sided`` only the <=
    direction is tested; a one-sided pass implies the two-sided identity for
    genuinely Z-additive functionals, which the test suite cross-checks.
    """
    pz = evaluate(f, z)
    if not math.isfinite(pz):
        raise ValidationError(f"{f.name}: Z-additivity needs a finite price for Z")
    rng = np.random.default_rng(seed)
    n = z.space.n

    probes: list[tuple[Payoff, float]] = [
        (-z, 1.0),
        (-2.0 * z, 2.0),
        (Payoff.zero(z.space), 1.0),
        (Payoff.zero(z.space), -1.0),
    ]
    count = 0
    for t in range(trials):
        if probes:
            x, m = probes.pop(0)
        else:
            x = Payoff(z.space, rng.normal(0.0, float(rng.choice([0.5, 1.0, 2.0])), size=n))
            m = float(rng.choice([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0]))
        count += 1
        vx = evaluate(f, x)
        lhs = evaluate(f, x + m * z)
        rhs = vx + imul(m, pz)
        if not math.isfinite(vx):
            continue
        gap = lhs - rhs if one_sided else abs(lhs - rhs)
        if gap > tol * max(1.0, abs(lhs) if math.isfinite(lhs) else 1.0, abs(rhs)):
            return ZAdditivityResult(True, (x, m), float(gap), count)
    return ZAdditivityResult(False, None, 0.0, count)


# ---------------------------------------------------------------------------
# Friction report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrictionReport:
    payoff_id: str
    spread: float
    frictionless: bool
    strongly_frictionless: bool
    m_grid_used: tuple[float, ...]
    tolerance: float

    def __post_init__(self) -> None:
        if self.strongly_frictionless and not self.frictionless:
            raise ValidationError("strong frictionlessness must imply frictionlessness")

    def to_dict(self) -> dict:
        return {
            "payoff_id": self.payoff_id,
            "spread": self.spread if math.isfinite(self.spread) else "inf",
            "frictionless": self.frictionless,
            "strongly_frictionless": self.strongly_frictionless,
            "m_grid_used": list(self.m_grid_used),
            "tolerance": self.tolerance,
        }


def friction_report(
    f: PricingFunctional,
    x: Payoff,
    payoff_id: str,
    m_grid=DEFAULT_M_GRID,
    tol: float = 1e-9,
) -> FrictionReport:
    grid = _check_m_grid(m_grid)
    fl = is_frictionless(f, x, tol)
    strong = fl and is_strongly_frictionless(f, x, grid, tol)
    return FrictionReport(
        payoff_id=payoff_id,
        spread=spread(f, x),
        frictionless=fl,
        strongly_frictionless=strong,
        m_grid_used=grid,
        tolerance=tol,
    )


# ---------------------------------------------------------------------------
# Collapse scanner
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollapseReport:
    """Outcome of the frictionless-payoff search for a law-invariant price.

    verdict is one of COLLAPSE / NO_FRICTIONLESS_RISKY / BOUNDARY /
    INCONCLUSIVE.  ``min_objective`` is the smallest friction objective found
    (spread for sublinear functionals, volume-linearity residual for merely
    convex ones); NO_FRICTIONLESS_RISKY certifies friction only down to that
    value, exhaustively on a sorted-vector grid for n <= 3 and heuristically
    above.
    """

    verdict: str
    c: float | None
    best_witness: list[float]
    best_witness_mean: float
    best_witness_objective: float
    min_objective: float
    linearity_residual: float | None
    objective: str
    certificate: str
    tolerance: float
    seed: int
    budget: int

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "c": self.c,
            "best_witness": self.best_witness,
            "best_witness_mean": self.best_witness_mean,
            "best_witness_objective": self.best_witness_objective,
            "min_objective": self.min_objective,
            "linearity_residual": self.linearity_residual,
            "objective": self.objective,
            "certificate": self.certificate,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "budget": self.budget,
        }


def _normalize_sorted(v: np.ndarray) -> np.ndarray:
    """Sort and rescale to range exactly 1; shifts are left free."""
    v = np.sort(v)
    span = v[-1] - v[0]
    if span <= 0:
        v = v + np.linspace(0.0, 1.0, v.size)
        span = v[-1] - v[0]
    return v / span


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LAWPRICE_THREADS", "1")))
    except ValueError:
        return 1


def _descend(objective, v0: np.ndarray, tol: float, max_rounds: int = 220):
    """Coordinate descent over sorted range-1 vectors plus a free shift move."""
    v = _normalize_sorted(v0)
    best = objective(v)
    step = 0.25
    min_step = max(tol * 1e-3, 1e-13)
    rounds = 0
    while step > min_step and rounds < max_rounds:
        rounds += 1
        improved = False
        moves = [np.zeros_like(v) for _ in range(v.size)]
        for i in range(v.size):
            moves[i][i] = 1.0
        moves.append(np.ones_like(v))  # shift: changes the mean, not the range
        for direction in moves:
            for sgn in (1.0, -1.0):
                cand = _normalize_sorted(v + sgn * step * direction)
                val = objective(cand)
                if val < best - 1e-15:
                    v, best = cand, val
                    improved = True
        if not improved:
            step *= 0.5
    return v, best


def collapse_scan(
    f: PricingFunctional,
    space: AtomSpace,
    tol: float = 1e-9,
    seed: int = 0,
    budget: int = 24,
) -> CollapseReport:
    """Search for frictionless risky payoffs and classify the dichotomy.

    Law invariance makes the friction objective permutation-invariant, so the
    search runs over sorted value vectors with range normalized to 1 (risky
    by construction) and a free shift coordinate; ``budget`` counts restarts.
    Sublinear functionals are scanned for zero spread; merely convex ones for
    zero volume-linearity residual.  Restarts fan out over LAWPRICE_THREADS.
    """
    if not f.flags.law_invariant:
        raise FlagError(f"{f.name}: collapse scan needs the law-invariant flag")
    at_zero = evaluate(f, Payoff.zero(space))
    if abs(at_zero) > 1e-12:
        raise FlagError(f"{f.name}: collapse scan needs F(0) = 0, got {at_zero!r}")
    if space.n < 2:
        raise ValidationError("no risky payoffs exist on a one-atom space")
    n = space.n
    use_strong = f.flags.convex and not f.flags.sublinear
    obj_name = "strong_residual" if use_strong else "spread"

    def objective(v: np.ndarray) -> float:
        z = Payoff(space, v)
        return strong_residual(f, z) if use_strong else abs(spread(f, z))

    starts: list[np.ndarray] = [
        np.linspace(0.0, 1.0, n),
        np.linspace(-0.5, 0.5, n),
        np.concatenate([np.zeros(n - 1), [1.0]]),
        np.concatenate([[0.0], np.ones(n - 1)]),
    ]
    rng = np.random.default_rng(seed)
    while len(starts) < budget:
        starts.append(np.sort(rng.uniform(-1.0, 1.0, size=n)))

    def run(start: np.ndarray):
        return _descend(objective, start, tol)

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(s) for s in starts]
    # deterministic reduce: objective first, then restart order
    best_idx = min(range(len(results)), key=lambda i: (results[i][1], i))
    best_v, best_obj = results[best_idx]

    certificate = "heuristic"
    if n <= 3:
        # exhaustive sharper certificate on a sorted range-1 grid with shifts
        interior = np.linspace(0.0, 1.0, 41)
        shifts = np.linspace(-2.0, 2.0, 41)
        grid_best = math.inf
        grid_v = best_v
        if n == 2:
            candidates = [np.array([s, s + 1.0]) for s in shifts]
        else:
            candidates = [np.array([s, s + m, s + 1.0]) for s in shifts for m in interior]
        for cand in candidates:
            val = objective(cand)
            if val < grid_best:
                grid_best, grid_v = val, cand
        if grid_best < best_obj:
            best_obj, best_v = grid_best, grid_v
        certificate = "exhaustive-grid(n<=3)"

    best_payoff = Payoff(space, best_v)
    best_mean = float(best_payoff.values.mean())
    risky_mean_gate = math.sqrt(tol)

    def finish(verdict, c=None, witness=best_payoff, w_obj=best_obj, resid=None):
        return CollapseReport(
            verdict=verdict,
            c=c,
            best_witness=[float(v) for v in witness.values],
            best_witness_mean=float(witness.values.mean()),
            best_witness_objective=float(w_obj),
            min_objective=float(best_obj),
            linearity_residual=resid,
            objective=obj_name,
            certificate=certificate,
            tolerance=tol,
            seed=seed,
            budget=budget,
        )

    if best_obj > tol:
        return finish("NO_FRICTIONLESS_RISKY")

    # frictionless witness found; hunt one with a mean clear of zero
    candidates = [best_payoff]
    for shift in (0.5, 1.0, -0.5, -1.0):
        candidates.append(best_payoff + shift)
    candidates.append(Payoff(space, np.linspace(0.0, 1.0, n)))
    candidates.append(Payoff(space, np.concatenate([np.zeros(n - 1), [1.0]])))
    for _ in range(8):
        candidates.append(Payoff(space, np.sort(rng.uniform(0.0, 1.0, size=n))))
    nonzero_mean = [
        z for z in candidates
        if abs(float(z.values.mean())) > risky_mean_gate and objective(z.values) <= tol
    ]
    if nonzero_mean:
        witness = nonzero_mean[0]
        c = evaluate(f, Payoff.constant(space, 1.0))
        resid = 0.0
        for _ in range(64):
            x = Payoff(space, rng.normal(0.0, float(rng.choice([0.5, 1.0, 3.0])), size=n))
            resid = max(resid, abs(evaluate(f, x) - c * float(x.values.mean())))
        for const in (-2.0, -1.0, 1.0, 2.0):
            xc = Payoff.constant(space, const)
            resid = max(resid, abs(evaluate(f, xc) - c * const))
        if resid <= max(tol, 1e-12):
            return finish("COLLAPSE", c=c, witness=witness, w_obj=objective(witness.values), resid=resid)
        return finish("INCONCLUSIVE", c=c, witness=witness, w_obj=objective(witness.values), resid=resid)
    return finish("BOUNDARY")


# ---------------------------------------------------------------------------
# Spread landscape export
# ---------------------------------------------------------------------------

def spread_landscape(
    f: PricingFunctional,
    space: AtomSpace,
    lo: float = -2.0,
    hi: float = 2.0,
    points: int = 201,
) -> list[tuple[float, float]]:
    """Spreads along the shifted sorted ramp Z(t) = ramp + t, for plotting."""
    base = np.linspace(-0.5, 0.5, space.n)
    rows = []
    for t in np.linspace(lo, hi, points):
        z = Payoff(space, base + t)
        rows.append((float(t), spread(f, z)))
    return rows


def write_spread_landscape(rows, path: str) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["shift", "spread"])
    for t, s in rows:
        writer.writerow([repr(t), repr(s) if math.isfinite(s) else "inf"])
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(buf.getvalue())
    os.replace(tmp, path)
