"""Acceptance sets, markets of eligible payoffs, and capital requirements.

A risk measure here is the cheapest portfolio of eligible payoffs whose
addition makes a position acceptable.  The solver handles marketed spaces of
dimension up to three: capital along the designated nonnegative numeraire is
resolved by bracketing plus bisection on the membership oracle, and the
remaining zero-cost (kernel) directions are minimized by golden section
inside an expanding box.  Diagnostics cover law invariance of the induced
risk measure, pointedness of coherent sets, and closure under conditioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import FlagError, SolverError, SpaceMismatchError, ValidationError
from .functionals import (
    PricingFunctional,
    evaluate,
    expected_shortfall,
    FunctionalFlags,
)
from .spaces import AtomSpace, Payoff, condition, random_partition

__all__ = [
    "AcceptanceFlags",
    "AcceptanceSet",
    "Market",
    "RiskSolution",
    "risk_measure",
    "solve_risk",
    "expectation_acceptance",
    "es_loss_acceptance",
    "min_loss_acceptance",
    "risk_free_acceptance",
    "atom_indexed_acceptance",
    "acceptance_from_config",
    "market_from_config",
    "law_invariance_witness",
    "LawInvarianceWitness",
    "pointedness_check",
    "PointednessReport",
    "conditioning_closure_check",
    "ConditioningClosureReport",
]

EXPANSION_FACTOR = 2.0
EXPANSION_BUDGET = 60


@dataclass(frozen=True)
class AcceptanceFlags:
    convex: bool = False
    conic: bool = False
    monotone: bool = False
    law_invariant: bool = False
    closed: bool = False

    def to_dict(self) -> dict[str, bool]:
        return {
            "convex": self.convex,
            "conic": self.conic,
            "monotone": self.monotone,
            "law_invariant": self.law_invariant,
            "closed": self.closed,
        }


@dataclass(frozen=True, eq=False)
class AcceptanceSet:
    """Membership oracle for acceptable positions, with declared flags.

    The set must be a proper acceptance set: nonempty and not everything,
    certified by stored witnesses.  When a gauge functional is attached,
    membership coincides with gauge(X) <= 0, which gives the solvers a convex
    scalar profile to bracket.
    """

    name: str
    space: AtomSpace
    membership: Callable[[Payoff], bool]
    flags: AcceptanceFlags
    accepted_witness: Payoff
    rejected_witness: Payoff
    gauge: PricingFunctional | None = None

    def __post_init__(self) -> None:
        if not self.membership(self.accepted_witness):
            raise ValidationError(f"{self.name}: accepted witness is not a member")
        if self.membership(self.rejected_witness):
            raise ValidationError(f"{self.name}: rejected witness is a member")
        if self.gauge is not None:
            for w, expect in ((self.accepted_witness, True), (self.rejected_witness, False)):
                if (evaluate(self.gauge, w) <= 0.0) != expect:
                    raise ValidationError(f"{self.name}: gauge disagrees with membership on a witness")

    def __contains__(self, x: Payoff) -> bool:
        if x.space != self.space:
            raise SpaceMismatchError(f"{self.name} lives on n={self.space.n}, payoff has n={x.space.n}")
        return bool(self.membership(x))


def _gauge_functional(name: str, ev, flags: FunctionalFlags) -> PricingFunctional:
    return PricingFunctional(name=name, evaluator=ev, flags=flags)


def expectation_acceptance(space: AtomSpace) -> AcceptanceSet:
    """Positions with nonnegative mean; coherent, law-invariant, not pointed."""
    gauge = _gauge_functional(
        "neg_mean",
        lambda x: -float(x.values.mean()),
        FunctionalFlags(convex=True, sublinear=True, law_invariant=True, comonotonic=True),
    )
    return AcceptanceSet(
        name="expectation_acceptance",
        space=space,
        membership=lambda x: float(x.values.mean()) >= 0.0,
        flags=AcceptanceFlags(convex=True, conic=True, monotone=True, law_invariant=True, closed=True),
        accepted_witness=Payoff.constant(space, 1.0),
        rejected_witness=Payoff.constant(space, -1.0),
        gauge=gauge,
    )


def es_loss_acceptance(space: AtomSpace, beta: float) -> AcceptanceSet:
    """Positions whose loss-side expected shortfall is nonpositive.

    The gauge R(X) = ES_beta(-X) is sublinear, law-invariant, and cash
    anti-additive (R(X+m) = R(X) - m), so acceptability moves one-for-one
    with riskless capital.
    """
    es = expected_shortfall(beta)
    gauge = _gauge_functional(
        f"es_loss({beta:g})",
        lambda x: evaluate(es, -x),
        FunctionalFlags(convex=True, sublinear=True, law_invariant=True, comonotonic=True),
    )
    return AcceptanceSet(
        name=f"es_loss_acceptance({beta:g})",
        space=space,
        membership=lambda x: evaluate(es, -x) <= 0.0,
        flags=AcceptanceFlags(convex=True, conic=True, monotone=True, law_invariant=True, closed=True),
        accepted_witness=Payoff.constant(space, 1.0),
        rejected_witness=Payoff.constant(space, -1.0),
        gauge=gauge,
    )


def min_loss_acceptance(space: AtomSpace, floor: float = -1.0) -> AcceptanceSet:
    """Expected loss E[min(X,0)] no worse than the floor; convex but not conic."""
    if floor >= 0:
        raise ValidationError("loss floor must be negative for a proper set")

    def ev(x: Payoff) -> float:
        return floor - float(np.minimum(x.values, 0.0).mean())

    gauge = _gauge_functional(
        "expected_loss_excess",
        ev,
        FunctionalFlags(convex=True, law_invariant=True),
    )
    return AcceptanceSet(
        name="min_loss_acceptance",
        space=space,
        membership=lambda x: float(np.minimum(x.values, 0.0).mean()) >= floor,
        flags=AcceptanceFlags(convex=True, monotone=True, law_invariant=True, closed=True),
        accepted_witness=Payoff.zero(space),
        rejected_witness=Payoff.constant(space, 2.0 * floor),
        gauge=gauge,
    )


def risk_free_acceptance(space: AtomSpace) -> AcceptanceSet:
    """Only constant payoffs; convex, conic, law-invariant, NOT monotone."""
    if space.n < 2:
        raise ValidationError("risk-free acceptance needs at least two atoms to be proper")
    return AcceptanceSet(
        name="risk_free_acceptance",
        space=space,
        membership=lambda x: bool(np.all(x.values == x.values[0])),
        flags=AcceptanceFlags(convex=True, conic=True, law_invariant=True, closed=True),
        accepted_witness=Payoff.zero(space),
        rejected_witness=Payoff(space, np.arange(space.n, dtype=float)),
    )


def atom_indexed_acceptance(space: AtomSpace, atom: int = 0) -> AcceptanceSet:
    """Nonnegative value on one fixed atom; deliberately NOT law-invariant."""
    i = int(atom)
    if not 0 <= i < space.n:
        raise ValidationError(f"atom index {i} outside space of size {space.n}")
    return AcceptanceSet(
        name=f"atom_indexed_acceptance({i})",
        space=space,
        membership=lambda x: float(x.values[i]) >= 0.0,
        flags=AcceptanceFlags(convex=True, conic=True, monotone=True, closed=True),
        accepted_witness=Payoff.zero(space),
        rejected_witness=Payoff.constant(space, -1.0),
    )


def acceptance_from_config(spec: Mapping, space: AtomSpace) -> AcceptanceSet:
    kind = spec.get("type")
    if kind == "expectation":
        return expectation_acceptance(space)
    if kind == "es_loss":
        return es_loss_acceptance(space, float(spec["beta"]))
    if kind == "min_loss":
        return min_loss_acceptance(space, float(spec.get("floor", -1.0)))
    if kind == "risk_free":
        return risk_free_acceptance(space)
    if kind == "atom_indexed":
        return atom_indexed_acceptance(space, int(spec.get("atom", 0)))
    if kind == "gauge":
        from .functionals import functional_from_config

        gauge = functional_from_config(spec["functional"])
        flags = AcceptanceFlags(**{k: bool(v) for k, v in spec.get("flags", {}).items()})
        accepted = Payoff(space, np.asarray(spec["accepted_witness"], dtype=float))
        rejected = Payoff(space, np.asarray(spec["rejected_witness"], dtype=float))
        return AcceptanceSet(
            name=spec.get("name", f"gauge[{gauge.name}]"),
            space=space,
            membership=lambda x: evaluate(gauge, x) <= 0.0,
            flags=flags,
            accepted_witness=accepted,
            rejected_witness=rejected,
            gauge=gauge,
        )
    raise ValidationError(f"unknown acceptance type: {kind!r}")


# ---------------------------------------------------------------------------
# Markets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Market:
    """Marketed space spanned by up to three eligible payoffs with linear prices.

    The basis must be linearly independent and contain a designated nonzero
    nonnegative payoff (the numeraire leg) with a strictly positive price.
    """

    basis: tuple[Payoff, ...]
    prices: np.ndarray
    numeraire_index: int = 0

    def __post_init__(self) -> None:
        basis = tuple(self.basis)
        if not 1 <= len(basis) <= 3:
            raise SolverError(f"marketed space supports 1..3 eligible payoffs, got {len(basis)}")
        for b in basis[1:]:
            if b.space != basis[0].space:
                raise SpaceMismatchError("market basis payoffs live on different spaces")
        prices = np.array(self.prices, dtype=float)
        if prices.shape != (len(basis),):
            raise ValidationError("one price per basis payoff required")
        if not np.all(np.isfinite(prices)):
            raise ValidationError("prices must be finite")
        mat = np.vstack([b.values for b in basis])
        if np.linalg.matrix_rank(mat) != len(basis):
            raise ValidationError("market basis must be linearly independent")
        iu = int(self.numeraire_index)
        if not 0 <= iu < len(basis):
            raise ValidationError(f"numeraire index {iu} out of range")
        u = basis[iu]
        if np.any(u.values < -1e-12) or np.all(u.values == 0.0):
            raise ValidationError("designated eligible payoff must be nonnegative and nonzero")
        if prices[iu] <= 0.0:
            raise ValidationError("designated eligible payoff must have a positive price")
        prices.flags.writeable = False
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "numeraire_index", iu)

    @property
    def space(self) -> AtomSpace:
        return self.basis[0].space

    @property
    def dim(self) -> int:
        return len(self.basis)

    def portfolio(self, coeffs: np.ndarray) -> Payoff:
        vals = np.zeros(self.space.n)
        for a, b in zip(coeffs, self.basis):
            vals = vals + float(a) * b.values
        return Payoff(self.space, vals)

    def price(self, coeffs: np.ndarray) -> float:
        return float(self.prices @ np.asarray(coeffs, dtype=float))


def market_from_config(spec: Mapping, space: AtomSpace) -> Market:
    basis = []
    for vec in spec["basis"]:
        vec = list(vec)
        if len(vec) != space.n:
            raise SpaceMismatchError(
                f"basis payoff has {len(vec)} values on a space of {space.n} atoms"
            )
        basis.append(Payoff(space, np.asarray(vec, dtype=float)))
    return Market(
        basis=tuple(basis),
        prices=np.asarray(spec["prices"], dtype=float),
        numeraire_index=int(spec.get("numeraire_index", 0)),
    )


# ---------------------------------------------------------------------------
# Risk-measure solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RiskSolution:
    """Solver outcome: value is finite, +inf (never acceptable within the
    expansion budget) or -inf (cost unbounded below within the budget)."""

    value: float
    coefficients: list[float] | None
    membership_evals: int
    sentinel: str | None
    expansion_budget: int = EXPANSION_BUDGET

    def to_dict(self) -> dict:
        return {
            "value": self.value if math.isfinite(self.value) else repr(self.value),
            "coefficients": self.coefficients,
            "membership_evals": self.membership_evals,
            "sentinel": self.sentinel,
            "expansion_budget": self.expansion_budget,
        }


class _Counter:
    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0


def _min_feasible_t(feasible, h: float, monotone: bool, tol: float) -> float:
    """Infimum of {t : feasible(t)} for an interval-shaped feasible set.

    Returns +inf when nothing is feasible within the expansion budget and
    -inf when feasibility persists all the way down the budget.
    """
    h = max(1.0, h)
    if monotone:
        lo, hi = -h, h
        steps = 0
        while not feasible(hi):
            lo = hi
            hi *= EXPANSION_FACTOR
            steps += 1
            if steps > EXPANSION_BUDGET:
                return math.inf
        steps = 0
        while feasible(lo):
            hi = lo
            lo *= EXPANSION_FACTOR if lo < 0 else 1.0
            if lo >= 0:
                lo = -h
            steps += 1
            if steps > EXPANSION_BUDGET:
                return -math.inf
    else:
        anchor = None
        probe = 0.0
        if feasible(probe):
            anchor = probe
        if anchor is None:
            step = h
            for _ in range(EXPANSION_BUDGET):
                if feasible(step):
                    anchor = step
                    break
                if feasible(-step):
                    anchor = -step
                    break
                step *= EXPANSION_FACTOR
            if anchor is None:
                return math.inf
        hi = anchor
        d = h
        steps = 0
        while feasible(hi - d):
            hi = hi - d
            d *= EXPANSION_FACTOR
            steps += 1
            if steps > EXPANSION_BUDGET:
                return -math.inf
        lo = hi - d
    # bracket invariant: feasible(hi), not feasible(lo); relative termination
    # keeps the loop finite when the boundary sits at float magnitudes where
    # the grid spacing exceeds tol
    while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _golden_min(fn, lo: float, hi: float, xtol: float) -> tuple[float, float]:
    """Golden-section minimum of a unimodal fn on [lo, hi].

    A coarse grid pass first locates the basin so that +inf plateaus at the
    edges cannot steer the shrinking bracket away from the feasible region.
    """
    grid = np.linspace(lo, hi, 17)
    vals = [fn(s) for s in grid]
    k = int(np.argmin(vals))
    a = grid[max(0, k - 1)]
    b = grid[min(len(grid) - 1, k + 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - (b - a) * inv_phi
    d = a + (b - a) * inv_phi
    fc, fd = fn(c), fn(d)
    while abs(b - a) > xtol * max(1.0, abs(a), abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * inv_phi
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * inv_phi
            fd = fn(d)
    xs = [a, b, c, d]
    fs = [fn(a), fn(b), fc, fd]
    j = int(np.argmin(fs))
    return xs[j], fs[j]


def _minimize_over_box(fn, dims: int, start_width: float, xtol: float):
    """Nested golden section over dims kernel coordinates with box expansion.

    Expands the box while the minimizer pins to the boundary; when the budget
    runs out with the value still falling, reports divergence (None value).
    """
    if dims == 0:
        return np.array([]), fn(np.array([]))
    width = max(1.0, start_width)
    prev_best = math.inf
    for _ in range(EXPANSION_BUDGET):
        if dims == 1:
            s, v = _golden_min(lambda a: fn(np.array([a])), -width, width, xtol)
            argmin = np.array([s])
        else:
            def outer(a: float) -> float:
                return _golden_min(lambda b: fn(np.array([a, b])), -width, width, xtol)[1]

            s1, _ = _golden_min(outer, -width, width, xtol)
            s2, v = _golden_min(lambda b: fn(np.array([s1, b])), -width, width, xtol)
            argmin = np.array([s1, s2])
        if v == -math.inf:
            return argmin, -math.inf
        pinned = bool(np.any(np.abs(argmin) > 0.9 * width))
        if not pinned:
            return argmin, v
        if math.isfinite(v) and math.isfinite(prev_best):
            # boundary-pinned but no longer improving: flat plateau, accept
            if prev_best - v <= 1e-12 * max(1.0, abs(v)):
                return argmin, v
        prev_best = v
        width *= EXPANSION_FACTOR
    if math.isfinite(prev_best):
        return argmin, -math.inf
    return argmin, math.inf


def solve_risk(
    acceptance: AcceptanceSet,
    market: Market,
    x: Payoff,
    tol: float = 1e-9,
) -> RiskSolution:
    """Cheapest eligible portfolio making x acceptable, with diagnostics.

    Requires a convex acceptance set (the feasible coefficient region is then
    convex, so bisection and golden section are sound).  Capital moves along
    the designated nonnegative payoff; the remaining basis directions are
    repriced into zero-cost kernel coordinates and minimized outside.
    """
    if not acceptance.flags.convex:
        raise FlagError(f"{acceptance.name}: solver needs the convex flag")
    if x.space != market.space or x.space != acceptance.space:
        raise SpaceMismatchError("position, market, and acceptance set must share one space")

    k = market.dim
    iu = market.numeraire_index
    psi = market.prices
    others = [j for j in range(k) if j != iu]
    counter = _Counter()

    def coeffs_from(t: float, s: np.ndarray) -> np.ndarray:
        a = np.zeros(k)
        a[iu] = t / psi[iu]
        for w, j in zip(s, others):
            a[j] = w
            a[iu] -= w * psi[j] / psi[iu]
        return a

    def feasible_at(t: float, s: np.ndarray) -> bool:
        counter.count += 1
        z = market.portfolio(coeffs_from(t, s))
        return acceptance.membership(x + z)

    h = max(1.0, float(np.abs(x.values).max()))

    def cost_given_kernel(s: np.ndarray) -> float:
        return _min_feasible_t(lambda t: feasible_at(t, s), h, acceptance.flags.monotone, tol)

    if k == 1:
        value = cost_given_kernel(np.array([]))
        s_best = np.array([])
    else:
        s_best, value = _minimize_over_box(cost_given_kernel, k - 1, h, max(tol, 1e-12) ** 0.5)

    if value == math.inf:
        return RiskSolution(math.inf, None, counter.count, "never_acceptable")
    if value == -math.inf:
        return RiskSolution(-math.inf, None, counter.count, "unbounded_below")
    coeffs = coeffs_from(value, s_best)
    return RiskSolution(float(value), [float(c) for c in coeffs], counter.count, None)


def risk_measure(
    acceptance: AcceptanceSet,
    market: Market,
    x: Payoff,
    tol: float = 1e-9,
) -> float:
    return solve_risk(acceptance, market, x, tol).value


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LawInvarianceWitness:
    x: Payoff
    x_permuted: Payoff
    rho_x: float
    rho_permuted: float

    @property
    def gap(self) -> float:
        return abs(self.rho_x - self.rho_permuted)


def law_invariance_witness(
    acceptance: AcceptanceSet,
    market: Market,
    trials: int = 1000,
    seed: int = 0,
    tol: float = 1e-6,
) -> LawInvarianceWitness | None:
    """Search for a payoff whose risk differs from a rearrangement's risk.

    Structured probes concentrating losses on single atoms run first (they
    expose markets whose hedges are cheap in some states only), then random
    payoff/permutation draws.  Returns the first witness with gap > tol.
    """
    n = acceptance.space.n
    rng = np.random.default_rng(seed)
    solver_tol = min(1e-7, tol / 100.0)

    probes: list[Payoff] = []
    for loss in (-2.0, -1.0):
        for i in range(min(n, 3)):
            vals = np.zeros(n)
            vals[i] = loss
            probes.append(Payoff(acceptance.space, vals))

    def rho(p: Payoff) -> float:
        return solve_risk(acceptance, market, p, solver_tol).value

    count = 0
    while count < trials:
        if probes:
            x = probes.pop(0)
        else:
            x = Payoff(acceptance.space, rng.normal(0.0, 1.0, size=n))
        count += 1
        perm = rng.permutation(n)
        xp = Payoff(acceptance.space, x.values[perm])
        rx, rp = rho(x), rho(xp)
        if math.isfinite(rx) and math.isfinite(rp) and abs(rx - rp) > tol:
            return LawInvarianceWitness(x, xp, rx, rp)
        if (math.isfinite(rx) != math.isfinite(rp)):
            return LawInvarianceWitness(x, xp, rx, rp)
    return None


@dataclass(frozen=True)
class PointednessReport:
    verdict: str  # "POINTED" | "NOT_POINTED"
    witness: Payoff | None
    two_sided_depth: float | None
    mean_set_agreement: float | None
    exhaustive: bool

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json(),
            "two_sided_depth": self.two_sided_depth,
            "mean_set_agreement": self.mean_set_agreement,
            "exhaustive": self.exhaustive,
        }


def pointedness_check(
    acceptance: AcceptanceSet,
    trials: int = 1000,
    seed: int = 0,
    grid: np.ndarray | None = None,
) -> PointednessReport:
    """Search for a nonzero payoff accepted together with its negative.

    Coherence flags (convex, conic, monotone, law-invariant) are required.
    For n <= 3 the sorted-vector grid is swept exhaustively; otherwise random
    probes plus structured zero-mean candidates.  When not pointed, the set
    is compared against the nonnegative-mean set on a batch, since the only
    coherent law-invariant sets with two-sided members are of that shape.
    """
    flags = acceptance.flags
    if not (flags.convex and flags.conic and flags.monotone and flags.law_invariant):
        raise FlagError(f"{acceptance.name}: pointedness check needs coherent flags")
    space = acceptance.space
    n = space.n
    rng = np.random.default_rng(seed)
    grid = np.linspace(-2.0, 2.0, 41) if grid is None else np.asarray(grid, dtype=float)

    def two_sided(z: Payoff) -> bool:
        return acceptance.membership(z) and acceptance.membership(-z)

    candidates: list[Payoff] = []
    base = np.zeros(n)
    if n >= 2:
        base[0], base[-1] = -1.0, 1.0
        candidates.append(Payoff(space, base))
    exhaustive = n <= 3
    if exhaustive:
        if n == 1:
            vectors = ([v] for v in grid)
        elif n == 2:
            vectors = ([a, b] for a in grid for b in grid if b >= a)
        else:
            vectors = ([a, b, c] for a in grid for b in grid for c in grid if a <= b <= c)
        candidates.extend(Payoff(space, np.array(v)) for v in vectors)
    for _ in range(trials):
        x = rng.normal(0.0, 1.0, size=n)
        candidates.append(Payoff(space, x - x.mean()))
        candidates.append(Payoff(space, rng.normal(0.0, 1.0, size=n)))

    depth: float | None = None
    witness = None
    for z in candidates:
        if np.all(z.values == 0.0):
            continue
        if acceptance.gauge is not None:
            d = max(evaluate(acceptance.gauge, z), evaluate(acceptance.gauge, -z))
            depth = d if depth is None else min(depth, d)
        if two_sided(z):
            witness = z
            break

    if witness is None:
        return PointednessReport("POINTED", None, depth, None, exhaustive)

    agree = 0
    batch = 400
    for _ in range(batch):
        x = Payoff(space, rng.normal(0.0, 1.0, size=n))
        if acceptance.membership(x) == (float(x.values.mean()) >= -1e-12):
            agree += 1
    return PointednessReport("NOT_POINTED", witness, depth, agree / batch, exhaustive)


@dataclass(frozen=True)
class ConditioningClosureReport:
    name: str
    trials: int
    violations: int
    first_violation: tuple[list[float], list[list[int]]] | None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "acceptance": self.name,
            "trials": self.trials,
            "violations": self.violations,
            "ok": self.ok,
        }


def conditioning_closure_check(
    acceptance: AcceptanceSet,
    trials: int = 1000,
    seed: int = 0,
) -> ConditioningClosureReport:
    """Check that block-averaging never expels an accepted position.

    Requires convex, closed, law-invariant flags.  Accepted samples are
    produced by shifting random payoffs upward until membership (monotone
    sets) or by rejection sampling.
    """
    flags = acceptance.flags
    if not (flags.convex and flags.closed and flags.law_invariant):
        raise FlagError(
            f"{acceptance.name}: conditioning closure needs convex, closed, law-invariant flags"
        )
    space = acceptance.space
    rng = np.random.default_rng(seed)
    violations = 0
    first = None
    done = 0
    attempts = 0
    while done < trials and attempts < 20 * trials:
        attempts += 1
        x = Payoff(space, rng.normal(0.0, float(rng.choice([0.5, 1.0, 2.0])), size=space.n))
        if not acceptance.membership(x):
            if flags.monotone:
                shift = 1.0
                while not acceptance.membership(x + shift) and shift < 2.0**20:
                    shift *= 2.0
                if not acceptance.membership(x + shift):
                    continue
                x = x + shift
            else:
                continue
        part = random_partition(space, rng)
        coarse = condition(x, part)
        done += 1
        if not acceptance.membership(coarse):
            violations += 1
            if first is None:
                first = (x.to_json(), [list(b) for b in part.blocks])
    return ConditioningClosureReport(acceptance.name, done, violations, first)
