"""Pricing functionals and their structure diagnostics.

A :class:`PricingFunctional` is an evaluable ask-price map from payoffs to
R ∪ {+inf} carrying declared structural flags (convex, sublinear, monotone,
law-invariant, cash-additive, comonotonic).  Flags are declarations, not
proofs: :func:`flag_audit` attacks each one with randomized counterexample
search, and :func:`schur_convexity_report` checks consistency with the convex
order for law-invariant convex members.

The catalog covers the standard members (scaled expectation, distortion /
Choquet prices, expected shortfall, entropic, mean absolute deviation) plus
two boundary cases that pin down where the collapse-to-the-mean dichotomy
lives: a one-sided gate that prices only nonnegative-mean payoffs, and a
floor gauge whose friction vanishes at unit volume but not at scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import FlagError, SpaceMismatchError, ValidationError
from .spaces import (
    AtomSpace,
    Payoff,
    condition,
    random_partition,
    require_same_space,
)
from .quantiles import convex_order_geq, hl_product

__all__ = [
    "FunctionalFlags",
    "PricingFunctional",
    "Distortion",
    "RepresentationSet",
    "evaluate",
    "choquet_eval",
    "identity_distortion",
    "power_distortion",
    "es_distortion",
    "table_distortion",
    "distortion_from_config",
    "expectation_functional",
    "choquet_functional",
    "expected_shortfall",
    "entropic",
    "gate",
    "floor_gauge",
    "mean_abs_dev",
    "atom_value",
    "worst_case",
    "representation_eval",
    "representation_functional",
    "functional_from_config",
    "recession",
    "RecessionResult",
    "conjugate_lower_bound",
    "flag_audit",
    "FlagAuditReport",
    "schur_convexity_report",
    "SchurReport",
    "imul",
]

_DISTORTION_GRID = np.linspace(0.0, 1.0, 1001)


def imul(m: float, v: float) -> float:
    """Multiply with the extended-real convention 0 * inf = 0."""
    if m == 0.0:
        return 0.0
    return m * v


@dataclass(frozen=True)
class FunctionalFlags:
    convex: bool = False
    sublinear: bool = False
    monotone: bool = False
    law_invariant: bool = False
    cash_additive: bool = False
    comonotonic: bool = False

    def to_dict(self) -> dict[str, bool]:
        return {
            "convex": self.convex,
            "sublinear": self.sublinear,
            "monotone": self.monotone,
            "law_invariant": self.law_invariant,
            "cash_additive": self.cash_additive,
            "comonotonic": self.comonotonic,
        }


@dataclass(frozen=True, eq=False)
class PricingFunctional:
    """Evaluable ask-price functional with declared structural flags.

    ``evaluator`` maps a payoff to a float or ``math.inf``;  it must never
    produce ``-inf`` or NaN.  ``space`` restricts evaluation to one atom
    space; ``None`` means the formula applies on any space.  Members with a
    known conjugate carry a closed-form ``conjugate_oracle`` used to
    cross-check the sampled conjugate lower bound.
    """

    name: str
    evaluator: Callable[[Payoff], float]
    flags: FunctionalFlags
    space: AtomSpace | None = None
    conjugate_oracle: Callable[[Payoff], float] | None = None

    def __post_init__(self) -> None:
        if self.flags.sublinear and not self.flags.convex:
            raise ValidationError(f"{self.name}: sublinear declared without convex")

    def __call__(self, x: Payoff) -> float:
        return evaluate(self, x)


def evaluate(f: PricingFunctional, x: Payoff) -> float:
    if f.space is not None and x.space != f.space:
        raise SpaceMismatchError(
            f"{f.name} built for n={f.space.n}, payoff has n={x.space.n}"
        )
    v = float(f.evaluator(x))
    if math.isnan(v) or v == -math.inf:
        raise ValidationError(f"{f.name} produced {v!r}; values must be in R or +inf")
    return v


# ---------------------------------------------------------------------------
# Distortions and Choquet evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Distortion:
    """Nondecreasing g : [0,1] -> [0,1] with g(0)=0, g(1)=1.

    Applied to tail probabilities it defines a capacity on the equal-atom
    space; `shape` declares concavity/convexity of g ("concave", "convex",
    or None) and drives the sublinearity flag of the induced price.
    Monotonicity and the endpoints are validated on a 1001-point grid;
    continuity is taken from the functional form.
    """

    name: str
    g: Callable[[np.ndarray], np.ndarray]
    shape: str | None = None

    def __post_init__(self) -> None:
        if self.shape not in (None, "concave", "convex"):
            raise ValidationError(f"unknown distortion shape {self.shape!r}")
        vals = np.asarray(self.g(_DISTORTION_GRID), dtype=float)
        if vals.shape != _DISTORTION_GRID.shape:
            raise ValidationError("distortion must evaluate elementwise on arrays")
        if abs(vals[0]) > 1e-12 or abs(vals[-1] - 1.0) > 1e-12:
            raise ValidationError("distortion must satisfy g(0)=0 and g(1)=1")
        if np.any(np.diff(vals) < -1e-12):
            raise ValidationError("distortion must be nondecreasing")


def identity_distortion() -> Distortion:
    return Distortion("identity", lambda u: u, shape="concave")


def power_distortion(gamma: float) -> Distortion:
    if gamma <= 0:
        raise ValidationError(f"power distortion needs a positive exponent, got {gamma}")
    shape = "concave" if gamma <= 1 else "convex"
    return Distortion(f"power({gamma})", lambda u, g=float(gamma): np.asarray(u, dtype=float) ** g, shape=shape)


def es_distortion(beta: float) -> Distortion:
    if not 0.0 <= beta < 1.0:
        raise ValidationError(f"tail level must lie in [0,1), got {beta}")
    scale = 1.0 / (1.0 - beta)
    return Distortion(
        f"es({beta})",
        lambda u, s=scale: np.minimum(np.asarray(u, dtype=float) * s, 1.0),
        shape="concave",
    )


def table_distortion(points: Sequence[Sequence[float]], shape: str | None = None) -> Distortion:
    """Piecewise-linear distortion through (u, g(u)) anchor points."""
    pts = sorted((float(u), float(v)) for u, v in points)
    us = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    if us[0] != 0.0 or us[-1] != 1.0:
        raise ValidationError("tabulated distortion must anchor u=0 and u=1")
    return Distortion("table", lambda u: np.interp(u, us, vs), shape=shape)


def distortion_from_config(spec: Mapping) -> Distortion:
    kind = spec.get("type")
    if kind == "power":
        return power_distortion(float(spec["exponent"]))
    if kind == "es":
        return es_distortion(float(spec["beta"]))
    if kind == "identity":
        return identity_distortion()
    if kind == "table":
        return table_distortion(spec["points"], spec.get("shape"))
    raise ValidationError(f"unknown distortion type: {kind!r}")


def choquet_eval(dist: Distortion, x: Payoff) -> float:
    """Exact discrete Choquet integral of x against the capacity g∘P.

    With values sorted descending, the i-th largest value is weighted by the
    increment g(i/n) - g((i-1)/n).
    """
    n = x.space.n
    desc = np.sort(x.values)[::-1]
    weights = np.diff(dist.g(np.arange(n + 1) / n))
    return float(desc @ weights)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def expectation_functional(c: float = 1.0) -> PricingFunctional:
    """Scaled expectation X -> c E[X]; the collapse target of the dichotomy."""
    c = float(c)

    def conj(y: Payoff) -> float:
        return 0.0 if bool(np.all(y.values == c)) else math.inf

    return PricingFunctional(
        name=f"expectation({c:g})",
        evaluator=lambda x: c * float(x.values.mean()),
        flags=FunctionalFlags(
            convex=True,
            sublinear=True,
            monotone=c >= 0,
            law_invariant=True,
            cash_additive=c == 1.0,
            comonotonic=True,
        ),
        conjugate_oracle=conj,
    )


def choquet_functional(dist: Distortion, name: str | None = None) -> PricingFunctional:
    sub = dist.shape == "concave"
    return PricingFunctional(
        name=name or f"choquet[{dist.name}]",
        evaluator=lambda x: choquet_eval(dist, x),
        flags=FunctionalFlags(
            convex=sub,
            sublinear=sub,
            monotone=True,
            law_invariant=True,
            cash_additive=True,
            comonotonic=True,
        ),
    )


def expected_shortfall(beta: float) -> PricingFunctional:
    """Average of the worst-case upper tail at level beta (ask-price form).

    Realized as the Choquet price of the concave tail distortion; at beta=0
    it is the plain expectation and at beta = 1 - 1/n it is the maximum.
    """
    dist = es_distortion(beta)
    bound = 1.0 / (1.0 - beta)

    def conj(y: Payoff) -> float:
        vals = y.values
        ok = (
            bool(np.all(vals >= -1e-12))
            and bool(np.all(vals <= bound + 1e-12))
            and abs(float(vals.mean()) - 1.0) <= 1e-12
        )
        return 0.0 if ok else math.inf

    f = choquet_functional(dist, name=f"expected_shortfall({beta:g})")
    return replace(f, conjugate_oracle=conj)


def worst_case(space: AtomSpace) -> PricingFunctional:
    """Largest value over the atoms; the beta -> 1 limit of expected shortfall."""
    return replace(
        expected_shortfall(1.0 - 1.0 / space.n),
        name="worst_case",
        space=space,
    )


def entropic(theta: float) -> PricingFunctional:
    """Exponential certainty equivalent (theta-tilted log-mean-exp).

    Convex and cash-additive but not positively homogeneous; evaluation is
    overflow-safe via max-shifting so the recession grid can push the scale
    to 1e6 and beyond.
    """
    if theta <= 0:
        raise ValidationError(f"entropic needs theta > 0, got {theta}")
    th = float(theta)

    def ev(x: Payoff) -> float:
        z = th * x.values
        m = float(z.max())
        return (m + math.log(float(np.exp(z - m).mean()))) / th

    return PricingFunctional(
        name=f"entropic({th:g})",
        evaluator=ev,
        flags=FunctionalFlags(
            convex=True,
            monotone=True,
            law_invariant=True,
            cash_additive=True,
        ),
    )


def gate() -> PricingFunctional:
    """Prices the mean but refuses to pay for negative-mean payoffs.

    Sublinear and law-invariant; every zero-mean payoff is frictionless here
    while the functional is nowhere a multiple of the expectation, which is
    what the BOUNDARY verdict of the collapse scan detects.
    """
    return PricingFunctional(
        name="gate",
        evaluator=lambda x: max(float(x.values.mean()), 0.0),
        flags=FunctionalFlags(
            convex=True,
            sublinear=True,
            monotone=True,
            law_invariant=True,
        ),
    )


def floor_gauge() -> PricingFunctional:
    """Smallest cash addition keeping the payoff above -1: equals -1 - min(X).

    Convex and law-invariant, with value -1 at zero and cash ANTI-additivity
    F(X+m) = F(X) - m.  Its unit-volume friction can vanish on symmetric
    payoffs while the price is visibly nonlinear in volume.
    """
    return PricingFunctional(
        name="floor_gauge",
        evaluator=lambda x: -1.0 - float(x.values.min()),
        flags=FunctionalFlags(convex=True, law_invariant=True),
    )


def mean_abs_dev(lam: float) -> PricingFunctional:
    """Mean plus a multiple of the mean absolute deviation.

    Sublinear and law-invariant; monotone only for lam <= 1/2.
    """
    if lam < 0:
        raise ValidationError(f"deviation loading must be >= 0, got {lam}")
    lam = float(lam)

    def ev(x: Payoff) -> float:
        m = float(x.values.mean())
        return m + lam * float(np.abs(x.values - m).mean())

    return PricingFunctional(
        name=f"mean_abs_dev({lam:g})",
        evaluator=ev,
        flags=FunctionalFlags(
            convex=True,
            sublinear=True,
            monotone=lam <= 0.5,
            law_invariant=True,
            cash_additive=True,
        ),
    )


def atom_value(index: int) -> PricingFunctional:
    """Value on one fixed atom: linear but deliberately NOT law-invariant.

    Exists to exercise the law-invariance gates (flag audits, collapse-scan
    preconditions, exit codes) from the failing side.
    """
    i = int(index)
    return PricingFunctional(
        name=f"atom_value({i})",
        evaluator=lambda x: float(x.values[i]),
        flags=FunctionalFlags(
            convex=True,
            sublinear=True,
            monotone=True,
            cash_additive=True,
            comonotonic=True,
        ),
    )


# ---------------------------------------------------------------------------
# Representation sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RepresentationSet:
    """Dual description of a sublinear price: a set of scenario densities.

    Either an explicit finite list of density payoffs, or the parametric
    family of all densities 0 <= Y <= bound with E[Y] = 1.  For the bounded
    family the supremum has an exact greedy solution (stack the cap on the
    largest quantiles first).
    """

    densities: tuple[Payoff, ...] | None = None
    bound: float | None = None

    def __post_init__(self) -> None:
        if (self.densities is None) == (self.bound is None):
            raise ValidationError("provide exactly one of densities / bound")
        if self.densities is not None:
            dens = tuple(self.densities)
            if not dens:
                raise ValidationError("density list must be nonempty")
            for d in dens[1:]:
                require_same_space(dens[0], d)
            object.__setattr__(self, "densities", dens)
        else:
            if self.bound < 1.0:
                raise ValidationError("bounded-density family needs bound >= 1 for E[Y]=1 to be feasible")
            object.__setattr__(self, "bound", float(self.bound))


def representation_eval(dset: RepresentationSet, x: Payoff) -> float:
    """Supremum of the maximal-correlation product over the density set."""
    if dset.densities is not None:
        require_same_space(dset.densities[0], x)
        return max(hl_product(x, y) for y in dset.densities)
    n = x.space.n
    m = dset.bound
    desc = np.sort(x.values)[::-1]
    k = min(int(n // m), n)
    rem = n - m * k
    total = m * float(desc[:k].sum())
    if k < n and rem > 0:
        total += rem * float(desc[k])
    return total / n


def representation_functional(dset: RepresentationSet, name: str | None = None) -> PricingFunctional:
    if dset.densities is not None:
        space = dset.densities[0].space
        monotone = bool(all(np.all(d.values >= 0) for d in dset.densities))
        cash = bool(all(abs(float(d.values.mean()) - 1.0) <= 1e-12 for d in dset.densities))
        comono = len(dset.densities) == 1
    else:
        space = None
        monotone = cash = comono = True
    return PricingFunctional(
        name=name or "representation_sup",
        evaluator=lambda x: representation_eval(dset, x),
        flags=FunctionalFlags(
            convex=True,
            sublinear=True,
            monotone=monotone,
            law_invariant=True,
            cash_additive=cash,
            comonotonic=comono,
        ),
        space=space,
    )


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------

def functional_from_config(spec: Mapping) -> PricingFunctional:
    """Build a catalog member from a JSON-style spec.

    An optional "flags" entry overrides individual declared flags; audits use
    this to exercise deliberately mislabeled functionals.
    """
    kind = spec.get("type")
    if kind == "expectation":
        f = expectation_functional(float(spec.get("c", 1.0)))
    elif kind == "expected_shortfall":
        f = expected_shortfall(float(spec["beta"]))
    elif kind == "choquet":
        f = choquet_functional(distortion_from_config(spec["distortion"]))
    elif kind == "entropic":
        f = entropic(float(spec.get("theta", 1.0)))
    elif kind == "gate":
        f = gate()
    elif kind == "floor_gauge":
        f = floor_gauge()
    elif kind == "mean_abs_dev":
        f = mean_abs_dev(float(spec.get("lam", 0.5)))
    elif kind == "atom_value":
        f = atom_value(int(spec.get("index", 0)))
    else:
        raise ValidationError(f"unknown functional type: {kind!r}")
    overrides = spec.get("flags")
    if overrides:
        bad = set(overrides) - set(f.flags.to_dict())
        if bad:
            raise ValidationError(f"unknown flag overrides: {sorted(bad)}")
        merged = {**f.flags.to_dict(), **{k: bool(v) for k, v in overrides.items()}}
        f = replace(f, flags=FunctionalFlags(**merged))
    return f


# ---------------------------------------------------------------------------
# Recession functional
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecessionResult:
    """Grid estimate of sup over scale of price-per-unit-volume.

    ``value`` is the maximum of F(lam*X)/lam over a geometric grid; ``stale``
    is set when the last two grid values still differ beyond tolerance (the
    supremum was not reached on the grid, or is +inf).  A grid maximum plus a
    staleness flag is reported instead of a claimed exact supremum.
    """

    value: float
    stale: bool
    lambdas: np.ndarray
    ratios: np.ndarray


def recession(
    f: PricingFunctional,
    x: Payoff,
    lambda_max: float,
    grid_size: int = 60,
    stale_tol: float = 1e-9,
) -> RecessionResult:
    """Estimate the recession (asymptotic per-unit) price of x under f.

    Requires a convex functional with F(0) <= 0: per-unit price is then
    nondecreasing in the scale, so the grid maximum sits at the top and the
    staleness of the last step is an honest convergence signal.
    """
    if not f.flags.convex:
        raise FlagError(f"{f.name}: recession needs the convex flag")
    if lambda_max < 1.0:
        raise ValidationError("lambda_max must be >= 1")
    at_zero = evaluate(f, Payoff.zero(x.space))
    if at_zero > 1e-12:
        raise FlagError(
            f"{f.name}: recession grid needs F(0) <= 0, got {at_zero!r}"
        )
    lambdas = np.geomspace(1.0, float(lambda_max), int(grid_size))
    ratios = np.array([evaluate(f, lam * x) / lam for lam in lambdas])
    value = float(ratios.max())
    if not math.isfinite(value):
        return RecessionResult(math.inf, True, lambdas, ratios)
    stale = abs(ratios[-1] - ratios[-2]) > stale_tol * max(1.0, abs(ratios[-1]))
    return RecessionResult(value, bool(stale), lambdas, ratios)


# ---------------------------------------------------------------------------
# Conjugate lower bound
# ---------------------------------------------------------------------------

def _default_conjugate_sampler(y: Payoff) -> Callable[[np.random.Generator, int], Payoff]:
    """Mix of random directions and growing rays along the centered target.

    The rays t*(Y - E[Y]) witness +inf conjugates of linear prices; random
    normals explore the rest.
    """
    centered = y - float(y.values.mean())

    def sample(rng: np.random.Generator, i: int) -> Payoff:
        if i == 0:
            return Payoff.zero(y.space)
        if i % 4 == 0:
            return (2.0 ** (i // 4)) * centered
        scale = float(rng.choice([0.5, 1.0, 2.0, 4.0]))
        return Payoff(y.space, rng.normal(0.0, scale, size=y.space.n))

    return sample


def conjugate_lower_bound(
    f: PricingFunctional,
    y: Payoff,
    sampler: Callable[[np.random.Generator, int], Payoff] | None = None,
    budget: int = 200,
    seed: int = 0,
) -> float:
    """Sampled LOWER bound on the quantile-pairing conjugate of f at y.

    Maximizes hl_product(X, Y) - F(X) over ``budget`` sampled payoffs.  This
    is a certificate from below only and is never claimed tight; members with
    closed-form conjugates carry oracles for cross-checking.
    """
    if not f.flags.law_invariant:
        raise FlagError(f"{f.name}: conjugate bound needs the law-invariant flag")
    rng = np.random.default_rng(seed)
    sample = sampler or _default_conjugate_sampler(y)
    best = -math.inf
    for i in range(budget):
        x = sample(rng, i)
        v = evaluate(f, x)
        if v == math.inf:
            continue
        best = max(best, hl_product(x, y) - v)
    return best


# ---------------------------------------------------------------------------
# Randomized audits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditFinding:
    prop: str
    detail: str
    gap: float


@dataclass(frozen=True)
class FlagAuditReport:
    """Outcome of the randomized attack on each declared flag.

    statuses[prop] is "pass" (declared True, no counterexample found),
    "violated" (declared True, counterexample found), "confirmed_absent"
    (declared False, counterexample found as expected), or "not_falsified"
    (declared False, the search found no counterexample; inconclusive).
    """

    name: str
    trials: int
    statuses: dict[str, str]
    findings: tuple[AuditFinding, ...]

    @property
    def ok(self) -> bool:
        return all(s != "violated" for s in self.statuses.values())

    def to_dict(self) -> dict:
        return {
            "functional": self.name,
            "trials": self.trials,
            "ok": self.ok,
            "statuses": dict(sorted(self.statuses.items())),
            "findings": [
                {"property": w.prop, "detail": w.detail, "gap": w.gap} for w in self.findings
            ],
        }


def _audit_payoff(rng: np.random.Generator, n: int) -> Payoff:
    space = AtomSpace(n)
    style = rng.integers(0, 4)
    if style == 0:
        vals = rng.normal(0.0, float(rng.choice([0.3, 1.0, 3.0])), size=n)
    elif style == 1:
        vals = rng.uniform(-2.0, 2.0, size=n)
    elif style == 2:
        vals = rng.exponential(1.0, size=n) - 1.0
    else:
        vals = np.full(n, float(rng.normal(0.0, 1.0)))
    return Payoff(space, vals)


def _comonotone_pair(rng: np.random.Generator, n: int) -> tuple[Payoff, Payoff]:
    """Random pair f(Z), g(Z) with nondecreasing f and g: comonotone by build."""
    space = AtomSpace(n)
    z = rng.normal(0.0, 1.0, size=n)
    uniq, inv = np.unique(z, return_inverse=True)
    f_vals = np.sort(rng.normal(0.0, 1.0, size=uniq.size))
    g_vals = np.sort(rng.uniform(-2.0, 2.0, size=uniq.size))
    return Payoff(space, f_vals[inv]), Payoff(space, g_vals[inv])


def _finite(*vals: float) -> bool:
    return all(math.isfinite(v) for v in vals)


def flag_audit(
    f: PricingFunctional,
    space: AtomSpace,
    trials: int = 400,
    seed: int = 0,
    tol: float = 1e-9,
) -> FlagAuditReport:
    """Attack every flag of f with randomized probes on the given space.

    A declared-True flag fails the audit as soon as one counterexample
    survives the tolerance; a declared-False flag is only "confirmed" when a
    counterexample is found, otherwise reported not falsified.
    """
    rng = np.random.default_rng(seed)
    n = space.n
    witnesses: dict[str, AuditFinding] = {}

    def attack(prop: str, lhs: float, rhs: float, detail: str, scale: float = 1.0) -> None:
        # records lhs > rhs + tol*scale as a counterexample for prop
        gap = lhs - rhs
        if gap > tol * max(1.0, scale) and prop not in witnesses:
            witnesses[prop] = AuditFinding(prop, detail, float(gap))

    homogeneity_lams = (0.0, 0.5, 2.0, 3.0)
    cash_shifts = (-2.0, -0.5, 1.0, 2.5)

    for t in range(trials):
        x = _audit_payoff(rng, n)
        y = _audit_payoff(rng, n)
        vx, vy = evaluate(f, x), evaluate(f, y)

        lam = float(rng.uniform(0.0, 1.0))
        if _finite(vx, vy):
            mix = evaluate(f, lam * x + (1.0 - lam) * y)
            bound = lam * vx + (1.0 - lam) * vy
            attack("convex", mix, bound, f"mixture lam={lam:.3f}", scale=max(abs(mix), abs(bound)))

        if _finite(vx):
            m = homogeneity_lams[t % len(homogeneity_lams)]
            vm = evaluate(f, m * x)
            target = imul(m, vx)
            if math.isfinite(vm):
                attack("positively_homogeneous", abs(vm - target), 0.0, f"scale m={m:g}",
                       scale=max(abs(vm), abs(target)))
            else:
                attack("positively_homogeneous", math.inf, 0.0, f"scale m={m:g}")

            shift = cash_shifts[t % len(cash_shifts)]
            vs = evaluate(f, x + shift)
            attack("cash_additive", abs(vs - (vx + shift)), 0.0, f"shift m={shift:g}",
                   scale=max(abs(vs), abs(vx + shift)))

            lower = Payoff(space, x.values - np.abs(rng.normal(0.0, 1.0, size=n)))
            attack("monotone", evaluate(f, lower), vx, "dominated payoff priced higher",
                   scale=abs(vx))

            perm = Payoff(space, x.values[rng.permutation(n)])
            attack("law_invariant", abs(evaluate(f, perm) - vx), 0.0, "atom permutation",
                   scale=abs(vx))

        cx, cy = _comonotone_pair(rng, n)
        vcx, vcy = evaluate(f, cx), evaluate(f, cy)
        if _finite(vcx, vcy):
            vsum = evaluate(f, cx + cy)
            attack("comonotonic", abs(vsum - (vcx + vcy)), 0.0, "comonotone pair",
                   scale=max(abs(vsum), abs(vcx + vcy)))

    declared = {
        "convex": f.flags.convex,
        "sublinear": f.flags.sublinear,
        "monotone": f.flags.monotone,
        "law_invariant": f.flags.law_invariant,
        "cash_additive": f.flags.cash_additive,
        "comonotonic": f.flags.comonotonic,
    }
    broken = {
        "convex": "convex" in witnesses,
        "sublinear": "convex" in witnesses or "positively_homogeneous" in witnesses,
        "monotone": "monotone" in witnesses,
        "law_invariant": "law_invariant" in witnesses,
        "cash_additive": "cash_additive" in witnesses,
        "comonotonic": "comonotonic" in witnesses,
    }
    statuses = {}
    for prop, decl in declared.items():
        if decl:
            statuses[prop] = "violated" if broken[prop] else "pass"
        else:
            statuses[prop] = "confirmed_absent" if broken[prop] else "not_falsified"
    return FlagAuditReport(
        name=f.name,
        trials=trials,
        statuses=statuses,
        findings=tuple(witnesses.values()),
    )


@dataclass(frozen=True)
class SchurReport:
    name: str
    trials: int
    conditioning_violations: tuple[AuditFinding, ...]
    order_violations: tuple[AuditFinding, ...]

    @property
    def ok(self) -> bool:
        return not self.conditioning_violations and not self.order_violations

    def to_dict(self) -> dict:
        return {
            "functional": self.name,
            "trials": self.trials,
            "ok": self.ok,
            "conditioning_violations": len(self.conditioning_violations),
            "order_violations": len(self.order_violations),
        }


def schur_convexity_report(
    f: PricingFunctional,
    space: AtomSpace,
    trials: int = 1000,
    seed: int = 0,
    tol: float = 1e-9,
) -> SchurReport:
    """Check consistency of f with the convex order on random probes.

    Two attack routes per trial: coarsening (price of a block-averaged payoff
    must not exceed the original) and sampled convex-order pairs (dominating
    payoff must not be priced lower).  Requires the law-invariant and convex
    flags; law invariance is what makes Schur-convexity equivalent to them.
    """
    if not (f.flags.law_invariant and f.flags.convex):
        raise FlagError(f"{f.name}: Schur check needs law_invariant and convex flags")
    rng = np.random.default_rng(seed)
    cond_bad: list[AuditFinding] = []
    order_bad: list[AuditFinding] = []

    def check_order(hi: Payoff, lo: Payoff, t: int) -> None:
        if not convex_order_geq(hi, lo, tol=1e-12):
            return
        v_hi, v_lo = evaluate(f, hi), evaluate(f, lo)
        if math.isfinite(v_hi) and v_lo > v_hi + tol * max(1.0, abs(v_hi)):
            if len(order_bad) < 5:
                order_bad.append(AuditFinding("convex_order", f"trial {t}", v_lo - v_hi))

    for t in range(trials):
        x = _audit_payoff(rng, space.n)
        part = random_partition(space, rng)
        coarse = condition(x, part)
        vx, vc = evaluate(f, x), evaluate(f, coarse)
        if math.isfinite(vx) and vc > vx + tol * max(1.0, abs(vx)):
            if len(cond_bad) < 5:
                cond_bad.append(AuditFinding("conditioning", f"trial {t}", vc - vx))
        # order route: the constructed comparable pair plus an independent one
        check_order(x, coarse, t)
        check_order(x, _audit_payoff(rng, space.n), t)
    return SchurReport(f.name, trials, tuple(cond_bad), tuple(order_bad))
