"""Young functions, the Luxemburg gauge, and the doubling growth check.

On a finite atom space every payoff has finite gauge for every Young
function, so the space hierarchy degenerates; what remains numerically
meaningful is the gauge itself (a norm), and the doubling condition
Phi(2t) <= k Phi(t) as an asymptotic growth diagnostic on a grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import SolverError, ValidationError
from .spaces import AtomSpace, Payoff

__all__ = [
    "YoungFunction",
    "power_young",
    "exp_young",
    "linf_young",
    "young_from_config",
    "luxemburg_norm",
    "heart_membership",
    "norm_order_check",
    "NormOrderReport",
    "delta2_check",
    "Delta2Verdict",
]

_VALIDATION_GRID = np.linspace(0.0, 8.0, 161)


@dataclass(frozen=True, eq=False)
class YoungFunction:
    """Convex nondecreasing Phi : [0, inf) -> [0, inf] with Phi(0) = 0,
    nonconstant; may take the value +inf (then ``finite`` is False)."""

    name: str
    phi: Callable[[np.ndarray], np.ndarray]
    finite: bool = True

    def __post_init__(self) -> None:
        vals = np.asarray(self.phi(_VALIDATION_GRID), dtype=float)
        if vals.shape != _VALIDATION_GRID.shape:
            raise ValidationError("phi must evaluate elementwise on arrays")
        if vals[0] != 0.0:
            raise ValidationError("Young function must satisfy Phi(0) = 0")
        if np.any(np.isnan(vals)) or np.any(vals < 0):
            raise ValidationError("Young function must be nonnegative")
        with np.errstate(invalid="ignore"):  # inf - inf pairs compare as no-violation
            if np.any(np.diff(vals) < -1e-12):
                raise ValidationError("Young function must be nondecreasing")
        finite_mask = np.isfinite(vals)
        fv = vals[finite_mask]
        if fv.size >= 3:
            t = _VALIDATION_GRID[finite_mask]
            slopes = np.diff(fv) / np.diff(t)
            if np.any(np.diff(slopes) < -1e-9):
                raise ValidationError("Young function must be convex")
        if np.all(vals == 0.0):
            raise ValidationError("Young function must be nonconstant")
        if self.finite and not np.all(finite_mask):
            raise ValidationError(f"{self.name}: declared finite but takes +inf on the grid")


def power_young(p: float) -> YoungFunction:
    if p < 1.0:
        raise ValidationError(f"power Young function needs p >= 1, got {p}")
    p = float(p)
    return YoungFunction(f"power({p:g})", lambda t: np.asarray(t, dtype=float) ** p)


def exp_young() -> YoungFunction:
    return YoungFunction("exp", lambda t: np.expm1(np.asarray(t, dtype=float)))


def linf_young() -> YoungFunction:
    def phi(t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= 1.0, 0.0, np.inf)

    return YoungFunction("linf", phi, finite=False)


def young_from_config(spec: Mapping) -> YoungFunction:
    kind = spec.get("type")
    if kind == "power":
        return power_young(float(spec["p"]))
    if kind == "exp":
        return exp_young()
    if kind == "linf":
        return linf_young()
    raise ValidationError(f"unknown Young function type: {kind!r}")


def _gauge_integrand(phi: YoungFunction, absvals: np.ndarray):
    def expectation_at(lam: float) -> float:
        vals = np.asarray(phi.phi(absvals / lam), dtype=float)
        if np.any(np.isinf(vals)):
            return math.inf
        return float(vals.mean())

    return expectation_at


def luxemburg_norm(phi: YoungFunction, x: Payoff, tol: float = 1e-10) -> float:
    """Gauge inf{lam > 0 : E[Phi(|X|/lam)] <= 1} by bracketing + bisection.

    The map lam -> E[Phi(|X|/lam)] is nonincreasing; an observed inversion
    aborts with diagnostics.  The lower bracket lam = max|X|/t* with
    Phi(t*) >= n forces the expectation above 1; the upper bracket doubles
    until the expectation drops to 1 or below.
    """
    if tol <= 0:
        raise ValidationError(f"tolerance must be positive, got {tol}")
    absvals = np.abs(x.values)
    m = float(absvals.max())
    if m == 0.0:
        return 0.0
    n = x.space.n
    e_at = _gauge_integrand(phi, absvals)

    tstar = 1e-4
    for _ in range(200):
        v = float(np.asarray(phi.phi(np.array([tstar])), dtype=float)[0])
        if v >= n or math.isinf(v):
            break
        tstar *= 2.0
    else:
        raise SolverError(f"{phi.name}: could not find t with Phi(t) >= {n}")

    lo = m / tstar
    hi = lo
    e_lo = e_at(lo)
    for _ in range(200):
        if e_at(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise SolverError(f"{phi.name}: upper bracket for the gauge did not close")

    trace: list[tuple[float, float]] = [(lo, e_lo), (hi, e_at(hi))]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        e_mid = e_at(mid)
        trace.append((mid, e_mid))
        # mid > lo, so a nonincreasing integrand forbids E(mid) > E(lo)
        if math.isfinite(e_lo) and e_mid > e_lo * (1.0 + 1e-9) + 1e-12:
            raise SolverError(
                f"{phi.name}: gauge integrand not nonincreasing near lam={mid!r}; trace={trace[-5:]}"
            )
        if e_mid <= 1.0:
            hi = mid
        else:
            lo = mid
            e_lo = e_mid if math.isfinite(e_mid) else e_lo
    return hi


def heart_membership(phi: YoungFunction, x: Payoff) -> bool:
    """Membership in the gauge's small subspace of uniformly integrable tails.

    Degenerate on finite atom spaces: every payoff qualifies for every Young
    function, so this always returns True and exists for interface coverage.
    """
    return True


@dataclass(frozen=True)
class NormOrderReport:
    trials: int
    max_homogeneity_gap: float
    max_triangle_excess: float
    max_monotonicity_excess: float
    zero_norm: float

    @property
    def ok(self) -> bool:
        return (
            self.max_homogeneity_gap <= 0.0
            and self.max_triangle_excess <= 0.0
            and self.max_monotonicity_excess <= 0.0
            and self.zero_norm == 0.0
        )


def norm_order_check(
    phi: YoungFunction,
    space_n: int = 6,
    trials: int = 200,
    seed: int = 0,
    tol: float = 1e-8,
) -> NormOrderReport:
    """Sampled norm axioms for the gauge: absolute homogeneity, triangle
    inequality, and monotonicity in |X|.  Gaps are reported net of 10*tol."""
    rng = np.random.default_rng(seed)
    space = AtomSpace(space_n)
    slack = 10.0 * tol
    hom = tri = mono = 0.0
    for _ in range(trials):
        x = Payoff(space, rng.normal(0.0, 1.0, size=space_n))
        y = Payoff(space, rng.normal(0.0, 1.0, size=space_n))
        c = float(rng.uniform(-3.0, 3.0))
        nx = luxemburg_norm(phi, x, tol)
        ny = luxemburg_norm(phi, y, tol)
        hom = max(hom, abs(luxemburg_norm(phi, c * x, tol) - abs(c) * nx) - slack)
        tri = max(tri, luxemburg_norm(phi, x + y, tol) - (nx + ny) - slack)
        smaller = Payoff(space, x.values * rng.uniform(0.0, 1.0, size=space_n))
        mono = max(mono, luxemburg_norm(phi, smaller, tol) - nx - slack)
    zero = luxemburg_norm(phi, Payoff.zero(space), tol)
    return NormOrderReport(trials, hom, tri, mono, zero)


@dataclass(frozen=True)
class Delta2Verdict:
    """Outcome of the doubling-growth scan on a geometric grid.

    ``holds`` is a grid heuristic for an asymptotic property, so the full
    ratio trace ships with the verdict and the caller can judge.
    """

    holds: bool
    k: float | None
    ts: np.ndarray
    ratios: np.ndarray
    message: str

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "k": self.k,
            "message": self.message,
            "trace_tail": [
                [float(t), float(r)] for t, r in zip(self.ts[-5:], self.ratios[-5:])
            ],
        }


def delta2_check(
    phi: YoungFunction,
    t_min: float = 1.0,
    t_max: float = 1e4,
    grid_size: int = 200,
) -> Delta2Verdict:
    """Scan Phi(2t)/Phi(t) on a geometric grid and judge boundedness.

    HOLDS when the ratio is flat-or-falling over the last stretch of the
    grid (bound k = the grid supremum); FAILS when it is still growing at
    t_max.  Requires Phi finite up to 2*t_max.
    """
    if t_min <= 0 or t_max <= t_min:
        raise ValidationError("need 0 < t_min < t_max")
    ts = np.geomspace(t_min, t_max, int(grid_size))
    num = np.asarray(phi.phi(2.0 * ts), dtype=float)
    den = np.asarray(phi.phi(ts), dtype=float)
    if np.any(np.isinf(num)) or np.any(np.isinf(den)):
        raise ValidationError("doubling bound undefined for a Young function taking +inf on the grid")
    mask = den > 0.0
    if not np.any(mask):
        raise ValidationError("Phi vanishes on the whole grid; enlarge t_max")
    ts, ratios = ts[mask], num[mask] / den[mask]
    k = float(ratios.max())
    tail = ratios[-max(5, ratios.size // 5):]
    growing = tail[-1] > tail[0] * (1.0 + 1e-6)
    if growing:
        return Delta2Verdict(False, None, ts, ratios, "ratio still growing at t_max")
    return Delta2Verdict(True, k, ts, ratios, f"ratio bounded by {k!r}")
