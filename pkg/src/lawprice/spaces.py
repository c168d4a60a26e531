"""Finite equal-atom probability model.

Payoffs are length-n vectors of finite reals on a space of n atoms, each with
probability 1/n.  Law invariance on this model is permutation invariance of
the value vector, which keeps every distributional operation exact
sorted-vector arithmetic.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import SpaceMismatchError, ValidationError

__all__ = [
    "AtomSpace",
    "Payoff",
    "Partition",
    "expectation",
    "same_law",
    "is_comonotone",
    "condition",
    "random_payoff",
    "random_partition",
    "require_same_space",
    "load_scenario",
    "scenario_to_dict",
    "payoff_to_csv",
    "payoff_from_csv",
]


@dataclass(frozen=True)
class AtomSpace:
    """Probability space with ``n`` atoms of probability 1/n each."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise ValidationError(f"atom count must be an integer, got {self.n!r}")
        if self.n < 1:
            raise ValidationError(f"atom count must be >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def atom_probability(self) -> float:
        return 1.0 / self.n


@dataclass(frozen=True, eq=False)
class Payoff:
    """State-contingent payoff: one finite real per atom, in numeraire units.

    Values are frozen at construction; every operation on payoffs returns a
    new object.  Only functional *values* may be infinite in this library,
    payoff entries never are.
    """

    space: AtomSpace
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.space.n,):
            raise ValidationError(
                f"payoff needs exactly {self.space.n} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValidationError("payoff values must all be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    # Atomwise arithmetic; scalars broadcast.  Results live on the same space.

    def __add__(self, other) -> "Payoff":
        if isinstance(other, Payoff):
            require_same_space(self, other)
            return Payoff(self.space, self.values + other.values)
        return Payoff(self.space, self.values + float(other))

    __radd__ = __add__

    def __sub__(self, other) -> "Payoff":
        if isinstance(other, Payoff):
            require_same_space(self, other)
            return Payoff(self.space, self.values - other.values)
        return Payoff(self.space, self.values - float(other))

    def __rsub__(self, other) -> "Payoff":
        return Payoff(self.space, float(other) - self.values)

    def __neg__(self) -> "Payoff":
        return Payoff(self.space, -self.values)

    def __mul__(self, scalar) -> "Payoff":
        return Payoff(self.space, self.values * float(scalar))

    __rmul__ = __mul__

    def sorted_values(self) -> np.ndarray:
        return np.sort(self.values)

    def to_json(self) -> list[float]:
        return [float(v) for v in self.values]

    @classmethod
    def constant(cls, space: AtomSpace, c: float) -> "Payoff":
        return cls(space, np.full(space.n, float(c)))

    @classmethod
    def zero(cls, space: AtomSpace) -> "Payoff":
        return cls.constant(space, 0.0)


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint nonempty blocks of atom indices covering the whole space.

    Blocks use 0-based atom indices.  Partitions model finitely-generated
    coarsenings; conditioning on a partition replaces each atom's value with
    its block average.
    """

    space: AtomSpace
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(tuple(int(i) for i in block) for block in self.blocks)
        seen: set[int] = set()
        for block in blocks:
            if not block:
                raise ValidationError("partition blocks must be nonempty")
            for i in block:
                if not 0 <= i < self.space.n:
                    raise ValidationError(f"atom index {i} outside space of size {self.space.n}")
                if i in seen:
                    raise ValidationError(f"atom index {i} appears in two blocks")
                seen.add(i)
        if len(seen) != self.space.n:
            raise ValidationError("partition blocks must cover every atom")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def singletons(cls, space: AtomSpace) -> "Partition":
        return cls(space, tuple((i,) for i in range(space.n)))

    @classmethod
    def trivial(cls, space: AtomSpace) -> "Partition":
        return cls(space, (tuple(range(space.n)),))

    def refines(self, other: "Partition") -> bool:
        """True when every block of self sits inside a block of other."""
        owner = {}
        for j, block in enumerate(other.blocks):
            for i in block:
                owner[i] = j
        return all(len({owner[i] for i in block}) == 1 for block in self.blocks)


def require_same_space(x: Payoff, y: Payoff) -> None:
    if x.space != y.space:
        raise SpaceMismatchError(
            f"payoffs live on different spaces: n={x.space.n} vs n={y.space.n}"
        )


def expectation(x: Payoff) -> float:
    """Mean of the payoff under the equal-atom measure."""
    return float(x.values.mean())


def same_law(x: Payoff, y: Payoff) -> bool:
    """Exact distributional equality: sorted value vectors match entry by entry.

    Deliberately tolerance-free so that the relation stays a true equivalence;
    approximate comparisons belong in diagnostics, not here.
    """
    require_same_space(x, y)
    return bool(np.array_equal(np.sort(x.values), np.sort(y.values)))


def is_comonotone(x: Payoff, y: Payoff) -> bool:
    """True iff no atom pair moves in opposite directions under x and y."""
    require_same_space(x, y)
    dx = x.values[:, None] - x.values[None, :]
    dy = y.values[:, None] - y.values[None, :]
    return not bool(np.any(dx * dy < 0))


def condition(x: Payoff, part: Partition) -> Payoff:
    """Coarsen x by replacing each value with its block average.

    Preserves the mean exactly and never increases convex-order risk.
    """
    if part.space != x.space:
        raise SpaceMismatchError("partition defined on a different space")
    out = np.empty(x.space.n)
    for block in part.blocks:
        idx = list(block)
        out[idx] = x.values[idx].mean()
    return Payoff(x.space, out)


def random_payoff(space: AtomSpace, seed, spec: Mapping) -> Payoff:
    """Draw a payoff from a named distribution spec, deterministically in seed.

    Supported specs:
        {"type": "uniform", "low": a, "high": b}
        {"type": "normal", "mu": m, "sigma": s}
        {"type": "two_point", "a": a, "b": b}       (fair coin per atom)
        {"type": "constant", "c": c}
    """
    rng = np.random.default_rng(seed)
    kind = spec.get("type")
    if kind == "uniform":
        vals = rng.uniform(float(spec["low"]), float(spec["high"]), size=space.n)
    elif kind == "normal":
        vals = rng.normal(float(spec["mu"]), float(spec["sigma"]), size=space.n)
    elif kind == "two_point":
        vals = rng.choice([float(spec["a"]), float(spec["b"])], size=space.n)
    elif kind == "constant":
        vals = np.full(space.n, float(spec["c"]))
    else:
        raise ValidationError(f"unknown distribution spec type: {kind!r}")
    return Payoff(space, vals)


def random_partition(space: AtomSpace, rng: np.random.Generator) -> Partition:
    """Uniform-ish random partition: shuffle atoms, cut at random positions."""
    order = rng.permutation(space.n)
    n_blocks = int(rng.integers(1, space.n + 1))
    cuts = np.sort(rng.choice(np.arange(1, space.n), size=min(n_blocks - 1, space.n - 1), replace=False)) if space.n > 1 else np.array([], dtype=int)
    blocks, start = [], 0
    for c in list(cuts) + [space.n]:
        blocks.append(tuple(int(i) for i in order[start:c]))
        start = c
    return Partition(space, tuple(blocks))


# ---------------------------------------------------------------------------
# Scenario files: {"n": int, "payoffs": {name: [values]}}
# ---------------------------------------------------------------------------

def scenario_to_dict(space: AtomSpace, payoffs: Mapping[str, Payoff]) -> dict:
    return {"n": space.n, "payoffs": {name: p.to_json() for name, p in payoffs.items()}}


def load_scenario(source) -> tuple[AtomSpace, dict[str, Payoff]]:
    """Load a scenario from a dict, a JSON string, or a file path."""
    if isinstance(source, Mapping):
        raw = dict(source)
    else:
        text = source if str(source).lstrip().startswith("{") else open(source).read()
        raw = json.loads(text)
    if "n" not in raw or "payoffs" not in raw:
        raise ValidationError("scenario must contain 'n' and 'payoffs'")
    if not isinstance(raw["n"], int):
        raise ValidationError("scenario 'n' must be an integer")
    space = AtomSpace(raw["n"])
    payoffs = {}
    for name, vals in raw["payoffs"].items():
        vals = list(vals)
        if len(vals) != space.n:
            raise SpaceMismatchError(
                f"payoff {name!r} has {len(vals)} values on a space of {space.n} atoms"
            )
        payoffs[name] = Payoff(space, np.asarray(vals, dtype=float))
    return space, payoffs


def payoff_to_csv(x: Payoff) -> str:
    """Single-column CSV with a 'value' header."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["value"])
    for v in x.values:
        writer.writerow([repr(float(v))])
    return buf.getvalue()


def payoff_from_csv(space: AtomSpace, text: str) -> Payoff:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["value"]:
        raise ValidationError("payoff CSV must start with a 'value' header")
    vals = [float(r[0]) for r in rows[1:] if r]
    return Payoff(space, np.asarray(vals))
