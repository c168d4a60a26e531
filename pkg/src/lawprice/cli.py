"""Batch driver: load scenarios and specs from files, write JSON/CSV reports.

Subcommands: eval (prices, spreads, friction verdicts), collapse (dichotomy
scan plus spread-landscape CSV), risk (capital requirements), audit (flag and
Schur audits, conditioning closure), orlicz (gauges and the doubling check).

Exit codes: 0 ok, 2 parse/config failure, 3 space mismatch, 4 declared-flag
violation, 5 solver or market-spec failure.  Reports embed the config hash
and seed, and identical (config, seed) runs are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from .errors import FlagError, SolverError, SpaceMismatchError, ValidationError
from .spaces import load_scenario
from .functionals import (
    PricingFunctional,
    evaluate,
    flag_audit,
    functional_from_config,
    schur_convexity_report,
)
from .friction import (
    DEFAULT_M_GRID,
    collapse_scan,
    friction_report,
    spread_landscape,
    write_spread_landscape,
)
from .capital import (
    acceptance_from_config,
    conditioning_closure_check,
    market_from_config,
    solve_risk,
)
from .orlicz import delta2_check, heart_membership, luxemburg_norm, young_from_config

__all__ = ["RunConfig", "load_config", "main", "console_entry"]

_SEED_BOUND = 2**63


@dataclass(frozen=True)
class RunConfig:
    """Effective run configuration after CLI overrides.

    ``raw`` holds the merged spec dict that is hashed into every report so a
    run can be replayed byte-for-byte from its output.
    """

    command: str
    scenario_path: str
    functional_specs: list
    market_spec: dict | None
    acceptance_specs: list
    young_spec: dict | None
    seed: int
    tolerance: float
    budget: int
    output_path: str
    raw: dict

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def load_config(path: str, command: str, seed=None, tol=None, out=None) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValidationError("config must be a JSON object")

    merged = dict(raw)
    if seed is not None:
        merged["seed"] = seed
    if tol is not None:
        merged["tolerance"] = tol
    if out is not None:
        merged["out"] = out
    merged["command"] = command

    scenario = merged.get("scenario")
    if not scenario:
        raise ValidationError("config needs a 'scenario' path")
    if not os.path.isabs(scenario):
        scenario = os.path.join(os.path.dirname(os.path.abspath(path)), scenario)
    if not os.path.exists(scenario):
        raise ValidationError(f"scenario file does not exist: {scenario}")

    tolerance = float(merged.get("tolerance", 1e-9))
    if not (tolerance > 0):
        raise ValidationError(f"tolerance must be positive, got {tolerance}")
    seed_val = int(merged.get("seed", 0))
    if not -_SEED_BOUND <= seed_val < _SEED_BOUND:
        raise ValidationError("seed must fit in 64 bits")

    acceptance = merged.get("acceptance")
    acceptance_specs = acceptance if isinstance(acceptance, list) else ([acceptance] if acceptance else [])
    functionals = merged.get("functionals", [])
    if isinstance(functionals, dict):
        functionals = [functionals]

    return RunConfig(
        command=command,
        scenario_path=scenario,
        functional_specs=list(functionals),
        market_spec=merged.get("market"),
        acceptance_specs=acceptance_specs,
        young_spec=merged.get("young"),
        seed=seed_val,
        tolerance=tolerance,
        budget=int(merged.get("budget", 24)),
        output_path=merged.get("out", "lawprice_report.json"),
        raw=merged,
    )


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lawprice-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def _emit(config: RunConfig, results) -> None:
    report = {
        "command": config.command,
        "config_hash": config.config_hash,
        "seed": config.seed,
        "tolerance": config.tolerance,
        "results": results,
    }
    _write_atomic(config.output_path, json.dumps(report, sort_keys=True, indent=2) + "\n")


def _jsonable(v: float):
    return v if math.isfinite(v) else repr(v)


def _functionals(config: RunConfig) -> list[PricingFunctional]:
    if not config.functional_specs:
        raise ValidationError("config needs at least one functional spec")
    return [functional_from_config(spec) for spec in config.functional_specs]


def cmd_eval(config: RunConfig) -> int:
    space, payoffs = load_scenario(config.scenario_path)
    rows = []
    for f in _functionals(config):
        for name, x in payoffs.items():
            rep = friction_report(f, x, name, DEFAULT_M_GRID, config.tolerance)
            rows.append({"functional": f.name, "value": _jsonable(evaluate(f, x)), **rep.to_dict()})
    _emit(config, rows)
    return 0


def cmd_collapse(config: RunConfig) -> int:
    space, _payoffs = load_scenario(config.scenario_path)
    rows = []
    for f in _functionals(config):
        report = collapse_scan(f, space, tol=config.tolerance, seed=config.seed, budget=config.budget)
        rows.append({"functional": f.name, **report.to_dict()})
        landscape = spread_landscape(f, space)
        write_spread_landscape(landscape, f"{config.output_path}.landscape.csv")
    _emit(config, rows)
    return 0


def cmd_risk(config: RunConfig) -> int:
    space, payoffs = load_scenario(config.scenario_path)
    if config.market_spec is None or not config.acceptance_specs:
        raise SolverError("risk command needs 'market' and 'acceptance' specs")
    market = market_from_config(config.market_spec, space)
    acceptance = acceptance_from_config(config.acceptance_specs[0], space)
    rows = []
    for name, x in payoffs.items():
        sol = solve_risk(acceptance, market, x, tol=config.tolerance)
        rows.append({"payoff_id": name, **sol.to_dict()})
    _emit(config, rows)
    return 0


def cmd_audit(config: RunConfig) -> int:
    space, payoffs = load_scenario(config.scenario_path)
    if not payoffs:
        raise ValidationError("audit needs a nonempty scenario")
    rows = []
    ok = True
    for f in _functionals(config):
        audit = flag_audit(f, space, trials=400, seed=config.seed, tol=config.tolerance)
        entry = {"kind": "flag_audit", **audit.to_dict()}
        if f.flags.law_invariant and f.flags.convex:
            schur = schur_convexity_report(f, space, trials=400, seed=config.seed, tol=config.tolerance)
            entry["schur"] = schur.to_dict()
            ok = ok and schur.ok
        ok = ok and audit.ok
        rows.append(entry)
    for spec in config.acceptance_specs:
        acc = acceptance_from_config(spec, space)
        if acc.flags.convex and acc.flags.closed and acc.flags.law_invariant:
            closure = conditioning_closure_check(acc, trials=400, seed=config.seed)
            ok = ok and closure.ok
            rows.append({"kind": "conditioning_closure", **closure.to_dict()})
        else:
            rows.append({"kind": "conditioning_closure", "acceptance": acc.name, "skipped": "flags unmet"})
    _emit(config, {"ok": ok, "entries": rows})
    return 0


def cmd_orlicz(config: RunConfig) -> int:
    space, payoffs = load_scenario(config.scenario_path)
    if config.young_spec is None:
        raise ValidationError("orlicz command needs a 'young' spec")
    phi = young_from_config(config.young_spec)
    rows = []
    for name, x in payoffs.items():
        rows.append(
            {
                "payoff_id": name,
                "luxemburg_norm": luxemburg_norm(phi, x, tol=min(config.tolerance, 1e-10)),
                "heart_member": heart_membership(phi, x),
            }
        )
    result = {"young": phi.name, "norms": rows}
    if phi.finite:
        result["delta2"] = delta2_check(phi).to_dict()
    else:
        result["delta2"] = {"skipped": "undefined for a Young function taking +inf"}
    _emit(config, result)
    return 0


_COMMANDS = {
    "eval": cmd_eval,
    "collapse": cmd_collapse,
    "risk": cmd_risk,
    "audit": cmd_audit,
    "orlicz": cmd_orlicz,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lawprice",
        description="Law-invariant pricing diagnostics on finite equal-atom spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out", default=None)
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config, args.command, seed=args.seed, tol=args.tol, out=args.out)
        return _COMMANDS[args.command](config)
    except (ValidationError,) as exc:
        print(f"lawprice: {exc}", file=sys.stderr)
        return 2
    except SpaceMismatchError as exc:
        print(f"lawprice: {exc}", file=sys.stderr)
        return 3
    except FlagError as exc:
        print(f"lawprice: {exc}", file=sys.stderr)
        return 4
    except SolverError as exc:
        print(f"lawprice: {exc}", file=sys.stderr)
        return 5


def console_entry() -> None:
    raise SystemExit(main())
