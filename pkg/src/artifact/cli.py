"""Command-line front end; every command prints a deterministic JSON report."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .dual_pairs import find_row, instance_from_row, table_rows, verify_dual_pair
from .graded_linear import spo_ambient, supercommutant
from .invariants_howe import (
    DEFAULT_GUARD,
    HCPair,
    ResourceGuardError,
    default_component_reps,
    double_commutant_check,
    filtered_dims,
    howe_decompose,
    howe_instance,
    spo_space,
    wc_invariants,
)
from .realizations import MINIMAL_TAGS, FamilyTag, crosscheck, realize
from .scalars_division import ALGEBRA_NAMES, make_algebra, superinvolutions
from .weyl_clifford import WeylClifford

SCHEMA = "artifact.report/1"
EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    parameters: dict
    max_degree: int | None = None
    output: str | None = None
    jobs: int = 1
    guard: int = DEFAULT_GUARD
    timing: bool = False

    def __post_init__(self):
        if self.guard <= 0:
            raise UsageError("--guard must be positive")
        if self.max_degree is not None and self.max_degree < 0:
            raise UsageError("--max-degree must be non-negative")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")


@dataclass
class Report:
    command: dict
    result: object
    passed: bool
    runtime_ms: float = 0.0
    schema: str = SCHEMA
    version: str = __version__
    extra: dict = field(default_factory=dict)

    def to_json(self, timing: bool) -> dict:
        out = {"schema": self.schema, "version": self.version, "command": self.command,
               "result": self.result, "passed": self.passed}
        if timing:
            out["runtime_ms"] = self.runtime_ms
            return out
        return _strip_timing(out)


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "runtime_ms"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _pmap(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# pair specs: TABLE:ROW, howe:n,k,l or spo:m|n


def parse_pair(spec: str):
    """Return (instance or None, E-space, g, component reps, description)."""
    kind, _, rest = spec.partition(":")
    if not rest:
        raise UsageError(f"bad pair spec {spec!r}; use TABLE:ROW, howe:n,k,l or spo:m|n")
    if kind == "howe":
        try:
            n, k, l = (int(x) for x in rest.split(","))
        except ValueError:
            raise UsageError("howe pair spec needs n,k,l") from None
        inst, _, _ = howe_instance(n, k, l)
        return inst, inst.E, inst.g, default_component_reps(inst)
    if kind == "spo":
        try:
            m, n = (int(x) for x in rest.split("|"))
        except ValueError:
            raise UsageError("spo pair spec needs m|n") from None
        if m % 2:
            raise UsageError("spo:m|n needs m even")
        B, reps = spo_space(m, n)
        return None, B, spo_ambient(B), reps
    try:
        row = find_row(kind, int(rest))
    except (KeyError, ValueError):
        raise UsageError(f"unknown table row {spec!r}") from None
    inst = instance_from_row(row)
    return inst, inst.E, inst.g, default_component_reps(inst)


def _algebra_only(reps, flag):
    return [] if flag else reps


# ---------------------------------------------------------------------------
# commands


def cmd_list_algebras(cfg: RunConfig):
    out = []
    for name in ALGEBRA_NAMES:
        A = make_algebra(name)
        out.append({
            "name": name,
            "real_dim": len(A.symbols),
            "graded_dim": [A.parities.count(0), A.parities.count(1)],
            "symbols": list(A.symbols),
            "superinvolutions": [s.tag for s in superinvolutions(A)],
        })
    return out, True


def _tag(p) -> FamilyTag:
    try:
        params = tuple(int(x) for x in str(p["params"]).split(",") if x != "")
    except ValueError:
        raise UsageError("--params must be comma-separated integers") from None
    try:
        return FamilyTag(p["family"], params, p["division"], p["field"])
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_realize(cfg: RunConfig):
    tag = _tag(cfg.parameters)
    try:
        span = realize(tag)
    except ValueError as e:
        raise UsageError(str(e)) from None
    res = span.to_json()
    res["family"] = tag.label()
    res["closed"] = span.is_closed()
    return res, res["closed"]


def _crosscheck_one(tag):
    return crosscheck(tag)


def cmd_crosscheck(cfg: RunConfig):
    if cfg.parameters.get("family"):
        tags = [_tag(cfg.parameters)]
    else:
        tags = list(MINIMAL_TAGS)
    res = _pmap(_crosscheck_one, tags, cfg.jobs)
    res.sort(key=lambda r: r["family"])
    ok = all(r["equal"] and r["closed"] and r.get("omega2_commutant_equal", True) for r in res)
    return res, ok


def _verify_row(row):
    rep = verify_dual_pair(instance_from_row(row))
    rep["row_key"] = f"{row['table']}:{row['row']}"
    return rep


def _parse_shape(text: str):
    """'a,b;p,q' (U before the semicolon, W after) or JSON {"U": .., "W": ..}."""
    def part(t):
        nums = [int(x) for x in t.split(",")]
        return nums[0] if len(nums) == 1 else nums

    try:
        if text.lstrip().startswith("{"):
            sh = json.loads(text)
            return sh["U"], sh["W"]
        u, w = text.split(";")
        return part(u), part(w)
    except (ValueError, KeyError, TypeError):
        raise UsageError('--shape must look like "2,0,1,0;1,0,2,0" or {"U": [..], "W": [..]}') from None


def cmd_verify_pair(cfg: RunConfig):
    p = cfg.parameters
    try:
        row = dict(find_row(p["table"], p["row"]))
    except KeyError as e:
        raise UsageError(str(e)) from None
    if p.get("shape"):
        row["U"], row["W"] = _parse_shape(p["shape"])
    try:
        rep = _verify_row(row)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return rep, rep["centralizer_ok"]


def cmd_verify_tables(cfg: RunConfig):
    p = cfg.parameters
    if p.get("manifest"):
        try:
            rows = json.loads(Path(p["manifest"]).read_text())
        except (OSError, ValueError) as e:
            raise UsageError(f"cannot read manifest: {e}") from None
    else:
        rows = table_rows()
    if p.get("table"):
        rows = [r for r in rows if r["table"] == p["table"]]
    reps = _pmap(_verify_row, rows, cfg.jobs)
    reps.sort(key=lambda r: (r["row_key"].split(":")[0], int(r["row_key"].split(":")[1])))
    summary = {"rows": len(reps), "passed": sum(r["centralizer_ok"] for r in reps)}
    return {"summary": summary, "rows": reps}, summary["passed"] == summary["rows"]


def cmd_commutant(cfg: RunConfig):
    p = cfg.parameters
    try:
        inst = instance_from_row(find_row(p["table"], p["row"]))
    except KeyError as e:
        raise UsageError(str(e)) from None
    amb = spo_ambient(inst.E)
    src, partner = (inst.g, inst.g_prime) if p["of"] == "g" else (inst.g_prime, inst.g)
    C = supercommutant(src, amb, check=False)
    res = {"commutant": C.to_json(), "equals_partner": C == partner,
           "spo_graded_dim": list(amb.graded_dim)}
    return res, res["equals_partner"]


def cmd_wc_invariants(cfg: RunConfig):
    p = cfg.parameters
    _, B, g, reps = parse_pair(p["pair"])
    reps = _algebra_only(reps, p.get("algebra_only"))
    wc = WeylClifford(B)
    basis = wc_invariants(HCPair.from_algebra(g, reps), wc, cfg.max_degree, cfg.guard)
    by_deg = filtered_dims(wc, basis, cfg.max_degree, cfg.guard)
    res = {
        "pair": p["pair"],
        "components": [c.tag for c in reps],
        "per_degree": [{"d": k, "dim_invariants": by_deg[k]} for k in range(cfg.max_degree + 1)],
        "basis": [a.to_json() for a in basis],
        "findings": [],
    }
    return res, True


def cmd_double_commutant(cfg: RunConfig):
    p = cfg.parameters
    inst, _, _, reps = parse_pair(p["pair"])
    if inst is None:
        raise UsageError("double-commutant needs a dual pair (TABLE:ROW or howe:n,k,l)")
    reps = _algebra_only(reps, p.get("algebra_only"))
    rep = double_commutant_check(inst, reps, cfg.max_degree, guard=cfg.guard)
    return rep, rep["equal"]


def cmd_howe(cfg: RunConfig):
    p = cfg.parameters
    try:
        rep = howe_decompose(p["n"], p["k"], p["l"], cfg.max_degree, guard=cfg.guard)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return rep, rep["equal"]


COMMANDS = {
    "list-algebras": cmd_list_algebras,
    "realize": cmd_realize,
    "verify-pair": cmd_verify_pair,
    "verify-tables": cmd_verify_tables,
    "commutant": cmd_commutant,
    "wc-invariants": cmd_wc_invariants,
    "double-commutant": cmd_double_commutant,
    "howe": cmd_howe,
    "crosscheck": cmd_crosscheck,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the JSON report here")
    common.add_argument("--jobs", "-j", type=int, default=1)
    common.add_argument("--seed", type=int, default=None, help="recorded in the report; commands are deterministic")
    common.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="monomial budget")
    common.add_argument("--timing", action="store_true", help="include runtimes (breaks byte-identity)")

    ap = argparse.ArgumentParser(prog="artifact", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("list-algebras", parents=[common])

    def family_args(sp, required):
        sp.add_argument("--family", required=required)
        sp.add_argument("--params", default="1")
        sp.add_argument("--field", choices=["R", "C"], default="R")
        sp.add_argument("--division", choices=["R", "C", "H"], default="R")

    family_args(sub.add_parser("realize", parents=[common]), True)
    family_args(sub.add_parser("crosscheck", parents=[common]), False)

    sp = sub.add_parser("verify-pair", parents=[common])
    sp.add_argument("--table", required=True, choices=["I", "IC", "II", "IIC"])
    sp.add_argument("--row", required=True, type=int)
    sp.add_argument("--shape", help='"U;W" shapes, e.g. "2,0,1,0;1,0,2,0" (or JSON {"U": .., "W": ..})')

    sp = sub.add_parser("verify-tables", parents=[common])
    sp.add_argument("--minimal", action="store_true", help="minimal-shape corpus (the default)")
    sp.add_argument("--table", choices=["I", "IC", "II", "IIC"])
    sp.add_argument("--manifest", help="alternative JSON manifest")

    sp = sub.add_parser("commutant", parents=[common])
    sp.add_argument("--table", required=True, choices=["I", "IC", "II", "IIC"])
    sp.add_argument("--row", required=True, type=int)
    sp.add_argument("--of", choices=["g", "g_prime"], default="g")

    for name in ("wc-invariants", "double-commutant"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--pair", required=True, help="TABLE:ROW, howe:n,k,l or spo:m|n")
        sp.add_argument("--max-degree", type=int, default=4)
        sp.add_argument("--algebra-only", action="store_true", help="drop the component representatives")

    sp = sub.add_parser("howe", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--max-degree", type=int, default=3)
    return ap


_GLOBAL = ("command", "output", "jobs", "guard", "timing", "max_degree")


def run(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    params = {k: v for k, v in vars(ns).items() if k not in _GLOBAL}
    try:
        cfg = RunConfig(ns.command, params, getattr(ns, "max_degree", None), ns.output,
                        ns.jobs, ns.guard, ns.timing)
        t0 = time.perf_counter()
        result, ok = COMMANDS[ns.command](cfg)
        elapsed = round((time.perf_counter() - t0) * 1000, 1)
    except (UsageError, ResourceGuardError) as e:
        print(f"artifact {ns.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    echo = {"name": ns.command, **{k: v for k, v in params.items() if v is not None}}
    if cfg.max_degree is not None:
        echo["max_degree"] = cfg.max_degree
    report = Report(echo, result, bool(ok), elapsed)
    text = json.dumps(report.to_json(cfg.timing), sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    target = cfg.output
    if target is None and os.environ.get("ARTIFACT_OUTPUT_DIR"):
        target = str(Path(os.environ["ARTIFACT_OUTPUT_DIR"]) / f"{ns.command}.json")
    if target:
        try:
            Path(target).parent.mkdir(parents=True, exist_ok=True)
            Path(target).write_text(text)
        except OSError as e:
            print(f"artifact {ns.command}: cannot write {target}: {e}", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_OK if ok else EXIT_FINDING


def main() -> None:
    sys.exit(run())
