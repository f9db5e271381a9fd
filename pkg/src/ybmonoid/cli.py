"""Command line front end.

Exit codes: 0 all checks passed, 1 a check failed (with witness), 2 usage or
input error, 3 inconclusive (budget or stabilization).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .catalog import catalog, get as catalog_get
from .congruence import (
    ETA,
    FAIL,
    INCONCLUSIVE,
    KINDS,
    MU,
    NU,
    PASS,
    circ_closure,
    compare_congruences,
    compute_congruence,
    lambda_constancy,
    lambda_stability,
    plus_closure,
    quotient_left_cancellative,
    stabilization_report,
)
from .errors import DegreeTooLarge, InputError, SearchSpaceTooLarge, YBMonoidError
from .monoid import (
    ADDITIVE,
    DEFAULT_WORD_BUDGET,
    MULTIPLICATIVE,
    GradedMonoid,
    check_cocycle,
    check_pi_inverse,
)
from .solution import (
    Solution,
    check_ybe,
    derived_left_solution,
    dump_solution,
    enumerate_solutions,
    load_solution,
    profile,
)
from .verify import OBSERVED, overall_status, quotient_lines, verify_all

SCHEMA_VERSION = 1
COMMANDS = ("check", "derive", "monoid", "congruence", "quotient", "search", "catalog", "verify-all")
PROFILE_FLAGS = (
    "left_nondegenerate",
    "right_nondegenerate",
    "bijective",
    "involutive",
    "irretractable",
)
EXIT = {PASS: 0, FAIL: 1, "error": 2, INCONCLUSIVE: 3}


@dataclass
class RunConfig:
    command: str
    source: str | None = None
    degree: int = 4
    slacks: list[int] = field(default_factory=lambda: [0, 1, 2])
    kinds: list[str] = field(default_factory=lambda: list(KINDS))
    fmt: str = "json"
    output: str | None = None
    budget: int = DEFAULT_WORD_BUDGET
    timings: bool = True
    n: int = 2
    filters: list[str] = field(default_factory=list)
    emit_solution: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.degree < 0:
            raise InputError("degree must be >= 0")
        if not self.slacks or self.slacks != sorted(self.slacks) or self.slacks[0] < 0:
            raise InputError("slack list must be non-empty, ascending and non-negative")
        if self.budget <= 0:
            raise InputError("budget must be positive")
        bad = [k for k in self.kinds if k not in KINDS]
        if bad:
            raise InputError(f"unknown congruence kinds {bad}")
        bad = [f for f in self.filters if f not in PROFILE_FLAGS]
        if bad:
            raise InputError(f"unknown filters {bad}")

    def echo(self) -> dict:
        return {
            "command": self.command,
            "source": self.source,
            "degree": self.degree,
            "slacks": self.slacks,
            "kinds": self.kinds,
            "budget": self.budget,
        }


def resolve_sources(source: str | None, allow_all: bool) -> list[tuple[str, Solution]]:
    if source is None:
        if allow_all:
            return list(catalog())
        raise InputError("a solution file or catalog name is required")
    path = Path(source)
    if path.exists():
        return [(source, load_solution(path))]
    try:
        return [(source, catalog_get(source))]
    except KeyError:
        raise InputError(f"{source!r} is neither a file nor a catalog name") from None


def _status_of(lines: list[dict]) -> str:
    return overall_status([ln for ln in lines if ln["status"] != OBSERVED])


# -- per-command payloads --------------------------------------------------------


def _cmd_check(s: Solution, cfg: RunConfig) -> tuple[dict, str]:
    ok, bad = check_ybe(s)
    if not ok:
        return {"ybe": False, "violations": [list(t) for t in bad]}, FAIL
    return {"ybe": True, "profile": profile(s).to_dict()}, PASS


def _cmd_derive(s: Solution, cfg: RunConfig) -> tuple[dict, str]:
    d = derived_left_solution(s)
    return {"derived": d.to_dict()}, PASS


def _cmd_monoid(s: Solution, cfg: RunConfig) -> tuple[dict, str]:
    g = GradedMonoid(s, cfg.degree, cfg.budget)
    lines = []
    ok, w = check_pi_inverse(s, g.additive, g.multiplicative)
    lines.append({"name": "pi_forward and pi_inverse are mutually inverse", "status": PASS if ok else FAIL,
                  **({"witness": w[:5]} if w else {})})
    ok, w = check_cocycle(s, g.additive, g.multiplicative, cfg.degree)
    lines.append({"name": "pi(a o b) = pi(a) + lambda'_a(pi(b))", "status": PASS if ok else FAIL,
                  **({"witness": w[:5]} if w else {})})
    wd = g.well_definedness_witnesses()
    lines.append({"name": "lambda', pi and the letterwise actions respect classes",
                  "status": PASS if not wd else FAIL, **({"witness": wd} if wd else {})})
    payload = {
        "class_counts": {
            ADDITIVE: g.additive.class_counts(),
            MULTIPLICATIVE: g.multiplicative.class_counts(),
        },
        "lambda_group_order": len(g.perms),
        "checks": lines,
    }
    return payload, _status_of(lines)


def _kind_checks(c) -> list:
    if c.kind == ETA:
        return [lambda_stability(c), quotient_left_cancellative(c, ADDITIVE)]
    if c.kind == NU:
        return [lambda_constancy(c), quotient_left_cancellative(c, MULTIPLICATIVE)]
    return [
        plus_closure(c),
        circ_closure(c),
        quotient_left_cancellative(c, ADDITIVE),
        quotient_left_cancellative(c, MULTIPLICATIVE),
        lambda_stability(c),
    ]


def _cmd_congruence(s: Solution, cfg: RunConfig) -> tuple[dict, str]:
    top = cfg.degree + cfg.slacks[-1]
    g = GradedMonoid(s, top, cfg.budget)
    out, lines, computed = {}, [], {}
    for kind in cfg.kinds:
        c = compute_congruence(s, kind, cfg.degree, cfg.slacks[-1], monoid=g)
        computed[kind] = c
        rep = stabilization_report(s, kind, cfg.degree, cfg.slacks, monoid=g)
        rep.checks = _kind_checks(c)
        lines.extend(ch.to_dict() for ch in rep.checks)
        if not c.stabilized:
            lines.append({"name": f"{kind}: stabilized", "status": INCONCLUSIVE})
        out[kind] = {"stabilized": c.stabilized, "blocks_per_degree": c.block_counts(), **rep.to_dict()}
    comparisons = {}
    ordered = [k for k in KINDS if k in computed]
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            cmp = compare_congruences(computed[a], computed[b])
            comparisons[f"{a}={b}"] = {
                "per_degree": [f"{a}={b}: {v}" for v in cmp.per_degree],
                "overall": cmp.overall,
                "inconclusive": cmp.inconclusive,
            }
    return {"congruences": out, "comparisons": comparisons}, _status_of(lines)


def _cmd_quotient(s: Solution, cfg: RunConfig) -> tuple[dict, str]:
    mu = compute_congruence(s, MU, cfg.degree, cfg.slacks[-1], budget=cfg.budget)
    lines, induced = quotient_lines(mu, profile(s), cfg.degree)
    if not mu.stabilized:
        lines.append({"name": "mu: stabilized", "status": INCONCLUSIVE})
    payload = {
        "mu_blocks_per_degree": mu.block_counts(),
        "stabilized": mu.stabilized,
        "checks": lines,
        "induced_solution": induced.to_dict() if induced else None,
    }
    if induced is not None and cfg.emit_solution:
        dump_solution(induced.generator_solution, cfg.emit_solution)
    return payload, _status_of(lines)


def _cmd_verify_all(s: Solution, cfg: RunConfig) -> tuple[dict, str]:
    payload = verify_all(s, cfg.degree, cfg.slacks, cfg.budget)
    return payload, _status_of(payload["checks"])


PER_SOLUTION = {
    "check": _cmd_check,
    "derive": _cmd_derive,
    "monoid": _cmd_monoid,
    "congruence": _cmd_congruence,
    "quotient": _cmd_quotient,
    "verify-all": _cmd_verify_all,
}


def _worst(statuses) -> str:
    statuses = set(statuses)
    for st in ("error", FAIL, INCONCLUSIVE):
        if st in statuses:
            return st
    return PASS


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute one command and return ``(report, exit_code)``."""
    started = time.perf_counter()
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "ybmonoid", "version": __version__},
        "config": cfg.echo(),
        "results": [],
        "errors": [],
    }
    timings = {}
    statuses = []
    try:
        if cfg.command == "catalog":
            for name, s in catalog():
                report["results"].append({"source": name, "solution": s.to_dict(),
                                          "profile": profile(s).to_dict()})
            statuses.append(PASS)
        elif cfg.command == "search":
            flags = cfg.filters
            pred = (lambda p: all(getattr(p, f) for f in flags)) if flags else None
            found = list(enumerate_solutions(
                cfg.n, pred, left_nondegenerate="left_nondegenerate" in flags))
            report["results"].append({
                "n": cfg.n,
                "filters": flags,
                "count": len(found),
                "solutions": [s.to_dict() for s in found],
            })
            statuses.append(PASS)
        else:
            sources = resolve_sources(cfg.source, allow_all=cfg.command == "verify-all")
            for name, s in sources:
                t0 = time.perf_counter()
                entry = {"source": name, "solution": s.to_dict()}
                try:
                    if cfg.command != "check":
                        entry["profile"] = profile(s).to_dict()
                    payload, status = PER_SOLUTION[cfg.command](s, cfg)
                except DegreeTooLarge as exc:
                    payload, status = {"error": type(exc).__name__, "message": str(exc)}, INCONCLUSIVE
                except YBMonoidError as exc:
                    payload, status = {"error": type(exc).__name__, "message": str(exc)}, "error"
                    report["errors"].append({"source": name, "error": type(exc).__name__, "message": str(exc)})
                entry["payload"] = payload
                entry["status"] = status
                report["results"].append(entry)
                statuses.append(status)
                timings[name] = round(time.perf_counter() - t0, 4)
    except (InputError, SearchSpaceTooLarge, OSError) as exc:
        report["errors"].append({"error": type(exc).__name__, "message": str(exc)})
        statuses.append("error")
    except YBMonoidError as exc:
        report["errors"].append({"error": type(exc).__name__, "message": str(exc)})
        statuses.append("error")
    status = _worst(statuses)
    report["status"] = status
    report["exit_code"] = EXIT[status]
    if cfg.timings:
        timings["total"] = round(time.perf_counter() - started, 4)
        report["timings"] = timings
    return report, EXIT[status]


# -- rendering ----------------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _render_checks(lines, out, indent="    "):
    for ln in lines:
        suite = f"[{ln['suite']}] " if "suite" in ln else ""
        extra = ""
        if ln["status"] == OBSERVED:
            extra = f" = {json.dumps(ln.get('value'))}"
        if ln.get("note"):
            extra += f"  ({ln['note']})"
        out.append(f"{indent}{ln['status'].upper():13s}{suite}{ln['name']}{extra}")
        if ln.get("witness") is not None and ln["status"] != PASS:
            out.append(f"{indent}{'':13s}witness: {json.dumps(ln['witness'])}")


def render_text(report: dict) -> str:
    cfg = report["config"]
    out = [f"ybmonoid {report['tool']['version']}  command={cfg['command']}  "
           f"degree={cfg['degree']}  slacks={','.join(map(str, cfg['slacks']))}"]
    for res in report["results"]:
        if "count" in res:
            out.append(f"search n={res['n']} filters={','.join(res['filters']) or '-'}: {res['count']} solutions")
            for s in res["solutions"]:
                out.append(f"  sigma={s['sigma']} gamma={s['gamma']}")
            continue
        sol = res["solution"]
        out.append(f"{res['source']}: n={sol['n']} sigma={sol['sigma']} gamma={sol['gamma']}")
        if "profile" in res:
            flags = [k for k, v in res["profile"].items() if v and k != "is_ybe"]
            out.append(f"  profile: {', '.join(flags) or '-'}")
        payload = res.get("payload")
        if payload is None:
            continue
        if "error" in payload:
            out.append(f"  ERROR {payload['error']}: {payload['message']}")
        if "violations" in payload:
            out.append(f"  braid relation fails on {payload['violations']}")
        if "profile" in payload:
            flags = [k for k, v in payload["profile"].items() if v and k != "is_ybe"]
            out.append(f"  YBE ok; profile: {', '.join(flags) or '-'}")
        if "derived" in payload:
            d = payload["derived"]
            out.append(f"  derived: sigma={d['sigma']} gamma={d['gamma']}")
        if "class_counts" in payload:
            for view, counts in payload["class_counts"].items():
                out.append(f"  {view} classes per degree: {counts}")
        for kind, rep in payload.get("congruences", {}).items():
            out.append(f"  {kind}: blocks per degree {rep['blocks_per_degree']}  "
                       f"stabilized={rep['stabilized']}  stable_at_slack={rep.get('report', rep).get('stable_at_slack')}")
        for key, cmp in payload.get("comparisons", {}).items():
            for d, v in enumerate(cmp["per_degree"]):
                out.append(f"  degree {d}  {v}")
        if payload.get("induced_solution"):
            ind = payload["induced_solution"]["solution"]
            out.append(f"  induced solution: n={ind['n']} sigma={ind['sigma']} gamma={ind['gamma']}")
        _render_checks(payload.get("checks", []), out)
        for kind, rep in payload.get("congruences", {}).items():
            _render_checks(rep.get("checks", []), out)
        out.append(f"  => {res['status']}")
    for err in report["errors"]:
        out.append(f"ERROR {err['error']}: {err['message']}")
    out.append(f"status: {report['status']} (exit {report['exit_code']})")
    if "timings" in report:
        out.append(f"time: {report['timings'].get('total')} s")
    return "\n".join(out) + "\n"


# -- argument parsing ---------------------------------------------------------------


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _csv(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, default=4, help="report degree D (default 4)")
    common.add_argument("--slack", type=_csv_ints, default=[0, 1, 2], help="ascending slack values, e.g. 0,1,2")
    common.add_argument("--kinds", type=_csv, default=list(KINDS), help="subset of eta,nu,mu")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--budget", type=int, default=DEFAULT_WORD_BUDGET, help="max words per degree")
    common.add_argument("--no-timings", action="store_true", help="omit wall-clock timings")

    parser = argparse.ArgumentParser(prog="ybmonoid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ybmonoid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("check", "validate a solution and print its profile"),
        ("derive", "print the derived solution r'"),
        ("monoid", "class counts of M and A per degree, pi checks"),
        ("congruence", "compute eta, nu, mu with stabilization reports"),
        ("quotient", "build M/mu, check the semi-truss and the induced solution"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("source", help="solution JSON file or catalog name")
        if name == "quotient":
            p.add_argument("--emit-solution", help="write the induced generator solution to this file")
    p = sub.add_parser("verify-all", parents=[common], help="run every applicable suite")
    p.add_argument("source", nargs="?", help="solution file or catalog name (default: whole catalog)")
    p = sub.add_parser("search", parents=[common], help="enumerate all solutions on n <= 3 letters")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--filter", type=_csv, default=[], help=f"comma list of {', '.join(PROFILE_FLAGS)}")
    sub.add_parser("catalog", parents=[common], help="list the built-in solutions")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            source=getattr(args, "source", None),
            degree=args.degree,
            slacks=args.slack,
            kinds=args.kinds,
            fmt=args.format,
            output=args.output,
            budget=args.budget,
            timings=not args.no_timings,
            n=getattr(args, "n", 2) or 2,
            filters=getattr(args, "filter", []) or [],
            emit_solution=getattr(args, "emit_solution", None),
        )
    except InputError as exc:
        parser.error(str(exc))
    report, code = run(cfg)
    text = render_json(report) if cfg.fmt == "json" else render_text(report)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
