"""Hypothesis-gated property suites run by ``verify-all``."""

from __future__ import annotations

from .congruence import (
    ETA,
    FAIL,
    INCONCLUSIVE,
    KINDS,
    MU,
    NU,
    PASS,
    SKIPPED,
    CheckResult,
    circ_closure,
    compare_congruences,
    compute_congruence,
    inverse_lambda_closure,
    lambda_constancy,
    lambda_stability,
    plus_closure,
    quotient_left_cancellative,
    stabilization_report,
)
from .errors import YBMonoidError
from .monoid import (
    ADDITIVE,
    DEFAULT_WORD_BUDGET,
    MULTIPLICATIVE,
    GradedMonoid,
    check_cocycle,
    check_identity_gamma,
    check_pi_inverse,
)
from .quotient import build_quotient, induced_generator_solution, verify_bar_r_ybe, verify_semitruss
from .solution import Solution, profile

OBSERVED = "observed"

SUITES = (
    ("grading", "structure monoids are graded and pi is a bijective 1-cocycle"),
    ("eta_lambda_stable", "eta is invariant under every lambda'_z and its inverse"),
    ("mu_congruence", "mu is a left cancellative congruence on (M,+) and (M,o), lambda-bar compatible"),
    ("quotient_semitruss", "M/mu is a left semi-truss and r-bar is a left non-degenerate solution"),
    ("nu_cancellative", "nu has lambda' constant on classes; for bijective r it is a +-congruence"),
    ("gamma_identity", "lambda'_x(c o a) = lambda'_x(c) o lambda'_{rho_c(x)}(a)"),
    ("eta_equals_nu", "eta = nu for bijective non-degenerate solutions"),
    ("observations", "facts outside any proved statement, recorded without expectation"),
)


def _line(suite: str, check: CheckResult) -> dict:
    return {"suite": suite, **check.to_dict()}


def _bool_check(name: str, ok: bool, witnesses, note: str = "") -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, None if ok else witnesses[:5], note)


def _skip(name: str, reason: str) -> CheckResult:
    return CheckResult(name, SKIPPED, note=reason)


def overall_status(lines: list[dict]) -> str:
    statuses = {ln["status"] for ln in lines}
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


def quotient_lines(mu, prof, D: int):
    """Build M/mu and run the semi-truss and induced-solution checks.

    Returns ``(lines, induced)``; ``induced`` is None if construction failed.
    """
    s = mu.solution
    lines = []
    induced = None
    try:
        q = build_quotient(mu)
        for check in verify_semitruss(q, D):
            lines.append(_line("quotient_semitruss", check))
        for check in verify_bar_r_ybe(q, max(1, D // 2)):
            lines.append(_line("quotient_semitruss", check))
        induced = induced_generator_solution(q, s)
        stab = not q.inconclusive
        for name, ok in (
            ("induced generator solution satisfies the YBE", induced.ybe_ok),
            ("induced generator solution is left non-degenerate", induced.left_nondegenerate),
        ):
            lines.append(_line("quotient_semitruss", CheckResult(
                name, PASS if ok else (FAIL if stab else INCONCLUSIVE))))
        name = "irretractable: induced generator solution equals r"
        if prof.irretractable:
            ok = induced.equals_original
            witness = None if ok else {
                "generators_after_quotient": induced.generator_solution.n,
                "letter_map": induced.letter_map,
            }
            lines.append(_line("quotient_semitruss", CheckResult(
                name, PASS if ok else (FAIL if stab else INCONCLUSIVE), witness,
                "expected property; fails when M already has x o y = x o z with y != z")))
        else:
            lines.append(_line("quotient_semitruss", _skip(name, "not irretractable")))
    except YBMonoidError as exc:
        lines.append(_line("quotient_semitruss", CheckResult(
            "quotient construction", FAIL if mu.stabilized else INCONCLUSIVE,
            {"error": type(exc).__name__, "message": str(exc)})))

    return lines, induced


def verify_all(
    s: Solution,
    D: int = 4,
    slacks=(0, 1, 2),
    budget: int = DEFAULT_WORD_BUDGET,
    grading_degree: int = 5,
    gamma_bounds: tuple[int, int] = (3, 2),
) -> dict:
    """Run every suite whose hypotheses ``s`` satisfies.

    Returns a payload with one line per checked claim plus the congruence
    reports and the induced generator solution.
    """
    prof = profile(s)
    slacks = sorted(slacks)
    top = max(D + slacks[-1], grading_degree, sum(gamma_bounds))
    g = GradedMonoid(s, top, budget)
    lines = []

    # grading and the cocycle
    G = min(grading_degree, top)
    counts_a = g.additive.class_counts()[: G + 1]
    counts_m = g.multiplicative.class_counts()[: G + 1]
    lines.append(_line("grading", _bool_check(
        "additive and multiplicative class counts agree", counts_a == counts_m,
        [{"additive": counts_a, "multiplicative": counts_m}])))
    lines.append(_line("grading", _bool_check(
        "pi_forward and pi_inverse are mutually inverse",
        *check_pi_inverse(s, g.additive, g.multiplicative))))
    lines.append(_line("grading", _bool_check(
        "pi(a o b) = pi(a) + lambda'_a(pi(b))",
        *check_cocycle(s, g.additive, g.multiplicative, G))))
    wd = g.well_definedness_witnesses()
    lines.append(_line("grading", _bool_check(
        "lambda', pi and the letterwise actions respect classes", not wd, wd)))

    congruences = {k: compute_congruence(s, k, D, slacks[-1], monoid=g) for k in KINDS}
    reports = {k: stabilization_report(s, k, D, slacks, monoid=g) for k in KINDS}
    eta, nu, mu = congruences[ETA], congruences[NU], congruences[MU]

    lines.append(_line("eta_lambda_stable", lambda_stability(eta)))

    for check in (
        plus_closure(mu),
        circ_closure(mu),
        quotient_left_cancellative(mu, ADDITIVE),
        quotient_left_cancellative(mu, MULTIPLICATIVE),
        lambda_stability(mu),
    ):
        lines.append(_line("mu_congruence", check))

    q_lines, induced = quotient_lines(mu, prof, D)
    lines.extend(q_lines)

    lines.append(_line("nu_cancellative", lambda_constancy(nu)))
    lines.append(_line("nu_cancellative", quotient_left_cancellative(nu, MULTIPLICATIVE)))
    if prof.bijective:
        lines.append(_line("nu_cancellative", inverse_lambda_closure(nu)))
        lines.append(_line("nu_cancellative", plus_closure(nu)))
    else:
        lines.append(_line("nu_cancellative", _skip("nu: closed under (lambda'_z)^-1", "not bijective")))
        lines.append(_line("nu_cancellative", _skip("nu: congruence on (M,+)", "not bijective")))

    mw, ma = gamma_bounds
    lines.append(_line("gamma_identity", _bool_check(
        f"identity holds for words of length <= {mw}, a of degree <= {ma}",
        *check_identity_gamma(s, g.additive, mw, ma))))

    cmp = compare_congruences(eta, nu)
    hyp = prof.bijective and prof.left_nondegenerate and prof.right_nondegenerate
    if hyp:
        if cmp.overall == "equal" and not cmp.inconclusive:
            status, witness = PASS, None
        elif cmp.inconclusive:
            status, witness = INCONCLUSIVE, cmp.to_dict()
        else:
            status, witness = FAIL, cmp.to_dict()
        lines.append(_line("eta_equals_nu", CheckResult("eta = nu at every degree", status, witness)))
        lines.append(_line("eta_equals_nu", lambda_constancy(eta)))
        lines.append(_line("eta_equals_nu", lambda_stability(nu)))
    else:
        reason = "not bijective" if not prof.bijective else "not right non-degenerate"
        for name in ("eta = nu at every degree", "eta: lambda' constant on related pairs",
                     "nu: stable under lambda'_z and its inverse"):
            lines.append(_line("eta_equals_nu", _skip(name, reason)))
        lines.append({"suite": "observations", "name": "eta versus nu", "status": OBSERVED,
                      "value": cmp.to_dict()})
        lam = lambda_constancy(eta)
        lines.append({"suite": "observations", "name": "eta: lambda' constant on related pairs",
                      "status": OBSERVED, "value": lam.status, **({"witness": lam.witness} if lam.witness else {})})
        circ = circ_closure(eta)
        lines.append({"suite": "observations", "name": "eta: congruence on (M,o)",
                      "status": OBSERVED, "value": circ.status, **({"witness": circ.witness} if circ.witness else {})})

    return {
        "degree": D,
        "slacks": slacks,
        "class_counts": {"additive": g.additive.class_counts(), "multiplicative": g.multiplicative.class_counts()},
        "congruences": {
            k: {
                "blocks_per_degree": congruences[k].block_counts(),
                "stabilized": congruences[k].stabilized,
                "report": reports[k].to_dict(),
            }
            for k in KINDS
        },
        "eta_vs_nu": cmp.to_dict(),
        "induced_solution": induced.to_dict() if induced else None,
        "checks": lines,
        "status": overall_status(lines),
    }
