import pytest

from oracles import naive_congruence
from ybmonoid import catalog
from ybmonoid.congruence import (
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
    inverse_lambda_closure,
    lambda_constancy,
    lambda_stability,
    plus_closure,
    quotient_left_cancellative,
    stabilization_report,
)
from ybmonoid.errors import BudgetMismatch, ViewMismatch
from ybmonoid.monoid import ADDITIVE, MULTIPLICATIVE, GradedMonoid
from ybmonoid.solution import profile

N2 = [name for name, s in catalog.catalog() if s.n == 2]


@pytest.mark.parametrize("name", ["T2", "P2", "RD2"])
@pytest.mark.parametrize("kind", KINDS)
def test_equality_on_small_examples(name, kind):
    c = compute_congruence(catalog.get(name), kind, 4, 2)
    assert c.is_equality()
    assert c.stabilized


@pytest.mark.parametrize("name", N2)
@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("D,slack", [(2, 1), (3, 2)])
def test_engine_matches_naive_closure(name, kind, D, slack):
    s = catalog.get(name)
    c = compute_congruence(s, kind, D, slack)
    ref = naive_congruence(s.n, s.sigma, s.gamma, kind, D, slack)
    for d in range(D + 1):
        assert c.word_partition(d) == ref[d]


def test_slack_zero_is_never_stabilized():
    assert not compute_congruence(catalog.get("T2"), ETA, 3, 0).stabilized


def test_stabilization_reports():
    rep = stabilization_report(catalog.get("T2"), ETA, 4, [0, 1, 2])
    assert rep.stable_at == 0
    assert rep.class_counts == [1, 2, 3, 4, 5]
    for name, kind in (("P2", MU), ("RD2", NU)):
        rep = stabilization_report(catalog.get(name), kind, 4, [0, 1, 2])
        assert rep.stable_at in (0, 1)
        assert rep.to_dict()["stable_at_slack"] == rep.stable_at
    with pytest.raises(ValueError):
        stabilization_report(catalog.get("T2"), ETA, 4, [2, 1])


@pytest.mark.parametrize("name", N2)
def test_monotone_in_slack(name):
    # more witness space can only merge more
    s = catalog.get(name)
    g = GradedMonoid(s, 6)
    for kind in KINDS:
        prev = None
        for slack in range(3):
            c = compute_congruence(s, kind, 3, slack, monoid=g)
            if prev is not None:
                for x, y in zip(prev.blocks, c.blocks):
                    assert all(y[i] == y[x[i]] for i in range(len(x)))
            prev = c


def test_derivation_chain_is_sound():
    s = catalog.get("L2-00")
    c = compute_congruence(s, MU, 3, 2, trace=True)
    g = c.monoid
    assert not c.is_equality()
    for d in range(1, 4):
        for i, j in c.pairs(d):
            chain = c.derivation((d, i), (d, j))
            assert chain
            cur = (d, i)
            for step in chain:
                u, v = (tuple(p) for p in step["pair"])
                assert cur in (u, v)
                cur = v if cur == u else u
                if step["rule"] == "seed":
                    e, ci = step["why"]["c"]
                    assert g.plus((e, ci), u) == g.plus((e, ci), v)
            assert cur == (d, j)
    assert c.derivation((1, 0), (2, 0)) is None


@pytest.mark.parametrize("name", catalog.catalog_names())
def test_mu_properties(name):
    s = catalog.get(name)
    mu = compute_congruence(s, MU, 4, 2)
    assert mu.stabilized
    for check in (plus_closure(mu), circ_closure(mu),
                  quotient_left_cancellative(mu, ADDITIVE),
                  quotient_left_cancellative(mu, MULTIPLICATIVE),
                  lambda_stability(mu)):
        assert check.status == PASS, check.to_dict()


@pytest.mark.parametrize("name", catalog.catalog_names())
def test_nu_properties(name):
    s = catalog.get(name)
    nu = compute_congruence(s, NU, 4, 2)
    assert lambda_constancy(nu).status == PASS
    assert quotient_left_cancellative(nu, MULTIPLICATIVE).status == PASS
    if profile(s).bijective:
        assert inverse_lambda_closure(nu).status == PASS
        assert plus_closure(nu).status == PASS


@pytest.mark.parametrize("name", catalog.catalog_names())
def test_eta_lambda_stable(name):
    eta = compute_congruence(catalog.get(name), ETA, 4, 2)
    assert lambda_stability(eta).status == PASS
    assert quotient_left_cancellative(eta, ADDITIVE).status == PASS


def test_view_mismatch():
    s = catalog.get("P2")
    with pytest.raises(ViewMismatch):
        quotient_left_cancellative(compute_congruence(s, ETA, 2, 1), MULTIPLICATIVE)
    with pytest.raises(ViewMismatch):
        quotient_left_cancellative(compute_congruence(s, NU, 2, 1), ADDITIVE)


def test_unstabilized_failures_are_inconclusive():
    s = catalog.get("T2")
    c = compute_congruence(s, ETA, 2, 0)
    assert lambda_stability(c).status in (PASS, INCONCLUSIVE)
    assert lambda_stability(c).status != FAIL


def test_compare_examples():
    for name in ("T2", "P2"):
        s = catalog.get(name)
        cmp = compare_congruences(compute_congruence(s, ETA, 4, 2), compute_congruence(s, NU, 4, 2))
        assert cmp.overall == "equal" and not cmp.inconclusive
        assert cmp.per_degree == ["equal"] * 5
    s = catalog.get("RD2")
    cmp = compare_congruences(compute_congruence(s, ETA, 4, 2), compute_congruence(s, NU, 4, 2))
    assert cmp.overall in ("equal", "eta<nu", "nu<eta", "incomparable")
    with pytest.raises(BudgetMismatch):
        compare_congruences(compute_congruence(s, ETA, 3, 2), compute_congruence(s, NU, 4, 2))


def test_eta_equals_nu_on_bijective_nondegenerate():
    for name, s in catalog.catalog():
        p = profile(s)
        if not (p.bijective and p.right_nondegenerate):
            continue
        eta, nu = compute_congruence(s, ETA, 4, 2), compute_congruence(s, NU, 4, 2)
        cmp = compare_congruences(eta, nu)
        assert cmp.overall == "equal" and not cmp.inconclusive, name
        assert lambda_constancy(eta).status == PASS
