import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from classical_drg import bounds
from classical_drg.bounds import CaseTag, Relation, classify
from classical_drg.graphs import build_hamming, catalog_params, iter_bits
from classical_drg.params import ClassicalParams as P, bracket

fractions = st.fractions(-50, 50, max_denominator=7)


@given(lhs=fractions, rhs=fractions, rel=st.sampled_from([Relation.LT, Relation.LE, Relation.GT, Relation.GE]))
def test_holds_iff_relation(lhs, rhs, rel):
    check = bounds.BoundCheck.evaluate("x", lhs, rel, rhs)
    expected = {"<": lhs < rhs, "<=": lhs <= rhs, ">": lhs > rhs, ">=": lhs >= rhs}[rel.value]
    assert check.holds is expected


def test_divides_and_integer_relations():
    assert Relation.DIVIDES.evaluate(F(3), F(12))
    assert not Relation.DIVIDES.evaluate(F(3), F(20))
    assert Relation.INTEGER.evaluate(F(4), F(0))
    assert not Relation.INTEGER.evaluate(F(7, 2), F(0))


# ---- claw and Metsch

def test_claw_bound_examples():
    h33 = bounds.claw_bound(6, 1, 2, 2)
    assert (h33.lhs, h33.rhs, h33.holds) == (0, 3, False)
    h233 = bounds.claw_bound(49, 12, 6, 7)
    assert (h233.lhs, h233.rhs, h233.holds) == (55, 140, False)


def test_claw_bound_agrees_with_exhaustive_claw_search():
    # H(3,3) has an induced K_{1,3}, so the claw-free condition for s = 2 must fail
    g = build_hamming(3, 3).graph
    adj = g.adj
    found = any(all(not adj[a] >> b & 1 for a, b in itertools.combinations(trio, 2))
                for x in range(g.n) for trio in itertools.combinations(list(iter_bits(adj[x])), 3))
    assert found
    assert not bounds.claw_bound(6, 1, 2, 2).holds


def test_claw_bound_fails_for_large_s():
    assert not bounds.claw_bound(4900, 705, 6, 400).holds


def test_metsch_example():
    first, second, threshold = bounds.metsch_conditions(4900, 705, 6, 9)
    assert first.holds and second.holds
    assert threshold == 667


@given(k=st.integers(1, 500), a1=st.integers(0, 300), c2=st.integers(1, 30), s=st.integers(1, 20))
def test_metsch_first_check_is_claw_bound(k, a1, c2, s):
    first, second, _ = bounds.metsch_conditions(k, a1, c2, s)
    assert first.holds == bounds.claw_bound(k, a1, c2, s).holds
    if s == 1:
        assert second.holds == (a1 + 1 > c2 - 1)


def test_metsch_derived_from_tuple():
    p = P(3, 2, 1, 700)
    assert 705 == p.beta - 1 + p.alpha * (p.r - 1)


# ---- SPLS, sigma, spls sufficiency

def test_spls_examples():
    first = bounds.spls_conditions(P(3, 2, 1, 7), 6, 7)[0]
    assert (first.lhs, first.rhs, first.holds) == (12, 65, False)
    assert all(c.holds for c in bounds.spls_conditions(P(3, 2, 1, 700), 6, 9))
    assert bounds.spls_conditions(P(3, 2, 1, 7), 1, 7)[0].holds


def test_sigma_examples():
    sig = bounds.sigma_lower_bound(P(3, 2, 1, 7))
    assert sig.at == 7 and (sig.lhs, sig.rhs) == (42, 105) and sig.holds


@given(D=st.integers(3, 5), b=st.integers(2, 4), alpha=st.integers(0, 4), beta=st.integers(1, 3000))
def test_sigma_is_minimal_and_at_least_r(D, b, alpha, beta):
    p = P(D, b, alpha, beta)
    sig = bounds.sigma_lower_bound(p)
    assert sig.at >= p.r
    if sig.holds and sig.at > p.r:
        a1 = p.beta - 1 + p.alpha * (p.r - 1)
        c2 = (p.b + 1) * (p.alpha + 1)
        prev = int(sig.at) - 1
        assert prev * (a1 + 1) - p.beta * p.r > (c2 - 1) * prev * (prev - 1) / 2


def test_spls_sufficient_examples():
    assert bounds.thm_spls_sufficient(P(3, 2, 1, 7)).rhs == F(259, 3)
    assert not bounds.thm_spls_sufficient(P(3, 2, 1, 7)).holds
    assert bounds.thm_spls_sufficient(P(3, 2, 1, 700)).holds
    assert bounds.thm_spls_sufficient(P(3, 2, 0, 1)).rhs == F(16, 3) * 7


# ---- geometricity conditions and the beta bound

def test_geometric_conditions_examples():
    checks = bounds.thm_geometric_conditions(P(3, 2, 1, 10000), 9)
    assert all(c.holds for c in checks)
    assert [c.rhs for c in checks][1:] == [121, 143]
    first = bounds.thm_geometric_conditions(P(3, 2, 1, 7), 9)[0]
    assert first.rhs == 84 and not first.holds


def test_betabound_examples():
    assert bounds.betabound_terms(P(3, 2, 1, 7)) == (160, 168)
    assert not bounds.thm_betabound(P(3, 2, 1, 7)).holds
    assert bounds.thm_betabound(P(3, 2, 1, 200)).holds
    assert bounds.betabound_terms(P(3, 4, 2, 1)) == (F(21168, 11), F(26964, 11))


@given(b=st.integers(2, 9), alpha=st.fractions(0, 12, max_denominator=5), D=st.integers(3, 6))
def test_betabound_statement_and_proof_forms_agree(b, alpha, D):
    r = bracket(D, b)
    statement = F(2 * b + 4, 2 * b + 3) * r * (b + 2) * (alpha * b + b + alpha)
    proof = F(2, 2 * b + 3) * r * (b + 2) ** 2 * (alpha * b + b + alpha)
    assert statement == proof == bounds.betabound_terms(P(D, b, alpha, 1))[0]


def test_betabound_takes_the_max_where_terms_cross():
    small, large = bounds.betabound_terms(P(3, 2, 0, 1)), bounds.betabound_terms(P(3, 2, 3, 1))
    assert small[0] < small[1] and large[0] > large[1]
    assert bounds.thm_betabound(P(3, 2, 0, 1)).rhs == small[1]
    assert bounds.thm_betabound(P(3, 2, 3, 1)).rhs == large[0]


# ---- corollary, legacy, dual Pasch, item 8

def test_corollary_alpha_zero():
    check = bounds.corollary_alpha_zero(P(3, 2, 0, 1))
    assert check.rhs == 168 and check.holds
    assert bounds.corollary_alpha_zero(P(3, 2, 0, 136)).holds
    assert not bounds.corollary_alpha_zero(P(3, 2, 0, 168)).holds
    with pytest.raises(ValueError):
        bounds.corollary_alpha_zero(P(3, 2, 1, 7))


def test_corollary_consistent_with_dual_polar():
    for D in (3, 4, 5):
        for b in (2, 3, 4, 5):
            assert bounds.corollary_alpha_zero(P(D, b, 0, b * b)).holds


def test_legacy_bounds():
    twisted = bounds.metsch_legacy_bounds(P(3, 2, 2, 30))[0]
    assert twisted.rhs == F(448, 3) and twisted.holds
    assert not bounds.metsch_legacy_bounds(P(3, 2, 2, 200))[0].holds
    bil = bounds.metsch_legacy_bounds(P(3, 2, 1, 133))[0]
    assert bil.rhs == 133 and not bil.holds
    with pytest.raises(ValueError):
        bounds.metsch_legacy_bounds(P(3, 4, 1, 100))


def test_dual_pasch_bound():
    assert bounds.dual_pasch_bound(P(3, 2, 1, 7)).rhs == 11
    assert not bounds.dual_pasch_bound(P(3, 2, 1, 7)).holds
    assert bounds.dual_pasch_bound(P(3, 2, 1, 12)).holds
    for b in (2, 3, 4):
        for D in (3, 4):
            r = bracket(D, b)
            assert not bounds.dual_pasch_bound(P(D, b, 1, r)).holds


def test_item8_conditions():
    assert all(c.holds for c in bounds.item8_conditions(P(3, 4, 1, 28)))
    names = {c.name: c.holds for c in bounds.item8_conditions(P(3, 3, 1, 100))}
    assert names["item8_alpha_le_b_minus_2"] and names["item8_divisibility"]
    assert not {c.name: c.holds for c in bounds.item8_conditions(P(3, 4, 2, 10**6))}["item8_divisibility"]


# ---- strictness at equality

@pytest.mark.parametrize("check,at_equality", [
    (lambda beta: bounds.thm_spls_sufficient(P(3, 2, 1, beta)), F(259, 3)),
    (lambda beta: bounds.thm_geometric_conditions(P(3, 2, 1, beta), 9)[0], 84),
    (lambda beta: bounds.thm_betabound(P(3, 2, 1, beta)), 168),
    (lambda beta: bounds.corollary_alpha_zero(P(3, 2, 0, beta)), 168),
    (lambda beta: bounds.dual_pasch_bound(P(3, 2, 1, beta)), 11),
])
def test_boundary_equality(check, at_equality):
    res = check(at_equality)
    assert res.lhs == res.rhs
    strict_or_upper = res.relation in (Relation.GT, Relation.LT)
    assert res.holds is (not strict_or_upper)
    eps = F(1, 1000)
    above, below = check(at_equality + eps), check(at_equality - eps)
    if res.relation in (Relation.GT, Relation.GE):
        assert above.holds and not below.holds
    else:
        assert below.holds and not above.holds


# ---- classifier

@pytest.mark.parametrize("p,tags", [
    (P(3, 1, 4, 9), {"Gosset"}),
    (P(3, 2, 2, 30), {"Item7Region"}),
    (P(3, 4, 2, 10**6), {"Infeasible"}),
    (P(3, 1, 1, 3), {"Johnson"}),
    (P(3, 1, 0, 2), {"HammingOrDoob"}),
    (P(3, 1, 2, 5), {"HalvedCube"}),
    (P(3, 2, 2, 300), {"GrassmannForced"}),
    (P(3, 2, 1, 200), {"BilinearFormsForced"}),
    # still under the item-7 bound, so both items are reported
    (P(3, 2, 2, 200), {"GrassmannForced", "Item7Region"}),
    (P(3, 2, 1, 133), {"BilinearFormsForced", "Item7Region"}),
    (P(3, 1, 3, 9), {"Infeasible"}),
    (P(3, -2, -3, 7), {"OutsideScope_bNegative"}),
    (P(3, 2, 0, 168), {"Infeasible"}),
    (P(3, 4, 1, 10**6), {"Item8Candidate"}),
])
def test_classify_examples(p, tags):
    assert set(classify(p).tag_names) == tags


def test_classify_evidence_for_twisted_grassmann():
    out = classify(P(3, 2, 2, 30))
    assert "metsch_grassmann" in [c.name for c in out.evidence]


def test_classify_is_pure():
    a, b = classify(P(4, 3, 1, 500)), classify(P(4, 3, 1, 500))
    assert a == b and a.evidence == b.evidence


def test_catalog_never_infeasible():
    bad = [(name, str(p)) for name, p in catalog_params() if classify(p).infeasible]
    assert not bad


def test_non_integer_alpha_past_spls_bound_is_infeasible():
    assert classify(P(3, 3, F(1, 2), 10**5)).infeasible


def test_infeasible_is_exclusive():
    with pytest.raises(ValueError):
        bounds.ClassificationOutcome(P(3, 2, 1, 7), frozenset({CaseTag.INFEASIBLE, CaseTag.ITEM7_REGION}))
    with pytest.raises(ValueError):
        bounds.ClassificationOutcome(P(3, 2, 1, 7), frozenset())


@settings(max_examples=60, deadline=None)
@given(D=st.integers(3, 5), b=st.integers(2, 4), alpha=st.integers(0, 4), beta=st.integers(1, 2000),
       bump=st.integers(1, 5000))
def test_lower_bound_gates_are_monotone(D, b, alpha, beta, bump):
    for gate in (bounds.thm_betabound, bounds.thm_spls_sufficient):
        if gate(P(D, b, alpha, beta)).holds:
            assert gate(P(D, b, alpha, beta + bump)).holds


def test_scan_rows_and_order():
    rows = bounds.scan([3], [2], [0, 1, 2], (1, 200))
    assert len(rows) == 600
    keys = [r.params.as_tuple() for r in rows]
    assert keys == sorted(keys)
    single = bounds.scan([3], [2], [1], (7, 7))
    assert len(single) == 1 and single[0].outcome == classify(P(3, 2, 1, 7))
    assert bounds.scan([3], [2], [], (1, 5)) == []


def test_scan_range_step():
    assert bounds.rational_range(1, 2, F(1, 2)) == [1, F(3, 2), 2]
