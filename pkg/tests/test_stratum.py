import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hilbstrata.border_relations import commutator_relations
from hilbstrata.config import ConfigError, CountingConfig
from hilbstrata.counting import BudgetExceeded, count_by_splitting, count_solutions, iter_solutions
from hilbstrata.motivic import MotivicPoly
from hilbstrata.partitions import enumerate_partitions, validate_partition
from hilbstrata.polynomial import Poly
from hilbstrata.stratum import (
    ResidualSystem,
    StratumResult,
    class_from_counts,
    count_points,
    eliminate,
    interpolate,
    punctual_class,
    random_check_elimination,
    stratum_class,
)

LAM_32111 = validate_partition({0: 3, 1: 2, 2: 1, 3: 1, 4: 1})
ELL4 = validate_partition({(0, 0): 1, (1, 0): 1, (2, 0): 1, (0, 1): 1})

EXCEPTIONAL = {
    "2:0,0=2;0,1=1;1,0=1": MotivicPoly((0, 0, -1, 2)),
    "2:0,0=2;0,1=1;0,2=1;1,0=1": MotivicPoly((0, 0, 0, -1, 2)),
    "2:0,0=2;0,1=1;1,0=1;2,0=1": MotivicPoly((0, 0, 0, 0, -1, 2)),
    "2:0,0=3;0,1=1;1,0=1": MotivicPoly((0, 0, -1, 2)),
}


def free_labels(lam):
    s = commutator_relations(lam)
    r = eliminate(s)
    return {s.variables[v].label for v in r.free_vars}, r


def x(i):
    return Poly.var(i)


# --- elimination ---------------------------------------------------------------


def test_m1_hook_elimination():
    free, r = free_labels(LAM_32111)
    assert r.affine and r.dimension == 5
    assert free == {("30", "11"), ("30", "04"), ("21", "04"), ("12", "04"), ("13", "04")}


def test_ell4_elimination():
    free, r = free_labels(ELL4)
    assert r.affine and r.dimension == 5
    assert r.residual_relations == []


def test_ell4_alternative_coordinates():
    # another valid choice of 5 coordinates; it must parametrize the stratum bijectively
    s = commutator_relations(ELL4)
    ids = {v.label: v.id for v in s.variables}
    chosen = [ids[l] for l in [("100", "010"), ("100", "020"), ("100", "001"), ("002", "020"), ("011", "020")]]
    sols = list(iter_solutions(s.relations, range(len(s.variables)), 3))
    assert len(sols) == 3**5
    assert len({tuple(p[i] for i in chosen) for p in sols}) == 3**5


def test_cross4_residual():
    lam = validate_partition({(0, 0): 2, (1, 0): 1, (0, 1): 1})
    s = commutator_relations(lam)
    r = eliminate(s)
    assert not r.affine and len(r.residual_relations) == 1
    assert len(r.active_vars()) == 2
    assert r.dimension == 4


def test_m1_strata_affine_with_expected_dimension():
    for n in range(1, 9):
        for lam in enumerate_partitions(1, n):
            r = eliminate(commutator_relations(lam))
            assert r.affine
            assert r.dimension == n - lam[(0,)]


@pytest.mark.parametrize("n", [3, 4, 5])
def test_elimination_is_sound_on_random_points(n):
    rng = random.Random(n)
    for lam in enumerate_partitions(2, n):
        s = commutator_relations(lam)
        r = eliminate(s)
        for q in (2, 3):
            assert random_check_elimination(s, r, q, 100, rng) == 0


def test_elimination_preserves_point_counts():
    # count the full unreduced system and the residual the same way
    for lam in enumerate_partitions(2, 4):
        s = commutator_relations(lam)
        r = eliminate(s)
        for q in (2, 3):
            full = count_solutions(s.relations, range(len(s.variables)), q)
            assert count_points(r, q) == full


def test_inconsistent_system_is_empty():
    s = commutator_relations(ELL4)
    s.relations.append(Poly.const(1))
    r = eliminate(s)
    assert r.empty and count_points(r, 5) == 0


def test_residual_record_round_trip():
    lam = validate_partition({(0, 0): 2, (1, 0): 1, (0, 1): 1, (2, 0): 1})
    r = eliminate(commutator_relations(lam))
    assert ResidualSystem.from_record(r.to_record()) == r


# --- counting ------------------------------------------------------------------


def residual(relations, active, spare):
    return ResidualSystem(
        num_vars=len(active) + spare,
        residual_vars=list(active),
        residual_relations=relations,
        substitutions=[],
        pure_free=list(range(len(active), len(active) + spare)),
    )


@pytest.mark.parametrize("method", ["brute", "split"])
def test_count_points_product(method):
    r = residual([x(0) * x(1)], [0, 1], 2)
    assert count_points(r, 2, method=method) == 12


@pytest.mark.parametrize("method", ["brute", "split"])
def test_count_points_cusp(method):
    # a*(b^2 - c) = 0 over F_3: a=0 gives 9, a!=0 gives 2*3
    r = residual([x(0) * (x(1) * x(1) - x(2))], [0, 1, 2], 1)
    assert count_points(r, 3, method=method) == 15 * 3


def test_budget_exceeded():
    rels = [x(i) * x(i + 1) for i in range(9)]
    with pytest.raises(BudgetExceeded):
        count_solutions(rels, range(10), 5, budget=1000)


def poly_strategy(nvars):
    mono = st.lists(st.integers(0, nvars - 1), min_size=0, max_size=2).map(lambda l: tuple(sorted(l)))
    term = st.tuples(mono, st.integers(-2, 2))
    return st.lists(term, min_size=1, max_size=4).map(Poly)


@settings(max_examples=150, deadline=None)
@given(st.data(), st.integers(1, 4), st.sampled_from([2, 3, 5]))
def test_split_counter_matches_brute_force(data, nvars, q):
    rels = data.draw(st.lists(poly_strategy(nvars), min_size=1, max_size=3))
    variables = list(range(nvars))
    assert count_by_splitting(rels, variables, q) == count_solutions(rels, variables, q)


def test_split_matches_brute_on_real_residuals():
    for n in range(3, 6):
        for lam in enumerate_partitions(2, n):
            r = eliminate(commutator_relations(lam))
            if r.affine:
                continue
            for q in (2, 3, 5, 7):
                assert count_points(r, q, method="split") == count_points(r, q, method="brute")


# --- interpolation and classes -------------------------------------------------


def test_interpolate_recovers_polynomial():
    f = lambda t: 2 * t**3 - t**2 + 5
    coeffs = interpolate([(p, f(p)) for p in (2, 3, 5, 7)])
    assert coeffs == [Fraction(5), Fraction(0), Fraction(-1), Fraction(2)]


def test_not_polynomial_is_reported():
    # x^2 + 1 = 0 has 1, 0, 2, 0 points for p = 2, 3, 5, 7
    r = residual([x(0) * x(0) + Poly.const(1)], [0], 0)
    counts, poly, reason = class_from_counts(r, CountingConfig())
    assert poly is None and reason
    assert counts[2] == 1 and counts[3] == 0 and counts[5] == 2


def test_too_few_primes():
    r = residual([x(0) * x(1)], [0, 1], 0)
    with pytest.raises(ConfigError):
        class_from_counts(r, CountingConfig(primes=(2, 3)))


def test_exceptional_strata_classes():
    found = {}
    for n in range(1, 6):
        for lam in enumerate_partitions(2, n):
            res = stratum_class(lam)
            if not res.affine:
                found[lam.encode()] = res.klass
            else:
                assert res.klass == MotivicPoly.monomial(res.residual.dimension)
    assert found == EXCEPTIONAL


def test_exceptional_classes_at_holdout_primes():
    cfg = CountingConfig()
    for key, want in EXCEPTIONAL.items():
        lam = next(l for l in enumerate_partitions(2, 5) + enumerate_partitions(2, 4) if l.encode() == key)
        res = stratum_class(lam, cfg)
        assert res.from_counts and res.klass == want
        for q, c in res.counts.items():
            assert want.eval(q) == c
            assert count_points(res.residual, q, method="brute") == c


def test_punctual_m2_small():
    assert punctual_class(2, 1) == MotivicPoly.one()
    assert punctual_class(2, 2) == MotivicPoly((1, 1, 1))
    assert punctual_class(2, 3) == MotivicPoly((1, 1, 2, 1, 1))
    assert punctual_class(2, 4) == MotivicPoly((1, 1, 2, 3, 3, 2, 1))


def test_stratum_result_record_round_trip():
    lam = validate_partition({(0, 0): 2, (1, 0): 1, (0, 1): 1})
    res = stratum_class(lam)
    back = StratumResult.from_record(res.to_record())
    assert back.summary_json() == res.summary_json()
    assert back.residual == res.residual


def test_brute_and_split_configs_agree():
    a = punctual_class(2, 4, CountingConfig(method="brute"))
    b = punctual_class(2, 4, CountingConfig(method="split"))
    assert a == b


def test_direct_count_of_tiny_stratum():
    # whole-space brute force over F_2 for the smallest exceptional stratum
    lam = validate_partition({(0, 0): 2, (1, 0): 1, (0, 1): 1})
    s = commutator_relations(lam)
    total = sum(
        1
        for vals in itertools.product(range(2), repeat=len(s.variables))
        if s.solutions_satisfied(vals, 2)
    )
    assert total == MotivicPoly((0, 0, -1, 2)).eval(2)
