import random

import numpy as np
import pytest

from hilbstrata.border_relations import StratumData, commutator_relations
from hilbstrata.partitions import enumerate_partitions, validate_partition
from hilbstrata.quotient_algebra import (
    NotCommuting,
    StratumPoint,
    Subspace,
    annihilation_ok,
    check_commuting,
    ideal_generators,
    instantiate_matrices,
    partition_from_matrices,
    round_trip,
    rref,
    sample_points,
)

ELL4 = validate_partition({(0, 0): 1, (1, 0): 1, (2, 0): 1, (0, 1): 1})
CROSS4 = validate_partition({(0, 0): 2, (1, 0): 1, (0, 1): 1})


def test_rref_small():
    got = rref(np.array([[2, 4], [1, 1]]), 5)
    assert got.tolist() == [[1, 0], [0, 1]]
    assert rref(np.array([[1, 2], [2, 4]]), 3).tolist() == [[1, 2]]


def test_rank_against_brute_force_span():
    # size of the row span over F_2 computed by enumerating all combinations
    rng = random.Random(3)
    for _ in range(30):
        rows = [[rng.randrange(2) for _ in range(4)] for _ in range(3)]
        span = {
            tuple(sum(c * r[j] for c, r in zip(cs, rows)) % 2 for j in range(4))
            for cs in np.ndindex(2, 2, 2)
        }
        assert 2 ** Subspace(rows, 4, 2).dim == len(span)


def test_subspace_ops():
    q = 3
    A = Subspace([[1, 0, 0]], 3, q)
    B = Subspace([[0, 1, 0]], 3, q)
    assert (A + B).dim == 2
    assert (A + B).contains(A) and not A.contains(B)
    assert Subspace([[2, 0, 0]], 3, q) == A
    shift = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert A.image(shift) == B


def test_monomial_matrices_recover_partition():
    # the monomial ideal itself: all coefficients zero
    for m in (1, 2):
        for n in range(1, 6):
            for lam in enumerate_partitions(m, n):
                d = StratumData(lam)
                pt = StratumPoint(2, (0,) * len(d.variables))
                mats = instantiate_matrices(lam, pt, d)
                assert partition_from_matrices(mats, m, n, 2) == lam


def test_ell4_point_has_nilpotent_x0():
    # with every free coordinate zero the stratum point is the monomial ideal
    pts = sample_points(ELL4, 2, 40)
    zero = [p for p in pts if not any(p.assignment)]
    assert zero
    mats = instantiate_matrices(ELL4, zero[0])
    assert not mats[0].any()


def test_non_commuting_is_rejected():
    d = StratumData(CROSS4)
    pts = sample_points(CROSS4, 3, 50)
    bad = None
    for p in pts:
        for v in range(len(d.variables)):
            vals = list(p.assignment)
            vals[v] = (vals[v] + 1) % 3
            mats = instantiate_matrices(CROSS4, StratumPoint(3, tuple(vals)), d)
            if not check_commuting(mats, 3):
                bad = mats
                break
        if bad:
            break
    assert bad is not None
    with pytest.raises(NotCommuting):
        partition_from_matrices(bad, 2, 4, 3)


def test_sampled_points_satisfy_relations():
    for lam in enumerate_partitions(2, 4):
        s = commutator_relations(lam)
        for q in (2, 3):
            pts = sample_points(lam, q, 20, seed=1)
            assert len(set(pts)) == len(pts)
            assert all(s.solutions_satisfied(p.assignment, q) for p in pts)


def test_small_stratum_is_exhausted():
    # the single box stratum is one point
    assert len(sample_points(validate_partition({(0, 0): 1}), 3, 50)) == 1


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("m", [1, 2])
def test_round_trips(m, q):
    for n in range(1, 6):
        for lam in enumerate_partitions(m, n):
            rep = round_trip(lam, q, 50, seed=n)
            assert rep.ok, rep.detail
            assert rep.points_tested >= 1


def test_annihilation():
    pts = sample_points(CROSS4, 3, 10)
    assert all(annihilation_ok(CROSS4, p) for p in pts)


def test_generators_single_box():
    assert sorted(ideal_generators(validate_partition({(0, 0): 1}))) == ["x", "y", "z"]


def test_generators_ell4():
    gens = ideal_generators(ELL4)
    assert len(gens) == 8
    assert "z - a[1 0 0][0 0 1]*y - a[1 0 0][0 1 0]*x - a[1 0 0][0 2 0]*x^2" in gens
    assert "y^2 - a[0 0 2][0 1 0]*x - a[0 0 2][0 2 0]*x^2" in gens
    # full border, including the redundant x^2*y
    assert "x^2*y" in gens and "x^3" in gens


def test_generators_at_point():
    lam = validate_partition({(0,): 1, (1,): 1})  # O = {1, x}, z = a*x
    d = StratumData(lam)
    assert ideal_generators(lam, StratumPoint(3, (2,)), d) == ["z - 2*x", "z*x", "x^2"]
    assert ideal_generators(lam, StratumPoint(3, (0,)), d) == ["z", "z*x", "x^2"]


def test_round_trip_report_json():
    rep = round_trip(CROSS4, 2, 5)
    j = rep.to_json()
    assert set(j) >= {"lambda", "q", "points_tested", "commute_ok", "roundtrip_ok"}
