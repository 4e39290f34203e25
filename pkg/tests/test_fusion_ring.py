import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra import fusion_ring
from src.algebra.errors import FusionInputError
from src.algebra.fusion_ring import FusionRing
from src.algebra.groups import builtin_group, symmetric3
from src.catalog import models

ISING = models.ising().ring
SU2_4 = models.su2k(4).ring


def combinations(ring):
    return st.dictionaries(st.sampled_from(ring.labels), st.integers(0, 3), max_size=ring.size)


def test_ising_is_valid(ising):
    report = fusion_ring.validate(ising.ring)
    assert report.valid
    assert [entry.name for entry in report.entries] == [
        "dual_involution", "unit", "conjugation", "associativity", "frobenius",
    ]


def test_broken_ising_fails_associativity(broken_ising):
    report = fusion_ring.validate(broken_ising.ring)
    assert not report.passed
    associativity = next(entry for entry in report.entries if entry.name == "associativity")
    assert not associativity.passed
    assert associativity.counterexample == ["eps", "sigma", "sigma", "1"]


def test_unit_entries_are_implied():
    ring = FusionRing.build(["1", "tau"], [0, 1], [(1, 1, 0, 1), (1, 1, 1, 1)])
    assert ring.N(0, 1, 1) == 1
    assert ring.N(1, 0, 1) == 1
    assert ring.N(0, 0, 1) == 0
    assert fusion_ring.validate(ring).passed


@pytest.mark.parametrize("labels,dual,entries", [
    (["1", "1"], [0, 1], []),
    (["1", "x"], [0], []),
    (["1", "x"], [0, 2], []),
    (["1", "x"], [0, 1], [(1, 1, 0, -1)]),
    (["1", "x"], [0, 1], [(0, 1, 0, 1)]),
    (["1", "x"], [0, 1], [(1, 1, 3, 1)]),
    (["1", "x"], [0, 1], [(1, 1, 0, 1), (1, 1, 0, 2)]),
    ([], [], []),
])
def test_build_rejects_malformed_input(labels, dual, entries):
    with pytest.raises(FusionInputError):
        FusionRing.build(labels, dual, entries)


def test_non_involutive_dual_is_reported():
    ring = FusionRing.build(["1", "a", "b"], [0, 2, 2], [(1, 2, 0, 1), (2, 1, 0, 1)])
    report = fusion_ring.validate(ring)
    assert not report.entries[0].passed
    assert report.entries[0].counterexample == ["a"]


def test_ising_dimensions_and_index(ising):
    vector = fusion_ring.dims(ising.ring)
    assert vector.d == pytest.approx((1.0, 1.0, math.sqrt(2)), abs=1e-10)
    assert vector.is_consistent(ising.ring)
    assert fusion_ring.global_index(ising.ring) == pytest.approx(4.0)


def test_fibonacci_dimension_is_golden_ratio(fibonacci):
    golden = (1 + math.sqrt(5)) / 2
    assert fusion_ring.dims(fibonacci.ring).d[1] == pytest.approx(golden, abs=1e-10)
    assert fusion_ring.global_index(fibonacci.ring) == pytest.approx(2 + golden, abs=1e-10)


@pytest.mark.parametrize("k", range(1, 9))
def test_su2_dimensions_follow_quantum_integers(k):
    ring = models.su2k(k).ring
    q = math.pi / (k + 2)
    expected = [math.sin((a + 1) * q) / math.sin(q) for a in range(k + 1)]
    assert fusion_ring.dims(ring).d == pytest.approx(expected, abs=1e-9)
    assert fusion_ring.global_index(ring) == pytest.approx((k + 2) / (2 * math.sin(q) ** 2), rel=1e-10)


def test_pointed_ring_of_s3():
    ring = FusionRing.from_group(symmetric3())
    assert fusion_ring.validate(ring).passed
    assert fusion_ring.dims(ring).d == pytest.approx((1.0,) * 6)
    assert fusion_ring.global_index(ring) == pytest.approx(6.0)


def test_fuse_ising(ising):
    ring = ising.ring
    assert fusion_ring.fuse(ring, {"sigma": 1}, {"sigma": 1}) == {"1": 1, "eps": 1}
    assert fusion_ring.fuse(ring, {"eps": 1}, {"sigma": 2}) == {"sigma": 2}
    assert fusion_ring.fuse(ring, {}, {"sigma": 1}) == {}


def test_fuse_rejects_bad_coefficients(ising):
    with pytest.raises(FusionInputError):
        fusion_ring.fuse(ising.ring, {"sigma": -1}, {"sigma": 1})
    with pytest.raises(FusionInputError):
        fusion_ring.fuse(ising.ring, {"psi": 1}, {"sigma": 1})


def test_fusion_matrix_and_resolve(ising):
    ring = ising.ring
    assert ring.resolve("sigma") == 2
    assert ring.resolve(1) == 1
    np.testing.assert_array_equal(ring.fusion_matrix("sigma"), [[0, 0, 1], [0, 0, 1], [1, 1, 0]])
    with pytest.raises(FusionInputError):
        ring.resolve(5)


@given(combinations(ISING), combinations(ISING), combinations(ISING))
def test_fuse_is_associative(a, b, c):
    left = fusion_ring.fuse(ISING, fusion_ring.fuse(ISING, a, b), c)
    right = fusion_ring.fuse(ISING, a, fusion_ring.fuse(ISING, b, c))
    assert left == right


@given(combinations(SU2_4), combinations(SU2_4), combinations(SU2_4))
def test_fuse_is_bilinear_and_commutative(a, b, c):
    total = {label: a.get(label, 0) + b.get(label, 0) for label in set(a) | set(b)}
    lhs = fusion_ring.fuse(SU2_4, total, c)
    first = fusion_ring.fuse(SU2_4, a, c)
    second = fusion_ring.fuse(SU2_4, b, c)
    rhs = {label: first.get(label, 0) + second.get(label, 0) for label in SU2_4.labels}
    assert lhs == {label: value for label, value in rhs.items() if value}
    assert fusion_ring.fuse(SU2_4, a, c) == fusion_ring.fuse(SU2_4, c, a)


@settings(max_examples=30)
@given(st.permutations([1, 2, 3, 4]))
def test_dims_are_invariant_under_relabeling(tail):
    permutation = [0] + list(tail)
    relabeled = fusion_ring.relabel(SU2_4, permutation)
    assert fusion_ring.validate(relabeled).passed
    original = fusion_ring.dims(SU2_4).d
    moved = fusion_ring.dims(relabeled).d
    for i, p in enumerate(permutation):
        assert moved[p] == pytest.approx(original[i], abs=1e-10)
    assert fusion_ring.find_isomorphism(relabeled, SU2_4) is not None


def test_relabel_requires_fixed_identity():
    with pytest.raises(FusionInputError):
        fusion_ring.relabel(ISING, [1, 0, 2])


def test_su2_level_two_is_ising():
    mapping = fusion_ring.find_isomorphism(models.su2k(2).ring, ISING)
    assert mapping == (0, 2, 1)


def test_non_isomorphic_rings(fibonacci):
    assert fusion_ring.find_isomorphism(ISING, models.su2k(3).ring) is None
    assert fusion_ring.find_isomorphism(
        FusionRing.from_group(builtin_group("Z4")),
        FusionRing.from_group(builtin_group("Z2xZ2")),
    ) is None
    assert fusion_ring.find_isomorphism(fibonacci.ring, models.su2k(1).ring) is None


def test_ising_grading():
    grading = fusion_ring.grading(ISING)
    assert grading.group.order == 2
    assert grading.component == (0, 0, 1)
    assert grading.members(0) == (0, 1)


def test_trivial_grading(fibonacci):
    assert fusion_ring.grading(fibonacci.ring).group.order == 1


def test_pointed_grading_is_the_group():
    assert fusion_ring.grading(FusionRing.from_group(builtin_group("Z3"))).group.order == 3
    assert fusion_ring.grading(FusionRing.from_group(symmetric3())).group.order == 6
