import numpy as np
import pytest

from src.algebra import double_construction, fusion_ring, modular_data
from src.algebra.errors import FusionInputError
from src.algebra.fusion_ring import FusionRing
from src.algebra.groups import builtin_group, cyclic, direct_product


def test_deligne_double_of_ising(ising):
    doubled = double_construction.deligne_double(ising.ring, ising.modular)
    assert doubled.provenance == double_construction.DELIGNE
    assert doubled.ring.size == 9
    assert doubled.ring.labels[0] == "(1,1)"
    assert fusion_ring.validate(doubled.ring).passed
    assert fusion_ring.global_index(doubled.ring) == pytest.approx(16.0)
    assert modular_data.check_modularity(doubled.modular).passed


def test_deligne_double_without_modular_data(fibonacci):
    doubled = double_construction.deligne_double(fibonacci.ring)
    assert doubled.modular is None
    assert fusion_ring.fuse(doubled.ring, {"(tau,tau)": 1}, {"(tau,1)": 1}) == {"(1,tau)": 1, "(tau,tau)": 1}


def test_drinfeld_double_of_z2_is_pointed():
    group = builtin_group("Z2")
    doubled = double_construction.drinfeld_double(group)
    assert doubled.provenance == double_construction.DRINFELD
    assert doubled.ring.size == 4
    assert fusion_ring.dims(doubled.ring).d == pytest.approx((1.0,) * 4)
    assert modular_data.check_modularity(doubled.modular).passed
    pointed = FusionRing.from_group(direct_product(cyclic(2), cyclic(2)))
    assert fusion_ring.find_isomorphism(doubled.ring, pointed) is not None


def test_drinfeld_double_of_z2_has_one_fermion():
    doubled = double_construction.drinfeld_double(builtin_group("Z2"))
    spins = sorted(np.round(doubled.modular.T.real, 9))
    assert spins == [-1.0, 1.0, 1.0, 1.0]


def test_drinfeld_double_of_s3():
    doubled = double_construction.drinfeld_double(builtin_group("S3"))
    ring = doubled.ring
    assert ring.size == 8
    assert sorted(round(d) for d in fusion_ring.dims(ring).d) == [1, 1, 2, 2, 2, 2, 3, 3]
    assert fusion_ring.global_index(ring) == pytest.approx(36.0)
    assert ring.labels[0] == "e|chi0"
    assert modular_data.check_modularity(doubled.modular).passed
    np.testing.assert_allclose(
        modular_data.dims_from_S(doubled.modular).d, ring.perron_frobenius, atol=1e-8
    )


@pytest.mark.parametrize("name", ["Z3", "Z4", "Z2xZ2"])
def test_abelian_doubles_square_the_group(name):
    group = builtin_group(name)
    doubled = double_construction.drinfeld_double(group)
    assert doubled.ring.size == group.order ** 2
    assert all(d == pytest.approx(1.0) for d in doubled.ring.perron_frobenius)


def test_orbifold_budget():
    assert double_construction.orbifold_budget(3) == (9, 3, 6)
    assert double_construction.orbifold_budget(1) == (1, 1, 0)
    for order in (2, 4, 6):
        assert double_construction.orbifold_budget(order) == (order ** 2, order, order ** 2 - order)
    with pytest.raises(FusionInputError):
        double_construction.orbifold_budget(0)
    with pytest.raises(FusionInputError):
        double_construction.orbifold_budget(True)


def test_ising_double_is_a_proper_subcategory(ising):
    comparison = double_construction.compare_double(ising.ring)
    assert comparison.passed
    assert not comparison.full
    assert comparison.even_vertices == 5
    assert comparison.total_pairs == 9
    assert comparison.grading_order == 2
    assert comparison.deficiency_factor == pytest.approx(2.0)


def test_fibonacci_double_is_full(fibonacci):
    comparison = double_construction.compare_double(fibonacci.ring)
    assert comparison.full
    assert comparison.deficiency_factor == pytest.approx(1.0)


def test_pointed_double_deficiency_is_group_order():
    comparison = double_construction.compare_double(FusionRing.from_group(builtin_group("Z3")))
    assert comparison.even_vertices == 3
    assert comparison.deficiency_factor == pytest.approx(3.0)
    assert comparison.passed
