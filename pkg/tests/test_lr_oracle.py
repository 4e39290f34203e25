import numpy as np
import pytest

from src.algebra import lr_oracle
from src.algebra.errors import ConstructionError, FusionInputError, OutsideAlgebraError
from src.algebra.groups import builtin_group


@pytest.fixture(scope="module")
def z3_algebra():
    return lr_oracle.build(builtin_group("Z3"), 2, seed=5)


def test_dimensions(z3_algebra):
    assert z3_algebra.base_dim == 4
    assert z3_algebra.dim == 12
    assert len(z3_algebra.R) == 3


@pytest.mark.parametrize("name,m", [("Z1", 2), ("Z2", 2), ("Z3", 3), ("Z2xZ2", 4), ("S3", 6)])
def test_relations_hold(name, m):
    algebra = lr_oracle.build(builtin_group(name), m)
    residuals = lr_oracle.relation_residuals(algebra, samples=3, seed=1)
    assert set(residuals) == {"covariance", "isometry", "multiplication", "adjoint", "unit"}
    assert max(residuals.values()) < lr_oracle.RELATION_TOLERANCE


def test_non_cyclic_group_needs_regular_size():
    with pytest.raises(ConstructionError):
        lr_oracle.build(builtin_group("S3"), 2)
    with pytest.raises(FusionInputError):
        lr_oracle.build(builtin_group("Z2"), 0)


def test_expand_recovers_coefficients(z3_algebra):
    rng = np.random.default_rng(0)
    coefficients = {
        g: rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)) for g in range(3)
    }
    X = z3_algebra.compose(coefficients)
    expansion = lr_oracle.expand(z3_algebra, X)
    for g in range(3):
        np.testing.assert_allclose(expansion.coefficients[g], coefficients[g], atol=1e-12)
    np.testing.assert_allclose(lr_oracle.expectation(z3_algebra, X), coefficients[0], atol=1e-12)


def test_expand_rejects_elements_outside_the_algebra(z3_algebra):
    rng = np.random.default_rng(1)
    with pytest.raises(OutsideAlgebraError) as excinfo:
        lr_oracle.expand(z3_algebra, rng.standard_normal((12, 12)))
    assert excinfo.value.distance > lr_oracle.MEMBERSHIP_TOLERANCE
    with pytest.raises(FusionInputError):
        lr_oracle.expand(z3_algebra, np.eye(5))


def test_expectation_of_shift_vanishes(z3_algebra):
    np.testing.assert_allclose(lr_oracle.expectation(z3_algebra, z3_algebra.R[1]), np.zeros((4, 4)), atol=1e-15)
    np.testing.assert_allclose(lr_oracle.expectation(z3_algebra, z3_algebra.R[0]), np.eye(4), atol=1e-15)


def test_pimsner_popa_bound(z3_algebra):
    assert lr_oracle.pimsner_popa_check(z3_algebra, samples=20, seed=2) >= lr_oracle.PSD_FLOOR
    with pytest.raises(FusionInputError):
        lr_oracle.pimsner_popa_check(z3_algebra, samples=0)


@pytest.mark.parametrize("name,m", [("Z2", 2), ("Z3", 2), ("S3", 6)])
def test_sharpness_witness(name, m):
    group = builtin_group(name)
    algebra = lr_oracle.build(group, m)
    order = group.order
    assert lr_oracle.sharpness_witness(algebra, 2.0 / order) == pytest.approx(-order, abs=1e-9)
    assert lr_oracle.sharpness_witness(algebra, 1.0 / order) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("name", ["Z1", "Z2", "Z5", "S3"])
def test_alternating_word_count(name):
    group = builtin_group(name)
    assert lr_oracle.alternating_word_count(group, 1) == 1
    assert lr_oracle.alternating_word_count(group, 3) == group.order ** 2
    assert lr_oracle.alternating_word_count(group, 4) == group.order ** 3


def test_alternating_word_count_domain():
    with pytest.raises(FusionInputError):
        lr_oracle.alternating_word_count(builtin_group("Z2"), 0)


@pytest.mark.parametrize("name", ["Z1", "Z2", "Z3", "S3"])
def test_run_oracle_passes(name):
    report = lr_oracle.run_oracle(builtin_group(name), samples=5, seed=4, name=name)
    assert report.passed, [item.name for item in report.entries if not item.passed]
    assert report.seed == 4
    assert report.group == name
    assert report.m == max(builtin_group(name).order, 2)


def test_run_oracle_is_deterministic():
    first = lr_oracle.run_oracle(builtin_group("Z2"), samples=4, seed=9)
    second = lr_oracle.run_oracle(builtin_group("Z2"), samples=4, seed=9)
    assert first.model_dump() == second.model_dump()


def test_trivial_group_skips_sharpness():
    report = lr_oracle.run_oracle(builtin_group("Z1"), samples=3, seed=0)
    assert report.witness_margin is None
    assert "pimsner_popa_sharpness" not in {item.name for item in report.entries}


@pytest.mark.parametrize("name,m", [("Z2", 2), ("Z3", 3)])
def test_oracle_at_full_sample_count(name, m):
    group = builtin_group(name)
    report = lr_oracle.run_oracle(group, m=m, samples=100, seed=0, name=name)
    assert report.passed, [item.name for item in report.entries if not item.passed]
    assert report.worst_margin >= lr_oracle.PSD_FLOOR
    assert report.witness_margin == pytest.approx(-group.order, abs=1e-9)

    algebra = lr_oracle.build(group, m)
    residuals = lr_oracle.relation_residuals(algebra, samples=100, seed=0)
    assert max(residuals.values()) < 1e-10


@pytest.mark.parametrize("name,m", [("Z2", 2), ("Z3", 3)])
def test_expand_roundtrip_over_seeded_samples(name, m):
    algebra = lr_oracle.build(builtin_group(name), m)
    rng = np.random.default_rng(0)
    D = algebra.base_dim
    for _ in range(100):
        coefficients = {
            g: rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D)) for g in range(algebra.group.order)
        }
        X = algebra.compose(coefficients)
        expansion = lr_oracle.expand(algebra, X)
        assert np.linalg.norm(X - algebra.compose(expansion.coefficients), 2) < 1e-12 * max(1.0, np.linalg.norm(X, 2))


def test_expectation_is_idempotent(z3_algebra):
    rng = np.random.default_rng(3)
    coefficients = {g: rng.standard_normal((4, 4)) for g in range(3)}
    X = z3_algebra.compose(coefficients)
    once = lr_oracle.expectation(z3_algebra, X)
    twice = lr_oracle.expectation(z3_algebra, z3_algebra.embed(once))
    np.testing.assert_allclose(twice, once, atol=1e-12)


def test_expectation_of_shift_products_is_unit(z3_algebra):
    for R in z3_algebra.R:
        np.testing.assert_allclose(lr_oracle.expectation(z3_algebra, R @ R.conj().T), np.eye(4), atol=1e-12)
