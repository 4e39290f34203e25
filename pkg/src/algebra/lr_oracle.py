"""
Finite-dimensional crossed-product realization of the LR inclusion for a pointed system.

The base algebra is B = M_m tensor M_m^opp, realized as M_{m^2} with the
opposite factor identified through the transpose. A finite group G acts by
alpha_g = Ad(U_g) with U_g = u_g tensor conj(u_g). The crossed product acts on
C^{m^2} tensor l^2(G): x acts as the block-diagonal matrix with blocks
alpha_{h^-1}(x), and the generator R_g is the left-regular shift.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.algebra import multi_interval
from src.algebra.errors import ConstructionError, FusionInputError, OutsideAlgebraError
from src.algebra.fusion_ring import FusionRing
from src.algebra.groups import GroupTable
from src.algebra.reports import CheckResult, Report

logger = logging.getLogger(__name__)

RELATION_TOLERANCE = 1e-10
EXPANSION_TOLERANCE = 1e-12
MEMBERSHIP_TOLERANCE = 1e-10
PSD_FLOOR = -1e-9
ALTERNATING_WORD_LENGTH = 3


@dataclass(frozen=True, eq=False)
class CrossedProductAlgebra:
    group: GroupTable
    m: int
    u: tuple[np.ndarray, ...]
    R: tuple[np.ndarray, ...]
    seed: int = 0

    @property
    def base_dim(self) -> int:
        return self.m * self.m

    @property
    def dim(self) -> int:
        return self.base_dim * self.group.order

    def action(self, g: int, x: np.ndarray) -> np.ndarray:
        """alpha_g(x) = U_g x U_g^* with U_g = u_g tensor conj(u_g)."""
        U = np.kron(self.u[g], self.u[g].conj())
        return U @ x @ U.conj().T

    def embed(self, x: np.ndarray) -> np.ndarray:
        """pi(x): block h of the diagonal is alpha_{h^-1}(x)."""
        D = self.base_dim
        image = np.zeros((self.dim, self.dim), dtype=complex)
        for h in range(self.group.order):
            image[h * D:(h + 1) * D, h * D:(h + 1) * D] = self.action(self.group.inverse[h], x)
        return image

    def block(self, X: np.ndarray, h: int, k: int) -> np.ndarray:
        D = self.base_dim
        return X[h * D:(h + 1) * D, k * D:(k + 1) * D]

    def compose(self, coefficients: dict[int, np.ndarray]) -> np.ndarray:
        """sum_g pi(x_g) R_g."""
        X = np.zeros((self.dim, self.dim), dtype=complex)
        for g, x in coefficients.items():
            X += self.embed(x) @ self.R[g]
        return X


@dataclass(frozen=True, eq=False)
class ExpansionCoefficients:
    coefficients: dict[int, np.ndarray]
    residual: float


def _cyclic_generator(group: GroupTable) -> Optional[int]:
    for g in range(group.order):
        if group.element_order(g) == group.order:
            return g
    return None


def _unitaries(group: GroupTable, m: int) -> tuple[np.ndarray, ...]:
    order = group.order
    if order == 1:
        return (np.eye(m, dtype=complex),)

    generator = _cyclic_generator(group)
    if generator is not None and m >= 2:
        omega = np.exp(2j * np.pi / order)
        u: list[Optional[np.ndarray]] = [None] * order
        power = 0
        for j in range(order):
            u[power] = np.diag(omega ** (j * np.arange(m)))
            power = group.product(power, generator)
        return tuple(u)

    if m == order:
        regular = []
        for g in range(order):
            permutation = np.zeros((m, m), dtype=complex)
            for k in range(order):
                permutation[group.product(g, k), k] = 1
            regular.append(permutation)
        return tuple(regular)

    raise ConstructionError(
        f"No faithful action of a group of order {order} on M_{m}: "
        f"use m = {order} or a cyclic group with m >= 2"
    )


def build(group: GroupTable, m: int, seed: int = 0) -> CrossedProductAlgebra:
    """
    Realize the crossed product of M_m tensor M_m^opp by G.

    Args:
        group: Finite group
        m: Size of the matrix factor
        seed: Seed recorded for later sampling

    Returns:
        CrossedProductAlgebra

    Raises:
        ConstructionError if no faithful unitary family exists for (G, m)
    """
    if m < 1:
        raise FusionInputError(f"Matrix size must be positive, got {m}")
    u = _unitaries(group, m)
    identity = np.eye(m * m, dtype=complex)
    shifts = []
    for g in range(group.order):
        shift = np.zeros((group.order, group.order))
        for k in range(group.order):
            shift[group.product(g, k), k] = 1
        shifts.append(np.kron(shift, identity))
    logger.info("Built crossed product for |G| = %d, m = %d (dimension %d)",
                group.order, m, m * m * group.order)
    return CrossedProductAlgebra(group=group, m=m, u=u, R=tuple(shifts), seed=seed)


def expand(algebra: CrossedProductAlgebra, X: np.ndarray) -> ExpansionCoefficients:
    """
    Coefficients x_g = E(X R_g^*) with X = sum_g pi(x_g) R_g.

    Block (h, k) of X is alpha_{h^-1}(x_{h k^-1}), so x_g is block (e, g^-1).

    Raises:
        OutsideAlgebraError if the reconstruction misses X by more than MEMBERSHIP_TOLERANCE
    """
    X = np.asarray(X, dtype=complex)
    if X.shape != (algebra.dim, algebra.dim):
        raise FusionInputError(f"Element has shape {X.shape}, expected {(algebra.dim, algebra.dim)}")

    group = algebra.group
    coefficients = {g: algebra.block(X, 0, group.inverse[g]).copy() for g in range(group.order)}
    residual = float(np.linalg.norm(X - algebra.compose(coefficients), 2))
    if residual > MEMBERSHIP_TOLERANCE:
        raise OutsideAlgebraError(
            f"Element lies at distance {residual:.3g} from the crossed product", distance=residual
        )
    return ExpansionCoefficients(coefficients=coefficients, residual=residual)


def expectation(algebra: CrossedProductAlgebra, X: np.ndarray) -> np.ndarray:
    """E(X) = x_e, the coefficient of R_e."""
    return expand(algebra, X).coefficients[0]


def _random_base(rng: np.random.Generator, size: int) -> np.ndarray:
    x = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    return x / np.linalg.norm(x, 2)


def _random_element(algebra: CrossedProductAlgebra, rng: np.random.Generator) -> tuple[dict[int, np.ndarray], np.ndarray]:
    coefficients = {g: _random_base(rng, algebra.base_dim) for g in range(algebra.group.order)}
    return coefficients, algebra.compose(coefficients)


def relation_residuals(algebra: CrossedProductAlgebra, samples: int = 10, seed: Optional[int] = None) -> dict[str, float]:
    """
    Operator-norm residuals of the crossed-product relations.

    covariance: R_g pi(x) = pi(alpha_g(x)) R_g on sampled x
    isometry: R_g^* R_g = 1
    multiplication: R_g R_h = R_gh
    adjoint: R_g^* = R_{g^-1}
    unit: R_e = 1
    """
    rng = np.random.default_rng(algebra.seed if seed is None else seed)
    group = algebra.group
    identity = np.eye(algebra.dim)

    def norm(M: np.ndarray) -> float:
        return float(np.linalg.norm(M, 2))

    covariance = 0.0
    for _ in range(samples):
        x = _random_base(rng, algebra.base_dim)
        for g in range(group.order):
            gap = algebra.R[g] @ algebra.embed(x) - algebra.embed(algebra.action(g, x)) @ algebra.R[g]
            covariance = max(covariance, norm(gap))

    R = algebra.R
    return {
        "covariance": covariance,
        "isometry": max(norm(R[g].conj().T @ R[g] - identity) for g in range(group.order)),
        "multiplication": max(
            norm(R[g] @ R[h] - R[group.product(g, h)])
            for g in range(group.order) for h in range(group.order)
        ),
        "adjoint": max(norm(R[g].conj().T - R[group.inverse[g]]) for g in range(group.order)),
        "unit": norm(R[0] - identity),
    }


def _margin(algebra: CrossedProductAlgebra, x: np.ndarray, lam: float) -> float:
    difference = algebra.embed(expectation(algebra, x)) - lam * x
    difference = (difference + difference.conj().T) / 2
    return float(np.min(np.linalg.eigvalsh(difference)))


def pimsner_popa_check(
    algebra: CrossedProductAlgebra,
    samples: int = 100,
    seed: Optional[int] = None,
    lam: Optional[float] = None,
) -> float:
    """
    Worst minimum eigenvalue of pi(E(x)) - lam x over random positive x = Y^* Y.

    Args:
        algebra: Crossed product
        samples: Number of random elements
        seed: Sampling seed (defaults to the algebra's seed)
        lam: Constant under test (defaults to 1/|G|)

    Returns:
        The most negative margin; at lam = 1/|G| it stays above -1e-9
    """
    if samples < 1:
        raise FusionInputError(f"Sample count must be positive, got {samples}")
    lam = 1.0 / algebra.group.order if lam is None else lam
    rng = np.random.default_rng(algebra.seed if seed is None else seed)
    worst = np.inf
    for _ in range(samples):
        _, Y = _random_element(algebra, rng)
        worst = min(worst, _margin(algebra, Y.conj().T @ Y, lam))
    return float(worst)


def sharpness_witness(algebra: CrossedProductAlgebra, lam: float) -> float:
    """
    Margin of x = S^* S with S = sum_g R_g.

    E(x) = |G| and x = |G|^2 P for the projection P onto G-invariant vectors,
    so the margin is |G| - lam |G|^2, negative for lam > 1/|G|.
    """
    total = sum(algebra.R)
    return _margin(algebra, total.conj().T @ total, lam)


def alternating_word_count(group: GroupTable, n: int) -> int:
    """Number of words (g1, ..., gn) with g1 g2^-1 g3 g4^-1 ... = e."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise FusionInputError(f"Word length must be a positive integer, got {n}")
    counts = np.ones(group.order, dtype=np.int64)
    for position in range(1, n):
        updated = np.zeros_like(counts)
        for g in range(group.order):
            for h in range(group.order):
                factor = group.inverse[h] if position % 2 else h
                updated[group.product(g, factor)] += counts[g]
        counts = updated
    return int(counts[0])


class OracleReport(Report):
    """Relation residuals, expansion and Pimsner-Popa results for one realization."""
    group: str = ""
    m: int = 1
    samples: int = 0
    worst_margin: float = 0.0
    witness_margin: Optional[float] = None


def run_oracle(
    group: GroupTable,
    m: Optional[int] = None,
    samples: int = 100,
    seed: int = 0,
    name: str = "",
) -> OracleReport:
    """
    Build the realization and run every check.

    Args:
        group: Finite group
        m: Matrix size (defaults to |G|, or 2 for the trivial group)
        samples: Random samples per sampled check
        seed: Sampling seed recorded in the report
        name: Group name for the report

    Returns:
        OracleReport
    """
    order = group.order
    m = m if m is not None else max(order, 2)
    algebra = build(group, m, seed=seed)
    rng = np.random.default_rng(seed)
    entries = []

    for relation, residual in relation_residuals(algebra, samples=min(samples, 10), seed=seed).items():
        entries.append(CheckResult(
            name=f"relation_{relation}",
            passed=residual < RELATION_TOLERANCE,
            residual=residual,
        ))

    roundtrip, bimodule, positivity = 0.0, 0.0, 0.0
    for _ in range(samples):
        coefficients, X = _random_element(algebra, rng)
        expansion = expand(algebra, X)
        roundtrip = max(roundtrip, max(
            float(np.linalg.norm(expansion.coefficients[g] - coefficients[g], 2)) for g in coefficients
        ))
        a, b = _random_base(rng, algebra.base_dim), _random_base(rng, algebra.base_dim)
        lhs = expectation(algebra, algebra.embed(a) @ X @ algebra.embed(b))
        bimodule = max(bimodule, float(np.linalg.norm(lhs - a @ expansion.coefficients[0] @ b, 2)))
        positive = expectation(algebra, X.conj().T @ X)
        positivity = min(positivity, float(np.min(np.linalg.eigvalsh((positive + positive.conj().T) / 2))))

    entries.append(CheckResult(
        name="expansion_roundtrip", passed=roundtrip < EXPANSION_TOLERANCE, residual=roundtrip,
        detail="expand(sum_g x_g R_g) recovers x_g",
    ))
    entries.append(CheckResult(
        name="expectation_bimodule", passed=bimodule < RELATION_TOLERANCE, residual=bimodule,
        detail="E(a X b) = a E(X) b",
    ))
    entries.append(CheckResult(
        name="expectation_positive", passed=positivity >= PSD_FLOOR, residual=-positivity,
        detail="E(X^* X) >= 0",
    ))

    worst = pimsner_popa_check(algebra, samples=samples, seed=seed)
    entries.append(CheckResult(
        name="pimsner_popa", passed=worst >= PSD_FLOOR, lhs=worst, rhs=PSD_FLOOR,
        detail=f"E(x) >= x / {order}",
    ))

    witness = None
    if order > 1:
        witness = sharpness_witness(algebra, 2.0 / order)
        entries.append(CheckResult(
            name="pimsner_popa_sharpness", passed=witness < PSD_FLOOR, lhs=witness, rhs=0.0,
            detail=f"E(x) >= 2x / {order} fails on x = (sum_g R_g)^* (sum_g R_g)",
        ))

    words = alternating_word_count(group, ALTERNATING_WORD_LENGTH)
    pointed = FusionRing.from_group(group)
    multiplicities = sum(
        multiplicity for _, multiplicity in multi_interval.iterated_lr_decomposition(pointed, ALTERNATING_WORD_LENGTH)
    )
    entries.append(CheckResult(
        name="alternating_words",
        passed=words == order ** (ALTERNATING_WORD_LENGTH - 1) == multiplicities,
        lhs=float(words),
        rhs=float(order ** (ALTERNATING_WORD_LENGTH - 1)),
        detail="words with alternating product e number |G|^(n-1)",
    ))

    report = OracleReport.from_entries(
        "oracle",
        name or f"group of order {order}",
        entries,
        seed=seed,
        group=name,
        m=m,
        samples=samples,
        worst_margin=worst,
        witness_margin=witness,
    )
    logger.info("Oracle finished for %s: %s", report.subject, "pass" if report.passed else "fail")
    return report
