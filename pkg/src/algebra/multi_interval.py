"""Index identities for multi-interval inclusions and even-part ratios."""

import logging
from typing import Iterator, Sequence

import numpy as np

from src.algebra import fusion_ring
from src.algebra.errors import FusionInputError
from src.algebra.fusion_ring import FusionRing, LabelRef
from src.algebra.reports import CheckResult, Report, check

logger = logging.getLogger(__name__)

WORD_SUM_LIMIT = 10 ** 7
DIMENSION_IDENTITY_TOLERANCE = 1e-6


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise FusionInputError(message)


def _require_count(n: int) -> None:
    _require(isinstance(n, (int, np.integer)) and not isinstance(n, bool) and n >= 1,
             f"Interval count must be a positive integer, got {n}")


def mu_n(mu2: float, n: int) -> float:
    """Index of the n-interval inclusion: mu_2^(n-1)."""
    _require(mu2 >= 1, f"mu_2 must be at least 1, got {mu2}")
    _require_count(n)
    return float(mu2) ** (n - 1)


def mu_n_rho(mu2: float, d_rho: float, n: int) -> float:
    """Index in the sector rho: d(rho)^2 mu_2^(n-1)."""
    _require(d_rho >= 1, f"Sector dimension must be at least 1, got {d_rho}")
    return float(d_rho) ** 2 * mu_n(mu2, n)


def _word_labels(ring: FusionRing, word: Sequence[LabelRef], alternating: bool) -> list[int]:
    _require(len(word) > 0, "Word must contain at least one label")
    indices = [ring.resolve(x) for x in word]
    if alternating:
        indices = [ring.dual[x] if position % 2 else x for position, x in enumerate(indices)]
    return indices


def canonical_multiplicities(ring: FusionRing, word: Sequence[LabelRef], alternating: bool = False) -> int:
    """
    Multiplicity of the identity in rho_{i1} rho_{i2} ... rho_{in}.

    With alternating=True every second factor is conjugated: rho_{i1} conj(rho_{i2}) rho_{i3} ...

    Args:
        ring: Valid fusion ring
        word: Labels i1..in
        alternating: Conjugate the factors at even positions (1-based)

    Returns:
        Coefficient of label 0 in the product
    """
    indices = _word_labels(ring, word, alternating)
    A = ring.array
    vector = np.zeros(ring.size, dtype=np.int64)
    vector[indices[0]] = 1
    for label in indices[1:]:
        vector = vector @ A[:, label, :]
    return int(vector[0])


def _guard(ring: FusionRing, n: int) -> None:
    words = ring.size ** n
    if words > WORD_SUM_LIMIT:
        raise FusionInputError(
            f"{ring.size}^{n} = {words} words exceeds the limit of {WORD_SUM_LIMIT}; "
            f"use n <= {int(np.log(WORD_SUM_LIMIT) / np.log(max(ring.size, 2)))}"
        )


def dimension_sum(ring: FusionRing, n: int) -> float:
    """sum over words of N^0_{i1..in} d_{i1}...d_{in}, by a left fold over dimension-weighted fusion."""
    _require_count(n)
    _guard(ring, n)
    d = np.array(ring.perron_frobenius)
    weighted = np.einsum("i,mik->mk", d, ring.array.astype(float))
    vector = d.copy()
    for _ in range(n - 1):
        vector = vector @ weighted
    return float(vector[0])


def dimension_identity_check(ring: FusionRing, n: int) -> float:
    """
    Residual of sum_words N^0 prod d = I_global^(n-1).

    Args:
        ring: Valid fusion ring
        n: Number of intervals, with (#labels)^n <= WORD_SUM_LIMIT

    Returns:
        Absolute residual; it should stay below 1e-6 * I_global^(n-1)

    Raises:
        FusionInputError when the word count exceeds the limit
    """
    expected = fusion_ring.global_index(ring) ** (n - 1)
    return abs(dimension_sum(ring, n) - expected)


def extension_index(subnet_index: float, mu_B: float) -> float:
    """mu_A = I^2 mu_B for a finite-index subnet A of B."""
    _require(subnet_index >= 1, f"Subnet index must be at least 1, got {subnet_index}")
    _require(mu_B >= 1, f"mu_B must be at least 1, got {mu_B}")
    return float(subnet_index) ** 2 * float(mu_B)


def lr_net_mu(ring: FusionRing, mu_A: float) -> float:
    """mu_B = mu_A^2 / I_global^2 for the Longo-Rehren net B of A."""
    _require(mu_A >= 1, f"mu_A must be at least 1, got {mu_A}")
    return float(mu_A) ** 2 / fusion_ring.global_index(ring) ** 2


def even_part_ratio(ring: FusionRing) -> float:
    """I_global divided by the global index of the identity grading component."""
    grading = fusion_ring.grading(ring)
    if grading.group.order == 1:
        logger.info("Grading of %s is trivial; even-part ratio is 1", list(ring.labels))
        return 1.0
    d = ring.perron_frobenius
    even = sum(d[i] ** 2 for i in grading.members(0))
    return fusion_ring.global_index(ring) / even


def _words(ring: FusionRing, n: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    A = ring.array
    stack = [((i,), np.eye(ring.size, dtype=np.int64)[i]) for i in reversed(range(ring.size))]
    while stack:
        word, vector = stack.pop()
        if len(word) == n:
            yield word, vector
            continue
        position = len(word)
        for label in reversed(range(ring.size)):
            factor = ring.dual[label] if position % 2 else label
            stack.append((word + (label,), vector @ A[:, factor, :]))


def iterated_lr_decomposition(ring: FusionRing, n: int) -> list[tuple[tuple[str, ...], int]]:
    """
    Sectors of the restricted canonical endomorphism of the n-th iterated LR inclusion.

    The word (i1..in) appears with multiplicity <id, rho_{i1} conj(rho_{i2}) rho_{i3} ...>.

    Returns:
        (word as labels, multiplicity) for every word with nonzero multiplicity, in lexicographic order
    """
    _require_count(n)
    _guard(ring, n)
    return [
        (tuple(ring.labels[i] for i in word), int(vector[0]))
        for word, vector in _words(ring, n)
        if vector[0]
    ]


class IndexLedger(Report):
    """One entry per index identity for a ring and an interval count."""
    mu2: float = 1.0
    n: int = 1
    mu_n: float = 1.0
    global_index: float = 1.0


def build_ledger(ring: FusionRing, n: int, tolerance: float = fusion_ring.DEFAULT_TOLERANCE) -> IndexLedger:
    """
    Evaluate every index identity for the LR inclusion of a ring at n intervals.

    Args:
        ring: Valid fusion ring
        n: Interval count
        tolerance: Tolerance for identities of order one

    Returns:
        IndexLedger
    """
    _require_count(n)
    index = fusion_ring.global_index(ring)
    mu2 = index
    expected = mu_n(mu2, n)
    scale = max(1.0, expected)
    entries = [
        check(
            "dimension_identity",
            dimension_sum(ring, n),
            expected,
            DIMENSION_IDENTITY_TOLERANCE * scale,
            detail="sum_words N^0 prod d = I_global^(n-1)",
        ),
        check(
            "exponent_additivity",
            mu_n(mu2, n + 1),
            mu_n(mu2, n) * mu_n(mu2, 2),
            tolerance * max(scale * mu2, 1.0),
            detail="mu_(a+b-1) = mu_a mu_b",
        ),
        check(
            "lr_net_triviality",
            lr_net_mu(ring, index),
            1.0,
            tolerance,
            detail="mu_B = mu_A^2 / I_global^2 = 1",
        ),
    ]

    total = sum(d * d for d in ring.perron_frobenius)
    entries.append(CheckResult(
        name="finiteness",
        passed=total <= mu2 + tolerance,
        detail="sum_i d_i^2 <= mu_A",
        lhs=total,
        rhs=mu2,
        residual=max(0.0, total - mu2),
    ))

    grading = fusion_ring.grading(ring)
    entries.append(check(
        "even_part_ratio",
        even_part_ratio(ring),
        float(grading.group.order),
        tolerance,
        detail="I_global / I_even = order of the universal grading group",
    ))

    if ring.size ** n <= WORD_SUM_LIMIT // 100:
        decomposition = iterated_lr_decomposition(ring, n)
        d = dict(zip(ring.labels, ring.perron_frobenius))
        weighted = sum(mult * float(np.prod([d[x] for x in word])) for word, mult in decomposition)
        entries.append(check(
            "iterated_decomposition",
            weighted,
            expected,
            DIMENSION_IDENTITY_TOLERANCE * scale,
            detail="dimension of the restricted canonical endomorphism is I_global^(n-1)",
        ))

    return IndexLedger.from_entries(
        "multi",
        ",".join(ring.labels),
        entries,
        mu2=mu2,
        n=n,
        mu_n=expected,
        global_index=index,
    )
