"""Fusion rings of rational sector systems: validation, products, dimensions, grading."""

import logging
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from src.algebra.errors import FusionInputError, InconsistencyError, NumericError
from src.algebra.groups import GroupTable
from src.algebra.reports import CheckResult, Report

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
POWER_ITERATION_TOLERANCE = 1e-12
POWER_ITERATION_MAX_STEPS = 10000

LabelRef = Union[int, str]
Combination = Mapping[LabelRef, int]


@dataclass(frozen=True, eq=False)
class FusionRing:
    """
    A finite fusion ring. Label 0 is the identity sector.

    The tensor is stored sparsely: tensor[(i, j, k)] = N_{ij}^k, absent keys are 0.
    """
    labels: tuple[str, ...]
    dual: tuple[int, ...]
    tensor: Mapping[tuple[int, int, int], int]

    @classmethod
    def build(
        cls,
        labels: Sequence[str],
        dual: Sequence[int],
        entries: Iterable[Sequence[int]],
    ) -> "FusionRing":
        """
        Build a ring from explicit (i, j, k, multiplicity) entries.

        Unit entries N_{0j}^j and N_{i0}^i are implied and inserted here.

        Args:
            labels: Sector names, identity first
            dual: Index of the conjugate sector for each label
            entries: Iterable of (i, j, k, multiplicity)

        Returns:
            FusionRing

        Raises:
            FusionInputError on duplicate labels, out-of-range indices, negative or
            non-integral multiplicities, or entries contradicting the unit
        """
        names = tuple(str(label) for label in labels)
        if not names:
            raise FusionInputError("A fusion ring needs at least one label")
        if len(set(names)) != len(names):
            duplicates = sorted({name for name in names if names.count(name) > 1})
            raise FusionInputError(f"Duplicate labels: {duplicates}")

        size = len(names)
        conjugates = tuple(int(x) for x in dual)
        if len(conjugates) != size:
            raise FusionInputError(f"Dual has {len(conjugates)} entries for {size} labels")
        if any(not 0 <= x < size for x in conjugates):
            raise FusionInputError(f"Dual out of range: {list(conjugates)}")

        explicit: dict[tuple[int, int, int], int] = {}
        for entry in entries:
            if len(entry) != 4:
                raise FusionInputError(f"Tensor entry must be [i, j, k, mult], got {entry}")
            i, j, k, mult = entry
            if any(not isinstance(x, (int, np.integer)) or isinstance(x, bool) for x in (i, j, k, mult)):
                raise FusionInputError(f"Tensor entry must contain integers, got {entry}")
            if any(not 0 <= x < size for x in (i, j, k)):
                raise FusionInputError(f"Tensor entry index out of range: {entry}")
            if mult < 0:
                raise FusionInputError(f"Negative multiplicity in entry {entry}")
            key = (int(i), int(j), int(k))
            if key in explicit and explicit[key] != mult:
                raise FusionInputError(f"Conflicting entries for N_{key}")
            explicit[key] = int(mult)

        for (i, j, k), mult in explicit.items():
            if i == 0 and mult != int(j == k):
                raise FusionInputError(f"Entry ({i}, {j}, {k}, {mult}) contradicts the unit")
            if j == 0 and mult != int(i == k):
                raise FusionInputError(f"Entry ({i}, {j}, {k}, {mult}) contradicts the unit")

        tensor = {key: mult for key, mult in explicit.items() if mult}
        for x in range(size):
            tensor[(0, x, x)] = 1
            tensor[(x, 0, x)] = 1

        return cls(labels=names, dual=conjugates, tensor=MappingProxyType(dict(sorted(tensor.items()))))

    @classmethod
    def from_array(cls, labels: Sequence[str], array: np.ndarray) -> "FusionRing":
        """Build a ring from a dense (n, n, n) tensor, deriving the dual from N_{ij}^0."""
        array = np.asarray(array)
        size = len(labels)
        if array.shape != (size, size, size):
            raise FusionInputError(f"Tensor shape {array.shape} does not match {size} labels")

        dual = []
        for i in range(size):
            partners = np.nonzero(array[i, :, 0])[0]
            if len(partners) != 1:
                raise FusionInputError(f"Label {labels[i]} has no unique conjugate")
            dual.append(int(partners[0]))

        entries = [(int(i), int(j), int(k), int(array[i, j, k])) for i, j, k in np.argwhere(array)]
        return cls.build(labels, dual, entries)

    @classmethod
    def from_group(cls, group: GroupTable) -> "FusionRing":
        """The pointed ring of a finite group: N_{gh}^k = delta_{k, gh}."""
        entries = [(g, h, group.product(g, h), 1) for g in range(group.order) for h in range(group.order)]
        return cls.build(group.elements, group.inverse, entries)

    @property
    def size(self) -> int:
        return len(self.labels)

    def N(self, i: int, j: int, k: int) -> int:
        return self.tensor.get((i, j, k), 0)

    def resolve(self, ref: LabelRef) -> int:
        """Map a label name or index to an index."""
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            if not 0 <= ref < self.size:
                raise FusionInputError(f"Label index {ref} out of range")
            return int(ref)
        try:
            return self.labels.index(str(ref))
        except ValueError:
            raise FusionInputError(f"Unknown label '{ref}'. Available: {list(self.labels)}")

    @cached_property
    def array(self) -> np.ndarray:
        """Dense tensor with array[i, j, k] = N_{ij}^k."""
        dense = np.zeros((self.size,) * 3, dtype=np.int64)
        for (i, j, k), mult in self.tensor.items():
            dense[i, j, k] = mult
        dense.setflags(write=False)
        return dense

    def fusion_matrix(self, i: LabelRef) -> np.ndarray:
        """(N_i)_{jk} = N_{ij}^k."""
        return self.array[self.resolve(i)]

    @cached_property
    def perron_frobenius(self) -> tuple[float, ...]:
        return _perron_frobenius(self.array)


@dataclass(frozen=True)
class DimensionVector:
    """Quantum dimensions d(rho_i), one per label."""
    d: tuple[float, ...]
    tolerance: float = DEFAULT_TOLERANCE

    def residual(self, ring: FusionRing) -> float:
        """max |sum_k N_{ij}^k d_k - d_i d_j| over all i, j."""
        values = np.array(self.d)
        lhs = ring.array.astype(float) @ values
        return float(np.max(np.abs(lhs - np.outer(values, values))))

    def is_consistent(self, ring: FusionRing) -> bool:
        values = np.array(self.d)
        return (
            abs(float(values[0]) - 1) < self.tolerance
            and bool(np.all(values > 1 - self.tolerance))
            and bool(np.allclose(values, values[list(ring.dual)], atol=self.tolerance, rtol=0))
            and self.residual(ring) < self.tolerance
        )


class ValidationReport(Report):
    """Report with one entry per fusion-ring axiom."""

    @property
    def valid(self) -> bool:
        return self.passed


def _label_tuple(ring: FusionRing, indices: Iterable[int]) -> list[str]:
    return [ring.labels[int(x)] for x in indices]


def validate(ring: FusionRing) -> ValidationReport:
    """
    Check every fusion-ring axiom.

    Args:
        ring: Ring to check

    Returns:
        ValidationReport with entries dual_involution, unit, conjugation,
        associativity and frobenius
    """
    n = ring.size
    A = ring.array
    dual = np.array(ring.dual)
    entries = []

    bad = [i for i in range(n) if dual[dual[i]] != i]
    involution_ok = not bad and int(dual[0]) == 0
    entries.append(CheckResult(
        name="dual_involution",
        passed=involution_ok,
        detail="dual is an involution fixing 0" if involution_ok else "dual is not an involution fixing 0",
        residual=float(len(bad) + int(dual[0] != 0)),
        counterexample=_label_tuple(ring, bad[:1]) if bad else None,
    ))

    identity = np.eye(n, dtype=np.int64)
    unit_diff = np.concatenate([(A[0] - identity).ravel(), (A[:, 0, :] - identity).ravel()])
    entries.append(CheckResult(
        name="unit",
        passed=not unit_diff.any(),
        detail="N_0j^k = N_j0^k = delta_jk",
        residual=float(np.abs(unit_diff).max()),
    ))

    expected = np.zeros((n, n), dtype=np.int64)
    expected[np.arange(n), dual] = 1
    conj_diff = A[:, :, 0] - expected
    failing = np.argwhere(conj_diff)
    entries.append(CheckResult(
        name="conjugation",
        passed=len(failing) == 0,
        detail="N_ij^0 = delta_{j, dual(i)}",
        residual=float(np.abs(conj_diff).max()),
        counterexample=_label_tuple(ring, failing[0]) if len(failing) else None,
    ))

    worst, first_failure = 0.0, None
    flat = A.reshape(n, n * n).astype(float)
    for i in range(n):
        # left[j, k, l] = sum_m N_ij^m N_mk^l ; right[j, k, l] = sum_m N_jk^m N_im^l
        left = (A[i].astype(float) @ flat).reshape(n, n, n)
        right = A.astype(float) @ A[i].astype(float)
        diff = np.abs(left - right)
        worst = max(worst, float(diff.max()))
        if first_failure is None and diff.max() > 0:
            j, k, l = np.argwhere(diff > 0)[0]
            first_failure = (i, j, k, l)
    entries.append(CheckResult(
        name="associativity",
        passed=first_failure is None,
        detail="sum_m N_ij^m N_mk^l = sum_m N_jk^m N_im^l",
        residual=worst,
        counterexample=_label_tuple(ring, first_failure) if first_failure else None,
    ))

    twisted_first = A[dual].transpose(0, 2, 1)           # N_{dual(i) k}^j at (i, j, k)
    twisted_second = A[:, dual, :].transpose(2, 1, 0)    # N_{k dual(j)}^i at (i, j, k)
    frob_diff = np.maximum(np.abs(A - twisted_first), np.abs(A - twisted_second))
    failing = np.argwhere(frob_diff)
    entries.append(CheckResult(
        name="frobenius",
        passed=len(failing) == 0,
        detail="N_ij^k = N_{dual(i) k}^j = N_{k dual(j)}^i",
        residual=float(frob_diff.max()),
        counterexample=_label_tuple(ring, failing[0]) if len(failing) else None,
    ))

    return ValidationReport.from_entries("validate", ",".join(ring.labels), entries)


def _coefficients(ring: FusionRing, combination: Combination) -> np.ndarray:
    vector = np.zeros(ring.size, dtype=np.int64)
    for ref, coefficient in combination.items():
        if int(coefficient) != coefficient or coefficient < 0:
            raise FusionInputError(f"Coefficient of {ref} must be a nonnegative integer, got {coefficient}")
        vector[ring.resolve(ref)] += int(coefficient)
    return vector


def fuse(ring: FusionRing, a: Combination, b: Combination) -> dict[str, int]:
    """
    Multiply two formal nonnegative combinations of labels.

    Args:
        ring: Fusion ring
        a: Mapping label -> coefficient
        b: Mapping label -> coefficient

    Returns:
        Nonzero coefficients of a*b keyed by label, in label order
    """
    product = np.einsum("i,j,ijk->k", _coefficients(ring, a), _coefficients(ring, b), ring.array)
    return {ring.labels[k]: int(product[k]) for k in range(ring.size) if product[k]}


def _perron_frobenius(array: np.ndarray) -> tuple[float, ...]:
    # The regular element sum_i N_i has strictly positive entries, so its
    # Perron-Frobenius vector is the common dimension vector of all N_i.
    size = array.shape[0]
    regular = array.sum(axis=0).astype(float)
    vector = np.ones(size)
    eigenvalue = 0.0
    for step in range(1, POWER_ITERATION_MAX_STEPS + 1):
        image = regular @ vector
        estimate = float(np.linalg.norm(image) / np.linalg.norm(vector))
        image = image / image[0]
        converged = (
            abs(estimate - eigenvalue) <= POWER_ITERATION_TOLERANCE * estimate
            and float(np.max(np.abs(image - vector))) <= POWER_ITERATION_TOLERANCE * float(np.max(image))
        )
        vector, eigenvalue = image, estimate
        if converged:
            return tuple(float(x) for x in vector)
    raise NumericError(
        f"Power iteration did not converge after {POWER_ITERATION_MAX_STEPS} iterations",
        iterations=POWER_ITERATION_MAX_STEPS,
    )


def dims(ring: FusionRing, tolerance: float = DEFAULT_TOLERANCE) -> DimensionVector:
    """
    Quantum dimensions as the Perron-Frobenius eigenvalues of the fusion matrices.

    Args:
        ring: Valid fusion ring
        tolerance: Tolerance recorded on the result

    Returns:
        DimensionVector with d_0 = 1
    """
    vector = DimensionVector(d=ring.perron_frobenius, tolerance=tolerance)
    if not vector.is_consistent(ring):
        logger.warning("Dimension vector of %s has residual %.3g", list(ring.labels), vector.residual(ring))
    return vector


def global_index(ring: FusionRing) -> float:
    """I_global = sum_i d_i^2."""
    return float(sum(d * d for d in ring.perron_frobenius))


@dataclass(frozen=True)
class Grading:
    """Universal grading: a group of components and the component of every label."""
    group: GroupTable
    component: tuple[int, ...]

    def members(self, element: int) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.component) if c == element)


def grading(ring: FusionRing) -> Grading:
    """
    Compute the universal grading.

    The identity component is the adjoint subring generated by all i * dual(i);
    every other component is a coset i * (identity component).

    Args:
        ring: Valid fusion ring

    Returns:
        Grading with the identity component as group element 0
    """
    A = ring.array
    n = ring.size

    adjoint = {0}
    for i in range(n):
        adjoint.update(int(k) for k in np.nonzero(A[i, ring.dual[i]])[0])
    while True:
        grown = set(adjoint)
        for a in adjoint:
            for b in adjoint:
                grown.update(int(k) for k in np.nonzero(A[a, b])[0])
        if grown == adjoint:
            break
        adjoint = grown

    component = [-1] * n
    representatives = []
    for i in range(n):
        if component[i] >= 0:
            continue
        coset = set()
        for a in adjoint:
            coset.update(int(k) for k in np.nonzero(A[i, a])[0])
        for k in coset:
            if component[k] >= 0:
                raise InconsistencyError(f"Label {ring.labels[k]} lies in two grading components")
            component[k] = len(representatives)
        representatives.append(i)

    order = len(representatives)
    table = [[-1] * order for _ in range(order)]
    for i, j, k in np.argwhere(A):
        ci, cj, ck = component[i], component[j], component[k]
        if table[ci][cj] not in (-1, ck):
            raise InconsistencyError(
                f"Fusion of {ring.labels[i]} and {ring.labels[j]} is not homogeneous"
            )
        table[ci][cj] = ck

    names = [ring.labels[r] for r in representatives]
    return Grading(group=GroupTable.build(table, names), component=tuple(component))


def relabel(ring: FusionRing, permutation: Sequence[int]) -> FusionRing:
    """
    Apply a label permutation old index -> new index fixing 0.

    Args:
        ring: Fusion ring
        permutation: permutation[i] is the new index of label i

    Returns:
        Relabeled FusionRing
    """
    perm = [int(x) for x in permutation]
    if sorted(perm) != list(range(ring.size)) or perm[0] != 0:
        raise FusionInputError("Relabeling must be a permutation fixing 0")

    labels = [""] * ring.size
    dual = [0] * ring.size
    for i, p in enumerate(perm):
        labels[p] = ring.labels[i]
        dual[p] = perm[ring.dual[i]]
    entries = [(perm[i], perm[j], perm[k], m) for (i, j, k), m in ring.tensor.items()]
    return FusionRing.build(labels, dual, entries)


def find_isomorphism(first: FusionRing, second: FusionRing) -> Optional[tuple[int, ...]]:
    """
    Search for a label bijection fixing 0 that carries one tensor onto the other.

    Args:
        first: Fusion ring
        second: Fusion ring

    Returns:
        Tuple mapping indices of first to indices of second, or None
    """
    if first.size != second.size:
        return None

    n = first.size
    A, B = first.array, second.array
    d_first = np.round(np.array(first.perron_frobenius), 8)
    d_second = np.round(np.array(second.perron_frobenius), 8)
    if sorted(d_first) != sorted(d_second):
        return None

    mapping = [-1] * n
    mapping[0] = 0
    used = {0}

    def consistent(i: int) -> bool:
        assigned = [x for x in range(n) if mapping[x] >= 0]
        image = mapping[i]
        partner = first.dual[i]
        if mapping[partner] >= 0 and mapping[partner] != second.dual[image]:
            return False
        for x in assigned:
            for y in assigned:
                for z in (i,):
                    for a, b, c in ((x, y, z), (x, z, y), (z, x, y)):
                        if A[a, b, c] != B[mapping[a], mapping[b], mapping[c]]:
                            return False
        return True

    def extend(i: int) -> bool:
        if i == n:
            return True
        for candidate in range(1, n):
            if candidate in used or d_first[i] != d_second[candidate]:
                continue
            mapping[i] = candidate
            used.add(candidate)
            if consistent(i) and extend(i + 1):
                return True
            used.discard(candidate)
            mapping[i] = -1
        return False

    if not np.array_equal(A[0], B[0]) or not extend(1):
        return None
    return tuple(mapping)
