"""Verlinde matrices S and T: the Verlinde formula, modularity checks, pointed data."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.algebra import fusion_ring
from src.algebra.errors import FusionInputError, InconsistencyError, ModularityError
from src.algebra.fusion_ring import DimensionVector, FusionRing
from src.algebra.groups import GroupTable
from src.algebra.reports import CheckResult, Report

logger = logging.getLogger(__name__)

VERLINDE_TOLERANCE = 1e-6
DIMENSION_AGREEMENT_TOLERANCE = 1e-8
ZERO_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class ModularData:
    """S and T over the labels of a fusion ring; T is stored as its diagonal."""
    ring: FusionRing
    S: np.ndarray
    T: np.ndarray

    @classmethod
    def build(cls, ring: FusionRing, S: Sequence, T: Sequence) -> "ModularData":
        """
        Wrap S and T after checking their shapes against the ring.

        Args:
            ring: Fusion ring sharing the label order
            S: (n, n) complex matrix
            T: Length-n diagonal, or an (n, n) diagonal matrix

        Raises:
            FusionInputError on shape mismatch
        """
        n = ring.size
        s_matrix = np.array(S, dtype=complex)
        t_vector = np.array(T, dtype=complex)
        if t_vector.ndim == 2 and t_vector.shape == (n, n):
            t_vector = np.diag(t_vector).copy()
        if s_matrix.shape != (n, n):
            raise FusionInputError(f"S has shape {s_matrix.shape}, expected {(n, n)}")
        if t_vector.shape != (n,):
            raise FusionInputError(f"T has shape {t_vector.shape}, expected {(n,)}")
        s_matrix.setflags(write=False)
        t_vector.setflags(write=False)
        return cls(ring=ring, S=s_matrix, T=t_vector)

    @property
    def T_matrix(self) -> np.ndarray:
        return np.diag(self.T)


class ModularityReport(Report):
    """Residuals of the modular-data identities plus the projective phase of (ST)^3."""

    @property
    def phase(self) -> Optional[complex]:
        value = self.data.get("phase")
        return complex(*value) if value is not None else None


def _raw_verlinde(S: np.ndarray) -> np.ndarray:
    S = np.asarray(S, dtype=complex)
    first_row = S[0]
    if np.min(np.abs(first_row)) < ZERO_THRESHOLD:
        m = int(np.argmin(np.abs(first_row)))
        raise ModularityError(f"S_0{m} vanishes; the Verlinde formula is undefined")
    unitarity = float(np.max(np.abs(S @ S.conj().T - np.eye(len(S)))))
    if unitarity > VERLINDE_TOLERANCE:
        raise ModularityError(f"S is not unitary (residual {unitarity:.3g})")
    return np.einsum("im,jm,km,m->ijk", S, S, S.conj(), 1 / first_row)


def verlinde_tensor(S: np.ndarray, tolerance: float = VERLINDE_TOLERANCE) -> np.ndarray:
    """
    Evaluate N_ij^k = sum_m S_im S_jm conj(S_km) / S_0m and round it.

    Args:
        S: Unitary (n, n) matrix with nonvanishing first row
        tolerance: Maximum distance of each entry from a nonnegative integer

    Returns:
        Integer array of shape (n, n, n)

    Raises:
        ModularityError on failed preconditions or non-integral entries
    """
    raw = _raw_verlinde(S)
    rounded = np.rint(raw.real)
    distance = np.abs(raw - rounded)
    worst = tuple(int(x) for x in np.unravel_index(np.argmax(distance), distance.shape))
    if distance[worst] > tolerance:
        raise ModularityError(
            f"Verlinde entry N{worst} = {raw[worst]:.6g} is not integral", worst=worst
        )
    if rounded.min() < 0:
        negative = tuple(int(x) for x in np.argwhere(rounded < 0)[0])
        raise ModularityError(f"Verlinde entry N{negative} is negative", worst=negative)
    return rounded.astype(np.int64)


def verlinde(md: ModularData) -> np.ndarray:
    """Fusion tensor recovered from md.S by the Verlinde formula."""
    return verlinde_tensor(md.S)


def check_modularity(md: ModularData, tolerance: float = fusion_ring.DEFAULT_TOLERANCE) -> ModularityReport:
    """
    Check unitarity, symmetry, Verlinde integrality, S^2 = C and (ST)^3 = lambda S^2.

    Args:
        md: Modular data
        tolerance: Tolerance for every residual except Verlinde integrality

    Returns:
        ModularityReport; the phase lambda is in data["phase"] as [re, im]
    """
    ring = md.ring
    n = ring.size
    S, T = md.S, md.T
    entries = []

    unitarity = float(np.max(np.abs(S @ S.conj().T - np.eye(n))))
    entries.append(CheckResult(
        name="unitarity", passed=unitarity < tolerance, detail="S S^* = 1", residual=unitarity,
    ))

    symmetry = float(np.max(np.abs(S - S.T)))
    entries.append(CheckResult(
        name="symmetry", passed=symmetry < tolerance, detail="S = S^t", residual=symmetry,
    ))

    first_row = S[0]
    positivity = float(max(np.max(np.abs(first_row.imag)), max(0.0, -float(np.min(first_row.real)))))
    entries.append(CheckResult(
        name="first_row_positive",
        passed=positivity < tolerance and float(np.min(first_row.real)) > ZERO_THRESHOLD,
        detail="S_0i real and positive",
        residual=positivity,
    ))

    modulus = float(np.max(np.abs(np.abs(T) - 1)))
    entries.append(CheckResult(
        name="t_unit_modulus", passed=modulus < tolerance, detail="|T_i| = 1", residual=modulus,
    ))

    try:
        raw = _raw_verlinde(S)
        integrality = float(np.max(np.abs(raw - np.rint(raw.real))))
        recovered = np.rint(raw.real).astype(np.int64)
        entries.append(CheckResult(
            name="verlinde_integrality",
            passed=integrality < VERLINDE_TOLERANCE and int(recovered.min()) >= 0,
            detail="Verlinde entries are nonnegative integers",
            residual=integrality,
        ))
        disagreement = np.argwhere(recovered != ring.array)
        entries.append(CheckResult(
            name="verlinde_agreement",
            passed=len(disagreement) == 0,
            detail="Verlinde tensor equals the ring tensor",
            residual=float(np.max(np.abs(recovered - ring.array))),
            counterexample=[ring.labels[int(x)] for x in disagreement[0]] if len(disagreement) else None,
        ))
    except ModularityError as e:
        entries.append(CheckResult(name="verlinde_integrality", passed=False, detail=str(e)))
        entries.append(CheckResult(name="verlinde_agreement", passed=False, detail=str(e)))

    charge = np.zeros((n, n))
    charge[np.arange(n), list(ring.dual)] = 1
    square = S @ S
    conjugation = float(np.max(np.abs(square - charge)))
    entries.append(CheckResult(
        name="charge_conjugation",
        passed=conjugation < tolerance,
        detail="S^2 = C with C_{i, dual(i)} = 1",
        residual=conjugation,
    ))

    cube = np.linalg.matrix_power(S @ np.diag(T), 3)
    norm = float(np.vdot(square, square).real)
    phase = complex(np.vdot(square, cube) / norm) if norm > ZERO_THRESHOLD else 0j
    projective = float(max(np.max(np.abs(cube - phase * square)), abs(abs(phase) - 1)))
    entries.append(CheckResult(
        name="modular_relation",
        passed=projective < tolerance,
        detail=f"(ST)^3 = lambda S^2 with lambda = {phase.real:.6g}{phase.imag:+.6g}i",
        residual=projective,
    ))

    index = fusion_ring.global_index(ring)
    entries.append(CheckResult(
        name="first_row_identity",
        passed=bool(abs(index * abs(S[0, 0]) ** 2 - 1) < tolerance),
        detail="I_global |S_00|^2 = 1",
        lhs=index * abs(S[0, 0]) ** 2,
        rhs=1.0,
        residual=abs(index * abs(S[0, 0]) ** 2 - 1),
    ))

    report = ModularityReport.from_entries(
        "modular", ",".join(ring.labels), entries, data={"phase": [phase.real, phase.imag]}
    )
    if not report.passed:
        failed = [entry.name for entry in report.entries if not entry.passed]
        logger.info("Modularity checks failed: %s", failed)
    return report


def dims_from_S(md: ModularData) -> DimensionVector:
    """
    d_i = S_0i / S_00, cross-checked against the Perron-Frobenius dimensions.

    Raises:
        ModularityError if S_00 vanishes
        InconsistencyError if the two dimension vectors disagree
    """
    if abs(md.S[0, 0]) < ZERO_THRESHOLD:
        raise ModularityError("S_00 vanishes")

    ratios = md.S[0] / md.S[0, 0]
    values = tuple(float(x) for x in ratios.real)
    expected = md.ring.perron_frobenius
    gap = max(
        float(np.max(np.abs(ratios.imag))),
        float(np.max(np.abs(np.array(values) - np.array(expected)))),
    )
    if gap > DIMENSION_AGREEMENT_TOLERANCE:
        raise InconsistencyError(
            f"Dimensions from S disagree with Perron-Frobenius dimensions (gap {gap:.3g})",
            expected=expected,
            actual=values,
        )
    return DimensionVector(d=values, tolerance=DIMENSION_AGREEMENT_TOLERANCE)


def pointed_modular_data(ring: FusionRing, group: GroupTable, braiding: Sequence) -> ModularData:
    """
    Modular data of a pointed ring from braiding phases b(g, h).

    S_gh = |G|^{-1/2} conj(b(g, h) b(h, g)) and T_g = b(g, g).

    Args:
        ring: Pointed ring of the group (labels in group element order)
        group: Group table
        braiding: (|G|, |G|) matrix of unit-modulus phases with b(0, g) = b(g, 0) = 1

    Returns:
        ModularData (not necessarily modular; run check_modularity)
    """
    n = group.order
    phases = np.array(braiding, dtype=complex)
    if phases.shape != (n, n):
        raise FusionInputError(f"Braiding has shape {phases.shape}, expected {(n, n)}")
    if ring.size != n:
        raise FusionInputError(f"Ring has {ring.size} labels, group has order {n}")
    if np.max(np.abs(np.abs(phases) - 1)) > fusion_ring.DEFAULT_TOLERANCE:
        raise FusionInputError("Braiding phases must have modulus 1")
    if np.max(np.abs(phases[0] - 1)) > fusion_ring.DEFAULT_TOLERANCE or np.max(np.abs(phases[:, 0] - 1)) > fusion_ring.DEFAULT_TOLERANCE:
        raise FusionInputError("Braiding with the identity must be trivial")

    S = np.conj(phases * phases.T) / np.sqrt(n)
    T = np.diag(phases).copy()
    return ModularData.build(ring, S, T)


def opposite(md: ModularData) -> ModularData:
    """Complex-conjugate data, the opposite chirality."""
    return ModularData.build(md.ring, md.S.conj(), md.T.conj())


def twists(md: ModularData) -> np.ndarray:
    """Conformal spins T_i / T_0."""
    return md.T / md.T[0]


def relabel(md: ModularData, permutation: Sequence[int]) -> ModularData:
    """Relabel ring, S and T simultaneously; permutation[i] is the new index of label i."""
    ring = fusion_ring.relabel(md.ring, permutation)
    inverse = np.argsort(np.array(permutation))
    S = md.S[np.ix_(inverse, inverse)]
    T = md.T[inverse]
    return ModularData.build(ring, S, T)
