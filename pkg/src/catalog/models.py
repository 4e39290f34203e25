"""Built-in model data: SU(2)_k, Ising, pointed systems and Drinfeld doubles."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.algebra.double_construction import drinfeld_double
from src.algebra.errors import FusionInputError
from src.algebra.fusion_ring import FusionRing
from src.algebra.groups import GroupTable
from src.algebra.modular_data import ModularData, pointed_modular_data

MAX_LEVEL = 8
MAX_DOUBLE_ORDER = 12


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """A named fusion ring with optional modular data and provenance notes."""
    name: str
    ring: FusionRing
    modular: Optional[ModularData] = None
    notes: str = ""
    group: Optional[GroupTable] = None


def su2k(k: int) -> CatalogEntry:
    """
    SU(2) at level k: labels 0..k with truncated Clebsch-Gordan fusion.

    Args:
        k: Level, 1 <= k <= MAX_LEVEL

    Returns:
        CatalogEntry with modular data
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_LEVEL:
        raise FusionInputError(f"Level must be an integer in 1..{MAX_LEVEL}, got {k}")

    labels = [str(a) for a in range(k + 1)]
    entries = [
        (a, b, c, 1)
        for a in range(k + 1)
        for b in range(k + 1)
        for c in range(k + 1)
        if abs(a - b) <= c <= min(a + b, 2 * k - a - b) and (a + b + c) % 2 == 0
    ]
    ring = FusionRing.build(labels, list(range(k + 1)), entries)

    a = np.arange(k + 1)
    S = np.sqrt(2 / (k + 2)) * np.sin(np.outer(a + 1, a + 1) * np.pi / (k + 2))
    central_charge = 3 * k / (k + 2)
    T = np.exp(2j * np.pi * (a * (a + 2) / (4 * (k + 2)) - central_charge / 24))

    return CatalogEntry(
        name=f"su2_{k}",
        ring=ring,
        modular=ModularData.build(ring, S, T),
        notes=f"SU(2) level {k}: {k + 1} sectors, loop-group fusion rules, c = {central_charge:.6g}",
    )


def ising() -> CatalogEntry:
    """The three Ising sectors 1, eps, sigma with sigma*sigma = 1 + eps."""
    ring = FusionRing.build(
        ["1", "eps", "sigma"],
        [0, 1, 2],
        [(1, 1, 0, 1), (1, 2, 2, 1), (2, 1, 2, 1), (2, 2, 0, 1), (2, 2, 1, 1)],
    )
    root = np.sqrt(2)
    S = 0.5 * np.array([[1, 1, root], [1, 1, -root], [root, -root, 0]])
    T = np.array([1, -1, np.exp(1j * np.pi / 8)]) * np.exp(-2j * np.pi * 0.5 / 24)
    return CatalogEntry(
        name="ising",
        ring=ring,
        modular=ModularData.build(ring, S, T),
        notes="Ising model, c = 1/2; Z_2 orbifold of a free fermion",
    )


def level_one_braiding(n: int) -> np.ndarray:
    """Braiding phases b(g, h) = exp(pi i g h (n - 1) / n) on Z_n; the SU(n)_1 shadow."""
    g = np.arange(n)
    return np.exp(1j * np.pi * np.outer(g, g) * (n - 1) / n)


def so8_braiding() -> np.ndarray:
    """Braiding phases on Z_2 x Z_2 with three fermions; the SO(8)_1 shadow."""
    elements = [(a1, a2) for a1 in range(2) for a2 in range(2)]
    return np.array([
        [(-1) ** (a1 * b1 + a2 * b2 + a1 * b2) for (b1, b2) in elements]
        for (a1, a2) in elements
    ], dtype=complex)


def pointed(group: GroupTable, braiding: Optional[Sequence] = None, name: str = "", notes: str = "") -> CatalogEntry:
    """
    The pointed ring of a group, with modular data when braiding phases are supplied.

    Args:
        group: Finite group
        braiding: Optional (|G|, |G|) matrix of phases b(g, h)
        name: Entry name
        notes: Provenance notes

    Returns:
        CatalogEntry
    """
    ring = FusionRing.from_group(group)
    modular = pointed_modular_data(ring, group, braiding) if braiding is not None else None
    return CatalogEntry(
        name=name or f"pointed_{group.order}",
        ring=ring,
        modular=modular,
        notes=notes or f"pointed system of a group of order {group.order}",
        group=group,
    )


def dg(group: GroupTable, name: str = "") -> CatalogEntry:
    """Drinfeld double D(G) for a built-in group of order at most MAX_DOUBLE_ORDER."""
    if group.order > MAX_DOUBLE_ORDER:
        raise FusionInputError(f"Drinfeld doubles are catalogued for |G| <= {MAX_DOUBLE_ORDER}, got {group.order}")
    doubled = drinfeld_double(group)
    return CatalogEntry(
        name=name or f"dg_{group.order}",
        ring=doubled.ring,
        modular=doubled.modular,
        notes=f"untwisted quantum double of a group of order {group.order}; dimension {group.order ** 2}",
        group=group,
    )
