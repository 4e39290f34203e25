"""Finite group tables, conjugacy classes and numerical character tables."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from src.algebra.errors import FusionInputError, NumericError

logger = logging.getLogger(__name__)

MAX_GROUP_ORDER = 64
CHARACTER_TABLE_ATTEMPTS = 50


@dataclass(frozen=True, eq=False)
class GroupTable:
    """A finite group given by its multiplication table; element 0 is the identity."""
    elements: tuple[str, ...]
    mul: np.ndarray
    inverse: tuple[int, ...]

    @classmethod
    def build(
        cls,
        mul: Sequence[Sequence[int]],
        elements: Optional[Sequence[str]] = None,
    ) -> "GroupTable":
        """
        Validate a multiplication table and wrap it.

        Args:
            mul: Square table with mul[a][b] the index of a*b
            elements: Optional element names (defaults to "0", "1", ...)

        Returns:
            GroupTable

        Raises:
            FusionInputError if the table is not a group with identity 0
        """
        try:
            table = np.array(mul, dtype=np.int64)
        except (TypeError, ValueError) as e:
            raise FusionInputError(f"Group table is not an integer matrix: {e}")

        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise FusionInputError(f"Group table must be a nonempty square matrix, got shape {table.shape}")

        order = table.shape[0]
        if table.min() < 0 or table.max() >= order:
            raise FusionInputError("Group table entries out of range")

        identity = np.arange(order)
        if not (np.array_equal(table[0], identity) and np.array_equal(table[:, 0], identity)):
            raise FusionInputError("Element 0 must be the identity")

        for row in range(order):
            if len(set(table[row].tolist())) != order or len(set(table[:, row].tolist())) != order:
                raise FusionInputError(f"Group table is not a Latin square at element {row}")

        # (ab)c == a(bc) for all triples
        left = table[table[:, :, None], np.arange(order)[None, None, :]]
        right = table[np.arange(order)[:, None, None], table[None, :, :]]
        if not np.array_equal(left, right):
            a, b, c = (int(x) for x in np.argwhere(left != right)[0])
            raise FusionInputError(f"Group table is not associative at ({a}, {b}, {c})")

        inverse = tuple(int(np.where(table[g] == 0)[0][0]) for g in range(order))

        if elements is None:
            elements = [str(g) for g in range(order)]
        names = tuple(str(name) for name in elements)
        if len(names) != order or len(set(names)) != order:
            raise FusionInputError("Element names must be unique and match the table order")

        table.setflags(write=False)
        return cls(elements=names, mul=table, inverse=inverse)

    @property
    def order(self) -> int:
        return len(self.elements)

    def product(self, g: int, h: int) -> int:
        return int(self.mul[g, h])

    def conjugate(self, g: int, x: int) -> int:
        """Return x g x^{-1}."""
        return int(self.mul[self.mul[x, g], self.inverse[x]])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def element_order(self, g: int) -> int:
        power, steps = g, 1
        while power != 0:
            power = int(self.mul[power, g])
            steps += 1
        return steps

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Classes in order of their smallest element; the identity class comes first."""
        seen: set[int] = set()
        classes = []
        for g in range(self.order):
            if g in seen:
                continue
            members = sorted({self.conjugate(g, x) for x in range(self.order)})
            seen.update(members)
            classes.append(tuple(members))
        return tuple(classes)

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        lookup = [0] * self.order
        for index, members in enumerate(self.conjugacy_classes):
            for g in members:
                lookup[g] = index
        return tuple(lookup)

    def centralizer(self, g: int) -> tuple[int, ...]:
        return tuple(x for x in range(self.order) if self.mul[x, g] == self.mul[g, x])

    def subgroup(self, members: Sequence[int]) -> tuple["GroupTable", tuple[int, ...]]:
        """
        Restrict the table to a subgroup.

        Args:
            members: Elements of the subgroup (must be closed and contain 0)

        Returns:
            The subgroup table and the embedding (subgroup index -> group index)
        """
        embedding = tuple(sorted(set(int(g) for g in members)))
        if not embedding or embedding[0] != 0:
            raise FusionInputError("A subgroup must contain the identity")

        position = {g: i for i, g in enumerate(embedding)}
        try:
            table = [[position[int(self.mul[a, b])] for b in embedding] for a in embedding]
        except KeyError:
            raise FusionInputError("Subgroup elements are not closed under multiplication")

        names = [self.elements[g] for g in embedding]
        return GroupTable.build(table, names), embedding


def cyclic(n: int) -> GroupTable:
    """The cyclic group Z_n with elements named 0..n-1."""
    if n < 1:
        raise FusionInputError(f"Cyclic group order must be positive, got {n}")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return GroupTable.build(table)


def direct_product(first: GroupTable, second: GroupTable) -> GroupTable:
    """Direct product with elements (a, b) ordered first-factor-major."""
    n1, n2 = first.order, second.order
    table = [
        [
            int(first.mul[a1, b1]) * n2 + int(second.mul[a2, b2])
            for b1 in range(n1) for b2 in range(n2)
        ]
        for a1 in range(n1) for a2 in range(n2)
    ]
    names = [f"({x},{y})" for x in first.elements for y in second.elements]
    return GroupTable.build(table, names)


def symmetric3() -> GroupTable:
    """S_3 as permutations of {0, 1, 2}; composition (p*q)(x) = p(q(x))."""
    perms = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    names = ["e", "(01)", "(02)", "(12)", "(012)", "(021)"]
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]
    return GroupTable.build(table, names)


BUILTIN_GROUPS = tuple([f"Z{n}" for n in range(1, 9)] + ["Z2xZ2", "S3"])


def builtin_group(name: str) -> GroupTable:
    """
    Look up a built-in group.

    Args:
        name: One of Z1..Z8, Z2xZ2, S3 (case-insensitive)

    Returns:
        GroupTable
    """
    key = name.strip().upper()
    if key == "Z2XZ2":
        return direct_product(cyclic(2), cyclic(2))
    if key == "S3":
        return symmetric3()
    if key.startswith("Z") and key[1:].isdigit() and 1 <= int(key[1:]) <= 8:
        return cyclic(int(key[1:]))
    raise FusionInputError(f"Unknown group '{name}'. Available: {list(BUILTIN_GROUPS)}")


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Irreducible characters, one row per irrep, one column per conjugacy class."""
    group: GroupTable
    values: np.ndarray

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(round(v.real)) for v in self.values[:, 0])

    def value(self, irrep: int, g: int) -> complex:
        return complex(self.values[irrep, self.group.class_of[g]])


def _class_coefficients(group: GroupTable) -> np.ndarray:
    # a[r, s, t] = #{(x, y) in C_r x C_s : x*y = representative of C_t}
    classes = group.conjugacy_classes
    class_of = group.class_of
    reps = [members[0] for members in classes]
    count = len(classes)
    coefficients = np.zeros((count, count, count))
    for r, c_r in enumerate(classes):
        for s, c_s in enumerate(classes):
            for x in c_r:
                for y in c_s:
                    p = int(group.mul[x, y])
                    t = class_of[p]
                    if p == reps[t]:
                        coefficients[r, s, t] += 1
    return coefficients


def character_table(
    group: GroupTable,
    seed: int = 0,
    max_attempts: int = CHARACTER_TABLE_ATTEMPTS,
) -> CharacterTable:
    """
    Compute the character table from the class multiplication coefficients.

    Central characters are the common eigenvectors of the class matrices; a
    random combination separates them. Characters are ordered by degree with
    the trivial character first.

    Args:
        group: Group of order at most MAX_GROUP_ORDER
        seed: Seed for the random combination
        max_attempts: Number of random combinations tried before giving up

    Returns:
        CharacterTable

    Raises:
        NumericError if no separating combination is found or orthogonality fails
    """
    if group.order > MAX_GROUP_ORDER:
        raise FusionInputError(f"Group order {group.order} exceeds {MAX_GROUP_ORDER}")

    classes = group.conjugacy_classes
    sizes = np.array([len(members) for members in classes], dtype=float)
    count = len(classes)
    coefficients = _class_coefficients(group)

    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        combination = np.einsum("r,rst->st", rng.standard_normal(count), coefficients)
        eigenvalues, eigenvectors = np.linalg.eig(combination)
        if count == 1:
            break
        gaps = np.abs(eigenvalues[:, None] - eigenvalues[None, :]) + np.eye(count)
        if gaps.min() > 1e-6:
            break
    else:
        raise NumericError(
            f"Class matrices of a group of order {group.order} were not separated "
            f"after {max_attempts} attempts",
            iterations=max_attempts,
        )

    characters = []
    for column in eigenvectors.T:
        central = column / column[0]
        degree_estimate = np.sqrt(group.order / np.sum(np.abs(central) ** 2 / sizes))
        degree = int(round(degree_estimate))
        if degree < 1 or abs(degree_estimate - degree) > 1e-6:
            raise NumericError(
                f"Non-integral character degree {degree_estimate}", iterations=attempt
            )
        values = central * degree / sizes
        values = np.where(np.abs(values.imag) < 1e-12, values.real, values)
        characters.append(values.astype(complex))

    def sort_key(values: np.ndarray) -> tuple:
        return (round(values[0].real),) + tuple(
            (-round(v.real, 8), -round(v.imag, 8)) for v in values
        )

    characters.sort(key=sort_key)
    table = np.array(characters)

    gram = (table * sizes) @ table.conj().T
    if np.max(np.abs(gram - group.order * np.eye(count))) > 1e-8:
        raise NumericError(
            f"Character orthogonality failed for a group of order {group.order}",
            iterations=attempt,
        )

    table.setflags(write=False)
    return CharacterTable(group=group, values=table)
