"""Named catalog of built-in and file-based entries."""

import logging
from pathlib import Path
from typing import Callable, Optional, Union

from src.algebra import fusion_ring
from src.algebra.errors import FusionInputError
from src.algebra.groups import builtin_group
from src.catalog import models
from src.catalog.loader import load_directory, ring_to_json
from src.catalog.models import CatalogEntry

logger = logging.getLogger(__name__)


def _builtin_factories() -> dict[str, Callable[[], CatalogEntry]]:
    factories: dict[str, Callable[[], CatalogEntry]] = {
        "trivial": lambda: models.pointed(builtin_group("Z1"), [[1]], name="trivial", notes="a single sector"),
        "ising": models.ising,
    }
    for k in range(1, models.MAX_LEVEL + 1):
        factories[f"su2_{k}"] = lambda k=k: models.su2k(k)
    factories.update({
        "z2": lambda: models.pointed(
            builtin_group("Z2"), models.level_one_braiding(2), name="z2", notes="SU(2)_1 shadow"
        ),
        "z3": lambda: models.pointed(
            builtin_group("Z3"), models.level_one_braiding(3), name="z3", notes="SU(3)_1 shadow"
        ),
        "z4": lambda: models.pointed(builtin_group("Z4"), name="z4"),
        "z2xz2": lambda: models.pointed(
            builtin_group("Z2xZ2"), models.so8_braiding(), name="z2xz2", notes="SO(8)_1 shadow"
        ),
    })
    for group_name in ("Z1", "Z2", "Z3", "Z2xZ2", "S3"):
        name = f"dg_{group_name.lower()}"
        factories[name] = lambda g=group_name, n=name: models.dg(builtin_group(g), name=n)
    return factories


class Catalog:
    """Built-in model data plus the ring files of a data directory, built on first use."""

    def __init__(self, data_dir: Optional[Union[str, Path]] = None):
        """
        Initialize the catalog.

        Args:
            data_dir: Directory scanned for *.ring.json files (None disables file entries)
        """
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self._factories = _builtin_factories()
        self._entries: dict[str, CatalogEntry] = {}
        self._files_loaded = False

    def load(self) -> "Catalog":
        """Load file entries; names that collide with built-ins are skipped."""
        if self._files_loaded or self.data_dir is None:
            self._files_loaded = True
            return self
        for entry in load_directory(self.data_dir):
            if entry.name in self._factories or entry.name in self._entries:
                logger.warning("Skipping %s: name already in the catalog", entry.name)
                continue
            self._entries[entry.name] = entry
        self._files_loaded = True
        return self

    def names(self) -> list[str]:
        self.load()
        return list(self._factories) + sorted(n for n in self._entries if n not in self._factories)

    def get(self, name: str) -> CatalogEntry:
        """
        Look up an entry, building it on first access.

        Raises:
            FusionInputError for unknown names
        """
        self.load()
        if name not in self._entries:
            if name not in self._factories:
                raise FusionInputError(f"Unknown catalog entry '{name}'. Available: {self.names()}")
            logger.debug("Building catalog entry %s...", name)
            self._entries[name] = self._factories[name]()
        return self._entries[name]

    def export(self, name: str) -> dict:
        return ring_to_json(self.get(name))

    def list_entries(self) -> list[dict]:
        """Summary rows: name, labels, modular flag, global index and notes."""
        rows = []
        for name in self.names():
            entry = self.get(name)
            rows.append({
                "name": name,
                "labels": list(entry.ring.labels),
                "modular": entry.modular is not None,
                "global_index": fusion_ring.global_index(entry.ring),
                "notes": entry.notes,
            })
        return rows

    def get_stats(self) -> dict:
        self.load()
        return {
            "builtin": len(self._factories),
            "files": len([n for n in self._entries if n not in self._factories]),
            "built": len(self._entries),
            "data_dir": str(self.data_dir) if self.data_dir else None,
        }
