"""Reading and writing ring and group files."""

import json
import logging
from pathlib import Path
from typing import Any, List, Union

import numpy as np

from src.algebra.errors import FusionInputError
from src.algebra.fusion_ring import FusionRing
from src.algebra.groups import GroupTable
from src.algebra.modular_data import ModularData
from src.catalog.models import CatalogEntry, pointed

logger = logging.getLogger(__name__)

RING_SUFFIX = ".ring.json"
GROUP_SUFFIX = ".group.json"


def _read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    if not path.exists():
        raise FusionInputError(f"File not found: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise FusionInputError(f"{path} is not valid JSON: {e}")


def _complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise FusionInputError(f"Expected a number or [re, im], got {value!r}")


def _complex_matrix(rows: Any) -> np.ndarray:
    try:
        return np.array([[_complex(v) for v in row] for row in rows], dtype=complex)
    except TypeError:
        raise FusionInputError("Expected a matrix of [re, im] pairs")


def _pairs(values: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in values]


def group_from_pointed(ring: FusionRing) -> GroupTable:
    """Recover the group of a pointed ring: g*h is the unique k with N_gh^k = 1."""
    A = ring.array
    if np.any(A.sum(axis=2) != 1):
        raise FusionInputError("Ring is not pointed; every product must be a single label")
    return GroupTable.build(np.argmax(A, axis=2).tolist(), ring.labels)


def parse_ring(document: Any, name: str = "") -> CatalogEntry:
    """
    Build a catalog entry from a parsed ring document.

    Args:
        document: {"labels", "dual", "tensor"} with optional "modular",
            "bicharacter", "name" and "notes"
        name: Fallback entry name

    Returns:
        CatalogEntry

    Raises:
        FusionInputError on missing keys or malformed values
    """
    if not isinstance(document, dict):
        raise FusionInputError("Ring document must be a JSON object")
    missing = [key for key in ("labels", "dual", "tensor") if key not in document]
    if missing:
        raise FusionInputError(f"Ring document is missing {missing}")

    ring = FusionRing.build(document["labels"], document["dual"], document["tensor"])
    entry_name = document.get("name", name)
    notes = document.get("notes", "")

    if "bicharacter" in document:
        return pointed(group_from_pointed(ring), _complex_matrix(document["bicharacter"]), name=entry_name, notes=notes)

    modular = None
    if "modular" in document:
        block = document["modular"]
        if not isinstance(block, dict) or "S" not in block or "T" not in block:
            raise FusionInputError("Modular block needs both S and T")
        T = np.array([_complex(v) for v in block["T"]], dtype=complex)
        modular = ModularData.build(ring, _complex_matrix(block["S"]), T)

    return CatalogEntry(name=entry_name, ring=ring, modular=modular, notes=notes)


def load_ring(path: Union[str, Path]) -> CatalogEntry:
    """Load a *.ring.json file; the entry name defaults to the file stem."""
    path = Path(path)
    stem = path.name[: -len(RING_SUFFIX)] if path.name.endswith(RING_SUFFIX) else path.stem
    return parse_ring(_read_json(path), name=stem)


def ring_to_json(entry: CatalogEntry) -> dict:
    """Serialize an entry to the ring file format; unit entries are left implicit."""
    ring = entry.ring
    document: dict[str, Any] = {
        "name": entry.name,
        "labels": list(ring.labels),
        "dual": list(ring.dual),
        "tensor": [[i, j, k, m] for (i, j, k), m in ring.tensor.items() if i != 0 and j != 0],
    }
    if entry.notes:
        document["notes"] = entry.notes
    if entry.modular is not None:
        document["modular"] = {
            "S": [_pairs(row) for row in entry.modular.S],
            "T": _pairs(entry.modular.T),
        }
    return document


def load_group(path: Union[str, Path]) -> GroupTable:
    """Load a *.group.json file: {"order": n, "mul": [[...]]} with optional "elements"."""
    document = _read_json(path)
    if not isinstance(document, dict) or "mul" not in document:
        raise FusionInputError("Group document needs a 'mul' table")
    group = GroupTable.build(document["mul"], document.get("elements"))
    if "order" in document and document["order"] != group.order:
        raise FusionInputError(f"Declared order {document['order']} does not match the table ({group.order})")
    return group


def group_to_json(group: GroupTable) -> dict:
    return {"order": group.order, "elements": list(group.elements), "mul": group.mul.tolist()}


def load_directory(data_dir: Union[str, Path] = "data") -> List[CatalogEntry]:
    """
    Load every ring file in a directory.

    Args:
        data_dir: Directory containing *.ring.json files

    Returns:
        List of CatalogEntry objects, in file name order; unreadable files are skipped
    """
    data_path = Path(data_dir)
    if not data_path.exists():
        logger.info("Data directory %s not found; no file entries loaded", data_path)
        return []

    ring_files = sorted(data_path.glob(f"*{RING_SUFFIX}"))
    logger.info("Found %d ring files in %s", len(ring_files), data_path)

    entries = []
    for ring_file in ring_files:
        logger.debug("Loading %s...", ring_file.name)
        try:
            entries.append(load_ring(ring_file))
        except FusionInputError as e:
            logger.warning("Skipping %s: %s", ring_file, e)
    return entries
