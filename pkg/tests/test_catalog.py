import json

import pytest

from src.algebra import fusion_ring, modular_data
from src.algebra.errors import FusionInputError
from src.algebra.groups import cyclic, direct_product
from src.catalog import models
from src.catalog.loader import (
    group_from_pointed,
    group_to_json,
    load_directory,
    load_group,
    load_ring,
    parse_ring,
    ring_to_json,
)
from src.catalog.registry import Catalog
from tests.conftest import DATA_DIR


def test_builtin_names():
    names = Catalog(None).names()
    assert names[:2] == ["trivial", "ising"]
    for expected in ["su2_1", "su2_8", "z2", "z3", "z4", "z2xz2", "dg_z1", "dg_s3"]:
        assert expected in names


def test_file_entries_are_loaded(catalog):
    assert "fibonacci" in catalog.names()
    assert "so8_1" in catalog.names()
    assert catalog.get("fibonacci").notes.startswith("even part")
    assert catalog.get_stats()["files"] == 2


def test_unknown_entry(catalog):
    with pytest.raises(FusionInputError, match="Unknown catalog entry"):
        catalog.get("su2_9")


def test_builtin_names_win_collisions(tmp_path):
    document = ring_to_json(models.su2k(1))
    document["name"] = "ising"
    (tmp_path / "ising.ring.json").write_text(json.dumps(document))
    catalog = Catalog(tmp_path).load()
    assert catalog.get("ising").ring.size == 3
    assert catalog.get_stats()["files"] == 0


def test_missing_data_directory(tmp_path):
    assert load_directory(tmp_path / "missing") == []
    assert Catalog(tmp_path / "missing").load().get_stats()["files"] == 0


def test_unreadable_ring_file_is_skipped(tmp_path, caplog):
    (tmp_path / "broken.ring.json").write_text("{not json")
    (tmp_path / "fib.ring.json").write_text((DATA_DIR / "fibonacci.ring.json").read_text())
    assert [entry.name for entry in load_directory(tmp_path)] == ["fibonacci"]
    assert "Skipping" in caplog.text
    catalog = Catalog(tmp_path)
    assert catalog.get("ising").ring.size == 3
    assert catalog.get("fibonacci").ring.size == 2
    assert catalog.get_stats()["files"] == 1


@pytest.mark.parametrize("k", [0, 9, 2.0, True])
def test_su2_level_range(k):
    with pytest.raises(FusionInputError):
        models.su2k(k)


def test_su2_notes_and_modular_data():
    entry = models.su2k(3)
    assert entry.name == "su2_3"
    assert entry.ring.labels == ("0", "1", "2", "3")
    assert modular_data.check_modularity(entry.modular).passed


def test_pointed_entries(catalog):
    z4 = catalog.get("z4")
    assert z4.group.order == 4
    assert z4.modular is None
    assert catalog.get("z2xz2").notes == "SO(8)_1 shadow"


def test_so8_file_matches_builtin_shadow(catalog):
    from_file = catalog.get("so8_1")
    builtin = catalog.get("z2xz2")
    assert fusion_ring.find_isomorphism(from_file.ring, builtin.ring) is not None
    assert modular_data.check_modularity(from_file.modular).passed


def test_dg_is_capped():
    with pytest.raises(FusionInputError):
        models.dg(direct_product(cyclic(4), cyclic(4)))


def test_export_and_parse(catalog):
    document = catalog.export("ising")
    assert document["name"] == "ising"
    assert all(i != 0 and j != 0 for i, j, _, _ in document["tensor"])
    parsed = parse_ring(json.loads(json.dumps(document)))
    assert dict(parsed.ring.tensor) == dict(catalog.get("ising").ring.tensor)
    assert modular_data.check_modularity(parsed.modular).passed


@pytest.mark.parametrize("document", [
    [],
    {"labels": ["1"], "dual": [0]},
    {"labels": ["1"], "dual": [0], "tensor": [], "modular": {"S": [[1]]}},
    {"labels": ["1"], "dual": [0], "tensor": [], "modular": {"S": [["x"]], "T": [1]}},
])
def test_parse_ring_rejects_malformed_documents(document):
    with pytest.raises(FusionInputError):
        parse_ring(document)


def test_load_ring_errors(tmp_path):
    with pytest.raises(FusionInputError, match="not found"):
        load_ring(tmp_path / "absent.ring.json")
    bad = tmp_path / "bad.ring.json"
    bad.write_text("{not json")
    with pytest.raises(FusionInputError, match="not valid JSON"):
        load_ring(bad)


def test_load_ring_names_entry_after_file(tmp_path):
    document = ring_to_json(models.ising())
    del document["name"]
    path = tmp_path / "my_ising.ring.json"
    path.write_text(json.dumps(document))
    assert load_ring(path).name == "my_ising"


def test_load_group():
    group = load_group(DATA_DIR / "s3.group.json")
    assert group.order == 6
    assert not group.is_abelian()
    assert group_to_json(group)["elements"][0] == "e"


def test_load_group_checks_declared_order(tmp_path):
    path = tmp_path / "z2.group.json"
    path.write_text(json.dumps({"order": 3, "mul": [[0, 1], [1, 0]]}))
    with pytest.raises(FusionInputError, match="Declared order"):
        load_group(path)


def test_group_from_pointed(ising):
    z3 = models.pointed(cyclic(3))
    assert group_from_pointed(z3.ring).order == 3
    with pytest.raises(FusionInputError):
        group_from_pointed(ising.ring)


def test_list_entries(catalog):
    rows = {row["name"]: row for row in catalog.list_entries()}
    assert rows["ising"]["global_index"] == pytest.approx(4.0)
    assert rows["dg_s3"]["global_index"] == pytest.approx(36.0)
    assert rows["z4"]["modular"] is False
    assert rows["fibonacci"]["modular"] is True
