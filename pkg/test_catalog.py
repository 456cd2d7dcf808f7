"""
Tests for the fusion ring catalog
"""

import json

import pytest

from core.errors import DataError, DomainError, RingNotFoundError, StorageError
from modules.catalog import (
    builtin,
    fuse,
    index_sextuples,
    is_admissible_sextuple,
    load_ring,
    resolve_ring,
    ring_from_dict,
    ring_hash,
    ring_to_dict,
    verify_ring_axioms,
)
from modules.cyclo import zeta
from utils.file_io import save_json


def test_ranks_and_labels(fibonacci, ising, su2_4):
    assert fibonacci.rank == 2
    assert ising.names == ["one", "sigma", "psi"]
    assert su2_4.names == ["one", "X_e", "Y", "X_ep", "Z"]
    assert builtin("Fibonacci") is not None


def test_fuse(fibonacci, ising, su2_4):
    assert [label.name for label in fuse(fibonacci, "tau", "tau")] == ["one", "tau"]
    assert [label.name for label in fuse(ising, "sigma", "psi")] == ["sigma"]
    assert [label.name for label in fuse(su2_4, "Y", "Y")] == ["one", "Y", "Z"]
    assert [label.name for label in fuse(su2_4, "X_e", "X_ep")] == ["Y", "Z"]


def test_unknown_label(fibonacci):
    with pytest.raises(DomainError):
        fuse(fibonacci, "tau", "sigma")


@pytest.mark.parametrize("name", ["fibonacci", "ising", "su2-2", "su2-4"])
def test_catalog_rings_pass_axioms(name):
    report = verify_ring_axioms(builtin(name))
    assert report.passed, report.to_dict()


def test_unknown_ring():
    with pytest.raises(RingNotFoundError):
        builtin("toric-code")
    with pytest.raises(RingNotFoundError):
        builtin("su2-0")


def test_fibonacci_sextuples(fibonacci):
    sextuples, index = index_sextuples(fibonacci)
    assert sextuples == (
        (1, 1, 1, 0, 1, 1),
        (1, 1, 1, 1, 0, 0),
        (1, 1, 1, 1, 0, 1),
        (1, 1, 1, 1, 1, 0),
        (1, 1, 1, 1, 1, 1),
    )
    assert index[(1, 1, 1, 1, 0, 1)] == 2
    assert is_admissible_sextuple(fibonacci, ["tau"] * 6)
    assert not is_admissible_sextuple(fibonacci, ["tau", "tau", "tau", "one", "one", "one"])


def test_su2_4_r_symbols(su2_4):
    assert su2_4.cyclo_order == 48
    assert su2_4.r_symbol(1, 1, 2) == zeta(48, 2)
    assert su2_4.r_symbol(1, 1, 0) == zeta(48, 18)
    assert su2_4.r_symbol(1, 1, 2) * su2_4.r_inverse(1, 1, 2) == 1


def test_missing_r_symbol(fibonacci):
    with pytest.raises(DataError):
        fibonacci.r_symbol(0, 1, 0)


def test_broken_ring_is_reported(fibonacci):
    data = ring_to_dict(fibonacci)
    data["N"] = [t for t in data["N"] if t != ["tau", "one", "tau"]]
    report = verify_ring_axioms(ring_from_dict(data))
    assert not report.passed
    assert report.failures_for("commutativity")


def test_unbalanced_twist_is_reported(fibonacci):
    data = ring_to_dict(fibonacci)
    data["twists"]["tau"] = [1, 5]
    report = verify_ring_axioms(ring_from_dict(data))
    assert report.failures_for("balancing")


def test_ring_file_round_trip(fibonacci, tmp_path):
    path = save_json(ring_to_dict(fibonacci), tmp_path / "fib.json")
    loaded = load_ring(path)
    assert loaded.names == fibonacci.names
    assert ring_hash(loaded) == ring_hash(fibonacci)
    assert resolve_ring(str(path)).name == "fibonacci"


def test_hash_changes_with_data(fibonacci):
    data = ring_to_dict(fibonacci)
    data["r_symbols"][3][3] = 2
    assert ring_hash(ring_from_dict(data)) != ring_hash(fibonacci)


def test_malformed_ring_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(DataError):
        load_ring(bad)

    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text(json.dumps({"name": "x", "labels": ["one"]}))
    with pytest.raises(DataError):
        load_ring(incomplete)

    with pytest.raises(StorageError):
        load_ring(tmp_path / "missing.json")
