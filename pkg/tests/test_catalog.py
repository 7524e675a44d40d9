import json
from dataclasses import replace

import pytest

from ssmthom.catalog import (
    REFERENCE_CODIMS,
    CatalogError,
    GenotypeSpec,
    bundled_catalog,
    catalog_from_dict,
    dump_catalog,
    duplicate_scan,
    load_catalog,
    mather_bound,
    normalize_name,
    parse_polynomial,
    validate_catalog,
)
from ssmthom.classification import build_catalog
from ssmthom.unfolding import derive_entry

SIZES = {0: 20, 1: 32, 2: 14}


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_bundled_sizes_and_codims(ell):
    cat = bundled_catalog(ell)
    assert len(cat) == SIZES[ell]
    assert {e.name: e.codim for e in cat} == REFERENCE_CODIMS[ell]


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_bundled_files_are_regenerable(ell):
    assert dump_catalog(bundled_catalog(ell)) == dump_catalog(build_catalog(ell))


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_bundled_catalogs_validate(ell):
    cat = bundled_catalog(ell)
    report = validate_catalog(cat, cat.max_codim)
    assert report.passed, report.lines()
    assert report.summary(len(cat)) == f"{SIZES[ell]} entries, all checks pass"


def test_coverage_fails_past_the_classification():
    report = validate_catalog(bundled_catalog(2), 16)
    assert not report.passed
    assert [c.name for c in report.failures()] == ["coverage"]


def test_missing_entry_is_a_coverage_failure():
    cat = bundled_catalog(0)
    short = cat.with_entries(e for e in cat if e.name != "I23")
    report = validate_catalog(short, 8)
    assert "missing I23" in " ".join(c.detail for c in report.failures())


def test_mather_bound():
    assert [mather_bound(l) for l in range(4)] == [8, 14, 20, 26]


def test_aliases():
    cat = bundled_catalog(1)
    assert cat.get("b'24").name == "I24"
    assert cat.get("b_{24}").name == "III24"
    assert cat.get("A_2").name == "A2"
    assert cat.get("(x^3)").name == "A2"
    assert normalize_name("b'_{33}") == "I33"
    with pytest.raises(KeyError):
        cat.get("Z9")


def test_parse_polynomial():
    assert parse_polynomial("x^2-3xy+y", ["x", "y"]) == {(2, 0): 1, (1, 1): -3, (0, 1): 1}


def test_round_trip_through_file(tmp_path):
    cat = bundled_catalog(1)
    path = tmp_path / "c.json"
    path.write_text(dump_catalog(cat))
    assert load_catalog(path) == cat


def _corrupt(tmp_path, mutate):
    data = json.loads(dump_catalog(bundled_catalog(0)))
    mutate(data)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    return path


def test_load_rejects_broken_cancellation(tmp_path):
    def bump(data):
        e = next(e for e in data["entries"] if e["name"] == "A3")
        e["target_weights"][-1] = [w + 1 for w in e["target_weights"][-1]]

    with pytest.raises(CatalogError, match="A3: unfolding-weight cancellation"):
        load_catalog(_corrupt(tmp_path, bump))


def test_load_rejects_wrong_counts(tmp_path):
    def drop(data):
        e = next(e for e in data["entries"] if e["name"] == "I22")
        e["source_weights"].pop()

    with pytest.raises(CatalogError, match="I22: codim 4 != number of source weights 3"):
        load_catalog(_corrupt(tmp_path, drop))


def test_load_rejects_zero_weight(tmp_path):
    def zero(data):
        e = next(e for e in data["entries"] if e["name"] == "A1")
        e["source_weights"][0] = [0]
        e["target_weights"][0] = [1]

    with pytest.raises(CatalogError, match="zero source weight"):
        load_catalog(_corrupt(tmp_path, zero))


def test_load_rejects_duplicate_names(tmp_path):
    def dup(data):
        data["entries"].append(dict(data["entries"][1]))

    with pytest.raises(CatalogError, match="duplicate entry name A1"):
        load_catalog(_corrupt(tmp_path, dup))


def test_malformed_header():
    with pytest.raises(CatalogError, match="header"):
        catalog_from_dict({"entries": []})


def test_duplicate_scan_flags_isomorphic_algebras():
    cat = bundled_catalog(1)
    g = GenotypeSpec.build(
        [("x", [1]), ("y", [1]), ("z", [1])], ["x^2", "y^2", "z^2-xy", "xz+yz"]
    )
    other = derive_entry(g, 1, name="Q")
    assert duplicate_scan(cat.with_entries(list(cat) + [other])) == [("d1", "Q")]


def test_duplicate_scan_flags_copies_and_coordinate_changes():
    cat = bundled_catalog(0)
    twin = replace(cat.get("A1"), name="A1bis")
    assert duplicate_scan(cat.with_entries(list(cat) + [twin])) == [("A1", "A1bis")]
    c2 = cat.get("c2")

    def shear(ws):
        return tuple((a + b, b) for a, b in ws)

    sheared = replace(
        c2, name="c2shear", source_weights=shear(c2.source_weights), target_weights=shear(c2.target_weights)
    )
    assert duplicate_scan(cat.with_entries(list(cat) + [sheared])) == [("c2", "c2shear")]


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_no_duplicates_in_bundled(ell):
    assert duplicate_scan(bundled_catalog(ell)) == []
