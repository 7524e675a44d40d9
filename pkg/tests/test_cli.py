import json

import pytest

from ssmthom.bases import parse_expansion
from ssmthom.cli import dumps, expansion_document, expansion_from_document, main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def test_compute_chern(capsys):
    assert run(capsys, "compute", "--entry", "A2", "--ell", "0", "--degree", "3") == (
        0, "(c1^2+c2) + (-3c1^3-6c1c2-3c3)", ""
    )


def test_compute_schur(capsys):
    code, out, _ = run(capsys, "compute", "--entry", "A1", "--ell", "0", "--degree", "2", "--basis", "schur")
    assert (code, out) == (0, "s1 - 3s2 - 2s11")


def test_compute_tilde(capsys):
    code, out, _ = run(capsys, "compute", "--entry", "A0", "--ell", "1", "--degree", "6", "--basis", "tilde")
    assert (code, out) == (0, "s~0 + s~1 + s~11 + s~111 + s~1111 + s~11111 + s~111111")


def test_compute_accepts_aliases(capsys):
    a = run(capsys, "compute", "--entry", "b'24", "--ell", "1", "--degree", "11")
    b = run(capsys, "compute", "--entry", "I24", "--ell", "1", "--degree", "11")
    assert a == b and a[0] == 0


def test_json_round_trip(capsys):
    code, out, _ = run(
        capsys, "compute", "--entry", "A2", "--ell", "1", "--degree", "6", "--basis", "tilde", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"entry", "ell", "degree", "basis", "terms"}
    e = expansion_from_document(doc)
    assert dumps(expansion_document(doc["entry"], doc["ell"], e)) == out


def test_latex_matches_table_rows(capsys, expansion_tables):
    for ell, rows in expansion_tables["tables"].items():
        d = expansion_tables["degree"][ell]
        for basis, flag in (("schur", "schur"), ("schur_tilde", "tilde")):
            for name, tex in rows[basis].items():
                code, out, _ = run(
                    capsys, "compute", "--entry", name, "--ell", ell, "--degree", str(d),
                    "--basis", flag, "--format", "latex",
                )
                assert code == 0
                assert parse_expansion(out, basis, d) == parse_expansion(tex, basis, d), (ell, name)


@pytest.mark.parametrize(
    "args",
    [
        ["compute", "--entry", "A2", "--ell", "0", "--degree", "9"],
        ["compute", "--entry", "Z9", "--ell", "0", "--degree", "3"],
        ["compute", "--entry", "A2", "--ell", "0"],
        ["compute", "--entry", "A2", "--ell", "0", "--degree", "3", "--basis", "elementary"],
        ["apply", "--entry", "A2", "--ell", "1", "--source-dim", "5", "--target-dim", "7", "--map-degree", "2"],
        ["apply", "--entry", "A2", "--ell", "1", "--source-dim", "5", "--target-dim", "6"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_1(capsys, args):
    assert run(capsys, *args)[0] == 1


def test_catalog_errors_exit_3(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ell": 0, "max_codim": 8, "entries": []}')
    assert run(capsys, "compute", "--entry", "A0", "--catalog", str(bad), "--degree", "1")[0] == 3
    assert run(capsys, "compute", "--entry", "A2", "--ell", "2", "--degree", "16")[0] == 3


def test_underdetermined_exit_2(capsys, tmp_path):
    from ssmthom.catalog import bundled_catalog, dump_catalog

    cat = bundled_catalog(0)
    small = tmp_path / "small.json"
    small.write_text(dump_catalog(cat.restrict(["A0", "A1", "A2"])))
    code, _, err = run(capsys, "compute", "--entry", "A2", "--catalog", str(small), "--degree", "3")
    assert code == 2
    assert "underdetermined" in err


def _genotype(tmp_path, variables, relations):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"variables": [{"name": n, "weight": w} for n, w in variables], "relations": relations}))
    return str(path)


def test_derive(capsys, tmp_path):
    g = _genotype(tmp_path, [("x", [1, 0]), ("y", [0, 1])], ["x^2", "y^3"])
    code, out, _ = run(capsys, "derive", g, "--ell", "0")
    assert code == 0
    assert len(json.loads(out)["source_weights"]) == 7
    g = _genotype(tmp_path, [("x", [1])], ["x^3"])
    code, out, _ = run(capsys, "derive", g, "--ell", "0")
    assert json.loads(out)["source_weights"] == [[1], [2]]


def test_derive_zero_weight_exit_2(capsys, tmp_path):
    g = _genotype(tmp_path, [("x", [1]), ("y", [0])], ["x^2", "y^2"])
    assert run(capsys, "derive", g, "--ell", "0")[0] == 2


def test_derive_bad_genotype_exit_1(capsys, tmp_path):
    g = _genotype(tmp_path, [("x", [1, 0]), ("y", [0, 1])], ["x^2+y"])
    assert run(capsys, "derive", g, "--ell", "0")[0] == 1


def test_apply(capsys):
    code, out, _ = run(
        capsys, "apply", "--entry", "A2", "--ell", "1", "--source-dim", "5", "--target-dim", "6", "--map-degree", "2"
    )
    assert code == 0
    assert "degree = 525" in out
    assert "euler characteristic = -5978" in out


def test_apply_symbolic(capsys):
    code, out, _ = run(
        capsys, "apply", "--entry", "A2", "--ell", "1", "--source-dim", "5", "--target-dim", "6", "--symbolic", "d"
    )
    assert code == 0
    assert "degree = 21*(d - 1)^2*(6*d - 7)^2" in out
    assert "euler characteristic = -14*(d - 1)^2*(1048*d^3 - 3928*d^2 + 4887*d - 2019)" in out


def test_hierarchy(capsys):
    assert run(capsys, "hierarchy", "--lower", "d1", "--upper", "I24", "--ell", "1", "--degree", "11")[:2] == (
        0, "below (witness 6a^11)"
    )


def test_sumcheck(capsys):
    assert run(capsys, "sumcheck", "--ell", "1", "--degree", "6")[:2] == (0, "PASS")


def test_catalog_commands(capsys):
    assert run(capsys, "catalog", "validate", "--ell", "0")[:2] == (0, "20 entries, all checks pass")
    code, out, _ = run(capsys, "catalog", "list", "--ell", "1")
    assert code == 0 and len(out.splitlines()) == 32
    code, out, _ = run(capsys, "catalog", "validate", "--ell", "2", "--degree", "16")
    assert code == 3 and "FAIL * coverage" in out


def test_deterministic(capsys):
    args = ["compute", "--entry", "I23", "--ell", "1", "--degree", "10", "--basis", "tilde", "--format", "json"]
    assert run(capsys, *args) == run(capsys, *args)
