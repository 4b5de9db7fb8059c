import json

import pytest

from xplain.cli import main
from xplain.jsonio import canonical_dumps, dump_entity_document, dump_model_document


@pytest.fixture
def films(tmp_path, film_tree, film_entity):
    model = tmp_path / "model.json"
    entity = tmp_path / "entity.json"
    model.write_text(canonical_dumps(dump_model_document(film_tree)))
    entity.write_text(canonical_dumps(dump_entity_document(film_entity)))
    return str(model), str(entity)


@pytest.fixture
def phi_files(tmp_path, phi, phi_entity):
    model = tmp_path / "phi.json"
    entity = tmp_path / "phi-entity.json"
    model.write_text(canonical_dumps(dump_model_document(phi)))
    entity.write_text(canonical_dumps(dump_entity_document(phi_entity)))
    return str(model), str(entity)


def _run_json(capsys, argv):
    code = main(argv + ["--output", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_explain_necessary_film(capsys, films):
    model, entity = films
    code, report, _ = _run_json(capsys, ["explain", "necessary", model, entity])
    assert code == 0
    assert report["necessary"] == ["Dur"]


def test_explain_sufficient_reasons_phi(capsys, phi_files):
    model, entity = phi_files
    code, report, _ = _run_json(capsys, ["explain", "sufficient-reasons", model, entity])
    assert code == 0
    assert report["sufficient_reasons"] == [["x2", "x3"], ["x2", "x4"]]
    assert report["prediction"] == 1


def test_explain_relevant_with_witness(capsys, films):
    model, entity = films
    code, report, _ = _run_json(
        capsys, ["explain", "relevant", model, entity, "--feature", "Rate"]
    )
    assert code == 0
    assert report["relevant"] is True
    assert report["witness"] == ["Dur", "Rate"]


def test_explain_hypergraph_dump(capsys, phi_files):
    model, entity = phi_files
    code, report, _ = _run_json(capsys, ["explain", "hypergraph", model, entity])
    assert code == 0
    assert {"features": ["x2"], "clauses": [0]} in report["edges"]


def test_score_all_constant_model(capsys, tmp_path, phi_space):
    from xplain import DecisionTree

    path = tmp_path / "constant.json"
    path.write_text(canonical_dumps(dump_model_document(DecisionTree.leaf(phi_space, 1))))
    code, report, _ = _run_json(capsys, ["score", str(path)])
    assert code == 0
    assert all(row["necessary_count"] == 0 for row in report["scores"])
    assert report["ranking"] == sorted(phi_space.names)


def test_useful_and_oracle_check(capsys, phi_files):
    model, _ = phi_files
    code, report, _ = _run_json(capsys, ["useful", model, "--oracle-check"])
    assert code == 0
    assert report["useful"] == ["x2", "x3", "x4", "x5"]


def test_equiv_command(capsys, tmp_path, film_tree):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(canonical_dumps(dump_model_document(film_tree.booleanize(1))))
    b.write_text(canonical_dumps(dump_model_document(film_tree.booleanize(1).negate())))
    code, report, _ = _run_json(capsys, ["equiv", str(a), str(a)])
    assert code == 0 and report["equivalent"] is True
    code, report, _ = _run_json(capsys, ["equiv", str(a), str(b)])
    assert code == 0 and report["equivalent"] is False


def test_oracle_subcommands(capsys, phi_files):
    model, entity = phi_files
    code, report, _ = _run_json(capsys, ["oracle", "sufficient-reasons", model, entity])
    assert code == 0
    assert report["sufficient_reasons"] == [["x2", "x3"], ["x2", "x4"]]
    code, report, _ = _run_json(capsys, ["oracle", "necessary", model, entity])
    assert code == 0 and report["necessary"] == ["x2"]
    code, report, _ = _run_json(capsys, ["oracle", "mhs", model, entity])
    assert code == 0 and report["minimal_hitting_sets"] == [["x2", "x3"], ["x2", "x4"]]


def test_json_reports_roundtrip_byte_identically(capsys, films):
    model, entity = films
    for argv in (
        ["explain", "necessary", model, entity],
        ["explain", "sufficient-reasons", model, entity],
        ["validate", model],
    ):
        code, report, raw = _run_json(capsys, argv)
        assert code == 0
        assert canonical_dumps(json.loads(raw)) == raw


def test_validation_failure_exit_code(capsys, tmp_path):
    doc = {
        "feature_space": [{"id": "x", "kind": "categorical", "domain": [0, 1]}],
        "model": {
            "kind": "fbdd", "root": 0,
            "nodes": [
                {"id": 0, "feature": "x", "left": 1, "right": 2},
                {"id": 1, "feature": "x", "left": 3, "right": 4},
                {"id": 2, "leaf": 1},
                {"id": 3, "leaf": 0},
                {"id": 4, "leaf": 1},
            ],
        },
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code = main(["validate", str(path), "--output", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 2
    assert any(f["code"] == "read-once" for f in out["findings"])
    # non-validate commands refuse to run on an invalid model
    entity = tmp_path / "e.json"
    entity.write_text(json.dumps({"values": {"x": 1}}))
    code = main(["explain", "necessary", str(path), str(entity), "--output", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 2 and out["ok"] is False


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code = main(["validate", str(path), "--output", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 4
    assert out["error"]["kind"] == "parse-error"


def test_budget_exceeded_exit_code(capsys, phi_files, monkeypatch):
    model, entity = phi_files
    code = main(["oracle", "sufficient-reasons", model, entity,
                 "--budget", "2", "--output", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 3
    assert out["error"]["kind"] == "budget-exceeded"
    # same limit through the environment variable
    monkeypatch.setenv("XPLAIN_BUDGET", "2")
    code = main(["oracle", "sufficient-reasons", model, entity, "--output", "json"])
    assert code == 3
    capsys.readouterr()


def test_human_output_mentions_values(capsys, films):
    model, entity = films
    code = main(["explain", "necessary", model, entity])
    out = capsys.readouterr().out
    assert code == 0
    assert "Dur" in out
