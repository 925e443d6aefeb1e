"""Command-line interface: construction, verification, batch queries."""

import json

import pytest
from click.testing import CliRunner

import fixture_spatial
from tkb import cli, store


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, kb_path, *args, check=True):
    result = runner.invoke(cli.main, ["--kb", str(kb_path), *args])
    if check:
        assert result.exit_code == 0, result.output + str(result.exception)
    return result


def build_fixture_via_cli(runner, tmp_path):
    """Drive the whole spatial scenario through the CLI, capturing ids."""
    kb_path = tmp_path / "kb.json"
    corpus_file = tmp_path / "corpus.txt"
    corpus_file.write_text(fixture_spatial.CORPUS_TEXT, encoding="utf-8")

    run(runner, kb_path, "init")
    ids = {}
    ids["relais"] = run(runner, kb_path, "add-term", "RELAIS",
                        "-l", "fr").stdout.strip()
    ids["satellite"] = run(runner, kb_path, "add-term", "SATELLITE",
                           "-l", "fr").stdout.strip()
    ids["sat_comm"] = run(runner, kb_path, "add-term",
                          "SATELLITE DE COMMUNICATION", "-l", "fr",
                          "--component", f"head={ids['satellite']}",
                          ).stdout.strip()
    ids["sat_geo"] = run(runner, kb_path, "add-term",
                         "SATELLITE GEOSTATIONNAIRE", "-l", "fr",
                         "--variant", "satellite géostationnaire",
                         ).stdout.strip()
    ids["meteo"] = run(runner, kb_path, "add-viewpoint",
                       "météorologie").stdout.strip()
    ids["telecom"] = run(runner, kb_path, "add-viewpoint",
                         "télécommunications").stdout.strip()
    ids["c_sat"] = run(runner, kb_path, "add-concept",
                       "--label", ids["satellite"],
                       "--description", fixture_spatial.SATELLITE_DESCRIPTION,
                       "--attr", "orbite=terrestre").stdout.strip()
    ids["c_geo"] = run(runner, kb_path, "add-concept",
                       "--label", ids["sat_geo"],
                       "--description", fixture_spatial.GEO_DESCRIPTION,
                       "--parent", ids["c_sat"]).stdout.strip()
    ids["l_relais_sat"] = run(runner, kb_path, "link", ids["relais"],
                              ids["c_sat"], ids["meteo"]).stdout.strip()
    ids["l_relais_geo"] = run(runner, kb_path, "link", ids["relais"],
                              ids["c_geo"], ids["telecom"]).stdout.strip()
    ids["l_comm_geo"] = run(runner, kb_path, "link", ids["sat_comm"],
                            ids["c_geo"], ids["telecom"]).stdout.strip()
    ids["l_sat_sat"] = run(runner, kb_path, "link", ids["satellite"],
                           ids["c_sat"], ids["meteo"]).stdout.strip()
    ids["l_geo_geo"] = run(runner, kb_path, "link", ids["sat_geo"],
                           ids["c_geo"], ids["meteo"]).stdout.strip()
    ids["doc"] = run(runner, kb_path, "import-corpus", str(corpus_file),
                     "--title", "Corpus spatial").stdout.strip()

    document = json.loads(run(runner, kb_path, "show-document",
                              ids["doc"]).stdout)
    u1, u2 = document["units"][0], document["units"][1]
    ids["u1"], ids["u2"] = u1["id"], u2["id"]
    anchors = [
        (ids["l_relais_sat"], u1, "relais"),
        (ids["l_sat_sat"], u1, "satellite"),
        (ids["l_relais_geo"], u2, "relais"),
        (ids["l_geo_geo"], u2, "satellite géostationnaire"),
        (ids["l_comm_geo"], u2, "satellite de communication"),
    ]
    for link_id, unit, needle in anchors:
        start, end = fixture_spatial.find_span(unit["content"], needle)
        run(runner, kb_path, "anchor", link_id, unit["id"],
            str(start), str(end))
    return kb_path, ids


class TestInit:
    def test_creates_file(self, runner, tmp_path):
        kb_path = tmp_path / "kb.json"
        run(runner, kb_path, "init")
        assert kb_path.exists()
        assert store.load(kb_path).terms == {}

    def test_refuses_overwrite(self, runner, tmp_path):
        kb_path = tmp_path / "kb.json"
        run(runner, kb_path, "init")
        result = run(runner, kb_path, "init", check=False)
        assert result.exit_code == 1
        run(runner, kb_path, "init", "--force")


class TestScenario:
    def test_full_build_is_clean(self, runner, tmp_path):
        kb_path, ids = build_fixture_via_cli(runner, tmp_path)
        result = run(runner, kb_path, "check")
        assert json.loads(result.stdout) == []
        assert "0 errors, 0 warnings" in result.stderr

    def test_meanings_and_synonyms(self, runner, tmp_path):
        kb_path, ids = build_fixture_via_cli(runner, tmp_path)
        meanings = json.loads(run(runner, kb_path, "meanings",
                                  ids["relais"]).stdout)
        assert [(m["viewpoint_name"], m["concept_surface"]) for m in meanings] \
            == [("météorologie", "SATELLITE"),
                ("télécommunications", "SATELLITE GEOSTATIONNAIRE")]
        synonyms = json.loads(run(runner, kb_path, "synonyms", ids["relais"],
                                  ids["telecom"]).stdout)
        assert [s["surface"] for s in synonyms] == ["SATELLITE DE COMMUNICATION"]

    def test_conflicting_link_exits_1(self, runner, tmp_path):
        kb_path, ids = build_fixture_via_cli(runner, tmp_path)
        result = run(runner, kb_path, "link", ids["relais"], ids["c_sat"],
                     ids["telecom"], check=False)
        assert result.exit_code == 1
        assert "ViewpointConflict" in result.stderr
        assert "SATELLITE GEOSTATIONNAIRE" in result.stderr

    def test_check_exit_nonzero_on_error(self, runner, tmp_path):
        kb_path, ids = build_fixture_via_cli(runner, tmp_path)
        # hand-edit the file into an inconsistent state: check must refuse it
        doc = json.loads(kb_path.read_text(encoding="utf-8"))
        doc["links"][0]["term"] = "t9999"
        kb_path.write_text(json.dumps(doc, ensure_ascii=False),
                           encoding="utf-8")
        result = run(runner, kb_path, "check", check=False)
        assert result.exit_code == 1

    def test_show_concept_frame(self, runner, tmp_path):
        kb_path, ids = build_fixture_via_cli(runner, tmp_path)
        frame = json.loads(run(runner, kb_path, "show-concept",
                               ids["c_geo"]).stdout)
        assert frame["description"] == fixture_spatial.GEO_DESCRIPTION
        assert frame["attributes"] == [
            {"key": "orbite", "value": "terrestre", "origin": ids["c_sat"],
             "shadowed": False}]

    def test_show_concept_unknown(self, runner, tmp_path):
        kb_path, _ = build_fixture_via_cli(runner, tmp_path)
        result = run(runner, kb_path, "show-concept", "c9999", check=False)
        assert result.exit_code == 1
        assert "UnknownConcept" in result.stderr

    def test_search(self, runner, tmp_path):
        kb_path, ids = build_fixture_via_cli(runner, tmp_path)
        hits = json.loads(run(runner, kb_path, "search", "orbite").stdout)
        assert len(hits) >= 1
        assert hits[0]["unit"] == ids["u1"]

    def test_export_graph(self, runner, tmp_path):
        kb_path, _ = build_fixture_via_cli(runner, tmp_path)
        dot = run(runner, kb_path, "export-graph", "--mode", "hierarchy").stdout
        kb = store.load(kb_path)
        assert dot == store.export_graph(kb, "hierarchy")

    def test_delete(self, runner, tmp_path):
        kb_path, ids = build_fixture_via_cli(runner, tmp_path)
        run(runner, kb_path, "delete", ids["meteo"])
        kb = store.load(kb_path)
        assert ids["meteo"] not in kb.viewpoints
        assert ids["l_relais_sat"] not in kb.links


class TestImportTerms:
    def test_import_and_report(self, runner, tmp_path):
        kb_path = tmp_path / "kb.json"
        run(runner, kb_path, "init")
        terms = tmp_path / "terms.tsv"
        terms.write_text("relais\tfr\nantenne\tfr\nrelais\tfr\n",
                         encoding="utf-8")
        result = run(runner, kb_path, "import-terms", str(terms))
        assert "2 created, 1 skipped" in result.output

    def test_missing_kb_file(self, runner, tmp_path):
        result = run(runner, tmp_path / "absent.json", "list-terms",
                     check=False)
        assert result.exit_code == 1


class TestPermissiveFlag:
    def test_anchor_mismatch_permissive(self, runner, tmp_path):
        kb_path, ids = build_fixture_via_cli(runner, tmp_path)
        result = runner.invoke(cli.main, [
            "--kb", str(kb_path), "anchor", ids["l_relais_sat"], ids["u1"],
            "0", "2"])
        assert result.exit_code == 1  # strict by default
        result = runner.invoke(cli.main, [
            "--kb", str(kb_path), "--permissive", "anchor",
            ids["l_relais_sat"], ids["u1"], "0", "2"])
        assert result.exit_code == 0
        check = run(runner, kb_path, "check", check=False)
        assert check.exit_code == 0  # mismatch is warning-level
        assert any(d["rule"] == "SpanMismatch"
                   for d in json.loads(check.stdout))


class TestAtomicRewrite:
    def test_mutation_never_leaves_partial_file(self, runner, tmp_path):
        kb_path, ids = build_fixture_via_cli(runner, tmp_path)
        before = kb_path.read_bytes()
        result = run(runner, kb_path, "link", ids["relais"], ids["c_sat"],
                     ids["telecom"], check=False)
        assert result.exit_code == 1
        assert kb_path.read_bytes() == before
        store.load(kb_path)  # still a valid knowledge base
