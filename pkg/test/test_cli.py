import json
import os

import pytest

from backend.command_logic import handle_command, render_response
from backend.config import CliConfig
from backend.document import load_document, parse_document
from backend.errors import DocumentError
from backend.quantale import INF
from backend.relmat import compose, identity
from backend.subtype import closure
from cli.index import main
from strategies import TROP, bfs_reachability, floyd_warshall

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def doc_path(name):
    return os.path.join(DATA_DIR, name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def error_line(err):
    return next(line for line in err.splitlines() if line.startswith("error: "))


# check

def test_check_passing_document(capsys):
    code, out, _ = run(capsys, "check", doc_path("while.json"))
    assert code == CliConfig.EXIT_HOLDS
    assert out.splitlines() == [
        "HOLDS loop reaches done",
        "HOLDS {start} idle {start}",
        "HOLDS {start} step {done}",
    ]


def test_check_failing_document(capsys):
    code, out, _ = run(capsys, "check", doc_path("while_fails.json"))
    assert code == CliConfig.EXIT_FAILS
    assert out.splitlines() == [
        "HOLDS loop reaches done",
        "FAILS loop stays at start counterexample: s0",
    ]


def test_check_undeclared_atom(capsys):
    code, out, err = run(capsys, "check", doc_path("undeclared_atom.json"))
    assert code == CliConfig.EXIT_ERROR
    assert out == ""
    assert error_line(err).startswith("error: programs.loop: undeclared atom 'jump'")


def test_check_missing_file(capsys):
    code, _, err = run(capsys, "check", doc_path("no_such_document.json"))
    assert code == CliConfig.EXIT_ERROR
    assert error_line(err).startswith("error: <document>: cannot read")


def test_check_json_is_deterministic(capsys):
    first = run(capsys, "--json", "check", doc_path("while_fails.json"))
    second = run(capsys, "--json", "check", doc_path("while_fails.json"))
    assert first[:2] == second[:2]
    payload = json.loads(first[1])
    assert payload["result"] == "success"
    assert payload["holds"] is False
    assert payload["assertions"][1] == {"name": "loop stays at start", "holds": False, "counterexample": "s0"}


def test_json_errors_go_to_stdout(capsys):
    code, out, err = run(capsys, "--json", "check", doc_path("undeclared_atom.json"))
    assert code == CliConfig.EXIT_ERROR
    assert not any(line.startswith("error: ") for line in err.splitlines())
    assert json.loads(out)["key"] == "programs.loop"


def test_quantale_override(capsys):
    # zero entries of step become zero-cost edges, so the bare step may stay at s0
    code, out, _ = run(capsys, "--quantale", "tropical", "check", doc_path("while.json"))
    assert code == CliConfig.EXIT_FAILS
    assert out.splitlines() == [
        "HOLDS loop reaches done",
        "HOLDS {start} idle {start}",
        "FAILS {start} step {done} counterexample: s0",
    ]
    code, _, err = run(capsys, "--quantale", "boolean", "dump", doc_path("tropical_graph.json"), "roads")
    assert code == CliConfig.EXIT_ERROR
    assert error_line(err).startswith("error: matrices.roads.entries:")


# transformers

def test_sp_and_wlp_on_programs(capsys):
    assert run(capsys, "sp", doc_path("while.json"), "idle", "start")[1] == "{s0}\n"
    assert run(capsys, "sp", doc_path("while.json"), "loop", "start")[1] == "{s1}\n"
    assert run(capsys, "wlp", doc_path("while.json"), "loop", "done")[1] == "{s0, s1}\n"


def test_sp_on_a_tropical_matrix_prints_a_diagonal(capsys):
    code, out, _ = run(capsys, "sp", doc_path("tropical_graph.json"), "roads", "origin")
    assert code == CliConfig.EXIT_HOLDS
    assert out == "[v0: inf, v1: 0, v2: 0]\n"


def test_transformer_unknown_names(capsys):
    code, _, err = run(capsys, "wlp", doc_path("while.json"), "loop", "nowhere")
    assert code == CliConfig.EXIT_ERROR
    assert error_line(err).startswith("error: nowhere:")
    code, _, err = run(capsys, "sp", doc_path("while.json"), "teleport", "start")
    assert code == CliConfig.EXIT_ERROR
    assert error_line(err).startswith("error: teleport:")


# matrices

def test_star_of_tropical_graph_is_shortest_paths():
    code, response = handle_command("star", {"document": doc_path("tropical_graph.json"), "target": "roads"})
    assert code == CliConfig.EXIT_HOLDS
    roads = load_document(doc_path("tropical_graph.json")).matrices["roads"]
    expected = [[TROP.to_json(d) for d in row] for row in floyd_warshall(roads)]
    assert response["matrix"]["entries"] == expected
    assert response["matrix"]["entries"][0] == [0, "7/2", 1]


def test_star_of_boolean_adjacency_is_reachability():
    code, response = handle_command("star", {"document": doc_path("boolean_adjacency.json"), "target": "edges"})
    assert code == CliConfig.EXIT_HOLDS
    edges = load_document(doc_path("boolean_adjacency.json")).matrices["edges"]
    entries = response["matrix"]["entries"]
    assert {(i, j) for i in range(4) for j in range(4) if entries[i][j]} == bfs_reachability(edges)


def test_star_of_zero_prints_the_identity(capsys):
    code, out, _ = run(capsys, "star", doc_path("boolean_adjacency.json"), "zero")
    assert code == CliConfig.EXIT_HOLDS
    lines = out.splitlines()
    assert lines[0] == "N -> N"
    assert lines[1].split() == ["a", "b", "c", "d"]
    assert [line.split() for line in lines[2:]] == [
        ["a", "1", "0", "0", "0"],
        ["b", "0", "1", "0", "0"],
        ["c", "0", "0", "1", "0"],
        ["d", "0", "0", "0", "1"],
    ]


def test_star_is_unsupported_for_languages(capsys):
    code, _, err = run(capsys, "star", doc_path("words.json"), "delta")
    assert code == CliConfig.EXIT_ERROR
    assert "UnsupportedOperationError" in err


def test_dump_and_compile(capsys):
    code, out, _ = run(capsys, "dump", doc_path("tropical_graph.json"), "roads")
    assert code == CliConfig.EXIT_HOLDS
    assert [line.split() for line in out.splitlines()[2:]] == [
        ["v0", "inf", "4", "1"],
        ["v1", "inf", "inf", "inf"],
        ["v2", "inf", "5/2", "inf"],
    ]
    code, out, _ = run(capsys, "compile", doc_path("while.json"), "loop")
    assert code == CliConfig.EXIT_HOLDS
    assert [line.split() for line in out.splitlines()[2:]] == [["s0", "0", "1"], ["s1", "0", "1"]]


def test_language_entries_render_as_word_sets():
    code, response = handle_command("dump", {"document": doc_path("words.json"), "target": "delta"})
    assert code == CliConfig.EXIT_HOLDS
    assert response["matrix"]["entries"] == [[[], ["a"]], [["b"], []]]
    assert render_response(response).splitlines()[2].split() == ["q0", "{}", '{"a"}']


def test_unknown_command():
    code, response = handle_command("prove", {"document": doc_path("while.json")})
    assert code == CliConfig.EXIT_ERROR
    assert response["message"] == "Unknown command: prove"


# document loading

BASE = {"quantale": "boolean", "types": {"S": ["s0", "s1"]}}


@pytest.mark.parametrize(
    "extra,key",
    [
        ({"extras": {}}, "extras"),
        ({"quantale": "probability"}, "quantale"),
        ({"types": {"S": "s0"}}, "types.S"),
        ({"types": {"S": ["s0", "s0"]}}, "types.S"),
        ({"types": {"S": ["s0"], "P": {"sum": ["S", "R"]}}}, "types.P.sum"),
        ({"state": "R"}, "state"),
        ({"matrices": {"m": {"src": "S", "dst": "S"}}}, "matrices.m"),
        ({"matrices": {"m": {"src": "S", "dst": "R", "entries": []}}}, "matrices.m.dst"),
        ({"matrices": {"m": {"src": "S", "dst": "S", "entries": [[1, 0]]}}}, "matrices.m.entries"),
        ({"matrices": {"m": {"src": "S", "dst": "S", "entries": [[2, 0], [0, 1]]}}}, "matrices.m.entries"),
        ({"predicates": {"p": {"type": "R", "members": []}}}, "predicates.p.type"),
        ({"predicates": {"p": {"type": "S", "members": ["s9"]}}}, "predicates.p"),
        ({"predicates": {"p": {"type": "S"}}}, "predicates.p"),
        ({"programs": {"x": {"skip": {}}}}, "state"),
        ({"state": "S", "programs": {"x": {"while": {"cond": "p", "body": {"skip": {}}}}}}, "programs.x"),
        ({"state": "S", "programs": {"x": {"loop": {}}}}, "programs.x"),
        ({"assertions": [{"pre": "p"}]}, "assertions[0]"),
    ],
)
def test_parse_document_errors(extra, key):
    with pytest.raises(DocumentError) as err:
        parse_document({**BASE, **extra})
    assert err.value.key == key


def test_assertions_must_reference_exactly_one_target():
    raw = {
        **BASE,
        "state": "S",
        "matrices": {"m": {"src": "S", "dst": "S", "entries": [[1, 0], [0, 1]]}},
        "predicates": {"p": {"type": "S", "members": ["s0"]}},
        "programs": {"x": {"skip": {}}},
    }
    with pytest.raises(DocumentError) as err:
        parse_document({**raw, "assertions": [{"pre": "p", "post": "p", "prog": "x", "term": "m"}]})
    assert err.value.key == "assertions[0]"
    with pytest.raises(DocumentError) as err:
        parse_document({**raw, "assertions": [{"pre": "p", "post": "q", "term": "m"}]})
    assert err.value.key == "assertions[0].post"
    doc = parse_document({**raw, "assertions": [{"pre": "p", "post": "p", "term": "m"}]})
    assert doc.assertions[0].name == "{p} m {p}"


def test_sum_types_in_documents():
    raw = {
        "quantale": "tropical",
        "types": {"A": ["a"], "B": ["b0", "b1"], "AB": {"sum": ["A", "B"]}},
        "state": "AB",
        "matrices": {"hop": {"src": "AB", "dst": "AB", "entries": [["inf", 2, "inf"], ["inf", "inf", "0.5"], [0, "inf", "inf"]]}},
    }
    doc = parse_document(raw)
    assert doc.types["AB"].labels == ("A.a", "B.b0", "B.b1")
    assert doc.sums["AB"].components == (doc.types["A"], doc.types["B"])
    hop = doc.env.atoms["hop"]
    star = closure(hop).mat
    assert star.entry("A.a", "B.b1") == compose(hop, hop).entry("A.a", "B.b1") == 2.5
    assert star.entry("B.b1", "A.a") == 0
    assert star.entry("B.b1", "B.b0") == 2
    assert identity(doc.state, doc.quantale).entry("A.a", "B.b0") is INF


def test_quantale_override_wins():
    doc = parse_document({"quantale": "tropical", "types": {"S": ["s0"]}}, "natural")
    assert doc.quantale.kind == "natural"
    with pytest.raises(DocumentError):
        parse_document({"quantale": "boolean"}, "probability")


def while_document():
    with open(doc_path("while.json"), encoding="utf-8") as handle:
        return json.load(handle)


def set_in(path, value):
    def edit(raw):
        target = raw
        for step in path[:-1]:
            target = target[step]
        target[path[-1]] = value
        return raw
    return edit


@pytest.mark.parametrize(
    "edit,key",
    [
        (set_in(["assertions", 0, "pre"], ["b"]), "assertions[0].pre"),
        (set_in(["assertions", 1, "prog"], {"skip": {}}), "assertions[1].prog"),
        (set_in(["assertions", 0, "name"], 7), "assertions[0].name"),
        (set_in(["programs", "idle"], {"cond": {"if": ["b"], "then": {"skip": {}}, "else": {"skip": {}}}}),
         "programs.idle.cond.if"),
        (set_in(["programs", "loop", "while", "cond"], {"pred": "b"}), "programs.loop.while.cond"),
        (set_in(["quantale"], {"heyting": {"elements": ["lo", "hi"], "leq": [["lo"]]}}), "quantale"),
        (set_in(["quantale"], {"heyting": {"elements": ["lo", ["hi"]]}}), "quantale"),
        (set_in(["quantale"], {"heyting": {"elements": ["lo", "hi"], "leq": 3}}), "quantale"),
    ],
)
def test_malformed_references_report_their_key(tmp_path, edit, key):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(edit(while_document())), encoding="utf-8")
    code, response = handle_command("check", {"document": str(path)})
    assert code == CliConfig.EXIT_ERROR
    assert response["result"] == "error"
    assert response["key"] == key


def test_non_utf8_document_reports_the_document_key(tmp_path, capsys):
    path = tmp_path / "latin1.json"
    path.write_bytes(b'{"quantale": "boolean", "types": {"S": ["caf\xe9"]}}')
    code, _, err = run(capsys, "check", str(path))
    assert code == CliConfig.EXIT_ERROR
    assert error_line(err).startswith("error: <document>: not UTF-8 text")


@pytest.mark.parametrize("raw", ["1e999999999", "1e3", "-1", "+2", "1/0", " 3"])
def test_tropical_strings_are_plain_decimals_or_fractions(raw):
    matrix = {"src": "S", "dst": "S", "entries": [[raw]]}
    with pytest.raises(DocumentError) as err:
        parse_document({"quantale": "tropical", "types": {"S": ["s0"]}, "matrices": {"m": matrix}})
    assert err.value.key == "matrices.m.entries"
