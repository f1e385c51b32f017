import json
import subprocess
import sys

import pytest

from schemalg.cli import main
from schemalg.frontend import translate
from schemalg.algebra import validate
from schemalg.json_model import parse_json


@pytest.fixture
def write(tmp_path):
    def go(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
        return str(p)

    return go


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_validate(write, capsys):
    schema = write("s.json", {"properties": {"foo": {}}, "additionalProperties": {"type": "boolean"}})
    good = write("good.json", {"foo": 1, "extra": True})
    bad = write("bad.json", {"extra": 1})
    assert run(capsys, "validate", schema, good)[:2] == (0, "valid")
    assert run(capsys, "validate", schema, bad)[:2] == (1, "invalid")


def test_witness_and_sat(write, capsys):
    schema = write("s.json", {"type": "integer", "minimum": 2, "multipleOf": 3})
    code, out, _ = run(capsys, "witness", schema)
    assert code == 0 and out == "3"
    assert run(capsys, "sat", schema)[:2] == (0, "SATISFIABLE")
    empty = write("e.json", {"allOf": [{"type": "string"}, {"type": "null"}]})
    assert run(capsys, "sat", empty)[:2] == (1, "UNSATISFIABLE")


def test_json_output(write, capsys):
    schema = write("s.json", {"type": "array", "minItems": 1, "items": {"type": "null"}})
    code, out, _ = run(capsys, "witness", schema, "--format", "json", "--trace")
    body = json.loads(out)
    assert code == 0 and body["answer"] == "satisfiable" and body["witness"] == [None]
    assert body["diagnostics"] == [] and len(body["trace"]) == body["passes"] + 1


def test_include_and_equiv(write, capsys):
    a = write("a.json", {"type": "integer"})
    b = write("b.json", {"type": "number"})
    assert run(capsys, "include", a, b)[:2] == (0, "INCLUDED")
    code, out, _ = run(capsys, "include", b, a)
    assert code == 1
    value = parse_json(out)
    assert validate(value, translate({"type": "number"})) and not validate(value, translate({"type": "integer"}))
    code, out, _ = run(capsys, "equiv", a, b)
    assert code == 1 and out.startswith("right-not-in-left")
    assert run(capsys, "equiv", a, a)[:2] == (0, "EQUIVALENT")


def test_negate_emits_json_schema(write, capsys, tmp_path):
    schema = write("s.json", {"type": "object", "required": ["a"]})
    code, out, _ = run(capsys, "negate", schema, "--json-schema")
    assert code == 0
    neg = translate(parse_json(out))
    for v in ({}, {"a": 1}, 1, None, [1]):
        v = parse_json(json.dumps(v))
        assert validate(v, neg) == (not validate(v, translate({"type": "object", "required": ["a"]})))


def test_normalize_trace(write, capsys):
    schema = write("s.json", {"not": {"type": "string"}})
    code, out, _ = run(capsys, "normalize", schema, "--trace", "--format", "json")
    phases = [p["phase"] for p in json.loads(out)["trace"]]
    assert code == 0 and phases[0] == "not-elimination" and phases[-1] == "prepare"


def test_errors_exit_2(write, capsys):
    schema = write("s.json", {"type": "array", "minItems": 2, "uniqueItems": True})
    code, _, err = run(capsys, "witness", schema)
    assert code == 2 and err.startswith("error: UnsupportedUniqueness")
    broken = write("broken.json", "{")
    assert run(capsys, "sat", broken)[0] == 2
    missing = write("m.json", {"$ref": "#/definitions/nope"})
    assert run(capsys, "sat", missing)[0] == 2


def test_unknown_keywords_are_diagnostics(write, capsys):
    schema = write("s.json", {"frobnicate": 1})
    code, out, _ = run(capsys, "sat", schema, "--format", "json")
    assert code == 0 and json.loads(out)["diagnostics"]


def test_extra_documents(write, capsys):
    other = write("other.json", {"$id": "http://example.com/n.json", "type": "number"})
    schema = write("s.json", {"$ref": "http://example.com/n.json"})
    assert run(capsys, "witness", schema, "--document", other)[:2] == (0, "0")


def test_console_entry_point(write):
    schema = write("s.json", {"type": "null"})
    res = subprocess.run([sys.executable, "-m", "schemalg.cli", "witness", schema], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "null"
