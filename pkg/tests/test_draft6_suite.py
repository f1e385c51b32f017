"""Runs the bundled Draft-06 files of the JSON Schema Test Suite."""

import json
import warnings
from pathlib import Path

import pytest

from schemalg.algebra import validate
from schemalg.frontend import translate
from schemalg.json_model import parse_json
from schemalg.regex import AlphabetError

DATA = Path(__file__).parent / "data"
SUITE = DATA / "draft6"
EXCLUSIONS = json.loads((DATA / "draft6_exclusions.json").read_text())["files"]


def _load(path: Path):
    return parse_json(path.read_bytes())


def documents():
    docs = {}
    for p in sorted((DATA / "remotes").rglob("*.json")):
        docs["http://localhost:1234/" + p.relative_to(DATA / "remotes").as_posix()] = _load(p)
    docs["http://json-schema.org/draft-06/schema"] = _load(DATA / "draft6-metaschema.json")
    return docs


DOCUMENTS = documents()


def excluded(file, group):
    return any(e["group"] == group for e in EXCLUSIONS.get(file, ()))


def cases():
    out = []
    for path in sorted(SUITE.glob("*.json")):
        for gi, group in enumerate(_load(path)):
            if excluded(path.name, group["description"]):
                continue
            for ti, test in enumerate(group["tests"]):
                out.append(pytest.param(group["schema"], test["data"], test["valid"],
                                        id=f"{path.stem}-{gi}-{ti}"))
    return out


_ENVS = {}


def _env(schema):
    key = json.dumps(schema, sort_keys=True, default=str)
    if key not in _ENVS:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            _ENVS[key] = translate(schema, DOCUMENTS)
    return _ENVS[key]


@pytest.mark.parametrize("schema, data, valid", cases())
def test_suite_case(schema, data, valid):
    assert validate(data, _env(schema)) == valid


def excluded_groups():
    out = []
    for name, entries in EXCLUSIONS.items():
        groups = {g["description"]: g for g in _load(SUITE / name)}
        for e in entries:
            out.append(pytest.param(groups[e["group"]]["schema"], id=f"{name}:{e['group']}"))
    return out


@pytest.mark.parametrize("schema", excluded_groups())
def test_exclusions_are_still_needed(schema):
    with pytest.raises(AlphabetError):
        translate(schema, DOCUMENTS)
