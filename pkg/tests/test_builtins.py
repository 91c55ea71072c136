from __future__ import annotations

import json
from importlib import resources

import pytest

from kproj.builtins import (ALIASES, BUILTINS, build_documents, builtin_names, canonical_name,
                            load_builtin, resolve_spec)
from kproj.errors import SpecError
from kproj.serialize import dumps
from kproj.sequences import prefix


def test_shipped_data_in_sync():
    docs = build_documents()
    assert set(docs) == set(BUILTINS)
    for name, doc in docs.items():
        text = resources.files("kproj").joinpath("data", f"{name}.json").read_text()
        assert text == dumps(doc), f"data/{name}.json is stale; rerun python3 -m kproj.builtins"


@pytest.mark.parametrize("alias, name", sorted(ALIASES.items()))
def test_aliases(alias, name):
    assert canonical_name(alias) == name
    assert load_builtin(alias).digest == load_builtin(name).digest


def test_unknown_name():
    with pytest.raises(SpecError, match="unknown builtin"):
        load_builtin("no-such-thing")


def test_resolve(tmp_path):
    assert resolve_spec("builtin:stern").name == "stern"
    path = tmp_path / "s.json"
    path.write_text(json.dumps(build_documents()["ooto"]))
    assert resolve_spec(str(path)).name == "ooto"
    with pytest.raises(OSError):
        resolve_spec(str(tmp_path / "missing.json"))


def test_known_prefixes():
    def ints(name, n):
        return [int(v.to_fraction()) for v in prefix(load_builtin(name).view(), n)]

    assert ints("thue-morse", 8) == [1, -1, -1, 1, -1, 1, 1, -1]
    assert ints("signed-word", 8) == [1, 1, 1, -1, 1, -1, -1, -1]
    assert ints("stern", 8) == [1, 1, 2, 1, 3, 2, 3, 1]
    assert ints("lacunary-sum", 5) == [0, 1, 2, 0, 2]
    assert ints("rudin-shapiro-type", 8) == [0, 0, 0, 1, 0, 0, 1, 0]
    assert ints("ooto", 5) == [0, 0, 1, 0, 0]
    assert ints("ternary-product", 9) == [1, 1, 2, 1, 1, 2, 2, 2, 4]


@pytest.mark.parametrize("name", builtin_names())
def test_every_builtin_has_a_view(name):
    doc = load_builtin(name)
    assert doc.name == name and doc.description == BUILTINS[name]
    assert len(prefix(doc.view(), 32)) == 32
