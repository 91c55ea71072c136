from __future__ import annotations

import copy
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kproj.builtins import build_documents, builtin_names, load_builtin
from kproj.errors import SpecError
from kproj.scalar import Scalar
from kproj.serialize import (CoefficientCache, SchemaError, decode_cache, document_dict,
                             document_from_dict, dumps, encode_cache, load, loads, scalar_to_json,
                             sequence_to_json)
from kproj.sequences import (ExplicitPrefix, add, arith_subseq, bar_transform, cauchy, prefix,
                             pointwise_mul, scalar_mul)

from conftest import scalars


def rebuild(doc) -> dict:
    out = document_dict(radix=doc.radix, name=doc.name, description=doc.description,
                        field_order=doc.field_order, sequence=doc.sequence, system=doc.system,
                        product=doc.product, chain=doc.chain, target=doc.target)
    return json.loads(dumps(out))


@pytest.mark.parametrize("name", builtin_names())
def test_builtin_round_trip(name):
    doc = load_builtin(name)
    again = rebuild(doc)
    assert again == doc.raw
    assert document_from_dict(again).digest == doc.digest
    assert prefix(document_from_dict(again).view(), 64) == prefix(doc.view(), 64)


def test_composite_round_trip():
    rng = random.Random(2)
    a = ExplicitPrefix([rng.randint(-4, 4) for _ in range(10)], 1)
    b = load_builtin("thue-morse").sequence
    seq = add(cauchy(a, b), scalar_mul(Scalar(Fraction(3, 2)), arith_subseq(pointwise_mul(a, b), 1, 3)))
    seq = add(seq, bar_transform(load_builtin("rudin-shapiro-type").sequence, 2))
    doc = document_from_dict(json.loads(dumps(document_dict(radix=2, sequence=seq))))
    assert prefix(doc.view(), 100) == prefix(seq, 100)
    assert sequence_to_json(doc.sequence) == sequence_to_json(seq)


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), scalars(n))))
def test_scalar_json_round_trip(case):
    order, s = case
    raw = {"format": "kproj-spec", "version": 1, "radix": 2,
           "field": {"cyclotomic_order": order},
           "sequence": {"kind": "explicit_prefix", "values": [scalar_to_json(s)], "pad": "0"}}
    assert document_from_dict(raw).sequence.value(0) == s


def test_cyclotomic_scalar_forms():
    raw = {"format": "kproj-spec", "version": 1, "radix": 2, "field": {"cyclotomic_order": 3},
           "sequence": {"kind": "explicit_prefix", "values": [{"zeta": 1}, ["1/2", 3], "-2"]}}
    vals = prefix(document_from_dict(raw).view(), 4)
    z = Scalar.zeta(3, 1)
    assert vals[0] == z
    assert vals[1] == Scalar(Fraction(1, 2), 3) + 3 * z
    assert vals[2] == Scalar(-2, 3) and vals[3] == Scalar(0, 3)


def _base():
    return copy.deepcopy(build_documents()["stern"])


@pytest.mark.parametrize("mutate, path", [
    (lambda d: d.pop("radix"), "$"),
    (lambda d: d.update(version=2), "$.version"),
    (lambda d: d.update(format="other"), "$.format"),
    (lambda d: d["sequence"].update(kind="nope"), "$.sequence.kind"),
    (lambda d: d["sequence"]["coefficients"]["levels"][0].__setitem__(1, "x"),
     "$.sequence.coefficients.levels[0][1]"),
    (lambda d: d["system"]["seeds"]["levels"][0].append("1"), "$.system.seeds.levels[0]"),
    (lambda d: d["system"]["matrices"].update(tail={"cycle": 5}), "$.system.matrices.tail"),
    (lambda d: d["system"]["matrices"]["levels"][0][1][0].__setitem__(0, ["1", "2"]),
     "$.system.matrices.levels[0][1][0][0]"),
    (lambda d: d.update(radix=True), "$.radix"),
])
def test_schema_errors_name_the_path(mutate, path):
    doc = _base()
    mutate(doc)
    with pytest.raises(SchemaError) as err:
        document_from_dict(doc)
    assert err.value.path == path
    assert str(err.value).startswith(path)


def test_document_needs_a_form():
    with pytest.raises(SchemaError, match="one of"):
        document_from_dict({"format": "kproj-spec", "version": 1, "radix": 2})


def test_construction_errors_carry_path():
    doc = _base()
    doc["sequence"]["coefficients"]["levels"][0] = ["1"]  # degree 2 needs two coefficients
    with pytest.raises(SchemaError) as err:
        document_from_dict(doc)
    assert err.value.path.startswith("$.sequence")


def test_json_syntax_error_position():
    with pytest.raises(SchemaError) as err:
        loads('{\n  "format": "kproj-spec",\n  "radix": 2,,\n}')
    assert (err.value.line, err.value.column) == (3, 14)
    assert "line 3, column 14" in str(err.value)


def test_load_from_file(tmp_path):
    path = tmp_path / "tm.json"
    path.write_text(dumps(build_documents()["thue-morse"]))
    assert load(path).digest == load_builtin("thue-morse").digest


def test_digest_is_key_order_independent():
    raw = build_documents()["ooto"]
    shuffled = dict(reversed(list(raw.items())))
    assert document_from_dict(shuffled).digest == document_from_dict(raw).digest
    raw2 = dict(raw, description="changed")
    assert document_from_dict(raw2).digest != document_from_dict(raw).digest


# --- coefficient cache

def _cache(values, order=1):
    return CoefficientCache(b"\x07" * 32, 2, 1, order, tuple(values))


@given(st.lists(st.fractions(max_denominator=10 ** 12), max_size=30))
def test_cache_round_trip_rational(values):
    c = _cache([Scalar(v) for v in values])
    data = encode_cache(c)
    assert decode_cache(data) == c
    assert encode_cache(decode_cache(data)) == data


@given(st.lists(scalars(5), max_size=10))
def test_cache_round_trip_cyclotomic(values):
    c = _cache(values, 5)
    assert decode_cache(encode_cache(c)).values == tuple(values)


def test_cache_header_layout():
    data = encode_cache(_cache([Scalar(-1)]))
    assert data[:4] == b"KPRJ"
    assert int.from_bytes(data[4:6], "little") == 1
    assert data[6:38] == b"\x07" * 32
    assert int.from_bytes(data[50:58], "little") == 1
    # -1 then 1, each as length 1 + one signed byte
    assert data[58:] == b"\x01\x00\x00\x00\xff\x01\x00\x00\x00\x01"


def test_cache_corruption():
    data = encode_cache(_cache([Scalar(Fraction(5, 3)), Scalar(2)]))
    with pytest.raises(SpecError, match="magic"):
        decode_cache(b"XXXX" + data[4:])
    with pytest.raises(SpecError, match="truncated"):
        decode_cache(data[:-1])
    with pytest.raises(SpecError, match="header"):
        decode_cache(data[:10])
    with pytest.raises(SpecError, match="trailing"):
        decode_cache(data + b"\x00")
    with pytest.raises(SpecError, match="version"):
        decode_cache(data[:4] + b"\x09\x00" + data[6:])
    bad_den = encode_cache(_cache([Scalar(1)]))[:-5] + b"\x01\x00\x00\x00\x00"
    with pytest.raises(SpecError, match="denominator"):
        decode_cache(bad_den)


def test_cache_matches_document():
    doc = load_builtin("stern")
    c = CoefficientCache(doc.digest, 2, doc.dimension, 1, ())
    assert c.matches(doc)
    assert not c.matches(load_builtin("thue-morse"))
