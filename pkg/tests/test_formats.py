import json
from fractions import Fraction

import pytest
from conftest import GF3, QQ, pres

from treematroid.errors import FormatError
from treematroid.fixtures import (
    FIXTURES,
    fixture,
    fixture_path,
    tri,
    twosum,
    write_fixtures,
)
from treematroid.formats import dumps, kind_of, load, loads


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_shipped_fixture_round_trips_byte_identically(name):
    text = fixture_path(name).read_text()
    inst = loads(text)
    assert inst.kind == FIXTURES[name][0]
    assert dumps(inst.value, inst.kind, inst.seed) == text


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_shipped_fixture_matches_builder(name, tmp_path):
    write_fixtures(tmp_path)
    assert (tmp_path / f"{name}.json").read_bytes() == fixture_path(name).read_bytes()


def test_tri_file_is_the_fixture():
    assert load(fixture_path("TRI")).value == tri()


def test_twosum_shares_only_g():
    tree = load(fixture_path("TWOSUM")).value
    assert tree.shared("1", "2") == ("g",)
    assert tree.dummy_edges == ("g",)
    assert tree.presentations() == twosum().presentations()


def test_ground_order_is_kept():
    p = pres("cab", {"c": 1, "a": 1, "b": 1})
    back = loads(dumps(p)).value
    assert back.ground == ("c", "a", "b")
    assert json.loads(dumps(p))["ground"] == ["c", "a", "b"]


def test_rationals_are_p_over_q():
    p = pres("ab", {"a": 1, "b": Fraction(-1, 2)}, field=QQ)
    text = dumps(p)
    assert '"-1/2"' in text
    assert loads(text).value == p


def test_one_vector_per_line():
    lines = fixture_path("TRI").read_text().splitlines()
    assert '    {"a": 1, "b": 1, "c": 1}' in lines


def test_seed_survives():
    text = dumps(tri(), seed=17)
    inst = loads(text)
    assert inst.seed == 17 and dumps(inst.value, inst.kind, inst.seed) == text


def test_covectors_default_to_the_complement():
    obj = json.loads(dumps(tri()))
    del obj["covectors"]
    assert loads(json.dumps(obj)).value == tri()


def test_modulus_four_is_rejected_with_position():
    text = dumps(tri()).replace('"GF(2)"', '"GF(4)"')
    with pytest.raises(FormatError, match="modulus not prime") as info:
        loads(text)
    assert (info.value.line, info.value.column) == (3, 12)


def test_bad_scalar_is_located():
    text = dumps(tri()).replace('"b": 1, "c": 1}', '"b": "x", "c": 1}')
    with pytest.raises(FormatError, match="bad scalar") as info:
        loads(text)
    assert info.value.line == 6


def test_broken_json_reports_line_and_column():
    with pytest.raises(FormatError) as info:
        loads('{\n  "kind": "presentation",\n  "field" "GF(2)"\n}')
    assert info.value.line == 3


@pytest.mark.parametrize(
    "text, msg",
    [
        ("[]", "object"),
        ('{"kind": "nope"}', "kind"),
        ('{"kind": "presentation", "field": "GF(2)", "ground": ["a", "a"], "vectors": []}', "repeated edge id"),
        ('{"kind": "presentation", "field": "GF(2)", "ground": ["a"], "vectors": [{"z": 1}]}', "outside the ground set"),
    ],
)
def test_schema_violations(text, msg):
    with pytest.raises(FormatError, match=msg):
        loads(text)


def test_kind_detection():
    assert kind_of(tri()) == "presentation"
    assert kind_of(twosum()) == "tree"
    assert kind_of(fixture("K4")) == "td"


def test_gf3_entries_round_trip():
    p = pres("abc", {"a": 1, "b": 2}, {"c": 1}, field=GF3)
    text = dumps(p)
    assert '"b": 2' in text and loads(text).value == p
