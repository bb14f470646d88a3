import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ncball.errors import DimensionError, ParseError
from ncball.freemaps import NcPolyMap
from ncball.optuple import OperatorTuple, compressed_shift_tuple, joint_spectral_radius, row_norm
from ncball.radii import omega
from ncball.sampling import InsideBall, Spectral, random_tuple
from ncball.tuplefile import (
    load_map,
    load_tuple,
    map_to_json,
    parse_map,
    parse_tuple,
    save_map,
    save_tuple,
    tuple_to_json,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def test_minimal_scalar_file():
    T = parse_tuple({"n": 1, "d": 1, "matrices": [[[[0.5, 0]]]]})
    assert T.mats.shape == (1, 1, 1) and T.mats[0, 0, 0] == 0.5


def test_shipped_compressed_shift_fixture(fixtures_dir):
    T = load_tuple(fixtures_dir / "sec6_n2.json")
    assert (T.n, T.d) == (2, 3)
    np.testing.assert_array_equal(T.mats, compressed_shift_tuple(2).mats)
    assert load_tuple(fixtures_dir / "sec6_n3.json").d == 4


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_round_trip_is_bit_exact(n, d, data):
    re = data.draw(arrays(np.float64, (n, d, d), elements=finite))
    im = data.draw(arrays(np.float64, (n, d, d), elements=finite))
    T = OperatorTuple(re + 1j * im)
    back = parse_tuple(json.loads(json.dumps(tuple_to_json(T))))
    assert back.mats.tobytes() == T.mats.tobytes()


def test_file_round_trip(tmp_path):
    T = random_tuple(4, 2, 2, Spectral(0.5))
    save_tuple(T, tmp_path / "t.json")
    assert load_tuple(tmp_path / "t.json").mats.tobytes() == T.mats.tobytes()


def test_malformed_row_names_its_pointer():
    doc = {"n": 1, "d": 2, "matrices": [[[[1, 0], [0, 0]], [[0, 0], "oops"]]]}
    with pytest.raises(ParseError) as exc:
        parse_tuple(doc)
    assert exc.value.pointer == "/matrices/0/1/1"
    assert "/matrices/0/1/1" in str(exc.value)


@pytest.mark.parametrize(
    "doc,pointer",
    [
        ({"d": 1, "matrices": []}, ""),
        ({"n": 1, "d": 1, "matrices": [[[[0.5]]]]}, "/matrices/0/0/0"),
        ({"n": 1, "d": 1, "matrices": [[[["x", 0]]]]}, "/matrices/0/0/0/0"),
        ({"n": 1, "d": 1, "matrices": [[[[0.5, 0]]]], "label": 3}, "/label"),
        ({"n": True, "d": 1, "matrices": []}, "/n"),
    ],
)
def test_schema_errors(doc, pointer):
    with pytest.raises(ParseError) as exc:
        parse_tuple(doc)
    assert exc.value.pointer == pointer


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        parse_tuple({"n": 2, "d": 1, "matrices": [[[[0.5, 0]]]]})
    with pytest.raises(DimensionError):
        parse_tuple({"n": 1, "d": 2, "matrices": [[[[0.5, 0], [0, 0]]]]})


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        load_tuple(p)


def test_map_round_trip(tmp_path, fixtures_dir):
    f = load_map(fixtures_dir / "map_z1z2_z1z1.json")
    assert f.components == ((((1, 2), 1 + 0j),), (((1, 1), 1 + 0j),))
    save_map(f, tmp_path / "m.json")
    assert load_map(tmp_path / "m.json") == f
    pad = load_map(fixtures_dir / "map_zero_pad.json")
    assert pad.m == 3 and pad.components[2] == ()


def test_map_schema_errors():
    with pytest.raises(ParseError) as exc:
        parse_map({"n": 2, "components": [[{"word": [3], "re": 1.0}]]})
    assert exc.value.pointer == "/components/0/0/word"
    with pytest.raises(ParseError):
        parse_map({"n": 2, "components": []})


def test_map_json_shape():
    doc = map_to_json(NcPolyMap.from_terms(2, [{(1, 2): 1 - 2j}]))
    assert doc["components"] == [[{"word": [1, 2], "re": 1.0, "im": -2.0}]]


def test_random_tuple_is_deterministic():
    a = random_tuple(9, 2, 3, Spectral(0.5))
    b = random_tuple(9, 2, 3, Spectral(0.5))
    assert a.mats.tobytes() == b.mats.tobytes()


def test_spectral_target():
    T = random_tuple(1, 2, 3, Spectral(0.5))
    assert joint_spectral_radius(T) == pytest.approx(0.5, abs=1e-6)


def test_inside_ball_target():
    T = random_tuple(2, 2, 3, InsideBall(1.0, 0.3, 6))
    assert row_norm(T) == pytest.approx(0.7, abs=1e-3)
    T2 = random_tuple(2, 2, 2, InsideBall(2.0, 0.5, 4))
    assert omega(T2, 2.0, 4, 1e-8) == pytest.approx(0.5, abs=1e-3)
