import json

import numpy as np
import pytest

from kreinlab.serialize import (
    dumps_report,
    matrix_from_obj,
    matrix_to_obj,
    problem_from_obj,
)


def test_matrix_roundtrip_is_exact(rng):
    m = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    m[0, 0] = 1e-17 + 0.1j
    back = matrix_from_obj(matrix_to_obj(m))
    assert np.array_equal(back, m)      # bit-exact, not approximate


def test_matrix_roundtrip_survives_json_text(rng):
    m = rng.standard_normal((2, 2)) / 3.0
    text = dumps_report({"m": matrix_to_obj(m)})
    back = matrix_from_obj(json.loads(text)["m"])
    assert np.array_equal(back, m)


def test_vector_promotes_to_column():
    obj = matrix_to_obj(np.array([1.0, 2.0]))
    assert (obj["rows"], obj["cols"]) == (2, 1)


def test_matrix_from_obj_validation():
    with pytest.raises(ValueError):
        matrix_from_obj([1, 2, 3])
    with pytest.raises(ValueError):
        matrix_from_obj({"rows": 2, "cols": 2, "re": [1.0], "im": [0.0]})
    with pytest.raises(ValueError):
        matrix_from_obj({"rows": 2, "cols": 2})


def test_problem_from_obj_missing_key():
    with pytest.raises(ValueError, match="missing key"):
        problem_from_obj({"J": matrix_to_obj(np.eye(2))})


def test_report_is_deterministic_and_sorted():
    a = dumps_report({"b": 1.0 / 3.0, "a": [1, 2], "c": {"y": True, "x": None}})
    b = dumps_report({"c": {"x": None, "y": True}, "a": [1, 2], "b": 1.0 / 3.0})
    assert a == b
    assert a.endswith("\n")
    assert a.index('"a"') < a.index('"b"') < a.index('"c"')


def test_report_float_formatting():
    text = dumps_report({"v": 1.0 / 3.0})
    assert "0.33333333333333331" in text
    # integral floats keep a trailing .0 so types survive a roundtrip
    assert json.loads(dumps_report({"v": 2.0}))["v"] == 2.0
    assert "2.0" in dumps_report({"v": 2.0})


def test_report_numpy_scalars():
    text = dumps_report({"flag": np.bool_(True), "n": np.int64(3),
                         "x": np.float64(0.5)})
    parsed = json.loads(text)
    assert parsed == {"flag": True, "n": 3, "x": 0.5}


def test_report_rejects_non_finite():
    with pytest.raises(ValueError):
        dumps_report({"v": float("nan")})
    with pytest.raises(ValueError):
        dumps_report({"v": float("inf")})
