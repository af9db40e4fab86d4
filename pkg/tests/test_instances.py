import json

import numpy as np
import pytest

from swstab import (
    InstanceParseError,
    assert_all_unstable,
    generate_random_instance,
    parse_instance,
    write_instance,
)


def test_roundtrip_is_exact(tmp_path, diag_family):
    path = tmp_path / "inst.json"
    write_instance(path, diag_family, name="diagonal-pair", seed=None)
    fam = parse_instance(path)
    assert fam.size == diag_family.size
    for a, b in zip(fam.subsystems, diag_family.subsystems):
        assert np.array_equal(a, b)
    data = json.loads(path.read_text())
    assert data["name"] == "diagonal-pair"
    assert data["dim"] == 2


def _write(tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    return path


def test_parse_rejects_invalid_json(tmp_path):
    with pytest.raises(InstanceParseError, match="invalid JSON"):
        parse_instance(_write(tmp_path, "{not json"))


def test_parse_rejects_missing_keys(tmp_path):
    with pytest.raises(InstanceParseError, match="expected keys"):
        parse_instance(_write(tmp_path, {"dim": 2}))


def test_parse_rejects_bad_dim(tmp_path):
    with pytest.raises(InstanceParseError, match="'dim'"):
        parse_instance(_write(tmp_path, {"dim": 0, "matrices": []}))


def test_parse_rejects_single_matrix(tmp_path):
    with pytest.raises(InstanceParseError, match="at least two"):
        parse_instance(_write(tmp_path, {"dim": 1, "matrices": [[[2.0]]]}))


def test_parse_reports_offending_row(tmp_path):
    bad = {"dim": 2, "matrices": [[[1.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [0.0]]]}
    with pytest.raises(InstanceParseError, match="matrix 2, row 2"):
        parse_instance(_write(tmp_path, bad))


def test_parse_reports_offending_entry(tmp_path):
    bad = {"dim": 2, "matrices": [[[1.0, 0.0], [0.0, 1.0]], [[1.0, "x"], [0.0, 1.0]]]}
    with pytest.raises(InstanceParseError, match="matrix 2, row 1, entry 2"):
        parse_instance(_write(tmp_path, bad))


def test_parse_rejects_booleans_and_non_finite(tmp_path):
    bad = {"dim": 1, "matrices": [[[True]], [[2.0]]]}
    with pytest.raises(InstanceParseError, match="not a number"):
        parse_instance(_write(tmp_path, bad))
    bad = {"dim": 1, "matrices": [[[float("inf")]], [[2.0]]]}
    path = tmp_path / "inf.json"
    path.write_text('{"dim": 1, "matrices": [[[Infinity]], [[2.0]]]}')
    with pytest.raises(InstanceParseError, match="non-finite"):
        parse_instance(path)


def test_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        parse_instance(tmp_path / "does-not-exist.json")


def test_random_instance_deterministic_and_unstable():
    a = generate_random_instance(3, 2, seed=42)
    b = generate_random_instance(3, 2, seed=42)
    for x, y in zip(a.subsystems, b.subsystems):
        assert np.array_equal(x, y)
    assert assert_all_unstable(a) == []
    c = generate_random_instance(3, 2, seed=43)
    assert not all(
        np.array_equal(x, y) for x, y in zip(a.subsystems, c.subsystems)
    )


def test_random_instance_validates_arguments():
    with pytest.raises(ValueError):
        generate_random_instance(1, 2, seed=0)
    with pytest.raises(ValueError):
        generate_random_instance(2, 0, seed=0)
