"""Serialization: 17-digit floats, JSON schemas, CSV stability, tables."""

import json
import math

import jsonschema
import pytest

from pzf.forcing import STANDARD
from pzf.graphs import make_grid, make_path
from pzf.montecarlo import estimate_ept
from pzf.reporting import (SUMMARY_CSV_HEADER, SUMMARY_SCHEMA,
                           RunConfig, csv_quote, float17, format_grid_table,
                           format_hypercube_table, json_dumps,
                           normalize_start_policy, summary_csv,
                           summary_to_dict, validate)


def test_float17_roundtrip():
    for x in [7 / 3, 1e-300, 1234.5678e17, 0.1, 2.3333333333333335, -1.5]:
        assert float(float17(x)) == x


def test_json_floats_roundtrip():
    payload = {"a": 7 / 3, "b": [1e-17, 2.0], "c": "grid:2,2", "d": 12, "e": None}
    parsed = json.loads(json_dumps(payload))
    assert parsed == payload


def test_json_nan_becomes_null():
    assert json.loads(json_dumps({"x": math.nan})) == {"x": None}
    assert json.loads(json_dumps({"x": math.inf})) == {"x": None}


def test_json_rejects_unknown_types():
    with pytest.raises(TypeError):
        json_dumps({"x": object()})


def test_summary_payload_validates():
    s = estimate_ept(make_grid(2, 2), 0, STANDARD, trials=50, seed=1)
    payload = summary_to_dict(s, 1.0, 16.0)
    validate(payload, SUMMARY_SCHEMA)
    assert json.loads(json_dumps(payload))["mean"] == s.mean


def test_schema_catches_bad_payload():
    s = estimate_ept(make_path(2), 0, STANDARD, trials=10, seed=1)
    payload = summary_to_dict(s)
    payload["trials"] = "ten"
    with pytest.raises(jsonschema.ValidationError):
        validate(payload, SUMMARY_SCHEMA)


def test_csv_header_frozen():
    assert SUMMARY_CSV_HEADER == ("graph,rule,start,trials,seed,mean,variance,"
                                  "std_error,min,max,lower_bound,upper_bound")


def test_csv_golden_row():
    s = estimate_ept(make_grid(2, 2), 0, STANDARD, trials=50, seed=1)
    got = summary_csv(s, 1.0, 16.0)
    assert got == (
        "graph,rule,start,trials,seed,mean,variance,std_error,"
        "min,max,lower_bound,upper_bound\n"
        '"grid:2,2",standard,0,50,1,2.3799999999999999,0.48530612244897958,'
        "0.098519655140380955,2,5,1,16\n")


def test_csv_quote():
    assert csv_quote("plain") == "plain"
    assert csv_quote("a,b") == '"a,b"'
    assert csv_quote('say "hi"') == '"say ""hi"""'


def test_grid_table_two_decimals():
    means = {(2, 2): 2.333333, (2, 3): 3.154, (3, 2): 3.146, (3, 3): 3.8949}
    table = format_grid_table(means, [2, 3], [2, 3])
    lines = table.strip().splitlines()
    assert lines[0].split() == ["ept", "2", "3"]
    assert lines[1].split() == ["2", "2.33", "3.15"]
    assert lines[2].split() == ["3", "3.15", "3.89"]


def test_hypercube_table_format():
    table = format_hypercube_table({1: 1.0, 2: 2.32}, [1, 2])
    lines = table.strip().splitlines()
    assert lines[1].split() == ["1", "1.00"]
    assert lines[2].split() == ["2", "2.32"]


def test_two_decimal_rounding_is_half_even_on_exact_halves():
    # binary-exact halves round to even
    assert f"{0.125:.2f}" == "0.12"
    assert f"{0.375:.2f}" == "0.38"


def test_run_config_normalization_roundtrip():
    cfg = RunConfig(" GRID:2,2 ", "CONSTANT:0.25", "MIN-OVER-ALL", 100, 5)
    norm = cfg.normalized()
    assert norm.graph == "grid:2,2"
    assert norm.rule == "constant:0.25"
    assert norm.start == "min"
    assert norm.normalized() == norm
    assert RunConfig.from_dict(norm.to_dict()) == norm


def test_run_config_rejects_bad_format():
    with pytest.raises(ValueError):
        RunConfig("path:2", fmt="xml").normalized()


def test_start_policy_normalization():
    assert normalize_start_policy("7") == "7"
    assert normalize_start_policy("Corner") == "corner"
    assert normalize_start_policy("min_over_all") == "min"
    with pytest.raises(ValueError):
        normalize_start_policy("north")
