"""Tests for ring-spec parsing and loading."""

import json

import pytest

from ringlab.core.catalog import catalog
from ringlab.core.errors import (
    AssociativityViolation,
    RingSpecSyntaxError,
    UnknownPreset,
)
from ringlab.data.ringspec import RingSpecFile, load_ring, parse_ring_spec, ring_spec_for


class TestParseRingSpec:
    """Tests for strict ring-spec JSON."""

    def test_preset(self):
        """A preset spec builds the catalog ring."""
        spec = parse_ring_spec('{"preset": "T(3,2)"}')
        assert spec.build().fingerprint == catalog("T(3,2)").fingerprint
        assert spec.describe() == "T(3,2)"

    def test_explicit_matches_preset(self, c2_table):
        """The explicit F_2[C_2] table is the preset ring."""
        spec = parse_ring_spec(json.dumps({"explicit": c2_table, "name": "C2"}))
        R = spec.build()
        assert R.name == "C2"
        assert R.fingerprint == catalog("FpC(2,2)").fingerprint

    def test_relabelled_preset(self):
        """Labels and a name can be put on a preset."""
        spec = RingSpecFile(preset="FpC(2,2)", labels=["one", "t"], name="group")
        R = spec.build()
        assert R.labels == ("one", "t")
        assert R.name == "group"

    def test_bad_json_position(self):
        """JSON errors report line and column."""
        with pytest.raises(RingSpecSyntaxError) as exc_info:
            parse_ring_spec('{\n  "preset": "M(2,2)",\n}')
        assert exc_info.value.line == 3
        assert exc_info.value.column == 1

    def test_unknown_key(self):
        """Unknown keys are rejected and located."""
        text = '{\n  "preset": "M(2,2)",\n  "colour": "red"\n}'
        with pytest.raises(RingSpecSyntaxError) as exc_info:
            parse_ring_spec(text)
        assert exc_info.value.line == 3
        assert "colour" in exc_info.value.message

    def test_both_sources(self, c2_table):
        """preset and explicit are exclusive."""
        with pytest.raises(RingSpecSyntaxError):
            parse_ring_spec(json.dumps({"preset": "M(2,2)", "explicit": c2_table}))

    def test_neither_source(self):
        """One source is required."""
        with pytest.raises(RingSpecSyntaxError):
            parse_ring_spec('{"name": "R"}')

    def test_wrong_arity(self, c2_table):
        """A table with the wrong shape is a syntax error."""
        c2_table["mul"] = c2_table["mul"][:1]
        with pytest.raises(RingSpecSyntaxError, match="mul must be"):
            parse_ring_spec(json.dumps({"explicit": c2_table}))

    def test_not_an_object(self):
        """Top-level arrays are refused."""
        with pytest.raises(RingSpecSyntaxError):
            parse_ring_spec("[1, 2]")

    def test_non_associative_table(self, m2):
        """A well-formed but non-associative table fails when built."""
        table = m2.mul.tolist()
        table[1][2] = [0, 0, 0, 1]
        spec = parse_ring_spec(
            json.dumps({"explicit": {"p": 2, "dim": 4, "one": [1, 0, 0, 1], "mul": table}})
        )
        with pytest.raises(AssociativityViolation):
            spec.build()


class TestLoadRing:
    """Tests for --ring / --ring-file resolution."""

    def test_from_file(self, c2_spec_file):
        """A spec file with labels loads."""
        R, spec = load_ring(ring_file=c2_spec_file)
        assert R.labels == ("1", "g")
        assert spec.explicit is not None

    def test_inline_json(self, c2_table):
        """--ring accepts inline JSON."""
        R, _ = load_ring(ring=json.dumps({"explicit": c2_table}))
        assert R.dim == 2

    def test_preset_name(self):
        """--ring accepts a preset name."""
        assert ring_spec_for(" M(2,2) ").preset == "M(2,2)"

    def test_unknown_preset_passes_through(self):
        """Preset errors keep their own type."""
        with pytest.raises(UnknownPreset):
            load_ring(ring="Q(2,2)")

    def test_exactly_one_input(self, c2_spec_file):
        """Both or neither input is an error."""
        with pytest.raises(RingSpecSyntaxError):
            load_ring()
        with pytest.raises(RingSpecSyntaxError):
            load_ring(ring="M(2,2)", ring_file=c2_spec_file)

    def test_missing_file(self, tmp_path):
        """Unreadable files are reported as spec errors."""
        with pytest.raises(RingSpecSyntaxError):
            load_ring(ring_file=tmp_path / "absent.json")
