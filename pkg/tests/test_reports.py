"""Tests for report records and re-verification of saved chains."""

import json

import pytest

from ringlab.core.catalog import jordan_block, parse_element
from ringlab.core.errors import ReportFormatError
from ringlab.data.reports import Report, chain_report, verify_report
from ringlab.data.ringspec import RingSpecFile


@pytest.fixture
def m3_spec():
    return RingSpecFile(preset="M(3,2)")


@pytest.fixture
def j_report(m3_spec):
    """A saved regular-powers chain report for J in M(3,2)."""
    R = m3_spec.build()
    return chain_report(m3_spec, R, jordan_block(R), 4, 3, "J")


class TestChainReport:
    """Tests for chain_report payloads."""

    def test_passes_with_witness(self, j_report):
        """J reaches Y_3 = 0 and carries a unit witness."""
        assert j_report.error is None
        assert j_report.passed
        chain = j_report.result["chain"]
        assert j_report.result["nilpotent_at_level"] is True
        assert chain["dims"]["Y"][-1] == 0
        assert chain["witness"]["inner_inverse_check"] is True
        assert chain["variant"] == "regular-powers"
        assert j_report.ring.p == 2 and j_report.ring.dim == 9

    def test_no_witness_before_nilpotency(self, m3_spec):
        """Two levels leave J^2 != 0, so the report has no witness."""
        R = m3_spec.build()
        report = chain_report(m3_spec, R, jordan_block(R), 2, 2)
        assert report.passed
        assert report.result["nilpotent_at_level"] is False
        assert report.result["chain"]["witness"] is None

    def test_error_recorded(self):
        """A rejected element becomes the report's error."""
        spec = RingSpecFile(preset="T(2,2)")
        R = spec.build()
        report = chain_report(spec, R, parse_element(R, "e12"), 4)
        assert report.error.code == "powers_not_regular"
        assert not report.passed
        assert "chain" not in report.result

    def test_deterministic(self, m3_spec, j_report):
        """Two runs give byte-identical reports apart from timing."""
        R = m3_spec.build()
        again = chain_report(m3_spec, R, jordan_block(R), 4, 3, "J")
        assert again.to_json(timing=False) == j_report.to_json(timing=False)
        assert "timing" not in json.loads(j_report.to_json(timing=False))


class TestVerifyReport:
    """Tests for reloading and re-checking saved reports."""

    def test_round_trip(self, j_report):
        """A report read back from JSON verifies."""
        loaded = Report.from_json(j_report.to_json())
        checks = verify_report(loaded)
        assert checks and all(check.passed for check in checks)
        assert checks[0].name == "ring fingerprint matches"

    def test_dropped_y_row(self, j_report):
        """Removing a basis row of Y_1 is caught."""
        data = json.loads(j_report.to_json())
        level = data["result"]["chain"]["levels"][0]
        assert level["Y"]
        level["Y"] = level["Y"][1:]
        checks = verify_report(Report.model_validate(data))
        assert any(not check.passed for check in checks)

    def test_zeroed_witness(self, j_report):
        """A witness replaced by 0 is not a unit."""
        data = json.loads(j_report.to_json())
        witness = data["result"]["chain"]["witness"]
        witness["u_coords"] = [0] * len(witness["u_coords"])
        checks = {c.name: c.passed for c in verify_report(Report.model_validate(data))}
        assert checks["witness: u is a unit"] is False

    def test_other_ring(self, j_report):
        """A report pointed at another ring fails the fingerprint check."""
        data = json.loads(j_report.to_json())
        data["ring"]["hash"] = "0" * 16
        checks = verify_report(Report.model_validate(data))
        assert checks[0].passed is False

    def test_not_a_chain_report(self):
        """Only chain reports can be re-verified."""
        with pytest.raises(ReportFormatError):
            verify_report(Report(command="classify"))

    def test_malformed_payload(self, j_report):
        """A chain payload missing fields is a format error."""
        data = json.loads(j_report.to_json())
        del data["result"]["chain"]["levels"]
        with pytest.raises(ReportFormatError):
            verify_report(Report.model_validate(data))

    def test_unreadable_json(self):
        """Text that is not a report is a format error."""
        with pytest.raises(ReportFormatError):
            Report.from_json('{"command": "chain", "surprise": 1}')


def basis_holders(chain):
    """(container, key) for every stored basis in a chain payload."""
    holders = [(chain, key) for key in ("K", "aR", "X", "E", "Y")]
    for level in chain["levels"]:
        keys = ("A", "A_prime", "Y", "Y_prime", "E")
        holders += [(level, key) for key in keys if level[key] is not None]
    return holders


class TestStoredBases:
    """Every stored basis must be the canonical one for the chain it describes."""

    @pytest.mark.parametrize("theorem", [2, 4])
    def test_every_entry_flip_is_caught(self, theorem):
        """Flipping any single entry of any stored basis fails some check."""
        spec = RingSpecFile(preset="M(2,2)")
        R = spec.build()
        text = chain_report(spec, R, parse_element(R, "e12"), theorem).to_json()
        shape = [
            (h, r, c)
            for h, (holder, key) in enumerate(basis_holders(json.loads(text)["result"]["chain"]))
            for r, row in enumerate(holder[key])
            for c in range(len(row))
        ]
        assert shape
        missed = []
        for h, r, c in shape:
            data = json.loads(text)
            holder, key = basis_holders(data["result"]["chain"])[h]
            holder[key][r][c] ^= 1
            if all(check.passed for check in verify_report(Report.model_validate(data))):
                missed.append((key, r, c))
        assert missed == []

    def test_same_span_other_rows(self, j_report):
        """Adding one basis row of E_1 to another keeps the span but not the RREF."""
        data = json.loads(j_report.to_json())
        level = data["result"]["chain"]["levels"][0]
        assert len(level["E"]) >= 2
        level["E"][0] = [(x + y) % 2 for x, y in zip(level["E"][0], level["E"][1])]
        checks = {c.name: c.passed for c in verify_report(Report.model_validate(data))}
        assert checks["level 1: E_j stored in canonical form"] is False

    def test_summary_rows_checked(self, j_report):
        """The top-level aR rows must match aR."""
        data = json.loads(j_report.to_json())
        data["result"]["chain"]["aR"] = data["result"]["chain"]["aR"][1:]
        checks = {c.name: c.passed for c in verify_report(Report.model_validate(data))}
        assert checks["stored aR matches the levels"] is False
        assert checks["aR stored in canonical form"] is True

    def test_ragged_rows(self, j_report):
        """A row of the wrong length fails instead of raising."""
        data = json.loads(j_report.to_json())
        data["result"]["chain"]["K"][0] = [1]
        checks = {c.name: c.passed for c in verify_report(Report.model_validate(data))}
        assert checks["K stored in canonical form"] is False
        assert checks["chain reload"] is False
