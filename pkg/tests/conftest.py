"""Shared fixtures for RingLab tests."""

import json

import pytest
from typer.testing import CliRunner

from ringlab.core.catalog import catalog, jordan_block, parse_element
from ringlab.core.exactla import PrimeField
from ringlab.utils import config as config_module


# Field fixtures
@pytest.fixture
def f2():
    """F_2."""
    return PrimeField(2)


@pytest.fixture
def f3():
    """F_3."""
    return PrimeField(3)


@pytest.fixture
def f5():
    """F_5."""
    return PrimeField(5)


# Ring fixtures
@pytest.fixture
def m2():
    """M_2(F_2), 16 elements."""
    return catalog("M(2,2)")


@pytest.fixture
def m3():
    """M_3(F_2), 512 elements."""
    return catalog("M(3,2)")


@pytest.fixture
def t2():
    """Upper triangular T_2(F_2), 8 elements."""
    return catalog("T(2,2)")


@pytest.fixture
def t3():
    """Upper triangular T_3(F_2), 64 elements."""
    return catalog("T(3,2)")


@pytest.fixture
def c2():
    """Group algebra F_2[C_2], 4 elements."""
    return catalog("FpC(2,2)")


@pytest.fixture
def c3():
    """Group algebra F_3[C_3], 27 elements."""
    return catalog("FpC(3,3)")


@pytest.fixture
def product_ring():
    """M_2(F_2) x T_2(F_2), 128 elements."""
    return catalog("prod(M(2,2),T(2,2))")


# Element fixtures
@pytest.fixture
def jordan3(m3):
    """J = e12 + e23 in M_3(F_2)."""
    return jordan_block(m3)


@pytest.fixture
def e12(m2):
    """The matrix unit e12 in M_2(F_2)."""
    return parse_element(m2, "e12")


@pytest.fixture
def triangular_e12(t2):
    """e12 in T_2(F_2): nilpotent and not regular."""
    return parse_element(t2, "e12")


@pytest.fixture
def one_plus_g(c2):
    """1 + g in F_2[C_2]: nilpotent and not regular."""
    return parse_element(c2, "1+g")


# Ring-spec fixtures
@pytest.fixture
def c2_table():
    """Explicit structure constants of F_2[C_2] in the basis 1, g."""
    return {
        "p": 2,
        "dim": 2,
        "one": [1, 0],
        "mul": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
    }


@pytest.fixture
def c2_spec_file(tmp_path, c2_table):
    """A ring-spec file for F_2[C_2]."""
    path = tmp_path / "c2.json"
    path.write_text(json.dumps({"explicit": c2_table, "labels": ["1", "g"]}))
    return path


# Utility fixtures
@pytest.fixture
def cli_runner() -> CliRunner:
    """Provide a Typer CLI runner for command tests."""
    return CliRunner()


@pytest.fixture
def read_report():
    """Parse the JSON report at the start of a command's output."""

    def read(result) -> dict:
        text = result.stdout
        report, _ = json.JSONDecoder().raw_decode(text[text.index("{") :])
        return report

    return read


@pytest.fixture
def small_caps(monkeypatch):
    """Shrink the enumeration caps so the sampling paths run."""
    for attr, value in (
        ("hom_enumeration_cap", 4),
        ("inner_inverse_cap", 4),
        ("random_trials", 2000),
    ):
        monkeypatch.setattr(config_module.config, attr, value)
    return config_module.config
