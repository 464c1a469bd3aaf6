"""Tests for the frontmatter fixtures."""

import pytest

from sugra_bv_verifier.errors import ConfigError
from sugra_bv_verifier.field_content import sample_configuration
from sugra_bv_verifier.fixtures import dump_configuration, dump_rank_table, load_configuration, load_rank_table
from sugra_bv_verifier.structure_maps import diagram_descriptors, rank_certify


def test_configuration_fixture_reloads() -> None:
    """Test a dumped configuration loads back to the same coordinates."""
    config = sample_configuration(21, jet_order=1, odd_generators=8)
    loaded = load_configuration(dump_configuration(config))
    assert loaded.jet_order == 1
    assert loaded.odd_generators == 8
    assert loaded.seed == 21
    assert set(loaded.fields) == set(config.fields)
    for name, value in config.fields.items():
        assert (loaded[name] - value).is_zero(), name


def test_fixture_header_carries_parameters() -> None:
    """Test the YAML header records the sampling parameters."""
    text = dump_configuration(sample_configuration(2, jet_order=0, odd_generators=6))
    assert text.startswith("---\n")
    assert "odd_generators: 6" in text
    assert "jet_order: 0" in text


def test_incomplete_header_rejected() -> None:
    """Test a fixture without a jet order raises ConfigError."""
    with pytest.raises(ConfigError, match="header"):
        load_configuration("---\nodd_generators: 8\nfields: {}\n---\n")


@pytest.mark.parametrize(
    "line",
    [
        "e 0 0,0,0,0 theta=[] dx=[0] v=[0]",
        "e 0 0,0,0 theta=[] dx=[0] v=[0] 1 0",
        "e 0 0,0,0,0 theta=1 dx=[0] v=[0] 1 0",
    ],
)
def test_malformed_body_line_rejected(line: str) -> None:
    """Test malformed coefficient lines raise ConfigError."""
    text = f"---\nodd_generators: 8\njet_order: 0\nfields:\n  e: {{target: scalar, order: 0}}\n---\n{line}\n"
    with pytest.raises(ConfigError):
        load_configuration(text)


def test_rank_table_reloads() -> None:
    """Test the rank table keeps the seed and every certificate."""
    e = sample_configuration(4, jet_order=0, odd_generators=6).e
    certificates = [rank_certify(d, e) for d in diagram_descriptors()]
    seed, rows = load_rank_table(dump_rank_table(certificates, seed=4))
    assert seed == 4
    assert [r["map"] for r in rows] == [c.name for c in certificates]
    assert [r["rank"] for r in rows] == [c.rank for c in certificates]
    assert all(r["matches"] for r in rows)
