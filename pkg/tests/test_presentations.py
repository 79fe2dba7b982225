"""Presentation parsing and the abelian witness test."""

import pytest

from semicover.errors import ParseError
from semicover.presentations import analyze_presentation, parse_presentation, word_exponents

KLEIN = "gens: a b\nrel: baBa\n"
QUATERNION = "gens: a b\nrel: a^4\nrel: a^2B^2\nrel: Baba\n"
FREE2 = "gens: a b\n"


def test_parse_basic():
    gens, rels = parse_presentation(KLEIN)
    assert gens == ["a", "b"]
    assert rels == ["baBa"]


def test_parse_comments_and_blanks():
    gens, rels = parse_presentation("# klein\n\ngens: a b\nrel: baBa  # relator\n")
    assert gens == ["a", "b"] and rels == ["baBa"]


@pytest.mark.parametrize("text", [
    "rel: ab\n",                 # relator before generators
    "gens: a b\ngens: c\n",      # duplicate gens line
    "gens: ab\n",                # multi-letter generator
    "gens: a a\n",               # repeated generator
    "gens: a b\nnope\n",         # unknown line
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_presentation(text)


def test_unknown_letter_in_relator():
    with pytest.raises(ParseError):
        analyze_presentation("gens: a\nrel: ab\n")


def test_word_exponents():
    assert word_exponents("baBa", ["a", "b"]) == [2, 0]
    assert word_exponents("a^4", ["a", "b"]) == [4, 0]
    assert word_exponents("a^2B^2", ["a", "b"]) == [2, -2]
    assert word_exponents("Baba", ["a", "b"]) == [2, 0]
    assert word_exponents("1", ["a", "b"]) == [0, 0]


def test_free_two_generators():
    data = analyze_presentation(FREE2, radius=5)
    assert data.free_rank == 2
    assert data.torsion == []
    assert data.abelianization() == "Z + Z"
    assert data.witness_cover is not None
    assert all(v.ok for v in data.witness_cover.flags.values())


def test_klein_bottle_presentation():
    data = analyze_presentation(KLEIN, radius=6)
    assert data.exponent_matrix == [[2, 0]]
    assert data.free_rank == 1
    assert data.torsion == [2]
    assert data.abelianization() == "Z + Z/2"
    assert data.z_surjection.images == ((0,), (1,))
    assert all(v.ok for v in data.witness_cover.flags.values())
    # relators die under the surjection
    for row in data.exponent_matrix:
        img = [sum(e * data.z_surjection.images[i][j] for i, e in enumerate(row))
               for j in range(data.free_rank)]
        assert all(v == 0 for v in img)


def test_quaternion_presentation_inconclusive():
    data = analyze_presentation(QUATERNION)
    assert data.free_rank == 0
    assert data.torsion == [2, 2]
    assert data.abelianization() == "Z/2 + Z/2"
    assert data.z_surjection is None
    assert data.witness_cover is None
    assert data.verdict.status == "inconclusive"
    assert "inconclusive" in data.verdict.note


def test_single_generator_free():
    data = analyze_presentation("gens: a\n", radius=6)
    assert data.free_rank == 1
    assert data.witness_cover is not None


def test_report_object_shape():
    obj = analyze_presentation(KLEIN).to_obj()
    assert obj["abelianization"] == "Z + Z/2"
    assert obj["snf_diagonal"] == [2]
    assert obj["z_surjection"] == [[0], [1]]
