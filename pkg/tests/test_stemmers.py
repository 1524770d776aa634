"""
Tests for the classic stemmers: Porter, dictionary and identity.
"""

import pytest

from stem_workbench.exceptions import InvalidArgumentError, NotFoundError, ParseError
from stem_workbench.stemmers import (
    DictionaryStemmer,
    IdentityStemmer,
    PorterStemmer,
    StemDictionary,
    StemmerKind,
    dict_stem,
    load_stem_dictionary,
    porter_stem,
    stem_stream,
)
from stem_workbench.stemmers.porter import measure


PORTER_VECTORS = [
    # step 1a
    ("caresses", "caress"),
    ("ponies", "poni"),
    ("ties", "ti"),
    ("caress", "caress"),
    ("cats", "cat"),
    # step 1b
    ("feed", "feed"),
    ("agreed", "agre"),
    ("plastered", "plaster"),
    ("bled", "bled"),
    ("motoring", "motor"),
    ("sing", "sing"),
    ("conflated", "conflat"),
    ("troubled", "troubl"),
    ("sized", "size"),
    ("hopping", "hop"),
    ("tanned", "tan"),
    ("falling", "fall"),
    ("hissing", "hiss"),
    ("fizzed", "fizz"),
    ("failing", "fail"),
    ("filing", "file"),
    # step 1c
    ("happy", "happi"),
    ("sky", "sky"),
    # step 2
    ("relational", "relat"),
    ("conditional", "condit"),
    ("rational", "ration"),
    ("valenci", "valenc"),
    ("hesitanci", "hesit"),
    ("digitizer", "digit"),
    ("conformabli", "conform"),
    ("radicalli", "radic"),
    ("differentli", "differ"),
    ("vileli", "vile"),
    ("analogousli", "analog"),
    ("vietnamization", "vietnam"),
    ("predication", "predic"),
    ("operator", "oper"),
    ("feudalism", "feudal"),
    ("decisiveness", "decis"),
    ("hopefulness", "hope"),
    ("callousness", "callous"),
    ("formaliti", "formal"),
    ("sensitiviti", "sensit"),
    ("sensibiliti", "sensibl"),
    # step 3
    ("triplicate", "triplic"),
    ("formative", "form"),
    ("formalize", "formal"),
    ("electriciti", "electr"),
    ("electrical", "electr"),
    ("hopeful", "hope"),
    ("goodness", "good"),
    # step 4
    ("revival", "reviv"),
    ("allowance", "allow"),
    ("inference", "infer"),
    ("airliner", "airlin"),
    ("gyroscopic", "gyroscop"),
    ("adjustable", "adjust"),
    ("defensible", "defens"),
    ("irritant", "irrit"),
    ("replacement", "replac"),
    ("adjustment", "adjust"),
    ("dependent", "depend"),
    ("adoption", "adopt"),
    ("homologou", "homolog"),
    ("communism", "commun"),
    ("activate", "activ"),
    ("angulariti", "angular"),
    ("homologous", "homolog"),
    ("effective", "effect"),
    ("bowdlerize", "bowdler"),
    # step 5
    ("probate", "probat"),
    ("rate", "rate"),
    ("cease", "ceas"),
    ("controll", "control"),
    ("roll", "roll"),
    # British spellings
    ("organisation", "organ"),
    ("organization", "organ"),
    ("organised", "organ"),
    ("organising", "organ"),
    ("formalise", "formal"),
    ("realiser", "realis"),
    # toy collection vocabulary
    ("vaccinated", "vaccin"),
    ("vaccines", "vaccin"),
    ("cruising", "cruis"),
    ("railways", "railwai"),
    ("stations", "station"),
    ("coffee", "coffe"),
    ("pollination", "pollin"),
    ("volcanoes", "volcano"),
]


class TestPorterStemmer:
    """Test suite for the Porter stemmer."""

    def test_vector_count(self):
        """Test that the reference list holds at least 50 pairs."""
        assert len(PORTER_VECTORS) >= 50

    @pytest.mark.parametrize("word,expected", PORTER_VECTORS)
    def test_vectors(self, word, expected):
        """Test the reference word/stem pairs."""
        assert porter_stem(word) == expected

    @pytest.mark.parametrize("word", ["a", "is", "as", "café", "abc123", "2023", "naïve"])
    def test_short_and_non_ascii_unchanged(self, word):
        """Test short and non ascii unchanged."""
        assert porter_stem(word) == word

    @pytest.mark.parametrize("word,expected", PORTER_VECTORS)
    def test_never_longer(self, word, expected):
        """Test that stems are never longer than words."""
        stem = porter_stem(word)
        assert len(stem) <= len(word)
        assert stem.isalpha() and stem == stem.lower()

    @pytest.mark.parametrize("stem,m", [("tr", 0), ("ee", 0), ("tree", 0), ("y", 0), ("by", 0),
                                        ("trouble", 1), ("oats", 1), ("trees", 1), ("ivy", 1),
                                        ("troubles", 2), ("private", 2), ("oaten", 2)])
    def test_measure(self, stem, m):
        """Test the consonant-vowel measure."""
        assert measure(stem) == m

    def test_stemmer_object(self):
        """Test the PorterStemmer class."""
        stemmer = PorterStemmer()
        assert stemmer.kind is StemmerKind.PORTER
        assert stemmer("ponies") == "poni"
        assert stemmer.stem_batch(["cats", "sky"]) == {"cats": ["cat"], "sky": ["sky"]}


class TestDictionaryStemmer:
    """Test suite for dictionary-gated stemming."""

    def test_direct_lookup(self):
        """Test words found in the dictionary."""
        assert dict_stem("ponies", StemDictionary({"ponies": "pony"})) == "pony"

    def test_ing_undoubling(self):
        """Test undoubling after removing -ing."""
        assert dict_stem("hopping", StemDictionary({"hop": "hop"})) == "hop"

    def test_empty_dictionary_is_identity(self):
        """Test empty dictionary is identity."""
        empty = StemDictionary()
        for word in ["running", "ponies", "organisation"]:
            assert dict_stem(word, empty) == word

    @pytest.mark.parametrize("word,expected", [
        ("ponies", "pony"),
        ("boxes", "box"),
        ("cats", "cat"),
        ("carried", "carry"),
        ("hoped", "hope"),
        ("baking", "bake"),
        ("stopped", "stop"),
        ("glass", "glass"),
    ])
    def test_inflectional_fallback(self, word, expected):
        """Test the inflection fallback for unknown words."""
        dictionary = StemDictionary({"pony": "pony", "box": "box", "cat": "cat", "carry": "carry",
                                     "hope": "hope", "bake": "bake", "stop": "stop"})
        assert dict_stem(word, dictionary) == expected

    def test_digits_unchanged(self):
        """Test that numbers stay unchanged."""
        assert dict_stem("covid19s", StemDictionary({"covid19": "covid"})) == "covid19s"

    def test_load(self, tmp_path):
        """Test loading a dictionary file."""
        path = tmp_path / "dict.tsv"
        path.write_text("# roots\nPonies\tpony\n\nran\trun\n", encoding="utf-8")
        dictionary = load_stem_dictionary(path)
        assert len(dictionary) == 2
        assert dictionary["ponies"] == "pony"
        assert DictionaryStemmer(dictionary).stem("ran") == "run"

    def test_load_malformed_line(self, tmp_path):
        """Test load malformed line."""
        path = tmp_path / "dict.tsv"
        path.write_text("ponies\tpony\nbroken line\n", encoding="utf-8")
        with pytest.raises(ParseError) as info:
            load_stem_dictionary(path)
        assert info.value.line_number == 2

    def test_load_missing(self, tmp_path):
        """Test that a missing dictionary raises NotFoundError."""
        with pytest.raises(NotFoundError):
            load_stem_dictionary(tmp_path / "absent.tsv")

    def test_rejects_uppercase_entries(self):
        """Test rejects uppercase entries."""
        with pytest.raises(InvalidArgumentError):
            StemDictionary({"Ponies": "pony"})

    def test_immutable(self):
        """Test that the dictionary cannot be changed."""
        dictionary = StemDictionary({"a": "b"})
        with pytest.raises(TypeError):
            dictionary.entries["c"] = "d"


class TestStemStream:
    """Test suite for stem_stream."""

    def test_porter(self):
        """Test stemming a stream with Porter."""
        assert stem_stream(["caresses", "sky"], porter_stem) == ["caress", "sky"]

    def test_empty(self):
        """Test an empty stream."""
        assert stem_stream([], porter_stem) == []

    def test_identity(self):
        """Test the identity stemmer."""
        tokens = ["running", "ponies", "2023"]
        assert stem_stream(tokens, IdentityStemmer()) == tokens


if __name__ == "__main__":
    pytest.main([__file__])
