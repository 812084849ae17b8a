from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

from fdokit import vocab
from fdokit.graph import BlankNode, Dataset, Iri, Literal, Quad
from fdokit.trig import ParseError, canonical_nquads, parse_trig, serialize_trig

import strategies
from conftest import EX
from corpusgen import random_fdo_corpus

FDOF = "https://w3id.org/fdof/ontology#"


class TestParseCorpusFixtures:
    def test_identification_fixture(self, corpus_texts):
        ds = parse_trig(corpus_texts[0])
        assert len(ds) == 2
        assert all(quad.graph is None for quad in ds)
        subjects = {quad.subject for quad in ds}
        assert subjects == {Iri(EX + "amazonTop50")}
        predicates = {quad.predicate.value for quad in ds}
        assert predicates == {FDOF + "gupri", FDOF + "isIdentifiedBy"}
        gupri_quad = next(iter(ds.match(predicate=Iri(FDOF + "gupri"))))
        assert gupri_quad.object == Literal("https://w3id.org/fdof/fois23-paper/amazonTop50")

    def test_metadata_fixture_graph_placement(self, corpus_texts):
        ds = parse_trig(corpus_texts[1])
        record = Iri(EX + "amazonTop50Metadata")
        link = Quad(record, Iri(FDOF + "isMetadataOf"), Iri(EX + "amazonTop50"), graph=record)
        assert link in ds
        default_quads = [quad for quad in ds if quad.graph is None]
        assert len(default_quads) == 4
        assert all(quad.subject == record for quad in default_quads)

    def test_prefixes_recorded(self, corpus_texts):
        ds = parse_trig(corpus_texts[0])
        assert ds.prefixes[""] == EX
        assert ds.prefixes["fdof"] == FDOF

    def test_prefix_only_document_is_empty(self):
        ds = parse_trig("@prefix ex: <http://ex.org/> .\n@prefix o: <urn:o:> .\n")
        assert len(ds) == 0
        assert dict(ds.prefixes) == {"ex": "http://ex.org/", "o": "urn:o:"}


class TestParseErrors:
    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse_trig("<urn:s> <urn:p>\n<urn:o> }")
        assert err.value.line == 2
        assert err.value.column == 9
        assert "expected" in err.value.message

    def test_undefined_prefix(self):
        with pytest.raises(ParseError, match="undefined prefix 'ex:'"):
            parse_trig("ex:a ex:b ex:c .")

    def test_relative_iri_rejected(self):
        with pytest.raises(ParseError, match="relative IRI"):
            parse_trig("<foo/bar> <urn:p> <urn:o> .")

    def test_relative_namespace_rejected(self):
        with pytest.raises(ParseError, match="relative IRI"):
            parse_trig("@prefix ex: <relative/ns> .")

    def test_prefix_redeclaration_conflict(self):
        with pytest.raises(ParseError, match="redeclared"):
            parse_trig("@prefix ex: <urn:a:> .\n@prefix ex: <urn:b:> .")
        # identical redeclaration is harmless
        ds = parse_trig("@prefix ex: <urn:a:> .\n@prefix ex: <urn:a:> .")
        assert ds.prefixes["ex"] == "urn:a:"

    def test_literal_cannot_be_subject_or_predicate(self):
        with pytest.raises(ParseError):
            parse_trig('"lit" <urn:p> <urn:o> .')
        with pytest.raises(ParseError):
            parse_trig('<urn:s> "lit" <urn:o> .')

    def test_blank_predicate_rejected(self):
        with pytest.raises(ParseError, match="blank node cannot be a predicate"):
            parse_trig("<urn:s> _:p <urn:o> .")

    def test_unclosed_graph_block(self):
        with pytest.raises(ParseError, match="close the graph block"):
            parse_trig("<urn:g> { <urn:s> <urn:p> <urn:o> .")

    def test_bad_escape_positions(self):
        with pytest.raises(ParseError):
            parse_trig('<urn:s> <urn:p> "bad \\q escape" .')
        with pytest.raises(ParseError):
            parse_trig('<urn:s> <urn:p> "\\uD800" .')


class TestParsedStructures:
    def test_a_keyword_and_lists(self):
        ds = parse_trig(
            "@prefix ex: <urn:x:> .\n"
            "ex:s a ex:T1, ex:T2 ;\n  ex:p ex:o .\n"
        )
        assert len(ds) == 3
        types = {q.object for q in ds.match(predicate=Iri(vocab.RDF_TYPE))}
        assert types == {Iri("urn:x:T1"), Iri("urn:x:T2")}

    def test_trailing_semicolon_tolerated(self):
        ds = parse_trig("<urn:s> <urn:p> <urn:o> ; .")
        assert len(ds) == 1

    def test_anonymous_block_is_default_graph(self):
        ds = parse_trig("{ <urn:s> <urn:p> <urn:o> . }")
        assert [quad.graph for quad in ds] == [None]

    def test_named_block_trailing_dot_optional(self):
        ds = parse_trig("<urn:g> { <urn:s> <urn:p> <urn:o> }")
        assert [quad.graph for quad in ds] == [Iri("urn:g")]

    def test_blank_graph_label(self):
        ds = parse_trig("_:g { _:s <urn:p> 'v' . }")
        quad = ds.quads[0]
        assert quad.graph == BlankNode("g")
        assert quad.subject == BlankNode("s")
        assert quad.object == Literal("v")

    def test_language_and_datatype_literals(self):
        ds = parse_trig(
            '@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n'
            '<urn:s> <urn:p> "x"@en-GB , "1"^^xsd:int , "plain" .'
        )
        objects = {quad.object for quad in ds}
        assert Literal("x", language="en-GB") in objects
        assert Literal("1", datatype=vocab.XSD_NS + "int") in objects
        assert Literal("plain") in objects

    def test_numeric_escapes_decode(self):
        ds = parse_trig('<urn:s\\u0020x> <urn:p> "A\\u0042\\U00000043" .')
        quad = ds.quads[0]
        assert quad.subject == Iri("urn:s x")
        assert quad.object == Literal("ABC")

    def test_parsing_is_deterministic(self, corpus_texts):
        for text in corpus_texts:
            first = parse_trig(text)
            second = parse_trig(text)
            assert first.quads == second.quads
            assert dict(first.prefixes) == dict(second.prefixes)


class TestSerialize:
    def test_empty_dataset_serializes_to_prefix_only_document(self):
        assert serialize_trig(Dataset()) == ""
        out = serialize_trig(Dataset(prefixes={"ex": "urn:x:"}))
        assert out == "@prefix ex: <urn:x:> .\n"
        assert len(parse_trig(out)) == 0

    def test_fixture_round_trip(self, corpus_texts):
        for text in corpus_texts:
            ds = parse_trig(text)
            again = parse_trig(serialize_trig(ds))
            assert again.quad_set() == ds.quad_set()
            assert dict(again.prefixes) == dict(ds.prefixes)

    def test_unusable_prefixes_are_skipped(self):
        ds = Dataset(
            [Quad(Iri("urn:s"), Iri("urn:p"), Iri("urn:o"))],
            prefixes={"bad label": "urn:x:", "rel": "not-absolute", "ok": "urn:y:"},
        )
        out = serialize_trig(ds)
        assert "bad label" not in out
        assert "not-absolute" not in out
        assert "@prefix ok:" in out
        assert parse_trig(out).quad_set() == ds.quad_set()

    @given(strategies.datasets())
    def test_round_trip_preserves_quad_set(self, ds):
        assert parse_trig(serialize_trig(ds)).quad_set() == ds.quad_set()

    def test_seeded_50_quad_round_trips(self):
        rng = random.Random(424242)
        for _ in range(25):
            ds = random_fdo_corpus(rng.randrange(10_000), max_nodes=12, max_quads=50)
            assert parse_trig(serialize_trig(ds)).quad_set() == ds.quad_set()


class TestCanonicalForm:
    def test_lines_are_sorted_and_order_independent(self):
        a = Quad(Iri("urn:1"), Iri("urn:p"), Literal("x"))
        b = Quad(Iri("urn:2"), Iri("urn:p"), Literal("y"), Iri("urn:g"))
        assert canonical_nquads(Dataset([a, b])) == canonical_nquads(Dataset([b, a]))
        text = canonical_nquads(Dataset([a, b]))
        assert text.splitlines() == sorted(text.splitlines())

    def test_graph_term_only_for_named_graphs(self):
        line_default = canonical_nquads(Dataset([Quad(Iri("urn:1"), Iri("urn:p"), Literal("x"))]))
        assert line_default == '<urn:1> <urn:p> "x" .\n'
        line_named = canonical_nquads(
            Dataset([Quad(Iri("urn:1"), Iri("urn:p"), Literal("x"), Iri("urn:g"))])
        )
        assert line_named == '<urn:1> <urn:p> "x" <urn:g> .\n'
