"""Hypothesis strategies for terms, quads, and datasets within the TriG subset."""

from __future__ import annotations

from hypothesis import strategies as st

from fdokit.graph import BlankNode, Dataset, Iri, Literal, Quad

# Namespaces shared between prefix maps and pooled IRIs so prefix compaction
# actually triggers during round-trip testing.
NS_POOL = ("https://ex.org/a#", "https://ex.org/b/", "urn:pool:")

_pn_locals = st.from_regex(r"[A-Za-z0-9_][A-Za-z0-9_.\-]{0,8}", fullmatch=True)

_iri_body = st.text(
    alphabet="abcwxyz0189/#._-~%:?=&é中 \x01\"<>\\",
    min_size=1,
    max_size=24,
)

iris = st.one_of(
    st.builds(lambda ns, local: Iri(ns + local), st.sampled_from(NS_POOL), _pn_locals),
    st.builds(lambda body: Iri("https:" + body), _iri_body),
    st.builds(lambda body: Iri("urn:" + body), _iri_body),
)

blank_nodes = st.builds(
    BlankNode, st.from_regex(r"[A-Za-z0-9_][A-Za-z0-9_\-]{0,6}", fullmatch=True)
)

_lexicals = st.text(max_size=20)
_langs = st.from_regex(r"[a-zA-Z]{1,5}(-[a-zA-Z0-9]{1,4}){0,2}", fullmatch=True)

literals = st.one_of(
    st.builds(Literal, _lexicals),
    st.builds(lambda lex, lang: Literal(lex, language=lang), _lexicals, _langs),
    st.builds(lambda lex, dt: Literal(lex, datatype=dt.value), _lexicals, iris),
)

nodes = st.one_of(iris, blank_nodes)
terms = st.one_of(iris, blank_nodes, literals)
graph_names = st.one_of(st.none(), iris, blank_nodes)

quads = st.builds(Quad, nodes, iris, terms, graph_names)

_prefix_labels = st.one_of(
    st.just(""), st.from_regex(r"[A-Za-z][A-Za-z0-9_\-]{0,5}", fullmatch=True)
)

prefix_maps = st.dictionaries(_prefix_labels, st.sampled_from(NS_POOL), max_size=3)


def datasets(max_quads: int = 50) -> st.SearchStrategy[Dataset]:
    return st.builds(
        lambda qs, ps: Dataset(qs, prefixes=ps),
        st.lists(quads, max_size=max_quads),
        prefix_maps,
    )
