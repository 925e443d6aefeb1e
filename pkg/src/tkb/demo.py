"""A small ready-made knowledge base from the space domain.

RELAIS designates the concept SATELLITE in the meteorology community and the
concept SATELLITE GEOSTATIONNAIRE in telecommunications, where RELAIS and
SATELLITE DE COMMUNICATION are synonyms. Handy for trying out the CLI, the
service and the browser UI; also the canonical scenario of the test suite.
"""

from __future__ import annotations

from types import SimpleNamespace

from .kb import KnowledgeBase

PARAGRAPH_1 = (
    "Le relais transmet les données météorologiques vers la station au sol. "
    "Ce satellite est un engin placé sur une orbite autour de la terre."
)
PARAGRAPH_2 = (
    "En télécommunications, le relais désigne un satellite géostationnaire. "
    "Un satellite de communication assure la liaison permanente."
)
CORPUS_TEXT = PARAGRAPH_1 + "\n\n" + PARAGRAPH_2

SATELLITE_DESCRIPTION = "engin placé sur une orbite autour de la terre"
GEO_DESCRIPTION = "satellite placé sur une orbite géostationnaire"


def find_span(content: str, needle: str) -> tuple[int, int]:
    start = content.index(needle)
    return start, start + len(needle)


def build_demo(kb: KnowledgeBase | None = None, *, with_corpus: bool = True,
               anchored: bool = True) -> SimpleNamespace:
    """Build the demo base; returns a namespace with the kb and every id."""
    kb = kb if kb is not None else KnowledgeBase()

    relais = kb.create_term("RELAIS", "fr", grammatical_category="nom")
    satellite = kb.create_term("SATELLITE", "fr", grammatical_category="nom")
    sat_comm = kb.create_term(
        "SATELLITE DE COMMUNICATION", "fr", grammatical_category="nom",
        decomposition=[("head", satellite)])
    sat_geo = kb.create_term(
        "SATELLITE GEOSTATIONNAIRE", "fr", grammatical_category="nom",
        variants=["satellite géostationnaire"])

    meteo = kb.create_viewpoint("météorologie")
    telecom = kb.create_viewpoint("télécommunications")

    c_sat = kb.create_concept(satellite, SATELLITE_DESCRIPTION,
                              {"orbite": "terrestre"})
    c_geo = kb.create_concept(sat_geo, GEO_DESCRIPTION, parents={c_sat})

    l_relais_sat = kb.link(relais, c_sat, meteo)
    l_relais_geo = kb.link(relais, c_geo, telecom)
    l_comm_geo = kb.link(sat_comm, c_geo, telecom)
    l_sat_sat = kb.link(satellite, c_sat, meteo)
    l_geo_geo = kb.link(sat_geo, c_geo, meteo)

    doc = None
    units: list[str] = []
    if with_corpus:
        doc = kb.ingest_document("Corpus spatial", "manuel technique",
                                 CORPUS_TEXT)
        units = list(kb.documents[doc].units)
        if anchored:
            u1, u2 = units
            p1 = kb.units[u1].content
            p2 = kb.units[u2].content
            kb.add_usage(l_relais_sat, u1, *find_span(p1, "relais"))
            kb.add_usage(l_sat_sat, u1, *find_span(p1, "satellite"))
            kb.add_usage(l_relais_geo, u2, *find_span(p2, "relais"))
            kb.add_usage(l_geo_geo, u2,
                         *find_span(p2, "satellite géostationnaire"))
            kb.add_usage(l_comm_geo, u2,
                         *find_span(p2, "satellite de communication"))

    return SimpleNamespace(
        kb=kb,
        relais=relais, satellite=satellite, sat_comm=sat_comm, sat_geo=sat_geo,
        meteo=meteo, telecom=telecom,
        c_sat=c_sat, c_geo=c_geo,
        l_relais_sat=l_relais_sat, l_relais_geo=l_relais_geo,
        l_comm_geo=l_comm_geo, l_sat_sat=l_sat_sat, l_geo_geo=l_geo_geo,
        doc=doc, units=units,
    )
