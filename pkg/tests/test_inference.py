"""Derived knowledge: inheritance, lexical relations, consistency checker."""

import random
from dataclasses import replace

import pytest

import fixture_spatial
from tkb import KnowledgeBase, UnknownConcept, inference
from tkb.model import TermConceptLink


# --------------------------------------------------------------- oracles

def closure_oracle(kb, concept_id):
    """Transitive closure by repeated edge relaxation."""
    closure = {concept_id}
    changed = True
    while changed:
        changed = False
        for node in list(closure):
            for p in kb.concepts[node].parents:
                if p not in closure:
                    closure.add(p)
                    changed = True
    return closure


def distance_oracle(kb, concept_id):
    dist = {concept_id: 0}
    changed = True
    while changed:
        changed = False
        for node in list(dist):
            for p in kb.concepts[node].parents:
                candidate = dist[node] + 1
                if p not in dist or candidate < dist[p]:
                    dist[p] = candidate
                    changed = True
    return dist


def frame_oracle(kb, concept_id):
    """Exhaustive application of the shadowing rules over all subsumers.

    Returns (attributes, relations) with attributes as a list of
    (key, value, origin, shadowed) and relations as a sorted list of
    (type, target, definition, origin).
    """
    closure = closure_oracle(kb, concept_id)
    dist = distance_oracle(kb, concept_id)

    entries = [(k, v, origin)
               for origin in closure
               for (k, v) in kb.concepts[origin].attributes]

    def rank(origin):
        return (0,) if origin == concept_id else (1, dist[origin], origin)

    winners = {}
    for k, _v, origin in entries:
        if k not in winners or rank(origin) < rank(winners[k]):
            winners[k] = origin

    attributes = []
    for k in sorted(winners):
        per_key = [(k2, v, o) for (k2, v, o) in entries if k2 == k]
        per_key.sort(key=lambda e: (e[2] != winners[k], dist[e[2]], e[2]))
        for _k, v, o in per_key:
            attributes.append((k, v, o, o != winners[k]))

    rels = {}
    for origin in closure:
        for r in kb.concepts[origin].assertional_relations:
            triple = (r.relation_type, r.target, r.definition_text)
            if triple not in rels or (dist[origin], origin) < rels[triple]:
                rels[triple] = (dist[origin], origin)
    relations = [(t, tgt, d, rels[(t, tgt, d)][1])
                 for (t, tgt, d) in sorted(rels)]
    return attributes, relations


def random_dag_kb(rng, max_nodes=50, keys=("k0", "k1", "k2", "k3"),
                  with_relations=True):
    """A random est-un DAG: node j's parents are drawn from nodes before it."""
    kb = KnowledgeBase()
    label = kb.create_term("étiquette", "fr")
    n = rng.randint(1, max_nodes)
    ids = []
    for j in range(n):
        parents = set()
        if j and rng.random() < 0.85:
            for _ in range(rng.randint(1, min(3, j))):
                parents.add(ids[rng.randrange(j)])
        attrs = {}
        for key in keys:
            if rng.random() < 0.4:
                attrs[key] = f"{key}@n{j}"
        ids.append(kb.create_concept(label, f"concept {j}", attrs, parents))
    if with_relations:
        kb.register_relation_type("liée-à", "relation quelconque")
        for _ in range(n):
            src, dst = rng.choice(ids), rng.choice(ids)
            kb.add_assertional_relation(src, "liée-à", dst,
                                        rng.choice(["", "fait observé"]))
    return kb, ids


def assert_frame_matches_oracle(kb, concept_id):
    frame = inference.effective_frame(kb, concept_id)
    got_attrs = [(a.key, a.value, a.origin, a.shadowed) for a in frame.attributes]
    got_rels = [(r.relation_type, r.target, r.definition_text, r.origin)
                for r in frame.relations]
    want_attrs, want_rels = frame_oracle(kb, concept_id)
    assert got_attrs == want_attrs
    assert got_rels == want_rels


# ------------------------------------------------------------- subsumers

class TestSubsumers:
    def test_root_is_alone(self, spatial_bare):
        fx = spatial_bare
        assert inference.subsumers(fx.kb, fx.c_sat) == [fx.c_sat]

    def test_child_lists_parent(self, spatial_bare):
        fx = spatial_bare
        assert inference.subsumers(fx.kb, fx.c_geo) == [fx.c_geo, fx.c_sat]

    def test_unknown_concept(self, spatial_bare):
        with pytest.raises(UnknownConcept):
            inference.subsumers(spatial_bare.kb, "c9999")

    def test_random_dags_match_reachability_oracle(self):
        rng = random.Random(31337)
        for _ in range(30):
            kb, ids = random_dag_kb(rng, with_relations=False)
            for cid in ids:
                order = inference.subsumers(kb, cid)
                assert set(order) == closure_oracle(kb, cid)
                assert order[0] == cid
                # topological: every concept precedes its own subsumers
                position = {c: i for i, c in enumerate(order)}
                for node in order:
                    for p in kb.concepts[node].parents:
                        if p in position:
                            assert position[p] > position[node]


# -------------------------------------------------------- effective frame

class TestEffectiveFrame:
    def test_no_parents_identity(self, spatial_bare):
        fx = spatial_bare
        frame = inference.effective_frame(fx.kb, fx.c_sat)
        assert [(a.key, a.value, a.origin, a.shadowed)
                for a in frame.attributes] == \
            [("orbite", "terrestre", fx.c_sat, False)]

    def test_single_edge_inheritance(self, spatial_bare):
        fx = spatial_bare
        frame = inference.effective_frame(fx.kb, fx.c_geo)
        assert [(a.key, a.value, a.origin, a.shadowed)
                for a in frame.attributes] == \
            [("orbite", "terrestre", fx.c_sat, False)]
        assert frame.subsumers == (fx.c_geo, fx.c_sat)

    def test_local_shadows_inherited(self, spatial_bare):
        fx = spatial_bare
        kb = fx.kb
        kb.concepts[fx.c_geo] = replace(kb.concepts[fx.c_geo],
                                        attributes=(("orbite", "géostationnaire"),))
        frame = inference.effective_frame(kb, fx.c_geo)
        effective = [a for a in frame.attributes if not a.shadowed]
        assert effective == [inference.FrameAttribute(
            "orbite", "géostationnaire", fx.c_geo, False)]
        shadowed = [a for a in frame.attributes if a.shadowed]
        assert [(a.value, a.origin) for a in shadowed] == [("terrestre", fx.c_sat)]
        assert_frame_matches_oracle(kb, fx.c_geo)

    def test_diamond_tie_break(self):
        # D est-un B, D est-un C, B est-un A, C est-un A; B and C both define
        # "statut" at distance 1 from D: the lexicographically smaller origin
        # (B, created first) wins.
        kb = KnowledgeBase()
        t = kb.create_term("x", "fr")
        a = kb.create_concept(t, "A", {"statut": "valeur-a"})
        b = kb.create_concept(t, "B", {"statut": "valeur-b"}, parents={a})
        c = kb.create_concept(t, "C", {"statut": "valeur-c"}, parents={a})
        d = kb.create_concept(t, "D", parents={b, c})
        assert b < c  # creation order fixes the tie-break
        frame = inference.effective_frame(kb, d)
        effective = [x for x in frame.attributes if not x.shadowed]
        assert effective == [inference.FrameAttribute("statut", "valeur-b", b, False)]
        shadowed_origins = [x.origin for x in frame.attributes if x.shadowed]
        assert shadowed_origins == [c, a]  # ordered by distance then id
        assert_frame_matches_oracle(kb, d)

    def test_exactly_one_effective_entry_per_key(self):
        rng = random.Random(99)
        for _ in range(20):
            kb, ids = random_dag_kb(rng, max_nodes=25)
            for cid in ids:
                frame = inference.effective_frame(kb, cid)
                per_key = {}
                for attr in frame.attributes:
                    per_key.setdefault(attr.key, []).append(attr)
                for key_entries in per_key.values():
                    assert sum(1 for a in key_entries if not a.shadowed) == 1

    def test_random_dags_match_oracle(self):
        rng = random.Random(4242)
        for _ in range(25):
            kb, ids = random_dag_kb(rng, max_nodes=30)
            for cid in ids:
                assert_frame_matches_oracle(kb, cid)

    def test_removing_edges_reduces_to_local_frame(self):
        rng = random.Random(55)
        kb, ids = random_dag_kb(rng, max_nodes=15)
        for cid in ids:
            kb.concepts[cid] = replace(kb.concepts[cid], parents=frozenset())
        for cid in ids:
            frame = inference.effective_frame(kb, cid)
            assert [(a.key, a.value) for a in frame.attributes] == \
                list(kb.concepts[cid].attributes)
            assert all(a.origin == cid and not a.shadowed
                       for a in frame.attributes)


# ------------------------------------------------------ lexical relations

class TestSynonyms:
    def test_telecom_synonym_of_relais(self, spatial_bare):
        fx = spatial_bare
        assert inference.synonyms(fx.kb, fx.relais, fx.telecom) == {fx.sat_comm}

    def test_meteo_synonym_of_relais(self, spatial_bare):
        fx = spatial_bare
        assert inference.synonyms(fx.kb, fx.relais, fx.meteo) == {fx.satellite}

    def test_unlinked_term_has_none(self, spatial_bare):
        fx = spatial_bare
        antenne = fx.kb.create_term("ANTENNE", "fr")
        assert inference.synonyms(fx.kb, antenne, fx.telecom) == set()

    def test_symmetry_and_self_exclusion(self, spatial_bare):
        fx = spatial_bare
        kb = fx.kb
        for term in kb.terms:
            for vp in kb.viewpoints:
                syns = inference.synonyms(kb, term, vp)
                assert term not in syns
                for other in syns:
                    assert term in inference.synonyms(kb, other, vp)


class TestMeaningsDesignators:
    def test_relais_two_interpretations(self, spatial_bare):
        fx = spatial_bare
        assert inference.meanings(fx.kb, fx.relais) == [
            (fx.meteo, fx.c_sat), (fx.telecom, fx.c_geo)]

    def test_unlinked_term_empty(self, spatial_bare):
        fx = spatial_bare
        antenne = fx.kb.create_term("ANTENNE", "fr")
        assert inference.meanings(fx.kb, antenne) == []

    def test_designators_of_geo(self, spatial_bare):
        fx = spatial_bare
        got = dict(inference.designators(fx.kb, fx.c_geo))
        assert got[fx.relais] == {fx.telecom}
        assert got[fx.sat_comm] == {fx.telecom}
        assert got[fx.sat_geo] == {fx.meteo}

    def test_concept_without_links(self, spatial_bare):
        fx = spatial_bare
        orphan = fx.kb.create_concept(fx.relais, "notion sans désignation")
        assert inference.designators(fx.kb, orphan) == []

    def test_mutual_inverse_on_random_tables(self):
        # oracle: cross-check both directions by flat scans over raw links
        rng = random.Random(777)
        for _ in range(15):
            kb = _random_link_table(rng)
            for term in kb.terms:
                for vp, concept in inference.meanings(kb, term):
                    assert (term, vp) in [
                        (t, v) for t, vps in inference.designators(kb, concept)
                        if t == term for v in vps]
            for concept in kb.concepts:
                for term, vps in inference.designators(kb, concept):
                    got = inference.meanings(kb, term)
                    for vp in vps:
                        assert (vp, concept) in got
            # against a raw flat scan
            for term in kb.terms:
                want = sorted(
                    (v, lk.concept)
                    for lk in kb.links.values() if lk.term == term
                    for v in lk.viewpoints)
                assert inference.meanings(kb, term) == want


def _random_link_table(rng):
    kb = KnowledgeBase()
    terms = [kb.create_term(f"terme {i}", "fr") for i in range(rng.randint(2, 8))]
    concepts = [kb.create_concept(rng.choice(terms), f"c{i}")
                for i in range(rng.randint(1, 6))]
    viewpoints = [kb.create_viewpoint(f"métier {i}")
                  for i in range(rng.randint(1, 5))]
    from tkb import ViewpointConflict
    for _ in range(rng.randint(0, 30)):
        try:
            kb.link(rng.choice(terms), rng.choice(concepts),
                    rng.choice(viewpoints))
        except ViewpointConflict:
            pass
    return kb


class TestGrammaticalRelations:
    def test_head_relation(self, spatial_bare):
        fx = spatial_bare
        assert inference.grammatical_relations(fx.kb, fx.satellite) == [
            ("est-en-tête-de", fx.sat_comm)]

    def test_no_involvement(self, spatial_bare):
        fx = spatial_bare
        assert inference.grammatical_relations(fx.kb, fx.relais) == []

    def test_random_decompositions_match_flat_scan(self):
        rng = random.Random(2024)
        for _ in range(10):
            kb = KnowledgeBase()
            terms = [kb.create_term(f"mot {i}", "fr") for i in range(10)]
            for tid in terms:
                if rng.random() < 0.5:
                    parts = [(rng.choice(["head", "expansion"]),
                              rng.choice(terms))
                             for _ in range(rng.randint(1, 3))]
                    parts = [(r, t) for r, t in parts if t != tid]
                    kb.set_decomposition(tid, parts)
            for tid in terms:
                want = set()
                for other in kb.terms.values():
                    for p in other.decomposition or ():
                        if p.term == tid:
                            rel = ("est-en-tête-de" if p.role == "head"
                                   else "est-en-expansion-de")
                            want.add((rel, other.id))
                assert inference.grammatical_relations(kb, tid) == sorted(want)


# ------------------------------------------------------------ diagnostics

class TestCheckConsistency:
    def test_clean_fixture_has_no_findings(self, spatial):
        assert inference.check_consistency(spatial.kb) == []

    def test_deterministic(self):
        a = fixture_spatial.build()
        a.kb.delete_entity(a.l_geo_geo)
        b = fixture_spatial.build()
        b.kb.delete_entity(b.l_geo_geo)
        assert inference.check_consistency(a.kb) == inference.check_consistency(b.kb)

    def test_cycle_seeded(self, spatial):
        fx = spatial
        kb = fx.kb
        kb.concepts[fx.c_sat] = replace(kb.concepts[fx.c_sat],
                                        parents=frozenset({fx.c_geo}))
        diags = inference.check_consistency(kb)
        assert [(d.rule, d.severity) for d in diags] == [("Cycle", "error")]
        assert diags[0].entities == tuple(sorted([fx.c_sat, fx.c_geo]))

    def test_viewpoint_conflict_seeded(self, spatial):
        fx = spatial
        kb = fx.kb
        kb.links["l9999"] = TermConceptLink(
            "l9999", fx.relais, fx.c_sat, frozenset({fx.telecom}))
        diags = inference.check_consistency(kb)
        assert [(d.rule, d.severity) for d in diags] == \
            [("ViewpointConflict", "error")]
        assert fx.relais in diags[0].entities
        assert fx.telecom in diags[0].entities

    def test_label_not_linked_seeded(self, spatial):
        fx = spatial
        kb = fx.kb
        kb.concepts[fx.c_geo] = replace(kb.concepts[fx.c_geo],
                                        label=fx.satellite)
        diags = inference.check_consistency(kb)
        assert [(d.rule, d.severity) for d in diags] == \
            [("LabelNotLinked", "warning")]
        assert diags[0].entities == (fx.c_geo, fx.satellite)

    def test_unanchored_corpus_term_seeded(self, spatial):
        fx = spatial
        fx.kb.create_term("ANTENNE", "fr", source="corpus")
        diags = inference.check_consistency(fx.kb)
        assert [(d.rule, d.severity) for d in diags] == \
            [("UnanchoredCorpusTerm", "warning")]

    def test_interview_terms_exempt_from_anchoring(self, spatial):
        fx = spatial
        fx.kb.create_term("ANTENNE", "fr", source="interview")
        assert inference.check_consistency(fx.kb) == []

    def test_undifferentiated_siblings_seeded(self, spatial):
        fx = spatial
        kb = fx.kb
        ta = kb.create_term("CAPTEUR ALPHA", "fr", source="interview")
        tb = kb.create_term("CAPTEUR BETA", "fr", source="interview")
        ca = kb.create_concept(ta, "premier capteur", {"type": "capteur"},
                               parents={fx.c_sat})
        cb = kb.create_concept(tb, "second capteur", {"type": "capteur"},
                               parents={fx.c_sat})
        kb.link(ta, ca, fx.meteo)
        kb.link(tb, cb, fx.meteo)
        diags = inference.check_consistency(kb)
        assert [(d.rule, d.severity) for d in diags] == \
            [("UndifferentiatedSiblings", "warning")]
        assert diags[0].entities == (ca, cb)

    def test_differentiated_siblings_not_flagged(self, spatial):
        fx = spatial
        kb = fx.kb
        ta = kb.create_term("CAPTEUR ALPHA", "fr", source="interview")
        tb = kb.create_term("CAPTEUR BETA", "fr", source="interview")
        ca = kb.create_concept(ta, "premier", {"type": "optique"},
                               parents={fx.c_sat})
        cb = kb.create_concept(tb, "second", {"type": "radar"},
                               parents={fx.c_sat})
        kb.link(ta, ca, fx.meteo)
        kb.link(tb, cb, fx.meteo)
        assert inference.check_consistency(kb) == []

    def test_dangling_reference_seeded(self, spatial):
        fx = spatial
        kb = fx.kb
        kb.concepts[fx.c_geo] = replace(
            kb.concepts[fx.c_geo],
            parents=kb.concepts[fx.c_geo].parents | {"c9999"})
        diags = inference.check_consistency(kb)
        assert [(d.rule, d.severity) for d in diags] == \
            [("DanglingReference", "error")]
        assert diags[0].entities == (fx.c_geo, "c9999")

    def test_span_mismatch_seeded(self):
        fx = fixture_spatial.build(KnowledgeBase(usage_span_mode="permissive"))
        content = fx.kb.units[fx.units[0]].content
        start, end = fixture_spatial.find_span(content, "station")
        fx.kb.add_usage(fx.l_relais_sat, fx.units[0], start, end)
        diags = inference.check_consistency(fx.kb)
        assert [(d.rule, d.severity) for d in diags] == \
            [("SpanMismatch", "warning")]
        assert diags[0].entities == (fx.l_relais_sat, fx.units[0])
