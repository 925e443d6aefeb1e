"""Property tests for the structural invariants.

A random-operation interpreter drives the knowledge base through arbitrary
mutation sequences; after every single operation the invariants are checked
against flat-scan oracles, and every rejected operation must leave the
serialized state untouched.
"""

from hypothesis import given, settings, strategies as st

from tkb import KnowledgeBase, TkbError, corpus, inference, store

OPS = ("term", "viewpoint", "concept", "parent", "link", "delete", "relation")

op_lists = st.lists(
    st.tuples(st.sampled_from(OPS),
              st.integers(0, 11), st.integers(0, 11), st.integers(0, 11)),
    max_size=60)


def apply_ops(ops, check_each=None):
    kb = KnowledgeBase()
    kb.register_relation_type("liée-à", "relation générique")
    pools = {"terms": [], "viewpoints": [], "concepts": [], "links": []}

    def pick(pool, idx):
        return pools[pool][idx % len(pools[pool])] if pools[pool] else None

    for kind, a, b, c in ops:
        before = store.saves(kb)
        try:
            if kind == "term":
                pools["terms"].append(kb.create_term(f"mot {a}", "fr"))
            elif kind == "viewpoint":
                pools["viewpoints"].append(kb.create_viewpoint(f"métier {a}"))
            elif kind == "concept":
                label = pick("terms", a)
                if label is None:
                    continue
                parents = {p for p in (pick("concepts", b), pick("concepts", c))
                           if p is not None}
                pools["concepts"].append(kb.create_concept(label, "d", None,
                                                           parents))
            elif kind == "parent":
                child, parent = pick("concepts", a), pick("concepts", b)
                if child and parent:
                    kb.add_parent(child, parent)
            elif kind == "link":
                t, cc, v = pick("terms", a), pick("concepts", b), \
                    pick("viewpoints", c)
                if t and cc and v:
                    link_id = kb.link(t, cc, v)
                    if link_id not in pools["links"]:
                        pools["links"].append(link_id)
            elif kind == "relation":
                src, dst = pick("concepts", a), pick("concepts", b)
                if src and dst:
                    kb.add_assertional_relation(src, "liée-à", dst)
            elif kind == "delete":
                everything = (pools["terms"] + pools["viewpoints"]
                              + pools["concepts"] + pools["links"])
                if everything:
                    kb.delete_entity(everything[a % len(everything)])
        except TkbError:
            assert store.saves(kb) == before, \
                f"rejected {kind} mutated the knowledge base"
        for pool in pools.values():
            pool[:] = [e for e in pool
                       if e in kb.terms or e in kb.viewpoints
                       or e in kb.concepts or e in kb.links]
        if check_each:
            check_each(kb)
    return kb


def assert_viewpoint_functional(kb):
    seen = {}
    for lk in kb.links.values():
        for v in lk.viewpoints:
            key = (lk.term, v)
            assert seen.setdefault(key, lk.concept) == lk.concept, \
                f"{key} designates two concepts"


def assert_acyclic(kb):
    color = {cid: 0 for cid in kb.concepts}

    def visit(x):
        color[x] = 1
        for p in kb.concepts[x].parents:
            if color[p] == 1 or (color[p] == 0 and visit(p)):
                return True
        color[x] = 2
        return False

    assert not any(color[cid] == 0 and visit(cid) for cid in kb.concepts)


def assert_link_pairs_unique(kb):
    pairs = [(lk.term, lk.concept) for lk in kb.links.values()]
    assert len(pairs) == len(set(pairs))


def assert_no_dangling(kb):
    for c in kb.concepts.values():
        assert c.label in kb.terms
        assert all(p in kb.concepts for p in c.parents)
        assert all(r.target in kb.concepts for r in c.assertional_relations)
    for lk in kb.links.values():
        assert lk.term in kb.terms and lk.concept in kb.concepts
        assert lk.viewpoints and all(v in kb.viewpoints for v in lk.viewpoints)


@settings(max_examples=120, deadline=None)
@given(op_lists)
def test_invariants_hold_after_every_operation(ops):
    def check(kb):
        assert_viewpoint_functional(kb)
        assert_acyclic(kb)
        assert_link_pairs_unique(kb)
        assert_no_dangling(kb)

    apply_ops(ops, check_each=check)


@settings(max_examples=80, deadline=None)
@given(op_lists)
def test_synonymy_is_an_equivalence_among_linked_terms(ops):
    kb = apply_ops(ops)
    for term in kb.terms:
        for vp in kb.viewpoints:
            syns = inference.synonyms(kb, term, vp)
            assert term not in syns
            for other in syns:
                back = inference.synonyms(kb, other, vp)
                assert term in back
                # transitivity within the fixed viewpoint
                assert syns - {other} <= back | {other}


@settings(max_examples=80, deadline=None)
@given(op_lists)
def test_meanings_and_designators_are_mutual_inverses(ops):
    kb = apply_ops(ops)
    for term in kb.terms:
        for vp, concept in inference.meanings(kb, term):
            assert any(t == term and vp in vps
                       for t, vps in inference.designators(kb, concept))
    for concept in kb.concepts:
        for term, vps in inference.designators(kb, concept):
            got = inference.meanings(kb, term)
            assert all((vp, concept) in got for vp in vps)


@settings(max_examples=80, deadline=None)
@given(op_lists)
def test_round_trip_preserves_canonical_bytes(ops):
    kb = apply_ops(ops)
    text = store.saves(kb)
    assert store.saves(store.loads(text)) == text


@settings(max_examples=150, deadline=None)
@given(st.text(alphabet=st.sampled_from("ab éèç.,;\n\t "), max_size=300))
def test_segmentation_reconstruction(text):
    prefix, contents, seps, suffix = corpus.segment_text(text)
    assert corpus.reconstruct(prefix, contents, seps, suffix) == text
    assert len(seps) == max(len(contents) - 1, 0)


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet=st.sampled_from("abcéè \n."), min_size=1, max_size=200),
       st.text(alphabet=st.sampled_from("abcéè"), min_size=1, max_size=5))
def test_keyword_search_equals_naive_scan(text, query):
    kb = KnowledgeBase()
    kb.ingest_document("t", "", text)
    got = corpus.keyword_search(kb, query)
    q = query.strip().casefold()
    want = []
    for doc_id in sorted(kb.documents):
        for unit_id in kb.documents[doc_id].units:
            content = kb.units[unit_id].content
            for i in range(len(content) - len(q) + 1):
                if content[i:i + len(q)].casefold() == q:
                    want.append((unit_id, i, i + len(q)))
    assert got == want


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet=st.sampled_from("relais satelite\n."), min_size=1,
               max_size=200))
def test_strict_anchors_are_indexed_occurrences(text):
    kb = KnowledgeBase()
    term = kb.create_term("relais", "fr")
    vp = kb.create_viewpoint("métier")
    concept = kb.create_concept(term, "d")
    link = kb.link(term, concept, vp)
    kb.ingest_document("t", "", text)
    occs = corpus.index_occurrences(kb, term)
    for occ in occs:
        kb.add_usage(link, occ.text_unit, occ.start, occ.end)
    stored = kb.link_record(link).usages
    assert {(u.unit, u.start, u.end) for u in stored} == \
        {(o.text_unit, o.start, o.end) for o in occs}
    # and the checker agrees strict anchors never mismatch
    assert not any(d.rule == "SpanMismatch"
                   for d in inference.check_consistency(kb))
