"""Command-line front door for construction, verification and batch queries.

Query subcommands print the same JSON payloads the HTTP service returns in its
envelope's data field; mutating subcommands print the created id and rewrite
the knowledge-base file atomically. Domain errors exit 1 with the error code
on stderr; usage errors exit 2.
"""

from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from pathlib import Path

import click

from . import store, views
from .errors import TkbError
from .kb import KnowledgeBase


def _dump(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True)


@contextmanager
def _domain_errors():
    try:
        yield
    except TkbError as exc:
        click.echo(f"{exc.code}: {exc}", err=True)
        sys.exit(1)


def _load(ctx) -> KnowledgeBase:
    path = Path(ctx.obj["kb_path"])
    if not path.exists():
        click.echo(f"knowledge base file not found: {path} (run `tkb init`)",
                   err=True)
        sys.exit(1)
    with _domain_errors():
        return store.load(path, usage_span_mode=ctx.obj["mode"])


def _save(ctx, kb: KnowledgeBase) -> None:
    store.save(kb, ctx.obj["kb_path"])


@click.group()
@click.option("--kb", "kb_path", envvar="TKB_FILE", default="tkb.json",
              show_default=True, help="Knowledge base file (env: TKB_FILE).")
@click.option("--permissive", is_flag=True,
              help="Store usage anchors even when the span does not match "
                   "the term (mismatches become checker warnings).")
@click.pass_context
def main(ctx, kb_path, permissive):
    """Terminological knowledge base: construction, verification, consultation."""
    ctx.obj = {"kb_path": kb_path,
               "mode": "permissive" if permissive else "strict"}


@main.command()
@click.option("--force", is_flag=True, help="Overwrite an existing file.")
@click.pass_context
def init(ctx, force):
    """Create an empty knowledge base file."""
    path = Path(ctx.obj["kb_path"])
    if path.exists() and not force:
        click.echo(f"{path} already exists (use --force to overwrite)", err=True)
        sys.exit(1)
    store.save(KnowledgeBase(), path)
    click.echo(str(path))


@main.command()
@click.option("--force", is_flag=True, help="Overwrite an existing file.")
@click.pass_context
def demo(ctx, force):
    """Write the built-in space-domain demo knowledge base."""
    from . import demo as demo_mod

    path = Path(ctx.obj["kb_path"])
    if path.exists() and not force:
        click.echo(f"{path} already exists (use --force to overwrite)", err=True)
        sys.exit(1)
    store.save(demo_mod.build_demo().kb, path)
    click.echo(str(path))


@main.command("import-corpus")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--title", default=None, help="Document title (default: file name).")
@click.option("--note", "source_note", default="", help="Provenance note.")
@click.pass_context
def import_corpus(ctx, file, title, source_note):
    """Ingest a plain-text document and segment it into textual units."""
    kb = _load(ctx)
    text = Path(file).read_text(encoding="utf-8")
    with _domain_errors():
        document_id = kb.ingest_document(title or Path(file).name,
                                         source_note, text)
    _save(ctx, kb)
    click.echo(document_id)


@main.command("import-terms")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def import_terms(ctx, file):
    """Batch-register terms from a tab-separated term list."""
    kb = _load(ctx)
    with _domain_errors():
        created, skipped = store.import_term_list(kb, file)
    _save(ctx, kb)
    click.echo(f"{created} created, {skipped} skipped")


@main.command("add-term")
@click.argument("surface")
@click.option("--language", "-l", required=True)
@click.option("--category", default="", help="Grammatical category.")
@click.option("--gender", default=None)
@click.option("--number", default=None)
@click.option("--variant", "variants", multiple=True,
              help="Form variant (repeatable).")
@click.option("--component", "components", multiple=True, metavar="ROLE=TERMID",
              help="Decomposition component, role head or expansion (repeatable).")
@click.option("--source", type=click.Choice(["corpus", "interview"]),
              default="corpus", show_default=True)
@click.pass_context
def add_term(ctx, surface, language, category, gender, number, variants,
             components, source):
    """Create a term (a linguistic sign; carries no conceptual information)."""
    kb = _load(ctx)
    decomposition = None
    if components:
        decomposition = []
        for item in components:
            role, _, term_id = item.partition("=")
            if not term_id:
                raise click.UsageError(f"--component takes ROLE=TERMID, got {item!r}")
            decomposition.append((role, term_id))
    with _domain_errors():
        term_id = kb.create_term(surface, language,
                                 grammatical_category=category,
                                 gender=gender, number=number,
                                 variants=variants,
                                 decomposition=decomposition, source=source)
    _save(ctx, kb)
    click.echo(term_id)


@main.command("add-viewpoint")
@click.argument("name")
@click.option("--description", default="")
@click.pass_context
def add_viewpoint(ctx, name, description):
    """Create a viewpoint (a speaker community / langue de spécialité)."""
    kb = _load(ctx)
    with _domain_errors():
        viewpoint_id = kb.create_viewpoint(name, description)
    _save(ctx, kb)
    click.echo(viewpoint_id)


@main.command("add-concept")
@click.option("--label", required=True, help="Term id of the terme-vedette.")
@click.option("--description", default="")
@click.option("--attr", "attrs", multiple=True, metavar="KEY=VALUE",
              help="attribute:value pair (repeatable).")
@click.option("--parent", "parents", multiple=True,
              help="Parent concept id (repeatable).")
@click.pass_context
def add_concept(ctx, label, description, attrs, parents):
    """Create a concept frame."""
    kb = _load(ctx)
    pairs = []
    for item in attrs:
        key, sep, value = item.partition("=")
        if not sep:
            raise click.UsageError(f"--attr takes KEY=VALUE, got {item!r}")
        pairs.append((key, value))
    with _domain_errors():
        concept_id = kb.create_concept(label, description, pairs, parents)
    _save(ctx, kb)
    click.echo(concept_id)


@main.command("add-parent")
@click.argument("child")
@click.argument("parent")
@click.pass_context
def add_parent(ctx, child, parent):
    """Add an est-un edge; the hierarchy stays acyclic."""
    kb = _load(ctx)
    with _domain_errors():
        kb.add_parent(child, parent)
    _save(ctx, kb)
    click.echo(f"{child} est-un {parent}")


@main.command("add-relation-type")
@click.argument("name")
@click.argument("definition")
@click.pass_context
def add_relation_type(ctx, name, definition):
    """Register an assertional relation type with its default definition."""
    kb = _load(ctx)
    with _domain_errors():
        kb.register_relation_type(name, definition)
    _save(ctx, kb)
    click.echo(name)


@main.command("add-relation")
@click.argument("src")
@click.argument("relation_type")
@click.argument("dst")
@click.option("--definition", default="", help="Definition text for this fact.")
@click.pass_context
def add_relation(ctx, src, relation_type, dst, definition):
    """Assert a non-structural relation between two concepts."""
    kb = _load(ctx)
    with _domain_errors():
        kb.add_assertional_relation(src, relation_type, dst, definition)
    _save(ctx, kb)
    click.echo(f"{src} {relation_type} {dst}")


@main.command()
@click.argument("term")
@click.argument("concept")
@click.argument("viewpoint")
@click.pass_context
def link(ctx, term, concept, viewpoint):
    """Link a term to the concept it designates under a viewpoint."""
    kb = _load(ctx)
    with _domain_errors():
        link_id = kb.link(term, concept, viewpoint)
    _save(ctx, kb)
    click.echo(link_id)


@main.command()
@click.argument("link_id", metavar="LINK")
@click.argument("unit")
@click.argument("start", type=int)
@click.argument("end", type=int)
@click.pass_context
def anchor(ctx, link_id, unit, start, end):
    """Anchor a usage of the link's term at a span of a text unit."""
    kb = _load(ctx)
    with _domain_errors():
        kb.add_usage(link_id, unit, start, end)
    _save(ctx, kb)
    click.echo(f"{link_id} @ {unit}[{start}:{end}]")


@main.command()
@click.argument("entity_id", metavar="ID")
@click.pass_context
def delete(ctx, entity_id):
    """Delete an entity together with its dependent records."""
    kb = _load(ctx)
    with _domain_errors():
        kb.delete_entity(entity_id)
    _save(ctx, kb)
    click.echo(f"deleted {entity_id}")


@main.command()
@click.pass_context
def check(ctx):
    """Run the consistency checker; exit 1 if any error-level finding exists."""
    kb = _load(ctx)
    findings = views.diagnostics(kb)
    click.echo(_dump(findings))
    errors = sum(1 for d in findings if d["severity"] == "error")
    warnings = len(findings) - errors
    click.echo(f"{errors} errors, {warnings} warnings", err=True)
    if errors:
        sys.exit(1)


@main.command("show-concept")
@click.argument("concept")
@click.pass_context
def show_concept(ctx, concept):
    """Print the concept's effective frame (inherited entries marked)."""
    kb = _load(ctx)
    with _domain_errors():
        click.echo(_dump(views.frame(kb, concept)))


@main.command("show-document")
@click.argument("document")
@click.pass_context
def show_document(ctx, document):
    """Print a document with its unit ids and contents."""
    kb = _load(ctx)
    with _domain_errors():
        click.echo(_dump(views.document_detail(kb, document)))


@main.command()
@click.argument("term")
@click.pass_context
def meanings(ctx, term):
    """List the (viewpoint, concept) interpretations of a term."""
    kb = _load(ctx)
    with _domain_errors():
        click.echo(_dump(views.meanings(kb, term)))


@main.command()
@click.argument("term")
@click.argument("viewpoint")
@click.pass_context
def synonyms(ctx, term, viewpoint):
    """Terms designating the same concept under the same viewpoint."""
    kb = _load(ctx)
    with _domain_errors():
        click.echo(_dump(views.synonyms(kb, term, viewpoint)))


@main.command()
@click.argument("query")
@click.pass_context
def search(ctx, query):
    """Keyword search across all textual units."""
    kb = _load(ctx)
    with _domain_errors():
        click.echo(_dump(views.search(kb, query)))


@main.command("export-graph")
@click.option("--mode", type=click.Choice(["hierarchy", "assertional", "full"]),
              default="full", show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False), default=None,
              help="Write to a file instead of stdout.")
@click.pass_context
def export_graph(ctx, mode, out):
    """Emit the concept network in DOT for graph layout tools."""
    kb = _load(ctx)
    dot = store.export_graph(kb, mode)
    if out:
        Path(out).write_text(dot, encoding="utf-8")
        click.echo(out)
    else:
        click.echo(dot, nl=False)


@main.command("list-terms")
@click.pass_context
def list_terms(ctx):
    """All terms, alphabetical by normalized surface."""
    kb = _load(ctx)
    click.echo(_dump(views.term_list(kb)))


@main.command("list-concepts")
@click.pass_context
def list_concepts(ctx):
    """All concepts, alphabetical by terme-vedette surface."""
    kb = _load(ctx)
    click.echo(_dump(views.concept_list(kb)))


@main.command("list-documents")
@click.pass_context
def list_documents(ctx):
    """All corpus documents."""
    kb = _load(ctx)
    click.echo(_dump(views.document_list(kb)))


@main.command()
@click.option("--port", type=int, default=8787, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static", "static_dir", type=click.Path(file_okay=False),
              envvar="TKB_STATIC", default=None,
              help="Directory of built UI assets to serve at / "
                   "(env: TKB_STATIC).")
@click.pass_context
def serve(ctx, port, host, static_dir):
    """Serve the HTTP API (and the browser UI when assets are available)."""
    from . import service

    path = Path(ctx.obj["kb_path"])
    if not path.exists():
        click.echo(f"knowledge base file not found: {path} (run `tkb init`)",
                   err=True)
        sys.exit(1)
    with _domain_errors():
        service.serve(path, port=port, host=host,
                      usage_span_mode=ctx.obj["mode"], static_dir=static_dir)


if __name__ == "__main__":
    main()
