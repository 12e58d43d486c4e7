"""Operator CLI: import/export/validate/check/query plus serve.

Exit codes: 0 ok, 1 domain error (validation, parse, unknown id/relation),
2 I/O or environment error, 3 constraint violated.
"""

from __future__ import annotations

import json as jsonlib
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click

from knowcard import cardxml, ocl
from knowcard.rdf import DEFAULT_BASE_IRI, LB_NS, Iri
from knowcard.store import (
    CardStore,
    NotFoundError,
    StoreError,
    StoreNotInitialized,
    resolve_resource,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2
EXIT_VIOLATED = 3


@dataclass
class CliConfig:
    store_path: Path
    base_iri: str
    schema_path: Optional[Path]
    as_json: bool

    def open_store(self, create: bool) -> CardStore:
        return CardStore(
            self.store_path, self.base_iri, schema_path=self.schema_path, create=create
        )


@click.group(name="knowcard")
@click.option(
    "--store",
    "store_path",
    type=click.Path(path_type=Path),
    default=None,
    envvar="KNOWCARD_STORE",
    help="Store root directory (default ./knowcard-store).",
)
@click.option(
    "--base",
    "base_iri",
    default=DEFAULT_BASE_IRI,
    envvar="KNOWCARD_BASE",
    show_default=True,
    help="Base IRI for card and concept resources.",
)
@click.option(
    "--schema",
    "schema_path",
    type=click.Path(path_type=Path, exists=True),
    default=None,
    envvar="KNOWCARD_SCHEMA",
    help="Ontology schema file used when initializing a store.",
)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx, store_path, base_iri, schema_path, as_json):
    """Typed design-knowledge cards: capture, viewing, and constraint checks."""

    ctx.obj = CliConfig(
        store_path=store_path or Path("./knowcard-store"),
        base_iri=base_iri,
        schema_path=schema_path,
        as_json=as_json,
    )


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _report_lines(report) -> str:
    return "\n".join(f"{v.code}\t{v.path}\t{v.message}" for v in report)


@main.command("import")
@click.argument("file", type=click.Path(path_type=Path))
@click.option("--overwrite", is_flag=True, help="Replace an existing card with the same id.")
@click.pass_obj
def import_cmd(config: CliConfig, file: Path, overwrite: bool):
    """Import a card XML file into the store."""

    document = _read_text(file)
    try:
        card = cardxml.parse_card(document)
    except cardxml.InvalidCardError as exc:
        click.echo(_report_lines(exc.report), err=True)
        sys.exit(EXIT_DOMAIN)
    except cardxml.CardXmlError as exc:
        click.echo(f"{exc.code}\t{exc.path}\t{exc}", err=True)
        sys.exit(EXIT_DOMAIN)
    try:
        store = config.open_store(create=True)
        card_id = store.put_card(card, overwrite=overwrite)
    except StoreNotInitialized as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    except StoreError as exc:
        click.echo(f"{exc.code}\t{exc}", err=True)
        sys.exit(EXIT_IO if exc.code == "STORAGE_IO" else EXIT_DOMAIN)
    click.echo(jsonlib.dumps({"id": card_id}) if config.as_json else card_id)


@main.command("export")
@click.argument("card_id")
@click.argument("out", type=click.Path(path_type=Path))
@click.pass_obj
def export_cmd(config: CliConfig, card_id: str, out: Path):
    """Write a card's canonical XML to a file."""

    try:
        store = config.open_store(create=False)
        card = store.get_card(card_id)
    except (StoreNotInitialized, NotFoundError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO if isinstance(exc, StoreNotInitialized) else EXIT_DOMAIN)
    except StoreError as exc:
        click.echo(f"{exc.code}\t{exc}", err=True)
        sys.exit(EXIT_IO)
    try:
        out.write_text(cardxml.serialize_card(card), encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot write {out}: {exc}", err=True)
        sys.exit(EXIT_IO)
    if config.as_json:
        click.echo(jsonlib.dumps({"id": card_id, "path": str(out)}))


@main.command("validate")
@click.argument("file", type=click.Path(path_type=Path))
@click.pass_obj
def validate_cmd(config: CliConfig, file: Path):
    """Validate a card XML file; exit 1 when invalid."""

    report = cardxml.validate_against_schema(_read_text(file))
    if config.as_json:
        click.echo(
            jsonlib.dumps(
                [{"code": v.code, "path": v.path, "message": v.message} for v in report]
            )
        )
    elif report:
        click.echo(_report_lines(report))
    else:
        click.echo("valid")
    sys.exit(EXIT_DOMAIN if report else EXIT_OK)


@main.command("check")
@click.argument("constraint_file", type=click.Path(path_type=Path))
@click.argument("bindings_file", type=click.Path(path_type=Path))
@click.option("--rel-tol", type=float, default=ocl.DEFAULT_REL_TOL, show_default=True)
@click.option("--abs-tol", type=float, default=ocl.DEFAULT_ABS_TOL, show_default=True)
@click.pass_obj
def check_cmd(config: CliConfig, constraint_file: Path, bindings_file: Path, rel_tol, abs_tol):
    """Check a constraint against a bindings file; exit 3 when violated."""

    source = _read_text(constraint_file)
    bindings_text = _read_text(bindings_file)
    try:
        constraint = ocl.parse_constraint(source)
        env = ocl.parse_bindings(bindings_text)
        report = ocl.check_invariant(constraint, env, rel_tol, abs_tol)
    except ocl.OclError as exc:
        offset = f" (offset {exc.offset})" if exc.offset is not None else ""
        click.echo(f"{exc.code}: {exc}{offset}", err=True)
        sys.exit(EXIT_DOMAIN)
    if config.as_json:
        click.echo(
            jsonlib.dumps(
                {
                    "holds": report.holds,
                    "context": constraint.context_name,
                    "lhs_value": report.lhs_value,
                    "rhs_value": report.rhs_value,
                    "residual": report.residual,
                    "violated_subterms": [list(s) for s in report.violated_subterms],
                }
            )
        )
    else:
        click.echo(f"context: {constraint.context_name}")
        click.echo(f"holds: {'true' if report.holds else 'false'}")
        if report.residual is not None:
            click.echo(f"lhs: {report.lhs_value!r}")
            click.echo(f"rhs: {report.rhs_value!r}")
            click.echo(f"residual: {report.residual!r}")
    sys.exit(EXIT_OK if report.holds else EXIT_VIOLATED)


@main.command("query")
@click.argument("root")
@click.argument("relation")
@click.option("--infer", is_flag=True, help="Follow sub-properties of the relation.")
@click.pass_obj
def query_cmd(config: CliConfig, root: str, relation: str, infer: bool):
    """List resources related to ROOT by RELATION, one per line."""

    try:
        store = config.open_store(create=False)
    except StoreNotInitialized as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    known = sorted(p.local_name() for p in store.schema.properties)
    if relation not in known:
        click.echo(f"error: unknown relation {relation!r}; one of {', '.join(known)}", err=True)
        sys.exit(EXIT_DOMAIN)
    resource = resolve_resource(root, config.base_iri)
    results = store.find_related_cards(resource, Iri(LB_NS + relation), use_inference=infer)
    if config.as_json:
        click.echo(
            jsonlib.dumps(
                [{"resource": iri.value, "card_id": card_id} for iri, card_id in results]
            )
        )
    else:
        for iri, _ in results:
            click.echo(iri.value)
    sys.exit(EXIT_OK)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=7341, show_default=True)
@click.option("--init", "init_store", is_flag=True, help="Create the store layout if missing.")
@click.option(
    "--ui",
    "ui_dir",
    type=click.Path(path_type=Path, exists=True, file_okay=False),
    default=None,
    help="Serve a static UI build at /ui.",
)
@click.pass_obj
def serve_cmd(config: CliConfig, host: str, port: int, init_store: bool, ui_dir):
    """Run the capture/viewing service."""

    import uvicorn

    from knowcard.service import create_app

    try:
        store = config.open_store(create=init_store)
    except StoreNotInitialized as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    except StoreError as exc:
        click.echo(f"{exc.code}\t{exc}", err=True)
        sys.exit(EXIT_IO)

    app = create_app(store, ui_dir=ui_dir)
    server = uvicorn.Server(uvicorn.Config(app, host=host, port=port, log_level="info"))
    try:
        server.run()
    except SystemExit as exc:
        # uvicorn exits non-zero on startup failure (e.g. the port is taken)
        sys.exit(EXIT_IO if exc.code not in (0, None) else EXIT_OK)
    except KeyboardInterrupt:
        sys.exit(EXIT_OK)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)


if __name__ == "__main__":
    main()
