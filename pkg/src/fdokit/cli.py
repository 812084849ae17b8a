"""Command-line entry point: validate, inspect, mint, serve, resolve.

Exit codes: 0 success (validate: conforms), 1 violations or a not-found
resolution, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import urllib.error
from pathlib import Path

from .graph import BlankNode, Dataset, Iri, Node, merge_datasets
from .identifiers import URI_SPACE, MintError, MintLedger
from .model import FdofModel, classify, extract_model, lookup_by_gupri, node_text
from .registry import RegistryStore
from .server import (
    BIND_ENV_VAR,
    DEFAULT_BIND,
    ResolutionProblem,
    fetch_record,
    fetch_type,
    make_server,
)
from .shapes import ShapeConfigError, ShapeRegistry, load_shapes
from .trig import ParseError, canonical_term, parse_trig
from .validator import render_report, validate


class CliError(Exception):
    """Fatal usage or input problem; message goes to stderr, exit code 2."""


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")


def _load_inputs(paths: list[str]) -> Dataset:
    datasets = []
    for path in paths:
        text = _read_text(path)
        try:
            datasets.append(parse_trig(text))
        except ParseError as exc:
            raise CliError(f"{path}: {exc}")
    return merge_datasets(datasets)


def _load_shapes(path: str | None) -> ShapeRegistry | None:
    if path is None:
        return None
    try:
        return load_shapes(_read_text(path))
    except ShapeConfigError as exc:
        raise CliError(f"{path}: {exc}")


def cmd_validate(args: argparse.Namespace) -> int:
    dataset = _load_inputs(args.inputs)
    registry = _load_shapes(args.shapes)
    report = validate(extract_model(dataset), registry)
    sys.stdout.write(render_report(report, args.format))
    return 0 if report.conforms else 1


def _find_node(model: FdofModel, dataset: Dataset, ref: str) -> list[Node]:
    candidates: list[Node] = []
    if ref.startswith("_:"):
        node = BlankNode(ref[2:])
        if node in model.objects:
            candidates.append(node)
    try:
        node = Iri(ref)
        if node in model.objects:
            candidates.append(node)
    except ValueError:
        pass
    if not candidates and ":" in ref:
        prefix, _, local = ref.partition(":")
        namespace = dataset.prefixes.get(prefix)
        if namespace is not None:
            node = Iri(namespace + local)
            if node in model.objects:
                candidates.append(node)
    if not candidates:
        candidates.extend(lookup_by_gupri(model, ref))
    return candidates


def _inspect_payload(model: FdofModel, node: Node) -> dict:
    obj = model.object(node)
    summary = classify(model, node)
    return {
        "node": node_text(node),
        "kinds": list(summary.kinds),
        "info_types": list(summary.info_types),
        "encoding_formats": list(summary.encoding_formats),
        "gupris": list(obj.gupris),
        "identifier_nodes": sorted(n.value for n in obj.identifier_nodes),
        "materialized_by": sorted(node_text(n) for n in obj.materialized_by),
        "described_by": sorted(node_text(n) for n in obj.described_by),
        "attributions": [
            {"property": prop, "value": canonical_term(value)}
            for prop, value in obj.attributions
        ],
    }


def cmd_inspect(args: argparse.Namespace) -> int:
    dataset = _load_inputs(args.inputs)
    model = extract_model(dataset)
    nodes = _find_node(model, dataset, args.node)
    if not nodes:
        raise CliError(f"unknown node or identifier: {args.node}")
    payloads = [_inspect_payload(model, node) for node in nodes]
    if args.format == "json":
        doc = payloads[0] if len(payloads) == 1 else payloads
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        return 0
    for payload in payloads:
        print(f"node: {payload['node']}")
        print(f"kinds: {', '.join(payload['kinds']) or '(none)'}")
        print(f"information object types: {', '.join(payload['info_types']) or '(none)'}")
        print(f"encoding formats: {', '.join(payload['encoding_formats']) or '(none)'}")
        print(f"gupris: {', '.join(payload['gupris']) or '(none)'}")
        print(f"identifier nodes: {', '.join(payload['identifier_nodes']) or '(none)'}")
        print(f"materialized by: {', '.join(payload['materialized_by']) or '(none)'}")
        print(f"described by: {', '.join(payload['described_by']) or '(none)'}")
        if payload["attributions"]:
            print("attributions:")
            for attribution in payload["attributions"]:
                print(f"  {attribution['property']}: {attribution['value']}")
        else:
            print("attributions: (none)")
    return 0


def cmd_mint(args: argparse.Namespace) -> int:
    ledger = MintLedger()
    try:
        gupri, identification = ledger.mint(
            URI_SPACE, args.template, args.agent, args.object
        )
    except MintError as exc:
        raise CliError(str(exc))
    doc = {
        "gupri": gupri.base.value,
        "space": gupri.base.space.name,
        "identification": {
            "identifier": identification.identifier.value,
            "object": identification.object,
            "agent": identification.agent,
            "timestamp": identification.timestamp.isoformat(),
        },
    }
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    bind = args.bind or os.environ.get(BIND_ENV_VAR) or DEFAULT_BIND
    shapes = _load_shapes(args.shapes)
    store = RegistryStore(args.journal)
    try:
        server = make_server(store, bind, shapes=shapes, allow_force=args.force)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot bind {bind}: {exc}")
    host, port = server.server_address[:2]
    print(f"serving on {host}:{port}, journal at {args.journal}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def cmd_resolve(args: argparse.Namespace) -> int:
    try:
        if args.type:
            payload = fetch_type(args.endpoint, args.gupri)
            sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        else:
            text, etag = fetch_record(args.endpoint, args.gupri)
            sys.stdout.write(text)
            print(f"etag: {etag}", file=sys.stderr)
        return 0
    except ResolutionProblem as exc:
        if exc.status == 404:
            print(f"not found: {args.gupri}", file=sys.stderr)
            return 1
        raise CliError(str(exc))
    except urllib.error.URLError as exc:
        raise CliError(f"cannot reach {args.endpoint}: {exc.reason}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdokit",
        description="FAIR digital object toolkit: validate corpora, inspect objects, "
        "mint identifiers, and run or query the resolution service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate datasets against the rule catalog")
    p.add_argument("inputs", nargs="+", help="TriG input files (merged before checking)")
    p.add_argument("--shapes", help="shape config (YAML)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("inspect", help="classification and attributions for one node")
    p.add_argument("inputs", nargs="+", help="TriG input files")
    p.add_argument("node", help="node IRI, prefixed name, _:label, or identifier value")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("mint", help="mint a fresh identifier with provenance")
    p.add_argument("--template", required=True, help="value template with one {} slot")
    p.add_argument("--agent", required=True, help="IRI of the assigning agent")
    p.add_argument("--object", required=True, help="IRI of the identified object")
    p.set_defaults(func=cmd_mint)

    p = sub.add_parser("serve", help="run the resolution service")
    p.add_argument("--journal", default="fdokit.journal", help="journal file path")
    p.add_argument("--bind", help=f"host:port (default ${BIND_ENV_VAR} or {DEFAULT_BIND})")
    p.add_argument("--shapes", help="shape config used to validate deposits")
    p.add_argument("--force", action="store_true", help="allow forced deposits")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("resolve", help="resolve an identifier against a service")
    p.add_argument("gupri", help="identifier value to resolve")
    p.add_argument("--endpoint", required=True, help="service base URL")
    p.add_argument("--type", action="store_true", help="fetch the classification instead")
    p.set_defaults(func=cmd_resolve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
