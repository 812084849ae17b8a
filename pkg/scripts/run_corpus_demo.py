#!/usr/bin/env python3
"""End-to-end walkthrough on the bundled example corpus.

Parses the three corpus files, validates them against the bundled shapes,
starts a resolution service on an ephemeral port, deposits the corpus, and
resolves every identifier back, checking payload isomorphism.
"""

from __future__ import annotations

import argparse
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]

from fdokit import (  # noqa: E402
    extract_model,
    isomorphic,
    load_shapes,
    merge_datasets,
    parse_trig,
    render_report,
    serialize_trig,
    validate,
)
from fdokit.registry import RegistryStore  # noqa: E402
from fdokit.server import fetch_record, fetch_type, make_server, post_deposit, start_in_background  # noqa: E402

DATA = REPO / "tests" / "data"
CORPUS = (
    DATA / "amazon_top50_identification.trig",
    DATA / "amazon_top50_metadata.trig",
    DATA / "amazon_top50_media.trig",
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    args = parser.parse_args()

    dataset = merge_datasets([parse_trig(p.read_text(encoding="utf-8")) for p in CORPUS])
    shapes = load_shapes((DATA / "shapes.yaml").read_text(encoding="utf-8"))
    model = extract_model(dataset)

    print(f"corpus: {len(dataset)} quads, {len(model.objects)} objects, "
          f"{len(model.records)} metadata record(s)")
    report = validate(model, shapes)
    print(render_report(report, args.format))
    if not report.conforms:
        return 1

    with tempfile.TemporaryDirectory() as tmp:
        store = RegistryStore(Path(tmp) / "demo.journal")
        server = make_server(store, "127.0.0.1:0", shapes=shapes)
        start_in_background(server)
        host, port = server.server_address[:2]
        endpoint = f"http://{host}:{port}"
        print(f"service listening on {endpoint}")
        try:
            deposited = post_deposit(endpoint, serialize_trig(dataset))
            for item in deposited:
                text, etag = fetch_record(endpoint, item["gupri"])
                entry = store.resolve(item["gupri"])
                ok = isomorphic(parse_trig(text), entry.dataset)
                kinds = ",".join(fetch_type(endpoint, item["gupri"])["kinds"])
                print(f"  {item['gupri']}")
                print(f"    kinds={kinds} etag={etag[:12]}... round-trip={'ok' if ok else 'MISMATCH'}")
                if not ok:
                    return 1
        finally:
            server.shutdown()
            server.server_close()
    print("demo complete")
    return 0


if __name__ == "__main__":
    sys.exit(main())
