"""CSV and manifest writers. All floats are emitted at 17 significant
digits so that files reload bit-faithfully."""

from __future__ import annotations

import hashlib
import json
import os


def fmt(value) -> str:
    if isinstance(value, (int, bool)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_csv(path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_json(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(out_dir, scenario: str, files) -> str:
    """Write manifest.json listing every artifact with its content hash."""
    payload = {
        "scenario": scenario,
        "files": {os.path.relpath(p, out_dir): sha256_of(p) for p in sorted(files)},
    }
    path = os.path.join(out_dir, "manifest.json")
    write_json(path, payload)
    return path
