"""On-disk witness format.

A witness file is self-contained: the core rows, the construction parameters
and ingredient (packing or coloring) inline, and the verifier's certificate::

    {"schema": 1, "n": 17, "v": 6, "t": 7, "rows": [[...], ...],
     "provenance": {...}, "certificate": {"tier": ..., "status": ..., ...}}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import CoreWitness, PermutationArray, SuitabilityParams, read_text_array
from .verify import Verdict

SCHEMA_VERSION = 1


def witness_to_json(w: CoreWitness) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "n": w.n,
        "v": w.v,
        "t": w.t,
        "rows": w.core.to_lists(),
        "provenance": w.provenance,
        "certificate": w.certificate.to_json() if w.certificate is not None else None,
    }


def witness_from_json(d: dict[str, Any]) -> CoreWitness:
    if d.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported witness schema {d.get('schema')!r}")
    core = PermutationArray(d["rows"], n_symbols=int(d["v"]))
    if core.n_rows != int(d["n"]):
        raise ValueError(f"witness claims n={d['n']} but has {core.n_rows} rows")
    cert = d.get("certificate")
    return CoreWitness(core, SuitabilityParams(int(d["t"])), dict(d.get("provenance") or {}),
                       Verdict.from_json(cert) if cert else None)


def dump_witness(w: CoreWitness, path: str | Path) -> None:
    Path(path).write_text(json.dumps(witness_to_json(w), indent=1) + "\n")


def load_array(path: str | Path) -> tuple[PermutationArray, int, dict[str, Any]]:
    """Read a witness JSON file or a plain-text ``N v t`` file as ``(core, t, raw_json)``.

    Unlike :func:`witness_from_json` this does not insist on the row-count floor,
    so undersized cores can still be loaded and falsified.
    """
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        d = json.loads(text)
        core = PermutationArray(d["rows"], n_symbols=int(d["v"]))
        if core.n_rows != int(d["n"]):
            raise ValueError(f"witness claims n={d['n']} but has {core.n_rows} rows")
        return core, int(d["t"]), d
    core, t = read_text_array(text)
    return core, t, {}
