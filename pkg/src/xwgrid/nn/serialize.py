"""Checkpoint persistence.

Layout: magic ``XWGC`` + uint32 little-endian manifest length + JSON manifest
+ raw little-endian payload.  The manifest lists every array (parameters and
their adagrad accumulators) as (name, kind, shape, dtype, offset, nbytes),
offsets relative to the payload start.  Round-trips are bit-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .optim import ParamStore

MAGIC = b"XWGC"


class CheckpointError(RuntimeError):
    pass


def _dtype_tag(dtype: np.dtype) -> str:
    return {"float32": "<f4", "float64": "<f8"}[np.dtype(dtype).name]


def save_checkpoint(path, store: ParamStore, meta: dict | None = None) -> None:
    entries = []
    blobs = []
    offset = 0
    for kind, getter in (("param", lambda n: store[n].data), ("accum", store.accumulator)):
        for name in store.names():
            arr = np.ascontiguousarray(getter(name), dtype=_dtype_tag(store.dtype))
            raw = arr.tobytes()
            entries.append(
                {
                    "name": name,
                    "kind": kind,
                    "shape": list(arr.shape),
                    "dtype": _dtype_tag(arr.dtype),
                    "offset": offset,
                    "nbytes": len(raw),
                }
            )
            blobs.append(raw)
            offset += len(raw)
    manifest = json.dumps(
        {"version": 1, "meta": meta or {}, "entries": entries},
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.array(len(manifest), dtype="<u4").tobytes())
        fh.write(manifest)
        for raw in blobs:
            fh.write(raw)


def read_checkpoint(path):
    """Return (params: dict, accums: dict, meta: dict) from a checkpoint file."""
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint (bad magic {raw[:4]!r})")
    mlen = int(np.frombuffer(raw[4:8], dtype="<u4")[0])
    try:
        manifest = json.loads(raw[8 : 8 + mlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"{path}: corrupt manifest: {e}") from None
    payload = raw[8 + mlen :]
    params: dict[str, np.ndarray] = {}
    accums: dict[str, np.ndarray] = {}
    for entry in manifest["entries"]:
        chunk = payload[entry["offset"] : entry["offset"] + entry["nbytes"]]
        if len(chunk) != entry["nbytes"]:
            raise CheckpointError(f"{path}: truncated payload at '{entry['name']}'")
        arr = np.frombuffer(chunk, dtype=entry["dtype"]).reshape(entry["shape"]).copy()
        (params if entry["kind"] == "param" else accums)[entry["name"]] = arr
    return params, accums, manifest.get("meta", {})


def load_into(path, store: ParamStore) -> dict:
    """Load a checkpoint into an existing store; mismatches list the manifest diff."""
    params, accums, meta = read_checkpoint(path)
    diff = []
    have = set(store.names())
    got = set(params)
    diff += [f"checkpoint missing '{n}'" for n in sorted(have - got)]
    diff += [f"checkpoint has unexpected '{n}'" for n in sorted(got - have)]
    for name in sorted(have & got):
        want = tuple(store[name].data.shape)
        shape = tuple(params[name].shape)
        if want != shape:
            diff.append(f"'{name}' shape {shape} != expected {want}")
    if diff:
        raise CheckpointError(f"{path}: manifest diff: " + "; ".join(diff))
    for name in store.names():
        store[name].data[...] = params[name].astype(store.dtype)
        store.accumulator(name)[...] = accums[name].astype(store.dtype)
    return meta
