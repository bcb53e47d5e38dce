"""File formats used by the command-line interface.

Matrices travel as JSON ``{"dim": d, "re": [...], "im": [...]}`` with entries
row major; distributions as plain JSON arrays; channels as
``{"rows": [[...]]}``.  Linear codes use a small text format: first line
"n k", then k generator columns as n-character 0/1 strings, optionally
followed by a line "H" and n-k parity rows.  CSV output is locale free with
12 significant digits.
"""

from __future__ import annotations

import json

import numpy as np

from .bb84 import ProtocolTranscript
from .codes import LinearCode, bits_to_str


def fmt(value: float) -> str:
    """Diffable numeric formatting: 12 significant digits, '.' decimal."""
    return f"{value:.12g}"


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "dim": m.shape[0],
        "re": [float(x) for x in m.real.ravel()],
        "im": [float(x) for x in m.imag.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    d = int(obj["dim"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros(d * d)), dtype=float)
    if re.size != d * d or im.size != d * d:
        raise ValueError(f"matrix payload does not hold {d}x{d} entries")
    return (re + 1j * im).reshape(d, d)


def dist_from_json(obj) -> np.ndarray:
    return np.asarray(obj, dtype=float)


def channel_from_json(obj: dict) -> np.ndarray:
    return np.asarray(obj["rows"], dtype=float)


def code_to_text(code: LinearCode) -> str:
    lines = [f"{code.n} {code.k}"]
    for j in range(code.k):
        lines.append(bits_to_str(code.generator[:, j]))
    lines.append("H")
    for i in range(code.n - code.k):
        lines.append(bits_to_str(code.parity_check[i]))
    return "\n".join(lines) + "\n"


def code_from_text(text: str) -> LinearCode:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty code file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'n k'")
    n, k = int(head[0]), int(head[1])
    cols = lines[1:1 + k]
    if len(cols) != k:
        raise ValueError(f"expected {k} generator columns")
    gen = np.zeros((n, k), dtype=np.uint8)
    for j, col in enumerate(cols):
        if len(col) != n or set(col) - {"0", "1"}:
            raise ValueError(f"generator column {j} must be {n} characters of 0/1")
        gen[:, j] = [int(c) for c in col]
    rest = lines[1 + k:]
    parity = None
    if rest:
        if rest[0] != "H":
            raise ValueError("expected 'H' separator before parity rows")
        rows = rest[1:]
        if len(rows) != n - k:
            raise ValueError(f"expected {n - k} parity rows")
        parity = np.zeros((n - k, n), dtype=np.uint8)
        for i, row in enumerate(rows):
            if len(row) != n or set(row) - {"0", "1"}:
                raise ValueError(f"parity row {i} must be {n} characters of 0/1")
            parity[i] = [int(c) for c in row]
    return LinearCode(gen, parity)


def transcript_to_json(t: ProtocolTranscript) -> dict:
    def s(b):
        return None if b is None else bits_to_str(np.asarray(b).astype(np.uint8))

    return {
        "config_seed": t.config_seed,
        "aborted": t.aborted,
        "abort_reason": t.abort_reason,
        "alice_bits": s(t.alice_bits),
        "alice_bases": s(t.alice_bases),
        "bob_bases": s(t.bob_bases),
        "bob_bits": s(t.bob_bits),
        "sift_mask": s(t.sift_mask),
        "check_indices": [int(i) for i in t.check_indices],
        "keep_indices": [int(i) for i in t.keep_indices],
        "disagreements": t.disagreements,
        "qber_estimate": None if np.isnan(t.qber_estimate) else t.qber_estimate,
        "announced_offset": s(t.announced_offset),
        "alice_key": s(t.alice_key),
        "bob_key": s(t.bob_key),
        "block_success": s(t.block_success),
        "eve_mask": s(t.eve_mask),
        "eve_bases": s(t.eve_bases),
        "eve_bits": s(t.eve_bits),
    }


def batch_summary_rows(transcripts: list[ProtocolTranscript]) -> list[str]:
    """Per-trial CSV lines: trial, aborted, sifted_count, qber, key_len, keys_match."""
    rows = []
    for i, t in enumerate(transcripts):
        qber = "" if np.isnan(t.qber_estimate) else fmt(t.qber_estimate)
        rows.append(",".join([
            str(i), str(int(t.aborted)), str(int(t.sift_mask.sum())),
            qber, str(t.alice_key.size), str(int(t.keys_match)),
        ]))
    return rows


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
