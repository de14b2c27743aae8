"""File formats: JSONL state records, CSV tables and run manifests.

State records hold one JSON object per line::

    {"id": 0, "dim_a": 2, "dim_b": 2, "entries": [[re, im], ...]}

with the matrix entries in row-major order. Floats are written with
Python's shortest round-trip representation, so a written file parses back
to the exact same bits.
"""

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Dict, Iterable, List, Optional

import numpy as np

from .exceptions import DataError, InvalidStateError
from .linalg import DensityMatrix

MANIFEST_SUFFIX = ".manifest.json"


def format_float(x):
    """Shortest decimal that round-trips to the same double; empty for ``None``."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def state_to_json(idx, rho):
    m = np.asarray(rho.mat)
    entries = [[float(z.real), float(z.imag)] for z in m.ravel()]
    return json.dumps({"id": int(idx), "dim_a": rho.dim_a, "dim_b": rho.dim_b, "entries": entries}, separators=(",", ":"))


def write_states(path, states: Iterable):
    """Write ``(id, DensityMatrix)`` pairs, one per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for idx, rho in states:
            fh.write(state_to_json(idx, rho))
            fh.write("\n")


def parse_state_line(text, lineno=None, check=True):
    """Parse one JSONL record into ``(id, DensityMatrix)``.

    Raises
    ------
    DataError
        On malformed JSON, wrong entry count or an invalid density matrix.
    """
    try:
        obj = json.loads(text)
        idx, da, db = int(obj["id"]), int(obj["dim_a"]), int(obj["dim_b"])
        ent = np.asarray(obj["entries"], dtype=float)
    except (ValueError, KeyError, TypeError) as exc:
        raise DataError(f"malformed state record ({exc})", lineno) from None
    d = da * db
    if d < 1 or ent.shape != (d * d, 2):
        raise DataError(f"expected {d * d} [re, im] pairs for dims {da}x{db}", lineno)
    mat = (ent[:, 0] + 1j * ent[:, 1]).reshape(d, d)
    try:
        return idx, DensityMatrix(mat, da, db, check=check)
    except (InvalidStateError, ValueError) as exc:
        raise DataError(str(exc), lineno) from None


def read_states(path, check=True):
    """All records of a JSONL file as a list of ``(id, DensityMatrix)``; blank lines are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                out.append(parse_state_line(line, lineno, check))
    return out


def write_csv(path, header: List[str], rows: Iterable[Iterable]):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else format_float(v) for v in row])


def read_csv(path):
    """Header and rows of a CSV file; empty cells become ``None`` and numbers floats."""
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return [], []
    rows = []
    for lineno, raw in enumerate(reader, 2):
        if not raw:
            continue
        if len(raw) != len(header):
            raise DataError(f"expected {len(header)} fields, got {len(raw)}", lineno)
        rec = {}
        for k, v in zip(header, raw):
            if v == "":
                rec[k] = None
                continue
            try:
                rec[k] = float(v)
            except ValueError:
                rec[k] = v
        rows.append(rec)
    return header, rows


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    """Provenance of one CLI run.

    ``argv`` is the full argument list with the seed resolved, so replaying
    it reproduces the outputs, whose checksums are stored in ``outputs``.
    """

    command: str
    argv: List[str]
    config: Dict
    seed: Optional[int]
    version: str
    started: str = field(default_factory=_now)
    finished: str = ""
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)

    def finish(self, input_paths=(), output_paths=()):
        self.inputs = {p: sha256_file(p) for p in input_paths}
        self.outputs = {p: sha256_file(p) for p in output_paths}
        self.finished = _now()

    def write(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def read(cls, path):
        with open(path, encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
                return cls(**obj)
            except (ValueError, TypeError) as exc:
                raise DataError(f"bad manifest ({exc})") from None


def manifest_path(out_path):
    return str(out_path) + MANIFEST_SUFFIX
