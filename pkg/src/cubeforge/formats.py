"""Text formats: ``.lcube`` cubes, JSON export and OA tables.

``.lcube`` layout::

    lcube 1
    order <n>
    partition h1 h2 ...        (optional)
    t <i> <j> <k>              (optional, repeated: transversal cells)

    <layer k=1: n lines, line i holds cells (i, 1..n, 1)>

    <layer k=2>
    ...

Empty cells are written as ``.``.  The writer emits single spaces and a
trailing newline; the reader accepts runs of spaces and tabs inside a line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from cubeforge.core import DTYPE, MAX_ORDER, as_cube
from cubeforge.errors import DimensionMismatch, FormatError

MAGIC = "lcube 1"


@dataclass(frozen=True)
class CubeFile:
    """Contents of a cube file: the (possibly partial) cube plus annotations."""

    cube: np.ndarray = field(repr=False)
    partition: tuple | None = None
    transversal: tuple = ()

    @property
    def order(self):
        return self.cube.shape[0]

    @property
    def is_complete(self):
        return bool((self.cube != 0).all())


def dumps_lcube(cube, partition=None, transversal=()) -> str:
    arr = as_cube(cube)
    n = arr.shape[0]
    lines = [MAGIC, f"order {n}"]
    if partition is not None:
        lines.append("partition " + " ".join(str(int(h)) for h in partition))
    for cell in transversal:
        lines.append("t " + " ".join(str(int(x)) for x in cell))
    for k in range(n):
        lines.append("")
        for i in range(n):
            lines.append(" ".join(str(int(v)) if v else "." for v in arr[i, :, k]))
    return "\n".join(lines) + "\n"


def _ints(tokens, lineno, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"line {lineno}: bad {what}: {' '.join(tokens)!r}") from None


def loads_lcube(text: str) -> CubeFile:
    if not text.endswith("\n"):
        raise FormatError("missing trailing newline")
    lines = text[:-1].split("\n")
    if not lines or lines[0].strip() != MAGIC:
        raise FormatError(f"first line must be {MAGIC!r}")
    if len(lines) < 2:
        raise FormatError("missing order line")
    head = lines[1].split()
    if len(head) != 2 or head[0] != "order":
        raise FormatError("second line must be 'order <n>'")
    (n,) = _ints(head[1:], 2, "order")
    if not 1 <= n <= MAX_ORDER:
        raise FormatError(f"order {n} out of range")
    pos = 2
    partition = None
    transversal = []
    while pos < len(lines) and lines[pos].strip():
        tokens = lines[pos].split()
        if tokens[0] == "partition" and partition is None and not transversal:
            partition = tuple(_ints(tokens[1:], pos + 1, "partition"))
            if not partition or any(h < 1 for h in partition):
                raise FormatError(f"line {pos + 1}: partition parts must be positive")
        elif tokens[0] == "t" and len(tokens) == 4:
            cell = tuple(_ints(tokens[1:], pos + 1, "transversal cell"))
            if any(x < 1 or x > n for x in cell):
                raise FormatError(f"line {pos + 1}: transversal cell outside [{n}]^3")
            transversal.append(cell)
        else:
            raise FormatError(f"line {pos + 1}: unexpected header {lines[pos]!r}")
        pos += 1
    body = lines[pos:]
    if len(body) != n * (n + 1):
        raise FormatError(f"expected {n} layer blocks of {n} lines, each after one blank line")
    cube = np.zeros((n, n, n), dtype=DTYPE)
    for k in range(n):
        block = body[k * (n + 1):(k + 1) * (n + 1)]
        if block[0].strip():
            raise FormatError(f"line {pos + k * (n + 1) + 1}: expected a blank separator")
        for i, row in enumerate(block[1:]):
            lineno = pos + k * (n + 1) + i + 2
            tokens = row.split()
            if len(tokens) != n:
                raise FormatError(f"line {lineno}: expected {n} tokens, got {len(tokens)}")
            for j, tok in enumerate(tokens):
                if tok == ".":
                    continue
                if not tok.isdigit():
                    raise FormatError(f"line {lineno}: bad token {tok!r}")
                v = int(tok)
                if not 1 <= v <= n:
                    raise FormatError(f"line {lineno}: symbol {v} outside [{n}]")
                cube[i, j, k] = v
    if partition is not None and sum(partition) != n:
        raise FormatError(f"partition sums to {sum(partition)}, order is {n}")
    cube.flags.writeable = False
    return CubeFile(cube, partition, tuple(transversal))


def dumps_json(cube, partition=None, transversal=()) -> str:
    arr = as_cube(cube)
    n = arr.shape[0]
    # flat order: layer k, then row i, then column j
    flat = arr.transpose(2, 0, 1).reshape(-1)
    doc = {"order": n}
    if partition is not None:
        doc["partition"] = [int(h) for h in partition]
    if transversal:
        doc["transversal"] = [[int(x) for x in c] for c in transversal]
    doc["cells"] = [int(v) if v else None for v in flat]
    return json.dumps(doc, separators=(",", ":")) + "\n"


def loads_json(text: str) -> CubeFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "order" not in doc or "cells" not in doc:
        raise FormatError("JSON cube needs 'order' and 'cells'")
    n = doc["order"]
    cells = doc["cells"]
    if not isinstance(n, int) or not 1 <= n <= MAX_ORDER:
        raise FormatError(f"bad order {n!r}")
    if not isinstance(cells, list) or len(cells) != n ** 3:
        raise FormatError(f"'cells' must hold {n ** 3} entries")
    flat = np.zeros(n ** 3, dtype=DTYPE)
    for idx, v in enumerate(cells):
        if v is None:
            continue
        if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n:
            raise FormatError(f"cell {idx}: bad symbol {v!r}")
        flat[idx] = v
    cube = np.ascontiguousarray(flat.reshape(n, n, n).transpose(1, 2, 0))
    partition = doc.get("partition")
    if partition is not None:
        if (not isinstance(partition, list) or not partition
                or not all(isinstance(h, int) and h > 0 for h in partition) or sum(partition) != n):
            raise FormatError(f"bad partition {partition!r}")
        partition = tuple(partition)
    transversal = []
    for cell in doc.get("transversal", []):
        if (not isinstance(cell, list) or len(cell) != 3
                or not all(isinstance(x, int) and 1 <= x <= n for x in cell)):
            raise FormatError(f"bad transversal cell {cell!r}")
        transversal.append(tuple(cell))
    cube.flags.writeable = False
    return CubeFile(cube, partition, tuple(transversal))


def read_cube_file(path) -> CubeFile:
    """Read a ``.lcube`` or JSON cube, deciding by content."""
    try:
        text = Path(path).read_text()
    except UnicodeDecodeError:
        raise FormatError(f"{path}: not a text file") from None
    if text.lstrip().startswith("{"):
        return loads_json(text)
    return loads_lcube(text)


def write_cube_file(path, cube, partition=None, transversal=(), fmt=None):
    fmt = fmt or ("json" if str(path).endswith(".json") else "lcube")
    text = dumps_json(cube, partition, transversal) if fmt == "json" else dumps_lcube(cube, partition, transversal)
    Path(path).write_text(text)


# ---------------------------------------------------------------------------
# orthogonal array tables


def dumps_oa(array, levels, strength=3, index=1) -> str:
    """Header ``oa <t> <k> <n> <lambda>`` then one column per line."""
    arr = np.asarray(array)
    if arr.ndim != 2:
        raise DimensionMismatch("OA table must be two-dimensional")
    k, n = arr.shape[0], levels
    lines = [f"oa {strength} {k} {n} {index}"]
    lines += [" ".join(str(int(v)) for v in col) for col in arr.T]
    return "\n".join(lines) + "\n"


def loads_oa(text: str):
    """Return ``(array, t, n, lambda)`` from an OA table."""
    lines = text.rstrip("\n").split("\n")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "oa":
        raise FormatError("first line must be 'oa <t> <k> <n> <lambda>'")
    t, k, n, lam = _ints(head[1:], 1, "header")
    cols = []
    for lineno, line in enumerate(lines[1:], start=2):
        vals = _ints(line.split(), lineno, "column")
        if len(vals) != k:
            raise FormatError(f"line {lineno}: expected {k} entries")
        cols.append(vals)
    arr = np.array(cols, dtype=np.int64).T if cols else np.zeros((k, 0), dtype=np.int64)
    return arr, t, n, lam
