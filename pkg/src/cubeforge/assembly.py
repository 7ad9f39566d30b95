"""Write-once cube buffer used by the block assemblies.

Every placement goes through :meth:`WriteOnceGrid.put`; writing a cell
twice raises :class:`AssemblyOverlap`, so a finished grid with no holes
proves the construction's cases partition the cells.
"""

from __future__ import annotations

import numpy as np

from cubeforge.core import DTYPE
from cubeforge.errors import AssemblyOverlap


class WriteOnceGrid:
    def __init__(self, n):
        self.n = n
        self.cube = np.zeros((n, n, n), dtype=DTYPE)
        self.writes = np.zeros((n, n, n), dtype=np.uint8)
        self.sources: dict[str, int] = {}

    def put(self, index, values, source, *, where=None):
        """Write ``values`` into ``cube[index]``.

        ``where`` restricts the write to a boolean mask of the same shape;
        empty (zero) values are never written.
        """
        # integer components become length-1 slices so every index is a view
        index = index if isinstance(index, tuple) else (index,)
        shape = np.shape(self.cube[index])
        index = tuple(slice(x, x + 1) if isinstance(x, (int, np.integer)) else x for x in index)
        values = np.broadcast_to(np.asarray(values, dtype=DTYPE), shape).reshape(self.cube[index].shape)
        if where is not None:
            where = np.broadcast_to(where, shape).reshape(values.shape)
        target_writes = self.writes[index]
        mask = values != 0
        if where is not None:
            mask &= where
        clash = mask & (target_writes > 0)
        if clash.any():
            raise AssemblyOverlap(f"{source}: {int(clash.sum())} cells already written")
        block = self.cube[index]
        block[mask] = values[mask]
        self.cube[index] = block
        target_writes[mask] += 1
        self.writes[index] = target_writes
        self.sources[source] = self.sources.get(source, 0) + int(mask.sum())

    def fill_empty(self, completed, source):
        """Take the cells of ``completed`` that are still empty here; the rest must agree."""
        completed = np.asarray(completed, dtype=DTYPE)
        empty = self.writes == 0
        if (completed[~empty] != self.cube[~empty]).any():
            raise AssemblyOverlap(f"{source}: completion changed an existing cell")
        self.put((slice(None),) * 3, np.where(empty, completed, 0), source)

    @property
    def holes(self) -> int:
        return int((self.writes == 0).sum())

    @property
    def double_writes(self) -> int:
        return int((self.writes > 1).sum())
