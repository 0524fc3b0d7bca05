"""Integer partitions with the cell, corner and content queries used by the
Fock module, the Bethe seeds and the specialization maps."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Tuple


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing tuple of positive integers."""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts if p)
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {self.parts}")
        if any(p < 0 for p in parts):
            raise ValueError("parts must be positive")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __repr__(self):
        return f"Partition{self.parts}"

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """1-based part ``lambda_i`` (zero past the length)."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p >= j) for j in range(1, self.parts[0] + 1)))

    def cells(self) -> List[Tuple[int, int]]:
        """Cells ``(i, j)``: row ``i`` (1-based), column ``j`` with ``j <= lambda_i``."""
        return [(i, j) for i, p in enumerate(self.parts, start=1) for j in range(1, p + 1)]

    def multiplicities(self) -> Counter:
        return Counter(self.parts)

    def factorial_of_parts(self) -> int:
        return math.prod(math.factorial(p) for p in self.parts)

    def multiplicity_factorial(self) -> int:
        return math.prod(math.factorial(m) for m in self.multiplicities().values())

    def z(self) -> int:
        """``z_lambda = prod_r r^{m_r} m_r!``."""
        return math.prod(r ** m * math.factorial(m) for r, m in self.multiplicities().items())

    def add_box(self, j: int) -> "Partition | None":
        """``lambda + 1_j`` (1-based row) or None if not a partition."""
        if j < 1 or j > len(self.parts) + 1:
            return None
        if j > 1 and self.part(j - 1) <= self.part(j):
            return None
        parts = list(self.parts) + [0]
        parts[j - 1] += 1
        return Partition(tuple(parts))

    def remove_box(self, j: int) -> "Partition | None":
        if j < 1 or j > len(self.parts):
            return None
        if self.part(j + 1) >= self.part(j):
            return None
        parts = list(self.parts)
        parts[j - 1] -= 1
        return Partition(tuple(parts))

    def addable_rows(self) -> List[int]:
        return [j for j in range(1, len(self.parts) + 2) if self.add_box(j) is not None]

    def removable_rows(self) -> List[int]:
        return [j for j in range(1, len(self.parts) + 1) if self.remove_box(j) is not None]

    def addable_cells(self) -> List[Tuple[int, int]]:
        return [(j, self.part(j) + 1) for j in self.addable_rows()]

    def removable_cells(self) -> List[Tuple[int, int]]:
        return [(j, self.part(j)) for j in self.removable_rows()]

    def convex_corners(self) -> List[Tuple[int, int]]:
        """Pairs ``(x, y)`` with ``lambda'_{y+1} < lambda'_y = x`` (removable cells)."""
        c = self.conjugate()
        return [(c.part(y), y) for y in range(1, len(c.parts) + 1) if c.part(y + 1) < c.part(y)]

    def concave_corners(self) -> List[Tuple[int, int]]:
        """Pairs ``(x, y)`` with ``lambda'_y = x - 1`` and ``y = 1`` or ``lambda'_{y-1} > x - 1``."""
        c = self.conjugate()
        out = []
        for y in range(1, len(c.parts) + 2):
            x = c.part(y) + 1
            if y == 1 or c.part(y - 1) > x - 1:
                out.append((x, y))
        return out

    def contents(self, q1, q3, u) -> list:
        """``q3^{i-1} q1^{j-1} u`` over all cells."""
        return [cell_content(i, j, q1, q3, u) for i, j in self.cells()]

    def to_list(self) -> List[int]:
        return list(self.parts)


def cell_content(i: int, j: int, q1, q3, u):
    return q3 ** (i - 1) * q1 ** (j - 1) * u


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int) -> Tuple[Tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(n: int) -> List[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        return []
    return [Partition(p) for p in _partitions(n, n)]


def partitions_up_to(n: int) -> Iterator[Partition]:
    for k in range(n + 1):
        yield from partitions(k)


def partition_count(n: int) -> int:
    return len(_partitions(n, n)) if n >= 0 else 0


def multipartitions(n: int, k: int) -> List[Tuple[Partition, ...]]:
    """All ``k``-tuples of partitions with total size ``n``."""
    if k == 0:
        return [()] if n == 0 else []
    out = []
    for first in range(n, -1, -1):
        for lam in partitions(first):
            for rest in multipartitions(n - first, k - 1):
                out.append((lam,) + rest)
    return out


def dominance_key(lam: Partition):
    """Sort key: reverse lexicographic on parts (largest first)."""
    return tuple(-p for p in lam.parts)
