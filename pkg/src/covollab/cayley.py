"""Breadth-first closure of matrix groups over a TruncRing.

Elements are keyed by the bytes of their uint8 coordinate arrays, so the
table ordering depends only on the generator order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .localgrp import TruncRing, mat_identity, mat_key, matmul

DEFAULT_MAX_ELEMENTS = 10_000_000


class EnumerationBoundExceeded(RuntimeError):
    pass


def max_elements_default() -> int:
    raw = os.environ.get("COVOLLAB_MAX_ELEMENTS")
    if raw is None:
        return DEFAULT_MAX_ELEMENTS
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"COVOLLAB_MAX_ELEMENTS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("COVOLLAB_MAX_ELEMENTS must be positive")
    return value


@dataclass(eq=False)
class FiniteGroupTable:
    ring: TruncRing
    generators: np.ndarray   # (k, n, n, D)
    elements: np.ndarray     # (N, n, n, D) uint8, identity first, BFS order
    index: dict
    parent: np.ndarray       # parent element index, -1 for the identity
    parent_gen: np.ndarray   # generator s with elements[i] = elements[parent] @ s
    depth: np.ndarray
    right: np.ndarray | None  # right[i, s] = index of elements[i] @ generators[s]
    layers: list             # (start, stop) of each BFS layer

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def n(self) -> int:
        return self.elements.shape[1]

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def lookup(self, matrix) -> int | None:
        return self.index.get(mat_key(np.asarray(matrix) % self.ring.p))

    def word(self, i: int) -> list[int]:
        """Generator indices s_1..s_k with elements[i] = s_1 s_2 ... s_k."""
        out = []
        while self.parent[i] >= 0:
            out.append(int(self.parent_gen[i]))
            i = int(self.parent[i])
        return out[::-1]

    def tree_edge_mask(self) -> np.ndarray:
        """(N, k) boolean: True where edge (i, s) is the BFS tree edge into its target."""
        k = self.num_generators
        t = self.right
        mask = np.zeros(t.shape, dtype=bool)
        for s in range(k):
            tgt = t[:, s]
            mask[:, s] = (self.parent[tgt] == np.arange(len(t))) & (self.parent_gen[tgt] == s)
        mask[:, :] &= t != 0
        return mask


def enumerate_group(ring: TruncRing, generators, max_elements: int | None = None,
                    cayley: bool = True) -> FiniteGroupTable:
    """Closure of ``generators`` under right multiplication, with BFS tree.

    Raises EnumerationBoundExceeded once more than ``max_elements`` distinct
    elements have been found.
    """
    bound = max_elements_default() if max_elements is None else max_elements
    gens = np.asarray(generators, dtype=np.int64) % ring.p
    if gens.ndim != 4:
        raise ValueError("generators must have shape (k, n, n, D)")
    k, n = gens.shape[0], gens.shape[1]
    ident = mat_identity(ring, n).astype(np.uint8)
    index = {mat_key(ident): 0}
    chunks = [ident[None]]
    parent, parent_gen, depth = [-1], [-1], [0]
    right_rows = []
    layers = [(0, 1)]
    frontier = chunks[0]
    level = 0
    while len(frontier):
        level += 1
        start = len(parent)
        fresh = []
        right_layer = np.empty((len(frontier), k), dtype=np.int64) if cayley else None
        base = layers[-1][0]
        for s in range(k):
            prods = matmul(ring, frontier.astype(np.int64), gens[s]).astype(np.uint8)
            flat = prods.reshape(len(prods), -1)
            for j in range(len(prods)):
                key = flat[j].tobytes()
                idx = index.get(key)
                if idx is None:
                    idx = len(parent)
                    if idx >= bound:
                        raise EnumerationBoundExceeded(
                            f"closure exceeds {bound} elements (set COVOLLAB_MAX_ELEMENTS to raise)")
                    index[key] = idx
                    parent.append(base + j)
                    parent_gen.append(s)
                    depth.append(level)
                    fresh.append(prods[j])
                if cayley:
                    right_layer[j, s] = idx
        if cayley:
            right_rows.append(right_layer)
        if fresh:
            frontier = np.array(fresh)
            chunks.append(frontier)
            layers.append((start, len(parent)))
        else:
            frontier = frontier[:0]
    elements = np.concatenate(chunks)
    right = np.concatenate(right_rows) if cayley else None
    if k == 0:
        right = np.zeros((1, 0), dtype=np.int64) if cayley else None
    return FiniteGroupTable(
        ring=ring,
        generators=gens,
        elements=elements,
        index=index,
        parent=np.array(parent, dtype=np.int64),
        parent_gen=np.array(parent_gen, dtype=np.int64),
        depth=np.array(depth, dtype=np.int64),
        right=right,
        layers=layers,
    )
