"""Pure-Python union-find merge sweep; reference fallback for the compiled kernel.

Same contract as ``_sweep.sweep``: pixels are inserted in a fixed total order
(value descending, linear index ascending, precomputed by the caller); each
insertion unions the pixel with its already-inserted neighbours, and every
merge of two live components kills the one whose birth pixel comes later in
the total order.
"""

from __future__ import annotations

import numpy as np


def sweep(order, pos, width: int, height: int, connectivity: int):
    """Run the merge sweep.

    Parameters
    ----------
    order : int array, length n
        Pixel indices sorted by the total order.
    pos : int array, length n
        Inverse permutation: ``pos[order[i]] == i``.
    width, height : int
        Grid dimensions; ``n == width * height``.
    connectivity : int
        4 or 8.

    Returns
    -------
    (finite_ext, finite_saddle, essential_ext) : int64 ndarrays
        Birth pixel and merge pixel of every finite pair, plus the birth
        pixels of components that never die.
    """
    n = width * height
    order = np.asarray(order).tolist()
    pos = np.asarray(pos).tolist()
    if connectivity == 4:
        offsets = ((0, -1), (-1, 0), (1, 0), (0, 1))
    elif connectivity == 8:
        offsets = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))
    else:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")

    parent = list(range(n))
    rank = [0] * n
    birth = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    finite_ext: list[int] = []
    finite_saddle: list[int] = []

    for i in range(n):
        p = order[i]
        py, px = divmod(p, width)
        cur = -1
        for dx, dy in offsets:
            qx = px + dx
            qy = py + dy
            if qx < 0 or qx >= width or qy < 0 or qy >= height:
                continue
            q = qy * width + qx
            if pos[q] > i:
                continue  # neighbour not inserted yet
            r = find(q)
            if cur == -1:
                parent[p] = r
                cur = r
            elif r != cur:
                b1 = birth[cur]
                b2 = birth[r]
                if pos[b1] < pos[b2]:
                    elder_b, young_b = b1, b2
                else:
                    elder_b, young_b = b2, b1
                finite_ext.append(young_b)
                finite_saddle.append(p)
                if rank[cur] < rank[r]:
                    cur, r = r, cur
                parent[r] = cur
                if rank[cur] == rank[r]:
                    rank[cur] += 1
                birth[cur] = elder_b
        if cur == -1:
            parent[p] = p
            birth[p] = p

    essential = [birth[i] for i in range(n) if parent[i] == i]
    return (
        np.array(finite_ext, dtype=np.int64),
        np.array(finite_saddle, dtype=np.int64),
        np.array(essential, dtype=np.int64),
    )
