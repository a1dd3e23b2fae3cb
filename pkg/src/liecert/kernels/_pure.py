"""Pure-Python twins of the compiled kernels (same signatures, same results)."""
from __future__ import annotations

from collections import defaultdict

import numpy as np


def _rows(offsets, cols, vals, dim):
    offsets = [int(o) for o in offsets]
    cols = [int(c) for c in cols]
    vals = [int(v) for v in vals]
    return [
        list(zip(cols[offsets[p]:offsets[p + 1]], vals[offsets[p]:offsets[p + 1]]))
        for p in range(dim * dim)
    ]


def jacobi_violations(offsets, cols, vals, dim, triples):
    rows = _rows(offsets, cols, vals, dim)
    out = []
    for t, (a, b, c) in enumerate(np.asarray(triples).tolist()):
        acc: dict[int, int] = defaultdict(int)
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for k, v in rows[x * dim + y]:
                for m, w in rows[k * dim + z]:
                    acc[m] += v * w
        if any(acc.values()):
            out.append(t)
    return np.asarray(out, dtype=np.int64)


def killing_trace(offsets, cols, vals, dim):
    rows = _rows(offsets, cols, vals, dim)
    # (k, l) -> [(i, v)] : ad b_i sends b_k to v * b_l
    moves: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for i in range(dim):
        for k in range(dim):
            for l, v in rows[i * dim + k]:
                moves[(k, l)].append((i, v))
    kap = [[0] * dim for _ in range(dim)]
    for (k, l), fwd in moves.items():
        back = moves.get((l, k))
        if not back:
            continue
        for i, v in fwd:
            row = kap[i]
            for j, w in back:
                row[j] += v * w
    return np.asarray(kap, dtype=np.int64)
