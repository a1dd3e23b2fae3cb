"""Incremental spans over Q(i) (exact) and C (floating, with tolerance).

Vectors are sparse dicts ``{coordinate: scalar}``.
"""
from __future__ import annotations

import numpy as np

from .scalars import Tolerance


class ExactSpan:
    """Reduced row echelon form, grown one vector at a time."""

    def __init__(self, vectors=()):
        self.rows: dict[int, dict] = {}
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = {k: c for k, c in v.items() if c}
        for p, row in self.rows.items():
            c = v.get(p)
            if c:
                for k, r in row.items():
                    nv = v.get(k, 0) - c * r
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        return v

    def add(self, v: dict) -> bool:
        """Add v; return True iff it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {k: c * inv for k, c in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                for k, x in r.items():
                    nv = row.get(k, 0) - c * x
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self.rows[p] = r
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)


class NumericSpan:
    """Orthonormal basis in C^n with relative-residual rank decisions."""

    def __init__(self, n: int, tol: Tolerance, scale: float = 0.0, flags: list | None = None):
        self.n = n
        self.tol = tol
        self.scale = scale
        self.flags = flags if flags is not None else []
        self.basis: list[np.ndarray] = []

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _dense(self, v) -> np.ndarray:
        if isinstance(v, np.ndarray):
            return v.astype(complex)
        out = np.zeros(self.n, dtype=complex)
        for k, c in v.items():
            out[k] = complex(c)
        return out

    def residual(self, v) -> tuple[np.ndarray, float]:
        x = self._dense(v)
        norm = float(np.linalg.norm(x))
        if norm == 0.0:
            return x, 0.0
        r = x.copy()
        for _ in range(2):
            for q in self.basis:
                r -= q * np.vdot(q, r)
        return r, float(np.linalg.norm(r)) / norm

    def add(self, v, what: str = "span") -> bool:
        r, rel = self.residual(v)
        if rel == 0.0 or self.tol.is_zero(rel, self.scale, self.flags, what):
            return False
        self.basis.append(r / np.linalg.norm(r))
        return True

    def contains(self, v, what: str = "membership") -> bool:
        _, rel = self.residual(v)
        return rel == 0.0 or self.tol.is_zero(rel, self.scale, self.flags, what)


def exact_rank(vectors) -> int:
    return ExactSpan(vectors).dim


def intersection_dim(u, w) -> int:
    """dim(U cap W) = dim U + dim W - dim(U + W), all exact."""
    su, sw = ExactSpan(u), ExactSpan(w)
    both = ExactSpan(list(u) + list(w))
    return su.dim + sw.dim - both.dim
