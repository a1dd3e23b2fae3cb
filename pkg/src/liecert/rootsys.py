"""Reduced root systems of the simple types A-G.

Roots are integer tuples in simple-root coordinates.  Simple roots follow
the Bourbaki labelling; the bilinear form is normalised so that long roots
have squared length 2.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .scalars import Q

Root = tuple[int, ...]

_VALID = {
    "A": lambda l: l >= 1,
    "B": lambda l: l >= 2,
    "C": lambda l: l >= 2,
    "D": lambda l: l >= 3,
    "E": lambda l: l in (6, 7, 8),
    "F": lambda l: l == 4,
    "G": lambda l: l == 2,
}

_POSITIVE_COUNT = {
    "A": lambda l: l * (l + 1) // 2,
    "B": lambda l: l * l,
    "C": lambda l: l * l,
    "D": lambda l: l * (l - 1),
    "E": lambda l: {6: 36, 7: 63, 8: 120}[l],
    "F": lambda l: 24,
    "G": lambda l: 6,
}


class InvalidRoot(ValueError):
    pass


@dataclass(frozen=True, order=True)
class DynkinType:
    family: str
    rank: int

    def __post_init__(self):
        fam = str(self.family).upper()
        object.__setattr__(self, "family", fam)
        if fam not in _VALID:
            raise ValueError(f"unknown Dynkin family {self.family!r}; expected one of A-G")
        if not isinstance(self.rank, int) or not _VALID[fam](self.rank):
            raise ValueError(
                f"invalid Dynkin type {fam}{self.rank}: valid ranks are A>=1, B/C>=2, "
                "D>=3, E in {6,7,8}, F=4, G=2"
            )
        if fam == "D" and self.rank == 3:
            # D3 and A3 are the same diagram
            object.__setattr__(self, "family", "A")

    @classmethod
    def parse(cls, text: str) -> "DynkinType":
        m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", str(text))
        if not m:
            raise ValueError(f"cannot parse Dynkin type {text!r}; expected e.g. 'A2', 'G2', 'E8'")
        return cls(m.group(1), int(m.group(2)))

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"

    @property
    def positive_root_count(self) -> int:
        return _POSITIVE_COUNT[self.family](self.rank)

    def __str__(self):
        return f"{self.family}{self.rank}"


def _diagram(dt: DynkinType) -> tuple[list[Q], list[tuple[int, int]]]:
    """Squared lengths of the simple roots and the (0-based) edges."""
    l, fam = dt.rank, dt.family
    if fam == "A":
        lengths = [Q(2)] * l
        edges = [(i, i + 1) for i in range(l - 1)]
    elif fam == "B":
        lengths = [Q(2)] * (l - 1) + [Q(1)]
        edges = [(i, i + 1) for i in range(l - 1)]
    elif fam == "C":
        lengths = [Q(1)] * (l - 1) + [Q(2)]
        edges = [(i, i + 1) for i in range(l - 1)]
    elif fam == "D":
        lengths = [Q(2)] * l
        edges = [(i, i + 1) for i in range(l - 2)] + [(l - 3, l - 1)]
    elif fam == "E":
        lengths = [Q(2)] * l
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, l - 1)]
    elif fam == "F":
        lengths = [Q(2), Q(2), Q(1), Q(1)]
        edges = [(0, 1), (1, 2), (2, 3)]
    else:  # G2, alpha_1 short
        lengths = [Q(2, 3), Q(2)]
        edges = [(0, 1)]
    return lengths, edges


def _form_matrix(dt: DynkinType) -> tuple[tuple[Q, ...], ...]:
    lengths, edges = _diagram(dt)
    l = dt.rank
    f = [[Q(0)] * l for _ in range(l)]
    for i in range(l):
        f[i][i] = lengths[i]
    for i, j in edges:
        # (a_i, a_j) = -max/2 reproduces single, double and triple bonds
        f[i][j] = f[j][i] = -max(lengths[i], lengths[j]) / 2
    return tuple(tuple(row) for row in f)


def _enumerate_positive(form, rank) -> list[Root]:
    """Positive roots by alpha-strings, height by height."""
    def pair(a, b):
        return sum(a[i] * form[i][j] * b[j] for i in range(rank) for j in range(rank) if a[i] and b[j])

    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    known = set(simple)
    layer = list(simple)
    out = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i, a in enumerate(simple):
                p = 0
                lower = list(beta)
                while True:
                    lower[i] -= 1
                    if tuple(lower) in known:
                        p += 1
                    else:
                        break
                cartan = 2 * pair(beta, a) / form[i][i]
                q = p - int(cartan)
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in known:
                        known.add(up)
                        nxt.append(up)
        out.extend(nxt)
        layer = nxt
    return out


def root_sort_key(root: Root):
    # height first; within a height, descending coordinates put alpha_1 first
    return (sum(root), tuple(-c for c in root))


@dataclass(frozen=True)
class RootSystem:
    dynkin: DynkinType
    cartan_matrix: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Root, ...]
    form: tuple[tuple[Q, ...], ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.dynkin.rank

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        """All roots: positive roots in order, then their negatives."""
        return self.positive_roots + tuple(neg(r) for r in self.positive_roots)

    @cached_property
    def index(self) -> dict[Root, int]:
        return {r: k for k, r in enumerate(self.roots)}

    @cached_property
    def simple_roots(self) -> tuple[Root, ...]:
        return self.positive_roots[: self.rank]

    @cached_property
    def _gram(self) -> list[list[Q]]:
        return [list(row) for row in self.form]

    def is_root(self, v) -> bool:
        return tuple(v) in self.index

    def require_root(self, v, what="root") -> Root:
        v = tuple(int(c) for c in v)
        if len(v) != self.rank or v not in self.index:
            raise InvalidRoot(f"{what} {list(v)} is not a root of {self.dynkin}")
        return v

    def inner(self, a, b) -> Q:
        """Normalised form (a, b) on simple-root coordinates."""
        g = self._gram
        s = Q(0)
        for i, ai in enumerate(a):
            if ai:
                row = g[i]
                for j, bj in enumerate(b):
                    if bj:
                        s += ai * bj * row[j]
        return s

    def length2(self, a) -> Q:
        return self.inner(a, a)

    def is_long(self, a) -> bool:
        return self.length2(a) == 2

    def coroot_pairing(self, beta, alpha) -> int:
        """<beta, alpha^vee> = 2 (beta, alpha) / (alpha, alpha)."""
        v = 2 * self.inner(beta, alpha) / self.length2(alpha)
        assert v.denominator == 1
        return int(v)

    @cached_property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    @cached_property
    def reflection_matrices(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Matrix of s_i acting on coordinate column vectors."""
        mats = []
        l = self.rank
        for i in range(l):
            m = [[int(r == c) for c in range(l)] for r in range(l)]
            for c in range(l):
                # s_i(alpha_c) = alpha_c - <alpha_c, alpha_i^vee> alpha_i
                m[i][c] -= self.cartan_matrix[c][i]
            mats.append(tuple(tuple(row) for row in m))
        return tuple(mats)

    def simple_reflect(self, i: int, beta) -> Root:
        """s_i(beta), 0-based simple index i."""
        b = list(beta)
        b[i] -= sum(beta[c] * self.cartan_matrix[c][i] for c in range(self.rank))
        return tuple(b)


def neg(r: Root) -> Root:
    return tuple(-c for c in r)


def add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def height(r: Root) -> int:
    return sum(r)


def is_positive(r: Root) -> bool:
    return sum(r) > 0


def build_root_system(dynkin: DynkinType | str) -> RootSystem:
    if isinstance(dynkin, str):
        dynkin = DynkinType.parse(dynkin)
    form = _form_matrix(dynkin)
    l = dynkin.rank
    cartan = tuple(
        tuple(int(2 * form[i][j] / form[j][j]) for j in range(l)) for i in range(l)
    )
    pos = sorted(_enumerate_positive(form, l), key=root_sort_key)
    rs = RootSystem(dynkin, cartan, tuple(pos), form)
    if len(pos) != dynkin.positive_root_count:
        raise AssertionError(f"{dynkin}: found {len(pos)} positive roots")
    return rs


_CACHE: dict[DynkinType, RootSystem] = {}


def root_system(dynkin: DynkinType | str) -> RootSystem:
    """Cached :func:`build_root_system`."""
    if isinstance(dynkin, str):
        dynkin = DynkinType.parse(dynkin)
    rs = _CACHE.get(dynkin)
    if rs is None:
        rs = _CACHE[dynkin] = build_root_system(dynkin)
    return rs


def reflect(rs: RootSystem, alpha, beta) -> Root:
    """r_alpha(beta) = beta - 2 (alpha, beta) / (alpha, alpha) alpha."""
    alpha = rs.require_root(alpha, "alpha")
    beta = rs.require_root(beta, "beta")
    c = 2 * rs.inner(alpha, beta) / rs.length2(alpha)
    out = tuple(int(b - c * a) for a, b in zip(alpha, beta))
    return rs.require_root(out, "reflection image")


def weyl_orbit(rs: RootSystem, alpha) -> frozenset[Root]:
    alpha = rs.require_root(alpha)
    seen = {alpha}
    queue = deque([alpha])
    while queue:
        b = queue.popleft()
        for i in range(rs.rank):
            c = rs.simple_reflect(i, b)
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return frozenset(seen)


def weyl_orbits(rs: RootSystem) -> list[list[Root]]:
    """Partition of all roots into Weyl orbits, each sorted in root order."""
    left = list(rs.roots)
    orbits = []
    while left:
        orb = weyl_orbit(rs, left[0])
        orbits.append([r for r in rs.roots if r in orb])
        left = [r for r in left if r not in orb]
    return orbits


def support(alpha) -> frozenset[int]:
    """1-based indices of simple roots in the support of alpha."""
    alpha = tuple(alpha)
    if not any(alpha):
        raise InvalidRoot("the zero vector has no support")
    return frozenset(i + 1 for i, c in enumerate(alpha) if c)


def dominant_roots(rs: RootSystem) -> list[Root]:
    """Roots with (mu, alpha_i) >= 0 for all simple alpha_i, in root order."""
    return [
        r for r in rs.roots
        if all(rs.inner(r, a) >= 0 for a in rs.simple_roots)
    ]


def in_span_of(root: Root, theta) -> bool:
    """Membership in <Theta>: supp(root) or supp(-root) inside Theta (1-based)."""
    return support(root) <= frozenset(theta)


@dataclass(frozen=True)
class WeylElement:
    word: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    def apply(self, root) -> Root:
        return tuple(sum(row[j] * root[j] for j in range(len(root))) for row in self.matrix)


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def weyl_element(rs: RootSystem, word) -> WeylElement:
    """w = s_{word[0]} s_{word[1]} ... (1-based indices); rightmost acts first."""
    l = rs.rank
    m = tuple(tuple(int(i == j) for j in range(l)) for i in range(l))
    for k in word:
        if not 1 <= k <= l:
            raise ValueError(f"simple reflection index {k} out of range 1..{l}")
        m = _matmul(m, rs.reflection_matrices[k - 1])
    return WeylElement(tuple(word), m)


def conjugating_weyl_element(rs: RootSystem, gamma, beta) -> WeylElement | None:
    """Some w with w(gamma) = beta, or None if they lie in different orbits."""
    gamma = rs.require_root(gamma, "gamma")
    beta = rs.require_root(beta, "beta")
    parent: dict[Root, tuple[Root, int] | None] = {gamma: None}
    queue = deque([gamma])
    while queue:
        b = queue.popleft()
        if b == beta:
            break
        for i in range(rs.rank):
            c = rs.simple_reflect(i, b)
            if c not in parent:
                parent[c] = (b, i + 1)
                queue.append(c)
    if beta not in parent:
        return None
    steps = []
    node = beta
    while parent[node] is not None:
        node, i = parent[node]
        steps.append(i)
    # steps lists the last reflection first, which is the word order we want
    return weyl_element(rs, steps)


def all_types(max_rank: int, families: str = "ABCDEFG") -> list[DynkinType]:
    """Every valid type with rank <= max_rank, D starting at 4."""
    out = []
    for fam in families:
        for l in range(1, max_rank + 1):
            if fam == "D" and l < 4:
                continue
            if _VALID[fam](l):
                out.append(DynkinType(fam, l))
    return out


def parse_root(text) -> Root:
    """Parse the serialised form ``"[n1,...,nl]"``."""
    if isinstance(text, (list, tuple)):
        return tuple(int(c) for c in text)
    m = re.fullmatch(r"\s*\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]\s*", str(text))
    if not m:
        raise InvalidRoot(f"malformed root key {text!r}; expected '[n1,...,nl]'")
    return tuple(int(c) for c in m.group(1).split(","))


def format_root(root) -> str:
    return "[" + ",".join(str(int(c)) for c in root) + "]"


__all__ = [
    "Root", "DynkinType", "RootSystem", "WeylElement", "InvalidRoot",
    "build_root_system", "root_system", "reflect", "weyl_orbit", "weyl_orbits",
    "support", "dominant_roots", "conjugating_weyl_element", "weyl_element",
    "in_span_of", "all_types", "parse_root", "format_root", "neg", "add", "sub",
    "height", "is_positive", "root_sort_key",
]
