"""Complex simple Lie algebras from root data, with exact structure constants.

Construction runs in two stages.  First an integral Chevalley basis
``h_i, e_alpha`` is built with signs fixed by extraspecial pairs; the Killing
form is the trace form of that integer table.  Then the basis is rescaled
diagonally to the stored Weyl basis

    H_i = h_i / k_i,   X_alpha = e_alpha,   X_{-alpha} = e_{-alpha} / k_alpha   (alpha > 0)

where ``k_alpha = kappa(e_alpha, e_{-alpha})``, so that
``kappa(X_alpha, X_{-alpha}) = 1`` and ``[X_alpha, X_{-alpha}] = H_alpha`` with
``kappa(H_alpha, .) = alpha(.)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from math import lcm

import numpy as np

from . import kernels
from .elements import AlgebraElement, CartanVector, ElementError
from .linalg import ExactSpan
from .rootsys import (
    DynkinType,
    InvalidRoot,
    Root,
    RootSystem,
    add,
    format_root,
    is_positive,
    neg,
    root_system,
    support,
)
from .scalars import EXACT, GaussQ, I, Q, Tolerance, qstr

DUAL_COXETER = {
    "A": lambda l: l + 1,
    "B": lambda l: 2 * l - 1,
    "C": lambda l: l + 1,
    "D": lambda l: 2 * l - 2,
    "E": lambda l: {6: 12, 7: 18, 8: 30}[l],
    "F": lambda l: 9,
    "G": lambda l: 4,
}


def dual_coxeter_number(dt: DynkinType) -> int:
    return DUAL_COXETER[dt.family](dt.rank)


# --- integral Chevalley basis ---------------------------------------------------

def _string_below(rs: RootSystem, r: Root, s: Root) -> int:
    """Largest p with s - p r a root."""
    p = 0
    cur = s
    while True:
        cur = tuple(b - a for a, b in zip(r, cur))
        if cur in rs.index:
            p += 1
        else:
            return p


def chevalley_constants(rs: RootSystem) -> dict[tuple[Root, Root], int]:
    """N_{r,s} for all roots r, s with r + s a root.

    Extraspecial pairs get N = +(p+1); everything else follows from the
    standard identities relating N on rotated triples and quadruples.
    """
    pos = rs.positive_roots
    order = {r: k for k, r in enumerate(pos)}
    ln = {r: rs.length2(r) for r in rs.roots}
    npos: dict[tuple[Root, Root], int] = {}

    def N(r, s) -> int:
        t = add(r, s)
        if t not in rs.index:
            return 0
        pr, ps = is_positive(r), is_positive(s)
        if pr and ps:
            return npos[(r, s)]
        if not pr and not ps:
            return -npos[(neg(r), neg(s))]
        t = neg(t)
        # N_{r,s}/(t,t) = N_{s,t}/(r,r) = N_{t,r}/(s,s)
        if is_positive(s) == is_positive(t):
            v = ln[t] / ln[r] * N(s, t)
        else:
            v = ln[t] / ln[s] * N(t, r)
        assert v.denominator == 1
        return int(v)

    by_sum: dict[Root, list[tuple[Root, Root]]] = {}
    for a in pos:
        for b in pos:
            c = add(a, b)
            if c in rs.index and order[a] < order[b]:
                by_sum.setdefault(c, []).append((a, b))

    for xi in pos:
        pairs = by_sum.get(xi)
        if not pairs:
            continue
        pairs.sort(key=lambda ab: order[ab[0]])
        rho, sigma = pairs[0]
        n_ex = _string_below(rs, rho, sigma) + 1
        npos[(rho, sigma)] = n_ex
        npos[(sigma, rho)] = -n_ex
        for zeta, eta in pairs[1:]:
            mz, me = neg(zeta), neg(eta)
            v = Q(0)
            d = add(sigma, mz)
            if d in rs.index:
                v += N(sigma, mz) * N(rho, me) / ln[d]
            d = add(rho, mz)
            if d in rs.index:
                v += N(mz, rho) * N(sigma, me) / ln[d]
            v = v * ln[xi] / n_ex
            assert v.denominator == 1, (xi, zeta, eta, v)
            n = int(v)
            if abs(n) != _string_below(rs, zeta, eta) + 1:
                raise AssertionError(f"|N_{zeta},{eta}| = {abs(n)} violates the root-string bound")
            npos[(zeta, eta)] = n
            npos[(eta, zeta)] = -n

    out = {}
    for r in rs.roots:
        for s in rs.roots:
            if add(r, s) in rs.index:
                out[(r, s)] = N(r, s)
    return out


def _chevalley_table(rs: RootSystem) -> dict[tuple[int, int], dict[int, int]]:
    """Integer structure constants in the basis h_1..h_l, e_alpha."""
    l = rs.rank
    roots = rs.roots
    idx = {r: l + k for k, r in enumerate(roots)}
    simple_len = [rs.form[i][i] for i in range(l)]
    nconst = chevalley_constants(rs)
    table: dict[tuple[int, int], dict[int, int]] = {}

    def put(i, j, k, v):
        if v:
            table.setdefault((i, j), {})[k] = v

    for r in roots:
        b = idx[r]
        for i in range(l):
            v = sum(r[c] * rs.cartan_matrix[c][i] for c in range(l))
            put(i, b, b, v)
            put(b, i, b, -v)
        mr = neg(r)
        # [e_r, e_{-r}] = coroot h_r
        lr = rs.length2(r)
        for i in range(l):
            if r[i]:
                c = r[i] * simple_len[i] / lr
                assert c.denominator == 1
                put(b, idx[mr], i, int(c))
        for s in roots:
            n = nconst.get((r, s))
            if n:
                put(b, idx[s], idx[add(r, s)], n)
    return table


# --- CSR packing for the kernels ------------------------------------------------

def _to_csr(table: dict[tuple[int, int], dict[int, int]], dim: int):
    offsets = np.zeros(dim * dim + 1, dtype=np.int64)
    cols: list[int] = []
    vals: list[int] = []
    for p in range(dim * dim):
        row = table.get(divmod(p, dim))
        if row:
            for k in sorted(row):
                cols.append(k)
                vals.append(int(row[k]))
        offsets[p + 1] = len(cols)
    return offsets, np.asarray(cols, dtype=np.int64), np.asarray(vals, dtype=np.int64)


@dataclass(frozen=True)
class IntegerTable:
    """Structure constants scaled to integers: c = vals / denominator."""

    dim: int
    denominator: int
    offsets: np.ndarray = field(repr=False)
    cols: np.ndarray = field(repr=False)
    vals: np.ndarray = field(repr=False)


# --- the algebra ------------------------------------------------------------------

class LieAlgebra:
    """Structure-constant model of a complex simple Lie algebra.

    Basis order: ``H_1..H_l`` then ``X_alpha`` for alpha in ``rs.roots``.
    ``table[i][j]`` maps k to c[i][j][k] (exact rationals; all constants are
    real in this basis).
    """

    def __init__(self, rs: RootSystem, table: dict, killing: dict, scales: tuple, chevalley_table: dict):
        self.rs = rs
        self.rank = rs.rank
        self.dim = rs.rank + len(rs.roots)
        self.labels = tuple(
            [f"H{i + 1}" for i in range(self.rank)] + [f"X{format_root(r)}" for r in rs.roots]
        )
        self._table = table
        self.killing = killing
        self.scales = scales
        self.chevalley_table = chevalley_table
        self.rows: list[dict[int, tuple]] = [dict() for _ in range(self.dim)]
        self.rows_f: list[dict[int, tuple]] = [dict() for _ in range(self.dim)]
        for (i, j), entry in table.items():
            items = tuple(sorted(entry.items()))
            self.rows[i][j] = items
            self.rows_f[i][j] = tuple((k, float(c)) for k, c in items)
        self.kappa_factor = killing[(0, 0)] / rs.form[0][0]
        self.root_values = tuple(
            tuple(self.kappa_factor * rs.inner(r, a) for a in rs.simple_roots) for r in rs.roots
        )

    def __repr__(self):
        return f"LieAlgebra({self.rs.dynkin}, dim={self.dim})"

    @property
    def dynkin(self) -> DynkinType:
        return self.rs.dynkin

    # indices -----------------------------------------------------------------------
    def root_index(self, root) -> int:
        try:
            return self.rank + self.rs.index[tuple(root)]
        except KeyError:
            raise InvalidRoot(f"{list(root)} is not a root of {self.rs.dynkin}") from None

    def root_of(self, k: int) -> Root | None:
        return None if k < self.rank else self.rs.roots[k - self.rank]

    def structure(self, i: int, j: int) -> dict[int, Q]:
        return dict(self.rows[i].get(j, ()))

    def iter_structure(self):
        """(i, j, k, c) for every nonzero constant, lexicographic in (i, j, k)."""
        for i in range(self.dim):
            row = self.rows[i]
            for j in sorted(row):
                for k, c in row[j]:
                    yield i, j, k, c

    # brackets ------------------------------------------------------------------
    def bracket_sparse(self, x: dict, y: dict, exact: bool = True) -> dict:
        rows = self.rows if exact else self.rows_f
        out: dict = {}
        for i, xi in x.items():
            row = rows[i]
            for j, yj in y.items():
                entry = row.get(j)
                if entry:
                    f = xi * yj
                    for k, c in entry:
                        out[k] = out.get(k, 0) + f * c
        return {k: v for k, v in out.items() if v}

    def basis_bracket(self, i: int, j: int) -> dict:
        return dict(self.rows[i].get(j, ()))

    # killing form ---------------------------------------------------------------
    def killing_form(self, x: dict, y: dict):
        s = 0
        for (i, j), v in self.killing.items():
            a = x.get(i)
            if a:
                b = y.get(j)
                if b:
                    s = s + a * b * v
        return s

    def kappa_inner(self, a, b) -> Q:
        """<a, b> under the Killing form transported to roots."""
        return self.kappa_factor * self.rs.inner(a, b)

    # convenience constructors ----------------------------------------------------
    def element(self, sparse: dict | None = None, tol: Tolerance = EXACT) -> AlgebraElement:
        return AlgebraElement.from_sparse(self, sparse or {}, tol)

    def X(self, root, coeff=1) -> AlgebraElement:
        return self.element({self.root_index(root): GaussQ.coerce(coeff)})

    def H(self, root, coeff=1) -> AlgebraElement:
        return CartanVector.from_root(self, root, coeff).element()

    def H_simple(self, i: int, coeff=1) -> AlgebraElement:
        """Coefficient times H_{alpha_i} (1-based i)."""
        return self.element({i - 1: GaussQ.coerce(coeff)})

    def k_alpha(self, root) -> Q:
        """kappa(e_alpha, e_{-alpha}) of the integral basis; depends on length only."""
        return 2 / self.kappa_inner(root, root)

    @cached_property
    def integer_table(self) -> IntegerTable:
        den = 1
        for entry in self._table.values():
            for c in entry.values():
                den = lcm(den, int(c.denominator))
        scaled = {key: {k: int(c * den) for k, c in entry.items()} for key, entry in self._table.items()}
        offs, cols, vals = _to_csr(scaled, self.dim)
        return IntegerTable(self.dim, den, offs, cols, vals)


def _build(rs: RootSystem) -> LieAlgebra:
    l = rs.rank
    dim = l + len(rs.roots)
    ctab = _chevalley_table(rs)
    offs, cols, vals = _to_csr(ctab, dim)
    kap = kernels.killing_trace(offs, cols, vals, dim)
    # k_alpha = kappa(e_alpha, e_{-alpha})
    npos = len(rs.positive_roots)
    scales = [Q(0)] * dim
    for i in range(l):
        ka = Q(int(kap[l + i, l + npos + i]))
        scales[i] = 1 / ka
    for k in range(npos):
        ka = Q(int(kap[l + k, l + npos + k]))
        scales[l + k] = Q(1)
        scales[l + npos + k] = 1 / ka
    table: dict[tuple[int, int], dict[int, Q]] = {}
    for (i, j), entry in ctab.items():
        table[(i, j)] = {k: Q(v) * scales[i] * scales[j] / scales[k] for k, v in entry.items()}
    killing: dict[tuple[int, int], Q] = {}
    nz_i, nz_j = np.nonzero(kap)
    for i, j in zip(nz_i.tolist(), nz_j.tolist()):
        killing[(i, j)] = Q(int(kap[i, j])) * scales[i] * scales[j]
    return LieAlgebra(rs, table, killing, tuple(scales), ctab)


_ALG_CACHE: dict[DynkinType, LieAlgebra] = {}


def build_algebra(rs: RootSystem | DynkinType | str) -> LieAlgebra:
    """Build (and cache) the algebra of a root system."""
    if not isinstance(rs, RootSystem):
        rs = root_system(rs)
    lie = _ALG_CACHE.get(rs.dynkin)
    if lie is None:
        lie = _ALG_CACHE[rs.dynkin] = _build(rs)
    return lie


# --- adjoint matrices ---------------------------------------------------------------

def ad_matrix(lie: LieAlgebra, x: AlgebraElement) -> np.ndarray:
    """Matrix of y -> [x, y]; object dtype (GaussQ) when exact, complex otherwise."""
    if x.lie is not lie:
        raise ElementError("element belongs to a different algebra")
    exact = x.exact
    if exact:
        m = np.empty((lie.dim, lie.dim), dtype=object)
        m.fill(GaussQ(0))
    else:
        m = np.zeros((lie.dim, lie.dim), dtype=complex)
    rows = lie.rows if exact else lie.rows_f
    for i, xi in x.sparse().items():
        for j, entry in rows[i].items():
            for k, c in entry:
                m[k, j] = m[k, j] + xi * c
    return m


# --- compact generators --------------------------------------------------------------

def _require_positive(lie: LieAlgebra, alpha) -> Root:
    alpha = lie.rs.require_root(alpha, "alpha")
    if not is_positive(alpha):
        raise InvalidRoot(f"{list(alpha)} is negative; pass a positive root")
    return alpha


def compact_generators(lie: LieAlgebra, alpha) -> tuple[AlgebraElement, AlgebraElement]:
    """(X_a - X_{-a}, i (X_a + X_{-a})) for a positive root a."""
    alpha = _require_positive(lie, alpha)
    p, m = lie.root_index(alpha), lie.root_index(neg(alpha))
    a = lie.element({p: GaussQ(1), m: GaussQ(-1)})
    s = lie.element({p: I, m: I})
    return a, s


def compact_pair(lie: LieAlgebra, alpha) -> tuple[AlgebraElement, AlgebraElement]:
    """Generators e_a - e_{-a} and i(e_a + e_{-a}) of the compact real form.

    With ``e_{-a} = k_a X_{-a}`` these span, together with ``i h_R``, a real
    subalgebra; they differ from :func:`compact_generators` only by the
    positive factor ``k_a`` on the ``X_{-a}`` coefficient.
    """
    alpha = _require_positive(lie, alpha)
    k = lie.k_alpha(alpha)
    p, m = lie.root_index(alpha), lie.root_index(neg(alpha))
    a = lie.element({p: GaussQ(1), m: GaussQ(-k)})
    s = lie.element({p: I, m: I * k})
    return a, s


def compact_form_basis(lie: LieAlgebra) -> list[AlgebraElement]:
    """Real basis of the compact form: i H_i, then the compact pair per positive root."""
    out = [lie.H_simple(i + 1, I) for i in range(lie.rank)]
    for alpha in lie.rs.positive_roots:
        out.extend(compact_pair(lie, alpha))
    return out


# --- subalgebras -------------------------------------------------------------------

TAGS = ("g(alpha)", "p_theta", "z_H", "n+", "n-", "n_H-", "h", "u_theta-tangent", "custom")


class ClosureError(AssertionError):
    pass


@dataclass(frozen=True, eq=False)
class Subalgebra:
    parent: LieAlgebra = field(repr=False)
    basis: tuple[AlgebraElement, ...]
    tag: str
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown subalgebra tag {self.tag!r}")
        bad = closure_defect(self.parent, self.basis)
        if bad is not None:
            raise ClosureError(f"{self.tag} is not bracket-closed: [{bad[0]}, {bad[1]}] escapes")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def coordinate_support(self) -> frozenset[int] | None:
        """Basis indices when every basis element is a single basis vector."""
        idx = []
        for b in self.basis:
            s = b.sparse()
            if len(s) != 1:
                return None
            idx.append(next(iter(s)))
        return frozenset(idx)

    def contains(self, x: AlgebraElement) -> bool:
        cs = self.coordinate_support
        if cs is not None:
            return set(x.sparse()) <= cs
        return ExactSpan(b.sparse() for b in self.basis).contains(x.sparse())

    def labels(self) -> list[str]:
        cs = self.coordinate_support
        if cs is None:
            return [repr(b) for b in self.basis]
        return [self.parent.labels[k] for k in sorted(cs)]


def closure_defect(lie: LieAlgebra, basis) -> tuple[int, int] | None:
    """First pair (i, j) with [b_i, b_j] outside span(basis), or None."""
    sparse = [b.sparse() for b in basis]
    exact = all(b.exact for b in basis)
    coords = set()
    single = True
    for s in sparse:
        if len(s) != 1:
            single = False
            break
        coords.update(s)
    if single:
        for a, sa in enumerate(sparse):
            for b in range(a + 1, len(sparse)):
                if not set(lie.bracket_sparse(sa, sparse[b], exact)) <= coords:
                    return a, b
        return None
    span = ExactSpan(sparse)
    for a, sa in enumerate(sparse):
        for b in range(a + 1, len(sparse)):
            if not span.contains(lie.bracket_sparse(sa, sparse[b], exact)):
                return a, b
    return None


def _coord_subalgebra(lie: LieAlgebra, indices, tag: str, flags=()) -> Subalgebra:
    basis = tuple(lie.element({k: GaussQ(1)}) for k in sorted(indices))
    return Subalgebra(lie, basis, tag, tuple(flags))


def g_alpha_subalgebra(lie: LieAlgebra, alpha) -> Subalgebra:
    """span{H_a, X_a, X_{-a}}, a copy of sl(2)."""
    alpha = lie.rs.require_root(alpha)
    basis = (lie.H(alpha), lie.X(alpha), lie.X(neg(alpha)))
    return Subalgebra(lie, basis, "g(alpha)")


def _theta(lie: LieAlgebra, theta) -> frozenset[int]:
    theta = frozenset(int(t) for t in theta)
    bad = [t for t in theta if not 1 <= t <= lie.rank]
    if bad:
        raise ValueError(f"simple-root indices {sorted(bad)} out of range 1..{lie.rank}")
    return theta


def parabolic(lie: LieAlgebra, theta) -> Subalgebra:
    theta = _theta(lie, theta)
    idx = list(range(lie.rank))
    for r in lie.rs.positive_roots:
        idx.append(lie.root_index(r))
        if support(r) <= theta:
            idx.append(lie.root_index(neg(r)))
    return _coord_subalgebra(lie, idx, "p_theta")


def cartan_subalgebra(lie: LieAlgebra) -> Subalgebra:
    return _coord_subalgebra(lie, range(lie.rank), "h")


def nilradical(lie: LieAlgebra, positive: bool = True) -> Subalgebra:
    roots = lie.rs.positive_roots if positive else tuple(neg(r) for r in lie.rs.positive_roots)
    return _coord_subalgebra(lie, [lie.root_index(r) for r in roots], "n+" if positive else "n-")


def centralizer_in_h_decomp(lie: LieAlgebra, H: CartanVector) -> Subalgebra:
    """z_H = h + sum of g_beta over beta(H) = 0."""
    flags: list[str] = []
    scale = max((abs(c) for c in H.coeffs), default=0.0)
    idx = list(range(lie.rank))
    for r in lie.rs.roots:
        if H.tol.is_zero(H(r), scale, flags, f"beta(H) for beta={format_root(r)}"):
            idx.append(lie.root_index(r))
    return _coord_subalgebra(lie, idx, "z_H", flags)


def n_minus_of_H(lie: LieAlgebra, H: CartanVector) -> Subalgebra:
    """sum of g_gamma over gamma(H) < 0; H must act with real eigenvalues."""
    flags: list[str] = []
    scale = max((abs(c) for c in H.coeffs), default=0.0)
    idx = []
    for r in lie.rs.roots:
        v = H(r)
        if not H.tol.is_zero(v.imag, scale, flags, f"Im beta(H) for beta={format_root(r)}"):
            raise ValueError(f"H is not in h_R: {format_root(r)}(H) = {v} is not real")
        if v.real < 0 and not H.tol.is_zero(v.real, scale, flags, f"beta(H) for beta={format_root(r)}"):
            idx.append(lie.root_index(r))
    return _coord_subalgebra(lie, idx, "n_H-", flags)


def lower_central_terminates(sub: Subalgebra) -> bool:
    """True when the lower central series of ``sub`` reaches 0."""
    lie = sub.parent
    gens = [b.sparse() for b in sub.basis]
    cur = ExactSpan(gens)
    prev_dim = cur.dim + 1
    while cur.dim and cur.dim < prev_dim:
        prev_dim = cur.dim
        nxt = ExactSpan()
        rows = list(cur.rows.values())
        for a in rows:
            for g in gens:
                nxt.add(lie.bracket_sparse(a, g))
        cur = nxt
    return cur.dim == 0


# --- Jacobi ---------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiReport:
    dynkin: str
    mode: str  # "exhaustive" or "sampled"
    triples_checked: int
    antisymmetry_failures: tuple
    violations: tuple  # up to 10 failing triples
    violation_count: int
    backend: str

    @property
    def passed(self) -> bool:
        return not self.antisymmetry_failures and not self.violation_count


def _antisymmetry_failures(lie: LieAlgebra, limit: int = 10) -> list:
    bad = []
    for i in range(lie.dim):
        for j, entry in lie.rows[i].items():
            back = dict(lie.rows[j].get(i, ()))
            if dict(entry) != {k: -c for k, c in back.items()} or (i == j and entry):
                bad.append((i, j))
                if len(bad) >= limit:
                    return bad
    return bad


def _triples_exhaustive(dim: int) -> np.ndarray:
    idx = np.arange(dim)
    a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
    mask = (a < b) & (b < c)
    return np.stack([a[mask], b[mask], c[mask]], axis=1).astype(np.int64)


def jacobi_check(lie: LieAlgebra, samples: int | None = None, seed: int = 0,
                 table: IntegerTable | None = None, chunk: int = 200_000) -> JacobiReport:
    """Exact Jacobi test on basis triples (all i<j<k, or ``samples`` random ones).

    Constants are scaled to a common integer denominator; the Jacobi sum is
    homogeneous so the test is unaffected.
    """
    t = table or lie.integer_table
    anti = _antisymmetry_failures_table(t) if table is not None else _antisymmetry_failures(lie)
    if samples is None:
        triples = _triples_exhaustive(lie.dim)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        triples = rng.integers(0, lie.dim, size=(samples, 3), dtype=np.int64)
        mode = "sampled"
    viol: list[tuple[int, int, int]] = []
    count = 0
    for start in range(0, len(triples), chunk):
        part = np.ascontiguousarray(triples[start:start + chunk])
        bad = kernels.jacobi_violations(t.offsets, t.cols, t.vals, t.dim, part)
        count += len(bad)
        for b in bad[: max(0, 10 - len(viol))]:
            viol.append(tuple(int(v) for v in part[b]))
    return JacobiReport(str(lie.dynkin), mode, int(len(triples)), tuple(anti), tuple(viol), count, kernels.BACKEND)


def _antisymmetry_failures_table(t: IntegerTable, limit: int = 10) -> list:
    def entry(i, j):
        p = i * t.dim + j
        lo, hi = int(t.offsets[p]), int(t.offsets[p + 1])
        return dict(zip(t.cols[lo:hi].tolist(), t.vals[lo:hi].tolist()))

    bad = []
    for i in range(t.dim):
        for j in range(i, t.dim):
            a, b = entry(i, j), entry(j, i)
            if a != {k: -v for k, v in b.items()}:
                bad.append((i, j))
                if len(bad) >= limit:
                    return bad
    return bad


def mutated_table(lie: LieAlgebra, i: int, j: int, k: int, factor: int = -1) -> IntegerTable:
    """Integer table with c[i][j][k] (and its antisymmetric partner) multiplied by ``factor``."""
    t = lie.integer_table
    vals = t.vals.copy()
    for a, b in ((i, j), (j, i)):
        p = a * t.dim + b
        lo, hi = int(t.offsets[p]), int(t.offsets[p + 1])
        for e in range(lo, hi):
            if int(t.cols[e]) == k:
                vals[e] *= factor
    return IntegerTable(t.dim, t.denominator, t.offsets, t.cols, vals)


# --- dump format -------------------------------------------------------------------

def dump_constants(lie: LieAlgebra) -> str:
    """Manifest (``#`` lines) followed by ``i j k re im`` for each nonzero constant."""
    lines = [f"# algebra {lie.dynkin} dim {lie.dim}"]
    for k, lab in enumerate(lie.labels):
        r = lie.root_of(k)
        coords = format_root(r) if r is not None else f"h{k + 1}"
        lines.append(f"# {k} {lab} {coords}")
    for i, j, k, c in lie.iter_structure():
        lines.append(f"{i} {j} {k} {qstr(c)} {qstr(0)}")
    return "\n".join(lines) + "\n"


def parse_dump(text: str) -> dict[tuple[int, int, int], GaussQ]:
    out = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        i, j, k, re_, im_ = line.split()
        out[(int(i), int(j), int(k))] = GaussQ(Q(re_), Q(im_))
    return out


# --- Weyl group action on the algebra -----------------------------------------------

def _exp_ad(lie: LieAlgebra, x: dict, v: dict) -> dict:
    out = dict(v)
    term = dict(v)
    n = 0
    while term:
        n += 1
        term = lie.bracket_sparse(x, term)
        term = {k: c / n for k, c in term.items()}
        for k, c in term.items():
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


class WeylAutomorphism:
    """Algebra automorphism lifting a Weyl word (rightmost reflection acts first).

    Each simple reflection lifts to exp(ad e) exp(-ad f) exp(ad e) with
    ``e = e_{alpha_i}``, ``f = e_{-alpha_i}``; it maps g_beta onto g_{s_i beta}.
    """

    def __init__(self, lie: LieAlgebra, word):
        self.lie = lie
        self.word = tuple(int(w) for w in word)
        for w in self.word:
            if not 1 <= w <= lie.rank:
                raise ValueError(f"simple reflection index {w} out of range 1..{lie.rank}")
        self._cache: dict[int, dict] = {}

    def _simple(self, i: int, v: dict) -> dict:
        lie = self.lie
        a = lie.rs.simple_roots[i - 1]
        e = {lie.root_index(a): GaussQ(1)}
        f = {lie.root_index(neg(a)): GaussQ(-lie.k_alpha(a))}  # -e_{-alpha_i}
        v = _exp_ad(lie, e, v)
        v = _exp_ad(lie, f, v)
        return _exp_ad(lie, e, v)

    def basis_image(self, k: int) -> dict:
        img = self._cache.get(k)
        if img is None:
            v = {k: GaussQ(1)}
            for i in reversed(self.word):
                v = self._simple(i, v)
            img = self._cache[k] = v
        return img

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        out: dict = {}
        for k, c in x.sparse().items():
            for m, d in self.basis_image(k).items():
                out[m] = out.get(m, 0) + (c * d if x.exact else c * complex(d))
        return AlgebraElement.from_sparse(self.lie, out, x.tol)

    def cartan(self, H: CartanVector) -> CartanVector:
        y = self(H.element())
        return CartanVector(self.lie, y.coords[: self.lie.rank], H.tol)


def weyl_automorphism(lie: LieAlgebra, word) -> WeylAutomorphism:
    return WeylAutomorphism(lie, word)


def random_exact_element(lie: LieAlgebra, rng: random.Random, density: float = 0.5,
                         span: int = 3) -> AlgebraElement:
    """Random element with small Gaussian-integer coordinates."""
    sparse = {}
    for k in range(lie.dim):
        if rng.random() < density:
            z = GaussQ(rng.randint(-span, span), rng.randint(-span, span))
            if z:
                sparse[k] = z
    return lie.element(sparse)


__all__ = [
    "LieAlgebra", "Subalgebra", "JacobiReport", "IntegerTable", "ClosureError",
    "build_algebra", "ad_matrix", "compact_generators", "compact_pair", "compact_form_basis",
    "g_alpha_subalgebra", "parabolic", "centralizer_in_h_decomp", "n_minus_of_H",
    "cartan_subalgebra", "nilradical", "lower_central_terminates", "jacobi_check",
    "mutated_table", "dump_constants", "parse_dump", "weyl_automorphism", "WeylAutomorphism",
    "chevalley_constants", "dual_coxeter_number", "random_exact_element", "closure_defect",
]
