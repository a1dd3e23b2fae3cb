"""Algebra elements, Cartan vectors and spectral predicates.

An element is a coordinate vector in the basis ``H_1..H_l, X_alpha`` of a
:class:`~liecert.chevalley.LieAlgebra`.  Exact elements carry GaussQ
coordinates; numeric ones carry ``complex`` coordinates plus the tolerance
they were ingested with.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .rootsys import Root, format_root, parse_root
from .scalars import (
    EXACT,
    GaussQ,
    Q,
    Tolerance,
    encode,
    parse_scalar,
)


class ElementError(ValueError):
    """Malformed element data; ``path`` locates the problem in the input."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


def _zero(tol: Tolerance):
    return GaussQ(0) if tol.exact else 0j


def _coerce(c, tol: Tolerance):
    return GaussQ.coerce(c) if tol.exact else complex(c)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    lie: object = field(repr=False)
    coords: tuple
    tol: Tolerance = EXACT

    def __post_init__(self):
        if len(self.coords) != self.lie.dim:
            raise ElementError(f"expected {self.lie.dim} coordinates, got {len(self.coords)}")

    # construction -----------------------------------------------------------
    @classmethod
    def from_sparse(cls, lie, sparse: dict, tol: Tolerance = EXACT) -> "AlgebraElement":
        z = _zero(tol)
        coords = [z] * lie.dim
        for k, c in sparse.items():
            coords[k] = _coerce(c, tol)
        return cls(lie, tuple(coords), tol)

    @classmethod
    def zero(cls, lie, tol: Tolerance = EXACT) -> "AlgebraElement":
        return cls.from_sparse(lie, {}, tol)

    @property
    def exact(self) -> bool:
        return self.tol.exact

    def sparse(self) -> dict:
        return {k: c for k, c in enumerate(self.coords) if c}

    def numeric(self, tol: Tolerance) -> "AlgebraElement":
        return AlgebraElement(self.lie, tuple(complex(c) for c in self.coords), tol)

    def _check(self, other: "AlgebraElement"):
        if other.lie is not self.lie:
            raise ElementError("elements belong to different algebras")
        if other.tol != self.tol:
            raise ElementError("cannot mix exact and numeric elements")

    # linear structure ---------------------------------------------------------
    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.lie, tuple(a + b for a, b in zip(self.coords, other.coords)), self.tol)

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.lie, tuple(a - b for a, b in zip(self.coords, other.coords)), self.tol)

    def __neg__(self):
        return AlgebraElement(self.lie, tuple(-a for a in self.coords), self.tol)

    def __mul__(self, c):
        c = _coerce(c, self.tol)
        return AlgebraElement(self.lie, tuple(a * c for a in self.coords), self.tol)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.lie is other.lie and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def bracket(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement.from_sparse(
            self.lie, self.lie.bracket_sparse(self.sparse(), other.sparse(), exact=self.exact), self.tol
        )

    def is_zero(self) -> bool:
        return not any(self.coords)

    def sup_norm(self) -> float:
        return max((abs(c) for c in self.coords), default=0.0)

    def __repr__(self):
        terms = [f"{c}*{self.lie.labels[k]}" for k, c in enumerate(self.coords) if c]
        return "AlgebraElement(" + (" + ".join(terms) or "0") + ")"

    # serialisation ------------------------------------------------------------
    def to_json(self) -> dict:
        l = self.lie.rank
        roots = {}
        for r_idx, root in enumerate(self.lie.rs.roots):
            c = self.coords[l + r_idx]
            if c:
                roots[format_root(root)] = encode(c, self.exact)
        return {
            "cartan": [encode(c, self.exact) for c in self.coords[:l]],
            "roots": roots,
        }

    @classmethod
    def from_json(cls, lie, doc, tol: Tolerance = EXACT, path: str = "$") -> "AlgebraElement":
        if not isinstance(doc, dict):
            raise ElementError("element must be an object with 'cartan' and 'roots'", path)
        unknown = set(doc) - {"cartan", "roots"}
        if unknown:
            raise ElementError(f"unknown keys {sorted(unknown)}", path)
        exact = tol.exact
        sparse = {}
        cartan = doc.get("cartan", [])
        if not isinstance(cartan, list) or len(cartan) not in (0, lie.rank):
            raise ElementError(f"'cartan' must list {lie.rank} [re, im] pairs", f"{path}.cartan")
        for i, v in enumerate(cartan):
            try:
                sparse[i] = parse_scalar(v, exact)
            except ValueError as e:
                raise ElementError(str(e), f"{path}.cartan[{i}]") from None
        roots = doc.get("roots", {})
        if not isinstance(roots, dict):
            raise ElementError("'roots' must be an object keyed by '[n1,...,nl]'", f"{path}.roots")
        for key, v in roots.items():
            here = f"{path}.roots[{key!r}]"
            try:
                root = parse_root(key)
            except ValueError as e:
                raise ElementError(str(e), here) from None
            if len(root) != lie.rank:
                raise ElementError(f"root has {len(root)} coordinates, algebra rank is {lie.rank}", here)
            if root not in lie.rs.index:
                raise ElementError(f"{list(root)} is not a root of {lie.rs.dynkin}", here)
            try:
                sparse[lie.root_index(root)] = parse_scalar(v, exact)
            except ValueError as e:
                raise ElementError(str(e), here) from None
        return cls.from_sparse(lie, sparse, tol)


@dataclass(frozen=True, eq=False)
class CartanVector:
    """Element of h in coordinates of the basis H_{alpha_1}..H_{alpha_l}."""

    lie: object = field(repr=False)
    coeffs: tuple
    tol: Tolerance = EXACT

    def __post_init__(self):
        if len(self.coeffs) != self.lie.rank:
            raise ElementError(f"expected {self.lie.rank} Cartan coordinates, got {len(self.coeffs)}")

    @classmethod
    def of(cls, lie, coeffs, tol: Tolerance = EXACT) -> "CartanVector":
        return cls(lie, tuple(_coerce(c, tol) for c in coeffs), tol)

    @classmethod
    def from_root(cls, lie, root, scale=1) -> "CartanVector":
        """scale * H_root (H_alpha is linear in alpha)."""
        root = lie.rs.require_root(root)
        return cls.of(lie, [GaussQ.coerce(scale) * c for c in root])

    @property
    def exact(self) -> bool:
        return self.tol.exact

    def __call__(self, root) -> object:
        """beta(H) for a root beta."""
        vals = self.lie.root_values[self.lie.rs.index[tuple(root)]]
        s = _zero(self.tol)
        for c, v in zip(self.coeffs, vals):
            if c:
                s = s + c * (v if self.exact else float(v))
        return s

    def element(self) -> AlgebraElement:
        return AlgebraElement.from_sparse(self.lie, dict(enumerate(self.coeffs)), self.tol)

    def __add__(self, other):
        return CartanVector(self.lie, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.tol)

    def __mul__(self, c):
        c = _coerce(c, self.tol)
        return CartanVector(self.lie, tuple(a * c for a in self.coeffs), self.tol)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CartanVector):
            return NotImplemented
        return self.lie is other.lie and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        return f"CartanVector({[str(c) for c in self.coeffs]})"


# --- operations ---------------------------------------------------------------

def decompose(x: AlgebraElement) -> tuple[CartanVector, dict[Root, object]]:
    """Root-space decomposition ``x = A_0 + sum_alpha A_alpha``.

    Returns the Cartan part and the nonzero coefficients of the root vectors
    X_alpha, keyed by root in root order.
    """
    l = x.lie.rank
    a0 = CartanVector(x.lie, x.coords[:l], x.tol)
    comps = {}
    for r_idx, root in enumerate(x.lie.rs.roots):
        c = x.coords[l + r_idx]
        if c:
            comps[root] = c
    return a0, comps


def reassemble(a0: CartanVector, comps: dict) -> AlgebraElement:
    lie = a0.lie
    sparse = dict(enumerate(a0.coeffs))
    for root, c in comps.items():
        sparse[lie.root_index(root)] = c
    return AlgebraElement.from_sparse(lie, sparse, a0.tol)


def split_real_imaginary(b: CartanVector) -> tuple[CartanVector, CartanVector]:
    """B = B_Re + B_Im with B_Re in h_R and B_Im in i h_R.

    The basis H_{alpha_i} lies in h_R, so the split is coordinatewise.
    """
    if b.exact:
        re_ = tuple(GaussQ(c.real) for c in b.coeffs)
        im_ = tuple(GaussQ(0, c.imag) for c in b.coeffs)
    else:
        re_ = tuple(complex(c.real, 0) for c in b.coeffs)
        im_ = tuple(complex(0, c.imag) for c in b.coeffs)
    return CartanVector(b.lie, re_, b.tol), CartanVector(b.lie, im_, b.tol)


@dataclass(frozen=True)
class Spectrum:
    """Nonzero ad-eigenvalues with multiplicities, plus the kernel dimension."""

    entries: tuple[tuple[object, int], ...]
    kernel_dim: int
    values: dict = field(repr=False, compare=False)  # root -> beta(B)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries) + self.kernel_dim


def ad_spectrum(b: CartanVector, scale: float | None = None, flags: list | None = None) -> Spectrum:
    lie = b.lie
    if scale is None:
        scale = max((abs(c) for c in b.coeffs), default=0.0)
    values = {root: b(root) for root in lie.rs.roots}
    nonzero = []
    zero_count = 0
    for root, v in values.items():
        if b.tol.is_zero(v, scale, flags, f"beta(B) for beta={format_root(root)}"):
            zero_count += 1
        else:
            nonzero.append(v)
    if b.exact:
        counts = Counter(nonzero)
        ordered = sorted(counts.items(), key=lambda kv: (kv[0].real, kv[0].imag))
    else:
        groups: list[list] = []
        for v in sorted(nonzero, key=lambda z: (z.real, z.imag)):
            for g in groups:
                if b.tol.is_zero(v - g[0], scale):
                    g.append(v)
                    break
            else:
                groups.append([v])
        ordered = [(g[0], len(g)) for g in groups]
    return Spectrum(tuple(ordered), lie.rank + zero_count, values)


@dataclass(frozen=True)
class Check:
    """Boolean outcome with reasons (why false) and tolerance flags."""

    value: bool
    reasons: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()

    def __bool__(self):
        return self.value


def is_strong_regular(b: CartanVector, scale: float | None = None) -> Check:
    """ker ad(B) = h, the beta(B) pairwise distinct, and none of them real."""
    flags: list[str] = []
    if scale is None:
        scale = max((abs(c) for c in b.coeffs), default=0.0)
    spec = ad_spectrum(b, scale, flags)
    reasons = []
    if spec.kernel_dim != b.lie.rank:
        reasons.append(f"kernel dimension {spec.kernel_dim} exceeds rank {b.lie.rank}")
    repeated = [v for v, m in spec.entries if m > 1]
    if repeated:
        reasons.append(f"repeated eigenvalues {[str(v) for v in repeated]}")
    real = [v for v, _ in spec.entries if b.tol.is_zero(v.imag, scale, flags, "Im eigenvalue")]
    if real:
        reasons.append(f"real eigenvalues {[str(v) for v in real]}")
    return Check(not reasons, tuple(reasons), tuple(flags))


def is_in_cartan(x: AlgebraElement, scale: float | None = None) -> Check:
    """True iff every root-vector coordinate vanishes (up to tolerance)."""
    flags: list[str] = []
    if scale is None:
        scale = x.sup_norm()
    l = x.lie.rank
    offending = []
    for r_idx, root in enumerate(x.lie.rs.roots):
        c = x.coords[l + r_idx]
        if c and not x.tol.is_zero(c, scale, flags, f"X_{format_root(root)} coefficient"):
            offending.append(format_root(root))
    reasons = (f"nonzero root components at {offending}",) if offending else ()
    return Check(not offending, reasons, tuple(flags))


def cartan_part(x: AlgebraElement) -> CartanVector:
    return CartanVector(x.lie, x.coords[: x.lie.rank], x.tol)


__all__ = [
    "AlgebraElement", "CartanVector", "ElementError", "Spectrum", "Check",
    "decompose", "reassemble", "split_real_imaginary", "ad_spectrum",
    "is_strong_regular", "is_in_cartan", "cartan_part", "Q",
]
