"""Sufficient controllability conditions for right-invariant bilinear systems.

A system ``dg/dt = (A + u B) g`` on the simply connected group of ``lie`` is
given by two algebra elements.  :func:`decide` runs the rank condition and
then one of two root-witness tests (imaginary or real spectrum of ad B),
returning a :class:`Certificate` whose evidence can be re-audited.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .chevalley import LieAlgebra, ad_matrix, build_algebra, closure_defect
from .elements import (
    AlgebraElement,
    ElementError,
    cartan_part,
    decompose,
    is_in_cartan,
    split_real_imaginary,
)
from .linalg import ExactSpan, NumericSpan
from .rootsys import DynkinType, Root, format_root, neg
from .scalars import EXACT, LOW_CONFIDENCE, Tolerance, encode

CONTROLLABLE = "CONTROLLABLE"
NOT_CONTROLLABLE = "NOT_CONTROLLABLE"
INCONCLUSIVE = "INCONCLUSIVE"
NOT_APPLICABLE = "NOT_APPLICABLE"

IMAGINARY = "imaginary-case"
REAL = "real-case"

INFERENCE = (
    "conditions on the witness root alpha hold",
    "=> g(alpha) is contained in the Lie wedge of the closed system semigroup",
    "=> G(alpha) lies in the closure of the semigroup S",
    "=> S = G (a semigroup with interior containing some G(alpha) is the whole group)",
)


class SpecError(ValueError):
    """Bad system-spec input; ``path`` points into the JSON document."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True, eq=False)
class SystemSpec:
    lie: LieAlgebra = field(repr=False)
    A: AlgebraElement
    B: AlgebraElement
    tolerance: Tolerance = EXACT

    def __post_init__(self):
        if self.A.lie is not self.lie or self.B.lie is not self.lie:
            raise SpecError("A and B must belong to the system's algebra")
        if self.A.tol != self.tolerance or self.B.tol != self.tolerance:
            raise SpecError("A and B must carry the system tolerance")

    @property
    def exact(self) -> bool:
        return self.tolerance.exact

    @property
    def scale(self) -> float:
        """Sup-norm of the input data (the tolerance reference magnitude)."""
        return max(self.A.sup_norm(), self.B.sup_norm())

    def with_elements(self, A: AlgebraElement, B: AlgebraElement) -> "SystemSpec":
        return SystemSpec(self.lie, A, B, self.tolerance)

    def to_json(self) -> dict:
        return {
            "algebra": {"type": self.lie.dynkin.family, "rank": self.lie.rank},
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "tolerance": self.tolerance.to_json(),
        }

    @classmethod
    def from_json(cls, doc, tolerance: Tolerance | None = None, algebra: str | None = None) -> "SystemSpec":
        """Parse a system-spec document; ``tolerance``/``algebra`` override the file."""
        if not isinstance(doc, dict):
            raise SpecError("system spec must be a JSON object")
        unknown = set(doc) - {"algebra", "A", "B", "tolerance"}
        if unknown:
            raise SpecError(f"unknown keys {sorted(unknown)}")
        dt = _parse_algebra(doc.get("algebra"), algebra)
        if tolerance is None:
            try:
                tolerance = Tolerance.parse(doc.get("tolerance", "exact"))
            except (TypeError, ValueError) as e:
                raise SpecError(str(e), "$.tolerance") from None
        lie = build_algebra(dt)
        for key in ("A", "B"):
            if key not in doc:
                raise SpecError(f"missing element {key!r}")
        try:
            A = AlgebraElement.from_json(lie, doc["A"], tolerance, "$.A")
            B = AlgebraElement.from_json(lie, doc["B"], tolerance, "$.B")
        except ElementError as e:
            raise SpecError(str(e).split(": ", 1)[-1], e.path) from None
        return cls(lie, A, B, tolerance)


def _parse_algebra(node, override: str | None) -> DynkinType:
    if override is not None:
        try:
            dt = DynkinType.parse(override)
        except ValueError as e:
            raise SpecError(str(e), "--algebra") from None
        if node is not None and _parse_algebra(node, None) != dt:
            raise SpecError(f"file algebra disagrees with --algebra {override}", "$.algebra")
        return dt
    if node is None:
        raise SpecError("missing 'algebra'", "$")
    if isinstance(node, str):
        text = node
    elif isinstance(node, dict):
        t = node.get("type")
        if not isinstance(t, str):
            raise SpecError("'type' must be a string such as \"A\"", "$.algebra.type")
        r = node.get("rank")
        if r is None:
            text = t
        elif isinstance(r, bool) or not isinstance(r, int):
            raise SpecError("'rank' must be an integer", "$.algebra.rank")
        elif t[1:]:
            if t[1:] != str(r):
                raise SpecError(f"type {t!r} disagrees with rank {r}", "$.algebra.rank")
            text = t
        else:
            text = f"{t}{r}"
    else:
        raise SpecError("'algebra' must be an object {type, rank}", "$.algebra")
    try:
        return DynkinType.parse(text)
    except ValueError as e:
        raise SpecError(str(e), "$.algebra") from None


# --- rank condition -------------------------------------------------------------

@dataclass(frozen=True)
class LarcResult:
    generated_dim: int
    dim_g: int
    trace: tuple[int, ...]
    basis: tuple[dict, ...] = field(repr=False)
    flags: tuple[str, ...] = ()

    @property
    def full(self) -> bool:
        return self.generated_dim == self.dim_g

    def to_json(self) -> dict:
        return {"generated_dim": self.generated_dim, "dim_g": self.dim_g, "trace": list(self.trace)}


def larc_closure(sys: SystemSpec) -> LarcResult:
    """Smallest bracket-closed subspace containing A and B, by sweeps.

    Each sweep brackets every generated vector with every vector that is new
    since the previous sweep; ``trace`` is the dimension after the seed and
    after every sweep.
    """
    lie = sys.lie
    exact = sys.exact
    flags: list[str] = []
    if exact:
        span = ExactSpan()

        def add(v):
            return span.add(v)
    else:
        span = NumericSpan(lie.dim, sys.tolerance, sys.scale, flags)

        def add(v):
            return span.add(v, "LARC rank")

    gens: list[dict] = []
    for x in (sys.A, sys.B):
        v = x.sparse()
        if v and add(v):
            gens.append(v)
    trace = [len(gens)]
    new_from = 0
    while new_from < len(gens) and len(gens) < lie.dim:
        start = len(gens)
        for a in range(start):
            for b in range(max(a + 1, new_from), start):
                v = lie.bracket_sparse(gens[a], gens[b], exact)
                if not exact:
                    v = _normalise(v)
                if v and add(v):
                    gens.append(v)
                    if len(gens) == lie.dim:
                        break
            if len(gens) == lie.dim:
                break
        new_from = start
        trace.append(len(gens))
        if len(gens) == start:
            break
    return LarcResult(len(gens), lie.dim, tuple(trace), tuple(gens), tuple(flags))


def _normalise(v: dict) -> dict:
    n = max((abs(c) for c in v.values()), default=0.0)
    return {k: c / n for k, c in v.items()} if n else {}


def larc_oracle(sys: SystemSpec, seed: int = 0, rounds: int | None = None) -> int:
    """Independent LARC dimension via random brackets and floating SVD rank.

    Grows a dense matrix of random real combinations of the current spanning
    set bracketed with each other until the rank stabilises.  Only sensible for
    exact inputs with modest coefficients.
    """
    lie = sys.lie
    rng = np.random.default_rng(seed)
    ads = _dense_structure(lie)

    def br(x, y):
        return np.einsum("i,j,ijk->k", x, y, ads)

    cur = [np.array([complex(c) for c in sys.A.coords]), np.array([complex(c) for c in sys.B.coords])]
    cur = [v for v in cur if np.linalg.norm(v) > 0]

    def rank(vs):
        if not vs:
            return 0
        m = np.array(vs)
        s = np.linalg.svd(m, compute_uv=False)
        return int((s > 1e-8 * s[0]).sum())

    r = rank(cur)
    if not r:
        return 0
    for _ in range(rounds or lie.dim + 2):
        basis = _orth(cur)
        extra = []
        for _k in range(2 * lie.dim):
            x = rng.standard_normal(len(basis)) @ basis
            y = rng.standard_normal(len(basis)) @ basis
            extra.append(br(x, y))
        for p in basis:
            for q in basis:
                extra.append(br(p, q))
        cur = list(basis) + extra
        nr = rank(cur)
        if nr == r:
            break
        r = nr
    return r


def _orth(vs):
    m = np.array(vs)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    k = int((s > 1e-8 * s[0]).sum()) if len(s) else 0
    return vh[:k]


_DENSE: dict = {}


def _dense_structure(lie: LieAlgebra) -> np.ndarray:
    t = _DENSE.get(lie.dynkin)
    if t is None:
        t = np.zeros((lie.dim, lie.dim, lie.dim), dtype=complex)
        for i, j, k, c in lie.iter_structure():
            t[i, j, k] = float(c)
        _DENSE[lie.dynkin] = t
    return t


# --- root-witness tests ------------------------------------------------------------

@dataclass
class Condition:
    id: str
    description: str
    passed: bool
    evidence: dict

    def to_json(self) -> dict:
        return {"id": self.id, "description": self.description, "passed": self.passed, "evidence": self.evidence}


@dataclass
class Fragment:
    """Outcome of one theorem's scan."""

    theorem: str
    applicable: bool
    witness: Root | None
    checklist: list[Condition]
    rejections: list[dict]
    flags: list[str]
    gate: str = ""

    @property
    def passed(self) -> bool:
        return self.witness is not None


class _Ctx:
    """Shared evaluation data for one system."""

    def __init__(self, sys: SystemSpec, flags: list[str]):
        self.sys = sys
        self.lie = sys.lie
        self.tol = sys.tolerance
        self.exact = sys.exact
        self.scale = sys.scale
        self.flags = flags
        self.b = cartan_part(sys.B)
        _, self.comps = decompose(sys.A)
        self.values = {r: self.b(r) for r in self.lie.rs.roots}

    def enc(self, z):
        return encode(z, self.exact)

    def zero(self, z, what: str) -> bool:
        return self.tol.is_zero(z, self.scale, self.flags, what)

    def comp(self, root):
        return self.comps.get(tuple(root), 0)

    def comp_nonzero(self, root) -> bool:
        c = self.comp(root)
        return bool(c) and not self.zero(c, f"A_{format_root(root)}")

    def cmp(self, x, y, what: str) -> int:
        return self.tol.compare(x, y, self.scale, self.flags, what)


def _imaginary_conditions(ctx: _Ctx, alpha: Root) -> list[Condition]:
    v = ctx.values
    a = v[alpha]
    fa = format_root(alpha)
    c1 = Condition(
        "imaginary.1", "alpha(B) != 0",
        not ctx.zero(a, f"{fa}(B)"),
        {"alpha(B)": ctx.enc(a)},
    )
    na = neg(alpha)
    c2 = Condition(
        "imaginary.2", "A_alpha != 0 and A_-alpha != 0",
        ctx.comp_nonzero(alpha) and ctx.comp_nonzero(na),
        {"A_alpha": ctx.enc(ctx.comp(alpha)), "A_-alpha": ctx.enc(ctx.comp(na))},
    )
    clashes = []
    compared = {}
    for beta in ctx.lie.rs.roots:
        if beta == alpha or not ctx.comp_nonzero(beta):
            continue
        compared[format_root(beta)] = ctx.enc(v[beta])
        if ctx.zero(v[beta] - a, f"{format_root(beta)}(B) - {fa}(B)"):
            clashes.append(format_root(beta))
    c3 = Condition(
        "imaginary.3", "beta(B) != alpha(B) for every root beta != alpha with A_beta != 0",
        not clashes,
        {"alpha(B)": ctx.enc(a), "beta(B)": compared, "equal_at": clashes},
    )
    return [c1, c2, c3]


def _real_conditions(ctx: _Ctx, alpha: Root, positive: tuple[Root, ...]) -> list[Condition]:
    v = ctx.values
    a = v[alpha]
    fa = format_root(alpha)
    re_a = a.real
    c1 = Condition(
        "real.1", "Im alpha(B) != 0",
        not ctx.zero(a.imag, f"Im {fa}(B)"),
        {"alpha(B)": ctx.enc(a)},
    )
    ties = []
    for beta in positive:
        if beta != alpha and ctx.cmp(v[beta].real, re_a, f"Re {format_root(beta)}(B) vs Re {fa}(B)") == 0:
            ties.append(format_root(beta))
    c2 = Condition(
        "real.2", "no other positive root beta has Re beta(B) = Re alpha(B)",
        not ties,
        {"Re alpha(B)": ctx.enc(re_a), "equal_at": ties},
    )
    na = neg(alpha)
    outside = []
    offenders = []
    for gamma in ctx.lie.rs.roots:
        rg = v[gamma].real
        hi = ctx.cmp(rg, re_a, f"Re {format_root(gamma)}(B) vs Re {fa}(B)")
        lo = ctx.cmp(rg, -re_a, f"Re {format_root(gamma)}(B) vs -Re {fa}(B)")
        if hi > 0 or lo < 0:
            outside.append(format_root(gamma))
            if ctx.comp_nonzero(gamma):
                offenders.append(format_root(gamma))
    both = ctx.comp_nonzero(alpha) and ctx.comp_nonzero(na)
    c3 = Condition(
        "real.3",
        "A_alpha != 0, A_-alpha != 0, and A_gamma = 0 whenever Re gamma(B) lies outside [-Re alpha(B), Re alpha(B)]",
        both and not offenders,
        {
            "A_alpha": ctx.enc(ctx.comp(alpha)),
            "A_-alpha": ctx.enc(ctx.comp(na)),
            "outside_band": outside,
            "nonzero_outside_band": offenders,
        },
    )
    return [c1, c2, c3]


def _first_failure(conds: list[Condition]) -> str | None:
    for c in conds:
        if not c.passed:
            return c.id
    return None


def _gate_in_cartan(sys: SystemSpec, flags: list[str]) -> bool:
    chk = is_in_cartan(sys.B, sys.scale)
    flags.extend(chk.flags)
    return chk.value


def _b_real_is_zero(sys: SystemSpec, flags: list[str]) -> bool:
    b_re, _ = split_real_imaginary(cartan_part(sys.B))
    return all(sys.tolerance.is_zero(c, sys.scale, flags, "B_Re coordinate") for c in b_re.coeffs)


def check_imaginary_case(sys: SystemSpec, candidates=None) -> Fragment:
    flags: list[str] = []
    if not _gate_in_cartan(sys, flags):
        return Fragment(IMAGINARY, False, None, [], [], flags, "B is not in the Cartan subalgebra")
    if not _b_real_is_zero(sys, flags):
        return Fragment(IMAGINARY, False, None, [], [], flags, "ad(B) has eigenvalues with nonzero real part")
    ctx = _Ctx(sys, flags)
    rejections = []
    first = None
    for alpha in candidates if candidates is not None else sys.lie.rs.roots:
        conds = _imaginary_conditions(ctx, alpha)
        bad = _first_failure(conds)
        if bad is None:
            return Fragment(IMAGINARY, True, alpha, conds, rejections, flags)
        first = first or conds
        rejections.append({"root": format_root(alpha), "failed": bad})
    return Fragment(IMAGINARY, True, None, first or [], rejections, flags)


def check_real_case(sys: SystemSpec, positive_roots=None) -> Fragment:
    """Real-spectrum test; ``positive_roots`` replaces the standard positive system."""
    flags: list[str] = []
    if not _gate_in_cartan(sys, flags):
        return Fragment(REAL, False, None, [], [], flags, "B is not in the Cartan subalgebra")
    if _b_real_is_zero(sys, flags):
        return Fragment(REAL, False, None, [], [], flags, "B_Re = 0")
    ctx = _Ctx(sys, flags)
    positive = tuple(positive_roots) if positive_roots is not None else sys.lie.rs.positive_roots
    rejections = []
    first = None
    for alpha in positive:
        conds = _real_conditions(ctx, alpha, positive)
        bad = _first_failure(conds)
        if bad is None:
            if ctx.cmp(ctx.values[alpha].real, 0, f"Re {format_root(alpha)}(B)") <= 0:
                flags.append(f"DEGENERATE: Re {format_root(alpha)}(B) <= 0; conditions evaluated literally")
            return Fragment(REAL, True, alpha, conds, rejections, flags)
        first = first or conds
        rejections.append({"root": format_root(alpha), "failed": bad})
    return Fragment(REAL, True, None, first or [], rejections, flags)


def all_witnesses(sys: SystemSpec, positive_roots=None) -> tuple[str, list[Root]]:
    """Every root passing the applicable theorem's conditions (not just the first)."""
    flags: list[str] = []
    if not _gate_in_cartan(sys, flags):
        return "", []
    ctx = _Ctx(sys, flags)
    if _b_real_is_zero(sys, flags):
        return IMAGINARY, [a for a in sys.lie.rs.roots if _first_failure(_imaginary_conditions(ctx, a)) is None]
    positive = tuple(positive_roots) if positive_roots is not None else sys.lie.rs.positive_roots
    return REAL, [a for a in positive if _first_failure(_real_conditions(ctx, a, positive)) is None]


# --- certificates ---------------------------------------------------------------

@dataclass
class Certificate:
    verdict: str
    algebra: str
    theorem_used: str | None
    witness_root: Root | None
    checklist: list[Condition]
    larc: LarcResult | None
    confidence_flags: list[str]
    rejections: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    tolerance: object = "exact"

    @property
    def inference(self) -> list[str]:
        if self.verdict == CONTROLLABLE:
            return list(INFERENCE)
        return []

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "algebra": self.algebra,
            "tolerance": self.tolerance,
            "theorem_used": self.theorem_used,
            "witness_root": format_root(self.witness_root) if self.witness_root is not None else None,
            "checklist": [c.to_json() for c in self.checklist],
            "larc": self.larc.to_json() if self.larc is not None else None,
            "confidence_flags": list(self.confidence_flags),
            "inference": self.inference,
            "rejections": list(self.rejections),
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return canonical_json(self.to_json())


def canonical_json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _low_confidence(flags) -> bool:
    return any(f.startswith(LOW_CONFIDENCE) for f in flags)


def decide(sys: SystemSpec) -> Certificate:
    algebra = str(sys.lie.dynkin)
    tol = sys.tolerance.to_json()
    flags: list[str] = []
    if not _gate_in_cartan(sys, flags):
        return Certificate(NOT_APPLICABLE, algebra, None, None, [], None, flags,
                           notes=["B has nonzero root-space components; both theorems assume B in h"],
                           tolerance=tol)
    larc = larc_closure(sys)
    flags.extend(larc.flags)
    if not larc.full:
        cert = Certificate(
            NOT_CONTROLLABLE, algebra, None, None, [], larc, flags,
            notes=[
                f"A and B generate a proper subalgebra of dimension {larc.generated_dim} < {larc.dim_g}",
                "the reachable set lies in the corresponding proper connected subgroup",
            ],
            tolerance=tol,
        )
        if _low_confidence(flags):
            cert.verdict = INCONCLUSIVE
            cert.notes.append("rank decision was near the tolerance threshold; downgraded")
        return cert
    imaginary = _b_real_is_zero(sys, flags)
    frag = check_imaginary_case(sys) if imaginary else check_real_case(sys)
    flags.extend(f for f in frag.flags if f not in flags)
    if frag.passed:
        verdict = CONTROLLABLE
        notes = []
        if _low_confidence(flags):
            verdict = INCONCLUSIVE
            notes.append("a decision was near the tolerance threshold; downgraded")
    else:
        verdict = INCONCLUSIVE
        notes = ["no root satisfies the sufficient conditions; they are not necessary"]
    return Certificate(verdict, algebra, frag.theorem, frag.witness, frag.checklist, larc, flags,
                       frag.rejections, notes, tol)


# --- audit -------------------------------------------------------------------------

def audit_certificate(sys: SystemSpec, cert: Certificate | dict) -> list[str]:
    """Re-derive every recorded scalar by a second path; return mismatches.

    Root values are read from the diagonal of ad(B) rather than from the
    bilinear form, and A-components straight from the coordinate vector.
    """
    doc = cert.to_json() if isinstance(cert, Certificate) else cert
    problems = []
    lie = sys.lie
    if doc["verdict"] == NOT_CONTROLLABLE:
        basis = larc_closure(sys).basis
        if len(basis) >= lie.dim:
            problems.append("generated subspace is not proper")
        elem = [AlgebraElement.from_sparse(lie, b, sys.tolerance) for b in basis]
        if sys.exact:
            if closure_defect(lie, elem) is not None:
                problems.append("generated subspace is not bracket-closed")
            span = ExactSpan(basis)
            if not (span.contains(sys.A.sparse()) and span.contains(sys.B.sparse())):
                problems.append("generated subspace misses A or B")
        return problems
    if doc["verdict"] != CONTROLLABLE:
        return problems
    adb = ad_matrix(lie, AlgebraElement(lie, sys.B.coords, sys.tolerance))
    diag = {r: adb[lie.root_index(r), lie.root_index(r)] for r in lie.rs.roots}
    enc = lambda z: encode(z, sys.exact)  # noqa: E731
    alpha = tuple(int(c) for c in doc["witness_root"].strip("[]").split(","))
    coords = sys.A.coords
    expect = {
        "alpha(B)": enc(diag[alpha]),
        "A_alpha": enc(coords[lie.root_index(alpha)]),
        "A_-alpha": enc(coords[lie.root_index(neg(alpha))]),
        "Re alpha(B)": enc(diag[alpha].real),
    }
    for cond in doc["checklist"]:
        if not cond["passed"]:
            problems.append(f"{cond['id']} recorded as failed")
        for key, val in cond["evidence"].items():
            if key in expect and expect[key] != val:
                problems.append(f"{cond['id']}: {key} recorded {val}, recomputed {expect[key]}")
            if key == "beta(B)":
                for rk, rv in val.items():
                    beta = tuple(int(c) for c in rk.strip("[]").split(","))
                    if enc(diag[beta]) != rv:
                        problems.append(f"{cond['id']}: {rk}(B) recorded {rv}, recomputed {enc(diag[beta])}")
    return problems


__all__ = [
    "SystemSpec", "SpecError", "Certificate", "Condition", "Fragment", "LarcResult",
    "larc_closure", "larc_oracle", "check_imaginary_case", "check_real_case", "all_witnesses",
    "decide", "audit_certificate", "canonical_json",
    "CONTROLLABLE", "NOT_CONTROLLABLE", "INCONCLUSIVE", "NOT_APPLICABLE", "IMAGINARY", "REAL",
]
