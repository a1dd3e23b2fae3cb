"""Finite checks of structural facts about root systems, parabolics and
invariant two-forms on flag manifolds, all in exact arithmetic.

Every check returns a :class:`LemmaReport`.  ``run_all`` sweeps a parameter
grid; ``parse_grid`` reads the ``type=A..G,rank<=4,theta=all`` syntax.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations

from .chevalley import (
    LieAlgebra,
    build_algebra,
    centralizer_in_h_decomp,
    compact_pair,
    g_alpha_subalgebra,
    jacobi_check,
    parabolic,
)
from .elements import CartanVector
from .linalg import ExactSpan, intersection_dim
from .rootsys import (
    DynkinType,
    InvalidRoot,
    RootSystem,
    add,
    all_types,
    dominant_roots,
    format_root,
    in_span_of,
    is_positive,
    neg,
    root_system,
    support,
    sub,
)
from .scalars import GaussQ, I, Q, qstr


@dataclass
class LemmaReport:
    lemma: str
    algebra: str
    params: dict
    passed: bool
    checked: int = 0
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.counterexample is None:
            raise ValueError("a failing report needs a counterexample")

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "algebra": self.algebra,
            "params": self.params,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "details": self.details,
        }


def _theta_key(theta) -> list[int]:
    return sorted(int(t) for t in theta)


def _lie_of(x) -> LieAlgebra:
    return x if isinstance(x, LieAlgebra) else build_algebra(x)


# --- dominant roots ----------------------------------------------------------------

def check_dominant_support(rs: RootSystem) -> LemmaReport:
    """Every dominant root is supported on all simple roots."""
    full = frozenset(range(1, rs.rank + 1))
    doms = dominant_roots(rs)
    expected = 1 if rs.dynkin.simply_laced else 2
    details = {"dominant_roots": [format_root(m) for m in doms]}
    for mu in doms:
        if support(mu) != full:
            return LemmaReport("dominant_support", str(rs.dynkin), {}, False, len(doms),
                               {"mu": format_root(mu), "support": sorted(support(mu))}, details)
    if len(doms) != expected:
        return LemmaReport("dominant_support", str(rs.dynkin), {}, False, len(doms),
                           {"count": len(doms), "expected": expected}, details)
    return LemmaReport("dominant_support", str(rs.dynkin), {}, True, len(doms), None, details)


# --- orbit type -----------------------------------------------------------------------

class OrbitType(str, Enum):
    POINT = "Point"
    SPHERE = "Sphere"


@dataclass(frozen=True)
class OrbitTypeResult:
    kind: OrbitType
    codim: int  # dim g(beta) - dim(g(beta) cap p_theta)
    contains_p_beta: bool


def check_orbit_type(lie: LieAlgebra, theta, beta) -> OrbitTypeResult:
    """Isotropy codimension of p_theta inside the sl(2) copy g(beta)."""
    beta = lie.rs.require_root(beta, "beta")
    if not is_positive(beta):
        raise InvalidRoot(f"{list(beta)} is negative; the orbit check takes positive roots")
    g_b = g_alpha_subalgebra(lie, beta)
    p = parabolic(lie, theta)
    gb = [b.sparse() for b in g_b.basis]
    pb = [b.sparse() for b in p.basis]
    inter = intersection_dim(gb, pb)
    codim = g_b.dim - inter
    if codim not in (0, 1):
        raise AssertionError(f"unexpected codimension {codim}")
    # p_beta = span{H_beta, X_beta} must sit in g(beta) cap p_theta
    pspan = ExactSpan(pb)
    contains = all(pspan.contains(v) for v in gb[:2])
    return OrbitTypeResult(OrbitType.POINT if codim == 0 else OrbitType.SPHERE, codim, contains)


def orbit_type_report(lie: LieAlgebra, theta) -> LemmaReport:
    theta = frozenset(theta)
    n = 0
    for beta in lie.rs.positive_roots:
        res = check_orbit_type(lie, theta, beta)
        n += 1
        expect = OrbitType.POINT if in_span_of(beta, theta) else OrbitType.SPHERE
        if res.kind != expect or not res.contains_p_beta:
            return LemmaReport("orbit_type", str(lie.dynkin), {"theta": _theta_key(theta)}, False, n,
                               {"beta": format_root(beta), "kind": res.kind.value, "expected": expect.value,
                                "contains_p_beta": res.contains_p_beta})
    return LemmaReport("orbit_type", str(lie.dynkin), {"theta": _theta_key(theta)}, True, n)


# --- highest root centralizer --------------------------------------------------------

def check_highest_root_centralizer(lie: LieAlgebra) -> LemmaReport:
    """Roots orthogonal to the highest root mu neither add to nor subtract from it,
    the brackets [X_{+-mu}, X_beta] vanish, and z_{H_mu} normalises g(mu)."""
    rs = lie.rs
    mu = rs.highest_root
    name = str(lie.dynkin)
    orth = [b for b in rs.roots if rs.inner(b, mu) == 0]
    n = 0
    for beta in orth:
        for sign_mu in (mu, neg(mu)):
            n += 1
            arith = add(sign_mu, beta) not in rs.index and sub(sign_mu, beta) not in rs.index
            br = lie.basis_bracket(lie.root_index(sign_mu), lie.root_index(beta))
            if not arith or br:
                return LemmaReport("highest_root_centralizer", name, {"mu": format_root(mu)}, False, n,
                                   {"beta": format_root(beta), "root_arithmetic_ok": arith,
                                    "bracket_zero": not br})
    z = centralizer_in_h_decomp(lie, CartanVector.from_root(lie, mu))
    g_mu = g_alpha_subalgebra(lie, mu)
    span = ExactSpan(b.sparse() for b in g_mu.basis)
    for zb in z.basis:
        for gb in g_mu.basis:
            n += 1
            if not span.contains(zb.bracket(gb).sparse()):
                return LemmaReport("highest_root_centralizer", name, {"mu": format_root(mu)}, False, n,
                                   {"normalizer_fails": [repr(zb), repr(gb)]})
    return LemmaReport("highest_root_centralizer", name, {"mu": format_root(mu)}, True, n, None,
                       {"orthogonal_roots": len(orth), "centralizer_dim": z.dim})


# --- eigenspace positivity ------------------------------------------------------------

def check_eigenspace_positivity(lie: LieAlgebra, mu) -> LemmaReport:
    """mu(H_mu) = kappa(H_mu, H_mu) > 0 and every gamma with gamma(H_mu) > 0 is positive."""
    rs = lie.rs
    mu = rs.require_root(mu, "mu")
    if mu not in dominant_roots(rs):
        raise InvalidRoot(f"{list(mu)} is not dominant")
    name = str(lie.dynkin)
    params = {"mu": format_root(mu)}
    h = CartanVector.from_root(lie, mu)
    hx = h.element()
    val = h(mu)
    kap = lie.killing_form(hx.sparse(), hx.sparse())
    if val != kap or not (val.real > 0 and not val.imag):
        return LemmaReport("eigenspace_positivity", name, params, False, 1,
                           {"mu(H_mu)": str(val), "kappa(H_mu,H_mu)": str(kap)})
    n = 1
    for gamma in rs.roots:
        n += 1
        g = h(gamma)
        if g.real > 0 and not is_positive(gamma):
            return LemmaReport("eigenspace_positivity", name, params, False, n,
                               {"gamma": format_root(gamma), "gamma(H_mu)": str(g)})
    xm = lie.X(mu)
    if hx.bracket(xm) != xm * val:
        return LemmaReport("eigenspace_positivity", name, params, False, n + 1,
                           {"eigenvector_fails": format_root(mu)})
    return LemmaReport("eigenspace_positivity", name, params, True, n + 1, None, {"mu(H_mu)": qstr(val.real)})


# --- lambda systems ------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaSystem:
    """Values on the positive roots; zero is expected exactly on the Levi roots."""

    theta: frozenset
    values: dict  # positive root -> Q

    def domain(self, rs: RootSystem) -> list:
        return [a for a in rs.positive_roots if not in_span_of(a, self.theta)]

    def value(self, root) -> Q:
        return self.values.get(tuple(root), Q(0))

    def additivity_violations(self, rs: RootSystem) -> list:
        out = []
        for a, b in combinations(rs.positive_roots, 2):
            c = add(a, b)
            if c in rs.index and self.value(c) != self.value(a) + self.value(b):
                out.append((a, b, c))
        return out

    def levi_shift_violations(self, rs: RootSystem) -> list:
        out = []
        levi = [g for g in rs.roots if in_span_of(g, self.theta)]
        for a in rs.positive_roots:
            for g in levi:
                c = add(a, g)
                if c in rs.index and is_positive(c) and self.value(c) != self.value(a):
                    out.append((a, g, c))
        return out

    def positivity_violations(self, rs: RootSystem) -> list:
        return [a for a in self.domain(rs) if not self.value(a) > 0]

    def perturbed(self, root, delta) -> "LambdaSystem":
        vals = dict(self.values)
        vals[tuple(root)] = self.value(root) + Q(delta)
        return LambdaSystem(self.theta, vals)


def lambda_from_theta(rs: RootSystem, theta) -> LambdaSystem:
    """lambda_alpha = alpha(H_theta), with alpha_i(H_theta) = 0 on theta and 1 off it."""
    theta = frozenset(int(t) for t in theta)
    bad = [t for t in theta if not 1 <= t <= rs.rank]
    if bad:
        raise ValueError(f"simple-root indices {sorted(bad)} out of range 1..{rs.rank}")
    vals = {a: Q(sum(c for i, c in enumerate(a) if i + 1 not in theta)) for a in rs.positive_roots}
    return LambdaSystem(theta, vals)


# --- compact form and the two-form -------------------------------------------------

class CompactModel:
    """Real structure constants of the compact form in the basis

        i H_1, ..., i H_l, then (e_a - e_{-a}, i(e_a + e_{-a})) per positive root a.

    Brackets are computed in the complex algebra and converted back; the
    conversion keeps Gaussian-rational coefficients so that a corrupted table
    shows up as non-real output instead of an exception.
    """

    def __init__(self, lie: LieAlgebra):
        self.lie = lie
        rs = lie.rs
        self.rank = rs.rank
        self.pos = rs.positive_roots
        self.basis = [lie.H_simple(i + 1, I).sparse() for i in range(self.rank)]
        self.labels = [f"iH{i + 1}" for i in range(self.rank)]
        self.pair_of: dict[int, int] = {}
        self.root_of: dict[int, tuple] = {}
        self.k = {}
        for a in self.pos:
            A, S = compact_pair(lie, a)
            ia = len(self.basis)
            self.basis += [A.sparse(), S.sparse()]
            self.labels += [f"A{format_root(a)}", f"S{format_root(a)}"]
            self.pair_of[ia], self.pair_of[ia + 1] = ia + 1, ia
            self.root_of[ia] = self.root_of[ia + 1] = a
            self.k[a] = lie.k_alpha(a)
        self.index_of = {}
        for p, a in self.root_of.items():
            self.index_of.setdefault(a, p)

    def to_compact(self, x: dict) -> dict:
        lie = self.lie
        out = {}
        for i in range(self.rank):
            c = x.get(i)
            if c:
                out[i] = -I * c
        for a in self.pos:
            xp = x.get(lie.root_index(a), 0)
            xm = x.get(lie.root_index(neg(a)), 0)
            if xp or xm:
                k = self.k[a]
                p = self.index_of[a]
                ca = (xp - xm / k) / 2
                cs = (xp + xm / k) / (2 * I) if (xp or xm) else 0
                if ca:
                    out[p] = GaussQ.coerce(ca)
                if cs:
                    out[p + 1] = GaussQ.coerce(cs)
        return out

    @cached_property
    def table(self) -> dict:
        tab = {}
        n = len(self.basis)
        for p in range(n):
            for q in range(p + 1, n):
                v = self.to_compact(self.lie.bracket_sparse(self.basis[p], self.basis[q]))
                if v:
                    tab[(p, q)] = v
                    tab[(q, p)] = {r: -c for r, c in v.items()}
        return tab

    def bracket(self, p: int, q: int) -> dict:
        return self.table.get((p, q), {})

    def non_real(self) -> list:
        """Basis pairs whose bracket leaves the real span (empty for a sound table)."""
        return [pq for pq, v in self.table.items() if any(c.imag for c in v.values())]


_COMPACT: dict = {}


def compact_model(lie: LieAlgebra) -> CompactModel:
    key = id(lie)
    m = _COMPACT.get(key)
    if m is None or m.lie is not lie:
        m = _COMPACT[key] = CompactModel(lie)
    return m


@dataclass(frozen=True)
class TwoForm:
    """Block-diagonal form on m: Omega(A_a, S_a) = k_a * lambda_a, all else 0.

    ``k_a = kappa(e_a, e_{-a})`` accounts for the compact pair being built from
    the integral basis rather than a Killing-orthonormal one.
    """

    theta: frozenset
    m_basis: tuple  # compact-model indices
    labels: tuple
    blocks: dict  # compact index of A_a -> Omega(A_a, S_a)
    pair_of: dict = field(repr=False)

    def value(self, p: int, q: int):
        w = self.blocks.get(p)
        if w is not None and self.pair_of[p] == q:
            return w
        w = self.blocks.get(q)
        if w is not None and self.pair_of[q] == p:
            return -w
        return 0

    def matrix(self) -> list[list]:
        return [[self.value(p, q) for q in self.m_basis] for p in self.m_basis]

    def is_nondegenerate(self) -> bool:
        return all(self.blocks[p] != 0 for p in self.blocks)


def two_form(lie: LieAlgebra, theta, lam: LambdaSystem) -> TwoForm:
    cm = compact_model(lie)
    theta = frozenset(theta)
    m_idx = []
    blocks = {}
    for a in lie.rs.positive_roots:
        if in_span_of(a, theta):
            continue
        p = cm.index_of[a]
        m_idx += [p, p + 1]
        blocks[p] = cm.k[a] * lam.value(a)
    return TwoForm(theta, tuple(m_idx), tuple(cm.labels[p] for p in m_idx), blocks, cm.pair_of)


def check_omega(lie: LieAlgebra, theta, lam: LambdaSystem, compact: CompactModel | None = None) -> LemmaReport:
    """Isotropy invariance and cyclic closedness of Omega on m."""
    theta = frozenset(int(t) for t in theta)
    if frozenset(lam.theta) != theta:
        raise ValueError(f"lambda system is for theta={_theta_key(lam.theta)}, not {_theta_key(theta)}")
    cm = compact or compact_model(lie)
    omega = two_form(lie, theta, lam)
    name = str(lie.dynkin)
    params = {"theta": _theta_key(theta)}
    if lie is not cm.lie:
        raise ValueError("compact model belongs to another algebra")
    mset = set(omega.m_basis)
    pair = cm.pair_of

    def om_proj(x: dict, q: int):
        # Omega([.]_m, q) for a compact-coordinate vector x
        p = pair.get(q)
        if p is None or p not in mset or q not in mset:
            return 0
        c = x.get(p)
        return c * omega.value(p, q) if c else 0

    iso = list(range(cm.rank))
    for a in lie.rs.positive_roots:
        if in_span_of(a, theta):
            p = cm.index_of[a]
            iso += [p, p + 1]
    n = 0
    m_list = list(omega.m_basis)
    for z in iso:
        for x in m_list:
            zx = cm.bracket(z, x)
            for y in m_list:
                n += 1
                s = om_proj(zx, y) - om_proj(cm.bracket(z, y), x)
                if s:
                    return LemmaReport("omega", name, params, False, n,
                                       {"check": "invariance", "Z": cm.labels[z], "X": cm.labels[x],
                                        "Y": cm.labels[y], "value": str(s)})
    n_inv = n
    for x, y, z in combinations(m_list, 3):
        n += 1
        s = om_proj(cm.bracket(x, y), z) + om_proj(cm.bracket(y, z), x) + om_proj(cm.bracket(z, x), y)
        if s:
            return LemmaReport("omega", name, params, False, n,
                               {"check": "closedness", "triple": [cm.labels[x], cm.labels[y], cm.labels[z]],
                                "value": str(s)})
    return LemmaReport("omega", name, params, True, n, None,
                       {"dim_m": len(m_list), "invariance_cases": n_inv, "closedness_triples": n - n_inv,
                        "nondegenerate": omega.is_nondegenerate()})


def lambda_report(rs: RootSystem, lam: LambdaSystem) -> LemmaReport:
    params = {"theta": _theta_key(lam.theta)}
    v1 = lam.additivity_violations(rs)
    v2 = lam.levi_shift_violations(rs)
    v3 = lam.positivity_violations(rs)
    checked = len(rs.positive_roots)
    if v1 or v2 or v3:
        ce = {}
        if v1:
            ce["additivity"] = [format_root(r) for r in v1[0]]
        if v2:
            ce["levi_shift"] = [format_root(r) for r in v2[0]]
        if v3:
            ce["positivity"] = format_root(v3[0])
        return LemmaReport("lambda_conditions", str(rs.dynkin), params, False, checked, ce)
    return LemmaReport("lambda_conditions", str(rs.dynkin), params, True, checked, None,
                       {"values": {format_root(a): qstr(v) for a, v in lam.values.items()}})


# --- mutation support ----------------------------------------------------------------

def corrupted_algebra(lie: LieAlgebra, i: int, j: int, k: int, factor=-1) -> LieAlgebra:
    """Copy of ``lie`` with c[i][j][k] (and c[j][i][k]) multiplied by ``factor``."""
    table = {key: dict(v) for key, v in lie._table.items()}
    for a, b in ((i, j), (j, i)):
        entry = table.get((a, b))
        if entry is None or k not in entry:
            raise ValueError(f"no structure constant c[{a}][{b}][{k}] to corrupt")
        entry[k] = entry[k] * factor
    return LieAlgebra(lie.rs, table, lie.killing, lie.scales, lie.chevalley_table)


def lambda_mutations(rs: RootSystem, limit: int | None = None) -> list[tuple[LambdaSystem, tuple]]:
    """Theta = {} lambda systems with one value shifted, each breaking additivity.

    Returns (perturbed system, a root triple a + b = c where it breaks).
    """
    base = lambda_from_theta(rs, ())
    out = []
    for r in rs.positive_roots:
        pert = base.perturbed(r, 1)
        viol = pert.additivity_violations(rs)
        if viol:
            out.append((pert, viol[0]))
        if limit is not None and len(out) >= limit:
            break
    return out


# --- grid --------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    types: tuple[DynkinType, ...]
    theta: str = "all"  # "all", "none", or explicit "1+2"

    def thetas(self, rank: int) -> list[frozenset]:
        if self.theta == "all":
            idx = range(1, rank + 1)
            return [frozenset(c) for n in range(rank + 1) for c in combinations(idx, n)]
        if self.theta == "none":
            return [frozenset()]
        vals = frozenset(int(t) for t in self.theta.split("+") if t)
        return [vals] if all(1 <= t <= rank for t in vals) else []


def parse_grid(text: str) -> Grid:
    """``type=A..G,rank<=4,theta=all`` (also ``type=A+B``, ``rank=2..4``, ``theta=1+2``)."""
    families = "ABCDEFG"
    lo, hi = 1, 8
    theta = "all"
    for part in filter(None, (p.strip() for p in text.split(","))):
        m = re.fullmatch(r"(type|rank|theta)\s*(<=|=)\s*(.+)", part)
        if not m:
            raise ValueError(f"bad grid term {part!r}")
        key, op, val = m.group(1), m.group(2), m.group(3).strip()
        if key == "type":
            r = re.fullmatch(r"([A-Ga-g])\.\.([A-Ga-g])", val)
            if r:
                a, b = r.group(1).upper(), r.group(2).upper()
                families = "ABCDEFG"[ord(a) - 65: ord(b) - 64]
            elif re.fullmatch(r"[A-Ga-g](\+[A-Ga-g])*", val):
                families = "".join(sorted(set(val.upper().replace("+", ""))))
            else:
                raise ValueError(f"bad type range {val!r}")
        elif key == "rank":
            if op == "<=":
                hi = int(val)
            else:
                r = re.fullmatch(r"(\d+)(?:\.\.(\d+))?", val)
                if not r:
                    raise ValueError(f"bad rank {val!r}")
                lo = int(r.group(1))
                hi = int(r.group(2) or r.group(1))
        else:
            if val not in ("all", "none") and not re.fullmatch(r"\d+(\+\d+)*", val):
                raise ValueError(f"bad theta {val!r}")
            theta = val
    if not families:
        raise ValueError("empty type range")
    types = tuple(t for t in all_types(hi, families) if t.rank >= lo)
    return Grid(types, theta)


def run_all(target, grid: Grid | None = None, jacobi: bool = True) -> list[LemmaReport]:
    """Every check on one algebra (``target``) or a whole grid (``target=None``)."""
    if target is None:
        out = []
        for dt in grid.types:
            out.extend(run_all(dt, grid, jacobi))
        return out
    lie = _lie_of(target if not isinstance(target, RootSystem) else target.dynkin)
    rs = lie.rs
    grid = grid or Grid((rs.dynkin,))
    reports = []
    if jacobi:
        rep = jacobi_check(lie) if lie.dim <= 133 else jacobi_check(lie, samples=10**6)
        reports.append(LemmaReport(
            "jacobi", str(rs.dynkin), {"mode": rep.mode}, rep.passed, rep.triples_checked,
            None if rep.passed else {"triples": [list(t) for t in rep.violations],
                                     "antisymmetry": [list(p) for p in rep.antisymmetry_failures]}))
    reports.append(check_dominant_support(rs))
    reports.append(check_highest_root_centralizer(lie))
    for mu in dominant_roots(rs):
        reports.append(check_eigenspace_positivity(lie, mu))
    for theta in grid.thetas(rs.rank):
        reports.append(orbit_type_report(lie, theta))
        lam = lambda_from_theta(rs, theta)
        reports.append(lambda_report(rs, lam))
        reports.append(check_omega(lie, theta, lam))
    return reports


def summarize(reports: list[LemmaReport]) -> dict:
    out: dict[str, dict] = {}
    for r in reports:
        s = out.setdefault(r.lemma, {"reports": 0, "passed": 0, "failed": 0, "checked": 0})
        s["reports"] += 1
        s["checked"] += r.checked
        s["passed" if r.passed else "failed"] += 1
    return dict(sorted(out.items()))


__all__ = [
    "LemmaReport", "OrbitType", "OrbitTypeResult", "LambdaSystem", "TwoForm", "CompactModel", "Grid",
    "check_dominant_support", "check_orbit_type", "orbit_type_report", "check_highest_root_centralizer",
    "check_eigenspace_positivity", "lambda_from_theta", "lambda_report", "two_form", "check_omega",
    "compact_model", "corrupted_algebra", "lambda_mutations", "parse_grid", "run_all", "summarize",
    "root_system",
]
