import random
from pathlib import Path

import numpy as np
import pytest

from liecert import kernels
from liecert.chevalley import (
    ClosureError,
    Subalgebra,
    ad_matrix,
    build_algebra,
    centralizer_in_h_decomp,
    chevalley_constants,
    compact_form_basis,
    compact_generators,
    compact_pair,
    dual_coxeter_number,
    dump_constants,
    g_alpha_subalgebra,
    jacobi_check,
    lower_central_terminates,
    mutated_table,
    n_minus_of_H,
    parabolic,
    parse_dump,
    random_exact_element,
    weyl_automorphism,
)
from liecert.elements import CartanVector
from liecert.linalg import ExactSpan
from liecert.rootsys import InvalidRoot, add, all_types, neg, root_system
from liecert.scalars import GaussQ, I, Q, Tolerance

from _oracles import classical_dim

TYPES_4 = [str(t) for t in all_types(4)]
GOLDEN = Path(__file__).parent / "golden"


def _h(lie, coeffs):
    return CartanVector.of(lie, [GaussQ.coerce(c) for c in coeffs])


# --- construction -----------------------------------------------------------------

@pytest.mark.parametrize("name", [str(t) for t in all_types(8)])
def test_dimension_is_classical(name):
    assert build_algebra(name).dim == classical_dim(name)


def test_sl2_killing_normalisation():
    lie = build_algebra("A1")
    h = lie.H((1,))
    assert lie.killing_form(h.sparse(), h.sparse()) == Q(1, 2)
    assert CartanVector.from_root(lie, (1,))((1,)) == Q(1, 2)


def test_a2_bracket_of_simple_roots_nonzero():
    lie = build_algebra("A2")
    assert lie.X((1, 0)).bracket(lie.X((0, 1))).sparse().keys() == {lie.root_index((1, 1))}


def test_g2_dimension():
    assert build_algebra("G2").dim == 14


@pytest.mark.parametrize("name", TYPES_4)
def test_weyl_basis_normalisation(name):
    lie = build_algebra(name)
    rs = lie.rs
    for a in rs.positive_roots:
        p, m = lie.root_index(a), lie.root_index(neg(a))
        assert lie.killing[(p, m)] == 1 and lie.killing[(m, p)] == 1
        assert lie.basis_bracket(p, m) == lie.H(a).sparse()
        ha = CartanVector.from_root(lie, a).element()
        for i in range(lie.rank):
            e = {i: Q(1)}
            # kappa(H_alpha, H_i) = alpha(H_i)
            assert lie.killing_form(ha.sparse(), e) == lie.root_values[rs.index[a]][i]


@pytest.mark.parametrize("name", TYPES_4)
def test_root_space_orthogonality(name):
    lie = build_algebra(name)
    for (i, j), v in lie.killing.items():
        ri, rj = lie.root_of(i), lie.root_of(j)
        if ri is None or rj is None:
            assert ri is None and rj is None
        else:
            assert add(ri, rj) == tuple(0 for _ in ri)


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2", "A3"])
def test_killing_form_is_trace_form(name):
    lie = build_algebra(name)
    ads = [ad_matrix(lie, lie.element({k: GaussQ(1)})) for k in range(lie.dim)]
    for i in range(lie.dim):
        for j in range(lie.dim):
            tr = (ads[i] * ads[j].T).sum()
            assert tr == lie.killing.get((i, j), 0)


@pytest.mark.parametrize("name", [str(t) for t in all_types(8)])
def test_killing_is_normalised_form_over_twice_dual_coxeter(name):
    lie = build_algebra(name)
    assert lie.kappa_factor == Q(1, 2 * dual_coxeter_number(lie.dynkin))


@pytest.mark.parametrize("name", TYPES_4)
def test_structure_constants_real_and_supported_on_root_sums(name):
    lie = build_algebra(name)
    rs = lie.rs
    for a in rs.roots:
        for b in rs.roots:
            if a == neg(b):
                continue
            br = lie.basis_bracket(lie.root_index(a), lie.root_index(b))
            s = add(a, b)
            if s in rs.index:
                assert set(br) == {lie.root_index(s)}
            else:
                assert br == {}


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "G2", "F4"])
def test_chevalley_integers(name):
    rs = root_system(name)
    n = chevalley_constants(rs)
    for (r, s), v in n.items():
        p = 0
        cur = s
        while True:
            cur = tuple(y - x for x, y in zip(r, cur))
            if cur not in rs.index:
                break
            p += 1
        assert abs(v) == p + 1
        assert n[(neg(r), neg(s))] == -v
        assert n[(s, r)] == -v


# --- jacobi ----------------------------------------------------------------------

@pytest.mark.parametrize("name", TYPES_4)
def test_jacobi_exhaustive(name):
    rep = jacobi_check(build_algebra(name))
    assert rep.passed and rep.mode == "exhaustive"


def test_jacobi_sampled_e7():
    rep = jacobi_check(build_algebra("E7"), samples=20000, seed=3)
    assert rep.passed and rep.triples_checked == 20000


def test_sign_mutation_breaks_jacobi():
    lie = build_algebra("A2")
    i, j, k = lie.root_index((1, 0)), lie.root_index((0, 1)), lie.root_index((1, 1))
    rep = jacobi_check(lie, table=mutated_table(lie, i, j, k))
    assert not rep.passed and rep.violation_count > 0


def test_antisymmetry_mutation_detected():
    lie = build_algebra("A2")
    t = lie.integer_table
    vals = t.vals.copy()
    vals[0] += 1
    from liecert.chevalley import IntegerTable

    rep = jacobi_check(lie, table=IntegerTable(t.dim, t.denominator, t.offsets, t.cols, vals))
    assert rep.antisymmetry_failures


# --- adjoint -----------------------------------------------------------------------

def test_ad_of_zero():
    lie = build_algebra("A2")
    m = ad_matrix(lie, lie.element())
    assert all(v == 0 for v in m.flat)


def test_ad_h_eigenvalues_sl2():
    lie = build_algebra("A1")
    m = ad_matrix(lie, lie.H((1,)))
    assert sorted(m[k, k].real for k in range(3)) == [Q(-1, 2), 0, Q(1, 2)]
    assert all(m[i, j] == 0 for i in range(3) for j in range(3) if i != j)


def test_ad_root_vector_nilpotent_sl2():
    lie = build_algebra("A1")
    m = ad_matrix(lie, lie.X((1,)))
    m3 = m @ m @ m
    assert all(v == 0 for v in m3.flat)


def test_ad_is_linear_and_numeric_mode_matches():
    lie = build_algebra("B2")
    rng = random.Random(5)
    x, y = random_exact_element(lie, rng), random_exact_element(lie, rng)
    lhs = ad_matrix(lie, x + y * 3)
    rhs = ad_matrix(lie, x) + ad_matrix(lie, y) * 3
    assert (lhs == rhs).all()
    num = ad_matrix(lie, x.numeric(Tolerance(1e-9)))
    assert np.allclose(num, np.vectorize(complex)(ad_matrix(lie, x)))


def test_ad_rejects_foreign_element():
    from liecert.elements import ElementError

    with pytest.raises(ElementError):
        ad_matrix(build_algebra("A2"), build_algebra("A1").X((1,)))


# --- compact generators ------------------------------------------------------------

def test_compact_generators_sl2_bracket():
    lie = build_algebra("A1")
    a, s = compact_generators(lie, (1,))
    assert a.bracket(s) == lie.H((1,), 2 * I)


def test_compact_generators_a2_cartan_action():
    lie = build_algebra("A2")
    H = _h(lie, [3, -1])  # in h_R
    for alpha in lie.rs.positive_roots:
        a, s = compact_generators(lie, alpha)
        assert (H * I).element().bracket(a) == s * H(alpha)


def test_compact_generators_coordinates():
    lie = build_algebra("A2")
    a, _ = compact_generators(lie, (1, 0))
    assert sorted(c.real for c in a.sparse().values()) == [-1, 1]
    assert len(a.sparse()) == 2


def test_compact_generators_reject_negative_roots():
    with pytest.raises(InvalidRoot):
        compact_generators(build_algebra("A2"), (-1, 0))


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2", "B3"])
def test_compact_pair_span_is_a_real_subalgebra(name):
    lie = build_algebra(name)
    basis = [b.sparse() for b in compact_form_basis(lie)]
    # real coordinates of each basis vector, stacked as real 2*dim vectors
    def realify(v):
        out = {}
        for k, c in v.items():
            if c.real:
                out[2 * k] = c.real
            if c.imag:
                out[2 * k + 1] = c.imag
        return out

    span = ExactSpan(realify(v) for v in basis)
    assert span.dim == lie.dim
    for p in range(len(basis)):
        for q in range(p + 1, len(basis)):
            assert span.contains(realify(lie.bracket_sparse(basis[p], basis[q])))


def test_literal_generators_real_span_not_closed_in_sl3():
    lie = build_algebra("A2")
    basis = [lie.H_simple(i + 1, I).sparse() for i in range(2)]
    for a in lie.rs.positive_roots:
        basis += [g.sparse() for g in compact_generators(lie, a)]

    def realify(v):
        out = {}
        for k, c in v.items():
            if c.real:
                out[2 * k] = c.real
            if c.imag:
                out[2 * k + 1] = c.imag
        return out

    span = ExactSpan(realify(v) for v in basis)
    escapes = [
        (p, q) for p in range(len(basis)) for q in range(p + 1, len(basis))
        if not span.contains(realify(lie.bracket_sparse(basis[p], basis[q])))
    ]
    assert escapes  # the k_alpha factors differ across roots
    _ = compact_pair


# --- subalgebras -------------------------------------------------------------------

def test_g_alpha_dimension_and_relations():
    lie = build_algebra("A2")
    g = g_alpha_subalgebra(lie, (1, 0))
    assert g.dim == 3
    h, x, y = g.basis
    kl = lie.kappa_inner((1, 0), (1, 0))
    assert h.bracket(x) == x * kl
    assert h.bracket(y) == y * (-kl)
    assert x.bracket(y) == h


def test_g_alpha_closure_f4_all_roots():
    lie = build_algebra("F4")
    for a in lie.rs.roots:
        assert g_alpha_subalgebra(lie, a).dim == 3


def test_parabolic_examples():
    lie = build_algebra("A2")
    assert parabolic(lie, ()).dim == lie.rank + len(lie.rs.positive_roots)
    assert parabolic(lie, (1, 2)).dim == lie.dim
    assert parabolic(lie, (1,)).dim == 6
    with pytest.raises(ValueError):
        parabolic(lie, (3,))


@pytest.mark.parametrize("name", ["B3", "C3", "G2", "F4"])
def test_every_parabolic_is_closed(name):
    from itertools import combinations

    lie = build_algebra(name)
    for n in range(lie.rank + 1):
        for theta in combinations(range(1, lie.rank + 1), n):
            parabolic(lie, theta)


def test_subalgebra_rejects_non_closed_basis():
    lie = build_algebra("A2")
    with pytest.raises(ClosureError):
        Subalgebra(lie, (lie.X((1, 0)), lie.X((0, 1))), "custom")


def test_centralizer_examples():
    a2 = build_algebra("A2")
    assert centralizer_in_h_decomp(a2, CartanVector.from_root(a2, (1, 1))).dim == 2
    a3 = build_algebra("A3")
    z = centralizer_in_h_decomp(a3, CartanVector.from_root(a3, a3.rs.highest_root))
    assert z.dim == 5
    assert a3.root_index((0, 1, 0)) in z.coordinate_support
    assert centralizer_in_h_decomp(a3, _h(a3, [0, 0, 0])).dim == a3.dim


def test_centralizer_numeric_ambiguity_flagged():
    lie = build_algebra("A2")
    H = CartanVector(lie, (1.0, -1.0 + 1e-12), Tolerance(1e-9))
    z = centralizer_in_h_decomp(lie, H)
    assert z.flags and any("LOW_CONFIDENCE" in f or "BELOW_TOLERANCE" in f for f in z.flags)


def test_n_minus_examples():
    lie = build_algebra("A2")
    rho = _h(lie, [1, 1]) + CartanVector.from_root(lie, (1, 1))
    n = n_minus_of_H(lie, rho)
    assert n.coordinate_support == {lie.root_index(neg(a)) for a in lie.rs.positive_roots}
    assert n_minus_of_H(lie, _h(lie, [0, 0])).dim == 0
    h1 = CartanVector.from_root(lie, (1, 0))
    n1 = n_minus_of_H(lie, h1)
    expect = {lie.root_index(g) for g in lie.rs.roots if lie.rs.inner(g, (1, 0)) < 0}
    assert n1.coordinate_support == expect
    assert {lie.root_of(k) for k in expect} == {(-1, 0), (-1, -1), (0, 1)}
    assert lower_central_terminates(n1) and lower_central_terminates(n)


def test_n_minus_rejects_complex_h():
    lie = build_algebra("A2")
    with pytest.raises(ValueError, match="not real"):
        n_minus_of_H(lie, _h(lie, [I, 0]))


# --- weyl automorphisms ------------------------------------------------------------

@pytest.mark.parametrize("name,word", [("A2", (1,)), ("B2", (2, 1)), ("G2", (1, 2, 1)), ("B3", (3, 2, 1, 3))])
def test_weyl_automorphism_permutes_root_vectors_and_preserves_brackets(name, word):
    from liecert.rootsys import weyl_element

    lie = build_algebra(name)
    phi = weyl_automorphism(lie, word)
    w = weyl_element(lie.rs, word)
    for a in lie.rs.roots:
        img = phi(lie.X(a)).sparse()
        assert set(img) == {lie.root_index(w.apply(a))}
        # +-1 on the integral basis e_alpha = X_alpha / scale
        src, dst = lie.root_index(a), lie.root_index(w.apply(a))
        assert abs(next(iter(img.values())).real) == lie.scales[src] / lie.scales[dst]
        assert phi(lie.H(a)) == lie.H(w.apply(a))
    rng = random.Random(11)
    for _ in range(20):
        x, y = random_exact_element(lie, rng), random_exact_element(lie, rng)
        assert phi(x.bracket(y)) == phi(x).bracket(phi(y))


# --- dump format --------------------------------------------------------------------

@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
def test_dump_matches_golden_file(name):
    text = dump_constants(build_algebra(name))
    golden = (GOLDEN / f"{name}.dump").read_text()
    assert text == golden


@pytest.mark.parametrize("name", ["A2", "G2", "C3"])
def test_dump_round_trip(name):
    lie = build_algebra(name)
    parsed = parse_dump(dump_constants(lie))
    assert parsed == {(i, j, k): GaussQ(c) for i, j, k, c in lie.iter_structure()}


def test_dump_manifest_lists_every_basis_vector():
    lie = build_algebra("B2")
    lines = [l for l in dump_constants(lie).splitlines() if l.startswith("# ") and l[2].isdigit()]
    assert len(lines) == lie.dim


def test_kernel_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
