import json

import pytest

from liecert.chevalley import build_algebra, jacobi_check
from liecert.lemma_lab import (
    LemmaReport,
    OrbitType,
    check_dominant_support,
    check_eigenspace_positivity,
    check_highest_root_centralizer,
    check_omega,
    check_orbit_type,
    compact_model,
    corrupted_algebra,
    lambda_from_theta,
    lambda_mutations,
    lambda_report,
    parse_grid,
    run_all,
    summarize,
    two_form,
)
from liecert.rootsys import InvalidRoot, all_types, root_system
from liecert.scalars import Q


# --- dominant support ------------------------------------------------------------

@pytest.mark.parametrize("name", ["A2", "G2", "B4", "E8"])
def test_dominant_support_passes(name):
    rep = check_dominant_support(root_system(name))
    assert rep.passed and rep.counterexample is None


def test_dominant_support_records_roots():
    rep = check_dominant_support(root_system("A2"))
    assert rep.details["dominant_roots"] == ["[1,1]"]
    assert len(check_dominant_support(root_system("G2")).details["dominant_roots"]) == 2


def test_failing_report_requires_counterexample():
    with pytest.raises(ValueError):
        LemmaReport("x", "A1", {}, False)


# --- orbit type ---------------------------------------------------------------------

def test_orbit_type_a2_examples():
    lie = build_algebra("A2")
    assert check_orbit_type(lie, {1}, (1, 0)).kind == OrbitType.POINT
    assert check_orbit_type(lie, {1}, (0, 1)).kind == OrbitType.SPHERE
    assert check_orbit_type(lie, {1}, (1, 1)).kind == OrbitType.SPHERE


@pytest.mark.parametrize("name", ["A3", "B2", "G2"])
def test_orbit_type_extreme_thetas(name):
    lie = build_algebra(name)
    full = set(range(1, lie.rank + 1))
    for beta in lie.rs.positive_roots:
        p = check_orbit_type(lie, full, beta)
        s = check_orbit_type(lie, set(), beta)
        assert (p.kind, p.codim) == (OrbitType.POINT, 0)
        assert (s.kind, s.codim) == (OrbitType.SPHERE, 1)
        assert p.contains_p_beta and s.contains_p_beta


def test_orbit_type_rejects_negative_and_non_roots():
    lie = build_algebra("A2")
    with pytest.raises(InvalidRoot):
        check_orbit_type(lie, {1}, (-1, 0))
    with pytest.raises(InvalidRoot):
        check_orbit_type(lie, {1}, (2, 0))


# --- highest root centralizer ---------------------------------------------------------

def test_centralizer_a2_vacuous():
    rep = check_highest_root_centralizer(build_algebra("A2"))
    assert rep.passed and rep.details["orthogonal_roots"] == 0
    assert rep.details["centralizer_dim"] == 2


def test_centralizer_a3_checks_middle_root():
    lie = build_algebra("A3")
    rep = check_highest_root_centralizer(lie)
    assert rep.passed and rep.details["orthogonal_roots"] == 2
    mu = lie.rs.highest_root
    orth = [b for b in lie.rs.roots if lie.rs.inner(b, mu) == 0]
    assert sorted(orth) == [(0, -1, 0), (0, 1, 0)]


@pytest.mark.parametrize("name", ["B3", "C3", "D4", "G2", "F4"])
def test_centralizer_passes(name):
    assert check_highest_root_centralizer(build_algebra(name)).passed


def test_centralizer_detects_corrupted_bracket():
    lie = build_algebra("A3")
    mu = lie.rs.highest_root
    i, j = lie.root_index(mu), lie.root_index((0, 1, 0))
    # inject a spurious nonzero [X_mu, X_{a2}] into a root space
    table = {key: dict(v) for key, v in lie._table.items()}
    table[(i, j)] = {0: Q(1)}
    table[(j, i)] = {0: Q(-1)}
    bad = type(lie)(lie.rs, table, lie.killing, lie.scales, lie.chevalley_table)
    rep = check_highest_root_centralizer(bad)
    assert not rep.passed and rep.counterexample["bracket_zero"] is False


# --- eigenspace positivity ------------------------------------------------------------

def test_eigenspace_positivity_sl2_value():
    rep = check_eigenspace_positivity(build_algebra("A1"), (1,))
    assert rep.passed and rep.details["mu(H_mu)"] == "1/2"


def test_eigenspace_positivity_a2_and_f4():
    assert check_eigenspace_positivity(build_algebra("A2"), (1, 1)).passed
    lie = build_algebra("F4")
    from liecert.rootsys import dominant_roots

    for mu in dominant_roots(lie.rs):
        assert check_eigenspace_positivity(lie, mu).passed


def test_eigenspace_positivity_rejects_non_dominant():
    with pytest.raises(InvalidRoot):
        check_eigenspace_positivity(build_algebra("A2"), (1, 0))


# --- lambda systems -------------------------------------------------------------------

def test_lambda_a2_empty_theta():
    lam = lambda_from_theta(root_system("A2"), ())
    assert lam.values == {(1, 0): 1, (0, 1): 1, (1, 1): 2}


def test_lambda_a2_theta_two():
    rs = root_system("A2")
    lam = lambda_from_theta(rs, {2})
    assert lam.values == {(1, 0): 1, (0, 1): 0, (1, 1): 1}
    assert lam.domain(rs) == [(1, 0), (1, 1)]
    assert lambda_report(rs, lam).passed


def test_lambda_full_theta_has_empty_domain():
    rs = root_system("B3")
    assert lambda_from_theta(rs, {1, 2, 3}).domain(rs) == []


def test_lambda_rejects_bad_theta():
    with pytest.raises(ValueError):
        lambda_from_theta(root_system("A2"), {3})


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "G2", "F4"])
def test_lambda_conditions_hold_for_every_theta(name):
    rs = root_system(name)
    for theta in parse_grid(f"type={name[0]},rank={rs.rank},theta=all").thetas(rs.rank):
        lam = lambda_from_theta(rs, theta)
        assert lam.additivity_violations(rs) == []
        assert lam.levi_shift_violations(rs) == []
        assert lam.positivity_violations(rs) == []


def test_lambda_report_flags_perturbation():
    rs = root_system("A2")
    lam = lambda_from_theta(rs, ()).perturbed((1, 1), 1)
    rep = lambda_report(rs, lam)
    assert not rep.passed and rep.counterexample["additivity"] == ["[1,0]", "[0,1]", "[1,1]"]


# --- omega ------------------------------------------------------------------------

def test_omega_sl2_closedness_vacuous():
    lie = build_algebra("A1")
    rep = check_omega(lie, (), lambda_from_theta(lie.rs, ()))
    assert rep.passed and rep.details["dim_m"] == 2 and rep.details["closedness_triples"] == 0


def test_omega_a2_passes():
    lie = build_algebra("A2")
    rep = check_omega(lie, (), lambda_from_theta(lie.rs, ()))
    assert rep.passed and rep.details["nondegenerate"]
    assert rep.details["closedness_triples"] == 20


def test_omega_a2_perturbed_fails_closedness():
    lie = build_algebra("A2")
    lam = lambda_from_theta(lie.rs, ()).perturbed((1, 1), 1)
    assert lam.value((1, 1)) == 3
    rep = check_omega(lie, (), lam)
    assert not rep.passed and rep.counterexample["check"] == "closedness"
    assert len(rep.counterexample["triple"]) == 3


def test_omega_rejects_theta_mismatch():
    lie = build_algebra("A2")
    with pytest.raises(ValueError):
        check_omega(lie, {1}, lambda_from_theta(lie.rs, ()))


def test_omega_invariance_failure_from_levi_shift():
    lie = build_algebra("A2")
    # lambda not constant along the Levi direction alpha_1
    lam = lambda_from_theta(lie.rs, {1}).perturbed((1, 1), 1)
    rep = check_omega(lie, {1}, lam)
    assert not rep.passed and rep.counterexample["check"] == "invariance"


def test_two_form_block_structure():
    lie = build_algebra("B2")
    lam = lambda_from_theta(lie.rs, ())
    om = two_form(lie, (), lam)
    mat = om.matrix()
    n = len(mat)
    assert n == 2 * len(lie.rs.positive_roots)
    for p in range(n):
        for q in range(n):
            assert mat[p][q] == -mat[q][p]
            if q != p + 1 - 2 * (p % 2):
                assert mat[p][q] == 0
    assert om.is_nondegenerate()


def test_compact_model_is_real_form():
    cm = compact_model(build_algebra("A2"))
    assert cm.non_real() == []


@pytest.mark.parametrize("name", ["A2", "B3", "G2"])
def test_every_mutation_is_detected(name):
    lie = build_algebra(name)
    muts = lambda_mutations(lie.rs)
    assert muts
    for lam, triple in muts:
        assert tuple(triple[0][k] + triple[1][k] for k in range(lie.rank)) == triple[2]
        rep = check_omega(lie, (), lam)
        assert not rep.passed and rep.counterexample["check"] == "closedness"


def test_corrupted_constants_break_jacobi_and_omega():
    lie = build_algebra("A2")
    i, j = lie.root_index((1, 0)), lie.root_index((0, 1))
    k = lie.root_index((1, 1))
    bad = corrupted_algebra(lie, i, j, k, factor=2)
    assert not jacobi_check(bad).passed
    rep = check_omega(bad, (), lambda_from_theta(bad.rs, ()))
    assert not rep.passed


# --- grids and batches --------------------------------------------------------------

def test_parse_grid_default_syntax():
    g = parse_grid("type=A..G,rank<=4,theta=all")
    assert [str(t) for t in g.types] == [str(t) for t in all_types(4)]
    assert len(g.thetas(3)) == 8


def test_parse_grid_variants():
    g = parse_grid("type=B+A,rank=2..3,theta=1+2")
    assert [str(t) for t in g.types] == ["A2", "A3", "B2", "B3"]
    assert g.thetas(2) == [frozenset({1, 2})]
    assert parse_grid("type=A,rank<=2,theta=none").thetas(2) == [frozenset()]


@pytest.mark.parametrize("text", ["type=A..Z", "rank>=3", "theta=x", "color=red", "type=G..A"])
def test_parse_grid_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_grid(text)


@pytest.mark.parametrize("name", ["A2", "B3"])
def test_run_all_full_grid(name):
    reports = run_all(name)
    assert reports and all(r.passed for r in reports)
    lemmas = {r.lemma for r in reports}
    assert lemmas == {"jacobi", "dominant_support", "highest_root_centralizer", "eigenspace_positivity",
                      "orbit_type", "lambda_conditions", "omega"}


def test_run_all_is_deterministic():
    a = [json.dumps(r.to_json(), sort_keys=False) for r in run_all("G2")]
    b = [json.dumps(r.to_json(), sort_keys=False) for r in run_all("G2")]
    assert a == b


def test_run_all_collects_failures():
    lie = build_algebra("A2")
    i, j = lie.root_index((1, 0)), lie.root_index((0, 1))
    bad = corrupted_algebra(lie, i, j, lie.root_index((1, 1)), factor=-1)
    reports = run_all(bad)
    failed = {r.lemma for r in reports if not r.passed}
    assert {"jacobi", "omega"} <= failed
    assert all(r.counterexample for r in reports if not r.passed)


def test_summarize_counts():
    s = summarize(run_all("A2"))
    assert s["orbit_type"]["reports"] == 4 and s["orbit_type"]["failed"] == 0
    assert all(v["checked"] > 0 for v in s.values())
