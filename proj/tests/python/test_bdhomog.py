import math

import pytest

import bdhomog

E1E1 = [[1.0, 0.0], [0.0, 0.0]]


def test_library_pairs_pass_validator():
    for name in bdhomog.library_names():
        rep = bdhomog.check_integrand(name, n_random=100)
        assert rep["all_pass"], (name, rep["failed"])


def test_quadratic_is_rejected_by_f2():
    rep = bdhomog.check_integrand("quadratic_counterexample", n_random=100)
    assert not rep["all_pass"]
    f2 = next(c for c in rep["conditions"] if c["name"] == "f2")
    assert not f2["pass"]
    assert "|A|=2.000000" in f2["first_failure"]


def test_jensen_record_is_exact():
    rec = bdhomog.estimate_f_lim("homogeneous_norm", A=E1E1, r=[1, 2, 4])
    assert rec["r_values"] == [1, 2, 4]
    for v in rec["normalized_values"]:
        assert abs(v - 1.0) <= 1e-9


def test_surface_record_symmetry():
    nu = [1 / math.sqrt(2), 1 / math.sqrt(2)]
    a = bdhomog.estimate_g_lim("laminate", zeta=[1.0, 0.0], nu=nu, r=[1, 2, 4])
    b = bdhomog.estimate_g_lim("laminate", zeta=[-1.0, 0.0], nu=[-x for x in nu], r=[1, 2, 4])
    assert a["normalized_values"] == b["normalized_values"]


def test_scaling_identity():
    rep = bdhomog.check_scaling_identity("checkerboard", A=E1E1, eps=0.5)
    assert rep["pass"]
    assert rep["relative_gap"] <= 1e-6


def test_oracle_1d():
    for p in bdhomog.oracle_profile_names():
        rep = bdhomog.validate_lattice_against_oracle(p, h=[0.125, 0.0625])
        assert rep["pass"], p
    assert bdhomog.exact_cell_value_1d("laminate", 1.0) == pytest.approx(1.0)


def test_subadditive_triples():
    out = bdhomog.subadditive_triples(7, n=3)
    assert len(out) == 3
    assert all(t["pass"] for t in out)


def test_bad_arguments_raise():
    with pytest.raises(ValueError):
        bdhomog.estimate_f_lim("homogeneous_norm", A=[[1.0, 2.0], [0.0, 1.0]], r=[1, 2, 4])
    with pytest.raises(ValueError):
        bdhomog.check_integrand("no_such_pair")
