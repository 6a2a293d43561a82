"""Smoke tests for the Python surface of the C++ core."""

import math

import pytest

try:
    import permkit as pk
except ImportError:  # build-tree runs import the raw extension module
    import _permkit as pk

IDENTITY3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
BOTH = [[1, 0.5, 0.2], [0.5, 1, 0.4], [0.2, 0.4, 1]]
REJECTED = [[1, 0.9, 0.1], [0.1, 1, 0.9], [0.9, 0.1, 1]]


def test_determinant_values():
    assert pk.det(IDENTITY3) == pytest.approx(1.0)
    assert pk.det(BOTH) == pytest.approx(0.63)


def test_classify_verdicts():
    assert pk.classify(IDENTITY3)["verdict"] == "Both"
    assert pk.classify(BOTH)["verdict"] == "Both"
    rep = pk.classify(REJECTED)
    assert rep["verdict"] == "NotKernel"
    assert rep["failure"]


def test_class_flags_and_witness():
    assert pk.is_class1(BOTH) and pk.is_class2(BOTH)
    assert not pk.is_class1(REJECTED) and not pk.is_class2(REJECTED)
    w = pk.classify(BOTH)["class2"]
    ok, diagnosis = pk.is_mmatrix(w["mmatrix"])
    assert ok and diagnosis == ""


def test_necessary_and_sweep_consistency():
    assert pk.check_necessary(BOTH)["overall"]
    assert pk.vere_jones_sweep(BOTH)["verdict"] == "AllNonneg"
    assert pk.vere_jones_sweep(REJECTED)["verdict"] != "AllNonneg"


def test_series_certificate():
    cert = pk.log_det_series([[1, 0.7], [0.7, 1]], degree=4)
    assert cert["verdict"] == "Nonneg"
    assert cert["coefficients"][(1, 1)] == pytest.approx(0.49)
    assert pk.certify_all_beta(BOTH)["certified"]


def test_eigenvalues_sorted():
    eigs = pk.eigenvalues([[3, 0, 0], [0, 1, 0], [0, 0, 2]])
    assert [e.real for e in eigs] == pytest.approx([3.0, 2.0, 1.0])
    assert pk.spectral_radius([[0, 1], [1, 0]]) == pytest.approx(1.0)


def test_metric_table():
    table = pk.metric_table(IDENTITY3)
    assert table["d"][0][1] == pytest.approx(math.sqrt(2.0))
    assert table["worst_triangle_slack"] == pytest.approx(math.sqrt(2.0))
    assert pk.symmetrized_psd_check(BOTH)


def test_sampler_reproducible_and_calibrated():
    a = pk.sample_moments(IDENTITY3, beta=0.5, n=20000, seed=7)
    b = pk.sample_moments(IDENTITY3, beta=0.5, n=20000, seed=7)
    assert a["empirical_mean"] == b["empirical_mean"]
    assert all(abs(z) < 4.0 for z in a["mean_z"])
    est = pk.empirical_laplace(IDENTITY3, beta=0.5, n=20000, seed=7, alpha=[3, 0, 0])
    assert est["analytic"] == pytest.approx(0.5)
    assert abs(est["estimate"] - est["analytic"]) < 4.0 * est["std_error"]


def test_reduction():
    reduced = pk.reduce_kernel(IDENTITY3, fixed={2: 1.0}, remaining=[0, 1])
    assert reduced == [[1, 0], [0, 1]]


def test_errors_raise():
    with pytest.raises(Exception):
        pk.sample_moments(IDENTITY3, beta=0.3, n=10000, seed=1)  # bad exponent
    with pytest.raises(Exception):
        pk.inverse([[1, 1], [1, 1]])  # singular
