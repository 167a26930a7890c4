import numpy as np
import pytest

from geoverify.errors import SpecError
from geoverify.harness import load_fixture, loads, run_suite, sample_points
from geoverify.harness.suites import applicable_suites, theorem_checks


def test_soliton_suite_passes_on_example2(example2):
    rep = run_suite(example2, "soliton")
    assert rep.overall
    assert rep["soliton: fitted-lambda"].max_residual <= 1e-8
    assert rep["soliton: fitted-mu"].max_residual <= 1e-8
    assert rep.values["soliton_type"] == "mixed"
    assert rep.points == 50


def test_sasakian_suite_fails_on_example2(example2):
    rep = run_suite(example2, "sasakian")
    assert not rep.overall
    check = rep["para-sasakian: nabla-xi-vs-eps-phi"]
    assert check.verdict == "FAIL" and len(check.failing_points) == rep.points
    assert check.max_abs_residual == pytest.approx(2.0, abs=1e-8)
    assert rep["para-sasakian: precondition"].passed


def test_missing_block():
    with pytest.raises(SpecError):
        run_suite(load_fixture("euclidean-r3"), "axioms")
    with pytest.raises(SpecError):
        run_suite(load_fixture("example1-r5-g1"), "soliton")
    with pytest.raises(SpecError):
        run_suite(load_fixture("example2-r3"), "nonsense")


def test_all_uses_applicable_suites():
    assert applicable_suites(load_fixture("euclidean-r3")) == ["tensors"]
    assert "gradient" in applicable_suites(load_fixture("example2-para-r3"))
    rep = run_suite(load_fixture("euclidean-r3"), "all")
    assert rep.overall and all(c.name.startswith("tensors:") for c in rep.checks)


def test_sampling_modes(example2):
    pts = sample_points(example2, 27, mode="grid")
    assert pts.shape == (27, 3)
    assert set(np.round(pts[:, 0], 12)) == {-1.0, 0.0, 1.0}
    # ceil(10^(1/3)) = 3 per axis
    assert sample_points(example2, 10, mode="grid").shape == (27, 3)
    a = sample_points(example2, 5, seed=1)
    np.testing.assert_array_equal(a, sample_points(example2, 5, seed=1))
    assert not np.array_equal(a, sample_points(example2, 5, seed=2))
    assert np.all(np.abs(a) <= 1)


def test_overrides(example2):
    rep = run_suite(example2, "tensors", points=7, seed=11)
    assert rep.points == 7 and rep.seed == 11
    assert all(len(c.points) == 7 for c in rep.checks)


def test_degenerate_point_recorded():
    text = """
[manifold]
name = cone
coordinates = [u, v]

[metric]
g = [[u, 0], [0, 1]]

[sampling]
mode = grid
count = 9
ranges = [[0, 1], [0, 1]]
"""
    rep = run_suite(loads(text), "tensors")
    check = rep["evaluation: metric-regular"]
    assert check.verdict == "FAIL" and len(check.failing_points) == 3
    assert not rep.overall


def test_gradient_suite_on_constructed_fixture(example2_para):
    rep = run_suite(example2_para, "gradient", points=10)
    assert rep.overall
    assert rep["gradient: hessian-equation"].verdict == "PASS"
    assert rep["gradient: norm-bounds"].hypothesis == "unmet"
    assert rep["laplacian: consistency"].verdict == "PASS"


def test_theorem_checks_seeded():
    a = theorem_checks(500, seed=3)
    b = theorem_checks(500, seed=3)
    assert [c.residuals for c in a] == [c.residuals for c in b]
    assert a.passed


def test_theorems_suite_without_spec():
    rep = run_suite(None, "theorems", trials=200, seed=1)
    assert rep.fixture == "none" and rep.points == 200 and rep.overall
    with pytest.raises(SpecError):
        run_suite(None, "tensors")


def test_example1_all_reports_sasakian_failure():
    # the bundled structures are almost paracontact metric but not para-Sasakian
    rep = run_suite(load_fixture("example1-r5-g2"), "all", points=10)
    assert rep["axioms: phi-squared"].passed and rep["compatibility: metric-phi"].passed
    assert not rep["para-sasakian: nabla-xi-vs-eps-phi"].passed
    assert rep.values["causal_character"] == "spacelike"
