import numpy as np
import pytest
from conftest import metric

from geoverify.checks import MET, UNMET
from geoverify.errors import InconsistentEpsilon, LightlikeXi, PreconditionUnmet
from geoverify.harness import load_fixture
from geoverify.structures import (
    ParacontactStructure,
    check_axioms,
    check_compatibility,
    check_curvature_identities,
    check_para_sasakian,
    classify_causal_character,
    constant_structure,
    para_sasakian_holds,
)

P = np.array([0.2, -0.5, 0.4])


@pytest.mark.parametrize("name", ["example2-r3", "example2-para-r3", "example1-r5-g1", "example1-r5-g2"])
def test_bundled_structures_are_almost_paracontact(name):
    spec = load_fixture(name)
    p = np.linspace(-0.6, 0.7, spec.dimension)
    assert check_axioms(spec.structure, p).passed
    assert check_compatibility(spec.metric, spec.structure, p).passed


def test_example2_not_para_sasakian(example2):
    rep = check_para_sasakian(example2.metric, example2.structure, P)
    check = rep["nabla-xi-vs-eps-phi"]
    assert not check.passed and check.verdict == "FAIL"
    # nabla xi = phi while eps = -1, so nabla xi - eps phi = 2 phi; |2 phi| has max entry 2
    assert check.max_abs_residual == pytest.approx(2.0, abs=1e-12)
    assert not rep["nabla-phi"].passed
    assert not para_sasakian_holds(example2.metric, example2.structure, P)


def test_flipped_phi_is_para_sasakian(example2_para):
    rep = check_para_sasakian(example2_para.metric, example2_para.structure, P)
    assert rep.passed
    assert rep.max_residual < 1e-14


def test_identities_gated_on_hypothesis(example2, example2_para):
    rep = check_curvature_identities(example2.metric, example2.structure, P)
    assert all(c.hypothesis == UNMET for c in rep)
    assert rep["S(X,xi)"].verdict == "HOLDS-ANYWAY"
    assert rep.passed  # unmet hypothesis never fails
    good = check_curvature_identities(example2_para.metric, example2_para.structure, P)
    assert all(c.hypothesis == MET and c.verdict == "PASS" for c in good)
    assert all(c.tolerance == pytest.approx(1e-7) for c in good)


def test_broken_structure_precondition(example2):
    s = example2.structure
    chart = example2.chart
    broken = constant_structure([[1, 0, 0], [0, -1, 0], [0, 0, 1]], [0, 0, 1], [0, 0, 1], -1, chart)
    assert not check_axioms(broken, P).passed
    with pytest.raises(PreconditionUnmet):
        check_para_sasakian(example2.metric, broken, P)
    # wrong epsilon breaks compatibility but not the axioms
    wrong = ParacontactStructure(s.phi, s.xi, s.eta, 1)
    assert check_axioms(wrong, P).passed
    assert not check_compatibility(example2.metric, wrong, P).passed


def test_causal_character(example2):
    assert classify_causal_character(example2.metric, example2.structure, P) == "timelike"
    s = example2.structure
    with pytest.raises(InconsistentEpsilon):
        classify_causal_character(example2.metric, ParacontactStructure(s.phi, s.xi, s.eta, 1), P)
    g = metric([[-1, 0], [0, 1]], ["t", "x"])
    light = constant_structure([[0, 0], [0, 0]], [1, 1], [1, 0], 1, ["t", "x"])
    with pytest.raises(LightlikeXi):
        classify_causal_character(g, light, [0.0, 0.0])


def test_trivial_one_dimensional():
    spec = load_fixture("trivial-ps-r1")
    assert classify_causal_character(spec.metric, spec.structure, [0.3]) == "spacelike"
    assert para_sasakian_holds(spec.metric, spec.structure, [0.3])


def test_structure_shape_validation(example2):
    s = example2.structure
    with pytest.raises(ValueError):
        ParacontactStructure(s.phi, s.xi[:2], s.eta, -1)
    with pytest.raises(ValueError):
        ParacontactStructure(s.phi, s.xi, s.eta, 0)


def test_euclidean_metric_with_timelike_structure(example2):
    g = load_fixture("euclidean-r3").metric
    rep = check_compatibility(g, example2.structure, P)
    # g(xi, xi) = 1 against eps = -1
    assert rep["g-xi-xi"].max_abs_residual == pytest.approx(2.0)
    assert not rep["g-xi-xi"].passed
