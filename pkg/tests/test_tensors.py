import math

import numpy as np
import pytest
from conftest import euclidean, metric

from geoverify.errors import DegenerateMetric
from geoverify.expr import parse
from geoverify.tensors import (
    Chart,
    MetricField,
    christoffel,
    divergence,
    evaluate,
    gradient,
    hessian,
    lie_derivative_metric,
    lie_derivative_metric_partials,
    nabla_of_vector,
)

SPHERE = metric([[1, 0], [0, "sin(th)^2"]], ["th", "ph"])
EX2 = [["exp(-2*z)", 0, 0], [0, "exp(2*x-2*z)", 0], [0, 0, -1]]
XYZ = ["x", "y", "z"]


def _fd(fun, p, h=1e-4):
    """Richardson-extrapolated central differences of an array-valued function; derivative axis last."""
    p = np.asarray(p, float)

    def central(step):
        cols = []
        for k in range(len(p)):
            e = np.zeros_like(p)
            e[k] = step
            cols.append((fun(p + e) - fun(p - e)) / (2 * step))
        return np.stack(cols, axis=-1)

    return (4 * central(h / 2) - central(h)) / 3


def test_sphere_values():
    th = math.pi / 3
    ev = evaluate(SPHERE, [th, 0.2], order=3)
    assert ev.christoffel[0, 1, 1] == pytest.approx(-math.sin(th) * math.cos(th), abs=1e-15)
    assert ev.christoffel[1, 0, 1] == pytest.approx(1 / math.tan(th), abs=1e-15)
    assert ev.scal == pytest.approx(2.0, abs=1e-14)
    np.testing.assert_allclose(ev.ricci, ev.g, atol=1e-14)
    assert np.max(np.abs(ev.nabla_ricci)) < 1e-13
    assert ev.signature == (2, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_euclidean_flat(n):
    g, _ = euclidean(n)
    ev = evaluate(g, np.linspace(-0.5, 0.5, n), order=3)
    for t in (ev.christoffel, ev.riemann, ev.ricci, ev.nabla_ricci):
        assert np.max(np.abs(t)) == 0.0
    assert ev.scal == 0.0


def test_christoffel_against_metric_differences():
    g = metric(EX2, XYZ)
    p = np.array([0.3, -0.4, 0.2])
    dg = _fd(lambda q: evaluate(g, q, order=1).g, p)
    gi = np.linalg.inv(evaluate(g, p, order=1).g)
    # Gamma^l_ij = 1/2 g^lm (d_i g_mj + d_j g_mi - d_m g_ij)
    lower = 0.5 * (np.einsum("mji->mij", dg) + np.einsum("mij->mij", dg) - np.einsum("ijm->mij", dg))
    expected = np.einsum("lm,mij->lij", gi, lower)
    np.testing.assert_allclose(christoffel(g, p), expected, atol=1e-9)


def test_nabla_ricci_against_differences():
    g = metric(EX2, XYZ)
    p = np.array([0.1, 0.5, -0.3])
    ev = evaluate(g, p, order=3)
    dS = _fd(lambda q: evaluate(g, q, order=2).ricci, p)  # dS[i, j, k] = d_k S_ij
    gam = ev.christoffel
    expected = (
        np.transpose(dS, (2, 0, 1))
        - np.einsum("mki,mj->kij", gam, ev.ricci)
        - np.einsum("mkj,im->kij", gam, ev.ricci)
    )
    np.testing.assert_allclose(ev.nabla_ricci, expected, atol=1e-8)


def test_riemann_against_christoffel_differences():
    g = metric(EX2, XYZ)
    p = np.array([-0.2, 0.7, 0.4])
    ev = evaluate(g, p, order=2)
    dG = _fd(lambda q: christoffel(g, q), p)  # dG[l, j, k, i] = d_i Gamma^l_jk
    gam = ev.christoffel
    R = (
        np.einsum("ljki->lkij", dG)
        - np.einsum("likj->lkij", dG)
        + np.einsum("lim,mjk->lkij", gam, gam)
        - np.einsum("ljm,mik->lkij", gam, gam)
    )
    np.testing.assert_allclose(ev.riemann, R, atol=1e-8)


def test_example2_scalar_curvature():
    g = metric(EX2, XYZ)
    for z in (-0.8, 0.0, 0.6):
        ev = evaluate(g, [0.1, 0.2, z], order=2)
        assert ev.signature == (2, 1)
        assert ev.scal == pytest.approx(6 - 2 * math.exp(2 * z), abs=1e-12)


def test_divergence_and_lie_derivative_forms():
    g = metric(EX2, XYZ)
    xi = [parse(s, XYZ) for s in ("0", "0", "1")]
    V = [parse(s, XYZ) for s in ("y*z", "sin(x)", "x^2")]
    p = np.array([0.3, -0.1, 0.5])
    assert divergence(g, xi, p) == pytest.approx(-2.0, abs=1e-14)
    for field in (xi, V):
        np.testing.assert_allclose(lie_derivative_metric(g, field, p), lie_derivative_metric_partials(g, field, p), atol=1e-13)
    # L_xi g for xi = d_z: d_z g_ij
    np.testing.assert_allclose(lie_derivative_metric(g, xi, p), _fd(lambda q: evaluate(g, q, 1).g, p)[:, :, 2], atol=1e-9)


def test_gradient_hessian():
    g = SPHERE
    f = parse("cos(th)", ["th", "ph"])
    p = [0.9, 1.3]
    np.testing.assert_allclose(gradient(g, f, p), [-math.sin(0.9), 0.0], atol=1e-15)
    H, lap = hessian(g, f, p)
    # cos(th) is an l = 1 eigenfunction: Laplacian = -2 f
    assert lap == pytest.approx(-2 * math.cos(0.9), abs=1e-14)
    np.testing.assert_allclose(H, H.T)
    A = nabla_of_vector(g, [parse(s, ["th", "ph"]) for s in ("0", "1")], p)  # Killing field d_phi
    gA = evaluate(g, p, 1).g @ A
    np.testing.assert_allclose(gA + gA.T, 0, atol=1e-15)


def test_degenerate_metric_rejected():
    g = metric([[1, 1], [1, 1]], ["u", "v"])
    with pytest.raises(DegenerateMetric):
        evaluate(g, [0.0, 0.0])
    g = metric([["u", 0], [0, 1]], ["u", "v"])
    evaluate(g, [0.5, 0.0])
    with pytest.raises(DegenerateMetric):
        evaluate(g, [0.0, 0.0])


def test_metric_validation():
    c = ["u", "v"]
    with pytest.raises(ValueError):
        MetricField.from_rows([[parse("1", c), parse("u", c)], [parse("v", c), parse("1", c)]])
    g = metric([[1, 0], [0, 1]], c)
    with pytest.raises(ValueError):
        evaluate(g, [0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        evaluate(g, [0.0, 0.0], order=4)


def test_chart_domain():
    chart = Chart(("x", "y"))
    assert chart.dimension == 2
    assert chart.contains([0.5, -1.0]) and not chart.contains([1.5, 0.0])
    with pytest.raises(ValueError):
        Chart(("x", "x"))
