"""Named verification suites run over sampled points of a manifold spec."""

from __future__ import annotations

import math
import warnings

import numpy as np

from .. import solitons, tensors
from ..checks import MET, NONE, UNMET, Check, CheckReport, merge, residual
from ..errors import (
    DegenerateMetric,
    DomainError,
    InconsistentEpsilon,
    LightlikeXi,
    PreconditionUnmet,
    SpecError,
    UndeterminedMu,
)
from ..expr import eval_jet
from ..structures import (
    DEFAULT_TOL,
    check_axioms,
    check_compatibility,
    check_curvature_identities,
    check_para_sasakian,
    classify_causal_character,
    para_sasakian_holds,
)
from .report import VerificationReport

GEOMETRY_SUITES = ("tensors", "axioms", "compat", "sasakian", "identities", "soliton", "gradient")
SUITES = GEOMETRY_SUITES + ("theorems", "all")
DEFAULT_TRIALS = 10_000
DEFAULT_THEOREM_SEED = 42

_NEEDS = {
    "axioms": ("structure",),
    "compat": ("structure",),
    "sasakian": ("structure",),
    "identities": ("structure",),
    "soliton": ("structure", "soliton"),
    "gradient": ("structure", "soliton", "potential"),
}


def _missing(spec, suite):
    out = []
    for block in _NEEDS.get(suite, ()):
        if block == "potential":
            if spec.soliton is None or spec.soliton.potential is None:
                out.append("soliton.potential")
        elif getattr(spec, block) is None:
            out.append(block)
    return out


def applicable_suites(spec):
    return [s for s in GEOMETRY_SUITES if not _missing(spec, s)]


def sample_points(spec, count=None, seed=None, mode=None) -> np.ndarray:
    """Grid: ceil(count^(1/n)) points per axis; random: seeded uniform in each range."""
    count = spec.sampling.count if count is None else int(count)
    seed = spec.sampling.seed if seed is None else int(seed)
    mode = spec.sampling.mode if mode is None else mode
    dom = np.asarray(spec.chart.domain, dtype=float)
    n = len(dom)
    if count < 1:
        raise SpecError("point count must be positive")
    if mode == "random":
        rng = np.random.default_rng(seed)
        return dom[:, 0] + (dom[:, 1] - dom[:, 0]) * rng.random((count, n))
    if mode == "grid":
        k = math.ceil(round(count ** (1.0 / n), 12))
        axes = [np.linspace(lo, hi, k) for lo, hi in dom]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)
    raise SpecError(f"sampling mode must be 'random' or 'grid', got {mode!r}")


# ---------------------------------------------------------------------------
# per-point check catalogs
# ---------------------------------------------------------------------------


def tensor_invariants(ev, tol=DEFAULT_TOL, point_index=0) -> CheckReport:
    """Algebraic symmetries of the connection and curvature, and metric compatibility."""
    gam, R, Rl, S, G = ev.christoffel, ev.riemann, ev.riemann_lowered, ev.ricci, ev.g
    # (nabla_k g)_ij
    ng = np.transpose(ev.dg, (2, 0, 1)) - np.einsum("mki,mj->kij", gam, G) - np.einsum("mkj,im->kij", gam, G)
    bianchi = R + np.einsum("lijk->lkij", R) + np.einsum("ljki->lkij", R)
    items = [
        ("christoffel-symmetry", "Gamma^k_ij = Gamma^k_ji", residual(gam - np.swapaxes(gam, 1, 2), gam)),
        ("metric-compatibility", "nabla g = 0", residual(ng, ev.dg)),
        ("bianchi-first", "R^l_kij + R^l_ijk + R^l_jki = 0", residual(bianchi, R)),
        ("riemann-antisymmetry", "R^l_kij = -R^l_kji", residual(R + np.swapaxes(R, 2, 3), R)),
        ("lowered-antisymmetry", "R_lkij = -R_klij", residual(Rl + np.swapaxes(Rl, 0, 1), Rl)),
        ("pair-symmetry", "R_lkij = R_ijlk", residual(Rl - np.transpose(Rl, (2, 3, 0, 1)), Rl)),
        ("ricci-symmetry", "S_ij = S_ji", residual(S - S.T, S)),
    ]
    rep = CheckReport("tensors")
    for name, anchor, r in items:
        rep.add(Check.single(f"tensors: {name}", anchor, tol, r, NONE, point_index))
    return rep


def _scalar(value, p):
    return solitons.scalar_jet(value, p, 0)[0]


class _Point:
    """Everything a suite needs at one sample point, computed once."""

    def __init__(self, spec, p, index, tol):
        self.spec, self.p, self.index, self.tol = spec, p, index, tol
        self.ev = tensors.evaluate(spec.metric, p, order=3)
        s = spec.structure
        self.sasakian = None if s is None else para_sasakian_holds(spec.metric, s, p, tol, ev=self.ev)


def _suite_tensors(pt):
    return [tensor_invariants(pt.ev, pt.tol, pt.index)]


def _suite_axioms(pt):
    return [check_axioms(pt.spec.structure, pt.p, pt.tol, pt.index)]


def _suite_compat(pt):
    spec = pt.spec
    rep = check_compatibility(spec.metric, spec.structure, pt.p, pt.tol, pt.ev, pt.index)
    try:
        classify_causal_character(spec.metric, spec.structure, pt.p, pt.tol)
        r = (0.0, 0.0)
    except (LightlikeXi, InconsistentEpsilon) as err:
        gap = abs(err.measured - spec.epsilon)
        r = (gap / (1.0 + abs(err.measured)), gap)
    rep.add(Check.single("compatibility: causal-character", "sign g(xi, xi) = eps", pt.tol, r, NONE, pt.index))
    return [rep]


def _suite_sasakian(pt):
    spec = pt.spec
    try:
        rep = check_para_sasakian(spec.metric, spec.structure, pt.p, pt.tol, pt.ev, pt.index)
        pre = (0.0, 0.0)
    except PreconditionUnmet:
        pre_reps = [
            check_axioms(spec.structure, pt.p, pt.tol),
            check_compatibility(spec.metric, spec.structure, pt.p, pt.tol, pt.ev),
        ]
        worst = max(pre_reps, key=lambda r: r.max_residual)
        pre = (worst.max_residual, max(c.max_abs_residual for r in pre_reps for c in r))
        rep = CheckReport("para-sasakian")
    head = CheckReport("para-sasakian")
    head.add(
        Check.single(
            "para-sasakian: precondition",
            "axioms and compatibility hold",
            pt.tol,
            pre,
            NONE,
            pt.index,
        )
    )
    return [head, rep]


def _suite_identities(pt):
    spec = pt.spec
    return [check_curvature_identities(spec.metric, spec.structure, pt.p, pt.tol, pt.ev, pt.sasakian, pt.index)]


def _fit(pt, V):
    spec = pt.spec
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UndeterminedMu)
        return solitons.solve_soliton(spec.metric, V, spec.structure.eta, pt.p, pt.ev)


def _suite_soliton(pt):
    spec, p, tol, i = pt.spec, pt.p, pt.tol, pt.index
    g, s, sol = spec.metric, spec.structure, spec.soliton
    V = sol.vector if sol.vector is not None else s.xi
    declared = sol.lam != solitons.SOLVE and sol.mu != solitons.SOLVE
    rep = CheckReport("soliton")
    fit = _fit(pt, V)
    pt.fit = fit
    if declared:
        sr = solitons.soliton_residual(g, V, s.eta, sol.lam, sol.mu, p, pt.ev)
        rep.add(Check.single("soliton: equation", "L_V g + 2S + 2 lambda g + 2 mu eta(x)eta = 0", tol, (sr.scaled, sr.max_abs), NONE, i))
        rep.add(
            Check.single(
                "soliton: lie-vs-connection-form",
                "S = -(1/2) L_V g - lambda g - mu eta(x)eta",
                solitons.AGREEMENT_TOL,
                (sr.agreement, sr.agreement),
                NONE,
                i,
            )
        )
    rep.add(Check.single("soliton: fit-residual", "least-squares (lambda, mu)", tol, (fit.residual, fit.residual), NONE, i))
    if declared:
        lam_v, mu_v = _scalar(sol.lam, p), _scalar(sol.mu, p)
        pt.lam_sample = lam_v
        # with an undetermined mu the fitted lambda absorbs mu's share, so there is nothing to compare
        if fit.mu_determined:
            err = abs(fit.lam - lam_v)
            rep.add(Check.single("soliton: fitted-lambda", "fitted lambda = declared lambda", tol, (err, err), NONE, i))
            err = abs(fit.mu - mu_v)
            rep.add(Check.single("soliton: fitted-mu", "fitted mu = declared mu", tol, (err, err), NONE, i))
        lam, mu = sol.lam, sol.mu
    else:
        lam = sol.lam if sol.lam != solitons.SOLVE else fit.lam
        mu = sol.mu if sol.mu != solitons.SOLVE else fit.mu
        pt.lam_sample = _scalar(lam, p)
        if mu is None:
            return [rep]
    out = [rep]
    if sol.vector is not None and tuple(sol.vector) != tuple(s.xi):
        # the para-Sasakian consequences concern solitons along xi
        return out
    out.append(solitons.ps_soliton_ricci_check(g, s, lam, mu, p, tol, pt.ev, pt.sasakian, i))
    out.append(solitons.nabla_S_closed_form_check(g, s, lam, mu, p, tol, pt.ev, pt.sasakian, i))
    out.append(solitons.classify_ricci_tensor(g, s, lam, mu, p, tol, pt.ev, pt.sasakian, i))
    out.append(solitons.ricci_operator_checks(g, s, lam, mu, p, tol, sol.potential, pt.ev, pt.sasakian, i))
    return out


def _suite_gradient(pt):
    spec, p, tol, i = pt.spec, pt.p, pt.tol, pt.index
    g, s, sol = spec.metric, spec.structure, spec.soliton
    f = sol.potential
    if solitons.SOLVE in (sol.lam, sol.mu):
        fit = getattr(pt, "fit", None) or _fit(pt, s.xi)
        lam = fit.lam if sol.lam == solitons.SOLVE else sol.lam
        mu = fit.mu if sol.mu == solitons.SOLVE else sol.mu
        if mu is None:
            mu = 0.0
    else:
        lam, mu = sol.lam, sol.mu
    grad_rep = solitons.gradient_soliton_residual(g, s, f, lam, mu, p, tol, pt.ev, pt.sasakian, i)
    out = [grad_rep]
    n, eps = s.dimension, s.epsilon
    if n <= 2:
        return out
    hyp_ok = bool(pt.sasakian and grad_rep["hessian-equation"].passed and grad_rep.values["duality"])
    hyp = MET if hyp_ok else UNMET
    lam_v, dlam = solitons.scalar_jet(lam, p, 1)
    mu_v, dmu = solitons.scalar_jet(mu, p, 1)
    df = eval_jet(f, p, 1).d1
    grad = pt.ev.g_inv @ df
    _, lap = tensors.hessian(g, f, p, pt.ev)
    nb = solitons.norm_bounds_check(n, eps, mu_v, lap, pt.ev.scal, pt.ev.ricci_norm_sq, tol)
    s2 = pt.ev.ricci_norm_sq
    gap = max(0.0, nb.lower - s2, s2 - nb.upper)
    bounds = CheckReport("gradient")
    bounds.add(
        Check.single(
            "gradient: norm-bounds",
            "n-1+mu^2-(Lap f+eps mu)^2/n <= |S|^2 <= n-1+mu^2+scal^2/n",
            10 * tol,
            (gap / (1.0 + max(abs(nb.lower), abs(nb.upper), abs(s2))), gap),
            hyp,
            i,
        )
    )
    out.append(bounds)
    div_xi = tensors.divergence(g, s.xi, p, pt.ev)
    out.append(
        solitons.potential_laplacian_identity(
            n, eps, lam_v, mu_v, float(dlam @ grad), float(dmu @ grad), lap, pt.ev.scal, div_xi, 10 * tol, hyp_ok, i
        )
    )
    return out


_RUNNERS = {
    "tensors": _suite_tensors,
    "axioms": _suite_axioms,
    "compat": _suite_compat,
    "sasakian": _suite_sasakian,
    "identities": _suite_identities,
    "soliton": _suite_soliton,
    "gradient": _suite_gradient,
}


# ---------------------------------------------------------------------------
# pure arithmetic theorems
# ---------------------------------------------------------------------------


def theorem_checks(trials=DEFAULT_TRIALS, seed=DEFAULT_THEOREM_SEED, tol=DEFAULT_TOL) -> CheckReport:
    """Scalar-level statements that need no manifold, over seeded random inputs."""
    rng = np.random.default_rng(seed)
    rep = CheckReport("theorems")
    ns = np.arange(3, 9)

    # scal formula == divergence formula composed with the Laplacian formula
    n = rng.integers(3, 9, trials)
    eps = rng.choice([-1.0, 1.0], trials)
    lam, mu, xl, xm = rng.uniform(-10, 10, (4, trials))
    lap = solitons.laplacian_formula(n, eps, lam, mu, xl, xm)
    scal_e = solitons.scal_formula(n, eps, lam, mu, xl, xm)
    composed = solitons.scal_from_divergence(n, eps, lam, mu, lap)
    scale = 1.0 + np.max(np.abs(np.stack([scal_e, composed, lam, mu, xl, xm])), axis=0)
    diff = np.abs(composed - scal_e)
    rep.add(
        Check.single(
            "theorems: scal-composition",
            "scal formula = divergence formula o Laplacian formula",
            1e-12,
            (float(np.max(diff / scale)), float(np.max(diff))),
        )
    )

    # both Codazzi-Q pairs satisfy eps lambda + mu = n - 1 exactly, with the right type
    gap, type_gap = 0.0, 0.0
    for e in (-1, 1):
        for k in ns:
            for a, b in solitons.codazzi_q_pairs(int(k), e):
                gap = max(gap, abs(e * a + b - (k - 1)))
                expected = solitons.codazzi_q_type(e)
                type_gap = max(type_gap, float(solitons.classify_soliton([a], tol) != expected))
    rep.add(Check.single("theorems: codazzi-pairs-constraint", "eps lambda + mu = n - 1", 0.0, (gap, gap)))
    rep.add(Check.single("theorems: codazzi-pairs-type", "expanding iff eps = 1", 0.0, (type_gap, type_gap)))

    # norm bounds are ordered for arbitrary inputs
    worst = 0.0
    n = rng.integers(3, 9, trials)
    eps = rng.choice([-1, 1], trials)
    mu, lapf, scal = rng.uniform(-10, 10, (3, trials))
    for args in zip(n, eps, mu, lapf, scal):
        nb = solitons.norm_bounds_check(int(args[0]), int(args[1]), *map(float, args[2:]), 0.0, tol)
        worst = max(worst, nb.lower - nb.upper)
    rep.add(Check.single("theorems: norm-bound-order", "lower <= upper", 0.0, (max(worst, 0.0), max(worst, 0.0))))

    eq_gap = 0.0
    for e in (-1, 1):
        nb = solitons.norm_bounds_check(3, e, 1.0, -float(e), 0.0, 3.0, tol)
        eq_gap = max(eq_gap, abs(nb.lower - 3.0), abs(nb.upper - 3.0), float(not nb.equality))
    rep.add(Check.single("theorems: norm-bound-equality", "mu = 1, Lap f = -eps, scal = 0, n = 3 => lower = upper = 3", 1e-12, (eq_gap, eq_gap)))

    # mu = 0 forces lambda = eps(n-1); lambda = 0 forces mu = n - 1
    sign_gap = steady_gap = 0.0
    for e in (-1, 1):
        for k in ns:
            lam0 = solitons.constraint_lambda(int(k), e, 0.0)
            sign_gap = max(sign_gap, float(np.sign(lam0) != e))
            sign_gap = max(sign_gap, float(solitons.almost_ricci_soliton_type(int(k), e) != solitons.codazzi_q_type(e)))
            steady_gap = max(steady_gap, abs(e * 0.0 + solitons.steady_mu(int(k)) - (k - 1)))
    rep.add(Check.single("theorems: almost-ricci-sign", "mu = 0 => lambda = eps(n-1)", 0.0, (sign_gap, sign_gap)))
    rep.add(Check.single("theorems: steady-mu", "lambda = 0 => mu = n - 1", 0.0, (steady_gap, steady_gap)))

    # Einstein condition for conformal Killing / torse-forming fields
    ein = 0.0
    n = rng.integers(3, 9, 200)
    eps = rng.choice([-1, 1], 200)
    fv, lam = rng.uniform(-10, 10, (2, 200))
    for k, e, f0, l0 in zip(n, eps, fv, lam):
        k, e = int(k), int(e)
        for variant in ("conformal-killing", "torse-forming"):
            res = solitons.conformal_killing_einstein(k, e, float(f0), float(l0), tol, variant)
            critical = e * (k - 1) - f0
            ein = max(ein, abs(res.b - e * (l0 - critical)) / (1.0 + abs(res.b)))
            at = solitons.conformal_killing_einstein(k, e, float(f0), float(critical), tol, variant)
            ein = max(ein, float(not at.einstein))
    rep.add(Check.single("theorems: einstein-condition", "b = 0 iff lambda = eps(n-1) - f", 1e-12, (ein, ein)))

    # constant scal: mu = -(2n+1) lambda / (3 eps) + C with C constant
    c_gap = 0.0
    for e in (-1, 1):
        for k in ns:
            scal0 = rng.uniform(-5, 5)
            lams = rng.uniform(-5, 5, 20)
            mus = (-2 * scal0 - e * (k - 1) - (2 * k + 1) * lams) / (3 * e)
            cs = solitons.constant_scal_offset(int(k), e, lams, mus)
            c_gap = max(c_gap, float(np.ptp(cs)) / (1.0 + float(np.max(np.abs(cs)))))
    rep.add(Check.single("theorems: constant-scal-offset", "mu = -(2n+1) lambda/(3 eps) + C", 1e-12, (c_gap, c_gap)))
    rep.values["trials"] = int(trials)
    return rep


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def run_suite(spec, suite="all", tol=DEFAULT_TOL, points=None, seed=None, mode=None, trials=DEFAULT_TRIALS) -> VerificationReport:
    """Run one named suite (or ``all`` applicable ones) and aggregate over sampled points.

    Failures of individual checks are report content. A spec lacking a block
    the requested suite needs raises SpecError.
    """
    if suite not in SUITES:
        raise SpecError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if suite == "theorems":
        seed = DEFAULT_THEOREM_SEED if seed is None else int(seed)
        rep = theorem_checks(trials, seed, tol)
        name = spec.name if spec is not None else "none"
        return VerificationReport(name, suite, tol, rep.checks, seed=seed, points=int(trials), values=dict(rep.values))
    if spec is None:
        raise SpecError(f"suite {suite!r} needs a manifold spec")
    if suite == "all":
        names = applicable_suites(spec)
    else:
        missing = _missing(spec, suite)
        if missing:
            raise SpecError(f"suite {suite!r} needs the {', '.join(missing)} block(s), absent from {spec.name}")
        names = [suite]

    seed = spec.sampling.seed if seed is None else int(seed)
    pts = sample_points(spec, points, seed, mode)
    per_suite = {name: [] for name in names}
    values = {"coordinates": list(spec.chart.coordinates)}
    sasakian_points = 0
    lam_fits, lam_samples = [], []
    for i, p in enumerate(pts):
        try:
            pt = _Point(spec, p, i, tol)
        except (DegenerateMetric, DomainError) as err:
            bad = CheckReport("evaluation")
            bad.add(Check.single("evaluation: metric-regular", f"{type(err).__name__}: {err}", tol, (math.inf, math.inf), NONE, i))
            for name in names:
                per_suite[name].append(bad)
            continue
        if i == 0:
            values["signature"] = list(pt.ev.signature)
        sasakian_points += bool(pt.sasakian)
        for name in names:
            per_suite[name].extend(_RUNNERS[name](pt))
        if getattr(pt, "fit", None) is not None:
            lam_fits.append(pt.fit)
            lam_samples.append(pt.lam_sample)

    checks, seen = [], set()
    for name in names:
        for c in merge(per_suite[name], name).checks:
            if c.name not in seen:
                seen.add(c.name)
                checks.append(c)
    if spec.structure is not None:
        values["para_sasakian_points"] = sasakian_points
        try:
            values["causal_character"] = classify_causal_character(spec.metric, spec.structure, pts[0], tol)
        except (LightlikeXi, InconsistentEpsilon, DegenerateMetric, DomainError) as err:
            values["causal_character"] = f"undetermined ({type(err).__name__})"
    if lam_fits:
        values["soliton_type"] = solitons.classify_soliton(lam_samples, tol)
        values["mu_determined"] = all(f.mu_determined for f in lam_fits)
    return VerificationReport(spec.name, suite, tol, checks, seed=seed, points=len(pts), values=values)
