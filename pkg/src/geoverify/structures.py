"""(epsilon)-almost paracontact structures: axioms, metric compatibility,
the para-Sasakian condition and its curvature identities.

Every identity is checked on the coordinate basis by enumerating all index
tuples. Residuals are max-abs of the difference tensor, scaled by one plus
the largest entry of the terms involved (see ``checks.residual``).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import tensors
from .checks import MET, UNMET, Check, CheckReport, residual
from .errors import InconsistentEpsilon, LightlikeXi, PreconditionUnmet
from .expr import Expr, field_jets

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class ParacontactStructure:
    """The quadruple (phi, xi, eta, epsilon) with expression-valued components.

    ``phi[i][j]`` is phi^i_j, i.e. phi(d_j) = phi^i_j d_i.
    """

    phi: tuple
    xi: tuple
    eta: tuple
    epsilon: int

    def __post_init__(self):
        phi = tuple(tuple(r) for r in self.phi)
        n = len(phi)
        if any(len(r) != n for r in phi) or len(self.xi) != n or len(self.eta) != n:
            raise ValueError("phi must be n x n and xi, eta must have n components")
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon}")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "xi", tuple(self.xi))
        object.__setattr__(self, "eta", tuple(self.eta))

    @property
    def dimension(self):
        return len(self.xi)

    def at(self, p, order=1) -> StructureValues:
        n = self.dimension
        flat = [e for row in self.phi for e in row]
        pv, pd, _, _ = field_jets(flat, p, order)
        xv, xd, _, _ = field_jets(self.xi, p, order)
        ev_, ed, _, _ = field_jets(self.eta, p, order)
        return StructureValues(
            phi=pv.reshape(n, n),
            dphi=None if pd is None else pd.reshape(n, n, n),
            xi=xv,
            dxi=xd,
            eta=ev_,
            deta=ed,
            epsilon=self.epsilon,
        )


@dataclass
class StructureValues:
    """Numeric structure at a point; derivative axes trail (dphi[i, j, k] = d_k phi^i_j)."""

    phi: np.ndarray
    dphi: np.ndarray
    xi: np.ndarray
    dxi: np.ndarray
    eta: np.ndarray
    deta: np.ndarray
    epsilon: int


def check_axioms(s: ParacontactStructure, p, tol=DEFAULT_TOL, point_index=0) -> CheckReport:
    sv = s.at(p, order=0)
    n = s.dimension
    ident = np.eye(n)
    xi_eta = np.outer(sv.xi, sv.eta)  # (eta (x) xi)(X) = eta(X) xi
    phi2 = sv.phi @ sv.phi
    rep = CheckReport("axioms")
    items = [
        ("phi-squared", "phi^2 = I - eta(x)xi", residual(phi2 - (ident - xi_eta), phi2, ident - xi_eta)),
        ("eta-xi", "eta(xi) = 1", residual(sv.eta @ sv.xi - 1.0, sv.eta @ sv.xi, 1.0)),
        ("phi-xi", "phi xi = 0", residual(sv.phi @ sv.xi, sv.phi @ sv.xi)),
        ("eta-phi", "eta o phi = 0", residual(sv.eta @ sv.phi, sv.eta @ sv.phi)),
    ]
    for name, anchor, r in items:
        rep.add(Check.single(f"axioms: {name}", anchor, tol, r, point=point_index))
    return rep


def check_compatibility(g, s: ParacontactStructure, p, tol=DEFAULT_TOL, ev=None, point_index=0) -> CheckReport:
    ev = ev if ev is not None else tensors.evaluate(g, p, order=1)
    sv = s.at(p, order=0)
    eps = s.epsilon
    G, phi, xi, eta = ev.g, sv.phi, sv.xi, sv.eta
    gpp = phi.T @ G @ phi  # g(phi d_i, phi d_j)
    target = G - eps * np.outer(eta, eta)
    i_xi_g = G @ xi
    gphi = G @ phi  # g(d_i, phi d_j)
    gxx = float(xi @ G @ xi)
    rep = CheckReport("compatibility")
    items = [
        ("metric-phi", "g(phi X, phi Y) = g(X, Y) - eps eta(X) eta(Y)", residual(gpp - target, gpp, target)),
        ("i-xi-g", "i_xi g = eps eta", residual(i_xi_g - eps * eta, i_xi_g, eta)),
        ("phi-symmetric", "g(X, phi Y) = g(phi X, Y)", residual(gphi - gphi.T, gphi)),
        ("g-xi-xi", "g(xi, xi) = eps", residual(gxx - eps, gxx, 1.0)),
    ]
    for name, anchor, r in items:
        rep.add(Check.single(f"compatibility: {name}", anchor, tol, r, point=point_index))
    return rep


def nabla_phi(ev, sv) -> np.ndarray:
    """T[i, k, j] = ((nabla_{d_i} phi) d_j)^k."""
    gam = ev.christoffel
    return (
        np.transpose(sv.dphi, (2, 0, 1))
        + np.einsum("kim,mj->ikj", gam, sv.phi)
        - np.einsum("mij,km->ikj", gam, sv.phi)
    )


def nabla_xi(ev, sv) -> np.ndarray:
    """A[k, i] = (nabla_{d_i} xi)^k."""
    return sv.dxi + np.einsum("kim,m->ki", ev.christoffel, sv.xi)


def check_para_sasakian(g, s: ParacontactStructure, p, tol=DEFAULT_TOL, ev=None, point_index=0) -> CheckReport:
    """Residuals of the (nabla phi) condition and of nabla xi - eps phi.

    Raises PreconditionUnmet unless the axioms and metric compatibility hold at ``p``.
    """
    ev = ev if ev is not None else tensors.evaluate(g, p, order=1)
    pre = [check_axioms(s, p, tol), check_compatibility(g, s, p, tol, ev=ev)]
    failed = [c.name for r in pre for c in r if not c.passed]
    if failed:
        raise PreconditionUnmet("structure is not an (eps)-almost paracontact metric one: " + ", ".join(failed))
    sv = s.at(p, order=1)
    eps = s.epsilon
    n = s.dimension
    lhs = nabla_phi(ev, sv)
    gpp = sv.phi.T @ ev.g @ sv.phi
    phi2 = sv.phi @ sv.phi
    # -g(phi d_i, phi d_j) xi^k - eps eta_j (phi^2)^k_i, laid out [i, k, j]
    rhs = -np.einsum("ij,k->ikj", gpp, sv.xi) - eps * np.einsum("j,ki->ikj", sv.eta, phi2)
    nx = nabla_xi(ev, sv)
    rep = CheckReport("para-sasakian")
    rep.add(
        Check.single(
            "para-sasakian: nabla-phi",
            "(nabla_X phi)Y = -g(phi X, phi Y) xi - eps eta(Y) phi^2 X",
            tol,
            residual(lhs - rhs, lhs, rhs),
            point=point_index,
        )
    )
    rep.add(
        Check.single(
            "para-sasakian: nabla-xi-vs-eps-phi",
            "nabla xi = eps phi",
            tol,
            residual(nx - eps * sv.phi, nx, sv.phi),
            point=point_index,
        )
    )
    rep.values["dimension"] = n
    return rep


def para_sasakian_holds(g, s, p, tol=DEFAULT_TOL, ev=None) -> bool:
    try:
        return check_para_sasakian(g, s, p, tol, ev=ev).passed
    except PreconditionUnmet:
        return False


def check_curvature_identities(
    g, s: ParacontactStructure, p, tol=DEFAULT_TOL, ev=None, sasakian=None, point_index=0
) -> CheckReport:
    """The four curvature identities of (eps)-para-Sasakian manifolds.

    Always evaluated; each record carries whether the para-Sasakian
    hypothesis held at ``p`` (computed here unless ``sasakian`` is given).
    Records use tolerance ``10 * tol``.
    """
    ev = ev if ev is not None and ev.order >= 2 else tensors.evaluate(g, p, order=2)
    if sasakian is None:
        sasakian = para_sasakian_holds(g, s, p, tol, ev=ev)
    hyp = MET if sasakian else UNMET
    sv = s.at(p, order=0)
    eps, n = s.epsilon, s.dimension
    R, S, G = ev.riemann, ev.ricci, ev.g
    xi, eta = sv.xi, sv.eta
    I = np.eye(n)
    ctol = 10 * tol

    # R(d_i, d_j) xi = eta_i d_j - eta_j d_i       [l, i, j]
    lhs1 = np.einsum("lkij,k->lij", R, xi)
    rhs1 = np.einsum("i,lj->lij", eta, I) - np.einsum("j,li->lij", eta, I)
    # R(xi, d_j) d_k = -eps g_jk xi + eta_k d_j     [l, j, k]
    lhs2 = np.einsum("lkij,i->ljk", R, xi)
    rhs2 = -eps * np.einsum("jk,l->ljk", G, xi) + np.einsum("k,lj->ljk", eta, I)
    # eta(R(d_i, d_j) d_k) = -eps eta_i g_jk + eps eta_j g_ik      [i, j, k]
    lhs3 = np.einsum("l,lkij->ijk", eta, R)
    rhs3 = -eps * np.einsum("i,jk->ijk", eta, G) + eps * np.einsum("j,ik->ijk", eta, G)
    # S(d_i, xi) = -(n - 1) eta_i
    lhs4 = S @ xi
    rhs4 = -(n - 1) * eta

    rep = CheckReport("identities")
    items = [
        ("R(X,Y)xi", "R(X,Y)xi = eta(X)Y - eta(Y)X", lhs1, rhs1),
        ("R(xi,X)Y", "R(xi,X)Y = -eps g(X,Y) xi + eta(Y)X", lhs2, rhs2),
        ("eta(R(X,Y)Z)", "eta(R(X,Y)Z) = -eps eta(X) g(Y,Z) + eps eta(Y) g(X,Z)", lhs3, rhs3),
        ("S(X,xi)", "S(X, xi) = -(n-1) eta(X)", lhs4, rhs4),
    ]
    for name, anchor, lhs, rhs in items:
        rep.add(Check.single(f"identities: {name}", anchor, ctol, residual(lhs - rhs, lhs, rhs), hyp, point_index))
    rep.values["sasakian"] = sasakian
    return rep


def classify_causal_character(g, s: ParacontactStructure, p, tol=DEFAULT_TOL) -> str:
    """'spacelike' when g(xi, xi) = +1, 'timelike' when -1; must agree with epsilon."""
    G = tensors.metric_at(g, p)[0]
    xi = s.at(p, order=0).xi
    q = float(xi @ G @ xi)
    if abs(q) < tol:
        raise LightlikeXi(q)
    if abs(q - s.epsilon) > tol * (1.0 + abs(q)):
        raise InconsistentEpsilon(q, s.epsilon)
    return "spacelike" if s.epsilon == 1 else "timelike"


def constant_structure(phi: Sequence, xi: Sequence, eta: Sequence, epsilon: int, chart) -> ParacontactStructure:
    """Convenience constructor from numbers or expression strings."""
    from .expr import parse

    def conv(v):
        return v if isinstance(v, Expr) else parse(str(v), chart)

    return ParacontactStructure(
        tuple(tuple(conv(v) for v in row) for row in phi),
        tuple(conv(v) for v in xi),
        tuple(conv(v) for v in eta),
        epsilon,
    )
