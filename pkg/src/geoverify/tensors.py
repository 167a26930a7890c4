"""Metric, Levi-Civita connection, curvature and first-order operators at chart points.

Index layout (fixed everywhere in the package)

* ``christoffel[k, i, j]`` is Gamma^k_ij, so nabla_{d_i} d_j = Gamma^k_ij d_k.
* ``riemann[l, k, i, j]`` is R^l_kij with R(d_i, d_j) d_k = R^l_kij d_l and
  R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
* ``ricci[j, k]`` = S(d_j, d_k) = trace of Z -> R(Z, d_j) d_k = R^i_kij.
* ``nabla_ricci[k, i, j]`` is (nabla_{d_k} S)(d_i, d_j).
* Mixed (1,1) tensors are matrices acting on column vectors: ``A[i, j]`` = A^i_j.

Derivatives of Gamma and of the curvature are obtained by propagating
truncated jets of the metric entries through the whole pipeline, so no
finite differences are involved.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMetric
from .expr import Expr, eval_jet, field_jets

DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class Chart:
    """Coordinate names and a closed sampling interval per coordinate."""

    coordinates: tuple
    domain: tuple = None

    def __post_init__(self):
        coords = tuple(self.coordinates)
        if not coords:
            raise ValueError("a chart needs at least one coordinate")
        if len(set(coords)) != len(coords):
            raise ValueError(f"coordinate names must be distinct: {coords}")
        object.__setattr__(self, "coordinates", coords)
        domain = self.domain
        if domain is None:
            domain = ((-1.0, 1.0),) * len(coords)
        domain = tuple((float(lo), float(hi)) for lo, hi in domain)
        if len(domain) != len(coords):
            raise ValueError("one sampling interval per coordinate is required")
        for lo, hi in domain:
            if not lo < hi:
                raise ValueError(f"degenerate sampling interval [{lo}, {hi}]")
        object.__setattr__(self, "domain", domain)

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def contains(self, point) -> bool:
        return len(point) == self.dimension and all(
            lo <= v <= hi for v, (lo, hi) in zip(point, self.domain)
        )


@dataclass(frozen=True)
class MetricField:
    """Symmetric matrix of metric-entry expressions g_ij."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("metric entries must form a non-empty square matrix")
        # mirror the upper triangle; the lower one is implied
        full = tuple(tuple(rows[min(i, j)][max(i, j)] for j in range(n)) for i in range(n))
        object.__setattr__(self, "entries", full)

    @classmethod
    def from_rows(cls, rows):
        """Build from a full matrix, rejecting structurally asymmetric input."""
        n = len(rows)
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"metric is not symmetric at ({i}, {j})")
        return cls(rows)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def jets(self, point, order):
        """Arrays (g, dg, d2g, d3g) with derivative axes trailing; higher tiers may be None."""
        n = self.dimension
        upper = [(i, j) for i in range(n) for j in range(i, n)]
        vals, *tiers = field_jets([self.entries[i][j] for i, j in upper], point, order)
        out = []
        for flat in (vals, *tiers):
            if flat is None:
                out.append(None)
                continue
            full = np.empty((n, n) + flat.shape[1:])
            for (i, j), v in zip(upper, flat):
                full[i, j] = v
                full[j, i] = v
            out.append(full)
        return tuple(out)


# ---------------------------------------------------------------------------
# tensor-valued jets
# ---------------------------------------------------------------------------


class _TJet:
    """Tensor value with up to two tiers of partial derivatives as trailing axes."""

    __slots__ = ("d", "v")

    def __init__(self, v, *d):
        self.v = v
        self.d = tuple(t for t in d if t is not None)

    @property
    def order(self):
        return len(self.d)

    def truncate(self, order):
        return _TJet(self.v, *self.d[:order])

    def shift(self):
        """Jet of the first partials; the new trailing value axis is the derivative index."""
        return _TJet(self.d[0], *self.d[1:])

    def __add__(self, other):
        order = min(self.order, other.order)
        return _TJet(self.v + other.v, *(a + b for a, b in zip(self.d[:order], other.d[:order])))

    def __sub__(self, other):
        order = min(self.order, other.order)
        return _TJet(self.v - other.v, *(a - b for a, b in zip(self.d[:order], other.d[:order])))

    def scale(self, c):
        return _TJet(self.v * c, *(a * c for a in self.d))

    def perm(self, spec):
        """Index permutation or trace on the value axes, e.g. ``'lji->lij'``."""
        src, dst = spec.split("->")
        return _TJet(
            np.einsum(f"{src}->{dst}", self.v),
            *(np.einsum(f"{src}...->{dst}...", a) for a in self.d),
        )


def _contract(spec, a: _TJet, b: _TJet) -> _TJet:
    """Leibniz-rule contraction of two tensor jets (orders up to 2)."""
    ins, out = spec.split("->")
    sa, sb = ins.split(",")
    order = min(a.order, b.order)
    v = np.einsum(spec, a.v, b.v)
    tiers = []
    if order >= 1:
        tiers.append(
            np.einsum(f"{sa}Y,{sb}->{out}Y", a.d[0], b.v)
            + np.einsum(f"{sa},{sb}Y->{out}Y", a.v, b.d[0])
        )
    if order >= 2:
        cross = np.einsum(f"{sa}Y,{sb}Z->{out}YZ", a.d[0], b.d[0])
        tiers.append(
            np.einsum(f"{sa}YZ,{sb}->{out}YZ", a.d[1], b.v)
            + cross
            + np.swapaxes(cross, -1, -2)
            + np.einsum(f"{sa},{sb}YZ->{out}YZ", a.v, b.d[1])
        )
    return _TJet(v, *tiers)


def _inverse(G: _TJet, order) -> _TJet:
    gi = _dense_inverse(G.v)
    tiers = []
    if order >= 1:
        gi1 = -np.einsum("ka,abY,bl->klY", gi, G.d[0], gi)
        tiers.append(gi1)
    if order >= 2:
        t = np.einsum("kaZ,abY,bl->klYZ", gi1, G.d[0], gi)
        tiers.append(
            -(t + np.swapaxes(t, -1, -2) + np.einsum("ka,abYZ,bl->klYZ", gi, G.d[1], gi))
        )
    return _TJet(gi, *tiers)


def _dense_inverse(g):
    # LU with partial pivoting (LAPACK gesv)
    return np.linalg.solve(g, np.eye(len(g)))


def _check_degenerate(g):
    n = len(g)
    scale = np.max(np.abs(g)) if g.size else 0.0
    det = np.linalg.det(g)
    threshold = DEGENERACY_RTOL * scale**n
    if not np.isfinite(det) or abs(det) <= threshold:
        raise DegenerateMetric(det, threshold)
    return det


def _sym_last2(t: _TJet, spec) -> _TJet:
    return (t + t.perm(spec)).scale(0.5)


# ---------------------------------------------------------------------------
# point evaluation
# ---------------------------------------------------------------------------


@dataclass
class PointEvaluation:
    """Every tensor the verification suites need at one chart point."""

    point: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    signature: tuple
    condition: float
    dg: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray = None
    riemann_lowered: np.ndarray = None
    ricci: np.ndarray = None
    scal: float = None
    ricci_norm_sq: float = None
    d_christoffel: np.ndarray = None
    nabla_ricci: np.ndarray = None
    d_ricci: np.ndarray = None
    order: int = field(default=2)

    @property
    def dimension(self):
        return len(self.point)

    @property
    def ricci_operator(self):
        """Q^i_j = g^ik S_kj."""
        return self.g_inv @ self.ricci


def evaluate(g: MetricField, p, order: int = 2) -> PointEvaluation:
    """Evaluate the metric pipeline at ``p``.

    ``order`` is the highest metric derivative used: 1 gives the connection,
    2 adds curvature, 3 adds the covariant derivative of the Ricci tensor.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    p = np.asarray(p, dtype=float)
    if p.shape != (g.dimension,):
        raise ValueError(f"point has shape {p.shape}, expected ({g.dimension},)")
    tiers = g.jets(p, order)
    G = _TJet(*tiers)
    _check_degenerate(G.v)
    gi = _inverse(G, order - 1)
    dG = G.shift().truncate(order - 1)
    B = dG.perm("lji->lij") + dG - dG.perm("ijl->lij")
    gamma = _sym_last2(_contract("kl,lij->kij", gi, B).scale(0.5), "kji->kij")

    eigs = np.linalg.eigvalsh(G.v)
    ev = PointEvaluation(
        point=p,
        g=G.v,
        g_inv=gi.v,
        signature=(int(np.sum(eigs > 0)), int(np.sum(eigs < 0))),
        condition=float(np.linalg.cond(G.v)),
        dg=G.d[0],
        christoffel=gamma.v,
        order=order,
    )
    if order < 2:
        return ev

    dgamma = gamma.shift()
    gam = gamma.truncate(dgamma.order)
    R = (
        dgamma.perm("ljki->lkij")
        - dgamma.perm("likj->lkij")
        + _contract("lim,mjk->lkij", gam, gam)
        - _contract("ljm,mik->lkij", gam, gam)
    )
    S = _sym_last2(R.perm("ikij->jk"), "kj->jk")
    ev.d_christoffel = dgamma.v
    ev.riemann = R.v
    ev.riemann_lowered = np.einsum("lm,mkij->lkij", ev.g, R.v)
    ev.ricci = S.v
    ev.scal = float(np.einsum("ij,ij->", ev.g_inv, S.v))
    ev.ricci_norm_sq = float(np.einsum("ik,jl,ij,kl->", ev.g_inv, ev.g_inv, S.v, S.v))
    if order < 3:
        return ev

    dS = np.transpose(S.d[0], (2, 0, 1))  # [k, i, j] = d_k S_ij
    ev.d_ricci = dS
    ev.nabla_ricci = (
        dS
        - np.einsum("mki,mj->kij", ev.christoffel, S.v)
        - np.einsum("mkj,im->kij", ev.christoffel, S.v)
    )
    return ev


def _ev(g, p, ev, order):
    if ev is not None and ev.order >= order:
        return ev
    return evaluate(g, p, order)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def metric_at(g: MetricField, p):
    """Return (g_ij, g^ij, (n_positive, n_negative))."""
    ev = evaluate(g, p, order=1)
    return ev.g, ev.g_inv, ev.signature


def christoffel(g: MetricField, p, ev=None) -> np.ndarray:
    return _ev(g, p, ev, 1).christoffel


def curvature(g: MetricField, p, ev=None) -> PointEvaluation:
    return _ev(g, p, ev, 2)


def nabla_ricci(g: MetricField, p, ev=None) -> np.ndarray:
    return _ev(g, p, ev, 3).nabla_ricci


def vector_jets(X: Sequence[Expr], p):
    """Components X^k and partials dX[k, i] = d_i X^k."""
    vals, d1, _, _ = field_jets(X, p, 1)
    return vals, d1


def nabla_of_vector(g, X: Sequence[Expr], p, ev=None) -> np.ndarray:
    """The (1,1) tensor A[k, i] = (nabla_{d_i} X)^k."""
    gamma = christoffel(g, p, ev)
    x, dx = vector_jets(X, p)
    return dx + np.einsum("kim,m->ki", gamma, x)


def covariant_derivative_vector(g, X, Y, p, ev=None) -> np.ndarray:
    """Components of nabla_X Y."""
    x, _ = vector_jets(X, p)
    return nabla_of_vector(g, Y, p, ev) @ x


def lie_derivative_metric(g, xi, p, ev=None) -> np.ndarray:
    """(L_xi g)(X, Y) = g(nabla_X xi, Y) + g(X, nabla_Y xi)."""
    ev = _ev(g, p, ev, 1)
    a = ev.g @ nabla_of_vector(g, xi, p, ev)  # a[j, i] = g(d_j, nabla_i xi)
    return a + a.T


def lie_derivative_metric_partials(g, xi, p, ev=None) -> np.ndarray:
    """Coordinate formula xi^k d_k g_ij + g_kj d_i xi^k + g_ik d_j xi^k (no connection)."""
    ev = _ev(g, p, ev, 1)
    x, dx = vector_jets(xi, p)
    b = ev.g @ dx  # b[i, j] = g_ik d_j xi^k
    return np.einsum("ijk,k->ij", ev.dg, x) + b + b.T


def gradient(g, f: Expr, p, ev=None) -> np.ndarray:
    ev = _ev(g, p, ev, 1)
    return ev.g_inv @ eval_jet(f, p, 1).d1


def hessian(g, f: Expr, p, ev=None):
    """Return (Hess(f)_ij, Laplacian of f)."""
    ev = _ev(g, p, ev, 1)
    jet = eval_jet(f, p, 2)
    h = jet.d2 - np.einsum("kij,k->ij", ev.christoffel, jet.d1)
    h = 0.5 * (h + h.T)
    return h, float(np.einsum("ij,ij->", ev.g_inv, h))


def divergence(g, xi, p, ev=None) -> float:
    return float(np.trace(nabla_of_vector(g, xi, p, ev)))
