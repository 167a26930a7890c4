"""scikit-learn style wrappers around the pointwise engines.

Samples are rows of coordinates. A spec may be given as a ``ManifoldSpec``
or as the name of a bundled fixture.
"""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from . import solitons, tensors
from .errors import EmptyInput, SpecError, UndeterminedMu
from .structures import DEFAULT_TOL


def check_points(X, dimension=None) -> np.ndarray:
    """Validate sample points: a finite 2-D float array, one row per point."""
    X = np.asarray(X, dtype=float)
    if np.ndim(X) == 1 and dimension is not None and len(X) == dimension:
        X = np.reshape(X, (1, -1))
    if np.size(X) == 0:
        raise EmptyInput("no sample points")
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if dimension is not None and X.shape[1] != dimension:
        raise ValueError(f"points have {X.shape[1]} coordinates, the chart has {dimension}")
    return X


def _spec(spec):
    if isinstance(spec, str):
        from .harness.fixtures import load_fixture

        return load_fixture(spec)
    if spec is None:
        raise SpecError("a manifold spec (or bundled fixture name) is required")
    return spec


class SolitonFitter(BaseEstimator):
    """Least-squares (lambda, mu) of the eta-Ricci soliton equation at each point.

    After ``fit``: ``lambda_`` and ``mu_`` hold the pointwise fits on the
    training points (``mu_`` is nan where it is undetermined), ``residual_``
    the pointwise residuals and ``soliton_type_`` the classification.
    """

    def __init__(self, spec=None, tol=DEFAULT_TOL):
        self.spec = spec
        self.tol = tol

    def _fits(self, X):
        spec = self.spec_
        s = spec.structure
        if s is None:
            raise SpecError(f"{spec.name} has no structure block")
        V = s.xi
        if spec.soliton is not None and spec.soliton.vector is not None:
            V = spec.soliton.vector
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UndeterminedMu)
            return [solitons.solve_soliton(spec.metric, V, s.eta, p) for p in X]

    def fit(self, X, y=None):
        self.spec_ = _spec(self.spec)
        X = check_points(X, self.spec_.dimension)
        fits = self._fits(X)
        self.n_features_in_ = X.shape[1]
        self.lambda_ = np.array([f.lam for f in fits])
        self.mu_ = np.array([np.nan if f.mu is None else f.mu for f in fits])
        self.residual_ = np.array([f.residual for f in fits])
        self.soliton_type_ = solitons.classify_soliton(fits, self.tol)
        return self

    def predict(self, X) -> np.ndarray:
        """(lambda, mu) at each row of X, shape (n_samples, 2)."""
        check_is_fitted(self, "lambda_")
        X = check_points(X, self.n_features_in_)
        fits = self._fits(X)
        return np.array([[f.lam, np.nan if f.mu is None else f.mu] for f in fits])

    def score(self, X, y=None) -> float:
        """Negative largest pointwise residual of the fitted equation (0 is a perfect soliton)."""
        check_is_fitted(self, "lambda_")
        X = check_points(X, self.n_features_in_)
        return -max(f.residual for f in self._fits(X))


CURVATURE_FEATURES = ("scal", "ricci_norm_sq", "det_g")


class CurvatureTransformer(TransformerMixin, BaseEstimator):
    """Map points to scalar curvature invariants (scal, |S|^2, det g by default)."""

    def __init__(self, spec=None, features=CURVATURE_FEATURES):
        self.spec = spec
        self.features = features

    def fit(self, X, y=None):
        self.spec_ = _spec(self.spec)
        unknown = [f for f in self.features if f not in CURVATURE_FEATURES]
        if unknown:
            raise ValueError(f"unknown feature(s) {unknown}; choose from {CURVATURE_FEATURES}")
        X = check_points(X, self.spec_.dimension)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "spec_")
        X = check_points(X, self.n_features_in_)
        rows = []
        for p in X:
            ev = tensors.evaluate(self.spec_.metric, p, order=2)
            values = {"scal": ev.scal, "ricci_norm_sq": ev.ricci_norm_sq, "det_g": np.linalg.det(ev.g)}
            rows.append([values[f] for f in self.features])
        return np.array(rows, dtype=float)
