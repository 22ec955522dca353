"""scikit-learn style estimators wrapping the screened greedy solvers."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y, column_or_1d

from .dictionary import NORM_TOL, DiscreteDictionary, ParametricDictionary
from .instrumentation import CostCounter
from .solvers import AtomSelector, SolverConfig, pursuit


class ScreenedPursuit(RegressorMixin, BaseEstimator):
    """Greedy sparse coding over a discrete dictionary with screened atom selection.

    Follows the convention of :class:`sklearn.linear_model.OrthogonalMatchingPursuit`:
    ``X`` has shape ``(n_samples, n_atoms)`` with one unit-norm atom per column
    and ``y`` is the signal to approximate.

    Parameters
    ----------
    n_nonzero_coefs : int, default=5
        Number of greedy iterations.
    algorithm : {"omp", "mp"}, default="omp"
    selection : {"screened", "exhaustive"}, default="screened"
    geometry : {"dome", "sphere"}, default="dome"
        Shape of the test regions.
    n_regions : int, default=100
        Number of regions, centered on a regular subsampling of the atoms.
    share_probe : bool, default=True
        Reuse the probe correlations as region-center correlations.

    Attributes
    ----------
    coef_ : ndarray of shape (n_atoms,)
    support_ : ndarray of int
        Selected atom indices in selection order.
    residual_ : ndarray of shape (n_samples,)
    n_iter_ : int
    cost_ : CostCounter
        Inner products counted during fitting.
    reports_ : list of ScreeningReport (``None`` entries when exhaustive)
    """

    def __init__(self, n_nonzero_coefs=5, algorithm="omp", selection="screened",
                 geometry="dome", n_regions=100, share_probe=True):
        self.n_nonzero_coefs = n_nonzero_coefs
        self.algorithm = algorithm
        self.selection = selection
        self.geometry = geometry
        self.n_regions = n_regions
        self.share_probe = share_probe

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        n_regions = min(self.n_regions, X.shape[1])
        SolverConfig(self.n_nonzero_coefs, self.selection, self.algorithm,
                     self.geometry, n_regions, self.share_probe)
        norms = np.linalg.norm(X, axis=0)
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ValueError("columns of X must be unit-norm atoms")
        self.dictionary_ = DiscreteDictionary(X.T)
        self.cost_ = CostCounter()
        selector = AtomSelector(self.dictionary_, self.selection, self.geometry,
                                n_regions, self.share_probe, self.cost_)
        state = pursuit(y, selector, self.n_nonzero_coefs, self.algorithm)
        coef = np.zeros(X.shape[1])
        if state.selected:
            coef[np.asarray(state.selected)] = state.coefficients
        self.coef_ = coef
        self.support_ = np.asarray(state.selected, dtype=int)
        self.residual_ = state.residual
        self.n_iter_ = len(self.cost_.snapshots)
        self.reports_ = state.reports
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_


class ContinuousScreenedPursuit(BaseEstimator):
    """Greedy sparse coding over a parametric (continuous) dictionary.

    ``fit`` takes the sampled signal ``y`` directly; the dictionary is a
    constructor parameter. After fitting, ``params_`` holds the selected atom
    parameters and ``coef_`` their coefficients.
    """

    def __init__(self, dictionary=None, n_nonzero_coefs=5, algorithm="omp",
                 selection="screened", geometry="sphere", n_regions=100, share_probe=True):
        self.dictionary = dictionary
        self.n_nonzero_coefs = n_nonzero_coefs
        self.algorithm = algorithm
        self.selection = selection
        self.geometry = geometry
        self.n_regions = n_regions
        self.share_probe = share_probe

    def fit(self, y, _unused=None):
        if not isinstance(self.dictionary, ParametricDictionary):
            raise ValueError("dictionary must be a ParametricDictionary")
        y = column_or_1d(check_array(np.asarray(y, dtype=float).reshape(-1, 1)))
        if y.shape[0] != self.dictionary.dim:
            raise ValueError(f"y has {y.shape[0]} samples, dictionary atoms have {self.dictionary.dim}")
        SolverConfig(self.n_nonzero_coefs, self.selection, self.algorithm,
                     self.geometry, self.n_regions, self.share_probe)
        self.cost_ = CostCounter()
        selector = AtomSelector(self.dictionary, self.selection, self.geometry,
                                self.n_regions, self.share_probe, self.cost_)
        state = pursuit(y, selector, self.n_nonzero_coefs, self.algorithm)
        self.params_ = np.asarray(state.selected, dtype=float)
        self.coef_ = np.asarray(state.coefficients, dtype=float)
        self.residual_ = state.residual
        self.n_iter_ = len(self.cost_.snapshots)
        self.reports_ = state.reports
        return self

    def predict(self, params=None):
        """Reconstruct the signal from the fitted (or given) atom parameters."""
        check_is_fitted(self, "coef_")
        if params is None:
            params = self.params_
        if len(params) == 0:
            return np.zeros(self.dictionary.dim)
        return self.dictionary.atoms(params).T @ self.coef_
