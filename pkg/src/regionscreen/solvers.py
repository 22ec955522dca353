"""Matching pursuit and orthogonal matching pursuit built on the selection step."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

from .dictionary import DiscreteDictionary, ParametricDictionary, as_signal
from .exceptions import ConfigurationError, DimensionError
from .instrumentation import CostCounter
from .regions import MembershipIndex, RegionSet
from .screening import ProbeSet
from .selection import (select_exhaustive_continuous, select_exhaustive_discrete,
                        select_screened)

RANK_RTOL = 1e-10
ZERO_RTOL = 1e-12  # residual this small relative to y counts as an exact fit


class IncrementalQR:
    """Thin QR factorization grown one column at a time.

    Columns are orthogonalized by modified Gram-Schmidt with one
    reorthogonalization pass, which keeps ``Q`` orthonormal to working
    precision for the small supports greedy solvers build.
    """

    def __init__(self, m: int):
        self.Q = np.empty((m, 0))
        self.R = np.empty((0, 0))

    @property
    def n_columns(self) -> int:
        return self.Q.shape[1]

    def append(self, a, rtol: float = RANK_RTOL) -> bool:
        """Add column ``a``; returns False (and leaves the factorization alone) if it is dependent."""
        a = np.asarray(a, dtype=float)
        k = self.n_columns
        w = a.copy()
        coeffs = np.zeros(k)
        for _ in range(2):
            for j in range(k):
                proj = np.dot(self.Q[:, j], w)
                coeffs[j] += proj
                w -= proj * self.Q[:, j]
        norm = np.linalg.norm(w)
        if norm <= rtol * max(np.linalg.norm(a), 1.0):
            return False
        R = np.zeros((k + 1, k + 1))
        R[:k, :k] = self.R
        R[:k, k] = coeffs
        R[k, k] = norm
        self.R = R
        self.Q = np.column_stack([self.Q, w / norm])
        return True

    def solve(self, y) -> np.ndarray:
        """Least-squares coefficients of ``y`` on the current columns."""
        if self.n_columns == 0:
            return np.empty(0)
        return solve_triangular(self.R, self.Q.T @ y)

    def residual(self, y) -> np.ndarray:
        return y - self.Q @ (self.Q.T @ y)


@dataclass
class SparseSolution:
    """Current support, coefficients and residual of a greedy solver."""

    selected: list
    coefficients: np.ndarray
    residual: np.ndarray
    atoms: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    stopped: bool = False
    qr: Optional[IncrementalQR] = None

    @classmethod
    def empty(cls, y) -> "SparseSolution":
        y = as_signal(y, "observation")
        return cls([], np.empty(0), y.copy(), qr=IncrementalQR(y.shape[0]))

    @property
    def k(self) -> int:
        return len(self.selected)

    def approximation(self) -> np.ndarray:
        if not self.atoms:
            return np.zeros_like(self.residual)
        return np.asarray(self.atoms).T @ self.coefficients


@dataclass
class SolverConfig:
    n_iterations: int = 5
    selection: str = "screened"
    solver: str = "omp"
    geometry: str = "dome"
    n_regions: int = 100
    share_probe: bool = True
    grid_resolution: float = 0.01
    refine_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.n_iterations < 1:
            raise ConfigurationError("n_iterations must be at least 1")
        if self.selection not in ("exhaustive", "screened"):
            raise ConfigurationError(f"unknown selection mode {self.selection!r}")
        if self.solver not in ("mp", "omp"):
            raise ConfigurationError(f"unknown solver {self.solver!r}")
        if self.geometry not in ("sphere", "dome"):
            raise ConfigurationError(f"unknown region geometry {self.geometry!r}")
        if self.grid_resolution <= 0:
            raise ConfigurationError("grid_resolution must be positive")
        if self.n_regions < 1:
            raise ConfigurationError("n_regions must be positive")


class AtomSelector:
    """Binds a dictionary to a selection mode and a cost counter.

    In screened mode the regions are centered on a regular subsampling of the
    dictionary and the probe set is the set of region centers. Centers stay
    fixed across solver iterations; region sizes are retuned on every call.
    """

    def __init__(self, dictionary, selection: str = "screened", geometry: str = "dome",
                 n_regions: int = 100, share_probe: bool = True,
                 counter: Optional[CostCounter] = None):
        self.dictionary = dictionary
        self.selection = selection
        self.share_probe = share_probe
        self.counter = counter if counter is not None else CostCounter()
        self.discrete = isinstance(dictionary, DiscreteDictionary)
        if not self.discrete and not isinstance(dictionary, ParametricDictionary):
            raise ConfigurationError("unsupported dictionary type")
        self.regions = self.probe = self.membership = None
        if selection == "screened":
            if self.discrete:
                self.regions = RegionSet.subsample(dictionary, n_regions, geometry)
                self.membership = MembershipIndex(self.regions.centers, dictionary,
                                                  geometry, self.counter)
            else:
                self.regions = RegionSet.parametric(dictionary, n_regions, geometry)
            self.probe = ProbeSet.from_regions(self.regions)
        elif selection != "exhaustive":
            raise ConfigurationError(f"unknown selection mode {selection!r}")

    def select(self, r, exclude=()):
        """Returns ``(identifier, value, atom, report)``; ``report`` is None when exhaustive."""
        report = None
        if self.selection == "screened":
            ident, value, report = select_screened(
                r, self.dictionary, self.probe, self.regions, self.counter,
                self.membership, self.share_probe, exclude if self.discrete else ())
        elif self.discrete:
            ident, value = select_exhaustive_discrete(r, self.dictionary, self.counter, exclude)
        else:
            ident, value = select_exhaustive_continuous(r, self.dictionary, self.counter)
        atom = self.dictionary.atom(ident)
        return ident, value, atom, report


def _exact_fit(y, state: SparseSolution) -> bool:
    return np.linalg.norm(state.residual) <= ZERO_RTOL * np.linalg.norm(y)


def mp_iterate(y, state: SparseSolution, selector: AtomSelector) -> SparseSolution:
    """One matching-pursuit step: ``r <- r - <r, a> a`` for the selected atom."""
    if _exact_fit(y, state):
        state.stopped = True
        return state
    ident, value, atom, report = selector.select(state.residual)
    if value == 0.0:
        state.stopped = True
        return state
    coef = float(np.dot(state.residual, atom))
    state.residual = state.residual - coef * atom
    state.reports.append(report)
    if ident in state.selected:
        pos = state.selected.index(ident)
        state.coefficients[pos] += coef
    else:
        state.selected.append(ident)
        state.atoms.append(atom)
        state.coefficients = np.append(state.coefficients, coef)
    return state


def omp_iterate(y, state: SparseSolution, selector: AtomSelector) -> SparseSolution:
    """One OMP step: select, then refit every selected coefficient by least squares.

    A selected atom that is linearly dependent on the current support is
    rejected and the selection rerun without it (discrete dictionaries); for
    continuous dictionaries the solver stops instead.
    """
    y = as_signal(y, "observation")
    if y.shape != state.residual.shape:
        raise DimensionError("observation and residual lengths differ")
    if _exact_fit(y, state):
        state.stopped = True
        return state
    rejected = set()
    while True:
        ident, value, atom, report = selector.select(state.residual, tuple(sorted(rejected)))
        if value == 0.0:
            state.stopped = True
            return state
        if state.qr.append(atom):
            break
        if not selector.discrete:
            state.stopped = True
            return state
        rejected.add(ident)
        if len(rejected) >= selector.dictionary.n_atoms:
            state.stopped = True
            return state
    state.selected.append(ident)
    state.atoms.append(atom)
    state.reports.append(report)
    state.coefficients = state.qr.solve(y)
    state.residual = state.qr.residual(y)
    return state


def pursuit(y, selector: AtomSelector, n_iterations: int, solver: str = "omp") -> SparseSolution:
    """Run ``n_iterations`` of MP or OMP, snapshotting the counter after each."""
    if n_iterations < 1:
        raise ConfigurationError("n_iterations must be at least 1")
    step = {"omp": omp_iterate, "mp": mp_iterate}.get(solver)
    if step is None:
        raise ConfigurationError(f"unknown solver {solver!r}")
    state = SparseSolution.empty(y)
    y = state.residual.copy()
    for _ in range(n_iterations):
        state = step(y, state, selector)
        selector.counter.snapshot()
        if state.stopped:
            break
    return state
