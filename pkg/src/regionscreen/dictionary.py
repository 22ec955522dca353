"""Discrete and parametric dictionaries of unit-norm atoms."""

from __future__ import annotations

import csv
from functools import cached_property
from typing import Callable

import numpy as np

from .exceptions import ConfigurationError, DimensionError, DomainError

NORM_TOL = 1e-12


def as_signal(values, name: str = "signal") -> np.ndarray:
    """Validate and return a finite 1-D float array."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise DimensionError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def inner_product(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise DimensionError(f"length mismatch: {u.shape} vs {v.shape}")
    return float(np.dot(u, v))


class DiscreteDictionary:
    """A finite collection of ``n`` unit-norm atoms of length ``m``.

    Atoms are stored row-wise in ``atoms`` (shape ``(n, m)``); ``labels`` holds
    an optional parameter per atom (e.g. the arrival angle).
    """

    def __init__(self, atoms, labels=None):
        atoms = np.array(atoms, dtype=float)
        if atoms.ndim != 2 or atoms.shape[0] < 1 or atoms.shape[1] < 1:
            raise ConfigurationError(f"atoms must be a non-empty (n, m) array, got {atoms.shape}")
        norms = np.linalg.norm(atoms, axis=1)
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ConfigurationError("dictionary atoms must have unit l2 norm")
        if labels is not None:
            labels = np.asarray(labels)
            if labels.shape != (atoms.shape[0],):
                raise ConfigurationError("one label per atom is required")
            labels.setflags(write=False)
        atoms.setflags(write=False)
        self.atoms = atoms
        self.labels = labels

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[0]

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    def __len__(self):
        return self.n_atoms

    def atom(self, index: int) -> np.ndarray:
        return self.atoms[index]

    def to_csv(self, path) -> None:
        """Write one atom per row (debugging aid)."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for row in self.atoms:
                writer.writerow(repr(float(x)) for x in row)


def steering_vectors(angles, m: int) -> np.ndarray:
    """Realified, normalized ULA steering vectors, one row per angle.

    The array has ``m // 2`` sensors at half-wavelength spacing with the phase
    reference at the array centroid; the complex response
    ``exp(i*pi*j*sin(theta))`` is stacked as ``[real, imag]``. A centred
    reference keeps the real inner product between neighbouring angles close
    to the magnitude of the complex one.
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    j = np.arange(m // 2) - (m // 2 - 1) / 2.0
    phase = np.pi * np.outer(np.sin(angles), j)
    vecs = np.hstack([np.cos(phase), np.sin(phase)])
    return vecs / np.linalg.norm(vecs, axis=1, keepdims=True)


def build_doa_dictionary(n: int = 1000, m: int = 100,
                         angle_range=(-np.pi / 2, np.pi / 2)) -> DiscreteDictionary:
    """Steering-vector dictionary on a uniform grid of ``n`` arrival angles."""
    if n < 2:
        raise ConfigurationError("n must be at least 2")
    if m < 2 or m % 2:
        raise ConfigurationError("m must be even: real and imaginary parts are stacked")
    lo, hi = map(float, angle_range)
    if not (-np.pi / 2 <= lo < hi <= np.pi / 2):
        raise ConfigurationError("angle range must be an increasing sub-interval of [-pi/2, pi/2]")
    angles = np.linspace(lo, hi, n)
    return DiscreteDictionary(steering_vectors(angles, m), labels=angles)


class ParametricDictionary:
    """Continuous dictionary ``{a(mu) : mu in [lo, hi]}``.

    ``synthesize`` maps an array of parameters to an array of unit-norm atoms
    (one row each). ``grid_resolution`` is the spacing of the finite sampling
    used by the exhaustive baseline.
    """

    def __init__(self, synthesize: Callable[[np.ndarray], np.ndarray], domain,
                 grid_resolution: float = 0.01):
        lo, hi = map(float, domain)
        if not lo < hi:
            raise ConfigurationError("domain must be a non-degenerate interval")
        if grid_resolution <= 0:
            raise ConfigurationError("grid_resolution must be positive")
        self._synthesize = synthesize
        self.domain = (lo, hi)
        self.grid_resolution = float(grid_resolution)

    def _check_domain(self, mus: np.ndarray) -> None:
        lo, hi = self.domain
        if np.any(mus < lo) or np.any(mus > hi) or not np.all(np.isfinite(mus)):
            raise DomainError(f"parameter outside domain [{lo}, {hi}]")

    def atoms(self, mus) -> np.ndarray:
        mus = np.atleast_1d(np.asarray(mus, dtype=float))
        self._check_domain(mus)
        return self._synthesize(mus)

    def atom(self, mu: float) -> np.ndarray:
        return self.atoms([mu])[0]

    @property
    def dim(self) -> int:
        return self.atom(self.domain[0]).shape[0]

    @cached_property
    def grid(self) -> np.ndarray:
        lo, hi = self.domain
        count = int(round((hi - lo) / self.grid_resolution)) + 1
        return np.linspace(lo, hi, max(count, 2))

    @cached_property
    def grid_atoms(self) -> np.ndarray:
        """Atoms synthesized on ``grid``, cached (read-only)."""
        out = self.atoms(self.grid)
        out.setflags(write=False)
        return out

    def to_csv(self, path) -> None:
        DiscreteDictionary(self.grid_atoms).to_csv(path)


class GaussianDictionary(ParametricDictionary):
    """Sampled Gaussian pulses with mean ``mu`` and variance ``sigma2``.

    Each atom is ``exp(-(s - mu)**2 / (2 sigma2))`` on ``m`` uniform samples of
    the parameter range, normalized after truncation to the window.
    """

    def __init__(self, mu_range=(0.0, 100.0), sigma2: float = 10.0, m: int = 500,
                 grid_resolution: float = 0.01):
        if sigma2 <= 0:
            raise ConfigurationError("sigma2 must be positive")
        if m < 2:
            raise ConfigurationError("m must be at least 2")
        self.sigma2 = float(sigma2)
        self.m = int(m)
        self.samples = np.linspace(float(mu_range[0]), float(mu_range[1]), self.m)
        super().__init__(self._gaussians, mu_range, grid_resolution)

    def _gaussians(self, mus: np.ndarray) -> np.ndarray:
        vals = np.exp(-((self.samples[None, :] - mus[:, None]) ** 2) / (2 * self.sigma2))
        return vals / np.linalg.norm(vals, axis=1, keepdims=True)

    @property
    def dim(self) -> int:
        return self.m


def build_gaussian_dictionary(mu_range=(0.0, 100.0), sigma2: float = 10.0,
                              m: int = 500, grid_resolution: float = 0.01) -> GaussianDictionary:
    return GaussianDictionary(mu_range, sigma2, m, grid_resolution)
