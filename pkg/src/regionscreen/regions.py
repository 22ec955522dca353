"""Sphere and dome test regions.

For a region ``R`` and residual ``r`` the functions here bound
``max_{a in R} |<r, a>|`` in closed form from the single correlation
``c = <t, r>`` and the residual norm, tune the region size so the bound drops
below a threshold, and map a region back onto dictionary atoms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .dictionary import DiscreteDictionary, ParametricDictionary, as_signal
from .exceptions import ConfigurationError, ConsistencyError, DimensionError
from .instrumentation import CostCounter

BISECTION_TOL = 1e-6
BISECTION_MAXITER = 60


@dataclass(frozen=True)
class SphereRegion:
    """Ball ``{a : ||a - t|| <= radius}``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise ConfigurationError("sphere radius must be nonnegative")


@dataclass(frozen=True)
class DomeRegion:
    """Spherical cap ``{a : <t, a> >= threshold, ||a|| = 1}``; ``t`` is unit-norm."""

    center: np.ndarray
    threshold: float

    def __post_init__(self):
        if not -1.0 <= self.threshold <= 1.0:
            raise ConfigurationError("dome threshold must lie in [-1, 1]")
        if abs(np.linalg.norm(self.center) - 1.0) > 1e-12:
            raise ConfigurationError("dome center must be unit-norm")


Region = Union[SphereRegion, DomeRegion]


# Closed-form maxima. The ``_from_corr`` variants take c = <r, t> and rho = ||r||
# so that callers can share those products.

def sphere_bound(c: float, rho: float, radius: float) -> float:
    return abs(c) + radius * rho


def dome_bound(c: float, rho: float, threshold: float) -> float:
    if rho == 0:
        return 0.0
    if abs(c) >= threshold * rho:
        return rho
    w = math.sqrt(max(rho * rho - c * c, 0.0))
    return threshold * abs(c) + math.sqrt(max(1.0 - threshold * threshold, 0.0)) * w


def _center_corr(r, region, counter):
    if region.center.shape != r.shape:
        raise DimensionError(f"region center has shape {region.center.shape}, residual {r.shape}")
    if counter is None:
        return float(np.dot(region.center, r))
    return counter.inner(region.center, r, "test")


def sphere_max_abs(r, region: SphereRegion, counter: Optional[CostCounter] = None,
                   rho: Optional[float] = None) -> float:
    """Maximum of ``|<r, a>|`` over a sphere region: ``|<r,t>| + radius*||r||``."""
    r = as_signal(r, "residual")
    c = _center_corr(r, region, counter)
    if rho is None:
        rho = float(np.linalg.norm(r))
    return sphere_bound(c, rho, region.radius)


def dome_max_abs(r, region: DomeRegion, counter: Optional[CostCounter] = None,
                 rho: Optional[float] = None) -> float:
    """Maximum of ``|<r, a>|`` over a dome region.

    The maximizer lies in ``span{t, r}``: if ``+-r/||r||`` is inside the cap the
    answer is ``||r||``, otherwise it sits on the cap boundary.
    """
    r = as_signal(r, "residual")
    c = _center_corr(r, region, counter)
    if rho is None:
        rho = float(np.linalg.norm(r))
    return dome_bound(c, rho, region.threshold)


def region_max_abs(r, region: Region, counter=None, rho=None) -> float:
    if isinstance(region, SphereRegion):
        return sphere_max_abs(r, region, counter, rho)
    if isinstance(region, DomeRegion):
        return dome_max_abs(r, region, counter, rho)
    raise TypeError(f"unsupported region type {type(region).__name__}")


# Epsilon tuning.

def tune_sphere_from_corr(c: float, rho: float, tau: float) -> Optional[float]:
    if rho == 0:
        return None
    eps = (tau - abs(c)) / rho
    return eps if eps > 0 else None


def tune_dome_from_corr(c: float, rho: float, tau: float) -> Optional[float]:
    if rho == 0 or tau <= abs(c):
        return None
    if tau > rho:
        return -1.0
    w = math.sqrt(max(rho * rho - c * c, 0.0))
    phi0 = math.atan2(w, abs(c))
    phi = phi0 - math.acos(min(tau / rho, 1.0))
    return math.cos(phi)


def tune_dome_bisection(c: float, rho: float, tau: float, tol: float = 1e-13) -> Optional[float]:
    """Reference root finder for the dome threshold (bisection on the decreasing branch)."""
    if rho == 0 or tau <= abs(c):
        return None
    if tau > rho:
        return -1.0
    lo, hi = abs(c) / rho, 1.0  # dome_bound(lo) = rho >= tau > dome_bound(hi) = |c|
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dome_bound(c, rho, mid) >= tau:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def tune_epsilon_sphere(r, t, tau: float) -> Optional[float]:
    """Largest radius below which the sphere test ``bound < tau`` holds.

    Returns ``None`` when no positive radius passes (or ``r`` is zero).
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    r = as_signal(r, "residual")
    t = as_signal(t, "center")
    if r.shape != t.shape:
        raise DimensionError("center and residual lengths differ")
    return tune_sphere_from_corr(float(np.dot(r, t)), float(np.linalg.norm(r)), tau)


def tune_epsilon_dome(r, t, tau: float) -> Optional[float]:
    """Smallest threshold such that every strictly larger one passes ``bound < tau``.

    ``-1`` means the whole unit sphere passes; ``None`` means no cap does.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    r = as_signal(r, "residual")
    t = as_signal(t, "center")
    if r.shape != t.shape:
        raise DimensionError("center and residual lengths differ")
    return tune_dome_from_corr(float(np.dot(r, t)), float(np.linalg.norm(r)), tau)


# Membership.

def members_discrete(region: Region, dictionary: DiscreteDictionary) -> np.ndarray:
    """Indices of dictionary atoms lying in ``region`` (linear scan)."""
    atoms = dictionary.atoms
    if region.center.shape != (dictionary.dim,):
        raise DimensionError("region and dictionary dimensions differ")
    if isinstance(region, DomeRegion):
        mask = atoms @ region.center >= region.threshold
    else:
        mask = np.linalg.norm(atoms - region.center, axis=1) <= region.radius
    return np.flatnonzero(mask)


class MembershipIndex:
    """Per-center sorted keys so a runtime size resolves by binary search.

    For domes the key is ``<t, a_i>``, for spheres ``||a_i - t||``. Building the
    index charges ``L * n`` products to the ``setup`` category.
    """

    def __init__(self, centers: np.ndarray, dictionary: DiscreteDictionary,
                 geometry: str, counter: Optional[CostCounter] = None):
        if geometry not in ("sphere", "dome"):
            raise ConfigurationError(f"unknown geometry {geometry!r}")
        self.geometry = geometry
        if counter is not None:
            counter.add("setup", centers.shape[0] * dictionary.n_atoms)
        if geometry == "dome":
            keys = centers @ dictionary.atoms.T
        else:
            # direct differences: sqrt(2 - 2<t, a>) loses ~1e-8 near zero distance
            keys = np.stack([np.linalg.norm(dictionary.atoms - t, axis=1) for t in centers])
        self.order = np.argsort(keys, axis=1, kind="stable")
        self.sorted_keys = np.take_along_axis(keys, self.order, axis=1)
        self.n_atoms = dictionary.n_atoms

    def members(self, l: int, eps: float) -> np.ndarray:
        keys = self.sorted_keys[l]
        if self.geometry == "dome":
            start = np.searchsorted(keys, eps, side="left")
            return self.order[l, start:]
        stop = np.searchsorted(keys, eps, side="right")
        return self.order[l, :stop]


def _distance_fn(dictionary: ParametricDictionary, center: np.ndarray):
    def dist(mu):
        return float(np.linalg.norm(dictionary.atom(mu) - center))
    return dist


def _bisect_side(dist, mu_c, edge, eps, counter, tol, maxiter):
    """Largest offset toward ``edge`` whose atom stays within ``eps`` of the center."""
    span = abs(edge - mu_c)
    sign = 1.0 if edge >= mu_c else -1.0
    if span == 0:
        return 0.0
    d_edge = dist(edge)
    if counter is not None:
        counter.add("setup")
    if d_edge <= eps:
        return span
    lo, hi = 0.0, span
    d_lo, d_hi = 0.0, d_edge
    for _ in range(maxiter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        d_mid = dist(mu_c + sign * mid)
        if counter is not None:
            counter.add("setup")
        if d_mid < d_lo - 1e-12 or d_mid > d_hi + 1e-12:
            raise ConsistencyError(
                f"atom distance is not monotone around mu={mu_c} (offset {mid})")
        if d_mid <= eps:
            lo, d_lo = mid, d_mid
        else:
            hi, d_hi = mid, d_mid
    return lo


def members_interval(region: Region, dictionary: ParametricDictionary, center_mu: float,
                     counter: Optional[CostCounter] = None,
                     tol: float = BISECTION_TOL, maxiter: int = BISECTION_MAXITER):
    """Parameter interval ``[lo, hi]`` of atoms inside a region centred at ``a(center_mu)``.

    Relies on ``||a(mu) - a(center_mu)||`` growing with ``|mu - center_mu|``;
    each side is bisected independently because truncation at the domain edges
    breaks symmetry. The returned bounds are the inner bisection brackets, so
    every returned parameter is certified inside the region. Returns ``None``
    for an empty region.
    """
    if region is None:
        return None
    if isinstance(region, DomeRegion):
        radius = math.sqrt(max(2.0 - 2.0 * region.threshold, 0.0))
    else:
        radius = region.radius
    lo_dom, hi_dom = dictionary.domain
    dist = _distance_fn(dictionary, region.center)
    if radius == 0:
        return (center_mu, center_mu)
    left = _bisect_side(dist, center_mu, lo_dom, radius, counter, tol, maxiter)
    right = _bisect_side(dist, center_mu, hi_dom, radius, counter, tol, maxiter)
    return (max(center_mu - left, lo_dom), min(center_mu + right, hi_dom))


@dataclass
class RegionSet:
    """``L`` regions sharing one geometry.

    ``centers`` holds one center per row; ``labels`` identifies each center
    in the dictionary (atom index for discrete dictionaries, parameter value for
    continuous ones). ``sizes`` fixes the radius/threshold per region; when
    ``None`` the sizes are tuned against each residual.
    """

    geometry: str
    centers: np.ndarray
    labels: np.ndarray
    sizes: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.geometry not in ("sphere", "dome"):
            raise ConfigurationError(f"unknown geometry {self.geometry!r}")
        self.centers = np.asarray(self.centers, dtype=float)
        self.labels = np.asarray(self.labels)
        if self.centers.ndim != 2 or self.centers.shape[0] < 1:
            raise ConfigurationError("a region set needs at least one center")
        if self.labels.shape[0] != self.centers.shape[0]:
            raise ConfigurationError("one label per center is required")
        if self.sizes is not None:
            self.sizes = np.asarray(self.sizes, dtype=float)
            if self.sizes.shape != (len(self),):
                raise ConfigurationError("one size per region is required")

    def __len__(self):
        return self.centers.shape[0]

    def region(self, l: int, size: float) -> Region:
        if self.geometry == "sphere":
            return SphereRegion(self.centers[l], size)
        return DomeRegion(self.centers[l], size)

    def bound(self, c: float, rho: float, size: float) -> float:
        if self.geometry == "sphere":
            return sphere_bound(c, rho, size)
        return dome_bound(c, rho, size)

    def tune(self, c: float, rho: float, tau: float) -> Optional[float]:
        if self.geometry == "sphere":
            return tune_sphere_from_corr(c, rho, tau)
        return tune_dome_from_corr(c, rho, tau)

    @classmethod
    def subsample(cls, dictionary: DiscreteDictionary, n_regions: int, geometry: str,
                  sizes=None) -> "RegionSet":
        """Regions centered on a regular subsampling of a discrete dictionary."""
        if not 1 <= n_regions <= dictionary.n_atoms:
            raise ConfigurationError("n_regions must lie in [1, n_atoms]")
        idx = regular_subsample(dictionary.n_atoms, n_regions)
        return cls(geometry, dictionary.atoms[idx], idx, sizes)

    @classmethod
    def parametric(cls, dictionary: ParametricDictionary, n_regions: int, geometry: str,
                   sizes=None) -> "RegionSet":
        """Regions centered on a regular subsampling of the parameter domain."""
        if n_regions < 1:
            raise ConfigurationError("n_regions must be positive")
        lo, hi = dictionary.domain
        mus = np.linspace(lo, hi, n_regions) if n_regions > 1 else np.array([(lo + hi) / 2])
        return cls(geometry, dictionary.atoms(mus), mus, sizes)


def regular_subsample(n: int, count: int) -> np.ndarray:
    """``count`` evenly spread indices in ``range(n)``, offset to cell centres."""
    return (np.arange(count) * n) // count + n // (2 * count)
