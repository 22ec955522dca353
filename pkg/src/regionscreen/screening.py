"""Region-based elimination of atoms that cannot win the selection step."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .dictionary import DiscreteDictionary, ParametricDictionary, as_signal
from .exceptions import ConfigurationError, DimensionError
from .instrumentation import CostCounter
from .regions import MembershipIndex, RegionSet, members_discrete, members_interval

MERGE_TOL = 1e-9
# Sizes are tuned against tau - SAFETY_RTOL * ||r||. Near tangency (tau ~ ||r||)
# the tuned dome threshold is ill-conditioned and rounding alone can pull the
# probe argmax inside a neighbouring cap.
SAFETY_RTOL = 1e-10


@dataclass
class ProbeSet:
    """Atoms whose best correlation with the residual defines ``tau``.

    ``labels`` are atom indices (discrete) or parameter values (continuous).
    """

    atoms: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.atoms = np.atleast_2d(np.asarray(self.atoms, dtype=float))
        self.labels = np.atleast_1d(np.asarray(self.labels))
        if self.atoms.shape[0] == 0 or self.atoms.size == 0:
            raise ConfigurationError("probe set must be nonempty")
        if self.labels.shape[0] != self.atoms.shape[0]:
            raise ConfigurationError("one label per probe atom is required")

    def __len__(self):
        return self.atoms.shape[0]

    @classmethod
    def from_indices(cls, dictionary: DiscreteDictionary, indices) -> "ProbeSet":
        indices = np.atleast_1d(np.asarray(indices, dtype=int))
        if indices.size == 0:
            raise ConfigurationError("probe set must be nonempty")
        if indices.min() < 0 or indices.max() >= dictionary.n_atoms:
            raise ConfigurationError("probe index outside the dictionary")
        return cls(dictionary.atoms[indices], indices)

    @classmethod
    def from_params(cls, dictionary: ParametricDictionary, mus) -> "ProbeSet":
        mus = np.atleast_1d(np.asarray(mus, dtype=float))
        if mus.size == 0:
            raise ConfigurationError("probe set must be nonempty")
        return cls(dictionary.atoms(mus), mus)

    @classmethod
    def from_regions(cls, regions: RegionSet) -> "ProbeSet":
        return cls(regions.centers, regions.labels)


@dataclass
class RegionOutcome:
    region_id: int
    size: Optional[float]
    value: Optional[float]
    passed: bool
    removed: object  # index array (discrete) or (lo, hi) interval / None (continuous)


@dataclass
class ScreeningReport:
    tau: float
    per_region: list
    removed: object  # sorted index array, or list of merged (lo, hi) intervals
    counts: dict = field(default_factory=dict)
    probe_argmax: object = None

    @property
    def n_passed(self) -> int:
        return sum(o.passed for o in self.per_region)


def compute_tau(r, probe: ProbeSet, counter: Optional[CostCounter] = None):
    """``max |<r, a>|`` over the probe set.

    Returns ``(tau, correlations)``; the correlations are kept so they can be
    reused as region-center products.
    """
    r = as_signal(r, "residual")
    if len(probe) == 0:
        raise ConfigurationError("probe set must be nonempty")
    if probe.atoms.shape[1] != r.shape[0]:
        raise DimensionError("probe atoms and residual lengths differ")
    counter = counter if counter is not None else CostCounter()
    corr = counter.correlate(probe.atoms, r, "tau")
    return float(np.max(np.abs(corr))), corr


def merge_intervals(intervals, tol: float = MERGE_TOL) -> list:
    """Union of closed intervals, coalescing ones that touch within ``tol``."""
    out = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1] + tol:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def complement_intervals(removed, domain) -> list:
    """Closed intervals of the domain not covered by ``removed`` (merged)."""
    lo, hi = domain
    out = []
    cursor = lo
    for a, b in removed:
        if a > cursor:
            out.append((cursor, min(a, hi)))
        cursor = max(cursor, b)
    if cursor < hi:
        out.append((cursor, hi))
    elif not out and not removed:
        out.append((lo, hi))
    return out


def _shares_probe(probe: ProbeSet, regions: RegionSet) -> bool:
    return (len(probe) == len(regions) and probe.atoms.shape == regions.centers.shape
            and np.array_equal(probe.atoms, regions.centers))


def screen(r, probe: ProbeSet, regions: RegionSet,
           dictionary: Union[DiscreteDictionary, ParametricDictionary],
           counter: Optional[CostCounter] = None,
           membership: Optional[MembershipIndex] = None,
           share_probe: bool = True) -> ScreeningReport:
    """Run every region test against ``tau`` and collect the removed atoms.

    Regions with fixed sizes are tested as given; otherwise each size is tuned
    to the largest region that still passes against the current residual, with
    a small safety margin on ``tau`` to absorb rounding.
    When ``share_probe`` is set and the probe set coincides with the region
    centers, the center correlations are reused from the ``tau`` evaluation.
    """
    r = as_signal(r, "residual")
    if regions.centers.shape[1] != r.shape[0]:
        raise DimensionError("region centers and residual lengths differ")
    counter = counter if counter is not None else CostCounter()
    discrete = isinstance(dictionary, DiscreteDictionary)

    tau, probe_corr = compute_tau(r, probe, counter)
    if share_probe and _shares_probe(probe, regions):
        center_corr = probe_corr
    else:
        center_corr = counter.correlate(regions.centers, r, "test")
    rho = counter.norm(r)

    outcomes = []
    removed_mask = np.zeros(dictionary.n_atoms, dtype=bool) if discrete else None
    intervals = []
    for l in range(len(regions)):
        c = float(center_corr[l])
        if regions.sizes is not None:
            size = float(regions.sizes[l])
        else:
            target = tau - SAFETY_RTOL * rho
            size = regions.tune(c, rho, target) if target > 0 else None
        if size is None:
            outcomes.append(RegionOutcome(l, None, None, False, None))
            continue
        value = regions.bound(c, rho, size)
        passed = value < tau
        payload = None
        if passed:
            region = regions.region(l, size)
            if discrete:
                payload = (membership.members(l, size) if membership is not None
                           else members_discrete(region, dictionary))
                removed_mask[payload] = True
            else:
                payload = members_interval(region, dictionary, float(regions.labels[l]), counter)
                if payload is not None:
                    intervals.append(payload)
        outcomes.append(RegionOutcome(l, size, value, passed, payload))

    removed = np.flatnonzero(removed_mask) if discrete else merge_intervals(intervals)
    best = int(np.argmax(np.abs(probe_corr)))
    return ScreeningReport(tau, outcomes, removed, counter.as_dict(), probe.labels[best])
