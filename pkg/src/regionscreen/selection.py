"""The atom selection step: exhaustive and screened variants."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .dictionary import DiscreteDictionary, ParametricDictionary, as_signal
from .exceptions import ConfigurationError, ConsistencyError, DimensionError
from .instrumentation import CostCounter
from .regions import MembershipIndex, RegionSet
from .screening import ProbeSet, ScreeningReport, complement_intervals, screen

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
REFINE_TOL = 1e-6


def golden_section_max(f, lo: float, hi: float, tol: float = REFINE_TOL, maxiter: int = 200):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    The bracket endpoints are evaluated too, so a monotone ``f`` returns the
    better endpoint.
    """
    if hi < lo:
        raise ValueError("empty bracket")
    if hi - lo <= tol:
        x = 0.5 * (lo + hi)
        return x, f(x)
    a, b = lo, hi
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = f(x2)
    candidates = [(x1, f1), (x2, f2), (lo, f(lo)), (hi, f(hi))]
    # highest value, ties to the lowest parameter
    return max(candidates, key=lambda p: (p[1], -p[0]))


def select_exhaustive_discrete(r, dictionary: DiscreteDictionary,
                               counter: Optional[CostCounter] = None,
                               exclude=()):
    """Index maximizing ``|<r, a_i>|`` over the whole dictionary (lowest index on ties)."""
    r = as_signal(r, "residual")
    if dictionary.n_atoms == 0:
        raise ConfigurationError("empty dictionary")
    if dictionary.dim != r.shape[0]:
        raise DimensionError("dictionary and residual lengths differ")
    counter = counter if counter is not None else CostCounter()
    if len(exclude):
        keep = np.setdiff1d(np.arange(dictionary.n_atoms), np.asarray(list(exclude), dtype=int))
        if keep.size == 0:
            raise ConfigurationError("every atom is excluded")
        corr = np.abs(counter.correlate(dictionary.atoms[keep], r, "reduced_scan"))
        best = int(np.argmax(corr))
        return int(keep[best]), float(corr[best])
    corr = np.abs(counter.correlate(dictionary.atoms, r, "reduced_scan"))
    best = int(np.argmax(corr))
    return best, float(corr[best])


def _abs_corr_fn(r, dictionary: ParametricDictionary, counter: CostCounter):
    def f(mu):
        return abs(counter.inner(dictionary.atom(mu), r, "reduced_scan"))
    return f


def _scan_interval(r, dictionary: ParametricDictionary, lo: float, hi: float,
                   counter: CostCounter):
    """Grid scan of ``[lo, hi]`` (endpoints included) followed by golden-section refinement."""
    grid = dictionary.grid
    if lo <= grid[0] and hi >= grid[-1]:
        mus, atoms = grid, dictionary.grid_atoms
    elif hi > lo:
        inner = (grid > lo) & (grid < hi)
        mus = np.concatenate([[lo], grid[inner], [hi]])
        atoms = np.vstack([dictionary.atoms([lo]), dictionary.grid_atoms[inner],
                           dictionary.atoms([hi])])
    else:
        mus = np.array([lo])
        atoms = dictionary.atoms(mus)
    vals = np.abs(counter.correlate(atoms, r, "reduced_scan"))
    best = int(np.argmax(vals))
    step = dictionary.grid_resolution
    a = max(lo, mus[best] - step)
    b = min(hi, mus[best] + step)
    mu, val = golden_section_max(_abs_corr_fn(r, dictionary, counter), a, b)
    if vals[best] > val:
        return float(mus[best]), float(vals[best])
    return float(mu), float(val)


def select_exhaustive_continuous(r, dictionary: ParametricDictionary,
                                 counter: Optional[CostCounter] = None):
    """Parameter maximizing ``|<r, a(mu)>|``: grid scan plus local golden-section search."""
    r = as_signal(r, "residual")
    if dictionary.dim != r.shape[0]:
        raise DimensionError("dictionary and residual lengths differ")
    counter = counter if counter is not None else CostCounter()
    lo, hi = dictionary.domain
    return _scan_interval(r, dictionary, lo, hi, counter)


def select_screened(r, dictionary, probe: ProbeSet, regions: RegionSet,
                    counter: Optional[CostCounter] = None,
                    membership: Optional[MembershipIndex] = None,
                    share_probe: bool = True, exclude=()):
    """Screen, then run the exhaustive selection on the surviving atoms only.

    Returns ``(identifier, value, report)`` where the identifier is an atom
    index or a parameter value.
    """
    r = as_signal(r, "residual")
    counter = counter if counter is not None else CostCounter()
    report = screen(r, probe, regions, dictionary, counter, membership, share_probe)

    if isinstance(dictionary, DiscreteDictionary):
        alive = np.ones(dictionary.n_atoms, dtype=bool)
        alive[report.removed] = False
        if len(exclude):
            alive[np.asarray(list(exclude), dtype=int)] = False
        survivors = np.flatnonzero(alive)
        if survivors.size == 0:
            raise ConsistencyError("screening removed every atom")
        corr = np.abs(counter.correlate(dictionary.atoms[survivors], r, "reduced_scan"))
        best = int(np.argmax(corr))
        report.counts = counter.as_dict()
        return int(survivors[best]), float(corr[best]), report

    survivors = complement_intervals(report.removed, dictionary.domain)
    if not survivors:
        raise ConsistencyError("screening removed the whole parameter domain")
    best = None
    for lo, hi in survivors:
        mu, val = _scan_interval(r, dictionary, lo, hi, counter)
        if best is None or val > best[1]:
            best = (mu, val)
    report.counts = counter.as_dict()
    return best[0], best[1], report
