"""Inner-product accounting.

Every m-dimensional inner product evaluated during atom selection is charged
to one of a handful of categories so that screened and exhaustive selection can
be compared on equal footing.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .dictionary import inner_product

CATEGORIES = ("tau", "test", "reduced_scan", "norm", "setup")


@dataclass
class CostCounter:
    """Thread-safe tally of counted inner products.

    ``total`` covers the per-selection categories (tau, test, reduced_scan and
    norm). ``setup`` holds one-time membership precomputation and is reported
    separately.
    """

    tau_cost: int = 0
    test_cost: int = 0
    reduced_scan_cost: int = 0
    norm_cost: int = 0
    setup_cost: int = 0
    snapshots: list = field(default_factory=list)

    def __post_init__(self):
        self._lock = threading.Lock()

    def add(self, category: str, count: int = 1) -> None:
        if category not in CATEGORIES:
            raise ValueError(f"unknown cost category {category!r}")
        if count < 0:
            raise ValueError("counts must be nonnegative")
        attr = f"{category}_cost"
        with self._lock:
            setattr(self, attr, getattr(self, attr) + int(count))

    @property
    def total(self) -> int:
        return self.tau_cost + self.test_cost + self.reduced_scan_cost + self.norm_cost

    def as_dict(self) -> dict:
        with self._lock:
            return {
                "tau_cost": self.tau_cost,
                "test_cost": self.test_cost,
                "reduced_scan_cost": self.reduced_scan_cost,
                "norm_cost": self.norm_cost,
                "setup_cost": self.setup_cost,
                "total": self.tau_cost + self.test_cost
                + self.reduced_scan_cost + self.norm_cost,
            }

    def snapshot(self) -> dict:
        """Record the current counts; call between solver iterations."""
        snap = self.as_dict()
        self.snapshots.append(snap)
        return snap

    def reset(self) -> None:
        with self._lock:
            self.tau_cost = self.test_cost = self.reduced_scan_cost = 0
            self.norm_cost = self.setup_cost = 0
            self.snapshots = []

    # counted primitives

    def inner(self, u, v, category: str) -> float:
        """Single counted inner product."""
        self.add(category)
        return float(np.dot(u, v))

    def correlate(self, atoms, r, category: str) -> np.ndarray:
        """Inner products of every row of ``atoms`` with ``r``, one count each."""
        atoms = np.asarray(atoms)
        self.add(category, atoms.shape[0])
        return atoms @ r

    def norm(self, r, category: str = "norm") -> float:
        self.add(category)
        return float(np.sqrt(np.dot(r, r)))


def counted_inner_product(u, v, category: str, counter: CostCounter) -> float:
    """Return ``<u, v>`` and charge one unit to ``category`` on ``counter``."""
    value = inner_product(u, v)
    counter.add(category)
    return value
