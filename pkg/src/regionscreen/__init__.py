"""Region-based screening for the atom selection step of greedy sparse solvers."""

from .dictionary import (DiscreteDictionary, GaussianDictionary, ParametricDictionary,
                         build_doa_dictionary, build_gaussian_dictionary, inner_product)
from .estimators import ContinuousScreenedPursuit, ScreenedPursuit
from .exceptions import ConfigurationError, ConsistencyError, DimensionError, DomainError
from .instrumentation import CostCounter, counted_inner_product
from .regions import (DomeRegion, MembershipIndex, RegionSet, SphereRegion, dome_max_abs,
                      members_discrete, members_interval, region_max_abs, sphere_max_abs,
                      tune_epsilon_dome, tune_epsilon_sphere)
from .screening import ProbeSet, ScreeningReport, compute_tau, screen
from .selection import select_exhaustive_continuous, select_exhaustive_discrete, select_screened
from .solvers import AtomSelector, SolverConfig, SparseSolution, mp_iterate, omp_iterate, pursuit

__version__ = "0.1.0"
