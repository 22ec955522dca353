import numpy as np
import pytest

from regionscreen import (DiscreteDictionary, build_doa_dictionary, build_gaussian_dictionary,
                          inner_product)
from regionscreen.exceptions import ConfigurationError, DimensionError, DomainError


def test_inner_product_identity_and_orthogonality():
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    assert inner_product(e1, e1) == 1.0
    assert inner_product(e1, e2) == 0.0


def test_inner_product_matches_naive_loop(rng):
    u, v = rng.standard_normal(100), rng.standard_normal(100)
    naive = 0.0
    for a, b in zip(u.tolist(), v.tolist()):
        naive += a * b
    assert inner_product(u, v) == pytest.approx(naive, abs=1e-12)


def test_inner_product_length_mismatch():
    with pytest.raises(DimensionError):
        inner_product(np.ones(3), np.ones(4))


def test_doa_dictionary_default_setup(doa_dict):
    assert doa_dict.atoms.shape == (1000, 100)
    norms = np.sqrt(np.sum(doa_dict.atoms ** 2, axis=1))
    assert np.max(np.abs(norms - 1.0)) <= 1e-12
    assert doa_dict.labels[0] == pytest.approx(-np.pi / 2)
    assert doa_dict.labels[-1] == pytest.approx(np.pi / 2)


def test_doa_dictionary_minimal_instance():
    d = build_doa_dictionary(2, 4, (0.0, 0.1))
    assert d.atoms.shape == (2, 4)
    assert not np.allclose(d.atoms[0], d.atoms[1])
    assert np.allclose(np.linalg.norm(d.atoms, axis=1), 1.0, atol=1e-12)


def test_doa_dictionary_reproducible(doa_dict):
    again = build_doa_dictionary(1000, 100)
    assert np.array_equal(again.atoms, doa_dict.atoms)


@pytest.mark.parametrize("n,m,rng_", [(1000, 99, (-1, 1)), (1, 100, (-1, 1)), (10, 10, (-2, 1)),
                                     (10, 10, (0.5, 0.1))])
def test_doa_dictionary_bad_config(n, m, rng_):
    with pytest.raises(ConfigurationError):
        build_doa_dictionary(n, m, rng_)


def test_discrete_dictionary_rejects_non_unit_atoms():
    with pytest.raises(ConfigurationError):
        DiscreteDictionary(np.ones((3, 4)))


def test_dictionary_is_immutable(doa_dict):
    with pytest.raises(ValueError):
        doa_dict.atoms[0, 0] = 1.0


def test_gaussian_self_correlation(gauss_dict):
    a = gauss_dict.atom(50.0)
    assert inner_product(a, a) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("mu1,mu2", [(50.0, 50.0), (50.0, 52.5), (40.0, 47.0), (30.0, 39.0),
                                     (60.0, 55.5)])
def test_gaussian_correlation_matches_continuum(gauss_dict, mu1, mu2):
    # continuum: int g(s-mu1) g(s-mu2) ds / int g^2 = exp(-(mu1-mu2)^2 / (4 sigma2))
    expected = np.exp(-(mu1 - mu2) ** 2 / (4 * 10.0))
    got = inner_product(gauss_dict.atom(mu1), gauss_dict.atom(mu2))
    assert got == pytest.approx(expected, abs=1e-3)


def test_gaussian_correlation_strictly_decreasing(gauss_dict):
    mu0 = 50.0
    offsets = np.linspace(0.0, 20.0, 2001)
    corr = gauss_dict.atoms(mu0 + offsets) @ gauss_dict.atom(mu0)
    assert np.all(np.diff(corr) < 0)
    corr_left = gauss_dict.atoms(mu0 - offsets) @ gauss_dict.atom(mu0)
    assert np.all(np.diff(corr_left) < 0)


def test_gaussian_unit_norm_everywhere(gauss_dict):
    atoms = gauss_dict.atoms(np.linspace(0, 100, 1001))
    assert np.max(np.abs(np.linalg.norm(atoms, axis=1) - 1.0)) <= 1e-12


def test_gaussian_distance_identity_and_monotonicity(gauss_dict):
    for mu0 in (10.0, 50.0, 85.0):
        a0 = gauss_dict.atom(mu0)
        deltas = np.linspace(0, 100 - mu0, 500)
        atoms = gauss_dict.atoms(mu0 + deltas)
        dist2 = np.sum((atoms - a0) ** 2, axis=1)
        assert np.allclose(dist2, 2 - 2 * atoms @ a0, atol=1e-12)
        assert np.all(np.diff(np.sqrt(dist2)) >= -1e-12)


def test_gaussian_continuity(gauss_dict):
    a = gauss_dict.atom(33.3)
    gaps = [np.linalg.norm(gauss_dict.atom(33.3 + h) - a) for h in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert all(x > y for x, y in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-4


def test_gaussian_domain_error(gauss_dict):
    with pytest.raises(DomainError):
        gauss_dict.atom(100.5)
    with pytest.raises(DomainError):
        gauss_dict.atom(-1e-3)


@pytest.mark.parametrize("kw", [{"sigma2": 0.0}, {"m": 1}, {"mu_range": (5.0, 5.0)}])
def test_gaussian_bad_config(kw):
    with pytest.raises(ConfigurationError):
        build_gaussian_dictionary(**kw)


def test_grid_resolution_default(gauss_dict):
    assert gauss_dict.grid_resolution == 0.01
    assert gauss_dict.grid.size == 10001
    assert np.allclose(np.diff(gauss_dict.grid), 0.01)


def test_atom_csv_roundtrip(tmp_path):
    d = build_doa_dictionary(5, 6, (-0.3, 0.3))
    path = tmp_path / "atoms.csv"
    d.to_csv(path)
    back = np.loadtxt(path, delimiter=",")
    assert np.array_equal(back, d.atoms)
