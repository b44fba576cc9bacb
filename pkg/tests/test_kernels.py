"""Backend equivalence: the compiled kernels must agree with the numpy
fallback to solver round-off."""

import numpy as np
import pytest

from chancap._kernels import _pykernels
from chancap import depolarizing, tensor_channels
from chancap.sampling import random_density_matrix, random_pure_state

cy = pytest.importorskip("chancap._kernels._cykernels")


def test_backend_name_valid():
    from chancap._kernels import BACKEND

    assert BACKEND in ("cython", "python")


@pytest.mark.parametrize("d", [2, 3, 4, 9])
def test_entropy_psd_equivalence(d):
    rng = np.random.default_rng(d)
    for _ in range(20):
        rho = random_density_matrix(d, rng).mat
        assert cy.entropy_psd(rho) == pytest.approx(_pykernels.entropy_psd(rho), abs=1e-12)


def test_entropy_psd_known_values():
    assert cy.entropy_psd(np.eye(2, dtype=complex) / 2) == pytest.approx(1.0, abs=1e-12)
    assert cy.entropy_psd(np.diag([1.0, 0.0]).astype(complex)) == pytest.approx(0.0, abs=1e-12)
    assert cy.entropy_psd(np.diag([0.75, 0.25]).astype(complex)) == pytest.approx(
        0.8112781244591328, abs=1e-12
    )


def test_entropy_psd_clamps_round_off_negatives():
    rho = np.diag([1.0 + 5e-11, -5e-11]).astype(complex)
    assert cy.entropy_psd(rho) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("d,lam", [(2, 0.5), (3, 0.2), (2, -1 / 3)])
def test_apply_kraus_pure_equivalence(d, lam):
    stack = depolarizing(d, lam).stack
    rng = np.random.default_rng(17)
    for _ in range(20):
        psi = random_pure_state(d, rng).amplitudes
        np.testing.assert_allclose(
            cy.apply_kraus_pure(stack, psi),
            _pykernels.apply_kraus_pure(stack, psi),
            atol=1e-13,
        )


def test_apply_kraus_dm_equivalence():
    stack = tensor_channels([depolarizing(2, 0.7), depolarizing(2, 0.4)]).stack
    rng = np.random.default_rng(19)
    for _ in range(10):
        rho = random_density_matrix(4, rng).mat
        np.testing.assert_allclose(
            cy.apply_kraus_dm(stack, rho),
            _pykernels.apply_kraus_dm(stack, rho),
            atol=1e-13,
        )


def test_chi_pure_ensemble_equivalence():
    rng = np.random.default_rng(23)
    stack = tensor_channels([depolarizing(2, 0.8), depolarizing(2, 0.5)]).stack
    for _ in range(10):
        m = int(rng.integers(1, 9))
        psis = rng.normal(size=(m, 4)) + 1j * rng.normal(size=(m, 4))
        psis /= np.linalg.norm(psis, axis=1, keepdims=True)
        probs = rng.dirichlet(np.ones(m))
        assert cy.chi_pure_ensemble(stack, psis, probs) == pytest.approx(
            _pykernels.chi_pure_ensemble(stack, psis, probs), abs=1e-11
        )


def test_dimension_guards():
    with pytest.raises(ValueError):
        cy.entropy_psd(np.eye(65, dtype=complex) / 65)
    with pytest.raises(ValueError):
        cy.apply_kraus_pure(depolarizing(2, 0.5).stack, np.ones(3, dtype=complex))
