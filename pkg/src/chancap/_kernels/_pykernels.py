"""Numpy implementation of the hot kernels.

Same surface as the compiled backend; used as the import-time fallback and
as the reference in the backend-equivalence tests.
"""

from __future__ import annotations

import numpy as np


def entropy_psd(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits of a Hermitian PSD matrix.

    Round-off negatives in the spectrum contribute 0.
    """
    w = np.linalg.eigvalsh(rho)
    pos = w[w > 0]
    return float(-np.sum(pos * np.log2(pos)))


def apply_kraus_pure(kraus: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Channel output sum_k (K_k psi)(K_k psi)^dag for a pure input.

    `kraus` is a (terms, dout, din) stack, `psi` a din vector.
    """
    v = kraus @ psi
    return np.einsum("ki,kj->ij", v, v.conj())


def apply_kraus_dm(kraus: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Channel output sum_k K_k rho K_k^dag for a density-matrix input."""
    return np.einsum("kij,jl,kml->im", kraus, rho, kraus.conj(), optimize=True)


def chi_pure_ensemble(kraus: np.ndarray, psis: np.ndarray, probs: np.ndarray) -> float:
    """Holevo quantity of a pure-state ensemble through a Kraus-stack channel.

    `psis` is an (m, din) array of unit vectors, `probs` an (m,) probability
    vector.  Returns S(avg output) - sum_j p_j S(output_j) in bits.
    """
    m = psis.shape[0]
    dout = kraus.shape[1]
    avg = np.zeros((dout, dout), dtype=np.complex128)
    member = 0.0
    for j in range(m):
        out = apply_kraus_pure(kraus, psis[j])
        avg += probs[j] * out
        member += probs[j] * entropy_psd(out)
    return entropy_psd(avg) - member
