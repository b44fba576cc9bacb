# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: direct LAPACK zheev calls for the small Hermitian
matrices the optimizer grinds through, plus fused Kraus application.

Results match the numpy backend to solver round-off (different LAPACK
drivers, same matrices).  Dimensions are capped at 64, far above the
desk-scale sizes this package targets.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport NAN, isnan, log2
from libc.string cimport memcpy, memset
from scipy.linalg.cython_lapack cimport zheev

cnp.import_array()

cdef enum:
    MAXN = 64
    LWORK = 4 * MAXN


cdef double _entropy_destroy(double complex* a, int n) noexcept nogil:
    """Entropy in bits from the spectrum of the Hermitian matrix in `a`.

    The buffer is destroyed.  Returns NaN if the eigensolver fails.
    """
    cdef double w[MAXN]
    cdef double complex work[LWORK]
    cdef double rwork[3 * MAXN]
    cdef int info = 0
    cdef int lwork = LWORK
    cdef int i
    cdef char jobz = b'N'
    cdef char uplo = b'L'
    cdef double s = 0.0
    zheev(&jobz, &uplo, &n, a, &n, w, work, &lwork, rwork, &info)
    if info != 0:
        return NAN
    for i in range(n):
        if w[i] > 0.0:
            s -= w[i] * log2(w[i])
    return s


cdef void _pure_output(
    const double complex* kraus, int nk, int dout, int din,
    const double complex* psi, double complex* out,
) noexcept nogil:
    """out = sum_k (K_k psi)(K_k psi)^dag; `out` is overwritten."""
    cdef double complex v[MAXN]
    cdef double complex acc
    cdef int t, i, j
    cdef const double complex* K
    memset(out, 0, dout * dout * sizeof(double complex))
    for t in range(nk):
        K = kraus + t * dout * din
        for i in range(dout):
            acc = 0
            for j in range(din):
                acc += K[i * din + j] * psi[j]
            v[i] = acc
        for i in range(dout):
            for j in range(dout):
                out[i * dout + j] += v[i] * v[j].conjugate()


def entropy_psd(rho):
    """Von Neumann entropy in bits of a Hermitian PSD matrix."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] a = np.ascontiguousarray(
        rho, dtype=np.complex128
    )
    cdef int n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError(f"matrix must be square, got shape ({a.shape[0]}, {a.shape[1]})")
    if n < 1 or n > MAXN:
        raise ValueError(f"dimension {n} outside supported range [1, {MAXN}]")
    cdef double complex buf[MAXN * MAXN]
    cdef double s
    memcpy(buf, cnp.PyArray_DATA(a), n * n * sizeof(double complex))
    with nogil:
        s = _entropy_destroy(buf, n)
    if isnan(s):
        raise np.linalg.LinAlgError("zheev failed to converge")
    return s


def apply_kraus_pure(kraus, psi):
    """Channel output sum_k (K_k psi)(K_k psi)^dag for a pure input."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=3, mode="c"] K = np.ascontiguousarray(
        kraus, dtype=np.complex128
    )
    cdef cnp.ndarray[cnp.complex128_t, ndim=1, mode="c"] p = np.ascontiguousarray(
        psi, dtype=np.complex128
    )
    cdef int nk = K.shape[0]
    cdef int dout = K.shape[1]
    cdef int din = K.shape[2]
    if p.shape[0] != din:
        raise ValueError(f"state dim {p.shape[0]} does not match channel input dim {din}")
    if dout > MAXN or din > MAXN:
        raise ValueError(f"dimension outside supported range [1, {MAXN}]")
    out = np.empty((dout, dout), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] o = out
    with nogil:
        _pure_output(
            <double complex*> cnp.PyArray_DATA(K), nk, dout, din,
            <double complex*> cnp.PyArray_DATA(p),
            <double complex*> cnp.PyArray_DATA(o),
        )
    return out


def apply_kraus_dm(kraus, rho):
    """Channel output sum_k K_k rho K_k^dag for a density-matrix input."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=3, mode="c"] K = np.ascontiguousarray(
        kraus, dtype=np.complex128
    )
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] r = np.ascontiguousarray(
        rho, dtype=np.complex128
    )
    cdef int nk = K.shape[0]
    cdef int dout = K.shape[1]
    cdef int din = K.shape[2]
    if r.shape[0] != din or r.shape[1] != din:
        raise ValueError(
            f"state shape ({r.shape[0]}, {r.shape[1]}) does not match channel input dim {din}"
        )
    if dout > MAXN or din > MAXN:
        raise ValueError(f"dimension outside supported range [1, {MAXN}]")
    out = np.zeros((dout, dout), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] o = out
    cdef double complex* Kd = <double complex*> cnp.PyArray_DATA(K)
    cdef double complex* rd = <double complex*> cnp.PyArray_DATA(r)
    cdef double complex* od = <double complex*> cnp.PyArray_DATA(o)
    cdef double complex tmp[MAXN * MAXN]
    cdef double complex acc
    cdef int t, i, j, l
    cdef double complex* Kt
    with nogil:
        for t in range(nk):
            Kt = Kd + t * dout * din
            for i in range(dout):
                for l in range(din):
                    acc = 0
                    for j in range(din):
                        acc += Kt[i * din + j] * rd[j * din + l]
                    tmp[i * din + l] = acc
            for i in range(dout):
                for j in range(dout):
                    acc = 0
                    for l in range(din):
                        acc += tmp[i * din + l] * Kt[j * din + l].conjugate()
                    od[i * dout + j] += acc
    return out


def chi_pure_ensemble(kraus, psis, probs):
    """Holevo quantity of a pure-state ensemble through a Kraus-stack channel."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=3, mode="c"] K = np.ascontiguousarray(
        kraus, dtype=np.complex128
    )
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] P = np.ascontiguousarray(
        psis, dtype=np.complex128
    )
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] w = np.ascontiguousarray(
        probs, dtype=np.float64
    )
    cdef int nk = K.shape[0]
    cdef int dout = K.shape[1]
    cdef int din = K.shape[2]
    cdef int m = P.shape[0]
    if P.shape[1] != din:
        raise ValueError(f"state dim {P.shape[1]} does not match channel input dim {din}")
    if w.shape[0] != m:
        raise ValueError(f"got {m} states but {w.shape[0]} probabilities")
    if dout > MAXN or din > MAXN:
        raise ValueError(f"dimension outside supported range [1, {MAXN}]")
    cdef double complex* Kd = <double complex*> cnp.PyArray_DATA(K)
    cdef double complex* Pd = <double complex*> cnp.PyArray_DATA(P)
    cdef double* wd = <double*> cnp.PyArray_DATA(w)
    cdef double complex avg[MAXN * MAXN]
    cdef double complex out[MAXN * MAXN]
    cdef double member = 0.0, s_avg, s_j
    cdef int j, i
    cdef bint failed = False
    with nogil:
        memset(avg, 0, dout * dout * sizeof(double complex))
        for j in range(m):
            _pure_output(Kd, nk, dout, din, Pd + j * din, out)
            for i in range(dout * dout):
                avg[i] += wd[j] * out[i]
            s_j = _entropy_destroy(out, dout)
            if isnan(s_j):
                failed = True
                break
            member += wd[j] * s_j
        if not failed:
            s_avg = _entropy_destroy(avg, dout)
            if isnan(s_avg):
                failed = True
    if failed:
        raise np.linalg.LinAlgError("zheev failed to converge")
    return s_avg - member
