"""Kronecker/Hadamard utilities and the factored evaluations built on them.

Matrices are plain 2-D numpy arrays; binary ones use ``uint8``.  Large
Kronecker products are never materialised by the compiler: quadratic
forms ``x^T (A kron B) x`` are evaluated through :func:`kron_quadratic`.
"""

from __future__ import annotations

import numpy as np

DEFAULT_MAX_ENTRIES = 10**7
REL_TOL = 1e-9


class SizeOverflowError(ValueError):
    """Raised when a dense product would exceed the configured entry cap."""


def _as_matrix(a, name: str) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    return a


def _as_vector(v, name: str) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {v.shape}")
    return v


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def ones(rows: int, cols: int) -> np.ndarray:
    return np.ones((rows, cols), dtype=np.uint8)


def is_binary(a) -> bool:
    a = np.asarray(a)
    return bool(np.all((a == 0) | (a == 1)))


def kronecker(A, B, max_entries: int = DEFAULT_MAX_ENTRIES) -> np.ndarray:
    """Dense Kronecker product; block ``(i, j)`` of the result is ``A[i, j] * B``.

    Raises :class:`SizeOverflowError` when the result would hold more than
    ``max_entries`` entries.
    """
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    rows = A.shape[0] * B.shape[0]
    cols = A.shape[1] * B.shape[1]
    if rows * cols > max_entries:
        raise SizeOverflowError(
            f"kronecker result {rows}x{cols} exceeds cap of {max_entries} entries"
        )
    return np.kron(A, B)


def hadamard(u, v) -> np.ndarray:
    u = _as_vector(u, "u")
    v = _as_vector(v, "v")
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    return u * v


def quad_form_trace(x, A, B, y) -> float:
    """Evaluate ``x^T (A o B) y`` as ``tr(diag(x) A diag(y) B^T)``.

    The trace is taken without forming the product matrix: its diagonal is
    ``x_i * sum_j A_ij y_j B_ij``.
    """
    x = _as_vector(x, "x").astype(float)
    y = _as_vector(y, "y").astype(float)
    A = _as_matrix(A, "A").astype(float)
    B = _as_matrix(B, "B").astype(float)
    if A.shape != B.shape:
        raise ValueError(f"A and B shapes differ: {A.shape} vs {B.shape}")
    if x.shape[0] != A.shape[0] or y.shape[0] != A.shape[1]:
        raise ValueError(
            f"dimension mismatch: x{x.shape}, A{A.shape}, y{y.shape}"
        )
    # diag(diag(x) A diag(y) B^T)_i = x_i * (A diag(y) B^T)_ii
    diag = x * np.einsum("ij,j,ij->i", A, y, B)
    return float(diag.sum())


def quad_form_direct(x, A, B, y) -> float:
    """Reference evaluation of ``x^T (A o B) y`` by forming the Hadamard product."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(x @ (np.asarray(A, dtype=float) * np.asarray(B, dtype=float)) @ y)


def kron_compose(X, Y, W, Z, max_entries: int = DEFAULT_MAX_ENTRIES) -> np.ndarray:
    """Return ``(X kron W)(Y kron Z)`` computed as ``XY kron WZ``."""
    X = _as_matrix(X, "X")
    Y = _as_matrix(Y, "Y")
    W = _as_matrix(W, "W")
    Z = _as_matrix(Z, "Z")
    if X.shape[1] != Y.shape[0]:
        raise ValueError(f"inner dimension mismatch X{X.shape} @ Y{Y.shape}")
    if W.shape[1] != Z.shape[0]:
        raise ValueError(f"inner dimension mismatch W{W.shape} @ Z{Z.shape}")
    return kronecker(X @ Y, W @ Z, max_entries=max_entries)


def kron_matvec(A, B, x) -> np.ndarray:
    """``(A kron B) x`` without materialising the Kronecker product.

    With ``x`` reshaped row-major to ``X`` of shape ``(A.cols, B.cols)`` the
    product is ``vec(A X B^T)``.  Leading batch axes on ``x`` are kept.
    """
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    x = np.asarray(x)
    if x.ndim < 1 or x.shape[-1] != A.shape[1] * B.shape[1]:
        raise ValueError(
            f"x has trailing length {x.shape[-1:]}, expected {A.shape[1] * B.shape[1]}"
        )
    dt = np.result_type(A.dtype, B.dtype, x.dtype, np.int64)
    X = x.reshape(*x.shape[:-1], A.shape[1], B.shape[1]).astype(dt, copy=False)
    out = np.einsum("ij,...jk,lk->...il", A.astype(dt), X, B.astype(dt), optimize=True)
    return out.reshape(*x.shape[:-1], A.shape[0] * B.shape[0])


def kron_quadratic(x, A, B):
    """``x^T (A kron B) x`` through the factored form (batched over leading axes)."""
    x = np.asarray(x)
    val = np.einsum("...i,...i->...", x, kron_matvec(A, B, x))
    return float(val) if np.ndim(val) == 0 else val


def block_sum(x, block: int) -> np.ndarray:
    """``(I kron 1_{1 x block}) x``: sums consecutive runs of ``block`` entries."""
    x = np.asarray(x)
    if block < 1 or x.shape[-1] % block:
        raise ValueError(f"length {x.shape[-1]} is not a multiple of {block}")
    return x.reshape(*x.shape[:-1], -1, block).sum(axis=-1)


def allclose_rel(a: float, b: float, rel: float = REL_TOL) -> bool:
    scale = max(abs(a), abs(b), 1.0)
    return abs(a - b) <= rel * scale
