"""Dense matrices: validated construction, exact products, norms, and file I/O.

Matrices are plain 2-d float64 numpy arrays, frozen (read-only) after
construction so they can be shared freely across threads.  All index
arguments in this package are 0-based; serialized formats that carry
indices use 1-based values (see :mod:`partsketch.partitions`).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import SpectralNormError


def dense(values) -> np.ndarray:
    """Build a validated, read-only matrix from nested sequences or an array.

    Rejects non-2-d input, empty dimensions, and non-finite entries.
    """
    try:
        a = np.array(values, dtype=np.float64, order="C", copy=True)
    except ValueError as exc:
        raise ValueError(f"not a rectangular matrix: {exc}") from None
    if a.ndim != 2:
        raise ValueError(f"matrix must be 2-d, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    a.flags.writeable = False
    return a


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product ``a @ b``; raises on inner-dimension mismatch."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    return _frozen(a @ b)


def frobenius_norm(a: np.ndarray) -> float:
    """sqrt of the sum of squared entries."""
    return float(np.linalg.norm(a))


def spectral_norm(a: np.ndarray, tol: float = 1e-10, max_iters: int = 10000) -> float:
    """Largest singular value via power iteration on the smaller Gram matrix.

    Deterministic: iteration starts from the normalized all-ones vector and
    stops once the Rayleigh quotient is stable to relative ``tol``.  Raises
    :class:`SpectralNormError` instead of returning a partial answer when the
    budget of ``max_iters`` iterations is exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be positive")
    m, n = a.shape
    gram = a @ a.T if m <= n else a.T @ a
    d = gram.shape[0]
    x = np.full(d, 1.0 / math.sqrt(d))
    lam_prev: float | None = None
    for _ in range(max_iters):
        y = gram @ x
        norm_y = float(np.linalg.norm(y))
        if norm_y == 0.0:
            return 0.0
        lam = float(x @ y)
        if lam_prev is not None and abs(lam - lam_prev) <= tol * abs(lam):
            return math.sqrt(max(lam, 0.0))
        lam_prev = lam
        x = y / norm_y
    raise SpectralNormError(
        f"power iteration did not stabilize to tol={tol} within {max_iters} iterations"
    )


def _block(a: np.ndarray, b: np.ndarray, idx: np.ndarray) -> np.ndarray:
    # Unchecked core of block_product, shared with the sketch engine so that
    # both paths produce bit-identical blocks.
    return a[:, idx] @ b[idx, :]


def block_product(a: np.ndarray, b: np.ndarray, group) -> np.ndarray:
    """Product restricted to one index group: columns ``group`` of ``a`` times rows ``group`` of ``b``.

    Summing this over the groups of any partition of the inner axis recovers
    ``multiply(a, b)``.  Indices are 0-based and must be in range; the group
    must be nonempty.
    """
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    idx = np.asarray(group, dtype=np.intp)
    if idx.ndim != 1 or idx.size == 0:
        raise ValueError("group must be a nonempty 1-d index list")
    if idx.min() < 0 or idx.max() >= a.shape[1]:
        raise ValueError(f"group index out of range [0, {a.shape[1]})")
    return _frozen(_block(a, b, idx))


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def write_csv(a: np.ndarray, path) -> None:
    """One matrix row per line, comma-separated ``repr`` decimals (lossless round trip)."""
    text = "\n".join(",".join(repr(float(v)) for v in row) for row in a) + "\n"
    Path(path).write_text(text)


def read_csv(path) -> np.ndarray:
    rows = []
    for line in Path(path).read_text().strip().splitlines():
        rows.append([float(field) for field in line.split(",")])
    return dense(rows)


def write_binary(a: np.ndarray, path) -> None:
    """Binary layout: int64-LE rows, int64-LE cols, then rows*cols float64-LE row-major."""
    with open(path, "wb") as fh:
        fh.write(np.asarray(a.shape, dtype="<i8").tobytes())
        fh.write(np.ascontiguousarray(a, dtype="<f8").tobytes())


def read_binary(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < 16:
        raise ValueError(f"{path}: truncated header")
    rows, cols = (int(v) for v in np.frombuffer(raw[:16], dtype="<i8"))
    if rows < 1 or cols < 1:
        raise ValueError(f"{path}: invalid dimensions {rows}x{cols}")
    if len(raw) != 16 + rows * cols * 8:
        raise ValueError(f"{path}: payload size does not match header")
    return dense(np.frombuffer(raw[16:], dtype="<f8").reshape(rows, cols))


def read_matrix(path) -> np.ndarray:
    """Dispatch on extension: ``.bin`` binary layout, anything else CSV."""
    if str(path).endswith(".bin"):
        return read_binary(path)
    return read_csv(path)
