"""Johnson-Lindenstrauss sketches for compressing N x r gradient matrices.

Two operator families are provided:

* Gaussian embedding, entries i.i.d. N(0, 1/m).
* Sparse sign embedding: each of the r rows carries exactly ``sparsity``
  nonzeros, each +-1/sqrt(sparsity), placed at distinct uniformly random
  columns.

Both satisfy E||Gamma^T u||^2 = 1 for a unit vector u, so they can be swapped
freely in the moment computations downstream.

Application is streamed over row blocks and computed row by row, so the
sketch of a row never depends on which block it arrived in.
"""

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np
import scipy.sparse as sp

from . import _rng
from .errors import InvalidArgument

DEFAULT_SPARSITY = 8
DEFAULT_BLOCK_ROWS = 256


@dataclass(frozen=True, eq=False)
class SketchOperator:
    """An r x m sketching matrix.

    ``kind`` is ``"gaussian"``, ``"sparse-sign"`` or ``"fixed"`` (an explicit
    matrix wrapped by :meth:`from_matrix`, mostly useful in tests).
    """

    kind: str
    rows: int
    cols: int
    seed: Optional[int]
    sparsity: Optional[int] = None
    _dense: Optional[np.ndarray] = field(default=None, repr=False)
    _sparse_t: Optional[sp.csr_matrix] = field(default=None, repr=False)

    @classmethod
    def from_matrix(cls, matrix):
        matrix = np.array(matrix, dtype=np.float64)
        if matrix.ndim != 2 or min(matrix.shape) < 1:
            raise InvalidArgument("sketch matrix must be a non-empty 2-d array")
        matrix.setflags(write=False)
        return cls("fixed", matrix.shape[0], matrix.shape[1], None, None, matrix)

    def to_dense(self):
        """Materialize the operator as an (r, m) array."""
        if self._dense is not None:
            return self._dense
        return np.asarray(self._sparse_t.T.toarray())

    def apply(self, block):
        block = np.asarray(block, dtype=np.float64)
        if block.ndim != 2 or block.shape[1] != self.rows:
            raise InvalidArgument(
                f"expected a matrix with {self.rows} columns, got shape {block.shape}"
            )
        if self._sparse_t is not None:
            return np.ascontiguousarray((self._sparse_t @ block.T).T)
        out = np.empty((block.shape[0], self.cols))
        # one matvec per row keeps results independent of the block shape
        for i, row in enumerate(block):
            out[i] = row @ self._dense
        return out

    def describe(self):
        return {
            "kind": self.kind,
            "rows": self.rows,
            "cols": self.cols,
            "seed": self.seed,
            "sparsity": self.sparsity,
        }


def _check_dims(r, m):
    if int(r) < 1 or int(m) < 1:
        raise InvalidArgument(f"sketch dimensions must be positive, got r={r}, m={m}")


def build_gaussian_sketch(r, m, seed):
    """Gaussian embedding with i.i.d. N(0, 1/m) entries, reproducible from ``seed``."""
    _check_dims(r, m)
    r, m = int(r), int(m)
    rng = _rng.generator(seed, _rng.SKETCH)
    matrix = rng.standard_normal((r, m)) / np.sqrt(m)
    matrix.setflags(write=False)
    return SketchOperator("gaussian", r, m, int(seed), None, matrix)


def build_sparse_sign_sketch(r, m, sparsity=DEFAULT_SPARSITY, seed=0):
    """Sparse sign embedding with ``sparsity`` nonzeros (+-1/sqrt(sparsity)) per row."""
    _check_dims(r, m)
    r, m, sparsity = int(r), int(m), int(sparsity)
    if not 1 <= sparsity <= m:
        raise InvalidArgument(f"sparsity must lie in [1, m={m}], got {sparsity}")
    rng = _rng.generator(seed, _rng.SKETCH)
    # distinct columns per row: first `sparsity` entries of a random permutation
    cols = np.argsort(rng.random((r, m)), axis=1, kind="stable")[:, :sparsity]
    signs = rng.integers(0, 2, size=(r, sparsity)) * 2.0 - 1.0
    values = signs / np.sqrt(sparsity)
    row_idx = np.repeat(np.arange(r), sparsity)
    gamma = sp.coo_matrix((values.ravel(), (row_idx, cols.ravel())), shape=(r, m))
    return SketchOperator(
        "sparse-sign", r, m, int(seed), sparsity, None, gamma.T.tocsr()
    )


def build_sketch(kind, r, m, seed, sparsity=DEFAULT_SPARSITY):
    if kind == "gaussian":
        return build_gaussian_sketch(r, m, seed)
    if kind == "sparse-sign":
        return build_sparse_sign_sketch(r, m, sparsity, seed)
    raise InvalidArgument(f"unknown sketch kind {kind!r}")


def iter_sketch(blocks: Iterable[np.ndarray], op: SketchOperator) -> Iterator[np.ndarray]:
    """Sketch a stream of row blocks, yielding one (rows, m) block per input block."""
    for block in blocks:
        yield op.apply(block)


def apply_sketch(G, op, block_rows=DEFAULT_BLOCK_ROWS):
    """Return ``G @ Gamma`` for an (N, r) matrix ``G``.

    Rows are processed ``block_rows`` at a time; the output is bit-identical
    for any block size.
    """
    G = np.asarray(G, dtype=np.float64)
    if G.ndim != 2:
        raise InvalidArgument("G must be a 2-d array")
    if G.shape[1] != op.rows:
        raise InvalidArgument(
            f"dimension mismatch: G has {G.shape[1]} columns, sketch has {op.rows} rows"
        )
    if block_rows < 1:
        raise InvalidArgument("block_rows must be positive")
    blocks = (G[i : i + block_rows] for i in range(0, G.shape[0], block_rows))
    parts = list(iter_sketch(blocks, op))
    if not parts:
        return np.zeros((0, op.cols))
    return np.vstack(parts)
