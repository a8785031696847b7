"""Sparse GF(2) matrices and the small amount of linear algebra the codec needs."""

from __future__ import annotations

import numpy as np

__all__ = [
    "BinaryMatrix",
    "mat_vec_mod2",
    "rank_mod2",
    "nullspace_mod2",
    "min_distance_bruteforce",
    "read_alist",
    "write_alist",
]


def as_bit_vector(v, length: int | None = None) -> np.ndarray:
    """Validate and return a 1-D uint8 array with entries in {0, 1}."""
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D bit vector, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit vector entries must be 0 or 1")
    if length is not None and arr.size != length:
        raise ValueError(f"expected length {length}, got {arr.size}")
    return arr.astype(np.uint8)


class BinaryMatrix:
    """Immutable sparse matrix over GF(2) with row and column adjacency views.

    Supports are kept as sorted int32 index arrays, one per row and one per
    column, so both the decoder (row-major walks) and the conflict graph
    builder (column-major walks) get their natural access pattern.
    """

    def __init__(self, rows: int, cols: int, row_support):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(row_support) != rows:
            raise ValueError(f"need {rows} row supports, got {len(row_support)}")
        self.rows = rows
        self.cols = cols
        sup = []
        for r, idx in enumerate(row_support):
            a = np.asarray(sorted(set(int(i) for i in idx)), dtype=np.int32)
            if a.size and (a[0] < 0 or a[-1] >= cols):
                raise ValueError(f"row {r} has column index out of range [0, {cols})")
            a.setflags(write=False)
            sup.append(a)
        self.row_support = tuple(sup)
        cols_acc: list[list[int]] = [[] for _ in range(cols)]
        for r, a in enumerate(self.row_support):
            for c in a:
                cols_acc[int(c)].append(r)
        col_sup = []
        for c in range(cols):
            a = np.asarray(cols_acc[c], dtype=np.int32)  # already sorted by row order
            a.setflags(write=False)
            col_sup.append(a)
        self.col_support = tuple(col_sup)
        self._dense: np.ndarray | None = None

    @classmethod
    def from_dense(cls, dense) -> "BinaryMatrix":
        d = np.asarray(dense)
        if d.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {d.shape}")
        if d.size and not np.isin(d, (0, 1)).all():
            raise ValueError("matrix entries must be 0 or 1")
        return cls(d.shape[0], d.shape[1], [np.flatnonzero(row) for row in d])

    def to_dense(self) -> np.ndarray:
        if self._dense is None:
            d = np.zeros((self.rows, self.cols), dtype=np.uint8)
            for r, idx in enumerate(self.row_support):
                d[r, idx] = 1
            d.setflags(write=False)
            self._dense = d
        return self._dense

    def row_weights(self) -> np.ndarray:
        return np.array([a.size for a in self.row_support], dtype=np.int64)

    def col_weights(self) -> np.ndarray:
        return np.array([a.size for a in self.col_support], dtype=np.int64)

    @property
    def n_edges(self) -> int:
        return int(sum(a.size for a in self.row_support))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(np.array_equal(a, b) for a, b in zip(self.row_support, other.row_support))
        )

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols}, {self.n_edges} ones)"


def mat_vec_mod2(H: BinaryMatrix, v) -> np.ndarray:
    """H @ v over GF(2); v has one entry per column of H."""
    bits = as_bit_vector(v, length=H.cols)
    out = np.empty(H.rows, dtype=np.uint8)
    for r, idx in enumerate(H.row_support):
        out[r] = int(bits[idx].sum()) & 1
    return out


def _eliminate(dense: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce a uint8 copy to reduced row-echelon form, returning pivots."""
    m = dense.astype(np.uint8).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.flatnonzero(m[r:, c]) + r
        if hits.size == 0:
            continue
        if hits[0] != r:
            m[[r, hits[0]]] = m[[hits[0], r]]
        below = np.flatnonzero(m[:, c])
        below = below[below != r]
        m[below] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank_mod2(H: BinaryMatrix) -> int:
    _, pivots = _eliminate(H.to_dense())
    return len(pivots)


def nullspace_mod2(H: BinaryMatrix, max_cols: int = 64) -> list[np.ndarray]:
    """Basis of {x : Hx = 0}; size is cols - rank.

    max_cols bounds the problem size since callers typically go on to
    enumerate spans; pass a larger value explicitly when that is intended.
    """
    if H.cols > max_cols:
        raise ValueError(f"nullspace_mod2 limited to {max_cols} columns, H has {H.cols}")
    rref, pivots = _eliminate(H.to_dense())
    free = [c for c in range(H.cols) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(H.cols, dtype=np.uint8)
        x[f] = 1
        # each pivot row reads "x[pivot] = sum of its free-column entries"
        for r, p in enumerate(pivots):
            if rref[r, f]:
                x[p] = 1
        basis.append(x)
    return basis


def min_distance_bruteforce(H: BinaryMatrix, max_dim: int = 20) -> int:
    """Exact minimum distance by enumerating the full nullspace span.

    Gray-code order touches one basis vector per step, so the whole
    2**dim - 1 sweep is XORs and popcounts on packed integers.
    """
    basis = nullspace_mod2(H, max_cols=max(H.cols, 64))
    dim = len(basis)
    if dim == 0:
        raise ValueError("code has only the zero codeword, minimum distance undefined")
    if dim > max_dim:
        raise ValueError(f"nullspace dimension {dim} exceeds brute-force bound {max_dim}")
    packed = [int.from_bytes(np.packbits(b).tobytes(), "big") for b in basis]
    best = H.cols + 1
    cur = 0
    prev_gray = 0
    for i in range(1, 1 << dim):
        gray = i ^ (i >> 1)
        cur ^= packed[(gray ^ prev_gray).bit_length() - 1]
        prev_gray = gray
        w = cur.bit_count()
        if 0 < w < best:
            best = w
    return best


def write_alist(H: BinaryMatrix, path) -> None:
    """Write the standard alist text format (1-based indices, no padding)."""
    lines = [f"{H.cols} {H.rows}"]
    cw, rw = H.col_weights(), H.row_weights()
    lines.append(f"{cw.max(initial=0)} {rw.max(initial=0)}")
    lines.append(" ".join(str(int(w)) for w in cw))
    lines.append(" ".join(str(int(w)) for w in rw))
    for c in range(H.cols):
        lines.append(" ".join(str(int(r) + 1) for r in H.col_support[c]))
    for r in range(H.rows):
        lines.append(" ".join(str(int(c) + 1) for c in H.row_support[r]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alist(path) -> BinaryMatrix:
    with open(path) as fh:
        chunks = [ln.split() for ln in fh.read().splitlines()]
    while chunks and not chunks[-1]:
        chunks.pop()
    if len(chunks) < 4:
        raise ValueError(f"{path}: truncated alist header")
    try:
        cols, rows = (int(x) for x in chunks[0][:2])
        col_deg = [int(x) for x in chunks[2]]
        row_deg = [int(x) for x in chunks[3]]
    except (ValueError, IndexError) as exc:
        raise ValueError(f"{path}: malformed alist header: {exc}") from None
    if len(col_deg) != cols or len(row_deg) != rows:
        raise ValueError(f"{path}: degree list lengths disagree with {cols} cols / {rows} rows")
    while len(chunks) < 4 + cols + rows:  # trailing empty-support lines may be trimmed
        chunks.append([])
    row_support: list[list[int]] = [[] for _ in range(rows)]
    for c in range(cols):
        entries = [int(x) for x in chunks[4 + c] if int(x) != 0]  # 0 entries are padding
        if len(entries) != col_deg[c]:
            raise ValueError(f"{path}: column {c + 1} lists {len(entries)} rows, declared {col_deg[c]}")
        for r in entries:
            if not 1 <= r <= rows:
                raise ValueError(f"{path}: column {c + 1} references row {r} out of range")
            row_support[r - 1].append(c)
    H = BinaryMatrix(rows, cols, row_support)
    for r in range(rows):
        declared = [int(x) for x in chunks[4 + cols + r] if int(x) != 0]
        if sorted(declared) != [int(c) + 1 for c in H.row_support[r]]:
            raise ValueError(f"{path}: row {r + 1} support disagrees with column lists")
    return H
