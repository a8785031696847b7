"""Construction of fair-density parity-check codes and their systematic encoder.

A base matrix has 2t rows and weight-2 columns whose two ones sit an odd
row-distance apart.  The full matrix replaces the first m_size columns with a
lower bidiagonal block A, vertically stacks num_per + 1 copies of the
remaining columns C (copies beyond the first get a seeded column shuffle),
and punctures the highest-index data columns down to the requested length:

    H = [ A | C; pi_1(C); ...; pi_num_per(C) ]        m_size = 2t (num_per + 1)

Because A is unit lower bidiagonal, parities follow from a running XOR over
the data-part syndrome, and H always has full row rank.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .gf2 import BinaryMatrix, as_bit_vector

log = logging.getLogger("fdpc.code")

BASE_ORDERS = ("base_t1", "base_t2")


def base_width_cap(t: int, base_order: str) -> int:
    return t * t if base_order == "base_t1" else t * (t + 1) // 2


def _check_t(t: int) -> None:
    if t < 2 or t % 2:
        raise ValueError(f"t must be even and at least 2, got {t}")


@dataclass(frozen=True)
class FdpcParams:
    t: int
    num_per: int
    n: int
    k: int
    base_order: str = "base_t1"
    perm_seed: int = 0

    def __post_init__(self):
        _check_t(self.t)
        if self.num_per < 0:
            raise ValueError(f"num_per must be nonnegative, got {self.num_per}")
        if self.base_order not in BASE_ORDERS:
            raise ValueError(f"base_order must be one of {BASE_ORDERS}")
        if not 1 <= self.k < self.n:
            raise ValueError(f"need 1 <= k < n, got n={self.n} k={self.k}")
        if self.n - self.k != self.m_size:
            raise ValueError(
                f"n - k = {self.n - self.k} but 2t(num_per+1) = {self.m_size}; "
                "redundancy must match the stacked block height"
            )
        cap = base_width_cap(self.t, self.base_order)
        if self.n > cap:
            raise ValueError(f"n = {self.n} exceeds the {self.base_order} width {cap} for t = {self.t}")

    @property
    def m_size(self) -> int:
        return 2 * self.t * (self.num_per + 1)


def build_base_t1(t: int) -> BinaryMatrix:
    """All t^2 odd-gap columns, grouped by gap d = 1, 3, ..., 2t-1."""
    _check_t(t)
    rows = 2 * t
    row_support: list[list[int]] = [[] for _ in range(rows)]
    col = 0
    for d in range(1, rows, 2):
        for r in range(rows - d):
            row_support[r].append(col)
            row_support[r + d].append(col)
            col += 1
    return BinaryMatrix(rows, col, row_support)


def build_base_t2(t: int, target_width: int) -> BinaryMatrix:
    """Odd-gap columns placed greedily while avoiding small dependent sets.

    Walking gaps in increasing order, a candidate column is dropped whenever
    it would close a cycle of length 4 or less among the already placed
    columns of gap > 1, i.e. whenever some subset of at most four wide
    columns would sum to zero.  Gap-1 columns are exempt: the encoder
    replaces that region with the bidiagonal block anyway.
    """
    _check_t(t)
    cap = base_width_cap(t, "base_t2")
    if not 1 <= target_width <= cap:
        raise ValueError(f"target_width {target_width} outside [1, t(t+1)/2 = {cap}] for t = {t}")
    rows = 2 * t
    adj: list[set[int]] = [set() for _ in range(rows)]
    pairs: list[tuple[int, int]] = []
    for d in range(1, rows, 2):
        for a in range(rows - d):
            b = a + d
            if d > 1:
                # cycle of length <= 4 through (a, b): a path of 2 or 3 wide edges
                if any(b in adj[x] for x in adj[a]) or any(
                    b in adj[y] for x in adj[a] for y in adj[x] if y != a
                ):
                    continue
                adj[a].add(b)
                adj[b].add(a)
            pairs.append((a, b))
            if len(pairs) == target_width:
                row_support: list[list[int]] = [[] for _ in range(rows)]
                for col, (u, v) in enumerate(pairs):
                    row_support[u].append(col)
                    row_support[v].append(col)
                return BinaryMatrix(rows, col + 1, row_support)
    raise ValueError(
        f"greedy placement reached width {len(pairs)} of the requested {target_width} for t = {t}"
    )


@dataclass(frozen=True)
class FdpcCode:
    params: FdpcParams
    H: BinaryMatrix
    punctured_cols: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def m(self) -> int:
        return self.params.m_size


def build_full_H(params: FdpcParams) -> FdpcCode:
    """Assemble the bidiagonal block, stacked data copies, and puncturing."""
    t, m = params.t, params.m_size
    if params.base_order == "base_t1":
        base = build_base_t1(t)
    else:
        base = build_base_t2(t, params.n)
    if base.cols <= m:
        raise ValueError(f"base width {base.cols} leaves no data columns beyond m_size = {m}")
    C = base.to_dense()[:, m:]
    blocks = [C]
    for i in range(1, params.num_per + 1):
        perm = np.random.default_rng([params.perm_seed, i]).permutation(C.shape[1])
        blocks.append(C[:, perm])
    A = np.eye(m, dtype=np.uint8)
    A[np.arange(1, m), np.arange(m - 1)] = 1
    full = np.concatenate([A, np.concatenate(blocks, axis=0)], axis=1)
    if full.shape[1] < params.n:
        raise ValueError(f"stacked width {full.shape[1]} is narrower than n = {params.n}")
    punctured = tuple(range(params.n, full.shape[1]))  # drop highest-index data columns
    code = FdpcCode(params, BinaryMatrix.from_dense(full[:, : params.n]), punctured)
    weights = code.H.col_weights()
    expected = 2 * (params.num_per + 1)
    if not (weights[m:] == expected).all():
        raise AssertionError(f"data columns should weigh {expected}, got {set(weights[m:])}")
    return code


def encode(code: FdpcCode, message) -> np.ndarray:
    """Systematic encoding: codeword = [parities | message].

    Row i of H reads p[i-1] + p[i] + (data row i) . message = 0, so the
    parity vector is the running XOR of the data-part syndrome.
    """
    m_bits = as_bit_vector(message, length=code.k)
    dense = code.H.to_dense()
    s = (dense[:, code.m :].astype(np.int64) @ m_bits) % 2
    p = np.bitwise_xor.accumulate(s.astype(np.uint8))
    return np.concatenate([p, m_bits])


def encode_many(code: FdpcCode, messages: np.ndarray) -> np.ndarray:
    """Row-wise encode of a (frames, k) message block."""
    if messages.ndim != 2 or messages.shape[1] != code.k:
        raise ValueError(f"expected (frames, {code.k}) messages, got {messages.shape}")
    dense = code.H.to_dense()
    s = (messages.astype(np.int64) @ dense[:, code.m :].T.astype(np.int64)) % 2
    p = np.bitwise_xor.accumulate(s.astype(np.uint8), axis=1)
    return np.concatenate([p, messages.astype(np.uint8)], axis=1)


def solve_params(n: int, k: int, base_order: str = "auto", perm_seed: int = 0) -> FdpcParams:
    """Smallest even t (then num_per) fitting 2t(num_per+1) = n - k and width n.

    With base_order "auto" the triangular base is preferred whenever it can
    actually be built out to width n; otherwise the square base is used.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n} k={k}")
    m = n - k
    if m % 2:
        raise ValueError(f"redundancy n - k = {m} must be even")
    tried = []
    for t in range(2, m // 2 + 1, 2):
        if m % (2 * t):
            continue
        num_per = m // (2 * t) - 1
        orders = [base_order] if base_order != "auto" else ["base_t2", "base_t1"]
        for order in orders:
            if n > base_width_cap(t, order):
                tried.append((t, order, "too narrow"))
                continue
            if order == "base_t2":
                try:
                    build_base_t2(t, n)
                except ValueError:
                    tried.append((t, order, "greedy placement fell short"))
                    continue
            params = FdpcParams(t=t, num_per=num_per, n=n, k=k, base_order=order, perm_seed=perm_seed)
            log.info(
                "solved (n=%d, k=%d) -> t=%d num_per=%d %s", n, k, t, num_per, order
            )
            return params
    detail = "; ".join(f"t={t} {o}: {why}" for t, o, why in tried) or "no even t divides the redundancy"
    raise ValueError(f"no feasible construction for n={n} k={k} ({detail})")


def code_to_descriptor(code: FdpcCode) -> dict:
    p = code.params
    return {
        "t": p.t,
        "num_per": p.num_per,
        "N": p.n,
        "K": p.k,
        "base_order": p.base_order,
        "perm_seed": p.perm_seed,
        "punctured_cols": list(code.punctured_cols),
    }


def code_from_descriptor(d: dict) -> FdpcCode:
    try:
        params = FdpcParams(
            t=int(d["t"]),
            num_per=int(d["num_per"]),
            n=int(d["N"]),
            k=int(d["K"]),
            base_order=str(d["base_order"]),
            perm_seed=int(d["perm_seed"]),
        )
    except KeyError as exc:
        raise ValueError(f"descriptor missing field {exc}") from None
    code = build_full_H(params)
    stored = tuple(int(c) for c in d.get("punctured_cols", code.punctured_cols))
    if stored != code.punctured_cols:
        raise ValueError("descriptor puncture list disagrees with deterministic construction")
    return code
