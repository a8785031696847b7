"""Layered normalized min-sum decoding.

Messages live on the edges of H.  One iteration walks the layer schedule;
within a layer every check j computes, for each of its variables i,

    q_i     = posterior_i - c2v[i, j]
    c2v'    = alpha * sign-product of the other q * smallest other |q|
    posterior_i += c2v' - c2v[i, j]

so posteriors absorb message changes immediately (layers see each other's
updates within the same iteration).  Hard decisions and the syndrome are
taken at iteration boundaries only; a zero syndrome freezes the output.

The engine evaluates whole layers (and whole frame batches) at once on
padded index grids.  Within a conflict-free layer the checks touch disjoint
variables, so the combined scatter is race-free; layers of a compromised
(merged) schedule fall back to pre-layer posterior snapshots with summed
deltas, which is what the single gather/scatter pair computes naturally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BinaryMatrix, mat_vec_mod2
from .schedule import LayerSchedule, build_schedule


@dataclass(frozen=True)
class DecoderConfig:
    alpha: float
    max_iter: int
    schedule: LayerSchedule
    clip_llr: float | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.clip_llr is not None and self.clip_llr <= 0:
            raise ValueError(f"clip_llr must be positive, got {self.clip_llr}")


def default_config(H: BinaryMatrix, alpha: float = 0.75, max_iter: int = 5, clip_llr: float | None = None) -> DecoderConfig:
    return DecoderConfig(alpha=alpha, max_iter=max_iter, schedule=build_schedule(H), clip_llr=clip_llr)


@dataclass
class DecoderState:
    """Reference per-check state: posteriors plus edge messages in row-support order."""

    H: BinaryMatrix
    channel_llr: np.ndarray
    posterior_llr: np.ndarray
    c2v: np.ndarray  # flat, edges of check j at edge_offset[j] : edge_offset[j + 1]
    edge_offset: np.ndarray

    def check_messages(self, j: int) -> np.ndarray:
        return self.c2v[self.edge_offset[j] : self.edge_offset[j + 1]]


@dataclass(frozen=True)
class DecodeOutcome:
    hard_decisions: np.ndarray
    posterior_llr: np.ndarray
    syndrome: np.ndarray
    syndrome_weight: int
    iterations_run: int
    converged: bool


def _checked_llr(channel_llr, n_cols: int) -> np.ndarray:
    llr = np.asarray(channel_llr, dtype=np.float64)
    if llr.shape != (n_cols,):
        raise ValueError(f"expected {n_cols} channel LLRs, got shape {llr.shape}")
    if not np.isfinite(llr).all():
        raise ValueError("channel LLRs must be finite")
    return llr


def init_state(H: BinaryMatrix, channel_llr) -> DecoderState:
    llr = _checked_llr(channel_llr, H.cols)
    offsets = np.zeros(H.rows + 1, dtype=np.int64)
    np.cumsum([len(s) for s in H.row_support], out=offsets[1:])
    return DecoderState(
        H=H,
        channel_llr=llr,
        posterior_llr=llr.copy(),
        c2v=np.zeros(int(offsets[-1])),
        edge_offset=offsets,
    )


def process_check(state: DecoderState, j: int, alpha: float) -> DecoderState:
    """One min-sum update of check j with immediate posterior absorption."""
    idx = state.H.row_support[j]
    old = state.check_messages(j)
    q = state.posterior_llr[idx] - old
    signs = np.where(q >= 0.0, 1.0, -1.0)
    if len(idx) == 1:
        new = alpha * q  # lone variable: pass the message through
    else:
        two = np.partition(np.abs(q), 1)[:2]
        excl = np.full(len(idx), two[0])
        excl[np.argmin(np.abs(q))] = two[1]
        new = alpha * signs.prod() * signs * excl
    state.posterior_llr[idx] += new - old
    old[:] = new
    return state


class _LayerGrid:
    """Padded (check, slot) index grid for one layer."""

    def __init__(self, H: BinaryMatrix, checks: tuple[int, ...]):
        degs = [len(H.row_support[j]) for j in checks]
        if min(degs) == 0:
            raise ValueError("decoder requires every check to touch at least one variable")
        self.width = max(degs)
        idx = np.full((len(checks), self.width), H.cols, dtype=np.int64)
        for row, j in enumerate(checks):
            idx[row, : degs[row]] = H.row_support[j]
        self.idx = idx
        self.flat = idx.ravel()
        self.mask = idx < H.cols
        self.deg1 = np.asarray(degs) == 1
        real = self.flat[self.flat < H.cols]
        self.conflict_free = len(np.unique(real)) == len(real)
        self.checks = checks


class _Engine:
    def __init__(self, H: BinaryMatrix, schedule: LayerSchedule):
        members = sorted(c for layer in schedule.layers for c in layer)
        if members != list(range(H.rows)):
            raise ValueError("schedule layers must partition the checks of H")
        self.H = H
        self.n = H.cols
        self.grids = [_LayerGrid(H, layer) for layer in schedule.layers]
        self.Ht = H.to_dense().T.astype(np.float64)

    def _layer_pass(self, grid: _LayerGrid, post: np.ndarray, c2v: np.ndarray, alpha: float) -> None:
        q = post[:, grid.idx] - c2v
        signs = np.where(q >= 0.0, 1.0, -1.0)
        if grid.width == 1:
            new = alpha * q
        else:
            absq = np.abs(q)
            part = np.partition(absq, 1, axis=2)
            mins = np.where(
                np.arange(grid.width)[None, None, :] == np.argmin(absq, axis=2)[:, :, None],
                part[:, :, 1:2],
                part[:, :, 0:1],
            )
            new = alpha * signs.prod(axis=2)[:, :, None] * signs * mins
            if grid.deg1.any():
                new = np.where(grid.deg1[None, :, None], alpha * q, new)
        new = np.where(grid.mask[None, :, :], new, 0.0)
        delta = (new - c2v).reshape(post.shape[0], -1)
        c2v[:] = new
        if grid.conflict_free:
            post[:, grid.flat] += delta
        else:
            np.add.at(post, (np.arange(post.shape[0])[:, None], grid.flat[None, :]), delta)

    def run(self, llrs: np.ndarray, config: DecoderConfig):
        frames = llrs.shape[0]
        post = np.concatenate([llrs, np.full((frames, 1), np.inf)], axis=1)
        c2v = [np.zeros((frames, g.idx.shape[0], g.width)) for g in self.grids]
        alive = np.arange(frames)
        hard = np.empty((frames, self.n), dtype=np.uint8)
        posterior = np.empty((frames, self.n))
        syn_weight = np.zeros(frames, dtype=np.int64)
        iters = np.zeros(frames, dtype=np.int64)
        converged = np.zeros(frames, dtype=bool)
        for it in range(1, config.max_iter + 1):
            for grid, messages in zip(self.grids, c2v):
                self._layer_pass(grid, post, messages, config.alpha)
                if config.clip_llr is not None:
                    np.clip(post[:, : self.n], -config.clip_llr, config.clip_llr, out=post[:, : self.n])
            bits = post[:, : self.n] < 0.0
            weight = ((bits.astype(np.float64) @ self.Ht) % 2.0).sum(axis=1).astype(np.int64)
            done = (weight == 0) | (it == config.max_iter)
            if done.any():
                sel = alive[done]
                hard[sel] = bits[done]
                posterior[sel] = post[done, : self.n]
                syn_weight[sel] = weight[done]
                iters[sel] = it
                converged[sel] = weight[done] == 0
                keep = ~done
                if not keep.any():
                    break
                post = post[keep]
                c2v = [m[keep] for m in c2v]
                alive = alive[keep]
        return hard, posterior, syn_weight, iters, converged


def _engine_for(H: BinaryMatrix, schedule: LayerSchedule) -> _Engine:
    # engines ride along on the matrix they were built from
    per_h = H.__dict__.setdefault("_engines", {})
    if schedule not in per_h:
        per_h[schedule] = _Engine(H, schedule)
    return per_h[schedule]


@dataclass(frozen=True)
class BatchDecodeResult:
    hard_decisions: np.ndarray
    posterior_llr: np.ndarray
    syndrome_weight: np.ndarray
    iterations_run: np.ndarray
    converged: np.ndarray


def decode_many(channel_llrs: np.ndarray, H: BinaryMatrix, config: DecoderConfig) -> BatchDecodeResult:
    """Decode a (frames, n) block of channel LLRs in one vectorized pass."""
    llrs = np.asarray(channel_llrs, dtype=np.float64)
    if llrs.ndim != 2 or llrs.shape[1] != H.cols:
        raise ValueError(f"expected (frames, {H.cols}) LLRs, got shape {llrs.shape}")
    if not np.isfinite(llrs).all():
        raise ValueError("channel LLRs must be finite")
    hard, posterior, syn_weight, iters, conv = _engine_for(H, config.schedule).run(llrs, config)
    return BatchDecodeResult(hard, posterior, syn_weight, iters, conv)


def batch_row_outcome(batch: BatchDecodeResult, row: int, H: BinaryMatrix) -> DecodeOutcome:
    """Single-frame view of one batch row, with the syndrome vector
    recomputed sparsely and cross-checked against the engine's weight."""
    hard = batch.hard_decisions[row]
    syndrome = mat_vec_mod2(H, hard)
    weight = int(syndrome.sum())
    if weight != int(batch.syndrome_weight[row]):
        raise AssertionError("syndrome disagreement between engine and sparse check")
    return DecodeOutcome(
        hard_decisions=hard,
        posterior_llr=batch.posterior_llr[row],
        syndrome=syndrome,
        syndrome_weight=weight,
        iterations_run=int(batch.iterations_run[row]),
        converged=bool(batch.converged[row]),
    )


def decode(channel_llr, H: BinaryMatrix, config: DecoderConfig) -> DecodeOutcome:
    llr = _checked_llr(channel_llr, H.cols)
    return batch_row_outcome(decode_many(llr[None, :], H, config), 0, H)
