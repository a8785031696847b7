"""Monte Carlo frame-error-rate measurement.

Every random draw is derived from (master_seed, point_index, purpose), so a
sweep is reproducible down to the frame regardless of how many points run,
in which order, or across how many worker processes.  Messages come in
deterministic batches keyed by batch index; noise is keyed per frame, which
lets any single frame be regenerated standalone long after the sweep.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import multiprocessing
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .channel import ChannelConfig, llr_from_observation, modulate, transmit
from .code import FdpcCode, build_full_H, code_to_descriptor, encode, encode_many, solve_params
from .lnms import batch_row_outcome, decode, decode_many, default_config
from .sgbf import SgbfConfig, SgbfOutcome, run_sgbf

logger = logging.getLogger("fdpc.sim")
TRACE = 5

CSV_HEADER = (
    "ebno_db,frames,frame_errors,bit_errors,fer,ber,avg_iterations,"
    "sgbf_invocations,sgbf_rescues,undetected_errors,wall_seconds"
)

_MSG_TAG = 0x6D
_NOISE_TAG = 0x6E


@dataclass(frozen=True)
class SweepConfig:
    n: int
    k: int
    ebno_points: tuple
    base_order: str = "auto"
    perm_seed: int = 0
    alpha: float = 0.75
    max_iter: int = 5
    clip_llr: float | None = None
    sgbf_T: int = 128
    master_seed: int = 0
    min_frame_errors: int = 100
    max_frames: int = 10_000_000
    batch_size: int = 2048
    clean: bool = False

    def __post_init__(self):
        object.__setattr__(self, "ebno_points", tuple(float(x) for x in self.ebno_points))
        if not self.ebno_points:
            raise ValueError("at least one Eb/N0 point is required")
        if not all(np.isfinite(self.ebno_points)):
            raise ValueError("Eb/N0 points must be finite")
        if not 0 <= self.sgbf_T <= self.n:
            raise ValueError(f"sgbf_T must be in [0, {self.n}], got {self.sgbf_T}")
        if self.min_frame_errors < 1:
            raise ValueError("min_frame_errors must be at least 1")
        if self.max_frames < 1:
            raise ValueError("max_frames must be at least 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["ebno_points"] = list(self.ebno_points)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        required = {"n", "k", "ebno_points"} - set(d)
        if required:
            raise ValueError(f"missing config keys: {', '.join(sorted(required))}")
        return cls(**d)


@dataclass(frozen=True)
class FerRecord:
    point_index: int
    ebno_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    fer: float
    ber: float
    avg_iterations: float
    sgbf_invocations: int
    sgbf_rescues: int
    undetected_errors: int
    wall_seconds: float
    failing_frames: tuple

    def csv_row(self) -> list:
        return [
            str(self.ebno_db), str(self.frames), str(self.frame_errors),
            str(self.bit_errors), str(self.fer), str(self.ber),
            str(self.avg_iterations), str(self.sgbf_invocations),
            str(self.sgbf_rescues), str(self.undetected_errors),
            str(self.wall_seconds),
        ]

    def replace(self, **changes) -> "FerRecord":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class FrameReplay:
    message: np.ndarray
    codeword: np.ndarray
    channel_llr: np.ndarray
    lnms: object
    sgbf: SgbfOutcome | None
    final_hard: np.ndarray
    frame_error: bool
    undetected: bool


_code_cache: dict = {}


def _code_for(config: SweepConfig) -> FdpcCode:
    key = (config.n, config.k, config.base_order, config.perm_seed)
    if key not in _code_cache:
        params = solve_params(config.n, config.k, config.base_order, config.perm_seed)
        _code_cache[key] = build_full_H(params)
    return _code_cache[key]


def _noise_seed(config: SweepConfig, point_index: int) -> int:
    ss = np.random.SeedSequence([config.master_seed, point_index, _NOISE_TAG])
    return int(ss.generate_state(1, np.uint64)[0])


def _batch_messages(config: SweepConfig, point_index: int, batch_index: int,
                    size: int, k: int) -> np.ndarray:
    ss = np.random.SeedSequence([config.master_seed, point_index, _MSG_TAG, batch_index])
    return np.random.default_rng(ss).integers(0, 2, (size, k), dtype=np.uint8)


def _batch_plan(config: SweepConfig, batch_index: int) -> int:
    """Frames in the given batch; fixed by index so replay and the sweep
    always agree on message draws."""
    start = batch_index * config.batch_size
    return max(0, min(config.batch_size, config.max_frames - start))


def _channel_for(config: SweepConfig, code: FdpcCode, point_index: int) -> ChannelConfig:
    return ChannelConfig(
        ebno_db=config.ebno_points[point_index],
        rate=code.k / code.n,
        seed=_noise_seed(config, point_index),
        clean=config.clean,
    )


def run_point(config: SweepConfig, point_index: int, code: FdpcCode | None = None) -> FerRecord:
    """Measure one Eb/N0 point until the error quota or the frame cap."""
    t0 = time.perf_counter()
    if code is None:
        code = _code_for(config)
    dec_cfg = default_config(code.H, alpha=config.alpha, max_iter=config.max_iter,
                             clip_llr=config.clip_llr)
    sgbf_cfg = SgbfConfig(T=config.sgbf_T) if config.sgbf_T > 0 else None
    channel = _channel_for(config, code, point_index)

    frames = frame_errors = bit_errors = 0
    iter_sum = invocations = rescues = undetected = 0
    failing: list[int] = []
    batch_index = 0
    while True:
        size = _batch_plan(config, batch_index)
        messages = _batch_messages(config, point_index, batch_index, size, code.k)
        codewords = encode_many(code, messages)
        x = modulate(codewords)
        y = np.empty_like(x)
        for i in range(size):
            y[i] = transmit(x[i], channel, frames + i)
        llrs = llr_from_observation(y, channel)

        batch = decode_many(llrs, code.H, dec_cfg)
        iter_sum += int(batch.iterations_run.sum())
        final = batch.hard_decisions.copy()
        clean_syndrome = batch.syndrome_weight == 0
        if sgbf_cfg is not None:
            for r in np.flatnonzero(~clean_syndrome):
                invocations += 1
                res = run_sgbf(batch_row_outcome(batch, r, code.H), llrs[r], code.H,
                               dec_cfg, sgbf_cfg)
                if logger.isEnabledFor(TRACE):
                    logger.log(TRACE, "frame %d: lnms weight %d, sgbf %s",
                               frames + r, int(batch.syndrome_weight[r]),
                               f"rescued via flip {res.chosen_flip}" if res.rescued else "no rescue")
                if res.rescued:
                    rescues += 1
                    final[r] = res.final.hard_decisions
                    clean_syndrome[r] = True

        err_rows = np.flatnonzero((final != codewords).any(axis=1))
        frame_errors += len(err_rows)
        bit_errors += int((final[err_rows] != codewords[err_rows]).sum())
        undetected += int(clean_syndrome[err_rows].sum())
        failing.extend(int(frames + r) for r in err_rows)
        frames += size
        batch_index += 1
        logger.debug("point %d batch %d: %d frames, %d errors so far",
                     point_index, batch_index, frames, frame_errors)
        if frame_errors >= config.min_frame_errors or frames >= config.max_frames:
            break

    record = FerRecord(
        point_index=point_index,
        ebno_db=config.ebno_points[point_index],
        frames=frames,
        frame_errors=frame_errors,
        bit_errors=bit_errors,
        fer=frame_errors / frames,
        ber=bit_errors / (frames * config.n),
        avg_iterations=iter_sum / frames,
        sgbf_invocations=invocations,
        sgbf_rescues=rescues,
        undetected_errors=undetected,
        wall_seconds=time.perf_counter() - t0,
        failing_frames=tuple(failing),
    )
    logger.info("point %d (%.2f dB): fer %.3g over %d frames in %.1fs",
                point_index, record.ebno_db, record.fer, record.frames,
                record.wall_seconds)
    return record


def replay_frame(config: SweepConfig, point_index: int, frame_index: int,
                 code: FdpcCode | None = None) -> FrameReplay:
    """Regenerate and re-decode a single frame from a sweep, standalone."""
    if not 0 <= frame_index < config.max_frames:
        raise ValueError(f"frame {frame_index} is outside the sweep's frame range")
    if code is None:
        code = _code_for(config)
    dec_cfg = default_config(code.H, alpha=config.alpha, max_iter=config.max_iter,
                             clip_llr=config.clip_llr)
    channel = _channel_for(config, code, point_index)

    batch_index, row = divmod(frame_index, config.batch_size)
    size = _batch_plan(config, batch_index)
    message = _batch_messages(config, point_index, batch_index, size, code.k)[row]
    codeword = encode(code, message)
    y = transmit(modulate(codeword), channel, frame_index)
    llr = llr_from_observation(y, channel)

    outcome = decode(llr, code.H, dec_cfg)
    sgbf_res = None
    final = outcome
    if outcome.syndrome_weight > 0 and config.sgbf_T > 0:
        sgbf_res = run_sgbf(outcome, llr, code.H, dec_cfg, SgbfConfig(T=config.sgbf_T))
        final = sgbf_res.final
    frame_error = not np.array_equal(final.hard_decisions, codeword)
    return FrameReplay(
        message=message,
        codeword=codeword,
        channel_llr=llr,
        lnms=outcome,
        sgbf=sgbf_res,
        final_hard=final.hard_decisions,
        frame_error=frame_error,
        undetected=frame_error and final.syndrome_weight == 0,
    )


def _append_row(path: Path, record: FerRecord) -> None:
    with open(path, "a", newline="") as fh:
        csv.writer(fh).writerow(record.csv_row())


def _write_sidecar(path: Path, config: SweepConfig, code: FdpcCode) -> None:
    payload = {
        "config": config.to_dict(),
        "code": code_to_descriptor(code),
        "csv_header": CSV_HEADER,
        "version": __version__,
        "started_utc": datetime.now(timezone.utc).isoformat(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _run_point_star(args) -> FerRecord:
    config, point_index = args
    return run_point(config, point_index)


def run_sweep(config: SweepConfig, csv_path, jobs: int = 1) -> list[FerRecord]:
    """Run every configured point, appending one CSV row per point as it
    finishes.  A JSON sidecar next to the CSV records the full setup.
    Output failures are logged and skipped; the sweep itself carries on."""
    csv_path = Path(csv_path)
    code = _code_for(config)
    try:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        _write_sidecar(Path(str(csv_path) + ".json"), config, code)
        with open(csv_path, "w", newline="") as fh:
            fh.write(CSV_HEADER + "\n")
    except OSError as exc:
        logger.error("could not start output files: %s", exc)

    points = range(len(config.ebno_points))
    records = []
    if jobs > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(jobs) as pool:
            iterator = pool.imap(_run_point_star, [(config, p) for p in points])
            for record in iterator:
                records.append(record)
                try:
                    _append_row(csv_path, record)
                except OSError as exc:
                    logger.error("could not write point %d: %s", record.point_index, exc)
    else:
        for p in points:
            record = run_point(config, p, code)
            records.append(record)
            try:
                _append_row(csv_path, record)
            except OSError as exc:
                logger.error("could not write point %d: %s", record.point_index, exc)
    return records
