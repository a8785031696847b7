"""Fair-density parity-check codec: construction, layered decoding, simulation."""

__version__ = "0.1.0"

from .channel import ChannelConfig, llr_from_observation, modulate, noise_sigma2, transmit
from .code import (
    FdpcCode,
    FdpcParams,
    base_width_cap,
    build_base_t1,
    build_base_t2,
    build_full_H,
    code_from_descriptor,
    code_to_descriptor,
    encode,
    encode_many,
    solve_params,
)
from .gf2 import (
    BinaryMatrix,
    as_bit_vector,
    mat_vec_mod2,
    min_distance_bruteforce,
    nullspace_mod2,
    rank_mod2,
    read_alist,
    write_alist,
)
from .lnms import (
    BatchDecodeResult,
    DecodeOutcome,
    DecoderConfig,
    batch_row_outcome,
    decode,
    decode_many,
    default_config,
)
from .schedule import (
    ConflictGraph,
    LayerSchedule,
    build_conflict_graph,
    build_schedule,
    force_layer_count,
    greedy_color,
    schedule_summary,
)
from .sgbf import (
    ReliabilityReport,
    SgbfConfig,
    SgbfOutcome,
    build_report,
    failure_counts,
    reliability,
    run_sgbf,
    select_flip_set,
)
from .sim import (
    CSV_HEADER,
    FerRecord,
    FrameReplay,
    SweepConfig,
    replay_frame,
    run_point,
    run_sweep,
)

__all__ = [
    "__version__",
    "BatchDecodeResult",
    "BinaryMatrix",
    "CSV_HEADER",
    "ChannelConfig",
    "ConflictGraph",
    "DecodeOutcome",
    "DecoderConfig",
    "FdpcCode",
    "FdpcParams",
    "FerRecord",
    "FrameReplay",
    "LayerSchedule",
    "ReliabilityReport",
    "SgbfConfig",
    "SgbfOutcome",
    "SweepConfig",
    "as_bit_vector",
    "base_width_cap",
    "batch_row_outcome",
    "build_base_t1",
    "build_base_t2",
    "build_conflict_graph",
    "build_full_H",
    "build_report",
    "build_schedule",
    "code_from_descriptor",
    "code_to_descriptor",
    "decode",
    "decode_many",
    "default_config",
    "encode",
    "encode_many",
    "failure_counts",
    "force_layer_count",
    "greedy_color",
    "llr_from_observation",
    "mat_vec_mod2",
    "min_distance_bruteforce",
    "modulate",
    "noise_sigma2",
    "nullspace_mod2",
    "rank_mod2",
    "read_alist",
    "reliability",
    "replay_frame",
    "run_point",
    "run_sgbf",
    "run_sweep",
    "schedule_summary",
    "select_flip_set",
    "solve_params",
    "transmit",
    "write_alist",
]
