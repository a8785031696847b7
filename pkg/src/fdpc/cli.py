"""Command line front end.

Exit codes: 0 on success, 2 for configuration or usage problems, 3 when an
input or output file cannot be accessed.  Log verbosity comes from the
FDPC_LOG environment variable (error, info, debug, trace).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .code import build_full_H, code_from_descriptor, code_to_descriptor, encode, solve_params
from .gf2 import write_alist
from .lnms import decode as lnms_decode
from .lnms import default_config
from .schedule import build_schedule, force_layer_count, schedule_summary
from .sgbf import SgbfConfig, run_sgbf
from .sim import SweepConfig, run_sweep

TRACE = 5
_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO,
               "debug": logging.DEBUG, "trace": TRACE}


def _configure_logging() -> None:
    name = os.environ.get("FDPC_LOG", "error").strip().lower()
    if name not in _LOG_LEVELS:
        raise ValueError(
            f"FDPC_LOG must be one of {', '.join(sorted(_LOG_LEVELS))}; got {name!r}")
    logging.addLevelName(TRACE, "TRACE")
    if not logging.getLogger().handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logging.getLogger().addHandler(handler)
    logging.getLogger("fdpc").setLevel(_LOG_LEVELS[name])


def _parse_bits(text: str, expected: int, what: str) -> np.ndarray:
    stripped = text.strip()
    if not set(stripped) <= {"0", "1"}:
        raise ValueError(f"{what} must be a string of 0/1 characters")
    if len(stripped) != expected:
        raise ValueError(f"{what} length is {len(stripped)}, expected {expected}")
    return np.frombuffer(stripped.encode(), dtype=np.uint8) - ord("0")


def _parse_llrs(text: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.replace(",", " ").split()])
    except ValueError:
        raise ValueError("LLRs must be comma or space separated numbers") from None


def _parse_ebno(spec: str) -> list:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("Eb/N0 range must look like start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError("Eb/N0 range needs step > 0 and stop >= start")
        count = int((stop - start) / step + 1e-9) + 1
        return [round(start + i * step, 10) for i in range(count)]
    return [float(tok) for tok in spec.split(",") if tok.strip()]


def _bitstring(bits: np.ndarray) -> str:
    return "".join(str(int(b)) for b in bits)


def _code_from_args(args):
    if getattr(args, "descriptor", None):
        with open(args.descriptor) as fh:
            return code_from_descriptor(json.load(fh))
    if args.n is None or args.k is None:
        raise ValueError("either --descriptor or both --n and --k are required")
    params = solve_params(args.n, args.k, args.base_order, args.perm_seed)
    return build_full_H(params)


def _add_code_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="block length")
    parser.add_argument("--k", type=int, help="message length")
    parser.add_argument("--base-order", default="auto",
                        choices=["auto", "base_t1", "base_t2"])
    parser.add_argument("--perm-seed", type=int, default=0,
                        help="seed for the permuted column copies")
    parser.add_argument("--descriptor", help="JSON code descriptor to load instead")


def _cmd_construct(args) -> int:
    code = _code_from_args(args)
    if args.alist_out:
        write_alist(code.H, args.alist_out)
    if args.descriptor_out:
        with open(args.descriptor_out, "w") as fh:
            json.dump(code_to_descriptor(code), fh, indent=2)
            fh.write("\n")
    info = {
        "t": code.params.t,
        "num_per": code.params.num_per,
        "base_order": code.params.base_order,
        "perm_seed": code.params.perm_seed,
        "n": code.n,
        "k": code.k,
        "m": code.m,
        "punctured_columns": len(code.punctured_cols),
    }
    print(json.dumps(info, indent=2))
    return 0


def _cmd_encode(args) -> int:
    code = _code_from_args(args)
    message = _parse_bits(args.message, code.k, "message")
    print(_bitstring(encode(code, message)))
    return 0


def _cmd_decode(args) -> int:
    code = _code_from_args(args)
    if args.llr_file:
        llr = _parse_llrs(Path(args.llr_file).read_text())
    elif args.llr:
        llr = _parse_llrs(args.llr)
    else:
        raise ValueError("either --llr or --llr-file is required")
    if llr.shape != (code.n,):
        raise ValueError(f"got {llr.size} LLRs, expected {code.n}")
    cfg = default_config(code.H, alpha=args.alpha, max_iter=args.max_iter,
                         clip_llr=args.clip_llr)
    outcome = lnms_decode(llr, code.H, cfg)
    final = outcome
    sgbf_info = None
    if outcome.syndrome_weight > 0 and args.sgbf_T > 0:
        res = run_sgbf(outcome, llr, code.H, cfg, SgbfConfig(T=args.sgbf_T))
        final = res.final
        sgbf_info = {"rescued": res.rescued, "chosen_flip": res.chosen_flip}
    print(json.dumps({
        "hard": _bitstring(final.hard_decisions),
        "converged": bool(final.converged),
        "iterations": final.iterations_run,
        "syndrome_weight": final.syndrome_weight,
        "sgbf": sgbf_info,
    }, indent=2))
    return 0


def _cmd_schedule_info(args) -> int:
    code = _code_from_args(args)
    schedule = build_schedule(code.H)
    if args.force_layers is not None:
        schedule = force_layer_count(schedule, args.force_layers)
    print(json.dumps(schedule_summary(schedule), indent=2))
    return 0


def _bundled_configs() -> dict:
    out = {}
    root = resources.files("fdpc").joinpath("configs")
    for entry in root.iterdir():
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = entry
    return out


def _load_config_text(spec: str) -> str:
    path = Path(spec)
    if path.exists():
        return path.read_text()
    name = spec[:-5] if spec.endswith(".json") else spec
    bundled = _bundled_configs()
    if name in bundled:
        return bundled[name].read_text()
    raise FileNotFoundError(f"config not found on disk or among bundled ones: {spec}")


def _cmd_simulate(args) -> int:
    if args.list_configs:
        for name in sorted(_bundled_configs()):
            print(name)
        return 0
    cfg = json.loads(_load_config_text(args.config)) if args.config else {}
    overrides = {
        "n": args.n, "k": args.k, "perm_seed": args.perm_seed,
        "alpha": args.alpha, "max_iter": args.max_iter, "clip_llr": args.clip_llr,
        "sgbf_T": args.sgbf_T, "master_seed": args.seed,
        "min_frame_errors": args.min_frame_errors, "max_frames": args.max_frames,
        "batch_size": args.batch_size, "clean": args.clean,
    }
    if args.base_order != "auto" or "base_order" not in cfg:
        overrides["base_order"] = args.base_order
    if args.ebno is not None:
        overrides["ebno_points"] = _parse_ebno(args.ebno)
    cfg.update({key: value for key, value in overrides.items() if value is not None})
    config = SweepConfig.from_dict(cfg)
    run_sweep(config, args.out, jobs=args.jobs)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdpc",
        description="Construct, encode, decode and simulate fair-density "
                    "parity-check codes.")
    from . import __version__
    parser.add_argument("--version", action="version", version=f"fdpc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and report its parameters")
    _add_code_args(p)
    p.add_argument("--alist-out", help="write the parity-check matrix in alist form")
    p.add_argument("--descriptor-out", help="write a reloadable JSON code descriptor")
    p.set_defaults(handler=_cmd_construct)

    p = sub.add_parser("encode", help="encode one message")
    _add_code_args(p)
    p.add_argument("--message", required=True, help="message bits as a 0/1 string")
    p.set_defaults(handler=_cmd_encode)

    p = sub.add_parser("decode", help="decode one frame of channel LLRs")
    _add_code_args(p)
    p.add_argument("--llr", help="channel LLRs, comma or space separated")
    p.add_argument("--llr-file", help="file of channel LLRs")
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--max-iter", type=int, default=5)
    p.add_argument("--clip-llr", type=float, default=None)
    p.add_argument("--sgbf-T", type=int, default=0, dest="sgbf_T",
                   help="bit-flip budget after a failed decode (0 disables)")
    p.set_defaults(handler=_cmd_decode)

    p = sub.add_parser("schedule-info", help="report the layered schedule")
    _add_code_args(p)
    p.add_argument("--force-layers", type=int, default=None,
                   help="merge layers down to this count")
    p.set_defaults(handler=_cmd_schedule_info)

    p = sub.add_parser("simulate", help="run a frame-error-rate sweep")
    p.add_argument("--config", help="JSON sweep config, a path or a bundled name")
    p.add_argument("--list-configs", action="store_true",
                   help="list bundled config names and exit")
    p.add_argument("--out", default="fer.csv", help="CSV output path")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--ebno", help="points as a,b,c or start:stop:step")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--base-order", default="auto",
                   choices=["auto", "base_t1", "base_t2"])
    p.add_argument("--perm-seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--clip-llr", type=float)
    p.add_argument("--sgbf-T", type=int, dest="sgbf_T")
    p.add_argument("--seed", type=int, help="master seed for the sweep")
    p.add_argument("--min-frame-errors", type=int)
    p.add_argument("--max-frames", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--clean", action=argparse.BooleanOptionalAction, default=None,
                   help="disable channel noise")
    p.set_defaults(handler=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    try:
        _configure_logging()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
