"""Seeded Monte Carlo FER estimation and the command-line front end.

Frame ``t`` always draws from the random stream keyed by (seed, t), so the
results do not depend on the worker count, and the same frames are reused at
every grid point.  Early stopping truncates at the frame that produced the
``stop_at``-th error, which keeps the output deterministic.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import subprocess
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import binomtest

from . import __version__
from .asd import InterpolationBudgetExceeded, asd_decode
from .bounds import bec_eta, bec_fer, bgmd_awgn_upper, bm_awgn_fer, snr_to_n0
from .channels import (
    SoftObservation,
    awgn_bpsk_transmit,
    bec_transmit,
    bsc_transmit,
    ebn0_to_n0,
    qec_transmit,
    random_codeword,
    reliability_matrix,
    trial_rng,
)
from .decoders import BgmdConfig, bgmd_decode, bm_decode, gmd_decode
from .mas import pmas
from .regions import InapplicableError, region_table
from .rscode import CodeSpec, binary_image, from_bits, rs_code

log = logging.getLogger("rsasd")

CHANNELS = ("awgn", "bsc", "bec", "qec")
DECODERS = ("bm", "gmd", "bgmd", "asd-pmas", "pmas-predicate")
SIM_COLUMNS = ["param", "frames", "frame_errors", "fer", "ci_low", "ci_high"]
REGION_COLUMNS = ["f", "e_max", "strategy", "M"]
BOUND_COLUMNS = ["param", "fer_bound", "kind", "strategy", "M"]


@dataclass
class SimConfig:
    code: tuple[int, int, int] = (31, 25, 5)
    prim_poly: int | None = None
    channel: str = "awgn"
    grid: list[float] = field(default_factory=lambda: [6.0])
    decoder: str = "bgmd"
    M: float = 2
    budget: int = 50_000
    trials: int = 10_000
    stop_at: int | None = 100
    seed: int = 0
    qec_u: int = 1
    workers: int = 1
    shortcut: bool = True

    def __post_init__(self):
        self.code = tuple(int(v) for v in self.code)
        self.grid = [float(g) for g in self.grid]
        self.trials = int(self.trials)
        if self.stop_at == 0:
            self.stop_at = None
        if len(self.code) != 3:
            raise ValueError("code must be (N, K, m)")
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel {self.channel!r}; choose from {CHANNELS}")
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}; choose from {DECODERS}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.grid:
            raise ValueError("parameter grid is empty")
        if self.stop_at is not None and self.stop_at < 1:
            raise ValueError("stop_at must be positive")
        if self.decoder == "bgmd" and (self.M != int(self.M) or int(self.M) < 2 or int(self.M) % 2):
            raise ValueError(f"bgmd needs an even integer multiplicity, got {self.M}")
        if self.decoder == "pmas-predicate" and self.channel not in ("bec", "qec"):
            raise ValueError("pmas-predicate is defined for erasure channels only")
        if self.channel in ("bec", "bsc", "qec") and any(not 0 <= g <= 1 for g in self.grid):
            raise ValueError("channel probabilities must lie in [0, 1]")

    def spec(self) -> CodeSpec:
        N, K, m = self.code
        return rs_code(N, K, m, self.prim_poly)


@dataclass(frozen=True)
class SimPoint:
    param: float
    frames: int
    frame_errors: int
    fer: float
    ci_low: float
    ci_high: float


def wilson_interval(errors: int, frames: int) -> tuple[float, float]:
    ci = binomtest(errors, frames).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


def _transmit(cfg: SimConfig, spec: CodeSpec, param: float, rng) -> tuple[np.ndarray, SoftObservation]:
    cw = random_codeword(spec, rng)
    bits = binary_image(cw, spec)
    if cfg.channel == "awgn":
        obs = awgn_bpsk_transmit(bits, ebn0_to_n0(param, spec.K / spec.N), rng)
    elif cfg.channel == "bsc":
        obs = bsc_transmit(bits, param, rng)
    elif cfg.channel == "bec":
        obs = bec_transmit(bits, param, rng)
    else:
        obs = qec_transmit(bits, cfg.qec_u, param, rng, m=spec.m)
    return cw, obs


def decode_frame(cfg: SimConfig, spec: CodeSpec, obs: SoftObservation):
    """Decoded codeword or None."""
    if cfg.decoder == "bm":
        era = np.nonzero(obs.erased().reshape(spec.N, spec.m).any(axis=1))[0]
        return bm_decode(from_bits(obs.hard_bits(), spec), era, spec)
    if cfg.decoder == "gmd":
        return gmd_decode(obs, spec).selected
    if cfg.decoder == "bgmd":
        bcfg = BgmdConfig(M=int(cfg.M), budget=cfg.budget, shortcut=cfg.shortcut)
        return bgmd_decode(obs, spec, bcfg).selected
    if cfg.decoder == "asd-pmas":
        mm = pmas(reliability_matrix(obs, spec), cfg.M)
        return asd_decode(mm, spec, obs, cfg.budget).selected
    raise ValueError(f"decoder {cfg.decoder} has no decode step")


def frame_error(cfg: SimConfig, spec: CodeSpec, param: float, index: int) -> bool:
    rng = trial_rng(cfg.seed, index)
    cw, obs = _transmit(cfg, spec, param, rng)
    if cfg.decoder == "pmas-predicate":
        return bool(bec_eta(obs.erased(), spec.N, spec.m) <= spec.K - 1)
    try:
        out = decode_frame(cfg, spec, obs)
    except InterpolationBudgetExceeded:
        return True
    return out is None or not np.array_equal(out, cw)


def _chunk(args) -> np.ndarray:
    cfg, param, start, stop = args
    spec = cfg.spec()
    return np.array([frame_error(cfg, spec, param, t) for t in range(start, stop)], dtype=bool)


def simulate_point(cfg: SimConfig, param: float, chunk: int = 2000, pool=None) -> SimPoint:
    spec = cfg.spec()
    flags: list[np.ndarray] = []
    done = 0
    errors = 0
    while done < cfg.trials:
        n_chunks = cfg.workers if pool is not None else 1
        jobs = []
        for _ in range(n_chunks):
            if done >= cfg.trials:
                break
            stop = min(done + chunk, cfg.trials)
            jobs.append((cfg, param, done, stop))
            done = stop
        if pool is not None:
            results = list(pool.map(_chunk, jobs))
        else:
            results = [np.array([frame_error(cfg, spec, param, t) for t in range(a, b)], dtype=bool) for _, _, a, b in jobs]
        for r in results:
            flags.append(r)
            errors += int(r.sum())
        if cfg.stop_at is not None and errors >= cfg.stop_at:
            break
    all_flags = np.concatenate(flags) if flags else np.zeros(0, dtype=bool)
    if cfg.stop_at is not None and errors >= cfg.stop_at:
        cut = int(np.nonzero(all_flags)[0][cfg.stop_at - 1]) + 1
        all_flags = all_flags[:cut]
    frames = len(all_flags)
    k = int(all_flags.sum())
    lo, hi = wilson_interval(k, frames)
    return SimPoint(param=param, frames=frames, frame_errors=k, fer=k / frames, ci_low=lo, ci_high=hi)


def run_simulation(cfg: SimConfig) -> list[SimPoint]:
    points = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for p in cfg.grid:
                points.append(simulate_point(cfg, p, pool=pool))
                log.info("param=%g frames=%d errors=%d", p, points[-1].frames, points[-1].frame_errors)
    else:
        for p in cfg.grid:
            points.append(simulate_point(cfg, p))
            log.info("param=%g frames=%d errors=%d", p, points[-1].frames, points[-1].frame_errors)
    return points


# --- regions and bounds ----------------------------------------------------


def region_rows(code, strategy: str, M: int | None) -> list[dict]:
    """Worst-case decoding region rows; a guarantee, not the exact failure boundary."""
    N, K, m = code
    reg = region_table(strategy, N, K, m=m, M=M)
    label = "" if M is None else str(M)
    return [{"f": f, "e_max": e, "strategy": strategy, "M": label} for f, e in reg.rows()]


def bound_rows(code, strategy: str, M: int | None, grid, with_binomial: bool = True) -> list[dict]:
    N, K, m = code
    label = "" if M is None else str(M)
    rows = []
    for p in grid:
        if strategy == "bgmd":
            if M is None:
                raise ValueError("bgmd bound needs M")
            val = bgmd_awgn_upper(N, K, m, M, snr_to_n0(p, N, K), with_binomial).value
            rows.append({"param": p, "fer_bound": val, "kind": "upper", "strategy": strategy, "M": label})
        elif strategy == "bm":
            val = bm_awgn_fer(N, K, m, snr_to_n0(p, N, K))
            rows.append({"param": p, "fer_bound": val, "kind": "exact", "strategy": strategy, "M": ""})
        elif strategy == "pmas-bec":
            res = bec_fer(N, K, m, p)
            rows.append({"param": p, "fer_bound": res.exact, "kind": "exact", "strategy": strategy, "M": "inf"})
            rows.append({"param": p, "fer_bound": res.upper, "kind": "upper", "strategy": strategy, "M": "inf"})
            if res.lower is None:
                rows.append({"param": p, "fer_bound": math.nan, "kind": "lower-inapplicable", "strategy": strategy, "M": "inf"})
            else:
                rows.append({"param": p, "fer_bound": res.lower, "kind": "lower", "strategy": strategy, "M": "inf"})
        else:
            raise ValueError(f"unknown bound strategy {strategy!r}")
    return rows


def emit_region(code, strategy: str, M: int | None) -> str:
    return to_csv(REGION_COLUMNS, region_rows(code, strategy, M))


def emit_bounds(code, strategy: str, M: int | None, grid, with_binomial: bool = True) -> str:
    return to_csv(BOUND_COLUMNS, bound_rows(code, strategy, M, grid, with_binomial))


# --- output ----------------------------------------------------------------


def _fmt(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return v


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r[k]) for k in columns})
    return buf.getvalue()


def version_string() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+g{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def to_json(command: str, config: dict, columns, rows) -> str:
    clean = [{k: (None if isinstance(r[k], float) and not math.isfinite(r[k]) else r[k]) for k in columns} for r in rows]
    doc = {"command": command, "version": version_string(), "config": config, "columns": columns, "rows": clean}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# --- CLI -------------------------------------------------------------------


def parse_code(text) -> tuple[int, int, int]:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("code must be N,K,m")
    return tuple(int(p) for p in parts)


def parse_grid(text) -> list[float]:
    """'4:0.25:7' (inclusive range), '0.01,0.02' or a single value."""
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("range must be start:step:stop")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(n)]
    return [float(v) for v in text.split(",") if v]


def _count(text) -> int:
    v = float(text)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"{text} is not an integer")
    return int(v)


def _mult(text):
    if str(text).lower() in ("inf", "none", ""):
        return None
    v = float(text)
    return int(v) if v == int(v) else v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rsasd", description="RS soft-decision decoding experiments")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", type=Path, help="JSON file with option values")
        sp.add_argument("--code", type=parse_code, help="N,K,m")
        sp.add_argument("--out", type=Path, help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--mult", type=_mult, help="multiplicity parameter M")

    s = sub.add_parser("simulate", help="Monte Carlo frame error rate")
    common(s)
    s.add_argument("--channel", choices=CHANNELS)
    s.add_argument("--snr", "--param", dest="grid", type=parse_grid, help="Eb/N0 dB grid or channel probabilities")
    s.add_argument("--decoder", choices=DECODERS)
    s.add_argument("--trials", type=_count)
    s.add_argument("--stop-at", dest="stop_at", type=_count, help="frame errors before stopping (0 = never)")
    s.add_argument("--seed", type=_count)
    s.add_argument("--budget", type=_count)
    s.add_argument("--workers", type=_count)
    s.add_argument("--qec-u", dest="qec_u", type=_count)
    s.add_argument("--prim-poly", dest="prim_poly", type=lambda t: int(t, 0))
    s.add_argument("--no-shortcut", dest="shortcut", action="store_const", const=False)

    r = sub.add_parser("region", help="worst-case decoding region table")
    common(r)
    r.add_argument("--strategy", choices=("finite", "infinite", "m2", "optimal"))

    b = sub.add_parser("bound", help="analytic FER bounds")
    common(b)
    b.add_argument("--strategy", choices=("bgmd", "bm", "pmas-bec"))
    b.add_argument("--snr", "--eps", dest="grid", type=parse_grid)
    b.add_argument("--literal", action="store_true", help="omit the binomial coefficient (comparison only)")
    return p


def _merge(args, defaults: dict) -> dict:
    opts = dict(defaults)
    if args.config is not None:
        loaded = json.loads(args.config.read_text())
        if "snr" in loaded and "grid" not in loaded:
            loaded["grid"] = loaded.pop("snr")
        if "mult" in loaded and "M" not in loaded:
            loaded["M"] = loaded.pop("mult")
        if "stop-at" in loaded:
            loaded["stop_at"] = loaded.pop("stop-at")
        opts.update(loaded)
    for k, v in vars(args).items():
        if k in ("config", "command", "verbose") or v is None:
            continue
        opts["M" if k == "mult" else k] = v
    if "code" not in opts:
        raise ValueError("--code N,K,m is required")
    opts["code"] = parse_code(opts["code"])
    if "grid" in opts:
        opts["grid"] = parse_grid(opts["grid"])
    return opts


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "simulate":
            opts = _merge(args, {"format": "csv"})
            out, fmt = opts.pop("out", None), opts.pop("format")
            cfg = SimConfig(**opts)
            rows = [asdict(p) for p in run_simulation(cfg)]
            echo = asdict(cfg)
            text = to_json("simulate", echo, SIM_COLUMNS, rows) if fmt == "json" else to_csv(SIM_COLUMNS, rows)
        elif args.command == "region":
            opts = _merge(args, {"format": "csv", "strategy": "finite", "M": 2})
            opts.pop("grid", None)
            if opts["strategy"] in ("infinite", "m2", "optimal"):
                opts["M"] = None
            rows = region_rows(opts["code"], opts["strategy"], opts["M"])
            echo = {k: v for k, v in opts.items() if k not in ("out", "format")}
            text = to_json("region", echo, REGION_COLUMNS, rows) if opts["format"] == "json" else to_csv(REGION_COLUMNS, rows)
            out = opts.get("out")
        else:
            opts = _merge(args, {"format": "csv", "strategy": "bgmd", "M": 2, "literal": False})
            rows = bound_rows(opts["code"], opts["strategy"], opts["M"], opts["grid"], not opts["literal"])
            echo = {k: v for k, v in opts.items() if k not in ("out", "format")}
            text = to_json("bound", echo, BOUND_COLUMNS, rows) if opts["format"] == "json" else to_csv(BOUND_COLUMNS, rows)
            out = opts.get("out")
    except (ValueError, KeyError, TypeError, InapplicableError) as exc:
        parser.exit(2, f"rsasd: error: {exc}\n")
    _write(text, Path(out) if out is not None else None)
    return 0
