"""Batch command line: polytope metrics, bound reports, and attractor runs.

One command per invocation; reports are written atomically and embed the
run configuration and tool version, so identical configurations produce
byte-identical files.  Exit codes: 0 success, 1 validation failure,
2 I/O or parse failure.  Machine-readable errors go to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass

from . import __version__, formats, metrics, neighbourhood, oracle, projective
from .errors import GeometryError

_COMMANDS = ("metrics", "inner", "bounds", "profile", "oracle", "attractor", "norms")


@dataclass
class RunConfig:
    command: str
    input_path: str
    eps: float | None = None
    grid: int | None = None
    samples: int | None = None
    seed: int | None = None
    max_depth: int | None = None
    tol: float | None = None
    norm: str = "spectral"
    output_path: str | None = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inbody",
        description="Convex-body metrics and attractor dimension reports.")
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("--input", required=True, dest="input_path")
    parser.add_argument("--output", dest="output_path")
    parser.add_argument("--eps", type=float)
    parser.add_argument("--grid", type=int, default=33)
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-depth", type=int, default=12, dest="max_depth")
    parser.add_argument("--tol", type=float, default=0.01)
    parser.add_argument("--norm", choices=projective.NORM_KINDS,
                        default="spectral")
    return parser


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(command=ns.command, input_path=ns.input_path,
                     eps=ns.eps, grid=ns.grid, samples=ns.samples,
                     seed=ns.seed, max_depth=ns.max_depth, tol=ns.tol,
                     norm=ns.norm, output_path=ns.output_path)


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    try:
        payload = _dispatch(config)
    except GeometryError as exc:
        _emit_error(exc)
        return 1
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        _emit_error(exc)
        return 2
    try:
        _write_report(payload, config.output_path)
    except OSError as exc:
        _emit_error(exc)
        return 2
    return 0


def _dispatch(config: RunConfig):
    if config.command in ("metrics", "inner", "bounds", "profile", "oracle"):
        with open(config.input_path) as fh:
            body = formats.load_polytope(json.load(fh))
    else:
        with open(config.input_path) as fh:
            ifs, seeds, assume = formats.load_ifs(json.load(fh))

    meta = {"version": __version__, "config": _config_dict(config)}

    if config.command == "metrics":
        return {**formats.heron_to_dict(metrics.heron_bounds(body)), **meta}

    if config.command in ("inner", "bounds"):
        if config.eps is None:
            raise ValueError(f"--eps is required for '{config.command}'")
        rep = neighbourhood.bounds_report(body, config.eps)
        return {**formats.bounds_to_dict(rep), **meta}

    if config.command == "profile":
        workers = _worker_cap()
        prof = neighbourhood.neighbourhood_profile(
            body, grid_size=config.grid or 33, workers=workers)
        provenance = "inbody {} {}".format(
            __version__,
            json.dumps(_config_dict(config), sort_keys=True))
        return formats.profile_to_csv(prof, provenance)

    if config.command == "oracle":
        return {**_oracle_payload(body, config), **meta}

    if config.command == "attractor":
        holes = projective.generate_holes(ifs, seeds, config.max_depth)
        est = projective.critical_exponent(ifs, seeds, config.max_depth,
                                           tol=config.tol, holes=holes)
        resolutions = _default_resolutions(holes)
        box = projective.box_counting_dimension(ifs, seeds, config.max_depth,
                                                resolutions, holes=holes)
        return {**formats.estimate_to_dict(est),
                "box_counting": box,
                "box_resolutions": [float(r) for r in resolutions],
                "assume_measure_zero": assume, **meta}

    if config.command == "norms":
        est = projective.norm_series_exponent(ifs, config.max_depth,
                                              tol=config.tol, norm=config.norm)
        return {**formats.estimate_to_dict(est), "norm": config.norm, **meta}

    raise ValueError(f"unknown command '{config.command}'")


def _oracle_payload(body, config: RunConfig) -> dict:
    samples = config.samples or 1_000_000
    seed = config.seed or 0
    est = oracle.mc_volume(body, samples, seed)
    exact = metrics.volume(body)
    payload = {
        "exact_volume": exact,
        "mc_volume": formats.mc_to_dict(est),
        "volume_within_4_sigma": bool(abs(exact - est.mean) <= 4 * est.stddev),
    }
    if config.eps is not None:
        est_in = oracle.mc_inner_volume(body, config.eps, samples, seed + 1)
        exact_in = neighbourhood.vol_inner_neighbourhood(body, config.eps)
        payload.update({
            "exact_inner_volume": exact_in,
            "mc_inner_volume": formats.mc_to_dict(est_in),
            "inner_within_4_sigma":
                bool(abs(exact_in - est_in.mean) <= 4 * est_in.stddev),
        })
    return payload


def _default_resolutions(holes) -> list[float]:
    """Thirds ladder from coarse down to (not past) the smallest-hole scale."""
    deepest = max(h.depth for h in holes)
    min_in = min(h.inradius for h in holes if h.depth == deepest)
    res = [1.0 / 3.0 ** 2]
    while len(res) < 16:
        nxt = res[-1] / 3.0
        if nxt < min_in * (1.0 - 1e-9) and len(res) >= 3:
            break
        res.append(nxt)
    return res


def _worker_cap() -> int:
    raw = os.environ.get("INBODY_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _config_dict(config: RunConfig) -> dict:
    return {k: v for k, v in asdict(config).items() if v is not None}


def _write_report(payload, output_path: str | None) -> None:
    if isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if output_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(output_path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".inbody-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, output_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_error(exc: BaseException) -> None:
    sys.stderr.write(json.dumps(
        {"error": type(exc).__name__, "detail": str(exc)}) + "\n")


def main(argv=None) -> None:
    sys.exit(run(config_from_args(argv)))


if __name__ == "__main__":
    main()
