"""Command-line interface: ``plcgen <verb> ...``.

Verbs: ``cable-params``, ``generate``, ``response``, ``validate``, ``params dump``.

Exit codes: 0 success, 2 usage / unknown entity, 3 parameter domain,
4 malformed input, 5 distance outside the loss model.

A JSON config file (``--config`` or ``$PLCGEN_CONFIG``) may supply any
GeneratorConfig field plus ``grid`` ({f_min_hz, f_max_hz, points}) and
``outputs`` ({realizations, responses_dir, report}); explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import channel_synthesis as cs
from . import path_statistics as ps
from . import validation
from .cable_params import (
    capacitance_per_length,
    char_impedance,
    conductance_per_length,
    get_cable,
    inductance_per_length,
    phase_velocity,
    resistance_per_length,
)
from .errors import PlcError

EXIT_OK, EXIT_USAGE, EXIT_PARAM, EXIT_INPUT, EXIT_DISTANCE = 0, 2, 3, 4, 5

GRID_DEFAULTS = {"f_min_hz": 0.0, "f_max_hz": 30e6, "points": 1024}
OUTPUT_DEFAULTS = {"realizations": None, "responses_dir": "responses", "report": None}
CONFIG_KEYS = set(cs.GeneratorConfig.field_names()) | {"grid", "outputs"}

FLOAT_FMT = "%.17g"


class UsageError(PlcError):
    exit_code = EXIT_USAGE


class InputError(PlcError):
    exit_code = EXIT_INPUT


# --------------------------------------------------------------------------
# Config
# --------------------------------------------------------------------------


def load_config_file(path: str | os.PathLike | None) -> dict:
    """Read a CliConfigFile, rejecting unknown keys and filling defaults."""
    raw = {}
    if path:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("config file must hold a JSON object")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    grid = dict(GRID_DEFAULTS)
    for key, val in (raw.get("grid") or {}).items():
        if key not in GRID_DEFAULTS:
            raise UsageError(f"unknown grid key {key!r}")
        grid[key] = val
    outputs = dict(OUTPUT_DEFAULTS)
    for key, val in (raw.get("outputs") or {}).items():
        if key not in OUTPUT_DEFAULTS:
            raise UsageError(f"unknown outputs key {key!r}")
        outputs[key] = val
    gen = {k: v for k, v in raw.items() if k not in ("grid", "outputs")}
    return {"generator": gen, "grid": grid, "outputs": outputs}


def _config_path(args) -> str | None:
    return getattr(args, "config", None) or os.environ.get("PLCGEN_CONFIG")


_FLAG_TO_FIELD = {
    "cable": "cable",
    "interval_unit": "interval_unit_s",
    "sample_period": "sample_period_s",
    "cluster_step": "cluster_distance_step_m",
    "direct_distance": "direct_distance_m",
    "gev_cap": "gev_cap",
    "phase_model": "phase_model",
    "seed": "seed",
}


def build_generator_config(args, file_cfg: dict) -> cs.GeneratorConfig:
    values = dict(file_cfg["generator"])
    for flag, name in _FLAG_TO_FIELD.items():
        val = getattr(args, flag, None)
        if val is not None:
            values[name] = val
    return cs.GeneratorConfig(**values)


# --------------------------------------------------------------------------
# Output helpers
# --------------------------------------------------------------------------


def _emit_text(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")


def realizations_json(realizations) -> str:
    # One realization per line. Python's float repr is the shortest string
    # that round-trips exactly.
    return "[\n" + ",\n".join(json.dumps(r.to_dict()) for r in realizations) + "\n]\n"


def write_response_csv(path, fr: cs.FrequencyResponse) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["freq_hz", "re", "im", "abs", "phase_rad"])
        for f, h in zip(fr.freq_grid_hz, fr.h):
            w.writerow([FLOAT_FMT % v for v in (f, h.real, h.imag, abs(h), np.angle(h))])


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_cable_params(args) -> int:
    try:
        cable = get_cable(args.cable)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    f = args.freq
    z0 = char_impedance(cable, f)
    record = {
        "cable": cable.name,
        "freq_hz": f,
        "R": resistance_per_length(cable, f),
        "L": inductance_per_length(cable),
        "C": capacitance_per_length(cable),
        "G": conductance_per_length(cable, f),
        "Z0_re": z0.real,
        "Z0_im": z0.imag,
        "v": phase_velocity(cable),
        "units": {
            "freq_hz": "Hz", "R": "ohm/m", "L": "H/m", "C": "F/m", "G": "S/m",
            "Z0_re": "ohm", "Z0_im": "ohm", "v": "m/s",
        },
    }
    print(json.dumps(record, indent=2))
    return EXIT_OK


def cmd_generate(args) -> int:
    file_cfg = load_config_file(_config_path(args))
    cfg = build_generator_config(args, file_cfg)
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    realizations = cs.generate(args.class_id, args.cluster, args.count, cfg)
    _emit_text(realizations_json(realizations), args.out or file_cfg["outputs"]["realizations"])
    return EXIT_OK


def _read_realizations(path) -> list[cs.ChannelRealization]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(doc, dict):
            doc = [doc]
        if not isinstance(doc, list) or not doc:
            raise ValueError("expected a non-empty JSON array of realizations")
        return [cs.ChannelRealization.from_dict(d) for d in doc]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed realization file {path}: {exc}") from None


def _grid_from(args, file_cfg) -> np.ndarray:
    if args.freqs:
        try:
            grid = np.array([float(x) for x in args.freqs.split(",")])
        except ValueError:
            raise InputError(f"cannot parse --freqs {args.freqs!r}") from None
    else:
        spec = dict(file_cfg["grid"])
        for key, flag in (("f_min_hz", "f_min"), ("f_max_hz", "f_max"), ("points", "points")):
            if getattr(args, flag) is not None:
                spec[key] = getattr(args, flag)
        try:
            if int(spec["points"]) != spec["points"]:
                raise ValueError
            grid = cs.frequency_grid(float(spec["f_min_hz"]), float(spec["f_max_hz"]), int(spec["points"]))
        except (TypeError, ValueError) as exc:
            raise InputError(f"invalid grid spec {spec}: {exc}") from None
    try:
        return cs._check_grid(grid)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_response(args) -> int:
    file_cfg = load_config_file(_config_path(args))
    realizations = _read_realizations(args.input)
    grid = _grid_from(args, file_cfg)
    phase_model = args.phase_model or file_cfg["generator"].get("phase_model", "eq11_literal")
    if phase_model not in cs.PHASE_MODELS:
        raise UsageError(f"unknown phase model {phase_model!r}")
    out_dir = Path(args.out_dir or file_cfg["outputs"]["responses_dir"])
    responses = [cs.transfer_function(r, grid, phase_model) for r in realizations]
    out_dir.mkdir(parents=True, exist_ok=True)
    for n, fr in enumerate(responses):
        write_response_csv(out_dir / f"response_{n:05d}.csv", fr)
    print(f"wrote {len(responses)} response file(s) to {out_dir}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    file_cfg = load_config_file(_config_path(args))
    seed = args.seed if args.seed is not None else file_cfg["generator"].get("seed", 0)
    if args.all:
        reports, skipped = validation.validate_lattice(args.samples, seed)
    else:
        if args.class_id is None or args.cluster is None:
            raise UsageError("validate needs --class and --cluster, or --all")
        reports, skipped = validation.validate_cell(args.class_id, args.cluster, args.samples, seed), []
    report_path = args.report or file_cfg["outputs"]["report"]
    if report_path:
        doc = validation.write_report(report_path, reports, skipped)
    else:
        doc = validation.report_document(reports, skipped)
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    s = doc["summary"]
    print(f"cells={s['cells']} passed={s['passed']} failed={s['failed']} skipped={s['skipped']}", file=sys.stderr)
    return EXIT_OK if s["failed"] == 0 else 1


def cmd_params_dump(args) -> int:
    _emit_text(ps.dump_parameters_json(), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def _add_generator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (default: $PLCGEN_CONFIG)")
    p.add_argument("--cable")
    p.add_argument("--interval-unit", type=float, help="seconds per GEV interval unit")
    p.add_argument("--sample-period", type=float, help="seconds per time-sample index")
    p.add_argument("--cluster-step", type=float, help="meters of first-path distance per cluster")
    p.add_argument("--direct-distance", type=float, help="explicit first-path distance in m")
    p.add_argument("--gev-cap", type=float, help="interval truncation cap in interval units")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plcgen", description="Statistical powerline channel generator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cable-params", help="per-unit-length parameters of a cable")
    p.add_argument("--cable", required=True)
    p.add_argument("--freq", type=float, default=1e6, help="frequency in Hz")
    p.set_defaults(func=cmd_cable_params)

    p = sub.add_parser("generate", help="synthesize channel realizations")
    p.add_argument("--class", dest="class_id", type=int, required=True)
    p.add_argument("--cluster", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output JSON path (default stdout)")
    _add_generator_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("response", help="frequency responses of stored realizations")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-dir")
    p.add_argument("--f-min", type=float)
    p.add_argument("--f-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--freqs", help="explicit comma-separated grid in Hz")
    p.add_argument("--phase-model", choices=cs.PHASE_MODELS)
    p.add_argument("--config")
    p.set_defaults(func=cmd_response)

    p = sub.add_parser("validate", help="Monte Carlo goodness-of-fit checks")
    p.add_argument("--class", dest="class_id", type=int)
    p.add_argument("--cluster", type=int)
    p.add_argument("--all", action="store_true")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--report")
    p.add_argument("--config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("params", help="embedded constant tables")
    psub = p.add_subparsers(dest="params_command", required=True)
    d = psub.add_parser("dump", help="print all constants as JSON")
    d.add_argument("--out")
    d.set_defaults(func=cmd_params_dump)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PlcError as exc:
        print(f"plcgen: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
