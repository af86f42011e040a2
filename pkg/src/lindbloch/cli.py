"""Command-line interface.

Subcommands:

    sweep         evaluate robustness measures over a perturbation grid
    concordance   rank-correlate measures across catalog perturbations
    steady-state  one-shot summary at a parameter point
    spectrum      generator eigenvalues at a parameter point

Configuration is a JSON file with optional sections `model`, `perturbation`,
`grid`, `output` (plus `workers`, `allow_range_override`, and for
concordance `perturbations`); command-line flags override it.  Exit codes:
0 success, 1 configuration error, 2 numerical failure, 3 range violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import model, sweep
from .errors import ConfigError, NumericalError, RangeViolationError
from .sweep import GridSpec, SweepSpec

_MODEL_KEYS = set(model.PARAM_FIELDS)
_TOP_KEYS = {
    "model",
    "perturbation",
    "perturbations",
    "grid",
    "output",
    "workers",
    "allow_range_override",
}
_GRID_KEYS = {"lo", "hi", "count", "scale"}
_OUTPUT_KEYS = {"path", "format"}


def _parse_complex(value, field: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            raise ConfigError(f"model.{field}: cannot parse {value!r} as a complex number")
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(
        f"model.{field}: expected a number, 're+imj' string, or [re, im] pair, "
        f"got {value!r}"
    )


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown config fields {sorted(unknown)}")
    return raw


def model_from_config(cfg: dict) -> model.ModelParams:
    section = cfg.get("model", {})
    if not isinstance(section, dict):
        raise ConfigError("config field 'model' must be an object")
    unknown = set(section) - _MODEL_KEYS
    if unknown:
        raise ConfigError(f"unknown model fields {sorted(unknown)}")
    kwargs = {}
    for name, value in section.items():
        if name in ("alpha1", "alpha2"):
            kwargs[name] = _parse_complex(value, name)
        else:
            try:
                kwargs[name] = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"model.{name}: expected a number, got {value!r}")
    try:
        return model.ModelParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def grid_from_config(section) -> GridSpec:
    if not isinstance(section, dict):
        raise ConfigError("config field 'grid' must be an object")
    unknown = set(section) - _GRID_KEYS
    if unknown:
        raise ConfigError(f"unknown grid fields {sorted(unknown)}")
    for key in ("lo", "hi", "count"):
        if key not in section:
            raise ConfigError(f"grid is missing required field {key!r}")
    return GridSpec(
        lo=float(section["lo"]),
        hi=float(section["hi"]),
        count=int(section["count"]),
        scale=str(section.get("scale", "linear")),
    )


def parse_grid_flag(text: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"--grid expects lo:hi:count[:log], got {text!r}")
    scale = "linear"
    if len(parts) == 4:
        if parts[3] not in ("log", "linear"):
            raise ConfigError(f"--grid scale must be 'log' or 'linear', got {parts[3]!r}")
        scale = parts[3]
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--grid {text!r}: {exc}") from exc
    return GridSpec(lo=lo, hi=hi, count=count, scale=scale)


def _spec_from_args(args, *, need_perturbation: bool) -> SweepSpec:
    cfg = load_config(args.config) if args.config else {}
    output = cfg.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("config field 'output' must be an object")
    unknown = set(output) - _OUTPUT_KEYS
    if unknown:
        raise ConfigError(f"unknown output fields {sorted(unknown)}")

    perturbation = getattr(args, "perturbation", None) or cfg.get("perturbation", "")
    if need_perturbation and not perturbation:
        raise ConfigError("no perturbation given (flag --perturbation or config)")
    grid = None
    if getattr(args, "grid", None):
        grid = parse_grid_flag(args.grid)
    elif "grid" in cfg:
        grid = grid_from_config(cfg["grid"])
    return SweepSpec(
        model=model_from_config(cfg),
        perturbation=perturbation,
        grid=grid,
        output_path=args.out or output.get("path"),
        output_format=args.format or output.get("format", "csv"),
        allow_range_override=bool(
            getattr(args, "allow_range_override", False)
            or cfg.get("allow_range_override", False)
        ),
        workers=int(
            args.workers if args.workers is not None else cfg.get("workers", 0)
        ),
    )


def _open_out(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _emit(write, path) -> None:
    fh, close = _open_out(path)
    try:
        write(fh)
    finally:
        if close:
            fh.close()


def cmd_sweep(args) -> int:
    spec = _spec_from_args(args, need_perturbation=True)
    records = sweep.run_sweep(spec)
    meta = sweep.sweep_metadata(spec)
    if spec.output_format == "json":
        _emit(lambda fh: sweep.write_sweep_json(records, fh, meta), spec.output_path)
    else:
        _emit(lambda fh: sweep.write_sweep_csv(records, fh, spec.measures), spec.output_path)
    if spec.output_path:
        flagged = sum(1 for r in records if r.flags)
        print(
            f"{spec.perturbation}: {len(records)} records "
            f"({flagged} flagged) -> {spec.output_path}"
        )
    return 0


def cmd_concordance(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    ids = cfg.get("perturbations", list(sweep.CATALOG_IDS))
    if not isinstance(ids, list) or not ids:
        raise ConfigError("config field 'perturbations' must be a non-empty list")
    base = _spec_from_args(args, need_perturbation=False)
    specs = [
        SweepSpec(
            model=base.model,
            perturbation=pid,
            allow_range_override=base.allow_range_override,
            workers=base.workers,
        )
        for pid in ids
    ]
    report = sweep.run_concordance(specs)
    meta = {
        "artifact_version": sweep.ARTIFACT_VERSION,
        "model": sweep._params_to_json(base.model),
        "perturbations": ids,
        "grids": {
            pid: sweep.sweep_metadata(s)["grid"] for pid, s in zip(ids, specs)
        },
    }
    if base.output_format == "json":
        _emit(lambda fh: sweep.write_concordance_json(report, fh, meta), base.output_path)
    else:
        _emit(lambda fh: sweep.write_concordance_csv(report, fh), base.output_path)
    if base.output_path:
        print(f"concordance over {', '.join(ids)} -> {base.output_path}")
    return 0


def _format_steady_text(report: dict, fh) -> None:
    fh.write("steady-state summary\n")
    for name, value in report["params"].items():
        fh.write(f"  {name:<11} {value}\n")
    for key in ("purity", "concurrence", "fidelity_vs_bare", "stability_margin", "residual"):
        fh.write(f"{key:<18} {report[key]:.12g}\n")
    fh.write("spectrum (Re, Im):\n")
    for re, im in report["spectrum"]:
        fh.write(f"  {re:+.6e}  {im:+.6e}\n")


def cmd_steady_state(args) -> int:
    spec = _spec_from_args(args, need_perturbation=False)
    report = sweep.steady_state_report(spec.model)
    if spec.output_format == "json":
        _emit(
            lambda fh: (json.dump(report, fh, indent=2), fh.write("\n")),
            spec.output_path,
        )
    else:
        _emit(lambda fh: _format_steady_text(report, fh), spec.output_path)
    return 0


def cmd_spectrum(args) -> int:
    spec = _spec_from_args(args, need_perturbation=False)
    params = spec.model
    if spec.perturbation:
        delta = args.delta
        if delta is None:
            raise ConfigError("spectrum with --perturbation also needs --delta")
        params = model.perturb(
            params,
            model.PERTURBATIONS[spec.perturbation],
            float(delta),
            allow_range_override=spec.allow_range_override,
        )
    from . import analysis  # local import keeps CLI startup light

    evals = analysis.spectrum(model.build_bloch(params).A)

    def write(fh):
        if spec.output_format == "json":
            payload = {
                "artifact_version": sweep.ARTIFACT_VERSION,
                "model": sweep._params_to_json(params),
                "spectrum": [[z.real, z.imag] for z in evals],
            }
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        else:
            fh.write("re,im\n")
            for z in evals:
                fh.write(f"{z.real:.12e},{z.imag:.12e}\n")

    _emit(write, spec.output_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lindbloch",
        description="Robustness analysis of dissipatively coupled qubits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, grid=False, delta=False):
        p.add_argument("--config", help="JSON config file")
        p.add_argument(
            "--perturbation",
            choices=sorted(model.PERTURBATIONS),
            help="structured perturbation id",
        )
        if grid:
            p.add_argument("--grid", help="lo:hi:count[:log]")
        if delta:
            p.add_argument("--delta", type=float, help="perturbation strength")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument(
            "--allow-range-override",
            action="store_true",
            help="permit deltas outside the admissible range",
        )
        p.add_argument("--workers", type=int, default=None, help="worker processes")

    p_sweep = sub.add_parser("sweep", help="run a perturbation sweep")
    common(p_sweep, grid=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_conc = sub.add_parser("concordance", help="rank-correlate sweep measures")
    common(p_conc)
    p_conc.set_defaults(func=cmd_concordance)

    p_ss = sub.add_parser("steady-state", help="summarize the steady state")
    common(p_ss)
    p_ss.set_defaults(func=cmd_steady_state)

    p_spec = sub.add_parser("spectrum", help="emit generator eigenvalues")
    common(p_spec, delta=True)
    p_spec.set_defaults(func=cmd_spectrum)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold those into the config-error code
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except RangeViolationError as exc:
        print(f"range violation: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
