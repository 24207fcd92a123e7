"""Command-line front end: config handling, scenario dispatch, sweeps, output.

Single runs emit one JSON document {config, result, meta}; sweeps emit a CSV
summary (one row per grid point) plus a JSON array of per-point records. All
output is byte-deterministic for a fixed config and seed: amplitudes are
sorted, floats use shortest round-trip formatting, and wall-clock timing goes
to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace

from . import __version__
from .bogoliubov import (
    DEFAULT_EPSILON_MAX,
    epsilon_of,
    min_omega_for_cap,
    required_truncation,
)
from .errors import (
    ConfigurationError,
    DomainError,
    PrecisionError,
    ResourceError,
    UnruhSimError,
    ZeroProbabilityError,
)
from .fock import PRUNE_THRESHOLD, FockState
from .measurement import RNG_ALGORITHM
from .protocols import (
    ProtocolResult,
    Scenario,
    epr_postselect,
    signal_transmission,
    single_frequency,
    two_frequency,
)

SCHEMA_VERSION = 1

#: Environment variable naming the default output directory.
OUTPUT_DIR_ENV = "UNRUHSIM_OUTPUT_DIR"

#: Exact speed of light in m/s (defined value), for the SI convenience flags.
SPEED_OF_LIGHT = 299792458.0

CSV_HEADER = [
    "param",
    "value",
    "probability",
    "concurrence",
    "negativity",
    "entropy_bits",
    "energy_proxy",
    "truncation_loss",
]

EXIT_OK = 0
EXIT_INVALID_CONFIG = 1
EXIT_ZERO_PROBABILITY = 2
EXIT_PRECISION = 3
EXIT_IO = 4

_SCENARIOS = tuple(s.value for s in Scenario)
_SWEEPABLE = ("omega1_over_a", "omega2_over_a", "omega0_over_a")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int


@dataclass(frozen=True)
class OutputSpec:
    path: str
    format: str = "json"


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    omega1_over_a: float | None = None
    omega2_over_a: float | None = None
    omega0_over_a: float | None = None
    m: int | None = None
    m1: int | None = None
    m2: int | None = None
    truncation: int = 30
    epsilon_max: float = DEFAULT_EPSILON_MAX
    prune_threshold: float = PRUNE_THRESHOLD
    seed: int | None = None
    sweep: SweepSpec | None = None
    output: OutputSpec | None = None


@dataclass(frozen=True)
class Diagnostic:
    field: str
    message: str

    def __str__(self):
        return f"{self.field}: {self.message}"


@dataclass(frozen=True)
class RunRecord:
    """One executed grid point: config echo, result, metadata, timing.

    ``duration_seconds`` is kept out of the serialized payload so repeated
    runs of the same config produce byte-identical files.
    """

    config: RunConfig
    result: ProtocolResult
    duration_seconds: float
    sweep_value: float | None = None
    meta: dict = field(default_factory=dict)


_CONFIG_KEYS = {f.name for f in fields(RunConfig)}
_SWEEP_KEYS = {f.name for f in fields(SweepSpec)}
_OUTPUT_KEYS = {f.name for f in fields(OutputSpec)}


def load_config_file(path: str) -> tuple[RunConfig | None, list[Diagnostic]]:
    """Parse a flat JSON config file, rejecting unknown keys."""
    diagnostics: list[Diagnostic] = []
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        return None, [Diagnostic("config", f"cannot read {path}: {exc}")]
    except json.JSONDecodeError as exc:
        return None, [Diagnostic("config", f"{path} is not valid JSON: {exc}")]
    if not isinstance(raw, dict):
        return None, [Diagnostic("config", "config file must hold a JSON object")]
    unknown = sorted(set(raw) - _CONFIG_KEYS)
    for key in unknown:
        diagnostics.append(Diagnostic(key, "unknown configuration key"))
    if diagnostics:
        return None, diagnostics
    sweep = raw.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict) or set(sweep) - _SWEEP_KEYS or set(_SWEEP_KEYS) - set(sweep):
            return None, [Diagnostic("sweep", f"sweep must hold exactly {sorted(_SWEEP_KEYS)}")]
        raw["sweep"] = SweepSpec(**sweep)
    output = raw.get("output")
    if output is not None:
        if not isinstance(output, dict) or "path" not in output or set(output) - _OUTPUT_KEYS:
            return None, [Diagnostic("output", "output must hold {path, format}")]
        raw["output"] = OutputSpec(**output)
    if "scenario" not in raw:
        raw["scenario"] = ""
    try:
        return RunConfig(**raw), []
    except TypeError as exc:
        return None, [Diagnostic("config", str(exc))]


_REQUIRED_FIELDS = {
    "single": ("omega1_over_a", "m"),
    "double": ("omega1_over_a", "omega2_over_a", "m1", "m2"),
    "epr": ("omega1_over_a", "omega2_over_a", "m1", "m2"),
    "signal": ("omega0_over_a",),
}


def _check_omega(config: RunConfig, name: str, value: float, out: list[Diagnostic]) -> float | None:
    if value <= 0:
        out.append(Diagnostic(name, f"must be positive, got {value!r}"))
        return None
    eps = epsilon_of(value)
    if eps > config.epsilon_max:
        out.append(
            Diagnostic(
                name,
                f"epsilon={eps:.6g} exceeds epsilon_max={config.epsilon_max}; "
                f"need omega/a >= {min_omega_for_cap(config.epsilon_max):.6g}",
            )
        )
        return None
    return eps


def validate(config: RunConfig) -> list[Diagnostic]:
    """Collect every configuration violation; never raises.

    Includes a minimal-truncation suggestion whenever the requested cap is too
    small for the requested measurement at the implied squeezing.
    """
    out: list[Diagnostic] = []
    if config.scenario not in _SCENARIOS:
        out.append(
            Diagnostic("scenario", f"must be one of {list(_SCENARIOS)}, got {config.scenario!r}")
        )
        return out
    swept = config.sweep.parameter if config.sweep is not None else None
    for name in _REQUIRED_FIELDS[config.scenario]:
        if getattr(config, name) is None and name != swept:
            out.append(Diagnostic(name, f"required for the {config.scenario!r} scenario"))
    if config.truncation < 1:
        out.append(Diagnostic("truncation", f"must be >= 1, got {config.truncation}"))
    if not 0.0 < config.epsilon_max < 1.0:
        out.append(Diagnostic("epsilon_max", f"must lie in (0, 1), got {config.epsilon_max}"))
    if config.prune_threshold < 0.0:
        out.append(Diagnostic("prune_threshold", "must be non-negative"))
    for name in ("m", "m1", "m2"):
        value = getattr(config, name)
        if value is not None and value < 0:
            out.append(Diagnostic(name, f"must be non-negative, got {value}"))
    if out:
        return out

    pairs: list[tuple[str, float, int]] = []
    if config.scenario == "single":
        pairs.append(("omega1_over_a", config.omega1_over_a, config.m))
    elif config.scenario in ("double", "epr"):
        pairs.append(("omega1_over_a", config.omega1_over_a, config.m1))
        pairs.append(("omega2_over_a", config.omega2_over_a, config.m2))
        if config.omega1_over_a == config.omega2_over_a and not (
            config.sweep and config.sweep.parameter == "omega2_over_a"
        ):
            out.append(Diagnostic("omega2_over_a", "must differ from omega1_over_a"))
    else:
        pairs.append(("omega0_over_a", config.omega0_over_a, 0))
    for name, omega, m in pairs:
        if config.sweep and config.sweep.parameter == name:
            continue
        eps = _check_omega(config, name, omega, out)
        if eps is None:
            continue
        needed = required_truncation(m or 0, eps)
        if config.truncation < needed:
            out.append(
                Diagnostic(
                    "truncation",
                    f"{config.truncation} too small for m={m or 0} at {name}={omega:.6g} "
                    f"(epsilon={eps:.4g}); need at least {needed}",
                )
            )

    if config.sweep is not None:
        sweep = config.sweep
        if sweep.parameter not in _SWEEPABLE:
            out.append(Diagnostic("sweep.parameter", f"must be one of {list(_SWEEPABLE)}"))
        elif sweep.parameter not in _REQUIRED_FIELDS[config.scenario]:
            out.append(
                Diagnostic(
                    "sweep.parameter",
                    f"{sweep.parameter} is not used by the {config.scenario!r} scenario",
                )
            )
        if sweep.steps < 2:
            out.append(Diagnostic("sweep.steps", f"must be >= 2, got {sweep.steps}"))
        if sweep.parameter in _SWEEPABLE:
            for end_name, end in (("sweep.start", sweep.start), ("sweep.stop", sweep.stop)):
                if end <= 0:
                    out.append(Diagnostic(end_name, f"must be positive, got {end!r}"))
                else:
                    _check_omega(config, end_name, end, out)

    if config.output is not None and config.output.format not in ("json", "csv"):
        out.append(Diagnostic("output.format", f"must be json or csv, got {config.output.format!r}"))
    return out


# ---------------------------------------------------------------------------
# serialization


def _float(value) -> float:
    return float(value)


def mode_payload(mode) -> dict:
    return {
        "frame": mode.frame.value,
        "branch": mode.branch.value,
        "frequency": _float(mode.frequency),
    }


def state_payload(state: FockState, include_amplitudes: bool = True) -> dict:
    payload = {
        "modes": [mode_payload(m) for m in state.modes],
        "truncation": state.truncation,
        "truncation_loss": _float(state.truncation_loss),
        "norm": _float(state.norm()),
    }
    if include_amplitudes:
        payload["amplitudes"] = [
            [list(occ), _float(amp.real), _float(amp.imag)]
            for occ, amp in sorted(state.amplitudes.items())
        ]
    return payload


def report_payload(report) -> dict:
    return {
        "ppt_min_eigenvalue": _float(report.ppt_min_eigenvalue),
        "negativity": _float(report.negativity),
        "entropy_bits": _float(report.entropy_bits),
        "concurrence": None if report.concurrence is None else _float(report.concurrence),
    }


def result_payload(result: ProtocolResult, include_amplitudes: bool = True) -> dict:
    return {
        "scenario": result.scenario.value,
        "inputs": {k: result.inputs[k] for k in sorted(result.inputs)},
        "outcome_probability": _float(result.outcome_probability),
        "state_oracle": state_payload(result.state_oracle, include_amplitudes),
        "state_analytic": state_payload(result.state_analytic, include_amplitudes),
        "fidelity_oracle_analytic": _float(result.fidelity_oracle_analytic),
        "entanglement": {
            label: report_payload(report)
            for label, report in sorted(result.entanglement.items())
        },
        "energy_proxy": _float(result.energy_proxy),
        "truncation_loss": _float(result.truncation_loss),
    }


def config_payload(config: RunConfig) -> dict:
    payload = asdict(config)
    return payload


def record_payload(record: RunRecord, include_amplitudes: bool = True) -> dict:
    meta = {
        "library_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "rng_algorithm": RNG_ALGORITHM,
    }
    meta.update(record.meta)
    payload = {
        "config": config_payload(record.config),
        "result": result_payload(record.result, include_amplitudes),
        "meta": meta,
    }
    if record.sweep_value is not None:
        payload["meta"]["sweep_value"] = _float(record.sweep_value)
    return payload


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _primary_report(result: ProtocolResult):
    for label in ("postselected", "omega1", "omega0", "omega2"):
        if label in result.entanglement:
            return result.entanglement[label]
    return None


def csv_row(param: str, value, result: ProtocolResult) -> list[str]:
    report = _primary_report(result)
    concurrence = ""
    negativity = ""
    entropy = ""
    if report is not None:
        negativity = repr(_float(report.negativity))
        entropy = repr(_float(report.entropy_bits))
        if report.concurrence is not None:
            concurrence = repr(_float(report.concurrence))
    return [
        param,
        "" if value is None else repr(_float(value)),
        repr(_float(result.outcome_probability)),
        concurrence,
        negativity,
        entropy,
        repr(_float(result.energy_proxy)),
        repr(_float(result.truncation_loss)),
    ]


def _dump_csv(rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    return buffer.getvalue()


# ---------------------------------------------------------------------------
# execution


def _execute(config: RunConfig) -> ProtocolResult:
    kwargs = {
        "truncation": config.truncation,
        "epsilon_max": config.epsilon_max,
        "prune_threshold": config.prune_threshold,
    }
    if config.scenario == "single":
        return single_frequency(config.omega1_over_a, config.m, **kwargs)
    if config.scenario == "double":
        return two_frequency(
            config.omega1_over_a, config.omega2_over_a, config.m1, config.m2, **kwargs
        )
    if config.scenario == "epr":
        return epr_postselect(
            config.omega1_over_a, config.omega2_over_a, config.m1, config.m2, **kwargs
        )
    if config.scenario == "signal":
        return signal_transmission(
            config.omega0_over_a, config.truncation, epsilon_max=config.epsilon_max
        )
    raise ConfigurationError(f"unknown scenario {config.scenario!r}")


def _run_point(config: RunConfig, sweep_value: float | None, meta: dict) -> RunRecord:
    started = time.perf_counter()
    result = _execute(config)
    elapsed = time.perf_counter() - started
    record_meta = dict(meta)
    if config.seed is not None:
        record_meta["seed"] = config.seed
    return RunRecord(config, result, elapsed, sweep_value, record_meta)


def sweep_grid(sweep: SweepSpec) -> list[float]:
    step = (sweep.stop - sweep.start) / (sweep.steps - 1)
    return [sweep.start + i * step for i in range(sweep.steps)]


def resolve_output_path(config: RunConfig) -> str:
    if config.output is not None and config.output.path:
        path = config.output.path
    else:
        suffix = "csv" if config.sweep is not None else _output_format(config)
        path = f"{config.scenario}.{suffix}"
    if not os.path.isabs(path):
        base = os.environ.get(OUTPUT_DIR_ENV, "")
        if base:
            path = os.path.join(base, path)
    return path


def _output_format(config: RunConfig) -> str:
    return config.output.format if config.output is not None else "json"


def run(
    config: RunConfig,
    jobs: int = 1,
    full_states: bool = False,
    meta: dict | None = None,
) -> tuple[int, list[RunRecord]]:
    """Validate, dispatch, and write output files; returns (exit code, records)."""
    meta = dict(meta or {})
    diagnostics = validate(config)
    if diagnostics:
        for diag in diagnostics:
            print(f"invalid config - {diag}", file=sys.stderr)
        return EXIT_INVALID_CONFIG, []
    try:
        if config.sweep is None:
            record = _run_point(config, None, meta)
            path = resolve_output_path(config)
            if _output_format(config) == "csv":
                text = _dump_csv([csv_row("", None, record.result)])
            else:
                text = _dump_json(record_payload(record, include_amplitudes=True))
            _write_text(path, text)
            print(f"wrote {path}")
            print(f"# run took {record.duration_seconds:.3f}s", file=sys.stderr)
            return EXIT_OK, [record]
        records = _run_sweep(config, jobs, meta)
        base = os.path.splitext(resolve_output_path(config))[0]
        csv_path = base + ".csv"
        rows = [
            csv_row(config.sweep.parameter, record.sweep_value, record.result)
            for record in records
        ]
        _write_text(csv_path, _dump_csv(rows))
        json_path = base + ".json"
        payloads = [record_payload(r, include_amplitudes=full_states) for r in records]
        _write_text(json_path, _dump_json(payloads))
        print(f"wrote {csv_path}")
        print(f"wrote {json_path}")
        total = sum(r.duration_seconds for r in records)
        print(f"# sweep of {len(records)} points took {total:.3f}s", file=sys.stderr)
        return EXIT_OK, records
    except ZeroProbabilityError as exc:
        print(f"zero-probability outcome: {exc}", file=sys.stderr)
        return EXIT_ZERO_PROBABILITY, []
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        if exc.required_truncation is not None:
            print(f"hint: retry with truncation >= {exc.required_truncation}", file=sys.stderr)
        return EXIT_PRECISION, []
    except ResourceError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_PRECISION, []
    except (ConfigurationError, DomainError) as exc:
        print(f"invalid config - {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG, []
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO, []


def _run_sweep(config: RunConfig, jobs: int, meta: dict) -> list[RunRecord]:
    values = sweep_grid(config.sweep)
    points = [replace(config, **{config.sweep.parameter: value}) for value in values]
    if jobs <= 1:
        return [_run_point(point, value, meta) for point, value in zip(points, values)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_run_point, point, value, meta)
            for point, value in zip(points, values)
        ]
        return [f.result() for f in futures]


def _write_text(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unruhsim",
        description="Accelerated-measurement photon generation in truncated Fock space",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"unruhsim {__version__} (record schema v{SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, info in (
        ("single", "number measurement on one Rindler frequency"),
        ("double", "number measurements on two Rindler frequencies"),
        ("epr", "two-frequency run post-selected on two total photons"),
        ("signal", "single-photon signal transmission check"),
        ("validate", "check a configuration and print diagnostics"),
    ):
        p = sub.add_parser(name, help=info)
        _add_common_options(p)
    return parser


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat JSON config file; flags override its values")
    parser.add_argument("--scenario", help=argparse.SUPPRESS)
    parser.add_argument("--omega1-over-a", type=float, dest="omega1_over_a")
    parser.add_argument("--omega2-over-a", type=float, dest="omega2_over_a")
    parser.add_argument("--omega0-over-a", type=float, dest="omega0_over_a")
    parser.add_argument("--m", type=int)
    parser.add_argument("--m1", type=int)
    parser.add_argument("--m2", type=int)
    parser.add_argument("--truncation", type=int)
    parser.add_argument("--epsilon-max", type=float, dest="epsilon_max")
    parser.add_argument("--prune-threshold", type=float, dest="prune_threshold")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--sweep-parameter", dest="sweep_parameter")
    parser.add_argument("--sweep-start", type=float, dest="sweep_start")
    parser.add_argument("--sweep-stop", type=float, dest="sweep_stop")
    parser.add_argument("--sweep-steps", type=int, dest="sweep_steps")
    parser.add_argument("--output", help="output file path")
    parser.add_argument("--format", choices=("json", "csv"))
    parser.add_argument("--jobs", type=int, default=1, help="concurrent sweep grid points")
    parser.add_argument(
        "--full-states",
        action="store_true",
        help="include amplitude dumps in sweep records",
    )
    parser.add_argument(
        "--acceleration-si",
        type=float,
        help="acceleration in m/s^2, combined with --omega*-hz flags",
    )
    parser.add_argument("--omega1-hz", type=float, dest="omega1_hz")
    parser.add_argument("--omega2-hz", type=float, dest="omega2_hz")
    parser.add_argument("--omega0-hz", type=float, dest="omega0_hz")


def _ratio_from_si(frequency_hz: float, acceleration: float) -> float:
    """Dimensionless omega/a from a lab frequency and proper acceleration."""
    return 2.0 * math.pi * frequency_hz * SPEED_OF_LIGHT / acceleration


def _merge_config(args: argparse.Namespace) -> tuple[RunConfig | None, list[Diagnostic], dict]:
    meta: dict = {}
    if args.config:
        config, diagnostics = load_config_file(args.config)
        if config is None:
            return None, diagnostics, meta
    else:
        config = RunConfig(scenario="")
    overrides: dict = {}
    scenario = args.command if args.command != "validate" else (args.scenario or config.scenario)
    overrides["scenario"] = scenario or config.scenario
    for name in (
        "omega1_over_a",
        "omega2_over_a",
        "omega0_over_a",
        "m",
        "m1",
        "m2",
        "truncation",
        "epsilon_max",
        "prune_threshold",
        "seed",
    ):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if args.acceleration_si is not None:
        if args.acceleration_si <= 0:
            return None, [Diagnostic("acceleration_si", "must be positive")], meta
        conversions = {}
        for hz_name, ratio_name in (
            ("omega1_hz", "omega1_over_a"),
            ("omega2_hz", "omega2_over_a"),
            ("omega0_hz", "omega0_over_a"),
        ):
            hz = getattr(args, hz_name)
            if hz is not None:
                ratio = _ratio_from_si(hz, args.acceleration_si)
                overrides[ratio_name] = ratio
                conversions[hz_name] = hz
                conversions[ratio_name] = ratio
        if conversions:
            conversions["acceleration_si"] = args.acceleration_si
            meta["si_conversion"] = conversions
    elif any(getattr(args, n) is not None for n in ("omega1_hz", "omega2_hz", "omega0_hz")):
        return None, [Diagnostic("acceleration_si", "required when --omega*-hz flags are used")], meta
    if any(getattr(args, f"sweep_{k}") is not None for k in ("parameter", "start", "stop", "steps")):
        missing = [
            f"sweep_{k}" for k in ("parameter", "start", "stop", "steps")
            if getattr(args, f"sweep_{k}") is None
        ]
        if missing:
            return None, [Diagnostic("sweep", f"incomplete sweep flags, missing {missing}")], meta
        overrides["sweep"] = SweepSpec(
            args.sweep_parameter, args.sweep_start, args.sweep_stop, args.sweep_steps
        )
    if args.output is not None or args.format is not None:
        current = config.output or OutputSpec(path="")
        overrides["output"] = OutputSpec(
            path=args.output if args.output is not None else current.path,
            format=args.format if args.format is not None else current.format,
        )
    return replace(config, **overrides), [], meta


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 0
        return EXIT_INVALID_CONFIG if code == 2 else code
    config, diagnostics, meta = _merge_config(args)
    if config is None:
        for diag in diagnostics:
            print(f"invalid config - {diag}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    if args.command == "validate":
        diagnostics = validate(config)
        if not diagnostics:
            print("configuration ok")
            return EXIT_OK
        for diag in diagnostics:
            print(str(diag))
        return EXIT_INVALID_CONFIG
    code, _ = run(config, jobs=args.jobs, full_states=args.full_states, meta=meta)
    return code


if __name__ == "__main__":
    sys.exit(main())
