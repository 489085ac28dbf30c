"""Command-line experiment runner: encode a register, process it, read it out.

Usage::

    modalqc run grover --n-modes 16 --marked 3
    modalqc run readout_demo --n-modes 8 --basis-index 5
    modalqc run equivalence_check --n-modes 8 --format json
    modalqc run resource_report --n-modes 1024
    modalqc run --config experiment.json [--seed 3 ...]

Flags override values from ``--config``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from typing import Any, Sequence

import numpy as np

from . import classical_twin, decoder, processor, register, resources
from .errors import ConfigError, ModalError, ParseError, ValidationError

EXPERIMENTS = ("grover", "readout_demo", "equivalence_check", "resource_report")
FORMATS = ("table", "csv", "json")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n_modes: int
    marked_index: int | None = None
    n_iterations: int | None = None
    n_shots: int = 10000
    seed: int = 0
    output_format: str = "table"
    output_path: str | None = None
    basis_index: int | None = None
    amplitudes: tuple[complex, ...] | None = None


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}


def _as_int(name: str, value: Any, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValidationError(name, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValidationError(name, f"must be >= {minimum}, got {value}")
    return int(value)


def _as_amplitudes(value: Any) -> tuple[complex, ...]:
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError as exc:
            raise ValidationError("amplitudes", f"not a JSON array: {exc.msg}") from None
    if not isinstance(value, list) or not value:
        raise ValidationError("amplitudes", "expected a non-empty JSON array")
    out = []
    for entry in value:
        # a complex entry is written as [re, im]
        if isinstance(entry, list) and len(entry) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry
        ):
            out.append(complex(entry[0], entry[1]))
        elif isinstance(entry, (int, float)) and not isinstance(entry, bool):
            out.append(complex(entry))
        else:
            raise ValidationError("amplitudes", f"bad entry {entry!r}; use a number or [re, im]")
    return tuple(out)


def validate_config(raw: dict) -> ExperimentConfig:
    """Apply defaults and check that every field the experiment needs is present."""
    unknown = sorted(set(raw) - _FIELD_NAMES)
    if unknown:
        raise ValidationError(unknown[0], "unknown field")
    cfg = {k: v for k, v in raw.items() if v is not None}

    experiment = cfg.get("experiment")
    if experiment is None:
        raise ValidationError("experiment", "missing")
    if experiment not in EXPERIMENTS:
        raise ValidationError("experiment", f"must be one of {', '.join(EXPERIMENTS)}")

    amplitudes = _as_amplitudes(cfg["amplitudes"]) if "amplitudes" in cfg else None
    if "n_modes" not in cfg:
        if amplitudes is None:
            raise ValidationError("n_modes", "missing")
        cfg["n_modes"] = len(amplitudes)
    n_modes = _as_int("n_modes", cfg["n_modes"], 2)
    if amplitudes is not None and len(amplitudes) != n_modes:
        raise ValidationError("amplitudes", f"has {len(amplitudes)} entries but n_modes is {n_modes}")

    marked = cfg.get("marked_index")
    if marked is not None:
        marked = _as_int("marked_index", marked, 0)
        if marked >= n_modes:
            raise ValidationError("marked_index", f"must be < n_modes ({n_modes})")
    if experiment == "grover" and marked is None:
        raise ValidationError("marked_index", "required for the grover experiment")

    iterations = cfg.get("n_iterations")
    if iterations is None:
        if experiment in ("grover", "resource_report"):
            iterations = processor.default_iterations(n_modes)
    else:
        iterations = _as_int("n_iterations", iterations, 0)

    basis_index = cfg.get("basis_index")
    if basis_index is not None:
        basis_index = _as_int("basis_index", basis_index, 0)
        if basis_index >= n_modes:
            raise ValidationError("basis_index", f"must be < n_modes ({n_modes})")
    if experiment == "readout_demo" and (basis_index is None) == (amplitudes is None):
        raise ValidationError("basis_index", "readout_demo needs exactly one of basis_index or amplitudes")

    output_format = cfg.get("output_format", "table")
    if output_format not in FORMATS:
        raise ValidationError("output_format", f"must be one of {', '.join(FORMATS)}")
    output_path = cfg.get("output_path")
    if output_path is not None and not isinstance(output_path, str):
        raise ValidationError("output_path", "expected a string path")

    return ExperimentConfig(
        experiment=experiment,
        n_modes=n_modes,
        marked_index=marked,
        n_iterations=iterations,
        n_shots=_as_int("n_shots", cfg.get("n_shots", 10000), 1),
        seed=_as_int("seed", cfg.get("seed", 0), 0),
        output_format=output_format,
        output_path=output_path,
        basis_index=basis_index,
        amplitudes=amplitudes,
    )


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {path}: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError(f"config {path} must hold a JSON object", 1)
    return data


# flag name -> ExperimentConfig field
_FLAGS = {
    "n_modes": ("--n-modes", int),
    "marked_index": ("--marked", int),
    "n_iterations": ("--iterations", int),
    "n_shots": ("--shots", int),
    "seed": ("--seed", int),
    "output_format": ("--format", str),
    "output_path": ("--output", str),
    "basis_index": ("--basis-index", int),
    "amplitudes": ("--amplitudes", str),
}

_HELP = {
    "n_modes": "number of modes N (>= 2)",
    "marked_index": "mode flipped by the oracle",
    "n_iterations": "Grover iterations (default round(pi/4 sqrt N))",
    "n_shots": "readout repetitions (default 10000)",
    "seed": "seed for all randomness (default 0)",
    "output_format": "table, csv or json (default table)",
    "output_path": "write results here instead of stdout",
    "basis_index": "readout_demo: prepare this basis state",
    "amplitudes": "readout_demo: JSON array of amplitudes, complex as [re, im]",
}


def _add_flags(p: argparse.ArgumentParser):
    for name, (flag, typ) in _FLAGS.items():
        kw = {"choices": FORMATS} if name == "output_format" else {}
        p.add_argument(flag, dest=name, type=typ, default=argparse.SUPPRESS, help=_HELP[name], **kw)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modalqc", description="Single-particle modal processor experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="run an experiment")
    run.add_argument("--config", default=argparse.SUPPRESS, help="JSON config file")
    _add_flags(run)
    exp = run.add_subparsers(dest="experiment", parser_class=_Parser)
    for name in EXPERIMENTS:
        _add_flags(exp.add_parser(name, help=f"run the {name} experiment"))
    return parser


def parse_config(argv: Sequence[str]) -> ExperimentConfig:
    """Build a validated config from ``run ...`` arguments and an optional config file."""
    ns = vars(build_parser().parse_args(list(argv)))
    ns.pop("command", None)
    raw: dict = {}
    if "config" in ns:
        raw.update(load_config_file(ns.pop("config")))
    elif ns.get("experiment") is None:
        raise ValidationError("experiment", "give an experiment name or --config")
    for key, value in ns.items():
        if value is not None:
            raw[key] = value
    return validate_config(raw)


def _use_color(cfg: ExperimentConfig) -> bool:
    return cfg.output_path is None and "NO_COLOR" not in os.environ and sys.stdout.isatty()


def _bold(text: str, color: bool) -> str:
    return f"\x1b[1m{text}\x1b[0m" if color else text


def _histogram_rows(hist: decoder.Histogram) -> list[tuple[str, str, str]]:
    return [
        (str(m), str(int(c)), f"{float(f):.6f}")
        for m, (c, f) in enumerate(zip(hist.counts, hist.frequencies))
    ]


def _histogram_json(hist: decoder.Histogram) -> list[dict]:
    return [
        {"mode_index": m, "count": int(c), "frequency": float(f)}
        for m, (c, f) in enumerate(zip(hist.counts, hist.frequencies))
    ]


def _summary_table(pairs: list[tuple[str, Any]]) -> str:
    return resources.format_table(("quantity", "value"), [(k, str(v)) for k, v in pairs])


def _readout(state: register.SingleParticleState, cfg: ExperimentConfig):
    padded, n_pad = decoder.pad_to_power_of_two(state)
    hist = decoder.repeated_readout(padded, cfg.n_shots, cfg.seed)
    return padded, n_pad, hist


def _run_grover(cfg: ExperimentConfig, color: bool) -> str:
    plan = processor.GroverPlan(cfg.n_modes, cfg.marked_index, cfg.n_iterations)
    state, queries = processor.grover_run(plan)
    _, _, hist = _readout(state, cfg)
    report = resources.compare_with_classical(resources.audit_grover(plan, cfg.n_shots))
    success = float(abs(state.amplitudes[plan.marked_index]) ** 2)
    summary = [
        ("n_modes", cfg.n_modes),
        ("marked_index", plan.marked_index),
        ("n_iterations", plan.n_iterations),
        ("oracle_queries", queries),
        ("success_probability", repr(success)),
        ("n_shots", cfg.n_shots),
        ("seed", cfg.seed),
    ]
    if cfg.output_format == "csv":
        return hist.to_csv()
    if cfg.output_format == "json":
        doc = dict(summary, experiment="grover", histogram=_histogram_json(hist), report=report.to_dict())
        doc["success_probability"] = success
        return json.dumps(doc, indent=2) + "\n"
    return "\n".join([
        _bold("grover search", color),
        _summary_table(summary),
        _bold("readout histogram", color),
        resources.format_table(("mode_index", "count", "frequency"), _histogram_rows(hist)),
        _bold("resources", color),
        report.to_table(),
    ])


def _run_readout_demo(cfg: ExperimentConfig, color: bool) -> str:
    if cfg.amplitudes is not None:
        state = register.new_state(cfg.amplitudes)
    else:
        state = register.basis_state(cfg.n_modes, cfg.basis_index)
    padded, n_pad, hist = _readout(state, cfg)
    shot = decoder.sample_readout(padded, cfg.seed, 0)
    mode, steps = decoder.binary_search_poll(shot.bits)
    report = resources.compare_with_classical(resources.ledger_for(cfg.n_modes, 0, cfg.n_shots))
    summary = [
        ("n_modes", cfg.n_modes),
        ("n_padded_modes", n_pad),
        ("bits", shot.bitstring),
        ("decoded_mode", mode),
        ("steps", steps),
        ("n_shots", cfg.n_shots),
        ("seed", cfg.seed),
    ]
    if cfg.output_format == "csv":
        return hist.to_csv()
    if cfg.output_format == "json":
        doc = dict(summary, experiment="readout_demo", histogram=_histogram_json(hist), report=report.to_dict())
        return json.dumps(doc, indent=2) + "\n"
    groups = [
        (g.label, ",".join(map(str, g.member_modes)), f"{decoder.group_expectation(padded, g):.6f}")
        for g in decoder.detector_groups(padded.n_modes)
    ]
    return "\n".join([
        _bold("readout demo", color),
        _summary_table(summary),
        _bold("detector groups", color),
        resources.format_table(("counter", "modes", "expectation"), groups),
        _bold("readout histogram", color),
        resources.format_table(("mode_index", "count", "frequency"), _histogram_rows(hist)),
    ])


def _run_equivalence(cfg: ExperimentConfig, color: bool) -> str:
    rng = np.random.default_rng(cfg.seed)
    state = register.random_state(cfg.n_modes, rng)
    u = processor.random_unitary(cfg.n_modes, rng)
    basis = register.fourier_mode_basis(cfg.n_modes, cfg.n_modes)
    diff = classical_twin.equivalence_check(state, u, basis)
    corr = classical_twin.quantum_correlation(processor.apply_unitary(state, u), basis)
    summary = [
        ("n_modes", cfg.n_modes),
        ("grid_size", basis.grid_size),
        ("seed", cfg.seed),
        ("max_abs_difference", repr(diff)),
        ("correlation_trace", repr(corr.trace)),
        ("hermiticity_error", repr(corr.hermiticity_error())),
    ]
    if cfg.output_format == "csv":
        return corr.to_csv()
    if cfg.output_format == "json":
        doc = dict(summary, experiment="equivalence_check")
        doc.update(
            max_abs_difference=diff,
            correlation_trace=corr.trace,
            hermiticity_error=corr.hermiticity_error(),
        )
        return json.dumps(doc, indent=2) + "\n"
    return "\n".join([_bold("quantum vs classical correlation", color), _summary_table(summary)])


def _run_resource_report(cfg: ExperimentConfig, color: bool) -> str:
    ledger = resources.ledger_for(cfg.n_modes, cfg.n_iterations, cfg.n_shots)
    report = resources.compare_with_classical(ledger)
    if cfg.output_format == "json":
        return report.to_json()
    if cfg.output_format == "csv":
        lines = ["quantity,value"] + [f"{k},{v}" for k, v in report.to_dict().items()]
        return "\n".join(lines) + "\n"
    return "\n".join([_bold("resource report", color), report.to_table()])


_RUNNERS = {
    "grover": _run_grover,
    "readout_demo": _run_readout_demo,
    "equivalence_check": _run_equivalence,
    "resource_report": _run_resource_report,
}


def run_experiment(cfg: ExperimentConfig) -> int:
    """Run one experiment and write its output; returns the process exit code."""
    try:
        text = _RUNNERS[cfg.experiment](cfg, _use_color(cfg))
    except (ModalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if cfg.output_path is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {cfg.output_path}: {exc.strerror}", file=sys.stderr)
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run_experiment(cfg)


if __name__ == "__main__":
    sys.exit(main())
