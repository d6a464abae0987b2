"""
_cli.py:

This file contains the command-line front end: experiment configuration files, the dispatch of
every command and the artifacts they write.

Classes:
    - `ConfigError` - Error raised when a configuration cannot be parsed or validated.
    - `ExperimentConfig` - Fully resolved experiment.

Functions:
    - `load_config` - Parse an INI or JSON experiment file.
    - `run` - Run an experiment and write its artifacts & manifest.
    - `exit_status` - Exit status of an error.
    - `main` - Entry point of the `dyadim` command.
"""
from __future__ import annotations

import json
from argparse import ArgumentParser
from configparser import ConfigParser
from configparser import Error as ConfigParserError
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from math import e
from pathlib import Path
from re import compile as compile_re
from typing import Callable, Mapping, Sequence, TypeVar

from ._config import DyadimError, Settings
from ._counterexample import (
    InseparableSpecsError,
    build_pair,
    dimension_gap_report,
    verify_ratio_condition,
)
from ._dimension import continuity_sweep, dimension_estimate, local_exponent_bounds, smb_check
from ._entropy import (
    LOG2,
    EnumerationSizeError,
    delta_recursion_check,
    entropy_bruteforce,
    entropy_profile,
    lemma2_scan,
    window_table,
)
from ._export import SUMMARY_DECIMALS, write_csv, write_json
from ._logger import logger
from ._measure import MarkovMeasure
from ._weights import (
    DoublingBlocks,
    Pair,
    PerturbMode,
    WeightSequence,
    WeightValueError,
    pairs_from_text,
)

T = TypeVar("T")

COMMANDS = (
    "entropy",
    "dimension",
    "sample",
    "window-gap",
    "lemma-scan",
    "continuity",
    "counterexample",
)
WEIGHTED_COMMANDS = frozenset(COMMANDS) - {"lemma-scan", "counterexample"}
EXPERIMENT_KEYS = frozenset(
    {
        "command",
        "horizon",
        "window",
        "depth",
        "paths",
        "seed",
        "checkpoints",
        "output_dir",
        "zetas",
        "mode",
        "epsilon",
        "delta",
        "stages",
        "grid_step",
        "grid_low",
        "grid_high",
        "companion_k",
        "n_max",
        "k_max",
        "oracle",
    }
)
WEIGHT_KEYS = frozenset(
    {"kind", "pairs", "tail", "seed", "period", "length", "low", "high", "rule", "first", "second"}
)
SECTIONS = {"experiment": EXPERIMENT_KEYS, "weights": WEIGHT_KEYS}

_SECTION_LINE = compile_re(r"^\s*\[([^\]]+)\]")
_KEY_LINE = compile_re(r"^\s*([^\s=:#;\[][^=:]*?)\s*[=:]")


class ConfigError(DyadimError):
    """
    This class should be used to raise an error when an experiment configuration
    cannot be parsed or holds an unknown key or an invalid value.

    Attributes:
        - `key: str | None` - Offending key, if any.
        - `line: int | None` - Line of the offending key in the file, if known.
    """

    def __init__(self, message: str, key: str | None = None, line: int | None = None) -> None:
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.key = key
        self.line = line


def _ini_lines(text: str) -> dict[tuple[str, str], int]:
    lines: dict[tuple[str, str], int] = {}
    section = ""
    for number, raw in enumerate(text.splitlines(), start=1):
        if header := _SECTION_LINE.match(raw):
            section = header.group(1).strip()
        elif found := _KEY_LINE.match(raw):
            lines.setdefault((section, found.group(1).strip().lower()), number)
    return lines


def _json_lines(text: str, document: Mapping[str, object]) -> dict[tuple[str, str], int]:
    rows = text.splitlines()
    lines: dict[tuple[str, str], int] = {}
    for section, values in document.items():
        start = next(
            (index for index, row in enumerate(rows) if f'"{section}"' in row), 0
        )
        if not isinstance(values, Mapping):
            continue
        for key in values:
            for index in range(start, len(rows)):
                if f'"{key}"' in rows[index]:
                    lines[(section, key)] = index + 1
                    break
    return lines


class _Section:
    """Values of one configuration section, converted with key & line diagnostics."""

    __slots__ = "name", "values", "lines"

    def __init__(
        self, name: str, values: Mapping[str, object], lines: Mapping[tuple[str, str], int]
    ) -> None:
        self.name = name
        self.values = dict(values)
        self.lines = lines

    def line(self, key: str) -> int | None:
        """Line of a key, `None` if unknown."""
        return self.lines.get((self.name, key))

    def check_keys(self) -> None:
        """Reject the first key, in file order, which the section does not know."""
        unknown = sorted(
            set(self.values) - SECTIONS[self.name], key=lambda key: self.line(key) or 0
        )
        if unknown:
            raise ConfigError(
                f"unknown key in section [{self.name}]", unknown[0], self.line(unknown[0])
            )

    def get(self, key: str, convert: Callable[[object], T], default: T) -> T:
        """Converted value of `key`, `default` if absent."""
        if key not in self.values:
            return default
        try:
            return convert(self.values[key])
        except (TypeError, ValueError, WeightValueError) as exc:
            raise ConfigError(f"invalid value: {exc}", key, self.line(key)) from exc

    def require(self, key: str, convert: Callable[[object], T]) -> T:
        """Converted value of `key`, which must be present."""
        if key not in self.values:
            raise ConfigError(f"section [{self.name}] needs this key", key)
        try:
            return convert(self.values[key])
        except (TypeError, ValueError, WeightValueError) as exc:
            raise ConfigError(f"invalid value: {exc}", key, self.line(key)) from exc


def _to_int(value: object) -> int:
    if isinstance(value, bool):
        raise ValueError(f"expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    number = float(str(value).replace("_", ""))
    if not number.is_integer():
        raise ValueError(f"expected an integer, got {value!r}")
    return int(number)


def _to_float(value: object) -> float:
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    return float(str(value)) if not isinstance(value, (int, float)) else float(value)


def _split(value: object) -> list[object]:
    if isinstance(value, (list, tuple)):
        return list(value)
    return [part for part in str(value).replace(";", ",").split(",") if part.strip()]


def _to_ints(value: object) -> tuple[int, ...]:
    return tuple(_to_int(part) for part in _split(value))


def _to_floats(value: object) -> tuple[float, ...]:
    return tuple(_to_float(part) for part in _split(value))


def _to_weight(value: object) -> float:
    number = _to_float(value)
    if not 0.0 <= number <= 1.0:
        raise ValueError(f"weight {number!r} is outside [0, 1]")
    return number


def _to_pairs(value: object) -> tuple[Pair, ...]:
    if isinstance(value, str):
        return pairs_from_text(value)
    if isinstance(value, (list, tuple)):
        if len(value) == 2 and all(isinstance(item, (int, float)) for item in value):
            value = [value]
        return pairs_from_text("; ".join(",".join(str(v) for v in pair) for pair in value))
    raise ValueError(f"expected couples 'p,q; p,q', got {value!r}")


def _to_pair(value: object) -> Pair:
    pairs = _to_pairs(value)
    if len(pairs) != 1:
        raise ValueError(f"expected a single couple 'p,q', got {len(pairs)}")
    return pairs[0]


def _to_bool(value: object) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def _to_text(value: object) -> str:
    return str(value).strip()


@dataclass(slots=True, frozen=True)
class ExperimentConfig:
    """
    Fully resolved experiment: every parameter holds its configured or default value.

    Attributes:
        - `command: str` - One of `COMMANDS`.
        - `weights: WeightSequence | None` - Weights of the measure, `None` for commands
                                             without a measure.
        - `weights_declaration: dict[str, object]` - Resolved declaration of the weights.
        - `horizon`, `window`, `depth`, `paths`, `seed`, `checkpoints` - Numeric parameters.
        - `output_dir: Path` - Directory receiving the artifacts.
        - `zetas`, `mode` - Continuity sweep parameters.
        - `epsilon`, `delta`, `stages` - Counterexample parameters.
        - `grid_step`, `grid_low`, `grid_high`, `companion_k` - Lemma scan parameters.
        - `n_max`, `k_max` - Window gap range.
        - `oracle: bool` - Whether entropies are cross-checked by enumeration.
    """

    command: str
    weights: WeightSequence | None = field(default=None, compare=False)
    weights_declaration: dict[str, object] = field(default_factory=dict)
    horizon: int = Settings.DEFAULT_HORIZON
    window: int = Settings.DEFAULT_WINDOW
    depth: int = Settings.DEFAULT_DEPTH
    paths: int = Settings.DEFAULT_PATHS
    seed: int = Settings.DEFAULT_SEED
    checkpoints: tuple[int, ...] = Settings.DEFAULT_CHECKPOINTS
    output_dir: Path = Path("dyadim-output")
    zetas: tuple[float, ...] = (0.1, 0.05, 0.02, 0.01)
    mode: PerturbMode = PerturbMode.UNIFORM_SHIFT
    epsilon: float = 0.1
    delta: float = 0.01
    stages: int = 3
    grid_step: float = 0.01
    grid_low: float = 0.0
    grid_high: float = 1.0
    companion_k: int = 9
    n_max: int = 100
    k_max: int = 200
    oracle: bool = False

    def resolved(self) -> dict[str, object]:
        """Every parameter, ready to be echoed to a manifest."""
        values = {
            item.name: getattr(self, item.name) for item in fields(self) if item.name != "weights"
        }
        values["output_dir"] = str(self.output_dir)
        values["mode"] = self.mode.value
        values["checkpoints"] = list(self.checkpoints)
        values["zetas"] = list(self.zetas)
        return values


def _build_weights(section: _Section, seed: int) -> tuple[WeightSequence, dict[str, object]]:
    # converters range-check couples & bounds, so their errors carry their own key
    kind = section.get("kind", _to_text, "constant")
    declaration: dict[str, object] = {"kind": kind}
    if kind == "constant":
        weights = WeightSequence.constant(*section.require("pairs", _to_pair))
    elif kind == "periodic":
        weights = WeightSequence.periodic(section.require("pairs", _to_pairs))
    elif kind == "explicit":
        weights = WeightSequence.explicit(
            section.require("pairs", _to_pairs), section.require("tail", _to_pairs)
        )
    elif kind == "random":
        length = section.get("length", _to_int, None)
        period = section.get("period", _to_int, None)
        low = section.get("low", _to_weight, 0.0)
        high = section.get("high", _to_weight, 1.0)
        count_key, count = ("length", length) if period is None else ("period", period)
        if count is None or (length is not None and period is not None):
            raise ConfigError(
                "give exactly one of 'length' and 'period'", count_key, section.line(count_key)
            )
        if count < 1:
            raise ConfigError(
                "a random sequence needs at least one couple", count_key, section.line(count_key)
            )
        if low > high:
            raise ConfigError(f"empty random range [{low}, {high}]", "high", section.line("high"))
        weights = WeightSequence.random(
            section.get("seed", _to_int, seed),
            length=length,
            period=period,
            low=low,
            high=high,
            tail=section.get("tail", _to_pairs, ((0.5, 0.5),)),
        )
        declaration.update(length=length, period=period, low=low, high=high)
    elif kind == "generator":
        rule = section.require("rule", _to_text)
        if rule != "doubling-blocks":
            raise ConfigError(f"unknown rule {rule!r}", "rule", section.line("rule"))
        first = section.require("first", _to_pair)
        second = section.require("second", _to_pair)
        weights = WeightSequence.generated(DoublingBlocks(first, second))
        declaration.update(rule=rule, first=list(first), second=list(second))
    else:
        raise ConfigError(f"unknown weight kind {kind!r}", "kind", section.line("kind"))

    return weights, {**weights.describe(), **declaration}


def _read_sections(path: Path) -> dict[str, _Section]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc

    if path.suffix.lower() == ".json":
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON: {exc.msg}", line=exc.lineno) from exc
        if not isinstance(document, dict):
            raise ConfigError("the JSON document must be an object of sections")
        lines = _json_lines(text, document)
        raw = document
    else:
        parser = ConfigParser(interpolation=None)
        try:
            parser.read_string(text, source=str(path))
        except ConfigParserError as exc:
            raise ConfigError(
                f"malformed configuration: {exc.message}", line=getattr(exc, "lineno", None)
            ) from exc
        lines = _ini_lines(text)
        raw = {name: dict(parser[name]) for name in parser.sections()}

    sections: dict[str, _Section] = {}
    for name, values in raw.items():
        if name not in SECTIONS:
            line = min((n for (section, _), n in lines.items() if section == name), default=None)
            raise ConfigError(f"unknown section [{name}]", name, line)
        if not isinstance(values, Mapping):
            raise ConfigError(f"section [{name}] must hold key/value pairs", name)
        sections[name] = _Section(name, values, lines)
        sections[name].check_keys()
    return sections


def load_config(
    path: Path,
    command: str | None = None,
    *,
    seed: int | None = None,
    output_dir: Path | None = None,
    oracle: bool = False,
) -> ExperimentConfig:
    """
    Parse an experiment file: INI with `[experiment]` & `[weights]` sections, or JSON (`.json`
    suffix) with the same two objects. Unknown keys are rejected with their line.

    Parameters:
        - `path: Path` - Experiment file.
        - `command: str | None` - Command given on the command line, must match the file's.
        - `seed: int | None`, `output_dir: Path | None`, `oracle: bool` - Command-line overrides.

    Returns: `ExperimentConfig` - The resolved experiment.

    Raises:
        - `ConfigError` - Raised for any parse or validation failure.
    """
    sections = _read_sections(path)
    experiment = sections.get("experiment", _Section("experiment", {}, {}))
    declared = experiment.get("command", _to_text, None)
    if command is not None and declared is not None and command != declared:
        raise ConfigError(
            f"the file declares {declared!r}, the command line {command!r}",
            "command",
            experiment.line("command"),
        )
    command = declared if command is None else command
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}, expected one of {', '.join(COMMANDS)}")

    defaults = ExperimentConfig(command)
    resolved_seed = seed if seed is not None else experiment.get("seed", _to_int, defaults.seed)
    mode_text = experiment.get("mode", _to_text, defaults.mode.value)
    try:
        mode = PerturbMode(mode_text)
    except ValueError as exc:
        raise ConfigError(f"unknown mode {mode_text!r}", "mode", experiment.line("mode")) from exc

    weights, declaration = None, {}
    if command in WEIGHTED_COMMANDS:
        if "weights" not in sections:
            raise ConfigError(f"the {command} command needs a [weights] section", "weights")
        weights, declaration = _build_weights(sections["weights"], resolved_seed)

    config = ExperimentConfig(
        command,
        weights,
        declaration,
        horizon=experiment.get("horizon", _to_int, defaults.horizon),
        window=experiment.get("window", _to_int, defaults.window),
        depth=experiment.get("depth", _to_int, defaults.depth),
        paths=experiment.get("paths", _to_int, defaults.paths),
        seed=resolved_seed,
        checkpoints=experiment.get("checkpoints", _to_ints, defaults.checkpoints),
        output_dir=output_dir
        or Path(experiment.get("output_dir", _to_text, str(defaults.output_dir))),
        zetas=experiment.get("zetas", _to_floats, defaults.zetas),
        mode=mode,
        epsilon=experiment.get("epsilon", _to_float, defaults.epsilon),
        delta=experiment.get("delta", _to_float, defaults.delta),
        stages=experiment.get("stages", _to_int, defaults.stages),
        grid_step=experiment.get("grid_step", _to_float, defaults.grid_step),
        grid_low=experiment.get("grid_low", _to_float, defaults.grid_low),
        grid_high=experiment.get("grid_high", _to_float, defaults.grid_high),
        companion_k=experiment.get("companion_k", _to_int, defaults.companion_k),
        n_max=experiment.get("n_max", _to_int, defaults.n_max),
        k_max=experiment.get("k_max", _to_int, defaults.k_max),
        oracle=oracle or experiment.get("oracle", _to_bool, defaults.oracle),
    )
    _validate(config, experiment)
    return config


def _validate(config: ExperimentConfig, experiment: _Section) -> None:
    def check(condition: bool, message: str, key: str) -> None:
        if not condition:
            raise ConfigError(message, key, experiment.line(key))

    for key in ("horizon", "window", "depth", "paths", "stages", "n_max", "k_max"):
        check(getattr(config, key) >= 1, "must be >= 1", key)
    check(bool(config.checkpoints), "needs at least one checkpoint", "checkpoints")
    check(min(config.checkpoints) >= 1, "checkpoints must be >= 1", "checkpoints")
    if config.command == "sample":
        check(max(config.checkpoints) <= config.depth, "checkpoints exceed depth", "checkpoints")
    if config.command in ("dimension", "continuity"):
        check(
            config.horizon >= 10 * config.window >= 100,
            "needs horizon >= 10 * window >= 100",
            "horizon",
        )
    if config.command == "continuity":
        check(bool(config.zetas), "needs at least one zeta", "zetas")
        check(min(config.zetas) >= 0.0, "zetas must be >= 0", "zetas")
    if config.command == "lemma-scan":
        check(0.0 < config.grid_step <= 0.1, "must be in (0, 0.1]", "grid_step")
        check(
            0.0 <= config.grid_low < config.grid_high <= 1.0,
            "needs 0 <= grid_low < grid_high <= 1",
            "grid_low",
        )


def _entropy(config: ExperimentConfig, measure: MarkovMeasure) -> tuple[list[Path], str]:
    profile = entropy_profile(measure, config.horizon)
    header = ["n", "H_nats", "c_n", "pi0"]
    columns: list[list[float]] = [
        profile.entropies.tolist(),
        profile.normalized.tolist(),
        profile.marginals.tolist(),
    ]
    summary = (
        f"H_{config.horizon}={profile.entropy(config.horizon):.{SUMMARY_DECIMALS}f} nats, "
        f"c_{config.horizon}={profile.normalized_entropy(config.horizon):.{SUMMARY_DECIMALS}f}"
    )
    if config.oracle:
        header.append("H_bruteforce")
        # deepest first so an oversized horizon fails before any enumeration
        enumerated = [entropy_bruteforce(measure, n) for n in range(config.horizon, 0, -1)][::-1]
        worst = max(abs(a - b) for a, b in zip(enumerated, columns[0]))
        columns.append(enumerated)
        summary += f", oracle gap {worst:.3e}"
    rows = ([n, *values] for n, values in enumerate(zip(*columns), start=1))
    return [write_csv(config.output_dir / "entropy.csv", header, rows)], summary


def _dimension(config: ExperimentConfig, measure: MarkovMeasure) -> tuple[list[Path], str]:
    estimate = dimension_estimate(measure, config.horizon, config.window)
    path = write_csv(
        config.output_dir / "dimension.csv",
        ["lower", "upper", "mode", "horizon", "window", "cesaro_lower", "cesaro_upper"],
        [[
            estimate.lower,
            estimate.upper,
            estimate.mode.value,
            estimate.horizon,
            estimate.window,
            estimate.cesaro_lower,
            estimate.cesaro_upper,
        ]],
        decimals=SUMMARY_DECIMALS,
    )
    summary = (
        f"lower={estimate.lower:.{SUMMARY_DECIMALS}f}, "
        f"upper={estimate.upper:.{SUMMARY_DECIMALS}f}, mode={estimate.mode.value}"
    )
    return [path], summary


def _sample(config: ExperimentConfig, measure: MarkovMeasure) -> tuple[list[Path], str]:
    trace = measure.sample_path(config.depth, config.seed)
    path_csv = write_csv(
        config.output_dir / "path.csv",
        ["n", "bit", "x_n_nats", "log_mass_nats"],
        (
            [n, trace.address.bits[n - 1], float(trace.increments[n - 1]),
             float(trace.cumulative[n - 1])]
            for n in range(1, trace.depth + 1)
        ),
    )
    report = smb_check(measure, config.depth, config.paths, config.seed, config.checkpoints)
    smb_csv = write_csv(
        config.output_dir / "smb.csv",
        ["checkpoint", "mean_dev", "max_dev", "paths"],
        report.summary(),
    )
    bounds = local_exponent_bounds(measure, config.depth, config.paths, config.seed)
    last = report.summary()[-1]
    summary = (
        f"max deviation at n={last[0]}: {last[2]:.{SUMMARY_DECIMALS}f}; local exponent at "
        f"depth {config.depth}: median {bounds.median:.{SUMMARY_DECIMALS}f} "
        f"[{bounds.low:.{SUMMARY_DECIMALS}f}, {bounds.high:.{SUMMARY_DECIMALS}f}]"
    )
    return [path_csv, smb_csv], summary


def _window_gap(config: ExperimentConfig, measure: MarkovMeasure) -> tuple[list[Path], str]:
    table = window_table(measure, config.n_max, config.k_max)
    # Delta_n^k is bounded by eta(k - 1) = e^2 log 2 / k
    eta = [e**2 * LOG2 / k for k in range(1, config.k_max + 1)]
    gaps = write_csv(
        config.output_dir / "window_gap.csv",
        ["n", "k", "a", "b", "delta", "eta_bound", "bound_ok"],
        (
            [n, k, float(table.a[n, k]), float(table.b[n, k]), float(table.delta[n, k]),
             eta[k - 1], bool(table.delta[n, k] <= eta[k - 1])]
            for n in range(1, config.n_max + 1)
            for k in range(1, config.k_max + 1)
        ),
    )
    report = delta_recursion_check(measure, config.n_max, config.k_max)
    recursion = write_csv(
        config.output_dir / "delta_recursion.csv",
        ["n", "k", "lhs", "lemma_rhs", "exact_rhs", "max_rhs", "eta"],
        (
            [n, k, float(report.lhs[n - 1, k - 1]), float(report.lemma_rhs[n - 1, k - 1]),
             float(report.exact_rhs[n - 1, k - 1]), float(report.max_rhs[n - 1, k - 1]),
             float(report.eta[n - 1, k - 1])]
            for n in range(1, config.n_max + 1)
            for k in range(1, config.k_max + 1)
        ),
    )
    summary = (
        f"eta violations {report.eta_violations}, recursion violations "
        f"{report.lemma_violations} (lemma form) / {report.exact_violations} (exact form), "
        f"min eta slack {report.eta_slack:.{SUMMARY_DECIMALS}f}"
    )
    return [gaps, recursion], summary


def _lemma_scan(config: ExperimentConfig) -> tuple[list[Path], str]:
    report = lemma2_scan(config.grid_step, config.grid_low, config.grid_high, config.companion_k)
    path = write_csv(
        config.output_dir / "lemma_scan.csv",
        ["p", "q", "lhs", "rhs", "excess"],
        ([*map(float, row), float(row[2] - row[3])] for row in report.points),
    )
    summary = (
        f"{report.violations} violations, max excess {report.max_excess:.{SUMMARY_DECIMALS}f}; "
        f"companion inequality (k={report.companion_k}): "
        f"{report.companion_violations} violations"
    )
    return [path], summary


def _continuity(config: ExperimentConfig, weights: WeightSequence) -> tuple[list[Path], str]:
    rows = continuity_sweep(
        weights, config.zetas, config.mode, config.seed, config.horizon, config.window
    )
    path = write_csv(
        config.output_dir / "sweep.csv",
        ["zeta", "realized_distance", "lower_diff", "upper_diff", "mode"],
        ([r.zeta, r.realized_distance, r.lower_diff, r.upper_diff, r.mode.value] for r in rows),
    )
    smallest = rows[-1]
    summary = (
        f"{len(rows)} perturbations; at zeta={smallest.zeta}: "
        f"lower diff {smallest.lower_diff:.{SUMMARY_DECIMALS}f}, "
        f"upper diff {smallest.upper_diff:.{SUMMARY_DECIMALS}f}"
    )
    return [path], summary


def _counterexample(config: ExperimentConfig) -> tuple[list[Path], str]:
    mu, nu, plan = build_pair(config.epsilon, config.delta, config.stages)
    ratio = verify_ratio_condition(mu, nu)
    gap = dimension_gap_report(mu, nu, plan)
    plan_json = write_json(config.output_dir / "stage_plan.json", plan.to_json())
    ratio_csv = write_csv(
        config.output_dir / "ratio.csv",
        ["regime", "step_mu", "step_nu", "log_gap"],
        ([c.label, c.step_mu, c.step_nu, c.log_gap] for c in ratio.classes if c.reachable),
    )
    gap_json = write_json(
        config.output_dir / "dimension_gap.json",
        {
            "dim_mu": gap.dim_mu,
            "dim_nu_bound": gap.dim_nu_bound,
            "slack": gap.slack,
            "gap": gap.gap,
            "asymptotic": gap.asymptotic,
            "method": gap.method,
            "escape_masses": list(gap.escape_masses),
            "escape_bound": gap.escape_bound,
            "sup_log_gap": ratio.sup_log_gap,
        },
    )
    summary = (
        f"depths {list(plan.depths)}; sup |X_n - Y_n| = {ratio.sup_log_gap:.{SUMMARY_DECIMALS}f}; "
        f"dim mu = {gap.dim_mu:.{SUMMARY_DECIMALS}f}, "
        f"dim nu <= {gap.dim_nu_bound:.{SUMMARY_DECIMALS}f}, gap {gap.gap:.{SUMMARY_DECIMALS}f}"
    )
    return [plan_json, ratio_csv, gap_json], summary


def _dispatch(config: ExperimentConfig) -> tuple[list[Path], str]:
    if config.command == "lemma-scan":
        return _lemma_scan(config)
    if config.command == "counterexample":
        return _counterexample(config)
    assert config.weights is not None
    if config.command == "continuity":
        return _continuity(config, config.weights)
    measure = MarkovMeasure(config.weights)
    handlers = {
        "entropy": _entropy,
        "dimension": _dimension,
        "sample": _sample,
        "window-gap": _window_gap,
    }
    return handlers[config.command](config, measure)


def run(config: ExperimentConfig) -> tuple[int, list[Path]]:
    """
    Run an experiment: dispatch to its command, write the artifacts and a `manifest.json`
    echoing the resolved configuration. Wall-clock timestamps only appear in the manifest's
    `timestamps` object, so identical configurations give byte-identical data files. A failing
    run is logged to every sink, its own `run.log` included.

    Parameters:
        - `config: ExperimentConfig` - The experiment.

    Returns: `tuple[int, list[Path]]` - Exit status and written artifacts, manifest last; no
                                        artifact is listed when the run fails.
    """
    from . import __version__  # pylint: disable=import-outside-toplevel

    config.output_dir.mkdir(parents=True, exist_ok=True)
    log = logger.bind(command=config.command, seed=config.seed)
    status = 0
    written: list[Path] = []

    def failed(exc: BaseException) -> None:
        nonlocal status
        status = exit_status(exc)

    sink_id = logger.add(config.output_dir / "run.log", min_level="DEBUG", colourise=False)
    started = datetime.now(timezone.utc).isoformat()
    try:
        failure = f"{config.command} failed: %{{error}}%"
        with log.catch(DyadimError, message=failure, on_error=failed):
            log.info(f"running {config.command} into {config.output_dir}")
            with log.timed(config.command, level="INFO"):
                outputs, summary = _dispatch(config)
            manifest = write_json(
                config.output_dir / "manifest.json",
                {
                    "command": config.command,
                    "config": config.resolved(),
                    "version": __version__,
                    "outputs": [path.name for path in outputs],
                    "summary": summary,
                    "timestamps": {
                        "started": started,
                        "finished": datetime.now(timezone.utc).isoformat(),
                    },
                },
            )
            written = [*outputs, manifest]
            log.success(summary)
            print(summary)
    finally:
        logger.remove(sink_id)
    return status, written


def exit_status(exc: BaseException) -> int:
    """
    Exit status of an error: 2 configuration, 3 enumeration size, 4 inseparable construction,
    1 anything else.
    """
    if isinstance(exc, ConfigError):
        return 2
    if isinstance(exc, EnumerationSizeError):
        return 3
    if isinstance(exc, InseparableSpecsError):
        return 4
    return 1


def _parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="dyadim",
        description="Entropies & dimensions of non-homogeneous Markov measures on the dyadics.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, type=Path, help="INI or JSON experiment")
    parser.add_argument("--output-dir", type=Path, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument(
        "--oracle", action="store_true", help="cross-check entropies by enumeration"
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Entry point of the `dyadim` command.

    Parameters:
        - `argv: Sequence[str] | None = None` - Arguments, defaults to `sys.argv[1:]`.

    Returns: `int` - Exit status, 0 on success.
    """
    args = _parser().parse_args(argv)
    status = 0

    def failed(exc: BaseException) -> None:
        nonlocal status
        status = exit_status(exc)

    with logger.catch(DyadimError, on_error=failed):
        config = load_config(
            args.config,
            args.command,
            seed=args.seed,
            output_dir=args.output_dir,
            oracle=args.oracle,
        )
        status, _ = run(config)
    return status
