"""Command-line front end: named experiments, parameter sweeps, and CSV
emission.

Config files are INI-style (configparser) with sections [experiment],
[initial], [sweep], [bipartite], [copies], [haar_average]; every value can
be overridden on the command line (flags win). Sweep axes expand in the
fixed order d, rounds, theta, gamma_sq; rows follow expansion order.

Exit codes: 0 success, 2 config error, 3 infeasible computation, 4 I/O
error.
"""
from __future__ import annotations

import argparse
import configparser
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np

from .bases import OrthonormalBasis, basis_2d, extend_to_basis, fourier_basis
from .formulas import (
    BipartiteTargetSpec,
    avg_ps,
    ps_2d,
    ps_2d_max,
    ps_bipartite,
    ps_copies,
    ps_multi_target,
)
from .protocol import (
    InfeasibleError,
    Protocol,
    born_probabilities,
    brute_force_success,
    exact_success,
    monte_carlo_success,
)
from .states import (
    DensityMatrix,
    QubitLikeSpec,
    haar_random_pure,
    maximally_mixed,
    qubit_like_density,
    tensor,
)

CSV_COLUMNS = ("experiment", "d", "N", "theta", "gamma_sq", "exact", "closed_form", "mc_estimate", "mc_stderr", "seed")
FIGURE_ROUNDS = list(range(13))
KINDS = ("single", "sweep", "haar_average", "figure1a", "figure1b", "bipartite", "copies")


class ConfigError(ValueError):
    """Invalid configuration; messages carry the offending field path."""


@dataclass
class InitialStateSpec:
    """Initial state choice: a target-basis column, I/d, a qubit-like state
    on target-basis columns 0 and 1, a seeded Haar-random pure state, or an
    explicit density matrix loaded from a .npy file."""

    kind: str = "basis_state"
    index: int = 0
    p: float = 1.0
    gamma: complex = 0.0
    path: Optional[str] = None


@dataclass
class ExperimentConfig:
    kind: str = "single"
    dimension: int = 2
    rounds: List[int] = field(default_factory=lambda: [1])
    basis: str = "fourier"
    theta: float = math.pi / 4
    phi: float = 0.0
    target_indices: Sequence[int] = (0,)
    initial: InitialStateSpec = field(default_factory=InitialStateSpec)
    engine: str = "markov"
    trajectories: int = 0
    exact_only: bool = False
    seed: int = 0
    seed_given: bool = False
    # sweep axes; None means the axis is fixed by the fields above
    d_list: Optional[List[int]] = None
    theta_grid: Optional[List[float]] = None
    gamma_sq_grid: Optional[List[float]] = None
    # bipartite target parameters
    alpha: complex = complex(1 / math.sqrt(2))
    beta: complex = complex(1 / math.sqrt(2))
    bipartite_p: float = 0.5
    # copies parameters
    copies: int = 1
    n_targets: int = 1
    overlaps: List[float] = field(default_factory=lambda: [0.0])
    # Haar averaging
    samples: int = 10000


@dataclass
class ResultRow:
    """One CSV line; columns mirror CSV_COLUMNS, None fields emit empty."""

    experiment: str
    d: int
    n: int
    theta: Optional[float]
    gamma_sq: Optional[float]
    exact: Optional[float]
    closed_form: Optional[float]
    mc_estimate: Optional[float]
    mc_stderr: Optional[float]
    seed: int

    def __post_init__(self) -> None:
        for name in ("exact", "closed_form", "mc_estimate"):
            value = getattr(self, name)
            if value is not None and not -1e-12 <= value <= 1.0 + 1e-12:
                raise ValueError(f"{name} = {value} is outside [0, 1]")
        if self.mc_stderr is not None and self.mc_stderr < 0.0:
            raise ValueError(f"mc_stderr = {self.mc_stderr} is negative")


# ---------------------------------------------------------------------------
# config parsing

def _convert(section: str, key: str, raw: str, converter, what: str):
    try:
        return converter(raw)
    except (ValueError, TypeError):
        raise ConfigError(f"{section}.{key}: expected {what}, got {raw!r}") from None


def _parse_complex(raw: str) -> complex:
    return complex(raw.replace(" ", ""))


def _parse_int_list(raw: str) -> List[int]:
    return [int(part) for part in raw.split(",") if part.strip() != ""]


def _parse_rounds(raw: str) -> List[int]:
    """Either a single int, a comma list, or an inclusive range 'a:b'."""
    if ":" in raw:
        lo, hi = raw.split(":")
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(raw)
        return list(range(lo, hi + 1))
    return _parse_int_list(raw)


def _parse_grid(raw: str) -> List[float]:
    """Either a comma list of floats or 'start:stop:count' (inclusive linspace)."""
    if ":" in raw:
        start, stop, count = raw.split(":")
        return list(np.linspace(float(start), float(stop), int(count)))
    return [float(part) for part in raw.split(",") if part.strip() != ""]


def load_config(path: str) -> ExperimentConfig:
    """Read an INI config file into an ExperimentConfig."""
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found or empty: {path}")
    config = ExperimentConfig()
    for section in parser.sections():
        for key, raw in parser.items(section):
            _apply_value(config, section, key, raw)
    _validate_config(config)
    return config


def _apply_value(config: ExperimentConfig, section: str, key: str, raw: str) -> None:
    setters = {
        ("experiment", "kind"): lambda: setattr(config, "kind", raw.strip()),
        ("experiment", "dimension"): lambda: setattr(config, "dimension", _convert(section, key, raw, int, "an integer")),
        ("experiment", "rounds"): lambda: setattr(config, "rounds", _convert(section, key, raw, _parse_rounds, "an int, list, or a:b range")),
        ("experiment", "basis"): lambda: setattr(config, "basis", raw.strip()),
        ("experiment", "theta"): lambda: setattr(config, "theta", _convert(section, key, raw, float, "a float")),
        ("experiment", "phi"): lambda: setattr(config, "phi", _convert(section, key, raw, float, "a float")),
        ("experiment", "targets"): lambda: setattr(config, "target_indices", tuple(_convert(section, key, raw, _parse_int_list, "a comma list of ints"))),
        ("experiment", "engine"): lambda: setattr(config, "engine", raw.strip()),
        ("experiment", "trajectories"): lambda: setattr(config, "trajectories", _convert(section, key, raw, int, "an integer")),
        ("experiment", "seed"): lambda: (setattr(config, "seed", _convert(section, key, raw, int, "an integer")), setattr(config, "seed_given", True)),
        ("initial", "state"): lambda: setattr(config.initial, "kind", raw.strip()),
        ("initial", "index"): lambda: setattr(config.initial, "index", _convert(section, key, raw, int, "an integer")),
        ("initial", "p"): lambda: setattr(config.initial, "p", _convert(section, key, raw, float, "a float")),
        ("initial", "gamma"): lambda: setattr(config.initial, "gamma", _convert(section, key, raw, _parse_complex, "a complex number")),
        ("initial", "path"): lambda: setattr(config.initial, "path", raw.strip()),
        ("sweep", "d_list"): lambda: setattr(config, "d_list", _convert(section, key, raw, _parse_int_list, "a comma list of ints")),
        ("sweep", "rounds"): lambda: setattr(config, "rounds", _convert(section, key, raw, _parse_rounds, "an int, list, or a:b range")),
        ("sweep", "theta_grid"): lambda: setattr(config, "theta_grid", _convert(section, key, raw, _parse_grid, "a float list or start:stop:count")),
        ("sweep", "gamma_sq_grid"): lambda: setattr(config, "gamma_sq_grid", _convert(section, key, raw, _parse_grid, "a float list or start:stop:count")),
        ("bipartite", "alpha"): lambda: setattr(config, "alpha", _convert(section, key, raw, _parse_complex, "a complex number")),
        ("bipartite", "beta"): lambda: setattr(config, "beta", _convert(section, key, raw, _parse_complex, "a complex number")),
        ("bipartite", "p"): lambda: setattr(config, "bipartite_p", _convert(section, key, raw, float, "a float")),
        ("copies", "l"): lambda: setattr(config, "copies", _convert(section, key, raw, int, "an integer")),
        ("copies", "m"): lambda: setattr(config, "n_targets", _convert(section, key, raw, int, "an integer")),
        ("copies", "overlaps"): lambda: setattr(config, "overlaps", _convert(section, key, raw, _parse_grid, "a comma list of floats")),
        ("haar_average", "samples"): lambda: setattr(config, "samples", _convert(section, key, raw, int, "an integer")),
    }
    setter = setters.get((section, key))
    if setter is None:
        raise ConfigError(f"{section}.{key}: unknown configuration key")
    setter()


def _validate_config(config: ExperimentConfig) -> None:
    if config.kind not in KINDS:
        raise ConfigError(f"experiment.kind: must be one of {KINDS}, got {config.kind!r}")
    if config.dimension < 2:
        raise ConfigError(f"experiment.dimension: must be >= 2, got {config.dimension}")
    if not config.rounds:
        raise ConfigError("experiment.rounds: range must not be empty")
    if any(n < 0 for n in config.rounds):
        raise ConfigError(f"experiment.rounds: values must be >= 0, got {config.rounds}")
    if config.basis not in ("fourier", "param2d"):
        raise ConfigError(f"experiment.basis: must be 'fourier' or 'param2d', got {config.basis!r}")
    if config.engine not in ("markov", "brute_force"):
        raise ConfigError(f"experiment.engine: must be 'markov' or 'brute_force', got {config.engine!r}")
    if config.trajectories < 0:
        raise ConfigError(f"experiment.trajectories: must be >= 0, got {config.trajectories}")
    if not config.target_indices:
        raise ConfigError("experiment.targets: must not be empty")
    if config.initial.kind not in ("basis_state", "maximally_mixed", "qubit_like", "haar", "file"):
        raise ConfigError(f"initial.state: unknown initial state kind {config.initial.kind!r}")
    for axis in ("d_list", "theta_grid", "gamma_sq_grid"):
        values = getattr(config, axis)
        if values is not None and len(values) == 0:
            raise ConfigError(f"sweep.{axis}: axis must not be empty")


def _rng(seed: int, *key: int) -> np.random.Generator:
    # Deterministic substream per point; independent of execution order.
    return np.random.default_rng([seed] + list(key))


# ---------------------------------------------------------------------------
# experiment execution

def _build_initial(config: ExperimentConfig, d: int, target_basis: OrthonormalBasis):
    spec = config.initial
    if spec.kind == "basis_state":
        if not 0 <= spec.index < d:
            raise ConfigError(f"initial.index: {spec.index} out of range for dimension {d}")
        return target_basis.state(spec.index)
    if spec.kind == "maximally_mixed":
        return maximally_mixed(d)
    if spec.kind == "qubit_like":
        try:
            qspec = QubitLikeSpec(spec.p, spec.gamma, target_basis.state(0), target_basis.state(1))
        except ValueError as exc:
            raise ConfigError(f"initial: {exc}") from None
        return qubit_like_density(qspec)
    if spec.kind == "haar":
        return haar_random_pure(d, _rng(config.seed, 0x5EED))
    if spec.kind == "file":
        if spec.path is None:
            raise ConfigError("initial.path: required when initial.state = file")
        try:
            matrix = np.load(spec.path)
            return DensityMatrix(matrix)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"initial.path: cannot load density matrix from {spec.path}: {exc}") from None
    raise ConfigError(f"initial.state: unknown kind {spec.kind!r}")


def _build_protocol(config: ExperimentConfig, d: int, n: int, theta: float) -> Protocol:
    target_basis = OrthonormalBasis.computational(d)
    if config.basis == "fourier":
        intermediate = fourier_basis(target_basis)
    else:
        if d != 2:
            raise ConfigError(f"experiment.basis: param2d requires dimension 2, got {d}")
        intermediate = basis_2d(theta, config.phi, target_basis)
    try:
        return Protocol(target_basis, intermediate, tuple(config.target_indices), n)
    except ValueError as exc:
        raise ConfigError(f"experiment.targets: {exc}") from None


def _closed_form(config: ExperimentConfig, d: int, n: int, theta: float, mass: float) -> Optional[float]:
    if config.basis == "fourier":
        return ps_multi_target(d, len(set(config.target_indices)), mass, n)
    if d == 2 and len(set(config.target_indices)) == 1:
        return ps_2d(theta, 1.0 - mass, n)
    return None


def _evaluate_point(
    config: ExperimentConfig,
    experiment_id: str,
    d: int,
    n: int,
    theta: Optional[float],
    point_key: int,
) -> ResultRow:
    proto = _build_protocol(config, d, n, config.theta if theta is None else theta)
    rho = _build_initial(config, d, proto.target_basis)
    if config.engine == "brute_force":
        exact = brute_force_success(rho, proto)
    else:
        exact = exact_success(rho, proto)
    mass = float(born_probabilities(rho, proto.target_basis)[list(proto.target_indices)].sum())
    closed = _closed_form(config, d, n, config.theta if theta is None else theta, mass)
    mc_estimate = mc_stderr = None
    if config.trajectories > 0 and not config.exact_only:
        result = monte_carlo_success(rho, proto, config.trajectories, _rng(config.seed, point_key))
        mc_estimate, mc_stderr = result.estimate, result.stderr
    shown_theta = theta if theta is not None else (config.theta if config.basis == "param2d" else None)
    return ResultRow(experiment_id, d, n, shown_theta, None, exact, closed, mc_estimate, mc_stderr, config.seed)


def _run_single(config: ExperimentConfig) -> List[ResultRow]:
    rows = []
    for i, n in enumerate(config.rounds):
        rows.append(_evaluate_point(config, "single", config.dimension, n, None, i))
    return rows


def _run_figure1a(config: ExperimentConfig) -> List[ResultRow]:
    """Optimal-angle qubit curves for initial target overlaps 2/3, 1/3, 0."""
    rows = []
    for s, (label, overlap) in enumerate((("2/3", 2 / 3), ("1/3", 1 / 3), ("0", 0.0))):
        series = replace(
            config,
            kind="single",
            dimension=2,
            basis="fourier",
            target_indices=(0,),
            theta=math.pi / 4,
            initial=InitialStateSpec(kind="qubit_like", p=overlap, gamma=0.0),
        )
        for i, n in enumerate(FIGURE_ROUNDS):
            row = _evaluate_point(series, f"figure1a:overlap={label}", 2, n, None, s * len(FIGURE_ROUNDS) + i)
            row.theta = math.pi / 4
            row.closed_form = ps_2d_max(1.0 - overlap, n)
            rows.append(row)
    return rows


def _run_figure1b(config: ExperimentConfig) -> List[ResultRow]:
    """Qubit curves at theta = pi/4, pi/8, pi/12 with no initial overlap."""
    rows = []
    for s, (label, theta) in enumerate((("pi/4", math.pi / 4), ("pi/8", math.pi / 8), ("pi/12", math.pi / 12))):
        series = replace(
            config,
            kind="single",
            dimension=2,
            basis="param2d",
            phi=0.0,
            target_indices=(0,),
            initial=InitialStateSpec(kind="basis_state", index=1),
        )
        for i, n in enumerate(FIGURE_ROUNDS):
            row = _evaluate_point(series, f"figure1b:theta={label}", 2, n, theta, s * len(FIGURE_ROUNDS) + i)
            row.closed_form = ps_2d(theta, 1.0, n)
            rows.append(row)
    return rows


def _run_haar_average(config: ExperimentConfig) -> List[ResultRow]:
    rows = []
    d = config.dimension
    for i, n in enumerate(config.rounds):
        proto = _build_protocol(config, d, n, config.theta)
        rng = _rng(config.seed, i)
        values = np.empty(config.samples)
        for s in range(config.samples):
            values[s] = exact_success(haar_random_pure(d, rng), proto)
        mean = float(values.mean())
        sem = float(values.std(ddof=1) / math.sqrt(config.samples)) if config.samples > 1 else 0.0
        closed = avg_ps(d, n, len(set(config.target_indices))) if config.basis == "fourier" else None
        rows.append(ResultRow("haar_average", d, n, None, None, None, closed, mean, sem, config.seed))
    return rows


def _bipartite_spec(config: ExperimentConfig) -> BipartiteTargetSpec:
    d = config.dimension
    basis = OrthonormalBasis.computational(d)
    try:
        return BipartiteTargetSpec(config.alpha, config.beta, d, basis.state(0), basis.state(1))
    except ValueError as exc:
        raise ConfigError(f"bipartite: {exc}") from None


def _evaluate_bipartite_point(
    config: ExperimentConfig, n: int, gamma_sq: float, point_key: int
) -> ResultRow:
    if not 0.0 <= gamma_sq <= 1.0:
        raise ConfigError(f"sweep.gamma_sq_grid: values must lie in [0, 1], got {gamma_sq}")
    spec = _bipartite_spec(config)
    gamma = math.sqrt(gamma_sq)
    p = config.bipartite_p
    closed = ps_bipartite(spec, p, gamma, n)
    qspec = QubitLikeSpec(p, gamma, spec.psi, spec.psi_perp)
    rho = qubit_like_density(qspec)
    composite = tensor(rho, rho)
    target_basis = extend_to_basis(spec.target_state())
    proto = Protocol(target_basis, fourier_basis(target_basis), (0,), n)
    exact = exact_success(composite, proto)
    mc_estimate = mc_stderr = None
    if config.trajectories > 0 and not config.exact_only:
        result = monte_carlo_success(composite, proto, config.trajectories, _rng(config.seed, point_key))
        mc_estimate, mc_stderr = result.estimate, result.stderr
    return ResultRow("bipartite", config.dimension, n, None, gamma_sq, exact, closed, mc_estimate, mc_stderr, config.seed)


def _run_bipartite(config: ExperimentConfig) -> List[ResultRow]:
    grid = config.gamma_sq_grid if config.gamma_sq_grid is not None else [0.0, 0.5, 1.0]
    rows = []
    key = 0
    for n in config.rounds:
        for gamma_sq in grid:
            rows.append(_evaluate_bipartite_point(config, n, gamma_sq, key))
            key += 1
    return rows


def _run_copies(config: ExperimentConfig) -> List[ResultRow]:
    d, l, m = config.dimension, config.copies, config.n_targets
    overlaps = list(config.overlaps)
    if l < 1:
        raise ConfigError(f"copies.l: must be >= 1, got {l}")
    if not 1 <= m <= d:
        raise ConfigError(f"copies.m: must lie in [1, {d}] for orthogonal single-copy targets, got {m}")
    if len(overlaps) != m:
        raise ConfigError(f"copies.overlaps: expected {m} values, got {len(overlaps)}")
    if any(not 0.0 <= o <= 1.0 for o in overlaps):
        raise ConfigError(f"copies.overlaps: values must lie in [0, 1], got {overlaps}")
    total = sum(overlaps)
    if total > 1.0 + 1e-12:
        raise ConfigError(f"copies.overlaps: must sum to at most 1, got {total}")
    if m == d and total < 1.0 - 1e-12:
        raise ConfigError("copies.overlaps: with m = d the overlaps must sum to 1")
    space = d**l
    if space > 4096:
        raise ConfigError(f"copies: composite dimension d^l = {space} exceeds the dense-storage guideline of 4096")

    # Single-copy state diagonal in the computational basis with the requested
    # target overlaps; leftover mass spread over the non-target levels.
    diag = np.zeros(d)
    diag[:m] = overlaps
    if m < d:
        diag[m:] = (1.0 - total) / (d - m)
    rho_single = DensityMatrix(np.diag(diag).astype(np.complex128))
    composite = rho_single
    for _ in range(l - 1):
        composite = tensor(composite, rho_single)

    stride = (space - 1) // (d - 1)  # index of |k>^(x l) in the composite basis
    targets = tuple(k * stride for k in range(m))
    target_basis = OrthonormalBasis.computational(space)
    proto_basis = fourier_basis(target_basis)

    rows = []
    for i, n in enumerate(config.rounds):
        proto = Protocol(target_basis, proto_basis, targets, n)
        exact = exact_success(composite, proto)
        closed = ps_copies(d, l, m, overlaps, n)
        mc_estimate = mc_stderr = None
        if config.trajectories > 0 and not config.exact_only:
            result = monte_carlo_success(composite, proto, config.trajectories, _rng(config.seed, i))
            mc_estimate, mc_stderr = result.estimate, result.stderr
        rows.append(ResultRow("copies", d, n, None, None, exact, closed, mc_estimate, mc_stderr, config.seed))
    return rows


def run_experiment(config: ExperimentConfig) -> List[ResultRow]:
    """Execute a config and return its rows; deterministic given the seed."""
    _validate_config(config)
    runners = {
        "single": _run_single,
        "figure1a": _run_figure1a,
        "figure1b": _run_figure1b,
        "haar_average": _run_haar_average,
        "bipartite": _run_bipartite,
        "copies": _run_copies,
        "sweep": sweep,
    }
    return runners[config.kind](config)


def sweep(config: ExperimentConfig) -> List[ResultRow]:
    """Cartesian expansion over the declared axes, one row per point.

    Points evaluate independently on a thread pool; row order follows
    expansion order (d, then rounds, then theta or gamma_sq), not completion
    order.
    """
    _validate_config(config)
    dims = config.d_list if config.d_list is not None else [config.dimension]
    rounds = config.rounds
    if config.gamma_sq_grid is not None:
        points = [(n, g) for n in rounds for g in config.gamma_sq_grid]
        with ThreadPoolExecutor(max_workers=min(8, len(points))) as pool:
            return list(pool.map(lambda item: _evaluate_bipartite_point(config, item[1][0], item[1][1], item[0]), enumerate(points)))
    thetas: List[Optional[float]] = list(config.theta_grid) if config.theta_grid is not None else [None]
    points = [(d, n, theta) for d in dims for n in rounds for theta in thetas]

    def evaluate(item):
        key, (d, n, theta) = item
        return _evaluate_point(config, "sweep", d, n, theta, key)

    with ThreadPoolExecutor(max_workers=min(8, len(points))) as pool:
        return list(pool.map(evaluate, enumerate(points)))


# ---------------------------------------------------------------------------
# CSV emission

def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def emit_csv(rows: Sequence[ResultRow], path_or_file) -> None:
    """Write header plus one line per row, 12 significant digits, LF endings."""
    if hasattr(path_or_file, "write"):
        _write_rows(path_or_file, rows)
        return
    with open(path_or_file, "w", newline="") as fh:
        _write_rows(fh, rows)


def _write_rows(fh, rows: Sequence[ResultRow]) -> None:
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        fields = (
            row.experiment,
            _format_value(row.d),
            _format_value(row.n),
            _format_value(row.theta),
            _format_value(row.gamma_sq),
            _format_value(row.exact),
            _format_value(row.closed_form),
            _format_value(row.mc_estimate),
            _format_value(row.mc_stderr),
            _format_value(row.seed),
        )
        fh.write(",".join(fields) + "\n")


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsteer", description="Measurement-driven state steering experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, takes_config in (("run", True), ("figure1a", False), ("figure1b", False), ("sweep", True)):
        cmd = sub.add_parser(name)
        if takes_config:
            cmd.add_argument("config_file", metavar="config-file")
            cmd.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                             help="override any config value (repeatable)")
        cmd.add_argument("--out", metavar="csv", help="output CSV path (default: stdout)")
        cmd.add_argument("--seed", type=int, metavar="u64")
        cmd.add_argument("--trajectories", type=int, metavar="n")
        cmd.add_argument("--exact-only", action="store_true")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    if args.command in ("figure1a", "figure1b"):
        config = ExperimentConfig(kind=args.command)
    else:
        config = load_config(args.config_file)
        for override in args.set:
            if "=" not in override or "." not in override.split("=", 1)[0]:
                raise ConfigError(f"--set: expected SECTION.KEY=VALUE, got {override!r}")
            target, value = override.split("=", 1)
            section, key = target.split(".", 1)
            _apply_value(config, section.strip(), key.strip(), value.strip())
    if args.command == "sweep" and config.kind != "sweep":
        raise ConfigError(f"experiment.kind: the sweep command requires kind = sweep, got {config.kind!r}")
    if args.seed is not None:
        config.seed = args.seed
        config.seed_given = True
    if args.trajectories is not None:
        config.trajectories = args.trajectories
    if args.exact_only:
        config.exact_only = True
    _validate_config(config)
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        if not config.seed_given and args.seed is None:
            print("qsteer: no seed given, defaulting to 0", file=sys.stderr)
        rows = run_experiment(config)
        if args.out is None:
            emit_csv(rows, sys.stdout)
        else:
            emit_csv(rows, args.out)
    except ConfigError as exc:
        print(f"qsteer: config error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"qsteer: infeasible: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"qsteer: i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
