"""Configuration management for fraq."""

import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import yaml

from .errors import ConfigError
from .weights import coupling_from_transition

SCHEME_NAMES = ("be", "fastbe", "sbd", "fastsbd")
INIT_NAMES = ("poly_sin", "poly_sinpi", "indicator", "zero")


def get_data_dir() -> str:
    """
    Get the data directory name for fraq.

    Returns ".fraq-dev" in development mode, ".fraq" otherwise.
    Development mode is detected by:
    - FRAQ_DEV environment variable
    - Running from source (not installed in site-packages)
    """
    if os.environ.get("FRAQ_DEV"):
        return ".fraq-dev"

    try:
        config_file = Path(__file__).resolve()
        if "site-packages" in str(config_file):
            return ".fraq"
        return ".fraq-dev"
    except Exception:
        return ".fraq"


def parse_fraction(value: Any) -> Fraction:
    """
    Parse a time value exactly.

    Accepts ints, floats (via their shortest repr), and strings such as
    "1/3200", "0.01" or "2".

    Args:
        value: Raw value from a config file or the command line

    Returns:
        Exact Fraction

    Raises:
        ConfigError: If the value is not a number or a ratio of numbers
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ConfigError(f"Expected a number, got {value!r}")
    try:
        if isinstance(value, float):
            return Fraction(repr(value))
        if isinstance(value, int):
            return Fraction(value)
        text = str(value).strip()
        if "/" in text:
            numerator, denominator = text.split("/", 1)
            return Fraction(numerator.strip()) / Fraction(denominator.strip())
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"Could not parse {value!r} as a number or fraction: {e}") from e


def parse_list(value: Any) -> List[Any]:
    """Split comma-separated strings; pass lists through."""
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return [value]


def parse_alpha_pairs(value: Any) -> List[Tuple[float, float]]:
    """
    Parse alpha pairs.

    Accepts "0.3:0.6,0.4:0.7", a list of "0.3:0.6" strings, or a list of
    two-element lists.
    """
    pairs: List[Tuple[float, float]] = []
    for item in parse_list(value):
        try:
            if isinstance(item, (list, tuple)):
                first, second = item
            else:
                first, second = str(item).split(":")
            pairs.append((float(first), float(second)))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Malformed alpha pair {item!r} (expected a1:a2)") from e
    if not pairs:
        raise ConfigError("At least one alpha pair is required")
    return pairs


def parse_key_values(text: str, origin: str = "config") -> Dict[str, str]:
    """
    Parse flat ``key = value`` text.

    Everything after ``#`` is a comment; blank lines are skipped and a later
    line wins over an earlier one with the same key.

    Args:
        text: File contents
        origin: Name used in error messages

    Returns:
        Keys mapped to stripped string values (possibly empty)

    Raises:
        ConfigError: On a line without "=" or with an empty key
    """
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{origin}:{number}: expected 'key = value', got {raw.strip()!r}")
        values[key.strip()] = value.strip()
    return values


def resolve_threads(default: int) -> int:
    """
    Worker count for parameter sweeps.

    Args:
        default: Value used when FRAQ_THREADS is unset

    Returns:
        FRAQ_THREADS if set to a positive integer, otherwise default
    """
    raw = os.environ.get("FRAQ_THREADS")
    if raw:
        try:
            threads = int(raw)
        except ValueError as e:
            raise ConfigError(f"FRAQ_THREADS must be an integer, got {raw!r}") from e
        if threads < 1:
            raise ConfigError("FRAQ_THREADS must be positive")
        return threads
    return max(1, default)


@dataclass
class KernelConfig:
    """Configuration of the compressed CQ kernels."""

    n_points_be: int = 64
    n_points_1: int = 41
    n_points_2: int = 41
    n_head: Optional[int] = None  # None = 15 for alpha <= 0.5, 17 above
    auto_head: bool = False
    eps_tol: float = 1e-12  # in units of tau^-alpha
    n_check: int = 1000  # weights checked by auto head selection
    points_auto: bool = True  # grow N_p (BE) and N_p,2 (SBD) with the step count


@dataclass
class ExperimentConfig:
    """Configuration for a convergence study, single solve or timing sweep."""

    schemes: List[str] = field(default_factory=lambda: ["be", "fastbe"])
    alpha_pairs: List[Tuple[float, float]] = field(default_factory=lambda: [(0.3, 0.6)])
    coupling_a: float = 2.0
    transition_m: Optional[float] = None
    grid_m: int = 255
    length: float = 1.0
    taus: List[Fraction] = field(
        default_factory=lambda: [Fraction(1, 100 * 2**k) for k in range(5)]
    )
    ref_tau: Fraction = Fraction(1, 3200)
    t_final: Fraction = Fraction(1)
    tau: Optional[Fraction] = None  # single solve; defaults to taus[0]
    snapshots: List[Fraction] = field(default_factory=list)
    init: str = "poly_sin"
    kernel: KernelConfig = field(default_factory=KernelConfig)
    bench_steps: List[int] = field(default_factory=lambda: [100, 200, 400, 800, 1600])
    output_dir: Optional[str] = None
    threads: Optional[int] = None

    @property
    def effective_coupling(self) -> float:
        """Coupling constant a, derived from m when a transition parameter is set."""
        if self.transition_m is not None:
            return coupling_from_transition(self.transition_m)
        return self.coupling_a

    @property
    def solve_tau(self) -> Fraction:
        """Time step for a single solve."""
        return self.tau if self.tau is not None else self.taus[0]

    def validate(self) -> None:
        """
        Check cross-field invariants.

        Raises:
            ConfigError: If the configuration is inconsistent
        """
        unknown = [s for s in self.schemes if s not in SCHEME_NAMES]
        if unknown or not self.schemes:
            raise ConfigError(
                f"Unknown scheme(s) {unknown or self.schemes}; choose from {', '.join(SCHEME_NAMES)}"
            )
        if self.init not in INIT_NAMES:
            raise ConfigError(f"Unknown init {self.init!r}; choose from {', '.join(INIT_NAMES)}")
        if not self.taus:
            raise ConfigError("taus must not be empty")
        if any(t <= 0 for t in self.taus) or self.ref_tau <= 0 or self.t_final <= 0:
            raise ConfigError("taus, ref_tau and t_final must be positive")
        if any(later >= earlier for earlier, later in zip(self.taus, self.taus[1:])):
            raise ConfigError("taus must be sorted strictly descending")
        if not all(self.ref_tau < t for t in self.taus):
            raise ConfigError("ref_tau must be strictly smaller than every study tau")
        if self.grid_m < 1:
            raise ConfigError("grid_m must be at least 1")
        for a1, a2 in self.alpha_pairs:
            if not (0 < a1 < 1 and 0 < a2 < 1):
                raise ConfigError(f"alpha pair ({a1}, {a2}) must lie in (0,1)")
        if self.transition_m is not None:
            # SingularParameterError at m = 1/2, ParameterError outside (0, 1]
            coupling_from_transition(self.transition_m)


# Flat keys accepted in config files and on the command line.
_KEY_ALIASES = {
    "coupling_a": "a",
    "transition_m": "m",
    "scheme": "schemes",
    "n_points_be": "np",
    "n_points_1": "np1",
    "n_points_2": "np2",
    "n_head": "ns",
    "auto_head": "ns_auto",
    "points_auto": "np_auto",
}

KNOWN_KEYS = frozenset(
    {
        "schemes", "alpha_pairs", "alpha1", "alpha2", "a", "m", "grid_m", "length",
        "taus", "ref_tau", "t_final", "tau", "snapshots", "init", "np", "np1",
        "np2", "ns", "ns_auto", "np_auto", "eps_tol", "n_check", "bench_steps",
        "output_dir", "threads",
    }
)

# Named experiment configurations: convergence tables and kernel error curves.
# The tables use poly_sinpi, the data their published values were computed with.
PRESETS: Dict[str, Dict[str, Any]] = {
    "table1": {
        "schemes": "be,fastbe", "alpha_pairs": "0.3:0.6,0.4:0.7", "a": 2,
        "init": "poly_sinpi", "grid_m": 255, "t_final": 1,
        "taus": "1/100,1/200,1/400,1/800,1/1600", "ref_tau": "1/6400",
    },
    "table2": {
        "schemes": "be,fastbe", "alpha_pairs": "0.3:0.7,0.4:0.6", "a": 2,
        "init": "indicator", "grid_m": 255, "t_final": 1,
        "taus": "1/100,1/200,1/400,1/800,1/1600", "ref_tau": "1/6400",
    },
    "table3": {
        "schemes": "sbd,fastsbd", "alpha_pairs": "0.3:0.4,0.7:0.8", "a": -1,
        "init": "poly_sinpi", "grid_m": 1023, "t_final": 1,
        "taus": "1/20,1/40,1/80,1/160,1/320", "ref_tau": "1/640",
    },
    "table4": {
        "schemes": "sbd,fastsbd", "alpha_pairs": "0.2:0.4,0.6:0.8", "a": -1,
        "init": "indicator", "grid_m": 1023, "t_final": 1,
        "taus": "1/20,1/40,1/80,1/160,1/320", "ref_tau": "1/640",
    },
    "table5": {
        "schemes": "sbd,fastsbd", "alpha_pairs": "0.3:0.8,0.4:0.7,0.5:0.6", "a": -1,
        "init": "poly_sinpi", "grid_m": 1023, "t_final": 10,
        "taus": "1/2000", "ref_tau": "1/4000",
    },
    # kernel-error curves: alpha1 is the CQ order of the plotted kernel; np_auto
    # raises np2 to 100 for the 1000 plotted weights
    "figure1": {"alpha1": 0.3, "tau": "1/1000", "np1": 31, "np2": 31, "ns": 15},
    "figure2": {"alpha1": 0.8, "tau": "1/1000", "np1": 41, "np2": 41, "ns": 17},
}


def _normalize_keys(layer: Mapping[str, Any], origin: str) -> Dict[str, Any]:
    """Map aliases and dashes onto canonical keys, rejecting unknown ones."""
    normalized: Dict[str, Any] = {}
    for raw_key, value in layer.items():
        key = str(raw_key).strip().replace("-", "_")
        key = _KEY_ALIASES.get(key, key)
        if key not in KNOWN_KEYS:
            raise ConfigError(f"Unknown configuration key {raw_key!r} in {origin}")
        normalized[key] = value
    return normalized


def layer_config(*layers: Tuple[str, Optional[Mapping[str, Any]]]) -> Dict[str, Any]:
    """
    Merge flat configuration layers, later layers winning.

    alpha1/alpha2 in a layer replace the alpha pairs resolved so far; an
    explicit "a" clears a transition parameter "m" from earlier layers.

    Args:
        layers: (origin, mapping) tuples in increasing precedence

    Returns:
        Merged flat dictionary
    """
    merged: Dict[str, Any] = {}
    for origin, layer in layers:
        if not layer:
            continue
        values = _normalize_keys(layer, origin)
        alpha1 = values.pop("alpha1", None)
        alpha2 = values.pop("alpha2", None)
        if "a" in values and "m" not in values:
            merged["m"] = None
        merged.update(values)
        if alpha1 is not None or alpha2 is not None:
            base = parse_alpha_pairs(merged.get("alpha_pairs", "0.3:0.6"))[0]
            merged["alpha_pairs"] = [
                (
                    float(alpha1) if alpha1 is not None else base[0],
                    float(alpha2) if alpha2 is not None else base[1],
                )
            ]
    return merged


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"Expected a boolean, got {value!r}")


def _as_optional_int(value: Any) -> Optional[int]:
    if value is None or (isinstance(value, str) and value.strip().lower() in ("", "none", "auto")):
        return None
    return int(value)


class Config:
    """Main configuration class for fraq."""

    def __init__(self, experiment: ExperimentConfig, values: Dict[str, Any]):
        self.experiment = experiment
        self.values = values

    @classmethod
    def load(
        cls,
        config_path: Optional[Path] = None,
        preset: Optional[str] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> "Config":
        """
        Load configuration from defaults, a preset, a config file and overrides.

        Args:
            config_path: Optional flat config file (see read_file)
            preset: Optional preset name from PRESETS
            overrides: Command-line values (highest precedence)

        Returns:
            Config instance

        Raises:
            ConfigError: On unknown presets, unreadable files or bad values
        """
        preset_values = None
        if preset:
            if preset not in PRESETS:
                raise ConfigError(f"Unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
            preset_values = PRESETS[preset]

        file_values = cls.read_file(config_path) if config_path else None

        merged = layer_config(
            ("defaults", cls.get_default_config()),
            (f"preset {preset}", preset_values),
            (str(config_path), file_values),
            ("command line", overrides),
        )
        return cls.from_dict(merged)

    @staticmethod
    def read_file(config_path: Path) -> Dict[str, Any]:
        """
        Read a flat config file.

        The format is one ``key = value`` per line with ``#`` comments; values
        stay strings until from_dict parses them. Files ending in .yaml or .yml
        are read as a flat YAML mapping instead.

        Args:
            config_path: Path to the file

        Returns:
            Flat dictionary of raw values

        Raises:
            ConfigError: If the file cannot be read or a line is malformed
        """
        path = Path(config_path).expanduser()
        try:
            text = path.read_text()
        except OSError as e:
            raise ConfigError(f"Could not read config {config_path}: {e}") from e

        if path.suffix.lower() not in (".yaml", ".yml"):
            return parse_key_values(text, str(config_path))

        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ConfigError(f"Malformed config {config_path}: {e}") from e
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"Config {config_path} must be a flat 'key: value' mapping")
        return data

    @staticmethod
    def get_default_config() -> Dict[str, Any]:
        """Return default configuration as a flat dictionary."""
        return {
            "schemes": "be,fastbe",
            "alpha_pairs": "0.3:0.6",
            "a": 2.0,
            "m": None,
            "grid_m": 255,
            "length": 1.0,
            "taus": "1/100,1/200,1/400,1/800,1/1600",
            "ref_tau": "1/3200",
            "t_final": 1,
            "tau": None,
            "snapshots": "",
            "init": "poly_sin",
            "np": 64,
            "np1": 41,
            "np2": 41,
            "ns": None,
            "ns_auto": False,
            "np_auto": True,
            "eps_tol": 1e-12,
            "n_check": 1000,
            "bench_steps": "100,200,400,800,1600",
            "output_dir": None,
            "threads": None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Config":
        """
        Create Config from a flat dictionary.

        Args:
            data: Flat configuration dictionary

        Returns:
            Config instance
        """
        data = _normalize_keys(data, "configuration")
        defaults = cls.get_default_config()
        get = lambda key: data.get(key, defaults.get(key))  # noqa: E731

        try:
            kernel = KernelConfig(
                n_points_be=int(get("np")),
                n_points_1=int(get("np1")),
                n_points_2=int(get("np2")),
                n_head=_as_optional_int(get("ns")),
                auto_head=_as_bool(get("ns_auto")),
                eps_tol=float(get("eps_tol")),
                n_check=int(get("n_check")),
                points_auto=_as_bool(get("np_auto")),
            )

            m = get("m")
            tau = get("tau")
            threads = get("threads")
            experiment = ExperimentConfig(
                schemes=[str(s).strip().lower() for s in parse_list(get("schemes"))],
                alpha_pairs=parse_alpha_pairs(get("alpha_pairs")),
                coupling_a=float(get("a")),
                transition_m=float(m) if m not in (None, "") else None,
                grid_m=int(get("grid_m")),
                length=float(get("length")),
                taus=[parse_fraction(t) for t in parse_list(get("taus"))],
                ref_tau=parse_fraction(get("ref_tau")),
                t_final=parse_fraction(get("t_final")),
                tau=parse_fraction(tau) if tau not in (None, "") else None,
                snapshots=[parse_fraction(t) for t in parse_list(get("snapshots"))],
                init=str(get("init")).strip().lower(),
                kernel=kernel,
                bench_steps=[int(n) for n in parse_list(get("bench_steps"))],
                output_dir=get("output_dir"),
                threads=int(threads) if threads not in (None, "") else None,
            )
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"Invalid configuration value: {e}") from e

        experiment.validate()
        resolved = dict(defaults)
        resolved.update(data)
        return cls(experiment=experiment, values=resolved)

    def describe(self) -> List[str]:
        """Render the resolved configuration as sorted 'key = value' lines."""
        exp = self.experiment
        lines = {
            "schemes": ",".join(exp.schemes),
            "alpha_pairs": ",".join(f"{a1}:{a2}" for a1, a2 in exp.alpha_pairs),
            "a": repr(exp.effective_coupling),
            "m": "" if exp.transition_m is None else repr(exp.transition_m),
            "grid_m": str(exp.grid_m),
            "length": repr(exp.length),
            "taus": ",".join(str(t) for t in exp.taus),
            "ref_tau": str(exp.ref_tau),
            "t_final": str(exp.t_final),
            "tau": str(exp.solve_tau),
            "snapshots": ",".join(str(t) for t in exp.snapshots),
            "init": exp.init,
            "np": str(exp.kernel.n_points_be),
            "np1": str(exp.kernel.n_points_1),
            "np2": str(exp.kernel.n_points_2),
            "ns": "default" if exp.kernel.n_head is None else str(exp.kernel.n_head),
            "ns_auto": str(exp.kernel.auto_head).lower(),
            "np_auto": str(exp.kernel.points_auto).lower(),
            "eps_tol": repr(exp.kernel.eps_tol),
            "n_check": str(exp.kernel.n_check),
            "bench_steps": ",".join(str(n) for n in exp.bench_steps),
            "output_dir": exp.output_dir or "",
            "threads": "" if exp.threads is None else str(exp.threads),
        }
        return [f"{key} = {value}" for key, value in sorted(lines.items())]
