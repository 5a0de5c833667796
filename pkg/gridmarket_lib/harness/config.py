import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..errors import ConfigError
from ..options import SimulationOptions
from ..utils import DEFAULT_SEED, ENTITY_BAUD_RATE

DIRECT_POLICY = "direct"
BROKER_POLICIES = ("cost",)
RESOURCE_POLICIES = ("time_shared", "space_shared")


@dataclass
class CalendarSpec:
    peak_load: float = 0.0
    off_peak_load: float = 0.0
    holiday_load: float = 0.0
    weekends: List[int] = field(default_factory=lambda: [5, 6])
    holidays: List[str] = field(default_factory=list)
    peak_start_hour: float = 9.0
    peak_end_hour: float = 17.0


@dataclass
class ResourceSpec:
    name: str
    pe_mips: float
    n_machines: int = 1
    pes_per_machine: int = 1
    policy: str = "time_shared"
    price_per_pe_time_unit: float = 0.0
    time_zone: float = 0.0
    calendar: Optional[CalendarSpec] = None
    baud_rate: float = ENTITY_BAUD_RATE
    architecture: str = ""
    os: str = ""

    @property
    def n_pes(self) -> int:
        return self.n_machines * self.pes_per_machine


@dataclass
class GridletSpec:
    length_mi: float
    release_time: float = 0.0
    input_size_bytes: int = 0
    output_size_bytes: int = 0


@dataclass
class UserSpec:
    name: Optional[str] = None
    policy: str = "cost"
    n_gridlets: int = 200
    base_time_units: float = 100.0
    variation: float = 0.1
    d_factor: Optional[float] = None
    b_factor: Optional[float] = None
    deadline: Optional[float] = None
    budget: Optional[float] = None
    baud_rate: float = ENTITY_BAUD_RATE
    start_delay: float = 0.0
    input_size_bytes: int = 0
    output_size_bytes: int = 0
    target: Optional[str] = None
    gridlets: List[GridletSpec] = field(default_factory=list)

    @property
    def is_direct(self) -> bool:
        return self.policy == DIRECT_POLICY


@dataclass
class SweepSpec:
    deadline_values: Optional[List[float]] = None
    budget_values: Optional[List[float]] = None
    user_counts: Optional[List[int]] = None


@dataclass
class ScenarioConfig:
    resources: List[ResourceSpec]
    users: List[UserSpec]
    seed: int = DEFAULT_SEED
    sweep: Optional[SweepSpec] = None
    options: SimulationOptions = field(default_factory=SimulationOptions)

    def without_sweep(self) -> "ScenarioConfig":
        return dataclasses.replace(self, sweep=None)


# ---------- PARSING ----------

def _record(cls, data: Any, path: str, nested: Optional[Dict[str, Any]] = None):
    """Builds dataclass `cls` from a JSON object, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError(f"Expected an object, got {type(data).__name__}", field=path)
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"Unknown key '{unknown[0]}'", field=f"{path}.{unknown[0]}")
    values = dict(data)
    for key, builder in (nested or {}).items():
        if values.get(key) is not None:
            values[key] = builder(values[key], f"{path}.{key}")
    try:
        return cls(**values)
    except TypeError as e:
        raise ConfigError(f"Missing or invalid keys: {e}", field=path) from None


def _list_of(builder):
    def build(items, path):
        if not isinstance(items, list):
            raise ConfigError("Expected a list", field=path)
        return [builder(item, f"{path}[{i}]") for i, item in enumerate(items)]
    return build


def _options(data, path) -> SimulationOptions:
    if not isinstance(data, dict):
        raise ConfigError("Expected an object", field=path)
    try:
        return SimulationOptions.from_dict(data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid options: {e}", field=path) from None


def _calendar(data, path) -> CalendarSpec:
    return _record(CalendarSpec, data, path)


def _resource(data, path) -> ResourceSpec:
    return _record(ResourceSpec, data, path, {"calendar": _calendar})


def _gridlet(data, path) -> GridletSpec:
    return _record(GridletSpec, data, path)


def _user(data, path) -> UserSpec:
    return _record(UserSpec, data, path, {"gridlets": _list_of(_gridlet)})


def _sweep(data, path) -> SweepSpec:
    return _record(SweepSpec, data, path)


def config_from_dict(data: Dict[str, Any]) -> ScenarioConfig:
    config = _record(ScenarioConfig, data, "config", {
        "resources": _list_of(_resource),
        "users": _list_of(_user),
        "sweep": _sweep,
        "options": _options,
    })
    validate_config(config)
    return config


def parse_config(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON: {e.msg}", line=e.lineno) from None
    return config_from_dict(data)


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e.strerror}") from None
    return parse_config(text)


def config_to_dict(config: ScenarioConfig) -> Dict[str, Any]:
    data = dataclasses.asdict(config)
    data["options"] = config.options.to_dict()
    return data


def dump_config(config: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2)


# ---------- VALIDATION ----------

def _positive(value, path):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"Must be a positive number, got {value!r}", field=path)


def _non_negative(value, path):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
        raise ConfigError(f"Must be a non-negative number, got {value!r}", field=path)


def validate_config(config: ScenarioConfig) -> None:
    if not config.resources:
        raise ConfigError("At least one resource is required", field="resources")
    if not config.users:
        raise ConfigError("At least one user is required", field="users")
    if not isinstance(config.seed, int) or isinstance(config.seed, bool):
        raise ConfigError(f"Seed must be an integer, got {config.seed!r}", field="seed")

    names = set()
    for i, r in enumerate(config.resources):
        path = f"resources[{i}]"
        if not r.name or r.name in names:
            raise ConfigError(f"Resource name '{r.name}' is empty or repeated", field=f"{path}.name")
        names.add(r.name)
        _positive(r.pe_mips, f"{path}.pe_mips")
        _positive(r.n_machines, f"{path}.n_machines")
        _positive(r.pes_per_machine, f"{path}.pes_per_machine")
        _non_negative(r.price_per_pe_time_unit, f"{path}.price_per_pe_time_unit")
        _positive(r.baud_rate, f"{path}.baud_rate")
        if r.policy not in RESOURCE_POLICIES:
            raise ConfigError(f"Unknown policy '{r.policy}'", field=f"{path}.policy")
        if r.policy == "time_shared" and r.n_machines != 1:
            raise ConfigError("A time-shared resource has exactly one machine",
                              field=f"{path}.n_machines")
        if r.calendar is not None:
            for key in ("peak_load", "off_peak_load", "holiday_load"):
                load = getattr(r.calendar, key)
                if not isinstance(load, (int, float)) or not 0 <= load < 1:
                    raise ConfigError(f"Load must lie in [0, 1), got {load!r}",
                                      field=f"{path}.calendar.{key}")

    for i, u in enumerate(config.users):
        path = f"users[{i}]"
        _non_negative(u.start_delay, f"{path}.start_delay")
        _positive(u.baud_rate, f"{path}.baud_rate")
        if u.is_direct:
            if u.target not in names:
                raise ConfigError(f"Unknown target resource '{u.target}'", field=f"{path}.target")
            if not u.gridlets:
                raise ConfigError("A direct user needs gridlets", field=f"{path}.gridlets")
            for j, g in enumerate(u.gridlets):
                _positive(g.length_mi, f"{path}.gridlets[{j}].length_mi")
                _non_negative(g.release_time, f"{path}.gridlets[{j}].release_time")
            continue
        if u.policy not in BROKER_POLICIES:
            raise ConfigError(f"Unknown policy '{u.policy}'", field=f"{path}.policy")
        _non_negative(u.n_gridlets, f"{path}.n_gridlets")
        _positive(u.base_time_units, f"{path}.base_time_units")
        if not isinstance(u.variation, (int, float)) or not 0 <= u.variation <= 1:
            raise ConfigError(f"Variation must lie in [0, 1], got {u.variation!r}",
                              field=f"{path}.variation")
        has_factors = u.d_factor is not None or u.b_factor is not None
        has_absolutes = u.deadline is not None or u.budget is not None
        if has_factors == has_absolutes and not _sweep_supplies(config):
            raise ConfigError("Give either d_factor/b_factor or deadline/budget", field=path)
        if has_factors:
            _non_negative(u.d_factor, f"{path}.d_factor")
            _non_negative(u.b_factor, f"{path}.b_factor")
        if u.deadline is not None:
            _positive(u.deadline, f"{path}.deadline")
        if u.budget is not None:
            _non_negative(u.budget, f"{path}.budget")

    if config.sweep is not None:
        lists = {k: v for k, v in dataclasses.asdict(config.sweep).items() if v is not None}
        if not lists:
            raise ConfigError("A sweep needs at least one value list", field="sweep")
        for key, values in lists.items():
            if not isinstance(values, list) or not values:
                raise ConfigError("Sweep lists must be non-empty", field=f"sweep.{key}")
            check = _non_negative if key == "budget_values" else _positive
            for j, v in enumerate(values):
                check(v, f"sweep.{key}[{j}]")


def _sweep_supplies(config: ScenarioConfig) -> bool:
    """True when the sweep provides both the deadline and the budget of every cell."""
    s = config.sweep
    return s is not None and bool(s.deadline_values) and bool(s.budget_values)
