import json
from dataclasses import dataclass, asdict, fields, replace
from typing import Any, Dict
from nsgzero.graph.game_config import ConfigError
from nsgzero.nets.backward import VALUE_LOSS_KINDS
from nsgzero.nets.params import NetShape
from nsgzero.mcts.search import SearchConfig
from nsgzero.train.batch import PRIOR_TARGETS

ATTACKER_KINDS = ("mixture", "uniform")


@dataclass(frozen=True)
class TrainConfig:
  episodes_total: int = 1000
  batch_episodes: int = 32
  buffer_capacity: int = 10_000
  updates_per_episode: int = 1
  lr: float = 1e-3
  gamma: float = 1.0
  value_loss_kind: str = "CE"
  prior_target: str = "action"
  # search
  n_simulations: int = 15
  c_puct: float = 0.3
  temperature: float = 1.0
  search_gamma: float = 1.0
  # attacker
  attacker_kind: str = "mixture"
  mab_window: int = 100
  eta: float = 0.1
  # networks
  embed_dim: int = 32
  state_dim: int = 64
  hidden_dim: int = 64
  # schedule
  seed: int = 0
  log_every: int = 100
  eval_every: int = 0
  checkpoint_every: int = 1000
  uniform_eval_episodes: int = 20
  episodes_per_path: int = 20
  path_cap: int = 200_000
  record_wall_time: bool = False
  threads: int = 1

  def __post_init__(self):
    for name in ("episodes_total", "updates_per_episode", "eval_every", "checkpoint_every", "seed"):
      if getattr(self, name) < 0:
        raise ConfigError(name, f"must be >= 0, got {getattr(self, name)}")
    for name in ("batch_episodes", "buffer_capacity", "mab_window", "embed_dim", "state_dim", "hidden_dim", "log_every", "uniform_eval_episodes", "episodes_per_path", "path_cap", "threads"):
      if getattr(self, name) < 1:
        raise ConfigError(name, f"must be >= 1, got {getattr(self, name)}")
    if self.buffer_capacity < self.batch_episodes:
      raise ConfigError("buffer_capacity", f"must be >= batch_episodes ({self.batch_episodes}), got {self.buffer_capacity}")
    if not self.lr > 0:
      raise ConfigError("lr", f"must be > 0, got {self.lr}")
    if not 0.0 < self.gamma <= 1.0:
      raise ConfigError("gamma", f"must be in (0, 1], got {self.gamma}")
    if not 0.0 <= self.eta <= 1.0:
      raise ConfigError("eta", f"must be in [0, 1], got {self.eta}")
    if self.value_loss_kind not in VALUE_LOSS_KINDS:
      raise ConfigError("value_loss_kind", f"must be one of {VALUE_LOSS_KINDS}, got {self.value_loss_kind!r}")
    if self.prior_target not in PRIOR_TARGETS:
      raise ConfigError("prior_target", f"must be one of {PRIOR_TARGETS}, got {self.prior_target!r}")
    if self.attacker_kind not in ATTACKER_KINDS:
      raise ConfigError("attacker_kind", f"must be one of {ATTACKER_KINDS}, got {self.attacker_kind!r}")
    try:
      self.search_config
    except ValueError as e:
      raise ConfigError("search", str(e)) from e

  @property
  def search_config(self) -> SearchConfig:
    return SearchConfig(self.n_simulations, self.c_puct, self.temperature, self.search_gamma)

  @property
  def eval_search_config(self) -> SearchConfig:
    return replace(self.search_config, temperature=0.0)

  def net_shape(self, node_count: int, horizon: int) -> NetShape:
    return NetShape(node_count, horizon, self.embed_dim, self.state_dim, self.hidden_dim)

  def to_dict(self) -> Dict[str, Any]:
    return asdict(self)

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "TrainConfig":
    if not isinstance(data, dict):
      raise ConfigError("<root>", "expected a JSON object")
    types = {f.name: f.type for f in fields(cls)}
    values = {}
    for key, value in data.items():
      if key not in types:
        raise ConfigError(key, "unknown field")
      values[key] = _coerce(key, types[key], value)
    return cls(**values)

  def with_overrides(self, overrides: Dict[str, Any]) -> "TrainConfig":
    data = self.to_dict()
    data.update(overrides)
    return TrainConfig.from_dict(data)


def _coerce(key: str, kind: Any, value: Any) -> Any:
  name = kind if isinstance(kind, str) else kind.__name__
  if isinstance(value, str) and name != "str":
    value = parse_value(key, name, value)
  if name == "bool":
    if not isinstance(value, bool):
      raise ConfigError(key, f"expected true/false, got {value!r}")
  elif name == "int":
    if isinstance(value, bool) or not isinstance(value, int):
      raise ConfigError(key, f"expected an integer, got {value!r}")
  elif name == "float":
    if isinstance(value, bool) or not isinstance(value, (int, float)):
      raise ConfigError(key, f"expected a number, got {value!r}")
    value = float(value)
  elif not isinstance(value, str):
    raise ConfigError(key, f"expected a string, got {value!r}")
  return value


def parse_value(key: str, name: str, text: str) -> Any:
  try:
    if name == "int":
      return int(text)
    if name == "float":
      return float(text)
    if name == "bool":
      return {"true": True, "false": False, "1": True, "0": False}[text.lower()]
  except (ValueError, KeyError):
    raise ConfigError(key, f"cannot parse {text!r} as {name}") from None
  return text


def load_train_config(path: str) -> TrainConfig:
  try:
    with open(path, "r") as f:
      data = json.load(f)
  except json.JSONDecodeError as e:
    raise ConfigError("<file>", f"{path} is not valid JSON: {e}") from e
  return TrainConfig.from_dict(data)
