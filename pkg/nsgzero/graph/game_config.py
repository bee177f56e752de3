import json
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Optional, Tuple
from nsgzero.graph.graph import Graph
from nsgzero.helpers import sha256_digest


class ConfigError(ValueError):
  def __init__(self, field: str, message: str):
    self.field = field
    self.message = message
    super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class GridShape:
  width: int
  height: int


@dataclass(frozen=True)
class GameConfig:
  graph: Graph
  attacker_starts: Tuple[int, ...]
  targets: FrozenSet[int]
  defender_starts: Tuple[int, ...]
  horizon: int
  grid: Optional[GridShape] = None

  def __post_init__(self):
    n = self.graph.node_count
    if not self.attacker_starts:
      raise ConfigError("attacker_starts", "must not be empty")
    if not self.targets:
      raise ConfigError("targets", "must not be empty")
    if not self.defender_starts:
      raise ConfigError("defender_starts", "must hold at least one resource")
    for field_name in ("attacker_starts", "targets", "defender_starts"):
      for node in getattr(self, field_name):
        if not 0 <= node < n:
          raise ConfigError(field_name, f"node id {node} outside 0..{n - 1}")
    if self.horizon < 1:
      raise ConfigError("horizon", f"must be >= 1, got {self.horizon}")
    if self.grid is not None and self.grid.width*self.grid.height != n:
      raise ConfigError("grid", f"{self.grid.width}x{self.grid.height} does not cover {n} nodes")

  @property
  def m(self) -> int:
    return len(self.defender_starts)

  def to_dict(self) -> Dict[str, Any]:
    data = {
      "node_count": self.graph.node_count,
      "edges": [list(e) for e in self.graph.edges()],
      "attacker_starts": list(self.attacker_starts),
      "targets": sorted(self.targets),
      "defender_starts": list(self.defender_starts),
      "horizon": self.horizon,
    }
    if self.grid is not None:
      data["grid"] = {"width": self.grid.width, "height": self.grid.height}
    return data

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "GameConfig":
    if not isinstance(data, dict):
      raise ConfigError("<root>", "expected a JSON object")
    known = {"node_count", "edges", "attacker_starts", "targets", "defender_starts", "horizon", "grid"}
    for key in data:
      if key not in known:
        raise ConfigError(key, "unknown field")
    for key in ("node_count", "edges", "attacker_starts", "targets", "defender_starts", "horizon"):
      if key not in data:
        raise ConfigError(key, "required field missing")

    node_count = _int_field(data, "node_count")
    if node_count < 1:
      raise ConfigError("node_count", f"must be >= 1, got {node_count}")
    edges = data["edges"]
    if not isinstance(edges, list):
      raise ConfigError("edges", "expected a list of [u, v] pairs")
    pairs = []
    for edge in edges:
      if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in edge)):
        raise ConfigError("edges", f"malformed edge {edge!r}")
      pairs.append((edge[0], edge[1]))
    try:
      graph = Graph.from_edges(node_count, pairs)
    except ValueError as e:
      raise ConfigError("edges", str(e)) from e

    grid = None
    if data.get("grid") is not None:
      g = data["grid"]
      if not (isinstance(g, dict) and set(g) == {"width", "height"}):
        raise ConfigError("grid", "expected {\"width\": int, \"height\": int}")
      grid = GridShape(_int_field(g, "width", "grid"), _int_field(g, "height", "grid"))

    targets = _id_list(data, "targets")
    if len(set(targets)) != len(targets):
      raise ConfigError("targets", "duplicate target ids")
    return cls(
      graph=graph,
      attacker_starts=tuple(_id_list(data, "attacker_starts")),
      targets=frozenset(targets),
      defender_starts=tuple(_id_list(data, "defender_starts")),
      horizon=_int_field(data, "horizon"),
      grid=grid,
    )


def _int_field(data: Dict[str, Any], key: str, field: Optional[str] = None) -> int:
  value = data[key]
  if not isinstance(value, int) or isinstance(value, bool):
    raise ConfigError(field or key, f"expected an integer, got {value!r}")
  return value


def _id_list(data: Dict[str, Any], key: str) -> list:
  value = data[key]
  if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
    raise ConfigError(key, "expected a list of node ids")
  return value


def load_config(path: str) -> GameConfig:
  try:
    with open(path, "r") as f:
      data = json.load(f)
  except json.JSONDecodeError as e:
    raise ConfigError("<file>", f"{path} is not valid JSON: {e}") from e
  return GameConfig.from_dict(data)


def save_config(config: GameConfig, path: str) -> None:
  with open(path, "w") as f:
    json.dump(config.to_dict(), f, indent=2)
    f.write("\n")


def config_digest(config: GameConfig) -> str:
  return sha256_digest(config.to_dict())
