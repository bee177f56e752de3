from typing import Collection, Dict, List, Tuple
import numpy as np
from nsgzero.graph.graph import Graph, bfs_distances, grid_coords, UNREACHABLE
from nsgzero.graph.game_config import ConfigError


def grid_center(width: int, height: int) -> int:
  return (height//2)*width + width//2


def boundary_nodes(width: int, height: int) -> List[int]:
  return [v for v in range(width*height) if grid_coords(v, width)[0] in (0, height - 1) or grid_coords(v, width)[1] in (0, width - 1)]


def sample_targets(candidates: List[int], k: int, rng: np.random.Generator, where: str = "candidate nodes") -> Tuple[int, ...]:
  if k < 1:
    raise ConfigError("targets", f"must be >= 1, got {k}")
  if len(candidates) < k:
    raise ConfigError("targets", f"{k} targets requested but only {len(candidates)} {where}")
  return tuple(sorted(int(v) for v in rng.choice(candidates, size=k, replace=False)))


def place_resources(graph: Graph, attacker: int, exclude: Collection[int], m: int, rng: np.random.Generator) -> Tuple[int, ...]:
  """
  Resources on the nodes nearest the attacker by BFS ring on `graph`, nearest ring first,
  seeded shuffle within a ring. Nodes the attacker cannot reach only fill in once every
  reachable node is taken.
  """
  if m < 1:
    raise ConfigError("resources", f"must be >= 1, got {m}")
  dist = bfs_distances(graph, [attacker])
  rings: Dict[int, List[int]] = {}
  for v in range(graph.node_count):
    if v != attacker and v not in exclude:
      rings.setdefault(int(dist[v]), []).append(v)

  order: List[int] = []
  for ring in sorted(d for d in rings if d != UNREACHABLE) + ([UNREACHABLE] if UNREACHABLE in rings else []):
    nodes = rings[ring]
    order.extend(nodes[k] for k in rng.permutation(len(nodes)))
  if len(order) < m:
    raise ConfigError("resources", f"{m} resources requested but only {len(order)} free nodes")
  return tuple(int(v) for v in order[:m])
