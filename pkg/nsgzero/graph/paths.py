from typing import List, Tuple
from nsgzero.graph.graph import bfs_distances, UNREACHABLE
from nsgzero.graph.game_config import GameConfig

DEFAULT_PATH_CAP = 200_000

Path = Tuple[int, ...]


class PathCapExceeded(RuntimeError):
  def __init__(self, cap: int, what: str = "attack paths"):
    self.cap = cap
    super().__init__(f"more than {cap} {what}; use the shortest-path panel (eval --mode shortest) or raise the cap")


def enumerate_attack_paths(config: GameConfig, start: int, max_len: int, cap: int = DEFAULT_PATH_CAP) -> List[Path]:
  """
  All walks from `start` of at most `max_len` steps that end at their first target visit.
  Repeated nodes are allowed. The start position itself never counts as a target visit.
  Output is in lexicographic order of node sequences (DFS over ascending neighbors; no
  path is a prefix of another since each stops at its first target).
  """
  if start not in config.attacker_starts:
    raise ValueError(f"start {start} is not an attacker start {config.attacker_starts}")
  if max_len > config.horizon:
    raise ValueError(f"max_len {max_len} exceeds horizon {config.horizon}")

  graph, targets = config.graph, config.targets
  # Prune walks that can no longer reach any target in the remaining budget.
  to_target = bfs_distances(graph, targets)
  paths: List[Path] = []
  walk = [start]

  def extend(remaining: int):
    for v in graph.adjacency[walk[-1]]:
      if v in targets:
        paths.append(tuple(walk) + (v, ))
        if len(paths) > cap:
          raise PathCapExceeded(cap)
      elif remaining > 1 and to_target[v] != UNREACHABLE and to_target[v] <= remaining - 1:
        walk.append(v)
        extend(remaining - 1)
        walk.pop()

  if max_len >= 1:
    extend(max_len)
  return paths


def shortest_attack_paths(config: GameConfig, start: int, target: int, cap: int = DEFAULT_PATH_CAP) -> List[Path]:
  """
  Every shortest walk from `start` to `target`, truncated at its first target visit (an
  attacker passing another target on the way ends the game there). Deduplicated, sorted.
  Empty when `target` is unreachable or farther than the horizon.
  """
  graph, targets = config.graph, config.targets
  to_goal = bfs_distances(graph, [target])
  if to_goal[start] == UNREACHABLE or to_goal[start] == 0 or to_goal[start] > config.horizon:
    return []

  found = set()
  walk = [start]

  def descend():
    u = walk[-1]
    for v in graph.adjacency[u]:
      if to_goal[v] != to_goal[u] - 1:
        continue
      if v in targets:
        found.add(tuple(walk) + (v, ))
        if len(found) > cap:
          raise PathCapExceeded(cap, "shortest paths")
        continue
      walk.append(v)
      descend()
      walk.pop()

  descend()
  return sorted(found)
