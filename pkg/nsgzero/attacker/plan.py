from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple
import numpy as np
from nsgzero.graph.graph import Graph, bfs_distances


class UnreachableTargetError(ValueError):
  def __init__(self, start: int, target: int, budget: int):
    self.start = start
    self.target = target
    self.budget = budget
    super().__init__(f"target {target} is not reachable from {start} within {budget} steps")


class PlanExhaustedError(IndexError):
  pass


@dataclass
class AttackerPlan:
  target: Optional[int]
  path: Tuple[int, ...]
  cursor: int = 0

  @property
  def remaining(self) -> int:
    return len(self.path) - 1 - self.cursor


def target_distances(graph: Graph, target: int, avoid: FrozenSet[int] = frozenset()) -> np.ndarray:
  """Hop distances to `target` along walks that never enter a node of `avoid` (other than the target)."""
  return bfs_distances(graph, [target], blocked=avoid - {target})


def feasible_steps(graph: Graph, node: int, dist: np.ndarray, remaining: int) -> Tuple[int, ...]:
  return tuple(n for n in graph.neighbors(node) if 0 <= dist[n] <= remaining - 1)


def sample_path(graph: Graph, start: int, target: int, budget: int, rng: np.random.Generator, avoid: FrozenSet[int] = frozenset()) -> Tuple[int, ...]:
  """
  Random walk from start to target that can always still make it: each step picks uniformly
  among neighbors whose distance to the target fits in the budget left after the move.
  Nodes in `avoid` (the other targets, which would end the game early) are never stepped on.
  """
  if start == target:
    raise ValueError(f"start {start} is already the target")
  dist = target_distances(graph, target, avoid)
  if not feasible_steps(graph, start, dist, budget):
    raise UnreachableTargetError(start, target, budget)
  path = [start]
  remaining = budget
  while path[-1] != target:
    candidates = feasible_steps(graph, path[-1], dist, remaining)
    path.append(candidates[int(rng.integers(len(candidates)))])
    remaining -= 1
  return tuple(path)


def random_walk(graph: Graph, start: int, steps: int, rng: np.random.Generator) -> Tuple[int, ...]:
  path = [start]
  for _ in range(steps):
    neighbors = graph.neighbors(path[-1]) or (path[-1], )
    path.append(neighbors[int(rng.integers(len(neighbors)))])
  return tuple(path)


def scripted_step(plan: AttackerPlan) -> int:
  if plan.cursor >= len(plan.path) - 1:
    raise PlanExhaustedError(f"plan {plan.path} has no step after index {plan.cursor}")
  plan.cursor += 1
  return plan.path[plan.cursor]
