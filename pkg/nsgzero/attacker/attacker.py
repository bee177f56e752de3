from abc import ABC, abstractmethod
from typing import List, Optional, Sequence
import numpy as np
from nsgzero.helpers import DEBUG
from nsgzero.graph.game_config import GameConfig
from nsgzero.game.state import GlobalState
from nsgzero.attacker.bandit import MabState, AvgerState, mixture_select, DEFAULT_WINDOW, DEFAULT_ETA
from nsgzero.attacker.plan import AttackerPlan, feasible_steps, sample_path, random_walk, scripted_step, target_distances


def reachable_targets(game: GameConfig, start: int) -> List[int]:
  """Targets the attacker can reach from `start` within the horizon without passing through another target first."""
  return sorted(t for t in game.targets if t != start and feasible_steps(game.graph, start, target_distances(game.graph, t, game.targets), game.horizon))


class AttackerPolicy(ABC):
  """An attacker commits to a plan at episode start, walks it one node per step, and may learn from the result."""
  def __init__(self):
    self.plan: Optional[AttackerPlan] = None

  @abstractmethod
  def draw_plan(self, game: GameConfig, start: int, rng: np.random.Generator) -> AttackerPlan:
    pass

  def reset(self, game: GameConfig, start: int, rng: np.random.Generator) -> None:
    self.plan = self.draw_plan(game, start, rng)

  def act(self, game: GameConfig, state: GlobalState, rng: np.random.Generator) -> int:
    if self.plan is None:
      raise RuntimeError("act called before reset")
    return scripted_step(self.plan)

  def observe(self, defender_reward: float) -> None:
    pass


def _plan_towards(game: GameConfig, start: int, target: Optional[int], rng: np.random.Generator) -> AttackerPlan:
  if target is None:
    # no target within reach: wander until the horizon runs out
    if DEBUG >= 2: print(f"attacker at {start} cannot reach any target within {game.horizon} steps")
    return AttackerPlan(None, random_walk(game.graph, start, game.horizon, rng))
  return AttackerPlan(target, sample_path(game.graph, start, target, game.horizon, rng, avoid=game.targets))


class UniformAttacker(AttackerPolicy):
  """Uniformly random reachable target, then a feasible random path to it."""
  def draw_plan(self, game: GameConfig, start: int, rng: np.random.Generator) -> AttackerPlan:
    targets = reachable_targets(game, start)
    target = targets[int(rng.integers(len(targets)))] if targets else None
    return _plan_towards(game, start, target, rng)


class MixtureAttacker(AttackerPolicy):
  """
  Adaptive training opponent. With probability eta it best-responds to the recent window of
  outcomes (MAB) and counts that pick; otherwise it samples the historical average of those picks (AVGer).
  """
  def __init__(self, targets: Sequence[int], window: int = DEFAULT_WINDOW, eta: float = DEFAULT_ETA):
    super().__init__()
    self.mab = MabState(window)
    self.avger = AvgerState(tuple(targets))
    self.eta = eta
    self.last_used_mab = False

  def draw_plan(self, game: GameConfig, start: int, rng: np.random.Generator) -> AttackerPlan:
    targets = reachable_targets(game, start)
    target = None
    if targets:
      target, self.last_used_mab = mixture_select(self.mab, self.avger, self.eta, targets, rng)
    return _plan_towards(game, start, target, rng)

  def record(self, target: Optional[int], defender_reward: float) -> None:
    if target is not None:
      self.mab.record(target, -defender_reward)

  def observe(self, defender_reward: float) -> None:
    if self.plan is not None:
      self.record(self.plan.target, defender_reward)

  def state_dict(self) -> dict:
    return {"eta": self.eta, "mab": self.mab.to_dict(), "avger": self.avger.to_dict()}

  def load_state_dict(self, data: dict) -> None:
    self.eta = data["eta"]
    self.mab = MabState.from_dict(data["mab"])
    self.avger = AvgerState.from_dict(data["avger"])


class PathAttacker(AttackerPolicy):
  """Follows one fixed path; used for best-response enumeration and shortest-path panels."""
  def __init__(self, path: Sequence[int], target: Optional[int] = None):
    super().__init__()
    self.path = tuple(path)
    self.target = target if target is not None else self.path[-1]

  def draw_plan(self, game: GameConfig, start: int, rng: np.random.Generator) -> AttackerPlan:
    if self.path[0] != start:
      raise ValueError(f"path {self.path} does not begin at attacker start {start}")
    return AttackerPlan(self.target, self.path)


def get_attacker(kind: str, game: GameConfig, window: int = DEFAULT_WINDOW, eta: float = DEFAULT_ETA) -> AttackerPolicy:
  if kind == "mixture":
    return MixtureAttacker(sorted(game.targets), window, eta)
  elif kind == "uniform":
    return UniformAttacker()
  else:
    raise ValueError(f"Attacker kind {kind} not supported")
