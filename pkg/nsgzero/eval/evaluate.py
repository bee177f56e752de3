from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
import numpy as np
from tqdm import tqdm
from nsgzero.helpers import DEBUG, spawn_rngs
from nsgzero.graph.game_config import GameConfig
from nsgzero.graph.paths import DEFAULT_PATH_CAP, Path, PathCapExceeded, enumerate_attack_paths, shortest_attack_paths
from nsgzero.defender.defender import DefenderPolicy
from nsgzero.attacker.attacker import AttackerPolicy, PathAttacker
from nsgzero.train.episode import play_episode

Z_95 = 1.96
DEFAULT_EPISODES_PER_PATH = 20
SHORTEST_PANEL_NOTE = "shortest-path panel only: approximates the worst case from above"


@dataclass
class MatchResult:
  mean: float
  half_width: float
  n: int

  @property
  def interval(self) -> Tuple[float, float]:
    return self.mean - self.half_width, self.mean + self.half_width


@dataclass
class PathResult:
  path_id: int
  path: Path
  mean_reward: float
  n_episodes: int
  half_width: float = 0.0


@dataclass
class EvalReport:
  mode: str
  value: float
  half_width: float
  path: Optional[Path] = None
  rows: List[PathResult] = field(default_factory=list)
  note: str = ""

  @property
  def n_episodes(self) -> int:
    return sum(r.n_episodes for r in self.rows)


def confidence_interval(rewards: Sequence[float]) -> Tuple[float, float]:
  """Mean and normal-approximation 95% half-width."""
  rewards = np.asarray(rewards, dtype=np.float64)
  if len(rewards) == 0:
    raise ValueError("confidence_interval needs at least one reward")
  return float(rewards.mean()), float(Z_95*rewards.std()/np.sqrt(len(rewards)))


def play_matches(game: GameConfig, defender: DefenderPolicy, attacker: AttackerPolicy, n_episodes: int, rng: np.random.Generator, start: Optional[int] = None) -> MatchResult:
  if n_episodes < 1:
    raise ValueError(f"n_episodes must be >= 1, got {n_episodes}")
  rewards = []
  for _ in range(n_episodes):
    s = start if start is not None else game.attacker_starts[int(rng.integers(len(game.attacker_starts)))]
    rewards.append(play_episode(game, defender, attacker, s, rng).reward)
  mean, half_width = confidence_interval(rewards)
  return MatchResult(mean, half_width, n_episodes)


def evaluate_paths(game: GameConfig, defender: DefenderPolicy, paths: Sequence[Path], episodes_per_path: int, rng: np.random.Generator, threads: int = 1, progress: bool = False) -> List[PathResult]:
  """Scores each path independently with its own rng; results keep the order of `paths`."""
  rngs = spawn_rngs(rng, len(paths))

  def run(k: int) -> PathResult:
    result = play_matches(game, defender, PathAttacker(paths[k]), episodes_per_path, rngs[k], start=paths[k][0])
    return PathResult(k, paths[k], result.mean, result.n, result.half_width)

  with tqdm(total=len(paths), desc="paths", disable=not progress, leave=False) as bar:
    if threads <= 1:
      results = []
      for k in range(len(paths)):
        results.append(run(k))
        bar.update(1)
      return results
    with ThreadPoolExecutor(max_workers=threads) as executor:
      results = []
      for r in executor.map(run, range(len(paths))):
        results.append(r)
        bar.update(1)
      return results


def _worst(mode: str, rows: List[PathResult], note: str = "") -> EvalReport:
  if not rows:
    # no target is reachable: every attack ends in capture or timeout
    return EvalReport(mode, 1.0, 0.0, None, [], note)
  worst = min(rows, key=lambda r: (r.mean_reward, r.path_id))
  return EvalReport(mode, worst.mean_reward, worst.half_width, worst.path, rows, note)


def best_response_value(game: GameConfig, defender: DefenderPolicy, episodes_per_path: int, rng: np.random.Generator, cap: int = DEFAULT_PATH_CAP, threads: int = 1, progress: bool = False) -> EvalReport:
  """Worst-case defender reward over every enumerated attack path from every attacker start."""
  paths: List[Path] = []
  for start in sorted(set(game.attacker_starts)):
    paths.extend(enumerate_attack_paths(game, start, game.horizon, cap))
    if len(paths) > cap:
      raise PathCapExceeded(cap)
  if DEBUG >= 1: print(f"best response over {len(paths)} attack paths x {episodes_per_path} episodes")
  return _worst("enumerate", evaluate_paths(game, defender, paths, episodes_per_path, rng, threads, progress))


def shortest_path_panel(game: GameConfig, defender: DefenderPolicy, episodes_per_path: int, rng: np.random.Generator, cap: int = DEFAULT_PATH_CAP, threads: int = 1, progress: bool = False) -> EvalReport:
  """Worst case over all shortest paths per (start, target) pair. An upper bound on the true worst case."""
  paths: List[Path] = []
  seen = set()
  for start in sorted(set(game.attacker_starts)):
    for target in sorted(game.targets):
      for path in shortest_attack_paths(game, start, target, cap):
        if path not in seen:
          seen.add(path)
          paths.append(path)
      if len(paths) > cap:
        raise PathCapExceeded(cap, "shortest paths")
  if DEBUG >= 1: print(f"shortest-path panel of {len(paths)} paths x {episodes_per_path} episodes")
  return _worst("shortest", evaluate_paths(game, defender, paths, episodes_per_path, rng, threads, progress), SHORTEST_PANEL_NOTE)


def uniform_report(game: GameConfig, defender: DefenderPolicy, attacker: AttackerPolicy, n_episodes: int, rng: np.random.Generator) -> EvalReport:
  result = play_matches(game, defender, attacker, n_episodes, rng)
  return EvalReport("uniform", result.mean, result.half_width, None, [PathResult(0, (), result.mean, result.n, result.half_width)])


def worst_case_reward(game: GameConfig, defender: DefenderPolicy, episodes_per_path: int, rng: np.random.Generator, cap: int = DEFAULT_PATH_CAP, threads: int = 1) -> EvalReport:
  """Exact enumeration when the path count fits under the cap, otherwise the shortest-path panel."""
  try:
    return best_response_value(game, defender, episodes_per_path, rng, cap, threads)
  except PathCapExceeded as e:
    if DEBUG >= 1: print(f"{e}; falling back to the shortest-path panel")
    return shortest_path_panel(game, defender, episodes_per_path, rng, cap, threads)
