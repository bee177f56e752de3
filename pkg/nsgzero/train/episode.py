from collections import deque
from dataclasses import dataclass, field
from typing import Deque, List, Optional, Tuple
import numpy as np
from nsgzero.helpers import DEBUG
from nsgzero.graph.game_config import GameConfig
from nsgzero.game.state import GlobalState, Outcome
from nsgzero.game.rules import initial_state, legal_attacker_actions, step
from nsgzero.nets.params import NetParams
from nsgzero.mcts.search import SearchConfig
from nsgzero.defender.defender import DefenderPolicy, MCTSDefender
from nsgzero.attacker.attacker import AttackerPolicy, PathAttacker
from nsgzero.attacker.plan import AttackerPlan


@dataclass
class Episode:
  """
  One played game. states holds s_0..s_h; every per-step list has one entry per decision
  step t < h. policies[t] is None for defenders that do not search.
  """
  states: List[GlobalState]
  defender_actions: List[Tuple[int, ...]]
  attacker_actions: List[int]
  defender_legal: List[Tuple[Tuple[int, ...], ...]]
  attacker_legal: List[Tuple[int, ...]]
  reward: float
  policies: List[Optional[List[np.ndarray]]] = field(default_factory=list)
  target: Optional[int] = None

  @property
  def h(self) -> int:
    return len(self.attacker_actions)

  @property
  def start(self) -> int:
    return self.states[0].attacker_node

  def to_dict(self) -> dict:
    return {
      "states": [s.to_dict() for s in self.states],
      "defender_actions": [list(a) for a in self.defender_actions],
      "attacker_actions": list(self.attacker_actions),
      "defender_legal": [[list(a) for a in legal] for legal in self.defender_legal],
      "attacker_legal": [list(a) for a in self.attacker_legal],
      "reward": self.reward,
      "policies": [None if p is None else [pi.tolist() for pi in p] for p in self.policies],
      "target": self.target,
    }

  @classmethod
  def from_dict(cls, data: dict) -> "Episode":
    return cls(
      states=[GlobalState.from_dict(s) for s in data["states"]],
      defender_actions=[tuple(a) for a in data["defender_actions"]],
      attacker_actions=list(data["attacker_actions"]),
      defender_legal=[tuple(tuple(a) for a in legal) for legal in data["defender_legal"]],
      attacker_legal=[tuple(a) for a in data["attacker_legal"]],
      reward=float(data["reward"]),
      policies=[None if p is None else [np.asarray(pi) for pi in p] for p in data["policies"]],
      target=data["target"],
    )


def play_episode(game: GameConfig, defender: DefenderPolicy, attacker: AttackerPolicy, start: int, rng: np.random.Generator) -> Episode:
  """Plays one full game from `start`; the attacker is reset before the first move and observes the result."""
  attacker.reset(game, start, rng)
  state = initial_state(game, start)
  episode = Episode([state], [], [], [], [], 0.0, target=attacker.plan.target if attacker.plan is not None else None)
  outcome = Outcome(False)
  while not outcome.terminal:
    move = defender.act(game, state, rng)
    opponent = attacker.act(game, state, rng)
    episode.defender_legal.append(move.legal)
    episode.attacker_legal.append(legal_attacker_actions(game, state))
    episode.defender_actions.append(tuple(move.actions))
    episode.attacker_actions.append(opponent)
    episode.policies.append(move.policies)
    state, outcome = step(game, state, move.actions, opponent)
    episode.states.append(state)
  episode.reward = outcome.defender_reward
  attacker.observe(episode.reward)
  if DEBUG >= 3: print(f"episode start={start} target={episode.target} h={episode.h} reward={episode.reward}")
  return episode


def collect_episode(
  game: GameConfig, params: NetParams, attacker: AttackerPolicy, search_config: SearchConfig, rng: np.random.Generator, plan: Optional[AttackerPlan] = None
) -> Episode:
  """
  One training game for the searching defender. Without `plan` the attacker draws its own plan from
  a uniformly drawn start and observes the result. With a pre-drawn `plan` the game follows that path
  and `attacker` is left untouched; recording the outcome is up to the caller.
  """
  defender = MCTSDefender(params, search_config)
  if plan is None:
    start = game.attacker_starts[int(rng.integers(len(game.attacker_starts)))]
    return play_episode(game, defender, attacker, start, rng)
  episode = play_episode(game, defender, PathAttacker(plan.path), plan.path[0], rng)
  episode.target = plan.target
  return episode


def replay_episode(game: GameConfig, episode: Episode) -> Tuple[List[GlobalState], Outcome]:
  state = initial_state(game, episode.start)
  states, outcome = [state], Outcome(False)
  for actions, opponent in zip(episode.defender_actions, episode.attacker_actions):
    state, outcome = step(game, state, actions, opponent)
    states.append(state)
  return states, outcome


class EpisodeBuffer:
  """FIFO store of recent episodes; the oldest is evicted first at capacity."""
  def __init__(self, capacity: int):
    if capacity < 1:
      raise ValueError(f"buffer capacity must be >= 1, got {capacity}")
    self.capacity = capacity
    self.episodes: Deque[Episode] = deque(maxlen=capacity)

  def append(self, episode: Episode) -> None:
    self.episodes.append(episode)

  def sample(self, batch_size: int, rng: np.random.Generator) -> List[Episode]:
    if not self.episodes:
      raise ValueError("cannot sample from an empty buffer")
    n = min(batch_size, len(self.episodes))
    return [self.episodes[int(k)] for k in rng.choice(len(self.episodes), size=n, replace=False)]

  def __len__(self) -> int:
    return len(self.episodes)

  def to_list(self) -> List[dict]:
    return [e.to_dict() for e in self.episodes]

  def load_list(self, data: List[dict]) -> None:
    self.episodes.clear()
    for d in data:
      self.episodes.append(Episode.from_dict(d))
