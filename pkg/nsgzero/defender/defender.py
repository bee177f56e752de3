from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Tuple
import numpy as np
from nsgzero.graph.graph import bfs_distances
from nsgzero.graph.game_config import GameConfig
from nsgzero.game.state import GlobalState
from nsgzero.game.rules import legal_defender_actions
from nsgzero.nets.params import NetParams
from nsgzero.mcts.search import SearchConfig, execute


@dataclass
class DefenderMove:
  actions: Tuple[int, ...]
  legal: Tuple[Tuple[int, ...], ...]
  # root visit distributions, only for searching defenders
  policies: Optional[List[np.ndarray]] = None


class DefenderPolicy(ABC):
  @abstractmethod
  def act(self, game: GameConfig, state: GlobalState, rng: np.random.Generator) -> DefenderMove:
    pass


class MCTSDefender(DefenderPolicy):
  """Decentralized search: every resource picks its own move from its own root statistics."""
  def __init__(self, params: NetParams, search_config: SearchConfig):
    self.params = params
    self.search_config = search_config

  def act(self, game: GameConfig, state: GlobalState, rng: np.random.Generator) -> DefenderMove:
    result = execute(game, state, self.params, self.search_config, rng)
    return DefenderMove(result.actions, result.legal, result.policies)


class StationaryDefender(DefenderPolicy):
  def act(self, game: GameConfig, state: GlobalState, rng: np.random.Generator) -> DefenderMove:
    return DefenderMove(tuple(state.resource_locs), tuple(legal_defender_actions(game, state)))


class ChaseDefender(DefenderPolicy):
  """Every resource steps along a shortest path toward the attacker's current node; ties go to the smallest node id."""
  def act(self, game: GameConfig, state: GlobalState, rng: np.random.Generator) -> DefenderMove:
    dist = bfs_distances(game.graph, [state.attacker_node])
    legal = tuple(legal_defender_actions(game, state))
    actions = []
    for loc, legal_i in zip(state.resource_locs, legal):
      if dist[loc] < 0:
        actions.append(loc)
        continue
      actions.append(min((n for n in legal_i if dist[n] >= 0), key=lambda n: (dist[n], n)))
    return DefenderMove(tuple(actions), legal)


def get_defender(kind: str, params: Optional[NetParams] = None, search_config: Optional[SearchConfig] = None) -> DefenderPolicy:
  if kind == "mcts":
    if params is None:
      raise ValueError("mcts defender needs network parameters")
    return MCTSDefender(params, search_config or SearchConfig())
  elif kind == "stationary":
    return StationaryDefender()
  elif kind == "chase":
    return ChaseDefender()
  else:
    raise ValueError(f"Defender kind {kind} not supported")
