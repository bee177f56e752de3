from dataclasses import dataclass, asdict
from typing import List, Optional, Tuple
import numpy as np
from nsgzero.helpers import DEBUG
from nsgzero.graph.game_config import GameConfig
from nsgzero.game.state import GlobalState
from nsgzero.game.rules import evaluate_state, is_terminal, legal_defender_actions, legal_attacker_actions, step
from nsgzero.nets.params import NetParams
from nsgzero.nets.forward import prior_forward, dynamics_forward, value_forward
from nsgzero.mcts.tree import TreeStats, NodeStats, puct_select


@dataclass(frozen=True)
class SearchConfig:
  n_simulations: int = 15
  c_puct: float = 0.3
  # 0 selects the most-visited action (ties uniform)
  temperature: float = 1.0
  gamma: float = 1.0

  def __post_init__(self):
    if self.n_simulations < 2:
      raise ValueError(f"n_simulations must be >= 2 (the first simulation only expands the root), got {self.n_simulations}")
    if self.c_puct < 0:
      raise ValueError(f"c_puct must be >= 0, got {self.c_puct}")
    if self.temperature < 0:
      raise ValueError(f"temperature must be >= 0, got {self.temperature}")
    if not 0.0 < self.gamma <= 1.0:
      raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")

  def to_dict(self) -> dict:
    return asdict(self)


@dataclass
class SearchResult:
  actions: Tuple[int, ...]
  policies: List[np.ndarray]
  legal: Tuple[Tuple[int, ...], ...]
  visit_counts: List[np.ndarray]


def expand(game: GameConfig, tree: TreeStats, state: GlobalState, params: NetParams) -> NodeStats:
  legal = legal_defender_actions(game, state)
  attacker_legal = legal_attacker_actions(game, state)
  priors = [prior_forward(params, state, i, legal_i) for i, legal_i in enumerate(legal)]
  node = NodeStats.fresh(legal, priors, attacker_legal, dynamics_forward(params, state, attacker_legal))
  tree.expand(state, node)
  return node


def search(game: GameConfig, tree: TreeStats, state: GlobalState, params: NetParams, config: SearchConfig, rng: np.random.Generator) -> float:
  """One simulation from `state`. Returns the searched defender reward."""
  outcome = evaluate_state(game, state)
  if outcome.terminal:
    return outcome.defender_reward

  node = tree.get(state)
  if node is None:
    expand(game, tree, state, params)
    return value_forward(params, state)

  actions = tuple(puct_select(tree, state, i, config.c_puct, rng) for i in range(state.m))
  opponent = node.attacker_legal[int(rng.choice(len(node.attacker_legal), p=node.dynamics))]
  next_state, next_outcome = step(game, state, actions, opponent)
  if next_outcome.terminal:
    reward = next_outcome.defender_reward
  else:
    reward = config.gamma*search(game, tree, next_state, params, config, rng)

  for i, a in enumerate(actions):
    node.backup(i, a, reward)
  if DEBUG >= 4: print(f"backup t={state.t} actions={actions} opponent={opponent} R={reward:.4f}")
  return reward


def visit_policy(counts: np.ndarray, temperature: float) -> np.ndarray:
  counts = np.asarray(counts, dtype=np.float64)
  if counts.max() <= 0:
    return np.full(len(counts), 1.0/len(counts))
  if temperature == 0:
    best = counts == counts.max()
    return best/best.sum()
  # scale by the max first so large counts at small temperature stay finite
  weights = (counts/counts.max())**(1.0/temperature)
  return weights/weights.sum()


def execute(game: GameConfig, state: GlobalState, params: NetParams, config: SearchConfig, rng: np.random.Generator, tree: Optional[TreeStats] = None) -> SearchResult:
  """Clears the tree, runs n_simulations from `state`, then samples each resource's action from its root policy."""
  if is_terminal(game, state):
    raise ValueError(f"execute called on terminal state {state}")
  tree = tree if tree is not None else TreeStats()
  tree.clear()
  for _ in range(config.n_simulations):
    search(game, tree, state, params, config, rng)

  root = tree.node(state)
  policies, actions = [], []
  for i, legal_i in enumerate(root.legal):
    pi = visit_policy(root.O[i], config.temperature)
    policies.append(pi)
    actions.append(legal_i[int(rng.choice(len(legal_i), p=pi))])
  if DEBUG >= 3: print(f"execute t={state.t} tree_size={len(tree)} counts={[o.tolist() for o in root.O]} actions={actions}")
  return SearchResult(tuple(actions), policies, root.legal, [o.copy() for o in root.O])
