from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
from nsgzero.game.state import GlobalState


class UnexpandedStateError(KeyError):
  pass


@dataclass
class NodeStats:
  """
  Per-resource statistics at one hypothetical state. Row i holds Q, O and P for resource i
  over its own legal actions `legal[i]`; resources never read each other's rows.
  """
  legal: Tuple[Tuple[int, ...], ...]
  P: List[np.ndarray]
  Q: List[np.ndarray]
  O: List[np.ndarray]
  attacker_legal: Tuple[int, ...]
  dynamics: np.ndarray

  @classmethod
  def fresh(cls, legal: Sequence[Sequence[int]], priors: Sequence[np.ndarray], attacker_legal: Sequence[int], dynamics: np.ndarray) -> "NodeStats":
    legal = tuple(tuple(a) for a in legal)
    return cls(
      legal=legal,
      P=[np.asarray(p, dtype=np.float64) for p in priors],
      Q=[np.zeros(len(a)) for a in legal],
      O=[np.zeros(len(a), dtype=np.int64) for a in legal],
      attacker_legal=tuple(attacker_legal),
      dynamics=np.asarray(dynamics, dtype=np.float64),
    )

  def index(self, i: int, action: int) -> int:
    return self.legal[i].index(action)

  def backup(self, i: int, action: int, reward: float) -> None:
    k = self.index(i, action)
    o = self.O[i][k]
    self.Q[i][k] = (o*self.Q[i][k] + reward)/(o + 1)
    self.O[i][k] = o + 1


class TreeStats:
  """Search statistics keyed by the full hypothetical state, owned by a single search."""
  def __init__(self):
    self.nodes: Dict[GlobalState, NodeStats] = {}

  def clear(self) -> None:
    self.nodes.clear()

  def is_expanded(self, state: GlobalState) -> bool:
    return state in self.nodes

  def expand(self, state: GlobalState, node: NodeStats) -> None:
    self.nodes[state] = node

  def get(self, state: GlobalState) -> Optional[NodeStats]:
    return self.nodes.get(state)

  def node(self, state: GlobalState) -> NodeStats:
    node = self.nodes.get(state)
    if node is None:
      raise UnexpandedStateError(f"state {state} has not been expanded")
    return node

  def __len__(self) -> int:
    return len(self.nodes)


def puct_scores(node: NodeStats, i: int, c_puct: float) -> np.ndarray:
  O = node.O[i]
  return node.Q[i] + c_puct*np.sqrt(O.sum())/(1.0 + O)*node.P[i]


def puct_select(stats: TreeStats, state: GlobalState, i: int, c_puct: float, rng: np.random.Generator) -> int:
  node = stats.node(state)
  scores = puct_scores(node, i, c_puct)
  best = np.flatnonzero(scores == scores.max())
  if len(best) == 1:
    return node.legal[i][best[0]]
  return node.legal[i][best[int(rng.integers(len(best)))]]
