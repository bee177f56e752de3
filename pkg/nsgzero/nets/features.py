from dataclasses import dataclass
from typing import List, Optional, Tuple
import numpy as np
from nsgzero.game.state import GlobalState


@dataclass
class StateFeatures:
  """
  Fixed-size state block: embedding of the attacker's node, mean embedding over the attacker's
  history, the ego resource's embedding (prior network only), mean embedding over all resource
  locations, and t/T. `lookups` records which embedding rows fed each slot and with what weight.
  """
  vector: np.ndarray
  lookups: List[Tuple[int, np.ndarray, float]]


def state_features(embedding: np.ndarray, state: GlobalState, horizon: int, ego: Optional[int] = None) -> StateFeatures:
  d = embedding.shape[1]
  history = np.asarray(state.attacker_seq, dtype=np.int64)
  locs = np.asarray(state.resource_locs, dtype=np.int64)
  slots = [(np.asarray([state.attacker_node]), 1.0), (history, 1.0/len(history))]
  if ego is not None:
    slots.append((np.asarray([ego]), 1.0))
  slots.append((locs, 1.0/len(locs)))

  vector = np.empty(len(slots)*d + 1)
  lookups = []
  for k, (rows, weight) in enumerate(slots):
    vector[k*d:(k + 1)*d] = embedding[rows].sum(axis=0)*weight
    lookups.append((k*d, rows, weight))
  vector[-1] = min(state.t/horizon, 1.0)
  return StateFeatures(vector, lookups)


def scatter_feature_grad(d_embedding: np.ndarray, features: StateFeatures, d_vector: np.ndarray) -> None:
  d = d_embedding.shape[1]
  for offset, rows, weight in features.lookups:
    np.add.at(d_embedding, rows, weight*d_vector[offset:offset + d])
