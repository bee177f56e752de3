from dataclasses import dataclass
from typing import Optional, Sequence, Tuple
import numpy as np
from nsgzero.game.state import GlobalState
from nsgzero.nets.params import NetParams
from nsgzero.nets.features import StateFeatures, state_features

PROB_FLOOR = 1e-12


@dataclass
class EncoderCache:
  features: StateFeatures
  z1: np.ndarray
  h1: np.ndarray
  f: np.ndarray


@dataclass
class ScoringCache:
  encoder: EncoderCache
  actions: np.ndarray
  action_embeddings: np.ndarray
  g: np.ndarray
  probs: np.ndarray


def softmax(logits: np.ndarray) -> np.ndarray:
  shifted = np.exp(logits - logits.max())
  return shifted/shifted.sum()


def sigmoid(x: float) -> float:
  if x >= 0:
    return float(1.0/(1.0 + np.exp(-x)))
  e = np.exp(x)
  return float(e/(1.0 + e))


def encode_state(params: NetParams, net: str, state: GlobalState, ego: Optional[int] = None) -> EncoderCache:
  """f(s): two affine layers with a rectifier between them."""
  features = state_features(params["embedding"], state, params.shape.horizon, ego)
  z1 = features.vector @ params[f"{net}.state.w1"] + params[f"{net}.state.b1"]
  h1 = np.maximum(z1, 0.0)
  f = h1 @ params[f"{net}.state.w2"] + params[f"{net}.state.b2"]
  return EncoderCache(features, z1, h1, f)


def score_actions(params: NetParams, net: str, state: GlobalState, actions: Sequence[int], ego: Optional[int] = None) -> ScoringCache:
  """SoftMax(f(s) . g(a)) over the candidate actions, in the order given."""
  if len(actions) == 0:
    raise ValueError(f"{net} network needs at least one legal action")
  encoder = encode_state(params, net, state, ego)
  actions = np.asarray(actions, dtype=np.int64)
  action_embeddings = params["embedding"][actions]
  g = action_embeddings @ params[f"{net}.action.w"] + params[f"{net}.action.b"]
  return ScoringCache(encoder, actions, action_embeddings, g, softmax(g @ encoder.f))


def dynamics_forward(params: NetParams, state: GlobalState, legal_opponent: Sequence[int]) -> np.ndarray:
  return score_actions(params, "dynamics", state, legal_opponent).probs


def prior_forward(params: NetParams, state: GlobalState, resource_index: int, legal_i: Sequence[int]) -> np.ndarray:
  return score_actions(params, "prior", state, legal_i, ego=state.resource_locs[resource_index]).probs


def value_logit(params: NetParams, state: GlobalState) -> Tuple[float, EncoderCache, np.ndarray]:
  encoder = encode_state(params, "value", state)
  u = np.maximum(encoder.f, 0.0)
  return float(u @ params["value.head.w"] + params["value.head.b"][0]), encoder, u


def value_forward(params: NetParams, state: GlobalState) -> float:
  logit, _, _ = value_logit(params, state)
  return float(np.clip(sigmoid(logit), PROB_FLOOR, 1.0 - PROB_FLOOR))
