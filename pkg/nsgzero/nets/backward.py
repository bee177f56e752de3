from dataclasses import dataclass
from typing import Dict, List, Tuple
import numpy as np
from nsgzero.game.state import GlobalState
from nsgzero.nets.params import NetParams
from nsgzero.nets.forward import EncoderCache, ScoringCache, score_actions, value_logit, sigmoid, PROB_FLOOR
from nsgzero.nets.features import scatter_feature_grad

VALUE_LOSS_KINDS = ("CE", "MSE")


@dataclass
class StepTerm:
  """
  One valid (episode, step) entry of the joint loss. `weight` already folds in the mask and
  the 1/h_b and 1/B averaging factors. `prior_targets[i]` is a distribution over
  `defender_legal[i]` (one-hot for sampled actions).
  """
  state: GlobalState
  weight: float
  defender_legal: Tuple[Tuple[int, ...], ...]
  prior_targets: Tuple[np.ndarray, ...]
  attacker_legal: Tuple[int, ...]
  attacker_index: int
  value_target: float


@dataclass
class LossInputs:
  terms: List[StepTerm]
  value_loss_kind: str = "CE"
  # multipliers for the prior, value and dynamics terms
  term_weights: Tuple[float, float, float] = (1.0, 1.0, 1.0)

  def __post_init__(self):
    if self.value_loss_kind not in VALUE_LOSS_KINDS:
      raise ValueError(f"value_loss_kind must be one of {VALUE_LOSS_KINDS}, got {self.value_loss_kind!r}")


@dataclass
class LossBreakdown:
  prior: float = 0.0
  value: float = 0.0
  dynamics: float = 0.0

  @property
  def total(self) -> float:
    return self.prior + self.value + self.dynamics


def value_loss(p: float, target: float, kind: str) -> float:
  if kind == "MSE":
    return (p - target)**2
  return -target*np.log(max(p, PROB_FLOOR)) - (1.0 - target)*np.log(max(1.0 - p, PROB_FLOOR))


def cross_entropy(probs: np.ndarray, target: np.ndarray) -> float:
  return float(-(target*np.log(np.maximum(probs, PROB_FLOOR))).sum())


def one_hot(index: int, size: int) -> np.ndarray:
  v = np.zeros(size)
  v[index] = 1.0
  return v


def evaluate_loss(params: NetParams, inputs: LossInputs) -> LossBreakdown:
  return _run(params, inputs, grads=None)


def backward(params: NetParams, inputs: LossInputs) -> Tuple[LossBreakdown, Dict[str, np.ndarray]]:
  """Loss and its exact gradient with respect to every tensor, by one reverse sweep per term."""
  grads = params.zeros_like()
  breakdown = _run(params, inputs, grads)
  for name, g in grads.items():
    if not np.all(np.isfinite(g)):
      raise FloatingPointError(f"non-finite gradient for {name}")
  return breakdown, grads


def _run(params: NetParams, inputs: LossInputs, grads) -> LossBreakdown:
  w_prior, w_value, w_dynamics = inputs.term_weights
  breakdown = LossBreakdown()
  for term in inputs.terms:
    if term.weight == 0.0:
      continue

    if w_prior != 0.0:
      m = len(term.defender_legal)
      coef = term.weight*w_prior/m
      for i, (legal, target) in enumerate(zip(term.defender_legal, term.prior_targets)):
        if len(target) != len(legal):
          raise ValueError(f"prior target of size {len(target)} for {len(legal)} legal actions")
        cache = score_actions(params, "prior", term.state, legal, ego=term.state.resource_locs[i])
        breakdown.prior += coef*cross_entropy(cache.probs, target)
        if grads is not None:
          _scoring_backward(params, "prior", cache, coef*(cache.probs - target), grads)

    if w_value != 0.0:
      coef = term.weight*w_value
      logit, encoder, u = value_logit(params, term.state)
      p = sigmoid(logit)
      breakdown.value += coef*value_loss(p, term.value_target, inputs.value_loss_kind)
      if grads is not None:
        if inputs.value_loss_kind == "MSE":
          d_logit = coef*2.0*(p - term.value_target)*p*(1.0 - p)
        else:
          d_logit = coef*(p - term.value_target)
        grads["value.head.w"] += d_logit*u
        grads["value.head.b"][0] += d_logit
        d_f = d_logit*params["value.head.w"]*(encoder.f > 0.0)
        _encoder_backward(params, "value", encoder, d_f, grads)

    if w_dynamics != 0.0:
      coef = term.weight*w_dynamics
      target = one_hot(term.attacker_index, len(term.attacker_legal))
      cache = score_actions(params, "dynamics", term.state, term.attacker_legal)
      breakdown.dynamics += coef*cross_entropy(cache.probs, target)
      if grads is not None:
        _scoring_backward(params, "dynamics", cache, coef*(cache.probs - target), grads)
  return breakdown


def _scoring_backward(params: NetParams, net: str, cache: ScoringCache, d_logits: np.ndarray, grads: Dict[str, np.ndarray]) -> None:
  f = cache.encoder.f
  d_f = cache.g.T @ d_logits
  d_g = np.outer(d_logits, f)
  grads[f"{net}.action.w"] += cache.action_embeddings.T @ d_g
  grads[f"{net}.action.b"] += d_g.sum(axis=0)
  np.add.at(grads["embedding"], cache.actions, d_g @ params[f"{net}.action.w"].T)
  _encoder_backward(params, net, cache.encoder, d_f, grads)


def _encoder_backward(params: NetParams, net: str, encoder: EncoderCache, d_f: np.ndarray, grads: Dict[str, np.ndarray]) -> None:
  grads[f"{net}.state.w2"] += np.outer(encoder.h1, d_f)
  grads[f"{net}.state.b2"] += d_f
  d_z1 = (params[f"{net}.state.w2"] @ d_f)*(encoder.z1 > 0.0)
  grads[f"{net}.state.w1"] += np.outer(encoder.features.vector, d_z1)
  grads[f"{net}.state.b1"] += d_z1
  scatter_feature_grad(grads["embedding"], encoder.features, params[f"{net}.state.w1"] @ d_z1)
