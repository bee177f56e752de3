from dataclasses import dataclass
from typing import List, Sequence, Tuple
import numpy as np
from nsgzero.nets.params import NetParams
from nsgzero.nets.backward import StepTerm, LossInputs, LossBreakdown, evaluate_loss, one_hot
from nsgzero.train.episode import Episode

PRIOR_TARGETS = ("action", "visits")


@dataclass
class PaddedBatch:
  """
  Per-step fields laid out as [B, T]. Numeric fields are padded with 0 and object fields with
  None; mask[b, t] = 1 iff t < h_b.
  """
  mask: np.ndarray
  lengths: np.ndarray
  rewards: np.ndarray
  attacker_index: np.ndarray
  states: np.ndarray
  defender_legal: np.ndarray
  prior_targets: np.ndarray
  attacker_legal: np.ndarray

  @property
  def B(self) -> int:
    return self.mask.shape[0]

  @property
  def T(self) -> int:
    return self.mask.shape[1]


def value_target(gamma: float, h: int, t: int, reward: float) -> float:
  return gamma**(h - t)*reward


def _prior_targets(episode: Episode, t: int, prior_target: str) -> Tuple[np.ndarray, ...]:
  if prior_target == "visits" and episode.policies[t] is not None:
    return tuple(np.asarray(pi, dtype=np.float64) for pi in episode.policies[t])
  return tuple(one_hot(legal.index(a), len(legal)) for legal, a in zip(episode.defender_legal[t], episode.defender_actions[t]))


def pad_and_mask(batch: Sequence[Episode], T: int, prior_target: str = "action") -> PaddedBatch:
  if prior_target not in PRIOR_TARGETS:
    raise ValueError(f"prior_target must be one of {PRIOR_TARGETS}, got {prior_target!r}")
  B = len(batch)
  padded = PaddedBatch(
    mask=np.zeros((B, T)),
    lengths=np.zeros(B, dtype=np.int64),
    rewards=np.zeros(B),
    attacker_index=np.zeros((B, T), dtype=np.int64),
    states=np.full((B, T), None, dtype=object),
    defender_legal=np.full((B, T), None, dtype=object),
    prior_targets=np.full((B, T), None, dtype=object),
    attacker_legal=np.full((B, T), None, dtype=object),
  )
  for b, episode in enumerate(batch):
    if episode.h > T:
      raise ValueError(f"episode {b} has length {episode.h} > horizon {T}")
    padded.lengths[b] = episode.h
    padded.rewards[b] = episode.reward
    padded.mask[b, :episode.h] = 1.0
    for t in range(episode.h):
      padded.states[b, t] = episode.states[t]
      padded.defender_legal[b, t] = episode.defender_legal[t]
      padded.prior_targets[b, t] = _prior_targets(episode, t, prior_target)
      padded.attacker_legal[b, t] = episode.attacker_legal[t]
      padded.attacker_index[b, t] = episode.attacker_legal[t].index(episode.attacker_actions[t])
  return padded


def loss_inputs(padded: PaddedBatch, gamma: float, value_loss_kind: str = "CE", term_weights: Tuple[float, float, float] = (1.0, 1.0, 1.0)) -> LossInputs:
  terms: List[StepTerm] = []
  for b in range(padded.B):
    h = int(padded.lengths[b])
    for t in range(padded.T):
      if padded.mask[b, t] == 0.0:
        continue
      terms.append(StepTerm(
        state=padded.states[b, t],
        weight=padded.mask[b, t]/(h*padded.B),
        defender_legal=padded.defender_legal[b, t],
        prior_targets=padded.prior_targets[b, t],
        attacker_legal=padded.attacker_legal[b, t],
        attacker_index=int(padded.attacker_index[b, t]),
        value_target=value_target(gamma, h, t, float(padded.rewards[b])),
      ))
  return LossInputs(terms, value_loss_kind, term_weights)


def compute_loss(params: NetParams, padded: PaddedBatch, gamma: float, value_loss_kind: str = "CE") -> Tuple[LossBreakdown, LossInputs]:
  """
  Joint loss: per valid step, the resource-averaged prior cross entropy, the value loss against
  gamma^(h_b - t) * r_b and the dynamics cross entropy; averaged over each episode's steps, then over the batch.
  """
  inputs = loss_inputs(padded, gamma, value_loss_kind)
  return evaluate_loss(params, inputs), inputs
