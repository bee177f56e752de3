from dataclasses import dataclass
from typing import Dict
import numpy as np
from nsgzero.nets.params import NetParams, NonFiniteError

DEFAULT_LR = 1e-3
BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


@dataclass
class AdamMoments:
  m: Dict[str, np.ndarray]
  v: Dict[str, np.ndarray]
  step_count: int = 0

  @classmethod
  def zeros(cls, params: NetParams) -> "AdamMoments":
    return cls(params.zeros_like(), params.zeros_like(), 0)

  def copy(self) -> "AdamMoments":
    return AdamMoments({k: a.copy() for k, a in self.m.items()}, {k: a.copy() for k, a in self.v.items()}, self.step_count)


def optimizer_step(
  params: NetParams,
  grads: Dict[str, np.ndarray],
  moments: AdamMoments,
  lr: float = DEFAULT_LR,
  beta1: float = BETA1,
  beta2: float = BETA2,
  eps: float = EPSILON,
) -> None:
  """Adaptive-moment update with bias correction, applied in place to params and moments."""
  if set(grads) != set(params.tensors):
    raise ValueError(f"gradient names do not match parameters: {sorted(set(grads) ^ set(params.tensors))}")
  for name, g in grads.items():
    if g.shape != params[name].shape:
      raise ValueError(f"{name}: gradient shape {g.shape} != parameter shape {params[name].shape}")
    if not np.all(np.isfinite(g)):
      raise NonFiniteError(f"non-finite gradient for {name}")

  moments.step_count += 1
  t = moments.step_count
  for name, g in grads.items():
    m, v = moments.m[name], moments.v[name]
    m *= beta1
    m += (1.0 - beta1)*g
    v *= beta2
    v += (1.0 - beta2)*g*g
    m_hat = m/(1.0 - beta1**t)
    v_hat = v/(1.0 - beta2**t)
    params.tensors[name] -= lr*m_hat/(np.sqrt(v_hat) + eps)

  if not params.is_finite():
    raise NonFiniteError(f"parameters became non-finite at optimizer step {t}")
