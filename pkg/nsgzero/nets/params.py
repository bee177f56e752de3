from dataclasses import dataclass, asdict
from typing import Dict, Iterator, Tuple
import numpy as np

ENCODED_NETS = ("prior", "dynamics", "value")
SCORING_NETS = ("prior", "dynamics")


class NonFiniteError(ValueError):
  pass


@dataclass(frozen=True)
class NetShape:
  node_count: int
  horizon: int
  embed_dim: int = 32
  state_dim: int = 64
  hidden_dim: int = 64

  def input_dim(self, net: str) -> int:
    # attacker_current, attacker_history, [ego_resource,] others_pooled, time_frac
    slots = 4 if net == "prior" else 3
    return slots*self.embed_dim + 1

  def to_dict(self) -> dict:
    return asdict(self)


def tensor_shapes(shape: NetShape) -> Dict[str, Tuple[int, ...]]:
  d, ds, h = shape.embed_dim, shape.state_dim, shape.hidden_dim
  shapes = {"embedding": (shape.node_count, d)}
  for net in ENCODED_NETS:
    shapes[f"{net}.state.w1"] = (shape.input_dim(net), h)
    shapes[f"{net}.state.b1"] = (h, )
    shapes[f"{net}.state.w2"] = (h, ds)
    shapes[f"{net}.state.b2"] = (ds, )
  for net in SCORING_NETS:
    shapes[f"{net}.action.w"] = (d, ds)
    shapes[f"{net}.action.b"] = (ds, )
  shapes["value.head.w"] = (ds, )
  shapes["value.head.b"] = (1, )
  return shapes


class NetParams:
  """
  Every learnable tensor of the prior, value and dynamics networks, keyed by name.
  One node embedding table is shared by all three; the prior network is a single
  instance shared by every resource.
  """
  def __init__(self, shape: NetShape, tensors: Dict[str, np.ndarray]):
    expected = tensor_shapes(shape)
    if set(tensors) != set(expected):
      raise ValueError(f"tensor names mismatch: missing {sorted(set(expected) - set(tensors))}, unexpected {sorted(set(tensors) - set(expected))}")
    for name, arr in tensors.items():
      if arr.shape != expected[name]:
        raise ValueError(f"{name}: shape {arr.shape} != expected {expected[name]}")
    self.shape = shape
    self.tensors = {name: np.asarray(arr, dtype=np.float64) for name, arr in tensors.items()}

  @classmethod
  def init(cls, shape: NetShape, rng: np.random.Generator) -> "NetParams":
    tensors = {}
    for name, tensor_shape in tensor_shapes(shape).items():
      if name == "embedding":
        tensors[name] = rng.normal(0.0, 0.01, size=tensor_shape)
      elif name.endswith(".w") or name.endswith(".w1") or name.endswith(".w2"):
        bound = 1.0/np.sqrt(tensor_shape[0])
        tensors[name] = rng.uniform(-bound, bound, size=tensor_shape)
      else:
        tensors[name] = np.zeros(tensor_shape)
    return cls(shape, tensors)

  def __getitem__(self, name: str) -> np.ndarray:
    return self.tensors[name]

  def items(self) -> Iterator[Tuple[str, np.ndarray]]:
    return iter(sorted(self.tensors.items()))

  def zeros_like(self) -> Dict[str, np.ndarray]:
    return {name: np.zeros_like(arr) for name, arr in self.tensors.items()}

  def copy(self) -> "NetParams":
    return NetParams(self.shape, {name: arr.copy() for name, arr in self.tensors.items()})

  def is_finite(self) -> bool:
    return all(np.all(np.isfinite(arr)) for arr in self.tensors.values())

  def equals(self, other: "NetParams") -> bool:
    return self.shape == other.shape and all(np.array_equal(arr, other.tensors[name]) for name, arr in self.tensors.items())

  def num_parameters(self) -> int:
    return sum(arr.size for arr in self.tensors.values())
