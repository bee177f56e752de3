import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional
import numpy as np
from safetensors import safe_open
from safetensors.numpy import save_file
from nsgzero.helpers import DEBUG
from nsgzero.nets.params import NetParams, NetShape
from nsgzero.nets.optimizer import AdamMoments

FORMAT_VERSION = "1"


class CheckpointError(RuntimeError):
  pass


@dataclass
class Checkpoint:
  params: NetParams
  moments: AdamMoments
  config_digest: str
  # trainer bookkeeping (episode counter, attacker and rng state); opaque to this module
  extra: Dict[str, Any] = field(default_factory=dict)


def save_checkpoint(params: NetParams, moments: AdamMoments, config_digest: str, path: str, extra: Optional[Dict[str, Any]] = None) -> None:
  tensors = {}
  for name, arr in params.items():
    tensors[f"param.{name}"] = np.ascontiguousarray(arr)
    tensors[f"adam_m.{name}"] = np.ascontiguousarray(moments.m[name])
    tensors[f"adam_v.{name}"] = np.ascontiguousarray(moments.v[name])
  metadata = {
    "format_version": FORMAT_VERSION,
    "config_digest": config_digest,
    "step_count": str(moments.step_count),
    "shape": json.dumps(params.shape.to_dict(), sort_keys=True),
    "extra": json.dumps(extra or {}, sort_keys=True),
  }
  os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
  tmp_path = f"{path}.tmp"
  save_file(tensors, tmp_path, metadata=metadata)
  os.replace(tmp_path, path)
  if DEBUG >= 1: print(f"Saved checkpoint {path} (step {moments.step_count})")


def load_checkpoint(path: str, expected_digest: Optional[str] = None, force: bool = False) -> Checkpoint:
  if not os.path.isfile(path):
    raise CheckpointError(f"checkpoint {path} does not exist")
  try:
    with safe_open(path, framework="np") as f:
      metadata = f.metadata() or {}
      tensors = {key: f.get_tensor(key) for key in f.keys()}
  except Exception as e:
    raise CheckpointError(f"checkpoint {path} is corrupt or truncated: {e}") from e

  version = metadata.get("format_version")
  if version != FORMAT_VERSION:
    raise CheckpointError(f"checkpoint {path} has format_version {version!r}, expected {FORMAT_VERSION!r}")
  digest = metadata.get("config_digest", "")
  if expected_digest is not None and digest != expected_digest:
    if not force:
      raise CheckpointError(f"config_digest mismatch: checkpoint has {digest}, game config has {expected_digest}")
    if DEBUG >= 1: print(f"Ignoring config_digest mismatch for {path} (forced)")

  try:
    shape = NetShape(**json.loads(metadata["shape"]))
    params = NetParams(shape, {k[len("param."):]: v for k, v in tensors.items() if k.startswith("param.")})
    moments = AdamMoments(
      {k[len("adam_m."):]: v for k, v in tensors.items() if k.startswith("adam_m.")},
      {k[len("adam_v."):]: v for k, v in tensors.items() if k.startswith("adam_v.")},
      int(metadata["step_count"]),
    )
    extra = json.loads(metadata.get("extra", "{}"))
  except (KeyError, ValueError, TypeError) as e:
    raise CheckpointError(f"checkpoint {path} is malformed: {e}") from e
  if set(moments.m) != set(params.tensors) or set(moments.v) != set(params.tensors):
    raise CheckpointError(f"checkpoint {path} has optimizer moments that do not match its parameters")
  return Checkpoint(params, moments, digest, extra)
