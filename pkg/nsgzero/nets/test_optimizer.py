import unittest
import numpy as np
from nsgzero.helpers import make_rng
from nsgzero.nets.params import NetParams, NetShape, NonFiniteError
from nsgzero.nets.optimizer import AdamMoments, optimizer_step, DEFAULT_LR


class TestOptimizerStep(unittest.TestCase):
  def setUp(self):
    self.params = NetParams.init(NetShape(node_count=5, horizon=3, embed_dim=2, state_dim=3, hidden_dim=3), make_rng(0))
    self.moments = AdamMoments.zeros(self.params)

  def constant_grads(self, value):
    return {name: np.full_like(arr, value) for name, arr in self.params.tensors.items()}

  def test_zero_gradients_leave_params_unchanged(self):
    before = self.params.copy()
    optimizer_step(self.params, self.params.zeros_like(), self.moments)
    self.assertTrue(self.params.equals(before))
    self.assertEqual(self.moments.step_count, 1)

  def test_first_step_magnitude(self):
    before = self.params.copy()
    grads = self.constant_grads(0.5)
    grads["embedding"][:] = -2.0
    optimizer_step(self.params, grads, self.moments)
    for name, arr in self.params.items():
      delta = arr - before[name]
      np.testing.assert_allclose(delta, -DEFAULT_LR*np.sign(grads[name]), rtol=1e-6)

  def test_constant_gradient_descends(self):
    before = self.params.copy()
    grads = self.constant_grads(0.1)
    for _ in range(50):
      optimizer_step(self.params, grads, self.moments, lr=1e-2)
    for name, arr in self.params.items():
      self.assertTrue(np.all(arr < before[name]), name)
    self.assertEqual(self.moments.step_count, 50)

  def test_rejects_non_finite_gradient(self):
    before = self.params.copy()
    grads = self.params.zeros_like()
    grads["value.head.b"][0] = np.nan
    with self.assertRaises(NonFiniteError):
      optimizer_step(self.params, grads, self.moments)
    self.assertTrue(self.params.equals(before))
    self.assertEqual(self.moments.step_count, 0)

  def test_rejects_shape_mismatch(self):
    grads = self.params.zeros_like()
    grads["embedding"] = np.zeros((1, 1))
    with self.assertRaises(ValueError):
      optimizer_step(self.params, grads, self.moments)
    del grads["embedding"]
    with self.assertRaises(ValueError):
      optimizer_step(self.params, grads, self.moments)
