import unittest
from typing import Any
from nsgzero.helpers import CallbackSystem


class TestCallbackSystem(unittest.TestCase):
  def setUp(self):
    self.callback_system = CallbackSystem[str, Any]()
    self.received = []

  def test_trigger_all_reaches_every_observer(self):
    self.callback_system.register("callback1").on_next(lambda *args: self.received.append(("callback1", args)))
    self.callback_system.register("callback2").on_next(lambda *args: self.received.append(("callback2", args)))

    self.callback_system.trigger_all("Hello", 42, True)

    self.assertEqual(self.received, [("callback1", ("Hello", 42, True)), ("callback2", ("Hello", 42, True))])

  def test_trigger_single(self):
    self.callback_system.register("callback1").on_next(lambda *args: self.received.append(("callback1", args)))
    self.callback_system.register("callback2").on_next(lambda *args: self.received.append(("callback2", args)))

    self.callback_system.trigger("callback2", "World", -10, False)

    self.assertEqual(self.received, [("callback2", ("World", -10, False))])
    self.assertEqual(self.callback_system.callbacks["callback2"].result, ("World", -10, False))

  def test_deregister(self):
    self.callback_system.register("gone").on_next(lambda *args: self.received.append(args))
    self.callback_system.deregister("gone")
    self.callback_system.trigger_all(1)
    self.assertEqual(self.received, [])


if __name__ == "__main__":
  unittest.main()
