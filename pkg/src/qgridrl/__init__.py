"""Quantum-enhanced reinforcement learning for power grid security assessment."""

__version__ = "0.1.0"
