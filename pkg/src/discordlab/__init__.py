"""Classical channel discord and channel distortion for doubly stochastic noise."""

__version__ = "0.1.0"
