"""Delay and energy of task offloading to UAV cloudlets versus a central cloud."""

from .model import (
    ComputePlatform,
    CostBreakdown,
    Crossover,
    NetworkPath,
    Task,
    ValidationError,
    cloud_delay,
    cloud_energy,
    crossover_cycles,
    edge_delay,
    edge_energy,
)

__version__ = "0.1.0"

__all__ = [
    "ComputePlatform", "CostBreakdown", "Crossover", "NetworkPath", "Task", "ValidationError",
    "cloud_delay", "cloud_energy", "crossover_cycles", "edge_delay", "edge_energy",
]
