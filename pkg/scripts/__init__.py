"""cubicflow: exactly solvable homogeneous cubic ODE systems in two variables."""

__version__ = "1.0.0"
