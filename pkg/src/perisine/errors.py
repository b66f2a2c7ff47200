"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid configuration value or inconsistent experiment setup."""


class DivergenceError(RuntimeError):
    """Time integration produced NaN/Inf. Carries the failing step index."""

    def __init__(self, step: int, t: float):
        self.step = step
        self.t = t
        super().__init__(f"solution diverged (NaN/Inf) at step {step}, t = {t:.6g}")
