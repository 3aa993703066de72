"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid scenario configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config error at '{key}': {message}")


class PhysicalityError(RuntimeError):
    """A Gaussian state stopped satisfying the Heisenberg condition."""

    def __init__(self, time: float, detail: str = ""):
        self.time = time
        msg = f"state physicality violated at t = {time:.6e} s"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
