"""Exception types shared across the package."""


class DimensionError(ValueError):
    """An argument does not match the dimension of the Lie algebra."""


class RepresentationError(RuntimeError):
    """A matrix left the algebra/group it is supposed to live in."""


class LevelSetError(ValueError):
    """A state does not sit on the requested momentum level set."""

    def __init__(self, residual, tol):
        self.residual = float(residual)
        self.tol = float(tol)
        super().__init__(
            f"momentum residual {self.residual:.3e} exceeds tolerance {self.tol:.3e}"
        )


class IntegrationError(RuntimeError):
    """Integration produced a non-finite state."""

    def __init__(self, step, t):
        self.step = int(step)
        self.t = float(t)
        super().__init__(f"non-finite state at step {self.step} (t={self.t:g})")
