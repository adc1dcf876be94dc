"""Exception hierarchy; each class carries the CLI exit status it maps to."""


class HeleShawError(Exception):
    exit_status = 1


class ConfigError(HeleShawError):
    """Invalid run configuration or integrator setting."""

    exit_status = 2

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SolverError(HeleShawError):
    """Dirichlet collocation failed (ill-conditioned or residual too large)."""

    exit_status = 3


class GeometryError(HeleShawError):
    """Boundary left the star-shaped regime or the run blew up."""

    exit_status = 4


class OutputError(HeleShawError):
    exit_status = 5
