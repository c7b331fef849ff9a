"""Exception hierarchy for leobf."""


class GeometryError(ValueError):
    """Satellite/ground geometry outside the modelled domain."""


class BelowHorizonError(GeometryError):
    pass


class DegenerateGeometryError(GeometryError):
    """Heading parallel to propagation; polarization is undefined."""


class UnderResolvedError(ValueError):
    """Quadrature has fewer samples per carrier period than required."""


class NoFringeError(ValueError):
    """Map has no detectable periodic striping."""


class ConfigError(ValueError):
    """Malformed or invalid configuration document.

    ``problems`` lists every violated field, not just the first one.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
