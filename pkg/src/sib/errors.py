"""Exception types raised by the sib package."""


class SibError(Exception):
    """Base class for all sib errors."""


class InvalidInput(SibError, ValueError):
    """Malformed arguments: wrong dimension, non-finite data, bad parameters."""


class EmptyScene(InvalidInput):
    pass


class InvalidScene(InvalidInput):
    pass


class NonConvergence(SibError, ArithmeticError):
    """An iterative oracle hit its iteration cap before reaching tolerance."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class SceneError(InvalidInput):
    """Problem with a scene file. ``index`` is the offending object, if any."""

    def __init__(self, message, index=None, field=None):
        self.index = index
        self.field = field
        where = []
        if index is not None:
            where.append(f"object {index}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class SceneSyntaxError(SceneError):
    pass


class DimensionMismatch(SceneError):
    pass


class InvalidObject(SceneError):
    pass


class UnsupportedDimension(SibError, ValueError):
    pass
