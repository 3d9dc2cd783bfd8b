"""Exception hierarchy.  Vertex labels in messages are 1-based."""


class MWTreeError(Exception):
    """Base class for every error raised by this package."""


# tree validation

class TreeError(MWTreeError, ValueError):
    pass


class NotATree(TreeError):
    pass


class BadLabels(TreeError):
    pass


class BadWeightShape(TreeError):
    pass


class NotPositiveDefinite(TreeError):
    def __init__(self, edge, reason):
        self.edge = edge
        super().__init__(f"weight of edge {edge + 1} is not positive definite: {reason}")


class VertexOutOfRange(TreeError, IndexError):
    pass


class NTooSmall(TreeError):
    pass


# dense linear algebra

class LinAlgError(MWTreeError, ArithmeticError):
    pass


class NonSquare(LinAlgError):
    pass


class NonFinite(LinAlgError, ValueError):
    pass


class ShapeMismatch(LinAlgError, ValueError):
    pass


class Singular(LinAlgError):
    pass


class IllConditioned(LinAlgError):
    def __init__(self, cond, limit):
        self.cond = cond
        super().__init__(f"condition estimate {cond:.3e} exceeds limit {limit:.1e}")


# closed forms

class Degree2Present(MWTreeError):
    def __init__(self, vertices):
        self.vertices = tuple(vertices)
        labels = ", ".join(str(v + 1) for v in self.vertices)
        super().__init__(f"tree has vertices of degree 2 ({labels}); tau-hat is undefined")


class BetaSingular(LinAlgError):
    pass


# file input

class ParseError(MWTreeError, ValueError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
