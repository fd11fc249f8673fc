"""Exception hierarchy shared by every atlab module."""


class AtlabError(Exception):
    """Base class for all errors raised by atlab."""


class GraphError(AtlabError, ValueError):
    pass


class MalformedGraph(GraphError):
    """Loops, parallel edges, unknown endpoints or duplicate ids."""


class MalformedRotation(GraphError):
    pass


class NonPlanarEmbedding(GraphError):
    """The rotation system does not describe a plane embedding (Euler check)."""


class DisconnectedWhenPlanarOpsRequested(GraphError):
    pass


class FaceIsOuter(GraphError):
    pass


class DualPathConflict(GraphError):
    """Registered dual paths cannot be made pairwise edge-disjoint."""


class CornerVertexNotOnNewBoundary(GraphError):
    pass


class NotPlanar(GraphError):
    """A planar-only operation was requested on a graph without embedding."""


class InverseUndefined(AtlabError, ValueError):
    pass


class TooLarge(AtlabError, ValueError):
    pass


class SpecInvalid(AtlabError, ValueError):
    pass


class PreconditionViolated(AtlabError, ValueError):
    pass


class NotOnBoundary(SpecInvalid):
    pass


class SetsNotDisjoint(SpecInvalid):
    pass


class PatternMismatch(AtlabError, ValueError):
    pass


class OddDimension(AtlabError, ValueError):
    pass


class NotSquare(AtlabError, ValueError):
    pass


class RegionViolation(AtlabError, ValueError):
    pass


class NotASeparator(AtlabError, ValueError):
    pass


class OddSet(AtlabError, ValueError):
    pass
