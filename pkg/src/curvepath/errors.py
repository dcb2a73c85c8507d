"""Exception taxonomy for curvepath.

Every domain failure raises one of these; the CLI maps them to exit code 1
with a machine-readable JSON body.  Anything else escaping an operation is a
bug, not a domain error.
"""
from __future__ import annotations


class CurvepathError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def detail(self) -> dict:
        return {}

    def payload(self) -> dict:
        return {"error": self.code, "detail": {"message": str(self), **self.detail()}}


class SceneSyntaxError(CurvepathError):
    """Malformed scene document (bad JSON shape, missing field, bad type)."""

    code = "syntax"

    def __init__(self, message: str, position: str = ""):
        super().__init__(message)
        self.position = position

    def detail(self) -> dict:
        return {"position": self.position}


class StructuralError(CurvepathError):
    """A well-formed document that violates a scene invariant."""

    code = "structural"

    def __init__(self, invariant: str, message: str = ""):
        super().__init__(message or invariant)
        self.invariant = invariant

    def detail(self) -> dict:
        return {"invariant": self.invariant}


class UnknownCurve(CurvepathError):
    code = "unknown-curve"

    def __init__(self, name: object):
        super().__init__(f"unknown curve: {name!r}")
        self.name = name


class SameCurve(CurvepathError):
    code = "same-curve"

    def __init__(self, name: object):
        super().__init__(f"operation needs two distinct curves, got {name!r} twice")
        self.name = name


class NotDisjoint(CurvepathError):
    code = "not-disjoint"

    def __init__(self, vertex: int, message: str = ""):
        super().__init__(message or f"curves cross at vertex {vertex}")
        self.vertex = vertex

    def detail(self) -> dict:
        return {"vertex": self.vertex}


class LabelingFailed(CurvepathError):
    """No cyclic labeling exists; carries the violating circuit."""

    code = "labeling-failed"

    def __init__(self, circuit, modulus: int):
        super().__init__(
            f"circuit of oriented length {circuit.oriented_length} "
            f"is nonzero mod {modulus}"
        )
        self.circuit = circuit
        self.modulus = modulus

    def detail(self) -> dict:
        return {
            "modulus": self.modulus,
            "oriented_length": self.circuit.oriented_length,
            "steps": [list(s) for s in self.circuit.steps],
        }


class NotHomologous(CurvepathError):
    code = "not-homologous"

    def __init__(self, circuit=None, message: str = ""):
        super().__init__(message or "curves are not homologous")
        self.circuit = circuit

    def detail(self) -> dict:
        if self.circuit is None:
            return {}
        return {
            "oriented_length": self.circuit.oriented_length,
            "steps": [list(s) for s in self.circuit.steps],
        }


class StaleBigon(CurvepathError):
    code = "stale-bigon"

    def __init__(self, region: int):
        super().__init__(f"bigon handle for region {region} is no longer current")
        self.region = region

    def detail(self) -> dict:
        return {"region": self.region}


class NoBigonRemaining(CurvepathError):
    code = "no-bigon"

    def __init__(self, a: object, b: object, crossings: int):
        super().__init__(
            f"{a!r} and {b!r} still cross {crossings} times but no bigon remains"
        )
        self.crossings = crossings

    def detail(self) -> dict:
        return {"crossings": self.crossings}


class NotACycle(CurvepathError):
    code = "not-a-cycle"

    def __init__(self, pair: tuple, crossings: int):
        super().__init__(
            f"consecutive cycle entries {pair[0]!r}, {pair[1]!r} cross "
            f"{crossings} times (must be disjoint)"
        )
        self.pair = pair
        self.crossings = crossings

    def detail(self) -> dict:
        return {"pair": [str(p) for p in self.pair], "crossings": self.crossings}


class MissingBarycenter(CurvepathError):
    code = "missing-barycenter"

    def __init__(self, side: tuple):
        super().__init__(f"no barycenter supplied for crossing side {side!r}")
        self.side = side

    def detail(self) -> dict:
        return {"side": [str(s) for s in self.side]}


class BadSpec(CurvepathError):
    code = "bad-spec"
