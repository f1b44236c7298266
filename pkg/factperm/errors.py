from typing import Any, Tuple


class FactpermError(Exception):
    """
    Base error for every construction and validator
    `detail` is the message, `witness` the offending ids
    """
    def __init__(self, detail: str, witness: Tuple[Any, ...] = ()):
        super().__init__(detail)
        self.detail = detail
        self.witness = tuple(witness)

    def __str__(self):
        if self.witness:
            return f"{self.detail} (witness: {self.witness})"
        return self.detail


class CategoryError(FactpermError):
    pass


class RelCatError(FactpermError):
    pass


class PermutativeError(FactpermError):
    pass


class CoherenceError(FactpermError):
    pass


class BoundError(FactpermError):
    pass


class FixtureError(FactpermError):
    pass


class ExportError(FactpermError):
    pass
