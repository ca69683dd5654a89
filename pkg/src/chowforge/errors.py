"""Exception hierarchy. Every error carries a machine-readable ``code``."""


class ChowForgeError(Exception):
    code = "ERROR"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"code": self.code, "message": str(self)}
        out.update(self.details)
        return out


class ParseError(ChowForgeError, ValueError):
    code = "PARSE"


class CapacityError(ChowForgeError):
    code = "CAPACITY"


class NotAFlatError(ChowForgeError, ValueError):
    code = "NOT_A_FLAT"


class RankError(ChowForgeError, ValueError):
    code = "RANK"


class PreconditionError(ChowForgeError, ValueError):
    code = "INFEASIBLE_PRECONDITION"


class LoopError(ChowForgeError, ValueError):
    code = "PARSE"
