"""Exception hierarchy shared by all tempcomm modules."""


class TempCommError(ValueError):
    pass


class ParseError(TempCommError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidIntervalError(TempCommError):
    pass


class EmptySnapshotError(TempCommError):
    pass


class UndefinedModularityError(TempCommError):
    pass


class IncompletePartitionError(TempCommError):
    pass


class CannotRewireError(TempCommError):
    pass


class NodeSetMismatchError(TempCommError):
    pass


class EmptyIntersectionError(TempCommError):
    pass


class InvalidConfigError(TempCommError):
    pass
