"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class NumsymError(Exception):
    exit_code = 2


class InputError(NumsymError, ValueError):
    """Malformed poset text, partition, ideal/measure string or depth request."""
    exit_code = 2


class CycleError(InputError):
    pass


class MinimumError(InputError):
    pass


class DanglingIdError(InputError):
    pass


class PropertyViolation(NumsymError):
    """A checked mathematical property failed (e.g. a generator relation)."""
    exit_code = 1


class PathSetTooLarge(NumsymError):
    exit_code = 3
