

class PSDError(Exception):
    """Base error. `exit_code` is what the CLI exits with.
    """
    exit_code = 1


class ConfigError(PSDError):

    exit_code = 2

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = 'line %d: %s' % (line, message)
        super().__init__(message)


class DomainError(PSDError, ValueError):
    exit_code = 2


class CacheError(PSDError):
    exit_code = 2


class HypothesisError(PSDError):
    """One or more hypotheses of the theorem fail for an instance.
    """
    exit_code = 3

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__('; '.join(self.failures))


class ConvergenceError(PSDError):
    exit_code = 4


class PrecisionError(PSDError):
    exit_code = 4


class ApproximationError(PSDError):
    exit_code = 4
