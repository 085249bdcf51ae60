class CryptDfaError(Exception):
    def __init__(self, message):
        super().__init__(message)


class ConfigurationMalformedError(CryptDfaError):
    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class PuzzleParseError(CryptDfaError):
    def __init__(self, message, position):
        super().__init__(message)
        self.position = position


class MalformedSequence(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class TooManyLetters(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class BaseTooSmall(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class BudgetExceeded(CryptDfaError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ResourceLimit(CryptDfaError):
    def __init__(self, message, n_states):
        super().__init__(message)
        self.n_states = n_states


class BuildInterrupted(CryptDfaError):
    def __init__(self, message, n_states):
        super().__init__(message)
        self.n_states = n_states


class NotCanonical(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class WrongAlphabet(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class NotAccepted(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class IndexOutOfRange(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class PayloadUnavailable(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class IoFailure(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class FormatError(CryptDfaError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class VersionUnsupported(CryptDfaError):
    def __init__(self, message, version=None):
        super().__init__(message)
        self.version = version


class TooLarge(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)


class AutomatonUnavailable(CryptDfaError):
    def __init__(self, message):
        super().__init__(message)
