class VortexError(Exception):
    pass


class NumericalDomainError(VortexError, ValueError):
    pass


class SpecialFunctionDomainError(NumericalDomainError):
    pass


class SingularPointError(NumericalDomainError):
    pass


class UnsupportedParaxialEntry(NumericalDomainError):
    pass


class ActionNotFound(VortexError):
    pass


class ConfigurationValidationError(VortexError):
    pass


class VerificationFailed(VortexError):
    pass
