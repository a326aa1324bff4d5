# app/errors.py


class LabError(Exception):
    """Basis semua error yang dilempar oleh services."""


class ModelInputError(LabError, ValueError):
    """Input tidak bisa dipakai: label tidak dikenal, parameter di luar range, data kurang."""


class UnknownLabelError(ModelInputError):
    pass


class ParameterRangeError(ModelInputError):
    pass


class InsufficientDataError(ModelInputError):
    pass


class OrbitTruncationError(ModelInputError):
    pass


class EnumerationGuardError(ModelInputError):
    pass


class RibbonDataRequiredError(ModelInputError):
    pass


class NotLiftingError(ModelInputError):
    pass


class PropertyViolation(LabError, RuntimeError):
    """Identitas matematis gagal pada data yang diberikan."""
