"""Exception types raised by :mod:`tproduct`."""


class TensorError(Exception):
    """Base class for domain errors in this package."""


class DimensionMismatchError(TensorError, ValueError):
    """Operand shapes are not conformable."""


class NotSquareError(TensorError, ValueError):
    """An operation that needs square frontal slices got rectangular ones."""


class SingularTensorError(TensorError):
    """A tensor (equivalently its block circulant matrix) is singular.

    ``face_index`` is the transformed face with the smallest singular value
    and ``sigma_min`` that singular value.
    """

    def __init__(self, msg, face_index, sigma_min):
        super().__init__(msg)
        self.face_index = face_index
        self.sigma_min = sigma_min


class NotNormalError(TensorError):
    """Raised when a tensor fails the normality test; carries the residual."""

    def __init__(self, msg, residual):
        super().__init__(msg)
        self.residual = residual


class NotHermitianError(TensorError):
    pass


class NotFDiagonalizableError(TensorError):
    """``P^{-1} * A * P`` is not F-diagonal within tolerance."""

    def __init__(self, msg, residual):
        super().__init__(msg)
        self.residual = residual


class NonRealCoefficientError(TensorError):
    pass


class FaceError(TensorError):
    """A per-face operation failed; ``face_index`` says where."""

    def __init__(self, msg, face_index):
        super().__init__(msg)
        self.face_index = face_index


class InvalidRegionError(TensorError, ValueError):
    pass


class UnknownExampleError(TensorError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class MalformedFileError(TensorError):
    """A tensor file could not be parsed.

    ``line`` is 1-based (``None`` when the problem is not tied to a line) and
    ``field`` names the offending key when known.
    """

    def __init__(self, msg, line=None, field=None):
        where = []
        if line is not None:
            where.append("line %d" % line)
        if field is not None:
            where.append("field %r" % field)
        if where:
            msg = "%s: %s" % (", ".join(where), msg)
        super().__init__(msg)
        self.line = line
        self.field = field
