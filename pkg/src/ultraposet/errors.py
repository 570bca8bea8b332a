"""Exception hierarchy shared by every module."""


class UltraposetError(Exception):
    """Base class for all toolkit errors."""


class AntisymmetryViolation(UltraposetError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("order closure is not antisymmetric: cycle " + " <= ".join(self.cycle))


class DuplicateLabel(UltraposetError):
    pass


class UnknownElement(UltraposetError):
    pass


class ArityCarrierMismatch(UltraposetError):
    pass


class CapExceeded(UltraposetError):
    pass


class PositionOutOfRange(UltraposetError):
    pass


class PreconditionFailed(UltraposetError):
    pass


# fol
class FormulaSyntaxError(UltraposetError):
    def __init__(self, position, expected, found):
        self.position = position
        self.expected = tuple(expected)
        self.found = found
        super().__init__(
            f"syntax error at position {position}: expected {' or '.join(self.expected)}, found {found}"
        )


class UnknownSymbol(UltraposetError):
    pass


class ArityMismatch(UltraposetError):
    pass


class UnboundName(UltraposetError):
    pass


class SignatureMismatch(UltraposetError):
    pass


# product
class EmptyGenerator(UltraposetError):
    pass


class OutOfRangeIndex(UltraposetError):
    pass


# complex
class NotAtomic(UltraposetError):
    pass


# gen
class SizeOutOfRange(UltraposetError):
    pass


class NotDownsetLattice(UltraposetError):
    pass


class ConfigOutOfRange(UltraposetError):
    pass


# file format / cli
class ParseError(UltraposetError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ValidationError(UltraposetError):
    pass


class StructureIOError(UltraposetError):
    pass


class UsageError(UltraposetError):
    pass
