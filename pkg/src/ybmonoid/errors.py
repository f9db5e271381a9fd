class YBMonoidError(Exception):
    """Base class for all errors raised by ybmonoid."""


class InputError(YBMonoidError):
    """Malformed input (bad table, bad file)."""


class OutOfRangeEntry(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class NotASolution(YBMonoidError):
    pass


class NotLeftNondegenerate(YBMonoidError):
    pass


class SearchSpaceTooLarge(YBMonoidError):
    pass


class DegreeTooLarge(YBMonoidError):
    pass


class DegreeOutOfRange(YBMonoidError):
    pass


class ViewMismatch(YBMonoidError):
    pass


class BudgetMismatch(YBMonoidError):
    pass


class WellDefinednessFailure(YBMonoidError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoWitness(YBMonoidError):
    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class MultipleWitnesses(YBMonoidError):
    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)
