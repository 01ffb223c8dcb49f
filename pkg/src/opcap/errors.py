"""Exception hierarchy shared by every layer of the simulator."""


class OpcapError(Exception):
    """Base class for all errors raised by opcap."""


class CapExceeded(OpcapError):
    """A learner tried to spend more binary operations than the round allows."""

    def __init__(self, cap, attempted):
        super().__init__(f"operation cap {cap} exceeded (attempted op #{attempted})")
        self.cap = cap
        self.attempted = attempted


class SealedMeter(OpcapError):
    """Arithmetic was attempted after the learner committed to an answer."""


class DivisionByZero(OpcapError, ZeroDivisionError):
    pass


class DomainError(OpcapError, ValueError):
    """Unary operation applied outside its domain (sqrt of a negative, ln of 0)."""


class InexactUnary(OpcapError, ArithmeticError):
    """sqrt/exp/ln requested in exact mode on an input with an irrational result."""


class ParseError(OpcapError):
    def __init__(self, line_no, msg):
        super().__init__(f"line {line_no}: {msg}")
        self.line_no = line_no


class ValidationError(OpcapError, ValueError):
    pass


class DomainMismatch(OpcapError, TypeError):
    """An input that does not belong to the family's domain."""


class UnsupportedConstraintPattern(OpcapError):
    pass


class ExhaustedFamily(OpcapError):
    """No member of the family is consistent with the feedback received."""


class NoActiveCopies(OpcapError):
    """A voting meta-learner lost every copy (the adversary was inconsistent)."""


class AdversaryInconsistent(OpcapError):
    pass


class BudgetExceeded(OpcapError, ValueError):
    """A lie schedule is longer than the lie budget."""


class ConfigError(OpcapError, ValueError):
    def __init__(self, path, msg):
        super().__init__(f"{path}: {msg}")
        self.path = path
