"""
Exception hierarchy for the algebra core
"""

from typing import Any, Optional


class EpilabError(Exception):
    """Base class for every error raised by epilab"""


class MalformedElementError(EpilabError, ValueError):
    """Coordinates that do not describe an element of the given group"""


class RingAxiomError(EpilabError, ValueError):
    """Structure constants that fail a ring or module axiom"""

    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        super().__init__(f"{axiom} axiom fails" + (f": {detail}" if detail else ""))


class RingConstructionError(EpilabError, ValueError):
    """A ring description that does not yield a finite ring"""


class MapValidationError(EpilabError, ValueError):
    """Generator images that do not define a unital ring homomorphism"""

    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        super().__init__(f"not {axiom}" + (f": {detail}" if detail else ""))


class PreconditionError(EpilabError, ValueError):
    """Inputs outside the class of maps an operation is defined on"""


class VariableMismatchError(EpilabError, ValueError):
    """Polynomials over different rings or variable lists"""


class EmptyInputError(EpilabError, ValueError):
    """An operation that needs at least one input received none"""


class SpecFormatError(EpilabError, ValueError):
    """A ring, map or polynomial description that cannot be parsed"""


class UnknownSuiteError(EpilabError, ValueError):
    """A verification suite name that is not registered"""


class CapExceededError(EpilabError):
    """A computation refused because its input is above a configured cap"""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class WitnessError(EpilabError):
    """An error carrying the ring element that proves it"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        self.witness = witness
        super().__init__(message)


class NotFaithfulError(WitnessError):
    """The generated ideal has a nonzero common annihilator"""


class NotInvertibleError(WitnessError):
    """A fraction whose numerator is a zero-divisor"""


class NotInKernelError(WitnessError):
    """A polynomial that does not vanish at the evaluation point"""


class ExtensionShapeViolatedError(WitnessError):
    """Generators that cannot generate an extended ideal I[x]"""


class ConditionDisagreementError(EpilabError, AssertionError):
    """Two characterizations that must agree returned different verdicts"""
