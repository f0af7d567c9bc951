"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to, so the front end never
needs a lookup table of its own.
"""


class KernelError(Exception):
    exit_code = 2


class ParseError(KernelError):
    exit_code = 3


class SystemViolation(KernelError):
    """A formula or primitive that the chosen system does not admit."""


class ProvisoViolation(KernelError):
    """A variable side condition of a primitive or derived arrow fails."""


class UndefinedSubstitution(KernelError):
    """A renaming whose endpoint substitution is undefined."""


class TypeMismatch(KernelError):
    """Composition or schema sides whose formulas do not line up."""


class ProfileMismatch(KernelError):
    """Graphs composed over middle profiles that disagree."""


class PreconditionError(KernelError):
    exit_code = 4


class NotVariablePure(PreconditionError):
    pass


class HasCut(PreconditionError):
    pass


class NotDiversified(PreconditionError):
    pass


class TargetShapeMismatch(PreconditionError):
    pass


class NoMatch(KernelError):
    """A rewrite step whose schema does not apply at the chosen address."""
