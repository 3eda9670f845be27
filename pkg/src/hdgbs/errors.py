"""Exception types shared across the package.

Contract violations (bad arguments, broken invariants) and resource-guard
trips are kept distinct so the command line front end can map them to
different exit codes.
"""


class ContractViolationError(ValueError):
    """An input violates a documented precondition or invariant."""


class ResourceLimitError(RuntimeError):
    """A computation was refused because it exceeds a configured guard."""
