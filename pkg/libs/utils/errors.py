# libs/utils/errors.py
"""Exception types shared by the planner, the simulator and the CLI."""


class ContractError(ValueError):
    """A caller broke an operation's precondition or a type invariant."""


class ConfigError(ContractError):
    """A configuration key is unknown, mistyped or out of range.

    ``path`` is the dotted key path (list items as ``[i]``) and ``expected``
    describes the accepted values, so the CLI can report both verbatim.
    """

    def __init__(self, path, message, expected=None):
        self.path = path
        self.expected = expected
        text = f"{path}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


class DemodulationError(RuntimeError):
    """The OFDM receiver could not recover the frame."""
