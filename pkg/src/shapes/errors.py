"""Exceptions shared across the package."""


class InternalConsistencyError(RuntimeError):
    """An exact identity the implementation relies on failed to hold.

    Raised e.g. when an exact division leaves a remainder, a recursion
    produces a non-integer coefficient, or a complement dimension does not
    match the shape polynomial.  Always indicates a bug or corrupt input,
    never a recoverable condition.
    """


class StateCapExceeded(RuntimeError):
    """A level would contain more basis states than the configured cap."""

    def __init__(self, grade, count, cap):
        super().__init__(
            f"level at grade {grade} has {count} states, exceeding the cap of {cap}"
        )
        self.grade = grade
        self.count = count
        self.cap = cap
