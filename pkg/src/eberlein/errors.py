"""Exception types shared across the package."""


class SupportError(IndexError):
    """A computation needs samples outside the range a sequence covers.

    ``required`` and ``available`` are closed integer intervals ``(lo, hi)``.
    """

    def __init__(self, required, available, what="sequence"):
        self.required = (int(required[0]), int(required[1]))
        self.available = (int(available[0]), int(available[1]))
        missing = []
        if self.required[0] < self.available[0]:
            missing.append((self.required[0], min(self.available[0] - 1, self.required[1])))
        if self.required[1] > self.available[1]:
            missing.append((max(self.available[1] + 1, self.required[0]), self.required[1]))
        self.missing = missing
        gaps = ", ".join(f"[{a}, {b}]" for a, b in missing)
        super().__init__(
            f"{what} covers [{self.available[0]}, {self.available[1]}] but "
            f"[{self.required[0]}, {self.required[1]}] is required; missing {gaps}"
        )


class ExhaustedError(LookupError):
    """No convergent subsequence could be found within the stored windows."""


class NotPositiveDefiniteError(ValueError):
    """A lag sequence fails the positive-definiteness test beyond tolerance."""

    def __init__(self, min_value, tolerance):
        self.min_value = float(min_value)
        self.tolerance = float(tolerance)
        super().__init__(
            f"lag sequence is not positive definite: minimum quadratic form "
            f"{self.min_value:.3e} < -{self.tolerance:.3e}"
        )
