"""Real functions ``f(n)`` that deform the oscillator ladder operators."""
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ValidationError

TAGS = ("unit", "shift1", "shift2", "custom")


def _unit(n: int) -> float:
    return 1.0


def _shift1(n: int) -> float:
    return math.sqrt(n - 1) / math.sqrt(n)


def _shift2(n: int) -> float:
    return (n - 2) * math.sqrt(n - 1) / math.sqrt(n)


@dataclass(frozen=True)
class LadderFunction:
    """A tagged ladder deformation ``f``, evaluated on positive integers only.

    ``f(0)`` never enters any ladder action (it always multiplies
    ``sqrt(0)``), so evaluation at ``n < 1`` is rejected.
    """

    tag: str
    evaluator: Callable[[int], float] = field(compare=False)
    name: str = ""

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValidationError(f"unknown ladder function tag {self.tag!r}")

    def __call__(self, n: int) -> float:
        if n < 1:
            raise ValidationError(f"ladder function evaluated at n={n} < 1")
        value = float(self.evaluator(int(n)))
        if not math.isfinite(value):
            raise ValidationError(f"f({n}) = {value} is not finite")
        return value

    def values(self, nmax: int) -> np.ndarray:
        """Array ``v`` with ``v[n] = f(n)`` for ``1 <= n <= nmax`` and ``v[0] = 0``."""
        out = np.zeros(nmax + 1)
        for n in range(1, nmax + 1):
            out[n] = self(n)
        return out

    @classmethod
    def unit(cls) -> "LadderFunction":
        return cls("unit", _unit, "f(n) = 1")

    @classmethod
    def shift1(cls) -> "LadderFunction":
        return cls("shift1", _shift1, "f(n) = sqrt(n-1)/sqrt(n)")

    @classmethod
    def shift2(cls) -> "LadderFunction":
        return cls("shift2", _shift2, "f(n) = (n-2) sqrt(n-1)/sqrt(n)")

    @classmethod
    def custom(cls, fn: Callable[[int], float], name: str = "custom") -> "LadderFunction":
        return cls("custom", fn, name)

    @classmethod
    def from_tag(cls, tag: str) -> "LadderFunction":
        try:
            return {"unit": cls.unit, "shift1": cls.shift1, "shift2": cls.shift2}[tag]()
        except KeyError:
            raise ValidationError(
                f"ladder function tag must be one of unit, shift1, shift2; got {tag!r}"
            ) from None


def generalized_factorial(q: Callable[[int], float], s: int) -> float:
    """``[q(s)]! = q(1) q(2) ... q(s)``, with ``[q(0)]! = 1``."""
    if s < 0:
        raise ValidationError("generalized factorial needs s >= 0")
    value = 1.0
    for j in range(1, s + 1):
        value *= q(j)
    return value
