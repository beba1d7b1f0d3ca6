"""Bound-check records shared by the paging, routing and scheduling engines."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

Number = Union[int, float, Fraction]


def format_number(x: Number) -> str:
    """Serialize a number as a string that `parse_number` maps back exactly."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def parse_number(text: str | int | float) -> Number:
    """Inverse of `format_number`.

    ``"3"`` -> int, ``"3/4"`` -> Fraction, anything else -> float
    (including ``"inf"`` and ``"nan"``).
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return text
    s = str(text).strip()
    if "/" in s:
        return Fraction(s)
    try:
        return int(s)
    except ValueError:
        return float(s)


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``num/den`` or a decimal string exactly (``"0.1"`` -> 1/10)."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("pass rationals as strings to keep them exact")
    return Fraction(str(text).strip())


@dataclass(frozen=True)
class VerificationReport:
    """One bound check: ``passed`` iff ``left <= right + slack``."""

    claim: str
    left: Number
    right: Number
    slack: Number = 0
    context: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.left <= self.right + self.slack

    @property
    def margin(self) -> Number:
        return self.right + self.slack - self.left

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim": self.claim,
            "left": format_number(self.left),
            "right": format_number(self.right),
            "slack": format_number(self.slack),
            "passed": self.passed,
            "context": self.context,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> VerificationReport:
        report = cls(
            claim=d["claim"],
            left=parse_number(d["left"]),
            right=parse_number(d["right"]),
            slack=parse_number(d["slack"]),
            context=dict(d.get("context", {})),
        )
        if "passed" in d and bool(d["passed"]) != report.passed:
            raise ValueError("stored pass flag disagrees with left/right/slack")
        return report

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.claim}: {format_number(self.left)} <= "
            f"{format_number(self.right)} + {format_number(self.slack)}"
        )
