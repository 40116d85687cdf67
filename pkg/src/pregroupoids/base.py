"""Shared primitives: label carriers, violation reports, error types.

Everything in this package works over finite carriers of string labels.
The element order of a carrier is canonical: iteration, representative
picking and report ordering all follow it, so identical inputs always
produce identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class StructureError(ValueError):
    """The raw data cannot be assembled: dangling label, non-total map, empty carrier."""


class BookkeepingError(ValueError):
    """A partial operation was applied outside its domain of definition."""


class NotGood(ValueError):
    """The given quadrangle is not a good one."""


class NotTransitive(ValueError):
    """The groupoid fails the connectivity needed for surjective structure maps."""


class SubsetError(ValueError):
    """A subset argument contains labels the structure does not know."""


class NotFree(ValueError):
    """Two distinct arrows move some point to the same point."""


class NotNatural(ValueError):
    """The candidate transformation fails a naturality square."""


class EquationViolation(ValueError):
    """An encoded 2-cell breaks one of its defining equations."""


class SizeMismatch(ValueError):
    """Generator size arguments are inconsistent."""


class ValidationFailed(ValueError):
    """An operation needed a law-abiding input and validation found violations."""

    def __init__(self, what: str, report: "ValidationReport"):
        self.report = report
        lines = report.lines()
        shown = "; ".join(lines[:3])
        more = "" if len(lines) <= 3 else f" (+{len(lines) - 3} more)"
        super().__init__(f"{what}: {shown}{more}")


class FiniteSet:
    """An ordered set of distinct string labels."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[str]):
        elems = tuple(elements)
        index: dict[str, int] = {}
        for i, e in enumerate(elems):
            if not isinstance(e, str):
                raise StructureError(f"labels must be strings, got {e!r}")
            if e in index:
                raise StructureError(f"duplicate label {e!r}")
            index[e] = i
        self.elements = elems
        self._index = index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructureError(f"unknown label {label!r}") from None

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"FiniteSet({list(self.elements)!r})"


@dataclass(frozen=True)
class Violation:
    """One failed clause together with the witnessing labels."""

    clause: str
    witness: tuple

    def __str__(self) -> str:
        if not self.witness:
            return self.clause
        return f"{self.clause} @ ({', '.join(map(repr, self.witness))})"


class ValidationReport:
    """Accumulates (clause, witness) violations, capped to stay readable.

    `total` counts every violation found; `entries` keeps at most `cap` of
    them, in discovery order.
    """

    def __init__(self, cap: int = 100):
        self.cap = cap
        self.entries: list[Violation] = []
        self.total = 0

    def add(self, clause: str, *witness: object) -> None:
        self.total += 1
        if len(self.entries) < self.cap:
            self.entries.append(Violation(clause, tuple(witness)))

    def extend(self, other: "ValidationReport") -> None:
        for v in other.entries:
            if len(self.entries) < self.cap:
                self.entries.append(v)
        self.total += other.total

    @property
    def ok(self) -> bool:
        return self.total == 0

    def lines(self) -> list[str]:
        out = [str(v) for v in self.entries]
        if self.total > len(self.entries):
            out.append(f"... and {self.total - len(self.entries)} more")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines()) if self.total else "OK"

    def __repr__(self) -> str:
        return f"<ValidationReport total={self.total}>"


def require_valid(report: ValidationReport, what: str) -> None:
    """Raise ValidationFailed carrying `report` unless it is clean."""
    if not report.ok:
        raise ValidationFailed(what, report)
