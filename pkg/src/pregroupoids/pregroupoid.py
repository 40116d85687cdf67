"""Finite pregroupoids: spans A <- X -> B with a partial ternary operation.

The carrier X maps onto A and B by surjections alpha and beta.  The ternary
operation, written here `P.ternary[(y, x, z)]` and read "y, undo x, then z",
must be defined exactly when beta(x) == beta(y) and alpha(x) == alpha(z).
Its output book-keeping is alpha(u) == alpha(y) and beta(u) == beta(z).
Four laws govern it: two unit laws

    (x, x, z) -> z          (y, x, x) -> y

and two concatenation laws

    (v, y, (y, x, z)) -> same as (v, x, z)
    ((y, x, z), z, w) -> same as (y, x, w).

Everything else in this module (mirrored quadrangles, derived equations,
the two fraction quotients) is a consequence of those four laws; the
checks here recompute the consequences exhaustively rather than trusting
the theory.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .base import (
    BookkeepingError,
    FiniteSet,
    NotGood,
    StructureError,
    ValidationReport,
)

Triple = tuple[str, str, str]
Pair = tuple[str, str]


def _check_total_map(name: str, mapping: dict[str, str], dom: FiniteSet, cod: FiniteSet) -> None:
    for x in dom:
        if x not in mapping:
            raise StructureError(f"{name} is not total: no value for {x!r}")
    for x, v in mapping.items():
        if x not in dom:
            raise StructureError(f"{name} maps unknown label {x!r}")
        if v not in cod:
            raise StructureError(f"{name}[{x!r}] = {v!r} is not a codomain label")


@dataclass(frozen=True)
class Pregroupoid:
    """A finite pregroupoid given by explicit tables.

    The constructor checks only that the data is assembled from known
    labels; the laws (surjectivity, domain exactness, the four axioms)
    are the business of validate_pregroupoid.  The one exception is that
    an empty carrier is rejected outright: every pregroupoid is inhabited.
    """

    X: FiniteSet
    A: FiniteSet
    B: FiniteSet
    alpha: dict[str, str]
    beta: dict[str, str]
    ternary: dict[Triple, str]

    def __post_init__(self):
        if len(self.X) == 0:
            raise StructureError("the carrier X must be inhabited")
        _check_total_map("alpha", self.alpha, self.X, self.A)
        _check_total_map("beta", self.beta, self.X, self.B)
        for key, value in self.ternary.items():
            if not (isinstance(key, tuple) and len(key) == 3):
                raise StructureError(f"ternary key {key!r} is not a triple")
            for lab in key:
                if lab not in self.X:
                    raise StructureError(f"ternary key {key!r} uses unknown label {lab!r}")
            if value not in self.X:
                raise StructureError(f"ternary[{key!r}] = {value!r} is not a carrier label")

    @cached_property
    def alpha_fibre(self) -> dict[str, tuple[str, ...]]:
        fibres: dict[str, list[str]] = {a: [] for a in self.A}
        for x in self.X:
            fibres[self.alpha[x]].append(x)
        return {a: tuple(xs) for a, xs in fibres.items()}

    @cached_property
    def beta_fibre(self) -> dict[str, tuple[str, ...]]:
        fibres: dict[str, list[str]] = {b: [] for b in self.B}
        for x in self.X:
            fibres[self.beta[x]].append(x)
        return {b: tuple(xs) for b, xs in fibres.items()}

    def bookkeeping_ok(self, y: str, x: str, z: str) -> bool:
        return self.beta[x] == self.beta[y] and self.alpha[x] == self.alpha[z]

    def domain_triples(self) -> Iterator[Triple]:
        """All triples where the operation must be defined, in canonical order."""
        for y in self.X:
            for x in self.beta_fibre[self.beta[y]]:
                for z in self.alpha_fibre[self.alpha[x]]:
                    yield (y, x, z)


def ternary_apply(P: Pregroupoid, y: str, x: str, z: str) -> str:
    """Apply the ternary operation, or raise BookkeepingError naming the broken condition."""
    for lab in (y, x, z):
        if lab not in P.X:
            raise StructureError(f"unknown carrier label {lab!r}")
    problems = []
    if P.beta[x] != P.beta[y]:
        problems.append(f"beta({x!r}) = {P.beta[x]!r} != beta({y!r}) = {P.beta[y]!r}")
    if P.alpha[x] != P.alpha[z]:
        problems.append(f"alpha({x!r}) = {P.alpha[x]!r} != alpha({z!r}) = {P.alpha[z]!r}")
    if problems:
        raise BookkeepingError("; ".join(problems))
    try:
        return P.ternary[(y, x, z)]
    except KeyError:
        raise StructureError(f"ternary table has no entry for {(y, x, z)!r}") from None


def validate_pregroupoid(P: Pregroupoid, max_report: int = 100) -> ValidationReport:
    """Check surjectivity, domain exactness, output book-keeping and the four laws.

    The report is empty exactly when P is a pregroupoid.  Triples are
    visited in canonical carrier order, so reports are reproducible.
    """
    report = ValidationReport(cap=max_report)
    t = P.ternary

    hit_a = set(P.alpha.values())
    for a in P.A:
        if a not in hit_a:
            report.add("surjective-alpha", a)
    hit_b = set(P.beta.values())
    for b in P.B:
        if b not in hit_b:
            report.add("surjective-beta", b)

    # domain exactness, both inclusions
    for key in P.domain_triples():
        if key not in t:
            report.add("domain-missing", *key)
    for key in sorted(t, key=lambda k: (P.X.index(k[0]), P.X.index(k[1]), P.X.index(k[2]))):
        y, x, z = key
        if not P.bookkeeping_ok(y, x, z):
            report.add("domain-extra", y, x, z)
            continue
        u = t[key]
        if P.alpha[u] != P.alpha[y]:
            report.add("output-alpha", y, x, z, u)
        if P.beta[u] != P.beta[z]:
            report.add("output-beta", y, x, z, u)

    af, bf = P.alpha_fibre, P.beta_fibre

    for x in P.X:
        for z in af[P.alpha[x]]:
            if t.get((x, x, z), z) != z:
                report.add("left-unit", x, z)
        for y in bf[P.beta[x]]:
            if t.get((y, x, x), y) != y:
                report.add("right-unit", y, x)

    # (v, y, (y, x, z)) == (v, x, z): quadrangles concatenate horizontally
    for row in bf.values():
        for x, y, v in itertools.product(row, repeat=3):
            for z in af[P.alpha[x]]:
                u = t.get((y, x, z))
                if u is None:
                    continue
                lhs = t.get((v, y, u))
                rhs = t.get((v, x, z))
                if lhs is None or rhs is None:
                    continue
                if lhs != rhs:
                    report.add("concat-horizontal", v, y, x, z)

    # ((y, x, z), z, w) == (y, x, w): quadrangles concatenate vertically
    for x in P.X:
        for y in bf[P.beta[x]]:
            col = af[P.alpha[x]]
            for z in col:
                u = t.get((y, x, z))
                if u is None:
                    continue
                for w in col:
                    lhs = t.get((u, z, w))
                    rhs = t.get((y, x, w))
                    if lhs is None or rhs is None:
                        continue
                    if lhs != rhs:
                        report.add("concat-vertical", y, x, z, w)

    return report


def verify_derived_equations(P: Pregroupoid, max_report: int = 100) -> ValidationReport:
    """Exhaustively recheck the equational consequences of the four laws.

    For a valid pregroupoid the report must come back empty; a violation
    here signals either an invalid input or a bug in a table generator.
    Each clause is checked over every book-keeping-valid tuple.
    """
    report = ValidationReport(cap=max_report)
    t = P.ternary
    af, bf = P.alpha_fibre, P.beta_fibre

    def get(y, x, z):
        return t.get((y, x, z))

    # middle-cancellation: (v, y, (y, x, z)) == (v, x, z)
    for row in bf.values():
        for y, x, v in itertools.product(row, repeat=3):
            for z in af[P.alpha[x]]:
                u = get(y, x, z)
                if u is None:
                    continue
                lhs, rhs = get(v, y, u), get(v, x, z)
                if lhs is not None and rhs is not None and lhs != rhs:
                    report.add("middle-cancellation", v, y, x, z)

    # associativity: ((1,2,3), 4, 5) == (1, 2, (3,4,5))
    for x2 in P.X:
        for x1 in bf[P.beta[x2]]:
            for x3 in af[P.alpha[x2]]:
                u = get(x1, x2, x3)
                if u is None:
                    continue
                for x4 in bf[P.beta[x3]]:
                    for x5 in af[P.alpha[x4]]:
                        v = get(x3, x4, x5)
                        lhs = get(u, x4, x5)
                        rhs = None if v is None else get(x1, x2, v)
                        if lhs is not None and rhs is not None and lhs != rhs:
                            report.add("associativity", x1, x2, x3, x4, x5)

    # mirrors: (2, 1, (1,2,3)) == 3 and ((1,2,3), 3, 2) == 1
    for x2 in P.X:
        for x1 in bf[P.beta[x2]]:
            for x3 in af[P.alpha[x2]]:
                u = get(x1, x2, x3)
                if u is None:
                    continue
                back = get(x2, x1, u)
                if back is not None and back != x3:
                    report.add("vertical-mirror", x1, x2, x3)
                back = get(u, x3, x2)
                if back is not None and back != x1:
                    report.add("horizontal-mirror", x1, x2, x3)

    # middle-composite: (6, (3,4,5), 2) == (6, 5, (4,3,2))
    for x4 in P.X:
        for x3 in bf[P.beta[x4]]:
            for x5 in af[P.alpha[x4]]:
                u = get(x3, x4, x5)
                if u is None:
                    continue
                for x2 in af[P.alpha[x3]]:
                    v = get(x4, x3, x2)
                    if v is None:
                        continue
                    for x6 in bf[P.beta[x5]]:
                        lhs = get(x6, u, x2)
                        rhs = get(x6, x5, v)
                        if lhs is not None and rhs is not None and lhs != rhs:
                            report.add("middle-composite", x2, x3, x4, x5, x6)

    # horizontal-fraction: ((1,2,3), 4, (4,3,2)) == 1
    for x2 in P.X:
        for x1 in bf[P.beta[x2]]:
            for x3 in af[P.alpha[x2]]:
                u = get(x1, x2, x3)
                if u is None:
                    continue
                for x4 in bf[P.beta[x3]]:
                    v = get(x4, x3, x2)
                    if v is None:
                        continue
                    res = get(u, x4, v)
                    if res is not None and res != x1:
                        report.add("horizontal-fraction", x1, x2, x3, x4)

    # vertical-fraction: (2, (4,3,2), 5) == (3, 4, 5)
    for x3 in P.X:
        for x4 in bf[P.beta[x3]]:
            for x2 in af[P.alpha[x3]]:
                v = get(x4, x3, x2)
                if v is None:
                    continue
                for x5 in af[P.alpha[x4]]:
                    lhs = get(x2, v, x5)
                    rhs = get(x3, x4, x5)
                    if lhs is not None and rhs is not None and lhs != rhs:
                        report.add("vertical-fraction", x2, x3, x4, x5)

    return report


@dataclass(frozen=True)
class Quadrangle:
    """Four carrier elements positioned x (bottom left), y (bottom right),
    z (top left), u (top right); good when u == ternary(y, x, z)."""

    x: str
    y: str
    z: str
    u: str


def is_good_quadrangle(P: Pregroupoid, x: str, y: str, z: str, u: str) -> bool:
    for lab in (x, y, z, u):
        if lab not in P.X:
            raise StructureError(f"unknown carrier label {lab!r}")
    if not P.bookkeeping_ok(y, x, z):
        return False
    return P.ternary.get((y, x, z)) == u


def mirror_horizontal(q: Quadrangle) -> Quadrangle:
    """Flip top and bottom edges."""
    return Quadrangle(x=q.z, y=q.u, z=q.x, u=q.y)


def mirror_vertical(q: Quadrangle) -> Quadrangle:
    """Flip left and right edges."""
    return Quadrangle(x=q.y, y=q.x, z=q.u, u=q.z)


def four_group_images(P: Pregroupoid, q: Quadrangle) -> frozenset[Quadrangle]:
    """The orbit of a good quadrangle under the two mirror symmetries.

    Both mirrors of a good quadrangle are again good, the mirrors commute
    and square to the identity, so the orbit has at most four members
    (fewer when the quadrangle is symmetric).
    """
    if not is_good_quadrangle(P, q.x, q.y, q.z, q.u):
        raise NotGood(f"{q} is not a good quadrangle")
    images = frozenset(
        {q, mirror_horizontal(q), mirror_vertical(q), mirror_horizontal(mirror_vertical(q))}
    )
    for img in images:
        if not is_good_quadrangle(P, img.x, img.y, img.z, img.u):
            raise NotGood(f"mirror image {img} is not good; input tables are not a pregroupoid")
    return images


@dataclass(frozen=True)
class QuotientClass:
    """One fraction: an equivalence class of pairs, named by its least member."""

    name: str
    rep: Pair
    members: tuple[Pair, ...]
    d0: str
    d1: str


@dataclass(frozen=True)
class QuotientSet:
    kind: str  # "horizontal" or "vertical"
    classes: tuple[QuotientClass, ...]
    class_of: dict[Pair, str]

    @cached_property
    def by_name(self) -> dict[str, QuotientClass]:
        return {c.name: c for c in self.classes}

    def __len__(self) -> int:
        return len(self.classes)


def horizontal_quotient(P: Pregroupoid) -> QuotientSet:
    """Partition the beta-equal pairs (x, y) into fractions written y*x^-1.

    (x, y) and (z, u) land in the same class exactly when u == ternary(y, x, z).
    Class book-keeping: d0 = alpha(y), d1 = alpha(x) for the least member (x, y).
    Assumes P validates; raises StructureError if the relation fails to partition.
    """
    idx = P.X.index
    classes: list[QuotientClass] = []
    class_of: dict[Pair, str] = {}
    for x in P.X:
        for y in P.beta_fibre[P.beta[x]]:
            if (x, y) in class_of:
                continue
            try:
                members = sorted(
                    ((z, P.ternary[(y, x, z)]) for z in P.alpha_fibre[P.alpha[x]]),
                    key=lambda p: (idx(p[0]), idx(p[1])),
                )
            except KeyError as missing:
                raise StructureError(
                    f"cannot form quotient: ternary entry {missing} is missing"
                ) from None
            rep = members[0]
            name = f"{rep[1]}*{rep[0]}^-1"
            for m in members:
                if m in class_of:
                    raise StructureError(
                        f"horizontal classes do not partition (pair {m!r}); input is not a pregroupoid"
                    )
                class_of[m] = name
            classes.append(
                QuotientClass(name, rep, tuple(members), d0=P.alpha[rep[1]], d1=P.alpha[rep[0]])
            )
    return QuotientSet("horizontal", tuple(classes), class_of)


def vertical_quotient(P: Pregroupoid) -> QuotientSet:
    """Partition the alpha-equal pairs (x, z) into fractions written x^-1*z.

    (x, z) and (y, u) land in the same class exactly when u == ternary(y, x, z).
    Class book-keeping: d0 = beta(x), d1 = beta(z) for the least member (x, z).
    """
    idx = P.X.index
    classes: list[QuotientClass] = []
    class_of: dict[Pair, str] = {}
    for x in P.X:
        for z in P.alpha_fibre[P.alpha[x]]:
            if (x, z) in class_of:
                continue
            try:
                members = sorted(
                    ((y, P.ternary[(y, x, z)]) for y in P.beta_fibre[P.beta[x]]),
                    key=lambda p: (idx(p[0]), idx(p[1])),
                )
            except KeyError as missing:
                raise StructureError(
                    f"cannot form quotient: ternary entry {missing} is missing"
                ) from None
            rep = members[0]
            name = f"{rep[0]}^-1*{rep[1]}"
            for m in members:
                if m in class_of:
                    raise StructureError(
                        f"vertical classes do not partition (pair {m!r}); input is not a pregroupoid"
                    )
                class_of[m] = name
            classes.append(
                QuotientClass(name, rep, tuple(members), d0=P.beta[rep[0]], d1=P.beta[rep[1]])
            )
    return QuotientSet("vertical", tuple(classes), class_of)


@dataclass(frozen=True)
class PregroupoidMorphism:
    """Maps f_X, f_A, f_B commuting with alpha and beta and preserving the operation."""

    source: Pregroupoid
    target: Pregroupoid
    f_X: dict[str, str]
    f_A: dict[str, str]
    f_B: dict[str, str]

    def __post_init__(self):
        _check_total_map("f_X", self.f_X, self.source.X, self.target.X)
        _check_total_map("f_A", self.f_A, self.source.A, self.target.A)
        _check_total_map("f_B", self.f_B, self.source.B, self.target.B)


def validate_morphism(m: PregroupoidMorphism, max_report: int = 100) -> ValidationReport:
    """Empty report iff both structure squares commute and the operation is preserved."""
    report = ValidationReport(cap=max_report)
    P, Q = m.source, m.target
    for x in P.X:
        if Q.alpha[m.f_X[x]] != m.f_A[P.alpha[x]]:
            report.add("alpha-square", x)
        if Q.beta[m.f_X[x]] != m.f_B[P.beta[x]]:
            report.add("beta-square", x)
    for (y, x, z), u in sorted(
        P.ternary.items(), key=lambda kv: tuple(P.X.index(l) for l in kv[0])
    ):
        image = Q.ternary.get((m.f_X[y], m.f_X[x], m.f_X[z]))
        if image != m.f_X[u]:
            report.add("ternary-preserved", y, x, z)
    return report


def identity_morphism(P: Pregroupoid) -> PregroupoidMorphism:
    return PregroupoidMorphism(
        P, P, {x: x for x in P.X}, {a: a for a in P.A}, {b: b for b in P.B}
    )
