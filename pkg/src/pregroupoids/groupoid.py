"""Finite groupoids with explicit tables.

Composition is written left to right throughout the package: comp[(f, g)]
means "f then g" and is defined exactly when d1(f) == d0(g).  Identities
and inverses are stored explicitly and cross-checked by the validator
rather than recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .base import (
    FiniteSet,
    NotTransitive,
    StructureError,
    SubsetError,
    ValidationReport,
)
from .pregroupoid import Pregroupoid, _check_total_map


@dataclass(frozen=True)
class FiniteGroupoid:
    objects: FiniteSet
    arrows: FiniteSet
    d0: dict[str, str]
    d1: dict[str, str]
    comp: dict[tuple[str, str], str]
    ident: dict[str, str]
    inv: dict[str, str]

    def __post_init__(self):
        if len(self.objects) == 0:
            raise StructureError("a groupoid must have at least one object")
        _check_total_map("d0", self.d0, self.arrows, self.objects)
        _check_total_map("d1", self.d1, self.arrows, self.objects)
        _check_total_map("ident", self.ident, self.objects, self.arrows)
        _check_total_map("inv", self.inv, self.arrows, self.arrows)
        for (f, g), h in self.comp.items():
            for lab in (f, g, h):
                if lab not in self.arrows:
                    raise StructureError(f"composition entry {(f, g)!r} -> {h!r} uses unknown arrow {lab!r}")

    @cached_property
    def by_source(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {o: [] for o in self.objects}
        for f in self.arrows:
            out[self.d0[f]].append(f)
        return {o: tuple(fs) for o, fs in out.items()}

    @cached_property
    def by_target(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {o: [] for o in self.objects}
        for f in self.arrows:
            out[self.d1[f]].append(f)
        return {o: tuple(fs) for o, fs in out.items()}


def validate_groupoid(G: FiniteGroupoid, max_report: int = 100) -> ValidationReport:
    """Exhaustively check the groupoid laws: composition domain, endpoints,
    associativity, two-sided units and two-sided inverses."""
    report = ValidationReport(cap=max_report)

    for f in G.arrows:
        for g in G.by_source[G.d1[f]]:
            if (f, g) not in G.comp:
                report.add("compose-missing", f, g)
    for (f, g) in sorted(G.comp, key=lambda p: (G.arrows.index(p[0]), G.arrows.index(p[1]))):
        h = G.comp[(f, g)]
        if G.d1[f] != G.d0[g]:
            report.add("compose-extra", f, g)
            continue
        if G.d0[h] != G.d0[f] or G.d1[h] != G.d1[g]:
            report.add("compose-endpoints", f, g, h)

    for f in G.arrows:
        for g in G.by_source[G.d1[f]]:
            fg = G.comp.get((f, g))
            if fg is None:
                continue
            for h in G.by_source[G.d1[g]]:
                gh = G.comp.get((g, h))
                lhs = G.comp.get((fg, h))
                rhs = None if gh is None else G.comp.get((f, gh))
                if lhs is not None and rhs is not None and lhs != rhs:
                    report.add("associativity", f, g, h)

    for o in G.objects:
        e = G.ident[o]
        if G.d0[e] != o or G.d1[e] != o:
            report.add("identity-endpoints", o, e)
    for f in G.arrows:
        left = G.comp.get((G.ident[G.d0[f]], f))
        if left != f:
            report.add("identity-left", f)
        right = G.comp.get((f, G.ident[G.d1[f]]))
        if right != f:
            report.add("identity-right", f)

    for f in G.arrows:
        fi = G.inv[f]
        if G.d0[fi] != G.d1[f] or G.d1[fi] != G.d0[f]:
            report.add("inverse-endpoints", f, fi)
            continue
        if G.comp.get((fi, f)) != G.ident[G.d1[f]]:
            report.add("inverse-left", f)
        if G.comp.get((f, fi)) != G.ident[G.d0[f]]:
            report.add("inverse-right", f)

    return report


@dataclass(frozen=True)
class HomSubset:
    """The arrows from a set of objects A into a set of objects B,
    with the restricted endpoint maps."""

    arrows: tuple[str, ...]
    d0: dict[str, str]
    d1: dict[str, str]


def _as_object_subset(G: FiniteGroupoid, labels: Iterable[str], side: str) -> tuple[str, ...]:
    out = tuple(labels)
    for o in out:
        if o not in G.objects:
            raise SubsetError(f"{side} contains unknown object {o!r}")
    return out


def hom_subset(G: FiniteGroupoid, A: Iterable[str], B: Iterable[str]) -> HomSubset:
    """Arrows whose source lies in A and target lies in B, in canonical arrow order."""
    a_set = set(_as_object_subset(G, A, "A"))
    b_set = set(_as_object_subset(G, B, "B"))
    arrows = tuple(f for f in G.arrows if G.d0[f] in a_set and G.d1[f] in b_set)
    return HomSubset(
        arrows,
        {f: G.d0[f] for f in arrows},
        {f: G.d1[f] for f in arrows},
    )


def is_ab_transitive(G: FiniteGroupoid, A: Iterable[str], B: Iterable[str]) -> bool:
    """True iff every A-object has an arrow into B and every B-object one from A."""
    a_list = _as_object_subset(G, A, "A")
    b_set = set(_as_object_subset(G, B, "B"))
    a_set = set(a_list)
    for a in a_list:
        if not any(G.d1[f] in b_set for f in G.by_source[a]):
            return False
    for b in b_set:
        if not any(G.d0[f] in a_set for f in G.by_target[b]):
            return False
    return True


def underlying_pregroupoid(G: FiniteGroupoid, A: Iterable[str], B: Iterable[str]) -> Pregroupoid:
    """The hom set G(A, B) with alpha = d0, beta = d1 and operation y o x^-1 o z.

    Requires A-B-transitivity so that both structure maps are surjective.
    """
    a_fs = FiniteSet(_as_object_subset(G, A, "A"))
    b_fs = FiniteSet(_as_object_subset(G, B, "B"))
    if len(a_fs) == 0 or len(b_fs) == 0:
        raise NotTransitive("A and B must both be inhabited")
    if not is_ab_transitive(G, a_fs, b_fs):
        raise NotTransitive("groupoid is not A-B-transitive; structure maps would not be surjective")
    hom = hom_subset(G, a_fs, b_fs)
    ternary: dict[tuple[str, str, str], str] = {}
    by_d1: dict[str, list[str]] = {}
    by_d0: dict[str, list[str]] = {}
    for f in hom.arrows:
        by_d1.setdefault(hom.d1[f], []).append(f)
        by_d0.setdefault(hom.d0[f], []).append(f)
    for y in hom.arrows:
        for x in by_d1[hom.d1[y]]:
            left = G.comp[(y, G.inv[x])]
            for z in by_d0[hom.d0[x]]:
                ternary[(y, x, z)] = G.comp[(left, z)]
    return Pregroupoid(
        X=FiniteSet(hom.arrows),
        A=a_fs,
        B=b_fs,
        alpha=dict(hom.d0),
        beta=dict(hom.d1),
        ternary=ternary,
    )


@dataclass(frozen=True)
class GroupoidFunctor:
    source: FiniteGroupoid
    target: FiniteGroupoid
    obj_map: dict[str, str]
    arrow_map: dict[str, str]

    def __post_init__(self):
        _check_total_map("object map", self.obj_map, self.source.objects, self.target.objects)
        _check_total_map("arrow map", self.arrow_map, self.source.arrows, self.target.arrows)


def validate_functor(F: GroupoidFunctor, max_report: int = 100) -> ValidationReport:
    """Empty report iff F preserves endpoints, composition and identities."""
    report = ValidationReport(cap=max_report)
    S, T = F.source, F.target
    for f in S.arrows:
        if T.d0[F.arrow_map[f]] != F.obj_map[S.d0[f]]:
            report.add("functor-d0", f)
        if T.d1[F.arrow_map[f]] != F.obj_map[S.d1[f]]:
            report.add("functor-d1", f)
    for f in S.arrows:
        for g in S.by_source[S.d1[f]]:
            fg = S.comp.get((f, g))
            if fg is None:
                continue
            image = T.comp.get((F.arrow_map[f], F.arrow_map[g]))
            if image != F.arrow_map[fg]:
                report.add("functor-compose", f, g)
    for o in S.objects:
        if F.arrow_map[S.ident[o]] != T.ident[F.obj_map[o]]:
            report.add("functor-identity", o)
    return report


def identity_functor(G: FiniteGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(G, G, {o: o for o in G.objects}, {f: f for f in G.arrows})


def compose_functors(F: GroupoidFunctor, G: GroupoidFunctor) -> GroupoidFunctor:
    """F then G; F.target must be G.source."""
    if F.target != G.source:
        raise StructureError("functors are not composable")
    return GroupoidFunctor(
        F.source,
        G.target,
        {o: G.obj_map[F.obj_map[o]] for o in F.source.objects},
        {f: G.arrow_map[F.arrow_map[f]] for f in F.source.arrows},
    )


def full_subgroupoid(G: FiniteGroupoid, objs: Iterable[str]) -> FiniteGroupoid:
    """The full subgroupoid on the given objects: all arrows with both ends inside."""
    keep = _as_object_subset(G, objs, "objects")
    keep_set = set(keep)
    arrows = tuple(f for f in G.arrows if G.d0[f] in keep_set and G.d1[f] in keep_set)
    arrow_set = set(arrows)
    return FiniteGroupoid(
        objects=FiniteSet(keep),
        arrows=FiniteSet(arrows),
        d0={f: G.d0[f] for f in arrows},
        d1={f: G.d1[f] for f in arrows},
        comp={
            (f, g): h
            for (f, g), h in G.comp.items()
            if f in arrow_set and g in arrow_set and h in arrow_set
        },
        ident={o: G.ident[o] for o in keep},
        inv={f: G.inv[f] for f in arrows},
    )


def relabel_objects(G: FiniteGroupoid, mapping: dict[str, str]) -> FiniteGroupoid:
    """Rename objects through an injective mapping; arrows keep their labels."""
    for o in G.objects:
        if o not in mapping:
            raise StructureError(f"relabeling misses object {o!r}")
    new = [mapping[o] for o in G.objects]
    if len(set(new)) != len(new):
        raise StructureError("object relabeling is not injective")
    return FiniteGroupoid(
        objects=FiniteSet(new),
        arrows=G.arrows,
        d0={f: mapping[G.d0[f]] for f in G.arrows},
        d1={f: mapping[G.d1[f]] for f in G.arrows},
        comp=dict(G.comp),
        ident={mapping[o]: G.ident[o] for o in G.objects},
        inv=dict(G.inv),
    )
