"""Construction of standard instances and a brute-force enumeration oracle.

The generators here are the test substrate for the whole package: sets of
bijections between two sets, pair groupoids, cyclic groups acting on
themselves, and an exhaustive enumeration of every small pregroupoid.
The enumeration is deliberately independent of the rest of the theory: it
fills a ternary table by backtracking and keeps exactly the tables that
pass the axiom checks, so theorem-level code can be tested against it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .base import FiniteSet, SizeMismatch, StructureError
from .groupoid import FiniteGroupoid, underlying_pregroupoid
from .pregroupoid import Pregroupoid, PregroupoidMorphism, validate_morphism
from .torsors import LeftAction, LeftTorsor, RightAction, RightTorsor

MAX_CARRIER = 12  # exhaustive checking stays comfortable below this


def one_point(label: str = "*") -> FiniteSet:
    return FiniteSet((label,))


def terminal_pregroupoid() -> Pregroupoid:
    """The one-point pregroupoid 1 <- 1 -> 1."""
    return Pregroupoid(
        X=one_point(),
        A=one_point(),
        B=one_point(),
        alpha={"*": "*"},
        beta={"*": "*"},
        ternary={("*", "*", "*"): "*"},
    )


def bijection_pregroup(S: FiniteSet | tuple[str, ...], T: FiniteSet | tuple[str, ...]) -> Pregroupoid:
    """All bijections S -> T as a pregroup (A = B = one point).

    A bijection is labeled by its image tuple in the canonical order of S,
    joined with commas.  ternary(y, x, z) traverses y, then x backwards,
    then z.
    """
    S = S if isinstance(S, FiniteSet) else FiniteSet(S)
    T = T if isinstance(T, FiniteSet) else FiniteSet(T)
    if len(S) != len(T) or len(S) == 0:
        raise SizeMismatch(f"need |S| == |T| >= 1, got {len(S)} and {len(T)}")
    perms = list(itertools.permutations(T.elements))
    label_of = {p: ",".join(p) for p in perms}
    forward = {label_of[p]: dict(zip(S.elements, p)) for p in perms}
    backward = {label_of[p]: {t: s for s, t in zip(S.elements, p)} for p in perms}
    X = FiniteSet(label_of[p] for p in perms)
    ternary: dict[tuple[str, str, str], str] = {}
    for y in X:
        for x in X:
            for z in X:
                image = tuple(forward[z][backward[x][forward[y][s]]] for s in S.elements)
                ternary[(y, x, z)] = label_of[image]
    point = one_point()
    return Pregroupoid(
        X=X,
        A=point,
        B=point,
        alpha={x: "*" for x in X},
        beta={x: "*" for x in X},
        ternary=ternary,
    )


def pair_groupoid(O: FiniteSet | tuple[str, ...]) -> FiniteGroupoid:
    """The groupoid with exactly one arrow (o,p) between any two objects."""
    O = O if isinstance(O, FiniteSet) else FiniteSet(O)
    if len(O) == 0:
        raise SizeMismatch("need at least one object")
    pairs = [(o, p) for o in O for p in O]
    lab = {op: f"({op[0]},{op[1]})" for op in pairs}
    return FiniteGroupoid(
        objects=O,
        arrows=FiniteSet(lab[op] for op in pairs),
        d0={lab[(o, p)]: o for (o, p) in pairs},
        d1={lab[(o, p)]: p for (o, p) in pairs},
        comp={
            (lab[(o, p)], lab[(p2, q)]): lab[(o, q)]
            for (o, p) in pairs
            for (p2, q) in pairs
            if p == p2
        },
        ident={o: lab[(o, o)] for o in O},
        inv={lab[(o, p)]: lab[(p, o)] for (o, p) in pairs},
    )


def pair_pregroupoid(n_a: int, n_b: int) -> Pregroupoid:
    """The hom set of a pair groupoid between disjoint object blocks a1.., b1..."""
    if n_a < 1 or n_b < 1:
        raise SizeMismatch("both sides need at least one object")
    a_labels = tuple(f"a{i+1}" for i in range(n_a))
    b_labels = tuple(f"b{i+1}" for i in range(n_b))
    G = pair_groupoid(a_labels + b_labels)
    return underlying_pregroupoid(G, a_labels, b_labels)


def cyclic_group_groupoid(n: int) -> FiniteGroupoid:
    """The cyclic group of order n as a one-object groupoid with arrows g0..g{n-1}."""
    if n < 1:
        raise SizeMismatch("group order must be at least 1")
    labels = [f"g{i}" for i in range(n)]
    return FiniteGroupoid(
        objects=one_point(),
        arrows=FiniteSet(labels),
        d0={g: "*" for g in labels},
        d1={g: "*" for g in labels},
        comp={
            (labels[i], labels[j]): labels[(i + j) % n]
            for i in range(n)
            for j in range(n)
        },
        ident={"*": labels[0]},
        inv={labels[i]: labels[(-i) % n] for i in range(n)},
    )


def group_regular_torsor(n: int) -> LeftTorsor:
    """The cyclic group of order n acting on itself; one orbit, so B = 1."""
    G = cyclic_group_groupoid(n)
    X = FiniteSet(G.arrows)
    act = {(g, x): G.comp[(g, x)] for g in G.arrows for x in X}
    return LeftTorsor(
        action=LeftAction(G, X, {x: "*" for x in X}, act),
        B=one_point(),
        beta={x: "*" for x in X},
    )


def group_regular_right_torsor(n: int) -> RightTorsor:
    """The mirror: the cyclic group acting on itself on the right."""
    G = cyclic_group_groupoid(n)
    X = FiniteSet(G.arrows)
    act = {(x, h): G.comp[(x, h)] for h in G.arrows for x in X}
    return RightTorsor(
        action=RightAction(G, X, {x: "*" for x in X}, act),
        A=one_point(),
        alpha={x: "*" for x in X},
    )


def disjoint_union(G: FiniteGroupoid, H: FiniteGroupoid) -> FiniteGroupoid:
    """Place two groupoids side by side; their label sets must not clash."""
    for o in H.objects:
        if o in G.objects:
            raise StructureError(f"object label {o!r} appears on both sides")
    for f in H.arrows:
        if f in G.arrows:
            raise StructureError(f"arrow label {f!r} appears on both sides")
    return FiniteGroupoid(
        objects=FiniteSet(tuple(G.objects) + tuple(H.objects)),
        arrows=FiniteSet(tuple(G.arrows) + tuple(H.arrows)),
        d0={**G.d0, **H.d0},
        d1={**G.d1, **H.d1},
        comp={**G.comp, **H.comp},
        ident={**G.ident, **H.ident},
        inv={**G.inv, **H.inv},
    )


def _surjections(dom: tuple[str, ...], cod: tuple[str, ...]) -> Iterator[dict[str, str]]:
    full = set(cod)
    for values in itertools.product(cod, repeat=len(dom)):
        if set(values) == full:
            yield dict(zip(dom, values))


def _complete_tables(
    xs: tuple[str, ...], alpha: dict[str, str], beta: dict[str, str]
) -> Iterator[dict[tuple[str, str, str], str]]:
    """Backtracking search for every axiom-satisfying ternary table.

    Unit-law entries are forced; the remaining cells are filled against the
    row/column injectivity the laws imply, and full candidates are kept
    only when both concatenation laws check out.
    """
    af: dict[str, list[str]] = {}
    bf: dict[str, list[str]] = {}
    for x in xs:
        af.setdefault(alpha[x], []).append(x)
        bf.setdefault(beta[x], []).append(x)

    triples = [
        (y, x, z)
        for y in xs
        for x in bf[beta[y]]
        for z in af[alpha[x]]
    ]
    table: dict[tuple[str, str, str], str] = {}
    row_used: dict[tuple[str, str], set[str]] = {}
    col_used: dict[tuple[str, str], set[str]] = {}

    free: list[tuple[str, str, str]] = []
    for (y, x, z) in triples:
        if y == x:
            forced = z
        elif z == x:
            forced = y
        else:
            free.append((y, x, z))
            continue
        table[(y, x, z)] = forced
        row_used.setdefault((y, x), set()).add(forced)
        col_used.setdefault((x, z), set()).add(forced)

    candidates = [
        [u for u in xs if alpha[u] == alpha[y] and beta[u] == beta[z]]
        for (y, x, z) in free
    ]

    def laws_hold() -> bool:
        for row in bf.values():
            for x_, y_, v_ in itertools.product(row, repeat=3):
                for z_ in af[alpha[x_]]:
                    u = table[(y_, x_, z_)]
                    if table[(v_, y_, u)] != table[(v_, x_, z_)]:
                        return False
        for x_ in xs:
            for y_ in bf[beta[x_]]:
                col = af[alpha[x_]]
                for z_ in col:
                    u = table[(y_, x_, z_)]
                    for w_ in col:
                        if table[(u, z_, w_)] != table[(y_, x_, w_)]:
                            return False
        return True

    def search(i: int) -> Iterator[dict[tuple[str, str, str], str]]:
        if i == len(free):
            if laws_hold():
                yield dict(table)
            return
        y, x, z = free[i]
        row = row_used.setdefault((y, x), set())
        col = col_used.setdefault((x, z), set())
        for u in candidates[i]:
            if u in row or u in col:
                continue
            table[(y, x, z)] = u
            row.add(u)
            col.add(u)
            yield from search(i + 1)
            del table[(y, x, z)]
            row.discard(u)
            col.discard(u)

    yield from search(0)


def enumerate_pregroupoids(
    max_x: int, max_a: int | None = None, max_b: int | None = None
) -> Iterator[Pregroupoid]:
    """Every pregroupoid on canonical carriers x1.., a1.., b1.. within the bounds.

    Enumeration is by labeled structure (no isomorphism pruning) and the
    order is deterministic.  Sizes beyond 4 or so get slow; the point is
    an oracle at desk scale, not speed.
    """
    if max_x < 1:
        raise SizeMismatch("max_x must be at least 1")
    max_a = max_x if max_a is None else max_a
    max_b = max_x if max_b is None else max_b
    for nx in range(1, max_x + 1):
        xs = tuple(f"x{i+1}" for i in range(nx))
        for na in range(1, min(max_a, nx) + 1):
            a_labels = tuple(f"a{i+1}" for i in range(na))
            for alpha in _surjections(xs, a_labels):
                for nb in range(1, min(max_b, nx) + 1):
                    b_labels = tuple(f"b{i+1}" for i in range(nb))
                    for beta in _surjections(xs, b_labels):
                        for table in _complete_tables(xs, alpha, beta):
                            yield Pregroupoid(
                                X=FiniteSet(xs),
                                A=FiniteSet(a_labels),
                                B=FiniteSet(b_labels),
                                alpha=dict(alpha),
                                beta=dict(beta),
                                ternary=table,
                            )


def enumerate_morphisms(
    P: Pregroupoid, Q: Pregroupoid, limit: int | None = None
) -> Iterator[PregroupoidMorphism]:
    """All morphisms P -> Q by brute force; intended for small carriers."""
    count = 0
    for fa_values in itertools.product(Q.A.elements, repeat=len(P.A)):
        f_A = dict(zip(P.A.elements, fa_values))
        for fb_values in itertools.product(Q.B.elements, repeat=len(P.B)):
            f_B = dict(zip(P.B.elements, fb_values))
            pools = [
                [
                    x2
                    for x2 in Q.X
                    if Q.alpha[x2] == f_A[P.alpha[x]] and Q.beta[x2] == f_B[P.beta[x]]
                ]
                for x in P.X
            ]
            for image in itertools.product(*pools):
                f_X = dict(zip(P.X.elements, image))
                ok = all(
                    Q.ternary.get((f_X[y], f_X[x], f_X[z])) == f_X[u]
                    for (y, x, z), u in P.ternary.items()
                )
                if not ok:
                    continue
                yield PregroupoidMorphism(P, Q, f_X, f_A, f_B)
                count += 1
                if limit is not None and count >= limit:
                    return


@dataclass(frozen=True)
class GeneratorSpec:
    """A named recipe for one generated structure.

    kinds: bijection (size), pair (size_a, size_b), hom_from_groupoid
    (objects, size_a, size_b), group_regular (order), enumerate_all
    (max_x, max_a, max_b, index).
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int | None = None


def build_from_spec(spec: GeneratorSpec):
    """Materialise a GeneratorSpec; sizes are capped at MAX_CARRIER."""
    p = spec.params

    def size(name, default=None):
        v = p.get(name, default)
        if v is None:
            raise SizeMismatch(f"generator {spec.kind!r} needs parameter {name!r}")
        v = int(v)
        return v

    kind = spec.kind
    if kind == "bijection":
        n = size("size")
        if _fact(n) > MAX_CARRIER:
            raise SizeMismatch(f"bijection carrier {n}! exceeds the {MAX_CARRIER} element bound")
        return bijection_pregroup(
            tuple(f"s{i+1}" for i in range(n)), tuple(f"t{i+1}" for i in range(n))
        )
    if kind == "pair":
        n_a, n_b = size("size_a"), size("size_b")
        if n_a * n_b > MAX_CARRIER:
            raise SizeMismatch("pair carrier beyond desk scale")
        return pair_pregroupoid(n_a, n_b)
    if kind == "hom_from_groupoid":
        n = size("objects")
        n_a, n_b = size("size_a", n), size("size_b", n)
        if n_a > n or n_b > n:
            raise SizeMismatch("fibre sizes exceed the object count")
        objs = tuple(f"o{i+1}" for i in range(n))
        G = pair_groupoid(objs)
        return underlying_pregroupoid(G, objs[:n_a], objs[n - n_b :])
    if kind == "group_regular":
        n = size("order")
        if n > MAX_CARRIER:
            raise SizeMismatch("group order beyond desk scale")
        return group_regular_torsor(n)
    if kind == "enumerate_all":
        max_x = size("max_x")
        if max_x > 4:
            raise SizeMismatch("enumeration beyond max_x = 4 is not desk scale")
        stream = enumerate_pregroupoids(
            max_x, p.get("max_a"), p.get("max_b")
        )
        index = int(p.get("index", 0))
        for i, P in enumerate(stream):
            if i == index:
                return P
        raise SizeMismatch(f"enumeration index {index} out of range")
    raise SizeMismatch(f"unknown generator kind {spec.kind!r}")


def _fact(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def standard_corpus_pregroupoids(
    max_bijection: int = 3,
    max_pair: int = 3,
    max_regular: int = 6,
    max_enumerated: int = 3,
) -> list[tuple[str, Pregroupoid]]:
    """The named corpus every theorem-level test sweeps over."""
    from .torsors import c_left  # local import keeps module deps one-way

    corpus: list[tuple[str, Pregroupoid]] = []
    for n in range(1, max_bijection + 1):
        corpus.append(
            (
                f"bijection:{n}",
                bijection_pregroup(
                    tuple(f"s{i+1}" for i in range(n)), tuple(f"t{i+1}" for i in range(n))
                ),
            )
        )
    for n_a in range(1, max_pair + 1):
        for n_b in range(1, max_pair + 1):
            corpus.append((f"pair:{n_a},{n_b}", pair_pregroupoid(n_a, n_b)))
    for n in range(1, max_regular + 1):
        corpus.append((f"regular-heap:{n}", c_left(group_regular_torsor(n))))
    for i, P in enumerate(enumerate_pregroupoids(max_enumerated)):
        corpus.append((f"enumerated:{i}", P))
    return corpus


def standard_corpus_left_torsors(max_regular: int = 6) -> list[tuple[str, LeftTorsor]]:
    from .torsors import env_to_bitorsor, forget_right

    out: list[tuple[str, LeftTorsor]] = [
        (f"regular:{n}", group_regular_torsor(n)) for n in range(1, max_regular + 1)
    ]
    for name, P in standard_corpus_pregroupoids(max_enumerated=2):
        out.append((f"env-left:{name}", forget_right(env_to_bitorsor(P))))
    return out


def standard_corpus_right_torsors(max_regular: int = 6) -> list[tuple[str, RightTorsor]]:
    from .torsors import env_to_bitorsor, forget_left

    out: list[tuple[str, RightTorsor]] = [
        (f"regular-right:{n}", group_regular_right_torsor(n)) for n in range(1, max_regular + 1)
    ]
    for name, P in standard_corpus_pregroupoids(max_enumerated=2):
        out.append((f"env-right:{name}", forget_left(env_to_bitorsor(P))))
    return out
