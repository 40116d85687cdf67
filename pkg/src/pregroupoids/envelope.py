"""The enveloping groupoid of a pregroupoid.

Objects are the disjoint sum of A and B, realised by tagging labels "A:a"
and "B:b" so the construction works even when A and B share labels.
Arrows fall into four classes:

    AA  horizontal fractions y*x^-1   (one arrow per quotient class)
    AB  the carrier X itself          (arrow labels are the X labels)
    BA  a formal copy x^-1 of X
    BB  vertical fractions x^-1*z

Composition is left to right and is defined by eight table cells; the
remaining eight cells are empty because the endpoint tags can never
match.  Cells that consume a fraction are computed from its least
representative; `verify_envelope_table` recomputes every cell from every
representative, so nothing depends on that choice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import FiniteSet, StructureError, ValidationReport, require_valid
from .groupoid import (
    FiniteGroupoid,
    GroupoidFunctor,
    full_subgroupoid,
    underlying_pregroupoid,
    validate_functor,
)
from .pregroupoid import (
    Pregroupoid,
    PregroupoidMorphism,
    QuotientSet,
    horizontal_quotient,
    validate_morphism,
    validate_pregroupoid,
    vertical_quotient,
)


def tag_a(label: str) -> str:
    return f"A:{label}"


def tag_b(label: str) -> str:
    return f"B:{label}"


def inverse_label(x: str) -> str:
    return f"{x}^-1"


@dataclass(frozen=True)
class Envelope:
    """A pregroupoid together with its enveloping groupoid and the quotient
    data used to name the fraction arrows."""

    base: Pregroupoid
    groupoid: FiniteGroupoid
    horizontal: QuotientSet
    vertical: QuotientSet
    unit_reps: dict[str, str]  # tagged object -> least carrier label over it
    kinds: dict[str, str]      # arrow label -> "AA" | "AB" | "BA" | "BB"

    def aa_of(self, x: str, y: str) -> str:
        """Arrow label of the horizontal fraction containing the pair (x, y)."""
        return self.horizontal.class_of[(x, y)]

    def bb_of(self, x: str, z: str) -> str:
        """Arrow label of the vertical fraction containing the pair (x, z)."""
        return self.vertical.class_of[(x, z)]

    def a_objects(self) -> tuple[str, ...]:
        return tuple(tag_a(a) for a in self.base.A)

    def b_objects(self) -> tuple[str, ...]:
        return tuple(tag_b(b) for b in self.base.B)


def build_envelope(P: Pregroupoid, strict: bool = True) -> Envelope:
    """Construct the enveloping groupoid of a valid pregroupoid.

    With strict=True (the default) every fraction-valued table cell is
    additionally recomputed from all representatives of its input classes
    and the unit choice is checked to be irrelevant; a failure raises.
    """
    require_valid(validate_pregroupoid(P), "pregroupoid")
    hq = horizontal_quotient(P)
    vq = vertical_quotient(P)
    t = P.ternary
    af, bf = P.alpha_fibre, P.beta_fibre

    objects = FiniteSet([tag_a(a) for a in P.A] + [tag_b(b) for b in P.B])

    aa = [c.name for c in hq.classes]
    ab = list(P.X)
    ba = [inverse_label(x) for x in P.X]
    bb = [c.name for c in vq.classes]
    try:
        arrows = FiniteSet(aa + ab + ba + bb)
    except StructureError:
        raise StructureError(
            "envelope arrow labels collide; carrier labels containing '*' or '^-1' "
            "can clash with fraction names, rename the carrier"
        ) from None

    kinds: dict[str, str] = {}
    d0: dict[str, str] = {}
    d1: dict[str, str] = {}
    for c in hq.classes:
        kinds[c.name] = "AA"
        d0[c.name] = tag_a(c.d0)
        d1[c.name] = tag_a(c.d1)
    for x in P.X:
        kinds[x] = "AB"
        d0[x] = tag_a(P.alpha[x])
        d1[x] = tag_b(P.beta[x])
        xi = inverse_label(x)
        kinds[xi] = "BA"
        d0[xi] = tag_b(P.beta[x])
        d1[xi] = tag_a(P.alpha[x])
    for c in vq.classes:
        kinds[c.name] = "BB"
        d0[c.name] = tag_b(c.d0)
        d1[c.name] = tag_b(c.d1)

    comp: dict[tuple[str, str], str] = {}

    # AA then AA and AA then AB
    for c1 in hq.classes:
        x1, y1 = c1.rep
        for c2 in hq.classes:
            if c1.d1 == c2.d0:
                x2, y2 = c2.rep
                comp[(c1.name, c2.name)] = hq.class_of[(x2, t[(y1, x1, y2)])]
        for q in af[c1.d1]:
            comp[(c1.name, q)] = t[(y1, x1, q)]

    # AB then BA and AB then BB
    for p in P.X:
        for q in bf[P.beta[p]]:
            comp[(p, inverse_label(q))] = hq.class_of[(q, p)]
        for c2 in vq.classes:
            if P.beta[p] == c2.d0:
                x2, z2 = c2.rep
                comp[(p, c2.name)] = t[(p, x2, z2)]

    # BA then AA and BA then AB
    for p in P.X:
        pi = inverse_label(p)
        for c2 in hq.classes:
            if P.alpha[p] == c2.d0:
                x2, y2 = c2.rep
                comp[(pi, c2.name)] = inverse_label(t[(x2, y2, p)])
        for q in af[P.alpha[p]]:
            comp[(pi, q)] = vq.class_of[(p, q)]

    # BB then BA and BB then BB
    for c1 in vq.classes:
        x1, z1 = c1.rep
        for p in P.X:
            if c1.d1 == P.beta[p]:
                comp[(c1.name, inverse_label(p))] = inverse_label(t[(p, z1, x1)])
        for c2 in vq.classes:
            if c1.d1 == c2.d0:
                x2, z2 = c2.rep
                comp[(c1.name, c2.name)] = vq.class_of[(x1, t[(z1, x2, z2)])]

    unit_reps: dict[str, str] = {}
    ident: dict[str, str] = {}
    for a in P.A:
        x = af[a][0]
        unit_reps[tag_a(a)] = x
        ident[tag_a(a)] = hq.class_of[(x, x)]
    for b in P.B:
        x = bf[b][0]
        unit_reps[tag_b(b)] = x
        ident[tag_b(b)] = vq.class_of[(x, x)]

    inv: dict[str, str] = {}
    for c in hq.classes:
        x, y = c.rep
        inv[c.name] = hq.class_of[(y, x)]
    for x in P.X:
        inv[x] = inverse_label(x)
        inv[inverse_label(x)] = x
    for c in vq.classes:
        x, z = c.rep
        inv[c.name] = vq.class_of[(z, x)]

    groupoid = FiniteGroupoid(
        objects=objects, arrows=arrows, d0=d0, d1=d1, comp=comp, ident=ident, inv=inv
    )
    env = Envelope(
        base=P, groupoid=groupoid, horizontal=hq, vertical=vq, unit_reps=unit_reps, kinds=kinds
    )
    if strict:
        require_valid(verify_envelope_table(env), "envelope table")
    return env


def verify_envelope_table(env: Envelope, max_report: int = 100) -> ValidationReport:
    """Recompute every composition cell from every representative combination.

    Also checks that the identity over an object comes out as the same
    fraction no matter which carrier element over the object builds it.
    Empty for any envelope of a valid pregroupoid.
    """
    report = ValidationReport(cap=max_report)
    P = env.base
    t = P.ternary
    hq, vq = env.horizontal, env.vertical
    comp = env.groupoid.comp

    for c1 in hq.classes:
        for c2 in hq.classes:
            if c1.d1 != c2.d0:
                continue
            want = comp[(c1.name, c2.name)]
            for (x1, y1) in c1.members:
                for (x2, y2) in c2.members:
                    if hq.class_of[(x2, t[(y1, x1, y2)])] != want:
                        report.add("rep-independence", c1.name, c2.name, x1, y1, x2, y2)
        for q in P.alpha_fibre[c1.d1]:
            want = comp[(c1.name, q)]
            for (x1, y1) in c1.members:
                if t[(y1, x1, q)] != want:
                    report.add("rep-independence", c1.name, q, x1, y1)

    for p in P.X:
        pi = inverse_label(p)
        for c2 in hq.classes:
            if P.alpha[p] != c2.d0:
                continue
            want = comp[(pi, c2.name)]
            for (x2, y2) in c2.members:
                if inverse_label(t[(x2, y2, p)]) != want:
                    report.add("rep-independence", pi, c2.name, x2, y2)
        for c2 in vq.classes:
            if P.beta[p] != c2.d0:
                continue
            want = comp[(p, c2.name)]
            for (x2, z2) in c2.members:
                if t[(p, x2, z2)] != want:
                    report.add("rep-independence", p, c2.name, x2, z2)

    for c1 in vq.classes:
        for p in P.X:
            if c1.d1 != P.beta[p]:
                continue
            want = comp[(c1.name, inverse_label(p))]
            for (x1, z1) in c1.members:
                if inverse_label(t[(p, z1, x1)]) != want:
                    report.add("rep-independence", c1.name, inverse_label(p), x1, z1)
        for c2 in vq.classes:
            if c1.d1 != c2.d0:
                continue
            want = comp[(c1.name, c2.name)]
            for (x1, z1) in c1.members:
                for (x2, z2) in c2.members:
                    if vq.class_of[(x1, t[(z1, x2, z2)])] != want:
                        report.add("rep-independence", c1.name, c2.name, x1, z1, x2, z2)

    ident = env.groupoid.ident
    for a in P.A:
        want = ident[tag_a(a)]
        for x in P.alpha_fibre[a]:
            if hq.class_of[(x, x)] != want:
                report.add("unit-independence", tag_a(a), x)
    for b in P.B:
        want = ident[tag_b(b)]
        for x in P.beta_fibre[b]:
            if vq.class_of[(x, x)] != want:
                report.add("unit-independence", tag_b(b), x)

    return report


def eta(env: Envelope) -> PregroupoidMorphism:
    """The inclusion of the base into the underlying pregroupoid of its envelope.

    The AB arrows carry the carrier labels verbatim, so the carrier map is
    the identity on labels; it is injective and preserves the operation
    because composing an AB arrow through a BA arrow and back is exactly
    the ternary operation.
    """
    P = env.base
    target = underlying_pregroupoid(env.groupoid, env.a_objects(), env.b_objects())
    return PregroupoidMorphism(
        source=P,
        target=target,
        f_X={x: x for x in P.X},
        f_A={a: tag_a(a) for a in P.A},
        f_B={b: tag_b(b) for b in P.B},
    )


def extend_to_envelope(
    env: Envelope, phi: PregroupoidMorphism, G: FiniteGroupoid
) -> GroupoidFunctor:
    """Extend a morphism into the full underlying pregroupoid of G to a functor.

    phi must go from env.base to underlying_pregroupoid(G, G.objects,
    G.objects).  The extension is forced: X maps by phi, the formal
    inverses to inverses, and each fraction to the corresponding
    composite in G.  The result satisfies (extension after inclusion) ==
    phi, and `certify_unique_extension` double-checks that the forced
    values are representative-independent, so any functor agreeing with
    phi on the AB arrows agrees with the extension everywhere.
    """
    require_valid(validate_morphism(phi), "morphism into the underlying pregroupoid")
    expected = underlying_pregroupoid(G, G.objects, G.objects)
    if phi.target != expected:
        raise StructureError(
            "extension requires a morphism into the underlying pregroupoid on all objects"
        )
    if phi.source != env.base:
        raise StructureError("morphism source is not the envelope base")

    P = env.base
    obj_map = {tag_a(a): phi.f_A[a] for a in P.A}
    obj_map.update({tag_b(b): phi.f_B[b] for b in P.B})

    arrow_map: dict[str, str] = {}
    for x in P.X:
        arrow_map[x] = phi.f_X[x]
        arrow_map[inverse_label(x)] = G.inv[phi.f_X[x]]
    for c in env.horizontal.classes:
        x0, y0 = c.rep
        arrow_map[c.name] = G.comp[(phi.f_X[y0], G.inv[phi.f_X[x0]])]
    for c in env.vertical.classes:
        x0, z0 = c.rep
        arrow_map[c.name] = G.comp[(G.inv[phi.f_X[x0]], phi.f_X[z0])]

    extension = GroupoidFunctor(env.groupoid, G, obj_map, arrow_map)
    require_valid(certify_unique_extension(env, phi, G, extension), "universal extension")
    return extension


def certify_unique_extension(
    env: Envelope,
    phi: PregroupoidMorphism,
    G: FiniteGroupoid,
    candidate: GroupoidFunctor,
    max_report: int = 100,
) -> ValidationReport:
    """Certify that `candidate` is THE functor extending phi.

    Checks, exhaustively: the candidate is a functor, it restricts to phi
    on objects and AB arrows, and on every remaining arrow its value equals
    the one forced by functoriality (the inverse of phi(x) on x^-1, and the
    composite through phi for every representative of every fraction).  A
    clean report certifies both existence and uniqueness of the extension.
    """
    report = ValidationReport(cap=max_report)
    report.extend(validate_functor(candidate, max_report=max_report))
    P = env.base

    for a in P.A:
        if candidate.obj_map[tag_a(a)] != phi.f_A[a]:
            report.add("restricts-on-objects", tag_a(a))
    for b in P.B:
        if candidate.obj_map[tag_b(b)] != phi.f_B[b]:
            report.add("restricts-on-objects", tag_b(b))
    for x in P.X:
        if candidate.arrow_map[x] != phi.f_X[x]:
            report.add("restricts-on-carrier", x)
        if candidate.arrow_map[inverse_label(x)] != G.inv[phi.f_X[x]]:
            report.add("forced-inverse", inverse_label(x))

    for c in env.horizontal.classes:
        got = candidate.arrow_map[c.name]
        for (x, y) in c.members:
            forced = G.comp.get((phi.f_X[y], G.inv[phi.f_X[x]]))
            if forced != got:
                report.add("forced-fraction", c.name, x, y)
    for c in env.vertical.classes:
        got = candidate.arrow_map[c.name]
        for (x, z) in c.members:
            forced = G.comp.get((G.inv[phi.f_X[x]], phi.f_X[z]))
            if forced != got:
                report.add("forced-fraction", c.name, x, z)

    return report


def edge_groupoids(env: Envelope) -> tuple[FiniteGroupoid, FiniteGroupoid]:
    """The two full subgroupoids on the A-side and B-side objects."""
    return (
        full_subgroupoid(env.groupoid, env.a_objects()),
        full_subgroupoid(env.groupoid, env.b_objects()),
    )


def envelope_on_morphism(
    m: PregroupoidMorphism, env_src: Envelope | None = None, env_tgt: Envelope | None = None
) -> GroupoidFunctor:
    """The functor between envelopes induced by a pregroupoid morphism.

    Fraction images are computed from least representatives and checked to
    agree on all representatives.
    """
    require_valid(validate_morphism(m), "pregroupoid morphism")
    env_src = env_src if env_src is not None else build_envelope(m.source)
    env_tgt = env_tgt if env_tgt is not None else build_envelope(m.target)
    if env_src.base != m.source or env_tgt.base != m.target:
        raise StructureError("provided envelopes do not match the morphism endpoints")

    obj_map = {tag_a(a): tag_a(m.f_A[a]) for a in m.source.A}
    obj_map.update({tag_b(b): tag_b(m.f_B[b]) for b in m.source.B})
    arrow_map: dict[str, str] = {}
    for x in m.source.X:
        arrow_map[x] = m.f_X[x]
        arrow_map[inverse_label(x)] = inverse_label(m.f_X[x])
    for c in env_src.horizontal.classes:
        images = {env_tgt.aa_of(m.f_X[x], m.f_X[y]) for (x, y) in c.members}
        if len(images) != 1:
            raise StructureError(f"image of fraction {c.name!r} is not representative-independent")
        arrow_map[c.name] = images.pop()
    for c in env_src.vertical.classes:
        images = {env_tgt.bb_of(m.f_X[x], m.f_X[z]) for (x, z) in c.members}
        if len(images) != 1:
            raise StructureError(f"image of fraction {c.name!r} is not representative-independent")
        arrow_map[c.name] = images.pop()
    return GroupoidFunctor(env_src.groupoid, env_tgt.groupoid, obj_map, arrow_map)
