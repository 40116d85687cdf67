"""Fibrations in groupoids over the two-object groupoid I, and their 2-cells.

I is the groupoid freely generated by one invertible arrow: objects a0 and
b0, one arrow i: a0 -> b0 with inverse i^-1, plus identities.  A functor
gamma from a finite groupoid into I is a fibration when every I-arrow can
be lifted with any prescribed codomain; over I this is the same as the
total groupoid being transitive between the two gamma fibres.

A 2-cell between functors over I is captured by two partial tables t and s
obtained by pushing the components into hom arrows of the target:

    t[(a, u)] = tau_a then u        defined when u starts at g(a)
    s[(b, v)] = v then tau_b        defined when v ends at f(b)

These satisfy three equations (cross consistency on both writings of a
diagonal, and transfer of the ternary operation through either slot), and
conversely any pair of tables satisfying them decodes to a unique natural
transformation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .base import (
    EquationViolation,
    FiniteSet,
    NotNatural,
    StructureError,
    ValidationReport,
    require_valid,
)
from .envelope import Envelope, build_envelope, extend_to_envelope
from .groupoid import (
    FiniteGroupoid,
    GroupoidFunctor,
    full_subgroupoid,
    hom_subset,
    identity_functor,
    underlying_pregroupoid,
    validate_functor,
    validate_groupoid,
)
from .pregroupoid import PregroupoidMorphism
from .torsors import Bitorsor, c_left, forget_right, validate_bitorsor

OBJ_A = "a0"
OBJ_B = "b0"
ARROW = "i"
ARROW_INV = "i^-1"
ID_A = "id_a0"
ID_B = "id_b0"


def make_I() -> FiniteGroupoid:
    """The groupoid of the generic invertible arrow: 2 objects, 4 arrows."""
    return FiniteGroupoid(
        objects=FiniteSet((OBJ_A, OBJ_B)),
        arrows=FiniteSet((ID_A, ID_B, ARROW, ARROW_INV)),
        d0={ID_A: OBJ_A, ID_B: OBJ_B, ARROW: OBJ_A, ARROW_INV: OBJ_B},
        d1={ID_A: OBJ_A, ID_B: OBJ_B, ARROW: OBJ_B, ARROW_INV: OBJ_A},
        comp={
            (ID_A, ID_A): ID_A,
            (ID_A, ARROW): ARROW,
            (ARROW, ID_B): ARROW,
            (ARROW, ARROW_INV): ID_A,
            (ARROW_INV, ID_A): ARROW_INV,
            (ARROW_INV, ARROW): ID_B,
            (ID_B, ID_B): ID_B,
            (ID_B, ARROW_INV): ARROW_INV,
        },
        ident={OBJ_A: ID_A, OBJ_B: ID_B},
        inv={ID_A: ID_A, ID_B: ID_B, ARROW: ARROW_INV, ARROW_INV: ARROW},
    )


@dataclass(frozen=True)
class FibrationOverI:
    total: FiniteGroupoid
    gamma: GroupoidFunctor

    def __post_init__(self):
        if self.gamma.source != self.total:
            raise StructureError("gamma must start at the total groupoid")
        if self.gamma.target != make_I():
            raise StructureError("gamma must land in the invertible-arrow groupoid")

    def fibre_a(self) -> tuple[str, ...]:
        return tuple(o for o in self.total.objects if self.gamma.obj_map[o] == OBJ_A)

    def fibre_b(self) -> tuple[str, ...]:
        return tuple(o for o in self.total.objects if self.gamma.obj_map[o] == OBJ_B)


def validate_fibration(F: FibrationOverI, max_report: int = 100) -> ValidationReport:
    """Groupoid and functor laws plus the lifting condition: every base
    arrow into gamma(e) lifts to an arrow into e."""
    report = ValidationReport(cap=max_report)
    report.extend(validate_groupoid(F.total, max_report=max_report))
    report.extend(validate_functor(F.gamma, max_report=max_report))
    if len(F.total.objects) == 0:
        report.add("total-inhabited")
    if not report.ok:
        return report
    base = make_I()
    for e in F.total.objects:
        over_e = F.gamma.obj_map[e]
        for w in base.arrows:
            if base.d1[w] != over_e:
                continue
            if not any(
                F.gamma.arrow_map[p] == w for p in F.total.by_target[e]
            ):
                report.add("lift-missing", e, w)
    return report


def fibration_to_bitorsor(F: FibrationOverI) -> Bitorsor:
    """The hom set between the two fibres, acted on by the fibre groupoids
    through composition on either side."""
    require_valid(validate_fibration(F), "fibration")
    A = F.fibre_a()
    B = F.fibre_b()
    hom = hom_subset(F.total, A, B)
    X = FiniteSet(hom.arrows)
    left = full_subgroupoid(F.total, A)
    right = full_subgroupoid(F.total, B)
    left_act = {
        (g, x): F.total.comp[(g, x)]
        for g in left.arrows
        for x in X
        if F.total.d1[g] == hom.d0[x]
    }
    right_act = {
        (x, h): F.total.comp[(x, h)]
        for h in right.arrows
        for x in X
        if hom.d1[x] == F.total.d0[h]
    }
    return Bitorsor(
        X=X,
        A=FiniteSet(A),
        B=FiniteSet(B),
        alpha=dict(hom.d0),
        beta=dict(hom.d1),
        left=left,
        left_act=left_act,
        right=right,
        right_act=right_act,
    )


def _collapse_morphism(env: Envelope, base: FiniteGroupoid) -> PregroupoidMorphism:
    P = env.base
    return PregroupoidMorphism(
        source=P,
        target=underlying_pregroupoid(base, base.objects, base.objects),
        f_X={x: ARROW for x in P.X},
        f_A={a: OBJ_A for a in P.A},
        f_B={b: OBJ_B for b in P.B},
    )


def bitorsor_to_fibration(bi: Bitorsor) -> FibrationOverI:
    """Envelope of the associated pregroupoid, fibred over I by the functor
    extending the unique collapse of the carrier onto the generic arrow."""
    require_valid(validate_bitorsor(bi), "bitorsor")
    P = c_left(forget_right(bi))
    env = build_envelope(P)
    base = make_I()
    gamma = extend_to_envelope(env, _collapse_morphism(env, base), base)
    return FibrationOverI(total=env.groupoid, gamma=gamma)


def canonical_roundtrip_iso(F: FibrationOverI) -> GroupoidFunctor:
    """The canonical functor from the rebuilt envelope back onto the total
    groupoid: identity on the hom carrier, fractions go to the composites
    they name.  Verified to be an isomorphism commuting with both functors
    to I; raises when the total groupoid has arrows the hom set does not
    generate (impossible for a valid fibration)."""
    require_valid(validate_fibration(F), "fibration")
    bi = fibration_to_bitorsor(F)
    P = c_left(forget_right(bi))
    env = build_envelope(P)
    total = F.total
    report = ValidationReport()

    obj_map = {f"A:{a}": a for a in P.A}
    obj_map.update({f"B:{b}": b for b in P.B})
    arrow_map: dict[str, str] = {}
    for x in P.X:
        arrow_map[x] = x
        arrow_map[f"{x}^-1"] = total.inv[x]
    for c in env.horizontal.classes:
        images = {total.comp[(y, total.inv[x])] for (x, y) in c.members}
        if len(images) != 1:
            report.add("rep-independence", c.name, *sorted(images))
            continue
        arrow_map[c.name] = images.pop()
    for c in env.vertical.classes:
        images = {total.comp[(total.inv[x], z)] for (x, z) in c.members}
        if len(images) != 1:
            report.add("rep-independence", c.name, *sorted(images))
            continue
        arrow_map[c.name] = images.pop()
    require_valid(report, "fibration roundtrip")

    iso = GroupoidFunctor(env.groupoid, total, obj_map, arrow_map)
    report.extend(validate_functor(iso))
    hit = set(arrow_map.values())
    if len(hit) != len(arrow_map):
        report.add("injective-on-arrows")
    for f in total.arrows:
        if f not in hit:
            report.add("not-generated", f)
    over = {"AA": ID_A, "AB": ARROW, "BA": ARROW_INV, "BB": ID_B}
    for e in env.groupoid.arrows:
        if F.gamma.arrow_map[arrow_map[e]] != over[env.kinds[e]]:
            report.add("over-base", e)
    require_valid(report, "fibration roundtrip")
    return iso


def end_inclusions_report(F: FibrationOverI, max_report: int = 100) -> ValidationReport:
    """Check that both fibre inclusions are full, faithful and essentially
    surjective (the last via an arrow connecting every object to the fibre)."""
    report = ValidationReport(cap=max_report)
    for side, fibre in (("A", F.fibre_a()), ("B", F.fibre_b())):
        fibre_set = set(fibre)
        sub = full_subgroupoid(F.total, fibre)
        sub_arrows = set(sub.arrows)
        for f in F.total.arrows:
            inside = F.total.d0[f] in fibre_set and F.total.d1[f] in fibre_set
            if inside and f not in sub_arrows:
                report.add("end-full", side, f)
        if len(set(sub.arrows)) != len(sub.arrows):
            report.add("end-faithful", side)
        for o in F.total.objects:
            connected = any(
                F.total.d1[f] in fibre_set for f in F.total.by_source[o]
            )
            if not connected:
                report.add("end-essentially-surjective", side, o)
    return report


@dataclass(frozen=True)
class TwoCell:
    """A natural transformation between two functors over I, given by its
    components (object of the source total -> arrow of the target total)."""

    source: FibrationOverI
    target: FibrationOverI
    f: GroupoidFunctor
    g: GroupoidFunctor
    components: dict[str, str]


def _check_over_I(fun: GroupoidFunctor, src: FibrationOverI, tgt: FibrationOverI, report: ValidationReport, name: str) -> None:
    if fun.source != src.total or fun.target != tgt.total:
        report.add(f"{name}-endpoints")
        return
    for o in src.total.objects:
        if tgt.gamma.obj_map[fun.obj_map[o]] != src.gamma.obj_map[o]:
            report.add(f"{name}-over-base", o)
    for p in src.total.arrows:
        if tgt.gamma.arrow_map[fun.arrow_map[p]] != src.gamma.arrow_map[p]:
            report.add(f"{name}-over-base", p)


def validate_two_cell(cell: TwoCell, max_report: int = 100) -> ValidationReport:
    report = ValidationReport(cap=max_report)
    report.extend(validate_functor(cell.f, max_report=max_report))
    report.extend(validate_functor(cell.g, max_report=max_report))
    _check_over_I(cell.f, cell.source, cell.target, report, "f")
    _check_over_I(cell.g, cell.source, cell.target, report, "g")
    S, T = cell.source.total, cell.target.total
    for e in S.objects:
        tau = cell.components.get(e)
        if tau is None or tau not in T.arrows:
            report.add("component-missing", e)
            continue
        if T.d0[tau] != cell.f.obj_map[e] or T.d1[tau] != cell.g.obj_map[e]:
            report.add("component-endpoints", e)
    if not report.ok:
        return report
    for p in S.arrows:
        e0, e1 = S.d0[p], S.d1[p]
        lhs = T.comp.get((cell.f.arrow_map[p], cell.components[e1]))
        rhs = T.comp.get((cell.components[e0], cell.g.arrow_map[p]))
        if lhs != rhs or lhs is None:
            report.add("naturality", p)
    return report


def identity_two_cell(F: FibrationOverI, fun: GroupoidFunctor | None = None) -> TwoCell:
    """The identity transformation on a functor (default: the identity functor)."""
    fun = fun if fun is not None else identity_functor(F.total)
    return TwoCell(
        source=F,
        target=F,
        f=fun,
        g=fun,
        components={e: F.total.ident[fun.obj_map[e]] for e in F.total.objects},
    )


def conjugation_two_cells(F: FibrationOverI, limit: int = 5) -> list[TwoCell]:
    """Cells from the identity functor to its conjugates.

    Every choice of a vertical arrow out of each object conjugates the
    identity functor into a new functor over I, and the chosen arrows are
    the components of a natural transformation between them.  Choices are
    enumerated in canonical product order and truncated at `limit`.
    """
    total = F.total
    vertical = {ID_A, ID_B}
    options = {
        e: [p for p in total.by_source[e] if F.gamma.arrow_map[p] in vertical]
        for e in total.objects
    }
    cells = []
    for combo in itertools.islice(
        itertools.product(*(options[e] for e in total.objects)), limit
    ):
        tau = dict(zip(total.objects, combo))
        g_obj = {e: total.d1[tau[e]] for e in total.objects}
        g_arr = {
            p: total.comp[
                (total.comp[(total.inv[tau[total.d0[p]]], p)], tau[total.d1[p]])
            ]
            for p in total.arrows
        }
        g = GroupoidFunctor(total, total, g_obj, g_arr)
        cells.append(TwoCell(F, F, identity_functor(total), g, tau))
    return cells


@dataclass(frozen=True)
class TwoCellEncoding:
    """The (t, s) tables of a 2-cell.

    t is keyed by (object over a0 in the source, hom arrow of the target
    out of its g-image); s by (object over b0, hom arrow into its f-image).
    """

    source: FibrationOverI
    target: FibrationOverI
    f: GroupoidFunctor
    g: GroupoidFunctor
    t: dict[tuple[str, str], str]
    s: dict[tuple[str, str], str]


def _hom_data(F: FibrationOverI) -> tuple[tuple[str, ...], dict[str, str], dict[str, str]]:
    hom = hom_subset(F.total, F.fibre_a(), F.fibre_b())
    return hom.arrows, dict(hom.d0), dict(hom.d1)


def encode_two_cell(cell: TwoCell) -> TwoCellEncoding:
    """Push the components of a natural transformation into the two tables.

    Raises NotNatural when the cell fails a naturality square.  The three
    defining equations of the encoding are recomputed before returning.
    """
    report = validate_two_cell(cell)
    if not report.ok:
        raise NotNatural(str(report.entries[0]))
    T = cell.target.total
    hom_arrows, h_d0, h_d1 = _hom_data(cell.target)
    t: dict[tuple[str, str], str] = {}
    s: dict[tuple[str, str], str] = {}
    for a in cell.source.fibre_a():
        tau = cell.components[a]
        for u in hom_arrows:
            if h_d0[u] == cell.g.obj_map[a]:
                t[(a, u)] = T.comp[(tau, u)]
    for b in cell.source.fibre_b():
        tau = cell.components[b]
        for v in hom_arrows:
            if h_d1[v] == cell.f.obj_map[b]:
                s[(b, v)] = T.comp[(v, tau)]
    enc = TwoCellEncoding(cell.source, cell.target, cell.f, cell.g, t, s)
    eq_report = _check_encoding_equations(enc)
    if not eq_report.ok:
        raise EquationViolation(str(eq_report.entries[0]))
    return enc


def _check_encoding_domains(enc: TwoCellEncoding) -> ValidationReport:
    report = ValidationReport()
    src, tgt = enc.source, enc.target
    hom_arrows, h_d0, h_d1 = _hom_data(tgt)
    hom_set = set(hom_arrows)
    a_objs = src.fibre_a()
    b_objs = src.fibre_b()
    t_keys = set()
    for a in a_objs:
        for u in hom_arrows:
            if h_d0[u] == enc.g.obj_map[a]:
                t_keys.add((a, u))
                if (a, u) not in enc.t:
                    report.add("t-domain-missing", a, u)
    for (a, u), val in enc.t.items():
        if (a, u) not in t_keys:
            report.add("t-domain-extra", a, u)
            continue
        if val not in hom_set:
            report.add("t-value", a, u)
            continue
        if h_d0[val] != enc.f.obj_map[a] or h_d1[val] != h_d1[u]:
            report.add("t-bookkeeping", a, u)
    s_keys = set()
    for b in b_objs:
        for v in hom_arrows:
            if h_d1[v] == enc.f.obj_map[b]:
                s_keys.add((b, v))
                if (b, v) not in enc.s:
                    report.add("s-domain-missing", b, v)
    for (b, v), val in enc.s.items():
        if (b, v) not in s_keys:
            report.add("s-domain-extra", b, v)
            continue
        if val not in hom_set:
            report.add("s-value", b, v)
            continue
        if h_d1[val] != enc.g.obj_map[b] or h_d0[val] != h_d0[v]:
            report.add("s-bookkeeping", b, v)
    return report


def _check_encoding_equations(enc: TwoCellEncoding) -> ValidationReport:
    """The three transfer equations, checked over every admissible tuple."""
    report = ValidationReport()
    src, tgt = enc.source, enc.target
    T = tgt.total
    hom_arrows, h_d0, h_d1 = _hom_data(tgt)

    def tern(p, q, r):
        # ternary operation of the target hom set: p after undoing q, then r
        return T.comp[(T.comp[(p, T.inv[q])], r)]

    s_hom, s_d0, s_d1 = _hom_data(src)
    for x in s_hom:
        a, b = s_d0[x], s_d1[x]
        if enc.t.get((a, enc.g.arrow_map[x])) != enc.s.get((b, enc.f.arrow_map[x])):
            report.add("cross-consistency", a, b, x)

    for (a, u), tau_u in enc.t.items():
        for v in hom_arrows:
            if h_d1[v] != h_d1[u]:
                continue
            for w in hom_arrows:
                if h_d0[w] != h_d0[v]:
                    continue
                inner = tern(u, v, w)
                lhs = tern(tau_u, v, w)
                rhs = enc.t.get((a, inner))
                if lhs != rhs:
                    report.add("left-transfer", a, u, v, w)

    for (b, v), v_tau in enc.s.items():
        for u in hom_arrows:
            if h_d0[u] != h_d0[v]:
                continue
            for w in hom_arrows:
                if h_d1[w] != h_d1[u]:
                    continue
                inner = tern(w, u, v)
                lhs = tern(w, u, v_tau)
                rhs = enc.s.get((b, inner))
                if lhs != rhs:
                    report.add("right-transfer", b, v, u, w)

    return report


def decode_two_cell(enc: TwoCellEncoding) -> TwoCell:
    """Rebuild the unique natural transformation from its (t, s) tables.

    Checks the table domains and book-keeping (StructureError), then the
    three equations (EquationViolation), then reconstructs each component
    from the least admissible hom arrow; all other choices are verified to
    agree, and naturality of the result is rechecked over every arrow.
    """
    for F in (enc.source, enc.target):
        require_valid(validate_fibration(F), "fibration")
    report = ValidationReport()
    _check_over_I(enc.f, enc.source, enc.target, report, "f")
    _check_over_I(enc.g, enc.source, enc.target, report, "g")
    report.extend(validate_functor(enc.f))
    report.extend(validate_functor(enc.g))
    require_valid(report, "two-cell encoding")

    domain_report = _check_encoding_domains(enc)
    if not domain_report.ok:
        raise StructureError(str(domain_report.entries[0]))
    eq_report = _check_encoding_equations(enc)
    if not eq_report.ok:
        raise EquationViolation(str(eq_report.entries[0]))

    T = enc.target.total
    components: dict[str, str] = {}
    for a in enc.source.fibre_a():
        values = {
            T.comp[(tau_u, T.inv[u])] for (a2, u), tau_u in enc.t.items() if a2 == a
        }
        if len(values) != 1:
            raise EquationViolation(f"components over {a!r} disagree across choices")
        components[a] = values.pop()
    for b in enc.source.fibre_b():
        values = {
            T.comp[(T.inv[v], v_tau)] for (b2, v), v_tau in enc.s.items() if b2 == b
        }
        if len(values) != 1:
            raise EquationViolation(f"components over {b!r} disagree across choices")
        components[b] = values.pop()

    cell = TwoCell(enc.source, enc.target, enc.f, enc.g, components)
    nat = validate_two_cell(cell)
    if not nat.ok:
        raise EquationViolation(str(nat.entries[0]))
    return cell


def two_cell_from_a_components(
    source: FibrationOverI,
    target: FibrationOverI,
    f: GroupoidFunctor,
    g: GroupoidFunctor,
    a_components: dict[str, str],
) -> TwoCell:
    """Reconstruct a full 2-cell from its components over a0 alone.

    Components over b0 are forced by naturality along any hom arrow into
    the object; the reconstruction checks that every such arrow forces the
    same value.
    """
    T = target.total
    components = dict(a_components)
    hom, h_d0, h_d1 = _hom_data(source)
    for b in source.fibre_b():
        forced = set()
        for x in hom:
            if h_d1[x] != b:
                continue
            a = h_d0[x]
            # f(x) then tau_b == tau_a then g(x), so tau_b is forced
            forced.add(
                T.comp[(T.inv[f.arrow_map[x]], T.comp[(a_components[a], g.arrow_map[x])])]
            )
        if len(forced) != 1:
            raise EquationViolation(f"components over {b!r} are not forced consistently")
        components[b] = forced.pop()
    return TwoCell(source, target, f, g, components)


def two_cell_from_b_components(
    source: FibrationOverI,
    target: FibrationOverI,
    f: GroupoidFunctor,
    g: GroupoidFunctor,
    b_components: dict[str, str],
) -> TwoCell:
    """Mirror reconstruction from the components over b0 alone."""
    T = target.total
    components = dict(b_components)
    hom, h_d0, h_d1 = _hom_data(source)
    for a in source.fibre_a():
        forced = set()
        for x in hom:
            if h_d0[x] != a:
                continue
            b = h_d1[x]
            forced.add(
                T.comp[(T.comp[(f.arrow_map[x], b_components[b])], T.inv[g.arrow_map[x]])]
            )
        if len(forced) != 1:
            raise EquationViolation(f"components over {a!r} are not forced consistently")
        components[a] = forced.pop()
    return TwoCell(source, target, f, g, components)
