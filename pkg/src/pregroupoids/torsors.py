"""Groupoid actions, torsors, bitorsors and the equivalences between them.

Conventions, matching left-to-right composition:

  * a left action of G (objects A) on alpha: X -> A has act[(g, x)]
    defined exactly when alpha(x) == d1(g), with alpha(g.x) == d0(g);
  * a right action of H (objects B) on beta: X -> B has act[(x, h)]
    defined exactly when beta(x) == d0(h), with beta(x.h) == d1(h).

A torsor is a free action (at most one arrow moves x to y) whose structure
map is surjective and whose second leg is exactly the orbit quotient.  The
passage to pregroupoids reads the unique mover as a fraction: for a left
torsor, ternary(y, x, z) := (the g with g.x == y) applied to z.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import (
    FiniteSet,
    NotFree,
    StructureError,
    ValidationReport,
    require_valid,
)
from .envelope import Envelope, build_envelope, tag_a, tag_b
from .groupoid import (
    FiniteGroupoid,
    GroupoidFunctor,
    full_subgroupoid,
    relabel_objects,
    validate_functor,
)
from .pregroupoid import Pregroupoid, PregroupoidMorphism, _check_total_map


@dataclass(frozen=True)
class LeftAction:
    """A groupoid acting on the left of a map alpha: X -> objects."""

    groupoid: FiniteGroupoid
    X: FiniteSet
    alpha: dict[str, str]
    act: dict[tuple[str, str], str]

    def __post_init__(self):
        _check_total_map("alpha", self.alpha, self.X, self.groupoid.objects)
        for (g, x), y in self.act.items():
            if g not in self.groupoid.arrows:
                raise StructureError(f"action key uses unknown arrow {g!r}")
            if x not in self.X or y not in self.X:
                raise StructureError(f"action entry {(g, x)!r} -> {y!r} leaves the carrier")


@dataclass(frozen=True)
class RightAction:
    """A groupoid acting on the right of a map beta: X -> objects."""

    groupoid: FiniteGroupoid
    X: FiniteSet
    beta: dict[str, str]
    act: dict[tuple[str, str], str]

    def __post_init__(self):
        _check_total_map("beta", self.beta, self.X, self.groupoid.objects)
        for (x, h), y in self.act.items():
            if h not in self.groupoid.arrows:
                raise StructureError(f"action key uses unknown arrow {h!r}")
            if x not in self.X or y not in self.X:
                raise StructureError(f"action entry {(x, h)!r} -> {y!r} leaves the carrier")


@dataclass(frozen=True)
class LeftTorsor:
    """A left action together with its orbit data beta: X -> B."""

    action: LeftAction
    B: FiniteSet
    beta: dict[str, str]

    def __post_init__(self):
        _check_total_map("beta", self.beta, self.action.X, self.B)


@dataclass(frozen=True)
class RightTorsor:
    """A right action together with its orbit data alpha: X -> A."""

    action: RightAction
    A: FiniteSet
    alpha: dict[str, str]

    def __post_init__(self):
        _check_total_map("alpha", self.alpha, self.action.X, self.A)


@dataclass(frozen=True)
class Bitorsor:
    """Commuting left and right torsor structures on one span A <- X -> B."""

    X: FiniteSet
    A: FiniteSet
    B: FiniteSet
    alpha: dict[str, str]
    beta: dict[str, str]
    left: FiniteGroupoid
    left_act: dict[tuple[str, str], str]
    right: FiniteGroupoid
    right_act: dict[tuple[str, str], str]

    def __post_init__(self):
        _check_total_map("alpha", self.alpha, self.X, self.A)
        _check_total_map("beta", self.beta, self.X, self.B)
        if self.left.objects != self.A:
            raise StructureError("left groupoid objects must be the A leg")
        if self.right.objects != self.B:
            raise StructureError("right groupoid objects must be the B leg")


def forget_right(bi: Bitorsor) -> LeftTorsor:
    """Drop the right action."""
    return LeftTorsor(
        action=LeftAction(bi.left, bi.X, dict(bi.alpha), dict(bi.left_act)),
        B=bi.B,
        beta=dict(bi.beta),
    )


def forget_left(bi: Bitorsor) -> RightTorsor:
    """Drop the left action."""
    return RightTorsor(
        action=RightAction(bi.right, bi.X, dict(bi.beta), dict(bi.right_act)),
        A=bi.A,
        alpha=dict(bi.alpha),
    )


def validate_left_action(action: LeftAction, max_report: int = 100) -> ValidationReport:
    report = ValidationReport(cap=max_report)
    G = action.groupoid
    for g in G.arrows:
        for x in action.X:
            defined = (g, x) in action.act
            should = action.alpha[x] == G.d1[g]
            if should and not defined:
                report.add("act-missing", g, x)
            elif defined and not should:
                report.add("act-extra", g, x)
            elif defined:
                if action.alpha[action.act[(g, x)]] != G.d0[g]:
                    report.add("act-endpoint", g, x)
    for x in action.X:
        e = G.ident[action.alpha[x]]
        if action.act.get((e, x)) != x:
            report.add("act-unit", x)
    for f in G.arrows:
        for g in G.by_source[G.d1[f]]:
            fg = G.comp.get((f, g))
            if fg is None:
                continue
            for x in action.X:
                if action.alpha[x] != G.d1[g]:
                    continue
                gx = action.act.get((g, x))
                inner = None if gx is None else action.act.get((f, gx))
                outer = action.act.get((fg, x))
                if inner is not None and outer is not None and inner != outer:
                    report.add("act-associative", f, g, x)
    return report


def validate_right_action(action: RightAction, max_report: int = 100) -> ValidationReport:
    report = ValidationReport(cap=max_report)
    H = action.groupoid
    for h in H.arrows:
        for x in action.X:
            defined = (x, h) in action.act
            should = action.beta[x] == H.d0[h]
            if should and not defined:
                report.add("act-missing", x, h)
            elif defined and not should:
                report.add("act-extra", x, h)
            elif defined:
                if action.beta[action.act[(x, h)]] != H.d1[h]:
                    report.add("act-endpoint", x, h)
    for x in action.X:
        e = H.ident[action.beta[x]]
        if action.act.get((x, e)) != x:
            report.add("act-unit", x)
    for h in H.arrows:
        for k in H.by_source[H.d1[h]]:
            hk = H.comp.get((h, k))
            if hk is None:
                continue
            for x in action.X:
                if action.beta[x] != H.d0[h]:
                    continue
                xh = action.act.get((x, h))
                inner = None if xh is None else action.act.get((xh, k))
                outer = action.act.get((x, hk))
                if inner is not None and outer is not None and inner != outer:
                    report.add("act-associative", x, h, k)
    return report


def _reachable_pairs(act: dict[tuple[str, str], str], left_of_pair: bool) -> dict[tuple[str, str], list[str]]:
    """Map (x, y) -> arrows moving x to y; argument order of act keys differs per side."""
    out: dict[tuple[str, str], list[str]] = {}
    for key, y in act.items():
        g, x = key if left_of_pair else (key[1], key[0])
        out.setdefault((x, y), []).append(g)
    return out


def validate_left_torsor(T: LeftTorsor, max_report: int = 100) -> ValidationReport:
    """Action laws plus: inhabited, alpha surjective, free, and beta is
    exactly the orbit quotient onto B."""
    report = validate_left_action(T.action, max_report=max_report)
    if len(T.action.X) == 0:
        report.add("carrier-inhabited")
    hit = set(T.action.alpha.values())
    for a in T.action.groupoid.objects:
        if a not in hit:
            report.add("alpha-surjective", a)
    moved = _reachable_pairs(T.action.act, left_of_pair=True)
    for (x, y), arrows in sorted(
        moved.items(), key=lambda kv: (T.action.X.index(kv[0][0]), T.action.X.index(kv[0][1]))
    ):
        if len(arrows) > 1:
            report.add("free", x, y, *sorted(arrows))
    hit_b = set(T.beta.values())
    for b in T.B:
        if b not in hit_b:
            report.add("beta-surjective", b)
    for x in T.action.X:
        for y in T.action.X:
            same_orbit = (x, y) in moved
            same_fibre = T.beta[x] == T.beta[y]
            if same_orbit and not same_fibre:
                report.add("quotient-splits-orbit", x, y)
            elif same_fibre and not same_orbit:
                report.add("quotient-merges-orbits", x, y)
    return report


def validate_right_torsor(T: RightTorsor, max_report: int = 100) -> ValidationReport:
    """Mirror of validate_left_torsor for a right action with orbit map alpha."""
    report = validate_right_action(T.action, max_report=max_report)
    if len(T.action.X) == 0:
        report.add("carrier-inhabited")
    hit = set(T.action.beta.values())
    for b in T.action.groupoid.objects:
        if b not in hit:
            report.add("beta-surjective", b)
    moved = _reachable_pairs(T.action.act, left_of_pair=False)
    for (x, y), arrows in sorted(
        moved.items(), key=lambda kv: (T.action.X.index(kv[0][0]), T.action.X.index(kv[0][1]))
    ):
        if len(arrows) > 1:
            report.add("free", x, y, *sorted(arrows))
    hit_a = set(T.alpha.values())
    for a in T.A:
        if a not in hit_a:
            report.add("alpha-surjective", a)
    for x in T.action.X:
        for y in T.action.X:
            same_orbit = (x, y) in moved
            same_fibre = T.alpha[x] == T.alpha[y]
            if same_orbit and not same_fibre:
                report.add("quotient-splits-orbit", x, y)
            elif same_fibre and not same_orbit:
                report.add("quotient-merges-orbits", x, y)
    return report


def validate_bitorsor(bi: Bitorsor, max_report: int = 100) -> ValidationReport:
    """Both one-sided torsor structures plus commutation of the two actions."""
    report = ValidationReport(cap=max_report)
    report.extend(validate_left_torsor(forget_right(bi), max_report=max_report))
    report.extend(validate_right_torsor(forget_left(bi), max_report=max_report))
    for g in bi.left.arrows:
        for x in bi.X:
            if bi.alpha[x] != bi.left.d1[g]:
                continue
            gx = bi.left_act.get((g, x))
            if gx is None:
                continue
            for h in bi.right.arrows:
                if bi.beta[x] != bi.right.d0[h]:
                    continue
                xh = bi.right_act.get((x, h))
                lhs = bi.right_act.get((gx, h))
                rhs = None if xh is None else bi.left_act.get((g, xh))
                if lhs is not None and rhs is not None and lhs != rhs:
                    report.add("actions-commute", g, x, h)
    return report


def orbit_quotient(action: LeftAction) -> tuple[FiniteSet, dict[str, str]]:
    """The orbit set of a free action, with least-member labels, and the projection.

    Raises NotFree when two distinct arrows move some x to the same y.
    """
    require_valid(validate_left_action(action), "left action")
    movers: dict[tuple[str, str], str] = {}
    for (g, x), y in action.act.items():
        prev = movers.get((x, y))
        if prev is not None and prev != g:
            raise NotFree(f"both {prev!r} and {g!r} move {x!r} to {y!r}")
        movers[(x, y)] = g
    # orbits, swept in canonical carrier order; a valid action reaches
    # symmetrically, so one forward closure per unseen point suffices
    label_of: dict[str, str] = {}
    labels: list[str] = []
    idx = action.X.index
    reach: dict[str, set[str]] = {x: set() for x in action.X}
    for (x, y) in movers:
        reach[x].add(y)
        reach[y].add(x)
    for x in action.X:
        if x in label_of:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for p in frontier:
                for q in reach[p]:
                    if q not in orbit:
                        orbit.add(q)
                        nxt.append(q)
            frontier = nxt
        least = min(orbit, key=idx)
        labels.append(least)
        for member in orbit:
            label_of[member] = least
    return FiniteSet(labels), label_of


def canonical_left_torsor(action: LeftAction) -> LeftTorsor:
    """Equip a free action with its own orbit quotient as the second leg."""
    B, beta = orbit_quotient(action)
    return LeftTorsor(action=action, B=B, beta=beta)


def c_left(T: LeftTorsor) -> Pregroupoid:
    """Turn a left torsor into a pregroupoid on (objects, orbit set).

    ternary(y, x, z) applies the unique arrow moving x to y (their
    fraction) to z; the pregroupoid laws then hold automatically and the
    result passes validation.
    """
    require_valid(validate_left_torsor(T), "left torsor")
    act = T.action.act
    frac: dict[tuple[str, str], str] = {}
    for (g, x), y in act.items():
        frac[(x, y)] = g
    X = T.action.X
    alpha = T.action.alpha
    fibre: dict[str, list[str]] = {}
    for x in X:
        fibre.setdefault(alpha[x], []).append(x)
    ternary: dict[tuple[str, str, str], str] = {}
    for x in X:
        for y in X:
            g = frac.get((x, y))
            if g is None:
                continue
            for z in fibre[alpha[x]]:
                ternary[(y, x, z)] = act[(g, z)]
    return Pregroupoid(
        X=X,
        A=T.action.groupoid.objects,
        B=T.B,
        alpha=dict(alpha),
        beta=dict(T.beta),
        ternary=ternary,
    )


def c_right(T: RightTorsor) -> Pregroupoid:
    """Mirror passage: ternary(y, x, z) moves y by the unique arrow taking x to z."""
    require_valid(validate_right_torsor(T), "right torsor")
    act = T.action.act
    frac: dict[tuple[str, str], str] = {}
    for (x, h), z in act.items():
        frac[(x, z)] = h
    X = T.action.X
    beta = T.action.beta
    fibre: dict[str, list[str]] = {}
    for x in X:
        fibre.setdefault(beta[x], []).append(x)
    ternary: dict[tuple[str, str, str], str] = {}
    for x in X:
        for z in X:
            h = frac.get((x, z))
            if h is None:
                continue
            for y in fibre[beta[x]]:
                ternary[(y, x, z)] = act[(y, h)]
    return Pregroupoid(
        X=X,
        A=T.A,
        B=T.action.groupoid.objects,
        alpha=dict(T.alpha),
        beta=dict(beta),
        ternary=ternary,
    )


def bitorsor_from_envelope(env: Envelope) -> Bitorsor:
    """The canonical bitorsor of an envelope: the two edge groupoids act on
    the carrier by composing on either side.

    The edge groupoids are relabeled back to plain A and B object labels so
    the span is literally the base span of the pregroupoid.
    """
    P = env.base
    G = env.groupoid
    left = relabel_objects(
        full_subgroupoid(G, env.a_objects()), {tag_a(a): a for a in P.A}
    )
    right = relabel_objects(
        full_subgroupoid(G, env.b_objects()), {tag_b(b): b for b in P.B}
    )
    left_act = {
        (c.name, x): G.comp[(c.name, x)]
        for c in env.horizontal.classes
        for x in P.alpha_fibre[c.d1]
    }
    right_act = {
        (x, c.name): G.comp[(x, c.name)]
        for c in env.vertical.classes
        for x in P.beta_fibre[c.d0]
    }
    return Bitorsor(
        X=P.X,
        A=P.A,
        B=P.B,
        alpha=dict(P.alpha),
        beta=dict(P.beta),
        left=left,
        left_act=left_act,
        right=right,
        right_act=right_act,
    )


def env_to_bitorsor(P: Pregroupoid) -> Bitorsor:
    """Build the envelope and read off its canonical bitorsor."""
    return bitorsor_from_envelope(build_envelope(P))


def square_commutes_witness(bi: Bitorsor) -> tuple | None:
    """None when the two induced ternary tables agree; otherwise the first
    differing triple with both values."""
    require_valid(validate_bitorsor(bi), "bitorsor")
    P_l = c_left(forget_right(bi))
    P_r = c_right(forget_left(bi))
    for key in P_l.domain_triples():
        lv = P_l.ternary.get(key)
        rv = P_r.ternary.get(key)
        if lv != rv:
            return (*key, lv, rv)
    return None


def square_commutes(bi: Bitorsor) -> bool:
    return square_commutes_witness(bi) is None


def cyclic_identity_witness(P: Pregroupoid) -> tuple | None:
    """None when envelope -> forget right -> left passage returns P on the
    nose (same carrier, legs and table); otherwise a description of the
    first difference."""
    P2 = c_left(forget_right(env_to_bitorsor(P)))
    if P2.X != P.X:
        return ("carrier", P.X.elements, P2.X.elements)
    if P2.A != P.A or P2.alpha != P.alpha:
        return ("alpha", P.A.elements, P2.A.elements)
    if P2.B != P.B or P2.beta != P.beta:
        return ("beta", P.B.elements, P2.B.elements)
    for key in P.domain_triples():
        if P.ternary.get(key) != P2.ternary.get(key):
            return (*key, P.ternary.get(key), P2.ternary.get(key))
    if P2.ternary != P.ternary:
        return ("table-domain", None, None)
    return None


def cyclic_identity(P: Pregroupoid) -> bool:
    return cyclic_identity_witness(P) is None


@dataclass(frozen=True)
class TorsorMorphism:
    """A functor between the acting groupoids plus a carrier map, compatible
    with the structure maps and the actions.  Works for either side."""

    source: object
    target: object
    functor: GroupoidFunctor
    f_X: dict[str, str]


def validate_left_torsor_morphism(m: TorsorMorphism, max_report: int = 100) -> ValidationReport:
    report = ValidationReport(cap=max_report)
    report.extend(validate_functor(m.functor, max_report=max_report))
    S: LeftTorsor = m.source
    T: LeftTorsor = m.target
    for x in S.action.X:
        if m.f_X[x] not in T.action.X:
            report.add("carrier-map", x)
            return report
    for x in S.action.X:
        if T.action.alpha[m.f_X[x]] != m.functor.obj_map[S.action.alpha[x]]:
            report.add("alpha-compat", x)
    for (g, x), y in S.action.act.items():
        if T.action.act.get((m.functor.arrow_map[g], m.f_X[x])) != m.f_X[y]:
            report.add("action-compat", g, x)
    for x in S.action.X:
        for y in S.action.X:
            if S.beta[x] == S.beta[y] and T.beta[m.f_X[x]] != T.beta[m.f_X[y]]:
                report.add("orbit-compat", x, y)
    return report


def validate_right_torsor_morphism(m: TorsorMorphism, max_report: int = 100) -> ValidationReport:
    report = ValidationReport(cap=max_report)
    report.extend(validate_functor(m.functor, max_report=max_report))
    S: RightTorsor = m.source
    T: RightTorsor = m.target
    for x in S.action.X:
        if m.f_X[x] not in T.action.X:
            report.add("carrier-map", x)
            return report
    for x in S.action.X:
        if T.action.beta[m.f_X[x]] != m.functor.obj_map[S.action.beta[x]]:
            report.add("beta-compat", x)
    for (x, h), y in S.action.act.items():
        if T.action.act.get((m.f_X[x], m.functor.arrow_map[h])) != m.f_X[y]:
            report.add("action-compat", x, h)
    for x in S.action.X:
        for y in S.action.X:
            if S.alpha[x] == S.alpha[y] and T.alpha[m.f_X[x]] != T.alpha[m.f_X[y]]:
                report.add("orbit-compat", x, y)
    return report


def c_left_on_morphism(m: TorsorMorphism) -> PregroupoidMorphism:
    """Push a left torsor morphism through the passage to pregroupoids.

    The orbit-set map is induced: an orbit goes where its members go.
    """
    require_valid(validate_left_torsor_morphism(m), "left torsor morphism")
    S: LeftTorsor = m.source
    T: LeftTorsor = m.target
    f_B: dict[str, str] = {}
    for x in S.action.X:
        b = S.beta[x]
        image = T.beta[m.f_X[x]]
        if f_B.setdefault(b, image) != image:
            raise StructureError(f"orbit map not well defined at {b!r}")
    return PregroupoidMorphism(
        source=c_left(S),
        target=c_left(T),
        f_X=dict(m.f_X),
        f_A=dict(m.functor.obj_map),
        f_B=f_B,
    )


def roundtrip_iso_left(T: LeftTorsor) -> TorsorMorphism:
    """The canonical isomorphism from T to the torsor rebuilt out of its envelope.

    The acting groupoid maps by g -> (fraction of x and g.x) for x over the
    target object of g; the carrier map is the identity.  The construction
    verifies that the choice of x is irrelevant, that the arrow map is
    bijective, and that the actions correspond.
    """
    require_valid(validate_left_torsor(T), "left torsor")
    P = c_left(T)
    env = build_envelope(P)
    T2 = forget_right(bitorsor_from_envelope(env))
    G = T.action.groupoid
    act = T.action.act
    report = ValidationReport()

    arrow_map: dict[str, str] = {}
    for g in G.arrows:
        seen = {
            env.aa_of(x, act[(g, x)])
            for x in T.action.X
            if T.action.alpha[x] == G.d1[g]
        }
        if len(seen) != 1:
            report.add("choice-independence", g, *sorted(seen))
            continue
        arrow_map[g] = seen.pop()
    require_valid(report, "roundtrip isomorphism")

    functor = GroupoidFunctor(G, T2.action.groupoid, {a: a for a in G.objects}, arrow_map)
    if len(set(arrow_map.values())) != len(G.arrows) or len(G.arrows) != len(
        T2.action.groupoid.arrows
    ):
        report.add("bijective-on-arrows")
    for (g, x), y in act.items():
        if T2.action.act.get((arrow_map[g], x)) != y:
            report.add("action-compat", g, x)
    require_valid(report, "roundtrip isomorphism")
    iso = TorsorMorphism(source=T, target=T2, functor=functor, f_X={x: x for x in T.action.X})
    require_valid(validate_left_torsor_morphism(iso), "roundtrip isomorphism")
    return iso


def roundtrip_iso_right(T: RightTorsor) -> TorsorMorphism:
    """Mirror of roundtrip_iso_left for right torsors."""
    require_valid(validate_right_torsor(T), "right torsor")
    P = c_right(T)
    env = build_envelope(P)
    T2 = forget_left(bitorsor_from_envelope(env))
    H = T.action.groupoid
    act = T.action.act
    report = ValidationReport()

    arrow_map: dict[str, str] = {}
    for h in H.arrows:
        seen = {
            env.bb_of(x, act[(x, h)])
            for x in T.action.X
            if T.action.beta[x] == H.d0[h]
        }
        if len(seen) != 1:
            report.add("choice-independence", h, *sorted(seen))
            continue
        arrow_map[h] = seen.pop()
    require_valid(report, "roundtrip isomorphism")

    functor = GroupoidFunctor(H, T2.action.groupoid, {b: b for b in H.objects}, arrow_map)
    if len(set(arrow_map.values())) != len(H.arrows) or len(H.arrows) != len(
        T2.action.groupoid.arrows
    ):
        report.add("bijective-on-arrows")
    for (x, h), y in act.items():
        if T2.action.act.get((x, arrow_map[h])) != y:
            report.add("action-compat", x, h)
    require_valid(report, "roundtrip isomorphism")
    iso = TorsorMorphism(source=T, target=T2, functor=functor, f_X={x: x for x in T.action.X})
    require_valid(validate_right_torsor_morphism(iso), "roundtrip isomorphism")
    return iso


def ad_left(T: LeftTorsor) -> RightTorsor:
    """Swap a left torsor for the right torsor of its envelope."""
    return forget_left(env_to_bitorsor(c_left(T)))


def ad_right(T: RightTorsor) -> LeftTorsor:
    """Swap a right torsor for the left torsor of its envelope."""
    return forget_right(env_to_bitorsor(c_right(T)))


ad = ad_left
