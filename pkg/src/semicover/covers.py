"""The cover engine: normalize a two-piece cover, split its maximal
subgroup along a conjugator, refine, and descend to a pair whose B-side
maximal subgroup is (ball-locally) normal, yielding a left-order witness.

All ball-local verdicts carry the radius they were checked at; the engine
never silently promotes a ball verdict to a global claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cones import (
    ConeSet,
    CoverPair,
    Verdict,
    ball_members,
    complement,
    explicit,
    finite_bits,
    identity_cone,
    intersection,
    is_cover_pair,
    symmetric_part,
    union,
)
from .errors import (
    ClosureViolation,
    DepthExceeded,
    IdentityOnlyH,
    LemmaViolation,
    NotACover,
    NothingToRefine,
)
from .groups import DEFAULT_BALL_CAP, FiniteGroup, GroupModel
from .orders import LeftOrderWitness, validate_witness, witness_ok

B_SIDE = "B_side"
A_SIDE = "A_side"


def _ball_and_index(model: GroupModel, radius: int, cap: int):
    if model.kind == "finite":
        ball = list(model.group.elements())
        return ball, {x: x for x in ball}, 0
    return model.ball(radius, cap), model.ball_index(radius, cap), radius


class _Memo:
    """Per-call membership cache for one cone (products repeat heavily)."""

    __slots__ = ("cone", "cache")

    def __init__(self, cone: ConeSet):
        self.cone = cone
        self.cache: dict = {}

    def __call__(self, x) -> bool:
        v = self.cache.get(x)
        if v is None:
            v = self.cone.member(x)
            self.cache[x] = v
        return v


def conjugation_stable_by_ast(cone: ConeSet) -> bool:
    """True when membership provably cannot change under conjugation: every
    leaf factors through a homomorphism into an abelian group (where
    conjugates share images) or is the identity singleton."""
    from .cones import value_profile

    return value_profile(cone) is not None


# ---------------------------------------------------------------------------
# Intersection classification (orientation of the shared part)
# ---------------------------------------------------------------------------

@dataclass
class IntersectionSplit:
    side: str                 # which side is guaranteed to absorb <I>
    i_a: list                 # x in I with x^-1 in A only
    i_b: list                 # x in I with x^-1 in B only
    i_members: list


def classify_intersection(model: GroupModel, a: ConeSet, b: ConeSet,
                          radius: int, cap: int = DEFAULT_BALL_CAP) -> IntersectionSplit:
    """Split I = A n B by where inverses land.  For a genuine cover one of
    the two parts is empty; both nonempty is reported as a LemmaViolation
    with the concrete non-closure evidence it implies."""
    ball, index_of, _ = _ball_and_index(model, radius, cap)
    imem = sorted(ball_members(intersection(a, b), ball, index_of))
    i_a, i_b = [], []
    for i in imem:
        x = ball[i]
        xi = model.inv(x)
        in_a, in_b = a.member(xi), b.member(xi)
        if in_a and not in_b:
            i_a.append(x)
        elif in_b and not in_a:
            i_b.append(x)
    if i_a and i_b:
        x, y = i_a[0], i_b[0]
        z = model.mul(model.inv(x), model.inv(y))
        # whichever side holds z, multiplying back escapes that side
        if a.member(z):
            evidence = ("A", (x, z), model.mul(x, z))   # x*z = y^-1, not in A
        elif b.member(z):
            evidence = ("B", (z, y), model.mul(z, y))   # z*y = x^-1, not in B
        else:
            evidence = ("cover", (z,), z)               # z escapes both sides
        raise LemmaViolation(
            "both halves of the intersection split are nonempty",
            witness=(x, y), non_closure=evidence,
        )
    side = A_SIDE if i_a else B_SIDE
    return IntersectionSplit(side, i_a, i_b, [ball[i] for i in imem])


# ---------------------------------------------------------------------------
# Lemma-conclusion verifiers
# ---------------------------------------------------------------------------

def maximal_subgroup(model: GroupModel, b: ConeSet) -> ConeSet:
    """Symmetric part of a semigroup-closed cone: its maximal subgroup."""
    return symmetric_part(model, b)


def check_coset_saturation(model: GroupModel, cover: CoverPair, radius: int,
                           cap: int = DEFAULT_BALL_CAP) -> Verdict:
    """For h in H and x in A - {1}: hx and xh stay in A - {1}; likewise
    B - H is stable under multiplication by H on both sides."""
    ball, index_of, rad = _ball_and_index(model, radius, cap)
    one = model.identity()
    a_mem, b_mem = _Memo(cover.a), _Memo(cover.b)
    h_mem = _Memo(symmetric_part(model, cover.b))
    hmem = [ball[i] for i in sorted(ball_members(h_mem.cone, ball, index_of))]
    amem = [ball[i] for i in sorted(ball_members(cover.a, ball, index_of)) if ball[i] != one]
    bmem = [ball[i] for i in sorted(ball_members(cover.b, ball, index_of))]
    bh = [x for x in bmem if not h_mem(x)]

    def in_a_minus_one(x):
        return x != one and a_mem(x)

    def in_b_minus_h(x):
        return b_mem(x) and not h_mem(x)

    for h in hmem:
        for x in amem:
            if not in_a_minus_one(model.mul(h, x)):
                return Verdict("counterexample", witness=(h, x), radius_checked=rad,
                               note="left product leaves A - {1}")
            if not in_a_minus_one(model.mul(x, h)):
                return Verdict("counterexample", witness=(h, x), radius_checked=rad,
                               note="right product leaves A - {1}")
        for x in bh:
            if not in_b_minus_h(model.mul(h, x)):
                return Verdict("counterexample", witness=(h, x), radius_checked=rad,
                               note="left product leaves B - H")
            if not in_b_minus_h(model.mul(x, h)):
                return Verdict("counterexample", witness=(h, x), radius_checked=rad,
                               note="right product leaves B - H")
    return Verdict("verified", radius_checked=rad)


def check_inverse_duality(model: GroupModel, cover: CoverPair, radius: int,
                          cap: int = DEFAULT_BALL_CAP) -> Verdict:
    """(A - {1})^-1 = B - H, both inclusions checked on the ball."""
    ball, index_of, rad = _ball_and_index(model, radius, cap)
    one = model.identity()
    a_mem, b_mem = _Memo(cover.a), _Memo(cover.b)
    h_mem = _Memo(symmetric_part(model, cover.b))
    for i in sorted(ball_members(cover.a, ball, index_of)):
        x = ball[i]
        if x == one:
            continue
        xi = model.inv(x)
        if not (b_mem(xi) and not h_mem(xi)):
            return Verdict("counterexample", witness=(x,), radius_checked=rad,
                           note="inverse of an A element is not in B - H")
    for i in sorted(ball_members(cover.b, ball, index_of)):
        x = ball[i]
        if h_mem(x):
            continue
        xi = model.inv(x)
        if not (a_mem(xi) and xi != one):
            return Verdict("counterexample", witness=(x,), radius_checked=rad,
                           note="inverse of a B - H element is not in A - {1}")
    return Verdict("verified", radius_checked=rad)


# ---------------------------------------------------------------------------
# Cover normalization
# ---------------------------------------------------------------------------

def reduce_cover(model: GroupModel, a: ConeSet, b: ConeSet, radius: int,
                 cap: int = DEFAULT_BALL_CAP) -> CoverPair:
    """Normalize a verified cover: orient the shared part into B, strip it
    from A (keeping the identity), and, in the degenerate branch where the
    maximal subgroup of B is exactly the nontrivial shared part, swap the
    roles of the two sides first.

    The output flags include trivial intersection and inverse duality.
    """
    base = is_cover_pair(model, a, b, radius, cap, check_intersection=False)
    if not base.core_ok():
        bad = sorted(k for k, v in base.flags.items() if not v.ok)
        raise NotACover(f"input pair fails {', '.join(bad)}", flags=base.flags)

    # the construction assumes the identity sits in both sides
    one_cone = identity_cone(model)
    a = union(a, one_cone)
    b = union(b, one_cone)

    split = classify_intersection(model, a, b, radius, cap)
    if split.side == A_SIDE:
        a, b = b, a

    ball, index_of, _ = _ball_and_index(model, radius, cap)
    i_cone = intersection(a, b)
    i_ball = ball_members(i_cone, ball, index_of)
    h_ball = ball_members(symmetric_part(model, b), ball, index_of)
    nontrivial_i = len(i_ball) > 1

    def build(a_side: ConeSet, b_side: ConeSet) -> CoverPair:
        shared = intersection(a_side, b_side)
        a_star = union(intersection(a_side, complement(shared)), one_cone)
        out = is_cover_pair(model, a_star, b_side, radius, cap, check_duality=True)
        return out

    if h_ball == i_ball and nontrivial_i:
        # degenerate branch: H = I, so the mirrored argument applies and
        # the names of the two sides are switched before extraction
        return build(b, a)
    result = build(a, b)
    if h_ball == i_ball and not result.flags["inverse_duality"].ok:
        # trivial shared part with a one-sided failure: the mirrored
        # orientation is the one the duality argument supports
        swapped = build(b, a)
        if swapped.flags["inverse_duality"].ok:
            return swapped
    return result


# ---------------------------------------------------------------------------
# Conjugate split and refinement
# ---------------------------------------------------------------------------

@dataclass
class ConjugateSplit:
    h_a: ConeSet
    h_b: ConeSet
    g: object
    already_normal: bool
    h_a_members: list = field(default_factory=list)


def conjugate_split(model: GroupModel, cover: CoverPair, g,
                    radius: Optional[int] = None,
                    cap: int = DEFAULT_BALL_CAP) -> ConjugateSplit:
    """Split H = maximal_subgroup(B) by where conjugation by g sends each
    element: H_A collects the part landing in A, H_B the part landing in B.
    Ball-local: the split sets are explicit element lists."""
    radius = cover.radius if radius is None else radius
    ball, index_of, _ = _ball_and_index(model, radius, cap)
    one = model.identity()
    h_cone = symmetric_part(model, cover.b)
    hmem = [ball[i] for i in sorted(ball_members(h_cone, ball, index_of))]
    if all(x == one for x in hmem):
        raise IdentityOnlyH("the maximal subgroup of B is trivial on the ball")
    h_a, h_b = [], []
    stable = True
    for h in hmem:
        if h == one:
            continue
        c = model.conj(g, h)
        if not h_cone.member(c):
            stable = False
        if cover.a.member(c) and not cover.b.member(c):
            h_a.append(h)
        else:
            h_b.append(h)
    if stable and not h_a:
        return ConjugateSplit(identity_cone(model), h_cone, g, already_normal=True)
    if model.kind == "finite":
        ha_cone = finite_bits(model, [one] + h_a) if h_a else identity_cone(model)
        hb_cone = finite_bits(model, [one] + h_b)
    else:
        ha_cone = union(explicit(model, h_a), identity_cone(model)) if h_a \
            else identity_cone(model)
        hb_cone = union(explicit(model, h_b), identity_cone(model)) if h_b \
            else identity_cone(model)
    return ConjugateSplit(ha_cone, hb_cone, g, already_normal=False, h_a_members=h_a)


def refine_pair(model: GroupModel, cover: CoverPair, g,
                radius: Optional[int] = None, cap: int = DEFAULT_BALL_CAP,
                verify: bool = True) -> CoverPair:
    """Move the A-landing part of H across: A' = A u H_A and
    B' = (B - H_A) u {1}.  With verify=True the construction is checked on
    the ball: both sides closed, strict inclusions, inverse property, and
    no nontrivial subgroup inside A'."""
    radius = cover.radius if radius is None else radius
    split = conjugate_split(model, cover, g, radius, cap)
    if split.already_normal or not split.h_a_members:
        raise NothingToRefine(f"conjugation by {g!r} moves nothing into A")
    ha = split.h_a
    a_new = union(cover.a, ha)
    b_new = union(intersection(cover.b, complement(ha)), identity_cone(model))
    refined = is_cover_pair(model, a_new, b_new, radius, cap, check_duality=False)
    if not verify:
        return refined

    from .cones import is_subsemigroup

    ball, index_of, _ = _ball_and_index(model, radius, cap)
    for name, cone in (("B'", b_new), ("A'", a_new)):
        v = is_subsemigroup(model, cone, radius, cap)
        if not v.ok:
            witness = v.witness
            if name == "B'":
                # prefer a pair whose product lands in the moved piece: the
                # exact case the construction's closure argument excludes
                ha_mem = _Memo(ha)
                bmem = [ball[i] for i in sorted(ball_members(b_new, ball, index_of))]
                hit = next(
                    ((b1, b2) for b1 in bmem for b2 in bmem
                     if model.mul(b1, b2) != model.identity()
                     and ha_mem(model.mul(b1, b2))),
                    None,
                )
                if hit is not None:
                    witness = hit
            raise ClosureViolation(
                f"{name} is not closed at the working radius",
                witness=witness, check=f"closure_{name}",
            )
    a_old = ball_members(cover.a, ball, index_of)
    a_star = ball_members(a_new, ball, index_of)
    b_old = ball_members(cover.b, ball, index_of)
    b_star = ball_members(b_new, ball, index_of)
    if not (a_old < a_star):
        raise ClosureViolation("A does not grow strictly", check="a_strict")
    if not (b_star < b_old):
        raise ClosureViolation("B does not shrink strictly", check="b_strict")
    one = model.identity()
    for i in sorted(a_star):
        x = ball[i]
        if x != one and not b_new.member(model.inv(x)):
            raise ClosureViolation("inverse of an A' element is missing from B'",
                                   witness=(x,), check="inverse_property")
        if x != one and a_new.member(model.inv(x)):
            raise ClosureViolation("A' contains a nontrivial symmetric pair",
                                   witness=(x,), check="no_subgroup")
    return refined


# ---------------------------------------------------------------------------
# Descent
# ---------------------------------------------------------------------------

@dataclass
class DescentState:
    current: CoverPair
    step: int
    history: list
    outcome: str                     # already_normal | normal_found | depth_exceeded
    normal: Optional[ConeSet] = None

    @property
    def succeeded(self) -> bool:
        return self.outcome in ("already_normal", "normal_found")

    def to_obj(self, element_fmt) -> dict:
        return {
            "outcome": self.outcome,
            "step": self.step,
            "history": [
                {"step": s, "g": element_fmt(g), "witness": element_fmt(h)}
                for s, g, h in self.history
            ],
        }


def _normality_violation(model: GroupModel, n_cone: ConeSet, radius: int, cap: int):
    """First (g, h) in BFS order with a conjugate of h by g escaping N.
    Cones whose AST proves conjugation stability are exact: no scan."""
    if conjugation_stable_by_ast(n_cone):
        return None
    ball, index_of, _ = _ball_and_index(model, radius, cap)
    nmem = [ball[i] for i in sorted(ball_members(n_cone, ball, index_of))]
    member = _Memo(n_cone)
    for g in ball:
        if g == model.identity():
            continue
        for h in nmem:
            if not member(model.conj(g, h)) or \
               not member(model.conj(model.inv(g), h)):
                return g, h
    return None


def minimal_pair_descent(model: GroupModel, cover: CoverPair, max_depth: int,
                         radius: Optional[int] = None,
                         cap: int = DEFAULT_BALL_CAP) -> DescentState:
    """Iteratively refine the pair until the maximal subgroup of the B side
    is ball-locally normal, or the depth budget runs out.  The violating
    conjugator is always the first one in BFS order, so runs are
    reproducible."""
    radius = cover.radius if radius is None else radius
    ball, index_of, _ = _ball_and_index(model, radius, cap)
    current = cover
    history: list = []
    step = 0
    while True:
        n_cone = symmetric_part(model, current.b)
        violation = _normality_violation(model, n_cone, radius, cap)
        if violation is None:
            outcome = "already_normal" if step == 0 else "normal_found"
            return DescentState(current, step, history, outcome, normal=n_cone)
        if step >= max_depth:
            return DescentState(current, step, history, "depth_exceeded")
        g, h = violation
        v_before = len(ball_members(current.b, ball, index_of))
        current = refine_pair(model, current, g, radius, cap)
        v_after = len(ball_members(current.b, ball, index_of))
        if not v_after < v_before:
            raise ClosureViolation("descent did not strictly shrink the B side",
                                   check="descent_monotone")
        history.append((step + 1, g, h))
        step += 1


def order_witness_from_cover(model: GroupModel, a: ConeSet, b: ConeSet,
                             radius: int, max_depth: int = 8,
                             cap: int = DEFAULT_BALL_CAP) -> LeftOrderWitness:
    """Normalize, descend, and package the resulting pair as a left-order
    witness with kernel N and cone V (the final B side)."""
    normalized = reduce_cover(model, a, b, radius, cap)
    state = minimal_pair_descent(model, normalized, max_depth, radius, cap)
    if not state.succeeded:
        raise DepthExceeded(f"descent exhausted after {state.step} steps", state=state)
    witness = LeftOrderWitness(model, kernel=state.normal, cone=state.current.b)
    verdicts = validate_witness(witness, radius, cap)
    if not witness_ok(verdicts):
        bad = sorted(k for k, v in verdicts.items() if not v.ok)
        raise NotACover(f"descended witness fails {', '.join(bad)}", flags=verdicts)
    return witness


# ---------------------------------------------------------------------------
# Torsion obstruction
# ---------------------------------------------------------------------------

@dataclass
class TorsionReport:
    group_name: str
    order: int
    traces: list            # (element, order, inverse witness power)
    conclusion: str
    exhaustive: Optional[dict] = None

    def to_obj(self) -> dict:
        obj = {
            "group": self.group_name,
            "order": self.order,
            "generator_traces": [
                {"element": g, "order": n, "inverse_as_power": w}
                for g, n, w in self.traces
            ],
            "conclusion": self.conclusion,
        }
        if self.exhaustive is not None:
            obj["exhaustive_search"] = self.exhaustive
        return obj


def torsion_obstruction(group: FiniteGroup, exhaustive_cap: int = 8) -> TorsionReport:
    """Proof-trace report that a group generated by finite-order elements
    admits no two-piece cover: every generator g of order n satisfies
    g^(n-1) = g^-1, forcing g into the maximal subgroup of B.  Small groups
    additionally get an exhaustive search confirming zero covers."""
    from .groups import element_order

    traces = []
    for g in range(1, group.order):
        n, wit = element_order(group, g)
        assert wit == group.inv(g)
        traces.append((g, n, wit))
    conclusion = (
        "every generator equals a positive power of its inverse, so both lie "
        "in the B side's maximal subgroup; no two proper closed subsets cover "
        "the group"
    )
    exhaustive = None
    if group.order <= exhaustive_cap:
        from .covering import two_cover_search

        report = two_cover_search(group, cap=exhaustive_cap)
        exhaustive = report
    return TorsionReport(group.name, group.order, traces, conclusion, exhaustive)
