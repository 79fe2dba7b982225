"""Left orders from positive cones and back.

The central object is a LeftOrderWitness: a kernel cone describing a normal
subgroup N together with a cone on the whole group inducing the order on
G/N via x <= y iff x^-1 y lands in the cone.  Quotient orders pull back to
two-piece covers; lexicographic combination and cover merging build new
witnesses out of old ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cones import (
    ConeSet,
    CoverPair,
    Verdict,
    ball_members,
    check_model,
    complement,
    cone_to_obj,
    contains,
    ext_equal,
    finite_bits,
    identity_cone,
    intersection,
    invert_cone,
    is_cover_pair,
    pullback,
    symmetric_part,
    union,
    Pullback,
    Union as UnionNode,
    Intersection as IntersectionNode,
    Complement as ComplementNode,
    Identity as IdentityNode,
    FiniteBits,
)
from .errors import ModelMismatch, NotACone, NotNormalized, TrivialQuotient
from .groups import DEFAULT_BALL_CAP, GroupModel, Homomorphism


# ---------------------------------------------------------------------------
# Pulling cones back through homomorphisms
# ---------------------------------------------------------------------------

def pullback_cone(target_cone: ConeSet, hom: Homomorphism) -> ConeSet:
    """Preimage of a target cone under a homomorphism, as a source cone.

    Supported target nodes: pullbacks (composed through hom), boolean
    operations, and the identity singleton (which becomes the kernel cone).
    Finite targets use the table form and bitset cones.
    """
    src = hom.source
    if hom.table_map is not None:
        # finite quotient: materialize the target cone exactly, then pull
        # the bitset back through the element map
        if hom.target.kind != "finite":
            raise ModelMismatch("table-map homomorphisms require a finite target")
        check_model(hom.target, target_cone)
        hits = {q for q in hom.target.group.elements() if target_cone.member(q)}
        good = {i for i, c in enumerate(hom.table_map) if c in hits}
        return finite_bits(src, good)

    def walk(node: ConeSet) -> ConeSet:
        if isinstance(node, Pullback):
            return pullback(hom.compose_into(node.hom), node.region)
        if isinstance(node, UnionNode):
            return union(*[walk(c) for c in node.parts])
        if isinstance(node, IntersectionNode):
            return intersection(*[walk(c) for c in node.parts])
        if isinstance(node, ComplementNode):
            return complement(walk(node.part))
        if isinstance(node, IdentityNode):
            return pullback(hom, "lex_zero")
        raise ModelMismatch(
            f"cannot pull back a {type(node).__name__} node through a homomorphism"
        )

    return walk(target_cone)


def standard_lex_cone(rank: int) -> ConeSet:
    """The non-negative lex cone on Z^rank."""
    from .groups import zr_identity_hom

    return pullback(zr_identity_hom(rank), "lex_nonneg")


# ---------------------------------------------------------------------------
# Comparators
# ---------------------------------------------------------------------------

@dataclass
class LeftOrderComparator:
    """Total left-invariant comparator induced by a positive cone."""

    model: GroupModel
    cone: ConeSet

    def le(self, x, y) -> bool:
        return contains(self.model, self.cone, self.model.mul(self.model.inv(x), y))

    def lt(self, x, y) -> bool:
        return self.le(x, y) and not self.le(y, x)


def validate_cone_axioms(model: GroupModel, cone: ConeSet, radius: int,
                         cap: int = DEFAULT_BALL_CAP) -> None:
    """Check P u P^-1 covers the ball and P n P^-1 is only the identity.
    Raises NotACone with the first failing element."""
    check_model(model, cone)
    inv_cone = invert_cone(model, cone)
    if model.kind == "finite":
        ball = list(model.group.elements())
        index_of = {x: x for x in ball}
    else:
        ball = model.ball(radius, cap)
        index_of = model.ball_index(radius, cap)
    mem = ball_members(cone, ball, index_of)
    mem_inv = ball_members(inv_cone, ball, index_of)
    missing = next((i for i in range(len(ball)) if i not in mem and i not in mem_inv), None)
    if missing is not None:
        raise NotACone("cone union its inverse misses an element",
                       witness=(ball[missing],))
    bad = next((i for i in sorted(mem & mem_inv) if i != 0), None)
    if bad is not None:
        raise NotACone("cone meets its inverse off the identity",
                       witness=(ball[bad],))


def order_from_cone(model: GroupModel, cone: ConeSet, radius: int,
                    cap: int = DEFAULT_BALL_CAP) -> LeftOrderComparator:
    """Comparator x <= y iff x^-1 y is in the cone, after verifying the
    cone axioms at the working radius."""
    validate_cone_axioms(model, cone, radius, cap)
    return LeftOrderComparator(model, cone)


# ---------------------------------------------------------------------------
# Left-order witnesses
# ---------------------------------------------------------------------------

@dataclass
class LeftOrderWitness:
    """Kernel cone N plus a quotient cone V: xN <= yN iff x^-1 y in V."""

    model: GroupModel
    kernel: ConeSet
    cone: ConeSet

    def comparator(self) -> LeftOrderComparator:
        return LeftOrderComparator(self.model, self.cone)

    def to_obj(self) -> dict:
        return {
            "model": self.model.selector(),
            "kernel": cone_to_obj(self.kernel),
            "cone": cone_to_obj(self.cone),
        }


def validate_witness(witness: LeftOrderWitness, radius: int,
                     cap: int = DEFAULT_BALL_CAP) -> dict:
    """Verdicts for the witness invariants: kernel closure, inverse
    closure, conjugation stability; cone coverage and antisymmetry into
    the kernel."""
    from .cones import is_subsemigroup

    model = witness.model
    check_model(model, witness.kernel)
    check_model(model, witness.cone)
    if model.kind == "finite":
        ball = list(model.group.elements())
        index_of = {x: x for x in ball}
        rad = 0
    else:
        ball = model.ball(radius, cap)
        index_of = model.ball_index(radius, cap)
        rad = radius
    kern, cone = witness.kernel, witness.cone
    out: dict = {}
    out["kernel_closed"] = is_subsemigroup(model, kern, radius, cap)

    kmem = sorted(ball_members(kern, ball, index_of))
    bad = next((i for i in kmem if not kern.member(model.inv(ball[i]))), None)
    out["kernel_inverse_closed"] = (
        Verdict("verified", radius_checked=rad) if bad is None
        else Verdict("counterexample", witness=(ball[bad],), radius_checked=rad)
    )

    from .cones import value_profile

    if value_profile(kern) is not None:
        # abelian-image leaves cannot distinguish conjugates: exact verdict
        out["kernel_conjugation_stable"] = Verdict("verified", radius_checked=0)
    else:
        conj_bad = None
        memo: dict = {}
        for g in ball:
            for i in kmem:
                c = model.conj(g, ball[i])
                v = memo.get(c)
                if v is None:
                    v = kern.member(c)
                    memo[c] = v
                if not v:
                    conj_bad = (g, ball[i])
                    break
            if conj_bad:
                break
        out["kernel_conjugation_stable"] = (
            Verdict("verified", radius_checked=rad) if conj_bad is None
            else Verdict("counterexample", witness=conj_bad, radius_checked=rad)
        )

    inv_cone = invert_cone(model, cone)
    cmem = ball_members(cone, ball, index_of)
    imem = ball_members(inv_cone, ball, index_of)
    missing = next((i for i in range(len(ball)) if i not in cmem and i not in imem), None)
    out["cone_covers"] = (
        Verdict("verified", radius_checked=rad) if missing is None
        else Verdict("counterexample", witness=(ball[missing],), radius_checked=rad)
    )
    kset = set(kmem)
    stray = next((i for i in sorted(cmem & imem) if i not in kset), None)
    out["cone_antisymmetric_mod_kernel"] = (
        Verdict("verified", radius_checked=rad) if stray is None
        else Verdict("counterexample", witness=(ball[stray],), radius_checked=rad)
    )
    return out


def witness_ok(verdicts: dict) -> bool:
    return all(v.ok for v in verdicts.values())


def totality_mod_kernel(witness: LeftOrderWitness, radius: int,
                        cap: int = DEFAULT_BALL_CAP) -> Optional[tuple]:
    """Exactly one of x < y, y < x, x^-1 y in kernel, for all pairs in the
    radius ball.  The condition depends only on v = x^-1 y, and the set of
    such products over ball(radius) pairs is exactly ball(2 * radius): any
    word of length <= 2r splits into two halves of length <= r.

    When both cones are value-pure the scan collapses further, to the image
    of the doubled ball under the shared homomorphisms (computed directly
    as sums of generator images); otherwise the doubled ball is enumerated.

    Returns None when verified, else a failing product (element or image
    vector, whichever granularity the scan ran at).
    """
    from .cones import _eval_by_values, value_profile

    model = witness.model
    cone, kern = witness.cone, witness.kernel
    homs_c = value_profile(cone)
    homs_k = value_profile(kern)

    def condition(le_xy, le_yx, in_kernel):
        lt_xy = le_xy and not le_yx
        lt_yx = le_yx and not le_xy
        return (lt_xy + lt_yx + in_kernel) == 1

    if model.kind != "finite" and homs_c is not None and homs_k is not None:
        homs = list(homs_c)
        for h in homs_k:
            if h not in homs:
                homs.append(h)
        # the joint images of ball(2r) are exactly the <= 2r-fold signed
        # sums of the generator images: a small vector-space BFS
        steps = []
        for g in model.generators():
            vec = tuple(v for h in homs for v in h.apply(g))
            steps.append(vec)
            steps.append(tuple(-v for v in vec))
        zero = tuple(0 for h in homs for _ in range(h.rank()))
        seen = {zero}
        frontier = [zero]
        for _ in range(2 * radius):
            nxt = []
            for w in frontier:
                for s in steps:
                    t = tuple(a + b for a, b in zip(w, s))
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt

        def split(w):
            out = {}
            pos = 0
            for h in homs:
                out[h] = w[pos:pos + h.rank()]
                pos += h.rank()
            return out

        # the identity itself
        if not condition(cone.member(model.identity()),
                         cone.member(model.identity()),
                         kern.member(model.identity())):
            return (model.identity(),)
        for w in seen:
            neg = tuple(-v for v in w)
            le_xy = _eval_by_values(cone, split(w), is_identity=False)
            le_yx = _eval_by_values(cone, split(neg), is_identity=False)
            in_k = _eval_by_values(kern, split(w), is_identity=False)
            if not condition(le_xy, le_yx, in_k):
                if w == zero:
                    # only real if a nontrivial product has image zero
                    hit = next((v for v in model.ball(2 * radius, cap)
                                if v != model.identity()
                                and all(h.apply(v) == (0,) * h.rank() for h in homs)),
                               None)
                    if hit is None:
                        continue
                    return (hit,)
                return (w,)
        return None

    doubled = list(model.group.elements()) if model.kind == "finite" \
        else model.ball(2 * radius, cap)
    for v in doubled:
        vi = model.inv(v)
        if not condition(cone.member(v), cone.member(vi), kern.member(v)):
            return (v,)
    return None


# ---------------------------------------------------------------------------
# Quotient orders and pullback covers
# ---------------------------------------------------------------------------

def cone_from_quotient_order(model: GroupModel, quotient_hom: Homomorphism,
                             quotient_cone: ConeSet, radius: int = 6,
                             cap: int = DEFAULT_BALL_CAP) -> LeftOrderWitness:
    """Package the order pulled back from a quotient as a witness with
    kernel = preimage of the target identity."""
    if quotient_hom.source != model:
        raise ModelMismatch("homomorphism source differs from the model")
    target = quotient_hom.target
    validate_cone_axioms(target, quotient_cone, radius, cap)
    kernel = pullback_cone(identity_cone(target), quotient_hom)
    cone = pullback_cone(quotient_cone, quotient_hom)
    return LeftOrderWitness(model, kernel, cone)


def pullback_cover(model: GroupModel, quotient_hom: Homomorphism,
                   quotient_cone: ConeSet | None = None, radius: int = 6,
                   cap: int = DEFAULT_BALL_CAP) -> CoverPair:
    """The two-piece cover induced by a nontrivial quotient order:
    B = preimage of the non-negative region, A = preimage of the strictly
    negative region with the identity adjoined."""
    if quotient_hom.source != model:
        raise ModelMismatch("homomorphism source differs from the model")
    target = quotient_hom.target
    if quotient_cone is None:
        if target.kind != "zr_cross_finite" or target.orders:
            raise ModelMismatch("default cone requires a Z^r target")
        quotient_cone = standard_lex_cone(target.rank)
    validate_cone_axioms(target, quotient_cone, radius, cap)

    # nontriviality: some ball element must map outside cone n cone^-1
    tkernel = intersection(quotient_cone, invert_cone(target, quotient_cone))
    ball = list(model.group.elements()) if model.kind == "finite" else model.ball(radius, cap)
    if all(tkernel.member(quotient_hom.apply(x)) for x in ball):
        raise TrivialQuotient("every ball element maps into the trivial part of the order")

    b = pullback_cone(quotient_cone, quotient_hom)
    a = union(complement(b), identity_cone(model))
    return is_cover_pair(model, a, b, radius, cap, check_duality=True)


def cover_from_witness(witness: LeftOrderWitness, radius: int = 6,
                       cap: int = DEFAULT_BALL_CAP) -> CoverPair:
    """The cover determined directly by a witness cone: B is the cone,
    A is its complement plus the identity."""
    model = witness.model
    b = witness.cone
    a = union(complement(b), identity_cone(model))
    return is_cover_pair(model, a, b, radius, cap, check_duality=True)


# ---------------------------------------------------------------------------
# Lexicographic combination and cover merging
# ---------------------------------------------------------------------------

def lex_combine(w1: LeftOrderWitness, w2: LeftOrderWitness) -> LeftOrderWitness:
    """Order by w1 first, breaking ties inside its kernel by w2.  The new
    kernel is the intersection of the two kernels."""
    if w1.model != w2.model:
        raise ModelMismatch("witnesses over different models")
    model = w1.model
    kernel = intersection(w1.kernel, w2.kernel)
    strict1 = intersection(w1.cone, complement(w1.kernel))
    cone = union(strict1, intersection(w1.kernel, w2.cone))
    return LeftOrderWitness(model, kernel, cone)


def _require_normalized(cover: CoverPair, radius: int, cap: int) -> ConeSet:
    """Checks a merge input is normalized; returns its maximal subgroup."""
    model = cover.model
    flags = is_cover_pair(model, cover.a, cover.b, radius, cap)
    if not flags.normalized_ok():
        bad = sorted(k for k, v in flags.flags.items() if not v.ok)
        raise NotNormalized(f"cover fails {', '.join(bad)}")
    n = symmetric_part(model, cover.b)
    from .cones import value_profile

    if value_profile(n) is not None:
        return n  # conjugation stable by AST shape
    if model.kind == "finite":
        ball = list(model.group.elements())
        index_of = {x: x for x in ball}
        probe = ball
    else:
        ball = model.ball(radius, cap)
        index_of = model.ball_index(radius, cap)
        # conjugators from a small ball; explicit-set inputs only
        probe = model.ball(min(radius, 2), cap)
    nmem = [ball[i] for i in sorted(ball_members(n, ball, index_of))]
    for g in probe:
        for h in nmem:
            if not n.member(model.conj(g, h)):
                raise NotNormalized(
                    f"maximal subgroup not normal at conjugator {g!r}"
                )
    return n


def merge_covers(c1: CoverPair, c2: CoverPair, radius: int = 6,
                 cap: int = DEFAULT_BALL_CAP) -> CoverPair:
    """Merge two normalized covers: the new B keeps the strictly positive
    part of the first cover and refines its kernel by the second cover."""
    if c1.model != c2.model:
        raise ModelMismatch("covers over different models")
    model = c1.model
    n1 = _require_normalized(c1, radius, cap)
    n2 = _require_normalized(c2, radius, cap)
    b_new = union(intersection(c1.b, complement(n1)), intersection(n1, c2.b))
    a_new = union(complement(b_new), identity_cone(model))
    merged = is_cover_pair(model, a_new, b_new, radius, cap, check_duality=True)

    if model.kind == "finite":
        ball = list(model.group.elements())
        index_of = {x: x for x in ball}
        rad = 0
    else:
        ball = model.ball(radius, cap)
        index_of = model.ball_index(radius, cap)
        rad = radius
    bn = ball_members(b_new, ball, index_of)
    b1 = ball_members(c1.b, ball, index_of)
    stray = next((i for i in sorted(bn - b1)), None)
    merged.flags["b_shrinks"] = (
        Verdict("verified", radius_checked=rad) if stray is None
        else Verdict("counterexample", witness=(ball[stray],), radius_checked=rad)
    )
    an = ball_members(a_new, ball, index_of)
    a1 = ball_members(c1.a, ball, index_of)
    stray = next((i for i in sorted(a1 - an)), None)
    merged.flags["a_grows"] = (
        Verdict("verified", radius_checked=rad) if stray is None
        else Verdict("counterexample", witness=(ball[stray],), radius_checked=rad)
    )
    diff = ext_equal(model, symmetric_part(model, b_new), intersection(n1, n2), radius, cap)
    merged.flags["merged_kernel"] = (
        Verdict("verified", radius_checked=rad) if diff is None
        else Verdict("counterexample", witness=diff, radius_checked=rad)
    )
    return merged
