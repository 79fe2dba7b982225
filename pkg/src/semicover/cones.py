"""Decidable subset descriptions over group models.

A ConeSet is an immutable expression tree.  Membership is evaluated
structurally and is decidable for every element of the owning model.
Verification is exact on finite groups and ball-local on infinite models;
ball-local verdicts always carry the radius they were checked at.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ModelMismatch, ParseError
from .groups import (
    DEFAULT_BALL_CAP,
    GroupModel,
    Homomorphism,
    format_element,
    parse_element,
)

LEX_REGIONS = ("lex_pos", "lex_nonneg", "lex_zero")


def _lex_sign(vec) -> int:
    for v in vec:
        if v > 0:
            return 1
        if v < 0:
            return -1
    return 0


def region_test(region: str, vec) -> bool:
    s = _lex_sign(vec)
    if region == "lex_pos":
        return s > 0
    if region == "lex_nonneg":
        return s >= 0
    if region == "lex_zero":
        return s == 0
    raise ParseError(f"unknown lex region {region!r}")


# ---------------------------------------------------------------------------
# AST nodes
# ---------------------------------------------------------------------------

class ConeSet:
    """Base class; concrete nodes below.  All nodes carry their model."""

    model: GroupModel

    def member(self, x) -> bool:
        raise NotImplementedError

    def children(self) -> tuple["ConeSet", ...]:
        return ()


@dataclass(frozen=True)
class FiniteBits(ConeSet):
    model: GroupModel
    indices: frozenset

    def member(self, x) -> bool:
        return x in self.indices


@dataclass(frozen=True)
class Pullback(ConeSet):
    model: GroupModel
    hom: Homomorphism
    region: str

    def member(self, x) -> bool:
        return region_test(self.region, self.hom.apply(x))


@dataclass(frozen=True)
class Union(ConeSet):
    model: GroupModel
    parts: tuple

    def member(self, x) -> bool:
        return any(c.member(x) for c in self.parts)

    def children(self):
        return self.parts


@dataclass(frozen=True)
class Intersection(ConeSet):
    model: GroupModel
    parts: tuple

    def member(self, x) -> bool:
        return all(c.member(x) for c in self.parts)

    def children(self):
        return self.parts


@dataclass(frozen=True)
class Complement(ConeSet):
    model: GroupModel
    part: ConeSet

    def member(self, x) -> bool:
        return not self.part.member(x)

    def children(self):
        return (self.part,)


@dataclass(frozen=True)
class ExplicitSet(ConeSet):
    model: GroupModel
    elements: frozenset
    mode: str = "include"  # include -> the listed set; exclude -> its complement

    def member(self, x) -> bool:
        inside = x in self.elements
        return inside if self.mode == "include" else not inside


@dataclass(frozen=True)
class Identity(ConeSet):
    model: GroupModel

    def member(self, x) -> bool:
        return x == self.model.identity()


# -- factories ---------------------------------------------------------------

def finite_bits(model: GroupModel, indices: Iterable[int]) -> FiniteBits:
    if model.kind != "finite":
        raise ModelMismatch("FiniteBits requires a finite model")
    return FiniteBits(model, frozenset(indices))


def pullback(hom: Homomorphism, region: str) -> Pullback:
    if region not in LEX_REGIONS:
        raise ParseError(f"region must be one of {LEX_REGIONS}, got {region!r}")
    if hom.images is None:
        raise ModelMismatch("pullback cones require a Z^r-valued homomorphism")
    return Pullback(hom.source, hom, region)


def union(*cones: ConeSet) -> ConeSet:
    _same_model(cones)
    if len(cones) == 1:
        return cones[0]
    return Union(cones[0].model, tuple(cones))


def intersection(*cones: ConeSet) -> ConeSet:
    _same_model(cones)
    if len(cones) == 1:
        return cones[0]
    return Intersection(cones[0].model, tuple(cones))


def complement(cone: ConeSet) -> ConeSet:
    return Complement(cone.model, cone)


def explicit(model: GroupModel, elements: Iterable, mode: str = "include") -> ExplicitSet:
    if mode not in ("include", "exclude"):
        raise ParseError(f"mode must be include or exclude, got {mode!r}")
    elems = []
    for e in elements:
        model.validate(e)
        elems.append(e)
    return ExplicitSet(model, frozenset(elems), mode)


def identity_cone(model: GroupModel) -> Identity:
    return Identity(model)


def _same_model(cones) -> None:
    if not cones:
        raise ModelMismatch("need at least one cone")
    m = cones[0].model
    for c in cones[1:]:
        if c.model != m:
            raise ModelMismatch("cones built over different models")


def check_model(model: GroupModel, cone: ConeSet) -> None:
    if cone.model != model:
        raise ModelMismatch("cone built over a different model")


# ---------------------------------------------------------------------------
# Membership, inversion, symmetric part
# ---------------------------------------------------------------------------

def contains(model: GroupModel, cone: ConeSet, x) -> bool:
    """Structural membership test; exact for every element of the model."""
    check_model(model, cone)
    model.validate(x)
    return cone.member(x)


def invert_cone(model: GroupModel, cone: ConeSet) -> ConeSet:
    """A cone S' with S'(x) = S(x^-1) for every x, by AST transformation.

    For pullbacks into Z^r this uses phi(x^-1) = -phi(x): the inverse of a
    lex region is expressed with a complement so the region enum stays
    closed ({v : -v > 0} = complement of lex_nonneg, etc.).
    """
    check_model(model, cone)
    return _invert(cone)


def _invert(cone: ConeSet) -> ConeSet:
    if isinstance(cone, Pullback):
        if cone.region == "lex_zero":
            return cone
        flipped = "lex_nonneg" if cone.region == "lex_pos" else "lex_pos"
        return Complement(cone.model, Pullback(cone.model, cone.hom, flipped))
    if isinstance(cone, Union):
        return Union(cone.model, tuple(_invert(c) for c in cone.parts))
    if isinstance(cone, Intersection):
        return Intersection(cone.model, tuple(_invert(c) for c in cone.parts))
    if isinstance(cone, Complement):
        return Complement(cone.model, _invert(cone.part))
    if isinstance(cone, ExplicitSet):
        m = cone.model
        return ExplicitSet(m, frozenset(m.inv(e) for e in cone.elements), cone.mode)
    if isinstance(cone, FiniteBits):
        g = cone.model.group
        return FiniteBits(cone.model, frozenset(g.inverse_table[i] for i in cone.indices))
    if isinstance(cone, Identity):
        return cone
    raise ModelMismatch(f"unknown cone node {type(cone).__name__}")


def symmetric_part(model: GroupModel, cone: ConeSet) -> ConeSet:
    """Intersection of the cone with its inverse: the elements whose inverse
    also lies in the cone.  When the cone is semigroup-closed this is its
    maximal subgroup."""
    check_model(model, cone)
    return intersection(cone, invert_cone(model, cone))


# ---------------------------------------------------------------------------
# Ball membership (set algebra over an enumerated ball)
# ---------------------------------------------------------------------------

def ball_members(cone: ConeSet, ball: list, index_of: dict) -> frozenset:
    """Indices of ball elements belonging to the cone, computed bottom-up
    with set operations."""
    if isinstance(cone, Union):
        out = set()
        for c in cone.parts:
            out |= ball_members(c, ball, index_of)
        return frozenset(out)
    if isinstance(cone, Intersection):
        sets = [ball_members(c, ball, index_of) for c in cone.parts]
        out = set(sets[0])
        for s in sets[1:]:
            out &= s
        return frozenset(out)
    if isinstance(cone, Complement):
        return frozenset(range(len(ball))) - ball_members(cone.part, ball, index_of)
    if isinstance(cone, Identity):
        return frozenset({0})  # BFS puts the identity first
    if isinstance(cone, ExplicitSet):
        inside = frozenset(index_of[e] for e in cone.elements if e in index_of)
        if cone.mode == "include":
            return inside
        return frozenset(range(len(ball))) - inside
    if isinstance(cone, Pullback):
        hom, region = cone.hom, cone.region
        return frozenset(i for i, x in enumerate(ball) if region_test(region, hom.apply(x)))
    if isinstance(cone, FiniteBits):
        return frozenset(i for i, x in enumerate(ball) if x in cone.indices)
    raise ModelMismatch(f"unknown cone node {type(cone).__name__}")


# ---------------------------------------------------------------------------
# Value-pure analysis: membership through shared homomorphisms
# ---------------------------------------------------------------------------

def value_profile(cone: ConeSet) -> Optional[list[Homomorphism]]:
    """The distinct Z^r homomorphisms membership factors through, or None
    if membership is not value-determined (explicit element lists)."""
    homs: list[Homomorphism] = []

    def walk(node) -> bool:
        if isinstance(node, Pullback):
            if node.hom not in homs:
                homs.append(node.hom)
            return True
        if isinstance(node, Identity):
            return True
        if isinstance(node, (Union, Intersection)):
            return all(walk(c) for c in node.parts)
        if isinstance(node, Complement):
            return walk(node.part)
        return False

    return homs if walk(cone) else None


def _eval_by_values(cone: ConeSet, values: dict, is_identity: bool) -> bool:
    if isinstance(cone, Pullback):
        return region_test(cone.region, values[cone.hom])
    if isinstance(cone, Identity):
        return is_identity
    if isinstance(cone, Union):
        return any(_eval_by_values(c, values, is_identity) for c in cone.parts)
    if isinstance(cone, Intersection):
        return all(_eval_by_values(c, values, is_identity) for c in cone.parts)
    if isinstance(cone, Complement):
        return not _eval_by_values(cone.part, values, is_identity)
    raise ModelMismatch("node is not value-pure")


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------

@dataclass
class Verdict:
    """Outcome of one check.  radius_checked = 0 marks an exact verdict
    (finite group or AST-decidable); ball-local verdicts carry the radius."""

    status: str  # verified | counterexample | inconclusive
    witness: Optional[tuple] = None
    radius_checked: int = 0
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "verified"

    def to_obj(self, model: Optional[GroupModel] = None) -> dict:
        obj = {"status": self.status, "radius_checked": self.radius_checked}
        if self.witness is not None:
            if model is not None:
                obj["witness"] = [format_element(model, w) for w in self.witness]
            else:
                obj["witness"] = [repr(w) for w in self.witness]
        if self.note:
            obj["note"] = self.note
        return obj


# ---------------------------------------------------------------------------
# Subsemigroup and cover verification
# ---------------------------------------------------------------------------

def is_subsemigroup(model: GroupModel, cone: ConeSet, radius: int,
                    cap: int = DEFAULT_BALL_CAP, force_naive: bool = False) -> Verdict:
    """Check x, y in cone => xy in cone.

    Finite models are checked exactly over all pairs.  Infinite models are
    checked over the radius ball; products are evaluated globally through
    the cone predicate.  The first counterexample in BFS pair order wins.
    """
    check_model(model, cone)
    if model.kind == "finite":
        ball = list(model.group.elements())
        members = sorted(ball_members(cone, ball, {x: x for x in ball}))
        mul = model.group.mul
        memset = set(members)
        for i in members:
            for j in members:
                if mul(i, j) not in memset:
                    return Verdict("counterexample", witness=(i, j), radius_checked=0)
        return Verdict("verified", radius_checked=0)

    if radius < 1:
        raise ValueError("radius must be >= 1 for infinite models")
    ball = model.ball(radius, cap)
    index_of = model.ball_index(radius, cap)
    members = sorted(ball_members(cone, ball, index_of))
    identity = model.identity()
    id_in = bool(members) and members[0] == 0

    homs = None if force_naive else value_profile(cone)
    if homs is not None and _closure_clean_by_values(model, cone, homs, ball, index_of,
                                                     members, id_in):
        return Verdict("verified", radius_checked=radius)

    # naive pair scan (first failing pair in BFS order decides the witness)
    mul = model.mul
    member_elems = [ball[i] for i in members]
    memset = set(members)
    memo: dict = {}
    for x in member_elems:
        for y in member_elems:
            p = mul(x, y)
            v = memo.get(p)
            if v is None:
                idx = index_of.get(p)
                v = (idx in memset) if idx is not None else cone.member(p)
                memo[p] = v
            if not v:
                return Verdict("counterexample", witness=(x, y), radius_checked=radius)
    return Verdict("verified", radius_checked=radius)


def _closure_clean_by_values(model, cone, homs, ball, index_of, members, id_in) -> bool:
    """Class-level closure certificate for value-pure cones: membership of a
    non-identity element depends only on its image vector, so it suffices to
    check sums of member value classes.  True means definitely closed on the
    ball; False defers to the element-level scan."""
    values = {}
    for i in members:
        if i == 0:
            continue
        key = tuple(h.apply(ball[i]) for h in homs)
        values.setdefault(key, i)
    if not id_in:
        # a member pair multiplying to 1 inside the ball would be a violation
        memset = set(members)
        for i in members:
            if i == 0:
                continue
            j = index_of.get(model.inv(ball[i]))
            if j is not None and j in memset:
                return False
    for u in values:
        for v in values:
            w = tuple(tuple(a + b for a, b in zip(uu, vv)) for uu, vv in zip(u, v))
            if not _eval_by_values(cone, dict(zip(homs, w)), is_identity=False):
                # either a genuine violation or the product-equals-identity
                # corner; the scan decides and picks the earliest witness
                return False
    return True


@dataclass
class CoverPair:
    """An ordered pair of cones with verification flags."""

    model: GroupModel
    a: ConeSet
    b: ConeSet
    radius: int
    flags: dict = field(default_factory=dict)

    def core_ok(self) -> bool:
        keys = ("closed_A", "closed_B", "covers", "proper_A", "proper_B")
        return all(k in self.flags and self.flags[k].ok for k in keys)

    def normalized_ok(self) -> bool:
        return self.core_ok() and "trivial_intersection" in self.flags and \
            self.flags["trivial_intersection"].ok

    def to_obj(self, cone_serializer) -> dict:
        return {
            "model": self.model.selector(),
            "radius": self.radius,
            "A": cone_serializer(self.a),
            "B": cone_serializer(self.b),
            "verdicts": {k: v.to_obj(self.model) for k, v in sorted(self.flags.items())},
        }


def is_cover_pair(model: GroupModel, a: ConeSet, b: ConeSet, radius: int,
                  cap: int = DEFAULT_BALL_CAP, check_intersection: bool = True,
                  check_duality: bool = False) -> CoverPair:
    """Verdict bundle: closure of both sides, covering, properness, and
    (optionally) trivial intersection and inverse duality."""
    check_model(model, a)
    check_model(model, b)
    finite = model.kind == "finite"
    if finite:
        ball = list(model.group.elements())
        index_of = {x: x for x in ball}
        rad = 0
    else:
        if radius < 1:
            raise ValueError("radius must be >= 1")
        ball = model.ball(radius, cap)
        index_of = model.ball_index(radius, cap)
        rad = radius

    flags = {
        "closed_A": is_subsemigroup(model, a, radius, cap),
        "closed_B": is_subsemigroup(model, b, radius, cap),
    }
    mem_a = ball_members(a, ball, index_of)
    mem_b = ball_members(b, ball, index_of)
    n = len(ball)

    missing = next((i for i in range(n) if i not in mem_a and i not in mem_b), None)
    flags["covers"] = (
        Verdict("verified", radius_checked=rad) if missing is None
        else Verdict("counterexample", witness=(ball[missing],), radius_checked=rad)
    )
    out_a = next((i for i in range(n) if i not in mem_a), None)
    flags["proper_A"] = (
        Verdict("verified", witness=(ball[out_a],), radius_checked=rad) if out_a is not None
        else Verdict("counterexample", radius_checked=rad, note="side A contains the whole ball")
    )
    out_b = next((i for i in range(n) if i not in mem_b), None)
    flags["proper_B"] = (
        Verdict("verified", witness=(ball[out_b],), radius_checked=rad) if out_b is not None
        else Verdict("counterexample", radius_checked=rad, note="side B contains the whole ball")
    )
    if check_intersection:
        bad = next((i for i in sorted(mem_a & mem_b) if i != 0), None)
        flags["trivial_intersection"] = (
            Verdict("verified", radius_checked=rad) if bad is None
            else Verdict("counterexample", witness=(ball[bad],), radius_checked=rad)
        )
    pair = CoverPair(model, a, b, radius, flags)
    if check_duality:
        from .covers import check_inverse_duality  # local: avoids an import cycle
        flags["inverse_duality"] = check_inverse_duality(model, pair, radius, cap)
    return pair


def ext_equal(model: GroupModel, c1: ConeSet, c2: ConeSet, radius: int,
              cap: int = DEFAULT_BALL_CAP) -> Optional[tuple]:
    """None when the cones agree on the ball, else the first differing
    element in BFS order."""
    check_model(model, c1)
    check_model(model, c2)
    if model.kind == "finite":
        ball = list(model.group.elements())
        index_of = {x: x for x in ball}
    else:
        ball = model.ball(radius, cap)
        index_of = model.ball_index(radius, cap)
    m1 = ball_members(c1, ball, index_of)
    m2 = ball_members(c2, ball, index_of)
    diff = m1 ^ m2
    if not diff:
        return None
    return (ball[min(diff)],)


# ---------------------------------------------------------------------------
# JSON (de)serialization of cone specs
# ---------------------------------------------------------------------------

def cone_to_obj(cone: ConeSet) -> dict:
    model = cone.model
    if isinstance(cone, Pullback):
        return {
            "op": "pullback",
            "images": [list(img) for img in cone.hom.images],
            "region": cone.region,
        }
    if isinstance(cone, Union):
        return {"op": "union", "args": [cone_to_obj(c) for c in cone.parts]}
    if isinstance(cone, Intersection):
        return {"op": "intersection", "args": [cone_to_obj(c) for c in cone.parts]}
    if isinstance(cone, Complement):
        return {"op": "complement", "arg": cone_to_obj(cone.part)}
    if isinstance(cone, ExplicitSet):
        elems = sorted(format_element(model, e) for e in cone.elements)
        return {"op": "explicit", "mode": cone.mode, "elements": elems}
    if isinstance(cone, Identity):
        return {"op": "identity"}
    if isinstance(cone, FiniteBits):
        return {"op": "explicit", "mode": "include",
                "elements": [str(i) for i in sorted(cone.indices)]}
    raise ModelMismatch(f"unknown cone node {type(cone).__name__}")


def cone_from_obj(model: GroupModel, obj: dict) -> ConeSet:
    if not isinstance(obj, dict) or "op" not in obj:
        raise ParseError("cone spec must be an object with an 'op' field")
    op = obj["op"]
    if op == "pullback":
        images = obj.get("images")
        region = obj.get("region")
        if not isinstance(images, list):
            raise ParseError("pullback needs an 'images' list")
        rank = len(images[0]) if images and isinstance(images[0], list) else 0
        if rank < 1:
            raise ParseError("pullback images must be nonempty integer vectors")
        hom = Homomorphism(model, GroupModel.zr(rank), images=[tuple(v) for v in images])
        return pullback(hom, region)
    if op in ("union", "intersection"):
        args = obj.get("args")
        if not isinstance(args, list) or not args:
            raise ParseError(f"{op} needs a nonempty 'args' list")
        parts = [cone_from_obj(model, a) for a in args]
        return union(*parts) if op == "union" else intersection(*parts)
    if op == "complement":
        if "arg" not in obj:
            raise ParseError("complement needs an 'arg'")
        return complement(cone_from_obj(model, obj["arg"]))
    if op == "explicit":
        elems = obj.get("elements")
        if not isinstance(elems, list):
            raise ParseError("explicit needs an 'elements' list")
        parsed = [parse_element(model, e) for e in elems]
        if model.kind == "finite" and obj.get("mode", "include") == "include":
            return finite_bits(model, parsed)
        return explicit(model, parsed, obj.get("mode", "include"))
    if op == "identity":
        return identity_cone(model)
    raise ParseError(f"unknown cone op {op!r}")
