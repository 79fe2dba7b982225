"""Group models: finite Cayley tables and built-in infinite families.

All models share one interface: exact multiplication and inversion on
canonical normal forms, a finite generating set, and deterministic BFS ball
enumeration.  Element representations:

  finite          int index into the Cayley table (identity is always 0)
  zr_cross_finite tuple of rank + len(orders) ints, torsion coords reduced
  free            tuple of nonzero signed ints (+i = generator i-1,
                  -i = its inverse), freely reduced
  heisenberg      (x, y, z) under the upper-unitriangular product
  klein_bottle    (m, n) meaning b^m a^n, with rewrite a*b = b*a^-1
"""

from __future__ import annotations

import re
from typing import Optional, Sequence

from .errors import (
    BallTooLarge,
    InvalidElement,
    MalformedTable,
    ModelMismatch,
    NotAGroup,
    NotASubgroup,
    NotNormal,
    ParseError,
)

DEFAULT_BALL_CAP = 10**6


# ---------------------------------------------------------------------------
# Finite groups
# ---------------------------------------------------------------------------

class FiniteGroup:
    """A finite group given by a full Cayley table with identity index 0."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = "finite"):
        self.table = [list(row) for row in table]
        self.order = len(self.table)
        self.name = name
        self.identity_index = 0
        self._validate()
        self.inverse_table = self._build_inverses()

    def _validate(self) -> None:
        n = self.order
        if n < 1:
            raise MalformedTable("table must have at least one row")
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise MalformedTable(f"row {i} has {len(row)} entries, expected {n}")
            for j, v in enumerate(row):
                if not isinstance(v, int) or not (0 <= v < n):
                    raise MalformedTable(f"entry ({i},{j}) = {v!r} out of range [0,{n})")
        for j in range(n):
            if self.table[0][j] != j:
                raise NotAGroup(
                    f"index 0 is not a left identity at column {j}", witness=(0, j, self.table[0][j])
                )
            if self.table[j][0] != j:
                raise NotAGroup(
                    f"index 0 is not a right identity at row {j}", witness=(j, 0, self.table[j][0])
                )
        t = self.table
        for i in range(n):
            for j in range(n):
                tij = t[i][j]
                for k in range(n):
                    if t[tij][k] != t[i][t[j][k]]:
                        raise NotAGroup(
                            f"associativity fails at triple ({i},{j},{k})", witness=(i, j, k)
                        )

    def _build_inverses(self) -> list[int]:
        inv = [-1] * self.order
        for i in range(self.order):
            hits = [j for j in range(self.order) if self.table[i][j] == 0]
            if len(hits) != 1:
                raise NotAGroup(f"element {i} has {len(hits)} inverses", witness=(i,))
            inv[i] = hits[0]
        return inv

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse_table[a]

    def elements(self) -> range:
        return range(self.order)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(tuple(tuple(r) for r in self.table))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def load_finite_group(text: str, name: str = "finite") -> FiniteGroup:
    """Parse a Cayley table file: `order: n` then n rows of n indices."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedTable("empty table file")
    m = re.fullmatch(r"order\s*:\s*(\d+)", lines[0])
    if not m:
        raise MalformedTable(f"first line must be 'order: n', got {lines[0]!r}")
    n = int(m.group(1))
    if n < 1:
        raise MalformedTable("order must be >= 1")
    if len(lines) - 1 != n:
        raise MalformedTable(f"expected {n} table rows, found {len(lines) - 1}")
    table = []
    for ln in lines[1:]:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError as exc:
            raise MalformedTable(f"non-integer entry in row {ln!r}") from exc
        table.append(row)
    return FiniteGroup(table, name=name)


def element_order(group: FiniteGroup, x: int) -> tuple[int, int]:
    """Least n >= 1 with x^n = 1, plus x^(n-1) as the inverse witness."""
    if not (0 <= x < group.order):
        raise InvalidElement(f"index {x} out of range")
    n = 1
    power = x
    prev = 0
    while power != 0:
        prev = power
        power = group.mul(power, x)
        n += 1
    return n, prev


def _check_subgroup(group: FiniteGroup, subset: frozenset[int]) -> None:
    if 0 not in subset:
        raise NotASubgroup("subset does not contain the identity")
    for a in subset:
        if group.inv(a) not in subset:
            raise NotASubgroup(f"subset not inverse-closed at {a}")
        for b in subset:
            if group.mul(a, b) not in subset:
                raise NotASubgroup(f"subset not closed at ({a},{b})")


def is_normal(group: FiniteGroup, subgroup: Sequence[int]) -> bool:
    """Whether gHg^-1 = H for all g.  Raises NotASubgroup on bad input."""
    sub = frozenset(subgroup)
    _check_subgroup(group, sub)
    for g in group.elements():
        gi = group.inv(g)
        for h in sub:
            if group.mul(group.mul(g, h), gi) not in sub:
                return False
    return True


def quotient(group: FiniteGroup, normal: Sequence[int]) -> tuple[FiniteGroup, "Homomorphism"]:
    """Coset group of a normal subgroup plus the projection map."""
    sub = frozenset(normal)
    _check_subgroup(group, sub)
    for g in group.elements():
        gi = group.inv(g)
        for h in sub:
            if group.mul(group.mul(g, h), gi) not in sub:
                raise NotNormal(f"subgroup not normal: conjugate of {h} by {g} escapes", witness=(g, h))
    coset_of: dict[int, int] = {}
    reps: list[int] = []
    for g in group.elements():
        if g in coset_of:
            continue
        members = sorted(group.mul(g, h) for h in sub)
        rep = members[0]
        idx = len(reps)
        reps.append(rep)
        for m in members:
            coset_of[m] = idx
    # reorder so the identity coset (rep 0) is index 0 and reps ascend
    order_map = {old: new for new, old in enumerate(sorted(range(len(reps)), key=lambda i: reps[i]))}
    coset_of = {g: order_map[c] for g, c in coset_of.items()}
    reps = sorted(reps)
    k = len(reps)
    table = [[coset_of[group.mul(reps[i], reps[j])] for j in range(k)] for i in range(k)]
    quot = FiniteGroup(table, name=f"{group.name}/N")
    src_model = GroupModel.finite(group)
    dst_model = GroupModel.finite(quot)
    hom = Homomorphism(src_model, dst_model, table_map=tuple(coset_of[g] for g in group.elements()))
    return quot, hom


# ---------------------------------------------------------------------------
# Group models
# ---------------------------------------------------------------------------

class GroupModel:
    """Uniform arithmetic over one of five concrete model kinds."""

    def __init__(self, kind: str, *, group: Optional[FiniteGroup] = None,
                 rank: int = 0, orders: tuple[int, ...] = (), free_rank: int = 0):
        self.kind = kind
        self.group = group
        self.rank = rank
        self.orders = tuple(orders)
        self.free_rank = free_rank
        self._ball_cache: dict[int, list] = {}
        self._index_cache: dict[int, dict] = {}
        if kind == "finite" and group is None:
            raise ValueError("finite model requires a FiniteGroup")
        if kind == "free" and free_rank < 1:
            raise ValueError("free model requires rank >= 1")

    # -- constructors

    @staticmethod
    def finite(group: FiniteGroup) -> "GroupModel":
        return GroupModel("finite", group=group)

    @staticmethod
    def zr(rank: int, orders: Sequence[int] = ()) -> "GroupModel":
        return GroupModel("zr_cross_finite", rank=rank, orders=tuple(orders))

    @staticmethod
    def free(rank: int) -> "GroupModel":
        return GroupModel("free", free_rank=rank)

    @staticmethod
    def heisenberg() -> "GroupModel":
        return GroupModel("heisenberg")

    @staticmethod
    def klein_bottle() -> "GroupModel":
        return GroupModel("klein_bottle")

    # -- identity / arithmetic

    def _key(self):
        if self.kind == "finite":
            return ("finite", hash(self.group))
        return (self.kind, self.rank, self.orders, self.free_rank)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupModel) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"GroupModel({self.selector()})"

    def identity(self):
        if self.kind == "finite":
            return 0
        if self.kind == "zr_cross_finite":
            return (0,) * (self.rank + len(self.orders))
        if self.kind == "free":
            return ()
        if self.kind == "heisenberg":
            return (0, 0, 0)
        return (0, 0)

    def validate(self, x) -> None:
        kind = self.kind
        if kind == "finite":
            if not isinstance(x, int) or not (0 <= x < self.group.order):
                raise InvalidElement(f"{x!r} is not a valid index")
            return
        if kind == "zr_cross_finite":
            n = self.rank + len(self.orders)
            if not (isinstance(x, tuple) and len(x) == n and all(isinstance(v, int) for v in x)):
                raise InvalidElement(f"{x!r} is not a {n}-tuple of ints")
            for v, o in zip(x[self.rank:], self.orders):
                if not (0 <= v < o):
                    raise InvalidElement(f"torsion coordinate {v} not reduced mod {o}")
            return
        if kind == "free":
            if not isinstance(x, tuple) or any(not isinstance(v, int) or v == 0 or abs(v) > self.free_rank for v in x):
                raise InvalidElement(f"{x!r} is not a word over {self.free_rank} letters")
            for u, v in zip(x, x[1:]):
                if u == -v:
                    raise InvalidElement(f"word {x!r} is not freely reduced")
            return
        if kind in ("heisenberg", "klein_bottle"):
            n = 3 if kind == "heisenberg" else 2
            if not (isinstance(x, tuple) and len(x) == n and all(isinstance(v, int) for v in x)):
                raise InvalidElement(f"{x!r} is not a {n}-tuple of ints")
            return
        raise InvalidElement(f"unknown model kind {kind}")

    def mul(self, x, y):
        kind = self.kind
        if kind == "finite":
            return self.group.table[x][y]
        if kind == "zr_cross_finite":
            r = self.rank
            free = tuple(a + b for a, b in zip(x[:r], y[:r]))
            tors = tuple((a + b) % o for a, b, o in zip(x[r:], y[r:], self.orders))
            return free + tors
        if kind == "free":
            xs = list(x)
            for v in y:
                if xs and xs[-1] == -v:
                    xs.pop()
                else:
                    xs.append(v)
            return tuple(xs)
        if kind == "heisenberg":
            return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1])
        # klein bottle: (b^m1 a^n1)(b^m2 a^n2) = b^(m1+m2) a^(n1*(-1)^m2 + n2)
        m1, n1 = x
        m2, n2 = y
        return (m1 + m2, (n1 if m2 % 2 == 0 else -n1) + n2)

    def inv(self, x):
        kind = self.kind
        if kind == "finite":
            return self.group.inverse_table[x]
        if kind == "zr_cross_finite":
            r = self.rank
            free = tuple(-a for a in x[:r])
            tors = tuple((-a) % o for a, o in zip(x[r:], self.orders))
            return free + tors
        if kind == "free":
            return tuple(-v for v in reversed(x))
        if kind == "heisenberg":
            return (-x[0], -x[1], -x[2] + x[0] * x[1])
        m, n = x
        return (-m, -n if m % 2 == 0 else n)

    def conj(self, g, x):
        """g^-1 * x * g."""
        return self.mul(self.mul(self.inv(g), x), g)

    # -- generators

    def generators(self) -> list:
        kind = self.kind
        if kind == "finite":
            return list(range(1, self.group.order))
        if kind == "zr_cross_finite":
            n = self.rank + len(self.orders)
            gens = []
            for i in range(n):
                e = [0] * n
                e[i] = 1
                gens.append(tuple(e))
            return gens
        if kind == "free":
            return [(i,) for i in range(1, self.free_rank + 1)]
        if kind == "heisenberg":
            return [(1, 0, 0), (0, 1, 0)]
        return [(0, 1), (1, 0)]  # a, b

    def generator_letters(self) -> list[str]:
        return [chr(ord("a") + i) for i in range(len(self.generators()))]

    def relator_exponent_rows(self) -> list[tuple[int, ...]]:
        """Exponent-sum rows of the built-in relators, one per relator,
        in generator order.  Used to validate homomorphisms into Z^r."""
        kind = self.kind
        if kind == "zr_cross_finite":
            n = self.rank + len(self.orders)
            rows = []
            for j, o in enumerate(self.orders):
                row = [0] * n
                row[self.rank + j] = o
                rows.append(tuple(row))
            return rows
        if kind == "klein_bottle":
            return [(2, 0)]  # relator b a b^-1 a: a-sum 2, b-sum 0
        # free and heisenberg impose no exponent constraints
        return []

    def abelian_exponents(self, x) -> tuple[int, ...]:
        """Exponent sums of x with respect to the generator list; any word
        representing x gives the same answer modulo the relator rows."""
        kind = self.kind
        if kind == "zr_cross_finite":
            return tuple(x)
        if kind == "free":
            counts = [0] * self.free_rank
            for v in x:
                counts[abs(v) - 1] += 1 if v > 0 else -1
            return tuple(counts)
        if kind == "heisenberg":
            return (x[0], x[1])
        if kind == "klein_bottle":
            m, n = x
            return (n, m)  # generator order is (a, b)
        raise InvalidElement("finite models have no canonical exponent map")

    # -- ball enumeration

    def ball(self, radius: int, cap: int = DEFAULT_BALL_CAP) -> list:
        """All products of at most `radius` generators/inverses, BFS order
        with generator-index tiebreak.  Element 0 is the identity."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        cached = self._ball_cache.get(radius)
        if cached is not None:
            return cached
        steps = []
        for g in self.generators():
            steps.append(g)
            gi = self.inv(g)
            if gi != g:
                steps.append(gi)
        out = [self.identity()]
        seen = {self.identity()}
        frontier = [self.identity()]
        mul = self.mul
        for _ in range(radius):
            nxt = []
            for x in frontier:
                for s in steps:
                    y = mul(x, s)
                    if y not in seen:
                        seen.add(y)
                        out.append(y)
                        nxt.append(y)
                        if len(out) > cap:
                            raise BallTooLarge(f"ball exceeds cap {cap}")
            if not nxt:
                break
            frontier = nxt
        self._ball_cache[radius] = out
        return out

    def ball_index(self, radius: int, cap: int = DEFAULT_BALL_CAP) -> dict:
        idx = self._index_cache.get(radius)
        if idx is None:
            idx = {x: i for i, x in enumerate(self.ball(radius, cap))}
            self._index_cache[radius] = idx
        return idx

    # -- selector strings

    def selector(self) -> str:
        kind = self.kind
        if kind == "finite":
            return f"finite:{self.group.name}"
        if kind == "zr_cross_finite":
            s = f"z^{self.rank}"
            for o in self.orders:
                s += f"xC{o}"
            return s
        if kind == "free":
            return f"free:{self.free_rank}"
        return kind


_ZR_SELECTOR = re.compile(r"z\^(\d+)((?:xC\d+)*)")


def parse_model(selector: str, loader=None) -> GroupModel:
    """Build a model from a CLI selector string.

    `finite:<path>` needs `loader` (path -> FiniteGroup); the built-in
    selectors are `z^r[xC n...]`, `free:k`, `heisenberg`, `klein_bottle`.
    """
    sel = selector.strip()
    if sel == "heisenberg":
        return GroupModel.heisenberg()
    if sel == "klein_bottle":
        return GroupModel.klein_bottle()
    if sel.startswith("free:"):
        try:
            k = int(sel.split(":", 1)[1])
        except ValueError as exc:
            raise ParseError(f"bad free rank in {selector!r}") from exc
        return GroupModel.free(k)
    if sel.startswith("finite:"):
        if loader is None:
            raise ParseError("finite:<path> selector requires a table loader")
        return GroupModel.finite(loader(sel.split(":", 1)[1]))
    m = _ZR_SELECTOR.fullmatch(sel)
    if m:
        rank = int(m.group(1))
        orders = tuple(int(t) for t in re.findall(r"xC(\d+)", m.group(2)))
        return GroupModel.zr(rank, orders)
    raise ParseError(f"unknown model selector {selector!r}")


# ---------------------------------------------------------------------------
# Element parsing / formatting
# ---------------------------------------------------------------------------

_WORD_TOKEN = re.compile(r"([a-zA-Z])(?:\^(-?\d+))?")


def parse_element(model: GroupModel, text: str):
    """Parse an element string: words for free/klein_bottle, integer tuples
    for the abelian and heisenberg models, a decimal index for finite."""
    s = text.strip()
    kind = model.kind
    if kind == "finite":
        try:
            x = int(s)
        except ValueError as exc:
            raise ParseError(f"expected an element index, got {text!r}") from exc
        model.validate(x)
        return x
    if kind in ("zr_cross_finite", "heisenberg"):
        body = s
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        try:
            vals = tuple(int(tok) for tok in body.replace(",", " ").split())
        except ValueError as exc:
            raise ParseError(f"expected an integer tuple, got {text!r}") from exc
        if kind == "zr_cross_finite":
            r = model.rank
            need = r + len(model.orders)
            if len(vals) != need:
                raise ParseError(f"expected {need} coordinates, got {len(vals)}")
            vals = vals[:r] + tuple(v % o for v, o in zip(vals[r:], model.orders))
        model.validate(vals)
        return vals
    if kind in ("free", "klein_bottle"):
        if s in ("1", ""):
            return model.identity()
        gens = model.generators()
        letters = model.generator_letters()
        pos = 0
        result = model.identity()
        for m in _WORD_TOKEN.finditer(s):
            if m.start() != pos:
                raise ParseError(f"unexpected character at {s[pos:]!r}")
            pos = m.end()
            ch = m.group(1)
            exp = int(m.group(2)) if m.group(2) is not None else 1
            low = ch.lower()
            if low not in letters:
                raise ParseError(f"unknown generator letter {ch!r}")
            g = gens[letters.index(low)]
            if ch.isupper():
                exp = -exp
            step = g if exp > 0 else model.inv(g)
            for _ in range(abs(exp)):
                result = model.mul(result, step)
        if pos != len(s):
            raise ParseError(f"unexpected character at {s[pos:]!r}")
        return result
    raise ParseError(f"cannot parse elements for model {kind}")


def format_element(model: GroupModel, x) -> str:
    kind = model.kind
    if kind == "finite":
        return str(x)
    if kind in ("zr_cross_finite", "heisenberg"):
        return "(" + ",".join(str(v) for v in x) + ")"
    if kind == "free":
        if not x:
            return "1"
        parts = []
        i = 0
        while i < len(x):
            j = i
            while j < len(x) and x[j] == x[i]:
                j += 1
            letter = chr(ord("a") + abs(x[i]) - 1)
            exp = (j - i) * (1 if x[i] > 0 else -1)
            parts.append(letter if exp == 1 else f"{letter}^{exp}")
            i = j
        return "".join(parts)
    if kind == "klein_bottle":
        m, n = x
        if m == 0 and n == 0:
            return "1"
        parts = []
        if m != 0:
            parts.append("b" if m == 1 else f"b^{m}")
        if n != 0:
            parts.append("a" if n == 1 else f"a^{n}")
        return "".join(parts)
    raise ParseError(f"cannot format elements for model {kind}")


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

class Homomorphism:
    """A homomorphism given either by generator images (infinite sources,
    abelian Z^r targets) or by a full element map (finite sources)."""

    def __init__(self, source: GroupModel, target: GroupModel,
                 images: Optional[Sequence] = None,
                 table_map: Optional[tuple[int, ...]] = None):
        self.source = source
        self.target = target
        self.images = tuple(tuple(img) if isinstance(img, (list, tuple)) else img
                            for img in images) if images is not None else None
        self.table_map = table_map
        self._cache: dict = {}  # element -> image; pure-function memo
        if (images is None) == (table_map is None):
            raise ValueError("exactly one of images/table_map is required")
        if images is not None:
            self._validate_images()
        else:
            if source.kind != "finite":
                raise ModelMismatch("table_map form requires a finite source")

    def _validate_images(self) -> None:
        if self.target.kind != "zr_cross_finite" or self.target.orders:
            raise ModelMismatch("generator-image form targets Z^r only")
        gens = self.source.generators()
        if self.source.kind == "finite":
            raise ModelMismatch("finite sources use the table_map form")
        if len(self.images) != len(gens):
            raise InvalidElement(
                f"need {len(gens)} generator images, got {len(self.images)}"
            )
        r = self.target.rank
        for img in self.images:
            if len(img) != r:
                raise InvalidElement(f"image {img!r} is not a Z^{r} vector")
        # every built-in relator must map to the target identity
        for row in self.source.relator_exponent_rows():
            vec = [0] * r
            for e, img in zip(row, self.images):
                for i in range(r):
                    vec[i] += e * img[i]
            if any(vec):
                raise InvalidElement(
                    f"relator with exponents {row} maps to {tuple(vec)}, not 0"
                )

    def rank(self) -> int:
        return self.target.rank

    def apply(self, x):
        if self.table_map is not None:
            self.source.validate(x)
            return self.table_map[x]
        out = self._cache.get(x)
        if out is not None:
            return out
        exps = self.source.abelian_exponents(x)
        r = self.target.rank
        vec = [0] * r
        for e, img in zip(exps, self.images):
            if e:
                for i in range(r):
                    vec[i] += e * img[i]
        out = tuple(vec)
        self._cache[x] = out
        return out

    def compose_into(self, outer: "Homomorphism") -> "Homomorphism":
        """outer o self, for generator-image maps through Z^r."""
        if self.images is None or outer.images is None:
            raise ModelMismatch("composition supported for image-form maps only")
        new_images = [outer.apply(img) for img in self.images]
        return Homomorphism(self.source, outer.target, images=new_images)

    def _key(self):
        return (self.source._key(), self.target._key(), self.images, self.table_map)

    def __eq__(self, other) -> bool:
        return isinstance(other, Homomorphism) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


def hom_apply(hom: Homomorphism, x):
    """Image of x under the homomorphism (exponent-vector evaluation for
    abelian targets, table lookup for finite sources)."""
    return hom.apply(x)


def zr_identity_hom(rank: int) -> Homomorphism:
    """The identity map on Z^rank in generator-image form."""
    model = GroupModel.zr(rank)
    images = []
    for i in range(rank):
        v = [0] * rank
        v[i] = 1
        images.append(tuple(v))
    return Homomorphism(model, GroupModel.zr(rank), images=images)
