"""Finite-group covering numbers.

sigma_g is computed by exact minimum set cover over the maximal proper
subgroups (any minimal cover refines to maximal ones); sigma_s piggybacks
on the torsion identity, with an exhaustive subsemigroup census available
for small orders to cross-check it from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import GroupTooLarge
from .groups import FiniteGroup, element_order, is_normal

DEFAULT_SUBGROUP_CAP = 24
DEFAULT_EXHAUSTIVE_CAP = 8


def _mask_members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _close_under_mul(group: FiniteGroup, seed: int) -> int:
    """Multiplicative closure of a subset mask.  In a finite group a closed
    nonempty subset automatically picks up inverses and the identity."""
    mask = seed
    frontier = _mask_members(seed)
    members = list(frontier)
    while frontier:
        new = []
        for a in frontier:
            for b in members:
                for p in (group.mul(a, b), group.mul(b, a)):
                    bit = 1 << p
                    if not mask & bit:
                        mask |= bit
                        new.append(p)
        members.extend(new)
        frontier = new
    return mask


# ---------------------------------------------------------------------------
# Subgroup enumeration
# ---------------------------------------------------------------------------

def all_subgroups(group: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list[int]:
    """Every subgroup as a bitmask, sorted.  BFS over closures of
    subgroup-plus-one-generator seeds."""
    if group.order > cap:
        raise GroupTooLarge(f"order {group.order} exceeds subgroup cap {cap}")
    trivial = 1  # {identity}
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for sub in frontier:
            for g in range(1, group.order):
                if sub & (1 << g):
                    continue
                bigger = _close_under_mul(group, sub | (1 << g))
                if bigger not in found:
                    found.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    return sorted(found)


def maximal_subgroups(group: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list[int]:
    """Proper subgroups maximal under inclusion."""
    full = (1 << group.order) - 1
    proper = [s for s in all_subgroups(group, cap) if s != full]
    out = []
    for s in proper:
        if not any(t != s and (s | t) == t for t in proper):
            out.append(s)
    return sorted(out)


# ---------------------------------------------------------------------------
# Covering numbers
# ---------------------------------------------------------------------------

@dataclass
class CoveringNumberResult:
    group_id: str
    sigma_g: Optional[int]          # None = undefined (cyclic)
    sigma_s: Optional[int]
    witness_cover: list[list[int]]
    method: str

    def to_obj(self) -> dict:
        return {
            "group": self.group_id,
            "sigma_g": self.sigma_g if self.sigma_g is not None else "undefined",
            "sigma_s": self.sigma_s if self.sigma_s is not None else "undefined",
            "witness_cover": self.witness_cover,
            "method": self.method,
        }


def _is_cyclic(group: FiniteGroup) -> bool:
    return any(element_order(group, g)[0] == group.order for g in range(group.order))


def _min_cover(full: int, candidates: list[int]) -> Optional[list[int]]:
    """Smallest family of candidate masks whose union is `full`; the
    lexicographically first witness (in candidate order) at the optimal
    size.  None when even the whole family does not cover."""
    acc = 0
    for c in candidates:
        acc |= c
    if acc != full:
        return None
    for k in range(2, len(candidates) + 1):
        for combo in combinations(range(len(candidates)), k):
            u = 0
            for i in combo:
                u |= candidates[i]
            if u == full:
                return [candidates[i] for i in combo]
    return None


def sigma_g(group: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> CoveringNumberResult:
    """Exact subgroup covering number, undefined for cyclic groups."""
    if group.order > cap:
        raise GroupTooLarge(f"order {group.order} exceeds cap {cap}")
    if _is_cyclic(group):
        return CoveringNumberResult(group.name, None, None, [], "maximal_set_cover")
    full = (1 << group.order) - 1
    cover = _min_cover(full, maximal_subgroups(group, cap))
    assert cover is not None, "non-cyclic group must be covered by its maximals"
    witness = [sorted(_mask_members(m)) for m in cover]
    return CoveringNumberResult(group.name, len(cover), None, witness, "maximal_set_cover")


# ---------------------------------------------------------------------------
# Subsemigroup census
# ---------------------------------------------------------------------------

@dataclass
class CensusResult:
    closed_subsets: list[int]
    all_are_subgroups: bool
    first_exception: Optional[int]

    @property
    def verdict(self) -> str:
        return "verified" if self.all_are_subgroups else "counterexample"


def subsemigroup_census(group: FiniteGroup,
                        cap: int = DEFAULT_EXHAUSTIVE_CAP) -> CensusResult:
    """All nonempty multiplicatively closed subsets, checking each contains
    the inverses and identities of its elements (true in torsion groups)."""
    n = group.order
    if n > cap:
        raise GroupTooLarge(f"order {n} exceeds exhaustive cap {cap}")
    closed = []
    exception = None
    for mask in range(1, 1 << n):
        members = _mask_members(mask)
        ok = True
        for a in members:
            row = group.table[a]
            for b in members:
                if not mask & (1 << row[b]):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        closed.append(mask)
        if not mask & 1 or any(not mask & (1 << group.inv(a)) for a in members):
            if exception is None:
                exception = mask
    return CensusResult(closed, exception is None, exception)


def subsemigroups_are_subgroups(group: FiniteGroup,
                                cap: int = DEFAULT_EXHAUSTIVE_CAP) -> CensusResult:
    return subsemigroup_census(group, cap)


def sampled_census(group: FiniteGroup, samples: int = 512, seed: int = 0) -> CensusResult:
    """Sampling fallback for orders above the exhaustive cap: closures of
    random seeds are closed subsets; each is checked for subgroup-ness.
    The closed-subset list is the deduplicated sample, not a full census."""
    import random

    rng = random.Random(seed)
    n = group.order
    closed = set()
    exception = None
    for _ in range(samples):
        seed_mask = rng.getrandbits(n) or 1
        mask = _close_under_mul(group, seed_mask)
        if mask in closed:
            continue
        closed.add(mask)
        members = _mask_members(mask)
        if not mask & 1 or any(not mask & (1 << group.inv(a)) for a in members):
            if exception is None:
                exception = mask
    return CensusResult(sorted(closed), exception is None, exception)


def sigma_s_finite(group: FiniteGroup, exhaustive: bool = False,
                   cap: int = DEFAULT_SUBGROUP_CAP,
                   exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP) -> CoveringNumberResult:
    """Subsemigroup covering number via the torsion identity.  With
    exhaustive=True it is recomputed from the census and must agree."""
    base = sigma_g(group, cap)
    result = CoveringNumberResult(group.name, base.sigma_g, base.sigma_g,
                                  base.witness_cover, "maximal_set_cover")
    if exhaustive:
        census = subsemigroup_census(group, exhaustive_cap)
        full = (1 << group.order) - 1
        proper = [m for m in census.closed_subsets if m != full]
        cover = _min_cover(full, proper)
        recomputed = len(cover) if cover is not None else None
        assert recomputed == base.sigma_g, (
            f"census sigma_s {recomputed} != sigma_g {base.sigma_g} on {group.name}"
        )
        result.method = "exhaustive_semigroup"
    return result


# ---------------------------------------------------------------------------
# Cross-checks
# ---------------------------------------------------------------------------

def scorza_check(group: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> tuple[bool, bool]:
    """Both sides of: covering number is three iff the group has a
    Klein-four quotient.  Computed independently."""
    res = sigma_g(group, cap)
    left = res.sigma_g == 3
    right = False
    for sub in all_subgroups(group, cap):
        members = _mask_members(sub)
        if group.order != 4 * len(members):
            continue
        if not is_normal(group, members):
            continue
        # index-4 quotient has exponent 2 iff every square lands in the subgroup
        if all(sub & (1 << group.mul(g, g)) for g in range(group.order)):
            right = True
            break
    return left, right


def two_cover_search(group: FiniteGroup, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> dict:
    """Exhaustive search for two proper closed subsets covering the group;
    must come back empty."""
    census = subsemigroup_census(group, cap)
    full = (1 << group.order) - 1
    proper = [m for m in census.closed_subsets if m != full]
    found = []
    pairs = 0
    for i, s in enumerate(proper):
        for t in proper[i:]:
            pairs += 1
            if (s | t) == full:
                found.append((sorted(_mask_members(s)), sorted(_mask_members(t))))
    return {
        "group": group.name,
        "order": group.order,
        "closed_subsets": len(census.closed_subsets),
        "pairs_checked": pairs,
        "covers_found": found,
    }
