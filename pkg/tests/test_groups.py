"""Group model tests: table loading, arithmetic, balls, homomorphisms."""

import itertools

import pytest

from semicover import (
    FiniteGroup,
    GroupModel,
    Homomorphism,
    element_order,
    format_element,
    hom_apply,
    is_normal,
    load_finite_group,
    parse_element,
    parse_model,
    quotient,
)
from semicover.errors import (
    BallTooLarge,
    InvalidElement,
    MalformedTable,
    NotAGroup,
    NotNormal,
    ParseError,
)
from semicover.fixtures import cyclic, dihedral, fixture, table_text

ALL_MODELS = [
    GroupModel.zr(1),
    GroupModel.zr(1, (2,)),
    GroupModel.zr(2),
    GroupModel.free(2),
    GroupModel.heisenberg(),
    GroupModel.klein_bottle(),
    GroupModel.finite(dihedral(3, name="S3")),
]


# ---------------------------------------------------------------------------
# load_finite_group
# ---------------------------------------------------------------------------

def test_load_trivial_group():
    g = load_finite_group("order: 1\n0\n")
    assert g.order == 1
    assert g.inverse_table == [0]


def test_load_c2():
    g = load_finite_group("order: 2\n0 1\n1 0\n")
    assert g.order == 2
    assert g.inverse_table == [0, 1]


@pytest.mark.parametrize("text", [
    "",
    "order: 2\n0 1\n",            # missing row
    "order: 2\n0 1\n1 0 0\n",     # ragged row
    "order: 2\n0 1\n1 2\n",       # out of range
    "2\n0 1\n1 0\n",              # missing header
])
def test_load_malformed(text):
    with pytest.raises(MalformedTable):
        load_finite_group(text)


def test_load_non_associative_reports_witness():
    # oracle: mutate one S3 entry, then locate every broken triple by brute
    # force over all 216 and check the reported one is among them
    s3 = dihedral(3, name="S3")
    table = [row[:] for row in s3.table]
    table[1][2] = 0 if table[1][2] != 0 else 1
    broken = set()
    for i, j, k in itertools.product(range(6), repeat=3):
        if table[table[i][j]][k] != table[i][table[j][k]]:
            broken.add((i, j, k))
    assert broken
    with pytest.raises(NotAGroup) as exc:
        FiniteGroup(table)
    witness = exc.value.witness
    if len(witness) == 3:
        i, j, k = witness
        assert table[table[i][j]][k] != table[i][table[j][k]]
        assert witness in broken
    else:
        # mutation broke the identity convention before associativity ran
        assert witness is not None


def test_table_text_roundtrip():
    g = fixture("Q8")
    assert load_finite_group(table_text(g)).table == g.table


# ---------------------------------------------------------------------------
# mul / inv
# ---------------------------------------------------------------------------

def test_klein_bottle_mul_moves_a_past_b():
    # derived by hand from the rewrite a*b = b*a^-1
    kb = GroupModel.klein_bottle()
    assert kb.mul((1, 1), (1, 0)) == (2, -1)


def test_free_reduction():
    fr = GroupModel.free(2)
    a, b = (1,), (2,)
    aB = fr.mul(a, fr.inv(b))
    assert fr.mul(aB, b) == a


def test_zr_cross_finite_inverse():
    m = GroupModel.zr(1, (2,))
    assert m.inv((3, 1)) == (-3, 1)


def test_invalid_elements_rejected():
    with pytest.raises(InvalidElement):
        GroupModel.free(2).validate((1, -1))  # not reduced
    with pytest.raises(InvalidElement):
        GroupModel.zr(1, (2,)).validate((0, 2))  # torsion not reduced
    with pytest.raises(InvalidElement):
        GroupModel.finite(cyclic(3)).validate(5)


# ---------------------------------------------------------------------------
# ball enumeration
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("model", ALL_MODELS)
def test_ball_zero_is_identity(model):
    assert model.ball(0) == [model.identity()]


def test_free2_ball_one():
    ball = set(GroupModel.free(2).ball(1))
    assert ball == {(), (1,), (-1,), (2,), (-2,)}


def test_free2_ball_two_is_17():
    # oracle: enumerate all reduced words of length <= 2 over 4 letters
    letters = [1, -1, 2, -2]
    words = {()}
    for u in letters:
        words.add((u,))
        for v in letters:
            if u != -v:
                words.add((u, v))
    assert len(words) == 17
    assert set(GroupModel.free(2).ball(2)) == words


def test_free_ball_growth_formula():
    # |ball(r)| = 1 + 2k((2k-1)^r - 1)/(2k-2) for the free group on k letters
    k = 2
    fr = GroupModel.free(k)
    for r in range(6):
        expected = 1 + 2 * k * ((2 * k - 1) ** r - 1) // (2 * k - 2) if r else 1
        assert len(fr.ball(r)) == expected


@pytest.mark.parametrize("model", ALL_MODELS)
def test_ball_monotone_and_deduplicated(model):
    prev = None
    for r in range(4):
        ball = model.ball(r)
        assert len(ball) == len(set(ball))
        if prev is not None:
            assert set(prev) <= set(ball)
            assert ball[: len(prev)] == prev  # BFS prefix property
        prev = ball


def test_ball_cap_enforced():
    with pytest.raises(BallTooLarge):
        GroupModel.free(2).ball(8, cap=100)


# ---------------------------------------------------------------------------
# element_order
# ---------------------------------------------------------------------------

def test_element_order_identity():
    assert element_order(cyclic(5), 0) == (1, 0)


def test_element_order_c2():
    assert element_order(cyclic(2), 1) == (2, 1)


def test_element_order_s3_three_cycle():
    # oracle: brute-force powers on the table
    s3 = dihedral(3, name="S3")
    for x in range(6):
        powers = [x]
        while powers[-1] != 0:
            powers.append(s3.mul(powers[-1], x))
        n, wit = element_order(s3, x)
        assert n == len(powers)
        assert wit == s3.inv(x)
    three_cycles = [x for x in range(6) if element_order(s3, x)[0] == 3]
    assert len(three_cycles) == 2
    for x in three_cycles:
        assert element_order(s3, x)[1] == s3.mul(x, x)


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

def test_hom_projection_z_cross_c2():
    m = GroupModel.zr(1, (2,))
    phi = Homomorphism(m, GroupModel.zr(1), images=[(1,), (0,)])
    assert hom_apply(phi, (5, 1)) == (5,)
    assert hom_apply(phi, m.identity()) == (0,)


def test_hom_kills_commutator():
    fr = GroupModel.free(2)
    phi = Homomorphism(fr, GroupModel.zr(1), images=[(1,), (0,)])
    abAB = (1, 2, -1, -2)
    assert hom_apply(phi, abAB) == (0,)


def test_hom_rejects_bad_torsion_image():
    m = GroupModel.zr(1, (2,))
    with pytest.raises(InvalidElement):
        Homomorphism(m, GroupModel.zr(1), images=[(1,), (1,)])


def test_hom_klein_bottle_requires_a_to_die():
    kb = GroupModel.klein_bottle()
    with pytest.raises(InvalidElement):
        Homomorphism(kb, GroupModel.zr(1), images=[(1,), (0,)])
    phi = Homomorphism(kb, GroupModel.zr(1), images=[(0,), (1,)])
    assert hom_apply(phi, (3, -7)) == (3,)


@pytest.mark.parametrize("model", [m for m in ALL_MODELS if m.kind != "finite"])
def test_hom_multiplicative_on_ball(model):
    rank = len(model.generators())
    images = []
    for i in range(rank):
        v = [0] * 2
        v[i % 2] = 1
        images.append(tuple(v))
    if model.kind == "klein_bottle":
        images[0] = (0, 0)
    if model.kind == "zr_cross_finite":
        images = [img if i < model.rank else (0, 0) for i, img in enumerate(images)]
    phi = Homomorphism(model, GroupModel.zr(2), images=images)
    ball = model.ball(3)
    for x in ball:
        for y in ball:
            fx, fy = phi.apply(x), phi.apply(y)
            assert phi.apply(model.mul(x, y)) == tuple(a + b for a, b in zip(fx, fy))


# ---------------------------------------------------------------------------
# group-law invariants on balls
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("model", ALL_MODELS)
def test_associativity_on_ball(model):
    ball = model.ball(2) if model.kind in ("free", "heisenberg") else model.ball(3)
    for x in ball:
        for y in ball:
            xy = model.mul(x, y)
            for z in ball:
                assert model.mul(xy, z) == model.mul(x, model.mul(y, z))


@pytest.mark.parametrize("model", ALL_MODELS)
def test_inverses_on_ball(model):
    for x in model.ball(4):
        assert model.mul(x, model.inv(x)) == model.identity()
        assert model.inv(model.inv(x)) == x


# ---------------------------------------------------------------------------
# is_normal / quotient
# ---------------------------------------------------------------------------

def test_abelian_subgroups_all_normal():
    g = fixture("C4xC2")
    from semicover.covering import all_subgroups, _mask_members

    for sub in all_subgroups(g):
        assert is_normal(g, _mask_members(sub))


def test_s3_order_two_subgroup_not_normal():
    # oracle: conjugate by everything, brute force
    s3 = dihedral(3, name="S3")
    refl = next(x for x in range(1, 6) if element_order(s3, x)[0] == 2)
    sub = [0, refl]
    escapes = [
        (g, h) for g in range(6) for h in sub
        if s3.mul(s3.mul(g, h), s3.inv(g)) not in sub
    ]
    assert escapes
    assert not is_normal(s3, sub)
    with pytest.raises(NotNormal):
        quotient(s3, sub)


def test_quotient_c4_by_c2():
    c4 = cyclic(4)
    q, proj = quotient(c4, [0, 2])
    assert q.table == [[0, 1], [1, 0]]
    assert [proj.apply(x) for x in range(4)] == [0, 1, 0, 1]


# ---------------------------------------------------------------------------
# selectors and element syntax
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("selector,kind", [
    ("z^1xC2", "zr_cross_finite"),
    ("z^2", "zr_cross_finite"),
    ("free:2", "free"),
    ("heisenberg", "heisenberg"),
    ("klein_bottle", "klein_bottle"),
])
def test_parse_model_selectors(selector, kind):
    m = parse_model(selector)
    assert m.kind == kind
    assert m.selector() == selector


def test_parse_model_rejects_unknown():
    with pytest.raises(ParseError):
        parse_model("so8")


@pytest.mark.parametrize("model", ALL_MODELS)
def test_element_format_parse_roundtrip(model):
    for x in model.ball(3):
        assert parse_element(model, format_element(model, x)) == x


def test_word_syntax_variants():
    kb = GroupModel.klein_bottle()
    assert parse_element(kb, "b^2a^-1") == (2, -1)
    assert parse_element(kb, "bbA") == (2, -1)
    assert parse_element(kb, "1") == (0, 0)
    fr = GroupModel.free(2)
    assert parse_element(fr, "abAB") == (1, 2, -1, -2)
    assert parse_element(fr, "a^3") == (1, 1, 1)
    with pytest.raises(ParseError):
        parse_element(fr, "xyz!")
