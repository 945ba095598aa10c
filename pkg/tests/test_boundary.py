import random

import pytest
from hypothesis import given, settings, strategies as st

from clusterfrieze.boundary import (
    BoundaryWord,
    Case,
    Mat2,
    OutsideRegion,
    PointAddress,
    T_value,
    WordTooShort,
    all_cluster_variables,
    crossed_determinant,
    enumerate_points,
    formula_values,
    locate_point,
    matrix_M,
    position_boundary,
    random_word,
    region_positions,
    row_pair_determinant,
    split_diagonal,
    split_mixed_diagonal,
    to_boundary,
    transpose_boundary,
)
from clusterfrieze.frieze import compute_frieze, diamond_failures
from clusterfrieze.laurent import LaurentPolynomial as L, NotAPerfectSquare
from clusterfrieze.quiver import (
    ForkConfiguration,
    Quiver,
    Seed,
    a_orientations,
    build_lambda_prime,
    d_orientations,
    fork_info,
    initial_seed,
    mutate_seed,
    mutation_closure,
)

D4 = Quiver(4, ((1, 3), (2, 3), (3, 4)))
D6 = Quiver(6, ((3, 1), (3, 2), (4, 3), (4, 5), (5, 6)))


def u(i, rank):
    return L.variable(i, rank)


def boundaries(q):
    F = position_boundary(to_boundary(build_lambda_prime(initial_seed(q)).seed))
    return F, transpose_boundary(F)


def test_word_of_d4_doubled_seed():
    w = to_boundary(build_lambda_prime(initial_seed(D4)).seed)
    assert w.compact() == "u4yu3yu1u2x1xu1u2xu3xu4"
    assert str(w) == "u4 y u3 y u1*u2 x 1 x u1*u2 x u3 x u4"


def test_word_of_a_path_seed():
    w = to_boundary(initial_seed(Quiver(3, ((1, 2), (3, 2)))))
    assert w.letters == ("x", "y")
    with pytest.raises(ValueError):
        BoundaryWord((u(1, 2),), ("x",))
    with pytest.raises(ValueError):
        BoundaryWord((u(1, 2), u(2, 2)), ("z",))


def test_two_letter_embedding():
    F = position_boundary(BoundaryWord((u(1, 2), u(2, 2)), ("x",)))
    assert F.coords == ((0, 0), (0, 1), (1, 1), (2, 1))
    assert F.letters == ("y", "x", "x")


def test_d4_boundary_has_nine_vertices():
    F, _ = boundaries(D4)
    assert len(F.coords) == 9 and F.n == 4
    assert F.letters.count("y") == 3 and F.letters.count("x") == 5
    assert F.coords[-1] == (5, 3)


def test_d6_boundaries():
    F, tF = boundaries(D6)
    assert F.compact() == "yu6yu5yu4xu3xu1u2x1xu1u2yu3yu4xu5xu6x"
    assert tF.compact() == "xu6yu5yu4xu3xu1u2y1yu1u2yu3yu4xu5xu6y"
    assert F.compact(omit_ones=True) == "yu6yu5yu4xu3xu1u2xxu1u2yu3yu4xu5xu6x"
    assert tF.compact(omit_ones=True) == "xu6yu5yu4xu3xu1u2yyu1u2yu3yu4xu5xu6y"


def test_blank_unit_rendering():
    w = BoundaryWord((u(1, 2), L.constant(1, 2), u(2, 2)), ("x", "y"))
    assert w.compact() == "u1x1yu2"
    assert w.compact(omit_ones=True) == "u1xyu2"
    assert str(w) == "u1 x 1 y u2"


@pytest.mark.parametrize("n", (4, 5, 6, 7))
def test_transposed_boundary_is_a_glide_image(n):
    for q in d_orientations(n):
        F, tF = boundaries(q)
        assert tF.word().transpose().transpose() == tF.word()
        inner = tF.word()
        assert BoundaryWord(inner.values[1:-1], inner.letters[1:-1]) == \
            BoundaryWord(F.values[1:-1], F.letters[1:-1]).transpose()
        # the two boundaries never share a vertex of the window
        assert not set(F.coords[1:-1]) & set(tF.coords[1:-1])


def test_word_transpose_is_an_involution():
    w = to_boundary(build_lambda_prime(initial_seed(D6)).seed)
    assert w.transpose().transpose() == w
    assert w.transpose() != w


def test_case_words_in_d6():
    F, tF = boundaries(D6)
    expected = {
        (5, 2): (Case.FF, "u5yu4xu3xu1u2x1xu1u2yu3yu4xu5"),
        (9, -1): (Case.TT, "u3yu1u2x1xu1u2xu3xu4"),
        (8, 1): (Case.MIXED, "u6yu5yu4xu3xu1u2x1xu1u2yu3yu4"),
    }
    for point, (case, word) in expected.items():
        p = locate_point(F, tF, point)
        assert (p.case, p.word.compact()) == (case, word)


def test_case_words_and_values_in_d4():
    F, tF = boundaries(D4)
    u1, u2, u3, u4 = (u(i, 4) for i in range(1, 5))
    expected = {
        (3, 2): (Case.FF, "u3 y u1*u2 x 1 x u1*u2 x u3", (1 + u3) ** 2 / (u1 * u2)),
        (6, 1): (Case.MIXED, "u4 y u3 y u1*u2", (u4 + u1 * u2) / u3),
        (6, 0): (Case.TT, "u1*u2 y u3 y u4 x 1", (u4 + u1 * u2 * (1 + u3)) / (u3 * u4)),
    }
    for point, (case, word, value) in expected.items():
        p = locate_point(F, tF, point)
        assert p.case is case and str(p.word) == word
        assert T_value(p) == value


def test_first_diagonal_value_splits_over_the_fork():
    u1, u2, u3 = (u(i, 4) for i in range(1, 4))
    assert split_diagonal((1 + u3) ** 2 / (u1 * u2)) == ((1 + u3) / u1, (1 + u3) / u2)
    assert split_diagonal(u1 * u2) == (u2, u1)
    with pytest.raises(NotAPerfectSquare):
        split_diagonal(u1 * u1 * u2)


def test_boundary_points_and_outside_points():
    F, tF = boundaries(D4)
    p = locate_point(F, tF, F.coords[5])
    assert p.case is Case.BOUNDARY and T_value(p) == F.values[5]
    for bad in ((0, 0), (100, 100), (-3, 2)):
        with pytest.raises(OutsideRegion):
            locate_point(F, tF, bad)


def test_short_word_is_rejected():
    w = BoundaryWord((u(1, 2), u(2, 2)), ("x",))
    with pytest.raises(WordTooShort):
        T_value(PointAddress((0, 0), Case.FF, w))


def test_matrix_m():
    a, b = u(1, 2), u(2, 2)
    assert matrix_M(a, "x", b) == Mat2(a, 1, 0, b)
    assert matrix_M(a, "y", b) == Mat2(b, 0, 1, a)
    assert matrix_M(a, "x", b).det() == a * b == matrix_M(a, "y", b).det()
    with pytest.raises(ValueError):
        matrix_M(a, "z", b)


def test_region_has_one_point_per_window_entry():
    for n in (4, 5, 6):
        F, tF = boundaries(d_orientations(n)[0])
        assert len(region_positions(F)) == (n + 1) * (n - 1)
        assert len(enumerate_points(F, tF)) == (n + 1) * (n - 1)


@pytest.mark.parametrize("n", (4, 5, 6))
def test_formula_matches_doubled_frieze(n):
    for q in d_orientations(n):
        lp = build_lambda_prime(initial_seed(q))
        lam = compute_frieze(lp.seed, n + 1)
        assert all(lam[p] == v for p, v in formula_values(lp).items())


@pytest.mark.parametrize("n", (4, 5, 6))
def test_formula_values_are_unimodular(n):
    for q in d_orientations(n):
        F, tF = boundaries(q)
        vals = {p.position: T_value(p) for p in enumerate_points(F, tF)}
        for B in (F, tF):
            vals.update(zip(B.coords, B.values))
        checked, bad = diamond_failures(vals)
        assert checked >= (n - 1) * (n - 2) and not bad


@pytest.mark.parametrize("n", (4, 5, 6))
def test_splits_match_fork_rows(n):
    for q in d_orientations(n):
        seed = initial_seed(q)
        mixed = fork_info(q).configuration is ForkConfiguration.MIXED
        ref = compute_frieze(mutate_seed(seed, 2) if mixed else seed)
        diag = formula_values(build_lambda_prime(seed))
        for k in range(n + 1):
            t = diag[(k, n + 1)]
            a, b = split_mixed_diagonal(t) if mixed else split_diagonal(t)
            assert a * b == t
            assert {a, b} == {ref[(k, 1)], ref[(k, 2)]}


@pytest.mark.parametrize("n", (4, 5))
def test_formula_gives_all_cluster_variables(n):
    for q in d_orientations(n):
        seed = initial_seed(q)
        closure = mutation_closure(seed)
        assert len(closure) == n * n
        assert all_cluster_variables(seed) == closure


def test_fork_swap_invariance():
    for q in d_orientations(5):
        seed = initial_seed(q)
        swap = {1: 2, 2: 1}
        relabelled = Seed(q.relabel({1: 2, 2: 1, 3: 3, 4: 4, 5: 5}),
                          (seed[2].permute(swap), seed[1].permute(swap)) + seed.variables[2:])
        assert {v.permute(swap) for v in all_cluster_variables(seed)} == all_cluster_variables(relabelled)


def test_type_a_input_is_rejected():
    with pytest.raises(ValueError):
        all_cluster_variables(initial_seed(a_orientations(4)[0]))


def _product(values, start):
    out = start
    for v in values:
        out = out * v
    return out


def test_row_pair_identity_on_random_words():
    rng = random.Random(11)
    for _ in range(500):
        k = rng.randint(1, 5)
        w = random_word(rng, k + 2, 4)
        a, b, bs = w[0], w[1], w[2:]
        assert row_pair_determinant(a, bs, b) == _product(bs, b)


def test_crossed_identity_on_random_words():
    rng = random.Random(12)
    for _ in range(500):
        k, l = rng.randint(1, 3), rng.randint(1, 3)
        w = random_word(rng, k + l + 8, 4)
        a, b, c, d = w[:4]
        bs, cs = w[4:4 + k], w[4 + k:4 + k + l]
        A = Mat2(*w[-4:])
        assert crossed_determinant(A, a, bs, b, c, cs, d) == _product(cs, _product(bs, b * c)) * A.det()


@settings(max_examples=60)
@given(st.lists(st.integers(-3, 3).filter(bool), min_size=6, max_size=12))
def test_row_pair_identity_on_integers(values):
    a, b, bs = values[0], values[1], values[2:]
    assert row_pair_determinant(a, bs, b) == _product(bs, b)
