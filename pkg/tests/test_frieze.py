from fractions import Fraction

import pytest

from clusterfrieze.checks import is_positive_laurent
from clusterfrieze.frieze import (
    UnsupportedFork,
    WindowOutOfRange,
    column_period,
    complete_downward,
    compute_frieze,
    diamond_failures,
    frieze_relation_failures,
    fundamental_quiver,
    modelled_quiver,
    part_F,
    plane_values,
    specialize,
    unimodular_check,
)
from clusterfrieze.laurent import LaurentPolynomial as L
from clusterfrieze.quiver import ForkConfiguration, Quiver, Seed, fork_info, a_orientations, d_orientations, initial_seed, mutation_closure

D5_ENTERING = Quiver(5, ((1, 3), (2, 3), (3, 4), (4, 5)))
D4_ENTERING = Quiver(4, ((1, 3), (2, 3), (3, 4)))


def u(i, rank):
    return L.variable(i, rank)


def test_d5_first_step_on_the_fork():
    f = compute_frieze(initial_seed(D5_ENTERING))
    assert f[(1, 1)] == (1 + u(3, 5)) / u(1, 5)
    assert f[(1, 2)] == (1 + u(3, 5)) / u(2, 5)
    assert f.column(0) == [u(i, 5) for i in range(1, 6)]


def test_d5_column_n_repeats_with_fork_swapped():
    f = compute_frieze(initial_seed(D5_ENTERING))
    assert f.column(5) == [u(2, 5), u(1, 5), u(3, 5), u(4, 5), u(5, 5)]
    assert column_period(f, {1: 2, 2: 1}) == 5
    assert column_period(f) == 10


def test_d4_column_n_is_column_zero():
    f = compute_frieze(initial_seed(D4_ENTERING))
    assert f.column(4) == [u(1, 4), u(2, 4), u(3, 4), u(4, 4)]


def test_merged_row_of_modelled_quiver():
    mq = modelled_quiver(part_F(compute_frieze(initial_seed(D5_ENTERING))))
    u1, u2, u3 = u(1, 5), u(2, 5), u(3, 5)
    assert mq.rows == (1, 3, 4, 5)
    assert mq[(0, 1)] == u1 * u2
    assert mq[(1, 1)] == (1 + u3) ** 2 / (u1 * u2)
    assert mq[(5, 1)] == u1 * u2
    assert mq[(0, 4)] == u(4, 5)


def test_downward_completion_of_d4():
    comp = complete_downward(modelled_quiver(part_F(compute_frieze(initial_seed(D4_ENTERING)))))
    assert comp.values[(1, 4)] == 2 + u(3, 4)
    assert comp.h0 == 1
    assert comp.k0 < 0


@pytest.mark.parametrize("n", (4, 5, 6))
def test_middle_value_is_one_for_every_unmixed_orientation(n):
    for q in d_orientations(n):
        try:
            mq = modelled_quiver(part_F(compute_frieze(initial_seed(q))))
        except UnsupportedFork:
            continue
        assert complete_downward(mq).h0 == 1


def test_mixed_fork_has_no_modelled_quiver():
    q = Quiver(4, ((3, 1), (2, 3), (3, 4)))
    with pytest.raises(UnsupportedFork):
        modelled_quiver(part_F(compute_frieze(initial_seed(q))))


def test_part_f_needs_n_columns():
    with pytest.raises(WindowOutOfRange):
        part_F(compute_frieze(initial_seed(D4_ENTERING), 2))


def test_unimodular_check():
    assert unimodular_check(2, 3, 1, 2)
    assert not unimodular_check(1, 1, 1, 1)
    vals = plane_values(compute_frieze(initial_seed(Quiver(2, ((1, 2),)))))
    x, y = next(p for p in sorted(vals) if all(
        c in vals for c in ((p[0], p[1] + 1), (p[0] + 1, p[1]), (p[0] + 1, p[1] + 1))))
    a, b, c, d = vals[(x, y + 1)], vals[(x + 1, y + 1)], vals[(x, y)], vals[(x + 1, y)]
    assert unimodular_check(a, b, c, d)
    assert not unimodular_check(b, a, c, d)


def test_fundamental_quiver_positions_of_a3():
    f = compute_frieze(initial_seed(Quiver(3, ((1, 2), (2, 3)))))
    fq = fundamental_quiver(f, 0)
    assert set(fq.values) == {(0, 3), (1, 3), (2, 3), (3, 3), (1, 2), (2, 2), (3, 2), (2, 1), (3, 1)}


def test_fundamental_quiver_of_a1():
    fq = fundamental_quiver(compute_frieze(initial_seed(Quiver(1))), 0)
    assert set(fq.values.values()) == {u(1, 1), 2 / u(1, 1)} or set(fq.values.values()) == {
        u(1, 1), 1 / u(1, 1) + 1 / u(1, 1)}


def test_fundamental_quiver_outside_computed_columns():
    f = compute_frieze(initial_seed(Quiver(3, ((1, 2), (2, 3)))), 2)
    with pytest.raises(WindowOutOfRange):
        fundamental_quiver(f, 0)


@pytest.mark.parametrize("m", range(1, 8))
def test_fundamental_quiver_is_the_cluster_set(m):
    for q in a_orientations(m)[:8]:
        seed = initial_seed(q)
        for k0 in (0, 2):
            fq = fundamental_quiver(compute_frieze(seed, m + 3 + k0), k0)
            assert len(fq) == m * (m + 3) // 2
            if m <= 5:
                assert set(fq.values.values()) == mutation_closure(seed)


@pytest.mark.parametrize("m", range(1, 8))
def test_path_friezes_obey_relations(m):
    for q in a_orientations(m)[:8]:
        f = compute_frieze(initial_seed(q), m + 3, first_column=-2)
        assert not frieze_relation_failures(f)
        checked, bad = diamond_failures(plane_values(f))
        assert checked > 0 and not bad
        assert all(is_positive_laurent(v) for v in f.values.values())


@pytest.mark.parametrize("n", range(4, 8))
def test_type_d_friezes_are_positive_laurent(n):
    for q in d_orientations(n)[:16]:
        f = compute_frieze(initial_seed(q))
        assert not frieze_relation_failures(f)
        assert all(is_positive_laurent(v) for v in f.values.values())


@pytest.mark.parametrize("m", range(1, 9))
def test_all_ones_path_friezes_are_integral_and_periodic(m):
    for q in a_orientations(m)[:4]:
        sp = specialize(compute_frieze(initial_seed(q), 2 * (m + 3)), {i: 1 for i in range(1, m + 1)})
        assert all(isinstance(x, Fraction) and x.denominator == 1 and x > 0 for x in sp.values.values())
        assert all(sp[(k + m + 3, i)] == sp[(k, i)] for k in range(m + 4) for i in range(1, m + 1))
        assert (m + 3) % column_period(sp) == 0


def test_all_ones_d4_values():
    sp = specialize(part_F(compute_frieze(initial_seed(D4_ENTERING))).frieze, {i: 1 for i in range(1, 5)})
    part = sorted(int(sp[(k, i)]) for k in range(4) for i in range(1, 5))
    assert part == [1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 4, 4, 5, 6, 11]


@pytest.mark.parametrize("n", (4, 5, 6))
def test_part_f_holds_every_cluster_variable(n):
    for q in d_orientations(n)[:4]:
        seed = initial_seed(q)
        assert part_F(compute_frieze(seed)).distinct_values() == mutation_closure(seed)


@pytest.mark.parametrize("n", (4, 5, 6, 7))
def test_type_d_column_period(n):
    # measured: period n for even n; for odd n, period 2n, and n up to a fork
    # swap unless the fork is mixed
    for q in d_orientations(n):
        f = compute_frieze(initial_seed(q))
        if n % 2 == 0:
            assert column_period(f) == n
            continue
        assert column_period(f) == 2 * n
        swapped = column_period(f, {1: 2, 2: 1})
        if fork_info(q).configuration is ForkConfiguration.MIXED:
            assert swapped is None
        else:
            assert swapped == n


def test_backward_columns_invert_forward_ones():
    seed = initial_seed(D5_ENTERING)
    f = compute_frieze(seed, 4, first_column=-4)
    g = compute_frieze(seed, 8)
    shifted = {(k - 4, i): g[(k, i)] for k in range(9) for i in range(1, 6)}
    # the frieze from column -4 is determined by column -4 alone
    h = compute_frieze(Seed(D5_ENTERING, tuple(f.column(-4))), 8)
    assert all(h[(k + 4, i)] == f[(k, i)] for k in range(-4, 5) for i in range(1, 6))
    assert shifted[(0, 1)] == g[(4, 1)]
