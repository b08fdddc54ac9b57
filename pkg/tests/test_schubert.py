import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equikt.errors import DomainError, NotImplementedCase
from equikt.exactalg import GF
from equikt.oracles import flag_count, lattice_points
from equikt.schubert import (
    DemazureWord,
    chain_endpoint,
    demazure_ring,
    dominance_leq,
    dominant_below,
    eig_partitions,
    is_dominant,
    schubert_fixed_points,
    schubert_presentation,
    trace_at_fixed_point,
)
from equikt.tower import ideals_equal


def rng():
    return random.Random(0)


# -- dominance -----------------------------------------------------------------------


def test_dominance_examples():
    assert dominance_leq((1, 1), (2, 0))
    assert dominance_leq((2, 0), (2, 0))
    assert dominance_leq((1, 1, 1), (2, 1, 0))
    assert not dominance_leq((2, 1, 0), (1, 1, 1))
    with pytest.raises(DomainError):
        dominance_leq((1, 0), (1, 1))


def _dominant(n, total):
    return [c for c in itertools.product(range(total, -1, -1), repeat=n) if sum(c) == total and is_dominant(c)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dominance_is_partial_order(n):
    for total in range(7):
        P = _dominant(n, total)
        for a in P:
            assert dominance_leq(a, a)
            for b in P:
                if dominance_leq(a, b) and dominance_leq(b, a):
                    assert a == b
                for c in P:
                    if dominance_leq(a, b) and dominance_leq(b, c):
                        assert dominance_leq(a, c)


def test_dominant_below():
    assert sorted(dominant_below((2, 0))) == [(1, 1), (2, 0)]
    assert len(dominant_below((2, 1, 0))) == 2


# -- fixed points ---------------------------------------------------------------------


def test_fixed_points_examples():
    assert set(schubert_fixed_points(2, (2, 0))) == {(-2, 0), (0, -2), (-1, -1)}
    assert len(schubert_fixed_points(3, (2, 1, 0))) == 7
    assert len(schubert_fixed_points(2, (1, 0))) == 2


@pytest.mark.parametrize("mu", [(2, 0), (3, 0), (2, 1, 0), (3, 1, 0), (2, 2, 0), (1, 1, 0, 0), (4, 0), (2, 0, 0)])
def test_fixed_points_match_lattice_scan(mu):
    assert schubert_fixed_points(len(mu), mu) == lattice_points(mu)


# -- presentations -----------------------------------------------------------------------


def test_gl2_adjoint():
    p = schubert_presentation(2, (2, 0), rng=rng())
    assert p.rank == 3 and p.names == ("e1",)
    R = p.ring
    e1, t1, t2 = R.var("e1"), R.var("t1"), R.var("t2")
    cubic = (e1 - 2 * t1) * (e1 - 2 * t2) * (e1 - (t1 + t2))
    assert ideals_equal(p.relations, [cubic], 1, p.weights)
    vals = {trace_at_fixed_point(p, "e1", x) for x in p.points}
    B = p.base
    assert vals == {2 * B.var("t1"), 2 * B.var("t2"), B.var("t1") + B.var("t2")}
    prod = R.one()
    for v in vals:
        prod = prod * (e1 - v.change_ring(R))
    assert prod == cubic


def test_gl2_without_elimination_keeps_e2():
    p = schubert_presentation(2, (2, 0), rng=rng(), eliminate=False)
    assert p.names == ("e1", "e2") and p.rank == 3


def test_gl2_char2_refuses_elimination():
    p = schubert_presentation(2, (2, 0), coeffs=GF(2), rng=rng())
    assert "e2" in p.names
    assert p.rank == 3


def test_minuscule_is_bundle():
    p = schubert_presentation(2, (1, 0), rng=rng())
    assert p.rank == 2
    B = p.base
    assert {p.trace(p.names[0], x) for x in p.points} == {B.var("t1"), B.var("t2")}


def test_point_case():
    p = schubert_presentation(2, (0, 0), rng=rng())
    assert p.rank == 1 and p.points == [(0, 0)]


def test_gl3_adjoint_rank():
    p = schubert_presentation(3, (2, 1, 0), rng=rng())
    assert p.rank == 7 and p.free
    assert p.names == ("m1", "m2")
    assert p.localization_injective(rng())


@pytest.mark.parametrize("a", range(6))
def test_gl2_rank_law(a):
    mu = (a, 0)
    p = schubert_presentation(2, mu, rng=rng())
    assert p.rank == len(lattice_points(mu)) == a + 1
    assert p.localization_injective(rng())


def test_unsupported_cases():
    with pytest.raises(NotImplementedCase):
        schubert_presentation(3, (3, 0, 0), rng=rng())
    with pytest.raises(DomainError):
        schubert_presentation(2, (0, 2), rng=rng())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_trace_is_ring_hom(seed):
    r = random.Random(seed)
    p = schubert_presentation(2, (3, 0), rng=rng())
    B = p.ring

    def rand_class():
        f = B.zero()
        for _ in range(3):
            e = [r.randint(-2, 2), r.randint(-2, 2)] + [r.randint(0, 3) for _ in p.names]
            f = f + B.monomial(e, r.randint(-3, 3))
        return f

    a, b = rand_class(), rand_class()
    for x in p.points:
        assert p.trace(a * b, x) == p.trace(a, x) * p.trace(b, x)
        assert p.trace(a + b, x) == p.trace(a, x) + p.trace(b, x)
        assert p.trace(B.one(), x) == 1


def test_unknown_point():
    p = schubert_presentation(2, (2, 0), rng=rng())
    with pytest.raises(DomainError):
        p.trace("e1", (5, -7))


def test_json_round_trip():
    from equikt.schubert import SchubertPresentation

    p = schubert_presentation(3, (2, 1, 0), rng=rng())
    q = SchubertPresentation.from_json(p.to_json())
    assert q.to_json() == p.to_json()


# -- Demazure rings -----------------------------------------------------------------------


def test_demazure_examples():
    R = demazure_ring(DemazureWord(2, (1, 1)))
    assert R.rank == 4
    ring = R.ring
    t1, t2 = ring.var("t1"), ring.var("t2")
    assert set(R.relations) == {(ring.var(f"xi{i}") - t1) * (ring.var(f"xi{i}") - t2) for i in (0, 1)}
    assert demazure_ring(DemazureWord(3, (2, 1))).rank == 9
    assert demazure_ring(DemazureWord(2, ())).rank == 1


@pytest.mark.parametrize("d", range(9))
def test_gl2_word_rank(d):
    assert demazure_ring(DemazureWord(2, (1,) * d)).rank == 2 ** d


def test_demazure_endpoints_cover_fixed_points():
    word = DemazureWord(2, (1, 1))
    ends = {chain_endpoint(word, c) for c in itertools.product(range(2), repeat=2)}
    assert ends == set(schubert_fixed_points(2, (2, 0)))


def test_demazure_unsupported_step():
    with pytest.raises(NotImplementedCase):
        demazure_ring(DemazureWord(4, (2,)))


def test_demazure_over_gf():
    assert demazure_ring(DemazureWord(2, (1, 1)), GF(3), level=1).rank == 4


# -- eigenvalue partitions -------------------------------------------------------------


def test_eig_examples():
    assert len(eig_partitions(["a", "b", "c"], [1, 1, 1])) == 6
    assert len(eig_partitions(["a", "a"], [1, 1])) == 1
    assert len(eig_partitions(["a", "b", "c"], [2, 1])) == 3
    with pytest.raises(DomainError):
        eig_partitions(["a", "b"], [1, 2])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from("abcd"), min_size=1, max_size=6), st.data())
def test_eig_matches_flag_count(roots, data):
    m = len(roots)
    cuts = sorted(data.draw(st.sets(st.integers(1, m - 1), max_size=m - 1))) if m > 1 else []
    bounds = [0] + cuts + [m]
    mu = [b - a for a, b in zip(bounds, bounds[1:])]
    assert len(eig_partitions(roots, mu)) == flag_count(roots, mu)
