import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equikt.errors import DomainError, FanError
from equikt.oracles import graph_betti
from equikt.toric import (
    CurveConfig,
    Fan,
    curve_config_cohomology,
    fan_validate,
    fix_components,
    fixed_cones,
    frustum_fan,
    load_fan,
    negative_k_witness,
    p1_fan,
    p1xp1_fan,
    p2_fan,
    vv_ring,
)

E3 = [0, 0, 1]


def hirzebruch(a):
    return Fan(2, [(1, 0), (0, 1), (-1, a), (0, -1)], [{0, 1}, {1, 2}, {2, 3}, {3, 0}])


def p1_cubed():
    rays = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    cones = [{a, b, c} for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return Fan(3, rays, cones)


def p3():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    return Fan(3, rays, [{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}])


SMOOTH_COMPLETE = [p1_fan, p1xp1_fan, p2_fan, lambda: hirzebruch(1), lambda: hirzebruch(2), p1_cubed, p3]


def unimodular(rng, d):
    # product of random elementary matrices
    M = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(6):
        i, j = rng.sample(range(d), 2)
        k = rng.randint(-2, 2)
        M[i] = [a + k * b for a, b in zip(M[i], M[j])]
    return M


def apply(M, v):
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


# -- validation ----------------------------------------------------------------------


def test_validate_p1():
    rep = fan_validate(p1_fan())
    assert rep.smooth and rep.complete


def test_validate_frustum():
    rep = fan_validate(frustum_fan())
    assert rep.complete and not rep.smooth
    assert not rep.simplicial
    with pytest.raises(FanError):
        fan_validate(frustum_fan(), assert_simplicial=True)
    assert len(frustum_fan().all_cones()) == 27


def test_missing_cap_is_not_complete():
    F = frustum_fan()
    G = Fan(3, F.rays, F.cones[:-1])
    rep = fan_validate(G)
    assert not rep.complete and rep.boundary_walls == 4


def test_bad_rays():
    with pytest.raises(FanError):
        Fan(2, [(2, 0), (0, 1)], [{0, 1}])
    with pytest.raises(FanError):
        Fan(2, [(0, 0)], [{0}])


def test_fan_json_round_trip(tmp_path):
    F = frustum_fan()
    assert Fan.from_json(F.to_json()) == F
    path = tmp_path / "f.json"
    import json

    path.write_text(json.dumps(F.to_json()))
    assert load_fan(str(path)) == F
    assert load_fan("note76.json") == F
    with pytest.raises(FanError):
        load_fan(str(tmp_path / "missing.json"))


# -- fixed loci -----------------------------------------------------------------------


def test_frustum_components():
    F = frustum_fan()
    comps = fix_components(F, E3)
    assert sorted(c.describe() for c in comps) == ["cycle(4)", "point", "point"]
    cyc = next(c for c in comps if c.kind == "curves")
    assert curve_config_cohomology(cyc.config) == (1, 1)
    w = negative_k_witness(F, E3)
    assert w.witness and w.bound >= 1 and not w.inconclusive


def test_fixed_cones_whole_space():
    F = p1xp1_fan()
    full = fixed_cones(F, [[1, 0], [0, 1]])
    assert sorted(map(sorted, full)) == sorted(map(sorted, F.cones))


def test_generic_direction_noncomplete_fan_is_empty():
    # cone over a single ray: only that ray's line is fixed
    F = Fan(2, [(1, 0), (0, 1)], [{0}, {1}])
    assert fixed_cones(F, [1, 1]) == []
    assert fix_components(F, [1, 1]) == []


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=3).filter(any))
def test_fixed_cones_monotone(v):
    F = frustum_fan()
    big = set(fixed_cones(F, [v]))
    assert set(fixed_cones(F, [v, E3])) <= big
    assert set(fixed_cones(F, [v, [1, 0, 0], [0, 1, 0], E3])) <= big


def test_p1xp1_first_axis():
    comps = fix_components(p1xp1_fan(), [1, 0])
    # orbit enumeration: {0, inf} x P^1
    assert [c.describe() for c in comps] == ["chain(1)", "chain(1)"]


def test_p1_cubed_axis_gives_higher_components():
    comps = fix_components(p1_cubed(), E3)
    assert [c.kind for c in comps] == ["higher"] * 2
    w = negative_k_witness(p1_cubed(), E3)
    assert not w.witness and not w.inconclusive


@pytest.mark.parametrize("seed", range(8))
def test_components_invariant_under_unimodular_change(seed):
    rng = random.Random(seed)
    F = frustum_fan()
    M = unimodular(rng, 3)
    G = Fan(3, [apply(M, r) for r in F.rays], F.cones)
    V = apply(M, E3)
    before = sorted(c.describe() for c in fix_components(F, E3))
    after = sorted(c.describe() for c in fix_components(G, V))
    assert before == after


@pytest.mark.parametrize("seed", range(5))
def test_components_invariant_under_ray_reordering(seed):
    rng = random.Random(seed)
    F = frustum_fan()
    perm = list(range(len(F.rays)))
    rng.shuffle(perm)
    inv = {old: new for new, old in enumerate(perm)}
    G = Fan(3, [F.rays[i] for i in perm], [{inv[i] for i in c} for c in F.cones])
    assert sorted(c.describe() for c in fix_components(G, E3)) == ["cycle(4)", "point", "point"]


@pytest.mark.parametrize("make", SMOOTH_COMPLETE)
def test_smooth_complete_has_no_witness(make):
    F = make()
    rng = random.Random(11)
    dirs = [[int(i == j) for j in range(F.dim)] for i in range(F.dim)]
    dirs += [[rng.randint(-3, 3) or 1 for _ in range(F.dim)] for _ in range(5)]
    for v in dirs:
        assert not negative_k_witness(F, v).witness


def test_witness_needs_complete_fan():
    F = Fan(2, [(1, 0), (0, 1)], [{0, 1}])
    with pytest.raises(FanError):
        negative_k_witness(F, [1, 0])


# -- curve configurations --------------------------------------------------------------


def test_curve_examples():
    assert curve_config_cohomology(CurveConfig(list(range(4)), [(0, 1), (1, 2), (2, 3), (3, 0)])) == (1, 1)
    assert curve_config_cohomology(CurveConfig(list(range(4)), [(0, 1), (1, 2), (2, 3)])) == (1, 0)
    two_triangles = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
    assert curve_config_cohomology(CurveConfig(list(range(6)), two_triangles)) == (2, 2)
    with pytest.raises(DomainError):
        CurveConfig([0], [(0, 0)])


@st.composite
def multigraph(draw):
    n = draw(st.integers(1, 8))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
    return n, draw(st.lists(pairs, max_size=12))


@settings(max_examples=80, deadline=None)
@given(multigraph(), st.randoms())
def test_curve_cohomology_matches_betti(g, r):
    n, edges = g
    h = curve_config_cohomology(CurveConfig(list(range(n)), edges))
    assert h == graph_betti(n, edges)
    perm = list(range(n))
    r.shuffle(perm)
    relabeled = [(perm[a], perm[b]) for a, b in edges]
    assert curve_config_cohomology(CurveConfig(list(range(n)), relabeled)) == h
    if h[0] == 1:
        assert h[0] - h[1] == n - len(edges)


# -- piecewise characters ---------------------------------------------------------------


@pytest.mark.parametrize("make,expect", [(p1_fan, 2), (p1xp1_fan, 4), (p2_fan, 3), (p3, 4), (lambda: hirzebruch(1), 4)])
def test_vv_rank_equals_cone_count(make, expect):
    R = vv_ring(make())
    assert R.rank() == expect == R.ncones


@pytest.mark.parametrize("make", [p1_fan, p1xp1_fan, p2_fan])
def test_vv_closed_under_operations(make):
    R = vv_ring(make())
    rng = random.Random(5)
    for _ in range(100):
        f, g = R.random_member(rng), R.random_member(rng)
        assert R.is_member(f) and R.is_member(g)
        assert R.is_member(R.mul(f, g))
        assert R.is_member(R.add(f, g))
    c = R.base.parse("3*t1 - t1^-2")
    assert R.is_member(R.constant(c))
    for L in R.line_bundle_classes():
        assert R.is_member(L)


def test_vv_rejects_non_member():
    R = vv_ring(p1_fan())
    t1 = R.base.var("t1")
    assert not R.is_member((R.base.one(), t1 ** 2 + 1))
    assert R.is_member((R.base.one(), t1))


def test_vv_needs_smooth_fan():
    with pytest.raises(FanError):
        vv_ring(frustum_fan())
