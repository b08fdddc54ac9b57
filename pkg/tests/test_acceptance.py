"""The ten acceptance criteria, each at its stated tolerance (exact
equality) and runtime budget.  Run with ``pytest tests/test_acceptance.py -v``;
one PASS/FAIL line per criterion is printed in the terminal summary."""

import io
import random
import time

import pytest

from equikt.cli import parse_presentation, run
from equikt.descent import SQUARES, mv_solve
from equikt.exactalg import GF, QQ, RingSpec, adams_base
from equikt.oracles import flag_count, lattice_points
from equikt.schubert import DemazureWord, demazure_ring, eig_partitions, schubert_fixed_points, schubert_presentation
from equikt.toric import curve_config_cohomology, fix_components, frustum_fan, negative_k_witness, p1_fan, p1xp1_fan, vv_ring
from equikt.tower import ideals_equal, reduce_modulo
from equikt.verify import GL3_RELATIONS, random_base_class, random_eig_instance, symmetric_to_t

SEED = 0

# the quintic as usually quoted; it differs from GL3_RELATIONS[0] in the
# c3*m2 and m1 coefficients
GL3_QUINTIC_QUOTED = (
    "3*m1^5 + (15*c2 - 5*c1^2)*m1^3 + (2*c1^3 - 9*c1*c2 + 9*c3)*m2 + (14*c2^2 - 4*c1^2*c2 - 6*c1*c3)*m1"
)
GL3_QUOTED = (GL3_QUINTIC_QUOTED,) + GL3_RELATIONS[1:]


def cubic_in(ring):
    e1, t1, t2 = ring.var("e1"), ring.var("t1"), ring.var("t2")
    return (e1 - 2 * t1) * (e1 - 2 * t2) * (e1 - (t1 + t2))


def test_1_gl2_adjoint(criterion):
    start = time.perf_counter()
    out = io.StringIO()
    status = run(["present", "--group", "GL2", "--mu", "2,0", "--seed", str(SEED)], out=out)
    p = parse_presentation(out.getvalue())
    elapsed = time.perf_counter() - start
    ok = (
        status == 0
        and p.rank == 3
        and p.names == ("e1",)
        and ideals_equal(p.relations, [cubic_in(p.ring)], 1, p.weights)
        and elapsed < 5
    )
    criterion(1, "GL2 adjoint: rank 3, ideal = cubic in e1", ok, f"{elapsed:.2f}s")


def _gl3_checks(relations_text):
    start = time.perf_counter()
    p = schubert_presentation(3, (2, 1, 0), rng=random.Random(SEED))
    ref = [symmetric_to_t(r, p.ring) for r in relations_text]
    Y = p.ambient
    vanish = [Y.normal_form(f.substitute(p.embedding, Y.ring)).is_zero() for f in ref]
    low = [r for r in p.relations if sum(w * k for w, k in zip(p.weights, _lead(r, p))) <= 5]
    reduce = [reduce_modulo(r, ref, 2, p.weights).is_zero() for r in low]
    return p, vanish, reduce, time.perf_counter() - start


def _lead(r, p):
    from equikt.tower import leading_term

    m, _ = leading_term(r, len(p.names), p.weights)
    return m


@pytest.mark.xfail(strict=True, reason="the quoted quintic does not vanish at the fixed points; see the decision log")
def test_2_gl3_adjoint_quoted_relations(criterion):
    p, vanish, reduce, elapsed = _gl3_checks(GL3_QUOTED)
    ok = p.rank == 7 and all(vanish) and all(reduce) and elapsed < 60
    criterion(2, "GL3 adjoint: rank 7, quoted relations vanish and generate", ok,
              f"rank {p.rank}, vanish {vanish}, reduce {reduce}, {elapsed:.2f}s")


def test_2b_gl3_adjoint_corrected_quintic(criterion):
    p, vanish, reduce, elapsed = _gl3_checks(GL3_RELATIONS)
    ok = p.rank == 7 and all(vanish) and all(reduce) and elapsed < 60
    criterion("2b", "GL3 adjoint: rank 7, relations with corrected quintic vanish and generate", ok,
              f"{elapsed:.2f}s")


def test_3_fixed_point_rank_law(criterion):
    start = time.perf_counter()
    ok = True
    ranks = []
    for a in range(6):
        mu = (a, 0)
        p = schubert_presentation(2, mu, rng=random.Random(SEED))
        pts = schubert_fixed_points(2, mu)
        ranks.append(p.rank)
        ok &= p.rank == len(pts) == len(lattice_points(mu)) == a + 1
        ok &= p.localization_injective(random.Random(SEED))
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120
    criterion(3, "GL2 a*omega1, a=0..5: rank = #fixed points, localization injective", ok,
              f"ranks {ranks}, {elapsed:.2f}s")


def test_4_localization_roots(criterion):
    p = schubert_presentation(2, (2, 0), rng=random.Random(SEED))
    B = p.base
    t1, t2 = B.var("t1"), B.var("t2")
    vals = [p.trace("e1", x) for x in p.points]
    prod = p.ring.one()
    for v in vals:
        prod = prod * (p.ring.var("e1") - v.change_ring(p.ring))
    ok = sorted(map(str, vals)) == sorted(map(str, [2 * t1, 2 * t2, t1 + t2])) and prod == cubic_in(p.ring)
    criterion(4, "e1 at fixed points = {2t1, 2t2, t1+t2}, product = cubic", ok)


def test_5_demazure_ranks(criterion):
    r11 = demazure_ring(DemazureWord(2, (1, 1))).rank
    r21 = demazure_ring(DemazureWord(3, (2, 1))).rank
    words = [demazure_ring(DemazureWord(2, (1,) * d)).rank for d in range(9)]
    ok = r11 == 4 and r21 == 9 and words == [2 ** d for d in range(9)]
    criterion(5, "Demazure ranks 4, 9 and 2^d for d <= 8", ok)


def test_6_nodal_cubic(criterion):
    res = mv_solve(SQUARES["nodal-cubic"]())
    ok = res.kneg1 == [0] and res.kernel_rank == 1
    criterion(6, "nodal cubic: K_-1 = Z, K_0 rank 1", ok)


def test_7_toric(criterion):
    start = time.perf_counter()
    F = frustum_fan()
    comps = fix_components(F, [0, 0, 1])
    desc = sorted(c.describe() for c in comps)
    cyc = [c for c in comps if c.kind == "curves"]
    coh = curve_config_cohomology(cyc[0].config) if len(cyc) == 1 else None
    w = negative_k_witness(F, [0, 0, 1])
    elapsed = time.perf_counter() - start
    ok = desc == ["cycle(4)", "point", "point"] and coh == (1, 1) and w.witness and w.bound >= 1 and elapsed < 5
    criterion(7, "frustum fan: cycle(4) + point + point, (h0,h1) = (1,1), witness", ok, f"{elapsed:.2f}s")


def test_8_vv_equalizer(criterion):
    rng = random.Random(SEED)
    ok = True
    for F, expect in ((p1_fan(), 2), (p1xp1_fan(), 4)):
        R = vv_ring(F)
        ok &= R.rank() == expect
        ok &= all(R.is_member(R.mul(R.random_member(rng), R.random_member(rng))) for _ in range(100))
    R = vv_ring(p1_fan())
    ok &= not R.is_member((R.base.one(), R.base.var("t1") ** 2 + 1))
    criterion(8, "VV ranks 2 and 4, closed under products, non-member rejected", ok)


def test_9_adams_frobenius(criterion):
    rng = random.Random(SEED)
    ok = True
    for p in (2, 3, 5):
        ring = RingSpec.torus(2, GF(p))
        ok &= all(adams_base(f, p) == f ** p for f in (random_base_class(ring, rng) for _ in range(100)))
    ring = RingSpec.torus(2, QQ)
    for _ in range(100):
        f, g = random_base_class(ring, rng), random_base_class(ring, rng)
        ok &= adams_base(f * g, 3) == adams_base(f, 3) * adams_base(g, 3)
    criterion(9, "psi^p = Frobenius over F_p, psi multiplicative in char 0", ok)


def test_10_eig_partitions(criterion):
    rng = random.Random(SEED)
    bad = []
    for _ in range(50):
        roots, mu = random_eig_instance(rng)
        if len(eig_partitions(roots, mu)) != flag_count(roots, mu):
            bad.append((roots, mu))
    criterion(10, "eigenvalue partitions = fixed flag counts on 50 instances", not bad, str(bad[:1]) if bad else "")
