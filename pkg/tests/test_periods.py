import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3inv import linalg
from k3inv.errors import DimensionMismatch, IndexOutOfRange, NotSignedPermutation, OrbitOverlap, TypeMismatch
from k3inv.isometry import K3, LatticeIsometry, SimpleInvolutionId, simple_involution
from k3inv.pairs import PairId, build_pair
from k3inv.periods import (
    COWEIGHTS,
    PICARD_BASIS,
    ROOT,
    SINGLE_SIGNS,
    PeriodSpec,
    Slot,
    canonical_period_spec,
    check_equivariance,
    deletion_config,
    orbit_analysis,
    perturb_pair,
    perturb_single,
    single_deleted_nodes,
    single_orbits,
    singular_roots,
    split_by_kind,
)
from k3inv.roots import AdeConfig

BASE = AdeConfig.parse("3A1+2E8")
ALL_IDS = [SimpleInvolutionId(i, j) for i in range(1, 8) for j in range(1, 5)]


def test_canonical_spec_norms():
    s = canonical_period_spec(1)
    assert [K3.norm(v.base) for v in s.slots()] == [2, 2, 2]
    s7 = canonical_period_spec(7)
    assert K3.norm(s7.x.base) == 4 and K3.norm(s7.z.base) == 4
    assert all(K3.inner(a.base, b.base) == 0 for a, b in [(s7.x, s7.y), (s7.x, s7.z), (s7.y, s7.z)])
    with pytest.raises(IndexOutOfRange):
        canonical_period_spec(0)


def test_equivariance_examples():
    rho = simple_involution(SimpleInvolutionId(1, 1))
    spec = canonical_period_spec(1)
    assert check_equivariance(rho, (-1, -1, 1), spec)
    assert not check_equivariance(rho, (-1, 1, -1), spec)
    ident = LatticeIsometry(K3, linalg.identity(22))
    assert check_equivariance(ident, (1, 1, 1), canonical_period_spec(7))
    with pytest.raises(DimensionMismatch):
        check_equivariance(LatticeIsometry(K3.__class__(((1,),)), ((1,),)), (1, 1, 1), spec)


@pytest.mark.parametrize("i", range(1, 8))
def test_canonical_singularities(i):
    rep = singular_roots(canonical_period_spec(i))
    assert rep.config == BASE and rep.root_count == 486 and len(rep.simple_roots) == 19


def test_extra_a1_direction():
    spec = canonical_period_spec(1).extended(z=[PICARD_BASIS[0]])
    assert str(singular_roots(spec).config) == "2A1+2E8"


def test_all_coweights_leave_no_roots():
    spec = canonical_period_spec(1).extended(x=COWEIGHTS)
    rep = singular_roots(spec)
    assert rep.root_count == 0 and str(rep) == "smooth (roots: 0)"


def test_coweights_are_dual_to_roots():
    for j, w in enumerate(COWEIGHTS):
        assert [K3.inner(w, r) for r in PICARD_BASIS] == [int(j == k) for k in range(19)]


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=Fraction(1, 50), max_value=50), st.sampled_from(["x", "y", "z"]))
def test_rescaling_does_not_change_roots(c, slot):
    spec = canonical_period_spec(1)
    old = getattr(spec, slot)
    scaled = PeriodSpec(**{**{k: getattr(spec, k) for k in "xyz"}, slot: Slot([c * t for t in old.base], old.perturb)})
    assert singular_roots(scaled).config == BASE


def test_spec_json_round_trip():
    spec = canonical_period_spec(7).extended(x=[COWEIGHTS[0]])
    doc = spec.to_json()
    assert any("/" in c for c in doc["x"]["perturb"][0])
    assert PeriodSpec.from_json(doc) == spec


def test_nonpositive_base_rejected():
    with pytest.raises(ValueError):
        Slot(PICARD_BASIS[0])


# --- one involution -----------------------------------------------------------------


def test_perturb_nothing():
    rho = simple_involution(SimpleInvolutionId(3, 2))
    spec = canonical_period_spec(3)
    assert perturb_single(rho, spec) == spec


def test_trivalent_orbit_of_7_4():
    rho = simple_involution(SimpleInvolutionId(7, 4))
    orbits = {o.id: o for o in single_orbits(rho)}
    assert orbits[7].members == (7, 15) and orbits[7].kind == "swapped"
    assert orbits[1].members == (1, 2) and orbits[3].kind == "negated"
    spec = perturb_single(rho, canonical_period_spec(7), m3=[7])
    assert check_equivariance(rho, SINGLE_SIGNS, spec)
    assert str(singular_roots(spec).config) == "5A1+2A2+2A4"


def test_literal_root_directions_keep_e7():
    # adding the root itself only removes the roots not orthogonal to it
    rho = simple_involution(SimpleInvolutionId(7, 4))
    spec = perturb_single(rho, canonical_period_spec(7), m3=[7], directions=ROOT)
    assert str(singular_roots(spec)) == "3A1+2E7 (roots: 258)"


def test_orbit_named_by_other_member():
    rho = simple_involution(SimpleInvolutionId(7, 4))
    a = perturb_single(rho, canonical_period_spec(7), m3=[15])
    b = perturb_single(rho, canonical_period_spec(7), m3=[7])
    assert a == b


@pytest.mark.parametrize("sid", ALL_IDS, ids=str)
def test_resolving_everything_is_smooth(sid):
    rho = simple_involution(sid)
    sets = split_by_kind(rho, range(1, 20))
    spec = perturb_single(rho, canonical_period_spec(sid.i), *sets)
    assert check_equivariance(rho, SINGLE_SIGNS, spec)
    assert singular_roots(spec).root_count == 0


def test_type_mismatch_single():
    rho = simple_involution(SimpleInvolutionId(7, 4))
    with pytest.raises(TypeMismatch):
        perturb_single(rho, canonical_period_spec(7), m1=[3])
    with pytest.raises(IndexOutOfRange):
        perturb_single(rho, canonical_period_spec(7), m1=[20])


def test_random_single_choices_stay_equivariant():
    rng = random.Random(7)
    for _ in range(20):
        sid = rng.choice(ALL_IDS)
        rho = simple_involution(sid)
        chosen = [o.id for o in single_orbits(rho) if rng.random() < 0.4]
        sets = split_by_kind(rho, chosen)
        spec = perturb_single(rho, canonical_period_spec(sid.i), *sets)
        assert check_equivariance(rho, SINGLE_SIGNS, spec)
        assert singular_roots(spec).config == deletion_config(single_deleted_nodes(rho, *sets))


# --- two involutions ----------------------------------------------------------------


def test_orbit_types_of_trivial_pair():
    rho1, rho2, _ = build_pair(PairId.parse("1,1/1,1"))
    rep = orbit_analysis(rho1, rho2)
    assert all(rep[i].type == (1, 1) for i in range(4, 20))
    assert rep[1].type == (1, -1) and rep[1].prime == tuple(int(k == 0) for k in range(19))
    assert rep[2].type == (-1, -1) and rep[3].type == (-1, 1)


def test_swapped_orbit_prime():
    rho1, rho2, _ = build_pair(PairId.parse("1,4/1,4"))
    rep = orbit_analysis(rho1, rho2)
    e = rep[4]
    assert e.type == (-1, -1) and e.partner == 12
    assert e.prime[3] == 1 and e.prime[11] == -1 and sum(map(abs, e.prime)) == 2


def test_not_signed_permutation():
    d = [0] * 22
    d[6], d[8] = 1, 1  # v_1^1 + v_3^1 is a root
    refl = [[int(i == j) + K3.inner([int(k == j) for k in range(22)], d) * d[i] for j in range(22)] for i in range(22)]
    m = LatticeIsometry(K3, refl)
    assert m.is_involution()
    with pytest.raises(NotSignedPermutation):
        orbit_analysis(m, m)


def test_pair_empty_sets():
    rho1, rho2, spec = build_pair(PairId.parse("1,1/1,1"))
    assert singular_roots(perturb_pair(rho1, rho2, spec)).config == BASE


def test_pair_resolve_all_a1():
    # the literal rule lets all three A1 go; only pointwise fixed roots stay
    rho1, rho2, spec = build_pair(PairId.parse("1,1/1,1"))
    out = perturb_pair(rho1, rho2, spec, p=[2], q=[3], r=[1])
    assert str(singular_roots(out).config) == "2E8"


def test_pair_errors():
    rho1, rho2, spec = build_pair(PairId.parse("1,4/1,4"))
    with pytest.raises(OrbitOverlap):
        perturb_pair(rho1, rho2, spec, p=[4, 12])
    with pytest.raises(TypeMismatch):
        perturb_pair(rho1, rho2, spec, q=[4])


def test_single_orbit_drops_node_count():
    rho1, rho2, spec = build_pair(PairId.parse("7,4/1,1"))
    rep = orbit_analysis(rho1, rho2)
    for i in range(1, 20):
        e = rep[i]
        if e.type == (1, 1) or e.prime is None:
            continue
        slot = {(-1, -1): "p", (-1, 1): "q", (1, -1): "r"}[e.type]
        out = perturb_pair(rho1, rho2, spec, **{slot: [i]})
        assert singular_roots(out).config.node_count == 19 - len(rep.orbit(i))
