import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from k3inv import linalg
from k3inv.errors import DegenerateLattice, GroupTooLarge, InvalidLatticeFile, NotTwoElementary, UnknownName
from k3inv.isometry import classification_table, fixed_lattice, simple_involution
from k3inv.lattice import (
    IntegerLattice,
    Sublattice,
    direct_sum,
    discriminant_invariants,
    is_even,
    is_primitive_sublattice,
    lattice_from_dict,
    lattice_invariants,
    lattice_to_dict,
    load_lattice,
    orthogonal_complement,
    saturation,
    signature,
    span_sublattice,
    standard_lattice,
)

from oracles import brute_signature, discriminant_by_closure


def random_unimodular(n, rng, steps=12):
    m = linalg.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice((-1, 1, 2, -2))
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    return m


def transform(gram, t):
    return linalg.matmul(linalg.matmul(t, gram), linalg.transpose(t))


@pytest.mark.parametrize(
    "name, rank, det, sig",
    [
        ("H", 2, -1, (1, 1, 0)),
        ("minusE8", 8, 1, (0, 8, 0)),
        ("A1", 1, -2, (0, 1, 0)),
        ("K3", 22, -1, (3, 19, 0)),
        ("3H", 6, -1, (3, 3, 0)),
        ("2minusE8", 16, 1, (0, 16, 0)),
    ],
)
def test_standard_lattices(name, rank, det, sig):
    l = standard_lattice(name)
    assert l.rank == rank
    assert l.det() == det
    assert signature(l) == sig
    assert is_even(l)


def test_k3_is_even_unimodular():
    d = discriminant_invariants(standard_lattice("K3"))
    assert d.order == 1 and d.a == 0 and d.ell == 0 and d.delta == 0


def test_k3_labels():
    l = standard_lattice("K3")
    assert l.labels[0] == "u_1^1" and l.labels[6] == "v_1^1" and l.labels[-1] == "v_8^2"


def test_unknown_name():
    with pytest.raises(UnknownName) as err:
        standard_lattice("E9")
    assert err.value.code == "E_UNKNOWN_NAME"


def test_asymmetric_gram_names_entry():
    with pytest.raises(InvalidLatticeFile, match=r"\[0\]\[1\]"):
        IntegerLattice([[2, 1], [0, 2]])


def test_degenerate_discriminant():
    with pytest.raises(DegenerateLattice):
        discriminant_invariants(IntegerLattice([[2, 2], [2, 2]]))


def test_group_bound():
    l = direct_sum(*[standard_lattice("A1")] * 6)
    with pytest.raises(GroupTooLarge):
        discriminant_invariants(l, bound=2**5)


def test_a1_invariants():
    assert tuple(lattice_invariants(standard_lattice("A1"))) == (1, 1, 1)
    assert tuple(lattice_invariants(standard_lattice("H"))) == (2, 0, 0)


def test_not_two_elementary():
    with pytest.raises(NotTwoElementary):
        lattice_invariants(IntegerLattice([[-6]]))


def test_json_round_trip(tmp_path):
    l = standard_lattice("K3")
    p = tmp_path / "k3.json"
    p.write_text(json.dumps(lattice_to_dict(l)))
    assert load_lattice(p) == l


@pytest.mark.parametrize(
    "doc",
    [{"name": "x"}, {"gram": [[1, 2], [3]]}, {"gram": [[1.5]]}, {"gram": "abc"}, {"gram": [[True]]}],
)
def test_bad_lattice_documents(doc):
    with pytest.raises(InvalidLatticeFile):
        lattice_from_dict(doc)


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    with pytest.raises(InvalidLatticeFile):
        load_lattice(p)


@pytest.mark.parametrize("sid, _", classification_table())
def test_delta_matches_closure_oracle(sid, _):
    # the closure oracle explodes for a > 11; all fixed lattices are within that
    l = fixed_lattice(simple_involution(sid)).as_lattice()
    d = discriminant_invariants(l)
    order, exponent, delta = discriminant_by_closure(l.gram)
    assert d.order == order
    assert d.is_two_elementary == (exponent <= 2)
    assert d.delta == delta


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.lists(st.sampled_from(["H", "A1", "minusE8"]), min_size=1, max_size=3))
def test_invariants_survive_basis_change(seed, parts):
    l = direct_sum(*(standard_lattice(p) for p in parts))
    t = random_unimodular(l.rank, random.Random(seed))
    m = IntegerLattice(transform(l.gram, t))
    assert signature(m) == signature(l)
    assert discriminant_invariants(m).order == discriminant_invariants(l).order
    if is_even(l):
        a, b = discriminant_invariants(m), discriminant_invariants(l)
        assert (a.a, a.delta, a.elementary_divisors) == (b.a, b.delta, b.elementary_divisors)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_signature_matches_eigenvalues(b):
    n = len(b)
    sym = [[b[i][j] + b[j][i] for j in range(n)] for i in range(n)]
    assert signature(IntegerLattice(sym)) == brute_signature(sym)


def test_orthogonal_complement_of_hyperbolic_vector():
    k3 = standard_lattice("K3")
    z = [1, 1] + [0] * 20
    c = orthogonal_complement(k3, [z])
    assert c.rank == 21
    assert is_primitive_sublattice(c)
    assert all(k3.inner(v, z) == 0 for v in c.basis)
    assert signature(c.as_lattice()) == (2, 19, 0)


def test_span_and_saturation():
    l = standard_lattice("H")
    s = span_sublattice(l, [[2, 0]])
    assert not is_primitive_sublattice(s)
    sat = saturation(s)
    assert sat.same_as(Sublattice(l, [[1, 0]]))
    assert sat.contains([5, 0]) and not sat.contains([0, 1])
