import random
from fractions import Fraction

import pytest

from salemk3 import linalg
from salemk3.lattices import (
    FiniteQuadraticForm,
    GlueMap,
    Lattice,
    LatticeError,
    discriminant_action,
    discriminant_form,
    enumerate_vectors_of_norm,
    find_anti_isometry,
    find_form_isometry,
    forms_isomorphic,
    glue,
    hyperbolic_p_form,
    is_primitive_sublattice,
    lattice_A2,
    lattice_E6,
    lattice_E8,
    lattice_U,
    lattice_from_json,
    lattice_to_json,
    named_lattice,
    orthogonal_complement,
    overlattice_from_isotropic,
    p_primary_part,
    roots,
)

from oracles import brute_vectors_of_norm, fraction_det, smith_diagonal

U = lattice_U()
E8 = lattice_E8()


def test_determinant_examples():
    assert U.determinant() == -1
    assert E8.determinant() == 1
    assert Lattice([[-2, 0], [0, 2]]).determinant() == -4


def test_determinant_matches_fraction_oracle():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.randint(1, 5)
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = rng.randint(-4, 4)
        det = linalg.bareiss_det(tuple(tuple(r) for r in M))
        assert det == fraction_det(M)


def test_signature_examples():
    assert U.signature() == (1, 1)
    assert E8.signature() == (0, 8)
    assert named_lattice("3U+2E8").signature() == (3, 19)
    assert named_lattice("3U").signature() == (3, 3)
    assert named_lattice("U+E8").signature() == (1, 9)


def test_signature_additive_det_multiplicative():
    rng = random.Random(17)
    mats = [U, E8, Lattice([[-2]]), Lattice([[4]]), lattice_A2()]
    for _ in range(10):
        a, b = rng.choice(mats), rng.choice(mats)
        s = a.direct_sum(b)
        assert s.signature() == tuple(x + y for x, y in zip(a.signature(), b.signature()))
        assert s.determinant() == a.determinant() * b.determinant()


def test_dual_basis_examples():
    assert U.dual_basis() == ((0, 1), (1, 0))
    assert Lattice([[-2]]).dual_basis() == ((Fraction(-1, 2),),)
    assert linalg.is_integral(E8.dual_basis())


def test_discriminant_form_examples():
    q = discriminant_form(Lattice([[-2]]))
    assert q.orders == (2,)
    assert q.q_values == (Fraction(3, 2),)
    assert discriminant_form(E8).is_trivial()
    q2 = discriminant_form(Lattice([[22, 33], [33, 22]]))
    assert q2.orders == (11, 55)
    assert q2.orders == tuple(smith_diagonal([[22, 33], [33, 22]]))


def test_discriminant_group_order_is_det():
    rng = random.Random(29)
    count = 0
    while count < 15:
        n = rng.randint(1, 4)
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = rng.randint(-3, 3)
                M[i][j] = M[j][i] = 2 * v if i == j else v
        try:
            L = Lattice(M)
        except LatticeError:
            continue
        count += 1
        assert discriminant_form(L).order() == abs(L.determinant())


def test_discriminant_form_rejects_odd():
    with pytest.raises(LatticeError):
        discriminant_form(Lattice([[1]]))


def test_p_primary_parts():
    q6 = discriminant_form(Lattice([[-6]]))
    assert q6.orders == (6,)
    assert p_primary_part(q6, 2).orders == (2,)
    assert p_primary_part(q6, 5).orders == ()
    assert p_primary_part(q6, 3).orders == (3,)
    q2 = discriminant_form(Lattice([[22, 33], [33, 22]]))
    assert p_primary_part(q2, 11).orders == (11, 11)
    assert p_primary_part(q2, 5).orders == (5,)


def test_discriminant_form_of_direct_sum():
    A = Lattice([[-2]])
    B = lattice_A2()
    q_sum = discriminant_form(A.direct_sum(B))
    q_parts = discriminant_form(A).direct_sum(discriminant_form(B))
    assert q_sum.orders == q_parts.orders
    assert sorted(q_sum.q_values) == sorted(q_parts.q_values) or forms_isomorphic(q_sum, q_parts)


def test_e6_discriminant():
    q = discriminant_form(lattice_E6())
    assert q.orders == (3,)
    assert q.q_values == (Fraction(2, 3),)


def test_glue_to_unimodular():
    M, N = Lattice([[-2]]), Lattice([[2]])
    qM, qN = discriminant_form(M), discriminant_form(N)
    phi = GlueMap(qM, qN, find_anti_isometry(qM, qN))
    L, basis = glue(M, N, phi)
    assert L.rank == 2 and L.is_even() and L.determinant() == -1
    # complement of the first block recovers the second
    embed = linalg.rat_inverse(basis)
    m_row = tuple(int(x) for x in embed[0])
    comp, _ = orthogonal_complement(L, [m_row])
    assert comp.gram == ((2,),)


def test_glue_trivial_forms():
    M, N = E8, U
    phi = GlueMap(discriminant_form(M), discriminant_form(N), ())
    L, _ = glue(M, N, phi)
    assert L.gram == M.direct_sum(N).gram


def test_glue_rejects_bad_map():
    M, N = Lattice([[-2]]), Lattice([[-2]])
    qM, qN = discriminant_form(M), discriminant_form(N)
    with pytest.raises(LatticeError):
        GlueMap(qM, qN, ((1,),))  # q values add, not negate


def test_overlattice_from_isotropic():
    M = Lattice([[-2, 0], [0, 2]])
    qM = discriminant_form(M)
    coords = qM.dual_coords((Fraction(1, 2), Fraction(1, 2)))
    L, _ = overlattice_from_isotropic(M, [coords])
    assert abs(L.determinant()) == 1 and L.is_even()
    # trivial subgroup: the lattice itself
    L0, _ = overlattice_from_isotropic(M, [])
    assert L0.gram == M.gram


def test_overlattice_rejects_non_isotropic():
    M = Lattice([[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]])
    qM = discriminant_form(M)
    coords = qM.dual_coords((Fraction(1, 2), Fraction(1, 2), 0, 0))
    assert qM.q_of(coords) == 1
    with pytest.raises(LatticeError):
        overlattice_from_isotropic(M, [coords])


def test_orthogonal_complement_examples():
    L = Lattice([[-2, 0], [0, 2]])
    comp, rows = orthogonal_complement(L, [(1, 0)])
    assert comp.gram == ((2,),)
    with pytest.raises(LatticeError):
        orthogonal_complement(U, [(1, 0)])  # isotropic span
    with pytest.raises(LatticeError) as exc:
        orthogonal_complement(L, [(2, 0)])
    assert "saturation" in str(exc.value)


def test_complement_discriminant_antiisometric():
    # q_{M^perp} = -q_M for primitive sublattices of unimodular lattices
    cases = [
        (named_lattice("3U"), [(1, 1, 0, 0, 0, 0)]),
        (named_lattice("3U"), [(1, -1, 0, 0, 0, 0)]),
        (named_lattice("3U"), [(1, 2, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0)]),
        (named_lattice("U+E8"), [(1, 1) + (0,) * 8]),
        (named_lattice("U+E8"), [(2, 1) + (0,) * 8]),
        (named_lattice("U+E8"), [(1, -3) + (0,) * 8, (0, 0, 1) + (0,) * 7]),
    ]
    for L, rows in cases:
        sub = L.sublattice(rows)
        comp, _ = orthogonal_complement(L, rows)
        q_sub = discriminant_form(sub)
        q_comp = discriminant_form(comp)
        assert q_sub.orders == q_comp.orders
        assert forms_isomorphic(q_sub, q_comp, anti=True)
        # value multisets on p-primary parts match after negation
        for p in q_sub.primes():
            part_s = q_sub.p_primary_part(p)
            part_c = q_comp.p_primary_part(p).negated()
            vals_s = sorted(part_s.q_of(c) for c, _ in part_s.all_elements())
            vals_c = sorted(part_c.q_of(c) for c, _ in part_c.all_elements())
            assert vals_s == vals_c


def test_primitivity_check():
    L = named_lattice("3U")
    ok, _ = is_primitive_sublattice(L, [(1, 1, 0, 0, 0, 0)])
    assert ok
    ok, sat = is_primitive_sublattice(L, [(2, 2, 0, 0, 0, 0)])
    assert not ok
    assert linalg.hnf(sat) == linalg.hnf(((1, 1, 0, 0, 0, 0),))


def test_enumerate_norm_examples():
    assert len(roots(E8)) == 240
    assert roots(Lattice([[-2]])) == [(-1,), (1,)]
    assert enumerate_vectors_of_norm(Lattice([[22, 33], [33, 22]]), -2) == []


def test_enumerate_matches_brute_oracle():
    A2neg = lattice_A2()
    assert roots(A2neg) == brute_vectors_of_norm(A2neg.gram, -2, 2)
    D = Lattice([[2, 0, 1], [0, 4, 1], [1, 1, 6]])
    for m in (2, 4, 6):
        mine = enumerate_vectors_of_norm(D, m)
        assert mine == brute_vectors_of_norm(D.gram, m, 4)


def test_e8_roots_match_standard_model_count():
    from oracles import count_e8_roots_standard_model

    mine = roots(E8)
    assert len(mine) == count_e8_roots_standard_model() == 240
    assert all(E8.norm(v) == -2 for v in mine)
    assert all(tuple(-x for x in v) in set(mine) for v in mine)


def test_enumerate_rejects_indefinite_without_divisibility():
    with pytest.raises(LatticeError):
        enumerate_vectors_of_norm(U, -2)


def test_hyperbolic_form_and_isomorphism_search():
    h = hyperbolic_p_form(11, 1)
    assert h.orders == (11, 11)
    q = discriminant_form(Lattice([[22, 33], [33, 22]])).p_primary_part(11)
    assert forms_isomorphic(q, h)
    mat = find_form_isometry(q, h)
    assert mat is not None
    # negative control: diagonal <2/11, 2/11> is not hyperbolic since
    # -det = -4 is a non-residue mod 11
    bad = FiniteQuadraticForm(
        (11, 11),
        (Fraction(2, 11), Fraction(2, 11)),
        ((Fraction(2, 11), 0), (0, Fraction(2, 11))),
    )
    assert not forms_isomorphic(bad, h)
    assert find_form_isometry(bad, h) is None


def test_discriminant_action():
    L = Lattice([[2, 3], [3, 2]])
    q = discriminant_form(L)
    F = ((0, -1), (1, 3))
    A = discriminant_action(L, q, F)
    # the action must preserve q
    k = q.ngens
    for j in range(k):
        col = tuple(A[i][j] for i in range(k))
        basis = tuple(1 if i == j else 0 for i in range(k))
        assert q.q_of(col) == q.q_of(basis)


def test_lattice_json_roundtrip():
    doc = lattice_to_json(E8)
    assert lattice_from_json(doc).gram == E8.gram
    with pytest.raises(ValueError):
        lattice_from_json({"rank": 1, "gram": [["2"]], "extra": 1})


def test_lattice_validation():
    with pytest.raises(LatticeError):
        Lattice([[0, 1], [1, 0], [0, 0]])
    with pytest.raises(LatticeError):
        Lattice([[1, 2], [3, 4]])
    with pytest.raises(LatticeError):
        Lattice([[1, 1], [1, 1]])
