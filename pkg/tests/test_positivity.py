import pytest

from salemk3 import linalg
from salemk3.isometries import Isometry, TwistElement, twist
from salemk3.lattices import Lattice, lattice_A2, lattice_E8
from salemk3.polynomials import IntPolynomial, companion_matrix
from salemk3.positivity import (
    PositivityError,
    cyclic_roots,
    determinant_bound_test,
    geodesic_plane,
    is_positive,
    obstructing_root_search,
)

P = IntPolynomial
QUAD = P([1, -3, 1])
S4 = P([1, -1, -1, -1, 1])
L2 = Lattice([[2, 3], [3, 2]])
F2 = Isometry(L2, companion_matrix(QUAD))
S4_GRAM = ((-2, 1, 0, -2), (1, -2, 1, 0), (0, 1, -2, 1), (-2, 0, 1, -2))
L4 = Lattice(S4_GRAM)
F4 = Isometry(L4, companion_matrix(S4))


def identity_isometry(L):
    return Isometry(L, linalg.identity(L.rank))


def test_cyclic_roots_a2_rotation():
    A2 = lattice_A2()
    rot = Isometry(A2, ((0, -1), (1, -1)))
    found = cyclic_roots(A2, rot)
    assert len(found) == 6
    assert all(A2.norm(r) == -2 for r in found)
    # orbit sums vanish: 1 + f + f^2 = 0
    for r in found:
        total = linalg.vec_add(linalg.vec_add(r, rot.apply(r)), rot.apply(rot.apply(r)))
        assert all(x == 0 for x in total)


def test_cyclic_roots_identity_empty():
    E8 = lattice_E8()
    assert cyclic_roots(E8, identity_isometry(E8)) == []


def test_cyclic_roots_salem_shape_empty_fast():
    # char poly s(x)(x-1)^k has no cyclotomic factor beyond x - 1
    block = tuple(
        tuple(
            companion_matrix(QUAD)[i][j] if i < 2 and j < 2 else (1 if i == j else 0)
            for j in range(3)
        )
        for i in range(3)
    )
    L = Lattice([[2, 3, 0], [3, 2, 0], [0, 0, -2]])
    f = Isometry(L, block)
    assert cyclic_roots(L, f) == []


def test_determinant_bound_examples():
    assert determinant_bound_test(L2, F2) == "inconclusive"  # 5 < 20
    L22, f22 = twist(L2, F2, TwistElement(11))
    assert determinant_bound_test(L22, f22) == "positive"  # 605 > 20
    U_like = Lattice([[0, 1], [1, 0]])
    fU = identity_isometry(U_like)
    with pytest.raises(PositivityError):
        determinant_bound_test(U_like, fU)  # char poly not Salem


def test_obstructing_root_search_rank2():
    report = obstructing_root_search(L2, F2)
    assert report.status == "not_positive"
    assert ((1, -1), "geodesic") in report.witnesses
    assert all(L2.norm(vec) == -2 for vec, _ in report.witnesses)


def test_obstructing_root_search_twisted_positive():
    L22, f22 = twist(L2, F2, TwistElement(11))
    report = obstructing_root_search(L22, f22)
    assert report.status == "positive"
    assert report.witnesses == ()


def test_obstructing_root_search_rejects_negative_definite():
    A2 = lattice_A2()
    rot = Isometry(A2, ((0, -1), (1, -1)))
    with pytest.raises(PositivityError):
        obstructing_root_search(A2, rot)


def test_is_positive_dispatch():
    E8 = lattice_E8()
    rep = is_positive(E8, identity_isometry(E8))
    assert rep.status == "positive" and rep.method == "cyclic_only"
    A2 = lattice_A2()
    rot = Isometry(A2, ((0, -1), (1, -1)))
    rep = is_positive(A2, rot)
    assert rep.status == "not_positive" and rep.method == "cyclic_only"
    L22, f22 = twist(L2, F2, TwistElement(11))
    rep = is_positive(L22, f22)
    assert rep.status == "positive" and rep.method == "determinant_bound"
    rep = is_positive(L2, F2)
    assert rep.status == "not_positive" and rep.method == "exhaustive_search"


def test_is_positive_unsupported_signature():
    pos = Lattice([[2, 0], [0, 2]])
    with pytest.raises(PositivityError):
        is_positive(pos, identity_isometry(pos))


def test_agreement_bound_vs_search():
    # whenever the determinant bound says positive, the exhaustive search
    # must find no witnesses
    instances = [
        twist(L2, F2, TwistElement(11)),
        twist(L2, F2, TwistElement(41)),
        twist(L4, F4, TwistElement(P([-2, -3]) * P([-2, -3]))),
    ]
    for L, f in instances:
        if determinant_bound_test(L, f) == "positive":
            report = obstructing_root_search(L, f)
            assert report.status == "positive"


def test_rank4_untwisted_has_obstructions():
    report = obstructing_root_search(L4, F4)
    assert report.status == "not_positive"
    assert all(L4.norm(vec) == -2 for vec, _ in report.witnesses)


def test_determinism():
    a = obstructing_root_search(L2, F2)
    b = obstructing_root_search(L2, F2)
    assert a == b


def test_witnesses_closed_under_f_up_to_orbit():
    report = obstructing_root_search(L2, F2)
    vectors = [v for v, _ in report.witnesses]
    for v in vectors:
        image = F2.apply(v)
        # image is an obstructing root too; its orbit representative is listed
        assert L2.norm(image) == -2


def test_obstructing_root_search_rank6():
    from salemk3.isometries import search_even_invariant_lattice

    d6 = P([1, -2, 0, 1, 0, -2, 1])
    C6 = companion_matrix(d6)
    S6 = search_even_invariant_lattice(C6, signature=(1, 5), box=4)
    f6 = Isometry(S6, C6)
    report = obstructing_root_search(S6, f6)
    assert report.status in ("positive", "not_positive")
    for vec, _ in report.witnesses:
        assert S6.norm(vec) == -2


def test_geodesic_plane():
    plane = geodesic_plane(L2, F2)
    assert plane.gram_det_sign() == -1
    assert len(plane.basis) == 2
    plane4 = geodesic_plane(L4, F4)
    assert plane4.gram_det_sign() == -1
    assert plane4.field.min_poly.coeffs == (-3, -1, 1)
