from fractions import Fraction

import pytest

from zariski.lattice import (DynkinError, DynkinType, Lattice, NotIsotropic, cartan_matrix, check_m1,
                             check_m2, overlattice_from_vectors, polarized_m0, root_count, root_lattice,
                             roots_orthogonal_to_h, trivial_overlattice)


@pytest.mark.parametrize("text,expected", [
    ("A16+A2+A1", "A16+A2+A1"),
    ("a1 + A16 + a2", "A16+A2+A1"),
    ("2A7+D5", "D5+2A7"),
    ("E6+A1+E8", "E8+E6+A1"),
    ("A_3", "A3"),
])
def test_parse_canonical(text, expected):
    assert str(DynkinType.parse(text)) == expected


@pytest.mark.parametrize("bad", ["", "B3", "D3", "E5", "A0", "A1+"])
def test_parse_rejects(bad):
    with pytest.raises(DynkinError):
        DynkinType.parse(bad)


@pytest.mark.parametrize("family,n,det", [("A", 1, 2), ("A", 4, 5), ("D", 4, 4), ("D", 7, 4),
                                           ("E", 6, 3), ("E", 7, 2), ("E", 8, 1)])
def test_cartan_determinants(family, n, det):
    L = Lattice.from_gram(cartan_matrix(family, n))
    assert L.det == det
    assert L.is_even and L.signature == (n, 0)


@pytest.mark.parametrize("family,n,count", [("A", 5, 30), ("D", 5, 40), ("E", 6, 72), ("E", 7, 126),
                                             ("E", 8, 240)])
def test_root_counts(family, n, count):
    assert root_count(family, n) == count


def test_root_lattice_is_negative_definite():
    L = root_lattice(DynkinType.parse("A2+E6"))
    assert L.signature == (0, 8)
    assert abs(L.det) == 9


@pytest.mark.parametrize("R,det", [("A16+A3", -2 * 17 * 4), ("A10+A9", -2 * 11 * 10),
                                    ("A19", -2 * 20), ("A16+A2+A1", -2 * 17 * 3 * 2)])
def test_polarized_m0(R, det):
    base = polarized_m0(DynkinType.parse(R))
    assert base.m0.det == det
    assert base.m0.signature == (1, 19)
    assert base.m0.gram[base.h_index][base.h_index] == 2


def test_a1_glue_violates_m1():
    base = polarized_m0(DynkinType.parse("A1"))
    M = overlattice_from_vectors(base, [[Fraction(1, 2), Fraction(1, 2)]])
    assert M.index == 2
    assert not check_m1(M)
    assert check_m1(trivial_overlattice(base))


def test_overlattice_det_index_relation():
    from zariski.fqm import discriminant_form, isotropic_subgroups
    from zariski.lattice import overlattice_from_isotropic

    base = polarized_m0(DynkinType.parse("A15+A4"))
    subgroups = isotropic_subgroups(discriminant_form(base.m0))
    assert sorted(H.order for H in subgroups) == [1, 2]
    for H in subgroups:
        M = overlattice_from_isotropic(base, H)
        assert M.index == H.order
        assert M.lattice.det * M.index ** 2 == base.m0.det
        assert M.lattice.is_even


def test_odd_glue_rejected():
    base = polarized_m0(DynkinType.parse("A1"))
    with pytest.raises(NotIsotropic):
        overlattice_from_vectors(base, [[0, Fraction(1, 2)]])


def test_extra_roots_fail_m2():
    # A7 + h with the order-2 glue (1,2,...,7)/2 ... shifted by 4/8 gives D-type extra roots
    R = DynkinType.parse("A7")
    base = polarized_m0(R)
    glue = [Fraction((k + 1) * 4 % 8, 8) for k in range(7)] + [Fraction(0)]
    M = overlattice_from_vectors(base, [glue])
    roots = roots_orthogonal_to_h(M)
    assert len(roots) > root_count("A", 7)
    assert not check_m2(M, roots)


def test_trivial_overlattice_passes_m2():
    base = polarized_m0(DynkinType.parse("A4+A2"))
    M = trivial_overlattice(base)
    roots = roots_orthogonal_to_h(M)
    assert len(roots) == 20 + 6
    assert check_m2(M, roots)
