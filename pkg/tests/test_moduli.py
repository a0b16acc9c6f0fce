from collections import Counter

import pytest

from conftest import RANK19_TYPES
from zariski.binforms import BinaryEvenForm, lattice_of
from zariski.fqm import discriminant_form, is_isometric, negate
from zariski.lattice import DynkinType, polarized_m0
from zariski.linalg import matmul, transpose
from zariski.moduli import (OutOfScopeError, component_report, compose_perm, diagram_symmetries, enumerate_ms,
                            invert_perm, ms_classes, rank2_orthogonal_group)


@pytest.mark.parametrize("text,order", [("A1", 1), ("A16+A2+A1", 4), ("A1+A1", 2), ("D4", 6), ("D5", 2),
                                        ("E6", 2), ("E7", 1), ("A2+A2+A2", 48), ("A10+A9", 4)])
def test_diagram_group_orders(text, order):
    G = diagram_symmetries(DynkinType.parse(text))
    assert G.order == order
    assert len(G.elements()) == order


@pytest.mark.parametrize("text", ["D4+A3", "E6+A2", "A5+A5"])
def test_diagram_group_preserves_m0(text):
    R = DynkinType.parse(text)
    G = diagram_symmetries(R)
    gram = polarized_m0(R).m0.matrix()
    for p in G.elements():
        g = G.matrix(p)
        assert matmul(matmul(transpose(g), gram), g) == gram
        assert compose_perm(p, invert_perm(p)) == tuple(range(R.rank))


@pytest.mark.parametrize("abc,size", [((2, 1, 28), 4), ((2, 0, 38), 4), ((8, 3, 8), 4), ((2, 0, 2), 8),
                                      ((2, 1, 2), 12), ((10, 4, 22), 2)])
def test_rank2_orthogonal_group(abc, size):
    # forms on the boundary b = 0, 2b = a or a = c also carry improper isometries
    N = BinaryEvenForm(*abc)
    O = rank2_orthogonal_group(N)
    assert len(O) == size
    G = N.gram()
    for g, det in O:
        m = [list(r) for r in g]
        assert matmul(matmul(transpose(m), G), m) == G
        assert det in (1, -1)


@pytest.mark.parametrize("text", ["A1", "A18", "A16+A2+A1+A1"])
def test_rank_gate(text):
    with pytest.raises(OutOfScopeError):
        component_report(DynkinType.parse(text))


@pytest.mark.parametrize("text,indices", [("A16+A2+A1", [1]), ("A18+A1", [1]), ("A15+A4", [1, 2]),
                                          ("A10+A9", [1, 2]), ("A19", [1]), ("A16+A3", [1])])
def test_ms_class_indices(text, indices):
    classes = ms_classes(enumerate_ms(DynkinType.parse(text)))
    assert [c.index for c in classes] == indices


@pytest.mark.parametrize("text", RANK19_TYPES)
def test_stabilizer_preserves_overlattice(text):
    R = DynkinType.parse(text)
    G = diagram_symmetries(R)
    for entry in enumerate_ms(R):
        for p in entry.stabilizer:
            entry.m_action(p, G)  # raises unless integral


@pytest.mark.parametrize("text", RANK19_TYPES)
def test_complement_invariants(report, text):
    rep = report(text)
    for c in rep.classes:
        qM = c.entry.disc_form
        for N in c.ns:
            qN = discriminant_form(lattice_of(N))
            assert N.det == qM.order
            assert is_isometric(negate(qM), qN)


@pytest.mark.parametrize("text", RANK19_TYPES)
def test_orbit_invariants(report, text):
    rep = report(text)
    for c in rep.classes:
        for fib in c.fibers:
            assert sum(o.size for o in fib.orbits) == 2 * fib.ls_size
            nonreal = Counter(o.size for o in fib.orbits if not o.real)
            assert all(v % 2 == 0 for v in nonreal.values())
            reps = [o.representative for o in fib.orbits]
            assert len(set(reps)) == len(reps)


def test_report_serializes(report):
    d = report("A15+A4").to_dict()
    assert d["total_components"] == 3
    assert d["ms_sharp_classes"] == 2
    assert "Galois" in d["note"]
