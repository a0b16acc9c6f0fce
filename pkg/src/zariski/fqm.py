"""Finite quadratic forms: discriminant forms, isotropic subgroups, isometries.

Group elements are integer tuples reduced modulo the invariant factors.
Quadratic values live in Q/2Z (stored in [0, 2)), bilinear values in Q/Z
(stored in [0, 1)).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import FrozenSet, Iterable, List, Sequence, Tuple

import mpmath

from . import linalg
from .lattice import Lattice

Element = Tuple[int, ...]


def _mod2(x: Fraction) -> Fraction:
    x = Fraction(x)
    return x - 2 * (x.numerator // (2 * x.denominator))


def _mod1(x: Fraction) -> Fraction:
    x = Fraction(x)
    return x - x.numerator // x.denominator


class FiniteQuadraticForm:
    """A quadratic form on a finite abelian group in invariant-factor form."""

    def __init__(self, invariant_factors: Sequence[int], q_gen: Sequence, b_matrix: Sequence[Sequence]):
        self.invariant_factors = tuple(int(d) for d in invariant_factors)
        if any(d <= 1 for d in self.invariant_factors):
            raise ValueError("invariant factors must exceed 1")
        if any(b % a for a, b in zip(self.invariant_factors, self.invariant_factors[1:])):
            raise ValueError("invariant factors must form a divisibility chain")
        self.q_gen = tuple(_mod2(v) for v in q_gen)
        self.b_matrix = tuple(tuple(_mod1(v) for v in row) for row in b_matrix)
        k = len(self.invariant_factors)
        if len(self.q_gen) != k or len(self.b_matrix) != k:
            raise ValueError("generator data has the wrong length")
        for i in range(k):
            # Nikulin normalization: b(x, y) = (x, y) mod 1, so q(x) = b(x, x) mod 1
            if _mod1(self.q_gen[i]) != self.b_matrix[i][i]:
                raise ValueError("q and b are inconsistent on a generator")
            for j in range(k):
                if self.b_matrix[i][j] != self.b_matrix[j][i]:
                    raise ValueError("bilinear form is not symmetric")

    # group structure -----------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    @property
    def zero(self) -> Element:
        return (0,) * self.ngens

    def reduce(self, x: Iterable[int]) -> Element:
        return tuple(int(v) % d for v, d in zip(x, self.invariant_factors))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x: Element) -> Element:
        return tuple(-a % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k: int, x: Element) -> Element:
        return tuple(k * a % d for a, d in zip(x, self.invariant_factors))

    def element_order(self, x: Element) -> int:
        n = 1
        for a, d in zip(x, self.invariant_factors):
            e = d // gcd(a, d)
            n = n * e // gcd(n, e)
        return n

    def elements(self) -> List[Element]:
        return list(itertools.product(*(range(d) for d in self.invariant_factors)))

    def gens(self) -> List[Element]:
        return [tuple(int(i == j) for j in range(self.ngens)) for i in range(self.ngens)]

    # form values -----------------------------------------------------------

    def q(self, x: Element) -> Fraction:
        s = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                s += xi * xi * self.q_gen[i]
                for j in range(i + 1, self.ngens):
                    if x[j]:
                        s += 2 * xi * x[j] * self.b_matrix[i][j]
        return _mod2(s)

    def b(self, x: Element, y: Element) -> Fraction:
        s = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        s += xi * yj * self.b_matrix[i][j]
        return _mod1(s)

    def is_nondegenerate(self) -> bool:
        gens = self.gens()
        return all(any(self.b(x, g) for g in gens) for x in self.elements() if any(x))

    def __eq__(self, other):
        return (isinstance(other, FiniteQuadraticForm)
                and self.invariant_factors == other.invariant_factors
                and self.q_gen == other.q_gen and self.b_matrix == other.b_matrix)

    def __hash__(self):
        return hash((self.invariant_factors, self.q_gen, self.b_matrix))

    def __repr__(self):
        qs = ", ".join(str(v) for v in self.q_gen)
        return f"FiniteQuadraticForm({list(self.invariant_factors)}, q=[{qs}])"


class DiscriminantForm(FiniteQuadraticForm):
    """Discriminant form of an even lattice, keeping the lifting data."""

    def __init__(self, lattice: Lattice, invariant_factors, q_gen, b_matrix, gen_vectors, U, offset):
        super().__init__(invariant_factors, q_gen, b_matrix)
        self.lattice = lattice
        self.gen_vectors = tuple(tuple(v) for v in gen_vectors)
        self._U = U
        self._offset = offset

    def lift(self, x: Element) -> List[Fraction]:
        """A representative in the dual lattice (lattice coordinates)."""
        n = self.lattice.rank
        v = [Fraction(0)] * n
        for xi, g in zip(x, self.gen_vectors):
            if xi:
                v = [a + xi * b for a, b in zip(v, g)]
        return v

    def element_of(self, v: Sequence) -> Element:
        """Class of a dual-lattice vector ``v`` (lattice coordinates)."""
        Gv = linalg.matvec(self.lattice.gram, v)
        if any(Fraction(t).denominator != 1 for t in Gv):
            raise ValueError("vector is not in the dual lattice")
        y = linalg.matvec(self._U, [int(t) for t in Gv])
        return self.reduce(y[self._offset:])


def discriminant_form(L: Lattice) -> DiscriminantForm:
    """(L^v / L, q_L) computed through the Smith form of the Gram matrix."""
    if not L.is_even:
        raise ValueError("discriminant forms are only defined here for even lattices")
    G = L.matrix()
    U, D, _ = linalg.smith_normal_form(G)
    n = L.rank
    diag = [D[i][i] for i in range(n)]
    offset = sum(1 for d in diag if d == 1)
    factors = diag[offset:]
    Uinv = linalg.inverse(U)
    Ginv = linalg.inverse(G)
    gens = []
    for i in range(offset, n):
        x = [Uinv[r][i] for r in range(n)]
        gens.append(linalg.matvec(Ginv, x))
    k = len(gens)
    qg = [linalg.bilinear(G, v, v) for v in gens]
    bm = [[linalg.bilinear(G, gens[i], gens[j]) for j in range(k)] for i in range(k)]
    return DiscriminantForm(L, factors, qg, bm, gens, U, offset)


def negate(q: FiniteQuadraticForm) -> FiniteQuadraticForm:
    return FiniteQuadraticForm(q.invariant_factors, [-v for v in q.q_gen],
                               [[-v for v in row] for row in q.b_matrix])


# subgroups -------------------------------------------------------------------


class SubgroupData:
    """A subgroup given by its element set, with canonical HNF generators."""

    def __init__(self, ambient: FiniteQuadraticForm, elements: Iterable[Element]):
        self.ambient = ambient
        self.elements: FrozenSet[Element] = frozenset(elements)

    @cached_property
    def hnf(self) -> Tuple[Tuple[int, ...], ...]:
        """HNF of the preimage of the subgroup in Z^k (canonical)."""
        k = self.ambient.ngens
        rows = [list(x) for x in self.elements if any(x)]
        rows += [[d * int(i == j) for j in range(k)] for i, d in enumerate(self.ambient.invariant_factors)]
        if k == 0:
            return ()
        return tuple(tuple(r) for r in linalg.hermite_normal_form(rows))

    @cached_property
    def generators(self) -> Tuple[Element, ...]:
        gens = tuple(self.ambient.reduce(r) for r in self.hnf)
        return tuple(g for g in gens if any(g))

    @property
    def order(self) -> int:
        return len(self.elements)

    def sort_key(self):
        return (self.order, self.hnf)

    def __eq__(self, other):
        return isinstance(other, SubgroupData) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"SubgroupData(order={self.order}, generators={list(self.generators)})"


def span(q: FiniteQuadraticForm, base: FrozenSet[Element], x: Element) -> FrozenSet[Element]:
    out = set(base)
    frontier = list(base)
    while frontier:
        nxt = []
        for s in frontier:
            t = q.add(s, x)
            if t not in out:
                out.add(t)
                nxt.append(t)
        frontier = nxt
    return frozenset(out)


def isotropic_subgroups(q: FiniteQuadraticForm) -> List[SubgroupData]:
    """All subgroups on which q vanishes identically (mod 2), trivial included."""
    iso = [x for x in q.elements() if any(x) and q.q(x) == 0]
    trivial = frozenset([q.zero])
    seen = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for S in frontier:
            for x in iso:
                if x in S:
                    continue
                if any(q.b(x, s) for s in S):
                    continue
                T = span(q, S, x)
                if T in seen:
                    continue
                seen.add(T)
                nxt.append(T)
        frontier = nxt
    out = [SubgroupData(q, S) for S in seen]
    for H in out:
        assert all(q.q(x) == 0 for x in H.elements)
        assert all(q.b(x, y) == 0 for x in H.generators for y in H.generators)
    out.sort(key=SubgroupData.sort_key)
    return out


def orthogonal_complement(q: FiniteQuadraticForm, H: SubgroupData) -> FrozenSet[Element]:
    gens = H.generators
    return frozenset(x for x in q.elements() if all(q.b(x, g) == 0 for g in gens))


# maps ----------------------------------------------------------------------


class FqmMap:
    """Homomorphism given by the images of the source generators."""

    def __init__(self, source: FiniteQuadraticForm, target: FiniteQuadraticForm, images: Sequence[Element]):
        self.source = source
        self.target = target
        self.images = tuple(tuple(y) for y in images)

    def __call__(self, x: Element) -> Element:
        out = self.target.zero
        for xi, y in zip(x, self.images):
            if xi:
                out = self.target.add(out, self.target.scale(xi, y))
        return out

    def compose(self, other: "FqmMap") -> "FqmMap":
        """``self o other``."""
        return FqmMap(other.source, self.target, [self(y) for y in other.images])

    def is_isometry(self) -> bool:
        gens = self.source.gens()
        for i, g in enumerate(gens):
            if self.target.q(self.images[i]) != self.source.q(g):
                return False
            for j in range(i + 1, len(gens)):
                if self.target.b(self.images[i], self.images[j]) != self.source.b(g, gens[j]):
                    return False
        return True

    def is_bijective(self) -> bool:
        if self.source.order != self.target.order:
            return False
        return len({self(x) for x in self.source.elements()}) == self.target.order

    def is_identity(self) -> bool:
        return self.images == tuple(self.source.gens())

    def __eq__(self, other):
        return isinstance(other, FqmMap) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"FqmMap({list(self.images)})"


def fqm_isomorphisms(src: FiniteQuadraticForm, dst: FiniteQuadraticForm, first_only: bool = False) -> List[FqmMap]:
    """All isometries ``src -> dst``, ordered lexicographically by generator images."""
    if src.order != dst.order:
        return []
    if src.ngens == 0:
        return [FqmMap(src, dst, [])]
    gens = src.gens()
    dst_elems = dst.elements()
    cands = []
    for i, d in enumerate(src.invariant_factors):
        c = [y for y in dst_elems
             if dst.element_order(y) == d and dst.q(y) == src.q_gen[i]]
        if not c:
            return []
        cands.append(c)
    out: List[FqmMap] = []
    chosen: List[Element] = []

    def extend(i: int) -> bool:
        if i == len(gens):
            f = FqmMap(src, dst, chosen)
            if f.is_bijective():
                out.append(f)
                return first_only
            return False
        for y in cands[i]:
            if all(dst.b(y, chosen[j]) == src.b_matrix[i][j] for j in range(i)):
                chosen.append(y)
                stop = extend(i + 1)
                chosen.pop()
                if stop:
                    return True
        return False

    extend(0)
    return out


def is_isometric(src: FiniteQuadraticForm, dst: FiniteQuadraticForm) -> bool:
    return bool(fqm_isomorphisms(src, dst, first_only=True))


def orthogonal_group(q: FiniteQuadraticForm) -> List[FqmMap]:
    return fqm_isomorphisms(q, q)


def induced_map(g: Sequence[Sequence[int]], q: DiscriminantForm) -> FqmMap:
    """Action on the discriminant group of an isometry ``g`` (column convention)."""
    G = q.lattice.matrix()
    gt = linalg.transpose(g)
    if linalg.matmul(linalg.matmul(gt, G), g) != G:
        raise ValueError("matrix is not an isometry of the lattice")
    return FqmMap(q, q, [q.element_of(linalg.matvec(g, v)) for v in q.gen_vectors])


# Milgram -------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> Tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _divide_exact(num, list(_cyclotomic(d)))
    return tuple(num)


def _divide_exact(num: List[int], den: List[int]) -> List[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, dv in enumerate(den):
            num[i + j] -= c * dv
    assert not any(num), "inexact cyclotomic division"
    return out


def _reduce_cyclotomic(coeffs: List[int], n: int) -> Tuple[int, ...]:
    phi = _cyclotomic(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            for j, pv in enumerate(phi):
                c[i - deg + j] -= t * pv
    return tuple(c[:deg])


def gauss_sum(q: FiniteQuadraticForm) -> Tuple[int, List[int]]:
    """Sum of exp(pi i q(x)) as ``(N, c)`` meaning sum_k c[k] * zeta_N^k."""
    vals = [q.q(x) for x in q.elements()]
    N = 8
    for v in vals:
        d = (v / 2).denominator
        N = N * d // gcd(N, d)
    c = [0] * N
    for v in vals:
        c[int(v / 2 * N) % N] += 1
    return N, c


def milgram_signature(q: FiniteQuadraticForm) -> int:
    """Signature mod 8 from the Gauss sum: sum exp(pi i q) = sqrt|G| exp(2 pi i sigma / 8).

    The square of the sum, compared exactly in Z[zeta_N], fixes sigma mod 4;
    the remaining bit is the sign of a real number of absolute value
    sqrt|G| >= 1, read off with a 30-digit evaluation.
    """
    if not q.is_nondegenerate():
        raise ValueError("degenerate finite quadratic form")
    N, c = gauss_sum(q)
    sq = [0] * N
    nz = [(k, v) for k, v in enumerate(c) if v]
    for k1, v1 in nz:
        for k2, v2 in nz:
            sq[(k1 + k2) % N] += v1 * v2
    lhs = _reduce_cyclotomic(sq, N)
    s4 = None
    for s in range(4):
        rhs = [0] * N
        rhs[s * N // 4] = q.order
        if _reduce_cyclotomic(rhs, N) == lhs:
            s4 = s
            break
    if s4 is None:
        raise ArithmeticError("Gauss sum has unexpected absolute value")
    with mpmath.workdps(30):
        shift = s4 * N // 8
        re = mpmath.fsum(v * mpmath.cospi(mpmath.mpf(2 * (k - shift)) / N) for k, v in nz)
        root = mpmath.sqrt(q.order)
        if abs(abs(re) - root) > mpmath.mpf(10) ** -10:
            raise ArithmeticError("Gauss sum evaluation inconsistent")
    return s4 if re > 0 else s4 + 4
