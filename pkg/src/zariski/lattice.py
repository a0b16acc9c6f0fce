"""Integer lattices, ADE root lattices and the polarized lattice M0 = Sigma_R^- + <h>."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .linalg import IntMatrix, RatMatrix

FAMILIES = ("A", "D", "E")


class DynkinError(ValueError):
    pass


def _edges(family: str, n: int) -> List[Tuple[int, int]]:
    """Edges of the Dynkin diagram in Bourbaki node numbering (0-based)."""
    if family == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if family == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if family == "E":
        # 1-3-4-5-...-n chain with node 2 attached to node 4
        chain = [0] + list(range(2, n))
        return [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)] + [(1, 3)]
    raise DynkinError(family)


def cartan_matrix(family: str, n: int) -> IntMatrix:
    C = [[2 * int(i == j) for j in range(n)] for i in range(n)]
    for i, j in _edges(family, n):
        C[i][j] = C[j][i] = -1
    return C


def root_count(family: str, n: int) -> int:
    if family == "A":
        return n * (n + 1)
    if family == "D":
        return 2 * n * (n - 1)
    return {6: 72, 7: 126, 8: 240}[n]


@dataclass(frozen=True)
class DynkinType:
    """A formal sum of ADE symbols, stored as sorted (family, index) pairs with repetition."""

    components: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        for fam, n in self.components:
            if fam == "A" and n >= 1:
                continue
            if fam == "D" and n >= 4:
                continue
            if fam == "E" and n in (6, 7, 8):
                continue
            raise DynkinError(f"invalid Dynkin component {fam}{n}")
        canon = tuple(sorted(self.components, reverse=True))
        object.__setattr__(self, "components", canon)

    @classmethod
    def parse(cls, text: str) -> "DynkinType":
        """Parse strings like ``"A16+A2+A1"`` or ``"2A7 + d5"``."""
        parts = [p.strip() for p in text.replace(" ", "").split("+")]
        if not parts or any(not p for p in parts):
            raise DynkinError(f"cannot parse Dynkin type {text!r}")
        comps = []
        for p in parts:
            m = re.fullmatch(r"(\d*)\*?([ADEade])_?(\d+)", p)
            if m is None:
                raise DynkinError(f"cannot parse Dynkin component {p!r}")
            mult = int(m.group(1)) if m.group(1) else 1
            if mult < 1:
                raise DynkinError(f"multiplicity must be positive in {p!r}")
            comps += [(m.group(2).upper(), int(m.group(3)))] * mult
        return cls(tuple(comps))

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.components)

    @property
    def root_count(self) -> int:
        return sum(root_count(f, n) for f, n in self.components)

    def blocks(self) -> List[Tuple[str, int, int]]:
        """(family, index, offset of first node in the Sigma basis) per component."""
        out, k = [], 0
        for fam, n in self.components:
            out.append((fam, n, k))
            k += n
        return out

    def __str__(self):
        out, i = [], 0
        comps = self.components
        while i < len(comps):
            j = i
            while j < len(comps) and comps[j] == comps[i]:
                j += 1
            mult = j - i
            fam, n = comps[i]
            out.append(f"{mult if mult > 1 else ''}{fam}{n}")
            i = j
        return "+".join(out)


@dataclass(frozen=True)
class Lattice:
    gram: Tuple[Tuple[int, ...], ...]
    basis_in_ambient: Optional[Tuple[Tuple[Fraction, ...], ...]] = None

    def __post_init__(self):
        g = tuple(tuple(int(v) for v in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(len(g))):
            raise ValueError("Gram matrix is not symmetric")
        if self.det == 0:
            raise ValueError("Gram matrix is degenerate")

    @classmethod
    def from_gram(cls, gram, basis=None) -> "Lattice":
        b = None if basis is None else tuple(tuple(Fraction(v) for v in row) for row in basis)
        return cls(tuple(tuple(row) for row in gram), b)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return int(linalg.determinant(self.gram))

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def signature(self) -> Tuple[int, int]:
        p, n, _ = linalg.symmetric_signature(self.gram)
        return p, n

    def matrix(self) -> IntMatrix:
        return [list(row) for row in self.gram]


def root_lattice(R: DynkinType) -> Lattice:
    """Negative definite root lattice Sigma_R^- in the simple-root basis."""
    blocks = [[[-v for v in row] for row in cartan_matrix(f, n)] for f, n in R.components]
    return Lattice.from_gram(linalg.block_diagonal(blocks))


@dataclass(frozen=True)
class PolarizedRootData:
    """M0 = Sigma_R^- + <h>; basis is the fundamental roots F followed by h."""

    dynkin: DynkinType
    m0: Lattice
    root_count: int

    @property
    def rank(self) -> int:
        return self.m0.rank

    @property
    def h_index(self) -> int:
        return self.m0.rank - 1


def polarized_m0(R: DynkinType) -> PolarizedRootData:
    sigma = root_lattice(R).matrix()
    G = linalg.block_diagonal([sigma, [[2]]]) if sigma else [[2]]
    return PolarizedRootData(R, Lattice.from_gram(G), R.root_count)


@dataclass(frozen=True)
class Overlattice:
    """An even overlattice M of M0; ``basis`` rows are M0-coordinates of a Z-basis of M."""

    base: PolarizedRootData
    basis: Tuple[Tuple[Fraction, ...], ...]
    index: int
    glue: Tuple[Tuple[Fraction, ...], ...] = field(default=())

    @cached_property
    def lattice(self) -> Lattice:
        B = [list(r) for r in self.basis]
        G = linalg.matmul(linalg.matmul(B, self.base.m0.matrix()), linalg.transpose(B))
        return Lattice.from_gram(G, self.basis)

    @cached_property
    def to_m0(self) -> RatMatrix:
        """Columns are basis vectors: maps M-coordinates to M0-coordinates."""
        return linalg.transpose([list(r) for r in self.basis])

    @cached_property
    def from_m0(self) -> RatMatrix:
        return linalg.inverse(self.to_m0)

    def contains(self, x: Sequence) -> bool:
        """Membership of an M0-coordinate rational vector."""
        return linalg.hermite_solve(self.to_m0, x) is not None

    def m_coords(self, x: Sequence) -> List[Fraction]:
        return linalg.matvec(self.from_m0, x)

    @cached_property
    def sigma_glue(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Coset representatives of P_M / Sigma, where P_M = h^perp in M."""
        # integral h-coordinate: shift by a multiple of h (in M0) to land in h^perp
        return tuple(g[:-1] + (Fraction(0),) for g in self.glue if g[-1].denominator == 1)

    @cached_property
    def orthogonal_to_h(self) -> Lattice:
        """P_M = h^perp in M as a lattice, basis expressed in M0-coordinates."""
        G0 = self.base.m0.matrix()
        h = [0] * self.base.rank
        h[-1] = 1
        form = [int(v) for v in linalg.matvec(linalg.transpose(self.to_m0), linalg.matvec(G0, h))]
        K = linalg.integer_kernel([form])
        rows = [linalg.matvec(self.to_m0, k) for k in K]
        rows = linalg.rational_hnf(rows)
        G = linalg.matmul(linalg.matmul(rows, G0), linalg.transpose(rows))
        return Lattice.from_gram(G, rows)


class NotIsotropic(ValueError):
    pass


def overlattice_from_vectors(base: PolarizedRootData, glue_vectors: Sequence[Sequence]) -> Overlattice:
    """Overlattice spanned by M0 and the given rational glue vectors (M0-coordinates).

    ``glue_vectors`` should enumerate a full set of coset representatives of
    M/M0 when the glue bookkeeping (``sigma_glue``) is needed.
    """
    n = base.rank
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows += [[Fraction(v) for v in g] for g in glue_vectors]
    B = linalg.rational_hnf(rows)
    if len(B) != n:
        raise ValueError("glue vectors do not span a full-rank lattice")
    index = int(1 / linalg.determinant(B))
    index = abs(index)
    G = linalg.matmul(linalg.matmul(B, base.m0.matrix()), linalg.transpose(B))
    for i in range(n):
        for j in range(n):
            if G[i][j].denominator != 1:
                raise NotIsotropic("glue produces a non-integral Gram matrix")
        if G[i][i] % 2:
            raise NotIsotropic("glue produces an odd lattice")
    glue = tuple(tuple(Fraction(v) for v in g) for g in glue_vectors)
    return Overlattice(base, tuple(tuple(r) for r in B), index, glue)


def overlattice_from_isotropic(base: PolarizedRootData, H) -> Overlattice:
    """Even overlattice M with M/M0 = H for an isotropic subgroup H of q_{M0}.

    ``H`` is a :class:`zariski.fqm.SubgroupData` in the coordinates of
    ``discriminant_form(base.m0)``.
    """
    from .fqm import discriminant_form

    q = discriminant_form(base.m0)
    glue = [q.lift(x) for x in sorted(H.elements) if any(x)]
    M = overlattice_from_vectors(base, glue)
    if M.index != len(H.elements):
        raise NotIsotropic("index does not match the subgroup order")
    return M


def trivial_overlattice(base: PolarizedRootData) -> Overlattice:
    return overlattice_from_vectors(base, [])


def roots_orthogonal_to_h(M: Overlattice) -> List[Tuple[Fraction, ...]]:
    """All v in M with (v, h) = 0 and (v, v) = -2, in M0-coordinates.

    P_M = h^perp in M is the union of the cosets s + Sigma for s in the
    h-free glue, so each coset is searched with the (positive) Cartan
    Gram and the corresponding shift.
    """
    r = M.base.rank - 1
    cartan = [[-v for v in row[:r]] for row in M.base.m0.gram[:r]]
    shifts = [tuple(Fraction(0) for _ in range(r))]
    shifts += [tuple(g[:r]) for g in M.sigma_glue]
    out = []
    for s in shifts:
        for v in linalg.vectors_of_norm(cartan, 2, s):
            out.append(tuple(v) + (Fraction(0),))
    out.sort()
    return out


def check_m1(M: Overlattice, roots=None) -> bool:
    """True iff no v in M has (v, h) = 1 and (v, v) = 0.

    Such v gives the root u = 2v - h of P_M with (u + h)/2 in M, and conversely.
    """
    if roots is None:
        roots = roots_orthogonal_to_h(M)
    for u in roots:
        v = [x / 2 for x in u]
        v[-1] += Fraction(1, 2)
        if M.contains(v):
            return False
    return True


def check_m2(M: Overlattice, roots=None) -> bool:
    """True iff the roots of h^perp in M are exactly the roots of Sigma_R^-."""
    if roots is None:
        roots = roots_orthogonal_to_h(M)
    if any(x.denominator != 1 for v in roots for x in v):
        return False
    return len(roots) == M.base.root_count
