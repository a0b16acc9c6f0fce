"""Connected components of the moduli of ADE-sextics of a rank-19 Dynkin type.

The pipeline: even overlattices M of M0 satisfying (m1)/(m2), their orbits
under the diagram symmetries, the rank-2 complements N with anti-isometric
discriminant form, and the orbits of O_{F,h,M}(M0) x O(N) on the set of
gluings times the two period components.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .binforms import BinaryEvenForm, enumerate_even_classes, lattice_of
from .fqm import (DiscriminantForm, FqmMap, SubgroupData, discriminant_form, fqm_isomorphisms,
                  induced_map, is_isometric, isotropic_subgroups, negate)
from .lattice import (DynkinType, Overlattice, check_m1, check_m2,
                      overlattice_from_isotropic, polarized_m0, roots_orthogonal_to_h)

Perm = Tuple[int, ...]

SCOPE_NOTE = (
    "Lattice-side evidence only: components are counted via the quartet "
    "classification and N is the lattice invariant of each component. Whether "
    "a flagged pair is an arithmetic Zariski pair also needs Galois-conjugate "
    "members, which is not computed here."
)


class OutOfScopeError(ValueError):
    pass


def require_rank_19(R: DynkinType):
    if R.rank != 19:
        raise OutOfScopeError(
            f"{R} has rank {R.rank}; only rank 19 is supported (for rank < 19 the "
            "complements N are indefinite and their classification needs spinor "
            "genera, which is not implemented)")


# diagram symmetries ------------------------------------------------------------


def _component_flips(family: str, n: int) -> List[Perm]:
    ident = list(range(n))
    if family == "A" and n >= 2:
        return [tuple(reversed(ident))]
    if family == "D" and n == 4:
        # outer nodes 0, 2, 3 around the centre 1
        return [(2, 1, 0, 3), (3, 1, 2, 0)]
    if family == "D":
        p = ident[:]
        p[n - 2], p[n - 1] = p[n - 1], p[n - 2]
        return [tuple(p)]
    if family == "E" and n == 6:
        return [(5, 1, 4, 3, 2, 0)]
    return []


def _component_group_order(family: str, n: int) -> int:
    if family == "A":
        return 2 if n >= 2 else 1
    if family == "D":
        return 6 if n == 4 else 2
    return 2 if n == 6 else 1


def compose_perm(p: Perm, q: Perm) -> Perm:
    """p o q."""
    return tuple(p[i] for i in q)


def invert_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


@dataclass
class DiagramSymmetryGroup:
    """Automorphisms of the Dynkin diagram, acting on F and fixing h."""

    dynkin: DynkinType
    generators: List[Perm]

    @property
    def degree(self) -> int:
        return self.dynkin.rank

    @property
    def order(self) -> int:
        n = 1
        for fam, k in self.dynkin.components:
            n *= _component_group_order(fam, k)
        for comp, grp in itertools.groupby(self.dynkin.components):
            n *= factorial(len(list(grp)))
        return n

    def elements(self, limit: int = 100000) -> List[Perm]:
        if self.order > limit:
            raise OverflowError(f"diagram group of order {self.order} is too large to list")
        ident = tuple(range(self.degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.generators:
                    r = compose_perm(g, p)
                    if r not in seen:
                        seen.add(r)
                        nxt.append(r)
            frontier = nxt
        return sorted(seen)

    def matrix(self, p: Perm) -> List[List[int]]:
        """Isometry of M0 sending the i-th fundamental root to the p[i]-th, fixing h."""
        n = self.degree + 1
        g = [[0] * n for _ in range(n)]
        for i, j in enumerate(p):
            g[j][i] = 1
        g[n - 1][n - 1] = 1
        return g

    def induced_image(self, q0: DiscriminantForm) -> Dict[FqmMap, Perm]:
        """Image of the group in O(q0), each element with one representative permutation.

        Elements acting trivially on q0 act trivially on every Ms entry and
        every gluing, so the image carries all the information needed.
        """
        ident = tuple(range(self.degree))
        gens = [(induced_map(self.matrix(p), q0), p) for p in self.generators]
        start = FqmMap(q0, q0, q0.gens())
        image = {start: ident}
        frontier = [start]
        while frontier:
            nxt = []
            for f in frontier:
                for gm, gp in gens:
                    h = gm.compose(f)
                    if h not in image:
                        image[h] = compose_perm(gp, image[f])
                        nxt.append(h)
            frontier = nxt
        return image


def diagram_symmetries(R: DynkinType) -> DiagramSymmetryGroup:
    r = R.rank
    gens: List[Perm] = []
    blocks = R.blocks()
    for fam, n, off in blocks:
        for local in _component_flips(fam, n):
            p = list(range(r))
            for i, j in enumerate(local):
                p[off + i] = off + j
            gens.append(tuple(p))
    for (f1, n1, o1), (f2, n2, o2) in zip(blocks, blocks[1:]):
        if (f1, n1) == (f2, n2):
            p = list(range(r))
            for i in range(n1):
                p[o1 + i], p[o2 + i] = o2 + i, o1 + i
            gens.append(tuple(p))
    return DiagramSymmetryGroup(R, gens)


# Ms ----------------------------------------------------------------------------


@dataclass
class MsEntry:
    overlattice: Overlattice
    subgroup: SubgroupData
    orbit_id: int
    orbit_size: int
    stabilizer: List[Perm]

    @property
    def index(self) -> int:
        return self.overlattice.index

    @cached_property
    def disc_form(self) -> DiscriminantForm:
        return discriminant_form(self.overlattice.lattice)

    def m_action(self, p: Perm, group: DiagramSymmetryGroup) -> List[List[int]]:
        """Matrix of a stabilizing diagram symmetry in the basis of M."""
        M = self.overlattice
        g = linalg.matmul(linalg.matmul(M.from_m0, group.matrix(p)), M.to_m0)
        if any(Fraction(v).denominator != 1 for row in g for v in row):
            raise ValueError("permutation does not preserve the overlattice")
        return [[int(v) for v in row] for row in g]


def _subgroup_image(f: FqmMap, H: SubgroupData) -> frozenset:
    return frozenset(f(x) for x in H.elements)


def enumerate_ms(R: DynkinType) -> List[MsEntry]:
    """All of Ms with diagram-group orbit ids and stabilizers, sorted by (index, HNF of H)."""
    require_rank_19(R)
    base = polarized_m0(R)
    q0 = discriminant_form(base.m0)
    group = diagram_symmetries(R)
    image = group.induced_image(q0)
    kept = []
    for H in isotropic_subgroups(q0):
        M = overlattice_from_isotropic(base, H)
        roots = roots_orthogonal_to_h(M)
        if check_m1(M, roots) and check_m2(M, roots):
            kept.append((H, M))
    by_elems = {H.elements: k for k, (H, _) in enumerate(kept)}
    orbit_of: Dict[int, int] = {}
    orbits: List[List[int]] = []
    for k, (H, _) in enumerate(kept):
        if k in orbit_of:
            continue
        members = sorted({by_elems[_subgroup_image(f, H)] for f in image})
        for m in members:
            orbit_of[m] = len(orbits)
        orbits.append(members)
    out = []
    for k, (H, M) in enumerate(kept):
        stab = sorted(p for f, p in image.items() if _subgroup_image(f, H) == H.elements)
        oid = orbit_of[k]
        out.append(MsEntry(M, H, oid, len(orbits[oid]), stab))
    return out


def ms_classes(entries: Sequence[MsEntry]) -> List[MsEntry]:
    """One representative (the first in canonical order) per orbit."""
    seen, out = set(), []
    for e in entries:
        if e.orbit_id not in seen:
            seen.add(e.orbit_id)
            out.append(e)
    return out


# Ns, Ls, O(N) ------------------------------------------------------------------


def enumerate_ns(entry: MsEntry) -> List[BinaryEvenForm]:
    """Rank-2 positive definite N whose discriminant form is anti-isometric to q_M."""
    qM = entry.disc_form
    target = negate(qM)
    out = []
    for f in enumerate_even_classes(qM.order):
        qN = discriminant_form(lattice_of(f))
        if is_isometric(target, qN):
            out.append(f)
    return out


def enumerate_ls(entry: MsEntry, N: BinaryEvenForm) -> List[FqmMap]:
    """Gluings L in Ls(M, N), i.e. isometries (G_M, -q_M) -> (G_N, q_N)."""
    return fqm_isomorphisms(negate(entry.disc_form), discriminant_form(lattice_of(N)))


def rank2_orthogonal_group(N: BinaryEvenForm) -> List[Tuple[Tuple[Tuple[int, int], Tuple[int, int]], int]]:
    """All integral isometries of N as (matrix, det), found by matching vectors of norms a and c."""
    G = N.gram()
    out = []
    firsts = linalg.vectors_of_norm(G, N.a)
    seconds = linalg.vectors_of_norm(G, N.c)
    for v1 in firsts:
        for v2 in seconds:
            if linalg.bilinear(G, v1, v2) == N.b:
                g = ((int(v1[0]), int(v2[0])), (int(v1[1]), int(v2[1])))
                det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
                out.append((g, det))
    out.sort()
    return out


# orbits ------------------------------------------------------------------------


@dataclass
class Orbit:
    size: int
    real: bool
    representative: Tuple[Tuple[Tuple[int, ...], ...], int]  # (gluing images, period label +-1)

    def to_dict(self):
        return {"size": self.size, "real": self.real,
                "representative": {"gluing": [list(x) for x in self.representative[0]],
                                   "component": "+" if self.representative[1] > 0 else "-"}}


@dataclass
class OrbitReport:
    form: BinaryEvenForm
    ls_size: int
    orbits: List[Orbit]

    @property
    def count(self) -> int:
        return len(self.orbits)

    @property
    def real_count(self) -> int:
        return sum(o.real for o in self.orbits)

    def to_dict(self):
        return {"N": self.form.name(), "gram": self.form.gram(), "ls_size": self.ls_size,
                "orbit_count": self.count, "real_orbits": self.real_count,
                "nonreal_orbits": self.count - self.real_count,
                "orbits": [o.to_dict() for o in self.orbits]}


def fiber_orbits(entry: MsEntry, N: BinaryEvenForm, group: Optional[DiagramSymmetryGroup] = None) -> OrbitReport:
    """Orbits of O_{F,h,M}(M0) x O(N) on Ls(M, N) x {+, -}.

    (g_M, g_N) sends (gamma, eps) to (gN o gamma o gM^-1, eps * det g_N).
    An orbit is real when it also contains (gamma, -eps).
    """
    if group is None:
        group = diagram_symmetries(entry.overlattice.base.dynkin)
    qM = entry.disc_form
    qN = discriminant_form(lattice_of(N))
    ls = enumerate_ls(entry, N)
    if not ls:
        raise ValueError(f"{N} is not in Ns(M)")
    m_inv = []
    for p in entry.stabilizer:
        f = induced_map(entry.m_action(invert_perm(p), group), qM)
        if f not in m_inv:
            m_inv.append(f)
    n_maps = []
    for g, det in rank2_orthogonal_group(N):
        n_maps.append((induced_map([list(r) for r in g], qN), det))

    def act(gamma: FqmMap, eps: int, fm: FqmMap, gn: FqmMap, det: int):
        images = tuple(gn(gamma(fm(x))) for x in qM.gens())
        return images, eps * det

    points = [(gamma.images, eps) for gamma in ls for eps in (1, -1)]
    lookup = {gamma.images: gamma for gamma in ls}
    seen = set()
    orbits = []
    for pt in points:
        if pt in seen:
            continue
        orbit = {pt}
        frontier = [pt]
        while frontier:
            nxt = []
            for images, eps in frontier:
                gamma = lookup[images]
                for fm in m_inv:
                    for gn, det in n_maps:
                        new = act(gamma, eps, fm, gn, det)
                        if new not in orbit:
                            orbit.add(new)
                            nxt.append(new)
            frontier = nxt
        seen |= orbit
        real = (pt[0], -pt[1]) in orbit
        orbits.append(Orbit(len(orbit), real, min(orbit)))
    return OrbitReport(N, len(ls), orbits)


# report ------------------------------------------------------------------------


@dataclass
class ClassReport:
    entry: MsEntry
    ns: List[BinaryEvenForm]
    fibers: List[OrbitReport]

    @property
    def components(self) -> int:
        return sum(f.count for f in self.fibers)

    def to_dict(self):
        e = self.entry
        return {"index": e.index, "orbit_size": e.orbit_size,
                "glue_generators": [list(g) for g in e.subgroup.generators],
                "discriminant_group": list(e.disc_form.invariant_factors),
                "stabilizer_image_order": len(e.stabilizer),
                "Ns": [f.name() for f in self.ns],
                "fibers": [f.to_dict() for f in self.fibers]}


@dataclass
class ComponentReport:
    dynkin: DynkinType
    classes: List[ClassReport]
    pairs: List[Tuple[int, str, str]] = field(default_factory=list)

    @property
    def sharp_classes(self) -> List[ClassReport]:
        return [c for c in self.classes if c.ns]

    @property
    def total(self) -> int:
        return sum(c.components for c in self.classes)

    def to_dict(self):
        return {"dynkin_type": str(self.dynkin), "rank": self.dynkin.rank,
                "ms_classes": len(self.classes), "ms_sharp_classes": len(self.sharp_classes),
                "classes": [c.to_dict() for c in self.classes],
                "total_components": self.total,
                "candidate_pairs": [{"class": i, "N1": a, "N2": b} for i, a, b in self.pairs],
                "note": SCOPE_NOTE}


def component_report(R: DynkinType) -> ComponentReport:
    require_rank_19(R)
    group = diagram_symmetries(R)
    classes = []
    for entry in ms_classes(enumerate_ms(R)):
        ns = enumerate_ns(entry)
        fibers = [fiber_orbits(entry, N, group) for N in ns]
        classes.append(ClassReport(entry, ns, fibers))
    pairs = []
    for i, c in enumerate(classes):
        for f1, f2 in itertools.combinations(c.ns, 2):
            pairs.append((i, f1.name(), f2.name()))
    return ComponentReport(R, classes, pairs)
