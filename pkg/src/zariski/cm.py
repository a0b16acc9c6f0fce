"""Class groups of imaginary quadratic fields and their K3 lattice shadows.

A singular abelian surface C/I x C/I is recorded only through the ideal
class [I]^2; its oriented transcendental lattice is the doubled form of
that class.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Tuple

import mpmath

from .binforms import (BinaryEvenForm, ClassicalForm, classical_reduce, compose, principal_form,
                       sl2_reduce)


class PrecisionError(ArithmeticError):
    pass


def _squarefree(n: int) -> bool:
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def reduced_forms(D: int) -> List[ClassicalForm]:
    """Reduced primitive positive definite forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0) or gcd(gcd(a, b), c) != 1:
                continue
            out.append(ClassicalForm(a, b, c))
        a += 1
    out.sort(key=ClassicalForm.sort_key)
    return out


def _abelian_invariants(orders: Dict[ClassicalForm, int]) -> List[int]:
    """Invariant factors of a finite abelian group from counting p-power torsion."""
    n = len(orders)
    primes = []
    m, p = n, 2
    while m > 1:
        if m % p == 0:
            primes.append(p)
            while m % p == 0:
                m //= p
        p += 1
    factors: List[int] = []
    for p in primes:
        # r_k = log_p #{x : p^k x = 0}
        logs = [0]
        k = 1
        while True:
            cnt = sum(1 for o in orders.values() if (p ** k) % o == 0)
            e = 0
            while cnt > 1:
                cnt //= p
                e += 1
            logs.append(e)
            if e == logs[-2] and k > 1:
                break
            k += 1
        # number of cyclic factors of order >= p^k is r_k - r_{k-1}
        parts = []
        for k in range(1, len(logs)):
            parts.append(logs[k] - logs[k - 1])
        exps = []
        for k in range(len(parts)):
            nxt = parts[k + 1] if k + 1 < len(parts) else 0
            exps += [k + 1] * (parts[k] - nxt)
        exps.sort(reverse=True)
        for i, e in enumerate(exps):
            if i < len(factors):
                factors[i] *= p ** e
            else:
                factors.append(p ** e)
    return sorted(factors)


@dataclass
class ClassGroup:
    D: int
    forms: List[ClassicalForm]
    table: Dict[Tuple[ClassicalForm, ClassicalForm], ClassicalForm]
    orders: Dict[ClassicalForm, int]
    structure: List[int]

    @property
    def order(self) -> int:
        return len(self.forms)

    @property
    def identity(self) -> ClassicalForm:
        return principal_form(self.D)

    @property
    def is_cyclic(self) -> bool:
        return len(self.structure) <= 1

    @property
    def generator(self):
        """Canonical generator of a cyclic group (first in canonical order), else None."""
        if not self.is_cyclic:
            return None
        return next(f for f in self.forms if self.orders[f] == self.order)

    def mul(self, f: ClassicalForm, g: ClassicalForm) -> ClassicalForm:
        return self.table[(f, g)]

    def power(self, f: ClassicalForm, k: int) -> ClassicalForm:
        out = self.identity
        for _ in range(k % self.orders[f]):
            out = self.mul(out, f)
        return out

    def to_dict(self):
        gen = self.generator
        return {"discriminant": self.D, "class_number": self.order,
                "structure": self.structure, "cyclic": self.is_cyclic,
                "generator": str(gen) if gen else None,
                "forms": [{"form": str(f), "order": self.orders[f]} for f in self.forms]}


def class_group(D: int) -> ClassGroup:
    if not is_fundamental(D) or D >= 0:
        raise ValueError(f"{D} is not a negative fundamental discriminant")
    forms = reduced_forms(D)
    table = {(f, g): compose(f, g) for f in forms for g in forms}
    e = principal_form(D)
    orders = {}
    for f in forms:
        k, x = 1, f
        while x != e:
            x = table[(x, f)]
            k += 1
        orders[f] = k
    structure = _abelian_invariants(orders)
    return ClassGroup(D, forms, table, orders, structure)


def ideal_to_form(p: int, q: int, D: int) -> ClassicalForm:
    """Reduced form of the lattice Z + Z tau, tau = (p + sqrt(D)) / q."""
    # minimal polynomial: q^2 t^2 - 2pq t + (p^2 - D)
    a, b, c = q * q, -2 * p * q, p * p - D
    g = gcd(gcd(a, b), c)
    a, b, c = a // g, b // g, c // g
    if b * b - 4 * a * c != D:
        raise ValueError(f"({p}+sqrt({D}))/{q} does not have discriminant {D}")
    return classical_reduce(ClassicalForm(a, b, c))


def shioda_mitani(cls: ClassicalForm) -> BinaryEvenForm:
    """Oriented transcendental lattice attached to a class: SL2-class of [[2a, b], [b, 2c]]."""
    return sl2_reduce(BinaryEvenForm(2 * cls.a, cls.b, 2 * cls.c))


@dataclass
class EmbeddingRow:
    i: int
    ideal_class: ClassicalForm
    square: ClassicalForm
    lattice: BinaryEvenForm

    def to_dict(self):
        return {"i": self.i, "class": str(self.ideal_class), "square": str(self.square),
                "lattice": self.lattice.name(oriented=True)}


@dataclass
class CMEmbeddingReport:
    group: ClassGroup
    rows: List[EmbeddingRow]

    def to_dict(self):
        return {"class_group": self.group.to_dict(), "embeddings": [r.to_dict() for r in self.rows]}


def embedding_lattices(D: int) -> CMEmbeddingReport:
    """For each class [I_i] the lattice of C/I_i x C/I_i = C/I_i^2 x C/I_0.

    Classes are indexed as powers of the canonical generator when the group
    is cyclic, and in canonical form order otherwise.
    """
    G = class_group(D)
    gen = G.generator
    if gen is not None:
        classes = [G.power(gen, i) for i in range(G.order)]
    else:
        classes = list(G.forms)
    rows = []
    for i, f in enumerate(classes):
        sq = G.mul(f, f)
        rows.append(EmbeddingRow(i, f, sq, shioda_mitani(sq)))
    return CMEmbeddingReport(G, rows)


# Hilbert class polynomial -------------------------------------------------------


def j_coefficients(n_terms: int) -> List[int]:
    """c_{-1}, c_0, c_1, ... of j = E4^3 / Delta, exactly (n_terms entries)."""
    N = n_terms
    sigma3 = [0] * (N + 1)
    for d in range(1, N + 1):
        for m in range(d, N + 1, d):
            sigma3[m] += d ** 3
    e4 = [1] + [240 * sigma3[m] for m in range(1, N + 1)]

    def mul(x, y):
        out = [0] * (N + 1)
        for i, xi in enumerate(x):
            if xi:
                for k in range(N + 1 - i):
                    out[i + k] += xi * y[k]
        return out

    e4cube = mul(mul(e4, e4), e4)
    # 1 / prod (1 - q^n)^24 via the Euler product, one factor at a time
    inv = [1] + [0] * N
    for n in range(1, N + 1):
        for _ in range(24):
            for k in range(n, N + 1):
                inv[k] += inv[k - n]
    series = mul(e4cube, inv)  # j * q
    return series[:n_terms]


def _j_tail_bound(q_abs, n_terms: int):
    """Bound on sum_{n >= n_terms - 1} |c_n q^n| using c_n <= exp(4 pi sqrt n)."""
    total = mpmath.mpf(0)
    n = n_terms - 1
    while True:
        term = mpmath.exp(4 * mpmath.pi * mpmath.sqrt(n)) * q_abs ** n
        total += term
        if n > n_terms + 10 and term < total * mpmath.mpf(10) ** -30:
            break
        n += 1
        if n > 100 * n_terms + 1000:
            return mpmath.inf
    return total


@dataclass
class HilbertResult:
    D: int
    coefficients: List[int]  # highest degree first
    rounding_error: float
    truncation_bound: float
    j_values: List[complex]

    def to_dict(self):
        return {"discriminant": self.D, "coefficients": [str(c) for c in self.coefficients],
                "degree": len(self.coefficients) - 1,
                "rounding_error": self.rounding_error, "truncation_bound": self.truncation_bound}


def hilbert_class_polynomial(D: int, precision_digits: int = 80, q_terms: int = 60) -> HilbertResult:
    """prod over reduced forms (a, b, c) of (t - j((-b + sqrt D) / 2a)), rounded to integers."""
    forms = reduced_forms(D)
    coeffs = j_coefficients(q_terms)
    with mpmath.workdps(precision_digits):
        poly = [mpmath.mpc(1)]
        jvals = []
        worst_tail = mpmath.mpf(0)
        for f in forms:
            tau = mpmath.mpc(-f.b, mpmath.sqrt(-D)) / (2 * f.a)
            q = mpmath.exp(2j * mpmath.pi * tau)
            s = mpmath.mpc(0)
            qn = 1 / q
            for c in coeffs:
                s += c * qn
                qn *= q
            jvals.append(s)
            worst_tail = max(worst_tail, _j_tail_bound(abs(q), q_terms))
            # multiply poly (highest first) by (t - j)
            new = poly + [mpmath.mpc(0)]
            for k in range(len(poly)):
                new[k + 1] -= s * poly[k]
            poly = new
        ints = [int(mpmath.nint(c.real)) for c in poly]
        err = max(max(abs(c.real - n), abs(c.imag)) for c, n in zip(poly, ints))
        # crude propagation of the j-truncation into the coefficients
        jmax = max(abs(j) for j in jvals) + 1
        tb = worst_tail * len(forms) * jmax ** max(len(forms) - 1, 0) * 2 ** len(forms)
        result = HilbertResult(D, ints, float(err), float(tb), [complex(j) for j in jvals])
    if result.rounding_error > 0.25 or result.truncation_bound > 0.25:
        raise PrecisionError(
            f"precision insufficient for D={D}: rounding error {result.rounding_error:.3g}, "
            f"truncation bound {result.truncation_bound:.3g}; raise precision_digits or q_terms")
    return result


def format_polynomial(coeffs: List[int], var: str = "t") -> str:
    deg = len(coeffs) - 1
    parts = []
    for k, c in enumerate(coeffs):
        e = deg - k
        if c == 0:
            continue
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        mag = abs(c)
        if mono == "":
            body = str(mag)
        else:
            body = mono if mag == 1 else f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
