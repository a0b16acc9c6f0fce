"""Binary quadratic forms.

Two flavours live here:

* ``BinaryEvenForm`` -- the Gram matrix [[a, b], [b, c]] of an even positive
  definite rank-2 lattice, with GL2 and SL2 reduction;
* ``ClassicalForm`` -- a x^2 + b xy + c y^2 of negative discriminant, with
  Gauss reduction and composition.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import List

from .lattice import Lattice


@dataclass(frozen=True, order=True)
class BinaryEvenForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a % 2 or self.c % 2:
            raise ValueError(f"{self} is not even")
        if self.a <= 0 or self.c <= 0 or self.det <= 0:
            raise ValueError(f"{self} is not positive definite")

    @property
    def det(self) -> int:
        return self.a * self.c - self.b * self.b

    def gram(self):
        return [[self.a, self.b], [self.b, self.c]]

    def name(self, oriented: bool = False) -> str:
        return f"{'Λ̃' if oriented else 'Λ'}[{self.a},{self.b},{self.c}]"

    def __str__(self):
        return self.name()


def _sl2_step(a: int, b: int, c: int):
    """Translate b into the window -a < 2b <= a (matrix convention)."""
    k = (a - 2 * b) // (2 * a)  # largest k with 2(b + k a) <= a
    return a, b + k * a, c + 2 * k * b + k * k * a


def sl2_reduce(f: BinaryEvenForm) -> BinaryEvenForm:
    """Representative with -a < 2b <= a <= c, and b >= 0 when a == c."""
    a, b, c = f.a, f.b, f.c
    while True:
        a, b, c = _sl2_step(a, b, c)
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if a == c and b < 0:
        b = -b
    return BinaryEvenForm(a, b, c)


def gl2_reduce(f: BinaryEvenForm) -> BinaryEvenForm:
    """Representative with 0 <= 2b <= a <= c."""
    g = sl2_reduce(f)
    return BinaryEvenForm(g.a, abs(g.b), g.c)


def is_gl2_reduced(f: BinaryEvenForm) -> bool:
    return 0 <= 2 * f.b <= f.a <= f.c


def is_sl2_reduced(f: BinaryEvenForm) -> bool:
    return -f.a < 2 * f.b <= f.a <= f.c and (f.a != f.c or f.b >= 0)


def enumerate_even_classes(d: int) -> List[BinaryEvenForm]:
    """GL2-classes of even positive definite forms of determinant d."""
    if d < 1:
        raise ValueError("determinant must be positive")
    out = []
    b = 0
    while 3 * b * b <= d:
        n = d + b * b
        for a in range(max(2 * b, 2), isqrt(n) + 1):
            if a % 2 or n % a:
                continue
            c = n // a
            if c % 2 == 0 and a <= c:
                out.append(BinaryEvenForm(a, b, c))
        b += 1
    out.sort()
    return out


def sl2_fiber_size(f: BinaryEvenForm) -> int:
    """Number of SL2-classes inside the GL2-class of a reduced form."""
    if not is_gl2_reduced(f):
        raise ValueError(f"{f} is not GL2-reduced")
    return 2 if 0 < 2 * f.b < f.a < f.c else 1


def lattice_of(f: BinaryEvenForm) -> Lattice:
    return Lattice.from_gram(f.gram())


# classical forms -------------------------------------------------------------


@dataclass(frozen=True)
class ClassicalForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.disc >= 0:
            raise ValueError(f"{self} is not positive definite")
        if gcd(gcd(self.a, self.b), self.c) != 1:
            raise ValueError(f"{self} is not primitive")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 or (abs(b) != a and a != c)

    def inverse(self) -> "ClassicalForm":
        return classical_reduce(ClassicalForm(self.a, -self.b, self.c))

    def sort_key(self):
        return (self.a, abs(self.b), -self.b, self.c)

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def classical_reduce(f: ClassicalForm) -> ClassicalForm:
    a, b, c = f.a, f.b, f.c
    while True:
        # normalize: -a < b <= a
        k = (a - b) // (2 * a)
        c = c + k * b + k * k * a
        b = b + 2 * k * a
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if a == c and b < 0:
        b = -b
    return ClassicalForm(a, b, c)


def principal_form(D: int) -> ClassicalForm:
    b = D % 2
    return ClassicalForm(1, b, (b * b - D) // 4)


def _xgcd(a: int, b: int):
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(f: ClassicalForm, g: ClassicalForm) -> ClassicalForm:
    """Gauss composition of primitive forms of the same discriminant, reduced."""
    if f.disc != g.disc:
        raise ValueError("discriminant mismatch")
    if f.a > g.a:
        f, g = g, f
    a1, b1 = f.a, f.b
    a2, b2, c2 = g.a, g.b, g.c
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return classical_reduce(ClassicalForm(a3, b3, c3))
