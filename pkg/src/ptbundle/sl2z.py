"""
Exact SL(2,Z) arithmetic and the R/L twist-word normal form.

Generators are fixed as

    R = [[1, 1], [0, 1]]   (twist along the longitude)
    L = [[1, 0], [1, 1]]   (twist along the meridian)

and a monodromy is factored as  sign * R^l1 L^m1 ... R^lr L^mr  up to
conjugation in SL(2,Z).  All arithmetic uses Python integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .errors import DeterminantError, InvalidWord, NonHyperbolic, NonPositiveSyllable


@dataclass(frozen=True)
class MatSL2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise DeterminantError(
                f"determinant of [[{self.a},{self.b}],[{self.c},{self.d}]] "
                f"is {self.a * self.d - self.b * self.c}, not 1")

    @classmethod
    def identity(cls) -> MatSL2:
        return cls(1, 0, 0, 1)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: MatSL2) -> MatSL2:
        return MatSL2(self.a * other.a + self.b * other.c,
                      self.a * other.b + self.b * other.d,
                      self.c * other.a + self.d * other.c,
                      self.c * other.b + self.d * other.d)

    def __neg__(self) -> MatSL2:
        return MatSL2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, e: int) -> MatSL2:
        base = self if e >= 0 else self.inverse()
        result = MatSL2.identity()
        for _ in range(abs(e)):
            result = result @ base
        return result

    def inverse(self) -> MatSL2:
        return MatSL2(self.d, -self.b, -self.c, self.a)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


R = MatSL2(1, 1, 0, 1)
L = MatSL2(1, 0, 1, 1)
# Quarter turn; also the conjugator that sends R to L^-1.
S = MatSL2(0, -1, 1, 0)


def compose(A: MatSL2, B: MatSL2) -> MatSL2:
    return A @ B


@dataclass(frozen=True, order=True)
class Slope:
    """A point p/q of the extended rationals, with infinity stored as 1/0."""
    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or gcd(self.p, self.q) != 1 or (self.q == 0 and self.p != 1):
            raise ValueError(f"non-canonical slope {self.p}/{self.q}")

    @classmethod
    def of(cls, p: int, q: int) -> Slope:
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def parse(cls, text: str) -> Slope:
        p, _, q = text.partition("/")
        return cls.of(int(p), int(q) if q else 1)

    def __str__(self):
        return f"{self.p}/{self.q}"


INFINITY = Slope(1, 0)


def apply_to_slope(A: MatSL2, s: Slope) -> Slope:
    return Slope.of(A.a * s.p + A.b * s.q, A.c * s.p + A.d * s.q)


def farey_adjacent(s: Slope, t: Slope) -> bool:
    return abs(s.p * t.q - s.q * t.p) == 1


def is_hyperbolic(A: MatSL2) -> bool:
    return abs(A.trace) > 2


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number (P + sqrt(D)) / Q."""
    P: int
    Q: int
    D: int

    def __post_init__(self):
        if self.D <= 0 or isqrt(self.D) ** 2 == self.D:
            raise ValueError(f"D = {self.D} must be a positive non-square")
        if self.Q == 0 or (self.D - self.P * self.P) % self.Q:
            raise ValueError(f"Q = {self.Q} must divide D - P^2")

    def floor(self) -> int:
        s = isqrt(self.D)
        # sqrt(D) is irrational, so floor(P + sqrt(D)) = P + s exactly
        if self.Q > 0:
            return (self.P + s) // self.Q
        return (-self.P - s - 1) // -self.Q

    def __float__(self):
        return (self.P + self.D ** 0.5) / self.Q

    def __str__(self):
        return f"({self.P}+sqrt({self.D}))/{self.Q}"


def _reduce_surd(P: int, Q: int, D: int) -> QuadraticSurd:
    g = gcd(P, Q)
    for f in range(g, 1, -1):
        if g % f or D % (f * f):
            continue
        p, q, d = P // f, Q // f, D // (f * f)
        if (d - p * p) % q == 0:
            return QuadraticSurd(p, q, d)
    return QuadraticSurd(P, Q, D)


def attracting_fixed_point(A: MatSL2) -> QuadraticSurd:
    """Fixed point of x -> (ax+b)/(cx+d) toward which A pushes everything else."""
    if not is_hyperbolic(A):
        raise NonHyperbolic(f"{A} has trace {A.trace}")
    # c == 0 would force a = d = +-1, i.e. trace +-2
    assert A.c != 0
    # the derivative at x is 1/(cx+d)^2 and cx+d is an eigenvalue, so the
    # attracting point belongs to the eigenvalue whose sqrt term has sign(trace)
    s = 1 if A.trace > 0 else -1
    return _reduce_surd(s * (A.a - A.d), 2 * A.c * s, A.trace ** 2 - 4)


def surd_continued_fraction(x: QuadraticSurd):
    """Return (preperiod, period) of the regular continued fraction of x."""
    P, Q, D = x.P, x.Q, x.D
    seen = {}
    digits = []
    while (P, Q) not in seen:
        seen[P, Q] = len(digits)
        a = QuadraticSurd(P, Q, D).floor()
        digits.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    start = seen[P, Q]
    return digits[:start], digits[start:]


@dataclass(frozen=True)
class TwistWord:
    """sign * R^l1 L^m1 ... R^lr L^mr with every exponent >= 1."""
    syllables: tuple
    sign: int = 1

    def __post_init__(self):
        syl = tuple((int(l), int(m)) for l, m in self.syllables)
        object.__setattr__(self, "syllables", syl)
        if self.sign not in (1, -1):
            raise InvalidWord(f"sign must be +1 or -1, got {self.sign}")
        if not syl:
            raise InvalidWord("a twist word needs at least one syllable")
        for i, (l, m) in enumerate(syl):
            if l < 1 or m < 1:
                raise NonPositiveSyllable(f"syllable {i + 1} = ({l},{m}) has a non-positive exponent")

    @property
    def length(self) -> int:
        return sum(l + m for l, m in self.syllables)

    def flat(self):
        return [e for syl in self.syllables for e in syl]

    def letters(self) -> str:
        return "".join("R" * l + "L" * m for l, m in self.syllables)

    def rotate(self, r: int) -> TwistWord:
        r %= len(self.syllables)
        return TwistWord(self.syllables[r:] + self.syllables[:r], self.sign)

    def canonical(self) -> TwistWord:
        return min((self.rotate(r) for r in range(len(self.syllables))),
                   key=lambda w: w.flat())

    def __str__(self):
        body = ";".join(f"{l},{m}" for l, m in self.syllables)
        return body if self.sign == 1 else f"-({body})"


def word_to_matrix(w: TwistWord) -> MatSL2:
    M = MatSL2.identity()
    for l, m in w.syllables:
        M = M @ R ** l @ L ** m
    return M if w.sign == 1 else -M


def _word_from_flat(flat, sign=1) -> TwistWord:
    return TwistWord(tuple(zip(flat[0::2], flat[1::2])), sign)


@dataclass(frozen=True)
class Factorization:
    word: TwistWord
    # conjugator @ word_to_matrix(word) @ conjugator^-1 == input matrix
    conjugator: MatSL2
    conjugator_found: bool


def rl_factorize(A: MatSL2) -> Factorization:
    """Conjugate A into the canonical form sign * R^l1 L^m1 ... R^lr L^mr.

    The period of the continued fraction of the attracting fixed point gives
    the cyclic R/L word: x -> a + 1/x is [[a,1],[1,0]] and
    [[a,1],[1,0]] @ [[b,1],[1,0]] == R^a L^b.  The preperiod gives the
    conjugator; when it has odd length the conjugator has determinant -1,
    which swaps R and L, so it is corrected by the flip J = [[0,1],[1,0]]
    together with a one-letter rotation of the word.
    """
    if not is_hyperbolic(A):
        raise NonHyperbolic(f"{A} has trace {A.trace}; need |trace| > 2")
    sign = 1 if A.trace > 0 else -1
    B = A if sign == 1 else -A

    pre, period = surd_continued_fraction(attracting_fixed_point(B))
    flat = period * 2 if len(period) % 2 else list(period)

    # g = prod [[a,1],[1,0]] over the preperiod, kept as a plain 2x2 since
    # its determinant is (-1)^len(pre)
    g = (1, 0, 0, 1)
    for a in pre:
        g = (g[0] * a + g[1], g[0], g[2] * a + g[3], g[2])
    if len(pre) % 2:
        # g @ J has determinant 1
        h = MatSL2(g[1], g[0], g[3], g[2])
        flat = flat[1:] + flat[:1]
        conj = h @ L ** flat[-1]
    else:
        conj = MatSL2(*g)

    target = abs(B.trace)
    reps = 1
    while word_to_matrix(_word_from_flat(flat * reps)).trace < target:
        reps += 1
    word = _word_from_flat(flat * reps)

    best = word.canonical()
    r = next(r for r in range(len(word.syllables)) if word.rotate(r) == best)
    for l, m in word.syllables[:r]:
        conj = conj @ R ** l @ L ** m
    word = TwistWord(best.syllables, sign)

    found = conj @ word_to_matrix(word) @ conj.inverse() == A
    return Factorization(word, conj, found)
