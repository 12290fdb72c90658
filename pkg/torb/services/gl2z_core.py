"""
Exact arithmetic in GL(2,Z).

Matrices are immutable ``Mat2`` values with Python integer entries, words over
the generators A, B, R are ``GenWord`` values, and every element has a unique
``NormalForm``: an R-flag, a central sign and a reduced word in the modular
group Z2 * Z3 generated by the images a of A and b of B.

    A = (0 -1; 1 0)    B = (0 1; -1 1)    R = (0 1; 1 0)
    A^2 = B^3 = -I,  A^4 = R^2 = (RA)^2 = (RB)^2 = I
"""

import random
import re
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from torb.errors import DomainError, ParseError


@dataclass(frozen=True)
class Mat2:
    """2x2 integer matrix (a b; c d) of determinant +1 or -1"""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for entry in (self.a, self.b, self.c, self.d):
            if isinstance(entry, bool) or not isinstance(entry, int):
                raise DomainError(f"matrix entries must be integers, got {entry!r}")
        det = self.a * self.d - self.b * self.c
        if det not in (1, -1):
            raise DomainError(f"determinant must be +1 or -1, got {det}")

    @classmethod
    def identity(cls) -> 'Mat2':
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: 'Mat2') -> 'Mat2':
        return multiply(self, other)

    __mul__ = __matmul__

    def inverse(self) -> 'Mat2':
        return inverse(self)

    def __neg__(self) -> 'Mat2':
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, k: int) -> 'Mat2':
        base = self if k >= 0 else inverse(self)
        result = IDENTITY
        k = abs(k)
        while k:
            if k & 1:
                result = multiply(result, base)
            base = multiply(base, base)
            k >>= 1
        return result

    def rows(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __str__(self) -> str:
        return format_matrix(self)


def multiply(x: Mat2, y: Mat2) -> Mat2:
    return Mat2(
        x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d,
    )


def inverse(x: Mat2) -> Mat2:
    # adj(x) / det(x), and 1/det = det for det = +-1
    det = x.det
    return Mat2(det * x.d, -det * x.b, -det * x.c, det * x.a)


IDENTITY = Mat2(1, 0, 0, 1)
NEG_IDENTITY = Mat2(-1, 0, 0, -1)
A = Mat2(0, -1, 1, 0)
B = Mat2(0, 1, -1, 1)
R = Mat2(0, 1, 1, 0)
T = Mat2(1, 1, 0, 1)


class Letter(Enum):
    A = "A"
    A_INV = "A'"
    B = "B"
    B_INV = "B'"
    R = "R"

    @property
    def inverse(self) -> 'Letter':
        return _LETTER_INVERSE[self]

    @property
    def matrix(self) -> Mat2:
        return _LETTER_MATRIX[self]

    @property
    def generator(self) -> str:
        return self.value[0]

    @property
    def exponent(self) -> int:
        return -1 if self.value.endswith("'") else 1


_LETTER_INVERSE = {
    Letter.A: Letter.A_INV, Letter.A_INV: Letter.A,
    Letter.B: Letter.B_INV, Letter.B_INV: Letter.B,
    Letter.R: Letter.R,
}

_LETTER_MATRIX = {
    Letter.A: A, Letter.A_INV: inverse(A),
    Letter.B: B, Letter.B_INV: inverse(B),
    Letter.R: R,
}

ALL_LETTERS = (Letter.A, Letter.A_INV, Letter.B, Letter.B_INV, Letter.R)
SL_LETTERS = (Letter.A, Letter.A_INV, Letter.B, Letter.B_INV)


@dataclass(frozen=True)
class GenWord:
    """Finite word over A, A', B, B', R; free reduction is never implicit"""

    letters: Tuple[Letter, ...] = ()

    @classmethod
    def of(cls, *letters: Letter) -> 'GenWord':
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __add__(self, other: 'GenWord') -> 'GenWord':
        return GenWord(self.letters + other.letters)

    def __pow__(self, k: int) -> 'GenWord':
        base = self if k >= 0 else self.inverse()
        return GenWord(base.letters * abs(k))

    def inverse(self) -> 'GenWord':
        return GenWord(tuple(letter.inverse for letter in reversed(self.letters)))

    def free_reduce(self) -> 'GenWord':
        stack: List[Letter] = []
        for letter in self.letters:
            if stack and stack[-1] is letter.inverse:
                stack.pop()
            else:
                stack.append(letter)
        return GenWord(tuple(stack))

    def __str__(self) -> str:
        return format_word(self)


def evaluate(w: Iterable[Letter]) -> Mat2:
    """Left-to-right product of the generator matrices; the empty word is I"""
    return reduce(lambda acc, letter: multiply(acc, letter.matrix), w, IDENTITY)


def exponent_sums(w: Iterable[Letter]) -> Tuple[int, int, int]:
    """Signed letter counts (e_A, e_B, e_R)"""
    sums = {'A': 0, 'B': 0, 'R': 0}
    for letter in w:
        sums[letter.generator] += letter.exponent
    return sums['A'], sums['B'], sums['R']


def _t_power_word(k: int) -> Tuple[Letter, ...]:
    # T = B'A' and T^-1 = AB
    if k >= 0:
        return (Letter.B_INV, Letter.A_INV) * k
    return (Letter.A, Letter.B) * (-k)


def _euclid_steps(m: Mat2) -> Tuple[List[Optional[int]], int, int]:
    """
    Nearest-integer Euclidean reduction of the bottom row of a determinant +1
    matrix. Returns the right factors applied to m, in order (an int k stands
    for T^k, None for A), and the top-right entry b and diagonal sign d of the
    upper triangular matrix (+-1 b; 0 +-1) that is left.
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    applied: List[Optional[int]] = []
    while c != 0:
        # remainder of d by c in (-|c|/2, |c|/2], non-negative on exact ties
        r = d % abs(c)
        if 2 * r > abs(c):
            r -= abs(c)
        q = (d - r) // c
        if q:
            b, d = b - q * a, r
            applied.append(-q)
        a, b, c, d = b, -a, d, -c
        applied.append(None)
    return applied, b, d


def _decompose_special(m: Mat2) -> Tuple[Letter, ...]:
    applied, b, d = _euclid_steps(m)
    if d == 1:
        letters = list(_t_power_word(b))
    else:
        letters = [Letter.A, Letter.A] + list(_t_power_word(-b))

    for step in reversed(applied):
        if step is None:
            letters.append(Letter.A_INV)
        else:
            letters.extend(_t_power_word(-step))
    return tuple(letters)


def decompose(m: Mat2) -> GenWord:
    """
    Word evaluating to m.

    Determinant +1 words contain no R; determinant -1 words contain exactly one
    R, in front. The bottom row is reduced by nearest-integer Euclidean steps.
    """
    if m.det == -1:
        return GenWord((Letter.R,) + GenWord(_decompose_special(multiply(R, m))).free_reduce().letters)
    return GenWord(_decompose_special(m)).free_reduce()


def matrix_exponent_sums(m: Mat2) -> Tuple[int, int, int]:
    """
    Exponent sums (e_A, e_B, e_R) of ``decompose(m)``, read off the Euclidean
    steps without writing the word out, so the cost follows the bit length of
    the entries.
    """
    e_r = 0
    if m.det == -1:
        m, e_r = multiply(R, m), 1
    applied, b, d = _euclid_steps(m)
    # T^k contributes (-k, -k)
    if d == 1:
        e_a, e_b = -b, -b
    else:
        e_a, e_b = 2 + b, b
    for step in applied:
        if step is None:
            e_a -= 1
        else:
            e_a += step
            e_b += step
    return e_a, e_b, e_r


class PslSyllable(Enum):
    a = "a"
    b = "b"
    b2 = "b2"

    @property
    def factor(self) -> int:
        return 0 if self is PslSyllable.a else 1

    @property
    def inverse(self) -> 'PslSyllable':
        return _SYLLABLE_INVERSE[self]

    @property
    def rank(self) -> int:
        return _SYLLABLE_RANK[self]


_SYLLABLE_INVERSE = {
    PslSyllable.a: PslSyllable.a,
    PslSyllable.b: PslSyllable.b2,
    PslSyllable.b2: PslSyllable.b,
}
_SYLLABLE_RANK = {PslSyllable.a: 0, PslSyllable.b: 1, PslSyllable.b2: 2}
_SYLLABLE_LIFT = {PslSyllable.a: A, PslSyllable.b: B, PslSyllable.b2: multiply(B, B)}
_B_POWER = {PslSyllable.b: 1, PslSyllable.b2: 2}

SYLLABLES = (PslSyllable.a, PslSyllable.b, PslSyllable.b2)

PslWord = Tuple[PslSyllable, ...]


def _combine(x: PslSyllable, y: PslSyllable) -> Tuple[Optional[PslSyllable], int]:
    """lift(x) lift(y) = (-I)^sign lift(result) for syllables of one factor"""
    if x is PslSyllable.a:
        return None, 1
    total = _B_POWER[x] + _B_POWER[y]
    if total == 2:
        return PslSyllable.b2, 0
    if total == 3:
        return None, 1
    return PslSyllable.b, 1


# letter -> (syllable, sign) with A' = -A and B' = -B^2
_LETTER_SYLLABLE = {
    Letter.A: (PslSyllable.a, 0),
    Letter.A_INV: (PslSyllable.a, 1),
    Letter.B: (PslSyllable.b, 0),
    Letter.B_INV: (PslSyllable.b2, 1),
}


def psl_multiply(u: Sequence[PslSyllable], v: Sequence[PslSyllable]) -> PslWord:
    """Reduced product of u and v; u must be reduced, v may be any sequence"""
    result = list(u)
    for syllable in v:
        if result and result[-1].factor == syllable.factor:
            merged, _ = _combine(result.pop(), syllable)
            if merged is not None:
                result.append(merged)
        else:
            result.append(syllable)
    return tuple(result)


def psl_reduce(syllables: Sequence[PslSyllable]) -> PslWord:
    return psl_multiply((), syllables)


def psl_inverse(w: Sequence[PslSyllable]) -> PslWord:
    return tuple(s.inverse for s in reversed(w))


def psl_commutator(x: PslWord, y: PslWord) -> PslWord:
    return psl_reduce(x + y + psl_inverse(x) + psl_inverse(y))


def is_reduced(w: Sequence[PslSyllable]) -> bool:
    return all(w[i].factor != w[i + 1].factor for i in range(len(w) - 1))


def reduced_psl_words(max_length: int) -> Iterator[PslWord]:
    """All reduced words of length <= max_length, by length then lexicographically"""
    layer: List[PslWord] = [()]
    yield ()
    for _ in range(max_length):
        next_layer: List[PslWord] = []
        for word in layer:
            for syllable in SYLLABLES:
                if not word or word[-1].factor != syllable.factor:
                    next_layer.append(word + (syllable,))
        for word in next_layer:
            yield word
        layer = next_layer


def format_psl(w: Sequence[PslSyllable]) -> str:
    return " ".join(s.value for s in w) if w else "1"


def lift_psl(w: Sequence[PslSyllable]) -> Mat2:
    """Product of lift(a) = A, lift(b) = B, lift(b2) = B^2"""
    return reduce(lambda acc, s: multiply(acc, _SYLLABLE_LIFT[s]), w, IDENTITY)


@dataclass(frozen=True)
class NormalForm:
    """The matrix R^r_flag (-I)^sign lift(psl)"""

    r_flag: int
    sign: int
    psl: PslWord

    def __post_init__(self):
        if self.r_flag not in (0, 1) or self.sign not in (0, 1):
            raise DomainError("r_flag and sign must be 0 or 1")
        if not all(isinstance(s, PslSyllable) for s in self.psl):
            raise DomainError("psl must be a sequence of syllables")

    def __str__(self) -> str:
        return f"R^{self.r_flag} (-I)^{self.sign} [{format_psl(self.psl)}]"


def _special_normal_form(s: Mat2) -> Tuple[int, PslWord]:
    sign = 0
    stack: List[PslSyllable] = []
    for letter in decompose(s):
        syllable, extra = _LETTER_SYLLABLE[letter]
        sign ^= extra
        if stack and stack[-1].factor == syllable.factor:
            merged, extra = _combine(stack.pop(), syllable)
            sign ^= extra
            if merged is not None:
                stack.append(merged)
        else:
            stack.append(syllable)
    return sign, tuple(stack)


def normal_form(m: Mat2) -> NormalForm:
    """Unique normal form; R is pushed to the front using RA = A'R, RB = B'R"""
    r_flag = 0
    if m.det == -1:
        r_flag, m = 1, multiply(R, m)
    sign, psl = _special_normal_form(m)
    return NormalForm(r_flag, sign, psl)


def nf_to_matrix(n: NormalForm) -> Mat2:
    if not is_reduced(n.psl):
        raise DomainError(f"psl word is not reduced: {format_psl(n.psl)}")
    m = lift_psl(n.psl)
    if n.sign:
        m = -m
    if n.r_flag:
        m = multiply(R, m)
    return m


def alpha_project(m: Mat2) -> Tuple[int, PslWord]:
    """Projection to Z2 * Z3; the flag records the R-coset of det -1 matrices"""
    nf = normal_form(m)
    return nf.r_flag, nf.psl


def random_word(length: int, rng: random.Random, letters: Sequence[Letter] = ALL_LETTERS) -> GenWord:
    return GenWord(tuple(rng.choice(letters) for _ in range(length)))


_BRACKET_MATRIX = re.compile(
    r'^\[\s*\[\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\]\s*,\s*\[\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\]\s*\]$'
)
_WORD_TOKEN = re.compile(r"([ABR])('?)")


def parse_matrix(text: str) -> Mat2:
    """Parse "a b; c d" or "[[a,b],[c,d]]" """
    text = text.strip()
    match = _BRACKET_MATRIX.match(text)
    if match:
        entries = [int(group) for group in match.groups()]
    else:
        rows = [row.split() for row in text.split(';')]
        if len(rows) != 2 or any(len(row) != 2 for row in rows):
            raise ParseError(f"expected a matrix 'a b; c d', got {text!r}")
        try:
            entries = [int(entry) for row in rows for entry in row]
        except ValueError:
            raise ParseError(f"matrix entries must be integers, got {text!r}")
    try:
        return Mat2(*entries)
    except DomainError as e:
        raise ParseError(f"{e} in {text!r}")


def format_matrix(m: Mat2) -> str:
    return f"{m.a} {m.b}; {m.c} {m.d}"


def parse_word(text: str) -> GenWord:
    """Parse a word over A, A', B, B', R such as "B'A'"; "1" is the empty word"""
    compact = re.sub(r'[\s,]+', '', text)
    if compact in ('', '1'):
        return GenWord()
    letters = []
    position = 0
    for match in _WORD_TOKEN.finditer(compact):
        if match.start() != position:
            break
        symbol = match.group(1) + match.group(2)
        letters.append(Letter.R if symbol.startswith('R') else Letter(symbol))
        position = match.end()
    if position != len(compact):
        raise ParseError(f"unexpected character in word {text!r} at position {position}")
    return GenWord(tuple(letters))


def format_word(w: GenWord) -> str:
    return "".join(letter.value for letter in w) if len(w) else "1"
