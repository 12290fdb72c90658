"""
Finitely presented groups and their abelianizations.

Relators are words of (generator, exponent) pairs. The abelian invariants of
a presentation are read off the Smith normal form of its relator matrix,
computed exactly over the integers.
"""

import re
from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Matrix, eye

from torb.errors import DomainError, ParseError
from torb.services.debug_logger import DebugLogger
from torb.services.gl2z_core import A, B, IDENTITY, NEG_IDENTITY, R, Mat2, multiply

Relator = Tuple[Tuple[str, int], ...]
IntMatrix = List[List[int]]


@dataclass(frozen=True)
class Presentation:
    generator_names: Tuple[str, ...]
    relators: Tuple[Relator, ...] = ()

    def __post_init__(self):
        declared = set(self.generator_names)
        for relator in self.relators:
            for name, _ in relator:
                if name not in declared:
                    raise DomainError(f"relator uses undeclared generator {name!r}")

    def with_relators(self, extra: Sequence[Relator]) -> 'Presentation':
        return Presentation(self.generator_names, self.relators + tuple(extra))


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\^)|([+-]?\d+)|(')|([A-Za-z_][A-Za-z0-9_]*))")


def _simplify(word: Sequence[Tuple[str, int]]) -> Relator:
    out: List[Tuple[str, int]] = []
    for name, exponent in word:
        if out and out[-1][0] == name:
            exponent += out.pop()[1]
        if exponent:
            out.append((name, exponent))
    return tuple(out)


def _invert(word: Relator) -> Relator:
    return tuple((name, -exponent) for name, exponent in reversed(word))


def _power(word: Relator, k: int) -> Relator:
    base = word if k >= 0 else _invert(word)
    return _simplify(base * abs(k))


class _WordParser:
    """Recursive descent over  word := factor*,  factor := atom ('^' int | "'")*"""

    def __init__(self, text: str, generators: Sequence[str]):
        self.text = text
        self.generators = set(generators)
        self.tokens = self._tokenize(text)
        self.position = 0

    def _tokenize(self, text: str) -> List[Tuple[str, str]]:
        tokens = []
        position = 0
        stripped = text.rstrip()
        while position < len(stripped):
            match = _TOKEN.match(stripped, position)
            if not match:
                raise ParseError(f"unexpected character {stripped[position:].strip()[:1]!r} in {text!r}")
            kinds = ('open', 'close', 'caret', 'int', 'prime', 'name')
            for kind, value in zip(kinds, match.groups()):
                if value is not None:
                    tokens.append((kind, value))
            position = match.end()
        return tokens

    def _peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def _take(self) -> Tuple[str, str]:
        token = self._peek()
        if token is None:
            raise ParseError(f"unexpected end of {self.text!r}")
        self.position += 1
        return token

    def parse(self) -> Relator:
        word = self._sequence()
        if self._peek() is not None:
            raise ParseError(f"unbalanced parenthesis in {self.text!r}")
        return word

    def _sequence(self) -> Relator:
        word: List[Tuple[str, int]] = []
        while self._peek() is not None and self._peek()[0] != 'close':
            word.extend(self._factor())
        return _simplify(word)

    def _factor(self) -> Relator:
        kind, value = self._take()
        if kind == 'open':
            atom = self._sequence()
            if self._take()[0] != 'close':
                raise ParseError(f"missing ')' in {self.text!r}")
        elif kind == 'name':
            atom = self._resolve(value)
        elif kind == 'int' and value == '1':
            atom = ()
        else:
            raise ParseError(f"unexpected {value!r} in {self.text!r}")

        while self._peek() is not None and self._peek()[0] in ('caret', 'prime'):
            kind, _ = self._take()
            if kind == 'prime':
                atom = _invert(atom)
            else:
                exponent_kind, exponent = self._take()
                if exponent_kind != 'int':
                    raise ParseError(f"expected an integer after '^' in {self.text!r}")
                atom = _power(atom, int(exponent))
        return atom

    def _resolve(self, name: str) -> Relator:
        if name in self.generators:
            return ((name, 1),)
        # juxtaposed single-letter generators such as RA
        if all(char in self.generators for char in name):
            return tuple((char, 1) for char in name)
        raise ParseError(f"unknown generator {name!r} in {self.text!r}")


def parse_relator_word(text: str, generators: Sequence[str]) -> Relator:
    return _WordParser(text, generators).parse()


def parse_relations(text: str, generators: Sequence[str]) -> Tuple[Relator, ...]:
    """
    Comma separated relations; x = y becomes x y^-1, and a chain
    x1 = x2 = ... = xk becomes x_i xk^-1 for i < k.
    """
    relators: List[Relator] = []
    for relation in text.split(','):
        if not relation.strip():
            continue
        sides = [parse_relator_word(side, generators) for side in relation.split('=')]
        if len(sides) == 1:
            candidates = sides
        else:
            last = _invert(sides[-1])
            candidates = [_simplify(side + last) for side in sides[:-1]]
        relators.extend(candidate for candidate in candidates if candidate)
    return tuple(relators)


_PRESENTATION = re.compile(r'^\s*gens\s*:(?P<gens>[^;]*)(?:;\s*rels\s*:(?P<rels>.*))?$', re.DOTALL)


def parse_presentation(text: str) -> Presentation:
    """Parse "gens: A B R; rels: A^2=B^3, A^4=1, (R A)^2=1" """
    match = _PRESENTATION.match(text)
    if not match:
        raise ParseError(f"expected 'gens: ...; rels: ...', got {text!r}")
    generators = tuple(re.split(r'[\s,]+', match.group('gens').strip())) if match.group('gens').strip() else ()
    if len(set(generators)) != len(generators):
        raise ParseError(f"duplicate generator in {text!r}")
    relators = parse_relations(match.group('rels') or '', generators)
    return Presentation(generators, relators)


def format_relator(relator: Relator) -> str:
    if not relator:
        return "1"
    return " ".join(name if exponent == 1 else f"{name}^{exponent}" for name, exponent in relator)


def relator_matrix(p: Presentation) -> IntMatrix:
    """One row per relator, one column per generator: signed exponent sums"""
    index = {name: column for column, name in enumerate(p.generator_names)}
    rows = []
    for relator in p.relators:
        row = [0] * len(p.generator_names)
        for name, exponent in relator:
            row[index[name]] += exponent
        rows.append(row)
    return rows


def _as_matrix(rows: Sequence[Sequence[int]], columns: int) -> Matrix:
    """Integer sympy matrix; columns fixes the shape of a matrix without rows"""
    if any(len(row) != columns for row in rows):
        raise DomainError("relator matrix rows must all have the same length")
    return Matrix(len(rows), columns, [int(x) for row in rows for x in row])


def _to_rows(m: Matrix) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in m.row(i)) for i in range(m.rows))


@dataclass(frozen=True)
class SmithForm:
    """left . M . right = diag(diagonal), with left and right unimodular"""

    diagonal: Tuple[int, ...]
    left: Tuple[Tuple[int, ...], ...]
    right: Tuple[Tuple[int, ...], ...]

    def diagonal_matrix(self) -> Matrix:
        rows, columns = len(self.left), len(self.right)
        return Matrix(rows, columns, lambda i, j: self.diagonal[i] if i == j else 0)

    def check(self, matrix: Sequence[Sequence[int]]) -> bool:
        rows, columns = len(self.left), len(self.right)
        left, right = _as_matrix(self.left, rows), _as_matrix(self.right, columns)
        if left * _as_matrix(matrix, columns) * right != self.diagonal_matrix():
            return False
        if abs(left.det()) != 1 or abs(right.det()) != 1:
            return False
        nonzero = [d for d in self.diagonal if d]
        return all(d > 0 for d in nonzero) and all(
            nonzero[i + 1] % nonzero[i] == 0 for i in range(len(nonzero) - 1)
        )


def _min_pivot(m: Matrix, t: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(t, m.rows):
        for j in range(t, m.cols):
            value = abs(m[i, j])
            if value and (best is None or value < best[0]):
                best = (value, i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(matrix: Sequence[Sequence[int]], columns: Optional[int] = None) -> SmithForm:
    """
    Smith normal form over Z.

    The pivot is the nonzero entry of least absolute value, ties broken by the
    lowest (row, column). columns must be given for a matrix without rows.
    """
    rows = len(matrix)
    if columns is None:
        columns = len(matrix[0]) if rows else 0

    d = _as_matrix(matrix, columns)
    left = eye(rows)
    right = eye(columns)

    for t in range(min(rows, columns)):
        pivot = _min_pivot(d, t)
        if pivot is None:
            break
        while pivot is not None:
            i, j = pivot
            d.row_swap(t, i)
            left.row_swap(t, i)
            d.col_swap(t, j)
            right.col_swap(t, j)

            p = d[t, t]
            dirty = False
            for i in range(t + 1, rows):
                q = d[i, t] // p
                if q:
                    d[i, :] = d[i, :] - q * d[t, :]
                    left[i, :] = left[i, :] - q * left[t, :]
                dirty = dirty or d[i, t] != 0
            for j in range(t + 1, columns):
                q = d[t, j] // p
                if q:
                    d[:, j] = d[:, j] - q * d[:, t]
                    right[:, j] = right[:, j] - q * right[:, t]
                dirty = dirty or d[t, j] != 0
            if dirty:
                pivot = _min_pivot(d, t)
                continue

            # the pivot must divide the rest; fold an offending row into the pivot row
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, columns)
                        if d[i, j] % p), None)
            if bad is not None:
                d[t, :] = d[t, :] + d[bad[0], :]
                left[t, :] = left[t, :] + left[bad[0], :]
                pivot = _min_pivot(d, t)
                continue

            if p < 0:
                d[t, :] = -d[t, :]
                left[t, :] = -left[t, :]
            pivot = None

    diagonal = tuple(int(d[k, k]) for k in range(min(rows, columns)))
    return SmithForm(diagonal, _to_rows(left), _to_rows(right))


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d1 | d2 | ...; 0 stands for a copy of Z"""

    factors: Tuple[int, ...]

    @property
    def display(self) -> Tuple[int, ...]:
        return tuple(f for f in self.factors if f != 1)

    def __str__(self) -> str:
        if not self.display:
            return "0"
        return " + ".join("Z" if f == 0 else f"Z{f}" for f in self.display)


ExtraRelators = Optional[Union[str, Sequence[Relator]]]


def _extras(p: Presentation, extra_relators: ExtraRelators) -> Tuple[Relator, ...]:
    if extra_relators is None:
        return ()
    if isinstance(extra_relators, str):
        return parse_relations(extra_relators, p.generator_names)
    return tuple(extra_relators)


def abelian_invariants(p: Presentation, extra_relators: ExtraRelators = None) -> AbelianInvariants:
    """Commutation relators are implicit in the abelianization"""
    full = p.with_relators(_extras(p, extra_relators))
    columns = len(full.generator_names)
    snf = smith_normal_form(relator_matrix(full), columns)
    factors = snf.diagonal + (0,) * (columns - len(snf.diagonal))
    DebugLogger.log_debug("Abelian invariants computed", {
        "generators": full.generator_names,
        "relators": len(full.relators),
        "factors": factors
    })
    return AbelianInvariants(factors)


def abelian_image(p: Presentation, exponents: Sequence[int], extra_relators: ExtraRelators = None) -> Tuple[int, ...]:
    """
    Coordinates of a word with the given exponent sums in the abelianization,
    one per nontrivial invariant factor; all zero iff the word dies there.
    """
    full = p.with_relators(_extras(p, extra_relators))
    columns = len(full.generator_names)
    if len(exponents) != columns:
        raise DomainError(f"expected {columns} exponent sums, got {len(exponents)}")
    snf = smith_normal_form(relator_matrix(full), columns)
    moved = [int(x) for x in Matrix(1, columns, [int(e) for e in exponents]) * _as_matrix(snf.right, columns)]
    factors = snf.diagonal + (0,) * (columns - len(snf.diagonal))
    return tuple(value % f if f else value for value, f in zip(moved, factors) if f != 1)


SL2Z = parse_presentation("gens: A B; rels: A^2=B^3, A^4=1")
GL2Z = parse_presentation("gens: A B R; rels: A^2=B^3, A^4=1, R^2=1, (R A)^2=1, (R B)^2=1")
SQUARE_RELATORS = "A^2, B^2, R^2"
GL2Z_MOD_SQUARES = GL2Z.with_relators(parse_relations(SQUARE_RELATORS, GL2Z.generator_names))

STANDARD_MATRICES: Dict[str, Mat2] = {'A': A, 'B': B, 'R': R}


def evaluate_relator(relator: Relator, generators: Mapping[str, Mat2]) -> Mat2:
    return reduce(lambda acc, item: multiply(acc, generators[item[0]] ** item[1]), relator, IDENTITY)


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    holds: bool


# (name, left side, right side, right side negated)
_IDENTITIES = (
    ("A^2 = -I", "A^2", "1", True),
    ("B^3 = -I", "B^3", "1", True),
    ("A^4 = I", "A^4", "1", False),
    ("R^2 = I", "R^2", "1", False),
    ("(RA)^2 = I", "(R A)^2", "1", False),
    ("(RB)^2 = I", "(R B)^2", "1", False),
    ("RA = A^-1 R", "R A", "A^-1 R", False),
    ("RB = B^-1 R", "R B", "B^-1 R", False),
    ("[A,B] = (A R B^-1)^2", "A B A^-1 B^-1", "(A R B^-1)^2", False),
    ("[A,B^-1] = (A R B)^2", "A B^-1 A^-1 B", "(A R B)^2", False),
    # B^-1 R B is an involution, so it cannot serve as a square root of [A,B^-1]
    ("(B^-1 R B)^2 = I", "(B^-1 R B)^2", "1", False),
)

_NEGATIVE_DETERMINANTS = ("A R B^-1", "A R B")


def identity_checks(generators: Optional[Mapping[str, Mat2]] = None) -> List[IdentityCheck]:
    gens = dict(STANDARD_MATRICES)
    gens.update(generators or {})
    names = tuple(gens)
    checks = []
    for name, lhs, rhs, negated in _IDENTITIES:
        left = evaluate_relator(parse_relator_word(lhs, names), gens)
        right = evaluate_relator(parse_relator_word(rhs, names), gens)
        if negated:
            right = multiply(NEG_IDENTITY, right)
        checks.append(IdentityCheck(name, left == right))
    for word in _NEGATIVE_DETERMINANTS:
        value = evaluate_relator(parse_relator_word(word, names), gens)
        checks.append(IdentityCheck(f"det({word}) = -1", value.det == -1))
    return checks


def verify_matrix_presentation(generators: Optional[Mapping[str, Mat2]] = None,
                               relators: Optional[Sequence[str]] = None) -> bool:
    """
    Check the GL(2,Z) relators, the R-pushing rules and the square identities
    on concrete matrices; with relators given, check only those relators.
    """
    if relators is not None:
        gens = dict(STANDARD_MATRICES)
        gens.update(generators or {})
        return all(
            evaluate_relator(parse_relator_word(text, tuple(gens)), gens) == IDENTITY
            for text in relators
        )
    return all(check.holds for check in identity_checks(generators))
