#!/usr/bin/env python3
"""
Tests for presentation parsing, Smith normal form and the matrix presentation checks
"""

import random
import sys

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors

from torb.errors import DomainError, ParseError
from torb.services.gl2z_core import ALL_LETTERS, IDENTITY, T, Mat2, exponent_sums, decompose
from torb.services.invariants import unoriented_class
from torb.services.presentations import (
    GL2Z, GL2Z_MOD_SQUARES, SL2Z, AbelianInvariants, Presentation,
    STANDARD_MATRICES, abelian_image, abelian_invariants, evaluate_relator, identity_checks,
    parse_presentation, parse_relator_word, relator_matrix, smith_normal_form, verify_matrix_presentation,
)


def test_relator_matrices():
    assert relator_matrix(SL2Z) == [[2, -3], [4, 0]]
    assert relator_matrix(GL2Z) == [[2, -3, 0], [4, 0, 0], [0, 0, 2], [2, 0, 2], [0, 2, 2]]
    empty = parse_presentation("gens: A; rels:")
    assert empty.generator_names == ("A",)
    assert relator_matrix(empty) == []


def test_parser_features():
    gens = ("A", "B", "R")
    assert parse_relator_word("(RA)^2", gens) == parse_relator_word("(R A)^2", gens)
    assert parse_relator_word("A' B^-1", gens) == (("A", -1), ("B", -1))
    assert parse_relator_word("1", gens) == ()
    assert parse_relator_word("A A A^-2", gens) == ()
    chained = parse_presentation("gens: A B; rels: A^4=B^6=1")
    assert chained.relators == ((("A", 4),), (("B", 6),))
    assert parse_presentation("gens: A B; rels: A^2=B^3").relators == ((("A", 2), ("B", -3)),)


def test_parser_errors():
    for text in ("gens A B", "gens: A; rels: C^2", "gens: A; rels: (A^2", "gens: A A; rels:", "gens: A; rels: A^x"):
        try:
            parse_presentation(text)
            assert False, f"parsed {text!r}"
        except ParseError:
            pass
    try:
        Presentation(("A",), ((("B", 1),),))
        assert False, "undeclared generator accepted"
    except DomainError:
        pass


def test_smith_normal_form_examples():
    cases = [
        ([[2, 0], [0, 3]], (1, 6)),
        ([[2, -3], [4, 0]], (1, 12)),
        ([[0, 0], [0, 0]], (0, 0)),
    ]
    for matrix, diagonal in cases:
        snf = smith_normal_form(matrix)
        assert snf.diagonal == diagonal, (matrix, snf.diagonal)
        assert snf.check(matrix)
    assert smith_normal_form([], columns=1).diagonal == ()


def test_smith_normal_form_random_matrices():
    rng = random.Random(5)
    for _ in range(100):
        rows, columns = rng.randint(1, 5), rng.randint(1, 5)
        matrix = [[rng.randint(-9, 9) for _ in range(columns)] for _ in range(rows)]
        snf = smith_normal_form(matrix)
        assert snf.check(matrix), matrix
        shuffled = matrix[:]
        rng.shuffle(shuffled)
        assert smith_normal_form(shuffled).diagonal == snf.diagonal


def test_invariant_factor_product_matches_determinant():
    matrix = relator_matrix(SL2Z)
    diagonal = smith_normal_form(matrix).diagonal
    assert diagonal[0] * diagonal[1] == abs(Matrix(matrix).det()) == 12


def test_smith_diagonal_matches_sympy_invariant_factors():
    rng = random.Random(11)
    matrices = [relator_matrix(SL2Z), relator_matrix(GL2Z)]
    matrices += [[[rng.randint(-20, 20) for _ in range(3)] for _ in range(rng.randint(1, 4))] for _ in range(40)]
    for matrix in matrices:
        ours = [d for d in smith_normal_form(matrix).diagonal if d]
        theirs = [int(f) for f in invariant_factors(Matrix(matrix), domain=ZZ) if f]
        assert ours == [abs(f) for f in theirs], matrix


def test_relators_vanish():
    """3 e_A + 2 e_B vanishes mod 12 on the SL(2,Z) relators, both parities on the GL(2,Z) ones"""
    for relator in SL2Z.relators:
        sums = dict.fromkeys(SL2Z.generator_names, 0)
        for name, exponent in relator:
            sums[name] += exponent
        assert (3 * sums['A'] + 2 * sums['B']) % 12 == 0, relator
    assert len(GL2Z.relators) == 5
    for relator in GL2Z.relators:
        sums = dict.fromkeys(GL2Z.generator_names, 0)
        for name, exponent in relator:
            sums[name] += exponent
        assert sums['A'] % 2 == 0 and sums['R'] % 2 == 0, relator
        assert unoriented_class(evaluate_relator(relator, STANDARD_MATRICES)).is_zero()


def test_abelian_invariants():
    sl = abelian_invariants(SL2Z)
    assert sl.factors == (1, 12)
    assert sl.display == (12,)
    assert str(sl) == "Z12"

    gl = abelian_invariants(GL2Z)
    assert gl.display == (2, 2)
    assert str(gl) == "Z2 + Z2"
    assert abelian_invariants(GL2Z_MOD_SQUARES).display == (2, 2)
    assert abelian_invariants(GL2Z, "A^2, B^2, R^2").display == (2, 2)

    assert str(abelian_invariants(parse_presentation("gens: A; rels:"))) == "Z"
    assert str(AbelianInvariants((1, 1))) == "0"


def test_abelian_image():
    sl_exponents = exponent_sums(decompose(T))[:2]
    assert abelian_image(SL2Z, sl_exponents) != (0,)
    assert abelian_image(SL2Z, exponent_sums(decompose(T ** 12))[:2]) == (0,)
    try:
        abelian_image(SL2Z, (1, 2, 3))
        assert False, "wrong vector length accepted"
    except DomainError:
        pass


def test_squares_equal_derived_subgroup_on_ball():
    """unoriented_class = 0 agrees with a trivial GL(2,Z) abelianization image, words of length <= 10"""
    images = {letter: abelian_image(GL2Z, exponent_sums([letter])) for letter in ALL_LETTERS}
    factors = abelian_invariants(GL2Z).display
    zero = tuple(0 for _ in factors)

    seen = {(IDENTITY, zero)}
    frontier = list(seen)
    for _ in range(10):
        next_frontier = []
        for m, image in frontier:
            for letter in ALL_LETTERS:
                state = (m @ letter.matrix,
                         tuple((x + y) % f for x, y, f in zip(image, images[letter], factors)))
                if state not in seen:
                    seen.add(state)
                    next_frontier.append(state)
        frontier = next_frontier

    for m, image in seen:
        assert unoriented_class(m).is_zero() == (image == zero)


def test_verify_matrix_presentation():
    assert verify_matrix_presentation()
    assert all(check.holds for check in identity_checks())
    names = [check.name for check in identity_checks()]
    assert "[A,B^-1] = (A R B)^2" in names
    assert "(B^-1 R B)^2 = I" in names
    assert not verify_matrix_presentation({'A': Mat2(0, -1, 1, 1)})
    assert verify_matrix_presentation(relators=["A^4"])
    assert not verify_matrix_presentation(relators=["A^2"])


TESTS = [
    test_relator_matrices,
    test_parser_features,
    test_parser_errors,
    test_smith_normal_form_examples,
    test_smith_normal_form_random_matrices,
    test_invariant_factor_product_matches_determinant,
    test_smith_diagonal_matches_sympy_invariant_factors,
    test_relators_vanish,
    test_abelian_invariants,
    test_abelian_image,
    test_squares_equal_derived_subgroup_on_ball,
    test_verify_matrix_presentation,
]


def main():
    """Run all tests and print a summary"""
    print("Testing presentations")
    print("=" * 30)

    passed = 0
    for test in TESTS:
        try:
            test()
            print(f"✅ {test.__name__}")
            passed += 1
        except Exception as e:
            print(f"❌ {test.__name__}: {e}")

    print(f"\nTest Results: {passed}/{len(TESTS)} tests passed")
    return 0 if passed == len(TESTS) else 1


if __name__ == "__main__":
    sys.exit(main())
