#!/usr/bin/env python3
"""
Tests for exact GL(2,Z) arithmetic, decomposition and normal forms
"""

import random
import sys

from torb.errors import DomainError, ParseError
from torb.services.gl2z_core import (
    A, ALL_LETTERS, B, IDENTITY, NEG_IDENTITY, R, T,
    GenWord, Letter, Mat2, NormalForm, PslSyllable,
    decompose, evaluate, exponent_sums, format_matrix, format_word, inverse, lift_psl, matrix_exponent_sums,
    nf_to_matrix, normal_form, parse_matrix, parse_word, psl_inverse, psl_multiply,
    random_word, reduced_psl_words,
)

a, b, b2 = PslSyllable.a, PslSyllable.b, PslSyllable.b2


def test_generator_relations():
    """A^2 = B^3 = -I and T = B^-1 A^-1"""
    assert A @ A == NEG_IDENTITY
    assert B ** 3 == NEG_IDENTITY
    assert A ** 4 == IDENTITY
    assert R @ R == IDENTITY
    assert inverse(B) @ inverse(A) == T
    assert T ** 12 == Mat2(1, 12, 0, 1)
    assert T ** -1 == Mat2(1, -1, 0, 1)
    assert Mat2.identity() == IDENTITY


def test_determinant_validation():
    try:
        Mat2(2, 0, 0, 1)
        assert False, "determinant 2 accepted"
    except DomainError:
        pass
    try:
        parse_matrix("2 0; 0 1")
        assert False, "determinant 2 parsed"
    except ParseError:
        pass
    try:
        parse_matrix("1 1 0 1")
        assert False, "malformed matrix parsed"
    except ParseError:
        pass


def test_text_formats():
    assert parse_matrix("1 1; 0 1") == T
    assert parse_matrix("[[0, -1], [1, 0]]") == A
    assert format_matrix(T) == "1 1; 0 1"
    assert parse_word("B'A'") == GenWord.of(Letter.B_INV, Letter.A_INV)
    assert evaluate(parse_word("B'A'")) == T
    assert parse_word("1") == GenWord()
    assert format_word(GenWord()) == "1"
    assert format_word(parse_word("A B' R")) == "AB'R"
    try:
        parse_word("AX")
        assert False, "unknown letter parsed"
    except ParseError:
        pass


def test_decompose_examples():
    assert decompose(IDENTITY) == GenWord()
    for m in (T, inverse(T), R, NEG_IDENTITY, A, B, Mat2(2, 1, 1, 1), Mat2(5, 3, 3, 2), Mat2(1, 0, 7, -1)):
        word = decompose(m)
        assert evaluate(word) == m, format_matrix(m)
        assert word == word.free_reduce()
        if m.det == 1:
            assert Letter.R not in word.letters
        else:
            assert word.letters[0] is Letter.R
            assert word.letters.count(Letter.R) == 1


def test_decompose_round_trip():
    """10^4 random words of length <= 30"""
    rng = random.Random(20240611)
    for _ in range(10000):
        m = evaluate(random_word(rng.randint(0, 30), rng))
        assert evaluate(decompose(m)) == m


def test_exponent_sums_without_the_word():
    rng = random.Random(77)
    matrices = [IDENTITY, NEG_IDENTITY, A, B, R, T, inverse(T), Mat2(1, 0, 7, -1), Mat2(-1, 4, 0, -1)]
    matrices += [evaluate(random_word(rng.randint(0, 30), rng)) for _ in range(2000)]
    for m in matrices:
        assert matrix_exponent_sums(m) == exponent_sums(decompose(m)), format_matrix(m)

    k = 10 ** 40
    assert matrix_exponent_sums(Mat2(1, k, 0, 1)) == (-k, -k, 0)
    assert matrix_exponent_sums(Mat2(0, 1, 1, k)) == (-k, -k, 1)


def test_word_algebra():
    w = parse_word("AB'R")
    assert (w + w.inverse()).free_reduce() == GenWord()
    assert evaluate(w ** 3) == evaluate(w) ** 3
    assert evaluate(w ** -2) == inverse(evaluate(w)) ** 2


def test_psl_arithmetic():
    assert psl_multiply((a,), (a,)) == ()
    assert psl_multiply((b,), (b,)) == (b2,)
    assert psl_multiply((b,), (b2,)) == ()
    assert psl_multiply((b2,), (b2,)) == (b,)
    assert psl_multiply((a, b), (b2, a)) == ()
    assert psl_inverse((a, b)) == (b2, a)
    assert lift_psl((a, b)) == A @ B
    assert lift_psl((b2,)) == B @ B


def test_reduced_word_enumeration():
    assert list(reduced_psl_words(2)) == [(), (a,), (b,), (b2,), (a, b), (a, b2), (b, a), (b2, a)]
    assert len(list(reduced_psl_words(8))) == 106


def test_normal_form_examples():
    assert normal_form(IDENTITY) == NormalForm(0, 0, ())
    assert normal_form(NEG_IDENTITY) == NormalForm(0, 1, ())
    assert normal_form(A) == NormalForm(0, 0, (a,))
    assert normal_form(B) == NormalForm(0, 0, (b,))
    assert normal_form(R) == NormalForm(1, 0, ())
    assert normal_form(T) == NormalForm(0, 0, (b2, a))
    assert str(normal_form(T)) == "R^0 (-I)^0 [b2 a]"


def test_nf_to_matrix_rejects_unreduced_words():
    try:
        nf_to_matrix(NormalForm(0, 0, (a, a)))
        assert False, "unreduced word accepted"
    except DomainError:
        pass


def test_normal_form_canonical_on_ball():
    """Every matrix of word length <= 8 has a distinct normal form that evaluates back"""
    seen = {IDENTITY}
    frontier = [IDENTITY]
    for _ in range(8):
        next_frontier = []
        for m in frontier:
            for letter in ALL_LETTERS:
                product = m @ letter.matrix
                if product not in seen:
                    seen.add(product)
                    next_frontier.append(product)
        frontier = next_frontier

    forms = {}
    for m in seen:
        nf = normal_form(m)
        assert nf_to_matrix(nf) == m
        assert forms.setdefault(nf, m) == m, f"normal form shared by {format_matrix(m)}"
    assert len(forms) == len(seen)


TESTS = [
    test_generator_relations,
    test_determinant_validation,
    test_text_formats,
    test_decompose_examples,
    test_decompose_round_trip,
    test_exponent_sums_without_the_word,
    test_word_algebra,
    test_psl_arithmetic,
    test_reduced_word_enumeration,
    test_normal_form_examples,
    test_nf_to_matrix_rejects_unreduced_words,
    test_normal_form_canonical_on_ball,
]


def main():
    """Run all tests and print a summary"""
    print("Testing GL(2,Z) core")
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
