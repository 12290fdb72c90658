"""
Constructive witnesses for bounding torus bundles.

SL(2,Z)' is free on p = [A,B] and q = [A,B'], and the projection to
Z2 * Z3 restricts to an isomorphism on derived subgroups. Everything here
works on the projected word and lifts back through that isomorphism.
"""

import random
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from torb.config import Config
from torb.errors import DomainError, SearchInconclusive
from torb.services.debug_logger import DebugLogger
from torb.services.gl2z_core import (
    A, B, IDENTITY, R, T, Letter, GenWord, Mat2, PslSyllable, PslWord,
    alpha_project, evaluate, format_matrix, format_psl, inverse, lift_psl,
    multiply, psl_commutator, psl_inverse, psl_multiply, reduced_psl_words,
)
from torb.services.invariants import (
    boundary_product, bounds_over_nonorientable, bounds_over_orientable, oriented_class,
)


class FreeLetter(Enum):
    p = "p"
    p_inv = "p'"
    q = "q"
    q_inv = "q'"

    @property
    def inverse(self) -> 'FreeLetter':
        return _FREE_INVERSE[self]


_FREE_INVERSE = {
    FreeLetter.p: FreeLetter.p_inv, FreeLetter.p_inv: FreeLetter.p,
    FreeLetter.q: FreeLetter.q_inv, FreeLetter.q_inv: FreeLetter.q,
}

_FREE_SUBSTITUTION = {
    FreeLetter.p: (Letter.A, Letter.B, Letter.A_INV, Letter.B_INV),
    FreeLetter.q: (Letter.A, Letter.B_INV, Letter.A_INV, Letter.B),
}


@dataclass(frozen=True)
class FreeBasisWord:
    """Freely reduced word in p = [A,B] and q = [A,B']"""

    letters: Tuple[FreeLetter, ...] = ()

    def __post_init__(self):
        for left, right in zip(self.letters, self.letters[1:]):
            if left.inverse is right:
                raise DomainError("free basis words must be freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(letter.value for letter in self.letters) if self.letters else "1"


def free_reduce(letters: Sequence[FreeLetter]) -> FreeBasisWord:
    stack: List[FreeLetter] = []
    for letter in letters:
        if stack and stack[-1].inverse is letter:
            stack.pop()
        else:
            stack.append(letter)
    return FreeBasisWord(tuple(stack))


def substitute(w: FreeBasisWord) -> GenWord:
    """p -> ABA'B', q -> AB'A'B"""
    letters: List[Letter] = []
    for letter in w.letters:
        if letter in _FREE_SUBSTITUTION:
            letters.extend(_FREE_SUBSTITUTION[letter])
        else:
            letters.extend(GenWord(_FREE_SUBSTITUTION[letter.inverse]).inverse().letters)
    return GenWord(tuple(letters))


def evaluate_free(w: FreeBasisWord) -> Mat2:
    return evaluate(substitute(w))


def random_free_basis_word(length: int, rng: random.Random) -> FreeBasisWord:
    letters: List[FreeLetter] = []
    choices = list(FreeLetter)
    while len(letters) < length:
        letter = rng.choice(choices)
        if letters and letters[-1].inverse is letter:
            continue
        letters.append(letter)
    return FreeBasisWord(tuple(letters))


def _require_derived(m: Mat2):
    if m.det != 1 or not oriented_class(m).is_zero():
        raise DomainError(f"not in the derived subgroup: {format_matrix(m)}")


# Schreier generators t.a.rep(ta)^-1 over the transversal {1, a, b, b2, ab, ab2},
# indexed by the coset (a-parity, b-exponent) of t; every t.b.rep(tb)^-1 is trivial.
_SCHREIER_A = {
    (0, 1): FreeLetter.p_inv,
    (0, 2): FreeLetter.q_inv,
    (1, 1): FreeLetter.p,
    (1, 2): FreeLetter.q,
}


def _rewrite_psl(w: Sequence[PslSyllable]) -> FreeBasisWord:
    parity, exponent = 0, 0
    out: List[FreeLetter] = []
    for syllable in w:
        if syllable is PslSyllable.a:
            letter = _SCHREIER_A.get((parity, exponent))
            if letter is not None:
                out.append(letter)
            parity ^= 1
        else:
            exponent = (exponent + (1 if syllable is PslSyllable.b else 2)) % 3
    if (parity, exponent) != (0, 0):
        raise DomainError(f"not in the derived subgroup: {format_psl(w)}")
    return free_reduce(out)


def rewrite_in_free_basis(m: Mat2) -> FreeBasisWord:
    _require_derived(m)
    _, w = alpha_project(m)
    word = _rewrite_psl(w)
    if evaluate_free(word) != m:
        raise RuntimeError(f"free basis rewriting does not evaluate back to {format_matrix(m)}")
    return word


def commutator(x: Mat2, y: Mat2) -> Mat2:
    return multiply(multiply(x, y), multiply(inverse(x), inverse(y)))


@dataclass(frozen=True)
class CommutatorWitness:
    pairs: Tuple[Tuple[Mat2, Mat2], ...] = ()

    def __post_init__(self):
        for x, y in self.pairs:
            if x.det != 1 or y.det != 1:
                raise DomainError("commutator witness entries must have determinant +1")

    @property
    def genus(self) -> int:
        return len(self.pairs)

    def product(self) -> Mat2:
        return reduce(lambda acc, pair: multiply(acc, commutator(*pair)), self.pairs, IDENTITY)


@dataclass(frozen=True)
class SquareWitness:
    bases: Tuple[Mat2, ...] = ()

    def __post_init__(self):
        if any(base.det != -1 for base in self.bases):
            raise DomainError("square witness bases must have determinant -1")

    def product(self) -> Mat2:
        return reduce(lambda acc, base: multiply(acc, multiply(base, base)), self.bases, IDENTITY)


_B_INV = inverse(B)

# p^-1 = [B,A] and q^-1 = [B',A] keep every pair a literal commutator
_COMMUTATOR_PAIRS = {
    FreeLetter.p: (A, B),
    FreeLetter.p_inv: (B, A),
    FreeLetter.q: (A, _B_INV),
    FreeLetter.q_inv: (_B_INV, A),
}

# [A,B] = (ARB')^2 and [A,B'] = (ARB)^2
_P_BASE = multiply(multiply(A, R), _B_INV)
_Q_BASE = multiply(multiply(A, R), B)
_SQUARE_BASES = {
    FreeLetter.p: _P_BASE,
    FreeLetter.p_inv: inverse(_P_BASE),
    FreeLetter.q: _Q_BASE,
    FreeLetter.q_inv: inverse(_Q_BASE),
}


def commutator_witness(m: Mat2) -> CommutatorWitness:
    """One commutator per free basis letter; an upper bound on the genus"""
    word = rewrite_in_free_basis(m)
    return CommutatorWitness(tuple(_COMMUTATOR_PAIRS[letter] for letter in word.letters))


def square_witness(m: Mat2) -> SquareWitness:
    """One square of a determinant -1 matrix per free basis letter"""
    word = rewrite_in_free_basis(m)
    return SquareWitness(tuple(_SQUARE_BASES[letter] for letter in word.letters))


class SearchBudget:
    """Counts visited search nodes and stops the search at the limit"""

    def __init__(self, limit: Optional[int] = None, upper_bound: Optional[int] = None):
        self.limit = limit if limit is not None else Config.genus_budget()
        self.upper_bound = upper_bound
        self.nodes = 0

    def spend(self, count: int = 1):
        self.nodes += count
        if self.nodes > self.limit:
            raise SearchInconclusive(f"search budget of {self.limit} nodes exhausted",
                                     nodes=self.nodes, upper_bound=self.upper_bound)


def cyclic_reduce(w: PslWord) -> Tuple[PslWord, PslWord]:
    """Return (c, core) with w = c core c^-1 and core cyclically reduced"""
    conjugator: PslWord = ()
    core = w
    while len(core) >= 2 and core[0].factor == core[-1].factor:
        first = core[0]
        core = psl_multiply(core[1:], (first,))
        conjugator = psl_multiply(conjugator, (first,))
    return conjugator, core


def find_conjugator(u: PslWord, v: PslWord) -> Optional[PslWord]:
    """Some y with y u y^-1 = v in Z2 * Z3, or None"""
    cu, u0 = cyclic_reduce(u)
    cv, v0 = cyclic_reduce(v)
    if len(u0) != len(v0):
        return None
    if len(u0) <= 1:
        # the factors are abelian
        if u0 != v0:
            return None
        z: PslWord = ()
    else:
        for k in range(len(u0)):
            if u0[k:] + u0[:k] == v0:
                z = psl_inverse(u0[:k])
                break
        else:
            return None
    return psl_multiply(psl_multiply(cv, z), psl_inverse(cu))


def _conjugate(c: PslWord, x: PslWord) -> PslWord:
    return psl_multiply(psl_multiply(c, x), psl_inverse(c))


def _genus_one(w: PslWord, budget: SearchBudget) -> Optional[Tuple[PslWord, PslWord]]:
    """Exact decision whether w is a single commutator in Z2 * Z3"""
    if not w:
        return (), ()
    c, core = cyclic_reduce(w)
    bound = len(core) + 2
    tried = set()
    # every rotation of a cyclically reduced word is reduced and conjugate to it
    for k in range(len(core)):
        prefix, rotated = core[:k], core[k:] + core[:k]
        if rotated in tried:
            continue
        tried.add(rotated)
        for target, swapped in ((rotated, False), (psl_inverse(rotated), True)):
            for x in reduced_psl_words(bound):
                budget.spend()
                x_inv = psl_inverse(x)
                y = find_conjugator(x_inv, psl_multiply(x_inv, target))
                if y is None:
                    continue
                if swapped:
                    x, y = y, x
                s = psl_multiply(c, prefix)
                return _conjugate(s, x), _conjugate(s, y)
    return None


def _lift_pairs(pairs: Sequence[Tuple[PslWord, PslWord]], m: Mat2) -> CommutatorWitness:
    witness = CommutatorWitness(tuple((lift_psl(x), lift_psl(y)) for x, y in pairs))
    if witness.product() != m:
        raise RuntimeError(f"lifted commutators do not evaluate back to {format_matrix(m)}")
    return witness


def commutator_solution(m: Mat2, budget: Optional[SearchBudget] = None) -> Optional[Tuple[Mat2, Mat2]]:
    """A pair (x, y) in SL(2,Z) with [x, y] = m, or None when m is not a commutator"""
    _require_derived(m)
    budget = budget or SearchBudget()
    _, w = alpha_project(m)
    try:
        solution = _genus_one(w, budget)
    except SearchInconclusive as e:
        if e.upper_bound is not None:
            raise
        raise SearchInconclusive(str(e), nodes=e.nodes, upper_bound=len(rewrite_in_free_basis(m))) from e
    DebugLogger.log_search("genus 1", "found" if solution else "excluded", {
        "matrix": format_matrix(m),
        "nodes": budget.nodes
    })
    if solution is None:
        return None
    return _lift_pairs([solution], m).pairs[0]


def is_commutator(m: Mat2, budget: Optional[SearchBudget] = None) -> bool:
    return commutator_solution(m, budget) is not None


@dataclass(frozen=True)
class GenusResult:
    """
    Outcome of a bounded genus search.

    genus is the least genus found (None when nothing was found up to g_max);
    conclusive means it is proven minimal; lower_bound is a proven lower bound.
    """

    genus: Optional[int]
    witness: Optional[CommutatorWitness]
    conclusive: bool
    lower_bound: int
    upper_bound: int
    nodes: int


class _GenusSearch:

    def __init__(self, pair_length: int):
        self.pair_words = [w for w in reduced_psl_words(pair_length) if w]
        self.cache: Dict[Tuple[PslWord, int], Optional[List[Tuple[PslWord, PslWord]]]] = {}

    def search(self, w: PslWord, g: int, budget: SearchBudget) -> Optional[List[Tuple[PslWord, PslWord]]]:
        key = (w, g)
        if key in self.cache:
            return self.cache[key]
        if g == 1:
            solution = _genus_one(w, budget)
            result = [solution] if solution is not None else None
        else:
            result = self._search_pairs(w, g, budget)
        self.cache[key] = result
        return result

    def _search_pairs(self, w, g, budget):
        for x in self.pair_words:
            for y in self.pair_words:
                c = psl_commutator(x, y)
                if not c:
                    continue
                budget.spend()
                tail = self.search(psl_multiply(psl_inverse(c), w), g - 1, budget)
                if tail is not None:
                    return [(x, y)] + tail
        return None


def genus_search(m: Mat2, g_max: int, budget_limit: Optional[int] = None,
                 pair_length: Optional[int] = None) -> GenusResult:
    """
    Least g <= g_max with m a product of g commutators.

    Genus 0 and 1 are decided exactly. Levels g >= 2 try first commutators
    [x, y] with x, y of at most pair_length syllables, which proves an upper
    bound only; such a level is conclusive when genus 1 was excluded exactly
    or when it meets the free basis upper bound. A level equal to the free
    basis length returns that word's witness without searching.
    """
    if g_max < 1:
        raise DomainError("g_max must be a positive integer")
    _require_derived(m)
    start_time = time.perf_counter()
    limit = budget_limit if budget_limit is not None else Config.genus_budget()
    pair_length = pair_length if pair_length is not None else Config.genus_pair_length()

    _, w = alpha_project(m)
    upper = len(rewrite_in_free_basis(m))
    if not w:
        return GenusResult(0, CommutatorWitness(), True, 0, 0, 0)

    searcher = _GenusSearch(pair_length)
    nodes = 0
    lower = 1
    result: Optional[GenusResult] = None

    for g in range(1, g_max + 1):
        if g == upper:
            # the free basis word already is a product of g commutators
            result = GenusResult(g, commutator_witness(m), lower == g, lower, upper, nodes)
            break
        budget = SearchBudget(limit, upper_bound=upper)
        try:
            found = searcher.search(w, g, budget)
        except SearchInconclusive:
            DebugLogger.log_search(f"genus {g}", "budget exhausted", {"nodes": budget.nodes, "upper_bound": upper})
            found = None
            exhausted = True
        else:
            exhausted = False
        nodes += budget.nodes
        if found is not None:
            witness = _lift_pairs(found, m)
            result = GenusResult(g, witness, lower == g, lower, min(upper, g), nodes)
            break
        # only the genus 1 level is an exact decision
        if g == 1 and not exhausted and lower == 1:
            lower = 2

    if result is None:
        result = GenusResult(None, None, False, lower, upper, nodes)

    DebugLogger.log_performance("Genus search", time.perf_counter() - start_time, {
        "matrix": format_matrix(m),
        "genus": result.genus,
        "conclusive": result.conclusive,
        "nodes": result.nodes
    })
    return result


@dataclass(frozen=True)
class SurfaceBundleDesc:
    """
    T^2-bundle over a compact surface with boundary.

    Orientable base: handle_images holds the images of the handle pairs and
    prod [x_i, y_i] * prod d_j = I. Non-orientable base: crosscap_images holds
    the images of the crosscap loops and prod a_i^2 * prod d_j = I.
    """

    base_orientable: bool
    genus_or_crosscaps: int
    boundary_count: int
    boundary_monodromies: Tuple[Mat2, ...]
    handle_images: Tuple[Tuple[Mat2, Mat2], ...] = ()
    crosscap_images: Tuple[Mat2, ...] = ()
    total_space_orientable: bool = field(default=False)

    def relation_product(self) -> Mat2:
        if self.base_orientable:
            handles = reduce(lambda acc, pair: multiply(acc, commutator(*pair)), self.handle_images, IDENTITY)
        else:
            handles = reduce(lambda acc, a: multiply(acc, multiply(a, a)), self.crosscap_images, IDENTITY)
        return multiply(handles, boundary_product(self.boundary_monodromies))


def _total_space_orientable(d: SurfaceBundleDesc) -> bool:
    if any(m.det != 1 for m in d.boundary_monodromies):
        return False
    if d.base_orientable:
        return all(x.det == 1 and y.det == 1 for x, y in d.handle_images)
    return all(a.det == -1 for a in d.crosscap_images)


def _class_correction(target: Mat2, base_orientable: bool):
    # target lies in G' = {s in SL(2,Z) : class(s) even}
    half = oriented_class(target).value // 2
    if base_orientable:
        # class([T,R]) = 2 and class([R,T]) = -2
        if half <= 3:
            return [(T, R)] * half
        return [(R, T)] * (6 - half)
    # class(T^2) = 2
    if half <= 3:
        return [T] * half
    return [inverse(T)] * (6 - half)


def build_cobordism(ms: Sequence[Mat2], base_orientable: bool = True) -> SurfaceBundleDesc:
    """Describe a 4-dimensional torus bundle over a surface whose boundary is the union of the M_phi"""
    ms = list(ms)
    bounds = bounds_over_orientable(ms) if base_orientable else bounds_over_nonorientable(ms)
    if not bounds:
        raise DomainError("boundary does not bound")

    # an empty boundary is closed off by D^2 x T^2
    boundary = tuple(ms) if ms else (IDENTITY,)
    target = inverse(boundary_product(boundary))
    correction = _class_correction(target, base_orientable)

    if base_orientable:
        corrected = reduce(lambda acc, pair: multiply(acc, commutator(*pair)), correction, IDENTITY)
        witness = commutator_witness(multiply(inverse(corrected), target))
        handles = tuple(correction) + witness.pairs
        desc = SurfaceBundleDesc(True, len(handles), len(boundary), boundary, handle_images=handles)
    else:
        corrected = reduce(lambda acc, a: multiply(acc, multiply(a, a)), correction, IDENTITY)
        squares = square_witness(multiply(inverse(corrected), target))
        crosscaps = tuple(correction) + squares.bases
        if not crosscaps:
            crosscaps = (R,)
        desc = SurfaceBundleDesc(False, len(crosscaps), len(boundary), boundary, crosscap_images=crosscaps)

    desc = SurfaceBundleDesc(
        desc.base_orientable, desc.genus_or_crosscaps, desc.boundary_count, desc.boundary_monodromies,
        desc.handle_images, desc.crosscap_images, _total_space_orientable(desc),
    )
    if not verify_cobordism(desc):
        raise RuntimeError("constructed surface bundle fails its surface relation")

    DebugLogger.log_debug("Cobordism built", {
        "base_orientable": base_orientable,
        "genus_or_crosscaps": desc.genus_or_crosscaps,
        "boundary_count": desc.boundary_count,
        "total_space_orientable": desc.total_space_orientable
    })
    return desc


def verify_cobordism(d: SurfaceBundleDesc) -> bool:
    try:
        if d.boundary_count != len(d.boundary_monodromies):
            return False
        if d.base_orientable:
            if d.crosscap_images or d.genus_or_crosscaps != len(d.handle_images):
                return False
        else:
            if d.handle_images or not d.crosscap_images or d.genus_or_crosscaps != len(d.crosscap_images):
                return False
        if d.relation_product() != IDENTITY:
            return False
        return d.total_space_orientable == _total_space_orientable(d)
    except (TypeError, AttributeError, ValueError) as e:
        DebugLogger.log_warning("Malformed surface bundle description", {"error": str(e)})
        return False
