"""
Result records shared by the command line and the HTTP API.

Every record renders as text lines or as JSON. In JSON all integers are
decimal strings, so matrices and classes survive any consumer exactly.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from torb.errors import DomainError, ParseError, SearchInconclusive
from torb.services.gl2z_core import Mat2, decompose, format_matrix, format_word, normal_form, parse_matrix
from torb.services.invariants import (
    TorusBundle, amphichiral, bounds_over_nonorientable, bounds_over_orientable, cobordant_oriented,
    cobordant_unoriented, oriented_class, unoriented_class,
)
from torb.services.presentations import (
    GL2Z, GL2Z_MOD_SQUARES, SL2Z, abelian_invariants, identity_checks,
)
from torb.services.rewriting import (
    CommutatorWitness, SquareWitness, SurfaceBundleDesc, build_cobordism, commutator_witness,
    genus_search, rewrite_in_free_basis, square_witness, verify_cobordism,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_PARSE = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class OutputRecord:
    command: str
    data: Dict[str, Any] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def to_json(self) -> Dict[str, Any]:
        return {"command": self.command, **self.data}

    def render(self, as_json: bool = False) -> str:
        if as_json:
            return json.dumps(self.to_json(), indent=2)
        return "\n".join(self.lines)


def error_record(command: str, error: Exception, exit_code: int) -> OutputRecord:
    data = {"error": str(error)}
    lines = [f"error: {error}"]
    if isinstance(error, SearchInconclusive):
        data["nodes"] = str(error.nodes)
        if error.upper_bound is not None:
            data["upper_bound"] = str(error.upper_bound)
            lines.append(f"upper bound: {error.upper_bound}")
    return OutputRecord(command, data, lines, exit_code)


def matrix_to_json(m: Mat2) -> List[List[str]]:
    return [[str(m.a), str(m.b)], [str(m.c), str(m.d)]]


def matrix_from_json(value: Any) -> Mat2:
    """Accept [["a","b"],["c","d"]] (strings or integers) or the text form "a b; c d" """
    if isinstance(value, str):
        return parse_matrix(value)
    try:
        (a, b), (c, d) = value
        entries = [int(entry) for entry in (a, b, c, d)]
    except (TypeError, ValueError):
        raise ParseError(f"expected a 2x2 matrix, got {value!r}")
    try:
        return Mat2(*entries)
    except DomainError as e:
        raise ParseError(f"{e} in {value!r}")


def _field(payload: Dict[str, Any], name: str) -> Any:
    if name not in payload:
        raise ParseError(f"record is missing the field {name!r}")
    return payload[name]


def class_record(m: Mat2, oriented: bool = True) -> OutputRecord:
    if oriented:
        value = oriented_class(m)
        return OutputRecord("class", {
            "matrix": matrix_to_json(m),
            "oriented": True,
            "class": str(value.value),
            "modulus": "12",
        }, [f"class = {value.value} (mod 12)"])
    value = unoriented_class(m)
    return OutputRecord("class", {
        "matrix": matrix_to_json(m),
        "oriented": False,
        "class": [str(value.u), str(value.v)],
    }, [f"class = {value}"])


def amphichiral_record(m: Mat2) -> OutputRecord:
    result = amphichiral(m)
    return OutputRecord("amphichiral", {
        "matrix": matrix_to_json(m),
        "class": str(oriented_class(m).value),
        "amphichiral": result,
    }, [f"amphichiral: {str(result).lower()}"])


def cobordant_record(x: Mat2, y: Mat2, oriented: bool = True) -> OutputRecord:
    if oriented:
        result = cobordant_oriented(TorusBundle(x), TorusBundle(y))
    else:
        result = cobordant_unoriented(TorusBundle(x, oriented=False), TorusBundle(y, oriented=False))
    return OutputRecord("cobordant", {
        "matrices": [matrix_to_json(x), matrix_to_json(y)],
        "oriented": oriented,
        "cobordant": result,
    }, [f"cobordant: {str(result).lower()}"])


def decompose_record(m: Mat2) -> OutputRecord:
    word = decompose(m)
    return OutputRecord("decompose", {
        "matrix": matrix_to_json(m),
        "word": format_word(word),
        "length": str(len(word)),
    }, [f"word = {format_word(word)}"])


def normal_form_record(m: Mat2) -> OutputRecord:
    nf = normal_form(m)
    return OutputRecord("normal-form", {
        "matrix": matrix_to_json(m),
        "r_flag": str(nf.r_flag),
        "sign": str(nf.sign),
        "psl": [s.value for s in nf.psl],
    }, [f"normal form = {nf}"])


def witness_record(m: Mat2, kind: str = "commutators") -> OutputRecord:
    word = rewrite_in_free_basis(m)
    data: Dict[str, Any] = {
        "matrix": matrix_to_json(m),
        "kind": kind,
        "free_basis_word": str(word),
    }
    lines = [f"free basis word = {word}"]
    if kind == "commutators":
        witness = commutator_witness(m)
        data["pairs"] = [[matrix_to_json(x), matrix_to_json(y)] for x, y in witness.pairs]
        lines.extend(f"[{format_matrix(x)} , {format_matrix(y)}]" for x, y in witness.pairs)
    elif kind == "squares":
        witness = square_witness(m)
        data["bases"] = [matrix_to_json(base) for base in witness.bases]
        lines.extend(f"({format_matrix(base)})^2" for base in witness.bases)
    else:
        raise ParseError(f"unknown witness kind {kind!r}")
    return OutputRecord("witness", data, lines)


def genus_record(m: Mat2, g_max: int, budget: Optional[int] = None,
                 pair_length: Optional[int] = None) -> OutputRecord:
    result = genus_search(m, g_max, budget, pair_length)
    data: Dict[str, Any] = {
        "matrix": matrix_to_json(m),
        "g_max": str(g_max),
        "genus": None if result.genus is None else str(result.genus),
        "conclusive": result.conclusive,
        "lower_bound": str(result.lower_bound),
        "upper_bound": str(result.upper_bound),
        "nodes": str(result.nodes),
    }
    if result.witness is not None:
        data["pairs"] = [[matrix_to_json(x), matrix_to_json(y)] for x, y in result.witness.pairs]

    if result.genus is None:
        lines = [f"genus: inconclusive (between {result.lower_bound} and {result.upper_bound}, none found up to {g_max})"]
    elif result.conclusive:
        lines = [f"genus = {result.genus}"]
    else:
        lines = [f"genus <= {result.genus} (inconclusive, lower bound {result.lower_bound})"]
    if result.witness is not None:
        lines.extend(f"[{format_matrix(x)} , {format_matrix(y)}]" for x, y in result.witness.pairs)
    return OutputRecord("genus", data, lines, EXIT_OK if result.conclusive else EXIT_INCONCLUSIVE)


def bound_record(ms: Sequence[Mat2], orientable: bool = True) -> OutputRecord:
    result = bounds_over_orientable(ms) if orientable else bounds_over_nonorientable(ms)
    return OutputRecord("bound", {
        "matrices": [matrix_to_json(m) for m in ms],
        "orientable": orientable,
        "bounds": result,
    }, [f"bounds: {str(result).lower()}"])


def cobordism_to_json(d: SurfaceBundleDesc) -> Dict[str, Any]:
    return {
        "base_orientable": d.base_orientable,
        "genus_or_crosscaps": str(d.genus_or_crosscaps),
        "boundary_count": str(d.boundary_count),
        "boundary_monodromies": [matrix_to_json(m) for m in d.boundary_monodromies],
        "handle_images": [[matrix_to_json(x), matrix_to_json(y)] for x, y in d.handle_images],
        "crosscap_images": [matrix_to_json(a) for a in d.crosscap_images],
        "total_space_orientable": d.total_space_orientable,
    }


def cobordism_from_json(payload: Dict[str, Any]) -> SurfaceBundleDesc:
    try:
        return SurfaceBundleDesc(
            base_orientable=bool(_field(payload, "base_orientable")),
            genus_or_crosscaps=int(_field(payload, "genus_or_crosscaps")),
            boundary_count=int(_field(payload, "boundary_count")),
            boundary_monodromies=tuple(matrix_from_json(m) for m in _field(payload, "boundary_monodromies")),
            handle_images=tuple(
                (matrix_from_json(x), matrix_from_json(y)) for x, y in payload.get("handle_images", [])
            ),
            crosscap_images=tuple(matrix_from_json(a) for a in payload.get("crosscap_images", [])),
            total_space_orientable=bool(payload.get("total_space_orientable", False)),
        )
    except ParseError:
        raise
    except (TypeError, ValueError) as e:
        raise ParseError(f"malformed surface bundle record: {e}")


def cobordism_record(ms: Sequence[Mat2], base_orientable: bool = True) -> OutputRecord:
    desc = build_cobordism(ms, base_orientable)
    data = cobordism_to_json(desc)
    data["verified"] = verify_cobordism(desc)
    noun = "genus" if desc.base_orientable else "crosscaps"
    lines = [
        f"base: {'orientable' if desc.base_orientable else 'non-orientable'}, {noun} {desc.genus_or_crosscaps}, "
        f"{desc.boundary_count} boundary component(s)",
        f"total space orientable: {str(desc.total_space_orientable).lower()}",
    ]
    lines.extend(f"handle [{format_matrix(x)} , {format_matrix(y)}]" for x, y in desc.handle_images)
    lines.extend(f"crosscap {format_matrix(a)}" for a in desc.crosscap_images)
    lines.extend(f"boundary {format_matrix(m)}" for m in desc.boundary_monodromies)
    lines.append(f"verified: {str(data['verified']).lower()}")
    return OutputRecord("build-cobordism", data, lines)


# (label, presentation, expected display factors)
_QUOTIENTS = (
    ("SL(2,Z) abelianization = Z12", SL2Z, (12,)),
    ("GL(2,Z) / squares = Z2 + Z2", GL2Z_MOD_SQUARES, (2, 2)),
    ("GL(2,Z) abelianization = Z2 + Z2", GL2Z, (2, 2)),
)


def verify_record() -> OutputRecord:
    checks = []
    for check in identity_checks():
        checks.append({"name": check.name, "passed": check.holds})
    for label, presentation, expected in _QUOTIENTS:
        invariants = abelian_invariants(presentation)
        checks.append({
            "name": label,
            "passed": invariants.display == expected,
            "factors": [str(f) for f in invariants.factors],
        })
    passed = all(check["passed"] for check in checks)
    lines = [f"{'PASS' if check['passed'] else 'FAIL'}  {check['name']}" for check in checks]
    lines.append(f"verify: {'PASS' if passed else 'FAIL'}")
    return OutputRecord("verify", {"checks": checks, "passed": passed}, lines,
                        EXIT_OK if passed else EXIT_DOMAIN)


def _witness_valid(payload: Dict[str, Any]) -> bool:
    target = matrix_from_json(_field(payload, "matrix"))
    kind = _field(payload, "kind")
    try:
        if kind == "commutators":
            pairs = tuple((matrix_from_json(x), matrix_from_json(y)) for x, y in _field(payload, "pairs"))
            return CommutatorWitness(pairs).product() == target
        if kind == "squares":
            bases = tuple(matrix_from_json(base) for base in _field(payload, "bases"))
            return SquareWitness(bases).product() == target
    except DomainError:
        return False
    raise ParseError(f"unknown witness kind {kind!r}")


def check_record(payload: Any) -> OutputRecord:
    """Re-evaluate a witness, genus or build-cobordism JSON record"""
    if not isinstance(payload, dict):
        raise ParseError("expected a JSON object")
    command = _field(payload, "command")
    if command == "witness":
        valid = _witness_valid(payload)
    elif command == "genus":
        pairs = payload.get("pairs")
        if pairs is None:
            raise ParseError("genus record carries no witness")
        valid = _witness_valid({**payload, "kind": "commutators", "pairs": pairs})
    elif command == "build-cobordism":
        valid = verify_cobordism(cobordism_from_json(payload))
    else:
        raise ParseError(f"cannot check a {command!r} record")
    return OutputRecord("check", {"checked": command, "valid": valid},
                        [f"valid: {str(valid).lower()}"], EXIT_OK if valid else EXIT_DOMAIN)
