"""JSON encodings of scalars, matrices, subspaces, frames, test sets and certificates.

Scalars travel as their canonical strings (``"3/4"``, ``"1-2i"``), matrices as
arrays of rows of scalar strings, subspaces as
``{"ambient": d, "field": "Q", "basis": [[...]]}`` and elements of a product
lattice as ``{"factors": [subspace, ...]}``.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from molq.frames import Frame
from molq.lattice import Subspace
from molq.limit import LimitElement, delta
from molq.linalg import Matrix
from molq.parser import parse
from molq.scalars import Field
from molq.terms import to_text
from molq.testset import RefutationCertificate, SearchOutcome, TestSet


def _infer_field(rows: List[List[Any]]) -> Field:
    if any(isinstance(x, str) and "i" in x for row in rows for x in row):
        return Field.GAUSSIAN
    return Field.RATIONAL


def encode_matrix(m: Matrix) -> List[List[str]]:
    return m.to_lists()


def decode_matrix(data: Any, field: Optional[Field] = None, cols: Optional[int] = None) -> Matrix:
    """Matrix from an array of rows; the field is Q(i) when any entry mentions i."""
    if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
        raise ValueError("Matrix JSON must be an array of rows")
    field = field or _infer_field(data)
    return Matrix.from_rows(field, [[str(x) for x in row] for row in data], cols=cols)


def describe(u: Subspace) -> str:
    """Short text form: 0, 1 or the span of the canonical basis."""
    if u.is_full and not u.is_zero:
        return "1"
    return str(u)


def encode_subspace(u: Subspace) -> Dict[str, Any]:
    return {"ambient": u.ambient, "field": u.field.value, "basis": u.basis.to_lists()}


def decode_subspace_checked(data: Mapping[str, Any]) -> Tuple[Subspace, bool]:
    """Subspace from JSON plus whether the given basis had to be canonicalized."""
    try:
        ambient = int(data["ambient"])
        basis = data.get("basis", [])
    except (KeyError, TypeError) as e:
        raise ValueError(f"Subspace JSON needs 'ambient' and 'basis': {e}") from None
    field = Field.from_tag(data.get("field", Field.RATIONAL.value))
    given = decode_matrix(basis, field, cols=ambient)
    u = Subspace.from_matrix(given)
    return u, u.basis != given


def decode_subspace(data: Mapping[str, Any]) -> Subspace:
    return decode_subspace_checked(data)[0]


def encode_element(x: Any) -> Dict[str, Any]:
    """A subspace, or ``{"factors": [...]}`` for an element of a product lattice."""
    if isinstance(x, Subspace):
        return encode_subspace(x)
    return {"factors": [encode_element(c) for c in x]}


def decode_element(data: Mapping[str, Any]) -> Any:
    if isinstance(data, Mapping) and "factors" in data:
        return tuple(decode_element(c) for c in data["factors"])
    return decode_subspace(data)


def encode_frame(frame: Frame) -> Dict[str, Any]:
    return {
        "d": frame.d,
        "a": [encode_subspace(x) for x in frame.a],
        "bot": encode_subspace(frame.bot),
        "top": encode_subspace(frame.top),
    }


def decode_frame(data: Mapping[str, Any]) -> Frame:
    try:
        return Frame(
            int(data["d"]),
            tuple(decode_subspace(x) for x in data["a"]),
            decode_subspace(data["bot"]),
            decode_subspace(data["top"]),
        )
    except KeyError as e:
        raise ValueError(f"Frame JSON is missing {e}") from None


def encode_delta(x: LimitElement) -> Dict[str, str]:
    dim = delta(x)
    value = dim.value
    return {"dyadic": str(dim), "reduced": str(dim.reduced()), "value": str(value)}


def encode_limit(x: LimitElement) -> Dict[str, Any]:
    return {"level": x.level, "space": encode_subspace(x.space)}


def decode_limit(data: Mapping[str, Any]) -> LimitElement:
    try:
        return LimitElement(int(data["level"]), decode_subspace(data["space"]))
    except KeyError as e:
        raise ValueError(f"Limit element JSON is missing {e}") from None


def encode_testset(testset: TestSet) -> Dict[str, Any]:
    return {"elements": [encode_element(x) for x in testset]}


def decode_testset(data: Any) -> TestSet:
    """Test set from ``{"elements": [...]}`` or a bare array of subspaces."""
    items = data.get("elements") if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise ValueError("Test set JSON must be an array of subspaces")
    return TestSet(tuple(decode_element(x) for x in items))


def encode_substitution(substitution: Mapping[str, Any]) -> Dict[str, Any]:
    return {name: encode_element(value) for name, value in substitution.items()}


def encode_outcome(outcome: SearchOutcome) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "holds": outcome.holds,
        "count": outcome.count,
        "total": outcome.total,
        "elapsed": round(outcome.elapsed, 6),
    }
    if outcome.counterexample is not None:
        data["counterexample"] = encode_substitution(outcome.counterexample)
        data["value"] = encode_element(outcome.value)
    return data


def encode_certificate(cert: RefutationCertificate) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "term": to_text(cert.term),
        "d": cert.d,
        "n": cert.n,
        "witness": encode_substitution(cert.witness),
        "witness_value": encode_element(cert.witness_value),
        "search": encode_outcome(cert.verdict),
    }
    if cert.factors:
        data["factors"] = list(cert.factors)
    return data


def decode_certificate(data: Mapping[str, Any]) -> RefutationCertificate:
    try:
        search = data["search"]
        verdict = SearchOutcome(
            bool(search["holds"]),
            int(search["count"]),
            int(search.get("total", search["count"])),
            float(search.get("elapsed", 0.0)),
        )
        return RefutationCertificate(
            parse(data["term"]),
            int(data["d"]),
            int(data["n"]),
            {name: decode_element(x) for name, x in data["witness"].items()},
            decode_element(data["witness_value"]),
            verdict,
            tuple(int(m) for m in data.get("factors", ())),
        )
    except KeyError as e:
        raise ValueError(f"Certificate JSON is missing {e}") from None


def load_json(path: str) -> Any:
    """Read a JSON document.

    Raises:
        ValueError: If the file is not valid JSON
    """
    try:
        with open(Path(path), "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValueError(f"Invalid JSON in {path}: {e}") from None


def dumps(data: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(data, indent=2, ensure_ascii=False)
    return json.dumps(data, separators=(",", ":"), ensure_ascii=False)
