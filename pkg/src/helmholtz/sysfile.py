"""System description files.

Key-value form (``#`` starts a comment)::

    name = damped oscillator
    n = 1
    params = g, w
    eq1 = qdd1 + 2*g*qd1 + w^2*q1

JSON form: ``{"n": 1, "params": ["g", "w"], "equations": ["..."], "name": "..."}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .conditions import SodeSystem
from .expr import jet_order
from .parser import ParseError, parse

__all__ = ["InputError", "SystemFile", "load_system_file", "parse_system_text", "parse_system_json"]

_EQ_KEY = re.compile(r"eq([1-9][0-9]*)")
_META_KEYS = {"name", "description"}


class InputError(ValueError):
    """The system file is malformed or inconsistent."""


@dataclass(frozen=True)
class SystemFile:
    n: int
    parameters: tuple[str, ...]
    equations: tuple[str, ...]
    name: str = ""
    description: str = ""

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError(f"n must be >= 1, got {self.n}")
        if len(self.equations) != self.n:
            raise InputError(f"expected {self.n} equations, got {len(self.equations)}")
        if len(set(self.parameters)) != len(self.parameters):
            raise InputError("duplicate parameter names")

    def to_system(self) -> SodeSystem:
        f = []
        for a, text in enumerate(self.equations, 1):
            try:
                e = parse(text, self.n, self.parameters)
            except ParseError as exc:
                raise InputError(f"eq{a}: {exc}") from exc
            except ValueError as exc:
                raise InputError(str(exc)) from exc
            if jet_order(e) > 2:
                raise InputError(f"eq{a} has jet order {jet_order(e)} > 2")
            f.append(e)
        return SodeSystem(tuple(f), self.parameters)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "n": self.n,
            "params": list(self.parameters),
            "equations": list(self.equations),
        }


def _split_params(value: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in value.split(",") if p.strip())


def parse_system_text(text: str) -> SystemFile:
    fields: dict[str, str] = {}
    eqs: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        m = _EQ_KEY.fullmatch(key)
        if m:
            k = int(m.group(1))
            if k in eqs:
                raise InputError(f"line {lineno}: duplicate {key}")
            eqs[k] = value
        elif key in _META_KEYS | {"n", "params"}:
            if key in fields:
                raise InputError(f"line {lineno}: duplicate {key}")
            fields[key] = value
        else:
            raise InputError(f"line {lineno}: unknown key {key!r}")
    if "n" not in fields:
        raise InputError("missing 'n'")
    try:
        n = int(fields["n"])
    except ValueError:
        raise InputError(f"n must be an integer, got {fields['n']!r}") from None
    if sorted(eqs) != list(range(1, len(eqs) + 1)) or len(eqs) != n:
        raise InputError(f"expected equations eq1..eq{n}, got {sorted(eqs)}")
    return SystemFile(
        n=n,
        parameters=_split_params(fields.get("params", "")),
        equations=tuple(eqs[k] for k in range(1, n + 1)),
        name=fields.get("name", ""),
        description=fields.get("description", ""),
    )


def parse_system_json(text: str) -> SystemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("JSON system must be an object")
    unknown = set(doc) - {"n", "params", "equations", "name", "description"}
    if unknown:
        raise InputError(f"unknown keys {sorted(unknown)}")
    n = doc.get("n")
    eqs = doc.get("equations")
    params = doc.get("params", [])
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputError("'n' must be an integer")
    if not isinstance(eqs, list) or not all(isinstance(e, str) for e in eqs):
        raise InputError("'equations' must be a list of strings")
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        raise InputError("'params' must be a list of strings")
    return SystemFile(
        n=n,
        parameters=tuple(params),
        equations=tuple(eqs),
        name=str(doc.get("name", "")),
        description=str(doc.get("description", "")),
    )


def load_system_file(path: str | Path) -> SystemFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        return parse_system_json(text)
    return parse_system_text(text)
