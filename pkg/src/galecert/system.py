"""Wire format for polynomial systems.

A system is a JSON object::

    {"d": 2, "n": 5,
     "exponents": [[0, 4], [5, 4], [2, 8], [3, 0], [3, 5]],
     "coefficients": [["1", "-1", "0", "1", "-1/4"], ["1", "-1", "-1", "c", "0"]],
     "parameters": {"c": "1/2"},
     "gale": {"B": [...], "D": [...]}}

Rationals are integers or ``"p/q"`` strings. Coefficient entries may also be
arithmetic expressions (``+ - * / **``, parentheses) over rationals and the
named parameters; they are evaluated exactly. Floats are rejected unless the
caller opts in with ``allow_float``.
"""

from __future__ import annotations

import ast
import json
import operator
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Mapping, Optional, Union

Entry = Union[Fraction, str]


class InputError(ValueError):
    """Malformed system description."""


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_node(node, env: Mapping[str, Fraction], allow_float: bool) -> Fraction:
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, env, allow_float)
    if isinstance(node, ast.Constant):
        v = node.value
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise InputError(f"unsupported literal {v!r}")
        if isinstance(v, float):
            if not allow_float:
                raise InputError(f"float literal {v!r} needs --numeric-only; write rationals as 'p/q'")
            return Fraction(v)
        return Fraction(v)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise InputError(f"unknown parameter {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, env, allow_float)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval_node(node.left, env, allow_float)
        b = _eval_node(node.right, env, allow_float)
        if isinstance(node.op, ast.Pow):
            if b.denominator != 1 or abs(b) > 64:
                raise InputError("exponents in expressions must be small integers")
            return a ** int(b)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise InputError(f"unsupported operator {type(node.op).__name__}")
        if op is operator.truediv and b == 0:
            raise InputError("division by zero")
        return op(a, b)
    raise InputError(f"unsupported expression element {type(node).__name__}")


def evaluate(entry: Any, env: Optional[Mapping[str, Fraction]] = None, allow_float: bool = False) -> Fraction:
    """Exact value of an integer, rational string or parameter expression."""
    env = env or {}
    if isinstance(entry, Fraction):
        return entry
    if isinstance(entry, bool):
        raise InputError("booleans are not numbers")
    if isinstance(entry, int):
        return Fraction(entry)
    if isinstance(entry, float):
        if not allow_float:
            raise InputError(f"float {entry!r} needs --numeric-only; write rationals as 'p/q'")
        return Fraction(entry)
    if not isinstance(entry, str):
        raise InputError(f"cannot read {entry!r} as a rational")
    text = entry.strip()
    try:
        return Fraction(text) if "." not in text and "e" not in text.lower() else _float_text(text, allow_float)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse {entry!r}") from exc
    return _eval_node(tree, env, allow_float)


def _float_text(text: str, allow_float: bool) -> Fraction:
    value = Fraction(text)  # raises ValueError for expressions
    if not allow_float:
        raise InputError(f"decimal {text!r} needs --numeric-only; write rationals as 'p/q'")
    return value


def _normalize(entry: Any, allow_float: bool) -> Entry:
    """Constants become ``Fraction``; expressions stay as stripped text."""
    if isinstance(entry, str):
        text = entry.strip()
        try:
            return evaluate(text, {}, allow_float)
        except InputError as exc:
            if "unknown parameter" in str(exc):
                return text
            raise
    return evaluate(entry, {}, allow_float)


def format_entry(e: Entry) -> Union[int, str]:
    if isinstance(e, str):
        return e
    return int(e) if e.denominator == 1 and abs(e) < 2**53 else str(e)


def _matrix(raw, rows: Optional[int], cols: Optional[int], what: str, allow_float: bool) -> list[list[Entry]]:
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise InputError(f"{what} must be a list of rows")
    if rows is not None and len(raw) != rows:
        raise InputError(f"{what} must have {rows} rows, got {len(raw)}")
    widths = {len(r) for r in raw}
    if len(widths) > 1:
        raise InputError(f"{what} has ragged rows")
    if cols is not None and raw and widths != {cols}:
        raise InputError(f"{what} rows must have {cols} entries")
    return [[_normalize(x, allow_float) for x in r] for r in raw]


@dataclass
class SystemDescription:
    exponents: list[list[Fraction]]  # n rows of d
    coefficients: list[list[Entry]]  # d rows of n, constants or expressions
    parameters: dict[str, Fraction] = field(default_factory=dict)
    gale_B: Optional[list[list[Entry]]] = None
    gale_D: Optional[list[list[Entry]]] = None

    @property
    def d(self) -> int:
        return len(self.coefficients)

    @property
    def n(self) -> int:
        return len(self.exponents)

    def with_parameters(self, **values) -> "SystemDescription":
        params = dict(self.parameters)
        params.update({k: Fraction(v) for k, v in values.items()})
        return replace(self, parameters=params)

    def _resolve(self, M, allow_float: bool = True) -> list[list[Fraction]]:
        return [[evaluate(x, self.parameters, allow_float) for x in r] for r in M]

    @property
    def C(self) -> list[list[Fraction]]:
        return self._resolve(self.coefficients)

    @property
    def points(self) -> list[list[Fraction]]:
        return [list(r) for r in self.exponents]

    @property
    def has_gale(self) -> bool:
        return self.gale_B is not None and self.gale_D is not None

    def gale(self) -> Optional[tuple[list[list[Fraction]], list[list[Fraction]]]]:
        if not self.has_gale:
            return None
        return self._resolve(self.gale_B), self._resolve(self.gale_D)

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {
            "d": self.d,
            "n": self.n,
            "exponents": [[format_entry(x) for x in r] for r in self.exponents],
            "coefficients": [[format_entry(x) for x in r] for r in self.coefficients],
        }
        if self.parameters:
            doc["parameters"] = {k: format_entry(v) for k, v in sorted(self.parameters.items())}
        if self.has_gale:
            doc["gale"] = {
                "B": [[format_entry(x) for x in r] for r in self.gale_B],
                "D": [[format_entry(x) for x in r] for r in self.gale_D],
            }
        return doc

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def parse(doc: Union[str, dict], allow_float: bool = False) -> SystemDescription:
    """Build a :class:`SystemDescription` from JSON text or a decoded dict."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("system description must be a JSON object")
    for key in ("exponents", "coefficients"):
        if key not in doc:
            raise InputError(f"missing field {key!r}")
    n = doc.get("n")
    d = doc.get("d")
    exps = _matrix(doc["exponents"], n, d, "exponents", allow_float)
    if any(isinstance(x, str) for r in exps for x in r):
        raise InputError("exponents must be numeric")
    n = len(exps)
    d = len(exps[0]) if exps else d
    if not n or not d:
        raise InputError("need at least one variable and one monomial")
    coeffs = _matrix(doc["coefficients"], d, n, "coefficients", allow_float)
    params_raw = doc.get("parameters") or {}
    if not isinstance(params_raw, dict):
        raise InputError("parameters must be an object")
    params = {}
    for name, v in params_raw.items():
        if not str(name).isidentifier():
            raise InputError(f"bad parameter name {name!r}")
        params[str(name)] = evaluate(v, {}, allow_float)
    B = D = None
    if doc.get("gale") is not None:
        g = doc["gale"]
        if not isinstance(g, dict) or "B" not in g or "D" not in g:
            raise InputError("gale must be an object with B and D")
        B = _matrix(g["B"], n, None, "gale.B", allow_float)
        D = _matrix(g["D"], n, None, "gale.D", allow_float)
    desc = SystemDescription(exps, coeffs, params, B, D)
    desc.C  # unknown parameters surface here
    desc.gale()
    return desc


def load(path: str, allow_float: bool = False) -> SystemDescription:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse(text, allow_float)


def parse_sweep(spec: str) -> tuple[str, list[Fraction]]:
    """``NAME=a:b:n`` into the name and ``n`` equally spaced exact values."""
    if "=" not in spec:
        raise InputError(f"--param expects NAME=a:b:n, got {spec!r}")
    name, rng = spec.split("=", 1)
    name = name.strip()
    if not name.isidentifier():
        raise InputError(f"bad parameter name {name!r}")
    parts = rng.split(":")
    if len(parts) == 1:
        return name, [evaluate(parts[0])]
    if len(parts) != 3:
        raise InputError(f"--param expects NAME=a:b:n, got {spec!r}")
    a, b = evaluate(parts[0]), evaluate(parts[1])
    steps = evaluate(parts[2])
    if steps.denominator != 1 or steps < 1:
        raise InputError("number of sweep steps must be a positive integer")
    steps = int(steps)
    if steps == 1:
        return name, [a]
    return name, [a + (b - a) * i / (steps - 1) for i in range(steps)]
