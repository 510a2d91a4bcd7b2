"""Run configuration files (TOML).

::

    [operator]
    name = "rho_exceptions"
    k = 1
    exceptions = "birds"      # a named set below, or an inline list
    context = "new"

    [revision]
    mode = "coherent"
    max_cap = 8
    allow_non_exhaustive = false

    [exceptions]
    birds = ["penguin", "Tweety"]

    [bounds]
    bound = 3

    [output]
    format = "json"

    [agm]
    logic = "PL"
    depth = 2
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

from ..errors import ParseError, RelaxrevError
from ..revision import DEFAULT_MAX_CAP, MINIMAL, COHERENT

SECTIONS = {
    "operator": {"name", "k", "exceptions", "context"},
    "revision": {"mode", "max_cap", "allow_non_exhaustive"},
    "exceptions": None,  # free-form named sets
    "bounds": {"bound"},
    "output": {"format"},
    "agm": {"logic", "depth", "atoms", "sentences"},
}


@dataclass(frozen=True)
class RunConfig:
    operator: str | None = None
    k: int = 1
    exceptions: tuple[str, ...] | None = None
    context: str | None = None
    mode: str = MINIMAL
    max_cap: int = DEFAULT_MAX_CAP
    allow_non_exhaustive: bool = False
    bound: int | None = None
    output: str | None = None
    agm: dict = field(default_factory=dict)

    def operator_params(self) -> dict[str, Any]:
        params: dict[str, Any] = {"k": self.k}
        if self.context is not None:
            params["context"] = self.context
        return params


def _expect(value, kind, where: str):
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise RelaxrevError(f"{where} has the wrong type")
    return value


def parse_config(text: str) -> RunConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None) or 1
        col = getattr(exc, "colno", None) or 1
        raise ParseError(f"config: {exc}", line, col) from None
    for section, body in data.items():
        if section not in SECTIONS:
            raise RelaxrevError(f"unknown config section [{section}]")
        if not isinstance(body, dict):
            raise RelaxrevError(f"[{section}] must be a table")
        keys = SECTIONS[section]
        if keys is not None:
            extra = set(body) - keys
            if extra:
                raise RelaxrevError(f"unknown keys in [{section}]: {', '.join(sorted(extra))}")

    named = data.get("exceptions", {})
    for name, items in named.items():
        if not isinstance(items, list) or not all(isinstance(x, str) for x in items):
            raise RelaxrevError(f"exception set {name!r} must be a list of concept strings")

    op = data.get("operator", {})
    exceptions = None
    if "exceptions" in op:
        ref = op["exceptions"]
        if isinstance(ref, str):
            if ref not in named:
                raise RelaxrevError(f"operator refers to an undefined exception set {ref!r}")
            exceptions = tuple(named[ref])
        elif isinstance(ref, list) and all(isinstance(x, str) for x in ref):
            exceptions = tuple(ref)
        else:
            raise RelaxrevError("[operator] exceptions must name a set or list concepts")

    rev = data.get("revision", {})
    mode = _expect(rev.get("mode", MINIMAL), str, "[revision] mode")
    if mode not in (MINIMAL, COHERENT):
        raise RelaxrevError(f"[revision] mode must be minimal or coherent, not {mode!r}")
    max_cap = _expect(rev.get("max_cap", DEFAULT_MAX_CAP), int, "[revision] max_cap")
    if max_cap < 1:
        raise RelaxrevError("[revision] max_cap must be at least 1")

    bound = data.get("bounds", {}).get("bound")
    if bound is not None and (_expect(bound, int, "[bounds] bound") < 1):
        raise RelaxrevError("[bounds] bound must be at least 1")
    output = data.get("output", {}).get("format")
    if output is not None and output not in ("json", "text"):
        raise RelaxrevError("[output] format must be json or text")

    return RunConfig(
        operator=op.get("name") and _expect(op["name"], str, "[operator] name"),
        k=_expect(op.get("k", 1), int, "[operator] k"),
        exceptions=exceptions,
        context=op.get("context") and _expect(op["context"], str, "[operator] context"),
        mode=mode,
        max_cap=max_cap,
        allow_non_exhaustive=_expect(rev.get("allow_non_exhaustive", False), bool,
                                     "[revision] allow_non_exhaustive"),
        bound=bound,
        output=output,
        agm=dict(data.get("agm", {})),
    )


def load_config(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


__all__ = ["RunConfig", "parse_config", "load_config"]
