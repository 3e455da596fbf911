"""Plain-text key-value tree configuration.

One assignment per line, `a.b.c = value`; `#` starts a comment.  Values parse
as int, float, bool, `inf`, simple fractions like `3/2`, comma-separated
lists of those, or fall back to strings.  Dotted keys nest.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _parse_scalar(text: str):
    s = text.strip()
    low = s.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("inf", "infinity", "oo"):
        return math.inf
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        pass
    if "/" in s:
        try:
            return float(Fraction(s))
        except (ValueError, ZeroDivisionError):
            pass
    return s


def parse_value(text: str):
    s = text.strip()
    if "," in s:
        return [_parse_scalar(part) for part in s.split(",") if part.strip()]
    return _parse_scalar(s)


def parse_config_text(text: str) -> dict:
    tree: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        node = tree
        parts = key.strip().split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ValueError(f"line {lineno}: {key.strip()!r} descends through a scalar")
        node[parts[-1]] = parse_value(value)
    return tree


def load_config(path) -> dict:
    with open(path) as fh:
        return parse_config_text(fh.read())


def flatten(tree: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in tree.items():
        key = f"{prefix}.{k}" if prefix else str(k)
        if isinstance(v, dict):
            out.update(flatten(v, key))
        else:
            out[key] = v
    return out


def dump_config(tree: dict) -> str:
    def fmt(v):
        if isinstance(v, list):
            return ",".join(fmt(x) for x in v)
        if isinstance(v, float) and math.isinf(v):
            return "inf"
        return str(v)

    return "\n".join(f"{k} = {fmt(v)}" for k, v in sorted(flatten(tree).items())) + "\n"
