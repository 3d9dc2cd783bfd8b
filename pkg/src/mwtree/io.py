"""Tree files: a single JSON document ``{"n", "s", "edges": [{"u", "v", "w"}]}``.

Labels are 1-based, ``w`` is a row-major nested list.  Dumps write every
weight entry with 17 significant digits so a dump re-parses bit-identically.
"""
import json
import math
from importlib import resources

import numpy as np

from .errors import BadWeightShape, ParseError
from .tree import validate

EXAMPLES = ("t1", "t2")


def _reject_constant(name):
    raise ParseError(f"non-finite number {name} is not allowed")


def _int_field(obj, key, where):
    if key not in obj:
        raise ParseError(f"missing key {key!r}", field=where)
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ParseError(f"expected an integer, got {val!r}", field=f"{where}.{key}" if where else key)
    return val


def _weight(raw, s, where):
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise ParseError("weight must be a nested list of rows", field=where)
    for r, row in enumerate(raw):
        for c, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError(f"expected a number, got {x!r}", field=f"{where}[{r}][{c}]")
    if len(raw) != s or any(len(row) != s for row in raw):
        shape = f"{len(raw)}x{'/'.join(sorted({str(len(row)) for row in raw})) or 0}"
        raise BadWeightShape(f"{where} has shape {shape}, expected {s}x{s}")
    return np.array(raw, dtype=np.float64)


def parse_tree_file(text):
    """Parse and validate a tree document; raises ParseError or a TreeError."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    n = _int_field(doc, "n", "")
    s = _int_field(doc, "s", "")
    edges = doc.get("edges")
    if not isinstance(edges, list):
        raise ParseError("expected a list", field="edges")
    raw = []
    for k, e in enumerate(edges):
        where = f"edges[{k}]"
        if not isinstance(e, dict):
            raise ParseError("edge must be an object", field=where)
        u = _int_field(e, "u", where)
        v = _int_field(e, "v", where)
        if "w" not in e:
            raise ParseError("missing key 'w'", field=where)
        raw.append((u, v, _weight(e["w"], s, f"{where}.w")))
    return validate(n, raw, s=s)


def read_tree(path):
    with open(path, encoding="utf-8") as fh:
        return parse_tree_file(fh.read())


def example_text(name):
    if name not in EXAMPLES:
        raise ValueError(f"unknown example {name!r}; choose from {EXAMPLES}")
    return resources.files("mwtree.data").joinpath(f"{name}.json").read_text(encoding="utf-8")


def example_path(name):
    """Filesystem path of a bundled example (the package is installed unzipped)."""
    example_text(name)
    return str(resources.files("mwtree.data").joinpath(f"{name}.json"))


def load_example(name):
    return parse_tree_file(example_text(name))


def format_number(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("cannot write a non-finite number")
    if x == int(x) and abs(x) < 2.0 ** 53:
        return str(int(x))
    return format(x, ".17g")


def dump_tree(t):
    lines = ["{", f'  "n": {t.n},', f'  "s": {t.s},', '  "edges": [']
    for k, e in enumerate(t.edges):
        rows = ", ".join("[" + ", ".join(format_number(x) for x in row) + "]" for row in e.weight)
        comma = "," if k < len(t.edges) - 1 else ""
        lines.append(f'    {{"u": {e.tail + 1}, "v": {e.head + 1}, "w": [{rows}]}}{comma}')
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def matrix_to_text(a, precision=6):
    a = np.atleast_2d(a) + 0.0  # folds -0.0 into 0.0
    return np.array2string(a, precision=precision, suppress_small=True, max_line_width=200, threshold=10**6)
