"""Manifold spec files.

A spec file is sectioned key-value text. Matrix and array values are
bracketed lists of expressions; continuation lines must be indented.
Example::

    [manifold]
    format_version = 1
    name = example2-r3
    dimension = 3
    coordinates = [x, y, z]
    epsilon = -1

    [metric]
    g = [[exp(-2*z), 0, 0],
         [0, exp(2*x-2*z), 0],
         [0, 0, -1]]

    [structure]
    phi = [[-1, 0, 0], [0, -1, 0], [0, 0, 0]]
    xi = [0, 0, 1]
    eta = [0, 0, 1]

    [soliton]
    lambda = exp(2*z)-1
    mu = exp(2*z)+1
    potential = -z

    [sampling]
    mode = random
    count = 50
    seed = 42
    ranges = [[-1, 1], [-1, 1], [-1, 1]]

Row i, column j of ``phi`` is phi^i_j. ``lambda``/``mu`` may be ``solve``.
``vector`` (optional, in ``[soliton]``) replaces xi as the soliton's vector field.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import FileError, ParseError, SpecError
from ..expr import parse
from ..solitons import SOLVE, SolitonData
from ..structures import ParacontactStructure
from ..tensors import Chart, MetricField

FORMAT_VERSION = 1
SECTIONS = ("manifold", "metric", "structure", "soliton", "sampling")


@dataclass(frozen=True)
class Sampling:
    mode: str = "random"
    count: int = 50
    seed: int = 42

    def __post_init__(self):
        if self.mode not in ("random", "grid"):
            raise SpecError(f"sampling mode must be 'random' or 'grid', got {self.mode!r}")
        if self.count < 1:
            raise SpecError("sampling count must be positive")


@dataclass(frozen=True)
class ManifoldSpec:
    name: str
    chart: Chart
    epsilon: int
    metric: MetricField
    structure: ParacontactStructure = None
    soliton: SolitonData = None
    sampling: Sampling = field(default_factory=Sampling)
    format_version: int = FORMAT_VERSION

    @property
    def dimension(self):
        return self.chart.dimension


def split_list(text: str, where: str = ""):
    """Parse a bracketed, possibly nested, comma-separated list into nested lists of strings."""
    text = text.strip()
    pos = 0

    def parse_item():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos < len(text) and text[pos] == "[":
            pos += 1
            items = []
            while True:
                while pos < len(text) and text[pos].isspace():
                    pos += 1
                if pos < len(text) and text[pos] == "]":
                    pos += 1
                    return items
                items.append(parse_item())
                while pos < len(text) and text[pos].isspace():
                    pos += 1
                if pos >= len(text):
                    raise SpecError(f"{where}: unterminated '['")
                if text[pos] == ",":
                    pos += 1
                elif text[pos] != "]":
                    raise SpecError(f"{where}: expected ',' or ']' at column {pos}")
        start, depth = pos, 0
        while pos < len(text):
            ch = text[pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif depth == 0 and ch in ",]":
                break
            elif ch == "[":
                raise SpecError(f"{where}: unexpected '[' inside an expression")
            pos += 1
        item = text[start:pos].strip()
        if not item:
            raise SpecError(f"{where}: empty list element")
        return item

    if not text.startswith("["):
        raise SpecError(f"{where}: expected a bracketed list")
    result = parse_item()
    if text[pos:].strip():
        raise SpecError(f"{where}: trailing text after list")
    return result


def _shape_error(where, what, n):
    return SpecError(f"{where}: dimension mismatch, {what} must match dimension {n}")


class _Reader:
    def __init__(self, text, source):
        self.source = source
        self.cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        self.cp.optionxform = str
        try:
            self.cp.read_string(text, source=source)
        except configparser.Error as err:
            raise SpecError(f"{source}: {err}") from err
        unknown = [s for s in self.cp.sections() if s not in SECTIONS]
        if unknown:
            raise SpecError(f"{source}: unknown section(s) {unknown}")

    def has(self, section):
        return self.cp.has_section(section)

    def get(self, section, key, default=None, required=True):
        if self.cp.has_option(section, key):
            return self.cp.get(section, key).strip()
        if required and default is None:
            raise SpecError(f"{self.source}: missing key '{key}' in [{section}]")
        return default

    def where(self, section, key):
        return f"{self.source} [{section}] {key}"

    def expr(self, section, key, text, chart):
        try:
            return parse(text, chart)
        except ParseError as err:
            err.location = self.where(section, key)
            raise

    def vector(self, section, key, chart, n):
        items = split_list(self.get(section, key), self.where(section, key))
        if len(items) != n or any(isinstance(v, list) for v in items):
            raise _shape_error(self.where(section, key), f"a list of {len(items)} entries", n)
        return tuple(self.expr(section, key, v, chart) for v in items)

    def matrix(self, section, key, chart, n):
        rows = split_list(self.get(section, key), self.where(section, key))
        if len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
            raise _shape_error(self.where(section, key), f"a {len(rows)}-row matrix", n)
        return tuple(tuple(self.expr(section, key, v, chart) for v in r) for r in rows)


def loads(text: str, source: str = "<string>") -> ManifoldSpec:
    r = _Reader(text, source)
    if not r.has("manifold") or not r.has("metric"):
        raise SpecError(f"{source}: [manifold] and [metric] sections are required")
    version = int(r.get("manifold", "format_version", str(FORMAT_VERSION), required=False))
    if version != FORMAT_VERSION:
        raise SpecError(f"{source}: unsupported format_version {version}")
    name = r.get("manifold", "name")
    coords = split_list(r.get("manifold", "coordinates"), r.where("manifold", "coordinates"))
    if any(isinstance(c, list) or not c.isidentifier() for c in coords):
        raise SpecError(f"{source}: coordinates must be a flat list of identifiers")
    n = int(r.get("manifold", "dimension", str(len(coords)), required=False))
    if n != len(coords):
        raise _shape_error(r.where("manifold", "coordinates"), f"{len(coords)} coordinates", n)
    epsilon = int(r.get("manifold", "epsilon", "1", required=False))
    if epsilon not in (1, -1):
        raise SpecError(f"{source}: epsilon must be 1 or -1")

    ranges = None
    sampling = Sampling()
    if r.has("sampling"):
        if r.cp.has_option("sampling", "ranges"):
            raw = split_list(r.get("sampling", "ranges"), r.where("sampling", "ranges"))
            if len(raw) != n or any(not isinstance(x, list) or len(x) != 2 for x in raw):
                raise _shape_error(r.where("sampling", "ranges"), f"{len(raw)} ranges", n)
            ranges = tuple(tuple(_number(v, r.where("sampling", "ranges")) for v in x) for x in raw)
        sampling = Sampling(
            mode=r.get("sampling", "mode", "random", required=False),
            count=int(r.get("sampling", "count", "50", required=False)),
            seed=int(r.get("sampling", "seed", "42", required=False)),
        )
    try:
        chart = Chart(tuple(coords), ranges)
    except ValueError as err:
        raise SpecError(f"{source}: {err}") from err

    rows = r.matrix("metric", "g", chart, n)
    try:
        metric = MetricField.from_rows(rows)
    except ValueError as err:
        raise SpecError(f"{r.where('metric', 'g')}: {err}") from err

    structure = None
    if r.has("structure"):
        structure = ParacontactStructure(
            r.matrix("structure", "phi", chart, n),
            r.vector("structure", "xi", chart, n),
            r.vector("structure", "eta", chart, n),
            epsilon,
        )

    soliton = None
    if r.has("soliton"):

        def scalar(key):
            text = r.get("soliton", key, SOLVE, required=False)
            return SOLVE if text == SOLVE else r.expr("soliton", key, text, chart)

        potential = r.get("soliton", "potential", None, required=False)
        vector = None
        if r.cp.has_option("soliton", "vector"):
            vector = r.vector("soliton", "vector", chart, n)
        soliton = SolitonData(
            lam=scalar("lambda"),
            mu=scalar("mu"),
            potential=None if potential is None else r.expr("soliton", "potential", potential, chart),
            vector=vector,
        )
    return ManifoldSpec(name, chart, epsilon, metric, structure, soliton, sampling, version)


def _number(text, where):
    try:
        v = float(text)
    except ValueError:
        try:
            v = parse(text, ()).evaluate(())
        except ParseError as err:
            raise SpecError(f"{where}: not a number: {text!r}") from err
    if not math.isfinite(v):
        raise SpecError(f"{where}: not finite: {text!r}")
    return v


def load_manifold_spec(path) -> ManifoldSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise FileError(f"cannot read {path}: {err}") from err
    return loads(text, str(path))


def _list(items):
    return "[" + ", ".join(items) + "]"


def _matrix(rows, indent):
    lines = [_list(e.to_text() for e in row) for row in rows]
    pad = " " * indent
    return "[" + (",\n" + pad + " ").join(lines) + "]"


def _num(v):
    return repr(float(v))


def dumps(spec: ManifoldSpec) -> str:
    """Serialize a spec; ``loads(dumps(spec)) == spec``."""
    out = [
        "[manifold]",
        f"format_version = {spec.format_version}",
        f"name = {spec.name}",
        f"dimension = {spec.dimension}",
        f"coordinates = {_list(spec.chart.coordinates)}",
        f"epsilon = {spec.epsilon}",
        "",
        "[metric]",
        f"g = {_matrix(spec.metric.entries, 4)}",
    ]
    s = spec.structure
    if s is not None:
        out += [
            "",
            "[structure]",
            f"phi = {_matrix(s.phi, 6)}",
            f"xi = {_list(e.to_text() for e in s.xi)}",
            f"eta = {_list(e.to_text() for e in s.eta)}",
        ]
    sol = spec.soliton
    if sol is not None:
        out += ["", "[soliton]"]
        for key, val in (("lambda", sol.lam), ("mu", sol.mu)):
            out.append(f"{key} = {val if val == SOLVE else val.to_text()}")
        if sol.potential is not None:
            out.append(f"potential = {sol.potential.to_text()}")
        if sol.vector is not None:
            out.append(f"vector = {_list(e.to_text() for e in sol.vector)}")
    sm = spec.sampling
    out += [
        "",
        "[sampling]",
        f"mode = {sm.mode}",
        f"count = {sm.count}",
        f"seed = {sm.seed}",
        f"ranges = {_list(_list((_num(lo), _num(hi))) for lo, hi in spec.chart.domain)}",
    ]
    return "\n".join(out) + "\n"
