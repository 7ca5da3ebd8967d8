"""Declarative input documents.

Configs are TOML with a fixed schema, versioned by a leading ``format = 1``::

    format = 1

    [variety]
    n_points = 4
    labels = ["e0", "e1", "e2", "e3"]

    [[variety.curves]]            # optional; default: lines through two points
    name = "C01"
    class = "1;-1,-1,0,0"

    [map]
    name = "jx"
    m11 = [[3, -2, -2, -2, -2], ...]   # row k = pullback of basis class k
    m22 = [...]
    push11 = [...]
    push22 = [...]

    [[map.ladder]]
    source = "C01"                # classes default to the curve table entry
    image = "C23"
    source_class = "1;-1,-1,0,0"  # optional override
    image_class = "1;0,0,-1,-1"   # optional override

    [lab]
    radius = 0.5
    ...

Matrix entries and class literals are exact: integers or "p/q" strings.
Floats in the exact sections are rejected, as are unknown keys.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any

from .birational import LadderEntry, PseudoIsoData
from .cohomology import CurveCycle, VarietyDescriptor
from .exact import format_rational, parse_rational

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

FORMAT_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class LadderSpec:
    source: str
    image: str
    source_class: CurveCycle | None = None
    image_class: CurveCycle | None = None


@dataclass(frozen=True)
class MapSection:
    name: str
    m11: tuple[tuple[Fraction, ...], ...]
    m22: tuple[tuple[Fraction, ...], ...]
    push11: tuple[tuple[Fraction, ...], ...]
    push22: tuple[tuple[Fraction, ...], ...]
    ladder: tuple[LadderSpec, ...] = ()


@dataclass(frozen=True)
class VarietySection:
    n_points: int
    labels: tuple[str, ...] = ()
    curves: tuple[tuple[str, CurveCycle], ...] | None = None

    def __post_init__(self):
        # an empty table means the default lines, same as leaving it out
        if self.curves is not None and not self.curves:
            object.__setattr__(self, "curves", None)


@dataclass(frozen=True)
class LabSettings:
    resolution_1d: int = 256
    resolution_2d: int = 128
    extent: float = 1.0
    radius: float = 0.5
    eps_base: float = 2.0
    n_min: int = 1
    n_max: int = 8
    mass_tol: float = 0.02
    mass_2d_tol: float = 0.05
    lelong_tol: float = 0.02
    regularized_lelong_max: float = 0.02
    envelope_tol: float = 1e-6
    envelope_nodes: int = 64
    probe_tol: float = 0.15


@dataclass(frozen=True)
class ConfigDocument:
    variety: VarietySection
    map: MapSection | None = None
    lab: LabSettings = field(default_factory=LabSettings)

    def to_variety(self) -> VarietyDescriptor:
        v = self.variety
        return VarietyDescriptor(v.n_points, v.labels, v.curves or ())

    def to_map(self) -> PseudoIsoData:
        if self.map is None:
            raise ConfigError("document has no [map] section")
        variety = self.to_variety()
        entries = []
        for k, spec in enumerate(self.map.ladder):
            try:
                src = spec.source_class or variety.curve(spec.source)
                img = spec.image_class or variety.curve(spec.image)
            except KeyError as exc:
                raise ConfigError(f"map.ladder[{k}]: curve {exc.args[0]!r} is not in the curve table "
                                  "and has no inline class") from None
            entries.append(LadderEntry(spec.source, src, spec.image, img))
        m = self.map
        return PseudoIsoData(m.name, variety, variety, m.m11, m.m22, m.push11, m.push22, tuple(entries))


# --- parsing -------------------------------------------------------------------


def _expect_keys(table: dict, allowed: set[str], where: str, required: set[str] = frozenset()) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key {unknown[0]!r}")
    missing = sorted(set(required) - set(table))
    if missing:
        raise ConfigError(f"{where}: missing key {missing[0]!r}")


def _exact(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"{where}: booleans are not rational numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}: {value!r} is not an exact rational (use an integer or a 'p/q' string)")


def _class(value: Any, n: int, where: str) -> CurveCycle:
    if not isinstance(value, str):
        raise ConfigError(f"{where}: class literals are strings 'a;b0,b1,...'")
    try:
        c = CurveCycle.parse(value)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    if c.n_points != n:
        raise ConfigError(f"{where}: class has {c.n_points + 1} entries, expected {n + 1}")
    return c


def _matrix(value: Any, n: int, where: str) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(value, list) or len(value) != n + 1:
        raise ConfigError(f"{where}: expected {n + 1} rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n + 1:
            got = len(row) if isinstance(row, list) else "a non-list"
            raise ConfigError(f"{where}: row {i} has {got} entries, expected {n + 1}")
        rows.append(tuple(_exact(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)))
    return tuple(rows)


def _parse_variety(table: Any) -> VarietySection:
    if not isinstance(table, dict):
        raise ConfigError("variety: expected a table")
    _expect_keys(table, {"n_points", "labels", "curves"}, "variety", {"n_points"})
    n = table["n_points"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ConfigError("variety.n_points: expected a nonnegative integer")
    labels = table.get("labels", [])
    if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
        raise ConfigError("variety.labels: expected a list of strings")
    if labels and len(labels) != n:
        raise ConfigError(f"variety.labels: expected {n} labels, got {len(labels)}")
    curves = None
    if "curves" in table:
        curves = []
        for k, entry in enumerate(table["curves"]):
            where = f"variety.curves[{k}]"
            _expect_keys(entry, {"name", "class"}, where, {"name", "class"})
            curves.append((str(entry["name"]), _class(entry["class"], n, f"{where}.class")))
        curves = tuple(curves)
    return VarietySection(n, tuple(labels), curves)


def _parse_map(table: Any, n: int) -> MapSection:
    if not isinstance(table, dict):
        raise ConfigError("map: expected a table")
    keys = {"name", "m11", "m22", "push11", "push22", "ladder"}
    _expect_keys(table, keys, "map", keys - {"ladder"})
    ladder = []
    for k, entry in enumerate(table.get("ladder", [])):
        where = f"map.ladder[{k}]"
        _expect_keys(entry, {"source", "image", "source_class", "image_class"}, where, {"source", "image"})
        ladder.append(LadderSpec(
            str(entry["source"]),
            str(entry["image"]),
            _class(entry["source_class"], n, f"{where}.source_class") if "source_class" in entry else None,
            _class(entry["image_class"], n, f"{where}.image_class") if "image_class" in entry else None,
        ))
    return MapSection(
        str(table["name"]),
        *(_matrix(table[key], n, f"map.{key}") for key in ("m11", "m22", "push11", "push22")),
        tuple(ladder),
    )


def _parse_lab(table: Any) -> LabSettings:
    if not isinstance(table, dict):
        raise ConfigError("lab: expected a table")
    spec = {f.name: f.type for f in fields(LabSettings)}
    _expect_keys(table, set(spec), "lab")
    kwargs = {}
    for key, value in table.items():
        default = getattr(LabSettings, key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"lab.{key}: expected a number")
        if isinstance(default, int) and not isinstance(value, int):
            raise ConfigError(f"lab.{key}: expected an integer")
        kwargs[key] = type(default)(value)
    return LabSettings(**kwargs)


def parse_config(text: str) -> ConfigDocument:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"syntax error: {exc}") from None
    _expect_keys(raw, {"format", "variety", "map", "lab"}, "document", {"format", "variety"})
    if raw["format"] != FORMAT_VERSION:
        raise ConfigError(f"format: unsupported version {raw['format']!r} (expected {FORMAT_VERSION})")
    variety = _parse_variety(raw["variety"])
    map_section = _parse_map(raw["map"], variety.n_points) if "map" in raw else None
    lab = _parse_lab(raw["lab"]) if "lab" in raw else LabSettings()
    return ConfigDocument(variety, map_section, lab)


def load_config(path) -> ConfigDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# --- serialisation ---------------------------------------------------------------


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f'"{format_rational(x)}"'


def _s(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _rows(m) -> str:
    inner = ",\n".join("    [" + ", ".join(_q(x) for x in row) + "]" for row in m)
    return "[\n" + inner + ",\n]"


def serialize_config(doc: ConfigDocument) -> str:
    out = [f"format = {FORMAT_VERSION}", "", "[variety]", f"n_points = {doc.variety.n_points}"]
    if doc.variety.labels:
        out.append("labels = [" + ", ".join(_s(x) for x in doc.variety.labels) + "]")
    for name, cls in doc.variety.curves or ():
        out += ["", "[[variety.curves]]", f"name = {_s(name)}", f"class = {_s(str(cls))}"]
    if doc.map is not None:
        m = doc.map
        out += ["", "[map]", f"name = {_s(m.name)}"]
        for key in ("m11", "m22", "push11", "push22"):
            out.append(f"{key} = {_rows(getattr(m, key))}")
        for e in m.ladder:
            out += ["", "[[map.ladder]]", f"source = {_s(e.source)}", f"image = {_s(e.image)}"]
            if e.source_class is not None:
                out.append(f"source_class = {_s(str(e.source_class))}")
            if e.image_class is not None:
                out.append(f"image_class = {_s(str(e.image_class))}")
    if doc.lab != LabSettings():
        out += ["", "[lab]"]
        for f in fields(LabSettings):
            value = getattr(doc.lab, f.name)
            out.append(f"{f.name} = {value!r}")
    return "\n".join(out) + "\n"


def document_from_map(f: PseudoIsoData) -> ConfigDocument:
    variety = VarietySection(f.target.n_points, f.target.labels, f.target.curve_table)
    ladder = tuple(LadderSpec(e.source_name, e.image_name, e.source_class, e.image_class) for e in f.ladder)
    return ConfigDocument(variety, MapSection(f.name, f.m11, f.m22, f.push11, f.push22, ladder))


JX_CONFIG = """\
format = 1

[variety]
n_points = 4
labels = ["e0", "e1", "e2", "e3"]

[map]
name = "jx"
# J^*H = 3H - 2 sum E_i,  J^*E_j = H + E_j - sum E_i
m11 = [
    [3, -2, -2, -2, -2],
    [1,  0, -1, -1, -1],
    [1, -1,  0, -1, -1],
    [1, -1, -1,  0, -1],
    [1, -1, -1, -1,  0],
]
# J^*H^2 = 3H^2 - sum L_i,  J^*L_j = 2H^2 + L_j - sum L_i
m22 = [
    [3, -1, -1, -1, -1],
    [2,  0, -1, -1, -1],
    [2, -1,  0, -1, -1],
    [2, -1, -1,  0, -1],
    [2, -1, -1, -1,  0],
]
push11 = [
    [3, -2, -2, -2, -2],
    [1,  0, -1, -1, -1],
    [1, -1,  0, -1, -1],
    [1, -1, -1,  0, -1],
    [1, -1, -1, -1,  0],
]
push22 = [
    [3, -1, -1, -1, -1],
    [2,  0, -1, -1, -1],
    [2, -1,  0, -1, -1],
    [2, -1, -1,  0, -1],
    [2, -1, -1, -1,  0],
]

[[map.ladder]]
source = "C01"
image = "C23"

[[map.ladder]]
source = "C02"
image = "C13"

[[map.ladder]]
source = "C03"
image = "C12"

[[map.ladder]]
source = "C12"
image = "C03"

[[map.ladder]]
source = "C13"
image = "C02"

[[map.ladder]]
source = "C23"
image = "C01"
"""
