"""Scenario files: a small line-oriented format describing an algebra, the
category built from it, the recollement wiring, aliases and caps.

Example::

    [algebra]
    name = kA2
    field = 2
    vertices = 1, 2
    arrows = alpha: 1 -> 2

    [category]
    construction = morphism_category
    bounds = 1

    [recollement]
    left = *
    right = *

    [aliases]
    phi = S2 -> P1

Rules: ``#`` starts a comment; ``key = value`` lines belong to the most
recent ``[section]``; an indented line continues the previous value.
Relations are written in composition notation (``beta*alpha`` means
``alpha`` first) and separated by ``;``, e.g. ``beta*alpha - gamma*delta``.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, fields
from importlib import resources
from typing import Dict, List, Optional, Tuple

from ..exactlin import is_prime
from ..morphcat import TAGS, canonical_tag
from ..verdict import Caps

BUILTINS = ("paper-abelian", "paper-extriangulated")
CONSTRUCTIONS = ("modules", "morphism_category", "subcategory")
STRATEGIES = ("scan", "triples")

SECTION_KEYS = {
    "algebra": {"name", "field", "vertices", "arrows", "relations"},
    "category": {"construction", "ambient", "objects", "bounds", "strategy", "multiplicity"},
    "recollement": {"left", "right"} | set(TAGS),
    "aliases": None,          # free-form keys
    "caps": {f.name for f in fields(Caps)},
}

_NAME = re.compile(r"[A-Za-z0-9_']+$")
_ARROW = re.compile(r"\s*([A-Za-z0-9_']+)\s*:\s*([A-Za-z0-9_']+)\s*->\s*([A-Za-z0-9_']+)\s*$")
_TERM = re.compile(r"\s*([+-]?)\s*(\d+)?\s*\*?\s*([A-Za-z_][A-Za-z0-9_']*(?:\s*\*\s*"
                   r"[A-Za-z_][A-Za-z0-9_']*)*)\s*")


class ScenarioError(ValueError):
    """A parse or validation error, located by 1-based line and column when known."""

    def __init__(self, msg: str, line: Optional[int] = None, col: Optional[int] = None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.msg = msg
        self.line = line
        self.col = col


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    p: int
    vertices: Tuple[str, ...]
    arrows: Tuple[Tuple[str, str, str], ...]
    relations: Tuple[Tuple[Tuple[int, Tuple[str, ...]], ...], ...]


@dataclass(frozen=True)
class CategorySpec:
    construction: str
    ambient: str = "morphism_category"
    objects: Tuple[str, ...] = ()
    bounds: Tuple[int, ...] = ()          # empty: default bound 2 at every vertex
    strategy: str = "scan"
    multiplicity: int = 1                 # for the triples strategy


@dataclass(frozen=True)
class RecollementSpec:
    left: Tuple[str, ...] = ("*",)
    right: Tuple[str, ...] = ("*",)
    overrides: Tuple[Tuple[str, str], ...] = ()   # (tag, tag whose handle is used instead)


@dataclass(frozen=True)
class Scenario:
    name: str
    algebra: AlgebraSpec
    category: CategorySpec
    recollement: Optional[RecollementSpec]
    aliases: Tuple[Tuple[str, str], ...] = ()
    caps: Caps = Caps()
    where: Dict[str, Tuple[int, int]] = field(default_factory=dict, compare=False, hash=False,
                                              repr=False)

    def to_json(self) -> dict:
        rec = None
        if self.recollement is not None:
            rec = {"left": list(self.recollement.left), "right": list(self.recollement.right),
                   "overrides": [list(o) for o in self.recollement.overrides]}
        a = self.algebra
        return {
            "algebra": {"name": a.name, "field": a.p, "vertices": list(a.vertices),
                        "arrows": [list(x) for x in a.arrows],
                        "relations": [[[c, list(pth)] for c, pth in r] for r in a.relations]},
            "category": {"construction": self.category.construction,
                         "ambient": self.category.ambient,
                         "objects": list(self.category.objects),
                         "bounds": list(self.category.bounds),
                         "strategy": self.category.strategy,
                         "multiplicity": self.category.multiplicity},
            "recollement": rec,
            "aliases": [list(x) for x in self.aliases],
        }

    @property
    def digest(self) -> str:
        """Hash of the normalized scenario (caps excluded; reports list them separately)."""
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def located(self, key: str) -> Tuple[Optional[int], Optional[int]]:
        return self.where.get(key, (None, None))


# ---------------------------------------------------------------------------
# lexing
# ---------------------------------------------------------------------------


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def _sections(text: str) -> Dict[str, Dict[str, Tuple[str, int, int]]]:
    """``{section: {key: (value, line, value column)}}`` with unknown names rejected."""
    out: Dict[str, Dict[str, Tuple[str, int, int]]] = {}
    current: Optional[str] = None
    last_key: Optional[str] = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).rstrip()
        if not body.strip():
            continue
        stripped = body.lstrip()
        col0 = len(body) - len(stripped) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ScenarioError("unterminated section header", ln, len(body) + 1)
            name = stripped[1:-1].strip()
            if name not in SECTION_KEYS:
                raise ScenarioError(f"unknown section [{name}]", ln, col0 + 1)
            if name in out:
                raise ScenarioError(f"duplicate section [{name}]", ln, col0 + 1)
            out[name] = {}
            current, last_key = name, None
            continue
        if col0 > 1 and "=" not in stripped:
            # continuation of the previous value
            if current is None or last_key is None:
                raise ScenarioError("continuation line without a key", ln, col0)
            v, l0, c0 = out[current][last_key]
            out[current][last_key] = (v + " " + stripped, l0, c0)
            continue
        if current is None:
            raise ScenarioError("key outside of any section", ln, col0)
        if "=" not in stripped:
            raise ScenarioError("expected 'key = value'", ln, col0)
        key, _, value = stripped.partition("=")
        key = key.strip()
        if not key:
            raise ScenarioError("missing key", ln, col0)
        allowed = SECTION_KEYS[current]
        if allowed is not None and key not in allowed:
            raise ScenarioError(f"unknown key {key!r} in [{current}]", ln, col0)
        if key in out[current]:
            raise ScenarioError(f"duplicate key {key!r}", ln, col0)
        vcol = body.index("=") + 2 + (len(value) - len(value.lstrip()))
        out[current][key] = (value.strip(), ln, vcol)
        last_key = key
    return out


def _split_list(value: str) -> Tuple[str, ...]:
    return tuple(x.strip() for x in value.split(",") if x.strip())


def _int(value: str, ln: int, col: int, what: str, minimum: int = 1) -> int:
    try:
        n = int(value)
    except ValueError:
        raise ScenarioError(f"{what} must be an integer, got {value!r}", ln, col) from None
    if n < minimum:
        raise ScenarioError(f"{what} must be >= {minimum}", ln, col)
    return n


def _parse_relation(text: str, ln: int, col: int) -> Tuple[Tuple[int, Tuple[str, ...]], ...]:
    terms = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ScenarioError(f"cannot parse relation term at {text[pos:]!r}", ln, col + pos)
        if terms and not m.group(1):
            raise ScenarioError("expected '+' or '-' between relation terms", ln, col + pos)
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        word = [w.strip() for w in m.group(3).split("*")]
        terms.append((sign * coef, tuple(reversed(word))))
        pos = m.end()
    if not terms:
        raise ScenarioError("empty relation", ln, col)
    return tuple(terms)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def parse_scenario(text: str, name: str = "<scenario>") -> Scenario:
    """Parse and validate a scenario file (object names are resolved later,
    against the computed catalogs)."""
    if not text.strip() or not any(_strip_comment(l).strip() for l in text.splitlines()):
        raise ScenarioError("empty scenario", 1, 1)
    sec = _sections(text)
    where: Dict[str, Tuple[int, int]] = {}
    for s, kv in sec.items():
        for k, (_, ln, col) in kv.items():
            where[f"{s}.{k}"] = (ln, col)

    if "algebra" not in sec:
        raise ScenarioError("missing [algebra] section", 1, 1)
    alg = sec["algebra"]

    def need(section, key):
        if key not in section:
            raise ScenarioError(f"missing required key {key!r}", 1, 1)
        return section[key]

    v, ln, col = alg.get("field", ("2", 0, 0))
    p = _int(v, ln, col, "field", minimum=2)
    if not is_prime(p):
        raise ScenarioError(f"field size {p} is not prime", ln, col)
    v, ln, col = need(alg, "vertices")
    vertices = _split_list(v)
    if not vertices:
        raise ScenarioError("at least one vertex is required", ln, col)
    for x in vertices:
        if not _NAME.match(x):
            raise ScenarioError(f"bad vertex label {x!r}", ln, col + v.find(x))
    if len(set(vertices)) != len(vertices):
        raise ScenarioError("duplicate vertex label", ln, col)
    arrows: List[Tuple[str, str, str]] = []
    if "arrows" in alg:
        v, ln, col = alg["arrows"]
        offset = 0
        for part in v.split(","):
            if part.strip():
                m = _ARROW.match(part)
                if not m:
                    raise ScenarioError(f"expected 'label: source -> target', got {part.strip()!r}",
                                        ln, col + offset)
                lab, s, t = m.groups()
                for end in (s, t):
                    if end not in vertices:
                        raise ScenarioError(f"arrow {lab} uses unknown vertex {end!r}", ln,
                                            col + offset + part.find(end))
                arrows.append((lab, s, t))
            offset += len(part) + 1
    labels = {a[0] for a in arrows}
    relations = []
    if "relations" in alg:
        v, ln, col = alg["relations"]
        offset = 0
        for part in v.split(";"):
            if part.strip():
                rel = _parse_relation(part, ln, col + offset)
                for _, pth in rel:
                    for a in pth:
                        if a not in labels:
                            raise ScenarioError(f"relation uses unknown arrow {a!r}", ln,
                                                col + offset + part.find(a))
                relations.append(rel)
            offset += len(part) + 1
    aname = alg.get("name", ("", 0, 0))[0]
    algebra = AlgebraSpec(aname, p, vertices, tuple(arrows), tuple(relations))

    cat = sec.get("category", {})      # default: the plain module category
    v, ln, col = cat.get("construction", ("modules", 0, 0))
    if v not in CONSTRUCTIONS:
        raise ScenarioError(f"construction must be one of {', '.join(CONSTRUCTIONS)}", ln, col)
    construction = v
    ambient = "morphism_category"
    objects: Tuple[str, ...] = ()
    if construction == "subcategory":
        av, aln, acol = cat.get("ambient", ("morphism_category", 0, 0))
        if av not in ("modules", "morphism_category"):
            raise ScenarioError("ambient must be modules or morphism_category", aln, acol)
        ambient = av
        ov, oln, ocol = need(cat, "objects")
        objects = _split_list(ov)
        if not objects:
            raise ScenarioError("objects list is empty", oln, ocol)
    else:
        for k in ("ambient", "objects"):
            if k in cat:
                raise ScenarioError(f"{k!r} only applies to construction = subcategory",
                                    *cat[k][1:])
        ambient = construction
    bounds: Tuple[int, ...] = ()
    if "bounds" in cat:
        v, ln, col = cat["bounds"]
        bounds = tuple(_int(x, ln, col, "bound") for x in _split_list(v))
        if len(bounds) not in (1, len(vertices)):
            raise ScenarioError("bounds: give one value or one per vertex", ln, col)
    strategy = cat.get("strategy", ("scan", 0, 0))
    if strategy[0] not in STRATEGIES:
        raise ScenarioError("strategy must be scan or triples", strategy[1], strategy[2])
    mult = 1
    if "multiplicity" in cat:
        mult = _int(*cat["multiplicity"], "multiplicity")
    category = CategorySpec(construction, ambient, objects, bounds, strategy[0], mult)

    recollement = None
    if "recollement" in sec:
        if ambient != "morphism_category":
            ln, col = sec["recollement"][next(iter(sec["recollement"]))][1:] \
                if sec["recollement"] else (1, 1)
            raise ScenarioError("a recollement needs a morphism-category construction", ln, col)
        r = sec["recollement"]
        left = _split_list(r["left"][0]) if "left" in r else ("*",)
        right = _split_list(r["right"][0]) if "right" in r else ("*",)
        overrides = []
        for tag in TAGS:
            if tag in r:
                v, ln, col = r[tag]
                try:
                    overrides.append((tag, canonical_tag(v)))
                except KeyError:
                    raise ScenarioError(f"unknown functor tag {v!r}", ln, col) from None
        recollement = RecollementSpec(left, right, tuple(overrides))

    aliases = []
    for k, (v, ln, col) in sec.get("aliases", {}).items():
        if not v:
            raise ScenarioError(f"alias {k!r} has no value", ln, col)
        aliases.append((k, v))

    caps_kw = {}
    for k, (v, ln, col) in sec.get("caps", {}).items():
        caps_kw[k] = _int(v, ln, col, k, minimum=0 if k == "seed" else 1)
    return Scenario(name, algebra, category, recollement, tuple(aliases), Caps(**caps_kw), where)


def builtin_text(name: str) -> str:
    if name not in BUILTINS:
        raise KeyError(f"unknown built-in scenario {name!r}; choose from {', '.join(BUILTINS)}")
    return resources.files("extricat.shell").joinpath("scenarios", f"{name}.exs").read_text()


def builtin_scenario(name: str) -> Scenario:
    return parse_scenario(builtin_text(name), name)


def load_scenario(ref: str) -> Scenario:
    """A built-in scenario name or a path to a scenario file."""
    if ref in BUILTINS:
        return builtin_scenario(ref)
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {ref!r}: {exc.strerror}") from None
    return parse_scenario(text, ref)
