"""Allocation schema (relation-site matrix) and relation/join statistics.

The relation-site matrix is a CSV document::

    site,R1,R2,R3
    1,1,0,1
    2,0,1,1

Cells are strictly ``0`` or ``1``; a ``1`` means the site stores a full
replica of the relation. Fragmented allocation has no syntax.

The catalog is a YAML document::

    relations:
      R1: {tuple_count: 1000, selectivity: 0.5}
      R2: {tuple_count: 250, selectivity: 0.2}
    joins:
      R1,R2: 0.02        # unordered pair, either order accepted
      default: 0.01      # used for any pair not listed

``tuple_count`` is a nonnegative integer; every selectivity lies in [0, 1].
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np
import yaml
from yaml.constructor import SafeConstructor

from .errors import ParseError, UnknownRelationError, ValidationError

__all__ = [
    "RelationSiteMatrix",
    "RelationStats",
    "Catalog",
    "load_rsm",
    "render_rsm",
    "sites_holding",
    "load_catalog",
    "render_catalog",
    "uniform_catalog",
]


@dataclass(frozen=True, eq=False)
class RelationSiteMatrix:
    """Binary allocation of relations to sites.

    ``cells[s, r]`` is True when ``sites[s]`` stores ``relations[r]``.
    """

    sites: tuple
    relations: tuple
    cells: np.ndarray
    _holding: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        relations = tuple(str(r) for r in self.relations)
        cells = np.array(self.cells, dtype=bool)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "relations", relations)
        if cells.shape != (len(sites), len(relations)):
            raise ValidationError(
                f"cell grid has shape {cells.shape}, expected "
                f"({len(sites)}, {len(relations)})"
            )
        if not relations:
            raise ValidationError("matrix has no relations")
        if any(s < 1 for s in sites):
            raise ValidationError("site ids must be positive integers")
        if len(set(sites)) != len(sites):
            dup = sorted({s for s in sites if sites.count(s) > 1})
            raise ValidationError(f"duplicate site id {dup[0]}")
        if len(set(relations)) != len(relations):
            dup = sorted({r for r in relations if relations.count(r) > 1})
            raise ValidationError(f"duplicate relation {dup[0]}")
        empty = [r for r, col in zip(relations, cells.T) if not col.any()]
        if empty:
            raise ValidationError(f"{empty[0]} stored nowhere")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        sites_arr = np.array(sites)
        holding = {
            r: tuple(sorted(int(s) for s in sites_arr[cells[:, j]]))
            for j, r in enumerate(relations)
        }
        object.__setattr__(self, "_holding", holding)

    @property
    def n_sites(self):
        return len(self.sites)

    def stores(self, site, relation):
        """True when ``site`` holds a replica of ``relation``."""
        if relation not in self._holding:
            raise UnknownRelationError(f"unknown relation {relation!r}")
        return site in self._holding[relation]

    def sites_holding(self, relation):
        try:
            return list(self._holding[relation])
        except KeyError:
            raise UnknownRelationError(f"unknown relation {relation!r}") from None

    def __eq__(self, other):
        if not isinstance(other, RelationSiteMatrix):
            return NotImplemented
        return (
            self.sites == other.sites
            and self.relations == other.relations
            and np.array_equal(self.cells, other.cells)
        )

    def __hash__(self):
        return hash((self.sites, self.relations, self.cells.tobytes()))


def sites_holding(rsm, relation):
    """Site ids storing ``relation``, ascending."""
    return rsm.sites_holding(relation)


def load_rsm(text):
    """Parse a relation-site matrix from CSV text."""
    rows = [row for row in csv.reader(io.StringIO(text))]
    # keep physical line numbers while skipping blank lines
    numbered = [(i + 1, [c.strip() for c in row]) for i, row in enumerate(rows)]
    numbered = [(n, row) for n, row in numbered if any(row)]
    if not numbered:
        raise ParseError("empty relation-site matrix", line=1)
    header_line, header = numbered[0]
    if header[0].lower() != "site":
        raise ParseError("header must start with 'site'", line=header_line, column=1)
    relations = header[1:]
    if not relations or any(not r for r in relations):
        raise ParseError("header must name at least one relation", line=header_line)

    sites, cells = [], []
    for lineno, row in numbered[1:]:
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, got {len(row)}", line=lineno
            )
        try:
            site = int(row[0])
        except ValueError:
            raise ParseError(f"bad site id {row[0]!r}", line=lineno, column=1) from None
        values = []
        for col, cell in enumerate(row[1:], start=2):
            if cell not in ("0", "1"):
                raise ParseError(
                    f"cell for site {site}, {header[col - 1]} must be 0 or 1, got {cell!r}",
                    line=lineno,
                    column=col,
                )
            values.append(cell == "1")
        sites.append(site)
        cells.append(values)
    if not sites:
        raise ParseError("matrix has no site rows", line=header_line + 1)
    return RelationSiteMatrix(tuple(sites), tuple(relations), np.array(cells, dtype=bool))


def render_rsm(rsm):
    """Inverse of :func:`load_rsm`."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["site", *rsm.relations])
    for site, row in zip(rsm.sites, rsm.cells):
        writer.writerow([site, *("1" if c else "0" for c in row)])
    return out.getvalue()


@dataclass(frozen=True)
class RelationStats:
    tuple_count: int
    selectivity: float


@dataclass(frozen=True)
class Catalog:
    """Relation cardinalities, local selectivities and join selectivities.

    ``join_selectivity`` is keyed by ``frozenset({a, b})`` so lookups are
    symmetric.
    """

    relation_stats: dict
    join_selectivity: dict = field(default_factory=dict)
    default_join_selectivity: float = 0.01

    def __post_init__(self):
        for name, st in self.relation_stats.items():
            if int(st.tuple_count) != st.tuple_count or st.tuple_count < 0:
                raise ValidationError(f"{name}: tuple_count must be a nonnegative integer")
            _check_unit(st.selectivity, f"{name}: selectivity")
        for pair, s in self.join_selectivity.items():
            if len(pair) != 2:
                raise ValidationError(f"join pair {sorted(pair)} must name two relations")
            _check_unit(s, f"join {','.join(sorted(pair))}")
        _check_unit(self.default_join_selectivity, "default join selectivity")

    def stats(self, relation):
        try:
            return self.relation_stats[relation]
        except KeyError:
            raise UnknownRelationError(f"no statistics for relation {relation!r}") from None

    def tuple_count(self, relation):
        return self.stats(relation).tuple_count

    def selectivity(self, relation):
        return self.stats(relation).selectivity

    def join_sel(self, a, b):
        """Join selectivity of the unordered pair (a, b)."""
        return self.join_selectivity.get(frozenset((a, b)), self.default_join_selectivity)

    def covers(self, relations):
        missing = [r for r in relations if r not in self.relation_stats]
        if missing:
            raise ValidationError(f"relation {missing[0]} has no statistics in the catalog")


def _check_unit(value, what):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not 0.0 <= value <= 1.0:
        raise ValidationError(f"{what} must be a real in [0, 1], got {value!r}")


def uniform_catalog(relations, tuple_count=1000, selectivity=0.5, default_join=0.01):
    """Catalog giving every relation the same statistics."""
    stats = {r: RelationStats(tuple_count, selectivity) for r in relations}
    return Catalog(stats, {}, default_join)


def _line(node):
    return node.start_mark.line + 1


def load_catalog(text, rsm=None):
    """Parse a catalog from YAML text.

    When ``rsm`` is given, every relation it names must have statistics.
    Errors cite the 1-based line of the offending entry.
    """
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(
            f"catalog is not valid YAML: {getattr(exc, 'problem', exc)}",
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
        ) from None
    if root is None:
        raise ParseError("empty catalog document", line=1)
    if not isinstance(root, yaml.MappingNode):
        raise ParseError("catalog must be a mapping", line=_line(root))

    construct = SafeConstructor().construct_object
    sections = {}
    for key, value in root.value:
        name = construct(key)
        if name not in ("relations", "joins"):
            raise ParseError(f"unknown section {name!r}", line=_line(key))
        sections[name] = value
    if "relations" not in sections:
        raise ParseError("missing 'relations' section", line=1)

    rel_node = sections["relations"]
    if not isinstance(rel_node, yaml.MappingNode):
        raise ParseError("'relations' must map names to statistics", line=_line(rel_node))
    stats = {}
    for key, value in rel_node.value:
        name = str(construct(key))
        entry = construct(value, deep=True)
        if not isinstance(entry, dict) or set(entry) != {"tuple_count", "selectivity"}:
            raise ParseError(
                f"{name}: expected exactly tuple_count and selectivity", line=_line(key)
            )
        tc, sel = entry["tuple_count"], entry["selectivity"]
        if not isinstance(tc, int) or isinstance(tc, bool) or tc < 0:
            raise ValidationError(
                f"{name}: tuple_count must be a nonnegative integer (line {_line(key)})"
            )
        if isinstance(sel, int) and not isinstance(sel, bool):
            sel = float(sel)
        try:
            _check_unit(sel, f"{name}: selectivity")
        except ValidationError as exc:
            raise ValidationError(f"{exc} (line {_line(key)})") from None
        if name in stats:
            raise ValidationError(f"duplicate relation {name} (line {_line(key)})")
        stats[name] = RelationStats(tc, sel)

    joins, default = {}, 0.01
    join_node = sections.get("joins")
    if join_node is not None:
        if not isinstance(join_node, yaml.MappingNode):
            raise ParseError("'joins' must be a mapping", line=_line(join_node))
        for key, value in join_node.value:
            name = str(construct(key))
            sel = construct(value)
            if isinstance(sel, int) and not isinstance(sel, bool):
                sel = float(sel)
            try:
                _check_unit(sel, f"join {name}")
            except ValidationError as exc:
                raise ValidationError(f"{exc} (line {_line(key)})") from None
            if name == "default":
                default = sel
                continue
            parts = [p.strip() for p in name.split(",")]
            if len(parts) != 2 or not all(parts) or parts[0] == parts[1]:
                raise ParseError(f"join key {name!r} must be 'A,B'", line=_line(key))
            for p in parts:
                if p not in stats:
                    raise ValidationError(
                        f"join {name} names relation {p} without statistics (line {_line(key)})"
                    )
            joins[frozenset(parts)] = sel

    catalog = Catalog(stats, joins, default)
    if rsm is not None:
        catalog.covers(rsm.relations)
    return catalog


def _fmt(x):
    # YAML 1.1 floats need a dot before the exponent
    s = repr(float(x))
    if "e" in s and "." not in s:
        s = s.replace("e", ".0e")
    return s


def render_catalog(catalog):
    """Inverse of :func:`load_catalog` (YAML text)."""
    lines = ["relations:"]
    for name, st in catalog.relation_stats.items():
        lines.append(
            f"  {name}: {{tuple_count: {st.tuple_count}, selectivity: {_fmt(st.selectivity)}}}"
        )
    lines.append("joins:")
    for pair, sel in sorted(catalog.join_selectivity.items(), key=lambda kv: sorted(kv[0])):
        a, b = sorted(pair)
        lines.append(f"  {a},{b}: {_fmt(sel)}")
    lines.append(f"  default: {_fmt(catalog.default_join_selectivity)}")
    return "\n".join(lines) + "\n"
