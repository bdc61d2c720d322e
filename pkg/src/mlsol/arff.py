"""Minimal ARFF reader/writer for Mulan-style multi-label files.

Handles numeric and nominal attributes, dense and sparse (``{i v, ...}``)
data rows, quoted names and ``%`` comments. String, date and relational
attributes are not supported.
"""
import csv
import math
import re
from dataclasses import dataclass, field


class ArffError(ValueError):
    """Malformed ARFF content. ``line`` is 1-based when known."""

    def __init__(self, message, line=None, attribute=None):
        self.line = line
        self.attribute = attribute
        where = []
        if line is not None:
            where.append(f"line {line}")
        if attribute is not None:
            where.append(f"attribute {attribute!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


@dataclass
class Attribute:
    name: str
    kind: str  # "numeric" or "nominal"
    values: tuple = ()
    line: int = 0


@dataclass
class ArffData:
    relation: str
    attributes: list
    rows: list = field(default_factory=list)  # list of (line_no, list[str | None])


_NUMERIC_TYPES = {"numeric", "real", "integer"}


def _split_fields(text):
    reader = csv.reader([text], delimiter=",", quotechar="'", skipinitialspace=True)
    out = next(reader, [])
    return [f.strip().strip('"') for f in out]


def _parse_attribute(rest, line_no):
    rest = rest.strip()
    if rest.startswith(("'", '"')):
        quote = rest[0]
        end = rest.find(quote, 1)
        if end < 0:
            raise ArffError("unterminated quoted attribute name", line_no)
        name, spec = rest[1:end], rest[end + 1:].strip()
    else:
        parts = rest.split(None, 1)
        if len(parts) != 2:
            raise ArffError("attribute declaration without a type", line_no)
        name, spec = parts
    if spec.startswith("{"):
        if not spec.endswith("}"):
            raise ArffError("unterminated nominal value list", line_no, name)
        values = tuple(v for v in _split_fields(spec[1:-1]) if v != "")
        return Attribute(name, "nominal", values, line_no)
    if spec.lower() in _NUMERIC_TYPES:
        return Attribute(name, "numeric", (), line_no)
    raise ArffError(f"unsupported attribute type {spec!r}", line_no, name)


def read_arff(path):
    """Parse ``path`` into an :class:`ArffData` holding raw string cells.

    Missing cells (``?``) are kept as ``None``; sparse rows are expanded with
    ``"0"`` for omitted entries.
    """
    relation = ""
    attributes = []
    rows = []
    in_data = False
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            if not in_data:
                lower = line.lower()
                if lower.startswith("@relation"):
                    relation = line[len("@relation"):].strip().strip("'\"")
                elif lower.startswith("@attribute"):
                    attributes.append(_parse_attribute(line[len("@attribute"):], line_no))
                elif lower.startswith("@data"):
                    in_data = True
                else:
                    raise ArffError(f"unexpected header line {line!r}", line_no)
                continue
            n_attr = len(attributes)
            if line.startswith("{"):
                if not line.endswith("}"):
                    raise ArffError("unterminated sparse row", line_no)
                cells = ["0"] * n_attr
                body = line[1:-1].strip()
                if body:
                    for entry in _split_fields(body):
                        parts = entry.split(None, 1)
                        if len(parts) != 2:
                            raise ArffError(f"bad sparse entry {entry!r}", line_no)
                        try:
                            idx = int(parts[0])
                        except ValueError:
                            raise ArffError(f"bad sparse index {parts[0]!r}", line_no) from None
                        if not 0 <= idx < n_attr:
                            raise ArffError(f"sparse index {idx} out of range", line_no)
                        cells[idx] = parts[1].strip().strip("'\"")
            else:
                cells = _split_fields(line)
                if len(cells) != n_attr:
                    raise ArffError(f"expected {n_attr} values, found {len(cells)}", line_no)
            rows.append((line_no, [None if c == "?" else c for c in cells]))
    if not in_data:
        raise ArffError("no @data section")
    return ArffData(relation, attributes, rows)


def _quote(name):
    if re.search(r"[\s,{}%'\"]", name) or not name:
        return "'" + name.replace("'", "\\'") + "'"
    return name


def format_float(value):
    """Shortest decimal string that round-trips to the same double."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite value {value!r}")
    return repr(value)


def write_arff(path, relation, feature_names, features, label_names, labels):
    """Write a dense ARFF with numeric features followed by ``{0,1}`` labels."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"@relation {_quote(relation or 'dataset')}\n\n")
        for name in feature_names:
            fh.write(f"@attribute {_quote(name)} numeric\n")
        for name in label_names:
            fh.write(f"@attribute {_quote(name)} {{0,1}}\n")
        fh.write("\n@data\n")
        for x_row, y_row in zip(features, labels):
            cells = [format_float(v) for v in x_row] + [str(int(v)) for v in y_row]
            fh.write(",".join(cells) + "\n")


def write_label_xml(path, label_names):
    """Write a Mulan label descriptor listing ``label_names``."""
    from xml.sax.saxutils import quoteattr

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write('<?xml version="1.0" encoding="utf-8"?>\n')
        fh.write('<labels xmlns="http://mulan.sourceforge.net/labels">\n')
        for name in label_names:
            fh.write(f"<label name={quoteattr(name)}></label>\n")
        fh.write("</labels>\n")
