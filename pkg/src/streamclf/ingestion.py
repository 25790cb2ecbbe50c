"""Streaming CSV/ARFF readers and single-pass incremental normalization.

Files are consumed record-by-record in constant memory. CSV schemas come
from a declared inference prepass (kinds, nominal domains, class values,
row count); ARFF schemas come from the header declarations.
"""

from __future__ import annotations

import csv
import gzip
import math

import numpy as np

from .core import AttributeSpec, Instance, InstanceStream, Schema, make_schema

__all__ = [
    "StreamFormatError",
    "CsvStream",
    "ArffStream",
    "Normalizer",
    "NormalizedStream",
    "open_stream",
    "arff_to_csv",
]

MISSING_TOKENS = {"", "?"}

# schema inference stops tracking a column's distinct values past this;
# numeric columns don't need them and wider nominal domains are rejected
MAX_NOMINAL_DOMAIN = 1000


class StreamFormatError(ValueError):
    """Malformed input file; message carries the offending line number."""


def _try_float(token: str):
    try:
        return float(token)
    except ValueError:
        return None


def _open_text(path: str):
    if path.endswith(".gz"):
        return gzip.open(path, "rt", newline="")
    return open(path, newline="")


class CsvStream(InstanceStream):
    """Streams a CSV file as instances.

    Without an explicit schema a single inference prepass decides, per
    column, numeric vs nominal (domain in first-appearance order), collects
    the class values, detects a header row, and counts records. The data
    pass afterwards reads each record exactly once.

    Parameters
    ----------
    path: CSV file path.
    class_column: index of the class column (default -1, the last).
    header: 'auto' (detect), 'yes', or 'no'.
    schema: skip inference and validate rows against this schema.
    """

    def __init__(self, path, class_column: int = -1, header: str = "auto",
                 schema: Schema | None = None):
        self.path = str(path)
        self.class_column = class_column
        self.header = header
        if header not in ("auto", "yes", "no"):
            raise ValueError("header must be 'auto', 'yes', or 'no'")
        self.n_instances = None
        if schema is not None:
            self.schema = schema
            self._has_header = header == "yes"
            n_cols = schema.n_attributes + 1
            cls = class_column if class_column >= 0 else n_cols + class_column
            if not 0 <= cls < n_cols:
                raise StreamFormatError(f"{path}: class column {class_column} out of range")
            self._class_index = cls
            maps: list[dict | None] = []
            attrs = iter(schema.attributes)
            for j in range(n_cols):
                if j == cls:
                    maps.append(None)
                    continue
                a = next(attrs)
                maps.append(None if a.values is None else {v: i for i, v in enumerate(a.values)})
            self._nominal_maps = maps
            self._class_map = {v: i for i, v in enumerate(schema.class_values)}
        else:
            self._infer_schema()

    def _infer_schema(self):
        with _open_text(self.path) as fh:
            reader = csv.reader(fh)
            try:
                first = [t.strip() for t in next(reader)]
            except StopIteration:
                raise StreamFormatError(f"{self.path}: empty file") from None
            n_cols = len(first)
            numeric_ok = [True] * n_cols
            domains: list[dict] = [dict() for _ in range(n_cols)]
            # numeric columns with huge value sets stop accumulating domains
            # (constant memory); they only error if they turn out nominal
            saturated = [False] * n_cols
            count = 0

            def see(row, line_no):
                nonlocal count
                if len(row) != n_cols:
                    raise StreamFormatError(
                        f"{self.path}:{line_no}: expected {n_cols} columns, got {len(row)}"
                    )
                for j, tok in enumerate(row):
                    tok = tok.strip()
                    if tok in MISSING_TOKENS:
                        continue
                    if numeric_ok[j] and _try_float(tok) is None:
                        numeric_ok[j] = False
                    if saturated[j]:
                        if not numeric_ok[j]:
                            raise StreamFormatError(
                                f"{self.path}:{line_no}: column {j} is non-numeric with more "
                                f"than {MAX_NOMINAL_DOMAIN} distinct values"
                            )
                        continue
                    dom = domains[j]
                    if tok not in dom:
                        if len(dom) >= MAX_NOMINAL_DOMAIN:
                            if not numeric_ok[j]:
                                raise StreamFormatError(
                                    f"{self.path}:{line_no}: column {j} is non-numeric with more "
                                    f"than {MAX_NOMINAL_DOMAIN} distinct values"
                                )
                            saturated[j] = True
                            dom.clear()
                            continue
                        dom[tok] = len(dom)
                count += 1

            for line_no, row in enumerate(reader, start=2):
                if row:
                    see(row, line_no)

        # header detection: the first row is a header when it has a
        # non-numeric entry in a column that is numeric in every data row
        if self.header == "yes":
            self._has_header = True
        elif self.header == "no" or count == 0:
            self._has_header = False
        else:
            self._has_header = any(
                ok and tok not in MISSING_TOKENS and _try_float(tok) is None
                for ok, tok in zip(numeric_ok, first)
            )
        names = first if self._has_header else None
        if not self._has_header:
            # the first row is data: fold it in, keeping first-appearance order
            for j, tok in enumerate(first):
                if tok in MISSING_TOKENS:
                    continue
                if numeric_ok[j] and _try_float(tok) is None:
                    numeric_ok[j] = False
                if saturated[j]:
                    if not numeric_ok[j]:
                        raise StreamFormatError(
                            f"{self.path}: column {j} is non-numeric with more than "
                            f"{MAX_NOMINAL_DOMAIN} distinct values"
                        )
                    continue
                if tok in domains[j]:
                    reordered = dict.fromkeys([tok])
                    reordered.update(domains[j])
                    domains[j] = {t: i for i, t in enumerate(reordered)}
                else:
                    domains[j] = {t: i for i, t in enumerate([tok] + list(domains[j]))}
            count += 1

        cls = self.class_column if self.class_column >= 0 else n_cols + self.class_column
        if not 0 <= cls < n_cols:
            raise StreamFormatError(f"{self.path}: class column {self.class_column} out of range")
        if saturated[cls]:
            raise StreamFormatError(
                f"{self.path}: class column {cls} has more than {MAX_NOMINAL_DOMAIN} distinct "
                f"values; it looks continuous, not categorical"
            )
        self._class_index = cls
        self._class_names = list(domains[cls].keys())
        specs = []
        for j in range(n_cols):
            if j == cls:
                continue
            name = names[j] if names else f"col{j}"
            if numeric_ok[j]:
                specs.append(AttributeSpec(name))
            else:
                specs.append(AttributeSpec(name, tuple(domains[j].keys())))
        self.schema = make_schema(specs, self._class_names)
        self.n_instances = count
        self._nominal_maps = [
            None if numeric_ok[j] else domains[j] for j in range(n_cols)
        ]
        self._class_map = domains[cls]

    def __iter__(self):
        cls = self._class_index
        maps = self._nominal_maps
        class_map = self._class_map
        n_cols = len(maps)
        n_attrs = self.schema.n_attributes
        with _open_text(self.path) as fh:
            reader = csv.reader(fh)
            if self._has_header:
                next(reader, None)
            start = 2 if self._has_header else 1
            for line_no, row in enumerate(reader, start=start):
                if not row:
                    continue
                if len(row) != n_cols:
                    raise StreamFormatError(
                        f"{self.path}:{line_no}: expected {n_cols} columns, got {len(row)}"
                    )
                values = np.empty(n_attrs)
                k = 0
                label = -1
                for j, tok in enumerate(row):
                    tok = tok.strip()
                    if j == cls:
                        if tok not in class_map:
                            raise StreamFormatError(
                                f"{self.path}:{line_no}: unknown class value {tok!r}"
                            )
                        label = class_map[tok]
                        continue
                    if tok in MISSING_TOKENS:
                        values[k] = math.nan
                    elif maps[j] is None:
                        v = _try_float(tok)
                        if v is None:
                            raise StreamFormatError(
                                f"{self.path}:{line_no}: non-numeric value {tok!r} in numeric column {j}"
                            )
                        values[k] = v
                    else:
                        if tok not in maps[j]:
                            raise StreamFormatError(
                                f"{self.path}:{line_no}: unknown nominal value {tok!r} in column {j}"
                            )
                        values[k] = maps[j][tok]
                    k += 1
                yield Instance(values, label)


class ArffStream(InstanceStream):
    """Streams the dense subset of ARFF: @relation, @attribute, @data.

    The last declared attribute is the class. Nominal domains come from the
    header; '?' marks a missing value. Sparse ARFF rows are unsupported.
    """

    def __init__(self, path):
        self.path = str(path)
        self._parse_header()

    def _parse_header(self):
        attrs: list[tuple[str, tuple | None]] = []
        data_line = None
        with open(self.path) as fh:
            for line_no, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("%"):
                    continue
                low = line.lower()
                if low.startswith("@relation"):
                    continue
                if low.startswith("@attribute"):
                    attrs.append(self._parse_attribute(line, line_no))
                elif low.startswith("@data"):
                    data_line = line_no
                    break
                else:
                    raise StreamFormatError(f"{self.path}:{line_no}: unexpected line {line!r}")
        if data_line is None:
            raise StreamFormatError(f"{self.path}: missing @data section")
        if len(attrs) < 2:
            raise StreamFormatError(f"{self.path}: need at least one attribute plus a class")
        class_name, class_domain = attrs[-1]
        if class_domain is None:
            raise StreamFormatError(f"{self.path}: class attribute {class_name!r} must be nominal")
        self._data_line = data_line
        self._attr_domains = [dom for _, dom in attrs[:-1]]
        self._class_map = {v: i for i, v in enumerate(class_domain)}
        self.schema = make_schema(
            [AttributeSpec(name, dom) for name, dom in attrs[:-1]], class_domain
        )
        # count data rows so prequential windowing knows the stream length
        count = 0
        with open(self.path) as fh:
            for i, raw in enumerate(fh, start=1):
                if i <= data_line:
                    continue
                line = raw.strip()
                if line and not line.startswith("%"):
                    count += 1
        self.n_instances = count

    def _parse_attribute(self, line, line_no):
        body = line[len("@attribute"):].strip()
        if "{" in body:
            name, _, rest = body.partition("{")
            domain, closing, _ = rest.partition("}")
            if not closing:
                raise StreamFormatError(f"{self.path}:{line_no}: unterminated nominal domain")
            values = tuple(v.strip().strip("'\"") for v in domain.split(","))
            return name.strip().strip("'\""), values
        parts = body.split()
        if len(parts) < 2:
            raise StreamFormatError(f"{self.path}:{line_no}: malformed @attribute")
        name = " ".join(parts[:-1]).strip().strip("'\"")
        kind = parts[-1].lower()
        if kind in ("numeric", "real", "integer"):
            return name, None
        if kind in ("string", "date"):
            raise StreamFormatError(f"{self.path}:{line_no}: unsupported attribute type {kind!r}")
        raise StreamFormatError(f"{self.path}:{line_no}: unknown attribute type {kind!r}")

    def __iter__(self):
        domains = self._attr_domains
        n_attrs = len(domains)
        maps = [None if d is None else {v: i for i, v in enumerate(d)} for d in domains]
        with open(self.path) as fh:
            for line_no, raw in enumerate(fh, start=1):
                if line_no <= self._data_line:
                    continue
                line = raw.strip()
                if not line or line.startswith("%"):
                    continue
                if line.startswith("{"):
                    raise StreamFormatError(f"{self.path}:{line_no}: sparse ARFF unsupported")
                row = [t.strip().strip("'\"") for t in line.split(",")]
                if len(row) != n_attrs + 1:
                    raise StreamFormatError(
                        f"{self.path}:{line_no}: expected {n_attrs + 1} fields, got {len(row)}"
                    )
                values = np.empty(n_attrs)
                for j, tok in enumerate(row[:-1]):
                    if tok in MISSING_TOKENS:
                        values[j] = math.nan
                    elif maps[j] is None:
                        v = _try_float(tok)
                        if v is None:
                            raise StreamFormatError(
                                f"{self.path}:{line_no}: non-numeric value {tok!r}"
                            )
                        values[j] = v
                    else:
                        if tok not in maps[j]:
                            raise StreamFormatError(
                                f"{self.path}:{line_no}: undeclared nominal value {tok!r}"
                            )
                        values[j] = maps[j][tok]
                cls = row[-1]
                if cls not in self._class_map:
                    raise StreamFormatError(f"{self.path}:{line_no}: undeclared class {cls!r}")
                yield Instance(values, self._class_map[cls])


class Normalizer:
    """Single-pass min-max scaler over the numeric attributes of a schema.

    For each instance the running min/max absorb the raw value first, then
    the value is emitted as (v - min) / (max - min); a degenerate range
    (max == min) emits 0.5. Nominal attributes and missing values pass
    through untouched, so outputs stay in [0,1].
    """

    def __init__(self, schema: Schema):
        self.schema = schema
        self._numeric_idx = np.array(
            [i for i, a in enumerate(schema.attributes) if not a.is_nominal], dtype=np.intp
        )
        n = len(self._numeric_idx)
        self.mins = np.full(n, np.inf)
        self.maxs = np.full(n, -np.inf)
        self.count = 0

    def transform(self, values: np.ndarray) -> np.ndarray:
        idx = self._numeric_idx
        if idx.size == 0:
            return values
        v = values[idx]
        seen = ~np.isnan(v)
        np.minimum(self.mins, np.where(seen, v, np.inf), out=self.mins)
        np.maximum(self.maxs, np.where(seen, v, -np.inf), out=self.maxs)
        self.count += 1
        span = self.maxs - self.mins
        with np.errstate(invalid="ignore", divide="ignore"):
            scaled = (v - self.mins) / span
        scaled = np.where((span == 0) & seen, 0.5, scaled)
        out = values.copy()
        out[idx] = scaled
        return out

    def __call__(self, instance: Instance) -> Instance:
        return Instance(self.transform(instance.values), instance.label, instance.weight)


class NormalizedStream(InstanceStream):
    """Wraps a stream with a fresh :class:`Normalizer` per pass."""

    def __init__(self, stream: InstanceStream):
        self.stream = stream
        self.schema = stream.schema
        self.n_instances = stream.n_instances

    def __iter__(self):
        norm = Normalizer(self.schema)
        for inst in self.stream:
            yield norm(inst)


def open_stream(path, class_column: int = -1, header: str = "auto") -> InstanceStream:
    """Open a dataset file as a stream, dispatching on the file extension."""
    p = str(path)
    if p.lower().endswith(".arff"):
        return ArffStream(p)
    return CsvStream(p, class_column=class_column, header=header)


def arff_to_csv(arff_path, csv_path) -> int:
    """Rewrite an ARFF file as CSV (header row + one row per record).

    Returns the number of data rows written.
    """
    stream = ArffStream(arff_path)
    schema = stream.schema
    n = 0
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([a.name for a in schema.attributes] + ["class"])
        for inst in stream:
            row = []
            for a, v in zip(schema.attributes, inst.values):
                if math.isnan(v):
                    row.append("?")
                elif a.is_nominal:
                    row.append(a.values[int(v)])
                else:
                    row.append(repr(float(v)))
            row.append(schema.class_values[inst.label])
            writer.writerow(row)
            n += 1
    return n
