"""Schemas, instances, dense encoding, and the stream/classifier contracts.

Everything downstream (generators, filters, learners, ensembles, the
evaluator) speaks in terms of these types: a ``Schema`` describing the
attribute layout, ``Instance`` values flowing test-then-train, and raw
per-class vote vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AttributeSpec",
    "Schema",
    "Instance",
    "numeric",
    "nominal",
    "make_schema",
    "encode_dense",
    "vote_argmax",
    "Classifier",
    "InstanceStream",
]


@dataclass(frozen=True)
class AttributeSpec:
    """One attribute declaration: numeric, or nominal with an ordered domain."""

    name: str
    values: tuple[str, ...] | None = None  # None -> numeric

    @property
    def is_nominal(self) -> bool:
        return self.values is not None

    def __post_init__(self):
        if self.values is not None:
            if len(self.values) == 0:
                raise ValueError(f"nominal attribute {self.name!r} has an empty domain")
            if len(set(self.values)) != len(self.values):
                raise ValueError(f"nominal attribute {self.name!r} has duplicate domain values")


def numeric(name: str) -> AttributeSpec:
    return AttributeSpec(name)


def nominal(name: str, values) -> AttributeSpec:
    return AttributeSpec(name, tuple(str(v) for v in values))


@dataclass(frozen=True)
class Schema:
    """Validated, immutable attribute/class layout.

    Encoding geometry (one-hot offsets, total encoded width) is computed once
    here so per-instance encoding stays cheap.
    """

    attributes: tuple[AttributeSpec, ...]
    class_values: tuple[str, ...]
    _offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _encoded_width: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.attributes) < 1:
            raise ValueError("schema needs at least one attribute")
        if len(self.class_values) < 2:
            raise ValueError("schema needs at least two class values")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate attribute names: {dup}")
        if len(set(self.class_values)) != len(self.class_values):
            raise ValueError("duplicate class values")
        offsets = []
        w = 0
        for a in self.attributes:
            offsets.append(w)
            w += len(a.values) if a.is_nominal else 1
        object.__setattr__(self, "_offsets", tuple(offsets))
        object.__setattr__(self, "_encoded_width", w)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def n_classes(self) -> int:
        return len(self.class_values)

    @property
    def encoded_width(self) -> int:
        return self._encoded_width

    @property
    def all_numeric(self) -> bool:
        return self._encoded_width == len(self.attributes)

    def attribute_offset(self, i: int) -> int:
        """Start column of attribute ``i`` in the dense encoding."""
        return self._offsets[i]


def make_schema(attr_specs, class_values) -> Schema:
    """Validate and build a :class:`Schema` from attribute specs and class names."""
    return Schema(tuple(attr_specs), tuple(str(c) for c in class_values))


class Instance:
    """One labeled example: raw attribute values, class index, and a weight.

    Numeric attributes hold their real value, nominal attributes the index
    into their domain, and missing values are NaN.
    """

    __slots__ = ("values", "label", "weight")

    def __init__(self, values, label: int, weight: float = 1.0):
        self.values = np.asarray(values, dtype=np.float64)
        self.label = int(label)
        self.weight = float(weight)
        if self.weight < 0:
            raise ValueError("instance weight must be non-negative")

    def __repr__(self):
        return f"Instance({self.values!r}, label={self.label}, weight={self.weight})"


def validate_instance(schema: Schema, instance: Instance) -> None:
    if instance.values.shape != (schema.n_attributes,):
        raise ValueError(
            f"instance has {instance.values.shape[0]} values, schema expects {schema.n_attributes}"
        )
    if not 0 <= instance.label < schema.n_classes:
        raise ValueError(f"label {instance.label} outside 0..{schema.n_classes - 1}")


def encode_dense(schema: Schema, values) -> np.ndarray:
    """Encode raw attribute values into a fixed-width dense float vector.

    Numeric attributes are copied, nominal attributes expand one-hot.
    Missing (NaN) numerics encode to 0 and missing nominals to an all-zero
    block, so projections stay defined without imputation.
    """
    values = np.asarray(values, dtype=np.float64)
    if schema.all_numeric:
        out = values.copy()
        np.nan_to_num(out, copy=False, nan=0.0)
        return out
    out = np.zeros(schema.encoded_width)
    for i, attr in enumerate(schema.attributes):
        v = values[i]
        off = schema.attribute_offset(i)
        if attr.values is None:
            out[off] = 0.0 if math.isnan(v) else v
        elif not math.isnan(v):
            idx = int(v)
            if not 0 <= idx < len(attr.values):
                raise ValueError(
                    f"nominal index {idx} outside domain of attribute {attr.name!r}"
                )
            out[off + idx] = 1.0
    return out


def vote_argmax(votes) -> int:
    """Index of the highest vote; ties break to the lowest index."""
    votes = np.asarray(votes)
    if votes.size == 0:
        raise ValueError("empty vote vector")
    return int(np.argmax(votes))


class Classifier:
    """Uniform incremental-learner contract: predict votes, then train.

    ``predict`` returns one non-negative score per class (raw votes, not
    necessarily normalized). ``train`` consumes the instance exactly once
    with the given weight. ``reset`` restores the freshly-constructed state
    (used by ensembles to replace under-performing members).
    """

    def __init__(self, schema: Schema):
        self.schema = schema

    def predict(self, instance: Instance) -> np.ndarray:
        raise NotImplementedError

    def train(self, instance: Instance, weight: float = 1.0) -> None:
        raise NotImplementedError

    def reset(self) -> None:
        raise NotImplementedError


class InstanceStream:
    """Iterable of :class:`Instance` with a fixed schema.

    ``n_instances`` is the known stream length, or None when open-ended
    (e.g. synthetic generators).
    """

    schema: Schema
    n_instances: int | None = None

    def __iter__(self):
        raise NotImplementedError
