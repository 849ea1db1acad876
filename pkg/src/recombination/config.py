"""Model configuration files (JSON).

Example::

    {
      "sites": 3,
      "alphabetSizes": [2, 2, 2],
      "weights": {"{1,2,3}": "1/5", "{1}{2,3}": "1/2", "{1,2}{3}": "3/10"},
      "measure": {"random": {"seed": 7}},
      "mode": "exact",
      "caps": {"states": 50000, "table": 1048576}
    }

``sites`` is a count or a list of labels; labels may replace site numbers
inside block-form partition strings.  ``weights`` is an object or a list of
``[partition, weight]`` pairs.  Weights and table entries are ``"p/q"``
strings or decimals.  Decimals are read exactly, so ``0.2`` means ``1/5``.
``measure`` takes one of three forms.  ``{"table": [...]}`` is a dense
row-major table (nested or flat).  ``{"random": {"seed": s}}`` draws a
seeded random table.  ``{"marginals": {"partition": "...", "blocks": [...]}}``
gives a product of per-atom tables.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Optional

from . import arith
from .chain import PartitionWeights, WeightsError
from .measures import (
    DEFAULT_TABLE_CAP,
    FactorizedMeasure,
    MeasureError,
    ProductMeasure,
    tensor,
)
from .partitions import DEFAULT_STATE_CAP, PartitionError, ResourceLimitError, parse_partition

_KNOWN_KEYS = {"sites", "alphabetSizes", "weights", "measure", "mode", "caps"}


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.message = message
        self.line = line
        self.column = column


@dataclass
class ModelConfig:
    n: int
    site_labels: Optional[list]
    alphabet_sizes: tuple
    weights: PartitionWeights
    measure: Optional[ProductMeasure]
    mode: str
    state_cap: int = DEFAULT_STATE_CAP
    table_cap: int = DEFAULT_TABLE_CAP
    warnings: list = field(default_factory=list)


def _locate(raw: str, needle) -> tuple:
    """Line and column of the first occurrence of ``needle`` as JSON text."""
    pos = raw.find(json.dumps(needle))
    if pos < 0:
        pos = raw.find(str(needle))
    if pos < 0:
        return None, None
    line = raw.count("\n", 0, pos) + 1
    column = pos - (raw.rfind("\n", 0, pos) + 1) + 1
    return line, column


def _translate_labels(text: str, labels: Optional[list]) -> str:
    if not labels or not text.strip().startswith("{"):
        return text
    lookup = {str(lab): str(i + 1) for i, lab in enumerate(labels)}

    def sub(m):
        tok = m.group(0).strip()
        return lookup.get(tok, tok)

    return re.sub(r"[^{},\s]+", sub, text)


def _number(value, mode: str):
    if isinstance(value, Decimal):
        value = str(value)
    return arith.convert(value, mode)


def parse_config(raw: str, mode: Optional[str] = None, state_cap: Optional[int] = None,
                 table_cap: Optional[int] = None) -> ModelConfig:
    """Parse config text; the keyword arguments override the file's settings."""
    try:
        data = json.loads(raw, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object", 1, 1)
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown key {key!r}", *_locate(raw, key))

    mode = mode or data.get("mode", arith.EXACT)
    if mode not in arith.MODES:
        raise ConfigError(f"mode must be one of {arith.MODES}, got {mode!r}", *_locate(raw, mode))
    caps = data.get("caps", {})
    state_cap = state_cap or int(caps.get("states", DEFAULT_STATE_CAP))
    table_cap = table_cap or int(caps.get("table", DEFAULT_TABLE_CAP))

    sites = data.get("sites")
    if isinstance(sites, list):
        labels = [str(s) for s in sites]
        if len(set(labels)) != len(labels):
            raise ConfigError("duplicate site labels", *_locate(raw, "sites"))
        n = len(labels)
    elif isinstance(sites, int) and not isinstance(sites, bool) and sites >= 1:
        labels, n = None, sites
    else:
        raise ConfigError("'sites' must be a positive integer or a list of labels", *_locate(raw, "sites"))

    sizes = data.get("alphabetSizes", [2] * n)
    if (not isinstance(sizes, list) or len(sizes) != n
            or any(not isinstance(k, int) or isinstance(k, bool) or k < 1 for k in sizes)):
        raise ConfigError(f"'alphabetSizes' must list {n} integers >= 1", *_locate(raw, "alphabetSizes"))

    raw_weights = data.get("weights")
    if isinstance(raw_weights, dict):
        pairs = list(raw_weights.items())
    elif isinstance(raw_weights, list) and all(isinstance(p, list) and len(p) == 2 for p in raw_weights):
        pairs = [tuple(p) for p in raw_weights]
    else:
        raise ConfigError("'weights' must be an object or a list of [partition, weight] pairs",
                          *_locate(raw, "weights"))
    parsed = []
    for key, w in pairs:
        if not isinstance(key, str):
            raise ConfigError(f"partition must be a string, got {key!r}", *_locate(raw, "weights"))
        try:
            part = parse_partition(_translate_labels(key, labels), n)
            parsed.append((part, _number(w, mode)))
        except (PartitionError, ValueError) as exc:
            raise ConfigError(f"bad weight entry {key!r}: {exc}", *_locate(raw, key)) from None

    notes = []
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            weights = PartitionWeights(parsed, mode=mode, n=n)
        notes.extend(str(w.message) for w in caught)
    except WeightsError as exc:
        raise ConfigError(str(exc), *_locate(raw, "weights")) from None

    measure = None
    if data.get("measure") is not None:
        measure = _parse_measure(raw, data["measure"], n, labels, tuple(sizes), mode, table_cap)

    return ModelConfig(n, labels, tuple(sizes), weights, measure, mode, state_cap, table_cap, notes)


def _parse_measure(raw, spec, n, labels, sizes, mode, table_cap) -> ProductMeasure:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("'measure' must have exactly one of 'table', 'random', 'marginals'",
                          *_locate(raw, "measure"))
    kind, body = next(iter(spec.items()))
    try:
        if kind == "table":
            values = _convert_nested(body, mode)
            return ProductMeasure.from_table(values, sizes, mode=mode, table_cap=table_cap)
        if kind == "random":
            seed = body.get("seed") if isinstance(body, dict) else None
            if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
                raise ConfigError("'random' needs a non-negative integer 'seed'", *_locate(raw, "random"))
            return ProductMeasure.random(sizes, seed, mode=mode, table_cap=table_cap)
        if kind == "marginals":
            part = parse_partition(_translate_labels(body["partition"], labels), n)
            blocks = []
            for atom, tab in zip(part.atoms, body["blocks"]):
                block_sizes = tuple(sizes[s - 1] for s in atom)
                values = arith.array(_convert_nested(tab, mode), mode)
                blocks.append(values.reshape(block_sizes))
            return tensor(FactorizedMeasure(part, tuple(blocks)))
    except ConfigError:
        raise
    except ResourceLimitError:
        raise
    except (MeasureError, PartitionError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad measure: {exc}", *_locate(raw, kind)) from None
    raise ConfigError(f"unknown measure kind {kind!r}", *_locate(raw, kind))


def _convert_nested(values, mode):
    if isinstance(values, list):
        return [_convert_nested(v, mode) for v in values]
    return _number(values, mode)


def load_config(path, **overrides) -> ModelConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"), **overrides)
