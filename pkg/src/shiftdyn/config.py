"""JSON config parsing for the command-line tools.

Configs are plain JSON objects whose nodes describe weights, operators,
subspaces, vectors, and iterate schedules.  Every parse failure raises
ConfigError carrying the dotted path of the offending node so the CLI can
anchor its diagnostic to a line in the file.
"""

from __future__ import annotations

import json
import re
from typing import Optional, Sequence

from .criteria import arithmetic_iterates
from .operators import (
    BackwardShift,
    ComposeOp,
    DirectSumOp,
    IdentityOp,
    PowerOp,
    ScaledOp,
    WeightedShift,
    rolewicz_operator,
)
from .spaces import (
    BILATERAL,
    UNILATERAL,
    CoordinateSubspace,
    DirectSumSubspace,
    DirectSumVector,
    SparseVector,
)
from .weights import BlockWeights, ConstantWeights, PiecewiseWeights, TableWeights


class ConfigError(ValueError):
    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.message = message
        self.path = path

    def __str__(self) -> str:
        if self.path:
            return f"at {self.path}: {self.message}"
        return self.message


def load_config(file_path) -> tuple[dict, str]:
    """Parsed JSON object plus the raw text (kept for line anchoring)."""
    with open(file_path, "r", encoding="utf-8") as fh:
        text = fh.read()
    data = json.loads(text)  # JSONDecodeError carries line/column
    if not isinstance(data, dict):
        raise ConfigError("top level must be a JSON object")
    return data, text


def locate_path_line(text: str, dotted: str) -> Optional[int]:
    """Best-effort line number of a dotted config path inside raw JSON text.

    Walks the path components in order and finds each quoted key after the
    previous one; list indices are skipped.  Good enough to anchor an error
    message, not a parser.
    """
    pos = 0
    found = False
    for comp in re.split(r"[.\[\]]", dotted):
        if not comp or comp.isdigit():
            continue
        nxt = text.find(f'"{comp}"', pos)
        if nxt < 0:
            break
        pos = nxt
        found = True
    if not found:
        return None
    return text.count("\n", 0, pos) + 1


# ---------------------------------------------------------------------------
# Node helpers
# ---------------------------------------------------------------------------

def _require_dict(node, path: str) -> dict:
    if not isinstance(node, dict):
        raise ConfigError(f"expected an object, got {type(node).__name__}", path)
    return node


def _get(node: dict, key: str, path: str, required: bool = True, default=None):
    if key in node:
        return node[key]
    if required:
        raise ConfigError(f"missing required key {key!r}", path)
    return default


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", path)
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", path)
    return value


def parse_space(value, path: str) -> str:
    if value == "bilateral":
        return BILATERAL
    if value == "unilateral":
        return UNILATERAL
    raise ConfigError(
        f"space must be 'bilateral' or 'unilateral', got {value!r}", path
    )


# ---------------------------------------------------------------------------
# Weights / operators / subspaces / vectors / iterates
# ---------------------------------------------------------------------------

def parse_weights(node, path: str):
    node = _require_dict(node, path)
    kind = _get(node, "kind", path)
    if kind == "constant":
        return ConstantWeights(_number(_get(node, "value", path), f"{path}.value"))
    if kind == "piecewise":
        return PiecewiseWeights(
            _number(_get(node, "nonnegative", path), f"{path}.nonnegative"),
            _number(_get(node, "negative", path), f"{path}.negative"),
        )
    if kind == "blocks":
        values = _get(node, "values", path)
        if not isinstance(values, list) or not values:
            raise ConfigError("values must be a nonempty list", f"{path}.values")
        return BlockWeights(
            _integer(_get(node, "base", path), f"{path}.base"),
            tuple(_number(v, f"{path}.values[{i}]") for i, v in enumerate(values)),
            _integer(_get(node, "phase", path, required=False, default=0), f"{path}.phase"),
        )
    if kind == "table":
        window = _get(node, "window", path)
        if not isinstance(window, list) or not window:
            raise ConfigError("window must be a nonempty list", f"{path}.window")
        return TableWeights(
            tuple(_number(v, f"{path}.window[{i}]") for i, v in enumerate(window)),
            _integer(_get(node, "start", path, required=False, default=0), f"{path}.start"),
            _number(_get(node, "default", path, required=False, default=1.0), f"{path}.default"),
        )
    raise ConfigError(f"unknown weights kind {kind!r}", f"{path}.kind")


def parse_operator(node, path: str):
    node = _require_dict(node, path)
    kind = _get(node, "kind", path)
    if kind == "weighted_shift":
        return WeightedShift(
            parse_weights(_get(node, "weights", path), f"{path}.weights"),
            parse_space(_get(node, "space", path), f"{path}.space"),
        )
    if kind == "backward":
        return BackwardShift(parse_space(_get(node, "space", path), f"{path}.space"))
    if kind == "identity":
        return IdentityOp(parse_space(_get(node, "space", path), f"{path}.space"))
    if kind == "rolewicz":
        return rolewicz_operator(_number(_get(node, "scale", path), f"{path}.scale"))
    if kind == "scaled":
        return ScaledOp(
            _number(_get(node, "scalar", path), f"{path}.scalar"),
            parse_operator(_get(node, "inner", path), f"{path}.inner"),
        )
    if kind == "power":
        return PowerOp(
            parse_operator(_get(node, "inner", path), f"{path}.inner"),
            _integer(_get(node, "exponent", path), f"{path}.exponent"),
        )
    if kind == "compose":
        return ComposeOp(
            parse_operator(_get(node, "outer", path), f"{path}.outer"),
            parse_operator(_get(node, "inner", path), f"{path}.inner"),
        )
    if kind == "direct_sum":
        return DirectSumOp(
            parse_operator(_get(node, "left", path), f"{path}.left"),
            parse_operator(_get(node, "right", path), f"{path}.right"),
        )
    raise ConfigError(f"unknown operator kind {kind!r}", f"{path}.kind")


def parse_subspace(node, path: str):
    node = _require_dict(node, path)
    kind = _get(node, "kind", path)
    if kind == "direct_sum":
        return DirectSumSubspace(
            parse_subspace(_get(node, "left", path), f"{path}.left"),
            parse_subspace(_get(node, "right", path), f"{path}.right"),
        )
    space = parse_space(_get(node, "space", path), f"{path}.space")
    if kind == "full":
        return CoordinateSubspace.full(space)
    if kind == "residues":
        residues = _get(node, "residues", path, required=False, default="full")
        if residues != "full":
            if not isinstance(residues, list):
                raise ConfigError("residues must be a list or 'full'", f"{path}.residues")
            residues = {
                _integer(r, f"{path}.residues[{i}]") for i, r in enumerate(residues)
            }
        return CoordinateSubspace.residues(
            space, _integer(_get(node, "modulus", path), f"{path}.modulus"), residues
        )
    if kind == "half_line":
        return CoordinateSubspace.half_line(
            space, _integer(_get(node, "start", path), f"{path}.start")
        )
    if kind == "explicit":
        indices = _get(node, "indices", path)
        if not isinstance(indices, list):
            raise ConfigError("indices must be a list", f"{path}.indices")
        return CoordinateSubspace.explicit(
            space, [_integer(i, f"{path}.indices[{k}]") for k, i in enumerate(indices)]
        )
    raise ConfigError(f"unknown subspace kind {kind!r}", f"{path}.kind")


def parse_vector(node, path: str):
    node = _require_dict(node, path)
    if "left" in node or "right" in node:
        return DirectSumVector(
            parse_vector(_get(node, "left", path), f"{path}.left"),
            parse_vector(_get(node, "right", path), f"{path}.right"),
        )
    space = parse_space(_get(node, "space", path), f"{path}.space")
    if "basis" in node:
        basis = _require_dict(node["basis"], f"{path}.basis")
        return SparseVector.basis(
            space,
            _integer(_get(basis, "index", f"{path}.basis"), f"{path}.basis.index"),
            _number(_get(basis, "coeff", f"{path}.basis", required=False, default=1.0), f"{path}.basis.coeff"),
        )
    entries = _get(node, "entries", path)
    entries = _require_dict(entries, f"{path}.entries")
    parsed = {}
    for key, value in entries.items():
        try:
            index = int(key)
        except ValueError:
            raise ConfigError(f"entry key {key!r} is not an integer index", f"{path}.entries")
        parsed[index] = _number(value, f"{path}.entries.{key}")
    return SparseVector(space, parsed)


def parse_iterates(node, path: str) -> tuple[int, ...]:
    if isinstance(node, list):
        values = [_integer(n, f"{path}[{i}]") for i, n in enumerate(node)]
        if not values:
            raise ConfigError("iterate list must be nonempty", path)
        if any(n < 1 for n in values):
            raise ConfigError("iterates must be positive", path)
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError("iterates must be strictly increasing", path)
        return tuple(values)
    node = _require_dict(node, path)
    step = _integer(_get(node, "step", path), f"{path}.step")
    count = _integer(_get(node, "count", path), f"{path}.count")
    start = _get(node, "start", path, required=False)
    if start is not None:
        start = _integer(start, f"{path}.start")
    try:
        return arithmetic_iterates(step, count, start)
    except ValueError as exc:
        raise ConfigError(str(exc), path)


def parse_vector_list(node, path: str) -> list:
    if not isinstance(node, list) or not node:
        raise ConfigError("expected a nonempty list of vectors", path)
    return [parse_vector(v, f"{path}[{i}]") for i, v in enumerate(node)]
