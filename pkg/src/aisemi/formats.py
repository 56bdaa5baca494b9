"""JSON readers and writers for semirings, hypergraphs, partition systems and groupoids."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .constructions import PartialGroupoid, partition_system
from .hypergraphs import Hypergraph, PartitionSystem
from .semiring import FiniteSemiring, SemiringError, validate

PathLike = Union[str, Path]


class FormatError(SemiringError):
    pass


def _load(src) -> Any:
    if isinstance(src, (dict, list)):
        return src
    try:
        with open(src, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{src}: invalid JSON ({exc})") from None


def _need(obj, *keys):
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise FormatError(f"missing field(s): {', '.join(missing)}")


# semirings ------------------------------------------------------------------


def semiring_from_json(src) -> FiniteSemiring:
    obj = _load(src)
    _need(obj, "elements", "add", "mul")
    return validate(obj["elements"], obj["add"], obj["mul"], obj.get("top"))


def semiring_to_json(S: FiniteSemiring) -> dict:
    out = {"elements": list(S.elements), "add": S.add_table_names(), "mul": S.mul_table_names()}
    if S.top is not None:
        out["top"] = S.elements[S.top]
    return out


# hypergraphs ----------------------------------------------------------------


def hypergraph_from_json(src) -> Hypergraph:
    obj = _load(src)
    _need(obj, "vertices", "edges")
    return Hypergraph.from_names(obj["vertices"], obj["edges"])


def hypergraph_to_json(H: Hypergraph) -> dict:
    return {"vertices": list(H.vertices), "edges": H.named_edges()}


# partition systems ----------------------------------------------------------


def system_from_json(src) -> PartitionSystem:
    obj = _load(src)
    _need(obj, "ground", "blocks")
    return partition_system(obj["ground"], obj["blocks"])


def system_to_json(F: PartitionSystem) -> dict:
    return {"ground": list(F.ground), "blocks": F.named_blocks()}


# partial groupoids ----------------------------------------------------------
# {"elements": [...], "table": [[name or null, ...], ...]}


def groupoid_from_json(src) -> PartialGroupoid:
    obj = _load(src)
    _need(obj, "elements", "table")
    elems = obj["elements"]
    table = obj["table"]
    if len(table) != len(elems) or any(len(row) != len(elems) for row in table):
        raise FormatError("groupoid table must be square over the elements")
    known = set(elems)
    for row in table:
        for v in row:
            if v is not None and v not in known:
                raise FormatError(f"unknown element {v!r} in groupoid table")
    return PartialGroupoid.from_names(elems, table)


def groupoid_to_json(P: PartialGroupoid) -> dict:
    return {
        "elements": list(P.elements),
        "table": [[None if v is None else P.elements[v] for v in row] for row in P.table],
    }


def dump(obj, path: PathLike | None = None) -> str:
    text = json.dumps(obj, ensure_ascii=False, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
