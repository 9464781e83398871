"""JSON instance and result documents.

Goods are 1-indexed in documents; a padding good (one that exists only
because there were fewer goods than agents) is written as ``null``.
"""

from __future__ import annotations

import json
from typing import Any

from .core import Instance, InvalidInstanceError, SolveResult, evaluate, format_rational, pad_goods, to_rational


def instance_from_json(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise InvalidInstanceError("instance document must be a JSON object")
    missing = [k for k in ("agents", "goods", "rounds", "valuations") if k not in doc]
    if missing:
        raise InvalidInstanceError(f"instance document lacks {', '.join(missing)}")
    n, m, T = doc["agents"], doc["goods"], doc["rounds"]
    for key, v in (("agents", n), ("goods", m), ("rounds", T)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise InvalidInstanceError(f"{key} must be a positive integer")
    rows = doc["valuations"]
    if not isinstance(rows, list) or len(rows) != n:
        raise InvalidInstanceError(f"valuations must list {n} rows")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != m:
            raise InvalidInstanceError(f"valuation row {i + 1} must have {m} entries")
    return Instance.from_rows([[to_rational(v) for v in row] for row in rows], T)


def load_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInstanceError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInstanceError(f"{path} is not valid JSON: {exc}") from exc
    return instance_from_json(doc)


def instance_to_json(inst: Instance) -> dict:
    return {
        "agents": inst.n,
        "goods": inst.m,
        "rounds": inst.T,
        "valuations": [[format_rational(v) for v in row] for row in inst.values],
    }


def _good_label(inst: Instance, j: int) -> int | None:
    return j + 1 if j < inst.m else None


def result_to_json(inst: Instance, res: SolveResult) -> dict:
    """The result document; the sequence is re-evaluated here, not trusted."""
    traj = evaluate(pad_goods(inst), res.sequence)
    return {
        "algorithm": res.algorithm,
        "sequence": [[_good_label(inst, j) for j in mt] for mt in res.sequence],
        "perRound": [
            {
                "t": t + 1,
                "values": [format_rational(v) for v in traj.values[t]],
                "bottleneck": format_rational(traj.bottlenecks[t]),
            }
            for t in range(traj.rounds)
        ],
        "guarantee": {"type": res.guarantee, "additiveSlack": format_rational(res.slack)},
    }


def sequence_from_json(inst: Instance, doc: dict) -> list[tuple[int, ...]]:
    """Inverse of the ``sequence`` field; padding goods are assigned in order."""
    seq = []
    for row in doc["sequence"]:
        spare = iter(range(inst.m, max(inst.m, inst.n)))
        seq.append(tuple(j - 1 if j is not None else next(spare) for j in row))
    return seq


def dumps(doc: Any) -> str:
    """Canonical text form: fixed key order, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=True) + "\n"

