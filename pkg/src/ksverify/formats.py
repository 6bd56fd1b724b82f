"""Text documents for rays and bases: aligned tables and JSON-lines records."""
from __future__ import annotations

import json
from typing import Iterable

from .geometry import Basis, Ray, RaySystem, format_vec, vec

FORMATS = ("table", "records")


def ray_to_record(r: Ray) -> dict:
    rec = {"id": r.id, "components": [c.to_list() for c in r.components]}
    if r.completes is None:
        rec["cube"] = r.cube
        rec["axis"] = r.axis
    else:
        rec["completes"] = list(r.completes)
    return rec


def ray_from_record(rec: dict) -> Ray:
    completes = rec.get("completes")
    return Ray(
        int(rec["id"]),
        vec(*rec["components"]),
        cube=rec.get("cube"),
        axis=rec.get("axis"),
        completes=tuple(completes) if completes is not None else None,
    )


def basis_to_record(b: Basis) -> dict:
    return {"rank": b.rank, "ids": list(b.ids), "complete": b.complete}


def basis_from_record(rec: dict) -> Basis:
    i, j, k = rec["ids"]
    return Basis(int(i), int(j), int(k), int(rec["rank"]))


def _jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)


def _parse_jsonl(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def rays_records(rays: Iterable[Ray]) -> str:
    return _jsonl(ray_to_record(r) for r in rays)


def parse_rays_records(text: str) -> list[Ray]:
    return [ray_from_record(rec) for rec in _parse_jsonl(text)]


def triples_records(bases: Iterable[Basis]) -> str:
    return _jsonl(basis_to_record(b) for b in bases)


def parse_triples_records(text: str) -> list[Basis]:
    return [basis_from_record(rec) for rec in _parse_jsonl(text)]


def rays_table(rays: Iterable[Ray]) -> str:
    lines = [f"{'id':>3}  {'direction':<18} {'cube':<4} source"]
    for r in rays:
        if r.completes is None:
            source = f"{r.cube:<4} {r.axis}"
        else:
            source = f"{'-':<4} completes {r.completes[0]},{r.completes[1]}"
        lines.append(f"{r.id:>3}  {format_vec(r.components):<18} {source}")
    return "\n".join(lines) + "\n"


def triples_table(bases: Iterable[Basis], rs: RaySystem) -> str:
    lines = [f"{'key':>3}  {'ids':<12} directions"]
    for b in bases:
        ids = ",".join(str(i) for i in b.ids)
        dirs = " ".join(format_vec(rs[i].components) for i in b.ids)
        mark = "" if b.complete else "  *"
        lines.append(f"{b.rank:>3}  {ids:<12} {dirs}{mark}")
    lines.append("* third direction completes an orthogonal pair of axes")
    return "\n".join(lines) + "\n"
